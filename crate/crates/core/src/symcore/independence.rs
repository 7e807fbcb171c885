//! Linear independence of polynomial families over `F(a)`.
//!
//! Exact mode works over `Z[a]` with fraction-free elimination, so its
//! verdicts are over `Q(a)` (characteristic 0). Randomized mode substitutes
//! random field elements for the `a_j` and compares numeric ranks; a full
//! rank evaluation certifies independence, while a dependent verdict is only
//! probable.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::family::PolyFamily;
use super::poly::FormalPoly;
use super::{Result, SymError};
use crate::gfield::{FieldSpec, Matrix, MAX_PRIME};
use crate::par::{self, Execution};

pub const EXACT_MAX_N: usize = 4;
pub const EXACT_MAX_K: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndependenceMode {
    Exact,
    #[default]
    Randomized,
}

/// `Σ w_i p_i = 0` with `w_i ∈ Z[a]` not all zero, one per family member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DependenceWitness {
    pub coefficients: Vec<FormalPoly>,
}

impl DependenceWitness {
    /// Checks the relation by exact expansion.
    pub fn verify(&self, fam: &PolyFamily) -> bool {
        self.coefficients.len() == fam.len()
            && self.coefficients.iter().any(|w| !w.is_zero())
            && self
                .coefficients
                .iter()
                .zip(fam.polys())
                .fold(FormalPoly::zero(fam.n()), |acc, (w, p)| acc.add(&w.mul(p)))
                .is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "snake_case")]
pub enum Independence {
    Independent,
    Dependent(Option<DependenceWitness>),
}

impl Independence {
    pub fn is_independent(&self) -> bool {
        matches!(self, Independence::Independent)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub mode: IndependenceMode,
    pub verdict: Independence,
    pub size: usize,
    /// Exact rank, or the largest rank seen over the random evaluations.
    pub rank: usize,
    /// 0 for exact mode.
    pub characteristic: u32,
    pub trials: usize,
    /// For a randomized dependent verdict: the chance that an independent
    /// family was misjudged, `(D / q)^trials`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomizedOptions {
    pub field: FieldSpec,
    pub trials: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for RandomizedOptions {
    fn default() -> Self {
        Self {
            field: FieldSpec::prime(MAX_PRIME).expect("2^31 - 1 is prime"),
            trials: 3,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

pub fn independent(fam: &PolyFamily, mode: IndependenceMode, opts: &RandomizedOptions) -> Result<IndependenceReport> {
    match mode {
        IndependenceMode::Exact => exact_independent(fam),
        IndependenceMode::Randomized => Ok(randomized_independent(fam, opts)),
    }
}

fn coefficient_rows(fam: &PolyFamily) -> Vec<Vec<FormalPoly>> {
    let cols = fam.k().max(1);
    fam.polys().map(|p| (0..cols as u32).map(|c| p.coeff_x(c)).collect()).collect()
}

/// Fraction-free elimination. Returns the rank, the pivot columns, and the
/// determinant sign-and-value when the input is square and nonsingular.
fn bareiss(mut a: Vec<Vec<FormalPoly>>, nvars: usize) -> (usize, Vec<usize>, FormalPoly) {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut prev = FormalPoly::one(nvars);
    let mut rank = 0;
    let mut pivots = Vec::new();
    let mut negate = false;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            negate = !negate;
        }
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let num = a[i][j].mul(&a[rank][col]).sub(&a[i][col].mul(&a[rank][j]));
                a[i][j] = num.div_exact(&prev).expect("fraction-free step divides exactly");
            }
            a[i][col] = FormalPoly::zero(nvars);
        }
        prev = a[rank][col].clone();
        pivots.push(col);
        rank += 1;
    }
    let det = if rank == rows && rows == cols {
        if negate {
            prev.neg()
        } else {
            prev
        }
    } else {
        FormalPoly::zero(nvars)
    };
    (rank, pivots, det)
}

fn det(m: Vec<Vec<FormalPoly>>, nvars: usize) -> FormalPoly {
    if m.is_empty() {
        return FormalPoly::one(nvars);
    }
    bareiss(m, nvars).2
}

fn check_caps(fam: &PolyFamily) -> Result<()> {
    if fam.n() > EXACT_MAX_N || fam.k() > EXACT_MAX_K {
        return Err(SymError::ExactModeCapExceeded { n: fam.n(), k: fam.k(), max_n: EXACT_MAX_N, max_k: EXACT_MAX_K });
    }
    Ok(())
}

/// Exact rank over `Q(a)`; on dependence, a witness for the first member
/// that lies in the span of the ones before it.
pub fn exact_independent(fam: &PolyFamily) -> Result<IndependenceReport> {
    check_caps(fam)?;
    let nvars = fam.n();
    let rows = coefficient_rows(fam);
    let d = rows.len();
    let (rank, _, _) = bareiss(rows.clone(), nvars);
    let verdict = if rank == d {
        Independence::Independent
    } else {
        Independence::Dependent(Some(first_dependency(&rows, nvars)))
    };
    Ok(IndependenceReport {
        mode: IndependenceMode::Exact,
        verdict,
        size: d,
        rank,
        characteristic: 0,
        trials: 0,
        error_bound: None,
    })
}

fn first_dependency(rows: &[Vec<FormalPoly>], nvars: usize) -> DependenceWitness {
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let cand: Vec<Vec<FormalPoly>> = basis.iter().chain([&i]).map(|&b| rows[b].clone()).collect();
        let (rank, _, _) = bareiss(cand, nvars);
        if rank == basis.len() + 1 {
            basis.push(i);
            continue;
        }
        // Cramer on the pivot columns of the basis rows.
        let (_, pivots, _) = bareiss(basis.iter().map(|&b| rows[b].clone()).collect(), nvars);
        let restrict = |r: &[FormalPoly]| pivots.iter().map(|&c| r[c].clone()).collect::<Vec<_>>();
        let m: Vec<Vec<FormalPoly>> = basis.iter().map(|&b| restrict(&rows[b])).collect();
        let target = restrict(&rows[i]);
        let mut coeffs = vec![FormalPoly::zero(nvars); rows.len()];
        let det_m = det(m.clone(), nvars);
        for (slot, &b) in basis.iter().enumerate() {
            let mut mj = m.clone();
            mj[slot] = target.clone();
            coeffs[b] = det(mj, nvars).neg();
        }
        coeffs[i] = det_m.clone();
        return DependenceWitness { coefficients: normalize(coeffs, &det_m) };
    }
    unreachable!("rank deficiency implies some dependent member")
}

/// Divides out `det_m` when possible, then the integer content, and makes
/// the leading coefficient of the first nonzero entry positive.
fn normalize(mut coeffs: Vec<FormalPoly>, det_m: &FormalPoly) -> Vec<FormalPoly> {
    if !det_m.is_zero() {
        if let Some(q) = coeffs.iter().map(|c| c.div_exact(det_m)).collect::<Option<Vec<_>>>() {
            coeffs = q;
        }
    }
    let content = coeffs.iter().fold(BigInt::zero(), |g, c| num_integer::Integer::gcd(&g, &c.content()));
    if !content.is_zero() && !content.is_one() {
        coeffs = coeffs.iter().map(|c| c.div_scalar(&content)).collect();
    }
    if coeffs.iter().find(|c| !c.is_zero()).is_some_and(|c| c.leading_is_negative()) {
        coeffs = coeffs.iter().map(|c| c.neg()).collect();
    }
    coeffs
}

/// Random point for trial `t`: ChaCha8 seeded with `seed`, stream `t`.
pub fn trial_point(field: &FieldSpec, nvars: usize, seed: u64, t: usize) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t as u64);
    (0..nvars).map(|_| field.random(&mut rng)).collect()
}

fn eval_matrix<'a>(polys: impl Iterator<Item = &'a FormalPoly>, cols: usize, field: &FieldSpec, point: &[u32]) -> Matrix {
    let rows: Vec<Vec<u32>> = polys
        .map(|p| {
            let mut c = p.eval_a(field, point);
            c.resize(cols.max(c.len()), 0);
            c
        })
        .collect();
    if rows.is_empty() {
        return Matrix::zeros(0, cols);
    }
    Matrix::from_rows(rows).expect("rows have equal length")
}

pub fn randomized_independent(fam: &PolyFamily, opts: &RandomizedOptions) -> IndependenceReport {
    let d = fam.len();
    let cols = fam.k();
    let ranks = par::map_collect(opts.exec, opts.trials, |t| {
        let point = trial_point(&opts.field, fam.n(), opts.seed, t);
        opts.field.rank(&eval_matrix(fam.polys(), cols, &opts.field, &point))
    });
    let rank = ranks.into_iter().max().unwrap_or(0);
    let independent = rank == d;
    let error_bound = (!independent).then(|| {
        if d > cols {
            0.0
        } else {
            let degree: u32 = fam.polys().map(|p| p.degree_a()).sum();
            (degree as f64 / opts.field.order() as f64).min(1.0).powi(opts.trials as i32)
        }
    });
    IndependenceReport {
        mode: IndependenceMode::Randomized,
        verdict: if independent { Independence::Independent } else { Independence::Dependent(None) },
        size: d,
        rank,
        characteristic: opts.field.characteristic(),
        trials: opts.trials,
        error_bound,
    }
}

/// Ranks of two families and of their union under random evaluation. The
/// spans agree over `F(a)` iff all three ranks agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpanCheck {
    pub rank_left: usize,
    pub rank_right: usize,
    pub rank_union: usize,
}

impl SpanCheck {
    pub fn equal(&self) -> bool {
        self.rank_left == self.rank_union && self.rank_right == self.rank_union
    }
}

pub fn span_check(left: &PolyFamily, right: &PolyFamily, opts: &RandomizedOptions) -> Result<SpanCheck> {
    let union = left.union(right)?;
    let cols = left.k();
    let per_trial = par::map_collect(opts.exec, opts.trials, |t| {
        let point = trial_point(&opts.field, left.n(), opts.seed, t);
        let rank = |f: &PolyFamily| opts.field.rank(&eval_matrix(f.polys(), cols, &opts.field, &point));
        (rank(left), rank(right), rank(&union))
    });
    let max = |f: fn(&(usize, usize, usize)) -> usize| per_trial.iter().map(f).max().unwrap_or(0);
    Ok(SpanCheck { rank_left: max(|r| r.0), rank_right: max(|r| r.1), rank_union: max(|r| r.2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::family::{gen_family, gen_p};
    use crate::symcore::tests::sys;
    use crate::symcore::{check_vstar, MultiplicityVector};

    fn family_of(n: usize, k: usize, polys: Vec<FormalPoly>) -> PolyFamily {
        let mut f = PolyFamily::new(n, k);
        for p in polys {
            f.push_extra(p).unwrap();
        }
        f
    }

    #[test]
    fn monomial_basis_is_independent() {
        let x = FormalPoly::x(2);
        let f = family_of(2, 3, vec![FormalPoly::one(2), x.clone(), x.pow(2)]);
        assert!(exact_independent(&f).unwrap().verdict.is_independent());
        let r = randomized_independent(&f, &RandomizedOptions::default());
        assert!(r.verdict.is_independent());
        assert_eq!((r.rank, r.error_bound), (3, None));
    }

    #[test]
    fn duplicate_gives_unit_witness() {
        let p = FormalPoly::linear_factor(2, 1);
        let f = family_of(2, 3, vec![p.clone(), p, FormalPoly::x(2).pow(2)]);
        let r = exact_independent(&f).unwrap();
        let Independence::Dependent(Some(w)) = &r.verdict else { panic!("{r:?}") };
        let expect = vec![FormalPoly::one(2), FormalPoly::constant(2, -1), FormalPoly::zero(2)];
        assert_eq!(w.coefficients, expect);
        assert!(w.verify(&f));
        assert_eq!(r.rank, 2);
        let rr = randomized_independent(&f, &RandomizedOptions::default());
        assert_eq!(rr.verdict, Independence::Dependent(None));
        assert!(rr.error_bound.unwrap() < 1e-20);
    }

    #[test]
    fn nontrivial_witness_verifies() {
        // x - a1, x - a2 and 1 are dependent: (x - a1) - (x - a2) = (a2 - a1)·1.
        let f = family_of(
            2,
            2,
            vec![FormalPoly::linear_factor(2, 1), FormalPoly::linear_factor(2, 2), FormalPoly::one(2)],
        );
        let r = exact_independent(&f).unwrap();
        let Independence::Dependent(Some(w)) = &r.verdict else { panic!() };
        assert!(w.verify(&f));
        assert_eq!(w.coefficients[0], FormalPoly::one(2));
        assert_eq!(w.coefficients[2], FormalPoly::a(2, 1).sub(&FormalPoly::a(2, 2)));
    }

    #[test]
    fn caps() {
        let f = gen_p(7, &MultiplicityVector::zeros(2)).unwrap();
        assert!(matches!(exact_independent(&f), Err(SymError::ExactModeCapExceeded { .. })));
        let f = gen_p(2, &MultiplicityVector::zeros(5)).unwrap();
        assert!(matches!(exact_independent(&f), Err(SymError::ExactModeCapExceeded { .. })));
        assert!(randomized_independent(&f, &RandomizedOptions::default()).verdict.is_independent());
    }

    #[test]
    fn vstar_examples_are_independent() {
        for s in [
            sys(3, 3, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]),
            sys(3, 4, &[&[1, 1, 1], &[0, 1, 2], &[1, 0, 2]]),
            sys(4, 5, &[&[1, 1, 0, 2], &[0, 1, 1, 2], &[1, 0, 1, 2]]),
            sys(2, 4, &[&[1, 2], &[0, 3]]),
        ] {
            assert!(check_vstar(&s).is_satisfied(), "{s:?}");
            let f = gen_family(&s).unwrap();
            assert!(exact_independent(&f).unwrap().verdict.is_independent(), "{s:?}");
            assert!(randomized_independent(&f, &RandomizedOptions::default()).verdict.is_independent());
        }
    }

    #[test]
    fn small_characteristic_can_collapse() {
        // a1 - a2 over GF(2) has few points; randomized mode over GF(2) may
        // see rank drops but never reports a rank above the exact one.
        let f = family_of(2, 2, vec![FormalPoly::linear_factor(2, 1), FormalPoly::linear_factor(2, 2)]);
        let opts = RandomizedOptions { field: "2".parse().unwrap(), trials: 8, ..Default::default() };
        let r = randomized_independent(&f, &opts);
        assert!(r.rank <= 2);
        assert_eq!(r.characteristic, 2);
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = trial_point(&RandomizedOptions::default().field, 4, 9, 2);
        assert_eq!(a, trial_point(&RandomizedOptions::default().field, 4, 9, 2));
        assert_ne!(a, trial_point(&RandomizedOptions::default().field, 4, 9, 1));
    }

    #[test]
    fn span_check_examples() {
        // span{x - a1, x^2 - a1 x} equals span{(x - a1)·1, (x - a1)·x}, trivially.
        let v = MultiplicityVector::new(vec![1, 0]);
        let left = gen_p(3, &v).unwrap();
        let right = family_of(2, 3, vec![FormalPoly::linear_factor(2, 1).mul(&FormalPoly::x(2).add(&FormalPoly::one(2))), FormalPoly::linear_factor(2, 1)]);
        let s = span_check(&left, &right, &RandomizedOptions::default()).unwrap();
        assert!(s.equal(), "{s:?}");
        let other = family_of(2, 3, vec![FormalPoly::one(2), FormalPoly::x(2)]);
        assert!(!span_check(&left, &other, &RandomizedOptions::default()).unwrap().equal());
    }
}
