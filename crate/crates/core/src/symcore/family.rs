//! The polynomial families `P(k, v)` and `P(k, V)`.

use serde::Serialize;

use super::poly::{FormalPoly, MAX_VARS};
use super::{MultiplicityVector, Result, SymError, VectorSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    /// 1-based index of the generating vector; 0 for polynomials added by hand.
    pub vector: usize,
    /// Power of `x` multiplying `∏ (x - a_j)^{v(j)}`.
    pub exponent: usize,
    pub poly: FormalPoly,
}

/// An ordered multiset of polynomials in `Z[a_1..a_n, x]` of degree at most
/// `k - 1` in `x`, with provenance. Members come in vector order, then by
/// exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyFamily {
    n: usize,
    k: usize,
    members: Vec<FamilyMember>,
}

impl PolyFamily {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, k, members: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[FamilyMember] {
        &self.members
    }

    pub fn polys(&self) -> impl Iterator<Item = &FormalPoly> {
        self.members.iter().map(|m| &m.poly)
    }

    /// Appends an extra polynomial (provenance `vector = 0`).
    pub fn push_extra(&mut self, poly: FormalPoly) -> Result<()> {
        self.check_poly(&poly)?;
        self.members.push(FamilyMember { vector: 0, exponent: 0, poly });
        Ok(())
    }

    /// Concatenation; both families must share `n` and `k`.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if (self.n, self.k) != (other.n, other.k) {
            return Err(SymError::PreconditionViolated(format!(
                "families over (n, k) = ({}, {}) and ({}, {})",
                self.n, self.k, other.n, other.k
            )));
        }
        let mut out = self.clone();
        out.members.extend(other.members.iter().cloned());
        Ok(out)
    }

    fn check_poly(&self, poly: &FormalPoly) -> Result<()> {
        if poly.nvars() != self.n {
            return Err(SymError::PreconditionViolated(format!("polynomial over {} variables, family over {}", poly.nvars(), self.n)));
        }
        if poly.degree_x().unwrap_or(0) as usize >= self.k {
            return Err(SymError::PreconditionViolated(format!("polynomial {poly} has x-degree >= k = {}", self.k)));
        }
        Ok(())
    }
}

fn root_product(v: &MultiplicityVector) -> FormalPoly {
    let n = v.len();
    (1..=n).fold(FormalPoly::one(n), |acc, j| acc.mul(&FormalPoly::linear_factor(n, j).pow(v.get(j))))
}

fn check_ambient(n: usize) -> Result<()> {
    if n > MAX_VARS {
        return Err(SymError::AmbientTooLarge { n, max: MAX_VARS });
    }
    Ok(())
}

fn push_vector(fam: &mut PolyFamily, index: usize, v: &MultiplicityVector) -> Result<()> {
    let k = fam.k;
    if v.weight() + 1 > k {
        return Err(SymError::MultiplicityTooLarge { index, weight: v.weight(), bound: k as i64 - 1 });
    }
    let base = root_product(v);
    let x = FormalPoly::x(v.len());
    let mut poly = base;
    for e in 0..k - v.weight() {
        fam.members.push(FamilyMember { vector: index, exponent: e, poly: poly.clone() });
        poly = poly.mul(&x);
    }
    Ok(())
}

/// `P(k, v) = {∏ (x - a_j)^{v(j)} x^e : e = 0..k-1-|v|}`.
pub fn gen_p(k: usize, v: &MultiplicityVector) -> Result<PolyFamily> {
    check_ambient(v.len())?;
    if k == 0 {
        return Err(SymError::ZeroK);
    }
    let mut fam = PolyFamily::new(v.len(), k);
    push_vector(&mut fam, 1, v)?;
    Ok(fam)
}

/// `P(k, V)` as the multiset union of the `P(k, v_i)`.
pub fn gen_family(sys: &VectorSystem) -> Result<PolyFamily> {
    check_ambient(sys.n())?;
    let mut fam = PolyFamily::new(sys.n(), sys.k());
    for (i, v) in sys.vectors().iter().enumerate() {
        push_vector(&mut fam, i + 1, v)?;
    }
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::independence::{exact_independent, Independence};
    use crate::symcore::tests::sys;

    fn mv(v: &[u32]) -> MultiplicityVector {
        MultiplicityVector::new(v.to_vec())
    }

    #[test]
    fn gen_p_examples() {
        let f = gen_p(3, &mv(&[0, 0])).unwrap();
        let x = FormalPoly::x(2);
        assert_eq!(f.polys().cloned().collect::<Vec<_>>(), vec![FormalPoly::one(2), x.clone(), x.pow(2)]);

        // Indicator of S with |S| = k - 1 gives exactly p(S).
        let f = gen_p(3, &MultiplicityVector::indicator(4, &[2, 4])).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.members()[0].poly, FormalPoly::linear_factor(4, 2).mul(&FormalPoly::linear_factor(4, 4)));

        let f = gen_p(3, &mv(&[1, 1])).unwrap();
        assert_eq!(f.members()[0].poly.to_string(), "x^2 - x*a2 - x*a1 + a2*a1");

        assert_eq!(
            gen_p(2, &mv(&[1, 1])),
            Err(SymError::MultiplicityTooLarge { index: 1, weight: 2, bound: 1 })
        );
    }

    #[test]
    fn gen_p_degrees_and_independence() {
        for v in [&[0u32, 0, 0][..], &[1, 0, 2], &[0, 3, 0], &[1, 1, 1]] {
            let v = mv(v);
            for k in v.weight() + 1..=5 {
                let f = gen_p(k, &v).unwrap();
                assert_eq!(f.len(), k - v.weight());
                let degs: Vec<usize> = f.polys().map(|p| p.degree_x().unwrap() as usize).collect();
                assert_eq!(degs, (v.weight()..k).collect::<Vec<_>>());
                assert_eq!(exact_independent(&f).unwrap().verdict, Independence::Independent);
            }
        }
    }

    #[test]
    fn gen_family_multiset() {
        let s = sys(2, 3, &[&[1, 0], &[1, 0]]);
        let f = gen_family(&s).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.members()[0].poly, f.members()[2].poly);
        assert_eq!(f.members().iter().map(|m| (m.vector, m.exponent)).collect::<Vec<_>>(), vec![(1, 0), (1, 1), (2, 0), (2, 1)]);
        assert!(matches!(exact_independent(&f).unwrap().verdict, Independence::Dependent(_)));
    }

    #[test]
    fn family_of_pattern_is_row_polys() {
        let s = sys(3, 2, &[&[1, 0, 0], &[0, 1, 0]]);
        let f = gen_family(&s).unwrap();
        assert_eq!(f.polys().cloned().collect::<Vec<_>>(), vec![FormalPoly::linear_factor(3, 1), FormalPoly::linear_factor(3, 2)]);
        assert!(f.len() <= s.k());
    }

    #[test]
    fn extras_are_checked() {
        let mut f = gen_p(2, &mv(&[1, 0])).unwrap();
        assert!(f.push_extra(FormalPoly::x(2).pow(2)).is_err());
        assert!(f.push_extra(FormalPoly::x(3)).is_err());
        f.push_extra(FormalPoly::one(2)).unwrap();
        assert_eq!(f.members()[1].vector, 0);
    }
}
