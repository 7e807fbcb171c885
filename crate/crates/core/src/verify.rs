//! Independent checks on finished matrices: zero-pattern conformance, all
//! maximal minors, brute-force minimum distance, and a bounded search for the
//! smallest field admitting a GRS realization of a pattern.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::genmatrix::{self, SearchOutcome};
use crate::gfield::{FieldSpec, GfError, Matrix};
use crate::par::{self, Execution};
use crate::patterns::{self, Condition, ConditionWitness, ZeroPattern};

/// Default cap on `q^n` point tuples per field in [`min_field_search`].
pub const DEFAULT_SEARCH_CAP: u64 = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{needed} codewords to enumerate, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("GF({q}) needs {tuples} point tuples, cap is {cap}")]
    SearchSpaceTooLarge { q: u32, tuples: u128, cap: u64 },
    #[error("row {row} has {size} prescribed zeros, expected {expected}")]
    PatternNotMaximal { row: usize, size: usize, expected: usize },
    #[error("pattern violates the MDS condition: {0}")]
    ConditionViolated(ConditionWitness),
    #[error(transparent)]
    Field(#[from] GfError),
}

pub type Result<T> = std::result::Result<T, VerifyError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ZeroCheck {
    /// Zero exactly where prescribed.
    #[default]
    Strict,
    /// Zero at least where prescribed; other zeros allowed.
    AtLeast,
}

pub fn verify_zero_pattern(a: &Matrix, pat: &ZeroPattern, mode: ZeroCheck) -> Result<bool> {
    if a.rows() != pat.k() || a.cols() != pat.n() {
        return Err(VerifyError::ShapeMismatch(format!(
            "{}x{} matrix against a {}x{} pattern",
            a.rows(),
            a.cols(),
            pat.k(),
            pat.n()
        )));
    }
    Ok((0..a.rows()).all(|i| {
        (0..a.cols()).all(|j| {
            let prescribed = pat.is_zero(i, j + 1);
            let zero = a.get(i, j) == 0;
            match mode {
                ZeroCheck::Strict => prescribed == zero,
                ZeroCheck::AtLeast => !prescribed || zero,
            }
        })
    }))
}

/// A `k x k` minor, identified by its 1-based columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorWitness {
    pub columns: Vec<usize>,
    pub det: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "snake_case")]
pub enum MdsVerdict {
    Ok,
    Singular(MinorWitness),
}

impl MdsVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, MdsVerdict::Ok)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MinorOrder {
    /// Each minor recomputed from scratch, lexicographic order.
    #[default]
    Lexicographic,
    /// Revolving-door order with a rank-one inverse update per step.
    /// Sequential; on a singular minor the lexicographic scan is rerun so the
    /// reported witness is the same.
    RevolvingDoor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct MinorScan {
    pub order: MinorOrder,
    pub exec: Execution,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// The `rank`-th k-subset of `0..n` in lexicographic order.
pub(crate) fn unrank_combination(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        loop {
            let rest = binomial(n - next - 1, k - slot - 1);
            if rank < rest {
                break;
            }
            rank -= rest;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Advances to the lexicographic successor; false after the last subset.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}

const CHUNK: u128 = 2048;

pub fn verify_mds(field: &FieldSpec, a: &Matrix) -> Result<MdsVerdict> {
    verify_mds_with(field, a, &MinorScan::default())
}

pub fn verify_mds_with(field: &FieldSpec, a: &Matrix, scan: &MinorScan) -> Result<MdsVerdict> {
    let (k, n) = (a.rows(), a.cols());
    if k == 0 || k > n {
        return Err(VerifyError::ShapeMismatch(format!("need 0 < k <= n, got {k}x{n}")));
    }
    field.check_matrix(a)?;
    match scan.order {
        MinorOrder::Lexicographic => Ok(lex_scan(field, a, scan.exec)),
        MinorOrder::RevolvingDoor => {
            if revolving_door_all_nonsingular(field, a) {
                Ok(MdsVerdict::Ok)
            } else {
                Ok(lex_scan(field, a, scan.exec))
            }
        }
    }
}

fn lex_scan(field: &FieldSpec, a: &Matrix, exec: Execution) -> MdsVerdict {
    let (k, n) = (a.rows(), a.cols());
    let total = binomial(n, k);
    let chunks = total.div_ceil(CHUNK) as usize;
    let found = par::find_map_first(exec, chunks, |chunk| {
        let start = chunk as u128 * CHUNK;
        let mut cols = unrank_combination(n, k, start);
        let mut scratch = Vec::with_capacity(k * k);
        for _ in start..total.min(start + CHUNK) {
            a.gather_columns(&cols, &mut scratch);
            let det = field.det_in_place(&mut scratch, k);
            if det == 0 {
                return Some(MinorWitness { columns: cols.iter().map(|c| c + 1).collect(), det });
            }
            next_combination(&mut cols, n);
        }
        None
    });
    match found {
        Some(w) => MdsVerdict::Singular(w),
        None => MdsVerdict::Ok,
    }
}

/// k-subsets of `0..n` as bitmasks, consecutive entries differing by one
/// element out and one in.
pub(crate) fn revolving_door(n: usize, k: usize) -> Vec<u64> {
    if k == 0 {
        return vec![0];
    }
    if k > n {
        return Vec::new();
    }
    if k == n {
        return vec![(1u64 << n) - 1];
    }
    let mut out = revolving_door(n - 1, k);
    let top = 1u64 << (n - 1);
    out.extend(revolving_door(n - 1, k - 1).into_iter().rev().map(|m| m | top));
    out
}

fn revolving_door_all_nonsingular(field: &FieldSpec, a: &Matrix) -> bool {
    let (k, n) = (a.rows(), a.cols());
    assert!(n <= 64, "revolving-door scan supports at most 64 columns");
    let order = revolving_door(n, k);
    let mut slots: Vec<usize> = (0..n).filter(|&j| order[0] >> j & 1 == 1).collect();
    let Some(mut inv) = field.mat_inv(&a.select_columns(&slots)) else {
        return false;
    };
    let mut w = vec![0u32; k];
    for pair in order.windows(2) {
        let out_col = (pair[0] & !pair[1]).trailing_zeros() as usize;
        let in_col = (pair[1] & !pair[0]).trailing_zeros() as usize;
        let s = slots.iter().position(|&c| c == out_col).expect("outgoing column is present");
        for (r, wr) in w.iter_mut().enumerate() {
            *wr = (0..k).fold(0, |acc, t| field.mul_add(acc, inv.get(r, t), a.get(t, in_col)));
        }
        let beta = w[s];
        if beta == 0 {
            return false;
        }
        // Column s replaced by u: the new inverse is E·B⁻¹ with E built from w.
        let binv = field.inv(beta).expect("beta is nonzero");
        let pivot: Vec<u32> = inv.row(s).iter().map(|&v| field.mul(v, binv)).collect();
        for (r, &wr) in w.iter().enumerate() {
            if r == s {
                continue;
            }
            let f = field.neg(wr);
            if f == 0 {
                continue;
            }
            for (t, &pv) in pivot.iter().enumerate() {
                inv.set(r, t, field.mul_add(inv.get(r, t), f, pv));
            }
        }
        for (t, &pv) in pivot.iter().enumerate() {
            inv.set(s, t, pv);
        }
        slots[s] = in_col;
    }
    true
}

/// Minimum Hamming weight over the nonzero combinations of the rows of `a`.
/// Returns 0 when the rows are linearly dependent.
pub fn min_distance(field: &FieldSpec, a: &Matrix, budget: u128) -> Result<usize> {
    min_distance_with(field, a, budget, Execution::default())
}

pub fn min_distance_with(field: &FieldSpec, a: &Matrix, budget: u128, exec: Execution) -> Result<usize> {
    let (k, n) = (a.rows(), a.cols());
    if k == 0 {
        return Err(VerifyError::ShapeMismatch("matrix has no rows".into()));
    }
    field.check_matrix(a)?;
    let q = field.order() as u128;
    let needed = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(q)).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(VerifyError::BudgetExceeded { needed, budget });
    }
    let q = field.order();
    // The leading coefficient is split across workers; the rest is an
    // odometer that updates the codeword one coefficient at a time.
    let best = par::map_collect(exec, q as usize, |lead| {
        let lead = lead as u32;
        let mut word: Vec<u32> = a.row(0).iter().map(|&v| field.mul(lead, v)).collect();
        let mut digits = vec![0u32; k];
        digits[0] = lead;
        let mut best = usize::MAX;
        loop {
            if digits.iter().any(|&d| d != 0) {
                best = best.min(word.iter().filter(|&&v| v != 0).count());
            }
            let Some(i) = (1..k).rev().find(|&i| digits[i] + 1 < q) else {
                break;
            };
            for (j, digit) in digits.iter_mut().enumerate().skip(i) {
                let new = if j == i { *digit + 1 } else { 0 };
                let delta = field.sub(new, *digit);
                if delta != 0 {
                    for (wv, &av) in word.iter_mut().zip(a.row(j)) {
                        *wv = field.mul_add(*wv, delta, av);
                    }
                }
                *digit = new;
            }
        }
        best
    });
    Ok(best.into_iter().min().unwrap_or(n).min(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldFeasibility {
    pub q: u32,
    /// Some distinct point tuple gives `det C != 0`.
    pub feasible_by_grs: bool,
    /// The lexicographically first such tuple.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<u32>>,
}

/// Result of [`min_field_search`]. Only GRS realizations are searched, so an
/// infeasible field does not rule out other MDS matrices with the pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinFieldReport {
    pub fields: Vec<FieldFeasibility>,
    pub smallest_feasible: Option<u32>,
    /// Reference thresholds: `C(n,k)`, `C(n-1,k-1)` and `n+k-1`.
    pub binomial_bound: u128,
    pub improved_binomial_bound: u128,
    pub grs_bound: usize,
}

/// For each prime power `q <= q_max`, whether the maximal pattern has a GRS
/// realization over GF(q). Each field is searched exhaustively, so `q^n`
/// must not exceed `cap`.
pub fn min_field_search(pat: &ZeroPattern, q_max: u32, cap: u64, exec: Execution) -> Result<MinFieldReport> {
    if let Some(row) = pat.sets().iter().position(|s| s.len() + 1 != pat.k()) {
        return Err(VerifyError::PatternNotMaximal { row: row + 1, size: pat.set(row).len(), expected: pat.k() - 1 });
    }
    if let Condition::Violated(w) = patterns::check_mds(pat) {
        return Err(VerifyError::ConditionViolated(w));
    }
    let (n, k) = (pat.n(), pat.k());
    let mut fields = Vec::new();
    for q in 2..=q_max {
        if crate::gfield::prime_power(q as u64).is_none() {
            continue;
        }
        if (q as usize) < n {
            fields.push(FieldFeasibility { q, feasible_by_grs: false, points: None });
            continue;
        }
        let tuples = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if tuples > cap as u128 {
            return Err(VerifyError::SearchSpaceTooLarge { q, tuples, cap });
        }
        let field = FieldSpec::with_order(q as u64)?;
        let points = match genmatrix::lex_first_points(&field, pat, &[], None, exec) {
            SearchOutcome::Found(p) => Some(p),
            _ => None,
        };
        fields.push(FieldFeasibility { q, feasible_by_grs: points.is_some(), points });
    }
    Ok(MinFieldReport {
        smallest_feasible: fields.iter().find(|f| f.feasible_by_grs).map(|f| f.q),
        fields,
        binomial_bound: binomial(n, k),
        improved_binomial_bound: binomial(n - 1, k - 1),
        grs_bound: n + k - 1,
    })
}
