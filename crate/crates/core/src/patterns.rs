//! Zero patterns, the MDS condition, maximal completion, and the reduction
//! from a general distance requirement to the MDS case.
//!
//! A pattern of a `k x n` matrix is a list of row sets `S_1..S_k` of column
//! indices (1-based, as in the JSON schema) where the matrix must be zero.
//! The MDS condition requires `|I| + |∩_{i∈I} S_i| <= k` for every nonempty
//! row set `I`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gfield::Matrix;
use crate::par::{self, Execution};

/// Largest row count accepted by the exhaustive tight-set enumeration.
pub const MAX_TIGHT_ENUM_ROWS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("invalid pattern: {0}")]
    Invalid(String),
    #[error("pattern violates the MDS condition: {0}")]
    PatternViolatesMds(ConditionWitness),
    #[error("distance {d} outside 1..={max} for n = {n}, k = {k}")]
    DistanceOutOfRange { d: usize, n: usize, k: usize, max: usize },
    #[error("pattern violates the distance condition: {0}")]
    ConditionViolated(ConditionWitness),
    #[error("{0} rows is too many for exhaustive enumeration (limit {MAX_TIGHT_ENUM_ROWS})")]
    TooManyRows(usize),
}

pub type Result<T> = std::result::Result<T, PatternError>;

/// Growable bitset over 0-based column indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct ColSet {
    words: Vec<u64>,
}

impl ColSet {
    pub(crate) fn from_one_based(cols: &[usize]) -> Self {
        let mut s = Self::default();
        for &c in cols {
            s.insert(c - 1);
        }
        s
    }

    pub(crate) fn insert(&mut self, c: usize) {
        let w = c / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (c % 64);
    }

    pub(crate) fn remove(&mut self, c: usize) {
        if let Some(w) = self.words.get_mut(c / 64) {
            *w &= !(1 << (c % 64));
        }
    }

    pub(crate) fn contains(&self, c: usize) -> bool {
        self.words.get(c / 64).is_some_and(|w| w >> (c % 64) & 1 == 1)
    }

    pub(crate) fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub(crate) fn intersection(&self, other: &Self) -> Self {
        Self { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub(crate) fn to_one_based(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * 64 + b + 1);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// Prescribed zero positions of a `k x n` matrix, stored in canonical form
/// (each row sorted and deduplicated, columns 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PatternDoc", into = "PatternDoc")]
pub struct ZeroPattern {
    n: usize,
    k: usize,
    sets: Vec<Vec<usize>>,
}

/// JSON form of a pattern; completion output fills `n_increased_from`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternDoc {
    pub n: usize,
    pub k: usize,
    pub sets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_increased_from: Option<usize>,
}

impl TryFrom<PatternDoc> for ZeroPattern {
    type Error = PatternError;

    fn try_from(doc: PatternDoc) -> Result<Self> {
        ZeroPattern::new(doc.n, doc.k, doc.sets)
    }
}

impl From<ZeroPattern> for PatternDoc {
    fn from(p: ZeroPattern) -> Self {
        PatternDoc { n: p.n, k: p.k, sets: p.sets, n_increased_from: None }
    }
}

/// The condition `|I| + |∩ S_i| <= bound` failed (or holds with equality,
/// when listed as tight) for the row set `rows`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionWitness {
    /// 1-based row indices, ascending.
    pub rows: Vec<usize>,
    /// Common zero columns of those rows, 1-based.
    pub intersection: Vec<usize>,
    pub lhs: usize,
    pub bound: usize,
}

impl std::fmt::Display for ConditionWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "rows {:?} share zero columns {:?}: {} + {} = {} vs bound {}",
            self.rows,
            self.intersection,
            self.rows.len(),
            self.intersection.len(),
            self.lhs,
            self.bound
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "snake_case")]
pub enum Condition {
    Satisfied,
    Violated(ConditionWitness),
}

impl Condition {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Condition::Satisfied)
    }
}

/// How a row set is scored when listing tight constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TightConvention {
    /// `|I| + |∩ S_i| = k`; a singleton is tight only when `|S_i| = k - 1`.
    #[default]
    SetSystem,
    /// `Σ (k - |S_i|) + |∩ S_i| = k`; every singleton is tight.
    Vector,
}

impl ZeroPattern {
    pub fn new(n: usize, k: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        if k == 0 || k > n {
            return Err(PatternError::Invalid(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
        }
        if sets.len() != k {
            return Err(PatternError::Invalid(format!("expected {k} row sets, got {}", sets.len())));
        }
        let mut canonical = Vec::with_capacity(k);
        for (i, mut s) in sets.into_iter().enumerate() {
            if let Some(&bad) = s.iter().find(|&&c| c == 0 || c > n) {
                return Err(PatternError::Invalid(format!(
                    "row {} contains column {bad} outside 1..={n}",
                    i + 1
                )));
            }
            s.sort_unstable();
            s.dedup();
            canonical.push(s);
        }
        Ok(Self { n, k, sets: canonical })
    }

    /// The pattern with no prescribed zeros.
    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, vec![Vec::new(); k])
    }

    /// Zero positions of a matrix.
    pub fn of_matrix(m: &Matrix) -> Result<Self> {
        let sets = (0..m.rows())
            .map(|i| (0..m.cols()).filter(|&j| m.get(i, j) == 0).map(|j| j + 1).collect())
            .collect();
        Self::new(m.cols(), m.rows(), sets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Row `i` (0-based), 1-based column indices.
    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    /// True when `j` (1-based) is a prescribed zero of row `i` (0-based).
    pub fn is_zero(&self, i: usize, j: usize) -> bool {
        self.sets[i].binary_search(&j).is_ok()
    }

    /// Every row has exactly `k - 1` zeros.
    pub fn is_maximal(&self) -> bool {
        self.sets.iter().all(|s| s.len() == self.k - 1)
    }

    /// Keeps only columns `1..=n` (used after padding with fresh columns).
    pub fn restrict_columns(&self, n: usize) -> Result<Self> {
        let sets = self.sets.iter().map(|s| s.iter().copied().filter(|&c| c <= n).collect()).collect();
        Self::new(n, self.k, sets)
    }

    /// 0/1 indicator vectors of the rows, one per row.
    pub fn indicator_vectors(&self) -> Vec<Vec<u32>> {
        self.sets
            .iter()
            .map(|s| {
                let mut v = vec![0; self.n];
                for &c in s {
                    v[c - 1] = 1;
                }
                v
            })
            .collect()
    }

    pub(crate) fn col_sets(&self) -> Vec<ColSet> {
        self.sets.iter().map(|s| ColSet::from_one_based(s)).collect()
    }
}

fn witness(rows: &[usize], t: &ColSet, bound: usize) -> ConditionWitness {
    ConditionWitness {
        rows: rows.iter().map(|&i| i + 1).collect(),
        intersection: t.to_one_based(),
        lhs: rows.len() + t.len(),
        bound,
    }
}

/// Depth-first search over row sets starting with `stack`, in lexicographic
/// order. Keeps the smallest violation (by size, then lexicographically).
/// Requires `bound >= k`, which makes every extension of a row set with an
/// empty intersection safe.
fn search_violation(
    rows: &[ColSet],
    bound: usize,
    stack: &mut Vec<usize>,
    t: ColSet,
    best: &mut Option<(Vec<usize>, ColSet)>,
) {
    let size = stack.len();
    if size + t.len() > bound {
        if best.as_ref().is_none_or(|(b, _)| size < b.len()) {
            *best = Some((stack.clone(), t));
        }
        return;
    }
    if t.is_empty() || best.as_ref().is_some_and(|(b, _)| size + 1 >= b.len()) {
        return;
    }
    let last = *stack.last().unwrap();
    for next in last + 1..rows.len() {
        stack.push(next);
        search_violation(rows, bound, stack, t.intersection(&rows[next]), best);
        stack.pop();
    }
}

fn check_bound(pat: &ZeroPattern, bound: usize, exec: Execution) -> Condition {
    let rows = pat.col_sets();
    let per_branch = par::map_collect(exec, rows.len(), |first| {
        let mut best = None;
        search_violation(&rows, bound, &mut vec![first], rows[first].clone(), &mut best);
        best
    });
    per_branch
        .into_iter()
        .flatten()
        .min_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
        .map_or(Condition::Satisfied, |(i, t)| Condition::Violated(witness(&i, &t, bound)))
}

/// Checks the MDS condition. On failure the witness is the first violating
/// row set in order of increasing size, lexicographic within a size.
pub fn check_mds(pat: &ZeroPattern) -> Condition {
    check_mds_with(pat, Execution::default())
}

pub fn check_mds_with(pat: &ZeroPattern, exec: Execution) -> Condition {
    check_bound(pat, pat.k, exec)
}

/// Reference checker: every nonempty row set, no pruning. Same witness order.
pub fn check_mds_naive(pat: &ZeroPattern) -> Condition {
    naive_bound(pat, pat.k)
}

fn naive_bound(pat: &ZeroPattern, bound: usize) -> Condition {
    let rows = pat.col_sets();
    let k = rows.len();
    let mut sets: Vec<Vec<usize>> =
        (1u64..1 << k).map(|mask| (0..k).filter(|&i| mask >> i & 1 == 1).collect()).collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for i in sets {
        let t = i[1..].iter().fold(rows[i[0]].clone(), |t, &r| t.intersection(&rows[r]));
        if i.len() + t.len() > bound {
            return Condition::Violated(witness(&i, &t, bound));
        }
    }
    Condition::Satisfied
}

fn tight_enumerate(pat: &ZeroPattern, convention: TightConvention) -> Result<Vec<ConditionWitness>> {
    let k = pat.k;
    if k > MAX_TIGHT_ENUM_ROWS {
        return Err(PatternError::TooManyRows(k));
    }
    let rows = pat.col_sets();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn walk(
        rows: &[ColSet],
        k: usize,
        convention: TightConvention,
        stack: &mut Vec<usize>,
        t: Option<ColSet>,
        weight: usize,
        out: &mut Vec<ConditionWitness>,
    ) {
        let start = stack.last().map_or(0, |&l| l + 1);
        for next in start..rows.len() {
            let t2 = match &t {
                None => rows[next].clone(),
                Some(t) => t.intersection(&rows[next]),
            };
            let w2 = weight
                + match convention {
                    TightConvention::SetSystem => 1,
                    TightConvention::Vector => k - rows[next].len(),
                };
            stack.push(next);
            let lhs = w2 + t2.len();
            if lhs == k {
                let mut w = witness(stack, &t2, k);
                w.lhs = lhs;
                out.push(w);
            }
            if w2 < k {
                walk(rows, k, convention, stack, Some(t2), w2, out);
            }
            stack.pop();
        }
    }
    walk(&rows, k, convention, &mut stack, None, 0, &mut out);
    out.sort_by(|a, b| a.rows.len().cmp(&b.rows.len()).then_with(|| a.rows.cmp(&b.rows)));
    Ok(out)
}

/// All row sets meeting the MDS condition with equality, by size then
/// lexicographically. Requires the pattern to satisfy the condition.
pub fn tight_index_sets(pat: &ZeroPattern, convention: TightConvention) -> Result<Vec<ConditionWitness>> {
    if let Condition::Violated(w) = check_mds(pat) {
        return Err(PatternError::PatternViolatesMds(w));
    }
    tight_enumerate(pat, convention)
}

/// Result of growing every row to `k - 1` zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub pattern: ZeroPattern,
    /// Original column count when fresh columns had to be appended.
    pub n_increased_from: Option<usize>,
    /// Zeros added inside the original columns.
    pub grown_in_place: usize,
    /// Fresh columns appended.
    pub padded_columns: usize,
}

impl Completion {
    pub fn to_doc(&self) -> PatternDoc {
        PatternDoc { n_increased_from: self.n_increased_from, ..self.pattern.clone().into() }
    }
}

/// True when no row set containing `row` breaks `|I| + |∩ S_i| <= bound`.
fn row_is_admissible(rows: &[ColSet], row: usize, bound: usize) -> bool {
    fn walk(rows: &[ColSet], row: usize, bound: usize, from: usize, size: usize, t: &ColSet) -> bool {
        if size + t.len() > bound {
            return false;
        }
        if t.is_empty() {
            return true;
        }
        (from..rows.len())
            .filter(|&r| r != row)
            .all(|r| walk(rows, row, bound, r + 1, size + 1, &t.intersection(&rows[r])))
    }
    walk(rows, row, bound, 0, 1, &rows[row])
}

/// Completes a pattern satisfying the MDS condition to a maximal one
/// (`|S_i| = k - 1` for all rows) that contains it row-wise.
///
/// Rows are grown greedily inside `[n]`, one zero at a time, trying columns
/// by ascending frequency across all rows (ties by index) and keeping an
/// addition only if the condition still holds. Rows the greedy pass cannot
/// fill are padded with fresh columns `n+1, n+2, ...`, disjoint between
/// rows, which increases `n`.
pub fn complete_to_maximal(pat: &ZeroPattern) -> Result<Completion> {
    complete_with(pat, CompletionStrategy::Greedy)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CompletionStrategy {
    /// In-place greedy growth, padding only rows it cannot fill.
    #[default]
    Greedy,
    /// Pad every row with fresh columns, leaving `[n]` untouched.
    PadOnly,
}

pub fn complete_with(pat: &ZeroPattern, strategy: CompletionStrategy) -> Result<Completion> {
    if let Condition::Violated(w) = check_mds(pat) {
        return Err(PatternError::PatternViolatesMds(w));
    }
    let (n, k) = (pat.n, pat.k);
    let mut rows = pat.col_sets();
    let mut grown = 0;
    let greedy_rows = if strategy == CompletionStrategy::Greedy { k } else { 0 };
    for i in 0..greedy_rows {
        while rows[i].len() < k - 1 {
            let freq: Vec<usize> = (0..n).map(|c| rows.iter().filter(|r| r.contains(c)).count()).collect();
            let mut candidates: Vec<usize> = (0..n).filter(|&c| !rows[i].contains(c)).collect();
            candidates.sort_by_key(|&c| (freq[c], c));
            let accepted = candidates.into_iter().find(|&c| {
                rows[i].insert(c);
                let ok = row_is_admissible(&rows, i, k);
                if !ok {
                    rows[i].remove(c);
                }
                ok
            });
            if accepted.is_none() {
                break;
            }
            grown += 1;
        }
    }
    let mut next_col = n;
    for row in rows.iter_mut() {
        while row.len() < k - 1 {
            row.insert(next_col);
            next_col += 1;
        }
    }
    let sets = rows.iter().map(ColSet::to_one_based).collect();
    let pattern = ZeroPattern::new(next_col, k, sets)?;
    debug_assert!(check_mds(&pattern).is_satisfied());
    Ok(Completion {
        pattern,
        n_increased_from: (next_col > n).then_some(n),
        grown_in_place: grown,
        padded_columns: next_col - n,
    })
}

fn check_distance_range(pat: &ZeroPattern, d: usize) -> Result<()> {
    let max = pat.n - pat.k + 1;
    if d == 0 || d > max {
        return Err(PatternError::DistanceOutOfRange { d, n: pat.n, k: pat.k, max });
    }
    Ok(())
}

/// Checks `|I| + |∩ S_i| <= n - d + 1`, the zero-pattern condition for a code
/// of minimum distance at least `d`.
pub fn distance_condition_check(pat: &ZeroPattern, d: usize) -> Result<Condition> {
    check_distance_range(pat, d)?;
    Ok(check_bound(pat, pat.n - d + 1, Execution::default()))
}

/// Appends `n - d + 1 - k` empty rows. The enlarged pattern satisfies the
/// MDS condition; the first `k` rows of an MDS matrix for it generate a code
/// of distance at least `d` with the original zeros.
pub fn distance_reduce(pat: &ZeroPattern, d: usize) -> Result<ZeroPattern> {
    if let Condition::Violated(w) = distance_condition_check(pat, d)? {
        return Err(PatternError::ConditionViolated(w));
    }
    let k2 = pat.n - d + 1;
    let mut sets = pat.sets.clone();
    sets.resize(k2, Vec::new());
    ZeroPattern::new(pat.n, k2, sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pat(n: usize, sets: &[&[usize]]) -> ZeroPattern {
        ZeroPattern::new(n, sets.len(), sets.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    fn rows_of(ws: &[ConditionWitness]) -> Vec<Vec<usize>> {
        ws.iter().map(|w| w.rows.clone()).collect()
    }

    #[test]
    fn construction_validates_and_canonicalizes() {
        let p = ZeroPattern::new(4, 2, vec![vec![3, 1, 3], vec![]]).unwrap();
        assert_eq!(p.sets(), &[vec![1, 3], vec![]]);
        assert!(ZeroPattern::new(3, 4, vec![vec![]; 4]).is_err());
        assert!(ZeroPattern::new(3, 0, vec![]).is_err());
        assert!(ZeroPattern::new(3, 2, vec![vec![4], vec![]]).is_err());
        assert!(ZeroPattern::new(3, 2, vec![vec![0], vec![]]).is_err());
        assert!(ZeroPattern::new(3, 2, vec![vec![]]).is_err());
    }

    #[test]
    fn mds_condition_examples() {
        let v = check_mds(&pat(3, &[&[1], &[1]]));
        assert_eq!(
            v,
            Condition::Violated(ConditionWitness { rows: vec![1, 2], intersection: vec![1], lhs: 3, bound: 2 })
        );
        assert!(check_mds(&pat(5, &[&[1, 2], &[2, 3], &[4, 5]])).is_satisfied());
        assert!(check_mds(&ZeroPattern::empty(4, 3).unwrap()).is_satisfied());
        // A too-large row is reported as a singleton.
        let v = check_mds(&pat(4, &[&[1, 2], &[3]]));
        assert!(matches!(v, Condition::Violated(w) if w.rows == vec![1]));
    }

    #[test]
    fn witness_is_first_by_size_then_lex() {
        // {2,3}, {2,4} and {3,4} all violate; the lexicographically first pair wins.
        let p = pat(6, &[&[1, 2], &[3, 4, 5], &[3, 4, 5], &[3, 4, 5]]);
        let Condition::Violated(w) = check_mds(&p) else { panic!() };
        assert_eq!(w.rows, vec![2, 3]);
        assert_eq!(check_mds(&p), check_mds_naive(&p));
        assert_eq!(check_mds_with(&p, Execution::Sequential), check_mds(&p));
    }

    #[test]
    fn tight_sets_examples() {
        let p = pat(5, &[&[1, 2], &[2, 3], &[4, 5]]);
        let t = tight_index_sets(&p, TightConvention::SetSystem).unwrap();
        assert_eq!(rows_of(&t), vec![vec![1], vec![2], vec![3], vec![1, 2], vec![1, 2, 3]]);
        let e = tight_index_sets(&ZeroPattern::empty(4, 3).unwrap(), TightConvention::SetSystem).unwrap();
        assert_eq!(rows_of(&e), vec![vec![1, 2, 3]]);
        let t2 = tight_index_sets(&pat(2, &[&[1], &[2]]), TightConvention::SetSystem).unwrap();
        assert_eq!(rows_of(&t2), vec![vec![1], vec![2], vec![1, 2]]);
        assert!(matches!(
            tight_index_sets(&pat(3, &[&[1], &[1]]), TightConvention::SetSystem),
            Err(PatternError::PatternViolatesMds(_))
        ));
    }

    #[test]
    fn tight_sets_vector_convention_includes_all_singletons() {
        let p = pat(5, &[&[1], &[2, 3], &[]]);
        let set = rows_of(&tight_index_sets(&p, TightConvention::SetSystem).unwrap());
        let vec = rows_of(&tight_index_sets(&p, TightConvention::Vector).unwrap());
        assert!(!set.contains(&vec![1]));
        for i in 1..=3 {
            assert!(vec.contains(&vec![i]));
        }
    }

    #[test]
    fn completion_examples() {
        let c = complete_to_maximal(&pat(5, &[&[1], &[2, 3], &[4, 5]])).unwrap();
        assert!(c.pattern.is_maximal());
        assert_eq!(c.n_increased_from, None);
        assert!(check_mds(&c.pattern).is_satisfied());
        assert!(c.pattern.set(0).contains(&1));

        let maximal = pat(5, &[&[1, 2], &[2, 3], &[4, 5]]);
        let c = complete_to_maximal(&maximal).unwrap();
        assert_eq!(c.pattern, maximal);
        assert_eq!((c.grown_in_place, c.padded_columns), (0, 0));

        let c = complete_to_maximal(&ZeroPattern::empty(2, 2).unwrap()).unwrap();
        assert_eq!(c.pattern, pat(2, &[&[1], &[2]]));
        assert_eq!(c.n_increased_from, None);
    }

    #[test]
    fn padding_uses_fresh_disjoint_columns() {
        let p = pat(3, &[&[1, 2], &[1], &[]]);
        let c = complete_with(&p, CompletionStrategy::PadOnly).unwrap();
        assert_eq!(c.pattern, pat(6, &[&[1, 2], &[1, 4], &[5, 6]]));
        assert_eq!(c.n_increased_from, Some(3));
        assert_eq!((c.grown_in_place, c.padded_columns), (0, 3));
        assert!(check_mds(&c.pattern).is_satisfied());
        assert_eq!(c.to_doc().n_increased_from, Some(3));
        assert_eq!(c.pattern.restrict_columns(3).unwrap(), p);
        let g = complete_to_maximal(&p).unwrap();
        assert_eq!(g.n_increased_from, None);
    }

    #[test]
    fn distance_examples() {
        let p = pat(5, &[&[1, 2, 3], &[1, 2, 3]]);
        // {1,2} gives 2 + 3 = 5 > 3, but the singleton {1} (1 + 3 = 4) comes first.
        assert!(matches!(distance_condition_check(&p, 3).unwrap(), Condition::Violated(w) if w.rows == vec![1] && w.lhs == 4 && w.bound == 3));
        assert!(matches!(naive_bound(&p, 3), Condition::Violated(w) if w.rows == vec![1]));
        let p = pat(5, &[&[1, 2], &[3]]);
        assert!(distance_condition_check(&p, 3).unwrap().is_satisfied());
        let r = distance_reduce(&p, 3).unwrap();
        assert_eq!(r.k(), 3);
        assert_eq!(r.set(2), &[] as &[usize]);
        let mds = pat(5, &[&[1], &[3]]);
        assert_eq!(distance_reduce(&mds, 4).unwrap(), mds);
        assert!(matches!(distance_reduce(&p, 4), Err(PatternError::ConditionViolated(_))));
        assert!(matches!(distance_condition_check(&p, 0), Err(PatternError::DistanceOutOfRange { .. })));
        assert!(matches!(distance_condition_check(&p, 5), Err(PatternError::DistanceOutOfRange { .. })));
        assert!(matches!(
            distance_reduce(&pat(5, &[&[1, 2, 3], &[1, 2, 3]]), 3),
            Err(PatternError::ConditionViolated(_))
        ));
        for q in [pat(5, &[&[1, 2], &[3]]), pat(3, &[&[1], &[1]])] {
            let d = q.n() - q.k() + 1;
            assert_eq!(distance_condition_check(&q, d).unwrap(), check_mds(&q));
        }
    }

    #[test]
    fn pattern_json_schema() {
        let p: ZeroPattern = serde_json::from_str(r#"{"n":3,"k":2,"sets":[[1],[2]]}"#).unwrap();
        assert_eq!(p, pat(3, &[&[1], &[2]]));
        assert!(serde_json::from_str::<ZeroPattern>(r#"{"n":3,"sets":[[1],[2]]}"#).is_err());
        assert!(serde_json::from_str::<ZeroPattern>(r#"{"n":3,"k":2,"sets":[[4],[2]]}"#).is_err());
    }

    /// Every pattern with `k <= 4`, `n <= 6` and row sizes at most `k`, in a
    /// capped enumeration (rows drawn from a prefix of the subset list).
    fn small_patterns(budget_per_shape: usize) -> Vec<ZeroPattern> {
        let mut out = Vec::new();
        for n in 1..=6usize {
            for k in 1..=n.min(4) {
                let subsets: Vec<Vec<usize>> = (0u32..1 << n)
                    .filter(|m| m.count_ones() as usize <= k)
                    .map(|m| (0..n).filter(|&j| m >> j & 1 == 1).map(|j| j + 1).collect())
                    .collect();
                let total = subsets.len().pow(k as u32);
                let step = (total / budget_per_shape).max(1);
                let mut code = 0;
                while code < total {
                    let mut c = code;
                    let sets = (0..k)
                        .map(|_| {
                            let s = subsets[c % subsets.len()].clone();
                            c /= subsets.len();
                            s
                        })
                        .collect();
                    out.push(ZeroPattern::new(n, k, sets).unwrap());
                    code += step;
                }
            }
        }
        out
    }

    #[test]
    fn optimized_checker_agrees_with_naive() {
        for p in small_patterns(4000) {
            assert_eq!(check_mds(&p), check_mds_naive(&p), "{p:?}");
            assert_eq!(check_mds_with(&p, Execution::Sequential), check_mds_naive(&p));
        }
    }

    #[test]
    fn completion_invariants_on_small_patterns() {
        let strategies = [CompletionStrategy::Greedy, CompletionStrategy::PadOnly];
        for (p, s) in small_patterns(600)
            .into_iter()
            .filter(|p| check_mds(p).is_satisfied())
            .flat_map(|p| strategies.map(|s| (p.clone(), s)))
        {
            let c = complete_with(&p, s).unwrap();
            assert!(c.pattern.is_maximal(), "{p:?}");
            assert!(check_mds(&c.pattern).is_satisfied(), "{p:?}");
            for i in 0..p.k() {
                assert!(p.set(i).iter().all(|j| c.pattern.set(i).contains(j)));
            }
            assert_eq!(c.pattern.n(), p.n() + c.padded_columns);
        }
    }

    fn arb_pattern() -> impl Strategy<Value = ZeroPattern> {
        (1usize..=7).prop_flat_map(|n| {
            (1usize..=n.min(5)).prop_flat_map(move |k| {
                prop::collection::vec(prop::collection::vec(1..=n, 0..k), k)
                    .prop_map(move |sets| ZeroPattern::new(n, k, sets).unwrap())
            })
        })
    }

    proptest! {
        #[test]
        fn removing_a_zero_preserves_satisfaction(p in arb_pattern(), row in 0usize..5, pick in 0usize..8) {
            prop_assume!(check_mds(&p).is_satisfied());
            let row = row % p.k();
            prop_assume!(!p.set(row).is_empty());
            let mut sets = p.sets().to_vec();
            let at = pick % sets[row].len();
            sets[row].remove(at);
            let smaller = ZeroPattern::new(p.n(), p.k(), sets).unwrap();
            prop_assert!(check_mds(&smaller).is_satisfied());
        }

        #[test]
        fn reduce_then_check_matches_distance_check(p in arb_pattern(), d in 1usize..8) {
            let max = p.n() - p.k() + 1;
            let d = 1 + (d - 1) % max;
            let verdict = distance_condition_check(&p, d).unwrap();
            match distance_reduce(&p, d) {
                Ok(r) => {
                    prop_assert!(verdict.is_satisfied());
                    prop_assert_eq!(r.k(), p.n() - d + 1);
                    prop_assert!(check_mds(&r).is_satisfied());
                }
                Err(PatternError::ConditionViolated(w)) => prop_assert_eq!(verdict, Condition::Violated(w)),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
            let r = distance_reduce(&p, max);
            prop_assert_eq!(r.is_ok(), check_mds(&p).is_satisfied());
        }

        #[test]
        fn json_round_trip(p in arb_pattern()) {
            let text = serde_json::to_string(&p).unwrap();
            prop_assert_eq!(serde_json::from_str::<ZeroPattern>(&text).unwrap(), p);
        }
    }
}
