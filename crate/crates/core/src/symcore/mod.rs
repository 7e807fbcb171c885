//! Multiplicity vectors, the families `P(k, V)` over formal variables
//! `a_1..a_n`, properties V(k) and V*(k), a linear independence oracle over
//! `F(a)`, and the four transformations used to reduce a system to smaller
//! ones.
//!
//! A vector `v ∈ N^n` stands for the root multiplicities
//! `∏ (x - a_j)^{v(j)}`; `P(k, v)` is that product times `x^e` for
//! `e = 0..k-1-|v|`. For indicator vectors of sets this is the polynomial
//! `p(S)` of the GRS construction.

pub mod family;
pub mod generate;
pub mod independence;
pub mod lemmas;
pub mod poly;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::patterns::ZeroPattern;
use crate::verify::next_combination;

pub use family::{gen_family, gen_p, FamilyMember, PolyFamily};
pub use independence::{
    independent, DependenceWitness, Independence, IndependenceMode, IndependenceReport, RandomizedOptions,
};
pub use poly::FormalPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymError {
    #[error("index set is empty")]
    EmptyIndexSet,
    #[error("index {index} out of range 1..={m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("a vector system needs at least one vector")]
    EmptySystem,
    #[error("vector {index} has length {len}, ambient dimension is {n}")]
    LengthMismatch { index: usize, len: usize, n: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("vector {index} has |v| = {weight} > k - 1 = {bound}")]
    MultiplicityTooLarge { index: usize, weight: usize, bound: i64 },
    #[error("ambient dimension {n} exceeds the supported {max}")]
    AmbientTooLarge { n: usize, max: usize },
    #[error("exact mode supports n <= {max_n} and k <= {max_k}, got n = {n}, k = {k}")]
    ExactModeCapExceeded { n: usize, k: usize, max_n: usize, max_k: usize },
    #[error("system violates the required property: {0}")]
    ConditionViolated(VkViolation),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("index set {0:?} is not tight")]
    NotTight(Vec<usize>),
    #[error("index set of size {size} gives a trivial split of {m} vectors")]
    TrivialSplit { size: usize, m: usize },
    #[error("ambient dimension {0} is too small")]
    AmbientTooSmall(usize),
}

pub type Result<T> = std::result::Result<T, SymError>;

/// `v ∈ N^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiplicityVector(Vec<u32>);

impl MultiplicityVector {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// Indicator of a 1-based column set.
    pub fn indicator(n: usize, set: &[usize]) -> Self {
        let mut v = vec![0; n];
        for &j in set {
            v[j - 1] = 1;
        }
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `v(j)`, 1-based.
    pub fn get(&self, j: usize) -> u32 {
        self.0[j - 1]
    }

    /// `|v| = Σ v(j)`.
    pub fn weight(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// Coordinatewise minimum.
    pub fn meet(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// `self <= other` coordinatewise.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

/// An ordered multiset `V = (v_1..v_m)` of vectors in `N^n`, with target `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemDoc", into = "SystemDoc")]
pub struct VectorSystem {
    n: usize,
    k: usize,
    vectors: Vec<MultiplicityVector>,
}

/// JSON form `{"n":..,"k":..,"vectors":[[..],..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    pub n: usize,
    pub k: usize,
    pub vectors: Vec<Vec<u32>>,
}

impl TryFrom<SystemDoc> for VectorSystem {
    type Error = SymError;

    fn try_from(doc: SystemDoc) -> Result<Self> {
        VectorSystem::new(doc.n, doc.k, doc.vectors.into_iter().map(MultiplicityVector::new).collect())
    }
}

impl From<VectorSystem> for SystemDoc {
    fn from(s: VectorSystem) -> Self {
        SystemDoc { n: s.n, k: s.k, vectors: s.vectors.into_iter().map(|v| v.0).collect() }
    }
}

impl VectorSystem {
    pub fn new(n: usize, k: usize, vectors: Vec<MultiplicityVector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(SymError::EmptySystem);
        }
        if k == 0 {
            return Err(SymError::ZeroK);
        }
        if let Some((i, v)) = vectors.iter().enumerate().find(|(_, v)| v.len() != n) {
            return Err(SymError::LengthMismatch { index: i + 1, len: v.len(), n });
        }
        Ok(Self { n, k, vectors })
    }

    /// The indicator vectors of a pattern's zero sets, with the same `k`.
    pub fn from_pattern(pat: &ZeroPattern) -> Self {
        let vectors = pat.sets().iter().map(|s| MultiplicityVector::indicator(pat.n(), s)).collect();
        Self { n: pat.n(), k: pat.k(), vectors }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[MultiplicityVector] {
        &self.vectors
    }

    /// `v_i`, 1-based.
    pub fn vector(&self, i: usize) -> &MultiplicityVector {
        &self.vectors[i - 1]
    }

    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(self.n, k, self.vectors.clone())
    }

    /// `Σ (k - |v_i|)`, the size of `P(k, V)` when (i) holds.
    pub fn family_size(&self) -> usize {
        self.vectors.iter().map(|v| self.k.saturating_sub(v.weight())).sum()
    }

    fn check_indices(&self, rows: &[usize]) -> Result<()> {
        if rows.is_empty() {
            return Err(SymError::EmptyIndexSet);
        }
        match rows.iter().find(|&&i| i == 0 || i > self.m()) {
            Some(&index) => Err(SymError::IndexOutOfRange { index, m: self.m() }),
            None => Ok(()),
        }
    }

    /// `Σ_{i∈I} (k - |v_i|) + |v_I|`, signed so violations of (i) still score.
    pub fn score(&self, rows: &[usize]) -> i64 {
        let meet = rows.iter().skip(1).fold(self.vector(rows[0]).clone(), |acc, &i| acc.meet(self.vector(i)));
        rows.iter().map(|&i| self.k as i64 - self.vector(i).weight() as i64).sum::<i64>() + meet.weight() as i64
    }
}

/// `v_I = ⋀_{i∈I} v_i` for a 1-based index set.
pub fn meet(sys: &VectorSystem, rows: &[usize]) -> Result<MultiplicityVector> {
    sys.check_indices(rows)?;
    Ok(rows.iter().skip(1).fold(sys.vector(rows[0]).clone(), |acc, &i| acc.meet(sys.vector(i))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// `|v_i| <= k - 1`
    Weight,
    /// `Σ_{i∈I} (k - |v_i|) + |v_I| <= k`
    Meet,
    /// All coordinates but the last in `{0, 1}`.
    Coordinate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VkViolation {
    pub clause: Clause,
    /// 1-based vector indices.
    pub rows: Vec<usize>,
    /// 1-based coordinate, for [`Clause::Coordinate`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coordinate: Option<usize>,
    pub lhs: i64,
    pub bound: i64,
}

impl std::fmt::Display for VkViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.clause {
            Clause::Weight => write!(f, "|v_{}| = {} exceeds k - 1 = {}", self.rows[0], self.lhs, self.bound),
            Clause::Coordinate => write!(
                f,
                "v_{}({}) = {} but only the last coordinate may exceed 1",
                self.rows[0],
                self.coordinate.unwrap_or(0),
                self.lhs
            ),
            Clause::Meet => write!(f, "rows {:?} score {} > k = {}", self.rows, self.lhs, self.bound),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "snake_case")]
pub enum VkCondition {
    Satisfied,
    Violated(VkViolation),
}

impl VkCondition {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, VkCondition::Satisfied)
    }
}

/// All nonempty index sets of size at least `min_size`, by size then lexicographically.
fn for_each_index_set(m: usize, min_size: usize, mut f: impl FnMut(&[usize]) -> bool) {
    for size in min_size.max(1)..=m {
        let mut c: Vec<usize> = (0..size).collect();
        loop {
            let rows: Vec<usize> = c.iter().map(|i| i + 1).collect();
            if !f(&rows) {
                return;
            }
            if !next_combination(&mut c, m) {
                break;
            }
        }
    }
}

fn check_weights(sys: &VectorSystem) -> Option<VkViolation> {
    sys.vectors.iter().enumerate().find(|(_, v)| v.weight() + 1 > sys.k).map(|(i, v)| VkViolation {
        clause: Clause::Weight,
        rows: vec![i + 1],
        coordinate: None,
        lhs: v.weight() as i64,
        bound: sys.k as i64 - 1,
    })
}

fn check_coordinates(sys: &VectorSystem) -> Option<VkViolation> {
    sys.vectors.iter().enumerate().find_map(|(i, v)| {
        let head = &v.entries()[..sys.n.saturating_sub(1)];
        head.iter().position(|&e| e > 1).map(|j| VkViolation {
            clause: Clause::Coordinate,
            rows: vec![i + 1],
            coordinate: Some(j + 1),
            lhs: head[j] as i64,
            bound: 1,
        })
    })
}

/// Singletons score exactly `k` once (i) holds, so only `|I| >= 2` is scanned.
fn check_meets(sys: &VectorSystem) -> Option<VkViolation> {
    let mut found = None;
    for_each_index_set(sys.m(), 2, |rows| {
        let lhs = sys.score(rows);
        if lhs > sys.k as i64 {
            found = Some(VkViolation { clause: Clause::Meet, rows: rows.to_vec(), coordinate: None, lhs, bound: sys.k as i64 });
            return false;
        }
        true
    });
    found
}

/// Property V(k): (i) and then (ii) over all index sets; the witness for
/// (ii) is the smallest violating set, ties broken lexicographically.
pub fn check_vk(sys: &VectorSystem) -> VkCondition {
    match check_weights(sys).or_else(|| check_meets(sys)) {
        Some(w) => VkCondition::Violated(w),
        None => VkCondition::Satisfied,
    }
}

/// Property V*(k): V(k) plus the coordinate restriction (iii).
pub fn check_vstar(sys: &VectorSystem) -> VkCondition {
    match check_weights(sys).or_else(|| check_coordinates(sys)).or_else(|| check_meets(sys)) {
        Some(w) => VkCondition::Violated(w),
        None => VkCondition::Satisfied,
    }
}

/// Every nonempty index set on which (ii) holds with equality.
pub fn tight_sets(sys: &VectorSystem) -> Result<Vec<Vec<usize>>> {
    if let VkCondition::Violated(w) = check_vk(sys) {
        return Err(SymError::ConditionViolated(w));
    }
    let mut out = Vec::new();
    for_each_index_set(sys.m(), 1, |rows| {
        if sys.score(rows) == sys.k as i64 {
            out.push(rows.to_vec());
        }
        true
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{self, ZeroPattern};
    use proptest::prelude::*;

    pub(crate) fn sys(n: usize, k: usize, vs: &[&[u32]]) -> VectorSystem {
        VectorSystem::new(n, k, vs.iter().map(|v| MultiplicityVector::new(v.to_vec())).collect()).unwrap()
    }

    #[test]
    fn meet_examples() {
        let s = sys(2, 3, &[&[1, 0], &[0, 1]]);
        assert_eq!(meet(&s, &[1, 2]).unwrap(), MultiplicityVector::zeros(2));
        assert_eq!(meet(&s, &[2]).unwrap(), *s.vector(2));
        assert_eq!(meet(&s, &[]), Err(SymError::EmptyIndexSet));
        assert_eq!(meet(&s, &[3]), Err(SymError::IndexOutOfRange { index: 3, m: 2 }));
        let a = MultiplicityVector::indicator(5, &[1, 2, 4]);
        let b = MultiplicityVector::indicator(5, &[2, 3, 4]);
        assert_eq!(a.meet(&b), MultiplicityVector::indicator(5, &[2, 4]));
    }

    #[test]
    fn vk_examples() {
        assert!(check_vk(&sys(2, 3, &[&[2, 0], &[0, 2]])).is_satisfied());
        // |(1,1)| = 2 = k, so (i) already fails even though I = {1,2} scores 2.
        let s = sys(2, 2, &[&[1, 0], &[1, 1]]);
        assert_eq!(s.score(&[1, 2]), 2);
        let VkCondition::Violated(w) = check_vk(&s) else { panic!() };
        assert_eq!((w.clause, w.rows, w.lhs, w.bound), (Clause::Weight, vec![2], 2, 1));
        let VkCondition::Violated(w) = check_vk(&s.with_k(1).unwrap()) else { panic!() };
        assert_eq!((w.clause, w.rows, w.lhs, w.bound), (Clause::Weight, vec![1], 1, 0));
        let s = sys(2, 2, &[&[1, 0], &[0, 1]]);
        assert_eq!(tight_sets(&s).unwrap(), vec![vec![1], vec![2], vec![1, 2]]);
        let VkCondition::Violated(w) = check_vk(&sys(2, 3, &[&[1, 0], &[1, 0]])) else { panic!() };
        assert_eq!((w.clause, w.rows, w.lhs), (Clause::Meet, vec![1, 2], 5));
    }

    #[test]
    fn vstar_examples() {
        assert!(check_vstar(&sys(3, 3, &[&[1, 1, 0], &[0, 1, 1]])).is_satisfied());
        let VkCondition::Violated(w) = check_vstar(&sys(2, 4, &[&[2, 0]])) else { panic!() };
        assert_eq!((w.clause, w.coordinate), (Clause::Coordinate, Some(1)));
        assert!(check_vk(&sys(2, 4, &[&[2, 0]])).is_satisfied());
        assert!(check_vstar(&sys(4, 7, &[&[1, 0, 0, 5]])).is_satisfied());
    }

    #[test]
    fn tight_set_examples() {
        let p = ZeroPattern::new(5, 3, vec![vec![1, 2], vec![2, 3], vec![4, 5]]).unwrap();
        let t = tight_sets(&VectorSystem::from_pattern(&p)).unwrap();
        // Oracle: I = {1,2} scores 1 + 1 + |{2}| = 3, I = {1,2,3} scores 3 + 0.
        assert_eq!(t, vec![vec![1], vec![2], vec![3], vec![1, 2], vec![1, 2, 3]]);
        let loose = sys(3, 3, &[&[1, 1, 0], &[0, 0, 2]]);
        assert_eq!(tight_sets(&loose).unwrap(), vec![vec![1], vec![2]]);
        assert!(matches!(tight_sets(&sys(2, 1, &[&[1, 0]])), Err(SymError::ConditionViolated(_))));
    }

    #[test]
    fn json_round_trip() {
        let s = sys(3, 4, &[&[1, 0, 2], &[0, 1, 0]]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"n":3,"k":4,"vectors":[[1,0,2],[0,1,0]]}"#);
        assert_eq!(serde_json::from_str::<VectorSystem>(&text).unwrap(), s);
        assert!(serde_json::from_str::<VectorSystem>(r#"{"n":3,"k":4,"vectors":[[1,0]]}"#).is_err());
        assert!(serde_json::from_str::<VectorSystem>(r#"{"n":3,"k":4,"vectors":[]}"#).is_err());
        assert!(serde_json::from_str::<VectorSystem>(r#"{"n":1,"k":1,"vectors":[[0]],"m":1}"#).is_err());
    }

    /// Every maximal pattern with k <= 4 and n <= 5 whose rows are sorted.
    fn maximal_patterns(k: usize, n: usize) -> Vec<ZeroPattern> {
        let subsets: Vec<Vec<usize>> = (0u32..1 << n)
            .filter(|s| s.count_ones() as usize == k - 1)
            .map(|s| (0..n).filter(|j| s >> j & 1 == 1).map(|j| j + 1).collect())
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; k];
        loop {
            if idx.windows(2).all(|w| w[0] <= w[1]) {
                out.push(ZeroPattern::new(n, k, idx.iter().map(|&i| subsets[i].clone()).collect()).unwrap());
            }
            let Some(i) = (0..k).find(|&i| idx[i] + 1 < subsets.len()) else { break };
            idx[i] += 1;
            idx[..i].iter_mut().for_each(|v| *v = 0);
        }
        out
    }

    #[test]
    fn vk_matches_mds_condition_on_maximal_patterns() {
        for k in 1..=4 {
            for n in k..=5 {
                for p in maximal_patterns(k, n) {
                    let s = VectorSystem::from_pattern(&p);
                    assert_eq!(check_vk(&s).is_satisfied(), patterns::check_mds(&p).is_satisfied(), "{p:?}");
                    assert_eq!(check_vstar(&s).is_satisfied(), check_vk(&s).is_satisfied());
                }
            }
        }
    }

    fn arb_system() -> impl Strategy<Value = VectorSystem> {
        (1usize..=5, 1usize..=6, 1usize..=5).prop_flat_map(|(n, k, m)| {
            prop::collection::vec(prop::collection::vec(0u32..=3, n), m)
                .prop_map(move |vs| VectorSystem::new(n, k, vs.into_iter().map(MultiplicityVector::new).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn vk_is_at_least_as_strong_as_mds_on_sets(
            n in 1usize..=6, kk in 1usize..=4,
            sets in prop::collection::vec(prop::collection::btree_set(1usize..=6, 0..4), 4),
        ) {
            let k = kk.min(n);
            let sets: Vec<Vec<usize>> = sets.into_iter().take(k)
                .map(|s| s.into_iter().filter(|&j| j <= n).collect()).collect();
            let p = ZeroPattern::new(n, k, sets).unwrap();
            if check_vk(&VectorSystem::from_pattern(&p)).is_satisfied() {
                prop_assert!(patterns::check_mds(&p).is_satisfied());
            }
        }

        /// Comparable distinct vectors never coexist in a V(k) system.
        #[test]
        fn no_comparable_vectors(s in arb_system(), i in 0usize..5, extra in prop::collection::vec(0u32..=2, 5)) {
            let i = i % s.m();
            let bigger: Vec<u32> = s.vectors()[i].entries().iter().zip(&extra).map(|(a, b)| a + b).collect();
            let mut vs = s.vectors().to_vec();
            vs.push(MultiplicityVector::new(bigger));
            let t = VectorSystem::new(s.n(), s.k(), vs).unwrap();
            prop_assert!(!check_vk(&t).is_satisfied());
        }

        #[test]
        fn singletons_always_tight(s in arb_system()) {
            if let Ok(t) = tight_sets(&s) {
                for i in 1..=s.m() {
                    prop_assert!(t.contains(&vec![i]));
                }
            }
        }

        #[test]
        fn vstar_implies_vk(s in arb_system()) {
            if check_vstar(&s).is_satisfied() {
                prop_assert!(check_vk(&s).is_satisfied());
            }
        }
    }
}
