//! The four system transformations used to shrink a V*(k) system, each with
//! checks of the identities that make the reduction sound.
//!
//! - divide: drop one root `a_j` shared by every vector; `k` drops by one.
//! - tight split: collapse a tight index set `I` into the single vector `v_I`.
//! - merge last: add the last two coordinates, i.e. substitute `a_n := a_{n-1}`.
//! - increment last: turn `(1,..,1,0)` into `(1,..,1,1)`, setting aside
//!   `p = ∏_{j<n} (x - a_j)`.

use serde::Serialize;

use super::family::{gen_family, gen_p, PolyFamily};
use super::independence::{span_check, RandomizedOptions};
use super::poly::FormalPoly;
use super::{check_vk, check_vstar, meet, tight_sets, MultiplicityVector, Result, SymError, SystemDoc, VectorSystem, VkCondition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    Divide,
    TightSplit,
    MergeLast,
    IncrementLast,
}

impl Lemma {
    pub const ALL: [Lemma; 4] = [Lemma::Divide, Lemma::TightSplit, Lemma::MergeLast, Lemma::IncrementLast];
}

/// Decrements coordinate `j` (1-based) of every vector; the result targets `k - 1`.
pub fn lemma_divide(sys: &VectorSystem, j: usize) -> Result<VectorSystem> {
    if j == 0 || j > sys.n() {
        return Err(SymError::PreconditionViolated(format!("coordinate {j} outside 1..={}", sys.n())));
    }
    if sys.k() < 2 {
        return Err(SymError::PreconditionViolated("k must be at least 2".into()));
    }
    if let Some(i) = sys.vectors().iter().position(|v| v.get(j) == 0) {
        return Err(SymError::PreconditionViolated(format!("v_{}({j}) = 0", i + 1)));
    }
    let vectors = sys
        .vectors()
        .iter()
        .map(|v| {
            let mut e = v.entries().to_vec();
            e[j - 1] -= 1;
            MultiplicityVector::new(e)
        })
        .collect();
    VectorSystem::new(sys.n(), sys.k() - 1, vectors)
}

/// For a tight `I` with `1 < |I| < m`: the system with `I` replaced by `v_I`
/// (non-`I` vectors first, in order) and the `I` block itself.
pub fn lemma_tight_split(sys: &VectorSystem, rows: &[usize]) -> Result<(VectorSystem, VectorSystem)> {
    let mut rows = rows.to_vec();
    rows.sort_unstable();
    rows.dedup();
    let v_i = meet(sys, &rows)?;
    if rows.len() == 1 || rows.len() == sys.m() {
        return Err(SymError::TrivialSplit { size: rows.len(), m: sys.m() });
    }
    if let VkCondition::Violated(w) = check_vk(sys) {
        return Err(SymError::ConditionViolated(w));
    }
    if sys.score(&rows) != sys.k() as i64 {
        return Err(SymError::NotTight(rows));
    }
    let mut left: Vec<MultiplicityVector> =
        (1..=sys.m()).filter(|i| !rows.contains(i)).map(|i| sys.vector(i).clone()).collect();
    left.push(v_i);
    let right = rows.iter().map(|&i| sys.vector(i).clone()).collect();
    Ok((VectorSystem::new(sys.n(), sys.k(), left)?, VectorSystem::new(sys.n(), sys.k(), right)?))
}

/// Adds the last two coordinates of every vector.
pub fn lemma_merge_last(sys: &VectorSystem) -> Result<VectorSystem> {
    let n = sys.n();
    if n < 2 {
        return Err(SymError::AmbientTooSmall(n));
    }
    let vectors = sys
        .vectors()
        .iter()
        .map(|v| {
            let mut e = v.entries().to_vec();
            let last = e.pop().unwrap();
            e[n - 2] += last;
            MultiplicityVector::new(e)
        })
        .collect();
    VectorSystem::new(n - 1, sys.k(), vectors)
}

/// The setting in which merging is claimed to preserve V*(k): V*(k) holds,
/// some vector vanishes on the last two coordinates, and the only tight sets
/// are singletons and the full index set.
pub fn merge_hypotheses(sys: &VectorSystem) -> bool {
    let n = sys.n();
    n >= 2
        && check_vstar(sys).is_satisfied()
        && sys.vectors().iter().any(|v| v.get(n - 1) == 0 && v.get(n) == 0)
        && tight_sets(sys).is_ok_and(|t| t.iter().all(|s| s.len() == 1 || s.len() == sys.m()))
}

fn ones_then_zero(n: usize) -> MultiplicityVector {
    let mut e = vec![1; n];
    e[n - 1] = 0;
    MultiplicityVector::new(e)
}

/// Moves the last copy of `(1,..,1,0)` to the end and increments its final
/// coordinate. Requires `n < k`. Also returns `p = ∏_{j<n} (x - a_j)`.
pub fn lemma_increment_last(sys: &VectorSystem) -> Result<(VectorSystem, FormalPoly)> {
    let n = sys.n();
    if n == 0 {
        return Err(SymError::AmbientTooSmall(n));
    }
    if n >= sys.k() {
        return Err(SymError::PreconditionViolated(format!("need n < k, got n = {n}, k = {}", sys.k())));
    }
    let target = ones_then_zero(n);
    let Some(pos) = sys.vectors().iter().rposition(|v| *v == target) else {
        return Err(SymError::PreconditionViolated("no vector equals (1,..,1,0)".into()));
    };
    let mut vectors = sys.vectors().to_vec();
    vectors.remove(pos);
    vectors.push(MultiplicityVector::new(vec![1; n]));
    let p = (1..n).fold(FormalPoly::one(n), |acc, j| acc.mul(&FormalPoly::linear_factor(n, j)));
    Ok((VectorSystem::new(n, sys.k(), vectors)?, p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaOutcome {
    pub lemma: Lemma,
    pub claims: Vec<Claim>,
}

impl LemmaOutcome {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }
}

fn sorted_polys(f: &PolyFamily) -> Vec<FormalPoly> {
    let mut v: Vec<FormalPoly> = f.polys().cloned().collect();
    v.sort();
    v
}

pub fn check_divide(sys: &VectorSystem, j: usize) -> Result<LemmaOutcome> {
    let reduced = lemma_divide(sys, j)?;
    let mut claims = Vec::new();
    if check_vstar(sys).is_satisfied() {
        claims.push(Claim { name: "vstar_preserved", holds: check_vstar(&reduced).is_satisfied() });
    }
    let lhs = gen_family(sys)?;
    let factor = FormalPoly::linear_factor(sys.n(), j);
    let mut rhs: Vec<FormalPoly> = gen_family(&reduced)?.polys().map(|p| p.mul(&factor)).collect();
    rhs.sort();
    claims.push(Claim { name: "multiset_identity", holds: sorted_polys(&lhs) == rhs });
    Ok(LemmaOutcome { lemma: Lemma::Divide, claims })
}

pub fn check_tight_split(sys: &VectorSystem, rows: &[usize], opts: &RandomizedOptions) -> Result<LemmaOutcome> {
    let (left, right) = lemma_tight_split(sys, rows)?;
    let mut claims = Vec::new();
    if check_vstar(sys).is_satisfied() {
        claims.push(Claim { name: "vstar_preserved", holds: check_vstar(&left).is_satisfied() });
    }
    claims.push(Claim { name: "size_preserved", holds: left.family_size() == sys.family_size() });
    let v_i = left.vector(left.m());
    let span = span_check(&gen_family(&right)?, &gen_p(sys.k(), v_i)?, opts)?;
    claims.push(Claim { name: "span_equal", holds: span.equal() });
    Ok(LemmaOutcome { lemma: Lemma::TightSplit, claims })
}

pub fn check_merge_last(sys: &VectorSystem) -> Result<LemmaOutcome> {
    let merged = lemma_merge_last(sys)?;
    let mut claims = Vec::new();
    let weights = sys.vectors().iter().zip(merged.vectors()).all(|(a, b)| a.weight() == b.weight());
    claims.push(Claim { name: "weights_preserved", holds: weights });
    if merge_hypotheses(sys) {
        claims.push(Claim { name: "vstar_preserved", holds: check_vstar(&merged).is_satisfied() });
    }
    let before = gen_family(sys)?;
    let after = gen_family(&merged)?;
    let substitution = before.len() == after.len()
        && before.members().iter().zip(after.members()).all(|(p, q)| {
            (p.vector, p.exponent) == (q.vector, q.exponent) && p.poly.merge_last_two() == q.poly
        });
    claims.push(Claim { name: "substitution_identity", holds: substitution });
    Ok(LemmaOutcome { lemma: Lemma::MergeLast, claims })
}

pub fn check_increment_last(sys: &VectorSystem, opts: &RandomizedOptions) -> Result<LemmaOutcome> {
    let (next, p) = lemma_increment_last(sys)?;
    let mut claims = Vec::new();
    if check_vstar(sys).is_satisfied() {
        claims.push(Claim { name: "vstar_preserved", holds: check_vstar(&next).is_satisfied() });
    }
    claims.push(Claim { name: "size_drops_by_one", holds: next.family_size() + 1 == sys.family_size() });
    let mut with_p = gen_family(&next)?;
    with_p.push_extra(p)?;
    let span = span_check(&gen_family(sys)?, &with_p, opts)?;
    claims.push(Claim { name: "span_equal", holds: span.equal() });
    Ok(LemmaOutcome { lemma: Lemma::IncrementLast, claims })
}

/// Where a lemma applies to a system, the arguments it is applied with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "lemma", rename_all = "snake_case")]
pub enum Application {
    Divide { coordinate: usize },
    TightSplit { rows: Vec<usize> },
    MergeLast,
    IncrementLast,
}

/// The canonical way to apply `lemma` to a V*(k) system, if its
/// preconditions hold: the first shared coordinate, the first nontrivial
/// tight set, and so on.
pub fn applicable(lemma: Lemma, sys: &VectorSystem) -> Option<Application> {
    if !check_vstar(sys).is_satisfied() {
        return None;
    }
    match lemma {
        Lemma::Divide => (sys.k() >= 2)
            .then(|| (1..=sys.n()).find(|&j| sys.vectors().iter().all(|v| v.get(j) >= 1)))
            .flatten()
            .map(|coordinate| Application::Divide { coordinate }),
        Lemma::TightSplit => tight_sets(sys)
            .ok()?
            .into_iter()
            .find(|t| t.len() > 1 && t.len() < sys.m())
            .map(|rows| Application::TightSplit { rows }),
        Lemma::MergeLast => merge_hypotheses(sys).then_some(Application::MergeLast),
        Lemma::IncrementLast => (sys.n() >= 1 && sys.n() < sys.k() && sys.vectors().contains(&ones_then_zero(sys.n())))
            .then_some(Application::IncrementLast),
    }
}

pub fn run_application(sys: &VectorSystem, app: &Application, opts: &RandomizedOptions) -> Result<LemmaOutcome> {
    match app {
        Application::Divide { coordinate } => check_divide(sys, *coordinate),
        Application::TightSplit { rows } => check_tight_split(sys, rows, opts),
        Application::MergeLast => check_merge_last(sys),
        Application::IncrementLast => check_increment_last(sys, opts),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteFailure {
    pub system: SystemDoc,
    pub application: Application,
    pub outcome: Option<LemmaOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub lemma: Lemma,
    pub instances: usize,
    pub passed: usize,
    pub failures: Vec<SuiteFailure>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs one lemma over every system it applies to.
pub fn run_suite(lemma: Lemma, systems: &[VectorSystem], opts: &RandomizedOptions) -> SuiteReport {
    let mut report = SuiteReport { lemma, instances: 0, passed: 0, failures: Vec::new() };
    for sys in systems {
        let Some(app) = applicable(lemma, sys) else { continue };
        report.instances += 1;
        match run_application(sys, &app, opts) {
            Ok(outcome) if outcome.passed() => report.passed += 1,
            Ok(outcome) => report.failures.push(SuiteFailure {
                system: sys.clone().into(),
                application: app,
                outcome: Some(outcome),
                error: None,
            }),
            Err(e) => report.failures.push(SuiteFailure {
                system: sys.clone().into(),
                application: app,
                outcome: None,
                error: Some(e.to_string()),
            }),
        }
    }
    report
}
