//! Generalized Reed-Solomon construction of MDS matrices with a prescribed
//! zero pattern.
//!
//! For a maximal pattern (`|S_i| = k - 1`) and distinct evaluation points
//! `α_1..α_n`, row `i` is the evaluation of `p_i(x) = ∏_{j∈S_i} (x - α_j)` at
//! every point, so `A_{i,j} = p_i(α_j)` vanishes exactly on `S_i`. Writing
//! the coefficients of the `p_i` as a `k x k` matrix `C` gives `A = C·V`
//! with `V` the `k x n` Vandermonde matrix; `A` is MDS iff `det C != 0`.
//!
//! Points are chosen one coordinate at a time. A candidate for `α_t` is kept
//! when `det C · ∏_{i<j} (α_j - α_i)`, with the later points still free, is
//! not identically zero. Each free variable has degree at most
//! `(k - 1) + (n - 1)` in that polynomial, so a field with `q >= n + k - 1`
//! always has an acceptable candidate, and non-vanishing can be certified
//! exactly by searching the grid of remaining assignments.

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gfield::{FieldSpec, GfError, Matrix};
use crate::par::{self, Execution};
use crate::patterns::{self, Completion, CompletionStrategy, Condition, ConditionWitness, PatternError, ZeroPattern};
use crate::verify::{self, MdsVerdict, ZeroCheck};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("row {row} has {size} prescribed zeros, expected {expected}")]
    PatternNotMaximal { row: usize, size: usize, expected: usize },
    #[error("evaluation points for columns {first} and {second} coincide")]
    PointsNotDistinct { first: usize, second: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("field of order {q} is too small: need at least {needed} distinct points")]
    FieldTooSmall { q: u32, needed: usize },
    #[error("no nonsingular coefficient matrix after {tries} random tries")]
    TriesExhausted { tries: usize },
    #[error("no candidate for point {step} could be certified by random evaluation")]
    CertificationInconclusive { step: usize },
    #[error("no distinct evaluation points over GF({field}) give an invertible coefficient matrix")]
    NoValidPoints { field: String },
    #[error("pattern violates the MDS condition: {0}")]
    ConditionViolated(ConditionWitness),
    #[error("construction failed verification: {0}")]
    ConstructionFailed(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Field(#[from] GfError),
}

pub type Result<T> = std::result::Result<T, GenError>;

/// `∏ (x - root)` as coefficients, lowest degree first.
pub fn poly_from_roots(field: &FieldSpec, roots: &[u32]) -> Vec<u32> {
    let mut coeffs = Vec::with_capacity(roots.len() + 1);
    coeffs.push(1);
    for &r in roots {
        let neg_r = field.neg(r);
        coeffs.push(0);
        for i in (0..coeffs.len()).rev() {
            let shifted = if i > 0 { coeffs[i - 1] } else { 0 };
            coeffs[i] = field.mul_add(shifted, neg_r, coeffs[i]);
        }
    }
    coeffs
}

/// Horner evaluation of a coefficient vector (lowest degree first).
pub fn eval_poly(field: &FieldSpec, coeffs: &[u32], x: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| field.mul_add(c, acc, x))
}

/// The monic polynomial of a row, vanishing on the points of its zero columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowPoly {
    /// 0-based row index.
    pub row: usize,
    /// 1-based columns where the row vanishes.
    pub zero_columns: Vec<usize>,
    pub roots: Vec<u32>,
    /// Lowest degree first, length `roots.len() + 1`.
    pub coeffs: Vec<u32>,
}

/// Pairwise distinct field elements, one per column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationPoints {
    field: FieldSpec,
    values: Vec<u32>,
}

impl EvaluationPoints {
    pub fn new(field: &FieldSpec, values: Vec<u32>) -> Result<Self> {
        if let Some(&v) = values.iter().find(|&&v| v >= field.order()) {
            return Err(GfError::InvalidElement { value: v as u64, field: field.to_string() }.into());
        }
        for j in 0..values.len() {
            if let Some(i) = values[..j].iter().position(|&v| v == values[j]) {
                return Err(GenError::PointsNotDistinct { first: i + 1, second: j + 1 });
            }
        }
        Ok(Self { field: field.clone(), values })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_maximal(pat: &ZeroPattern) -> Result<()> {
    match pat.sets().iter().position(|s| s.len() != pat.k() - 1) {
        Some(row) => Err(GenError::PatternNotMaximal {
            row: row + 1,
            size: pat.set(row).len(),
            expected: pat.k() - 1,
        }),
        None => Ok(()),
    }
}

pub fn build_row_polys(pat: &ZeroPattern, pts: &EvaluationPoints) -> Result<Vec<RowPoly>> {
    check_maximal(pat)?;
    if pts.len() != pat.n() {
        return Err(GenError::ShapeMismatch(format!("{} points for {} columns", pts.len(), pat.n())));
    }
    let field = pts.field();
    Ok((0..pat.k())
        .map(|row| {
            let zero_columns = pat.set(row).to_vec();
            let roots: Vec<u32> = zero_columns.iter().map(|&j| pts.values[j - 1]).collect();
            let coeffs = poly_from_roots(field, &roots);
            RowPoly { row, zero_columns, roots, coeffs }
        })
        .collect())
}

/// `C[i][e]` is the coefficient of `x^e` in row polynomial `i`.
pub fn coefficient_matrix(polys: &[RowPoly]) -> Result<Matrix> {
    let k = polys.len();
    if let Some(p) = polys.iter().find(|p| p.coeffs.len() > k) {
        return Err(GenError::ShapeMismatch(format!(
            "row {} has degree {} but k = {k}",
            p.row + 1,
            p.coeffs.len() - 1
        )));
    }
    Ok(Matrix::from_fn(k, k, |i, e| polys[i].coeffs.get(e).copied().unwrap_or(0)))
}

/// The `k x n` Vandermonde matrix `V[e][j] = α_j^e`.
pub fn vandermonde(field: &FieldSpec, k: usize, points: &[u32]) -> Matrix {
    Matrix::from_fn(k, points.len(), |e, j| field.pow(points[j], e as u64))
}

/// A generator matrix together with how it was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    pub field: FieldSpec,
    pub matrix: Matrix,
    pub points: Vec<u32>,
    pub coefficients: Matrix,
    pub det_c: u32,
    pub pattern: ZeroPattern,
}

impl GeneratorMatrix {
    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    /// Keeps the first `n` columns. Every k x k minor of the result is a
    /// minor of the original, so MDS is preserved.
    pub fn restrict_columns(&self, n: usize) -> Result<Self> {
        let cols: Vec<usize> = (0..n).collect();
        Ok(Self {
            field: self.field.clone(),
            matrix: self.matrix.select_columns(&cols),
            points: self.points[..n].to_vec(),
            coefficients: self.coefficients.clone(),
            det_c: self.det_c,
            pattern: self.pattern.restrict_columns(n)?,
        })
    }

    /// The first `rows` rows, as a plain matrix.
    pub fn top_rows(&self, rows: usize) -> Matrix {
        self.matrix.first_rows(rows)
    }

    pub fn to_doc(&self) -> MatrixDoc {
        MatrixDoc {
            field: self.field.to_string(),
            k: self.k(),
            n: self.n(),
            rows: self.matrix.to_rows(),
            points: Some(self.points.clone()),
            det_c: Some(self.det_c),
        }
    }
}

/// JSON form of a matrix: `{"field","k","n","rows","points","det_C"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub field: String,
    pub k: usize,
    pub n: usize,
    pub rows: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<u32>>,
    #[serde(rename = "det_C", default, skip_serializing_if = "Option::is_none")]
    pub det_c: Option<u32>,
}

impl MatrixDoc {
    pub fn plain(field: &FieldSpec, m: &Matrix) -> Self {
        MatrixDoc { field: field.to_string(), k: m.rows(), n: m.cols(), rows: m.to_rows(), points: None, det_c: None }
    }

    /// Parses the field and validates shape and entries.
    pub fn decode(&self) -> Result<(FieldSpec, Matrix)> {
        let field: FieldSpec = self.field.parse()?;
        let m = Matrix::from_rows(self.rows.clone())?;
        if m.rows() != self.k || (m.rows() > 0 && m.cols() != self.n) {
            return Err(GenError::ShapeMismatch(format!(
                "declared {}x{} but rows are {}x{}",
                self.k,
                self.n,
                m.rows(),
                m.cols()
            )));
        }
        field.check_matrix(&m)?;
        Ok((field, m))
    }
}

/// Evaluates `A[i][j] = p_i(α_j)`.
pub fn assemble_matrix(polys: &[RowPoly], pts: &EvaluationPoints) -> Result<GeneratorMatrix> {
    let field = pts.field().clone();
    let k = polys.len();
    let n = pts.len();
    if k == 0 || k > n {
        return Err(GenError::ShapeMismatch(format!("{k} rows for {n} points")));
    }
    let coefficients = coefficient_matrix(polys)?;
    let matrix = Matrix::from_fn(k, n, |i, j| eval_poly(&field, &polys[i].coeffs, pts.values[j]));
    let det_c = field.det(&coefficients)?;
    let sets = polys.iter().map(|p| p.zero_columns.clone()).collect();
    let pattern = ZeroPattern::new(n, k, sets)?;
    Ok(GeneratorMatrix { field, matrix, points: pts.values.clone(), coefficients, det_c, pattern })
}

/// `det C` as a function of the evaluation points, for a fixed maximal pattern.
pub(crate) struct DetEvaluator<'a> {
    field: &'a FieldSpec,
    k: usize,
    /// 0-based zero columns per row.
    zeros: Vec<Vec<usize>>,
}

impl<'a> DetEvaluator<'a> {
    pub(crate) fn new(field: &'a FieldSpec, pat: &ZeroPattern) -> Self {
        let zeros = pat.sets().iter().map(|s| s.iter().map(|&j| j - 1).collect()).collect();
        Self { field, k: pat.k(), zeros }
    }

    pub(crate) fn det(&self, points: &[u32], scratch: &mut Vec<u32>) -> u32 {
        let k = self.k;
        scratch.clear();
        scratch.resize(k * k, 0);
        let mut roots = Vec::with_capacity(k);
        for (i, zs) in self.zeros.iter().enumerate() {
            roots.clear();
            roots.extend(zs.iter().map(|&j| points[j]));
            let coeffs = poly_from_roots(self.field, &roots);
            scratch[i * k..i * k + coeffs.len()].copy_from_slice(&coeffs);
        }
        self.field.det_in_place(scratch, k)
    }
}

fn lex_first_from(
    eval: &DetEvaluator<'_>,
    q: u32,
    n: usize,
    tuple: &mut Vec<u32>,
    used: &mut Vec<bool>,
    scratch: &mut Vec<u32>,
    budget: &mut Option<u64>,
) -> Option<Vec<u32>> {
    if tuple.len() == n {
        if let Some(b) = budget {
            *b = b.checked_sub(1)?;
        }
        return (eval.det(tuple, scratch) != 0).then(|| tuple.clone());
    }
    for c in 0..q {
        if used[c as usize] {
            continue;
        }
        used[c as usize] = true;
        tuple.push(c);
        let found = lex_first_from(eval, q, n, tuple, used, scratch, budget);
        tuple.pop();
        used[c as usize] = false;
        if found.is_some() {
            return found;
        }
        if budget == &Some(0) {
            return None;
        }
    }
    None
}

/// Outcome of a bounded exhaustive search.
#[derive(Debug, PartialEq, Eq)]
pub(crate) enum SearchOutcome {
    Found(Vec<u32>),
    Exhausted,
    BudgetExceeded,
}

/// Lexicographically first tuple of distinct points extending `prefix` with
/// `det C != 0`. The first free coordinate is split across workers and the
/// earliest success wins, so the result does not depend on scheduling.
/// `leaf_budget` caps the number of complete tuples examined per branch.
pub(crate) fn lex_first_points(
    field: &FieldSpec,
    pat: &ZeroPattern,
    prefix: &[u32],
    leaf_budget: Option<u64>,
    exec: Execution,
) -> SearchOutcome {
    let n = pat.n();
    let q = field.order();
    let eval = DetEvaluator::new(field, pat);
    let mut base_used = vec![false; q as usize];
    for &v in prefix {
        base_used[v as usize] = true;
    }
    if prefix.len() == n {
        let mut scratch = Vec::new();
        return if eval.det(prefix, &mut scratch) != 0 {
            SearchOutcome::Found(prefix.to_vec())
        } else {
            SearchOutcome::Exhausted
        };
    }
    let branches = par::find_map_first(exec, q as usize, |c| {
        if base_used[c] {
            return None;
        }
        let mut used = base_used.clone();
        used[c] = true;
        let mut tuple = prefix.to_vec();
        tuple.push(c as u32);
        let mut scratch = Vec::new();
        let mut budget = leaf_budget;
        match lex_first_from(&eval, q, n, &mut tuple, &mut used, &mut scratch, &mut budget) {
            Some(t) => Some(Ok(t)),
            None if budget == Some(0) => Some(Err(())),
            None => None,
        }
    });
    match branches {
        Some(Ok(t)) => SearchOutcome::Found(t),
        Some(Err(())) => SearchOutcome::BudgetExceeded,
        None => SearchOutcome::Exhausted,
    }
}

/// How a point set was certified.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Every acceptance decision was made by exhaustive search.
    Exact,
    /// Some candidates were accepted after random evaluation. A valid
    /// candidate is wrongly skipped with probability at most `miss_bound`.
    Probabilistic { random_steps: usize, trials: usize, miss_bound: f64 },
    /// Random points, resampled until `det C != 0`.
    Random { tries: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointSelection {
    pub points: EvaluationPoints,
    pub det_c: u32,
    pub certificate: Certificate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SequentialOptions {
    /// Exact certification is used once at most this many points remain free.
    pub grid_cap: usize,
    /// Random evaluations per candidate above the cap.
    pub trials: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for SequentialOptions {
    fn default() -> Self {
        Self { grid_cap: 12, trials: 64, seed: 0, exec: Execution::default() }
    }
}

fn selection_preconditions(pat: &ZeroPattern, field: &FieldSpec) -> Result<()> {
    check_maximal(pat)?;
    if (field.order() as usize) < pat.n() {
        return Err(GenError::FieldTooSmall { q: field.order(), needed: pat.n() });
    }
    if let Condition::Violated(w) = patterns::check_mds(pat) {
        return Err(GenError::ConditionViolated(w));
    }
    Ok(())
}

/// Chooses `α_1, α_2, ...` in turn, each as the smallest field element (in
/// canonical order) that keeps `det C · ∏ (α_j - α_i)` not identically zero
/// in the remaining points.
///
/// Once at most `grid_cap` points are free the remaining choices are made by
/// exhaustive search, whose first hit is the lexicographically first valid
/// completion; that completion is exactly what the later steps would pick,
/// so it is returned directly. Above the cap a candidate is accepted when one
/// of `trials` uniformly random completions is a valid point set.
pub fn select_points_sequential(
    pat: &ZeroPattern,
    field: &FieldSpec,
    opts: &SequentialOptions,
) -> Result<PointSelection> {
    selection_preconditions(pat, field)?;
    let n = pat.n();
    let q = field.order();
    let eval = DetEvaluator::new(field, pat);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut scratch = Vec::new();
    let mut prefix: Vec<u32> = Vec::with_capacity(n);
    let mut random_steps = 0;
    while prefix.len() < n {
        let step = prefix.len();
        if n - step <= opts.grid_cap + 1 {
            return match lex_first_points(field, pat, &prefix, None, opts.exec) {
                SearchOutcome::Found(values) => {
                    let det_c = eval.det(&values, &mut scratch);
                    let certificate = if random_steps == 0 {
                        Certificate::Exact
                    } else {
                        probabilistic(pat, q, random_steps, opts.trials)
                    };
                    Ok(PointSelection { points: EvaluationPoints::new(field, values)?, det_c, certificate })
                }
                _ if step == 0 => Err(GenError::NoValidPoints { field: field.to_string() }),
                _ => Err(GenError::CertificationInconclusive { step: step + 1 }),
            };
        }
        let mut tuple = vec![0u32; n];
        let accepted = (0..q).filter(|c| !prefix.contains(c)).find(|&c| {
            tuple[..step].copy_from_slice(&prefix);
            tuple[step] = c;
            let mut unused: Vec<u32> = (0..q).filter(|v| !tuple[..=step].contains(v)).collect();
            (0..opts.trials).any(|_| {
                // Uniform over distinct completions; conditioning on
                // distinctness does not raise the miss probability.
                let (picked, _) = unused.partial_shuffle(&mut rng, n - step - 1);
                tuple[step + 1..].copy_from_slice(picked);
                eval.det(&tuple, &mut scratch) != 0
            })
        });
        match accepted {
            Some(c) => prefix.push(c),
            None => return Err(GenError::CertificationInconclusive { step: step + 1 }),
        }
        random_steps += 1;
    }
    unreachable!("the exact branch always runs for the final point")
}

/// Schwartz-Zippel bound for skipping a valid candidate: the target
/// polynomial has total degree at most `k(k-1)/2 + n(n-1)/2`.
fn probabilistic(pat: &ZeroPattern, q: u32, random_steps: usize, trials: usize) -> Certificate {
    let (k, n) = (pat.k() as f64, pat.n() as f64);
    let degree = k * (k - 1.0) / 2.0 + n * (n - 1.0) / 2.0;
    let miss_bound = (degree / q as f64).min(1.0).powi(trials as i32);
    Certificate::Probabilistic { random_steps, trials, miss_bound }
}

/// Samples distinct points uniformly until `det C != 0`, at most `max_tries`
/// times. Deterministic for a given seed.
pub fn select_points_random(
    pat: &ZeroPattern,
    field: &FieldSpec,
    max_tries: usize,
    seed: u64,
) -> Result<PointSelection> {
    selection_preconditions(pat, field)?;
    let eval = DetEvaluator::new(field, pat);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scratch = Vec::new();
    for tries in 1..=max_tries {
        let values: Vec<u32> =
            index::sample(&mut rng, field.order() as usize, pat.n()).into_iter().map(|v| v as u32).collect();
        let det_c = eval.det(&values, &mut scratch);
        if det_c != 0 {
            let points = EvaluationPoints::new(field, values)?;
            return Ok(PointSelection { points, det_c, certificate: Certificate::Random { tries } });
        }
    }
    Err(GenError::TriesExhausted { tries: max_tries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointMode {
    #[default]
    Sequential,
    Random,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructOptions {
    /// Defaults to the smallest field with at least `n' + k - 1` elements.
    pub field: Option<FieldSpec>,
    pub mode: PointMode,
    pub seed: u64,
    pub max_tries: usize,
    pub grid_cap: usize,
    pub trials: usize,
    pub completion: CompletionStrategy,
    pub exec: Execution,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        Self {
            field: None,
            mode: PointMode::Sequential,
            seed: 0,
            max_tries: 64,
            grid_cap: 12,
            trials: 64,
            completion: CompletionStrategy::Greedy,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    /// The generator matrix on the original `n` columns.
    pub matrix: GeneratorMatrix,
    /// The maximal pattern actually realized (possibly on more columns).
    pub completion: Completion,
    /// `n + k - 1` for the input pattern.
    pub field_bound: usize,
    /// `n' + k - 1` after completion.
    pub completed_bound: usize,
    pub certificate: Certificate,
}

/// Full pipeline: complete the pattern, pick a field and points, assemble,
/// and check the zero pattern and every maximal minor before returning.
pub fn construct_mds(pat: &ZeroPattern, opts: &ConstructOptions) -> Result<Construction> {
    if let Condition::Violated(w) = patterns::check_mds(pat) {
        return Err(GenError::ConditionViolated(w));
    }
    let completion = patterns::complete_with(pat, opts.completion)?;
    let full = &completion.pattern;
    let (n, k, n2) = (pat.n(), pat.k(), full.n());
    let field = match &opts.field {
        Some(f) => f.clone(),
        None => FieldSpec::smallest_at_least((n2 + k - 1) as u64)?,
    };
    let selection = match opts.mode {
        PointMode::Sequential => {
            let seq = SequentialOptions { grid_cap: opts.grid_cap, trials: opts.trials, seed: opts.seed, exec: opts.exec };
            select_points_sequential(full, &field, &seq)?
        }
        PointMode::Random => select_points_random(full, &field, opts.max_tries, opts.seed)?,
    };
    let polys = build_row_polys(full, &selection.points)?;
    let built = assemble_matrix(&polys, &selection.points)?;
    let fail = |what: &str| GenError::ConstructionFailed(what.to_string());
    if !verify::verify_zero_pattern(&built.matrix, full, ZeroCheck::Strict).map_err(|e| fail(&e.to_string()))? {
        return Err(fail("zero pattern mismatch"));
    }
    let matrix = built.restrict_columns(n)?;
    match verify::verify_mds_with(&field, &matrix.matrix, &verify::MinorScan { exec: opts.exec, ..Default::default() }) {
        Ok(MdsVerdict::Ok) => {}
        Ok(MdsVerdict::Singular(w)) => return Err(fail(&format!("singular minor at columns {:?}", w.columns))),
        Err(e) => return Err(fail(&e.to_string())),
    }
    Ok(Construction {
        matrix,
        field_bound: n + k - 1,
        completed_bound: n2 + k - 1,
        completion,
        certificate: selection.certificate,
    })
}
