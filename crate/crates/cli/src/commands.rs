use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::anyhow;
use serde_json::json;
use sparse_mds::genmatrix::{Certificate, MatrixDoc, PointMode};
use sparse_mds::patterns::{self, CompletionStrategy};
use sparse_mds::symcore::generate::lemma_instances;
use sparse_mds::symcore::lemmas::{applicable, run_application, run_suite, Lemma};
use sparse_mds::symcore::{
    check_vk, check_vstar, gen_family, independent, Independence, IndependenceMode, RandomizedOptions, SymError,
    VectorSystem, VkCondition,
};
use sparse_mds::verify::{self, MinorOrder, MinorScan, ZeroCheck};
use sparse_mds::{
    construct_mds, Condition, ConstructOptions, Execution, FieldSpec, GenError, Matrix, MdsVerdict, VerifyError,
    ZeroPattern,
};

use crate::report::{cap, input, CliError, Inputs, Outcome, EXIT_CAP, EXIT_NEGATIVE, EXIT_OK};
use crate::{
    BenchArgs, Cli, Command, CompletionArg, ConstructArgs, EmitArg, IndepMode, ModeArg, OrderArg,
};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli, inputs: &mut Inputs) -> Result<Outcome> {
    match &cli.command {
        Command::Check { pattern, d } => check(inputs, pattern, *d),
        Command::Construct(a) => construct(inputs, a, cli.seed),
        Command::Verify { matrix, pattern, at_least, order } => {
            verify_cmd(inputs, matrix, pattern.as_deref(), *at_least, *order)
        }
        Command::Mindist { matrix, budget, .. } => mindist(inputs, matrix, *budget),
        Command::Minfield { pattern, qmax, cap } => minfield(inputs, pattern, *qmax, *cap),
        Command::Indep { system, mode, trials, field } => indep(inputs, system, *mode, *trials, field.as_deref(), cli.seed),
        Command::VstarCheck { system, plain } => vstar(inputs, system, *plain),
        Command::Lemmas { systems, generate, trials } => lemmas(inputs, systems, *generate, *trials, cli.seed),
        Command::Bench(a) => bench(a),
    }
}

fn parse_field(s: &str) -> Result<FieldSpec> {
    s.parse().map_err(|e| input(anyhow!("--field {s}: {e}")))
}

fn read_matrix(inputs: &mut Inputs, path: &Path) -> Result<(FieldSpec, Matrix)> {
    let doc: MatrixDoc = inputs.json(path)?;
    doc.decode().map_err(|e| input(anyhow!("{}: {e}", path.display())))
}

fn check(inputs: &mut Inputs, path: &Path, d: Option<usize>) -> Result<Outcome> {
    let pat: ZeroPattern = inputs.json(path)?;
    let cond = match d {
        None => patterns::check_mds(&pat),
        Some(d) => patterns::distance_condition_check(&pat, d).map_err(input)?,
    };
    Ok(condition_outcome(&pat, d, cond))
}

fn condition_outcome(pat: &ZeroPattern, d: Option<usize>, cond: Condition) -> Outcome {
    let result = json!({ "n": pat.n(), "k": pat.k(), "d": d });
    match cond {
        Condition::Satisfied => Outcome::new("satisfied", EXIT_OK, result).summary("condition satisfied"),
        Condition::Violated(w) => {
            let summary = format!("condition violated: {w}");
            Outcome::new("violated", EXIT_NEGATIVE, result).witness(&w).summary(summary)
        }
    }
}

fn construct(inputs: &mut Inputs, a: &ConstructArgs, seed: u64) -> Result<Outcome> {
    let original: ZeroPattern = inputs.json(&a.pattern)?;
    let pat = match a.d {
        None => original.clone(),
        Some(d) => match patterns::distance_condition_check(&original, d).map_err(input)? {
            Condition::Satisfied => patterns::distance_reduce(&original, d).map_err(input)?,
            c => return Ok(condition_outcome(&original, Some(d), c)),
        },
    };
    let opts = ConstructOptions {
        field: a.field.as_deref().map(parse_field).transpose()?,
        mode: match a.mode {
            ModeArg::Sequential => PointMode::Sequential,
            ModeArg::Random => PointMode::Random,
        },
        seed,
        max_tries: a.max_tries,
        grid_cap: a.grid_cap,
        trials: a.trials,
        completion: match a.completion {
            CompletionArg::Greedy => CompletionStrategy::Greedy,
            CompletionArg::PadOnly => CompletionStrategy::PadOnly,
        },
        exec: Execution::default(),
    };
    let built = match construct_mds(&pat, &opts) {
        Ok(c) => c,
        Err(GenError::ConditionViolated(w)) => return Ok(condition_outcome(&pat, a.d, Condition::Violated(w))),
        Err(e) => return Err(cap(e)),
    };
    let gm = &built.matrix;
    let field = gm.field.clone();

    let (doc, distance) = match a.d {
        None => (gm.to_doc(), None),
        Some(_) => {
            let top = gm.top_rows(original.k());
            let dist = verify::min_distance(&field, &top, 1_000_000).map_err(cap)?;
            (MatrixDoc::plain(&field, &top), Some(dist))
        }
    };
    let ok = match (a.d, distance) {
        (Some(d), Some(dist)) => dist >= d,
        _ => true,
    };
    let result = json!({
        "field": field.to_string(),
        "k": doc.k,
        "n": doc.n,
        "points": &gm.points,
        "det_C": gm.det_c,
        "certificate": &built.certificate,
        "completion": built.completion.to_doc(),
        "field_bound": built.field_bound,
        "completed_bound": built.completed_bound,
        "mds_verdict": "ok",
        "target_distance": a.d,
        "min_distance": distance,
    });
    let primary = match a.emit {
        EmitArg::Json => serde_json::to_string_pretty(&doc).expect("matrices serialize") + "\n",
        EmitArg::Csv => to_csv(&doc.rows)?,
    };
    let kind = if a.d.is_some() { "generator matrix" } else { "MDS matrix" };
    let mut summary = format!("{}x{} {kind} over GF({field})", doc.k, doc.n);
    if let Certificate::Probabilistic { miss_bound, .. } = built.certificate {
        summary += &format!(", points certified probabilistically (miss bound {miss_bound:.2e})");
    }
    if let Some(dist) = distance {
        summary += &format!(", minimum distance {dist}");
    }
    let (verdict, exit) = if ok { ("ok", EXIT_OK) } else { ("distance_too_small", EXIT_NEGATIVE) };
    Ok(Outcome::new(verdict, exit, result).primary(primary).summary(summary))
}

fn to_csv(rows: &[Vec<u32>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| cap(anyhow!(e)))?;
    }
    let bytes = w.into_inner().map_err(|e| cap(anyhow!(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv of integers is ascii"))
}

fn verify_cmd(
    inputs: &mut Inputs,
    path: &Path,
    pattern: Option<&Path>,
    at_least: bool,
    order: OrderArg,
) -> Result<Outcome> {
    let (field, m) = read_matrix(inputs, path)?;
    let zeros_ok = match pattern {
        None => None,
        Some(p) => {
            let pat: ZeroPattern = inputs.json(p)?;
            let mode = if at_least { ZeroCheck::AtLeast } else { ZeroCheck::Strict };
            Some(verify::verify_zero_pattern(&m, &pat, mode).map_err(input)?)
        }
    };
    let scan = MinorScan {
        order: match order {
            OrderArg::Lex => MinorOrder::Lexicographic,
            OrderArg::RevolvingDoor => MinorOrder::RevolvingDoor,
        },
        exec: Execution::default(),
    };
    let verdict = verify::verify_mds_with(&field, &m, &scan).map_err(input)?;
    let result = json!({
        "field": field.to_string(),
        "k": m.rows(),
        "n": m.cols(),
        "minors": verify::binomial(m.cols(), m.rows()).to_string(),
        "mds": verdict.is_ok(),
        "zero_pattern": zeros_ok,
    });
    let pass = verdict.is_ok() && zeros_ok != Some(false);
    let mut out = Outcome::new(if pass { "ok" } else { "fail" }, if pass { EXIT_OK } else { EXIT_NEGATIVE }, result);
    let mut summary = match &verdict {
        MdsVerdict::Ok => "every maximal minor is nonsingular".to_string(),
        MdsVerdict::Singular(w) => format!("singular minor at columns {:?}", w.columns),
    };
    if zeros_ok == Some(false) {
        summary += "; zero pattern does not match";
    }
    if let MdsVerdict::Singular(w) = &verdict {
        out = out.witness(w);
    }
    Ok(out.summary(summary))
}

fn mindist(inputs: &mut Inputs, path: &Path, budget: u128) -> Result<Outcome> {
    let (field, m) = read_matrix(inputs, path)?;
    let d = match verify::min_distance(&field, &m, budget) {
        Ok(d) => d,
        Err(e @ VerifyError::BudgetExceeded { .. }) => return Err(cap(e)),
        Err(e) => return Err(input(e)),
    };
    let bound = m.cols() + 1 - m.rows().min(m.cols());
    let result = json!({ "min_distance": d, "singleton_bound": bound, "mds": d == bound });
    Ok(Outcome::new("ok", EXIT_OK, result)
        .primary(format!("{d}\n"))
        .summary(format!("minimum distance {d} (Singleton bound {bound})")))
}

fn minfield(inputs: &mut Inputs, path: &Path, qmax: u32, search_cap: u64) -> Result<Outcome> {
    let pat: ZeroPattern = inputs.json(path)?;
    if let c @ Condition::Violated(_) = patterns::check_mds(&pat) {
        return Ok(condition_outcome(&pat, None, c));
    }
    let completion = patterns::complete_to_maximal(&pat).map_err(input)?;
    let report = match verify::min_field_search(&completion.pattern, qmax, search_cap, Execution::default()) {
        Ok(r) => r,
        Err(e @ VerifyError::SearchSpaceTooLarge { .. }) => return Err(cap(e)),
        Err(e) => return Err(input(e)),
    };
    let summary = match report.smallest_feasible {
        Some(q) => format!("smallest GRS-feasible field: GF({q}); n+k-1 = {}", report.grs_bound),
        None => format!("no GRS realization over any field of order <= {qmax}"),
    };
    let (verdict, exit) = match report.smallest_feasible {
        Some(_) => ("feasible", EXIT_OK),
        None => ("none_found", EXIT_NEGATIVE),
    };
    let result = json!({ "completion": completion.to_doc(), "search": report });
    Ok(Outcome::new(verdict, exit, result).summary(summary))
}

fn read_system(inputs: &mut Inputs, path: &Path) -> Result<VectorSystem> {
    inputs.json(path)
}

fn sym_error(e: SymError) -> CliError {
    match e {
        SymError::ExactModeCapExceeded { .. } | SymError::AmbientTooLarge { .. } => cap(e),
        e => input(e),
    }
}

fn indep(
    inputs: &mut Inputs,
    path: &Path,
    mode: IndepMode,
    trials: usize,
    field: Option<&str>,
    seed: u64,
) -> Result<Outcome> {
    let sys = read_system(inputs, path)?;
    let fam = gen_family(&sys).map_err(sym_error)?;
    let mut opts = RandomizedOptions { trials, seed, ..Default::default() };
    if let Some(f) = field {
        opts.field = parse_field(f)?;
    }
    let mode = match mode {
        IndepMode::Exact => IndependenceMode::Exact,
        IndepMode::Randomized => IndependenceMode::Randomized,
    };
    let report = independent(&fam, mode, &opts).map_err(sym_error)?;
    let summary = format!("{} polynomials, rank {}: {}", report.size, report.rank, match &report.verdict {
        Independence::Independent => "independent",
        Independence::Dependent(_) => "dependent",
    });
    let mut out = match &report.verdict {
        Independence::Independent => Outcome::new("independent", EXIT_OK, &report),
        Independence::Dependent(w) => {
            let o = Outcome::new("dependent", EXIT_NEGATIVE, &report);
            match w {
                Some(w) => o.witness(w),
                None => o,
            }
        }
    };
    out.result["family"] = json!(fam.polys().map(|p| p.to_string()).collect::<Vec<_>>());
    Ok(out.summary(summary))
}

fn vstar(inputs: &mut Inputs, path: &Path, plain: bool) -> Result<Outcome> {
    let sys = read_system(inputs, path)?;
    let cond = if plain { check_vk(&sys) } else { check_vstar(&sys) };
    let result = json!({ "n": sys.n(), "k": sys.k(), "m": sys.m(), "property": if plain { "V(k)" } else { "V*(k)" } });
    Ok(match cond {
        VkCondition::Satisfied => Outcome::new("satisfied", EXIT_OK, result).summary("property holds"),
        VkCondition::Violated(v) => {
            let summary = format!("property fails: {v}");
            Outcome::new("violated", EXIT_NEGATIVE, result).witness(&v).summary(summary)
        }
    })
}

fn lemmas(
    inputs: &mut Inputs,
    paths: &[PathBuf],
    generate: Option<usize>,
    trials: usize,
    seed: u64,
) -> Result<Outcome> {
    if paths.is_empty() && generate.is_none() {
        return Err(input(anyhow!("give system files or --generate N")));
    }
    let opts = RandomizedOptions { trials, seed, ..Default::default() };
    let mut given = Vec::new();
    for p in paths {
        given.push(read_system(inputs, p)?);
    }
    let mut suites = Vec::new();
    let mut explicit = Vec::new();
    for lemma in Lemma::ALL {
        if let Some(count) = generate {
            suites.push(run_suite(lemma, &lemma_instances(lemma, count, seed), &opts));
        }
        for (sys, path) in given.iter().zip(paths) {
            if let Some(app) = applicable(lemma, sys) {
                let outcome = run_application(sys, &app, &opts).map_err(sym_error)?;
                explicit.push(json!({ "file": path.display().to_string(), "application": app, "outcome": outcome }));
            }
        }
    }
    let suites_ok = suites.iter().all(|s| s.all_passed());
    let explicit_ok = explicit.iter().all(|e| {
        e["outcome"]["claims"].as_array().is_some_and(|c| c.iter().all(|c| c["holds"] == json!(true)))
    });
    let mut summary: Vec<String> =
        suites.iter().map(|s| format!("{:?}: {}/{} passed", s.lemma, s.passed, s.instances)).collect();
    summary.push(format!("{} applications to given systems", explicit.len()));
    let pass = suites_ok && explicit_ok;
    let failures: Vec<_> = suites.iter().flat_map(|s| s.failures.iter()).collect();
    let mut out = Outcome::new(
        if pass { "ok" } else { "fail" },
        if pass { EXIT_OK } else { EXIT_NEGATIVE },
        json!({ "suites": suites, "applications": explicit }),
    );
    if !failures.is_empty() {
        out = out.witness(failures);
    }
    Ok(out.summary(summary.join("\n")))
}

fn bench(a: &BenchArgs) -> Result<Outcome> {
    let field = parse_field(&a.field)?;
    if a.k == 0 || a.k > a.n || a.n > field.order() as usize {
        return Err(input(anyhow!("need 1 <= k <= n <= q, got k = {}, n = {}, q = {}", a.k, a.n, field.order())));
    }
    if a.reps == 0 {
        return Err(input(anyhow!("--reps must be positive")));
    }
    let points: Vec<u32> = (0..a.n as u32).collect();
    let m = sparse_mds::genmatrix::vandermonde(&field, a.k, &points);
    let time = |exec: Execution| -> Result<(f64, bool)> {
        let mut best = f64::INFINITY;
        let mut ok = true;
        for _ in 0..a.reps {
            let t = Instant::now();
            let v = verify::verify_mds_with(&field, &m, &MinorScan { order: MinorOrder::Lexicographic, exec })
                .map_err(cap)?;
            best = best.min(t.elapsed().as_secs_f64() * 1e3);
            ok &= v.is_ok();
        }
        Ok((best, ok))
    };
    let (seq_ms, seq_ok) = time(Execution::Sequential)?;
    let (par_ms, par_ok) = time(Execution::Parallel)?;
    let threads = rayon::current_num_threads();
    let result = json!({
        "target": "minors",
        "field": field.to_string(),
        "k": a.k,
        "n": a.n,
        "minors": verify::binomial(a.n, a.k).to_string(),
        "reps": a.reps,
        "sequential_ms": seq_ms,
        "parallel_ms": par_ms,
        "threads": threads,
        "speedup": seq_ms / par_ms,
    });
    let ok = seq_ok && par_ok;
    let summary = format!(
        "{} minors of a {}x{} Vandermonde matrix over GF({field}): sequential {seq_ms:.1} ms, {threads} threads {par_ms:.1} ms",
        verify::binomial(a.n, a.k),
        a.k,
        a.n
    );
    Ok(Outcome::new(if ok { "ok" } else { "fail" }, if ok { EXIT_OK } else { EXIT_CAP }, result).summary(summary))
}
