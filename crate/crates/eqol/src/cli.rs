//! Command-line front end. [`run`] parses arguments, dispatches and returns the
//! exit code with everything that would be printed.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use eqol_core::checker::{
    fuzz_range, model_check, verify_derivation, CheckError, DerivationError, FuzzOptions, Schema, SchemaReport,
    StepFormula, StepStatus,
};
use eqol_core::eqmc::{EqmcError, Mode, Verdict};
use eqol_core::gqloop::{Guard, LoopError, Termination};
use eqol_core::lang::{
    eliminate_integrals, eliminate_integrals_within, parse_formula, parse_term, print_classical, print_formula,
    to_dnf, LangError,
};
use eqol_core::register::Register;
use eqol_core::scenarios::{bb84, bell};
use eqol_core::DEFAULT_TOL;
use serde_json::{json, Value};

use crate::io::{self, IoError};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_MODEL: i32 = 65;
pub const EXIT_UNSUPPORTED: i32 = 66;

#[derive(Debug, Parser)]
#[command(name = "eqol", version, about = "Model checking and derivation replay for exogenous quantum operator logic")]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Tolerance for comparisons, positivity, trace and termination checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide M |= formula.
    Check {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Probability values of terms.
    Eval {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long = "term", required = true)]
        terms: Vec<String>,
    },
    /// Disjunctive normal form, optionally after integral elimination.
    Dnf {
        #[arg(long)]
        formula: String,
        /// Replace integrals by sums of T operators.
        #[arg(long)]
        eliminate_integrals: bool,
        /// Register for integral elimination.
        #[arg(long, value_delimiter = ',')]
        qubits: Option<Vec<String>>,
        /// Register and admissible set for elimination; also evaluates every form.
        #[arg(long)]
        structure: Option<PathBuf>,
    },
    /// Replay a derivation script.
    Derive {
        #[arg(long)]
        script: PathBuf,
    },
    /// Check random axiom and template instances on random structures.
    FuzzSound {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 1)]
        min_qubits: usize,
        #[arg(long, default_value_t = 4)]
        max_qubits: usize,
        /// Restrict to these schemas (repeatable); default all.
        #[arg(long = "schema")]
        schemas: Vec<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Reachability query on a chain.
    Mc {
        #[arg(long)]
        chain: PathBuf,
        /// F, G, U or I.
        #[arg(long)]
        mode: String,
        #[arg(long)]
        formula: String,
        /// Defaults to 4^n + 8.
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Bounded termination of a generalized quantum loop.
    Loop {
        #[arg(long = "loop")]
        loop_file: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
    /// Bell-state entanglement checks and derivation.
    Bell {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// BB84 eavesdropping detection formula.
    Bb84 {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        eavesdrop: bool,
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
        /// Build the state as a dense matrix (N <= 2).
        #[arg(long)]
        dense: bool,
        /// Sifted positions, 1-based; default all.
        #[arg(long, value_delimiter = ',')]
        sift: Option<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(m: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_USAGE, message: m.to_string() }
    }

    fn model(m: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_MODEL, message: m.to_string() }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Read { .. } | IoError::Syntax(_) => Failure::usage(e),
            IoError::Json { .. } | IoError::Invalid(_) => Failure::model(e),
        }
    }
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Lang(_) => Failure::usage(e),
            _ => Failure::model(e),
        }
    }
}

impl From<LangError> for Failure {
    fn from(e: LangError) -> Self {
        Failure::usage(e)
    }
}

impl From<EqmcError> for Failure {
    fn from(e: EqmcError) -> Self {
        match e {
            EqmcError::NotClosed(_) | EqmcError::ZeroHorizon | EqmcError::Check(CheckError::Lang(_)) => {
                Failure::usage(e)
            }
            _ => Failure::model(e),
        }
    }
}

impl From<LoopError> for Failure {
    fn from(e: LoopError) -> Self {
        Failure::model(e)
    }
}

struct Report {
    code: i32,
    text: String,
    json: Value,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let json = cli.json;
    match execute(cli) {
        Ok(r) => {
            let stdout = if json { format!("{}\n", io::to_json_string(&r.json)) } else { r.text };
            Outcome { code: r.code, stdout, stderr: String::new() }
        }
        Err(f) => Outcome { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
    }
}

fn execute(cli: Cli) -> Result<Report, Failure> {
    let tol = cli.tol;
    if !tol.is_finite() || tol < 0.0 {
        return Err(Failure::usage(format!("--tol must be a non-negative number, got {tol}")));
    }
    match cli.command {
        Command::Check { structure, formula } => check(&structure, &formula, tol),
        Command::Eval { structure, terms } => eval(&structure, &terms, tol),
        Command::Dnf { formula, eliminate_integrals, qubits, structure } => {
            dnf(&formula, eliminate_integrals, qubits, structure, tol)
        }
        Command::Derive { script } => derive(&script),
        Command::FuzzSound { seed, instances, min_qubits, max_qubits, schemas, jobs } => {
            let opts = FuzzOptions { seed, instances, min_qubits, max_qubits, tol };
            fuzz(&opts, &schemas, jobs)
        }
        Command::Mc { chain, mode, formula, horizon } => mc(&chain, &mode, &formula, horizon, tol),
        Command::Loop { loop_file, input, max_steps } => run_loop(&loop_file, &input, max_steps, tol),
        Command::Bell { samples, seed } => bell_cmd(samples, seed, tol),
        Command::Bb84 { n, eavesdrop, threshold, dense, sift } => bb84_cmd(n, eavesdrop, threshold, dense, sift, tol),
    }
}

fn formula_arg(text: &str) -> Result<eqol_core::Formula, Failure> {
    parse_formula(text).map_err(|e| Failure::usage(format!("formula `{text}`: {e}")))
}

fn verdict_code(b: bool) -> i32 {
    if b {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

fn check(path: &Path, text: &str, tol: f64) -> Result<Report, Failure> {
    let f = formula_arg(text)?;
    let m = io::load_structure(path, tol)?;
    let start = Instant::now();
    let r = model_check(&m, &f, tol)?;
    let elapsed = start.elapsed();
    let mut out = String::new();
    writeln!(out, "formula: {}", print_formula(&f)).unwrap();
    writeln!(out, "qubits: {}  length: {}", r.num_qubits, r.length).unwrap();
    for a in &r.atoms {
        match (a.lhs, a.rhs) {
            (Some(l), Some(rv)) => writeln!(out, "  {:<40} {:.9} <= {:.9}  {}", a.text, l, rv, a.holds).unwrap(),
            _ => writeln!(out, "  {:<40} {}", a.text, a.holds).unwrap(),
        }
    }
    writeln!(out, "verdict: {}", if r.verdict { "SATISFIED" } else { "NOT SATISFIED" }).unwrap();
    writeln!(out, "time: {:.3} ms", elapsed.as_secs_f64() * 1e3).unwrap();
    let atoms: Vec<Value> =
        r.atoms.iter().map(|a| json!({"atom": a.text, "lhs": a.lhs, "rhs": a.rhs, "holds": a.holds})).collect();
    let json = json!({
        "command": "check",
        "formula": print_formula(&f),
        "verdict": r.verdict,
        "num_qubits": r.num_qubits,
        "length": r.length,
        "atoms": atoms,
        "tol": tol,
    });
    Ok(Report { code: verdict_code(r.verdict), text: out, json })
}

fn eval(path: &Path, terms: &[String], tol: f64) -> Result<Report, Failure> {
    let parsed = terms
        .iter()
        .map(|t| parse_term(t).map_err(|e| Failure::usage(format!("term `{t}`: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let m = io::load_structure(path, tol)?;
    let values = eqol_core::checker::eval_terms(&m, &parsed, tol)?;
    let mut out = String::new();
    let mut rows = Vec::new();
    for (t, v) in parsed.iter().zip(&values) {
        let text = eqol_core::lang::print_term(t);
        writeln!(out, "{text} = {v:.12}").unwrap();
        rows.push(json!({"term": text, "value": v}));
    }
    Ok(Report { code: EXIT_TRUE, text: out, json: json!({"command": "eval", "values": rows, "tol": tol}) })
}

fn dnf(
    text: &str,
    eliminate: bool,
    qubits: Option<Vec<String>>,
    structure: Option<PathBuf>,
    tol: f64,
) -> Result<Report, Failure> {
    let f = formula_arg(text)?;
    let m = structure.map(|p| io::load_structure(&p, tol)).transpose()?;
    let register = match (&m, qubits) {
        (Some(m), _) => Some(m.register().clone()),
        (None, Some(q)) => Some(Register::new(q).map_err(Failure::usage)?),
        (None, None) => None,
    };
    let source = if eliminate {
        let r = register.as_ref().ok_or_else(|| Failure::usage("--eliminate-integrals needs --qubits or --structure"))?;
        match &m {
            Some(m) => eliminate_integrals_within(&f, r, m.admissible())?,
            None => eliminate_integrals(&f, r)?,
        }
    } else {
        f.clone()
    };
    let d = to_dnf(&source)?;
    let normal = d.to_formula();
    let mut out = String::new();
    if eliminate {
        writeln!(out, "eliminated: {}", print_formula(&source)).unwrap();
    }
    writeln!(out, "atoms: {}", d.atoms.len()).unwrap();
    writeln!(out, "molecules: {}", d.molecules.len()).unwrap();
    writeln!(out, "dnf: {}", print_formula(&normal)).unwrap();
    let mut json = json!({
        "command": "dnf",
        "formula": print_formula(&f),
        "atoms": d.atoms.iter().map(print_formula).collect::<Vec<_>>(),
        "molecules": d.molecules.len(),
        "dnf": print_formula(&normal),
        "tol": tol,
    });
    if eliminate {
        json["eliminated"] = json!(print_formula(&source));
    }
    if let Some(m) = &m {
        let orig = eqol_core::checker::satisfies(m, &f, tol)?;
        let rewritten = eqol_core::checker::satisfies(m, &normal, tol)?;
        writeln!(out, "satisfied: original {orig}, normal form {rewritten}").unwrap();
        json["satisfied"] = json!({"original": orig, "normal_form": rewritten});
    }
    Ok(Report { code: EXIT_TRUE, text: out, json })
}

fn derive(path: &Path) -> Result<Report, Failure> {
    let script = io::load_derivation(path)?;
    let r = verify_derivation(&script).map_err(|e| match e {
        DerivationError::Parse { .. } => Failure::usage(e),
        DerivationError::IndexOutOfRange { .. } => Failure::model(e),
    })?;
    let mut out = String::new();
    let mut steps = Vec::new();
    for s in &r.steps {
        let text = match &s.formula {
            StepFormula::Quantum(f) => print_formula(f),
            StepFormula::Classical(c) => print_classical(c),
        };
        let reason = match &s.status {
            StepStatus::Accepted => None,
            StepStatus::Rejected(m) | StepStatus::Unsupported(m) => Some(m.clone()),
        };
        write!(out, "{:>3}  {:<11} {}", s.index, s.status.label(), text).unwrap();
        if let Some(m) = &reason {
            write!(out, "    ({m})").unwrap();
        }
        out.push('\n');
        steps.push(json!({
            "index": s.index,
            "formula": text,
            "status": s.status.label(),
            "reason": reason,
            "depends_on": s.depends_on.iter().collect::<Vec<_>>(),
        }));
    }
    let open: Vec<usize> = r.open_hypotheses().into_iter().collect();
    writeln!(out, "accepted {} of {}, rejected {}, unsupported {}", r.accepted(), r.steps.len(), r.rejected(), r.unsupported())
        .unwrap();
    if !open.is_empty() {
        writeln!(out, "last step rests on hypotheses {open:?}").unwrap();
    }
    let code = if r.rejected() > 0 {
        EXIT_FALSE
    } else if r.unsupported() > 0 {
        EXIT_UNSUPPORTED
    } else {
        EXIT_TRUE
    };
    let json = json!({
        "command": "derive",
        "steps": steps,
        "accepted": r.accepted(),
        "rejected": r.rejected(),
        "unsupported": r.unsupported(),
        "open_hypotheses": open,
        "valid": r.is_valid(),
    });
    Ok(Report { code, text: out, json })
}

/// Split `0..n` into `jobs` contiguous ranges.
pub fn partition_range(n: usize, jobs: usize) -> Vec<std::ops::Range<usize>> {
    let jobs = jobs.max(1);
    let (q, r) = (n / jobs, n % jobs);
    let mut out = Vec::with_capacity(jobs);
    let mut lo = 0;
    for j in 0..jobs {
        let hi = lo + q + usize::from(j < r);
        out.push(lo..hi);
        lo = hi;
    }
    out
}

fn fuzz_parallel(schema: Schema, opts: &FuzzOptions, jobs: usize) -> SchemaReport {
    let ranges = partition_range(opts.instances, jobs);
    let parts: Vec<SchemaReport> = std::thread::scope(|s| {
        let handles: Vec<_> = ranges.into_iter().map(|r| s.spawn(move || fuzz_range(schema, opts, r))).collect();
        handles.into_iter().map(|h| h.join().expect("fuzz worker panicked")).collect()
    });
    let mut report = SchemaReport::empty(schema);
    for p in parts {
        report.merge(p);
    }
    report
}

fn fuzz(opts: &FuzzOptions, names: &[String], jobs: usize) -> Result<Report, Failure> {
    if opts.min_qubits == 0 || opts.min_qubits > opts.max_qubits {
        return Err(Failure::usage("need 1 <= --min-qubits <= --max-qubits"));
    }
    if jobs == 0 {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    let all = Schema::all();
    let schemas = if names.is_empty() {
        all
    } else {
        names
            .iter()
            .map(|n| all.iter().copied().find(|s| s.name() == n).ok_or_else(|| Failure::usage(format!("unknown schema `{n}`"))))
            .collect::<Result<Vec<_>, _>>()?
    };
    let reports: Vec<SchemaReport> = schemas.iter().map(|s| fuzz_parallel(*s, opts, jobs)).collect();
    let passed = reports.iter().all(SchemaReport::passed);
    let mut out = String::new();
    let mut rows = Vec::new();
    for r in &reports {
        writeln!(out, "{:<10} {:>4}/{:<4} {}", r.schema.name(), r.satisfied, r.instances, if r.passed() { "ok" } else { "FAILED" })
            .unwrap();
        let cex: Vec<Value> = r
            .counterexamples
            .iter()
            .map(|c| {
                writeln!(out, "  #{} seed {}: {}", c.index, c.seed, c.formula).unwrap();
                writeln!(out, "    {}", c.structure.replace('\n', "\n    ")).unwrap();
                if let Some(e) = &c.error {
                    writeln!(out, "    error: {e}").unwrap();
                }
                json!({"index": c.index, "seed": c.seed, "formula": c.formula, "structure": c.structure, "error": c.error})
            })
            .collect();
        rows.push(json!({"schema": r.schema.name(), "instances": r.instances, "satisfied": r.satisfied, "counterexamples": cex}));
    }
    writeln!(out, "{}", if passed { "all schemas sound on the sample" } else { "counterexamples found" }).unwrap();
    let json = json!({
        "command": "fuzz-sound",
        "seed": opts.seed,
        "instances": opts.instances,
        "qubits": [opts.min_qubits, opts.max_qubits],
        "schemas": rows,
        "passed": passed,
        "tol": opts.tol,
    });
    Ok(Report { code: verdict_code(passed), text: out, json })
}

fn mc(path: &Path, mode: &str, text: &str, horizon: Option<usize>, tol: f64) -> Result<Report, Failure> {
    let mode: Mode = mode.parse().map_err(Failure::usage)?;
    let gamma = formula_arg(text)?;
    let chain = io::load_chain(path, tol)?;
    let horizon = horizon.unwrap_or_else(|| chain.default_horizon());
    let mut out = String::new();
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    writeln!(out, "query: {mode} {}  horizon {horizon}", print_formula(&gamma)).unwrap();
    for (i, rho) in chain.init().iter().enumerate() {
        let r = chain.check_reachability(rho, mode, &gamma, horizon, tol)?;
        let cycle = r.cycle.map(|c| json!({"start": c.start, "period": c.period}));
        write!(out, "init {i}: {}", r.verdict).unwrap();
        if let Some(c) = r.cycle {
            write!(out, "  (recurrence at step {} with period {})", c.start, c.period).unwrap();
        }
        out.push('\n');
        let labels: Vec<Vec<usize>> = if chain.ap().is_empty() {
            Vec::new()
        } else {
            let t = chain.trajectory(rho, r.values.len() - 1, tol)?;
            t.labels
        };
        rows.push(json!({
            "init": i,
            "verdict": r.verdict.to_string(),
            "cycle": cycle,
            "cycle_based": r.cycle_based,
            "values": r.values,
            "labels": labels,
        }));
        verdicts.push(r.verdict);
    }
    let code = if verdicts.iter().any(|v| matches!(v, Verdict::Fails(_))) {
        EXIT_FALSE
    } else if verdicts.iter().all(|v| matches!(v, Verdict::Holds(_))) {
        EXIT_TRUE
    } else {
        EXIT_UNKNOWN
    };
    let json = json!({
        "command": "mc",
        "mode": mode.to_string(),
        "formula": print_formula(&gamma),
        "horizon": horizon,
        "results": rows,
        "tol": tol,
    });
    Ok(Report { code, text: out, json })
}

fn run_loop(path: &Path, input: &Path, max_steps: usize, tol: f64) -> Result<Report, Failure> {
    let l = io::load_loop(path)?;
    let rho = io::load_density(input, tol)?;
    let run = l.run(&rho, max_steps)?;
    let verdict = l.terminates_within(&rho, max_steps, tol)?;
    let shown = match verdict {
        Termination::Terminated(n) => n,
        Termination::NotBy { .. } => max_steps,
    };
    let mut out = String::new();
    writeln!(out, "{:>4}  {:>14} {:>14} {:>14}", "n", "p_term", "p_nonterm", "mass").unwrap();
    for s in &run.steps[..=shown] {
        writeln!(out, "{:>4}  {:>14.12} {:>14.12} {:>14.12}", s.n, s.p_term, s.p_nonterm, s.mass).unwrap();
    }
    let mut json = json!({
        "command": "loop",
        "verdict": verdict.to_string(),
        "max_steps": max_steps,
        "steps": run.steps[..=shown]
            .iter()
            .map(|s| json!({"n": s.n, "p_term": s.p_term, "p_nonterm": s.p_nonterm, "mass": s.mass}))
            .collect::<Vec<_>>(),
        "tol": tol,
    });
    if let Termination::NotBy { residual, mass, .. } = verdict {
        json["residual"] = json!(residual);
        json["mass"] = json!(mass);
        writeln!(out, "residual nontermination probability {residual:.12}, mass {mass:.12}").unwrap();
    }
    writeln!(out, "verdict: {verdict}").unwrap();
    if let Guard::Valuations(_) = l.guard() {
        let r = l.terminates_via_eqmc(&rho, max_steps.max(1), tol)?;
        writeln!(out, "chain reduction: F int(guard) = O {}", r.verdict).unwrap();
        json["eqmc"] = json!(r.verdict.to_string());
    }
    let code = match verdict {
        Termination::Terminated(_) => EXIT_TRUE,
        Termination::NotBy { .. } => EXIT_FALSE,
    };
    Ok(Report { code, text: out, json })
}

fn bell_cmd(samples: usize, seed: u64, tol: f64) -> Result<Report, Failure> {
    let r = bell::bell_check(samples, seed, tol)?;
    let names = ["T[{};qB]", "T[qB;qB]", "T[{qb1};qB]", "T[{qb2};qB]"];
    let mut out = String::new();
    writeln!(out, "Bell state (|01> + |10>)/sqrt 2 on qb1, qb2").unwrap();
    for (n, v) in names.iter().zip(r.values) {
        writeln!(out, "  {n:<12} = {v:.12}").unwrap();
    }
    writeln!(out, "[qB] /\\ gamma holds: V = {{01,10}} {}, V = all {}", r.gamma_holds[0], r.gamma_holds[1]).unwrap();
    writeln!(out, "eta holds:           V = {{01,10}} {}, V = all {}", r.eta_holds[0], r.eta_holds[1]).unwrap();
    writeln!(
        out,
        "product structures satisfying gamma2 /\\ (O < T[qb1;qb1]) /\\ (O < T[qb2;qb2]): {} of {}",
        r.product_satisfying, r.samples
    )
    .unwrap();
    writeln!(
        out,
        "derivation: {} of {} steps accepted, {} rejected",
        r.derivation.accepted(),
        r.derivation.steps.len(),
        r.derivation.rejected()
    )
    .unwrap();
    let json = json!({
        "command": "bell",
        "values": r.values,
        "gamma_holds": r.gamma_holds,
        "eta_holds": r.eta_holds,
        "samples": r.samples,
        "seed": seed,
        "product_satisfying": r.product_satisfying,
        "derivation": {"steps": r.derivation.steps.len(), "accepted": r.derivation.accepted(), "rejected": r.derivation.rejected()},
        "passed": r.passed(),
        "tol": tol,
    });
    let _ = writeln!(out, "{}", io::to_json_string(&json));
    Ok(Report { code: verdict_code(r.passed()), text: out, json })
}

fn bb84_cmd(
    n: usize,
    eavesdrop: bool,
    threshold: f64,
    dense: bool,
    sift: Option<Vec<usize>>,
    tol: f64,
) -> Result<Report, Failure> {
    let sift: BTreeSet<usize> = match sift {
        Some(v) => v.into_iter().collect(),
        None => bb84::all_positions(n),
    };
    let r = bb84::bb84_check(n, eavesdrop, &sift, threshold, dense, tol).map_err(|e| match e {
        bb84::Bb84Error::Check(c) => Failure::from(c),
        other => Failure::usage(other),
    })?;
    let holds = r.thresholds[0].1;
    let mut out = String::new();
    writeln!(out, "BB84, N = {n}, {}", if eavesdrop { "intercept-resend eavesdropper" } else { "no eavesdropper" }).unwrap();
    writeln!(out, "joint state: exact mixture over all random choices (chosen instantiation)").unwrap();
    writeln!(out, "sifted positions: {:?}", r.sift).unwrap();
    writeln!(out, "  int(bases agree)  = {:.12}  ({})", r.antecedent, r.antecedent_exact).unwrap();
    writeln!(out, "  int(key mismatch) = {:.12}  ({})", r.consequent, r.consequent_exact).unwrap();
    writeln!(out, "  per-bit disturbance = {}", r.disturbance).unwrap();
    for (a, h) in &r.thresholds {
        writeln!(out, "  phi(a = {a}): {}", if *h { "satisfied" } else { "not satisfied" }).unwrap();
    }
    let json = json!({
        "command": "bb84",
        "n": n,
        "eavesdrop": eavesdrop,
        "sift": r.sift,
        "antecedent": r.antecedent,
        "consequent": r.consequent,
        "antecedent_exact": r.antecedent_exact.to_string(),
        "consequent_exact": r.consequent_exact.to_string(),
        "disturbance": r.disturbance.to_string(),
        "threshold": threshold,
        "satisfied": holds,
        "sweep": r.thresholds[1..].iter().map(|(a, h)| json!({"a": a, "satisfied": h})).collect::<Vec<_>>(),
        "tol": tol,
    });
    let _ = writeln!(out, "{}", io::to_json_string(&json));
    Ok(Report { code: verdict_code(holds), text: out, json })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_cover_in_order() {
        let r = partition_range(10, 3);
        assert_eq!(r, vec![0..4, 4..7, 7..10]);
        assert_eq!(partition_range(2, 4), vec![0..1, 1..2, 2..2, 2..2]);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["eqol"]).code, EXIT_USAGE);
        assert_eq!(run(["eqol", "frobnicate"]).code, EXIT_USAGE);
        assert_eq!(run(["eqol", "--help"]).code, 0);
        let o = run(["eqol", "mc", "--chain", "x.json", "--mode", "Z", "--formula", "QF"]);
        assert_eq!(o.code, EXIT_USAGE);
    }
}
