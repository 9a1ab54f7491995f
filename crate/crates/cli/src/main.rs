use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tiotest_core::exec::{campaign, Budget, CampaignConfig, ImplModel, InputCompletion, Verdict};
use tiotest_core::model::export::{to_dot, to_text};
use tiotest_core::model::{
    auto_complete_tp, check_deterministic, parse_automaton, product, validate_spec, validate_tp, Automaton,
};
use tiotest_core::pipeline::{synthesize_test_case, PipelineError, PipelineOptions, Synthesis};
use tiotest_core::semantics::{bounded_tioco, bounded_trace_equiv};

const OK: u8 = 0;
const VALIDATION: u8 = 1;
const IO: u8 = 2;
const UNSATISFIABLE: u8 = 3;
const DETERMINISM: u8 = 4;
const VIOLATION: u8 = 5;

#[derive(Parser)]
#[command(name = "tiotest", version, about = "Off-line test synthesis and execution for timed automata")]
struct Cli {
    /// Directory for artifacts and line-delimited records.
    #[arg(long, global = true, env = "TIOTEST_OUT", default_value = "tiotest-out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a specification, and optionally a test purpose and a deterministic product.
    Check {
        spec: PathBuf,
        tp: Option<PathBuf>,
        #[command(flatten)]
        models: ModelArgs,
    },
    /// Build the product of a specification and a test purpose.
    Product {
        spec: PathBuf,
        tp: PathBuf,
        #[arg(long)]
        auto_complete_tp: bool,
    },
    /// Synthesize the tester, the winning-set hierarchy and a strategy.
    Synth {
        spec: PathBuf,
        tp: PathBuf,
        #[command(flatten)]
        models: ModelArgs,
    },
    /// Run synthesized test cases against implementations.
    Run {
        spec: PathBuf,
        #[arg(required = true)]
        tps: Vec<PathBuf>,
        /// Implementation models, at least one.
        #[arg(long = "impl", required = true)]
        impls: Vec<PathBuf>,
        #[command(flatten)]
        models: ModelArgs,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        fairness_bound: u32,
        /// Seed or inclusive range `a..b`; repeatable. Defaults to 1..20.
        #[arg(long = "seed")]
        seeds: Vec<String>,
        /// `CASE:IMPL` pair that must fail for some seed; repeatable.
        #[arg(long)]
        expect_fail: Vec<String>,
        #[arg(long, value_enum, default_value_t = Completion::Absorb)]
        completion: Completion,
        /// Report fail instead of pass on conformant implementations.
        #[arg(long, hide = true)]
        force_fail: bool,
    },
    /// Bounded conformance and trace-equivalence checks.
    Oracle {
        #[command(subcommand)]
        check: OracleCheck,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Deterministic product to use instead of the computed one.
    #[arg(long)]
    dp: Option<PathBuf>,
    /// Depth of the bounded trace checks.
    #[arg(long, default_value_t = 8, value_parser = positive)]
    horizon: usize,
    /// Complete the test purpose with self-loops under complement guards.
    #[arg(long)]
    auto_complete_tp: bool,
}

#[derive(Subcommand)]
enum OracleCheck {
    /// Is IMPL tioco-conformant to SPEC up to the horizon?
    Tioco {
        imp: PathBuf,
        spec: PathBuf,
        #[arg(long, default_value_t = 8, value_parser = positive)]
        horizon: usize,
    },
    /// Do A and B have the same traces up to the horizon?
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 8, value_parser = positive)]
        horizon: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Completion {
    Absorb,
    Explicit,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

struct Failure {
    code: u8,
    message: String,
}

type Outcome = Result<u8, Failure>;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

struct Session {
    out: PathBuf,
    records: Vec<Value>,
}

impl Session {
    fn record(&mut self, v: Value) {
        self.records.push(v);
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf, Failure> {
        fs::create_dir_all(&self.out).map_err(|e| fail(IO, format!("{}: {e}", self.out.display())))?;
        let path = self.out.join(name);
        fs::write(&path, contents).map_err(|e| fail(IO, format!("{}: {e}", path.display())))?;
        Ok(path)
    }

    fn flush(&self, command: &str) -> Result<(), Failure> {
        let lines: String = self.records.iter().map(|r| format!("{r}\n")).collect();
        self.write(&format!("{command}.jsonl"), &lines).map(|_| ())
    }
}

fn load(path: &Path) -> Result<Automaton, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(IO, format!("{}: {e}", path.display())))?;
    parse_automaton(&text).map_err(|e| fail(IO, format!("{}: {e}", path.display())))
}

fn seeds(specs: &[String]) -> Result<Vec<u64>, Failure> {
    if specs.is_empty() {
        return Ok((1..=20).collect());
    }
    let mut out = Vec::new();
    for s in specs {
        let bad = || fail(VALIDATION, format!("bad seed {s:?}, expected N or A..B"));
        match s.split_once("..") {
            Some((a, b)) => {
                let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(s.trim().parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn options(m: &ModelArgs) -> Result<PipelineOptions, Failure> {
    let dp = m.dp.as_deref().map(load).transpose()?;
    Ok(PipelineOptions { dp, horizon: m.horizon, auto_complete_tp: m.auto_complete_tp })
}

fn pipeline(s: &mut Session, spec: &Automaton, tp: &Automaton, opts: &PipelineOptions) -> Result<Synthesis, Failure> {
    synthesize_test_case(spec, tp, opts).map_err(|e| {
        let (code, property) = match &e {
            PipelineError::Validation(r) => {
                let first = r.issues.first().map(|i| i.property.name()).unwrap_or("validation");
                (VALIDATION, first)
            }
            PipelineError::Model(_) | PipelineError::Semantics(_) => (VALIDATION, "model"),
            PipelineError::Nondeterministic(_) => (DETERMINISM, "determinism"),
            PipelineError::NotEquivalent(_) => (DETERMINISM, "trace-equivalence"),
            PipelineError::Unsatisfiable(_) => (UNSATISFIABLE, "satisfiability"),
        };
        s.record(json!({"record": "error", "property": property, "message": e.to_string()}));
        fail(code, e.to_string())
    })
}

fn cmd_check(s: &mut Session, spec: &Path, tp: Option<&Path>, m: &ModelArgs) -> Outcome {
    let spec = load(spec)?;
    let mut report = validate_spec(&spec);
    if let Some(tp) = tp {
        let tp = load(tp)?;
        let tp = if m.auto_complete_tp { auto_complete_tp(&tp) } else { tp };
        let r = validate_tp(&tp, &spec);
        report.checked.extend(r.checked);
        report.issues.extend(r.issues);
    }
    for p in &report.checked {
        let issue = report.issues.iter().find(|i| i.property == *p);
        s.record(json!({
            "record": "property",
            "property": p.name(),
            "ok": issue.is_none(),
            "location": issue.and_then(|i| i.location.clone()),
            "detail": issue.map(|i| i.detail.clone()),
        }));
    }
    print!("{report}");
    if let Some(first) = report.issues.first() {
        return Err(fail(VALIDATION, first.to_string()));
    }
    if let Some(dp) = &m.dp {
        let dp = load(dp)?;
        let det = check_deterministic(&dp);
        s.record(json!({"record": "property", "property": "determinism", "ok": det.is_deterministic(),
            "detail": det.issues.first().map(|i| i.to_string())}));
        if let Some(issue) = det.issues.first() {
            return Err(fail(DETERMINISM, format!("{}: {issue}", dp.name)));
        }
        println!("determinism: ok ({})", dp.name);
    }
    Ok(OK)
}

fn cmd_product(s: &mut Session, spec: &Path, tp: &Path, complete: bool) -> Outcome {
    let spec = load(spec)?;
    let tp = load(tp)?;
    let tp = if complete { auto_complete_tp(&tp) } else { tp };
    let p = product(&spec, &tp).map_err(|e| fail(VALIDATION, e.to_string()))?;
    let text = to_text(&p);
    let written = [s.write("product.ta", &text)?, s.write("product.dot", &to_dot(&p))?];
    let det = check_deterministic(&p);
    print!("{text}");
    match det.issues.first() {
        None => println!("# deterministic"),
        Some(i) => println!("# not deterministic: {i}"),
    }
    s.record(json!({
        "record": "product",
        "locations": p.locations.len(),
        "edges": p.edges.len(),
        "accept": p.accept.iter().map(|&l| p.locations[l].name.clone()).collect::<Vec<_>>(),
        "deterministic": det.is_deterministic(),
        "artifacts": written.iter().map(|w| w.display().to_string()).collect::<Vec<_>>(),
    }));
    Ok(OK)
}

fn cmd_synth(s: &mut Session, spec: &Path, tp: &Path, m: &ModelArgs) -> Outcome {
    let opts = options(m)?;
    let spec = load(spec)?;
    let tp = load(tp)?;
    let syn = pipeline(s, &spec, &tp, &opts)?;
    let strategy = serde_json::to_string_pretty(&syn.strategy.to_json()).expect("json serializes") + "\n";
    let written = [
        s.write("strategy.json", &strategy)?,
        s.write("ranks.txt", &syn.strategy.table())?,
        s.write("tester.ta", &to_text(&syn.tester.automaton))?,
    ];
    println!("initial rank {} after {} iterations", syn.ranks.init_rank, syn.ranks.iterations);
    print!("{}", syn.strategy.table());
    s.record(json!({
        "record": "synthesis",
        "tester_locations": syn.tester.automaton.locations.len(),
        "levels": syn.ranks.levels.iter().map(Vec::len).collect::<Vec<_>>(),
        "init_rank": syn.ranks.init_rank.to_string(),
        "moves": syn.strategy.len(),
        "artifacts": written.iter().map(|w| w.display().to_string()).collect::<Vec<_>>(),
    }));
    Ok(OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    s: &mut Session,
    spec: &Path,
    tps: &[PathBuf],
    impls: &[PathBuf],
    m: &ModelArgs,
    budget: Budget,
    fairness_bound: u32,
    seed_args: &[String],
    expect_fail: &[String],
    completion: Completion,
    force_fail: bool,
) -> Outcome {
    if m.dp.is_some() && tps.len() > 1 {
        return Err(fail(VALIDATION, "--dp applies to a single test purpose"));
    }
    let seeds = seeds(seed_args)?;
    let opts = options(m)?;
    let spec = load(spec)?;
    let mut cases = Vec::new();
    for tp in tps {
        let tp = load(tp)?;
        let name = tp.name.clone();
        cases.push(pipeline(s, &spec, &tp, &opts)?.test_case(name));
    }
    let completion = match completion {
        Completion::Absorb => InputCompletion::AbsorbSelfLoop,
        Completion::Explicit => InputCompletion::Explicit,
    };
    let mut models = Vec::new();
    for path in impls {
        let mut imp = ImplModel::from_automaton(load(path)?, completion)
            .map_err(|e| fail(VALIDATION, format!("{}: {e}", path.display())))?;
        imp.check_against(&spec, m.horizon).map_err(|e| fail(VALIDATION, e.to_string()))?;
        models.push(imp);
    }
    let mut pairs = Vec::new();
    for p in expect_fail {
        let (case, imp) = p.split_once(':').ok_or_else(|| fail(VALIDATION, format!("bad pair {p:?}, expected CASE:IMPL")))?;
        if !cases.iter().any(|c| c.name == case) || !models.iter().any(|i| i.name() == imp) {
            return Err(fail(VALIDATION, format!("unknown test case or implementation in {p:?}")));
        }
        pairs.push((case.to_string(), imp.to_string()));
    }
    let cfg = CampaignConfig { budget, fairness_bound, seeds, expect_fail: pairs, force_fail };
    let report = campaign(&spec, &cases, &models, &cfg).map_err(|e| fail(VALIDATION, e.to_string()))?;
    let written = s.write("campaign.jsonl", &report.json_lines())?;
    print!("{report}");
    s.record(json!({
        "record": "campaign",
        "runs": report.rows.len(),
        "pass": report.count(Verdict::Pass),
        "fail": report.count(Verdict::Fail),
        "running": report.count(Verdict::Running),
        "inconclusive": report.inconclusive(),
        "soundness": report.soundness,
        "strictness": report.strictness,
        "precision": report.precision,
        "exhaustiveness": report.exhaustiveness,
        "violations": report.violations,
        "artifacts": [written.display().to_string()],
    }));
    match report.violated() {
        Some(p) => Err(fail(VIOLATION, format!("campaign violation: {p}"))),
        None => Ok(OK),
    }
}

fn cmd_oracle(s: &mut Session, check: &OracleCheck) -> Outcome {
    match check {
        OracleCheck::Tioco { imp, spec, horizon } => {
            let (imp, spec) = (load(imp)?, load(spec)?);
            let r = bounded_tioco(&imp, &spec, *horizon).map_err(|e| fail(VALIDATION, e.to_string()))?;
            let witness = r.violation.as_ref().map(|v| v.to_string());
            s.record(json!({"record": "tioco", "implementation": imp.name, "specification": spec.name,
                "horizon": horizon, "conformant": r.conformant(), "words": r.words, "witness": witness}));
            match witness {
                None => {
                    println!("{} tioco {} up to horizon {horizon} ({} words)", imp.name, spec.name, r.words);
                    Ok(OK)
                }
                Some(w) => Err(fail(VIOLATION, format!("tioco: {w}"))),
            }
        }
        OracleCheck::Equiv { a, b, horizon } => {
            let (a, b) = (load(a)?, load(b)?);
            let r = bounded_trace_equiv(&a, &b, *horizon).map_err(|e| fail(VALIDATION, e.to_string()))?;
            s.record(json!({"record": "equiv", "left": a.name, "right": b.name, "horizon": horizon,
                "equivalent": r.equivalent(), "words": r.words, "witness": r.witness.as_ref().map(|w| w.to_string())}));
            if r.equivalent() {
                println!("{} and {}: {r}", a.name, b.name);
                Ok(OK)
            } else {
                Err(fail(VIOLATION, format!("trace-equivalence: {r}")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut s = Session { out: cli.out.clone(), records: Vec::new() };
    let (name, outcome) = match &cli.command {
        Command::Check { spec, tp, models } => ("check", cmd_check(&mut s, spec, tp.as_deref(), models)),
        Command::Product { spec, tp, auto_complete_tp } => ("product", cmd_product(&mut s, spec, tp, *auto_complete_tp)),
        Command::Synth { spec, tp, models } => ("synth", cmd_synth(&mut s, spec, tp, models)),
        Command::Run {
            spec,
            tps,
            impls,
            models,
            restarts,
            steps,
            fairness_bound,
            seeds,
            expect_fail,
            completion,
            force_fail,
        } => (
            "run",
            cmd_run(
                &mut s,
                spec,
                tps,
                impls,
                models,
                Budget { restarts: *restarts, steps: *steps },
                *fairness_bound,
                seeds,
                expect_fail,
                *completion,
                *force_fail,
            ),
        ),
        Command::Oracle { check } => ("oracle", cmd_oracle(&mut s, check)),
    };
    let code = match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            if f.code == UNSATISFIABLE && !f.message.starts_with("UNSATISFIABLE") {
                eprintln!("UNSATISFIABLE");
            }
            s.record(json!({"record": "exit", "code": f.code, "message": f.message}));
            f.code
        }
    };
    if code == OK {
        s.record(json!({"record": "exit", "code": OK}));
    }
    if let Err(f) = s.flush(name) {
        eprintln!("error: {}", f.message);
        return ExitCode::from(IO);
    }
    ExitCode::from(code)
}
