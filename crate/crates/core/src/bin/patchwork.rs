use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use patchwork::analyze::{analyze, Options};
use patchwork::constructions::ConstructionSpec;
use patchwork::io::Problem;
use patchwork::par::Mode;
use patchwork::render::{self, Copies};
use patchwork::verify::{check_instance, run_suite, Instance, SuiteConfig, SuiteReport};
use patchwork::Error;

/// Exact combinatorial patchworking: construct, analyze, render, verify.
#[derive(Parser)]
#[command(name = "patchwork", version)]
struct Cli {
    /// Run without data parallelism.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the problem file of a built-in construction.
    Construct(ConstructArgs),
    /// Run pipeline stages on a problem file and report.
    Analyze(AnalyzeArgs),
    /// Draw a planar patchwork as SVG or a surface as an OFF mesh.
    Render(RenderArgs),
    /// Run the randomized exact check suite, plus checks on given files.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// prop51, prop53, thm54, lemma56 or prop57 (also `prop51:2,4` style).
    name: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<i64>,
    /// Block counts for prop57: one value for all axes or three.
    #[arg(long, value_delimiter = ',')]
    k: Vec<i64>,
    /// Output path; standard output if absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long)]
    betti: bool,
    #[arg(long)]
    chi: bool,
    /// Mixed-face census by dimension and carrier face.
    #[arg(long)]
    census: bool,
    /// Critical-cell histogram and audits.
    #[arg(long)]
    critical: bool,
    /// Partial-sum bound orders; also reports the totals.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    bounds: Vec<usize>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "format")]
struct Format {
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    off: bool,
}

#[derive(Args)]
struct RenderArgs {
    file: PathBuf,
    #[command(flatten)]
    format: Format,
    /// Draw only the base triangulation, not its reflections (SVG).
    #[arg(long)]
    base: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Extra problem files to audit.
    files: Vec<PathBuf>,
    #[arg(long, default_value_t = SuiteConfig::default().instances)]
    instances: usize,
    #[arg(long, default_value_t = SuiteConfig::default().seed)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

/// Exit status: 2 for bad input or parameters, 3 for a failed exact check.
enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn construct(args: &ConstructArgs) -> Result<(), Failure> {
    let need = |v: Option<i64>, what: &str| v.ok_or_else(|| Failure::Input(format!("{} needs --{what}", args.name)));
    let spec: ConstructionSpec = if args.name.contains(':') {
        args.name.parse()?
    } else {
        match args.name.as_str() {
            "prop51" => ConstructionSpec::Prop51 { n: need(args.n.map(|n| n as i64), "n")? as usize, m: need(args.m, "m")? },
            "prop53" => ConstructionSpec::Prop53 { m: need(args.m, "m")? },
            "thm54" => ConstructionSpec::Thm54 { n: need(args.n.map(|n| n as i64), "n")? as usize, m: need(args.m, "m")? },
            "lemma56" => ConstructionSpec::Lemma56,
            "prop57" => match args.k[..] {
                [k] => ConstructionSpec::Prop57 { k: [k; 3] },
                [a, b, c] => ConstructionSpec::Prop57 { k: [a, b, c] },
                [] => ConstructionSpec::Prop57 { k: [1; 3] },
                _ => return Err(Failure::Input("--k takes one or three values".into())),
            },
            other => return Err(Failure::Input(format!("unknown construction {other:?}"))),
        }
    };
    let problem: Problem = spec.build()?.into();
    write_output(args.out.as_deref(), &problem.to_json())
}

fn run_analyze(args: &AnalyzeArgs, mode: Mode) -> Result<(), Failure> {
    let problem = Problem::load(&args.file)?;
    let opts = Options {
        betti: args.betti,
        chi: args.chi,
        census: args.census,
        critical: args.critical,
        bounds: args.bounds.clone(),
        mode,
    };
    let report = analyze(&problem, &opts)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    } else {
        print!("{}", report.table());
    }
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} exact check(s) failed", report.failures.len())))
    }
}

fn run_render(args: &RenderArgs) -> Result<(), Failure> {
    let p = Problem::load(&args.file)?;
    let text = if args.format.svg {
        let copies = if args.base { Copies::Base } else { Copies::All };
        render::svg(&p.triangulation, &p.signs, copies)?
    } else {
        render::off(&p.triangulation, &p.signs, &p.ambient)?
    };
    write_output(args.out.as_deref(), &text)
}

/// Built-in inputs: the constructions at small parameters, checked for
/// their exact invariants.
fn builtin_checks() -> Result<Vec<String>, Failure> {
    let mut failures = Vec::new();
    let cases: [(ConstructionSpec, Box<dyn Fn(&patchwork::analyze::Report) -> bool>); 6] = [
        (ConstructionSpec::Lemma56, Box::new(|r| r.euler == Some(-18))),
        (ConstructionSpec::Prop57 { k: [2, 1, 1] }, Box::new(|r| r.euler == Some(-36))),
        (ConstructionSpec::Prop53 { m: 4 }, Box::new(|r| r.topology.as_ref().is_some_and(|t| t.components == 16))),
        (ConstructionSpec::Prop51 { n: 2, m: 4 }, Box::new(|r| r.topology.as_ref().is_some_and(|t| t.betti == [2, 2]))),
        (ConstructionSpec::Prop51 { n: 3, m: 4 }, Box::new(|r| r.topology.as_ref().is_some_and(|t| t.betti == [2, 0, 2]))),
        (ConstructionSpec::Thm54 { n: 3, m: 2 }, Box::new(|r| r.topology.as_ref().is_some_and(|t| t.components == 8))),
    ];
    for (spec, expect) in cases {
        let p: Problem = spec.build()?.into();
        let r = analyze(&p, &Options { critical: true, ..Options::basic() })?;
        failures.extend(r.failures.iter().map(|f| format!("{spec}: {f}")));
        if !expect(&r) {
            failures.push(format!("{spec}: unexpected topology {:?}, euler {:?}", r.topology.map(|t| t.betti), r.euler));
        }
    }
    Ok(failures)
}

fn run_verify(args: &VerifyArgs, mode: Mode) -> Result<(), Failure> {
    let cfg = SuiteConfig { instances: args.instances, seed: args.seed, mode, ..SuiteConfig::default() };
    let mut report: SuiteReport = run_suite(&cfg)?;
    for path in &args.files {
        let p = Problem::load(path)?;
        let t = &p.triangulation;
        // files enter the suite as their own (already doubled) instance
        let base = t.halved().map_err(|_| Failure::Input(format!("{}: vertices must all be even", path.display())))?;
        let m = base.polytope().as_standard_simplex().ok_or_else(|| {
            Failure::Input(format!("{}: the suite needs a dilated standard simplex", path.display()))
        })?;
        let inst = Instance {
            seed: 0,
            m,
            profile: patchwork::verify::Profile::RandomSubset,
            base,
            doubled: t.clone(),
            signs: p.signs.clone(),
            coarse: None,
        };
        report.absorb(t.dim(), check_instance(&inst, mode)?);
    }
    let builtin = builtin_checks()?;
    if args.json {
        let doc = serde_json::json!({ "suite": report, "builtin_failures": builtin });
        println!("{}", serde_json::to_string_pretty(&doc).expect("reports serialize"));
    } else {
        print!("{}", report.table());
        println!("built-in constructions: {}", if builtin.is_empty() { "ok" } else { "FAILED" });
    }
    for f in builtin.iter().chain(report.audits.values().flat_map(|a| a.violations.iter())) {
        eprintln!("violation: {f}");
    }
    if report.ok() && builtin.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check("verification failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = if cli.sequential { Mode::Sequential } else { Mode::Parallel };
    let result = match &cli.command {
        Command::Construct(a) => construct(a),
        Command::Analyze(a) => run_analyze(a, mode),
        Command::Render(a) => run_render(a),
        Command::Verify(a) => run_verify(a, mode),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
