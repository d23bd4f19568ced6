mod input;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use spectre_core::oracle::{brieskorn_spectrum, naive_defect};
use spectre_core::verify::{verify, VerifyConfig};
use spectre_core::{
    decompose, global_defect, hertling_verdict, max_spectral, nd_defect, spectral_pairs, spectrum, Bounds, Component,
    Exec, Polygon, SpecBag,
};

use input::{Input, Source};
use output::{emit, Format};

#[derive(Parser, Debug)]
#[command(name = "spectre", version, about = "Exact spectra, spectral pairs and variance defects of plane curve singularities")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Add a display-only decimal rendering with this many digits next to every rational
    #[arg(long, global = true, value_name = "N")]
    decimal: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectrum and Milnor number
    Spectrum(Source),
    /// Spectral pairs sorted by alpha, then weight
    Pairs(Source),
    /// Milnor number
    Milnor(Source),
    /// Maximal spectral value and the vertex realizing it
    Maxspec(Source),
    /// The defect 6S − μα_μ with its edge expansion
    Defect(Source),
    /// Variance against the bound (α_μ − α_1)/12
    Hertling(Source),
    /// Formal combination of Newton polygons with the same spectral pairs
    Decompose(Source),
    /// Polygon to diagram, or chain diagram to polygon
    Convert(Source),
    /// Independent reference computations
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Randomized cross-check of every identity family
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Closed-form spectrum of x^p + y^q
    Brieskorn { p: i64, q: i64 },
    /// Spectrum from lattice points under a polygon
    Lattice(Source),
    /// 6·moment₂ − μ·max read directly off the spectrum
    Naive(Source),
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[arg(long, env = "SPECTRE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 2)]
    depth: u32,
    #[arg(long, default_value_t = 4)]
    max_faces: i64,
    #[arg(long, default_value_t = 6)]
    max_entry: i64,
    /// Skip degenerate instances with a larger Milnor number
    #[arg(long, default_value_t = 50_000)]
    max_milnor: i64,
    /// Counterexamples dumped per family
    #[arg(long, default_value_t = 3)]
    dumps: usize,
    /// Evaluate instances one after another
    #[arg(long)]
    sequential: bool,
}

/// Why a command did not produce a result, mapped to the exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Core(spectre_core::Error),
    Identity(String),
    /// A failed verification with the report to print anyway.
    Report(Value, String),
}

impl From<spectre_core::Error> for Failure {
    fn from(e: spectre_core::Error) -> Failure {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Core(e) if !e.is_inconsistency() => 1,
            _ => 2,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize to JSON")
}

fn spectrum_record(sp: &SpecBag) -> Value {
    json!({ "mu": sp.cardinality(), "spectrum": to_value(sp) })
}

fn polygon_of(input: &Input) -> Result<Polygon, Failure> {
    match input {
        Input::Polygon(p) => Ok(p.clone()),
        Input::Diagram(d) => {
            let c = Component::recognize(d)?;
            if !c.children.is_empty() || c.nodes.iter().any(|n| !n.extra_leaves.is_empty()) {
                return Err(Failure::Input("the diagram is not a single chain and has no Newton polygon".into()));
            }
            Ok(Polygon::new(c.kfaces())?)
        }
    }
}

fn run_oracle(cmd: &OracleCommand) -> Result<Value, Failure> {
    match cmd {
        OracleCommand::Brieskorn { p, q } => Ok(spectrum_record(&brieskorn_spectrum(*p, *q)?)),
        OracleCommand::Lattice(src) => Ok(spectrum_record(&polygon_of(&src.load()?)?.lattice_spectrum())),
        OracleCommand::Naive(src) => Ok(json!({ "naive_defect": to_value(&naive_defect(&src.load()?.diagram())?) })),
    }
}

fn run_verify(a: &VerifyArgs) -> Result<Value, Failure> {
    let cfg = VerifyConfig {
        seed: a.seed,
        count: a.count,
        depth: a.depth,
        bounds: Bounds { max_faces: a.max_faces, max_entry: a.max_entry },
        max_milnor: a.max_milnor,
        max_dumps: a.dumps,
    };
    if a.max_faces < 1 || a.max_entry < 1 {
        return Err(Failure::Input("size bounds must be at least 1".into()));
    }
    let exec = if a.sequential { Exec::Sequential } else { Exec::Parallel };
    let report = verify(cfg, exec);
    let value = to_value(&report);
    if report.passed() {
        Ok(value)
    } else {
        let failed: Vec<&str> = report.families.iter().filter(|f| !f.passed()).map(|f| f.name.as_str()).collect();
        Err(Failure::Report(value, format!("failed families: {}", failed.join(", "))))
    }
}

fn run(cmd: &Command) -> Result<Value, Failure> {
    match cmd {
        Command::Spectrum(src) => Ok(spectrum_record(&spectrum(&src.load()?.diagram())?)),
        Command::Pairs(src) => Ok(to_value(&spectral_pairs(&src.load()?.diagram())?)),
        Command::Milnor(src) => match src.load()? {
            Input::Polygon(p) if p.milnor() != p.kouchnirenko() => {
                Err(Failure::Identity(format!("Milnor number {} differs from Kouchnirenko {}", p.milnor(), p.kouchnirenko())))
            }
            Input::Polygon(p) => Ok(json!({ "mu": p.milnor() })),
            Input::Diagram(d) => Ok(json!({ "mu": spectrum(&d)?.cardinality() })),
        },
        Command::Maxspec(src) => {
            let d = src.load()?.diagram();
            let m = max_spectral(&d)?;
            let sp = spectrum(&d)?;
            if sp.max() != Some(&m.alpha) {
                return Err(Failure::Identity(format!("maximal virtual value {} is not the spectrum maximum", m.alpha)));
            }
            Ok(json!({ "alpha": to_value(&m.alpha), "witness": m.witness, "multiplicity": sp.get(&m.alpha) }))
        }
        Command::Defect(src) => match src.load()? {
            Input::Polygon(p) => Ok(to_value(&nd_defect(&p)?)),
            Input::Diagram(d) => Ok(to_value(&global_defect(&d)?)),
        },
        Command::Hertling(src) => Ok(to_value(&hertling_verdict(&src.load()?.diagram())?)),
        Command::Decompose(src) => Ok(to_value(&decompose(&src.load()?.diagram())?)),
        Command::Convert(src) => match src.load()? {
            Input::Polygon(p) => Ok(to_value(&p.to_diagram())),
            d @ Input::Diagram(_) => Ok(to_value(&polygon_of(&d)?)),
        },
        Command::Oracle(o) => run_oracle(o),
        Command::Verify(a) => run_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if !matches!(cli.command, Command::Verify(_)) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
    }
    match run(&cli.command) {
        Ok(v) => {
            print!("{}", emit(v, cli.format, cli.decimal));
            ExitCode::SUCCESS
        }
        Err(f) => {
            let msg = match &f {
                Failure::Input(m) | Failure::Identity(m) => m.clone(),
                Failure::Core(e) => e.to_string(),
                Failure::Report(v, m) => {
                    print!("{}", emit(v.clone(), cli.format, cli.decimal));
                    m.clone()
                }
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.exit_code())
        }
    }
}
