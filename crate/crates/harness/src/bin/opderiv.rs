use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use opderiv_core::io::{read_matrix_file, write_operator, MatrixFile};
use opderiv_core::TolerancePolicy;
use opderiv_harness::{run_checks, HarnessError, Overrides, ScenarioConfig, ScenarioKind, XKind};

#[derive(Parser)]
#[command(
    name = "opderiv",
    version,
    about = "Numerical checks for weak D-derivatives, Φₙ and reflexivity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario config. Exit status 0 on pass, 1 on a
    /// failed check, 2 on a configuration error.
    Run(RunArgs),
    /// Write the matrices of a scenario to JSON files.
    Gen(GenArgs),
    /// Pretty-print a matrix file.
    Show { path: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "tol-alg")]
    tol_alg: Option<f64>,
    /// Check to run; repeatable. Replaces the config's list.
    #[arg(long = "check")]
    checks: Vec<String>,
    /// Write the JSON report here; `-` prints it instead of the table.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Take the scenario from a config file.
    #[arg(long, conflicts_with_all = ["circle", "random"])]
    config: Option<PathBuf>,
    /// Truncated circle with modes −N..N.
    #[arg(long, value_name = "N", conflicts_with = "random")]
    circle: Option<usize>,
    /// Shift index k for --circle.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    shift: i64,
    /// Random Hermitian generator on ℂᴺ.
    #[arg(long, value_name = "N")]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Make x Hermitian for --random.
    #[arg(long)]
    hermitian: bool,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn run(args: RunArgs) -> Result<bool, HarnessError> {
    let mut config = ScenarioConfig::load(&args.config)?;
    config.apply(&Overrides {
        n: args.n,
        seed: args.seed,
        tol_alg: args.tol_alg,
        checks: args.checks,
    });
    let report = run_checks(&config)?;
    match args.json.as_deref() {
        Some(p) if p == Path::new("-") => println!("{}", report.to_json()?),
        Some(p) => {
            fs::write(p, report.to_json()?)?;
            print!("{}", report.table());
        }
        None => print!("{}", report.table()),
    }
    Ok(report.pass)
}

fn gen(args: GenArgs) -> Result<(), HarnessError> {
    let (kind, seed) = if let Some(path) = &args.config {
        let config = ScenarioConfig::load(path)?;
        (config.scenario, config.seed)
    } else if let Some(modes) = args.circle {
        let kind = ScenarioKind::CircleFourier {
            modes,
            x_kind: XKind::Shift { k: args.shift },
        };
        (kind, args.seed)
    } else if let Some(dim) = args.random {
        let x_kind = if args.hermitian {
            XKind::Hermitian
        } else {
            XKind::Random
        };
        let kind = ScenarioKind::Random {
            dim,
            seed: args.seed,
            x_kind,
        };
        (kind, args.seed)
    } else {
        return Err(HarnessError::config(
            "gen needs --config, --circle or --random",
        ));
    };
    let scenario = kind.build(seed, &TolerancePolicy::default())?;
    fs::create_dir_all(&args.out_dir)?;
    for (name, op) in [
        ("generator.json", scenario.generator.base()),
        ("x.json", &scenario.x),
        ("y.json", &scenario.y),
    ] {
        let path = args.out_dir.join(name);
        write_operator(&path, op)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn show(path: &Path) -> Result<(), HarnessError> {
    let file: MatrixFile = read_matrix_file(path)?;
    let op = file.to_operator()?;
    let header = match (file.base_dim, file.order) {
        (Some(b), Some(n)) => format!("{}×{} (base {b}, order {n})", file.dim, file.dim),
        _ => format!("{}×{}", file.dim, file.dim),
    };
    println!("{header}");
    for r in 0..op.dim() {
        let row: Vec<String> = (0..op.dim())
            .map(|c| {
                let z = op.get(r, c);
                format!("{:>10.4}{:+.4}i", z.re, z.im)
            })
            .collect();
        println!("{}", row.join("  "));
    }
    println!("norm {:.6e}", op.norm());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args).map(|pass| if pass { 0 } else { 1 }),
        Command::Gen(args) => gen(args).map(|_| 0),
        Command::Show { path } => show(&path).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
