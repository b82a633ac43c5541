use clap::{Args, Parser, Subcommand};
use expcli::config::{
    self, parse_custom_flux, parse_custom_init, parse_k_mode, parse_limiter, parse_snapshot_list,
    ExperimentSpec, ModelKind, SchemeKind,
};
use expcli::{csvio, runner};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CONFIG: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_MONITOR: u8 = 3;

/// Experiment runner for the nonstaggered Lagrangian-Eulerian solver.
#[derive(Parser)]
#[command(name = "expcli", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write solution/monitor CSVs.
    Run(RunArgs),
    /// Run a refinement sweep and write the error table with rate fits.
    Sweep(SweepArgs),
    /// Run the monitor suite and write pass/fail checks.
    Monitor(RunArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key=value config file applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// burgers_p1 | burgers_p2 | lwr_backward | lwr_forward | keyfitz_kranzer | custom
    #[arg(long)]
    model: Option<String>,
    /// nsle | godunov | rusanov | lax_friedrichs
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    tfinal: Option<f64>,
    /// mm2 | mm3[:alpha] | uno
    #[arg(long)]
    limiter: Option<String>,
    #[arg(long)]
    cfl: Option<f64>,
    /// zero | auto | fixed:<v>  (default: the model preset's choice)
    #[arg(long = "k-mode")]
    k_mode: Option<String>,
    /// Restrict dt by the total-variation-nonincreasing rule.
    #[arg(long)]
    tvni: bool,
    /// Comma-separated snapshot times (default: tfinal only).
    #[arg(long)]
    snapshots: Option<String>,
    #[arg(long = "dt-max")]
    dt_max: Option<f64>,
    /// Output directory for the CSV artifacts.
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
    /// Custom model: burgers | linear:<a>
    #[arg(long = "custom-flux")]
    custom_flux: Option<String>,
    /// Custom model: sine:<offset>:<amp>:<freq> | riemann:<ul>:<ur>:<x0>
    #[arg(long = "custom-init")]
    custom_init: Option<String>,
    /// Custom model domain as xl:xr.
    #[arg(long = "custom-domain")]
    custom_domain: Option<String>,
    /// Custom model boundary: periodic | constant
    #[arg(long = "custom-boundary")]
    custom_boundary: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated cell counts for the refinement study.
    #[arg(long = "sweep-cells")]
    sweep_cells: String,
    /// Self-reference resolution for models without an exact solution.
    #[arg(long = "reference-cells")]
    reference_cells: Option<usize>,
}

fn build_spec(args: &CommonArgs) -> Result<ExperimentSpec, String> {
    let mut spec = ExperimentSpec::default();
    if let Some(path) = &args.config {
        let map = config::read_config_file(path)?;
        config::apply_config(&mut spec, &map)?;
    }
    if let Some(m) = &args.model {
        spec.model = ModelKind::parse(m)?;
    }
    if let Some(s) = &args.scheme {
        spec.scheme = SchemeKind::parse(s)?;
    }
    if let Some(n) = args.cells {
        spec.n_cells = n;
    }
    if let Some(t) = args.tfinal {
        spec.t_final = t;
    }
    if let Some(l) = &args.limiter {
        spec.limiter = parse_limiter(l)?;
    }
    if let Some(c) = args.cfl {
        spec.cfl = c;
    }
    if let Some(k) = &args.k_mode {
        spec.k_mode = Some(parse_k_mode(k)?);
    }
    if args.tvni {
        spec.tvni = true;
    }
    if let Some(s) = &args.snapshots {
        spec.snapshots = parse_snapshot_list(s)?;
    }
    if let Some(d) = args.dt_max {
        spec.dt_max = d;
    }
    if let Some(dir) = &args.out_dir {
        spec.out_dir = Some(dir.clone());
    }
    if let Some(s) = &args.custom_flux {
        spec.custom.flux = parse_custom_flux(s)?;
    }
    if let Some(s) = &args.custom_init {
        spec.custom.init = parse_custom_init(s)?;
    }
    if let Some(s) = &args.custom_domain {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("bad domain '{s}'"))?;
        spec.custom.domain = (
            a.parse().map_err(|_| format!("bad number '{a}'"))?,
            b.parse().map_err(|_| format!("bad number '{b}'"))?,
        );
    }
    if let Some(s) = &args.custom_boundary {
        spec.custom.boundary = match s.as_str() {
            "periodic" => noflow::Boundary::Periodic,
            "constant" => noflow::Boundary::ConstantExtension,
            other => return Err(format!("unknown boundary '{other}'")),
        };
    }
    spec.validate()?;
    Ok(spec)
}

fn out_dir(spec: &ExperimentSpec) -> PathBuf {
    spec.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
}

fn fail_config(msg: &str) -> ExitCode {
    eprintln!("expcli: {msg}");
    ExitCode::from(EXIT_CONFIG)
}

fn fail_run(err: &runner::RunError) -> ExitCode {
    eprintln!("expcli: {err}");
    match err {
        runner::RunError::Config(_) => ExitCode::from(EXIT_CONFIG),
        runner::RunError::Solver(_) => ExitCode::from(EXIT_SOLVER),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match cli.command {
        Command::Run(args) => {
            let spec = match build_spec(&args.common) {
                Ok(s) => s,
                Err(m) => return fail_config(&m),
            };
            let art = match runner::run(&spec) {
                Ok(a) => a,
                Err(e) => return fail_run(&e),
            };
            let dir = out_dir(&spec);
            let io = csvio::write_solution(&dir, &art)
                .and_then(|_| csvio::write_monitors(&dir, &art.monitors))
                .and_then(|_| csvio::write_metadata(&dir, &art.metadata));
            if let Err(e) = io {
                return fail_config(&format!("cannot write outputs: {e}"));
            }
            println!("run complete: {} steps, outputs in {}", art.monitors.len(), dir.display());
            ExitCode::SUCCESS
        }
        Command::Sweep(args) => {
            let spec = match build_spec(&args.common) {
                Ok(s) => s,
                Err(m) => return fail_config(&m),
            };
            let cells: Vec<usize> = match args
                .sweep_cells
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
            {
                Ok(c) => c,
                Err(_) => return fail_config("bad --sweep-cells list"),
            };
            let table = match runner::sweep(&spec, &cells, args.reference_cells) {
                Ok(t) => t,
                Err(e) => return fail_run(&e),
            };
            let dir = out_dir(&spec);
            let io = csvio::write_errors(&dir, &table).and_then(|_| csvio::write_fits(&dir, &table));
            if let Err(e) = io {
                return fail_config(&format!("cannot write outputs: {e}"));
            }
            let (c, p) = table.fit_l1;
            println!("sweep complete: L1 fit C = {c:.4}, p = {p:.4}");
            if let Some((c, p)) = table.fit_w1 {
                println!("               W1 fit C = {c:.4}, p = {p:.4}");
            }
            ExitCode::SUCCESS
        }
        Command::Monitor(args) => {
            let spec = match build_spec(&args.common) {
                Ok(s) => s,
                Err(m) => return fail_config(&m),
            };
            let report = match runner::monitor_suite(&spec) {
                Ok(r) => r,
                Err(e) => return fail_run(&e),
            };
            let dir = out_dir(&spec);
            let mut io = csvio::write_checks(&dir, &report.checks);
            if let Some(art) = &report.artifacts {
                io = io
                    .and_then(|_| csvio::write_monitors(&dir, &art.monitors))
                    .and_then(|_| csvio::write_metadata(&dir, &art.metadata));
            }
            if let Err(e) = io {
                return fail_config(&format!("cannot write outputs: {e}"));
            }
            for row in &report.checks {
                let status = if row.pass { "pass" } else { "FAIL" };
                println!("{status}  {}  observed {}  limit {}", row.name, row.observed, row.limit);
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_MONITOR)
            }
        }
    }
}
