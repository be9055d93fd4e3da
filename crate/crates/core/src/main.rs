use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ris_sop::config::{Case, Scenario, SystemConfig};
use ris_sop::montecarlo::{count_outages, Mode, DEFAULT_TRIALS};
use ris_sop::sop::{sop, Method};
use ris_sop::sweep::{parse_values, render_svg, run_sweep, write_csv, FigureId, Row, SweepSpec};
use ris_sop::Result;

#[derive(Parser)]
#[command(name = "ris-sop", version, about = "Secrecy outage of RIS-aided links with co-channel interference")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON file with a system configuration (or, for `sweep`, a sweep spec).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a parameter, e.g. `--set n_d=4` or `--set avg_snr_d_db=120`.
    #[arg(long = "set", value_name = "AXIS=VALUE")]
    sets: Vec<String>,
    #[arg(long, value_enum)]
    scenario: Option<ScenarioArg>,
    #[arg(long, value_enum)]
    case: Option<CaseArg>,
    /// Comma-separated subset of closed-form, quadrature, mc, asymptotic.
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum ScenarioArg {
    DirectLink,
    OwnRis,
    SharedRis,
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum CaseArg {
    Colluding,
    NonColluding,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the SOP at one operating point.
    Point {
        #[command(flatten)]
        common: Common,
        /// Also report the exact-event Monte-Carlo estimate.
        #[arg(long)]
        exact: bool,
    },
    /// Sweep one parameter and write a CSV (and optionally an SVG).
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        axis: Option<String>,
        /// `start:stop:step` or a comma-separated list.
        #[arg(long)]
        values: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write zero wall times so reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
    },
    /// Regenerate one of the figure presets (fig1..fig4).
    Figure {
        id: String,
        #[command(flatten)]
        common: Common,
        /// Output directory for `<id>.csv` and `<id>.svg`.
        #[arg(long, env = "RIS_SOP_OUT_DIR", default_value = ".")]
        out_dir: PathBuf,
        #[arg(long)]
        no_timing: bool,
    },
}

fn parse_methods(text: &str) -> Result<Vec<Method>> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

fn apply_common(cfg: &mut SystemConfig, c: &Common) -> Result<()> {
    if let Some(s) = c.scenario {
        cfg.scenario = match s {
            ScenarioArg::DirectLink => Scenario::DirectLink,
            ScenarioArg::OwnRis => Scenario::OwnRis,
            ScenarioArg::SharedRis => Scenario::SharedRis,
        };
    }
    if let Some(k) = c.case {
        cfg.case = match k {
            CaseArg::Colluding => Case::Colluding,
            CaseArg::NonColluding => Case::NonColluding,
        };
    }
    for s in &c.sets {
        let (axis, value) =
            s.split_once('=').ok_or_else(|| ris_sop::Error::Config(format!("--set expects AXIS=VALUE, got {s:?}")))?;
        let value = parse_values(value)?;
        cfg.set_axis(axis.trim(), value[0])?;
    }
    cfg.validate()
}

fn point(common: &Common, exact: bool) -> Result<()> {
    let mut cfg = match &common.config {
        Some(p) => SystemConfig::from_json(&fs::read_to_string(p)?)?,
        None => SystemConfig::default(),
    };
    apply_common(&mut cfg, common)?;
    let methods = parse_methods(common.methods.as_deref().unwrap_or("closed-form,quadrature,asymptotic"))?;
    let trials = common.trials.unwrap_or(DEFAULT_TRIALS);
    let seed = common.seed.unwrap_or(1);
    println!("method,sop,uncertainty,diagnostics");
    for m in methods {
        if m == Method::MonteCarlo {
            let counts = count_outages(&cfg, &[cfg.avg_snr_d], trials, seed)?[0];
            let modes: &[Mode] = if exact { &[Mode::LowerBound, Mode::Exact] } else { &[Mode::LowerBound] };
            for &mode in modes {
                let e = counts.estimate(mode);
                println!("{},{:.6e},{:.3e},{}", m, e.value, e.uncertainty, e.diagnostics);
            }
            continue;
        }
        match sop(&cfg, m) {
            Ok(e) => println!("{},{:.6e},{:.3e},{}", m, e.value, e.uncertainty, e.diagnostics),
            Err(e) => println!("{m},,,error: {e}"),
        }
    }
    Ok(())
}

fn finish(rows: &[Row], csv: Option<&Path>, svg: Option<(&Path, &str)>) -> Result<ExitCode> {
    match csv {
        Some(p) => write_csv(rows, fs::File::create(p)?)?,
        None => write_csv(rows, std::io::stdout().lock())?,
    }
    if let Some((p, title)) = svg {
        fs::write(p, render_svg(rows, title))?;
    }
    let failed = rows.iter().filter(|r| !r.is_ok()).count();
    if failed > 0 {
        eprintln!("{failed} of {} rows failed; see the status column", rows.len());
    }
    Ok(if failed == rows.len() { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn sweep_spec(common: &Common, axis: Option<String>, values: Option<String>, no_timing: bool) -> Result<SweepSpec> {
    let mut spec = match &common.config {
        Some(p) => {
            let text = fs::read_to_string(p)?;
            serde_json::from_str::<SweepSpec>(&text)?
        }
        None => SweepSpec::default(),
    };
    apply_common(&mut spec.base, common)?;
    if let Some(a) = axis {
        spec.axis = a;
    }
    if let Some(v) = values {
        spec.values = parse_values(&v)?;
    }
    if let Some(m) = &common.methods {
        spec.methods = parse_methods(m)?;
    }
    spec.trials = common.trials.unwrap_or(spec.trials);
    spec.seed = common.seed.unwrap_or(spec.seed);
    spec.record_timing &= !no_timing;
    spec.validate()?;
    Ok(spec)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Point { common, exact } => point(&common, exact).map(|_| ExitCode::SUCCESS),
        Command::Sweep { common, axis, values, out, svg, no_timing } => {
            let spec = sweep_spec(&common, axis, values, no_timing)?;
            let rows = run_sweep(&spec)?;
            let title = format!("SOP vs {}", spec.axis);
            finish(&rows, out.as_deref(), svg.as_deref().map(|p| (p, title.as_str())))
        }
        Command::Figure { id, common, out_dir, no_timing } => {
            let id: FigureId = id.parse()?;
            let mut spec =
                id.spec(parse_methods(common.methods.as_deref().unwrap_or("closed-form,quadrature,asymptotic,mc"))?);
            apply_common(&mut spec.base, &Common { methods: None, ..common.clone() })?;
            spec.trials = common.trials.unwrap_or(spec.trials);
            spec.seed = common.seed.unwrap_or(spec.seed);
            spec.record_timing = !no_timing;
            let rows = run_sweep(&spec)?;
            fs::create_dir_all(&out_dir)?;
            let csv = out_dir.join(format!("{}.csv", id.name()));
            let svg = out_dir.join(format!("{}.svg", id.name()));
            let code = finish(&rows, Some(&csv), Some((&svg, id.title())))?;
            eprintln!("wrote {} and {}", csv.display(), svg.display());
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
