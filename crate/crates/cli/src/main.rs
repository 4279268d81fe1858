use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde_json::Value;

use sgb_cli::config::read_config_file;
use sgb_cli::{run_experiment, ExperimentConfig, ExperimentReport, Format, Overrides, REGISTRY};

/// Monte Carlo and deterministic experiments for stochastic Gronwall and
/// Bihari-LaSalle inequalities. Run `sgb list` for the experiment names.
#[derive(Debug, Parser)]
#[command(name = "sgb", version)]
struct Cli {
    /// Experiment name, or `list`.
    experiment: Option<String>,
    /// Flat JSON config; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Monte Carlo samples.
    #[arg(long = "N")]
    n: Option<usize>,
    /// Output file; a `<out>.config.json` sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,

    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    kmax: Option<u64>,
    #[arg(long = "n-jump")]
    n_jump: Option<u64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    gamma1: Option<f64>,
    #[arg(long)]
    gamma2: Option<f64>,
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    u: Option<f64>,
    #[arg(long)]
    w: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        let reals = [
            ("p", self.p),
            ("eps", self.eps),
            ("delta", self.delta),
            ("t", self.t),
            ("dt", self.dt),
            ("h", self.h),
            ("gamma", self.gamma),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("x0", self.x0),
            ("mu", self.mu),
            ("sigma", self.sigma),
            ("lambda", self.lambda),
            ("q", self.q),
            ("u", self.u),
            ("w", self.w),
            ("r", self.r),
        ];
        let ints = [("k", self.k), ("kmax", self.kmax), ("n-jump", self.n_jump), ("steps", self.steps)];
        let mut params: Vec<(String, Value)> =
            reals.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), Value::from(v)))).collect();
        params.extend(ints.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), Value::from(v)))));
        Overrides { seed: self.seed, n: self.n, format: self.format, out: self.out.clone(), params }
    }
}

fn list(format: Option<Format>) -> String {
    match format {
        Some(Format::Json) => serde_json::to_string_pretty(&REGISTRY).expect("registry serializes"),
        _ => REGISTRY.iter().map(|e| format!("{:<22} {}\n", e.name, e.summary)).collect(),
    }
}

fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".config.json");
    PathBuf::from(s)
}

fn render(report: &ExperimentReport) -> Result<Vec<u8>, String> {
    match report.config.format {
        Format::Json => Ok(report.to_json().into_bytes()),
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf).map_err(|e| e.to_string())?;
            Ok(buf)
        }
    }
}

fn init_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("SGB_THREADS") {
        let n: usize = v.parse().map_err(|_| format!("SGB_THREADS must be a positive integer, got `{v}`"))?;
        if n == 0 {
            return Err("SGB_THREADS must be a positive integer".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<i32, String> {
    if cli.experiment.as_deref() == Some("list") {
        print!("{}", list(cli.format));
        return Ok(0);
    }
    init_threads()?;
    let file = cli.config.as_deref().map(read_config_file).transpose().map_err(|e| e.to_string())?;
    let cfg = ExperimentConfig::resolve(cli.experiment.as_deref(), file.as_ref(), &cli.overrides()).map_err(|e| e.to_string())?;
    let report = run_experiment(&cfg).map_err(|e| format!("{}: {e}", cfg.experiment))?;
    let body = render(&report)?;
    match &cfg.out {
        Some(out) => {
            fs::write(out, &body).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            let side = sidecar(out);
            fs::write(&side, cfg.to_json() + "\n").map_err(|e| format!("cannot write {}: {e}", side.display()))?;
        }
        None => io::stdout().write_all(&body).map_err(|e| e.to_string())?,
    }
    eprint!("{}", report.summary_table());
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
