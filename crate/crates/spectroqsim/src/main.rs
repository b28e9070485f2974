use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use spectroqsim::analysis::{compare, peak_traces, spectrum};
use spectroqsim::config::{bundled, bundled_names, resolve_config, ResourcesConfig, RunConfig};
use spectroqsim::error::{config_err, Result};
use spectroqsim::ledger_io::read_ledger;
use spectroqsim::output::{
    compare_summary, resource_sweep, resources_summary, write_compare_csv, write_peaks_csv,
    write_resources_csv, write_spectrum_csv, SpectrumMetadata,
};
use spectroqsim::runner::{run_sweep, SweepOptions};
use spectroqsim::validate::run_checks;
use spectroqsim_core::protocol::Protocol;
use spectroqsim_core::spectra::{AssembleOptions, ShotNoiseSpec};

#[derive(Parser)]
#[command(
    name = "spectroqsim",
    version,
    about = "Phase-cycled 2D electronic spectroscopy as quantum circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run (or resume) a measurement sweep into a ledger file.
    Simulate(SimulateArgs),
    /// Turn a ledger into spectrum, peak and metadata files.
    Postprocess(PostprocessArgs),
    /// Correlate peak dynamics of a standard and a probe ledger.
    Compare(CompareArgs),
    /// Measurement, depth and query counts across detection resolutions.
    Resources(ResourcesArgs),
    /// Quick self-checks.
    Validate,
    /// List bundled configurations, or print one.
    Configs { name: Option<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Sqsp,
    Pqp,
}

impl From<ProtocolArg> for Protocol {
    fn from(p: ProtocolArg) -> Self {
        match p {
            ProtocolArg::Sqsp => Protocol::Sqsp,
            ProtocolArg::Pqp => Protocol::Pqp,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Config file, or the name of a bundled config.
    #[arg(long)]
    config: String,
    /// Overrides the protocol in the config.
    #[arg(long, value_enum)]
    protocol: Option<ProtocolArg>,
    /// Ledger path; defaults to `<output.dir>/<protocol>.ledger.csv`.
    #[arg(long)]
    ledger: Option<PathBuf>,
    #[arg(long)]
    resume: bool,
    #[arg(long)]
    workers: Option<usize>,
    /// Stop after computing this many blocks.
    #[arg(long)]
    max_blocks: Option<usize>,
}

#[derive(Args)]
struct NoiseArgs {
    /// Shot-noise standard deviation; overrides `[shot_noise]` in the embedded config.
    #[arg(long)]
    shot_noise_eps: Option<f64>,
    #[arg(long)]
    noise_seed: Option<u64>,
}

impl NoiseArgs {
    fn spec(&self, cfg: &RunConfig) -> Result<Option<ShotNoiseSpec>> {
        let eps = self.shot_noise_eps.unwrap_or(cfg.shot_noise.eps);
        let seed = self.noise_seed.unwrap_or(cfg.shot_noise.seed);
        let spec = ShotNoiseSpec::new(eps, seed)
            .map_err(|e| config_err("shot_noise_eps", e.to_string()))?;
        Ok((eps > 0.0).then_some(spec))
    }
}

#[derive(Args)]
struct PostprocessArgs {
    #[arg(long)]
    ledger: PathBuf,
    /// Output directory; defaults to the ledger's directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep raw amplitudes instead of scaling the largest to 1.
    #[arg(long)]
    raw: bool,
    #[command(flatten)]
    noise: NoiseArgs,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    sqsp: PathBuf,
    #[arg(long)]
    pqp: PathBuf,
    /// Writes `compare.csv` here when given.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    noise: NoiseArgs,
}

#[derive(Args)]
struct ResourcesArgs {
    /// Config with a `[resources]` section.
    #[arg(long, conflicts_with = "scenario")]
    config: Option<String>,
    #[arg(long, value_enum)]
    scenario: Option<Scenario>,
    #[arg(long)]
    dw3_min: Option<f64>,
    #[arg(long)]
    dw3_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// CSV path; defaults to `resources.csv` in the working directory.
    #[arg(long, default_value = "resources.csv")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scenario {
    Fmo,
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let mut cfg = resolve_config(&a.config)?;
    if let Some(p) = a.protocol {
        cfg = cfg.with_protocol(p.into());
        cfg.validate()?;
    }
    let protocol = cfg.protocol()?;
    let path = a.ledger.unwrap_or_else(|| {
        cfg.output
            .dir
            .join(format!("{}.ledger.csv", protocol.as_str()))
    });
    let opts = SweepOptions {
        workers: a.workers,
        resume: a.resume,
        max_blocks: a.max_blocks,
    };
    let r = run_sweep(&cfg, &path, &opts)?;
    println!(
        "{}: {} blocks computed, {} reused, {} remaining",
        path.display(),
        r.computed,
        r.reused,
        r.remaining
    );
    Ok(())
}

fn postprocess(a: PostprocessArgs) -> Result<()> {
    let file = read_ledger(&a.ledger)?;
    let cfg = &file.config;
    let noise = a.noise.spec(cfg)?;
    let raw = spectrum(cfg, &file.ledger, noise, AssembleOptions::default())?;
    let spec = if a.raw { raw.clone() } else { raw.normalized() };
    let dir = a.out.unwrap_or_else(|| {
        a.ledger
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."))
    });
    std::fs::create_dir_all(&dir).map_err(spectroqsim::error::io_err(&dir))?;
    write_spectrum_csv(&dir.join("spectrum.csv"), &spec)?;
    write_peaks_csv(
        &dir.join("peaks.csv"),
        &peak_traces(cfg, &spec)?,
        &spec.t2_fs,
    )?;
    SpectrumMetadata::new(cfg, &spec, raw.max_abs(), noise)?
        .write(&dir.join("spectrum_meta.toml"))?;
    println!(
        "wrote spectrum.csv, peaks.csv and spectrum_meta.toml to {}",
        dir.display()
    );
    Ok(())
}

fn compare_cmd(a: CompareArgs) -> Result<()> {
    let sq = read_ledger(&a.sqsp)?;
    let pq = read_ledger(&a.pqp)?;
    let opts = AssembleOptions::default();
    let s1 = spectrum(&sq.config, &sq.ledger, a.noise.spec(&sq.config)?, opts)?;
    let s2 = spectrum(&pq.config, &pq.ledger, a.noise.spec(&pq.config)?, opts)?;
    let report = compare(&s1, &sq.config, &s2, &pq.config)?;
    print!("{}", compare_summary(&report));
    if let Some(dir) = a.out {
        write_compare_csv(&dir.join("compare.csv"), &report)?;
    }
    Ok(())
}

fn resources(a: ResourcesArgs) -> Result<()> {
    let mut r = match (&a.config, a.scenario) {
        (Some(c), _) => resolve_config(c)?
            .resources
            .ok_or_else(|| config_err("resources", "the config has no [resources] section"))?,
        (None, _) => ResourcesConfig::default(),
    };
    if let Some(v) = a.dw3_min {
        r.dw3_min_cm = v;
    }
    if let Some(v) = a.dw3_max {
        r.dw3_max_cm = v;
    }
    if let Some(v) = a.points {
        r.dw3_points = v;
    }
    if !(r.dw3_min_cm > 0.0 && r.dw3_min_cm <= r.dw3_max_cm) || r.dw3_points == 0 {
        return Err(config_err(
            "dw3",
            "need 0 < dw3-min <= dw3-max and at least one point",
        ));
    }
    let reports = resource_sweep(&r)?;
    write_resources_csv(&a.out, &reports)?;
    for c in [reports.first(), reports.last()].into_iter().flatten() {
        print!("{}", resources_summary(c));
        if reports.len() == 1 {
            break;
        }
    }
    info!("wrote {} rows to {}", reports.len(), a.out.display());
    println!("wrote {}", a.out.display());
    Ok(())
}

fn validate() -> bool {
    let checks = run_checks();
    for c in &checks {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    checks.iter().all(|c| c.passed)
}

fn configs(name: Option<String>) -> Result<()> {
    match name {
        Some(n) => {
            let text = bundled(&n)
                .ok_or_else(|| config_err("config", format!("no bundled config named `{n}`")))?;
            print!("{text}");
        }
        None => bundled_names().for_each(|n| println!("{n}")),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Postprocess(a) => postprocess(a),
        Command::Compare(a) => compare_cmd(a),
        Command::Resources(a) => resources(a),
        Command::Configs { name } => configs(name),
        Command::Validate => {
            return if validate() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
