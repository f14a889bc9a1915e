use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modal_audio::eval::{
    balanced_holdout, evaluate, model_rules, rule_metrics, write_metrics_csv, write_rules_csv, DEFAULT_MIN_CONFIDENCE,
    DEFAULT_MIN_COVERAGE,
};
use modal_audio::io::{featurize_entries, read_manifest, write_atomic, CubeDataset, ExperimentConfig};
use modal_audio::learner::Model;
use modal_audio::{Error, Result};

const CUBE_FILE: &str = "cube.mtsd";
const REPORT_FILE: &str = "featurize_report.txt";
const MODEL_FILE: &str = "model.json";
const METRICS_FILE: &str = "metrics.csv";
const RULES_FILE: &str = "rules.csv";
const CONFIG_FILE: &str = "config.txt";

#[derive(Parser)]
#[command(name = "modal-audio", version, about = "Audio featurization and modal decision tree experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn a `path,label` WAV manifest into a feature-cube file.
    Featurize {
        /// Manifest CSV (overrides `manifest` in the config).
        manifest: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Train a tree or forest on a cube file and write the model.
    Train {
        /// Feature-cube file written by `featurize`
        cube: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the repeated balanced holdout and write metrics.
    Evaluate {
        /// Feature-cube file written by `featurize`
        cube: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Train on one 80/20 split, score leaf rules on its test part, and
    /// write the rules that pass the confidence and coverage filters.
    Rules {
        /// Feature-cube file written by `featurize`
        cube: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MIN_CONFIDENCE)]
        min_confidence: f64,
        #[arg(long, default_value_t = DEFAULT_MIN_COVERAGE)]
        min_coverage: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// key=value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for sampling and the holdout splits
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides `out_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// prop or modal.
    #[arg(long)]
    mode: Option<String>,
    /// tree or forest.
    #[arg(long)]
    model: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::parse(&std::fs::read_to_string(p).map_err(|e| {
                Error::Config(format!("cannot read config {}: {e}", p.display()))
            })?)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.set_seed(s);
        }
        if let Some(o) = &self.out {
            cfg.out_dir = o.clone();
        }
        if let Some(m) = &self.mode {
            cfg.set("mode", m)?;
        }
        if let Some(m) = &self.model {
            cfg.set("model", m)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn out_path(cfg: &ExperimentConfig, name: &str) -> PathBuf {
    cfg.out_dir.join(name)
}

fn save_config(cfg: &ExperimentConfig) -> Result<()> {
    write_atomic(&out_path(cfg, CONFIG_FILE), cfg.to_text().as_bytes())
}

fn load_cube(path: &Path) -> Result<CubeDataset> {
    CubeDataset::read(path).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    })
}

fn featurize(manifest: Option<PathBuf>, cfg: &mut ExperimentConfig) -> Result<()> {
    if let Some(m) = manifest {
        cfg.manifest = Some(m);
    }
    let manifest = cfg
        .manifest
        .clone()
        .ok_or_else(|| Error::Config("no manifest given".into()))?;
    let entries = read_manifest(&manifest)?;
    let out = featurize_entries(&entries, cfg)?;
    save_config(cfg)?;
    write_atomic(&out_path(cfg, REPORT_FILE), out.report_text().as_bytes())?;
    if let Some(ds) = &out.dataset {
        ds.write(&out_path(cfg, CUBE_FILE))?;
    }
    eprintln!(
        "featurized {} of {} files ({} samples each)",
        out.files.len() - out.n_failed(),
        out.files.len(),
        out.target_samples
    );
    if out.too_many_failures() {
        return Err(Error::InsufficientData(format!(
            "{} of {} files failed; see {}",
            out.n_failed(),
            out.files.len(),
            out_path(cfg, REPORT_FILE).display()
        )));
    }
    Ok(())
}

fn train(cube: &Path, cfg: &ExperimentConfig) -> Result<()> {
    let ls = load_cube(cube)?.to_logiset(cfg.learn.mode)?;
    let model = Model::train(&ls, &cfg.learn, cfg.model)?;
    save_config(cfg)?;
    write_atomic(&out_path(cfg, MODEL_FILE), model.to_json()?.as_bytes())?;
    eprintln!("trained {} with {} leaves", cfg.model, model.leaf_count());
    Ok(())
}

fn run_evaluate(cube: &Path, cfg: &ExperimentConfig) -> Result<()> {
    let ls = load_cube(cube)?.to_logiset(cfg.learn.mode)?;
    let report = evaluate(&ls, &cfg.learn, cfg.model, &cfg.protocol)?;
    let mut buf = Vec::new();
    write_metrics_csv(&mut buf, &cfg.task, cfg.learn.mode.as_str(), &cfg.model.to_string(), &report)?;
    save_config(cfg)?;
    write_atomic(&out_path(cfg, METRICS_FILE), &buf)?;
    eprintln!(
        "accuracy {:.2} ± {:.2}, kappa {:.2} ± {:.2}, leaves {:.2}",
        report.accuracy.mean, report.accuracy.std, report.kappa.mean, report.kappa.std, report.leaves.mean
    );
    Ok(())
}

fn rules(cube: &Path, cfg: &ExperimentConfig, min_confidence: f64, min_coverage: usize) -> Result<()> {
    let ls = load_cube(cube)?.to_logiset(cfg.learn.mode)?;
    let split = balanced_holdout(&ls, cfg.protocol.train_frac, 1, cfg.protocol.seed)?
        .pop()
        .expect("one repeat");
    let model = Model::train(&ls.subset(&split.train)?, &cfg.learn, cfg.model)?;
    let kept = rule_metrics(&model_rules(&model), &ls, &split.test, min_confidence, min_coverage)?;
    let mut buf = Vec::new();
    write_rules_csv(&mut buf, &kept, ls.attributes(), ls.classes())?;
    save_config(cfg)?;
    write_atomic(&out_path(cfg, RULES_FILE), &buf)?;
    eprintln!("{} rules kept", kept.len());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let common = match &cli.command {
        Command::Featurize { common, .. }
        | Command::Train { common, .. }
        | Command::Evaluate { common, .. }
        | Command::Rules { common, .. } => common,
    };
    let mut cfg = common.load()?;
    if let Some(n) = common.threads {
        set_threads(n)?;
    }
    match cli.command {
        Command::Featurize { manifest, .. } => featurize(manifest, &mut cfg),
        Command::Train { cube, .. } => train(&cube, &cfg),
        Command::Evaluate { cube, .. } => run_evaluate(&cube, &cfg),
        Command::Rules {
            cube,
            min_confidence,
            min_coverage,
            ..
        } => rules(&cube, &cfg, min_confidence, min_coverage),
    }
}

#[cfg(feature = "parallel")]
fn set_threads(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Config("--threads must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

#[cfg(not(feature = "parallel"))]
fn set_threads(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Config("--threads must be positive".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(3),
    }
}
