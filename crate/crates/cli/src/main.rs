use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use xxz_mbl::experiment::{
    aggregate_files, preset, preset_names, run_ensemble, EnsembleResult, ExperimentConfig, Mode, AGGREGATE_FILE,
};
use xxz_mbl::model::{FieldKind, Picture};

#[derive(Parser)]
#[command(name = "xxz-mbl", version, about = "tDMRG experiments on the disordered XXZ chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one ensemble described by flags and/or a config file.
    Run(RunArgs),
    /// Average equally shaped CSV or JSON-lines files cell by cell.
    Aggregate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named figure preset.
    Preset {
        name: String,
        /// Root directory; each sub-run writes to <out>/<label>.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        /// Print the expanded configs as TOML instead of running them.
        #[arg(long)]
        dry_run: bool,
    },
    /// List presets and modes.
    List,
}

#[derive(Args, Default)]
struct RunArgs {
    /// TOML file with any subset of the config keys; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    n: Option<usize>,
    /// Anisotropy Δ.
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Field amplitude.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    field: Option<FieldKind>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    sample_every: Option<usize>,
    #[arg(long)]
    max_d: Option<usize>,
    /// Per-gate discarded-weight threshold.
    #[arg(long)]
    delta_trunc: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    hard_cap: Option<usize>,
    #[arg(long, value_parser = parse_picture)]
    picture: Option<Picture>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long)]
    states: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_picture(s: &str) -> Result<Picture, String> {
    match s {
        "state" => Ok(Picture::State),
        "heisenberg" => Ok(Picture::Heisenberg),
        other => Err(format!("unknown picture '{other}' (state or heisenberg)")),
    }
}

impl RunArgs {
    fn into_config(self) -> xxz_mbl::Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident => $target:ident),* $(,)?) => {
                $(if let Some(v) = self.$field { c.$target = v; })*
            };
        }
        set!(
            mode => mode, n => n, delta => delta, h => h, field => field, tau => tau,
            t_max => t_max, sample_every => sample_every, max_d => max_d,
            delta_trunc => delta_trunc, epsilon => epsilon, hard_cap => hard_cap,
            picture => picture, realizations => realizations, states => states_per_realization,
            seed => seed, threads => threads, out => out,
        );
        Ok(c)
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("{}", json!({ "error": { "kind": "io", "message": e.to_string() } }));
        }
    }
}

fn summary(result: &EnsembleResult) -> Value {
    json!({
        "out": result.out_dir.display().to_string(),
        "units": result.units.len(),
        "completed": result.completed(),
        "aggregate": result.aggregate.as_ref().map(|_| result.out_dir.join(AGGREGATE_FILE).display().to_string()),
        "manifest": result.manifest_path.display().to_string(),
    })
}

fn execute(command: Command) -> xxz_mbl::Result<Option<Value>> {
    match command {
        Command::Run(args) => {
            let config = args.into_config()?;
            Ok(Some(summary(&run_ensemble(&config)?)))
        }
        Command::Aggregate { files, out } => {
            let csv = aggregate_files(&files)?.to_csv();
            match out {
                Some(path) => std::fs::write(&path, csv).map_err(|e| xxz_mbl::Error::File {
                    path: path.clone(),
                    message: e.to_string(),
                })?,
                None => emit(&csv),
            }
            Ok(None)
        }
        Command::Preset { name, out, seed, threads, dry_run } => {
            let p = preset(&name)?;
            let mut runs = Vec::new();
            for (label, mut config) in p.runs {
                config.out = out.join(&config.out);
                if let Some(s) = seed {
                    config.seed = s;
                }
                if let Some(t) = threads {
                    config.threads = t;
                }
                if dry_run {
                    emit(&format!("# {}/{label}\n{}\n", p.name, config.to_toml()));
                    continue;
                }
                let mut s = summary(&run_ensemble(&config)?);
                s["label"] = json!(label);
                runs.push(s);
            }
            Ok((!dry_run).then(|| json!({ "preset": p.name, "runs": runs })))
        }
        Command::List => {
            let mut text = String::from("presets:\n");
            for (name, description) in preset_names() {
                text.push_str(&format!("  {name:<16} {description}\n"));
            }
            text.push_str("modes:\n");
            for m in Mode::ALL {
                text.push_str(&format!("  {m}\n"));
            }
            emit(&text);
            Ok(None)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", json!({ "error": { "kind": "usage", "message": first } }));
            return ExitCode::from(2);
        }
    };
    match execute(cli.command) {
        Ok(Some(v)) => {
            emit(&(serde_json::to_string_pretty(&v).expect("summary serializes") + "\n"));
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": { "kind": e.kind(), "message": e.to_string() } }));
            ExitCode::FAILURE
        }
    }
}
