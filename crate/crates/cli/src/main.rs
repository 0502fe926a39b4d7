mod output;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use goising::energy::ParameterSet;
use goising::replay::{
    detect_transitions, predict_winner, replay_with, AnalysisConfig, BatchEntry, BatchSummary, GameMeta,
    GameVerdict,
};
use goising::sgf::{parse_sgf, SgfGame};

use output::{csv_bytes, json_bytes, rows, svg_string, write_atomic, GameReport};

#[derive(Debug, Parser)]
#[command(name = "goising", version, about = "Strength series and verdicts for recorded Go games")]
struct Cli {
    /// Log progress to standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Replay one game and write its strength series.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Replay every game in the given directories or files and summarize the verdicts.
    Batch {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Parameter file of `key = value` lines.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv,json")]
    formats: Vec<Format>,
    /// Moves of history the transition detector looks back over.
    #[arg(long, default_value_t = 20)]
    window: usize,
    /// Multiple of the local step scale that marks a transition.
    #[arg(long, default_value_t = 6.0)]
    kappa: f64,
    /// Board size to use in place of the record's own.
    #[arg(long)]
    board_size: Option<u8>,
}

/// Resolved settings shared by both commands.
struct RunConfig {
    config: AnalysisConfig,
    out: PathBuf,
    formats: Vec<Format>,
    window: usize,
    kappa: f64,
    board_size: Option<u8>,
}

impl RunConfig {
    fn from_args(args: RunArgs) -> anyhow::Result<Self> {
        let params = match &args.params {
            Some(path) => ParameterSet::from_file(path)?,
            None => ParameterSet::default(),
        };
        if args.formats.is_empty() {
            bail!("at least one output format is required");
        }
        if !(args.kappa.is_finite() && args.kappa > 0.0) {
            bail!("--kappa must be positive, got {}", args.kappa);
        }
        if args.window < 2 {
            bail!("--window must be at least 2, got {}", args.window);
        }
        let mut formats = args.formats;
        formats.sort_unstable();
        formats.dedup();
        Ok(Self {
            config: AnalysisConfig { params, ..Default::default() },
            out: args.out,
            formats,
            window: args.window,
            kappa: args.kappa,
            board_size: args.board_size,
        })
    }

    fn wants(&self, format: Format) -> bool {
        self.formats.contains(&format)
    }
}

#[derive(Debug)]
enum Failure {
    Input(anyhow::Error),
    Replay(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Replay(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(e) | Failure::Replay(e) => format!("{e:#}"),
        }
    }
}

fn load_game(path: &Path, board_size: Option<u8>) -> Result<SgfGame, Failure> {
    let bytes = std::fs::read(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Input)?;
    let mut game = parse_sgf(&bytes)
        .with_context(|| format!("cannot parse {}", path.display()))
        .map_err(Failure::Input)?;
    if let Some(size) = board_size {
        game.board_size = size;
    }
    Ok(game)
}

/// Replays one game and writes its artifacts as `<out>/<name>.<ext>`.
fn analyze_one(path: &Path, name: &str, run: &RunConfig) -> Result<Option<GameVerdict>, Failure> {
    let game = load_game(path, run.board_size)?;
    log::info!("{}: {} moves", path.display(), game.moves.len());
    let series = replay_with(&game, &run.config)
        .with_context(|| format!("replay of {} failed", path.display()))
        .map_err(Failure::Replay)?;
    let verdict = predict_winner(&series).ok();
    let events = detect_transitions(&series, run.window, run.kappa);
    let rows = rows(&series, &events);
    let meta = GameMeta::of(&game);
    let report = GameReport {
        source: path.display().to_string(),
        meta: &meta,
        params: &run.config.params,
        verdict: verdict.as_ref(),
        transitions: &events,
        series: &rows,
    };

    let mut artifacts: Vec<(PathBuf, Vec<u8>)> = Vec::new();
    let target = |ext: &str| run.out.join(format!("{name}.{ext}"));
    if run.wants(Format::Csv) {
        artifacts.push((target("csv"), csv_bytes(&rows).map_err(Failure::Input)?));
    }
    if run.wants(Format::Json) {
        artifacts.push((target("json"), json_bytes(&report).map_err(Failure::Input)?));
    }
    if run.wants(Format::Svg) {
        artifacts.push((target("svg"), svg_string(&rows, name).into_bytes()));
    }
    for (file, bytes) in artifacts {
        write_atomic(&file, &bytes).map_err(Failure::Input)?;
    }
    Ok(verdict)
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "game".to_string(), |s| s.to_string_lossy().into_owned())
}

fn prepare_out(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create {}", dir.display()))
        .map_err(Failure::Input)
}

fn cmd_analyze(file: &Path, run: &RunConfig) -> Result<(), Failure> {
    if !file.is_file() {
        return Err(Failure::Input(anyhow!("{} is not a readable file", file.display())));
    }
    prepare_out(&run.out)?;
    let Some(verdict) = analyze_one(file, &stem(file), run)? else {
        println!("{}: no moves, no verdict", file.display());
        return Ok(());
    };
    println!(
        "{}: predicted {} (S_black {}, S_white {}), official {}",
        file.display(),
        verdict.predicted,
        verdict.s_black,
        verdict.s_white,
        verdict.official.map_or_else(|| "unknown".to_string(), |c| c.to_string())
    );
    Ok(())
}

/// Every `.sgf` file named directly or found in a named directory, sorted by path.
fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let entries = std::fs::read_dir(input)
                .with_context(|| format!("cannot list {}", input.display()))
                .map_err(Failure::Input)?;
            for entry in entries {
                let path = entry.map_err(|e| Failure::Input(e.into()))?.path();
                let is_sgf = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("sgf"));
                if path.is_file() && is_sgf {
                    files.push(path);
                }
            }
        } else {
            files.push(input.clone());
        }
    }
    files.sort();
    files.dedup();
    Ok(files)
}

/// Distinct output names: the file stem, suffixed with its position when stems collide.
fn output_names(files: &[PathBuf]) -> Vec<String> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for f in files {
        *counts.entry(stem(f)).or_default() += 1;
    }
    files
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let s = stem(f);
            if counts[&s] > 1 {
                format!("{s}-{i}")
            } else {
                s
            }
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct GameLine {
    source: String,
    output: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<GameVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct Summary {
    games: Vec<GameLine>,
    exact: usize,
    disagree: usize,
    unknown: usize,
    failed: usize,
    agreement_rate: Option<f64>,
}

fn cmd_batch(inputs: &[PathBuf], run: &RunConfig) -> Result<(), Failure> {
    let files = collect_inputs(inputs)?;
    if files.is_empty() {
        return Err(Failure::Input(anyhow!("no game records found")));
    }
    prepare_out(&run.out)?;
    let names = output_names(&files);
    let results: Vec<Result<GameVerdict, Failure>> =
        files
        .par_iter()
        .zip(&names)
        .map(|(file, name)| {
            analyze_one(file, name, run)?
                .ok_or_else(|| Failure::Replay(anyhow!("{} has no moves to judge", file.display())))
        })
        .collect();

    let mut worst = 0;
    let entries = results
        .iter()
        .enumerate()
        .map(|(index, r)| BatchEntry { index, verdict: r.as_ref().map(Clone::clone).map_err(Failure::message) })
        .collect();
    let counts = BatchSummary::from_entries(entries);
    let games = files
        .iter()
        .zip(&names)
        .zip(results)
        .map(|((file, name), result)| {
            let (verdict, error) = match result {
                Ok(v) => (Some(v), None),
                Err(e) => {
                    eprintln!("error: {}", e.message());
                    worst = worst.max(e.code());
                    (None, Some(e.message()))
                }
            };
            GameLine { source: file.display().to_string(), output: name.clone(), verdict, error }
        })
        .collect();
    let summary = Summary {
        games,
        exact: counts.exact,
        disagree: counts.disagree,
        unknown: counts.unknown,
        failed: counts.failed,
        agreement_rate: counts.agreement_rate,
    };
    let bytes = json_bytes(&summary).map_err(Failure::Input)?;
    write_atomic(&run.out.join("summary.json"), &bytes).map_err(Failure::Input)?;
    println!(
        "{} games: {} agree, {} disagree, {} unknown, {} failed",
        files.len(),
        summary.exact,
        summary.disagree,
        summary.unknown,
        summary.failed
    );
    if summary.failed == files.len() {
        let err = anyhow!("every game failed");
        return Err(if worst == 1 { Failure::Input(err) } else { Failure::Replay(err) });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = if cli.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn };
    env_logger::Builder::new().filter_level(level).init();

    let result = match cli.command {
        Command::Analyze { file, run } => RunConfig::from_args(run)
            .map_err(Failure::Input)
            .and_then(|run| cmd_analyze(&file, &run)),
        Command::Batch { inputs, run } => RunConfig::from_args(run)
            .map_err(Failure::Input)
            .and_then(|run| cmd_batch(&inputs, &run)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
