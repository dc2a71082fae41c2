use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use logsieve::evaluation::write_reports;
use logsieve::{
    bench_sizes, load_config, read_log_lines, write_bench_rows, Config, CotMode, GroundTruth, HttpChatBackend,
    LlmJudge, MergeJudge, OfflineJudge, Report, RetryPolicy, SamplingStrategy,
};

/// Batch log template extraction and evaluation.
#[derive(Debug, Parser)]
#[command(name = "logsieve", version, about)]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse log files into structured and template CSVs.
    Parse(ParseArgs),
    /// Parse, then score the result against ground truth.
    Eval(EvalArgs),
    /// Time the pipeline on prefixes of each log file.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// TOML file with one [[dataset]] table per log source.
    #[arg(long)]
    config: PathBuf,

    /// Dataset to process (repeatable). Defaults to every dataset in the config.
    #[arg(long = "dataset")]
    datasets: Vec<String>,

    /// Cross-length merge mode; overrides the config.
    #[arg(long)]
    cot: Option<CotMode>,

    /// Center sampling strategy: entropy_first_token, entropy_only,
    /// first_token_only, random or random:<seed>; overrides the config.
    #[arg(long, alias = "strategy")]
    sampling: Option<SamplingStrategy>,

    /// Worker threads per dataset.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct ParseArgs {
    #[command(flatten)]
    common: Common,

    /// Output directory. Defaults to `logsieve_output/` beside each log file.
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,

    /// Ground-truth CSV; overrides the config (single dataset only).
    #[arg(long)]
    ground_truth: Option<PathBuf>,

    /// Also write the parse outputs here.
    #[arg(long)]
    output_dir: Option<PathBuf>,

    /// Write the report CSV to this file instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,

    /// Comma-separated line counts, e.g. 500,1000,2000,4000.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,

    /// Runs per size; the median is reported.
    #[arg(long, default_value_t = 3)]
    repeat: usize,

    /// Write the timing CSV to this file instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match run(cli.command) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Parse(args) => cmd_parse(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

/// A dataset ready to run: its config with CLI overrides applied.
struct Job {
    cfg: Config,
    judge: Option<Box<dyn MergeJudge<f64>>>,
    jobs: Option<usize>,
}

impl Job {
    fn parser(&self) -> Result<logsieve::Parser> {
        let parser = logsieve::Parser::from_config(&self.cfg)?;
        Ok(match self.jobs {
            Some(n) => parser.with_jobs(n)?,
            None => parser,
        })
    }

    fn judge(&self) -> Option<&dyn MergeJudge<f64>> {
        self.judge.as_deref()
    }
}

/// Loads and validates everything up front so a bad config fails before
/// any parsing starts.
fn prepare(common: &Common) -> Result<Vec<Job>> {
    let configs: Vec<Config> =
        load_config(&common.config).with_context(|| format!("loading {}", common.config.display()))?;
    if configs.is_empty() {
        bail!("{} defines no [[dataset]] tables", common.config.display());
    }
    let selected: Vec<Config> = if common.datasets.is_empty() {
        configs
    } else {
        common
            .datasets
            .iter()
            .map(|name| {
                configs
                    .iter()
                    .find(|c| &c.name == name)
                    .cloned()
                    .with_context(|| format!("dataset {name:?} is not in {}", common.config.display()))
            })
            .collect::<Result<_>>()?
    };
    if common.jobs == Some(0) {
        bail!("--jobs must be at least 1");
    }

    selected
        .into_iter()
        .map(|mut cfg| {
            if let Some(cot) = common.cot {
                cfg.cot = cot;
            }
            if let Some(s) = common.sampling {
                cfg.sampling = s;
            }
            cfg.validate()?;
            let judge = make_judge(&cfg)?;
            Ok(Job {
                cfg,
                judge,
                jobs: common.jobs,
            })
        })
        .collect()
}

fn make_judge(cfg: &Config) -> Result<Option<Box<dyn MergeJudge<f64>>>> {
    Ok(match cfg.cot {
        CotMode::Off => None,
        CotMode::Offline => Some(Box::new(OfflineJudge)),
        CotMode::Remote => {
            let settings = cfg
                .remote
                .clone()
                .with_context(|| format!("dataset {}: cot = \"remote\" needs a [dataset.remote] table", cfg.name))?;
            let backend = HttpChatBackend::new(settings)?;
            Some(Box::new(LlmJudge::new(backend, RetryPolicy::default())))
        }
    })
}

fn output_dir_for(cfg: &Config, flag: Option<&Path>) -> PathBuf {
    match flag {
        Some(dir) => dir.to_path_buf(),
        None => cfg
            .log_file
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join("logsieve_output"),
    }
}

fn file_stem(cfg: &Config) -> String {
    cfg.log_file
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| cfg.name.clone())
}

fn write_parse_outputs(cfg: &Config, result: &logsieve::ParseResult, dir: &Path) -> Result<()> {
    let stem = file_stem(cfg);
    let structured = dir.join(format!("{stem}_structured.csv"));
    // LogHub keeps its ground truth under exactly this name
    if same_file(&structured, &cfg.ground_truth_path()) {
        bail!(
            "dataset {}: refusing to overwrite the ground truth {}; pass --output-dir",
            cfg.name,
            structured.display()
        );
    }
    let (s, t) = result.write_outputs(dir, &stem)?;
    info!("{}: wrote {} and {}", cfg.name, s.display(), t.display());
    Ok(())
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (a.canonicalize(), b.canonicalize()) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

fn cmd_parse(args: ParseArgs) -> Result<()> {
    let jobs = prepare(&args.common)?;
    for job in &jobs {
        let cfg = &job.cfg;
        let lines = read_log_lines(&cfg.log_file)?;
        let result = job.parser()?.parse(&lines, job.judge())?;
        info!(
            "{}: {} lines, {} templates, {} merges in {:.3}s",
            cfg.name,
            result.records.len(),
            result.templates.len(),
            result.merges_applied,
            result.parse_seconds
        );
        write_parse_outputs(cfg, &result, &output_dir_for(cfg, args.output_dir.as_deref()))?;
    }
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let jobs = prepare(&args.common)?;
    if args.ground_truth.is_some() && jobs.len() != 1 {
        bail!("--ground-truth needs exactly one --dataset");
    }
    let truth_paths: Vec<PathBuf> = jobs
        .iter()
        .map(|j| args.ground_truth.clone().unwrap_or_else(|| j.cfg.ground_truth_path()))
        .collect();
    for (job, path) in jobs.iter().zip(&truth_paths) {
        if !path.is_file() {
            bail!("dataset {}: ground truth {} not found", job.cfg.name, path.display());
        }
    }

    let mut reports = Vec::with_capacity(jobs.len());
    for (job, path) in jobs.iter().zip(&truth_paths) {
        let cfg = &job.cfg;
        let truth = GroundTruth::from_csv_path(path)?;
        let lines = read_log_lines(&cfg.log_file)?;
        let result = job.parser()?.parse(&lines, job.judge())?;
        if let Some(dir) = &args.output_dir {
            write_parse_outputs(cfg, &result, dir)?;
        }
        let mut report = Report::compute(
            &cfg.name,
            &result.event_map(),
            Some(&result.template_text_map()),
            &truth,
            result.parse_seconds,
        )
        .with_context(|| format!("dataset {}", cfg.name))?;
        if cfg.cot == CotMode::Remote {
            report.backend_seconds = Some(result.merge_seconds);
        }
        eprintln!(
            "{}: GA {:.4}  FGA {:.4}  PA {}  merges {}{}",
            cfg.name,
            report.ga,
            report.fga,
            report.pa.map_or_else(|| "n/a".to_string(), |p| format!("{p:.4}")),
            result.merges_applied,
            report
                .backend_seconds
                .map_or_else(String::new, |s| format!("  backend {s:.3}s")),
        );
        reports.push(report);
    }
    write_to(args.report.as_deref(), |w| Ok(write_reports(w, &reports)?))
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let jobs = prepare(&args.common)?;
    if args.sizes.contains(&0) {
        bail!("--sizes entries must be positive");
    }
    let mut rows = Vec::new();
    for job in &jobs {
        let lines = read_log_lines(&job.cfg.log_file)?;
        let parser = job.parser()?;
        rows.extend(bench_sizes(
            &parser,
            job.judge(),
            &job.cfg.name,
            &lines,
            &args.sizes,
            args.repeat,
        )?);
    }
    write_to(args.report.as_deref(), |w| Ok(write_bench_rows(w, &rows)?))
}

fn write_to(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}
