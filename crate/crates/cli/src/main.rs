mod figures;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use clustval::algorithms::{run_algorithm, AlgorithmTag};
use clustval::curves::confusion_sweep;
use clustval::datagen::{generate_synthetic, GenConfig, SpreadMode};
use clustval::harness::{
    build_report, dataset_seed, read_correlations, read_report_meta, run_benchmark, write_correlations,
    write_records, write_report, write_report_to, BenchmarkConfig, BenchmarkInput, BenchmarkReport, ScoreMode,
};
use clustval::io::{metadata_path, read_dataset, read_metadata, read_partition, write_dataset, write_metadata, write_partition};
use clustval::{pairwise_co_membership, similarities_from_distances, Cvi, Error, Scorer};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) if e.is_usage() => 1,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Core(Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

#[derive(Parser)]
#[command(name = "clustval", version, about = "Relative clustering validity from ranked object pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Spread {
    Variance,
    Std,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Oriented,
    Raw,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic 2-D Gaussian datasets with sidecar metadata.
    Generate {
        /// Numbers of clusters.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        /// Share of objects in cluster 0, in percent (0, 10, ..., 90).
        #[arg(long, value_delimiter = ',', default_value = "0")]
        imbalance: Vec<u32>,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        replicates: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// How the drawn spread value is read.
        #[arg(long, value_enum, default_value = "variance")]
        spread: Spread,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cluster a dataset and write the partition.
    Cluster {
        #[arg(long)]
        data: PathBuf,
        /// kmeans, single, average, complete or ward.
        #[arg(long)]
        algorithm: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a partition; prints `index,score` CSV.
    Validate {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        /// Comma-separated index ids, or `all`.
        #[arg(long, default_value = "all")]
        indices: String,
        /// Directory for roc.csv, pr.csv and inverse_pr.csv.
        #[arg(long)]
        curves: Option<PathBuf>,
    },
    /// Run the correlation-with-ARI benchmark over a directory of labelled datasets.
    Benchmark {
        #[arg(long)]
        data_dir: PathBuf,
        #[arg(long, default_value = "all")]
        indices: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Summarize each imbalance level found in the dataset metadata.
        #[arg(long)]
        stratify_imbalance: bool,
        #[arg(long, value_enum, default_value = "oriented")]
        mode: Mode,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Re-render figures (svg) or the report table (csv, to stdout) from a benchmark directory.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        format: Format,
        /// Directory for the figures; defaults to the input directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

fn generate(
    ks: &[usize],
    imbalances: &[u32],
    n: usize,
    replicates: usize,
    seed: u64,
    spread: Spread,
    out: &Path,
) -> Result<(), CliError> {
    create_dir(out)?;
    let mut index = 0;
    for &k in ks {
        for &pct in imbalances {
            for rep in 0..replicates {
                let mut cfg = GenConfig::new(n, k, pct, dataset_seed(seed, index));
                cfg.spread_mode = match spread {
                    Spread::Variance => SpreadMode::Variance,
                    Spread::Std => SpreadMode::StdDev,
                };
                index += 1;
                let g = generate_synthetic(&cfg)?;
                let path = out.join(format!("synth_k{k}_imb{pct}_r{rep}.csv"));
                write_dataset(&path, &g.dataset)?;
                write_metadata(&metadata_path(&path), &g.metadata)?;
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn validate(data: &Path, partition: &Path, indices: &str, curves: Option<&Path>) -> Result<(), CliError> {
    let cvis = Cvi::parse_list(indices)?;
    let dataset = read_dataset(data)?;
    let p = read_partition(partition)?;
    if p.len() != dataset.n_objects() {
        return Err(Error::Parse {
            path: partition.to_path_buf(),
            line: 0,
            message: format!("{} labels for {} objects", p.len(), dataset.n_objects()),
        }
        .into());
    }
    let scorer = Scorer::new(&dataset)?;
    let results = scorer.score_many(&cvis, &p);
    let stdout = std::io::stdout();
    let mut w = csv::Writer::from_writer(stdout.lock());
    w.write_record(["index", "score"]).map_err(Error::from)?;
    let mut first_failure = None;
    for (cvi, r) in cvis.iter().zip(results) {
        let cell = match r {
            Ok(v) => v.to_string(),
            Err(e) => {
                eprintln!("{cvi}: {e}");
                first_failure.get_or_insert(e);
                String::new()
            }
        };
        w.write_record([cvi.id(), cell.as_str()]).map_err(Error::from)?;
    }
    w.flush().map_err(|e| io_err(Path::new("<stdout>"), e))?;
    if let Some(dir) = curves {
        create_dir(dir)?;
        let s = similarities_from_distances(scorer.distances());
        let table = confusion_sweep(&s, &pairwise_co_membership(&p))?;
        for curve in [table.roc_curve(), table.pr_curve(), table.inverse_pr_curve()] {
            let path = dir.join(format!("{}.csv", curve.kind.name()));
            let file = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
            curve.write_csv(file)?;
        }
    }
    match first_failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn load_inputs(dir: &Path) -> Result<Vec<BenchmarkInput>, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| io_err(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Usage(format!("no .csv datasets in {}", dir.display())));
    }
    paths
        .iter()
        .map(|path| {
            let meta = metadata_path(path);
            let imbalance_pct = if meta.exists() {
                Some(read_metadata(&meta)?.config.imbalance_pct)
            } else {
                None
            };
            Ok(BenchmarkInput {
                id: path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned()),
                data: read_dataset(path)?,
                imbalance_pct,
            })
        })
        .collect()
}

fn imbalance_levels(report_rows: impl Iterator<Item = Option<u32>>) -> Result<Vec<u32>, CliError> {
    let mut levels: Vec<u32> = report_rows.flatten().collect();
    levels.sort_unstable();
    levels.dedup();
    if levels.is_empty() {
        return Err(CliError::Usage(
            "stratification needs imbalance metadata (.meta.json sidecars); none found".into(),
        ));
    }
    Ok(levels)
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_err(path, e))?;
    println!("{}", path.display());
    Ok(())
}

fn write_figures(report: &BenchmarkReport, dir: &Path) -> Result<(), CliError> {
    write_text(&dir.join("correlations.svg"), &figures::correlation_boxplot(report))?;
    write_text(&dir.join("imbalance_ratio.svg"), &figures::imbalance_ratio_boxplot(report))?;
    if let Some(svg) = figures::imbalance_boxplots(report) {
        write_text(&dir.join("imbalance_strata.svg"), &svg)?;
    }
    if let Some(svg) = figures::critical_difference_chart(report) {
        write_text(&dir.join("mean_ranks.svg"), &svg)?;
    }
    Ok(())
}

fn score_mode(mode: Mode) -> ScoreMode {
    match mode {
        Mode::Oriented => ScoreMode::Oriented,
        Mode::Raw => ScoreMode::Raw,
    }
}

fn benchmark(
    data_dir: &Path,
    indices: &str,
    seed: u64,
    out: &Path,
    stratify: bool,
    mode: Mode,
    alpha: f64,
) -> Result<(), CliError> {
    let cvis = Cvi::parse_list(indices)?;
    clustval::harness::nemenyi_q(cvis.len().max(2), alpha)?;
    let inputs = load_inputs(data_dir)?;
    let mut cfg = BenchmarkConfig::new(cvis, seed);
    cfg.mode = score_mode(mode);
    cfg.alpha = alpha;
    if stratify {
        cfg.strata = Some(imbalance_levels(inputs.iter().map(|i| i.imbalance_pct))?);
    }
    let (records, report) = run_benchmark(&inputs, &cfg)?;
    create_dir(out)?;
    for (name, result) in [
        ("records.csv", write_records(&out.join("records.csv"), &cfg.cvis, &records)),
        ("correlations.csv", write_correlations(&out.join("correlations.csv"), &report)),
        ("report.csv", write_report(&out.join("report.csv"), &report)),
    ] {
        result?;
        println!("{}", out.join(name).display());
    }
    write_figures(&report, out)
}

fn parse_stratum(label: &str) -> Result<u32, CliError> {
    if label == "Bal." {
        return Ok(0);
    }
    label
        .strip_suffix('%')
        .and_then(|p| p.parse().ok())
        .ok_or_else(|| CliError::Core(Error::UnknownStratum(label.to_string())))
}

fn report(input: &Path, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let (cvis, rows) = read_correlations(&input.join("correlations.csv"))?;
    let meta = read_report_meta(&input.join("report.csv"))?;
    let mut cfg = BenchmarkConfig::new(cvis, meta.seed);
    cfg.mode = meta.mode;
    cfg.alpha = meta.alpha;
    if !meta.strata.is_empty() {
        cfg.strata = Some(meta.strata.iter().map(|s| parse_stratum(s)).collect::<Result<_, _>>()?);
    }
    let report = build_report(rows, &cfg)?;
    match format {
        Format::Csv => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_report_to(&mut lock, &report)?;
            lock.flush().map_err(|e| io_err(Path::new("<stdout>"), e))
        }
        Format::Svg => {
            let dir = out.unwrap_or(input);
            create_dir(dir)?;
            write_figures(&report, dir)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate {
            k,
            imbalance,
            n,
            replicates,
            seed,
            spread,
            out,
        } => generate(&k, &imbalance, n, replicates, resolve_seed(seed), spread, &out),
        Command::Cluster {
            data,
            algorithm,
            k,
            seed,
            out,
        } => {
            let tag: AlgorithmTag = algorithm.parse()?;
            let dataset = read_dataset(&data)?;
            let p = run_algorithm(&dataset, tag, k, resolve_seed(seed))?;
            write_partition(&out, &p)?;
            Ok(())
        }
        Command::Validate {
            data,
            partition,
            indices,
            curves,
        } => validate(&data, &partition, &indices, curves.as_deref()),
        Command::Benchmark {
            data_dir,
            indices,
            seed,
            out,
            stratify_imbalance,
            mode,
            alpha,
        } => benchmark(
            &data_dir,
            &indices,
            resolve_seed(seed),
            &out,
            stratify_imbalance,
            mode,
            alpha,
        ),
        Command::Report { input, format, out } => report(&input, format, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
