//! `netbench`: seeded, reproducible runs of the sampling / mirroring /
//! evaluation pipeline.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 partial failure
//! (some graphs failed but the run completed).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::Rng;

use netbench_core::dataset::{
    self, read_dataset_or_ingest, summarize_dataset, write_dataset, Dataset, DatasetSummary,
};
use netbench_core::error::Error;
use netbench_core::eswr::{self, SamplerConfig};
use netbench_core::metrics;
use netbench_core::mmd::{evaluate_suite, MmdReport, SuiteConfig};
use netbench_core::rmat;
use netbench_core::rng::{self, tag};

#[derive(Parser)]
#[command(
    name = "netbench",
    version,
    about = "Sample sub-networks, mirror them with R-MAT, and score datasets with MMD"
)]
struct Cli {
    /// Worker thread cap (0 = one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample sub-networks from one large edgelist via ESWR.
    Sample(SampleArgs),
    /// Fit and generate one R-MAT mirror per reference graph.
    Mirror(MirrorArgs),
    /// Summarize a dataset (node, density, and community extrema).
    Stats(StatsArgs),
    /// Score a candidate dataset against a reference with the MMD suite.
    Mmd(MmdArgs),
    /// Partition a dataset into train and test subsets.
    Split(SplitArgs),
}

#[derive(Args)]
struct SampleArgs {
    /// Source network edgelist.
    #[arg(long)]
    input: PathBuf,
    /// Output dataset directory.
    #[arg(long)]
    out: PathBuf,
    /// Number of sub-networks to sample.
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Mean of the sample-size distribution.
    #[arg(long, default_value_t = 400.0)]
    mu: f64,
    /// Standard deviation of the sample-size distribution.
    #[arg(long, default_value_t = 50.0)]
    sigma: f64,
    /// Smallest permitted sample size.
    #[arg(long, default_value_t = 2)]
    min_size: usize,
    /// Master seed; generated and printed when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Dataset name recorded in the manifest.
    #[arg(long, default_value = "sampled")]
    name: String,
}

#[derive(Args)]
struct MirrorArgs {
    /// Reference dataset directory.
    #[arg(long)]
    reference: PathBuf,
    /// Output dataset directory.
    #[arg(long)]
    out: PathBuf,
    /// Master seed; generated and printed when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Dataset name; defaults to "<reference>_rmat".
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct StatsArgs {
    /// Dataset directory (manifest or bare edgelists).
    #[arg(long)]
    dataset: PathBuf,
    /// Louvain runs pooled per graph for the community extrema.
    #[arg(long, default_value_t = 5)]
    community_runs: usize,
    /// Seed for the community runs; generated and printed when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Also dump per-graph metric values (graph_id,metric,value rows for
    /// degree, clustering, spectral, and paths).
    #[arg(long)]
    raw: bool,
    /// Write the summary as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct MmdArgs {
    /// Reference dataset directory.
    #[arg(long)]
    reference: PathBuf,
    /// Candidate dataset directory (manifest or bare edgelists).
    #[arg(long)]
    candidate: PathBuf,
    /// Directory for report.json and report.csv.
    #[arg(long)]
    out: PathBuf,
    /// Suite configuration file (JSON); flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override; generated and printed when neither this nor a
    /// config file supplies one.
    #[arg(long)]
    seed: Option<u64>,
    /// Initially infected node count.
    #[arg(long)]
    sir_seeds: Option<usize>,
    /// Per-neighbor infection probability.
    #[arg(long)]
    sir_kappa: Option<f64>,
    /// Iterations a node stays infected.
    #[arg(long)]
    sir_gamma: Option<u32>,
    /// SIR iteration cap.
    #[arg(long)]
    sir_max_iter: Option<u32>,
    /// SIR runs per graph.
    #[arg(long)]
    sir_runs: Option<usize>,
    /// Louvain resolution.
    #[arg(long)]
    louvain_resolution: Option<f64>,
    /// Louvain runs per graph.
    #[arg(long)]
    louvain_runs: Option<usize>,
    /// Measure candidate graphs as-is instead of their largest component.
    #[arg(long)]
    no_largest_component: bool,
}

#[derive(Args)]
struct SplitArgs {
    /// Dataset directory to partition.
    #[arg(long)]
    dataset: PathBuf,
    /// Fraction of graphs assigned to the train split.
    #[arg(long, default_value_t = 0.8)]
    ratio: f64,
    /// Shuffle seed; generated and printed when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for the train split.
    #[arg(long)]
    out_train: PathBuf,
    /// Output directory for the test split.
    #[arg(long)]
    out_test: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let usage_ok = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if usage_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {err}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Sample(args) => cmd_sample(args),
        Command::Mirror(args) => cmd_mirror(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Mmd(args) => cmd_mmd(args),
        Command::Split(args) => cmd_split(args),
    }
}

/// Use the given seed or draw one from entropy and print it, so every run is
/// replayable.
fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let generated = rand::rng().random();
        println!("seed: {generated}");
        generated
    })
}

fn cmd_sample(args: SampleArgs) -> Result<ExitCode, Error> {
    let seed = resolve_seed(args.seed);
    let source = dataset::read_edgelist(&args.input)?;
    let cfg = SamplerConfig {
        n_networks: args.count,
        size_mean: args.mu,
        size_stddev: args.sigma,
        min_size: args.min_size,
        seed,
    };
    let mut ds = eswr::eswr(&source, &cfg)?;
    ds.set_name(args.name);
    write_dataset(&ds, &args.out)?;
    println!(
        "wrote {} sampled graph(s) ({} failure(s)) to {}",
        ds.len(),
        ds.failures().len(),
        args.out.display()
    );
    Ok(exit_for_failures(ds.failures().len()))
}

fn cmd_mirror(args: MirrorArgs) -> Result<ExitCode, Error> {
    let seed = resolve_seed(args.seed);
    let reference = read_dataset_or_ingest(&args.reference)?;
    let mut mirrored = rmat::mirror_dataset(&reference, seed)?;
    if let Some(name) = args.name {
        mirrored.set_name(name);
    }
    write_dataset(&mirrored, &args.out)?;
    let attempted = reference.len();
    let failed = mirrored.failures().len();
    println!(
        "mirrored {}/{} graph(s), failure rate {:.1}%",
        mirrored.len(),
        attempted,
        100.0 * failed as f64 / attempted as f64
    );
    Ok(exit_for_failures(failed))
}

fn exit_for_failures(failures: usize) -> ExitCode {
    if failures > 0 {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_stats(args: StatsArgs) -> Result<ExitCode, Error> {
    let seed = resolve_seed(args.seed);
    let ds = read_dataset_or_ingest(&args.dataset)?;
    let summary = summarize_dataset(&ds, args.community_runs, seed)?;
    print_summary(&summary);
    if let Some(path) = &args.json {
        let json =
            serde_json::to_string_pretty(&summary).map_err(|e| Error::Manifest(e.to_string()))?;
        fs::write(path, json + "\n").map_err(|e| Error::io(path.clone(), e))?;
    }
    if args.raw {
        print_raw(&ds)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn print_summary(summary: &DatasetSummary) {
    println!("n_networks      {}", summary.n_networks);
    println!("min_nodes       {}", summary.min_nodes);
    println!("max_nodes       {}", summary.max_nodes);
    println!("min_density     {}", summary.min_density);
    println!("max_density     {}", summary.max_density);
    println!("min_communities {}", summary.min_communities);
    println!("max_communities {}", summary.max_communities);
}

/// One row per value: node degrees, clustering coefficients, Laplacian
/// eigenvalues, and ordered-pair shortest-path lengths.
fn print_raw(ds: &Dataset) -> Result<(), Error> {
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let emit = |out: &mut dyn Write| -> std::io::Result<()> {
        writeln!(out, "graph_id,metric,value")?;
        for entry in ds.graphs() {
            let g = &entry.graph;
            for d in metrics::node_degrees(g) {
                writeln!(out, "{},degree,{}", entry.id, d)?;
            }
            for c in metrics::clustering_coefficients(g) {
                writeln!(out, "{},clustering,{}", entry.id, c)?;
            }
            for e in metrics::laplacian_eigenvalues(g) {
                writeln!(out, "{},spectral,{}", entry.id, e)?;
            }
            for (length, &count) in metrics::path_length_counts(g).iter().enumerate() {
                for _ in 0..count {
                    writeln!(out, "{},paths,{}", entry.id, length)?;
                }
            }
        }
        Ok(())
    };
    emit(&mut out).map_err(|e| Error::io("<stdout>", e))
}

fn cmd_mmd(args: MmdArgs) -> Result<ExitCode, Error> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path.clone(), e))?;
            serde_json::from_str::<SuiteConfig>(&text)
                .map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))?
        }
        None => SuiteConfig {
            master_seed: resolve_seed(args.seed),
            ..SuiteConfig::default()
        },
    };
    if args.config.is_some() {
        if let Some(seed) = args.seed {
            cfg.master_seed = seed;
        }
    }
    if let Some(v) = args.sir_seeds {
        cfg.sir.n_seeds = v;
    }
    if let Some(v) = args.sir_kappa {
        cfg.sir.infect_prob = v;
    }
    if let Some(v) = args.sir_gamma {
        cfg.sir.infectious_period = v;
    }
    if let Some(v) = args.sir_max_iter {
        cfg.sir.max_iterations = v;
    }
    if let Some(v) = args.sir_runs {
        cfg.sir.n_runs = v;
    }
    if let Some(v) = args.louvain_resolution {
        cfg.louvain_resolution = v;
    }
    if let Some(v) = args.louvain_runs {
        cfg.louvain_runs = v;
    }
    if args.no_largest_component {
        cfg.extract_largest_component = false;
    }

    let reference = read_dataset_or_ingest(&args.reference)?;
    let candidate = read_dataset_or_ingest(&args.candidate)?;
    let report = evaluate_suite(&reference, &candidate, &cfg)?;
    write_report(&report, &args.out)?;
    print!("{}", report.to_csv());
    Ok(ExitCode::SUCCESS)
}

fn write_report(report: &MmdReport, out: &Path) -> Result<(), Error> {
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let json_path = out.join("report.json");
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::Manifest(e.to_string()))?;
    fs::write(&json_path, json + "\n").map_err(|e| Error::io(&json_path, e))?;
    let csv_path = out.join("report.csv");
    fs::write(&csv_path, report.to_csv()).map_err(|e| Error::io(&csv_path, e))?;
    Ok(())
}

fn cmd_split(args: SplitArgs) -> Result<ExitCode, Error> {
    if !(args.ratio > 0.0 && args.ratio < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "split ratio {} must lie strictly between 0 and 1",
            args.ratio
        )));
    }
    let seed = resolve_seed(args.seed);
    let ds = read_dataset_or_ingest(&args.dataset)?;
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = ds.len();
    let train_count = ((n as f64 * args.ratio).round() as usize).clamp(1, n - 1);

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = rng::stream(seed, &[tag::SPLIT]);
    use rand::seq::SliceRandom;
    order.shuffle(&mut rng);
    let mut train_indices: Vec<usize> = order[..train_count].to_vec();
    let mut test_indices: Vec<usize> = order[train_count..].to_vec();
    train_indices.sort_unstable();
    test_indices.sort_unstable();

    let build = |name: String, indices: &[usize]| -> Result<Dataset, Error> {
        let mut part = Dataset::new(name, Some(seed));
        for &i in indices {
            part.add_graph(ds.graphs()[i].clone())?;
        }
        Ok(part)
    };
    let train = build(format!("{}_train", ds.name()), &train_indices)?;
    let test = build(format!("{}_test", ds.name()), &test_indices)?;
    write_dataset(&train, &args.out_train)?;
    write_dataset(&test, &args.out_test)?;
    println!(
        "split {} graph(s) into {} train / {} test",
        n,
        train.len(),
        test.len()
    );
    Ok(ExitCode::SUCCESS)
}
