use std::fs::File;
use std::io::{BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcirt::{
    ability_correlations, apply_threshold, cluster_dimensions, discriminant_2pl, discriminant_lc,
    em_fit_2pl, em_fit_lc, emit_dendrogram, load_dataset, load_partition, report, run_pipeline,
    select_k, selection::default_grid, threshold_sweep, DendrogramFormat, DimensionPartition,
    Error, ErrorKind, FitConfig, GeneratorSpec, PipelineOptions, ResponseMatrix, Schema,
};

/// Latent class and multidimensional 2PL analysis of binary questionnaires.
#[derive(Parser, Debug)]
#[command(name = "lcirt", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// JSON file with estimator settings; flags below override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Random starts in addition to the deterministic one.
    #[arg(long, global = true)]
    starts: Option<usize>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[arg(long, global = true)]
    max_iterations: Option<usize>,
    /// Worker threads for the estimators (0 = one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run every estimator on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Name of a subject identifier column to skip in data files.
    #[arg(long, global = true)]
    id_column: Option<String>,
    /// Log verbosity: error, warn, info, debug, trace.
    #[arg(long, global = true, default_value = "warn")]
    log_level: String,
}

#[derive(Args, Debug)]
struct DataArgs {
    /// Response CSV: header of item codes, one 0/1 row per subject.
    #[arg(long)]
    data: PathBuf,
}

#[derive(Args, Debug)]
struct PartitionArgs {
    /// Partition CSV with columns item_code,group_index.
    #[arg(long)]
    partition: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit LC models over a range of class counts and pick k by BIC.
    SelectK {
        #[command(flatten)]
        data: DataArgs,
        /// Class counts, as `a..b` or a single number.
        #[arg(long, default_value = "1..7", value_parser = parse_range)]
        k: RangeInclusive<usize>,
        /// Write the BIC table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit one LC model and report its discriminant indices.
    FitLc {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Fit the constrained multidimensional 2PL model.
    #[command(name = "fit-2pl")]
    Fit2pl {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Screen items by relative discriminant power.
    SelectItems {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        /// Model whose discriminant indices drive the selection.
        #[arg(long, value_enum, default_value_t = Model::TwoPl)]
        model: Model,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Cluster item groups into dimensions by likelihood-ratio tests.
    ClusterDims {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Weighted correlations between latent abilities of a 2PL fit.
    Correlations {
        /// A fit.json written by fit-2pl; otherwise the model is fitted.
        #[arg(long, conflicts_with_all = ["data", "partition", "k"])]
        fit: Option<PathBuf>,
        #[arg(long)]
        data: Option<PathBuf>,
        #[command(flatten)]
        partition: PartitionArgs,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic dataset from a JSON generator spec.
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write each subject's true class.
        #[arg(long)]
        classes_out: Option<PathBuf>,
    },
    /// Run the whole analysis and write a report bundle.
    Pipeline {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[arg(long, default_value = "1..7", value_parser = parse_range)]
        k_range: RangeInclusive<usize>,
        /// Use this class count instead of the BIC choice.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Model {
    Lc,
    #[value(name = "2pl")]
    TwoPl,
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let k = parse(s)?;
            (k, k)
        }
    };
    if a == 0 || a > b {
        return Err(format!("expected 1 <= a <= b, got {s:?}"));
    }
    Ok(a..=b)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return fail("usage", 1, &e.to_string());
        }
    };
    env_logger::Builder::new()
        .parse_filters(&cli.global.log_level)
        .target(env_logger::Target::Stderr)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, code) = match e.kind() {
                ErrorKind::Usage => ("usage", 1),
                ErrorKind::Validation => ("validation", 2),
                ErrorKind::Numerical => ("numerical", 3),
            };
            fail(kind, code, &e.to_string())
        }
    }
}

fn fail(kind: &str, code: u8, message: &str) -> ExitCode {
    let doc = serde_json::json!({
        "error": { "kind": kind, "exit_code": code, "message": message.trim_end() }
    });
    eprintln!("{doc}");
    ExitCode::from(code)
}

fn run(cli: Cli) -> lcirt::Result<()> {
    let g = &cli.global;
    let mut config = fit_config(g)?;
    configure_threads(g.threads)?;
    let schema = Schema {
        id_column: g.id_column.clone(),
    };
    let load = |p: &Path| load_dataset(p, &schema);

    match cli.command {
        Command::SelectK { data, k, out } => {
            let data = load(&data.data)?;
            let sel = select_k(&data, k, &config)?;
            match out {
                Some(path) => report::write_bic_table(&sel.rows, create(&path)?)?,
                None => report::write_bic_table(&sel.rows, std::io::stdout().lock())?,
            }
            println!("selected: {}", sel.selected_k);
        }
        Command::FitLc {
            data,
            partition,
            k,
            out_dir,
        } => {
            let data = load(&data.data)?;
            let partition = partition_for(&partition, &data)?;
            let dir = bundle_dir(&out_dir, &config)?;
            let fit = em_fit_lc(&data, k, &config)?;
            dir.json("lc_fit.json", &fit)?;
            let disc = discriminant_lc(&fit, data.items(), &partition)?;
            report::write_discriminant(&disc, dir.file("lc_discriminant.csv")?)?;
            report::write_sweep(&threshold_sweep(&disc, &default_grid())?, dir.file("lc_sweep.csv")?)?;
        }
        Command::Fit2pl {
            data,
            partition,
            k,
            out_dir,
        } => {
            let data = load(&data.data)?;
            let partition = partition_for(&partition, &data)?;
            let dir = bundle_dir(&out_dir, &config)?;
            let fit = em_fit_2pl(&data, &partition, k, &config)?;
            dir.json("fit.json", &fit)?;
            report::write_abilities(&fit, dir.file("abilities.csv")?)?;
            let disc = discriminant_2pl(&fit, data.items())?;
            report::write_discriminant(&disc, dir.file("discriminant.csv")?)?;
            report::write_sweep(&threshold_sweep(&disc, &default_grid())?, dir.file("sweep.csv")?)?;
        }
        Command::SelectItems {
            data,
            partition,
            k,
            threshold,
            model,
            out_dir,
        } => {
            let data = load(&data.data)?;
            let partition = partition_for(&partition, &data)?;
            let dir = bundle_dir(&out_dir, &config)?;
            let disc = match model {
                Model::Lc => {
                    let fit = em_fit_lc(&data, k, &config)?;
                    discriminant_lc(&fit, data.items(), &partition)?
                }
                Model::TwoPl => discriminant_2pl(&em_fit_2pl(&data, &partition, k, &config)?, data.items())?,
            };
            report::write_discriminant(&disc, dir.file("discriminant.csv")?)?;
            report::write_sweep(&threshold_sweep(&disc, &default_grid())?, dir.file("sweep.csv")?)?;
            let retention = apply_threshold(&disc, threshold)?;
            dir.json("retention.json", &retention)?;
            report::write_selected_items(
                data.items(),
                &partition,
                &retention.retained,
                dir.file("selected_items.csv")?,
            )?;
            data.restrict(&retention.retained)?
                .write_csv(dir.file("selected_data.csv")?)?;
        }
        Command::ClusterDims {
            data,
            partition,
            k,
            alpha,
            out_dir,
        } => {
            if let Some(a) = alpha {
                config.alpha = a;
                config.validate()?;
            }
            let data = load(&data.data)?;
            let partition = partition_for(&partition, &data)?;
            let dir = bundle_dir(&out_dir, &config)?;
            let outcome = match cluster_dimensions(&data, &partition, k, config.alpha, &config) {
                Ok(o) => o,
                Err(Error::Clustering { source, partial }) => {
                    write_path(&dir, &partial)?;
                    return Err(Error::Clustering { source, partial });
                }
                Err(e) => return Err(e),
            };
            write_path(&dir, &outcome.path)?;
            outcome
                .selected_partition()
                .write_csv(data.items(), dir.file("selected_partition.csv")?)?;
            dir.json("selected_fit.json", outcome.selected_fit())?;
        }
        Command::Correlations {
            fit,
            data,
            partition,
            k,
            out,
        } => {
            let fit = match fit {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                    serde_json::from_str(&text)?
                }
                None => {
                    let (Some(data), Some(k)) = (data, k) else {
                        return Err(Error::InvalidArgument(
                            "correlations needs --fit, or --data and --k".into(),
                        ));
                    };
                    let data = load(&data)?;
                    let partition = partition_for(&partition, &data)?;
                    em_fit_2pl(&data, &partition, k, &config)?
                }
            };
            let corr = ability_correlations(&fit)?;
            match out {
                Some(path) => report::write_correlations(&corr, create(&path)?)?,
                None => report::write_correlations(&corr, std::io::stdout().lock())?,
            }
        }
        Command::Simulate {
            spec,
            out,
            classes_out,
        } => {
            let sim = lcirt::simulate(&GeneratorSpec::load(&spec)?)?;
            sim.data.save(&out)?;
            if let Some(path) = classes_out {
                let mut w = create(&path)?;
                let mut body = String::from("subject,class\n");
                for (i, c) in sim.classes.iter().enumerate() {
                    body.push_str(&format!("{},{}\n", i + 1, c + 1));
                }
                w.write_all(body.as_bytes())
                    .and_then(|_| w.flush())
                    .map_err(|e| Error::io(&path, e))?;
            }
        }
        Command::Pipeline {
            data,
            partition,
            k_range,
            k,
            threshold,
            alpha,
            out_dir,
        } => {
            if let Some(a) = alpha {
                config.alpha = a;
                config.validate()?;
            }
            let data = load(&data.data)?;
            let partition = partition_for(&partition, &data)?;
            let options = PipelineOptions {
                k_range,
                k_override: k,
                threshold,
            };
            let summary = run_pipeline(&data, &partition, &options, &config, &out_dir)?;
            log::info!(
                "pipeline done: k = {}, {} items kept, {} dimensions",
                summary.k,
                summary.retained_items,
                summary.selected_dimensions
            );
        }
    }
    Ok(())
}

fn fit_config(g: &Global) -> lcirt::Result<FitConfig> {
    let mut config = match &g.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str(&text)?
        }
        None => FitConfig::default(),
    };
    if let Some(v) = g.seed {
        config.seed = v;
    }
    if let Some(v) = g.starts {
        config.n_random_starts = v;
    }
    if let Some(v) = g.tolerance {
        config.tolerance = v;
    }
    if let Some(v) = g.max_iterations {
        config.max_iterations = v;
    }
    if g.sequential {
        config.parallel = false;
    }
    config.validate()?;
    Ok(config)
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<usize>) -> lcirt::Result<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(threads: Option<usize>) -> lcirt::Result<()> {
    if threads.is_some_and(|n| n > 1) {
        log::warn!("built without the parallel feature; --threads ignored");
    }
    Ok(())
}

fn partition_for(args: &PartitionArgs, data: &ResponseMatrix) -> lcirt::Result<DimensionPartition> {
    match &args.partition {
        Some(path) => load_partition(path, data.items()),
        None => Ok(DimensionPartition::unidimensional(data.n_items())),
    }
}

fn create(path: &Path) -> lcirt::Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

struct Bundle(PathBuf);

impl Bundle {
    fn file(&self, name: &str) -> lcirt::Result<BufWriter<File>> {
        create(&self.0.join(name))
    }

    fn text(&self, name: &str, body: &str) -> lcirt::Result<()> {
        let path = self.0.join(name);
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))
    }

    fn json<T: serde::Serialize>(&self, name: &str, value: &T) -> lcirt::Result<()> {
        self.text(name, &report::to_json(value)?)
    }
}

/// Create the output directory and record the settings used.
fn bundle_dir(dir: &Path, config: &FitConfig) -> lcirt::Result<Bundle> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let b = Bundle(dir.to_path_buf());
    b.json("config.json", config)?;
    Ok(b)
}

fn write_path(dir: &Bundle, path: &lcirt::DendrogramPath) -> lcirt::Result<()> {
    report::write_path(path, dir.file("path.csv")?)?;
    dir.json("path.json", path)?;
    if !path.steps.is_empty() {
        dir.text("dendrogram.txt", &emit_dendrogram(path, DendrogramFormat::Text)?)?;
        dir.text("dendrogram.dot", &emit_dendrogram(path, DendrogramFormat::Dot)?)?;
    }
    Ok(())
}
