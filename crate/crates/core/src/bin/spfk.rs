use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spfk::commands::{cmd_benchmark, cmd_plot_silhouette, cmd_select, Format, RunConfig, DATA_DIR_ENV};
use spfk::data::Split;
use spfk::fixtures::TableId;
use spfk::sax::SaxParams;
use spfk::selection::{Mode, SweepGrid, TfidfProtocol};
use spfk::spf::SpfParams;
use spfk::vectorize::FrequencyFilter;
use spfk::{Error, Result};

#[derive(Parser)]
#[command(name = "spfk", version, about = "Pick the number of clusters of time-series datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep k and SAX parameters on datasets and report the best k.
    Select(RunArgs),
    /// Run raw, BoW and TF-IDF selection over the datasets of a result table.
    Benchmark {
        #[command(flatten)]
        run: RunArgs,
        /// Table whose datasets are benchmarked (III, IV or V).
        #[arg(long, default_value = "IV")]
        table: String,
    },
    /// Draw silhouette against k from a JSON report.
    PlotSilhouette {
        report: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// UCR file or dataset name (repeatable).
    #[arg(long)]
    data: Vec<String>,
    /// Root directory holding UCR datasets.
    #[arg(long, env = DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,
    #[arg(long, default_value = "bow")]
    mode: String,
    #[arg(long, default_value_t = 2)]
    k_min: usize,
    #[arg(long, default_value_t = 10)]
    k_max: usize,
    /// Comma-separated SAX window lengths.
    #[arg(long, value_delimiter = ',')]
    windows: Vec<usize>,
    /// Comma-separated SAX alphabet sizes.
    #[arg(long, value_delimiter = ',')]
    alphabets: Vec<usize>,
    /// Comma-separated SAX word lengths.
    #[arg(long, value_delimiter = ',')]
    word_length: Vec<usize>,
    #[arg(long)]
    min_freq: Option<f64>,
    #[arg(long)]
    max_freq: Option<f64>,
    /// Sweep SAX parameters jointly with TF-IDF filters instead of reusing
    /// the best BoW setting.
    #[arg(long)]
    tfidf_full_grid: bool,
    #[arg(long, default_value_t = spfk::spf::DEFAULT_ENSEMBLE_SIZE)]
    trees: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Comma-separated output formats: json, csv, svg.
    #[arg(long, value_delimiter = ',', default_value = "json,csv")]
    format: Vec<String>,
    #[arg(long, default_value = "train")]
    split: String,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        let mode: Mode = self.mode.parse()?;
        let mut grid = SweepGrid::new(mode).with_k_range(self.k_min, self.k_max);
        if !self.windows.is_empty() {
            grid.windows = self.windows.clone();
        }
        if !self.alphabets.is_empty() {
            grid.alphabets = self.alphabets.clone();
        }
        if !self.word_length.is_empty() {
            grid.word_lengths = self.word_length.clone();
        }
        match (self.min_freq, self.max_freq) {
            (None, None) => {}
            (min, max) => {
                grid.filters = vec![FrequencyFilter::new(min.unwrap_or(0.0), max.unwrap_or(1.0))?];
            }
        }
        if self.tfidf_full_grid {
            grid.tfidf_protocol = TfidfProtocol::Full;
        }
        let spf = SpfParams {
            sax: SaxParams {
                word_length: grid.word_lengths[0],
                ..SpfParams::default().sax
            },
            ..SpfParams::default()
        }
        .with_ensemble_size(self.trees)
        .with_seed(self.seed);
        let split: Split = self.split.parse()?;
        let formats = self
            .format
            .iter()
            .map(|f| f.parse::<Format>())
            .collect::<Result<Vec<_>>>()?;
        Ok(RunConfig {
            data: self.data.clone(),
            data_dir: self.data_dir.clone(),
            split,
            grid,
            spf,
            out: self.out.clone(),
            formats,
        })
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Select(args) => {
            for outcome in cmd_select(&args.config()?)? {
                println!("{}", outcome.summary_line());
            }
        }
        Command::Benchmark { run, table } => {
            let table: TableId = table.parse()?;
            let out = cmd_benchmark(&run.config()?, table)?;
            for name in &out.skipped {
                eprintln!("skipped {name}: not available locally");
            }
            for m in Mode::ALL {
                println!("mode={m} correct={}/{}", out.correct_count(m), out.rows.len());
            }
            for f in &out.files {
                println!("wrote {}", f.display());
            }
        }
        Command::PlotSilhouette { report, out } => {
            let path = cmd_plot_silhouette(&report, out.as_deref())?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_status(&e))
        }
    }
}

fn exit_status(e: &Error) -> u8 {
    e.exit_code() as u8
}
