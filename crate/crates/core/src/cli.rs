//! The `pf2` command line.
//!
//! Exit status is 0 on success, 2 for usage errors, 3 for bad data, schema or
//! model files and 4 for I/O and report failures. Errors go to standard error
//! as a single line `error[<code>]: <message>`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::bench::{self, millis, parse_list, BenchPlan, Classifier, RunReport};
use crate::data::{load_ucr, save_ucr, Dataset};
use crate::distance::MeasureKind;
use crate::error::{Error, Result};
use crate::forest::{self, ForestConfig};
use crate::model;
use crate::synthetic;

#[derive(Debug, Parser)]
#[command(name = "pf2", version, about = "Proximity Forest 2.0 time series classifier")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a forest and write the model file.
    Train(TrainArgs),
    /// Evaluate a model file on labelled test data.
    Test(TestArgs),
    /// Evaluate classifiers over stratified resamples.
    Bench(BenchArgs),
    /// Write the synthetic time-shift dataset in UCR format.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct ForestArgs {
    /// Number of trees (K).
    #[arg(long, default_value_t = 100)]
    pub trees: usize,
    /// Candidate splitters per node (R).
    #[arg(long, default_value_t = 5)]
    pub candidates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated subset of adtw,cdtw,lcss.
    #[arg(long, default_value = "adtw,cdtw,lcss")]
    pub measures: String,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub train: PathBuf,
    /// Model file to write.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub forest: ForestArgs,
    /// Z-normalise every series first.
    #[arg(long)]
    pub normalize: bool,
    /// Report file to write a training record to.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub append: bool,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// Z-normalise every series first; use it if training did.
    #[arg(long)]
    pub normalize: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub append: bool,
    /// CSV file receiving `index,actual,predicted` per query.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// Comma-separated list of pf2, ee_pf2, nn:adtw, nn:cdtw, nn:lcss, nn:dtw, nn:da.
    #[arg(long, default_value = "pf2")]
    pub classifiers: String,
    /// Number of folds; fold 0 is the supplied split.
    #[arg(long, default_value_t = 1)]
    pub resamples: u64,
    #[command(flatten)]
    pub forest: ForestArgs,
    #[arg(long)]
    pub normalize: bool,
    /// Report file; rows are printed to standard output as well.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub append: bool,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Directory receiving `<name>_TRAIN.tsv` and `<name>_TEST.tsv`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "SyntheticShift")]
    pub name: String,
    #[arg(long, default_value_t = 100)]
    pub train_per_class: usize,
    #[arg(long, default_value_t = 100)]
    pub test_per_class: usize,
    #[arg(long, default_value_t = 100)]
    pub length: usize,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
}

impl ForestArgs {
    fn config(&self) -> Result<ForestConfig> {
        let cfg = ForestConfig {
            trees: self.trees,
            candidates: self.candidates,
            seed: self.seed,
            threads: None,
            measures: parse_list::<MeasureKind>(&self.measures)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn load(path: &Path, normalize: bool) -> Result<Dataset> {
    let d = load_ucr(path)?;
    Ok(if normalize { d.z_normalized() } else { d })
}

fn cmd_train(a: &TrainArgs) -> Result<String> {
    let config = a.forest.config()?;
    let data = load(&a.train, a.normalize)?;
    let start = Instant::now();
    let f = forest::train(&data, &config)?;
    let train_s = start.elapsed().as_secs_f64();
    model::save(&f, &a.out)?;
    if let Some(path) = &a.report {
        let record = RunReport {
            dataset: bench::dataset_name(&a.train),
            classifier: "pf2".into(),
            fold: 0,
            accuracy: None,
            train_s: Some(millis(train_s)),
            test_s: None,
            k: Some(config.trees),
            r: Some(config.candidates),
            seed: config.seed,
        };
        bench::write_report(&[record], path, a.append)?;
    }
    Ok(format!(
        "trained {} trees on {} series of length {} ({} classes) in {:.3} s; model written to {}\n",
        config.trees,
        data.len(),
        data.series_len(),
        data.n_classes(),
        train_s,
        a.out.display()
    ))
}

/// Confusion counts, rows actual and columns predicted, both in model class order.
pub fn confusion(classes: &[String], test: &Dataset, predicted: &[usize]) -> Result<Vec<Vec<usize>>> {
    let mut m = vec![vec![0; classes.len()]; classes.len()];
    for (s, &p) in test.series().iter().zip(predicted) {
        let label = s.label().unwrap_or_default();
        let actual = classes
            .iter()
            .position(|c| c == label)
            .ok_or_else(|| Error::Schema(format!("test label {label:?} is not a model class")))?;
        m[actual][p] += 1;
    }
    Ok(m)
}

fn cmd_test(a: &TestArgs) -> Result<String> {
    let f = model::load(&a.model)?;
    let test = load(&a.test, a.normalize)?;
    if test.series_len() != f.series_len() {
        return Err(Error::Schema(format!(
            "model expects series of length {}, test series have length {}",
            f.series_len(),
            test.series_len()
        )));
    }
    if let Some(unknown) = test.classes().iter().find(|c| !f.classes().contains(c)) {
        return Err(Error::Schema(format!("test label {unknown:?} is not a model class")));
    }
    let start = Instant::now();
    let predicted = f.predict_batch(test.series())?;
    let test_s = start.elapsed().as_secs_f64();
    let m = confusion(f.classes(), &test, &predicted)?;
    let correct: usize = (0..m.len()).map(|c| m[c][c]).sum();
    let accuracy = correct as f64 / test.len() as f64;

    if let Some(path) = &a.predictions {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["index", "actual", "predicted"])?;
        for (i, (s, &p)) in test.series().iter().zip(&predicted).enumerate() {
            w.write_record([i.to_string().as_str(), s.label().unwrap_or_default(), f.classes()[p].as_str()])?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    if let Some(path) = &a.report {
        let record = RunReport {
            dataset: bench::dataset_name(&a.test),
            classifier: "pf2".into(),
            fold: 0,
            accuracy: Some(accuracy),
            train_s: None,
            test_s: Some(millis(test_s)),
            k: Some(f.config().trees),
            r: Some(f.config().candidates),
            seed: f.config().seed,
        };
        bench::write_report(&[record], path, a.append)?;
    }

    let mut out = String::new();
    let _ = writeln!(out, "accuracy {} ({correct}/{})", bench::format_accuracy(accuracy), test.len());
    let _ = writeln!(out, "test time {test_s:.3} s");
    let _ = writeln!(out, "confusion (rows actual, columns predicted)");
    let _ = writeln!(out, "actual\\predicted\t{}", f.classes().join("\t"));
    for (c, row) in f.classes().iter().zip(&m) {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{c}\t{}", cells.join("\t"));
    }
    Ok(out)
}

fn cmd_bench(a: &BenchArgs) -> Result<String> {
    let plan = BenchPlan {
        dataset: bench::dataset_name(&a.train),
        classifiers: parse_list::<Classifier>(&a.classifiers)?,
        resamples: a.resamples,
        normalize: a.normalize,
        forest: a.forest.config()?,
    };
    if plan.resamples == 0 {
        return Err(Error::Parameter("resample count must be at least 1".into()));
    }
    let train = load_ucr(&a.train)?;
    let test = load_ucr(&a.test)?;
    if let Some(path) = &a.out {
        // create or validate the file before spending time on training
        bench::write_report(&[], path, a.append)?;
    }
    let mut stdout = csv::WriterBuilder::new().has_headers(false).from_writer(std::io::stdout());
    stdout.write_record(bench::REPORT_HEADER)?;
    stdout.flush().map_err(|e| Error::io("<stdout>", e))?;
    bench::run_bench(&train, &test, &plan, |r| {
        stdout.serialize(r)?;
        stdout.flush().map_err(|e| Error::io("<stdout>", e))?;
        if let Some(path) = &a.out {
            bench::write_report(std::slice::from_ref(r), path, true)?;
        }
        Ok(())
    })?;
    Ok(String::new())
}

fn cmd_synth(a: &SynthArgs) -> Result<String> {
    if a.train_per_class == 0 || a.test_per_class == 0 || a.length < 2 {
        return Err(Error::Parameter("need at least one instance per class and length >= 2".into()));
    }
    std::fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    let (train, test) = synthetic::shift_split(a.train_per_class, a.test_per_class, a.length, a.seed);
    let tr = a.out.join(format!("{}_TRAIN.tsv", a.name));
    let te = a.out.join(format!("{}_TEST.tsv", a.name));
    save_ucr(&train, &tr)?;
    save_ucr(&test, &te)?;
    Ok(format!("wrote {} and {}\n", tr.display(), te.display()))
}

fn execute(cli: &Cli) -> Result<String> {
    let job = || match &cli.command {
        Command::Train(a) => cmd_train(a),
        Command::Test(a) => cmd_test(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Synth(a) => cmd_synth(a),
    };
    match cli.threads {
        Some(0) => Err(Error::Parameter("thread count must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?
            .install(job),
        None => job(),
    }
}

/// Parse `args` (including the program name), run the command and return the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), e.to_string().replace('\n', " "));
            e.exit_status()
        }
    }
}
