use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use clinrel::corpus::{generate_synthetic, load_corpus, save_corpus, SynthConfig};
use clinrel::exec::Execution;
use clinrel::features::FeatureConfig;
use clinrel::harness::{
    experiment_ablation, experiment_algorithms, experiment_learning_curve, experiment_tau_sweep, run_cv, CvConfig,
    Experiment, ExperimentTable, DEFAULT_FOLDS, DEFAULT_SEED, TAU_VALUES,
};
use clinrel::learners::{Algorithm, Hyperparameters, KernelSpec};
use clinrel::pairing::DEFAULT_MAX_CROSSINGS;
use clinrel::pipeline::{PipelineConfig, RelationExtractor};
use clinrel::Error;

#[derive(Parser)]
#[command(name = "clinrel", version, about = "Relation extraction for clinical narratives")]
struct Cli {
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic annotated corpus.
    Generate {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 40)]
        docs: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        min_sentences: usize,
        #[arg(long, default_value_t = 9)]
        max_sentences: usize,
    },
    /// Train on a whole corpus and save the model.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Replace a corpus's relations with a model's predictions.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-validate one configuration.
    Evaluate {
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        cv: CvArgs,
    },
    /// Run one of the experiment tables.
    Experiment {
        #[command(subcommand)]
        which: ExperimentCommand,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// All five learners side by side.
    Algorithms(ExperimentArgs),
    /// SVM over several margin ratios.
    Tau {
        #[command(flatten)]
        args: ExperimentArgs,
        /// Comma-separated margin ratios.
        #[arg(long, value_delimiter = ',', default_values_t = TAU_VALUES)]
        values: Vec<f64>,
    },
    /// Additive feature-set study.
    Ablation(ExperimentArgs),
    /// Growing corpus prefixes.
    Curve(ExperimentArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    cv: CvArgs,
}

#[derive(Args)]
struct CvArgs {
    #[arg(long, default_value_t = DEFAULT_FOLDS)]
    folds: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Directory for the .tsv and .json reports; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Linear,
    Poly,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value = "svm", value_parser = parse_algorithm)]
    algorithm: Algorithm,
    /// Comma- or +-separated feature sets (e.g. tok6,atype,dir or notok).
    #[arg(long, default_value = "tok6,atype,dir,str,pos,inter,event", value_parser = parse_features)]
    features: FeatureConfig,
    #[arg(long, default_value_t = DEFAULT_MAX_CROSSINGS)]
    max_crossings: usize,
    /// SVM cost.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, value_enum)]
    kernel: Option<KernelKind>,
    /// Polynomial kernel degree.
    #[arg(long)]
    degree: Option<u32>,
    /// SVM margin ratio.
    #[arg(long)]
    tau: Option<f64>,
    /// Perceptron positive margin.
    #[arg(long)]
    tau_pos: Option<f64>,
    /// Perceptron negative margin.
    #[arg(long)]
    tau_neg: Option<f64>,
    #[arg(long)]
    opt_b: Option<f64>,
    #[arg(long)]
    max_epochs: Option<usize>,
    /// Neighbours for KNN.
    #[arg(long)]
    k: Option<usize>,
    /// C4.5 minimum cases per branch.
    #[arg(long)]
    min_cases: Option<usize>,
    /// C4.5 pruning confidence.
    #[arg(long)]
    confidence: Option<f64>,
    #[arg(long)]
    no_prune: bool,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_features(s: &str) -> Result<FeatureConfig, String> {
    FeatureConfig::parse(s).map_err(|e| e.to_string())
}

impl ModelArgs {
    fn pipeline(&self) -> Result<PipelineConfig, Error> {
        let mut hp = Hyperparameters::default();
        if let Some(c) = self.c {
            hp.svm.c = c;
        }
        let degree = self.degree.unwrap_or(2);
        hp.svm.kernel = match self.kernel {
            Some(KernelKind::Linear) => KernelSpec::Linear,
            _ => KernelSpec::Polynomial { degree },
        };
        if let Some(t) = self.tau {
            hp.svm.tau = t;
        }
        if let Some(t) = self.tau_pos {
            hp.paum.tau_pos = t;
        }
        if let Some(t) = self.tau_neg {
            hp.paum.tau_neg = t;
        }
        if let Some(b) = self.opt_b {
            hp.paum.opt_b = b;
        }
        if let Some(e) = self.max_epochs {
            hp.paum.max_epochs = e;
        }
        if let Some(k) = self.k {
            hp.knn.k = k;
        }
        if let Some(m) = self.min_cases {
            hp.c45.min_cases = m;
        }
        if let Some(c) = self.confidence {
            hp.c45.confidence = c;
        }
        hp.c45.prune = !self.no_prune;
        hp.validate()?;
        Ok(PipelineConfig {
            algorithm: self.algorithm,
            hyperparameters: hp,
            features: self.features.clone(),
            max_crossings: self.max_crossings,
        })
    }
}

fn cv_config(model: &ModelArgs, cv: &CvArgs) -> Result<CvConfig, Error> {
    Ok(CvConfig { pipeline: model.pipeline()?, folds: cv.folds, seed: cv.seed })
}

fn emit(name: &str, tsv: &str, json: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(format!("{name}.tsv")), tsv)?;
            fs::write(dir.join(format!("{name}.json")), json)?;
            Ok(())
        }
        None => {
            io::stdout().write_all(tsv.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_table(table: &ExperimentTable, out: Option<&Path>) -> Result<(), Error> {
    let mut json = table.to_json(false);
    json.push('\n');
    emit(table.experiment.name(), &table.to_tsv(), &json, out)
}

fn run(cli: Cli) -> Result<(), Error> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match cli.command {
        Command::Generate { out, docs, seed, min_sentences, max_sentences } => {
            if min_sentences == 0 || min_sentences > max_sentences {
                return Err(Error::Config("need 1 <= --min-sentences <= --max-sentences".into()));
            }
            let corpus = generate_synthetic(&SynthConfig { n_docs: docs, min_sentences, max_sentences, seed });
            save_corpus(&corpus, out)
        }
        Command::Train { corpus, out, model } => {
            let cfg = model.pipeline()?;
            let corpus = load_corpus(corpus)?;
            RelationExtractor::train(&corpus, &cfg, exec)?.save(out)
        }
        Command::Predict { model, corpus, out } => {
            let model = RelationExtractor::load(model)?;
            let corpus = load_corpus(corpus)?;
            save_corpus(&model.annotate(&corpus, exec), out)
        }
        Command::Evaluate { corpus, model, cv } => {
            let cfg = cv_config(&model, &cv)?;
            let corpus = load_corpus(corpus)?;
            let report = run_cv(&corpus, &cfg, exec)?;
            let table = ExperimentTable {
                experiment: Experiment::Algorithms,
                columns: vec![cfg.pipeline.algorithm.table_label().to_string()],
                reports: vec![report],
            };
            let mut json = table.to_json(false);
            json.push('\n');
            emit("evaluate", &table.to_tsv(), &json, cv.out.as_deref())
        }
        Command::Experiment { which } => {
            let (args, kind, taus) = match which {
                ExperimentCommand::Algorithms(a) => (a, Experiment::Algorithms, Vec::new()),
                ExperimentCommand::Tau { args, values } => (args, Experiment::Tau, values),
                ExperimentCommand::Ablation(a) => (a, Experiment::Ablation, Vec::new()),
                ExperimentCommand::Curve(a) => (a, Experiment::Curve, Vec::new()),
            };
            let cfg = cv_config(&args.model, &args.cv)?;
            let corpus = load_corpus(&args.corpus)?;
            let table = match kind {
                Experiment::Algorithms => experiment_algorithms(&corpus, &cfg, exec)?,
                Experiment::Tau => experiment_tau_sweep(&corpus, &cfg, &taus, exec)?,
                Experiment::Ablation => experiment_ablation(&corpus, &cfg, exec)?,
                Experiment::Curve => experiment_learning_curve(&corpus, &cfg, exec)?,
            };
            emit_table(&table, args.cv.out.as_deref())
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 1,
        Error::EmptyTrainingSet | Error::SingleClass(_) => 2,
        e if e.is_data_error() => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match std::panic::catch_unwind(move || run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(_) => ExitCode::from(3),
    }
}
