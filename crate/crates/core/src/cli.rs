//! Command-line driver: ingestion, training, evaluation, comparison and the
//! power-law diagnostic, all parameterised by one flat [`RunConfig`].
//!
//! Settings resolve as defaults, then `--config FILE` (`key = value` lines),
//! then flags. The resolved configuration is echoed into every artifact.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::baselines::{random_scorer, train_classic_mf, zipf_scorer, MfConfig, PopularityTable};
use crate::dataio::{build_matrix, parse_csv, parse_movielens, split, ColumnMap, ErrorPolicy, RatingMatrix, SplitPair};
use crate::error::{Error, Result};
use crate::metrics::{
    compare, degree_of_matthew_effect, mae, rating_diff_histogram, write_plot_csv, DmeFit, MetricsReport,
};
use crate::model::{read_artifact, scale_scores, top_k, write_artifact, FactorModel, ModelHeader, Scorer};
use crate::ppr::{train_ppr, TrainConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DataFormat {
    /// `UserID::MovieID::Rating::Timestamp`
    Movielens,
    /// Delimited text with a header row.
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Pareto pairwise ranking.
    Ppr,
    /// Classic matrix factorization.
    Mf,
    /// Random placement.
    Random,
    /// Zipf (popularity) placement.
    Zipf,
}

impl Algorithm {
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Ppr => "ppr",
            Algorithm::Mf => "mf",
            Algorithm::Random => "random",
            Algorithm::Zipf => "zipf",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        <Algorithm as ValueEnum>::from_str(s.trim(), true)
            .map_err(|_| Error::Config(format!("unknown algorithm {s:?} (expected ppr, mf, random or zipf)")))
    }
}

/// Every knob of a run. Only `data` lacks a default.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub data: Option<PathBuf>,
    pub format: DataFormat,
    pub delimiter: char,
    pub user_col: String,
    pub item_col: String,
    pub rating_col: String,
    pub skip_malformed: bool,
    pub scale_min: Option<f64>,
    pub scale_max: Option<f64>,
    pub algo: Algorithm,
    pub algos: Vec<Algorithm>,
    pub alpha: f64,
    pub gamma: f64,
    pub d: usize,
    pub max_iters: usize,
    pub user_sample_size: usize,
    pub item_sample_size: usize,
    pub epsilon: f64,
    pub max_step_norm: f64,
    pub mf_gamma: f64,
    pub mf_lambda: f64,
    pub mf_epochs: usize,
    pub test_ratio: f64,
    pub k: usize,
    pub seed: u64,
    pub model: Option<PathBuf>,
    pub stats: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let ppr = TrainConfig::<f64>::default();
        let mf = MfConfig::<f64>::default();
        let columns = ColumnMap::default();
        RunConfig {
            data: None,
            format: DataFormat::Movielens,
            delimiter: ',',
            user_col: columns.user,
            item_col: columns.item,
            rating_col: columns.rating,
            skip_malformed: false,
            scale_min: None,
            scale_max: None,
            algo: Algorithm::Ppr,
            algos: vec![Algorithm::Ppr, Algorithm::Mf, Algorithm::Random, Algorithm::Zipf],
            alpha: ppr.alpha,
            gamma: ppr.gamma,
            d: ppr.d,
            max_iters: ppr.max_iters,
            user_sample_size: ppr.user_sample_size,
            item_sample_size: ppr.item_sample_size,
            epsilon: ppr.epsilon,
            max_step_norm: ppr.max_step_norm,
            mf_gamma: mf.gamma,
            mf_lambda: mf.lambda,
            mf_epochs: mf.epochs,
            test_ratio: 0.2,
            k: 10,
            seed: 0,
            model: None,
            stats: None,
            report: None,
            plot: None,
            out: None,
        }
    }
}

fn parse_value<V: std::str::FromStr>(key: &str, value: &str) -> Result<V> {
    value.trim().parse().map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

impl RunConfig {
    /// Set one field by name, as used by config files.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let path = || Some(PathBuf::from(value.trim()));
        match key.trim() {
            "data" => self.data = path(),
            "format" => {
                self.format = DataFormat::from_str(value.trim(), true)
                    .map_err(|_| Error::Config(format!("unknown format {value:?}")))?
            }
            "delimiter" => self.delimiter = parse_delimiter(value)?,
            "user_col" => self.user_col = value.trim().to_string(),
            "item_col" => self.item_col = value.trim().to_string(),
            "rating_col" => self.rating_col = value.trim().to_string(),
            "skip_malformed" => self.skip_malformed = parse_value(key, value)?,
            "scale_min" => self.scale_min = Some(parse_value(key, value)?),
            "scale_max" => self.scale_max = Some(parse_value(key, value)?),
            "algo" => self.algo = Algorithm::parse(value)?,
            "algos" => self.algos = value.split(',').map(Algorithm::parse).collect::<Result<_>>()?,
            "alpha" => self.alpha = parse_value(key, value)?,
            "gamma" => self.gamma = parse_value(key, value)?,
            "d" => self.d = parse_value(key, value)?,
            "max_iters" => self.max_iters = parse_value(key, value)?,
            "user_sample_size" => self.user_sample_size = parse_value(key, value)?,
            "item_sample_size" => self.item_sample_size = parse_value(key, value)?,
            "epsilon" => self.epsilon = parse_value(key, value)?,
            "max_step_norm" => self.max_step_norm = parse_value(key, value)?,
            "mf_gamma" => self.mf_gamma = parse_value(key, value)?,
            "mf_lambda" => self.mf_lambda = parse_value(key, value)?,
            "mf_epochs" => self.mf_epochs = parse_value(key, value)?,
            "test_ratio" => self.test_ratio = parse_value(key, value)?,
            "k" => self.k = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "model" => self.model = path(),
            "stats" => self.stats = path(),
            "report" => self.report = path(),
            "plot" => self.plot = path(),
            "out" => self.out = path(),
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Apply `key = value` lines. Blank lines and `#` comments are ignored.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("config line {}: expected key = value", n + 1)))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.test_ratio) {
            return Err(Error::InvalidParameter(format!("test_ratio {} not in [0, 1]", self.test_ratio)));
        }
        if self.scale_min.is_some() != self.scale_max.is_some() {
            return Err(Error::Config("scale_min and scale_max must be given together".into()));
        }
        self.ppr_config().validate()
    }

    pub fn ppr_config(&self) -> TrainConfig<f64> {
        TrainConfig {
            alpha: self.alpha,
            gamma: self.gamma,
            d: self.d,
            max_iters: self.max_iters,
            user_sample_size: self.user_sample_size,
            item_sample_size: self.item_sample_size,
            epsilon: self.epsilon,
            max_step_norm: self.max_step_norm,
            seed: self.seed,
        }
    }

    pub fn mf_config(&self) -> MfConfig<f64> {
        MfConfig { d: self.d, gamma: self.mf_gamma, lambda: self.mf_lambda, epochs: self.mf_epochs, seed: self.seed }
    }

    fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("run config serializes")
    }

    fn data_path(&self) -> Result<&Path> {
        self.data.as_deref().ok_or_else(|| Error::Config("no dataset given (use --data)".into()))
    }
}

fn parse_delimiter(value: &str) -> Result<char> {
    if value.trim_matches(' ') == "\t" {
        return Ok('\t');
    }
    match value.trim() {
        "\\t" | "tab" => Ok('\t'),
        v if v.chars().count() == 1 && v.is_ascii() => Ok(v.chars().next().unwrap()),
        v => Err(Error::Config(format!("delimiter must be a single ASCII character, got {v:?}"))),
    }
}

/// Flags mirroring [`RunConfig`] one-to-one.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// `key = value` file applied before the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Ratings file.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<DataFormat>,
    /// Field delimiter for `--format csv` (`\t` or `tab` for tabs).
    #[arg(long)]
    pub delimiter: Option<String>,
    #[arg(long)]
    pub user_col: Option<String>,
    #[arg(long)]
    pub item_col: Option<String>,
    #[arg(long)]
    pub rating_col: Option<String>,
    /// Drop malformed lines instead of failing.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub skip_malformed: Option<bool>,
    #[arg(long)]
    pub scale_min: Option<f64>,
    #[arg(long)]
    pub scale_max: Option<f64>,
    #[arg(long, value_enum)]
    pub algo: Option<Algorithm>,
    /// Comma-separated algorithms for `compare`.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub algos: Option<Vec<Algorithm>>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub user_sample_size: Option<usize>,
    #[arg(long)]
    pub item_sample_size: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub max_step_norm: Option<f64>,
    #[arg(long)]
    pub mf_gamma: Option<f64>,
    #[arg(long)]
    pub mf_lambda: Option<f64>,
    #[arg(long)]
    pub mf_epochs: Option<usize>,
    #[arg(long)]
    pub test_ratio: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Model artifact (written by `train`, read by `evaluate`).
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Training statistics CSV.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Metrics report JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Plot-ready CSV.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Comparison CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ConfigArgs {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(&fs::read_to_string(path)?)?;
        }
        macro_rules! overlay {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field { cfg.$field = v.clone(); })*
            };
        }
        overlay!(
            format,
            user_col,
            item_col,
            rating_col,
            skip_malformed,
            algo,
            algos,
            alpha,
            gamma,
            d,
            max_iters,
            user_sample_size,
            item_sample_size,
            epsilon,
            max_step_norm,
            mf_gamma,
            mf_lambda,
            mf_epochs,
            test_ratio,
            k,
            seed
        );
        macro_rules! overlay_opt {
            ($($field:ident),*) => {
                $(if self.$field.is_some() { cfg.$field = self.$field.clone(); })*
            };
        }
        overlay_opt!(data, scale_min, scale_max, model, stats, report, plot, out);
        if let Some(d) = &self.delimiter {
            cfg.delimiter = parse_delimiter(d)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Parser)]
#[command(name = "ppr", version, about = "Pareto pairwise ranking: train, evaluate and compare recommenders")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split the data, train one algorithm, write the model and its stats.
    Train(ConfigArgs),
    /// Score a trained model on its test split; write the metrics report.
    Evaluate(ConfigArgs),
    /// Train and evaluate several algorithms on one split; rank them.
    Compare(ConfigArgs),
    /// Histogram of positive within-user rating differences.
    AnalyzePowerlaw(ConfigArgs),
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Train(args) => cmd_train(&args.resolve()?),
        Command::Evaluate(args) => cmd_evaluate(&args.resolve()?).map(|_| ()),
        Command::Compare(args) => cmd_compare(&args.resolve()?).map(|_| ()),
        Command::AnalyzePowerlaw(args) => cmd_analyze_powerlaw(&args.resolve()?),
    }
}

/// A loaded ratings file.
pub struct Dataset {
    pub name: String,
    pub matrix: RatingMatrix<f64>,
}

pub fn load_dataset(cfg: &RunConfig) -> Result<Dataset> {
    let path = cfg.data_path()?;
    let file = File::open(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    let policy = if cfg.skip_malformed { ErrorPolicy::Skip } else { ErrorPolicy::FailFast };
    let parsed = match cfg.format {
        DataFormat::Movielens => parse_movielens(BufReader::new(file), policy)?,
        DataFormat::Csv => {
            let columns =
                ColumnMap { user: cfg.user_col.clone(), item: cfg.item_col.clone(), rating: cfg.rating_col.clone() };
            parse_csv(BufReader::new(file), &columns, cfg.delimiter as u8, policy)?
        }
    };
    let scale = cfg.scale_min.zip(cfg.scale_max);
    let matrix = build_matrix(&parsed.records, scale)?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string());
    Ok(Dataset { name, matrix })
}

/// A trained algorithm, ready to score.
pub enum Trained {
    Factor { model: FactorModel<f64>, stats_csv: Vec<u8> },
    Random { n_users: usize, n_items: usize },
    Zipf,
}

pub fn fit(cfg: &RunConfig, algo: Algorithm, data: &SplitPair<f64>) -> Result<Trained> {
    let train = &data.train;
    Ok(match algo {
        Algorithm::Ppr => {
            let (model, stats) = train_ppr(train, &cfg.ppr_config())?;
            let mut stats_csv = Vec::new();
            stats.write_csv(&mut stats_csv)?;
            Trained::Factor { model, stats_csv }
        }
        Algorithm::Mf => {
            let (model, stats) = train_classic_mf(train, &cfg.mf_config())?;
            let mut stats_csv = Vec::new();
            stats.write_csv(&mut stats_csv)?;
            Trained::Factor { model, stats_csv }
        }
        Algorithm::Random => Trained::Random { n_users: train.n_users(), n_items: train.n_items() },
        Algorithm::Zipf => Trained::Zipf,
    })
}

/// Score every test entry, scale onto the rating range, and measure MAE;
/// then build top-K lists from the training split and fit the DME.
pub fn evaluate_scorer(
    cfg: &RunConfig,
    algo: Algorithm,
    dataset: &str,
    data: &SplitPair<f64>,
    scorer: &dyn Scorer<f64>,
) -> Result<(MetricsReport, DmeFit<f64>)> {
    let raw = data.test.entries().map(|(u, i, _)| scorer.score(u, i)).collect::<Result<Vec<f64>>>()?;
    let predictions = scale_scores(&raw, data.train.scale())?;
    let mae = mae(&predictions, &data.test)?;
    let recs = top_k(scorer, &data.train, cfg.k)?;
    let fit = degree_of_matthew_effect(&recs, data.train.n_items())?;
    let mut echo = cfg.clone();
    echo.algo = algo;
    let report = MetricsReport {
        algorithm: algo.tag().to_string(),
        dataset: dataset.to_string(),
        seed: cfg.seed,
        test_ratio: cfg.test_ratio,
        k: cfg.k,
        mae,
        dme_slope: Some(fit.slope),
        dme_abs: Some(fit.slope.abs()),
        fit_points: fit.fit_points(),
        config: echo.echo(),
    };
    Ok((report, fit))
}

fn with_scorer<R>(
    trained: &Trained,
    seed: u64,
    data: &SplitPair<f64>,
    f: impl FnOnce(&dyn Scorer<f64>) -> Result<R>,
) -> Result<R> {
    match trained {
        Trained::Factor { model, .. } => f(model),
        Trained::Random { n_users, n_items } => f(&random_scorer(*n_users, *n_items, seed)),
        Trained::Zipf => f(&zipf_scorer(data.train.n_users(), PopularityTable::from_matrix(&data.train))),
    }
}

/// Write to `path`, or to stdout when no path is configured.
fn emit(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn config_comment(w: &mut dyn Write, cfg: &RunConfig) -> Result<()> {
    writeln!(w, "# config={}", serde_json::to_string(&cfg.echo())?)?;
    Ok(())
}

pub fn cmd_train(cfg: &RunConfig) -> Result<()> {
    let model_path = cfg.model.as_deref().ok_or_else(|| Error::Config("train needs --model".into()))?;
    let dataset = load_dataset(cfg)?;
    let data = split(&dataset.matrix, cfg.test_ratio, cfg.seed)?;
    let trained = fit(cfg, cfg.algo, &data)?;
    let (model, stats_csv) = match &trained {
        Trained::Factor { model, stats_csv } => (Some(model), Some(stats_csv)),
        _ => (None, None),
    };
    let header = ModelHeader {
        algorithm: cfg.algo.tag().to_string(),
        scalar: "f64".into(),
        d: model.map(|m| m.d()).unwrap_or(0),
        n_users: dataset.matrix.n_users(),
        n_items: dataset.matrix.n_items(),
        seed: cfg.seed,
        config: cfg.echo(),
    };
    emit(Some(model_path), |w| write_artifact(w, &header, model))?;
    if let (Some(path), Some(csv)) = (cfg.stats.as_deref(), stats_csv) {
        emit(Some(path), |w| {
            config_comment(w, cfg)?;
            w.write_all(csv)?;
            Ok(())
        })?;
    }
    Ok(())
}

fn write_dme_plot(path: &Path, cfg: &RunConfig, fit: &DmeFit<f64>) -> Result<()> {
    let points: Vec<(f64, u64)> = fit.points.iter().map(|&(r, c)| (r as f64, c as u64)).collect();
    emit(Some(path), |w| {
        config_comment(w, cfg)?;
        write_plot_csv(w, "rank", &points)
    })
}

/// Hyperparameters recorded when the model was trained. The report echoes
/// these rather than whatever the evaluate invocation defaulted to.
const TRAINING_KEYS: &[&str] = &[
    "alpha",
    "gamma",
    "d",
    "max_iters",
    "user_sample_size",
    "item_sample_size",
    "epsilon",
    "max_step_norm",
    "mf_gamma",
    "mf_lambda",
    "mf_epochs",
];

fn with_training_settings(cfg: &RunConfig, recorded: &serde_json::Value) -> Result<RunConfig> {
    let mut cfg = cfg.clone();
    for &key in TRAINING_KEYS {
        if let Some(value) = recorded.get(key) {
            cfg.set(key, &value.to_string())
                .map_err(|_| Error::Artifact(format!("bad recorded setting {key} = {value}")))?;
        }
    }
    Ok(cfg)
}

pub fn cmd_evaluate(cfg: &RunConfig) -> Result<MetricsReport> {
    let model_path = cfg.model.as_deref().ok_or_else(|| Error::Config("evaluate needs --model".into()))?;
    let (header, model) = read_artifact::<f64, _>(BufReader::new(File::open(model_path)?))?;
    let algo = Algorithm::parse(&header.algorithm)
        .map_err(|_| Error::Artifact(format!("unknown algorithm {:?}", header.algorithm)))?;
    let cfg = &with_training_settings(cfg, &header.config)?;
    let dataset = load_dataset(cfg)?;
    let (n_users, n_items) = (dataset.matrix.n_users(), dataset.matrix.n_items());
    if header.n_users != n_users || header.n_items != n_items {
        return Err(Error::ShapeMismatch {
            model_users: header.n_users,
            model_items: header.n_items,
            data_users: n_users,
            data_items: n_items,
        });
    }
    let data = split(&dataset.matrix, cfg.test_ratio, cfg.seed)?;
    let trained = match (algo, model) {
        (Algorithm::Ppr | Algorithm::Mf, Some(model)) => Trained::Factor { model, stats_csv: Vec::new() },
        (Algorithm::Random, None) => Trained::Random { n_users, n_items },
        (Algorithm::Zipf, None) => Trained::Zipf,
        _ => return Err(Error::Artifact(format!("{} artifact has unexpected contents", header.algorithm))),
    };
    let (report, fit) =
        with_scorer(&trained, header.seed, &data, |s| evaluate_scorer(cfg, algo, &dataset.name, &data, s))?;
    emit(cfg.report.as_deref(), |w| {
        serde_json::to_writer_pretty(&mut *w, &report)?;
        writeln!(w)?;
        Ok(())
    })?;
    if let Some(plot) = cfg.plot.as_deref() {
        write_dme_plot(plot, cfg, &fit)?;
    }
    Ok(report)
}

pub fn cmd_compare(cfg: &RunConfig) -> Result<Vec<MetricsReport>> {
    let mut algos = cfg.algos.clone();
    algos.sort();
    algos.dedup();
    if algos.len() < 2 {
        return Err(Error::Config("compare needs at least two distinct algorithms".into()));
    }
    let dataset = load_dataset(cfg)?;
    let data = split(&dataset.matrix, cfg.test_ratio, cfg.seed)?;
    let mut reports = Vec::with_capacity(algos.len());
    for &algo in &algos {
        let trained = fit(cfg, algo, &data)?;
        let (report, _) =
            with_scorer(&trained, cfg.seed, &data, |s| evaluate_scorer(cfg, algo, &dataset.name, &data, s))?;
        reports.push(report);
    }
    let table = compare(&reports)?;
    emit(cfg.out.as_deref(), |w| {
        config_comment(w, cfg)?;
        table.write_csv(w)
    })?;
    if let Some(path) = cfg.report.as_deref() {
        emit(Some(path), |w| {
            serde_json::to_writer_pretty(&mut *w, &reports)?;
            writeln!(w)?;
            Ok(())
        })?;
    }
    Ok(reports)
}

pub fn cmd_analyze_powerlaw(cfg: &RunConfig) -> Result<()> {
    let dataset = load_dataset(cfg)?;
    let hist = rating_diff_histogram(&dataset.matrix)?;
    let points: Vec<(f64, u64)> = hist.bins.iter().map(|&(d, n)| (d, n)).collect();
    emit(cfg.plot.as_deref(), |w| {
        config_comment(w, cfg)?;
        write_plot_csv(w, "value", &points)
    })?;
    if let Some(slope) = hist.slope {
        eprintln!("log-log slope of difference counts: {slope}");
    }
    Ok(())
}
