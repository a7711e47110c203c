use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hitviz::corpus::{gen_synthetic_corpus, SyntheticCorpusSpec, MANIFEST_NAME};
use hitviz::experiment::{self, ExperimentConfig, Feature};
use hitviz::features::{featurize, read_features, split_features, write_features, FeatureKind};
use hitviz::manifest::{load_manifest, read_bytes};
use hitviz::model_io::{load_model, load_svm, save_model, save_svm};
use hitviz::png_io::write_png;
use hitviz::transform::{canvas_bytes, transform_bytes, TransformConfig};
use hitviz::{Error, Result};
use hitviz_core::baselines::{self, SvmHyper};
use hitviz_core::colorize::{Cut, LetterRanges, Scheme};
use hitviz_core::dataset::{split_dataset, DatasetManifest, SplitSpec};
use hitviz_core::entropy::EntropyParams;
use hitviz_core::imaging::LayoutSpec;
use hitviz_core::metrics::Metrics;
use hitviz_core::nn::{self, CtnArch, Sample, TrainConfig};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "hitviz",
    version,
    about = "Binary-to-image transforms and malware image classifiers"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for corpus generation, splits and training
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// gray, byteclass, gradient, hilbert, entropy, hit (or hit4/hit8/hit16)
    #[arg(long, global = true, default_value = "hit")]
    scheme: String,
    /// HIT cut point: 4, 8 or 16 (overrides a cut given in --scheme)
    #[arg(long, global = true)]
    cut: Option<u32>,
    /// Use the literal a-w / A-W letter ranges in the HIT tables
    #[arg(long, global = true)]
    strict_table: bool,
    #[arg(long, global = true, value_enum, default_value_t = LayoutArg::Horizontal)]
    layout: LayoutArg,
    /// Output image side: 32, 64 or 128
    #[arg(long, global = true, default_value_t = 64)]
    size: usize,
    #[arg(long, global = true, value_enum, default_value_t = EntropyMode::Sliding)]
    entropy_mode: EntropyMode,
    /// Sliding entropy window in bytes
    #[arg(long, global = true, default_value_t = 64)]
    window: usize,
    /// Sliding entropy stride in bytes
    #[arg(long, global = true, default_value_t = 1)]
    stride: usize,
    /// Block entropy block size in bytes
    #[arg(long, global = true, default_value_t = 256)]
    block: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    Horizontal,
    Vertical,
    Hilbert,
}

#[derive(Clone, Copy, ValueEnum)]
enum EntropyMode {
    Sliding,
    Block,
}

#[derive(Clone, Copy, ValueEnum)]
enum FeatureArg {
    Gist,
    Raw,
}

#[derive(Clone, Copy, ValueEnum)]
enum TrainModel {
    Cnn,
    Svm,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalModel {
    Knn,
    Svm,
    Cnn,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitSide {
    All,
    Train,
    Val,
}

#[derive(Args, Clone, Copy)]
struct TrainArgs {
    #[arg(long, default_value_t = 0.8)]
    train_fraction: f64,
    #[arg(long, default_value_t = 30)]
    epochs: usize,
    #[arg(long, default_value_t = 0.01)]
    lr: f64,
    #[arg(long, default_value_t = 0.9)]
    momentum: f64,
    #[arg(long, default_value_t = 32)]
    batch_size: usize,
    /// Multiplier on the He-uniform init bound
    #[arg(long, default_value_t = 0.5)]
    init_scale: f64,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// GIST grid side
    #[arg(long, default_value_t = 4)]
    grid: usize,
    #[arg(long, default_value_t = 4096)]
    raw_dim: usize,
    #[arg(long, default_value_t = 1e-3)]
    svm_lambda: f64,
    #[arg(long, default_value_t = 50)]
    svm_epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    svm_lr: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded synthetic benign/malicious corpus and its manifest
    GenCorpus {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 100)]
        n_per_class: usize,
        #[arg(long, default_value_t = 4096)]
        min_size: usize,
        #[arg(long, default_value_t = 12288)]
        max_size: usize,
    },
    /// Render one file to a PNG
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write the full-resolution canvas instead of the resized image
        #[arg(long)]
        full_canvas: bool,
    },
    /// Write one feature row per manifest entry
    Featurize {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, value_enum)]
        feature: FeatureArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        grid: usize,
        #[arg(long, default_value_t = 4096)]
        raw_dim: usize,
    },
    /// Train on the training side of the split and report both sides
    Train {
        #[arg(long, value_enum)]
        model: TrainModel,
        /// Manifest (cnn)
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Feature CSV (svm)
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        train: TrainArgs,
    },
    /// Evaluate a persisted model
    Eval {
        #[arg(long, value_enum)]
        model: EvalModel,
        /// CTN1 file (cnn) or SVM JSON (svm)
        #[arg(long)]
        model_path: Option<PathBuf>,
        /// Manifest to evaluate (cnn)
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Feature CSV to evaluate (svm, knn)
        #[arg(long)]
        features: Option<PathBuf>,
        /// Reference feature CSV (knn)
        #[arg(long)]
        train_features: Option<PathBuf>,
        /// Which side of the seeded split to evaluate
        #[arg(long, value_enum, default_value_t = SplitSide::All)]
        split: SplitSide,
        #[arg(long, default_value_t = 0.8)]
        train_fraction: f64,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Scheme x feature comparison on one shared split
    Compare {
        #[arg(long)]
        manifest: PathBuf,
        /// JSON report path
        #[arg(long)]
        out: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "byteclass,gray,hilbert,gradient,entropy,hit8"
        )]
        schemes: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "gist+knn,cnn,svm-raw")]
        features: Vec<String>,
        /// Also write the split manifests and trained models here
        #[arg(long)]
        models_dir: Option<PathBuf>,
        #[command(flatten)]
        train: TrainArgs,
    },
    /// HIT + CNN validation accuracy per cut point
    SweepCut {
        #[arg(long)]
        manifest: PathBuf,
        /// CSV output path
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
        cuts: Vec<u32>,
        #[command(flatten)]
        train: TrainArgs,
    },
    /// Per-class mean images as benign_mean.png and malicious_mean.png
    MeanViz {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Serialize)]
struct TrainReport {
    scheme: String,
    feature: String,
    train_acc: f64,
    val_acc: f64,
    confusion: [[usize; 2]; 2],
}

#[derive(Serialize)]
struct EvalReport {
    scheme: String,
    feature: String,
    n: usize,
    accuracy: f64,
    per_class_accuracy: [Option<f64>; 2],
    confusion: [[usize; 2]; 2],
}

impl Global {
    fn scheme(&self) -> Result<Scheme> {
        let base: Scheme = self.scheme.parse()?;
        let scheme = match (base, self.cut) {
            (Scheme::Hit { .. }, Some(c)) => Scheme::hit(Cut::try_from(c)?),
            (_, Some(_)) => {
                return Err(Error::Usage("--cut only applies to the hit scheme".into()))
            }
            (s, None) => s,
        };
        Ok(match scheme {
            Scheme::Hit { cut, .. } if self.strict_table => Scheme::Hit {
                cut,
                letters: LetterRanges::Literal,
            },
            _ if self.strict_table => {
                return Err(Error::Usage(
                    "--strict-table only applies to the hit scheme".into(),
                ))
            }
            s => s,
        })
    }

    fn transform(&self) -> Result<TransformConfig> {
        let entropy = match self.entropy_mode {
            EntropyMode::Sliding => EntropyParams::sliding(self.window, self.stride)?,
            EntropyMode::Block => EntropyParams::block(self.block)?,
        };
        let mode = match self.layout {
            LayoutArg::Horizontal => hitviz_core::imaging::LayoutMode::Horizontal,
            LayoutArg::Vertical => hitviz_core::imaging::LayoutMode::Vertical,
            LayoutArg::Hilbert => hitviz_core::imaging::LayoutMode::Hilbert,
        };
        Ok(TransformConfig {
            scheme: self.scheme()?,
            entropy,
            layout: LayoutSpec::new(mode, self.size)?,
        })
    }

    fn split(&self, fraction: f64) -> Result<SplitSpec> {
        Ok(SplitSpec::new(fraction, self.seed)?)
    }
}

impl TrainArgs {
    fn experiment(&self, g: &Global) -> Result<ExperimentConfig> {
        let train = TrainConfig {
            learning_rate: self.lr,
            momentum: self.momentum,
            batch_size: self.batch_size,
            epochs: self.epochs,
            seed: g.seed,
            weight_init_scale: self.init_scale,
        };
        train.validate()?;
        Ok(ExperimentConfig {
            transform: g.transform()?,
            split: g.split(self.train_fraction)?,
            train,
            k: self.k,
            grid: self.grid,
            svm: self.svm_hyper(g.seed),
            raw_dim: self.raw_dim,
        })
    }

    fn svm_hyper(&self, seed: u64) -> SvmHyper {
        SvmHyper {
            lambda: self.svm_lambda,
            epochs: self.svm_epochs,
            lr: self.svm_lr,
            seed,
        }
    }
}

fn required<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref()
        .ok_or_else(|| Error::Usage(format!("{flag} is required here")))
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn render_samples(m: &DatasetManifest, cfg: &TransformConfig) -> Result<Vec<Sample>> {
    m.entries
        .iter()
        .map(|e| {
            Ok(Sample::from_image(
                &transform_bytes(&read_bytes(&e.path)?.bytes, cfg)?,
                e.label,
            ))
        })
        .collect()
}

fn pick_side(m: DatasetManifest, side: SplitSide, spec: SplitSpec) -> Result<DatasetManifest> {
    Ok(match side {
        SplitSide::All => m,
        SplitSide::Train => split_dataset(&m, spec)?.0,
        SplitSide::Val => split_dataset(&m, spec)?.1,
    })
}

fn eval_report(scheme: &str, feature: &str, m: &Metrics) -> EvalReport {
    EvalReport {
        scheme: scheme.into(),
        feature: feature.into(),
        n: m.total(),
        accuracy: m.accuracy,
        per_class_accuracy: m.per_class_accuracy,
        confusion: m.confusion,
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match cli.command {
        Command::GenCorpus {
            out,
            n_per_class,
            min_size,
            max_size,
        } => {
            let spec = SyntheticCorpusSpec {
                n_per_class,
                seed: g.seed,
                min_size,
                max_size,
            };
            let m = gen_synthetic_corpus(&spec, &out)?;
            eprintln!("wrote {} files", m.len());
            println!("{}", out.join(MANIFEST_NAME).display());
        }
        Command::Render {
            input,
            out,
            full_canvas,
        } => {
            let cfg = g.transform()?;
            let bytes = read_bytes(&input)?.bytes;
            let img = if full_canvas {
                canvas_bytes(&bytes, &cfg)?
            } else {
                transform_bytes(&bytes, &cfg)?
            };
            write_png(&img, &out)?;
        }
        Command::Featurize {
            manifest,
            feature,
            out,
            grid,
            raw_dim,
        } => {
            let kind = match feature {
                FeatureArg::Gist => FeatureKind::Gist,
                FeatureArg::Raw => FeatureKind::Raw,
            };
            let set = featurize(
                &load_manifest(&manifest)?,
                kind,
                &g.transform()?,
                grid,
                raw_dim,
            )?;
            write_features(&set, &out)?;
        }
        Command::Train {
            model,
            manifest,
            features,
            out,
            train,
        } => {
            let cfg = train.experiment(g)?;
            match model {
                TrainModel::Cnn => {
                    let m = load_manifest(required(&manifest, "--manifest")?)?;
                    let (tr, va) = split_dataset(&m, cfg.split)?;
                    let tr = render_samples(&tr, &cfg.transform)?;
                    let va = render_samples(&va, &cfg.transform)?;
                    let arch = CtnArch::with_side(cfg.transform.layout.target);
                    let (model, history) = nn::train_ctn(arch, &tr, &cfg.train)?;
                    for h in &history {
                        eprintln!(
                            "epoch {:>3}  loss {:.6}  acc {:.4}",
                            h.epoch, h.loss, h.accuracy
                        );
                    }
                    save_model(&model, &out)?;
                    let (mt, mv) = (nn::evaluate(&model, &tr)?, nn::evaluate(&model, &va)?);
                    print_json(&TrainReport {
                        scheme: cfg.transform.scheme.to_string(),
                        feature: Feature::Cnn.name().into(),
                        train_acc: mt.accuracy,
                        val_acc: mv.accuracy,
                        confusion: mv.confusion,
                    })?;
                }
                TrainModel::Svm => {
                    let set = read_features(required(&features, "--features")?)?;
                    let (tr, va) = split_features(&set, cfg.split)?;
                    let model = baselines::svm_train(&tr, cfg.svm)?;
                    save_svm(&model, &out)?;
                    let (mt, mv) = (
                        baselines::svm_evaluate(&model, &tr)?,
                        baselines::svm_evaluate(&model, &va)?,
                    );
                    print_json(&TrainReport {
                        scheme: "features".into(),
                        feature: "svm".into(),
                        train_acc: mt.accuracy,
                        val_acc: mv.accuracy,
                        confusion: mv.confusion,
                    })?;
                }
            }
        }
        Command::Eval {
            model,
            model_path,
            manifest,
            features,
            train_features,
            split,
            train_fraction,
            k,
        } => {
            let spec = g.split(train_fraction)?;
            let pick = |set| -> Result<_> {
                Ok(match split {
                    SplitSide::All => set,
                    SplitSide::Train => split_features(&set, spec)?.0,
                    SplitSide::Val => split_features(&set, spec)?.1,
                })
            };
            let report = match model {
                EvalModel::Cnn => {
                    let cfg = g.transform()?;
                    let net = load_model(required(&model_path, "--model-path")?)?;
                    if net.arch.side != cfg.layout.target {
                        return Err(Error::Usage(format!(
                            "model expects {0}x{0} inputs, --size is {1}",
                            net.arch.side, cfg.layout.target
                        )));
                    }
                    let m = pick_side(
                        load_manifest(required(&manifest, "--manifest")?)?,
                        split,
                        spec,
                    )?;
                    let metrics = nn::evaluate(&net, &render_samples(&m, &cfg)?)?;
                    eval_report(&cfg.scheme.to_string(), "cnn", &metrics)
                }
                EvalModel::Svm => {
                    let svm = load_svm(required(&model_path, "--model-path")?)?;
                    let set = pick(read_features(required(&features, "--features")?)?)?;
                    eval_report("features", "svm", &baselines::svm_evaluate(&svm, &set)?)
                }
                EvalModel::Knn => {
                    let reference = read_features(required(&train_features, "--train-features")?)?;
                    let set = pick(read_features(required(&features, "--features")?)?)?;
                    eval_report(
                        "features",
                        "knn",
                        &baselines::knn_evaluate(&reference, &set, k)?,
                    )
                }
            };
            print_json(&report)?;
        }
        Command::Compare {
            manifest,
            out,
            schemes,
            features,
            models_dir,
            train,
        } => {
            let cfg = train.experiment(g)?;
            let schemes = schemes
                .iter()
                .map(|s| Ok(s.parse::<Scheme>()?))
                .collect::<Result<Vec<_>>>()?;
            let features = features
                .iter()
                .map(|f| f.parse::<Feature>())
                .collect::<Result<Vec<_>>>()?;
            let m = load_manifest(&manifest)?;
            let report =
                experiment::run_comparison(&m, &schemes, &features, &cfg, models_dir.as_deref())?;
            report.write_json(&out)?;
            print!("{}", report.table());
        }
        Command::SweepCut {
            manifest,
            out,
            cuts,
            train,
        } => {
            let cfg = train.experiment(g)?;
            let cuts = cuts
                .into_iter()
                .map(|c| Ok(Cut::try_from(c)?))
                .collect::<Result<Vec<_>>>()?;
            let rows = experiment::sweep_cut(&load_manifest(&manifest)?, &cuts, &cfg)?;
            let csv = experiment::sweep_csv(&rows);
            write_text(&out, &csv)?;
            print!("{csv}");
        }
        Command::MeanViz { manifest, out_dir } => {
            let v = experiment::mean_viz(&load_manifest(&manifest)?, &g.transform()?, &out_dir)?;
            println!("{}", v.benign_path.display());
            println!("{}", v.malicious_path.display());
        }
    }
    Ok(())
}

fn fail(kind: &str, message: &str) -> ExitCode {
    let err = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{err}");
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().trim_end()),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.kind(), &e.to_string()),
    }
}
