use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use icll_core::automata::SamplerParams;
use icll_core::baumwelch::{BwConfig, Cadence};
use icll_core::corpus::{build_benchmark, read_corpus, write_corpus, BenchmarkParams, InstanceShape};
use icll_core::eval::{compare, evaluate, BaumWelch, Lnw, Ngram, Oracle, Predictor, CSV_HEADER};
use icll_core::lnw::{read_model, train_lnw, write_model, TrainConfig, Variant};
use icll_core::ngram::{NgramConfig, Reservation};
use icll_core::{rng, Error};

#[derive(Parser)]
#[command(name = "icll", version, about = "In-context language learning benchmark tool")]
struct Cli {
    /// Worker threads for per-instance parallelism.
    #[arg(long, env = "ICLL_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a benchmark corpus.
    Gen(GenArgs),
    /// Evaluate one predictor on the test split.
    Eval(EvalArgs),
    /// Pairwise distance between two predictors on the test split.
    Compare(CompareArgs),
    /// Train a learned n-gram reweighting model on the training split.
    TrainLnw(TrainArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n_train: usize,
    #[arg(long)]
    n_test: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 4)]
    states_min: usize,
    #[arg(long, default_value_t = 12)]
    states_max: usize,
    #[arg(long, default_value_t = 4)]
    alphabet_min: usize,
    #[arg(long, default_value_t = 18)]
    alphabet_max: usize,
    #[arg(long, default_value_t = 1)]
    degree_min: usize,
    #[arg(long, default_value_t = 4)]
    degree_max: usize,
    #[arg(long, default_value_t = 10)]
    strings_min: usize,
    #[arg(long, default_value_t = 20)]
    strings_max: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum PredictorKind {
    Oracle,
    Ngram,
    Bw,
    Lnw,
}

#[derive(Clone, Copy, ValueEnum)]
enum Refit {
    EveryString,
    EveryToken,
}

#[derive(Clone, Copy, ValueEnum)]
enum Smoothing {
    Phantom,
    None,
}

#[derive(Args, Clone)]
struct PredictorOpts {
    /// N-gram order (context of N - 1 tokens).
    #[arg(long, default_value_t = 3)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Smoothing::Phantom)]
    smoothing: Smoothing,
    #[arg(long, value_enum, default_value_t = Refit::EveryString)]
    refit: Refit,
    /// Baum-Welch iterations per refit.
    #[arg(long, default_value_t = 5)]
    iters: usize,
    /// Number of HMM states; must be a square.
    #[arg(long, default_value_t = 144)]
    states: usize,
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    bw_seed: u64,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum)]
    predictor: PredictorKind,
    #[command(flatten)]
    opts: PredictorOpts,
    /// Trained model file, required for lnw.
    #[arg(long)]
    model: Option<PathBuf>,
    /// JSON report path; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Appends one CSV row, writing the header if the file is new.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum)]
    a: PredictorKind,
    #[arg(long, value_enum)]
    b: PredictorKind,
    #[arg(long)]
    order_a: Option<usize>,
    #[arg(long)]
    order_b: Option<usize>,
    #[arg(long)]
    model_a: Option<PathBuf>,
    #[arg(long)]
    model_b: Option<PathBuf>,
    #[command(flatten)]
    opts: PredictorOpts,
    #[arg(long, default_value_t = 100)]
    max_positions: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Lnw,
    LnwR,
    LnwB,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Lnw => Variant::Counts,
            VariantArg::LnwR => Variant::Frequencies,
            VariantArg::LnwB => Variant::Binary,
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum, default_value_t = VariantArg::Lnw)]
    variant: VariantArg,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Per-epoch loss log (JSON lines); defaults to `<out>.log`.
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    epochs: usize,
    #[arg(long, default_value_t = 32)]
    batch_size: usize,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    #[arg(long, default_value_t = 1024)]
    hidden: usize,
    #[arg(long, default_value_t = 5)]
    patience: usize,
    #[arg(long, default_value_t = 0.5)]
    factor: f64,
    #[arg(long, default_value_t = 1e-5)]
    min_lr: f64,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Data(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        classify(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        classify(e.into())
    }
}

fn classify(e: anyhow::Error) -> Failure {
    match e.downcast_ref::<Error>() {
        Some(
            Error::MalformedRecord { .. }
            | Error::VersionMismatch { .. }
            | Error::ModelFormat(_)
            | Error::OracleReject { .. }
            | Error::EmptyCorpus
            | Error::Io(_)
            | Error::Json(_),
        ) => Failure::Data(e),
        Some(Error::InvalidParams(m)) => Failure::Usage(m.clone()),
        _ if e.downcast_ref::<std::io::Error>().is_some() => Failure::Data(e),
        _ => Failure::Internal(e),
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Compare(a) => cmd_compare(a),
        Command::TrainLnw(a) => cmd_train(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let params = BenchmarkParams {
        sampler: SamplerParams {
            n_min: a.states_min,
            n_max: a.states_max,
            c_min: a.alphabet_min,
            c_max: a.alphabet_max,
            m_min: a.degree_min,
            m_max: a.degree_max,
            ..SamplerParams::default()
        },
        instance: InstanceShape {
            strings_min: a.strings_min,
            strings_max: a.strings_max,
            ..InstanceShape::default()
        },
    };
    let mut r = rng::seeded(a.seed);
    let (bench, stats) = build_benchmark(&params, a.n_train, a.n_test, a.seed, &mut r)?;
    write_corpus(&bench, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    println!(
        "wrote {} train + {} test instances to {}",
        bench.train.len(),
        bench.test.len(),
        a.out.display()
    );
    println!("mean symbols per instance: {:.2}", stats.mean_symbols);
    println!("degenerate automata discarded: {}", stats.discards);
    println!("duplicate languages discarded: {}", stats.duplicates);
    Ok(())
}

fn bw_config(o: &PredictorOpts) -> Result<BwConfig, Failure> {
    let side = (o.states as f64).sqrt().round() as usize;
    if side * side != o.states || side < 2 {
        return Err(Failure::Usage(format!("--states must be a square of at least 4, got {}", o.states)));
    }
    Ok(BwConfig {
        side,
        max_iters: o.iters,
        tol: o.tol,
        cadence: match o.refit {
            Refit::EveryString => Cadence::EveryString,
            Refit::EveryToken => Cadence::EveryToken,
        },
        seed: o.bw_seed,
        ..BwConfig::default()
    })
}

fn build_predictor(
    kind: PredictorKind,
    opts: &PredictorOpts,
    order: usize,
    model: Option<&Path>,
) -> Result<Box<dyn Predictor>, Failure> {
    Ok(match kind {
        PredictorKind::Oracle => Box::new(Oracle),
        PredictorKind::Ngram => {
            if order == 0 || order > icll_core::ngram::MAX_CONTEXT + 1 {
                return Err(Failure::Usage(format!("--order must be in 1..={}", icll_core::ngram::MAX_CONTEXT + 1)));
            }
            Box::new(Ngram(NgramConfig {
                max_order: order,
                reservation: match opts.smoothing {
                    Smoothing::Phantom => Reservation::Phantom,
                    Smoothing::None => Reservation::None,
                },
            }))
        }
        PredictorKind::Bw => Box::new(BaumWelch(bw_config(opts)?)),
        PredictorKind::Lnw => {
            let path = model.ok_or_else(|| Failure::Usage("the lnw predictor needs a model file".into()))?;
            let (params, header) =
                read_model(path).with_context(|| format!("reading model {}", path.display()))?;
            Box::new(Lnw {
                params,
                variant: header.variant,
            })
        }
    })
}

fn load_corpus(path: &Path) -> Result<icll_core::corpus::Benchmark, Failure> {
    Ok(read_corpus(path).with_context(|| format!("reading corpus {}", path.display()))?)
}

fn write_json(value: &impl serde::Serialize, out: Option<&Path>) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.into()))?;
    match out {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_eval(a: EvalArgs) -> CmdResult {
    let pred = build_predictor(a.predictor, &a.opts, a.opts.order, a.model.as_deref())?;
    let bench = load_corpus(&a.corpus)?;
    let report = evaluate(pred.as_ref(), &bench.test, bench.train.len())?;
    write_json(&report, a.out.as_deref())?;
    if let Some(csv) = &a.csv {
        let fresh = !csv.exists();
        let mut f = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(csv)
            .with_context(|| format!("opening {}", csv.display()))?;
        let mut text = String::new();
        if fresh {
            text.push_str(CSV_HEADER);
            text.push('\n');
        }
        text.push_str(&report.csv_row());
        text.push('\n');
        f.write_all(text.as_bytes()).context("writing csv")?;
    }
    if a.out.is_some() {
        eprintln!(
            "{}: accuracy {:.4}, tvd {:.4}, nt {}",
            report.predictor, report.accuracy, report.tvd, report.nt
        );
    }
    Ok(())
}

fn cmd_compare(a: CompareArgs) -> CmdResult {
    let pa = build_predictor(a.a, &a.opts, a.order_a.unwrap_or(a.opts.order), a.model_a.as_deref())?;
    let pb = build_predictor(a.b, &a.opts, a.order_b.unwrap_or(a.opts.order), a.model_b.as_deref())?;
    let bench = load_corpus(&a.corpus)?;
    let report = compare(pa.as_ref(), pb.as_ref(), &bench.test, a.max_positions)?;
    write_json(&report, a.out.as_deref())
}

fn cmd_train(a: TrainArgs) -> CmdResult {
    let cfg = TrainConfig {
        epochs: a.epochs,
        batch_size: a.batch_size,
        lr: a.lr,
        patience: a.patience,
        factor: a.factor,
        min_lr: a.min_lr,
        hidden: a.hidden,
        seed: a.seed,
        ..TrainConfig::default()
    };
    let variant = Variant::from(a.variant);
    println!(
        "config: {}",
        serde_json::to_string(&cfg).map_err(|e| Failure::Internal(e.into()))?
    );
    let bench = load_corpus(&a.corpus)?;
    let (params, report) = train_lnw(&bench.train, &cfg, variant)?;
    write_model(&params, variant, &cfg, &a.out).with_context(|| format!("writing {}", a.out.display()))?;

    let log_path = a.log.unwrap_or_else(|| {
        let mut p = a.out.clone().into_os_string();
        p.push(".log");
        PathBuf::from(p)
    });
    let mut log = BufWriter::new(File::create(&log_path).with_context(|| format!("creating {}", log_path.display()))?);
    let mut emit = |v: serde_json::Value| -> CmdResult {
        writeln!(log, "{v}").context("writing loss log")?;
        Ok(())
    };
    emit(serde_json::json!({ "samples": report.samples, "initial_loss": report.initial_loss }))?;
    for e in &report.epochs {
        emit(serde_json::to_value(e).map_err(|e| Failure::Internal(e.into()))?)?;
        println!("epoch {:>3}  loss {:.6}  lr {:.2e}", e.epoch + 1, e.mean_loss, e.lr);
    }
    emit(serde_json::json!({ "final_loss": report.final_loss }))?;
    log.flush().context("writing loss log")?;
    println!(
        "loss {:.6} -> {:.6}; model written to {}",
        report.initial_loss,
        report.final_loss,
        a.out.display()
    );
    Ok(())
}
