use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use jengan_core::metrics::{alias_energy, mel_mae, mstft};
use jengan_core::vocoder::evaluate_held_out;
use jengan_core::Signal;
use serde_json::{json, Value};

use super::{emit, say, Status};
use crate::model::{load_model, Model};
use crate::wav::read_wav;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Equivariance,
    Alias,
    Melmae,
    Mstft,
}

impl Metric {
    fn name(self) -> &'static str {
        match self {
            Metric::Equivariance => "equivariance",
            Metric::Alias => "alias",
            Metric::Melmae => "melmae",
            Metric::Mstft => "mstft",
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Run directory or checkpoint file (generator or pure-delay model).
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Config describing the checkpoint's architecture; defaults to the
    /// `config.json` next to it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub metric: Metric,
    /// One or two WAV files. melmae/mstft compare two files, or the model's
    /// resynthesis of one file against that file.
    #[arg(long, num_args = 1..=2)]
    pub input: Vec<PathBuf>,
    /// Report path: CSV when it ends in `.csv`, JSON otherwise; stdout (JSON)
    /// when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Held-out corpus size when a vocoder checkpoint is given without input.
    #[arg(long, default_value_t = 50)]
    pub signals: u64,
    /// Held-out corpus seed; defaults to the checkpoint config's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Alias cutoff in Hz; defaults to the corpus band limit (4 kHz).
    #[arg(long)]
    pub cutoff_hz: Option<f64>,
}

/// A metric result as JSON plus its flat CSV form.
struct Report {
    json: Value,
    csv: String,
}

fn scalar(metric: Metric, value: f64) -> Report {
    Report {
        json: json!({ "metric": metric.name(), "value": value }),
        csv: format!("metric,value\n{},{value}\n", metric.name()),
    }
}

fn with_metric(metric: Metric, value: Value) -> Value {
    let mut v = value;
    if let Value::Object(map) = &mut v {
        map.insert("metric".into(), metric.name().into());
    }
    v
}

fn model(args: &Args) -> Result<Option<Model>> {
    args.checkpoint.as_deref().map(|p| load_model(p, args.config.as_deref())).transpose()
}

fn need_model(m: Option<Model>, metric: Metric) -> Result<Model> {
    m.ok_or_else(|| Error::Usage(format!("--metric {} needs --checkpoint", metric.name())))
}

/// Cuts `x` to `len` samples so a resynthesis can be compared with it.
fn truncated(x: &Signal, len: usize) -> Result<Signal> {
    Ok(Signal::mono(x.sample_rate(), x.channel(0)[..len.min(x.len())].to_vec())?)
}

fn pair_metric(args: &Args, f: fn(&Signal, &Signal) -> jengan_core::Result<f64>) -> Result<f64> {
    match args.input.as_slice() {
        [a, b] => Ok(f(&read_wav(a)?, &read_wav(b)?)?),
        [a] => {
            let m = need_model(model(args)?, args.metric)?;
            let x = read_wav(a)?;
            let y = m.process(&x)?;
            Ok(f(&y, &truncated(&x, y.len())?)?)
        }
        _ => Err(Error::Usage(format!("--metric {} needs --input", args.metric.name()))),
    }
}

fn held_out(args: &Args, m: Model) -> Result<Report> {
    let Model::Vocoder { generator, config } = m else {
        return Err(Error::Usage("held-out evaluation needs a vocoder checkpoint; pass --input".into()));
    };
    let config = match args.cutoff_hz {
        Some(hz) => {
            let mut c = config;
            c.corpus.band_limit = hz;
            c
        }
        None => config,
    };
    let seed = args.seed.unwrap_or(config.seed);
    let r = evaluate_held_out(&generator, &config, args.signals, seed)?;
    let mut csv = String::from("signal,equivariance,alias\n");
    for (i, (e, a)) in r.equivariance.iter().zip(&r.alias).enumerate() {
        writeln!(csv, "{i},{e},{a}").unwrap();
    }
    let json = json!({
        "metric": args.metric.name(),
        "signals": args.signals,
        "seed": seed,
        "cutoff_hz": config.corpus.band_limit,
        "value": if args.metric == Metric::Alias { r.mean_alias } else { r.mean_equivariance },
        "mean_equivariance": r.mean_equivariance,
        "mean_alias": r.mean_alias,
        "equivariance": r.equivariance,
        "alias": r.alias,
    });
    Ok(Report { json, csv })
}

fn evaluate(args: &Args) -> Result<Report> {
    match args.metric {
        Metric::Melmae => Ok(scalar(args.metric, pair_metric(args, mel_mae)?)),
        Metric::Mstft => Ok(scalar(args.metric, pair_metric(args, mstft)?)),
        Metric::Equivariance => {
            let m = need_model(model(args)?, args.metric)?;
            let Some(path) = args.input.first() else { return held_out(args, m) };
            let r = m.equivariance(&read_wav(path)?)?;
            let mut csv = String::from("delta,error\n");
            for (d, e) in r.deltas.iter().zip(&r.errors) {
                writeln!(csv, "{d},{e}").unwrap();
            }
            let mut json = with_metric(args.metric, serde_json::to_value(&r).expect("reports serialize"));
            json["value"] = r.mean_error.into();
            json["relative_mean"] = r.relative_mean().into();
            Ok(Report { json, csv })
        }
        Metric::Alias => {
            let m = model(args)?;
            let x = match (args.input.first(), m) {
                (Some(path), Some(m)) => m.process(&read_wav(path)?)?,
                (Some(path), None) => read_wav(path)?,
                (None, Some(m)) => return held_out(args, m),
                (None, None) => return Err(Error::Usage("--metric alias needs --input or --checkpoint".into())),
            };
            let cutoff_hz = args.cutoff_hz.unwrap_or(jengan_core::vocoder::CorpusConfig::default().band_limit);
            let r = alias_energy(&x, cutoff_hz / (x.sample_rate() / 2.0));
            let mut json = with_metric(args.metric, serde_json::to_value(r).expect("reports serialize"));
            json["value"] = r.ratio.into();
            json["cutoff_hz"] = cutoff_hz.into();
            Ok(Report { json, csv: format!("metric,value\nalias,{}\n", r.ratio) })
        }
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn run(args: Args, out: &mut dyn Write) -> Result<Status> {
    let report = evaluate(&args)?;
    match args.out.as_deref() {
        Some(path) if is_csv(path) => emit(Some(path), &report.csv, out)?,
        Some(path) => emit(Some(path), &format!("{:#}\n", report.json), out)?,
        None => return say(out, format!("{:#}", report.json)).map(|_| Status::Success),
    }
    say(out, format!("{} = {}", args.metric.name(), report.json["value"]))?;
    Ok(Status::Success)
}
