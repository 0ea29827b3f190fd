use clap::{Args, ValueEnum};
use dataset_trust::{
    quantify_baseline, quantify_constant_u, quantify_weighted, Evidence, TrustError,
};
use serde_json::json;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Counts with a fixed prior weight W.
    Baseline,
    /// Counts with an explicit uncertainty weight w.
    Weighted,
    /// Evidence fractions with a fixed uncertainty U.
    ConstantU,
}

#[derive(Debug, Args)]
pub struct QuantifyArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    /// Positive evidence.
    #[arg(short = 'r', long = "positive")]
    pub positive: Option<f64>,
    /// Negative evidence.
    #[arg(short = 's', long = "negative")]
    pub negative: Option<f64>,
    /// Prior weight (overrides quant.prior_weight).
    #[arg(short = 'W', long = "prior-weight")]
    pub prior_weight: Option<f64>,
    /// Uncertainty weight for the weighted model.
    #[arg(short = 'w', long = "weight")]
    pub weight: Option<f64>,
    #[arg(long)]
    pub r_frac: Option<f64>,
    #[arg(long)]
    pub s_frac: Option<f64>,
    /// Fixed uncertainty for the constant-u model.
    #[arg(short = 'U', long = "uncertainty")]
    pub uncertainty: Option<f64>,
    /// Overrides quant.base_rate.
    #[arg(long)]
    pub base_rate: Option<f64>,
}

fn need(value: Option<f64>, flag: &str, model: &str) -> CliResult<f64> {
    value.ok_or_else(|| CliError::usage(format!("--model {model} requires {flag}")))
}

pub fn run(args: &QuantifyArgs, mut cfg: RunConfig) -> CliResult<Report> {
    if let Some(w) = args.prior_weight {
        cfg.quant.prior_weight = w;
    }
    if let Some(a) = args.base_rate {
        cfg.quant.base_rate = a;
    }
    cfg.quant.validate()?;
    let (model, evidence, opinion) = match args.model {
        Model::Baseline => {
            let e = Evidence::new(
                need(args.positive, "-r", "baseline")?,
                need(args.negative, "-s", "baseline")?,
            )?;
            let evidence = json!({"r": e.positive(), "s": e.negative()});
            ("baseline", evidence, quantify_baseline(&e, &cfg.quant))
        }
        Model::Weighted => {
            let r = need(args.positive, "-r", "weighted")?;
            let s = need(args.negative, "-s", "weighted")?;
            let w = args.weight.ok_or_else(|| {
                CliError::UsageDomain(TrustError::MissingWeight, "pass -w".into())
            })?;
            let e = Evidence::with_weight(r, s, w)?;
            (
                "weighted",
                json!({"r": r, "s": s, "w": w}),
                quantify_weighted(&e, &cfg.quant)?,
            )
        }
        Model::ConstantU => {
            let r = need(args.r_frac, "--r-frac", "constant-u")?;
            let s = need(args.s_frac, "--s-frac", "constant-u")?;
            let u = need(args.uncertainty, "-U", "constant-u")?;
            let o = quantify_constant_u(r, s, u, &cfg.quant)?;
            (
                "constant-u",
                json!({"r_frac": r, "s_frac": s, "uncertainty": u}),
                o,
            )
        }
    };
    let mut report = Report::new("quantify", &cfg);
    report
        .set("model", model)
        .set("evidence", evidence)
        .opinion(&opinion);
    Ok(report)
}
