use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use dataset_trust::{
    assess_bias_method1, assess_bias_method2, merge, ClassDistribution, FusionOperator, Manifest,
    Method2Mode, Opinion,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::input::{load_counts, read_bytes, resolve, sha256_hex, InputDigest};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Baseline,
    EvidenceWeighted,
}

impl From<ModeArg> for Method2Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Baseline => Method2Mode::Baseline,
            ModeArg::EvidenceWeighted => Method2Mode::EvidenceWeighted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FusionArg {
    Cumulative,
    Averaging,
    Weighted,
    Constraint,
}

impl From<FusionArg> for FusionOperator {
    fn from(f: FusionArg) -> Self {
        match f {
            FusionArg::Cumulative => FusionOperator::Cumulative,
            FusionArg::Averaging => FusionOperator::Averaging,
            FusionArg::Weighted => FusionOperator::Weighted,
            FusionArg::Constraint => FusionOperator::Constraint,
        }
    }
}

#[derive(Debug, Args)]
pub struct AssessArgs {
    /// 1: tolerance zone over the merged counts. 2: entropy threshold per file.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub method: u8,
    /// Class-count files (CSV `class_id,count` or JSON); `builtin:gtsrb`
    /// selects the bundled GTSRB training counts.
    #[arg(long, num_args = 1.., required_unless_present = "manifest", conflicts_with = "manifest")]
    pub counts: Vec<PathBuf>,
    /// JSON manifest listing sub-dataset files and optional referral trust.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Symmetric tolerance; sets both eta1 and eta2.
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub eta1: Option<f64>,
    #[arg(long)]
    pub eta2: Option<f64>,
    /// Pins Method 1's uncertainty.
    #[arg(short = 'U', long = "uncertainty")]
    pub uncertainty: Option<f64>,
    /// Method 2 evidence mode.
    #[arg(long, value_enum, default_value = "baseline")]
    pub mode: ModeArg,
    /// Method 1 only: assess each source separately, discount by its
    /// referral trust, and fuse with this operator.
    #[arg(long, value_enum)]
    pub fuse_sources: Option<FusionArg>,
}

struct Source {
    name: String,
    distribution: ClassDistribution,
    referral_trust: Option<Opinion>,
}

fn load_sources(args: &AssessArgs) -> CliResult<(Vec<Source>, Vec<InputDigest>)> {
    let mut sources = Vec::new();
    let mut digests = Vec::new();
    if let Some(manifest_path) = &args.manifest {
        let bytes = read_bytes(manifest_path)?;
        let manifest = Manifest::from_json(&String::from_utf8_lossy(&bytes))?;
        digests.push(InputDigest {
            path: manifest_path.display().to_string(),
            sha256: sha256_hex(&bytes),
            classes: None,
            total: None,
        });
        let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));
        for src in manifest.sources {
            let (distribution, digest) = load_counts(&resolve(base, &src.path))?;
            digests.push(digest);
            sources.push(Source {
                name: src.name,
                distribution,
                referral_trust: src.referral_trust,
            });
        }
    } else {
        for path in &args.counts {
            let (distribution, digest) = load_counts(path)?;
            digests.push(digest);
            sources.push(Source {
                name: path.display().to_string(),
                distribution,
                referral_trust: None,
            });
        }
    }
    if sources.is_empty() {
        return Err(CliError::usage("no sub-datasets to assess"));
    }
    Ok((sources, digests))
}

#[derive(Serialize)]
struct SourceOutcome<'a> {
    name: &'a str,
    report: dataset_trust::Method1Report,
    #[serde(skip_serializing_if = "Option::is_none")]
    referral_trust: Option<Opinion>,
    effective_opinion: Opinion,
}

pub fn run(args: &AssessArgs, mut cfg: RunConfig) -> CliResult<Report> {
    if let Some(eta) = args.eta {
        cfg.bias.eta1 = eta;
        cfg.bias.eta2 = eta;
    }
    if let Some(e) = args.eta1 {
        cfg.bias.eta1 = e;
    }
    if let Some(e) = args.eta2 {
        cfg.bias.eta2 = e;
    }
    if args.uncertainty.is_some() {
        cfg.bias.fixed_uncertainty = args.uncertainty;
    }
    cfg.bias.validate()?;
    if args.method == 2 && args.fuse_sources.is_some() {
        return Err(CliError::usage("--fuse-sources applies to --method 1 only"));
    }
    let (sources, digests) = load_sources(args)?;

    let mut report = Report::new("assess", &cfg);
    report.set("method", args.method).set("inputs", &digests);
    match (args.method, args.fuse_sources) {
        (1, None) => {
            let parts: Vec<ClassDistribution> =
                sources.iter().map(|s| s.distribution.clone()).collect();
            let merged = merge(&parts)?;
            let m1 = assess_bias_method1(&merged, &cfg.bias)?;
            report
                .set("uncertainty", m1.uncertainty)
                .opinion(&m1.opinion)
                .set("evidence", &m1);
        }
        (1, Some(op)) => {
            let op = FusionOperator::from(op);
            let mut outcomes = Vec::with_capacity(sources.len());
            for s in &sources {
                let m1 = assess_bias_method1(&s.distribution, &cfg.bias)?;
                let effective_opinion = match &s.referral_trust {
                    Some(rt) => rt.discount(&m1.opinion),
                    None => m1.opinion,
                };
                outcomes.push(SourceOutcome {
                    name: &s.name,
                    report: m1,
                    referral_trust: s.referral_trust,
                    effective_opinion,
                });
            }
            let fused = op
                .fuse_all(outcomes.iter().map(|o| &o.effective_opinion))?
                .expect("at least one source");
            report
                .set("fusion", op)
                .set("evidence", serde_json::json!({ "per_source": outcomes }))
                .opinion(&fused);
        }
        _ => {
            let parts: Vec<ClassDistribution> =
                sources.iter().map(|s| s.distribution.clone()).collect();
            let m2 = assess_bias_method2(&parts, &cfg.bias, args.mode.into())?;
            report
                .set("uncertainty", m2.opinion.uncertainty())
                .opinion(&m2.opinion)
                .set("evidence", &m2);
        }
    }
    Ok(report)
}
