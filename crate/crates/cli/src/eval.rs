use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use dataset_trust::{
    evaluate_proposition, parse_proposition, resolve_sources, FusionOperator, Opinion,
    SourceBinding, TrustError, TrustSource,
};
use serde::{Deserialize, Serialize};

use crate::assess::FusionArg;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::input::{read_bytes, read_opinions, resolve, sha256_hex, InputDigest};
use crate::report::Report;

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Proposition such as "A AND R"; falls back to the bindings document.
    pub proposition: Option<String>,
    /// JSON bindings document.
    #[arg(long)]
    pub bindings: PathBuf,
}

#[derive(Debug, Args)]
pub struct FuseArgs {
    #[arg(long, value_enum, default_value = "cumulative")]
    pub op: FusionArg,
    /// Files holding opinion records, reports, or arrays of either.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BindingsDocument {
    proposition: Option<String>,
    bindings: BTreeMap<String, BindingSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BindingSpec {
    sources: Vec<SourceSpec>,
    #[serde(default)]
    fusion: FusionOperator,
}

/// Exactly one of `opinion` and `report` (a path to a report document).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceSpec {
    opinion: Option<Opinion>,
    report: Option<PathBuf>,
    referral_trust: Option<Opinion>,
}

#[derive(Serialize)]
struct Atom {
    opinion: Opinion,
    fusion: FusionOperator,
    sources: usize,
}

fn source_opinion(spec: &SourceSpec, base: &Path, name: &str) -> Result<Opinion, TrustError> {
    match (&spec.opinion, &spec.report) {
        (Some(o), None) => Ok(*o),
        (None, Some(path)) => {
            let path = resolve(base, path);
            let (opinions, _) = read_opinions(&path)?;
            match opinions.as_slice() {
                [single] => Ok(*single),
                _ => Err(TrustError::Format(format!(
                    "{}: expected one opinion, found {}",
                    path.display(),
                    opinions.len()
                ))),
            }
        }
        _ => Err(TrustError::Format(format!(
            "binding '{name}': each source needs exactly one of 'opinion' or 'report'"
        ))),
    }
}

pub fn run_eval(args: &EvalArgs, cfg: &RunConfig) -> CliResult<Report> {
    // A malformed command-line proposition is reported before the bindings are read.
    let cli_expr = args
        .proposition
        .as_deref()
        .map(parse_proposition)
        .transpose()?;
    let bytes = read_bytes(&args.bindings)?;
    let doc: BindingsDocument = serde_json::from_slice(&bytes)
        .map_err(|e| TrustError::Format(format!("{}: {e}", args.bindings.display())))?;
    let expr = match (cli_expr, &doc.proposition) {
        (Some(expr), _) => expr,
        (None, Some(text)) => parse_proposition(text)?,
        (None, None) => {
            return Err(CliError::usage(
                "no proposition given on the command line or in the bindings",
            ));
        }
    };

    let base = args.bindings.parent().unwrap_or_else(|| Path::new("."));
    let mut bindings = Vec::with_capacity(doc.bindings.len());
    for (name, spec) in &doc.bindings {
        let sources = spec
            .sources
            .iter()
            .map(|s| {
                Ok(TrustSource {
                    opinion: source_opinion(s, base, name)?,
                    referral_trust: s.referral_trust,
                })
            })
            .collect::<Result<Vec<_>, TrustError>>()?;
        bindings.push(SourceBinding {
            proposition: name.clone(),
            sources,
            fusion: spec.fusion,
        });
    }
    let resolved = resolve_sources(&bindings)?;
    let opinion = evaluate_proposition(&expr, &resolved)?;
    let atoms: BTreeMap<&str, Atom> = bindings
        .iter()
        .map(|b| {
            let atom = Atom {
                opinion: resolved[&b.proposition],
                fusion: b.fusion,
                sources: b.sources.len(),
            };
            (b.proposition.as_str(), atom)
        })
        .collect();

    let mut report = Report::new("eval", cfg);
    report
        .set("proposition", expr.to_string())
        .set(
            "inputs",
            [InputDigest {
                path: args.bindings.display().to_string(),
                sha256: sha256_hex(&bytes),
                classes: None,
                total: None,
            }],
        )
        .set("atoms", atoms)
        .opinion(&opinion);
    Ok(report)
}

pub fn run_fuse(args: &FuseArgs, cfg: &RunConfig) -> CliResult<Report> {
    let mut opinions = Vec::new();
    let mut digests = Vec::new();
    for path in &args.files {
        let (mut found, digest) = read_opinions(path)?;
        opinions.append(&mut found);
        digests.push(digest);
    }
    if opinions.len() < 2 {
        return Err(CliError::usage(format!(
            "fuse needs at least 2 opinion records, got {}",
            opinions.len()
        )));
    }
    let op = FusionOperator::from(args.op);
    let fused = op.fuse_all(opinions.iter())?.expect("non-empty");
    let mut report = Report::new("fuse", cfg);
    report
        .set("operator", op)
        .set("inputs", digests)
        .set("operands", &opinions)
        .opinion(&fused);
    Ok(report)
}
