use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use dataset_trust::federated::sweep_to_csv;
use dataset_trust::{run_sweep, SimConfig, SplitMode};

use crate::assess::ModeArg;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::input::{load_counts, BUILTIN_GTSRB};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    Stratified,
    Random,
}

impl From<SplitArg> for SplitMode {
    fn from(s: SplitArg) -> Self {
        match s {
            SplitArg::Stratified => SplitMode::Stratified,
            SplitArg::Random => SplitMode::Random,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Base class counts (default: bundled GTSRB training counts).
    #[arg(long)]
    pub counts: Option<PathBuf>,
    /// Number of contributing OEMs.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub oems: Option<u64>,
    /// Imbalanced-part counts: `a..b` (inclusive), `a..b:step`, or `a,b,c`.
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated class ids removed from imbalanced parts.
    #[arg(long)]
    pub remove: Option<String>,
    #[arg(long, value_enum)]
    pub split: Option<SplitArg>,
    /// Method 2 evidence mode.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Pins Method 1's uncertainty.
    #[arg(short = 'U', long = "uncertainty")]
    pub uncertainty: Option<f64>,
}

/// Parses the `--k` syntax.
pub fn parse_k_values(text: &str) -> Result<Vec<usize>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("'{}' is not a non-negative integer", s.trim()))
    };
    let text = text.trim();
    if let Some((lo, rest)) = text.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((hi, step)) => (hi, num(step)?),
            None => (rest, 1),
        };
        let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
        if step == 0 {
            return Err("step must be positive".into());
        }
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        return Ok((lo..=hi).step_by(step).collect());
    }
    let mut values = text.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
    values.sort_unstable();
    values.dedup();
    Ok(values)
}

pub fn run(args: &SimulateArgs, mut cfg: RunConfig) -> CliResult<String> {
    let s = &mut cfg.sim;
    if let Some(c) = &args.counts {
        s.counts = Some(c.clone());
    }
    if let Some(n) = args.oems {
        s.n_oems = n as usize;
    }
    if let Some(k) = &args.k {
        s.k_values = Some(parse_k_values(k).map_err(|e| CliError::usage(format!("--k: {e}")))?);
    }
    if let Some(seed) = args.seed {
        s.seed = seed;
    }
    if let Some(remove) = &args.remove {
        s.imbalance_class_ids = remove
            .split(',')
            .map(|id| id.trim().to_string())
            .filter(|id| !id.is_empty())
            .collect();
    }
    if let Some(split) = args.split {
        s.split_mode = split.into();
    }
    if let Some(mode) = args.mode {
        s.method2_mode = mode.into();
    }
    if args.uncertainty.is_some() {
        cfg.bias.fixed_uncertainty = args.uncertainty;
    }
    let s = &cfg.sim;
    if s.n_oems == 0 {
        return Err(CliError::usage("the number of OEMs must be at least 1"));
    }
    let k_values = s
        .k_values
        .clone()
        .unwrap_or_else(|| (0..=s.n_oems).collect());
    if let Some(k) = k_values.iter().find(|&&k| k > s.n_oems) {
        return Err(CliError::usage(format!(
            "k = {k} exceeds the number of OEMs ({})",
            s.n_oems
        )));
    }
    let counts_path = s
        .counts
        .clone()
        .unwrap_or_else(|| PathBuf::from(BUILTIN_GTSRB));
    let (base_distribution, _) = load_counts(Path::new(&counts_path))?;
    let sim = SimConfig {
        base_distribution,
        n_oems: s.n_oems,
        imbalance_class_ids: s.imbalance_class_ids.clone(),
        k_values,
        seed: s.seed,
        split_mode: s.split_mode,
        method2_mode: s.method2_mode,
        bias_config: cfg.bias.clone(),
    };
    Ok(sweep_to_csv(&run_sweep(&sim)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_syntax() {
        assert_eq!(parse_k_values("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_k_values("0..=3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_k_values("0..10:5").unwrap(), vec![0, 5, 10]);
        assert_eq!(parse_k_values("7, 2,2").unwrap(), vec![2, 7]);
        assert_eq!(parse_k_values("4").unwrap(), vec![4]);
        for bad in ["", "a..b", "3..1", "0..4:0", "1,-2"] {
            assert!(parse_k_values(bad).is_err(), "{bad}");
        }
    }
}
