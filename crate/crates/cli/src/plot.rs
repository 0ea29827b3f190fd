use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use dataset_trust::bias::sweep_eta;
use dataset_trust::federated::parse_sweep_csv;
use dataset_trust::plot::{kernel_density, line_chart_svg, series_to_csv, ChartOptions, Series};
use dataset_trust::TrustError;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::input::{load_counts, read_bytes};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Kernel density of the class probabilities of a counts file.
    Density,
    /// Belief, disbelief and uncertainty against k from a sweep CSV.
    Sweep,
    /// Method 1 opinion against η for a counts file.
    Eta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value = "svg")]
    pub format: Format,
    #[arg(long, default_value_t = 0.0)]
    pub eta_min: f64,
    #[arg(long, default_value_t = 0.05)]
    pub eta_max: f64,
    #[arg(long, default_value_t = 0.0005)]
    pub eta_step: f64,
    /// Density evaluation points.
    #[arg(long, default_value_t = 400)]
    pub points: usize,
    /// Pins Method 1's uncertainty for the eta plot.
    #[arg(short = 'U', long = "uncertainty")]
    pub uncertainty: Option<f64>,
}

fn eta_grid(min: f64, max: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(step > 0.0 && min >= 0.0 && max >= min && min.is_finite() && max.is_finite()) {
        return Err(CliError::usage(format!(
            "invalid eta range {min}..{max} step {step}"
        )));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| min + step * i as f64).collect())
}

fn density(args: &PlotArgs) -> CliResult<(String, Vec<Series>, ChartOptions)> {
    let (d, _) = load_counts(&args.input)?;
    let p = d.class_probabilities()?;
    let curve = kernel_density(p.values(), args.points.max(2));
    let opts = ChartOptions {
        title: format!("Class probability density ({} classes)", d.num_classes()),
        x_label: "class probability".into(),
        y_label: "density".into(),
        fill: true,
        markers: vec![(1.0 / d.num_classes() as f64, "1/n_c".into())],
        ..ChartOptions::default()
    };
    Ok((
        "probability".into(),
        vec![Series::new("density", curve)],
        opts,
    ))
}

fn sweep(args: &PlotArgs) -> CliResult<(String, Vec<Series>, ChartOptions)> {
    let text = String::from_utf8(read_bytes(&args.input)?)
        .map_err(|_| TrustError::Format(format!("{}: not UTF-8", args.input.display())))?;
    let rows = parse_sweep_csv(&text)?;
    let mut by_method: BTreeMap<u8, [Vec<(f64, f64)>; 3]> = BTreeMap::new();
    for row in rows {
        let entry = by_method.entry(row.method).or_default();
        let k = row.k as f64;
        entry[0].push((k, row.belief));
        entry[1].push((k, row.disbelief));
        entry[2].push((k, row.uncertainty));
    }
    let series = by_method
        .into_iter()
        .flat_map(|(m, [b, d, u])| {
            [
                Series::new(format!("method{m}_belief"), b),
                Series::new(format!("method{m}_disbelief"), d),
                Series::new(format!("method{m}_uncertainty"), u),
            ]
        })
        .collect();
    let opts = ChartOptions {
        title: "Opinion against imbalanced sub-datasets".into(),
        x_label: "imbalanced sub-datasets k".into(),
        y_label: "mass".into(),
        y_range: Some((0.0, 1.0)),
        ..ChartOptions::default()
    };
    Ok(("k".into(), series, opts))
}

fn eta(args: &PlotArgs, cfg: &RunConfig) -> CliResult<(String, Vec<Series>, ChartOptions)> {
    let (d, _) = load_counts(&args.input)?;
    let mut bias = cfg.bias.clone();
    if args.uncertainty.is_some() {
        bias.fixed_uncertainty = args.uncertainty;
    }
    let grid = eta_grid(args.eta_min, args.eta_max, args.eta_step)?;
    let pts = sweep_eta(&d, &grid, &bias)?;
    let pick = |f: fn(&dataset_trust::Opinion) -> f64| {
        pts.iter().map(|p| (p.eta, f(&p.opinion))).collect()
    };
    let series = vec![
        Series::new("belief", pick(|o| o.belief())),
        Series::new("disbelief", pick(|o| o.disbelief())),
        Series::new("uncertainty", pick(|o| o.uncertainty())),
    ];
    let opts = ChartOptions {
        title: "Effect of η on the Method 1 opinion".into(),
        x_label: "η".into(),
        y_label: "mass".into(),
        y_range: Some((0.0, 1.0)),
        markers: vec![(cfg.bias.eta1, format!("η = {}", cfg.bias.eta1))],
        ..ChartOptions::default()
    };
    Ok(("eta".into(), series, opts))
}

pub fn run(args: &PlotArgs, cfg: &RunConfig) -> CliResult<String> {
    let (x_name, series, opts) = match args.kind {
        Kind::Density => density(args)?,
        Kind::Sweep => sweep(args)?,
        Kind::Eta => eta(args, cfg)?,
    };
    Ok(match args.format {
        Format::Csv => series_to_csv(&x_name, &series),
        Format::Svg => line_chart_svg(&series, &opts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_both_ends() {
        let g = eta_grid(0.0, 0.05, 0.0005).unwrap();
        assert_eq!(g.len(), 101);
        assert!((g[100] - 0.05).abs() < 1e-12);
        assert!(eta_grid(0.0, 0.05, 0.0).is_err());
        assert!(eta_grid(0.1, 0.05, 0.01).is_err());
    }
}
