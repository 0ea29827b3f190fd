use dataset_trust::bias::{entropy_threshold, sweep_eta};
use dataset_trust::dataset::split;
use dataset_trust::fixtures::gtsrb_train;
use dataset_trust::{
    assess_bias_method1, assess_bias_method2, dataset_uncertainty, entropy, BiasConfig,
    ClassDistribution, Method2Mode, ProbabilityVector, SplitMode, TrustError,
};
use proptest::prelude::*;

const WARNING_IDS: [&str; 15] = [
    "11", "18", "19", "20", "21", "22", "23", "24", "25", "26", "27", "28", "29", "30", "31",
];

/// Exact integer membership test for η = 0.02 and 43 classes:
/// `|N_k/N − 1/43| ≤ 1/50` iff `7N ≤ 2150·N_k ≤ 93N`.
fn brute_force_in_zone(d: &ClassDistribution) -> usize {
    let n = d.total() as u128;
    d.counts()
        .iter()
        .filter(|&&c| {
            let scaled = 2150 * c as u128;
            7 * n <= scaled && scaled <= 93 * n
        })
        .count()
}

fn pinned(u: f64) -> BiasConfig {
    BiasConfig {
        fixed_uncertainty: Some(u),
        ..BiasConfig::default()
    }
}

#[test]
fn fixture_matches_published_size() {
    let d = gtsrb_train();
    assert_eq!(d.num_classes(), 43);
    assert_eq!(d.total(), 39209);
}

#[test]
fn original_dataset_opinion() {
    let d = gtsrb_train();
    let n_t = brute_force_in_zone(&d);
    assert_eq!(n_t, 35);
    let report = assess_bias_method1(&d, &pinned(0.39)).unwrap();
    assert_eq!(report.tolerance.in_zone, n_t);
    let o = report.opinion;
    assert!((o.belief() - 0.61 * 35.0 / 43.0).abs() < 1e-12);
    assert!((o.disbelief() - 0.61 * 8.0 / 43.0).abs() < 1e-12);
    assert!((o.belief() - 0.5).abs() <= 0.03, "{o}");
    assert!((o.disbelief() - 0.11).abs() <= 0.03, "{o}");
}

#[test]
fn balanced_dataset_opinion() {
    let d = ClassDistribution::from_counts(&[2000; 43]).unwrap();
    let o = assess_bias_method1(&d, &pinned(0.36)).unwrap().opinion;
    assert!((o.belief() - 0.64).abs() < 1e-12);
    assert_eq!(o.disbelief(), 0.0);
}

#[test]
fn entropy_values() {
    let uniform = ProbabilityVector::new(vec![1.0 / 43.0; 43]).unwrap();
    assert!((entropy(&uniform, std::f64::consts::E) - 43f64.ln()).abs() < 1e-9);
    let mut degenerate = vec![0.0; 43];
    degenerate[7] = 1.0;
    assert_eq!(
        entropy(
            &ProbabilityVector::new(degenerate).unwrap(),
            std::f64::consts::E
        ),
        0.0
    );

    let full = gtsrb_train().class_probabilities().unwrap();
    let reduced = gtsrb_train().remove_classes(&WARNING_IDS).unwrap();
    assert_eq!(reduced.total(), 30239);
    let t = entropy_threshold(43, 0.02, std::f64::consts::E)
        .unwrap()
        .threshold;
    assert!(entropy(&full, std::f64::consts::E) > t);
    assert!(entropy(&reduced.class_probabilities().unwrap(), std::f64::consts::E) < t);
}

#[test]
fn threshold_against_direct_summation() {
    let e: f64 = 1.0 / 43.0;
    let (hi, lo) = (e + 0.02, e - 0.02);
    let oracle = -(21.0 * hi * hi.ln() + 21.0 * lo * lo.ln() + e * e.ln());
    let t = entropy_threshold(43, 0.02, std::f64::consts::E).unwrap();
    assert!((t.threshold - oracle).abs() < 1e-9);
    assert!((t.edge_distribution.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(
        (entropy_threshold(43, 0.0, std::f64::consts::E)
            .unwrap()
            .threshold
            - 43f64.ln())
        .abs()
            < 1e-12
    );
    assert_eq!(
        entropy_threshold(2, 0.5, std::f64::consts::E)
            .unwrap()
            .threshold,
        0.0
    );
    assert!(matches!(
        entropy_threshold(43, 0.03, std::f64::consts::E),
        Err(TrustError::EtaOutOfRange { .. })
    ));
}

#[test]
fn six_class_examples() {
    let cfg = BiasConfig::default();
    let balanced = ClassDistribution::from_counts(&[100, 100, 100, 100, 100, 100]).unwrap();
    let imbalanced = ClassDistribution::from_counts(&[500, 300, 100, 50, 30, 20]).unwrap();
    let r = assess_bias_method2(&[balanced, imbalanced], &cfg, Method2Mode::Baseline).unwrap();
    assert!(r.verdicts[0].positive);
    assert!(!r.verdicts[1].positive);
    assert_eq!((r.positive, r.negative), (1, 1));
}

#[test]
fn gtsrb_parts_under_method2() {
    let d = gtsrb_train();
    let parts = split(&d, 10, 3, SplitMode::Stratified).unwrap();
    let mut mixed = parts.clone();
    for p in mixed.iter_mut().take(4) {
        *p = p.remove_classes(&WARNING_IDS).unwrap();
    }
    let cfg = BiasConfig::default();
    let r = assess_bias_method2(&mixed, &cfg, Method2Mode::Baseline).unwrap();
    assert_eq!((r.positive, r.negative), (6, 4));
    assert!((r.opinion.belief() - 6.0 / 12.0).abs() < 1e-12);
    assert!((r.opinion.uncertainty() - 2.0 / 12.0).abs() < 1e-12);

    let w = assess_bias_method2(&mixed, &cfg, Method2Mode::EvidenceWeighted).unwrap();
    let weight = w.uncertainty_weight.unwrap();
    let oracle: f64 = w
        .verdicts
        .iter()
        .map(|v| (-(v.entropy - v.threshold).abs() / (0.1 * 43f64.ln())).exp())
        .sum();
    assert!((weight - oracle).abs() < 1e-12);
    assert!((w.opinion.belief() - 6.0 / (weight + 10.0)).abs() < 1e-12);
    assert!((w.opinion.uncertainty() - weight / (weight + 10.0)).abs() < 1e-12);
}

#[test]
fn eta_sweep_shape() {
    let d = gtsrb_train();
    let cfg = pinned(0.39);
    let etas: Vec<f64> = (0..=100).map(|i| i as f64 * 0.0005).collect();
    let pts = sweep_eta(&d, &etas, &cfg).unwrap();
    for w in pts.windows(2) {
        assert!(w[1].opinion.belief() >= w[0].opinion.belief());
        assert!(w[1].opinion.disbelief() <= w[0].opinion.disbelief());
        assert_eq!(w[1].opinion.uncertainty(), w[0].opinion.uncertainty());
    }
    let range = |lo: f64, hi: f64| {
        let bs: Vec<f64> = pts
            .iter()
            .filter(|p| p.eta >= lo - 1e-12 && p.eta <= hi + 1e-12)
            .map(|p| p.opinion.belief())
            .collect();
        bs.iter().cloned().fold(f64::MIN, f64::max) - bs.iter().cloned().fold(f64::MAX, f64::min)
    };
    assert!(range(0.0185, 0.0235) < range(0.0, 0.05));
    assert_eq!(pts.last().unwrap().opinion.disbelief(), 0.0);
}

proptest! {
    #[test]
    fn uncertainty_non_increasing_in_size(n_s in 1.0..1e9f64, a in 1u64..1_000_000, b in 1u64..1_000_000) {
        let cfg = BiasConfig { min_uncertainty: 0.05, max_uncertainty: 0.9, ..BiasConfig::default() };
        let (small, large) = (a.min(b), a.max(b));
        let us = dataset_uncertainty(n_s, small, &cfg).unwrap();
        let ul = dataset_uncertainty(n_s, large, &cfg).unwrap();
        prop_assert!(ul <= us);
        prop_assert!((0.05..=0.9).contains(&us) && (0.05..=0.9).contains(&ul));
    }

    #[test]
    fn method1_monotone_in_eta(c in proptest::collection::vec(1u64..3000, 3..50), e in 0.0..0.1f64, bump in 0.0..0.1f64) {
        let d = ClassDistribution::from_counts(&c).unwrap();
        let cfg = pinned(0.2);
        let lo = assess_bias_method1(&d, &cfg.clone().with_eta(e)).unwrap().opinion;
        let hi = assess_bias_method1(&d, &cfg.with_eta(e + bump)).unwrap().opinion;
        prop_assert!(hi.belief() >= lo.belief());
        prop_assert!(hi.disbelief() <= lo.disbelief());
        prop_assert_eq!(hi.uncertainty(), lo.uncertainty());
    }

    #[test]
    fn method2_flip_moves_one_unit(n in 1usize..30, flip in any::<prop::sample::Index>()) {
        let balanced = ClassDistribution::from_counts(&[50; 8]).unwrap();
        let skewed = ClassDistribution::from_counts(&[300, 5, 5, 5, 5, 5, 5, 5]).unwrap();
        let cfg = BiasConfig::default();
        let mut parts = vec![balanced; n];
        let before = assess_bias_method2(&parts, &cfg, Method2Mode::Baseline).unwrap().opinion;
        parts[flip.index(n)] = skewed;
        let after = assess_bias_method2(&parts, &cfg, Method2Mode::Baseline).unwrap().opinion;
        let unit = 1.0 / (2.0 + n as f64);
        prop_assert!((before.belief() - after.belief() - unit).abs() < 1e-12);
        prop_assert!((after.disbelief() - before.disbelief() - unit).abs() < 1e-12);
    }

    #[test]
    fn entropy_bounds(c in proptest::collection::vec(0u64..1000, 2..40).prop_filter("non-empty", |c| c.iter().sum::<u64>() > 0)) {
        let d = ClassDistribution::from_counts(&c).unwrap();
        let p = d.class_probabilities().unwrap();
        let h = entropy(&p, std::f64::consts::E);
        prop_assert!(h >= 0.0 && h <= (c.len() as f64).ln() + 1e-12);
        let h2 = entropy(&p, 2.0);
        let t = entropy_threshold(c.len(), 0.01_f64.min(0.5 / c.len() as f64), std::f64::consts::E).unwrap().threshold;
        let t2 = entropy_threshold(c.len(), 0.01_f64.min(0.5 / c.len() as f64), 2.0).unwrap().threshold;
        if (h - t).abs() > 1e-9 {
            prop_assert_eq!(h > t, h2 > t2);
        }
    }
}
