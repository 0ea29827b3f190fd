use dataset_trust::federated::{parse_sweep_csv, sweep_to_csv};
use dataset_trust::fixtures::gtsrb_train;
use dataset_trust::{run_sweep, BiasConfig, Method2Mode, SimConfig, SplitMode};

fn scenario(n_oems: usize) -> SimConfig {
    SimConfig {
        base_distribution: gtsrb_train(),
        n_oems,
        imbalance_class_ids: [
            "11", "18", "19", "20", "21", "22", "23", "24", "25", "26", "27", "28", "29", "30",
            "31",
        ]
        .map(String::from)
        .to_vec(),
        k_values: (0..=n_oems).collect(),
        seed: 7,
        split_mode: SplitMode::Stratified,
        method2_mode: Method2Mode::Baseline,
        bias_config: BiasConfig {
            // N_s = 1000·N_0 at k = 0, so U starts at 0.4.
            vc_dimension: 39209.0 * 1000.0,
            epsilon: 0.1,
            delta: (-1.0f64).exp(),
            ..BiasConfig::default()
        },
    }
}

#[test]
fn hundred_oems() {
    let pts = run_sweep(&scenario(100)).unwrap();
    assert_eq!(pts.len(), 101);
    let u0 = pts[0].method1.uncertainty();
    assert!((u0 - 0.4).abs() < 1e-9);
    for p in &pts {
        let k = p.k as f64;
        assert!(
            (p.method2.belief() - (100.0 - k) / 102.0).abs() < 1e-12,
            "k={}",
            p.k
        );
        assert!((p.method2.disbelief() - k / 102.0).abs() < 1e-12);
        assert!((p.method2.uncertainty() - 2.0 / 102.0).abs() < 1e-12);
        assert!((p.method1.uncertainty() - u0).abs() <= 0.02);
    }
    for w in pts.windows(2) {
        assert!(w[1].method1.belief() <= w[0].method1.belief());
        assert!(w[1].merged_total <= w[0].merged_total);
    }
    assert!(pts[100].method1.belief() < pts[0].method1.belief());
    assert_eq!(pts[100].merged_total, 30239);
}

#[test]
fn ten_oems() {
    for p in run_sweep(&scenario(10)).unwrap() {
        assert!((p.method2.uncertainty() - 1.0 / 6.0).abs() < 1e-12);
        assert!((p.method2.uncertainty() - 0.2).abs() <= 0.04);
    }
}

#[test]
fn csv_is_deterministic() {
    let mut cfg = scenario(20);
    cfg.split_mode = SplitMode::Random;
    let a = sweep_to_csv(&run_sweep(&cfg).unwrap());
    let b = sweep_to_csv(&run_sweep(&cfg).unwrap());
    assert_eq!(a, b);
    assert_eq!(parse_sweep_csv(&a).unwrap().len(), 42);
}
