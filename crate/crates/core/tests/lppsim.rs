use endpoint_core::density::{symmetric_grid, EndpointTable, NumericsConfig};
use endpoint_core::lppsim::{
    argmax_endpoint, draw_field, ks_distance_samples, last_passage_profile, sample_endpoints, LppConfig,
};
use endpoint_core::stats::sample_moments;

fn logistic_table() -> EndpointTable {
    let ts = symmetric_grid(30.0, 0.01).unwrap();
    let fs = ts
        .iter()
        .map(|&t: &f64| {
            let e = (-t.abs()).exp();
            e / ((1.0 + e) * (1.0 + e))
        })
        .collect();
    EndpointTable::from_values(ts, fs, NumericsConfig::default()).unwrap()
}

fn logistic_quantiles(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let p = (k as f64 + 0.5) / n as f64;
            (p / (1.0 - p)).ln()
        })
        .collect()
}

#[test]
fn weights_have_geometric_law() {
    let cfg = LppConfig { q: 0.3, n: 40, samples: 1, seed: 99 };
    let mut all = Vec::new();
    for k in 0..8 {
        all.extend(draw_field(&cfg, k).unwrap().iter());
    }
    let n = all.len() as f64;
    let mean = all.iter().sum::<u64>() as f64 / n;
    let var = (1.0 - cfg.q) / (cfg.q * cfg.q);
    assert!((mean - cfg.weight_mean()).abs() < 3.0 * (var / n).sqrt(), "{mean}");
    let zeros = all.iter().filter(|&&w| w == 0).count() as f64 / n;
    assert!((zeros - cfg.q).abs() < 3.0 * (cfg.q * (1.0 - cfg.q) / n).sqrt(), "{zeros}");
}

#[test]
fn batch_is_deterministic_and_matches_drawn_fields() {
    let cfg = LppConfig { q: 0.5, n: 15, samples: 40, seed: 5 };
    let a = sample_endpoints(&cfg).unwrap();
    assert_eq!(a, sample_endpoints(&cfg).unwrap());
    for k in [0, 17, 39] {
        let field = draw_field(&cfg, k as u64).unwrap();
        assert_eq!(a.endpoints_y[k], argmax_endpoint(&last_passage_profile(&field)));
    }
    let other = sample_endpoints(&LppConfig { seed: 6, ..cfg }).unwrap();
    assert_ne!(a.endpoints_y, other.endpoints_y);
}

#[test]
fn endpoint_law_is_symmetric() {
    let cfg = LppConfig { q: 0.5, n: 12, samples: 20_000, seed: 1 };
    let batch = sample_endpoints(&cfg).unwrap();
    let m = sample_moments(&batch.rescaled).unwrap();
    let se = (m.variance / cfg.samples as f64).sqrt();
    assert!(m.mean.abs() < 4.0 * se, "mean {} se {se}", m.mean);
    let pos = batch.endpoints_y.iter().filter(|&&y| y > 0).count() as f64;
    let neg = batch.endpoints_y.iter().filter(|&&y| y < 0).count() as f64;
    assert!((pos - neg).abs() < 4.0 * (pos + neg).sqrt());
}

#[test]
fn ks_of_exact_quantiles_is_small() {
    let table = logistic_table();
    let d = ks_distance_samples(&logistic_quantiles(4000), &table).unwrap();
    assert!(d < 0.012, "{d}");
}

#[test]
fn ks_is_invariant_under_affine_rescaling() {
    let table = logistic_table();
    let xs = logistic_quantiles(1000);
    let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.0).collect();
    let (a, b) = (
        ks_distance_samples(&xs, &table).unwrap(),
        ks_distance_samples(&ys, &table).unwrap(),
    );
    assert!((a - b).abs() < 1e-12, "{a} vs {b}");
}

#[test]
fn ks_detects_wrong_shape() {
    let table = logistic_table();
    let uniform: Vec<f64> = (0..4000).map(|k| k as f64 / 3999.0).collect();
    assert!(ks_distance_samples(&uniform, &table).unwrap() > 0.03);
    assert!(ks_distance_samples(&[], &table).is_err());
    assert!(ks_distance_samples(&[1.0, 1.0], &table).is_err());
}

#[test]
fn airy_units_scale_linearly() {
    let cfg = LppConfig { q: 0.5, n: 8, samples: 10, seed: 2 };
    let batch = sample_endpoints(&cfg).unwrap();
    let scaled = batch.in_airy_units(2.0);
    for (a, b) in batch.rescaled.iter().zip(&scaled) {
        assert_eq!(2.0 * a, *b);
    }
}
