use std::collections::BTreeMap;

use hypershape::binning::{bin_points, BinningSpec, PointCloud};
use hypershape::metrics::analyze;
use hypershape::sim::{run_ball_experiment, sample_ball, BallExperiment, BallSampleConfig};
use hypershape::stats::{bootstrap_metric, summarize};
use proptest::prelude::*;

fn cloud(max_rows: usize) -> impl Strategy<Value = PointCloud> {
    (2usize..=4, 1usize..=max_rows).prop_flat_map(|(n, m)| {
        prop::collection::vec(-10.0f64..10.0, n * m)
            .prop_map(move |v| PointCloud::new(v, n).unwrap())
    })
}

fn unit_ranges(n: usize) -> Vec<(f64, f64)> {
    vec![(-10.0, 10.0); n]
}

proptest! {
    #[test]
    fn occupied_cells_are_bounded(x in cloud(60), k in 2usize..8) {
        let spec = BinningSpec::new(k).with_ranges(unit_ranges(x.ncols()));
        let img = bin_points(&x, &spec).unwrap();
        prop_assert!(img.volume() <= x.nrows().min(k.pow(x.ncols() as u32)));
        prop_assert!(img.volume() >= 1);
    }

    #[test]
    fn adding_points_never_removes_cells(x in cloud(40), extra in cloud(10), k in 2usize..8) {
        prop_assume!(x.ncols() == extra.ncols());
        let spec = BinningSpec::new(k).with_ranges(unit_ranges(x.ncols()));
        let before = bin_points(&x, &spec).unwrap();
        let mut values = x.values().to_vec();
        values.extend_from_slice(extra.values());
        let after = bin_points(&PointCloud::new(values, x.ncols()).unwrap(), &spec).unwrap();
        prop_assert!(before.data().iter().zip(after.data()).all(|(&a, &b)| a <= b));
    }

    #[test]
    fn affine_rescaling_is_invisible(x in cloud(40), k in 2usize..8, scale in 1u32..5, shift in -3i32..3) {
        // power-of-two scales and integer shifts keep every comparison exact
        let s = 2f64.powi(scale as i32 - 2);
        let t = shift as f64;
        let n = x.ncols();
        let y = PointCloud::new(x.values().iter().map(|v| v * s + t).collect(), n).unwrap();
        let a = bin_points(&x, &BinningSpec::new(k).with_ranges(unit_ranges(n))).unwrap();
        let ranges = unit_ranges(n).into_iter().map(|(lo, hi)| (lo * s + t, hi * s + t)).collect();
        let b = bin_points(&y, &BinningSpec::new(k).with_ranges(ranges)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn column_permutation_keeps_metrics(x in cloud(50), k in 2usize..7) {
        let n = x.ncols();
        let perm: Vec<usize> = (0..n).rev().collect();
        let spec = BinningSpec::new(k).with_ranges(unit_ranges(n));
        let a = analyze(&x, &spec).unwrap();
        let b = analyze(&x.permute_columns(&perm).unwrap(), &spec).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn quantiles_are_ordered(values in prop::collection::vec(-1e6f64..1e6, 1..200)) {
        let s = summarize(&values).unwrap();
        prop_assert!(s.q025 <= s.median && s.median <= s.q975);
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo <= s.q025 && s.q975 <= hi);
        prop_assert!(s.mean >= lo - 1e-6 && s.mean <= hi + 1e-6);
    }
}

#[test]
fn bootstrap_is_deterministic() {
    let x = sample_ball(&BallSampleConfig {
        n: 3,
        points: 200,
        seed: 1,
    })
    .unwrap();
    let spec = BinningSpec::new(6);
    let a = bootstrap_metric(&x, &spec, 50, 77).unwrap();
    let b = bootstrap_metric(&x, &spec, 50, 77).unwrap();
    assert_eq!(a, b);
    let c = bootstrap_metric(&x, &spec, 50, 78).unwrap();
    assert_ne!(a.replicates, c.replicates);
}

/// Exact distribution of the number of distinct rows in a size-`m` resample,
/// by enumerating all `m^m` index sequences.
fn distinct_count_distribution(m: usize) -> BTreeMap<usize, f64> {
    let total = m.pow(m as u32);
    let mut counts = BTreeMap::new();
    for code in 0..total {
        let mut seen = vec![false; m];
        let mut c = code;
        for _ in 0..m {
            seen[c % m] = true;
            c /= m;
        }
        *counts
            .entry(seen.iter().filter(|&&s| s).count())
            .or_insert(0usize) += 1;
    }
    counts
        .into_iter()
        .map(|(k, v)| (k, v as f64 / total as f64))
        .collect()
}

#[test]
fn bootstrap_volume_matches_enumeration() {
    let replicates = 20_000;
    for m in 2..=5 {
        // each row in its own bin, so volume == number of distinct rows drawn
        let rows: Vec<[f64; 2]> = (0..m).map(|i| [i as f64 + 0.5, 0.5]).collect();
        let x = PointCloud::from_rows(&rows).unwrap();
        let spec = BinningSpec::new(5).with_ranges(vec![(0.0, 5.0), (0.0, 5.0)]);
        let boot = bootstrap_metric(&x, &spec, replicates, 42 + m as u64).unwrap();

        let exact = distinct_count_distribution(m);
        for (&v, &p) in &exact {
            let hits = boot.replicates.iter().filter(|r| r.volume == v).count() as f64;
            let p_hat = hits / replicates as f64;
            let sigma = (p * (1.0 - p) / replicates as f64).sqrt();
            assert!(
                (p_hat - p).abs() < 4.5 * sigma,
                "m={m} V={v}: {p_hat} vs {p}"
            );
        }
        let covered: usize = exact
            .keys()
            .map(|&v| boot.replicates.iter().filter(|r| r.volume == v).count())
            .sum();
        assert_eq!(covered, replicates);
    }
    let two = distinct_count_distribution(2);
    assert_eq!(two[&1], 0.5);
    assert_eq!(two[&2], 0.5);
}

/// Marginal density (unnormalized) of one coordinate of a uniform point in
/// the unit `n`-ball.
fn marginal_density(n: usize, t: f64) -> f64 {
    (1.0 - t * t).max(0.0).powf((n as f64 - 1.0) / 2.0)
}

fn simpson(n: usize, a: f64, b: f64, steps: usize) -> f64 {
    let h = (b - a) / steps as f64;
    let mut s = marginal_density(n, a) + marginal_density(n, b);
    for i in 1..steps {
        s += marginal_density(n, a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Kolmogorov-Smirnov statistic of sorted data against the ball marginal,
/// integrating the density piecewise between consecutive order statistics.
fn ks_statistic(n: usize, sorted: &[f64]) -> f64 {
    let total = simpson(n, -1.0, 1.0, 200_000);
    let m = sorted.len() as f64;
    let mut cdf = 0.0;
    let mut prev = -1.0;
    let mut d: f64 = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        cdf += simpson(n, prev, v, 8);
        prev = v;
        let f = cdf / total;
        d = d
            .max((f - i as f64 / m).abs())
            .max(((i + 1) as f64 / m - f).abs());
    }
    d
}

#[test]
fn ball_marginals_pass_ks() {
    let m = 100_000;
    // two-sided KS critical value at alpha = 0.001
    let critical = 1.9495 / (m as f64).sqrt();
    for n in [2, 3, 5] {
        let x = sample_ball(&BallSampleConfig {
            n,
            points: m,
            seed: 2024 + n as u64,
        })
        .unwrap();
        for axis in 0..n {
            let mut col: Vec<f64> = x.rows().map(|r| r[axis]).collect();
            col.sort_by(f64::total_cmp);
            let d = ks_statistic(n, &col);
            assert!(d < critical, "n={n} axis={axis}: D={d}");
        }
        assert!(x
            .rows()
            .all(|r| r.iter().map(|v| v * v).sum::<f64>() <= 1.0 + 1e-12));
    }
}

#[test]
fn ball_experiment_is_reproducible() {
    let cfg = BallExperiment::new(vec![2, 3], vec![4, 5], 3, 2000).with_seed(9);
    let a = run_ball_experiment(&cfg).unwrap();
    let b = run_ball_experiment(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 12);
    let keys: Vec<_> = a.iter().map(|r| (r.dim, r.bins, r.sample)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn disk_regression_snapshot() {
    let x = sample_ball(&BallSampleConfig {
        n: 2,
        points: 100_000,
        seed: 7,
    })
    .unwrap();
    let m = analyze(&x, &BinningSpec::new(14)).unwrap();
    assert!(m.sp > 0.0 && m.sp <= 1.2, "{}", m.sp);
    assert!(
        m.sphericity > 0.0 && m.sphericity <= 3.0,
        "{}",
        m.sphericity
    );
    // frozen from the first run of this seed
    assert_eq!((m.volume, m.radius, m.surface), SNAPSHOT_DISK_14);
}

const SNAPSHOT_DISK_14: (usize, u32, usize) = (172, 9, 40);
