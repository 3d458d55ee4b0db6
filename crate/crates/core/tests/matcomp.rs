use lrmc::matcomp::{
    complete, objective, sample_bound, structure_report, Lambda, LogBase, PartialMatrix, SolverConfig,
    DEFAULT_RANK_TOLERANCE,
};
use lrmc::DenseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

fn product(a: &DenseMatrix, b_t: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(a.rows(), b_t.rows(), |i, j| {
        (0..a.cols()).map(|k| a[(i, k)] * b_t[(j, k)]).sum()
    })
}

// Max diagonal of B (B^T B)^-1 B^T through Gauss-Jordan on the Gram matrix.
fn max_hat_diagonal(b: &DenseMatrix) -> f64 {
    let (n, r) = b.dims();
    let mut g = vec![vec![0.0; 2 * r]; r];
    for i in 0..r {
        for j in 0..r {
            g[i][j] = (0..n).map(|k| b[(k, i)] * b[(k, j)]).sum();
        }
        g[i][r + i] = 1.0;
    }
    for c in 0..r {
        let p = (c..r).max_by(|&x, &y| g[x][c].abs().total_cmp(&g[y][c].abs())).unwrap();
        g.swap(c, p);
        let d = g[c][c];
        g[c].iter_mut().for_each(|v| *v /= d);
        for row in 0..r {
            if row != c {
                let f = g[row][c];
                for k in 0..2 * r {
                    g[row][k] -= f * g[c][k];
                }
            }
        }
    }
    (0..n)
        .map(|k| {
            (0..r)
                .map(|i| (0..r).map(|j| b[(k, i)] * g[i][r + j] * b[(k, j)]).sum::<f64>())
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

#[test]
fn coherence_matches_hat_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let b = gaussian(&mut rng, 10, 3);
    let c = gaussian(&mut rng, 6, 3);
    let report = structure_report(&product(&b, &c), DEFAULT_RANK_TOLERANCE).unwrap();
    assert_eq!(report.numeric_rank, 3);
    assert!((report.leverage_u - max_hat_diagonal(&b)).abs() < 1e-10);
    assert!((report.leverage_v - max_hat_diagonal(&c)).abs() < 1e-10);
    assert!((report.coherence - report.leverage_u.max(report.leverage_v)).abs() < 1e-15);
}

#[test]
fn full_rank_gaussian_is_maximally_coherent_on_short_side() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let a = gaussian(&mut rng, 10, 6);
    let report = structure_report(&a, DEFAULT_RANK_TOLERANCE).unwrap();
    assert_eq!(report.numeric_rank, 6);
    assert!((report.leverage_v - 1.0).abs() < 1e-10);
    assert!((report.leverage_u - max_hat_diagonal(&a)).abs() < 1e-10);
}

#[test]
fn constant_matrix_coherence() {
    for (n1, n2) in [(4, 9), (12, 3), (7, 7)] {
        let report = structure_report(&DenseMatrix::filled(n1, n2, 2.5), DEFAULT_RANK_TOLERANCE).unwrap();
        assert_eq!(report.numeric_rank, 1);
        let expected = (1.0 / n1 as f64).max(1.0 / n2 as f64);
        assert!((report.coherence - expected).abs() < 1e-12, "{n1}x{n2}");
    }
}

#[test]
fn rank_one_hidden_entry_follows_cross_ratio() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let u: Vec<f64> = (0..8).map(|_| rng.random_range(1.0..3.0)).collect();
    let v: Vec<f64> = (0..8).map(|_| rng.random_range(1.0..3.0)).collect();
    let m = DenseMatrix::from_fn(8, 8, |i, j| u[i] * v[j]);
    let (i, j, k) = (2, 5, 0);
    let observations = (0..8)
        .flat_map(|r| (0..8).map(move |c| (r, c)))
        .filter(|&cell| cell != (i, j))
        .map(|cell| (cell, m[cell]));
    let partial = PartialMatrix::from_observations(8, 8, 0.0, observations).unwrap();
    let config = SolverConfig {
        lambda: Lambda::Absolute(1e-9),
        max_rank: Some(1),
        tolerance: 1e-12,
        max_iterations: 20_000,
        ..SolverConfig::default()
    };
    let result = complete(&partial, &config).unwrap();
    let oracle = m[(i, k)] * m[(k, j)] / m[(k, k)];
    assert!(
        (result.completed[(i, j)] - oracle).abs() < 1e-6 * oracle,
        "{} vs {oracle}",
        result.completed[(i, j)]
    );
}

#[test]
fn objective_of_exact_fit_is_nuclear_term() {
    let m = DenseMatrix::diagonal(&[3.0, 1.0]);
    let partial = PartialMatrix::fully_observed(m.clone());
    assert!((objective(&partial, &m, 0.5).unwrap() - 2.0).abs() < 1e-12);
    assert!((objective(&partial, &DenseMatrix::zeros(2, 2), 0.5).unwrap() - 10.0).abs() < 1e-12);
}

#[test]
fn sample_bound_reference_values() {
    // ceil(C n^1.2 r log n) evaluated independently with high precision
    assert_eq!(sample_bound(200, 11, 2.0, LogBase::Log10).unwrap(), 29214);
    assert_eq!(sample_bound(200, 11, 1.0, LogBase::Log10).unwrap(), 14607);
    assert_eq!(sample_bound(100, 5, 1.0, LogBase::Natural).unwrap(), 5784);
    assert!(sample_bound(0, 11, 2.0, LogBase::Log10).is_err());
    assert!(sample_bound(200, 11, -1.0, LogBase::Log10).is_err());
}
