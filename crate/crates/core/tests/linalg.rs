mod common;

use corrcoh::linalg::real::frobenius_sq;
use corrcoh::linalg::{
    hermitian_eigen, partial_trace, singular_values_3x3, symmetric_eigen3, ComplexMatrix, Mat3,
    Subsystem,
};
use corrcoh::state::{random_density, seeded_rng};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    let scale = 10f64.powi(rng.random_range(-3..4));
    for i in 0..dim {
        m[(i, i)] = Complex64::new(scale * rng.random_range(-1.0..1.0), 0.0);
        for j in i + 1..dim {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

#[test]
fn eigen_reconstruction_on_random_hermitian() {
    let mut rng = seeded_rng(2024);
    let mut worst = 0.0f64;
    for k in 0..10_000 {
        let dim = if k % 2 == 0 { 4 } else { 2 };
        let h = random_hermitian(dim, &mut rng);
        let eig = hermitian_eigen(&h).unwrap();
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        worst = worst.max(eig.reconstruct().max_abs_diff(&h));
        // orthonormal columns, checked with the naive product
        let v = common::to_nested(&eig.vectors);
        let g = common::matmul(&common::dagger(&v), &v);
        for (i, row) in g.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((z - expect).norm() < 1e-12);
            }
        }
    }
    assert!(worst <= 1e-10, "worst reconstruction error {worst:e}");
}

#[test]
fn degenerate_spectra() {
    // repeated eigenvalues and an already diagonal input
    let d = ComplexMatrix::from_diagonal(&[0.25, 0.25, 0.25, 0.25]).unwrap();
    assert_eq!(hermitian_eigen(&d).unwrap().values, vec![0.25; 4]);
    let bell = ComplexMatrix::from_fn(4, |r, c| {
        if matches!((r, c), (0, 0) | (0, 3) | (3, 0) | (3, 3)) {
            Complex64::new(0.5, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let eig = hermitian_eigen(&bell).unwrap();
    for (got, want) in eig.values.iter().zip([0.0, 0.0, 0.0, 1.0]) {
        assert!((got - want).abs() < 1e-15);
    }
}

#[test]
fn singular_values_frobenius_identity() {
    let mut rng = seeded_rng(77);
    for _ in 0..10_000 {
        let mut e: Mat3 = [[0.0; 3]; 3];
        for x in e.iter_mut().flatten() {
            *x = rng.random_range(-1.0..1.0);
        }
        let sv = singular_values_3x3(&e).unwrap();
        assert!(sv.values.windows(2).all(|w| w[0] >= w[1]) && sv.values[2] >= 0.0);
        assert!((sv.sum_of_squares() - frobenius_sq(&e)).abs() <= 1e-10);
    }
}

#[test]
fn singular_values_of_rank_one() {
    let e = [[0.0, 0.0, 0.0], [0.25, 0.0, 0.0], [0.0, 0.0, 0.0]];
    let sv = singular_values_3x3(&e).unwrap();
    assert!((sv.values[0] - 0.25).abs() < 1e-15);
    assert!(sv.values[1].abs() < 1e-15 && sv.values[2].abs() < 1e-15);
}

#[test]
fn symmetric_eigen3_reconstructs() {
    let mut rng = seeded_rng(5);
    for _ in 0..1000 {
        let mut m: Mat3 = [[0.0; 3]; 3];
        for (i, j) in [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)] {
            let x = rng.random_range(-2.0..2.0);
            m[i][j] = x;
            m[j][i] = x;
        }
        let (vals, vecs) = symmetric_eigen3(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let r: f64 = (0..3).map(|k| vecs[i][k] * vals[k] * vecs[j][k]).sum();
                assert!((r - m[i][j]).abs() < 1e-12);
            }
        }
    }
}

proptest! {
    #[test]
    fn partial_traces_have_unit_trace(seed in any::<u64>(), rank in 1usize..=4) {
        let rho = random_density(4, rank, seed).unwrap();
        for keep in [Subsystem::A, Subsystem::B] {
            let r = partial_trace(rho.matrix(), keep).unwrap();
            prop_assert!((r.trace() - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
            // agrees with explicit index sums
            let naive = common::reduce(&common::nested(&rho), keep == Subsystem::A);
            prop_assert!(r.max_abs_diff(&common::from_nested(&naive)) <= 1e-15);
        }
    }
}
