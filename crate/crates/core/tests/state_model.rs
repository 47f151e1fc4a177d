mod common;

use corrcoh::linalg::real::{self, outer};
use corrcoh::state::{
    make_bell, make_bell_diagonal, make_product, make_werner, paper_channel_state,
    paper_product_state, pauli_decompose, random_density, seeded_rng, validate, BellState,
    BlochDecomposition, DensityMatrix,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

#[test]
fn round_trip_on_ginibre_states() {
    let mut worst = 0.0f64;
    for k in 0..10_000u64 {
        let rho = random_density(4, common::rank_for(k), k).unwrap();
        let back = rho.bloch().unwrap().reconstruct().unwrap();
        worst = worst.max(back.matrix().max_abs_diff(rho.matrix()));
    }
    assert!(worst <= 1e-10, "{worst:e}");
}

#[test]
fn decomposition_matches_naive_expectations() {
    for k in 0..500u64 {
        let rho = random_density(4, common::rank_for(k), 9000 + k).unwrap();
        let d = rho.bloch().unwrap();
        let m = common::nested(&rho);
        for i in 0..3 {
            assert!((d.a[i] - common::expectation(&m, i + 1, 0)).abs() < 1e-14);
            assert!((d.b[i] - common::expectation(&m, 0, i + 1)).abs() < 1e-14);
            for j in 0..3 {
                assert!((d.e[i][j] - common::expectation(&m, i + 1, j + 1)).abs() < 1e-14);
            }
        }
    }
}

proptest! {
    #[test]
    fn purity_identity(seed in any::<u64>(), rank in 1usize..=4) {
        let rho = random_density(4, rank, seed).unwrap();
        let d = rho.bloch().unwrap();
        let lhs = 4.0 * common::purity(&common::nested(&rho));
        let rhs = 1.0 + real::dot(&d.a, &d.a) + real::dot(&d.b, &d.b) + d.correlation_norm_sq();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn product_rule(
        a in prop::array::uniform3(-0.57f64..0.57),
        b in prop::array::uniform3(-0.57f64..0.57),
    ) {
        let rho = make_product(&DensityMatrix::qubit(a).unwrap(), &DensityMatrix::qubit(b).unwrap()).unwrap();
        let d = rho.bloch().unwrap();
        prop_assert!(real::mat_max_abs_diff(&d.e, &outer(&a, &b)) <= 1e-12);
        prop_assert!(real::max_abs_diff(&d.a, &a) <= 1e-12);
        prop_assert!(real::max_abs_diff(&d.b, &b) <= 1e-12);
    }

    #[test]
    fn werner_states_are_valid(p in 0.0f64..=1.0) {
        prop_assert!(validate(make_werner(p).unwrap().matrix()).valid);
    }

    #[test]
    fn bell_diagonal_tetrahedron(w in prop::array::uniform4(0.0f64..1.0)) {
        // convex mixture of the four Bell correlation vectors stays physical
        let total: f64 = w.iter().sum::<f64>().max(1e-12);
        let corners = [[1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [-1.0, -1.0, -1.0]];
        let mut c = [0.0; 3];
        for (wk, corner) in w.iter().zip(corners) {
            c = real::add(&c, &real::scale(&corner, wk / total));
        }
        let rho = make_bell_diagonal(c[0], c[1], c[2]).unwrap();
        prop_assert!(validate(rho.matrix()).valid);
    }
}

#[test]
fn factory_states_pass_validation() {
    let mut states = vec![
        paper_product_state(),
        paper_channel_state(),
        DensityMatrix::maximally_mixed(4).unwrap(),
        make_product(&DensityMatrix::qubit([0.0, 0.0, 1.0]).unwrap(), &DensityMatrix::qubit([1.0, 0.0, 0.0]).unwrap())
            .unwrap(),
    ];
    states.extend([BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus].map(make_bell));
    states.extend((0..=10).map(|k| make_werner(k as f64 / 10.0).unwrap()));
    for rank in 1..=4 {
        states.push(random_density(4, rank, rank as u64).unwrap());
    }
    for rho in &states {
        let report = validate(rho.matrix());
        assert!(report.valid, "{report:?}");
    }
}

#[test]
fn unphysical_bloch_parameters_are_rejected() {
    let d = BlochDecomposition::new([0.0; 3], [0.0; 3], real::diag3(&[1.0, 1.0, 1.0]));
    assert!(matches!(d.reconstruct(), Err(corrcoh::Error::UnphysicalDecomposition(_))));
    assert!(make_bell_diagonal(1.0, 1.0, 1.0).is_err());
    assert!(make_werner(-0.1).is_err());
}

#[test]
fn pauli_decompose_rejects_non_hermitian() {
    let mut m = *DensityMatrix::maximally_mixed(4).unwrap().matrix();
    m[(0, 1)] = Complex64::new(0.0, 0.1);
    assert!(pauli_decompose(&m).is_err());
}

/// Purity of `Tr_env |psi><psi|` for a Gaussian vector on `C^4 x C^4`. This
/// samples the same Hilbert-Schmidt measure as full-rank Ginibre, through a
/// different construction.
fn purification_purity<R: Rng>(rng: &mut R) -> f64 {
    let psi: Vec<Complex64> = (0..16)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    let mut rho = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, row) in rho.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            for e in 0..4 {
                *entry += psi[4 * i + e] * psi[4 * j + e].conj() / norm;
            }
        }
    }
    rho.iter().flatten().map(|z| z.norm_sqr()).sum()
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn ginibre_mean_purity_matches_hilbert_schmidt() {
    // E[tr rho^2] = (d + N)/(dN + 1) = 8/17 for d = N = 4
    let expected = 8.0 / 17.0;
    let n = 20_000u64;
    let ginibre: Vec<f64> = (0..n)
        .map(|k| common::purity(&common::nested(&random_density(4, 4, 50_000 + k).unwrap())))
        .collect();
    let mut rng = seeded_rng(314);
    let purified: Vec<f64> = (0..n).map(|_| purification_purity(&mut rng)).collect();
    let (m1, se1) = mean_and_se(&ginibre);
    let (m2, se2) = mean_and_se(&purified);
    assert!((m1 - expected).abs() <= 4.0 * se1, "ginibre {m1} +- {se1}");
    assert!((m2 - expected).abs() <= 4.0 * se2, "purified {m2} +- {se2}");
    assert!((m1 - m2).abs() <= 4.0 * (se1 * se1 + se2 * se2).sqrt());
}

#[test]
fn low_rank_samples_have_requested_rank() {
    for rank in 1..=4 {
        for seed in 0..50 {
            let ev = random_density(4, rank, seed).unwrap().eigenvalues();
            let nonzero = ev.iter().filter(|&&x| x > 1e-10).count();
            assert_eq!(nonzero, rank);
        }
    }
}
