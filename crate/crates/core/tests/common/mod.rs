//! Naive reference implementations on nested `Vec`s. Kept independent of the
//! library so they can serve as oracles.
#![allow(dead_code)]

use corrcoh::linalg::ComplexMatrix;
use corrcoh::state::DensityMatrix;
use num_complex::Complex64 as C;

pub type M = Vec<Vec<C>>;

pub fn to_nested(m: &ComplexMatrix) -> M {
    (0..m.dim()).map(|i| (0..m.dim()).map(|j| m[(i, j)]).collect()).collect()
}

pub fn from_nested(m: &M) -> ComplexMatrix {
    ComplexMatrix::from_rows(m).unwrap()
}

pub fn matmul(a: &M, b: &M) -> M {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn dagger(a: &M) -> M {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn kron(a: &M, b: &M) -> M {
    let (p, q) = (a.len(), b.len());
    (0..p * q)
        .map(|r| (0..p * q).map(|c| a[r / q][c / q] * b[r % q][c % q]).collect())
        .collect()
}

pub fn trace(a: &M) -> C {
    (0..a.len()).map(|i| a[i][i]).sum()
}

pub fn pauli(k: usize) -> M {
    let (z, o, i) = (C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 1.0));
    match k {
        0 => vec![vec![o, z], vec![z, o]],
        1 => vec![vec![z, o], vec![o, z]],
        2 => vec![vec![z, -i], vec![i, z]],
        3 => vec![vec![o, z], vec![z, -o]],
        _ => unreachable!(),
    }
}

/// `tr[rho (sigma_i x sigma_j)]` with index 0 for the identity.
pub fn expectation(rho: &M, i: usize, j: usize) -> f64 {
    trace(&matmul(rho, &kron(&pauli(i), &pauli(j)))).re
}

/// Reduced state of A (`keep_a`) or B from a 4x4 matrix, by explicit index sums.
pub fn reduce(rho: &M, keep_a: bool) -> M {
    let mut out = vec![vec![C::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            for k in 0..2 {
                out[r][c] += if keep_a {
                    rho[2 * r + k][2 * c + k]
                } else {
                    rho[2 * k + r][2 * k + c]
                };
            }
        }
    }
    out
}

pub fn purity(rho: &M) -> f64 {
    rho.iter().flatten().map(|z| z.norm_sqr()).sum()
}

/// `C2 = d tr rho^2 - 1`
pub fn c2(rho: &M) -> f64 {
    rho.len() as f64 * purity(rho) - 1.0
}

pub fn nested(rho: &DensityMatrix) -> M {
    to_nested(rho.matrix())
}

pub fn conjugate(rho: &DensityMatrix, u: &M) -> DensityMatrix {
    let m = matmul(&matmul(u, &nested(rho)), &dagger(u));
    DensityMatrix::new(from_nested(&m)).unwrap()
}

/// Local unitary `U_A x U_B` from two library-sampled 2x2 unitaries.
pub fn local_unitary(seed: u64) -> M {
    let ua = to_nested(&corrcoh::state::random_unitary(2, seed));
    let ub = to_nested(&corrcoh::state::random_unitary(2, seed ^ 0xabcdef));
    kron(&ua, &ub)
}

pub fn rank_for(k: u64) -> usize {
    1 + (k % 4) as usize
}
