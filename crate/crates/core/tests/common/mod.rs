//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls into the library's operator builders: bases are
//! enumerated afresh and matrices are assembled densely with nalgebra.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type M = DMatrix<Complex64>;

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

/// `(n_a, n_b)` with `n_a + n_b ≤ cutoff`: ascending total, then ascending `n_b`.
pub fn basis(cutoff: usize) -> Vec<(usize, usize)> {
    (0..=cutoff).flat_map(|t| (0..=t).map(move |nb| (t - nb, nb))).collect()
}

fn sign(a: usize, b: usize) -> f64 {
    (a as f64 - b as f64).signum() * if a == b { 0.0 } else { 1.0 }
}

/// Dense `G_i` from the occupation-basis definitions.
pub fn dense_g(i: usize, cutoff: usize) -> M {
    let b = basis(cutoff);
    let pos = |o: (usize, usize)| b.iter().position(|&x| x == o).unwrap();
    let mut m = M::zeros(b.len(), b.len());
    for (col, &(n, k)) in b.iter().enumerate() {
        if n == k {
            continue;
        }
        match i {
            0 => m[(col, col)] = cx(1.0, 0.0),
            1 => m[(pos((k, n)), col)] = cx(1.0, 0.0),
            2 => m[(pos((k, n)), col)] = cx(0.0, -sign(k, n)),
            3 => m[(col, col)] = cx(sign(n, k), 0.0),
            _ => unreachable!(),
        }
    }
    m
}

pub fn pauli(i: usize) -> M {
    let (o, z) = (cx(1.0, 0.0), cx(0.0, 0.0));
    let v = match i {
        0 => [o, z, z, o],
        1 => [z, o, o, z],
        2 => [z, cx(0.0, -1.0), cx(0.0, 1.0), z],
        3 => [o, z, z, -o],
        _ => unreachable!(),
    };
    M::from_row_slice(2, 2, &v)
}

pub fn kron_all(ms: &[M]) -> M {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.kronecker(m))
}

/// Qubit operator `σ_{s₁} ⊗ … ⊗ σ_{s_n}`.
pub fn pauli_string(idx: &[usize]) -> M {
    kron_all(&idx.iter().map(|&i| pauli(i)).collect::<Vec<_>>())
}

pub fn expect(op: &M, psi: &[Complex64]) -> Complex64 {
    let v = nalgebra::DVector::from_column_slice(psi);
    (v.adjoint() * op * &v)[(0, 0)]
}

/// Seeded normalized complex vector (a small LCG keeps this independent of the library RNG).
pub fn random_qubits(seed: u64, len: usize) -> Vec<Complex64> {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    let v: Vec<Complex64> = (0..len).map(|_| cx(next(), next())).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

pub fn max_abs(m: &M) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Converts a library dense matrix into nalgebra.
pub fn to_na(m: &bnl_core::Matrix) -> M {
    M::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}
