//! Small dense complex matrices and a Hermitian eigenvalue solver.
//!
//! Everything here works on blocks of a few dozen rows at most (photon-number
//! blocks, 2×2 mode unitaries, 4×4 / 8×8 Gram matrices), so plain row-major
//! storage and a cyclic Jacobi sweep are sufficient.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::scalar::{Real, C};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C<T>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn trace(&self) -> C<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).fold(C::zero(), |a, b| a + b)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    /// Entrywise max-norm `max |a_ij|`.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Max-norm distance `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    pub fn hermitian_residual(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    ///
    /// The `n×n` complex Hermitian matrix `H = A + iB` is embedded into the
    /// real symmetric `2n×2n` matrix `[[A, -B], [B, A]]`, whose spectrum is
    /// that of `H` with every eigenvalue doubled; every second value is kept.
    pub fn hermitian_eigenvalues(&self) -> Vec<T> {
        assert_eq!(self.rows, self.cols, "eigenvalues of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Vec::new();
        }
        let m = 2 * n;
        let mut a = vec![T::zero(); m * m];
        for i in 0..n {
            for j in 0..n {
                let z = self[(i, j)];
                a[i * m + j] = z.re;
                a[(i + n) * m + (j + n)] = z.re;
                a[i * m + (j + n)] = -z.im;
                a[(i + n) * m + j] = z.im;
            }
        }
        let mut ev = symmetric_eigenvalues(&mut a, m);
        ev.sort_by(|x, y| x.partial_cmp(y).expect("NaN eigenvalue"));
        ev.into_iter().step_by(2).collect()
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    /// Converts to a serializable `[[ [re, im], ... ], ...]` layout.
    pub fn to_report(&self) -> MatrixReport {
        MatrixReport {
            rows: (0..self.rows)
                .map(|i| (0..self.cols).map(|j| [self[(i, j)].re.as_f64(), self[(i, j)].im.as_f64()]).collect())
                .collect(),
        }
    }
}

/// JSON-friendly complex matrix: each entry is `[re, im]`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MatrixReport {
    pub rows: Vec<Vec<[f64; 2]>>,
}

impl<T: Real> std::ops::Index<(usize, usize)> for DenseMatrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;
    fn mul(self, rhs: Self) -> DenseMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;
    fn add(self, rhs: Self) -> DenseMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;
    fn sub(self, rhs: Self) -> DenseMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

/// Cyclic Jacobi eigenvalues of a real symmetric `n×n` matrix (destroys `a`).
fn symmetric_eigenvalues<T: Real>(a: &mut [T], n: usize) -> Vec<T> {
    let two = T::lit(2.0);
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut scale = T::zero();
        for i in 0..n {
            for j in 0..n {
                let v = a[i * n + j] * a[i * n + j];
                if i == j {
                    scale += v;
                } else {
                    off += v;
                }
            }
        }
        if off <= T::epsilon() * T::epsilon() * (scale + off) || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cs * akp - sn * akq;
                    a[k * n + q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cs * apk - sn * aqk;
                    a[q * n + k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Matrix exponential by scaling and squaring with a Taylor series.
pub fn expm<T: Real>(a: &DenseMatrix<T>) -> DenseMatrix<T> {
    assert_eq!(a.rows, a.cols, "exponential of a non-square matrix");
    let n = a.rows;
    // Row-sum bound on the operator norm.
    let norm = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)].norm()).fold(T::zero(), |s, x| s + x))
        .fold(T::zero(), T::max);
    let mut squarings = 0u32;
    let mut scale = T::one();
    while norm * scale > T::lit(0.5) {
        scale = scale * T::lit(0.5);
        squarings += 1;
    }
    let scaled = a.scale(Complex::new(scale, T::zero()));
    let mut result = DenseMatrix::identity(n);
    let mut term = DenseMatrix::identity(n);
    for k in 1..=30 {
        term = (&term * &scaled).scale(Complex::new(T::one() / T::from_usize(k), T::zero()));
        result = &result + &term;
        if term.max_abs() <= T::epsilon() * result.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// The Pauli matrices `σ₀ … σ₃` in the `(|0⟩, |1⟩)` basis.
pub fn pauli<T: Real>(index: usize) -> DenseMatrix<T> {
    let o = C::<T>::one();
    let z = C::<T>::zero();
    let i = Complex::new(T::zero(), T::one());
    match index {
        0 => DenseMatrix::from_rows(&[vec![o, z], vec![z, o]]),
        1 => DenseMatrix::from_rows(&[vec![z, o], vec![o, z]]),
        2 => DenseMatrix::from_rows(&[vec![z, -i], vec![i, z]]),
        3 => DenseMatrix::from_rows(&[vec![o, z], vec![z, -o]]),
        _ => panic!("Pauli index {index} out of range"),
    }
}
