//! Dense complex linear algebra primitives: matrices, Hermitian
//! eigendecomposition, Schatten norms, PSD square roots and the maximally
//! entangled vector. Everything here is sized for desk-scale problems
//! (dimensions up to a few dozen), so the implementations favour accuracy
//! and determinism over asymptotic speed.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// Shorthand constructor for a complex scalar.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense complex matrix with row-major storage.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Build a matrix from row-major entries, rejecting NaN/Inf.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeError(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::default(); rows * cols],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from rows of real numbers (convenience for tests and builtins).
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let cl = if r > 0 { rows[0].len() } else { 0 };
        Self::from_fn(r, cl, |i, j| c(rows[i][j], 0.0))
    }

    /// Column vector from complex entries.
    pub fn col_vec(entries: &[Complex64]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Hilbert-Schmidt (Frobenius) norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        Self::from_fn(r1 * r2, c1 * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    /// Hermitian part (A + A^dag)/2.
    pub fn hermitian_part(&self) -> Self {
        debug_assert!(self.is_square());
        (self + &self.dagger()).scale_re(0.5)
    }

    /// Relative deviation from Hermiticity, ||A - A^dag||_F / max(||A||_F, 1e-300).
    pub fn hermiticity_deviation(&self) -> f64 {
        let diff = self - &self.dagger();
        diff.frobenius_norm() / self.frobenius_norm().max(1e-300)
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.is_square() && self.hermiticity_deviation() <= rel_tol
    }

    pub fn column(&self, j: usize) -> Self {
        Self::from_fn(self.rows, 1, |i, _| self[(i, j)])
    }

    /// Inner product <self|other> for column vectors.
    pub fn vdot(&self, other: &Self) -> Complex64 {
        debug_assert!(self.cols == 1 && other.cols == 1 && self.rows == other.rows);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Outer product |self><other| of column vectors.
    pub fn outer(&self, other: &Self) -> Self {
        debug_assert!(self.cols == 1 && other.cols == 1);
        Self::from_fn(self.rows, other.rows, |i, j| {
            self[(i, 0)] * other[(j, 0)].conj()
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::default() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::mul(self, rhs)
    }
}

/// Eigendecomposition of a Hermitian matrix: A = V diag(lambda) V^dag with
/// eigenvalues ascending and orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// Reassemble V f(diag) V^dag for a scalar function of the eigenvalues.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let d = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(d, d);
        for k in 0..d {
            let fk = f(self.eigenvalues[k]);
            if fk == 0.0 {
                continue;
            }
            for i in 0..d {
                let vik = v[(i, k)] * fk;
                for j in 0..d {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

const HERMITICITY_REL_TOL: f64 = 1e-10;
const JACOBI_MAX_SWEEPS: usize = 60;

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. The input is symmetrized internally; inputs further than
/// 1e-10 (relative) from Hermitian are rejected.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<HermitianEig> {
    if !a.is_square() {
        return Err(Error::ShapeError(format!(
            "eig_hermitian needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let dev = a.hermiticity_deviation();
    if dev > HERMITICITY_REL_TOL {
        return Err(Error::NotHermitian(dev));
    }
    Ok(eig_hermitian_unchecked(&a.hermitian_part()))
}

/// Jacobi eigensolver core; assumes `a` is exactly Hermitian.
pub(crate) fn eig_hermitian_unchecked(a: &ComplexMatrix) -> HermitianEig {
    let n = a.rows();
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm().max(1e-300);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += 2.0 * m[(i, j)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = m[(p, q)];
                let gn = g.norm();
                if gn <= 1e-18 * scale {
                    continue;
                }
                // Phase that makes the pivot real, then a real Jacobi rotation.
                let phi = g / gn;
                let tau = (m[(q, q)].re - m[(p, p)].re) / (2.0 * gn);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // R restricted to (p,q): [[c, s],[-conj(phi) s, conj(phi) c]]
                let rpp = c(cs, 0.0);
                let rpq = c(sn, 0.0);
                let rqp = -phi.conj() * sn;
                let rqq = phi.conj() * cs;
                // columns: M <- M R, V <- V R
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * rpp + mkq * rqp;
                    m[(k, q)] = mkp * rpq + mkq * rqq;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * rpp + vkq * rqp;
                    v[(k, q)] = vkp * rpq + vkq * rqq;
                }
                // rows: M <- R^dag M
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = rpp.conj() * mpk + rqp.conj() * mqk;
                    m[(q, k)] = rpq.conj() * mpk + rqq.conj() * mqk;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    HermitianEig {
        eigenvalues,
        eigenvectors,
    }
}

/// Largest singular value, computed from the top eigenvalue of A^dag A.
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    // Work with the smaller Gram matrix of the two.
    let gram = if a.rows() >= a.cols() {
        &a.dagger() * a
    } else {
        a * &a.dagger()
    };
    let eig = eig_hermitian_unchecked(&gram.hermitian_part());
    eig.max_eigenvalue().max(0.0).sqrt()
}

/// Sum of singular values (trace norm / Schatten 1-norm).
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    let gram = if a.rows() >= a.cols() {
        &a.dagger() * a
    } else {
        a * &a.dagger()
    };
    let eig = eig_hermitian_unchecked(&gram.hermitian_part());
    eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum()
}

/// Spectral norm of a Hermitian matrix: max |eigenvalue|. Cheaper than the
/// general path and used heavily by the bound certificates.
pub fn spectral_norm_hermitian(a: &ComplexMatrix) -> f64 {
    let eig = eig_hermitian_unchecked(&a.hermitian_part());
    eig.eigenvalues.iter().fold(0.0, |m, &l| m.max(l.abs()))
}

const PSD_EIG_FLOOR: f64 = -1e-8;

/// Principal square root of a PSD matrix. Eigenvalues in [-1e-8, 0) are
/// clamped to zero; anything below that is rejected as not PSD.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(a)?;
    if eig.min_eigenvalue() < PSD_EIG_FLOOR {
        return Err(Error::NotPsd(eig.min_eigenvalue()));
    }
    Ok(eig.apply_fn(|l| l.max(0.0).sqrt()))
}

/// Unnormalized maximally entangled vector sum_i |i> ⊗ |i> as a d^2 x 1 column.
pub fn max_entangled_vector(d: usize) -> Result<ComplexMatrix> {
    if d == 0 {
        return Err(Error::InvalidInput(
            "maximally entangled vector needs dimension >= 1".into(),
        ));
    }
    let mut v = ComplexMatrix::zeros(d * d, 1);
    for i in 0..d {
        v[(i * d + i, 0)] = c(1.0, 0.0);
    }
    Ok(v)
}

/// Partial trace over the first factor of a (d1*d2)x(d1*d2) matrix.
pub fn partial_trace_first(m: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    debug_assert_eq!(m.rows(), d1 * d2);
    ComplexMatrix::from_fn(d2, d2, |i, j| {
        (0..d1).map(|e| m[(e * d2 + i, e * d2 + j)]).sum()
    })
}

/// Partial trace over the second factor of a (d1*d2)x(d1*d2) matrix.
pub fn partial_trace_second(m: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    debug_assert_eq!(m.rows(), d1 * d2);
    ComplexMatrix::from_fn(d1, d1, |i, j| {
        (0..d2).map(|b| m[(i * d2 + b, j * d2 + b)]).sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    fn random_matrix(n: usize, m: usize, seed: u64) -> ComplexMatrix {
        // small deterministic LCG, good enough for test fixtures
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        ComplexMatrix::from_fn(n, m, |_, _| c(next(), next()))
    }

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        random_matrix(n, n, seed).hermitian_part()
    }

    #[test]
    fn rejects_nonfinite_entries() {
        let err = ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn spectral_norm_examples() {
        assert!((spectral_norm(&ComplexMatrix::diag(&[c(3.0, 0.0), c(1.0, 0.0)])) - 3.0).abs() < 1e-12);
        assert!((spectral_norm(&ComplexMatrix::identity(5)) - 1.0).abs() < 1e-12);
        // [[0,2],[0,0]] has singular values {2, 0}
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((spectral_norm(&m) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&ComplexMatrix::diag(&[c(3.0, 0.0), c(-1.0, 0.0)])) - 4.0).abs() < 1e-12);
        // any unitary of dim d has trace norm d
        let u = ComplexMatrix::diag(&[c(0.0, 1.0), Complex64::from_polar(1.0, 0.3), c(1.0, 0.0)]);
        assert!((trace_norm(&u) - 3.0).abs() < 1e-12);
        // rank-1 |u><v| with unit u, v has trace norm 1
        let u = ComplexMatrix::col_vec(&[c(0.6, 0.0), c(0.0, 0.8)]);
        let v = ComplexMatrix::col_vec(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!((trace_norm(&u.outer(&v)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_pauli() {
        let e = eig_hermitian(&pauli_z()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-13);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-13);

        let e = eig_hermitian(&pauli_x()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-13);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-13);
        // |-> eigenvector for eigenvalue -1: components have opposite sign
        let v0 = e.eigenvectors.column(0);
        assert!((v0[(0, 0)].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((v0[(0, 0)] + v0[(1, 0)]).norm() < 1e-12);
    }

    #[test]
    fn eig_reconstruction_random() {
        for seed in 1..6u64 {
            let a = random_hermitian(4, seed);
            let e = eig_hermitian(&a).unwrap();
            let rebuilt = e.apply_fn(|l| l);
            let resid = (&rebuilt - &a).frobenius_norm();
            assert!(resid <= 1e-9 * a.frobenius_norm().max(1.0), "residual {resid}");
            // orthonormality
            let vtv = &e.eigenvectors.dagger() * &e.eigenvectors;
            let dev = (&vtv - &ComplexMatrix::identity(4)).frobenius_norm();
            assert!(dev < 1e-10);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn psd_sqrt_examples() {
        let s = psd_sqrt(&ComplexMatrix::diag(&[c(4.0, 0.0), c(9.0, 0.0)])).unwrap();
        assert!((s[(0, 0)].re - 2.0).abs() < 1e-12 && (s[(1, 1)].re - 3.0).abs() < 1e-12);

        let half = ComplexMatrix::identity(2).scale_re(0.5);
        let s = psd_sqrt(&half).unwrap();
        assert!((s[(0, 0)].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);

        let m = ComplexMatrix::diag(&[c(-1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(psd_sqrt(&m), Err(Error::NotPsd(_))));
    }

    #[test]
    fn psd_sqrt_squares_back() {
        for seed in 10..14u64 {
            let b = random_matrix(3, 3, seed);
            let a = &b * &b.dagger(); // PSD
            let s = psd_sqrt(&a).unwrap();
            let resid = (&(&s * &s) - &a).frobenius_norm();
            assert!(resid <= 1e-9 * a.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn max_entangled_identities() {
        assert!(max_entangled_vector(0).is_err());
        let g1 = max_entangled_vector(1).unwrap();
        assert_eq!(g1.rows(), 1);
        assert!((g1[(0, 0)].re - 1.0).abs() < 1e-15);

        let g2 = max_entangled_vector(2).unwrap();
        assert!((g2[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((g2[(3, 0)].re - 1.0).abs() < 1e-15);
        assert_eq!(g2[(1, 0)], Complex64::default());

        // <Gamma| (A ⊗ I) |Gamma> = Tr A  and  (A⊗I)|Gamma> = (I⊗A^T)|Gamma>
        let d = 3;
        let a = random_matrix(d, d, 99);
        let g = max_entangled_vector(d).unwrap();
        let id = ComplexMatrix::identity(d);
        let lhs = g.vdot(&(&a.kron(&id) * &g));
        assert!((lhs - a.trace()).norm() < 1e-12);
        let left = &a.kron(&id) * &g;
        let right = &id.kron(&a.transpose()) * &g;
        assert!((&left - &right).frobenius_norm() < 1e-12);
        // ||(A ⊗ I)|Gamma>|| = ||A||_2
        assert!((left.frobenius_norm() - a.frobenius_norm()).abs() < 1e-12);
    }

    #[test]
    fn partial_traces() {
        let a = random_matrix(2, 2, 3);
        let b = random_matrix(3, 3, 4);
        let k = a.kron(&b);
        let t1 = partial_trace_first(&k, 2, 3);
        assert!((&t1 - &b.scale(a.trace())).frobenius_norm() < 1e-12);
        let t2 = partial_trace_second(&k, 2, 3);
        assert!((&t2 - &a.scale(b.trace())).frobenius_norm() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn norm_properties(seed in 1u64..500, n in 2usize..7) {
            let a = random_matrix(n, n, seed);
            let b = random_matrix(n, n, seed.wrapping_add(7919));
            let na = spectral_norm(&a);
            // ||A|| = ||A^dag|| = ||A^dag A||^{1/2}
            prop_assert!((na - spectral_norm(&a.dagger())).abs() < 1e-10 * na.max(1.0));
            prop_assert!((na - spectral_norm(&(&a.dagger() * &a)).sqrt()).abs() < 1e-9 * na.max(1.0));
            // submultiplicativity and triangle inequality
            prop_assert!(spectral_norm(&(&a * &b)) <= na * spectral_norm(&b) + 1e-9);
            prop_assert!(spectral_norm(&(&a + &b)) <= na + spectral_norm(&b) + 1e-9);
            // multiplicativity under tensor products
            let nk = spectral_norm(&a.kron(&b));
            prop_assert!((nk - na * spectral_norm(&b)).abs() < 1e-9 * nk.max(1.0));
        }

        #[test]
        fn psd_sqrt_roundtrip(seed in 1u64..200, n in 2usize..6) {
            let b = random_matrix(n, n, seed);
            let a = &b * &b.dagger();
            let s = psd_sqrt(&a).unwrap();
            let resid = (&(&s * &s) - &a).frobenius_norm();
            prop_assert!(resid <= 1e-9 * a.frobenius_norm().max(1.0));
        }
    }
}
