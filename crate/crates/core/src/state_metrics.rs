//! Fidelity, Bures distance and SLD Fisher information of density
//! operators, plus the optimal Hermitian generator solving the associated
//! Sylvester equation.

use crate::error::{Error, Result};
use crate::matrix::{self, c, eig_hermitian, psd_sqrt, ComplexMatrix, HermitianEig};
use std::sync::Arc;

const STATE_TOL: f64 = 1e-10;
const POSITIVE_DEFINITE_FLOOR: f64 = 1e-9;

/// Density operator: Hermitian, PSD and unit trace (all within 1e-10).
#[derive(Clone, Debug)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::ShapeError("density operator must be square".into()));
        }
        let dev = matrix.hermiticity_deviation();
        if dev > STATE_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidInput(format!(
                "density operator trace {} is not 1",
                tr.re
            )));
        }
        let eig = eig_hermitian(&matrix)?;
        if eig.min_eigenvalue() < -STATE_TOL {
            return Err(Error::NotPsd(eig.min_eigenvalue()));
        }
        Ok(Self { matrix })
    }

    /// Pure state |psi><psi| from a (normalized) column vector.
    pub fn pure(psi: &ComplexMatrix) -> Result<Self> {
        let n = psi.frobenius_norm();
        if n < 1e-12 {
            return Err(Error::InvalidInput("zero state vector".into()));
        }
        let v = psi.scale_re(1.0 / n);
        Self::new(v.outer(&v))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale_re(1.0 / d as f64),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// Uhlmann fidelity F(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1^2.
pub fn fidelity_states(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(root_fidelity_states(rho, sigma)?.powi(2))
}

/// Root fidelity ||sqrt(rho) sqrt(sigma)||_1, clamped into [0, 1].
pub fn root_fidelity_states(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::ShapeError(format!(
            "state dimensions differ: {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let sr = psd_sqrt(rho.matrix())?;
    let ss = psd_sqrt(sigma.matrix())?;
    Ok(matrix::trace_norm(&(&sr * &ss)).clamp(0.0, 1.0))
}

/// Bures distance sqrt(2 (1 - sqrt(F))).
pub fn bures_distance_states(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let rf = root_fidelity_states(rho, sigma)?;
    Ok((2.0 * (1.0 - rf)).max(0.0).sqrt())
}

type StateFn = Arc<dyn Fn(f64) -> ComplexMatrix + Send + Sync>;

/// Smooth theta-parameterized family of states with an analytic derivative
/// (Hermitian and traceless at every theta).
#[derive(Clone)]
pub struct StateFamily {
    theta_lo: f64,
    theta_hi: f64,
    rho_fn: StateFn,
    drho_fn: StateFn,
}

impl StateFamily {
    pub fn from_parts(theta_domain: (f64, f64), rho_fn: StateFn, drho_fn: StateFn) -> Self {
        Self {
            theta_lo: theta_domain.0,
            theta_hi: theta_domain.1,
            rho_fn,
            drho_fn,
        }
    }

    fn check_domain(&self, theta: f64) -> Result<()> {
        if theta <= self.theta_lo || theta >= self.theta_hi {
            return Err(Error::OutOfDomain {
                value: theta,
                lo: self.theta_lo,
                hi: self.theta_hi,
            });
        }
        Ok(())
    }

    pub fn rho_at(&self, theta: f64) -> Result<DensityOperator> {
        self.check_domain(theta)?;
        DensityOperator::new((self.rho_fn)(theta))
    }

    pub fn drho_at(&self, theta: f64) -> Result<ComplexMatrix> {
        self.check_domain(theta)?;
        let d = (self.drho_fn)(theta);
        let dev = d.hermiticity_deviation();
        if dev > 1e-9 {
            return Err(Error::NotHermitian(dev));
        }
        if d.trace().re.abs() > 1e-9 {
            return Err(Error::InvalidInput(
                "state derivative must be traceless".into(),
            ));
        }
        Ok(d)
    }

    /// Bloch rotation family rho = (I + r (cos t Z + sin t X))/2 on a qubit.
    pub fn bloch_rotation(r: f64) -> Self {
        let rho = move |t: f64| {
            let mut m = ComplexMatrix::identity(2);
            m[(0, 0)] += c(r * t.cos(), 0.0);
            m[(1, 1)] -= c(r * t.cos(), 0.0);
            m[(0, 1)] += c(r * t.sin(), 0.0);
            m[(1, 0)] += c(r * t.sin(), 0.0);
            m.scale_re(0.5)
        };
        let drho = move |t: f64| {
            let mut m = ComplexMatrix::zeros(2, 2);
            m[(0, 0)] = c(-r * t.sin(), 0.0);
            m[(1, 1)] = c(r * t.sin(), 0.0);
            m[(0, 1)] = c(r * t.cos(), 0.0);
            m[(1, 0)] = c(r * t.cos(), 0.0);
            m.scale_re(0.5)
        };
        Self::from_parts(
            (f64::NEG_INFINITY, f64::INFINITY),
            Arc::new(rho),
            Arc::new(drho),
        )
    }

    /// Classical binary family diag(theta, 1 - theta).
    pub fn classical_binary() -> Self {
        Self::from_parts(
            (0.0, 1.0),
            Arc::new(|t: f64| ComplexMatrix::diag(&[c(t, 0.0), c(1.0 - t, 0.0)])),
            Arc::new(|_| ComplexMatrix::diag(&[c(1.0, 0.0), c(-1.0, 0.0)])),
        )
    }

    /// Family that stays at a fixed state.
    pub fn constant(rho: DensityOperator) -> Self {
        let d = rho.dim();
        let m = rho.matrix().clone();
        Self::from_parts(
            (f64::NEG_INFINITY, f64::INFINITY),
            Arc::new(move |_| m.clone()),
            Arc::new(move |_| ComplexMatrix::zeros(d, d)),
        )
    }
}

/// Spectral-sum SLD Fisher information restricted to eigenvalue pairs with
/// lambda_l + lambda_m above `cutoff` (the pseudo-inverse convention; exact
/// for rank-deficient families with compatible derivative support).
pub(crate) fn fisher_from_spectrum(eig: &HermitianEig, drho: &ComplexMatrix, cutoff: f64) -> f64 {
    let d = eig.eigenvalues.len();
    let v = &eig.eigenvectors;
    let in_basis = &(&v.dagger() * drho) * v;
    let mut total = 0.0;
    for l in 0..d {
        for m in 0..d {
            let s = eig.eigenvalues[l].max(0.0) + eig.eigenvalues[m].max(0.0);
            if s > cutoff {
                total += 2.0 / s * in_basis[(l, m)].norm_sqr();
            }
        }
    }
    total
}

/// SLD Fisher information of a positive definite family at theta, from the
/// spectral double sum. States with an eigenvalue below 1e-9 are rejected;
/// use [`sld_fisher_states_regularized`] to mix in white noise instead.
pub fn sld_fisher_states(fam: &StateFamily, theta: f64) -> Result<f64> {
    let rho = fam.rho_at(theta)?;
    let drho = fam.drho_at(theta)?;
    let eig = eig_hermitian(rho.matrix())?;
    if eig.min_eigenvalue() < POSITIVE_DEFINITE_FLOOR {
        return Err(Error::SingularState(eig.min_eigenvalue()));
    }
    Ok(fisher_from_spectrum(&eig, &drho, 0.0))
}

/// SLD Fisher of the white-noise-mixed family (1-eps) rho + eps I/d. The
/// result refers to the mixed family, not the original one; the label is on
/// the caller to carry.
pub fn sld_fisher_states_regularized(fam: &StateFamily, theta: f64, eps: f64) -> Result<f64> {
    let rho = fam.rho_at(theta)?;
    let drho = fam.drho_at(theta)?.scale_re(1.0 - eps);
    let d = rho.dim();
    let mixed = &rho.matrix().scale_re(1.0 - eps)
        + &ComplexMatrix::identity(d).scale_re(eps / d as f64);
    let eig = eig_hermitian(&mixed)?;
    Ok(fisher_from_spectrum(&eig, &drho, 0.0))
}

/// Derivative of sqrt(rho) through the first divided difference of the
/// square root in the eigenbasis of rho.
pub fn deriv_sqrt_rho(eig: &HermitianEig, drho: &ComplexMatrix) -> ComplexMatrix {
    let d = eig.eigenvalues.len();
    let v = &eig.eigenvectors;
    let in_basis = &(&v.dagger() * drho) * v;
    let mut core = ComplexMatrix::zeros(d, d);
    for l in 0..d {
        for m in 0..d {
            let sl = eig.eigenvalues[l].max(0.0).sqrt();
            let sm = eig.eigenvalues[m].max(0.0).sqrt();
            let denom = sl + sm;
            if denom > 1e-14 {
                core[(l, m)] = in_basis[(l, m)].scale(1.0 / denom);
            }
        }
    }
    &(v * &core) * &v.dagger()
}

/// Optimal Hermitian generator: the minimizer of
/// ||d(sqrt rho) - i sqrt(rho) H||_2^2, solving the Sylvester equation
/// rho H + H rho = i [d(sqrt rho), sqrt(rho)].
pub fn sld_optimal_hamiltonian(fam: &StateFamily, theta: f64) -> Result<ComplexMatrix> {
    let rho = fam.rho_at(theta)?;
    let drho = fam.drho_at(theta)?;
    let eig = eig_hermitian(rho.matrix())?;
    if eig.min_eigenvalue() < POSITIVE_DEFINITE_FLOOR {
        return Err(Error::SingularState(eig.min_eigenvalue()));
    }
    let d = rho.dim();
    let v = &eig.eigenvectors;
    let in_basis = &(&v.dagger() * &drho) * v;
    let mut core = ComplexMatrix::zeros(d, d);
    for l in 0..d {
        for m in 0..d {
            let ll = eig.eigenvalues[l];
            let lm = eig.eigenvalues[m];
            let coeff = (ll.sqrt() - lm.sqrt()) / ((ll + lm) * (ll.sqrt() + lm.sqrt()));
            core[(l, m)] = in_basis[(l, m)] * c(0.0, -coeff);
        }
    }
    Ok(&(v * &core) * &v.dagger())
}
