//! CPTP channels and smooth one-parameter channel families: Kraus
//! representations, Choi operators, canonical Kraus sets obtained from the
//! Choi spectral decomposition, and canonical isometric extensions
//! V = sum_i |i> ⊗ K_i acting from the input space into environment ⊗ output.
//!
//! The environment dimension is always padded to d_E = d_in * d_out with
//! zero Kraus operators so that any two channels of equal shape share the
//! same environment layout (row index = e * d_out + b).

use crate::error::{Error, Result};
use crate::matrix::{self, c, eig_hermitian, max_entangled_vector, ComplexMatrix};
use num_complex::Complex64;
use serde::Deserialize;
use std::sync::Arc;

const CPTP_TOL: f64 = 1e-8;
const CHOI_RANK_CUTOFF: f64 = 1e-12;

/// A CPTP map presented by a list of Kraus operators (each d_out x d_in).
#[derive(Clone, Debug)]
pub struct KrausChannel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validate dimensions and trace preservation (sum K^dag K = I within 1e-8).
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidInput("a channel needs at least one Kraus operator".into()));
        }
        let d_out = kraus[0].rows();
        let d_in = kraus[0].cols();
        if d_in == 0 || d_out == 0 {
            return Err(Error::InvalidInput("zero-dimensional channel".into()));
        }
        for k in &kraus {
            if k.rows() != d_out || k.cols() != d_in {
                return Err(Error::ShapeError("inconsistent Kraus operator shapes".into()));
            }
        }
        let mut acc = ComplexMatrix::zeros(d_in, d_in);
        for k in &kraus {
            acc = &acc + &(&k.dagger() * k);
        }
        let dev = (&acc - &ComplexMatrix::identity(d_in)).frobenius_norm();
        if dev > CPTP_TOL {
            return Err(Error::NotCptp(dev));
        }
        Ok(Self { d_in, d_out, kraus })
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Apply the channel to a density (or any) matrix.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out = &out + &(&(k * rho) * &k.dagger());
        }
        out
    }

    /// Apply id_R ⊗ N to a matrix on the reference ⊗ input space.
    pub fn apply_with_reference(&self, d_ref: usize, rho: &ComplexMatrix) -> ComplexMatrix {
        let id = ComplexMatrix::identity(d_ref);
        let mut out = ComplexMatrix::zeros(d_ref * self.d_out, d_ref * self.d_out);
        for k in &self.kraus {
            let kk = id.kron(k);
            out = &out + &(&(&kk * rho) * &kk.dagger());
        }
        out
    }

    /// Tensor power N^⊗n (Kraus set grows as k^n; intended for n <= 2).
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("tensor power needs n >= 1".into()));
        }
        let mut ks: Vec<ComplexMatrix> = self.kraus.clone();
        for _ in 1..n {
            let mut next = Vec::with_capacity(ks.len() * self.kraus.len());
            for a in &ks {
                for b in &self.kraus {
                    next.push(a.kron(b));
                }
            }
            ks = next;
        }
        KrausChannel::new(ks)
    }
}

/// Choi operator (id ⊗ N)(|Gamma><Gamma|) of a channel, dimension d_in*d_out.
#[derive(Clone, Debug)]
pub struct ChoiOperator {
    matrix: ComplexMatrix,
    d_in: usize,
    d_out: usize,
}

impl ChoiOperator {
    pub fn new(matrix: ComplexMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        if matrix.rows() != d_in * d_out || !matrix.is_square() {
            return Err(Error::ShapeError(format!(
                "Choi operator must be {0}x{0}",
                d_in * d_out
            )));
        }
        let eig = eig_hermitian(&matrix)?;
        if eig.min_eigenvalue() < -1e-8 {
            return Err(Error::NotPsd(eig.min_eigenvalue()));
        }
        // partial trace over the output must give the identity on the input copy
        let red = matrix::partial_trace_second(&matrix, d_in, d_out);
        let dev = (&red - &ComplexMatrix::identity(d_in)).frobenius_norm();
        if dev > CPTP_TOL {
            return Err(Error::NotCptp(dev));
        }
        Ok(Self { matrix, d_in, d_out })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }
}

/// Choi operator of a channel, (id ⊗ N)(|Gamma><Gamma|).
pub fn choi_of_channel(ch: &KrausChannel) -> Result<ChoiOperator> {
    let d = ch.d_in();
    let gamma = max_entangled_vector(d)?;
    let gg = gamma.outer(&gamma);
    let choi = ch.apply_with_reference(d, &gg);
    ChoiOperator::new(choi, d, ch.d_out())
}

/// Canonical Kraus set from the spectral decomposition of the Choi operator:
/// exactly d_in*d_out operators, sorted by decreasing Choi eigenvalue and
/// zero-padded past the numerical rank.
pub fn canonical_kraus(choi: &ChoiOperator) -> Result<KrausChannel> {
    let (d_in, d_out) = (choi.d_in, choi.d_out);
    let eig = eig_hermitian(&choi.matrix)?;
    if eig.min_eigenvalue() < -1e-8 {
        return Err(Error::NotPsd(eig.min_eigenvalue()));
    }
    let d_e = d_in * d_out;
    let mut kraus = Vec::with_capacity(d_e);
    // eigenvalues come back ascending; emit largest first
    for k in (0..d_e).rev() {
        let lam = eig.eigenvalues[k];
        if lam <= CHOI_RANK_CUTOFF {
            kraus.push(ComplexMatrix::zeros(d_out, d_in));
            continue;
        }
        let v = eig.eigenvectors.column(k);
        let s = lam.sqrt();
        // Choi index (a, b) = a*d_out + b maps to K[b, a]
        kraus.push(ComplexMatrix::from_fn(d_out, d_in, |b, a| {
            v[(a * d_out + b, 0)] * s
        }));
    }
    KrausChannel::new(kraus)
}

/// Canonical isometric extension V = sum_i |i> ⊗ K_i with V^dag V = I.
/// Rows are indexed by e * d_out + b.
#[derive(Clone, Debug)]
pub struct IsometricExtension {
    v: ComplexMatrix,
    d_in: usize,
    d_out: usize,
    d_env: usize,
}

impl IsometricExtension {
    pub fn from_kraus_list(kraus: &[ComplexMatrix]) -> Result<Self> {
        let d_env = kraus.len();
        let d_out = kraus[0].rows();
        let d_in = kraus[0].cols();
        let mut v = ComplexMatrix::zeros(d_env * d_out, d_in);
        for (i, k) in kraus.iter().enumerate() {
            for b in 0..d_out {
                for a in 0..d_in {
                    v[(i * d_out + b, a)] = k[(b, a)];
                }
            }
        }
        let dev = (&(&v.dagger() * &v) - &ComplexMatrix::identity(d_in)).frobenius_norm();
        if dev > CPTP_TOL {
            return Err(Error::NotCptp(dev));
        }
        Ok(Self { v, d_in, d_out, d_env })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn d_env(&self) -> usize {
        self.d_env
    }

    /// N(rho) = Tr_env[V rho V^dag].
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let big = &(&self.v * rho) * &self.v.dagger();
        matrix::partial_trace_first(&big, self.d_env, self.d_out)
    }
}

/// Canonical isometric extension of a channel with exactly d_in*d_out Kraus
/// operators. Pass channels through [`canonical_kraus`] first when the Kraus
/// count differs.
pub fn isometric_extension(ch: &KrausChannel) -> Result<IsometricExtension> {
    let d_e = ch.d_in() * ch.d_out();
    if ch.kraus().len() != d_e {
        return Err(Error::KrausCountMismatch {
            expected: d_e,
            got: ch.kraus().len(),
        });
    }
    IsometricExtension::from_kraus_list(ch.kraus())
}

/// Canonicalize (through the Choi form) and build the isometric extension.
pub fn canonical_isometry(ch: &KrausChannel) -> Result<IsometricExtension> {
    let canon = canonical_kraus(&choi_of_channel(ch)?)?;
    isometric_extension(&canon)
}

type KrausFn = Arc<dyn Fn(f64) -> Vec<ComplexMatrix> + Send + Sync>;

/// Smooth theta-parameterized Kraus family with analytic derivative Kraus
/// operators and a fixed Kraus count over the whole open domain.
#[derive(Clone)]
pub struct ChannelFamily {
    name: String,
    theta_lo: f64,
    theta_hi: f64,
    d_in: usize,
    d_out: usize,
    kraus_fn: KrausFn,
    dkraus_fn: KrausFn,
}

impl std::fmt::Debug for ChannelFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ChannelFamily({}, domain ({}, {}), {}->{})",
            self.name, self.theta_lo, self.theta_hi, self.d_in, self.d_out
        )
    }
}

impl ChannelFamily {
    pub fn from_parts(
        name: impl Into<String>,
        theta_domain: (f64, f64),
        d_in: usize,
        d_out: usize,
        kraus_fn: KrausFn,
        dkraus_fn: KrausFn,
    ) -> Self {
        Self {
            name: name.into(),
            theta_lo: theta_domain.0,
            theta_hi: theta_domain.1,
            d_in,
            d_out,
            kraus_fn,
            dkraus_fn,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn theta_domain(&self) -> (f64, f64) {
        (self.theta_lo, self.theta_hi)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta > self.theta_lo && theta < self.theta_hi
    }

    fn check_domain(&self, theta: f64) -> Result<()> {
        if !self.contains(theta) {
            return Err(Error::OutOfDomain {
                value: theta,
                lo: self.theta_lo,
                hi: self.theta_hi,
            });
        }
        Ok(())
    }

    pub fn kraus_at(&self, theta: f64) -> Result<KrausChannel> {
        self.check_domain(theta)?;
        KrausChannel::new((self.kraus_fn)(theta))
    }

    pub fn dkraus_at(&self, theta: f64) -> Result<Vec<ComplexMatrix>> {
        self.check_domain(theta)?;
        Ok((self.dkraus_fn)(theta))
    }

    /// Channel at theta, canonicalized to the padded environment. Used when a
    /// family member enters a discrimination pair.
    pub fn channel_at(&self, theta: f64) -> Result<KrausChannel> {
        self.kraus_at(theta)
    }
}

/// Isometric extension of a family member together with its theta-derivative
/// dV = sum_i |i> ⊗ dK_i, both padded to d_env = d_in*d_out (zero blocks keep
/// the family smooth, unlike re-canonicalizing per theta).
pub fn family_isometry_and_derivative(
    fam: &ChannelFamily,
    theta: f64,
) -> Result<(IsometricExtension, ComplexMatrix)> {
    let ch = fam.kraus_at(theta)?;
    let dks = fam.dkraus_at(theta)?;
    if dks.len() != ch.kraus().len() {
        return Err(Error::ShapeError(
            "derivative Kraus count differs from Kraus count".into(),
        ));
    }
    let (d_in, d_out) = (ch.d_in(), ch.d_out());
    let d_e = (d_in * d_out).max(ch.kraus().len());
    let zero = ComplexMatrix::zeros(d_out, d_in);
    let mut ks: Vec<ComplexMatrix> = ch.kraus().to_vec();
    let mut dks: Vec<ComplexMatrix> = dks;
    ks.resize(d_e, zero.clone());
    dks.resize(d_e, zero);
    let iso = IsometricExtension::from_kraus_list(&ks)?;
    let mut dv = ComplexMatrix::zeros(d_e * d_out, d_in);
    for (i, dk) in dks.iter().enumerate() {
        if dk.rows() != d_out || dk.cols() != d_in {
            return Err(Error::ShapeError("derivative Kraus operator shape".into()));
        }
        for b in 0..d_out {
            for a in 0..d_in {
                dv[(i * d_out + b, a)] = dk[(b, a)];
            }
        }
    }
    Ok((iso, dv))
}

fn pauli(which: char) -> ComplexMatrix {
    match which {
        'x' => ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
        'y' => {
            let mut m = ComplexMatrix::zeros(2, 2);
            m[(0, 1)] = c(0.0, -1.0);
            m[(1, 0)] = c(0.0, 1.0);
            m
        }
        'z' => ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]),
        _ => unreachable!(),
    }
}

fn rz_unitary(theta: f64) -> ComplexMatrix {
    ComplexMatrix::diag(&[
        Complex64::from_polar(1.0, -theta / 2.0),
        Complex64::from_polar(1.0, theta / 2.0),
    ])
}

fn check_unit_interval(name: &str, v: f64, open: bool) -> Result<()> {
    let ok = if open { v > 0.0 && v < 1.0 } else { (0.0..=1.0).contains(&v) };
    if !ok {
        return Err(Error::InvalidParam(format!("{name} must lie in [0,1], got {v}")));
    }
    Ok(())
}

/// Qubit/qudit channels by name. Conventions:
/// depolarizing p: {sqrt(1-3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z};
/// dephasing q: {sqrt(1-q) I, sqrt(q) Z};
/// amplitude_damping gamma: standard two-Kraus set;
/// unitary_rz theta: e^{-i theta Z / 2}.
pub fn builtin_channel(name: &str, params: &[f64]) -> Result<KrausChannel> {
    let need = |n: usize| -> Result<()> {
        if params.len() != n {
            return Err(Error::InvalidParam(format!(
                "channel `{name}` takes {n} parameter(s), got {}",
                params.len()
            )));
        }
        Ok(())
    };
    match name {
        "identity" => {
            let d = if params.is_empty() { 2 } else { params[0] as usize };
            if d < 1 {
                return Err(Error::InvalidParam("identity needs dimension >= 1".into()));
            }
            KrausChannel::new(vec![ComplexMatrix::identity(d)])
        }
        "depolarizing" => {
            need(1)?;
            let p = params[0];
            check_unit_interval("p", p, false)?;
            KrausChannel::new(vec![
                ComplexMatrix::identity(2).scale_re((1.0 - 3.0 * p / 4.0).sqrt()),
                pauli('x').scale_re((p / 4.0).sqrt()),
                pauli('y').scale_re((p / 4.0).sqrt()),
                pauli('z').scale_re((p / 4.0).sqrt()),
            ])
        }
        "dephasing" => {
            need(1)?;
            let q = params[0];
            check_unit_interval("q", q, false)?;
            KrausChannel::new(vec![
                ComplexMatrix::identity(2).scale_re((1.0 - q).sqrt()),
                pauli('z').scale_re(q.sqrt()),
            ])
        }
        "amplitude_damping" => {
            need(1)?;
            let g = params[0];
            check_unit_interval("gamma", g, false)?;
            let k0 = ComplexMatrix::diag(&[c(1.0, 0.0), c((1.0 - g).sqrt(), 0.0)]);
            let mut k1 = ComplexMatrix::zeros(2, 2);
            k1[(0, 1)] = c(g.sqrt(), 0.0);
            KrausChannel::new(vec![k0, k1])
        }
        "unitary_rz" => {
            need(1)?;
            KrausChannel::new(vec![rz_unitary(params[0])])
        }
        other => Err(Error::UnknownChannel(other.into())),
    }
}

/// Unitary channel from an explicit matrix (the `unitary_given` kind).
pub fn unitary_channel(u: ComplexMatrix) -> Result<KrausChannel> {
    KrausChannel::new(vec![u])
}

/// Smooth builtin families; the parameter theta plays the role of the
/// channel parameter (noise strength or rotation angle).
pub fn builtin_family(name: &str) -> Result<ChannelFamily> {
    match name {
        "dephasing" => Ok(ChannelFamily::from_parts(
            "dephasing",
            (0.0, 1.0),
            2,
            2,
            Arc::new(|t: f64| {
                vec![
                    ComplexMatrix::identity(2).scale_re((1.0 - t).sqrt()),
                    pauli('z').scale_re(t.sqrt()),
                ]
            }),
            Arc::new(|t: f64| {
                vec![
                    ComplexMatrix::identity(2).scale_re(-0.5 / (1.0 - t).sqrt()),
                    pauli('z').scale_re(0.5 / t.sqrt()),
                ]
            }),
        )),
        "amplitude_damping" => Ok(ChannelFamily::from_parts(
            "amplitude_damping",
            (0.0, 1.0),
            2,
            2,
            Arc::new(|g: f64| {
                let mut k1 = ComplexMatrix::zeros(2, 2);
                k1[(0, 1)] = c(g.sqrt(), 0.0);
                vec![
                    ComplexMatrix::diag(&[c(1.0, 0.0), c((1.0 - g).sqrt(), 0.0)]),
                    k1,
                ]
            }),
            Arc::new(|g: f64| {
                let mut dk1 = ComplexMatrix::zeros(2, 2);
                dk1[(0, 1)] = c(0.5 / g.sqrt(), 0.0);
                vec![
                    ComplexMatrix::diag(&[c(0.0, 0.0), c(-0.5 / (1.0 - g).sqrt(), 0.0)]),
                    dk1,
                ]
            }),
        )),
        "depolarizing" => Ok(ChannelFamily::from_parts(
            "depolarizing",
            (0.0, 1.0),
            2,
            2,
            Arc::new(|p: f64| {
                vec![
                    ComplexMatrix::identity(2).scale_re((1.0 - 3.0 * p / 4.0).sqrt()),
                    pauli('x').scale_re((p / 4.0).sqrt()),
                    pauli('y').scale_re((p / 4.0).sqrt()),
                    pauli('z').scale_re((p / 4.0).sqrt()),
                ]
            }),
            Arc::new(|p: f64| {
                vec![
                    ComplexMatrix::identity(2).scale_re(-0.375 / (1.0 - 3.0 * p / 4.0).sqrt()),
                    pauli('x').scale_re(0.125 / (p / 4.0).sqrt()),
                    pauli('y').scale_re(0.125 / (p / 4.0).sqrt()),
                    pauli('z').scale_re(0.125 / (p / 4.0).sqrt()),
                ]
            }),
        )),
        "unitary_rz" => Ok(ChannelFamily::from_parts(
            "unitary_rz",
            (f64::NEG_INFINITY, f64::INFINITY),
            2,
            2,
            Arc::new(|t: f64| vec![rz_unitary(t)]),
            Arc::new(|t: f64| {
                let gen = pauli('z').scale(c(0.0, -0.5));
                vec![&gen * &rz_unitary(t)]
            }),
        )),
        other => Err(Error::UnknownChannel(other.into())),
    }
}

/// Family that does not depend on theta at all (dK = 0 everywhere).
pub fn constant_family(ch: KrausChannel) -> ChannelFamily {
    let (d_in, d_out) = (ch.d_in(), ch.d_out());
    let ks: Vec<ComplexMatrix> = ch.kraus().to_vec();
    let zeros: Vec<ComplexMatrix> = ks.iter().map(|k| ComplexMatrix::zeros(k.rows(), k.cols())).collect();
    ChannelFamily::from_parts(
        "constant",
        (f64::NEG_INFINITY, f64::INFINITY),
        d_in,
        d_out,
        Arc::new(move |_| ks.clone()),
        Arc::new(move |_| zeros.clone()),
    )
}

/// JSON channel spec:
/// `{"kind": "...", "params": [...], "d_in": n, "d_out": n}` or an explicit
/// `{"kraus": [[[ [re,im], ... ], ...], ...]}`. Family specs add
/// `{"theta_domain": [lo, hi]}` to a builtin kind.
#[derive(Debug, Clone, Deserialize)]
pub struct ChannelSpec {
    pub kind: Option<String>,
    #[serde(default)]
    pub params: Vec<f64>,
    pub d_in: Option<usize>,
    pub d_out: Option<usize>,
    pub kraus: Option<Vec<Vec<Vec<[f64; 2]>>>>,
    pub theta_domain: Option<[f64; 2]>,
}

impl ChannelSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_channel(&self) -> Result<KrausChannel> {
        if let Some(kraus) = &self.kraus {
            let mut ks = Vec::with_capacity(kraus.len());
            for km in kraus {
                let rows = km.len();
                let cols = km.first().map(|r| r.len()).unwrap_or(0);
                if km.iter().any(|r| r.len() != cols) {
                    return Err(Error::Spec("ragged Kraus matrix".into()));
                }
                let mut data = Vec::with_capacity(rows * cols);
                for row in km {
                    for &[re, im] in row {
                        data.push(c(re, im));
                    }
                }
                ks.push(ComplexMatrix::new(rows, cols, data)?);
            }
            let ch = KrausChannel::new(ks)?;
            if let (Some(di), Some(dv)) = (self.d_in, self.d_out) {
                if ch.d_in() != di || ch.d_out() != dv {
                    return Err(Error::Spec("declared dimensions disagree with Kraus shapes".into()));
                }
            }
            return Ok(ch);
        }
        let kind = self
            .kind
            .as_deref()
            .ok_or_else(|| Error::Spec("channel spec needs `kind` or `kraus`".into()))?;
        builtin_channel(kind, &self.params)
    }

    pub fn to_family(&self) -> Result<ChannelFamily> {
        let kind = self
            .kind
            .as_deref()
            .ok_or_else(|| Error::Spec("family spec needs a builtin `kind`".into()))?;
        if kind == "constant" {
            let base = builtin_channel(
                self.params
                    .first()
                    .map(|_| "identity")
                    .unwrap_or("identity"),
                &[],
            )?;
            return Ok(constant_family(base));
        }
        let fam = builtin_family(kind)?;
        if let Some([lo, hi]) = self.theta_domain {
            if !(lo < hi) {
                return Err(Error::Spec("theta_domain must satisfy lo < hi".into()));
            }
            let (flo, fhi) = fam.theta_domain();
            if lo < flo || hi > fhi {
                return Err(Error::Spec(format!(
                    "theta_domain [{lo}, {hi}] exceeds the family domain ({flo}, {fhi})"
                )));
            }
            return Ok(ChannelFamily {
                theta_lo: lo,
                theta_hi: hi,
                ..fam
            });
        }
        Ok(fam)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_channel(d: usize, n_kraus: usize, seed: u64) -> KrausChannel {
        // random isometry columns via Gram-Schmidt on Gaussian-ish vectors
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let rows = n_kraus * d;
        let mut cols: Vec<Vec<Complex64>> = Vec::new();
        while cols.len() < d {
            let mut v: Vec<Complex64> = (0..rows).map(|_| c(next(), next())).collect();
            for u in &cols {
                let ip: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u.iter()) {
                    *x -= ip * y;
                }
            }
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                continue;
            }
            for x in v.iter_mut() {
                *x /= norm;
            }
            cols.push(v);
        }
        let ks: Vec<ComplexMatrix> = (0..n_kraus)
            .map(|i| ComplexMatrix::from_fn(d, d, |b, a| cols[a][i * d + b]))
            .collect();
        KrausChannel::new(ks).unwrap()
    }

    #[test]
    fn builtin_channels_are_cptp() {
        for (name, p) in [
            ("identity", vec![]),
            ("depolarizing", vec![0.3]),
            ("dephasing", vec![0.3]),
            ("amplitude_damping", vec![0.1]),
            ("unitary_rz", vec![1.2]),
        ] {
            builtin_channel(name, &p).unwrap();
        }
        assert!(matches!(
            builtin_channel("bogus", &[]),
            Err(Error::UnknownChannel(_))
        ));
        assert!(matches!(
            builtin_channel("dephasing", &[1.5]),
            Err(Error::InvalidParam(_))
        ));
    }

    #[test]
    fn depolarizing_p0_is_identity() {
        let ch = builtin_channel("depolarizing", &[0.0]).unwrap();
        let rho = ComplexMatrix::from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]]);
        assert!((&ch.apply(&rho) - &rho).frobenius_norm() < 1e-12);
    }

    #[test]
    fn dephasing_q1_is_z_conjugation() {
        let ch = builtin_channel("dephasing", &[1.0]).unwrap();
        let rho = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let z = pauli('z');
        let expect = &(&z * &rho) * &z.dagger();
        assert!((&ch.apply(&rho) - &expect).frobenius_norm() < 1e-12);
    }

    #[test]
    fn choi_of_identity_is_gamma_projector() {
        let ch = builtin_channel("identity", &[]).unwrap();
        let choi = choi_of_channel(&ch).unwrap();
        let eig = eig_hermitian(choi.matrix()).unwrap();
        assert!((choi.matrix().trace().re - 2.0).abs() < 1e-12);
        assert!((eig.max_eigenvalue() - 2.0).abs() < 1e-10);
        assert!(eig.eigenvalues[..3].iter().all(|l| l.abs() < 1e-10));
    }

    #[test]
    fn choi_of_depolarizing_is_maximally_mixed() {
        let ch = builtin_channel("depolarizing", &[1.0]).unwrap();
        let choi = choi_of_channel(&ch).unwrap();
        let expect = ComplexMatrix::identity(4).scale_re(0.5);
        assert!((choi.matrix() - &expect).frobenius_norm() < 1e-12);
    }

    #[test]
    fn dephasing_choi_eigenvalues_match_kraus_weights() {
        let ch = builtin_channel("dephasing", &[0.3]).unwrap();
        let choi = choi_of_channel(&ch).unwrap();
        let eig = eig_hermitian(choi.matrix()).unwrap();
        let top: Vec<f64> = eig.eigenvalues.iter().rev().take(2).copied().collect();
        assert!((top[0] - 1.4).abs() < 1e-10);
        assert!((top[1] - 0.6).abs() < 1e-10);
    }

    #[test]
    fn canonical_kraus_roundtrip() {
        for seed in [1u64, 2, 3] {
            let ch = random_channel(2, 3, seed);
            let choi = choi_of_channel(&ch).unwrap();
            let canon = canonical_kraus(&choi).unwrap();
            assert_eq!(canon.kraus().len(), 4);
            let choi2 = choi_of_channel(&canon).unwrap();
            assert!((choi.matrix() - choi2.matrix()).frobenius_norm() < 1e-8);
        }
        // and a qutrit-input channel
        let ch = random_channel(3, 2, 9);
        let choi = choi_of_channel(&ch).unwrap();
        let canon = canonical_kraus(&choi).unwrap();
        let choi2 = choi_of_channel(&canon).unwrap();
        assert!((choi.matrix() - choi2.matrix()).frobenius_norm() < 1e-8);
    }

    #[test]
    fn canonical_kraus_of_dephasing() {
        let ch = builtin_channel("dephasing", &[0.3]).unwrap();
        let canon = canonical_kraus(&choi_of_channel(&ch).unwrap()).unwrap();
        let n0 = canon.kraus()[0].frobenius_norm();
        assert!((n0 * n0 - 2.0 * 0.7).abs() < 1e-10);
        assert!(canon.kraus()[2].frobenius_norm() < 1e-12);
        assert!(canon.kraus()[3].frobenius_norm() < 1e-12);
    }

    #[test]
    fn isometric_extension_requires_padding() {
        let ch = builtin_channel("dephasing", &[0.3]).unwrap();
        assert!(matches!(
            isometric_extension(&ch),
            Err(Error::KrausCountMismatch { expected: 4, got: 2 })
        ));
        let canonical = canonical_kraus(&choi_of_channel(&ch).unwrap()).unwrap();
        let iso = isometric_extension(&canonical).unwrap();
        let dev = (&(&iso.matrix().dagger() * iso.matrix()) - &ComplexMatrix::identity(2))
            .frobenius_norm();
        assert!(dev < 1e-10);
    }

    #[test]
    fn isometry_reproduces_channel_action() {
        let ch = random_channel(2, 2, 17);
        let iso = canonical_isometry(&ch).unwrap();
        let psi = ComplexMatrix::col_vec(&[c(0.6, 0.1), c(0.2, -0.76)]);
        let psi = psi.scale_re(1.0 / psi.frobenius_norm());
        let rho = psi.outer(&psi);
        assert!((&iso.apply(&rho) - &ch.apply(&rho)).frobenius_norm() < 1e-9);
    }

    #[test]
    fn family_derivative_matches_finite_difference() {
        let h = 1e-5;
        for (name, theta) in [
            ("dephasing", 0.25),
            ("amplitude_damping", 0.1),
            ("depolarizing", 0.35),
            ("unitary_rz", 0.9),
        ] {
            let fam = builtin_family(name).unwrap();
            let dks = fam.dkraus_at(theta).unwrap();
            let kp = fam.kraus_at(theta + h).unwrap();
            let km = fam.kraus_at(theta - h).unwrap();
            for (i, dk) in dks.iter().enumerate() {
                let fd = (&kp.kraus()[i] - &km.kraus()[i]).scale_re(0.5 / h);
                let rel = (&fd - dk).frobenius_norm() / dk.frobenius_norm().max(1e-12);
                assert!(rel < 1e-6, "{name} Kraus {i}: rel dev {rel}");
            }
        }
    }

    #[test]
    fn rz_family_derivative_is_generator_action() {
        let fam = builtin_family("unitary_rz").unwrap();
        let t = 0.6;
        let (iso, dv) = family_isometry_and_derivative(&fam, t).unwrap();
        // dV = (-i Z/2 ⊗ padding) V on the first block
        let gen = pauli('z').scale(c(0.0, -0.5));
        let u = rz_unitary(t);
        let expect_block = &gen * &u;
        for b in 0..2 {
            for a in 0..2 {
                assert!((dv[(b, a)] - expect_block[(b, a)]).norm() < 1e-12);
            }
        }
        assert_eq!(iso.d_env(), 4);
    }

    #[test]
    fn dephasing_family_derivative_values() {
        let fam = builtin_family("dephasing").unwrap();
        let dks = fam.dkraus_at(0.25).unwrap();
        let expect0 = ComplexMatrix::identity(2).scale_re(-0.5 / 0.75f64.sqrt());
        let expect1 = pauli('z').scale_re(1.0);
        assert!((&dks[0] - &expect0).frobenius_norm() < 1e-12);
        assert!((&dks[1] - &expect1).frobenius_norm() < 1e-12);
    }

    #[test]
    fn family_domain_is_enforced() {
        let fam = builtin_family("dephasing").unwrap();
        assert!(matches!(
            fam.kraus_at(1.5),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(fam.kraus_at(0.0), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn channel_spec_json() {
        let spec = ChannelSpec::parse(r#"{"kind": "dephasing", "params": [0.3]}"#).unwrap();
        spec.to_channel().unwrap();

        let spec = ChannelSpec::parse(
            r#"{"kraus": [[[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[0,0],[1,0]]]]}"#,
        )
        .unwrap();
        let ch = spec.to_channel().unwrap();
        assert_eq!(ch.kraus().len(), 2);

        let spec = ChannelSpec::parse(r#"{"kind": "dephasing", "theta_domain": [0.1, 0.9]}"#).unwrap();
        let fam = spec.to_family().unwrap();
        assert_eq!(fam.theta_domain(), (0.1, 0.9));
        assert!(ChannelSpec::parse("{").is_err());
    }
}
