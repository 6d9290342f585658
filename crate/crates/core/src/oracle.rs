//! Independent references used to validate the SDP bounds: exact
//! diamond-norm error probabilities at one or two queries, probe-sampling
//! extrema for channel fidelity and Fisher information, and
//! finite-difference consistency checks. Sampling is seeded and chunked so
//! fixed seeds reproduce bit-identical reports regardless of thread count.

use crate::channel::{ChannelFamily, KrausChannel};
use crate::channel_metrics::{bures_sq_channels, ChannelPair};
use crate::error::{Error, Result};
use crate::matrix::{c, eig_hermitian, ComplexMatrix};
use crate::sdp::{AffineMatrixExpr, SdpProblem, SolveStatusKind};
use crate::state_metrics::{self, DensityOperator};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Reproducible record of an oracle computation.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub quantity: String,
    pub value: f64,
    pub method: String,
    pub samples: u64,
    pub seed: u64,
    /// Auxiliary series (for finite-difference reports: one entry per step).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<(f64, f64)>,
}

const DIAMOND_DIM_CAP: usize = 16;

/// Exact diamond norm of p N1^⊗n - q N2^⊗n for n <= 2, from the standard
/// density-operator-pinned SDP over the Choi matrix. Total input dimension
/// is capped at 16.
pub fn diamond_norm_exact(
    p: f64,
    ch1: &KrausChannel,
    q: f64,
    ch2: &KrausChannel,
    n: usize,
) -> Result<f64> {
    if !(1..=2).contains(&n) {
        return Err(Error::TooLarge(format!("exact diamond norm supports n in {{1, 2}}, got {n}")));
    }
    if ch1.d_in() != ch2.d_in() || ch1.d_out() != ch2.d_out() {
        return Err(Error::ShapeError("channel shapes differ".into()));
    }
    let d_in = ch1.d_in().pow(n as u32);
    let d_out = ch1.d_out().pow(n as u32);
    if d_in > DIAMOND_DIM_CAP {
        return Err(Error::TooLarge(format!(
            "total input dimension {d_in} exceeds cap {DIAMOND_DIM_CAP}"
        )));
    }
    let t1 = ch1.tensor_power(n)?;
    let t2 = ch2.tensor_power(n)?;

    // Choi with the input copy first: J = sum_{a,a'} |a><a'| ⊗ Delta(|a><a'|)
    let mut j = ComplexMatrix::zeros(d_in * d_out, d_in * d_out);
    for a in 0..d_in {
        for ap in 0..d_in {
            let mut e = ComplexMatrix::zeros(d_in, d_in);
            e[(a, ap)] = c(1.0, 0.0);
            let out = &t1.apply(&e).scale_re(p) - &t2.apply(&e).scale_re(q);
            for i in 0..d_out {
                for k in 0..d_out {
                    j[(a * d_out + i, ap * d_out + k)] = out[(i, k)];
                }
            }
        }
    }

    // max Re Tr[X^dag J] s.t. [[rho0 ⊗ I, X], [X^dag, rho1 ⊗ I]] >= 0,
    // rho0, rho1 density operators.
    let d = d_in * d_out;
    let mut prob = SdpProblem::new();
    let x = prob.add_complex(d, d);
    let r0 = prob.add_hermitian(d_in);
    let r1 = prob.add_hermitian(d_in);
    let xe = prob.var_expr(x);
    let r0e = prob.var_expr(r0).kron_id_right(d_out);
    let r1e = prob.var_expr(r1).kron_id_right(d_out);
    prob.add_psd(AffineMatrixExpr::block2x2(&r0e, &xe, &xe.dagger(), &r1e));
    // unit traces via scalar equalities picking diagonal entries
    for rid in [r0, r1] {
        let re = prob.var_expr(rid);
        let mut tr = AffineMatrixExpr::constant(ComplexMatrix::identity(1).scale_re(-1.0));
        for i in 0..d_in {
            let mut sel = ComplexMatrix::zeros(1, d_in);
            sel[(0, i)] = c(1.0, 0.0);
            tr = &tr + &re.sandwich(&sel, &sel.dagger());
        }
        prob.add_eq_zero(tr);
    }
    // objective Re Tr[X^dag J] = sum_ij Re(conj(X_ij) J_ij): linear in X params.
    // encode through a scalar t = Re Tr[X^dag J] and minimize -t.
    let t = prob.add_scalar();
    prob.set_objective(&[(t, -1.0)]);
    let mut lin = prob.scalar_identity(t, 1);
    for i in 0..d {
        let mut sel_i = ComplexMatrix::zeros(1, d);
        sel_i[(0, i)] = c(1.0, 0.0);
        for k in 0..d {
            let z = j[(i, k)];
            if z.norm_sqr() < 1e-30 {
                continue;
            }
            let mut sel_k = ComplexMatrix::zeros(d, 1);
            sel_k[(k, 0)] = c(1.0, 0.0);
            // Re[conj(X_ik) J_ik] = Re[J_ik * conj(X_ik)]
            let entry = xe.sandwich(&sel_i, &sel_k); // 1x1 expr holding X_ik
            let contrib = &entry.dagger().scale(z).re() - &AffineMatrixExpr::zeros(1, 1);
            lin = &lin - &contrib;
        }
    }
    prob.add_eq_zero(lin);

    let sol = prob.solve(1e-9)?;
    if sol.status != SolveStatusKind::Optimal {
        return Err(Error::SolverFailure(format!(
            "diamond-norm SDP returned {}",
            sol.status
        )));
    }
    Ok(-sol.objective_value)
}

/// Exact minimum discrimination error probability at n parallel queries,
/// (1 - ||p N1^⊗n - q N2^⊗n||_diamond) / 2.
pub fn exact_error_prob(
    p: f64,
    ch1: &KrausChannel,
    q: f64,
    ch2: &KrausChannel,
    n: usize,
) -> Result<f64> {
    let dn = diamond_norm_exact(p, ch1, q, ch2, n)?;
    Ok(0.5 * (1.0 - dn))
}

const CHUNK: u64 = 4096;

fn haar_state(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let mut v = Vec::with_capacity(dim);
    // Box-Muller on uniform draws keeps the dependency surface small
    let mut gauss = || {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    };
    for _ in 0..dim {
        let re = gauss();
        let im = gauss();
        v.push(c(re, im));
    }
    let m = ComplexMatrix::col_vec(&v);
    m.scale_re(1.0 / m.frobenius_norm())
}

fn chunked_extremum(
    samples: u64,
    seed: u64,
    take_max: bool,
    eval: impl Fn(&mut ChaCha8Rng, u64) -> f64 + Sync,
) -> f64 {
    let chunks: Vec<u64> = (0..samples.div_ceil(CHUNK)).collect();
    let reduce = |a: f64, b: f64| if take_max { a.max(b) } else { a.min(b) };
    let init = if take_max { f64::NEG_INFINITY } else { f64::INFINITY };
    chunks
        .par_iter()
        .map(|&chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk + 1);
            let lo = chunk * CHUNK;
            let hi = ((chunk + 1) * CHUNK).min(samples);
            let mut best = init;
            for k in lo..hi {
                best = reduce(best, eval(&mut rng, k));
            }
            best
        })
        .reduce(|| init, reduce)
}

/// Fisher information of the output family (id ⊗ N_theta)(psi) for a fixed
/// pure probe, with the spectral sum restricted to the numerical support.
fn probe_output_fisher(
    ks: &[ComplexMatrix],
    dks: &[ComplexMatrix],
    d_ref: usize,
    psi: &ComplexMatrix,
) -> f64 {
    let id = ComplexMatrix::identity(d_ref);
    let proj = psi.outer(psi);
    let d_out = ks[0].rows();
    let dim = d_ref * d_out;
    let mut rho = ComplexMatrix::zeros(dim, dim);
    let mut drho = ComplexMatrix::zeros(dim, dim);
    for (k, dk) in ks.iter().zip(dks.iter()) {
        let kk = id.kron(k);
        let dkk = id.kron(dk);
        rho = &rho + &(&(&kk * &proj) * &kk.dagger());
        drho = &drho + &(&(&dkk * &proj) * &kk.dagger());
        drho = &drho + &(&(&kk * &proj) * &dkk.dagger());
    }
    let eig = match eig_hermitian(&rho.hermitian_part()) {
        Ok(e) => e,
        Err(_) => return 0.0,
    };
    state_metrics::fisher_from_spectrum(&eig, &drho.hermitian_part(), 1e-12)
}

/// Maximum output-state SLD Fisher information over Haar-random pure probes
/// (reference of the same dimension as the channel input). A lower bound on
/// the channel Fisher information that converges to it as samples grow.
pub fn probe_fisher_max(
    fam: &ChannelFamily,
    theta: f64,
    samples: u64,
    seed: u64,
) -> Result<OracleReport> {
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let ch = fam.kraus_at(theta)?;
    let dks = fam.dkraus_at(theta)?;
    if ch.d_in() > 3 {
        return Err(Error::TooLarge(
            "probe sampling is wired for qubit/qutrit inputs".into(),
        ));
    }
    let d_ref = ch.d_in();
    let ks = ch.kraus().to_vec();
    let dim = d_ref * ch.d_in();
    let value = chunked_extremum(samples, seed, true, |rng, _| {
        let psi = haar_state(rng, dim);
        probe_output_fisher(&ks, &dks, d_ref, &psi)
    });
    Ok(OracleReport {
        quantity: format!("probe_fisher_max(theta={theta})"),
        value,
        method: "max over Haar-random pure probes of output-state SLD Fisher".into(),
        samples,
        seed,
        series: Vec::new(),
    })
}

/// Minimum output root fidelity over Haar-random pure probes: an upper
/// bound on the channel root fidelity converging to it from above.
pub fn probe_fidelity_min(
    ch1: &KrausChannel,
    ch2: &KrausChannel,
    samples: u64,
    seed: u64,
) -> Result<OracleReport> {
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    if ch1.d_in() != ch2.d_in() || ch1.d_out() != ch2.d_out() {
        return Err(Error::ShapeError("channel shapes differ".into()));
    }
    let d_ref = ch1.d_in();
    let dim = d_ref * ch1.d_in();
    let value = chunked_extremum(samples, seed, false, |rng, _| {
        let psi = haar_state(rng, dim);
        let proj = psi.outer(&psi);
        let o1 = ch1.apply_with_reference(d_ref, &proj);
        let o2 = ch2.apply_with_reference(d_ref, &proj);
        match (DensityOperator::new(o1.hermitian_part()), DensityOperator::new(o2.hermitian_part())) {
            (Ok(r), Ok(s)) => state_metrics::root_fidelity_states(&r, &s).unwrap_or(1.0),
            _ => 1.0,
        }
    });
    Ok(OracleReport {
        quantity: "probe_fidelity_min".into(),
        value,
        method: "min over Haar-random pure probes of output root fidelity".into(),
        samples,
        seed,
        series: Vec::new(),
    })
}

/// Finite-difference consistency sequence 4 d_B^2(theta, theta+delta) /
/// delta^2 for a channel family, one entry per requested step. The reported
/// value is the estimate at the smallest step.
pub fn finite_diff_bures_fisher(
    fam: &ChannelFamily,
    theta: f64,
    deltas: &[f64],
    tol: f64,
) -> Result<OracleReport> {
    if deltas.is_empty() || deltas.iter().any(|&d| d <= 0.0 || d > 0.1) {
        return Err(Error::InvalidInput(
            "finite-difference steps must lie in (0, 0.1]".into(),
        ));
    }
    let mut series = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let pair = ChannelPair::from_family(fam, theta, theta + delta)?;
        let d2 = bures_sq_channels(&pair, tol)?.value;
        series.push((delta, 4.0 * d2 / (delta * delta)));
    }
    let mut sorted = series.clone();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let value = sorted[0].1;
    Ok(OracleReport {
        quantity: format!("finite_diff_bures_fisher(theta={theta})"),
        value,
        method: "4 d_B^2(theta, theta+delta) / delta^2 via the Bures SDP".into(),
        samples: deltas.len() as u64,
        seed: 0,
        series,
    })
}

/// Same consistency sequence for a state family, using the closed-form
/// Bures distance of states.
pub fn finite_diff_bures_fisher_states(
    fam: &state_metrics::StateFamily,
    theta: f64,
    deltas: &[f64],
) -> Result<OracleReport> {
    if deltas.is_empty() || deltas.iter().any(|&d| d <= 0.0 || d > 0.1) {
        return Err(Error::InvalidInput(
            "finite-difference steps must lie in (0, 0.1]".into(),
        ));
    }
    let mut series = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let d = state_metrics::bures_distance_states(
            &fam.rho_at(theta)?,
            &fam.rho_at(theta + delta)?,
        )?;
        series.push((delta, 4.0 * d * d / (delta * delta)));
    }
    let mut sorted = series.clone();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let value = sorted[0].1;
    Ok(OracleReport {
        quantity: format!("finite_diff_bures_fisher_states(theta={theta})"),
        value,
        method: "4 d_B^2(theta, theta+delta) / delta^2 via state fidelity".into(),
        samples: deltas.len() as u64,
        seed: 0,
        series,
    })
}

/// Maximum relative deviation of the family's analytic derivative Kraus
/// operators from the central finite difference at step h.
pub fn finite_diff_kraus(fam: &ChannelFamily, theta: f64, h: f64) -> Result<f64> {
    if !(1e-7..=1e-3).contains(&h) {
        return Err(Error::InvalidInput("step must lie in [1e-7, 1e-3]".into()));
    }
    let dks = fam.dkraus_at(theta)?;
    let kp = fam.kraus_at(theta + h)?;
    let km = fam.kraus_at(theta - h)?;
    let mut worst: f64 = 0.0;
    for (i, dk) in dks.iter().enumerate() {
        let fd = (&kp.kraus()[i] - &km.kraus()[i]).scale_re(0.5 / h);
        let scale = dk.frobenius_norm().max(1e-12);
        worst = worst.max((&fd - dk).frobenius_norm() / scale);
    }
    Ok(worst)
}

/// Convex-hull distance oracle for a pair of unitary channels: the root
/// fidelity equals the distance from the origin to the convex hull of the
/// eigenvalues of U1^dag U2, here minimized over a probability simplex
/// sample plus the analytic two-point chord.
pub fn unitary_pair_root_fidelity(u1: &ComplexMatrix, u2: &ComplexMatrix) -> Result<f64> {
    let prod = &u1.dagger() * u2;
    // U is normal, so its Hermitian and anti-Hermitian parts commute and a
    // generic real combination of them shares U's eigenbasis. Conjugate
    // eigenphase pairs make either part alone degenerate, so try a few
    // mixing angles until the off-diagonal mass vanishes.
    let d = prod.rows();
    let re = prod.hermitian_part();
    let im = (&prod - &prod.dagger()).scale(c(0.0, -0.5));
    let mut phases: Option<Vec<Complex64>> = None;
    for gamma in [0.739_085_133_215_160_7, 0.318_309_886_183_790_7, 1.234_567_9] {
        let g = &re + &im.scale_re(gamma);
        let eig = eig_hermitian(&g)?;
        let v = &eig.eigenvectors;
        let in_basis = &(&v.dagger() * &prod) * v;
        let off: f64 = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .map(|(i, j)| in_basis[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() < 1e-9 {
            phases = Some((0..d).map(|i| in_basis[(i, i)]).collect());
            break;
        }
    }
    let phases = phases.ok_or_else(|| {
        Error::InvalidInput("could not find a joint eigenbasis; input not unitary?".into())
    })?;
    // distance from 0 to the convex hull of the (unit-modulus) phases
    let mut best = f64::INFINITY;
    for i in 0..d {
        best = best.min(phases[i].norm());
        for j in (i + 1)..d {
            // closest point on the chord between phases i and j
            let a = phases[i];
            let b = phases[j];
            let ab = b - a;
            let denom = ab.norm_sqr();
            if denom < 1e-30 {
                continue;
            }
            let t = (-(a.re * ab.re + a.im * ab.im) / denom).clamp(0.0, 1.0);
            best = best.min((a + ab.scale(t)).norm());
        }
    }
    // interior of the hull: check 0 against all triangles
    'outer: for i in 0..d {
        for j in (i + 1)..d {
            for k in (j + 1)..d {
                if triangle_contains_origin(phases[i], phases[j], phases[k]) {
                    best = 0.0;
                    break 'outer;
                }
            }
        }
    }
    Ok(best.clamp(0.0, 1.0))
}

fn triangle_contains_origin(a: Complex64, b: Complex64, z: Complex64) -> bool {
    let cross = |p: Complex64, q: Complex64| p.re * q.im - p.im * q.re;
    let d1 = cross(b - a, -a);
    let d2 = cross(z - b, -b);
    let d3 = cross(a - z, -z);
    let has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(has_neg && has_pos)
}
