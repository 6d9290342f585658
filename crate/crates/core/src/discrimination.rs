//! Error-probability floors and query-complexity lower bounds for binary
//! channel discrimination, in both access models: the trivial-case test,
//! the closed-form bounds from the quadratic lemma, the fidelity-based
//! search ceiling n_max, and the binary-search algorithms over the
//! monotone predicate n g(n) >= threshold.

use crate::channel_metrics::{
    adaptive_bures_bound, bures_sq_channels, pair_sql_denominator, parallel_bures_bound,
    root_fidelity_channels, BoundReport, ChannelPair, ConstrainedInfimum, Witness,
};
use crate::error::{Error, Result};
use crate::sdp::DEFAULT_TOL;
use std::collections::BTreeMap;

/// Parallel (tensor-power) or adaptive (interleaved) channel access.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AccessMode {
    Parallel,
    Adaptive,
}

impl std::fmt::Display for AccessMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AccessMode::Parallel => "parallel",
            AccessMode::Adaptive => "adaptive",
        })
    }
}

/// A binary discrimination instance: channel pair, prior p for the first
/// channel, and the error threshold the query complexity refers to.
#[derive(Clone, Debug)]
pub struct DiscriminationInstance {
    pub pair: ChannelPair,
    pub p: f64,
    pub epsilon: f64,
    pub tol: f64,
}

impl DiscriminationInstance {
    pub fn new(pair: ChannelPair, p: f64, epsilon: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidInput(format!("prior p={p} must lie in (0, 1)")));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidInput(format!(
                "threshold epsilon={epsilon} must lie in [0, 1]"
            )));
        }
        Ok(Self {
            pair,
            p,
            epsilon,
            tol: DEFAULT_TOL,
        })
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    /// Threshold t = 1 - eps(1-eps)/(p q) appearing in every bound.
    pub fn threshold(&self) -> f64 {
        1.0 - self.epsilon * (1.0 - self.epsilon) / (self.p * self.q())
    }
}

/// Lower bound on query complexity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryLowerBound {
    /// The single-query trivial case applies.
    Trivial,
    Finite(u64),
    /// No finite number of queries meets the threshold.
    Infinite,
}

impl QueryLowerBound {
    pub fn as_finite(&self) -> Option<u64> {
        match self {
            QueryLowerBound::Finite(n) => Some(*n),
            QueryLowerBound::Trivial => Some(1),
            QueryLowerBound::Infinite => None,
        }
    }
}

impl std::fmt::Display for QueryLowerBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QueryLowerBound::Trivial => f.write_str("1 (trivial)"),
            QueryLowerBound::Finite(n) => write!(f, "{n}"),
            QueryLowerBound::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    TrivialCase,
    ClosedFormHeis,
    ClosedFormSql,
    BinarySearch,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::TrivialCase => "trivial_case",
            Method::ClosedFormHeis => "closed_form_heis",
            Method::ClosedFormSql => "closed_form_sql",
            Method::BinarySearch => "binary_search",
        })
    }
}

/// Search diagnostics carried by every query-bound result.
#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub n_max: Option<u64>,
    pub n_max_capped: bool,
    pub sdp_probes: usize,
    pub g_values: Vec<(u64, f64)>,
    pub sql_denominator: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct QueryBoundResult {
    pub bound: QueryLowerBound,
    pub mode: AccessMode,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

/// Single-query trivial cases: threshold at or above the smaller prior, or
/// channels with vanishing root fidelity (one query already separates some
/// pure input's outputs).
pub fn trivial_case_check(inst: &DiscriminationInstance) -> Result<Option<QueryBoundResult>> {
    if inst.epsilon >= inst.p.min(inst.q()) {
        return Ok(Some(QueryBoundResult {
            bound: QueryLowerBound::Trivial,
            mode: AccessMode::Parallel,
            method: Method::TrivialCase,
            diagnostics: Diagnostics::default(),
        }));
    }
    let rf = root_fidelity_channels(&inst.pair, inst.tol)?;
    if rf.value <= 1e-9 {
        return Ok(Some(QueryBoundResult {
            bound: QueryLowerBound::Trivial,
            mode: AccessMode::Parallel,
            method: Method::TrivialCase,
            diagnostics: Diagnostics::default(),
        }));
    }
    Ok(None)
}

fn bures_bound_value(pair: &ChannelPair, n: u64, mode: AccessMode, tol: f64) -> Result<BoundReport> {
    match mode {
        AccessMode::Parallel => parallel_bures_bound(pair, n, tol),
        AccessMode::Adaptive => adaptive_bures_bound(pair, n, tol),
    }
}

/// Smallest error probability consistent with the n-query bound: the lower
/// root of p_e (1 - p_e) >= p q (1 - B(n)), clamped to [0, min(p, q)];
/// zero when the bound is vacuous (B(n) >= 1).
pub fn error_prob_floor(pair: &ChannelPair, n: u64, p: f64, mode: AccessMode, tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("query count must be >= 1".into()));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidInput("prior must lie in (0, 1)".into()));
    }
    let q = 1.0 - p;
    let b = bures_bound_value(pair, n, mode, tol)?.value;
    if b >= 1.0 {
        return Ok(0.0);
    }
    let disc = 1.0 - 4.0 * p * q * (1.0 - b);
    Ok(0.5 * (1.0 - disc.max(0.0).sqrt()))
}

const CEIL_NUDGE: f64 = 1e-9;

fn nudged_ceil(x: f64) -> u64 {
    (x - CEIL_NUDGE).ceil().max(1.0) as u64
}

/// Minimal integer n with n (a + (n-1) b') >= c, where b' = b in the
/// parallel mode and b' = sqrt(a b) in the adaptive mode. Requires
/// a >= b >= 0 and c >= 0; a = 0 with c > 0 has no finite solution.
pub fn quadratic_min_n(a: f64, b: f64, c: f64, mode: AccessMode) -> Result<u64> {
    if !(a >= 0.0 && b >= 0.0 && c >= 0.0) || b > a + 1e-12 {
        return Err(Error::InvalidInput(format!(
            "quadratic_min_n needs a >= b >= 0 and c >= 0 (a={a}, b={b}, c={c})"
        )));
    }
    if c <= 0.0 {
        return Ok(1);
    }
    let beff = match mode {
        AccessMode::Parallel => b,
        AccessMode::Adaptive => (a * b).sqrt(),
    };
    if beff > 0.0 {
        let root = (beff - a + ((beff - a).powi(2) + 4.0 * beff * c).sqrt()) / (2.0 * beff);
        Ok(nudged_ceil(root))
    } else if a > 0.0 {
        Ok(nudged_ceil(c / a))
    } else {
        Err(Error::NoFiniteN)
    }
}

/// Fidelity-based ceiling on the query complexity:
/// n_max = ceil(ln(sqrt(pq)/eps) / (-ln sqrt(F))). Infinite when the root
/// fidelity is one; for eps = 0 the ceiling is capped at 2^16 (flagged in
/// the diagnostics) so the search range stays finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NMax {
    Finite(u64),
    FiniteCapped(u64),
    Infinite,
}

pub fn n_max_upper(inst: &DiscriminationInstance) -> Result<NMax> {
    let rf = root_fidelity_channels(&inst.pair, inst.tol)?.value;
    if rf >= 1.0 - 1e-8 {
        return Ok(NMax::Infinite);
    }
    if inst.epsilon <= 0.0 {
        return Ok(NMax::FiniteCapped(1 << 16));
    }
    let numer = ((inst.p * inst.q()).sqrt() / inst.epsilon).ln();
    if numer <= 0.0 {
        return Ok(NMax::Finite(1));
    }
    if rf <= 1e-12 {
        return Ok(NMax::Finite(1));
    }
    let denom = -rf.ln();
    Ok(NMax::Finite(nudged_ceil(numer / denom)))
}

/// Closed-form query-complexity lower bound: the best of (i) the quadratic
/// formula evaluated at the certified (a_W, b_W) terms of the single-query
/// and two-query optimizing contractions (any contraction yields a valid
/// bound) and (ii) the equality-constrained diagonal form with the
/// M_W = I infimum in the denominator when feasible.
pub fn query_lower_closed_form(
    inst: &DiscriminationInstance,
    mode: AccessMode,
) -> Result<QueryBoundResult> {
    let t = inst.threshold();
    let mut diagnostics = Diagnostics::default();
    let mut best: u64 = 1;
    let mut method = Method::ClosedFormHeis;
    let mut infinite = false;

    // candidate contractions: the single-query optimizer and the n = 2
    // joint optimizer trade tightness between the a and b terms
    let mut witnesses: Vec<BoundReport> = Vec::new();
    witnesses.push(bures_sq_channels(&inst.pair, inst.tol)?);
    witnesses.push(bures_bound_value(&inst.pair, 2, mode, inst.tol)?);
    diagnostics.sdp_probes += 2;
    for rep in &witnesses {
        let (a, b) = match &rep.witness {
            Witness::Contraction { a, b, .. } => (*a, *b),
            Witness::Hamiltonian { a, b, .. } => (*a, *b),
        };
        match quadratic_min_n(a, b.min(a), t, mode) {
            Ok(n) => {
                if n > best {
                    best = n;
                    method = Method::ClosedFormHeis;
                }
            }
            Err(Error::NoFiniteN) => infinite = true,
            Err(e) => return Err(e),
        }
    }

    match pair_sql_denominator(&inst.pair, inst.tol)? {
        ConstrainedInfimum::Feasible(rep) => {
            diagnostics.sql_denominator = Some(rep.value);
            diagnostics.sdp_probes += 1;
            if rep.value <= 1e-12 {
                if t > 0.0 {
                    infinite = true;
                    method = Method::ClosedFormSql;
                }
            } else {
                let n = nudged_ceil(t / rep.value);
                if n > best {
                    best = n;
                    method = Method::ClosedFormSql;
                }
            }
        }
        ConstrainedInfimum::Infeasible => {}
    }

    Ok(QueryBoundResult {
        bound: if infinite {
            QueryLowerBound::Infinite
        } else {
            QueryLowerBound::Finite(best)
        },
        mode,
        method,
        diagnostics,
    })
}

/// Memoizing evaluator for the per-query bound value g(n) (the n-query
/// bound divided by n), counting SDP probes.
struct GCache<'a> {
    inst: &'a DiscriminationInstance,
    mode: AccessMode,
    cache: BTreeMap<u64, f64>,
    probes: usize,
}

impl<'a> GCache<'a> {
    fn g(&mut self, n: u64) -> Result<f64> {
        if let Some(&v) = self.cache.get(&n) {
            return Ok(v);
        }
        let rep = bures_bound_value(&self.inst.pair, n, self.mode, self.inst.tol)?;
        let v = rep.value / n as f64;
        self.cache.insert(n, v);
        self.probes += 1;
        Ok(v)
    }

    fn predicate(&mut self, n: u64, threshold: f64) -> Result<bool> {
        Ok(n as f64 * self.g(n)? >= threshold - CEIL_NUDGE)
    }
}

fn binary_search(inst: &DiscriminationInstance, mode: AccessMode) -> Result<QueryBoundResult> {
    if let Some(trivial) = trivial_case_check(inst)? {
        return Ok(QueryBoundResult { mode, ..trivial });
    }
    let t = inst.threshold();
    let (n_max, capped) = match n_max_upper(inst)? {
        NMax::Infinite => {
            // record whether the identical-looking direction is certified
            let sql = match pair_sql_denominator(&inst.pair, inst.tol)? {
                ConstrainedInfimum::Feasible(rep) => Some(rep.value),
                ConstrainedInfimum::Infeasible => None,
            };
            return Ok(QueryBoundResult {
                bound: QueryLowerBound::Infinite,
                mode,
                method: Method::BinarySearch,
                diagnostics: Diagnostics {
                    n_max: None,
                    sql_denominator: sql,
                    ..Diagnostics::default()
                },
            });
        }
        NMax::Finite(n) => (n, false),
        NMax::FiniteCapped(n) => (n, true),
    };

    let mut gc = GCache {
        inst,
        mode,
        cache: BTreeMap::new(),
        probes: 0,
    };
    let mut lo = 1u64;
    let mut hi = n_max;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if gc.predicate(mid, t)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let bound = QueryLowerBound::Finite(lo);
    Ok(QueryBoundResult {
        bound,
        mode,
        method: Method::BinarySearch,
        diagnostics: Diagnostics {
            n_max: Some(n_max),
            n_max_capped: capped,
            sdp_probes: gc.probes,
            g_values: gc.cache.into_iter().collect(),
            sql_denominator: None,
        },
    })
}

/// Binary search for the smallest n in [1, n_max] with
/// n g(n) >= 1 - eps(1-eps)/(pq), where g is the parallel per-query bound.
/// O(log n_max) SDP solves; equals the linear scan of the same predicate.
pub fn binary_search_parallel(inst: &DiscriminationInstance) -> Result<QueryBoundResult> {
    binary_search(inst, AccessMode::Parallel)
}

/// Adaptive-mode binary search; the per-query value uses the geometric-mean
/// bound, so the result never exceeds the parallel one.
pub fn binary_search_adaptive(inst: &DiscriminationInstance) -> Result<QueryBoundResult> {
    binary_search(inst, AccessMode::Adaptive)
}

/// Reference linear scan over the same predicate (for validation).
pub fn linear_scan_query_bound(
    inst: &DiscriminationInstance,
    mode: AccessMode,
) -> Result<QueryBoundResult> {
    if let Some(trivial) = trivial_case_check(inst)? {
        return Ok(QueryBoundResult { mode, ..trivial });
    }
    let t = inst.threshold();
    let (n_max, capped) = match n_max_upper(inst)? {
        NMax::Infinite => {
            return Ok(QueryBoundResult {
                bound: QueryLowerBound::Infinite,
                mode,
                method: Method::BinarySearch,
                diagnostics: Diagnostics::default(),
            })
        }
        NMax::Finite(n) => (n, false),
        NMax::FiniteCapped(n) => (n, true),
    };
    let mut gc = GCache {
        inst,
        mode,
        cache: BTreeMap::new(),
        probes: 0,
    };
    let mut found = n_max;
    for n in 1..=n_max {
        if gc.predicate(n, t)? {
            found = n;
            break;
        }
    }
    Ok(QueryBoundResult {
        bound: QueryLowerBound::Finite(found),
        mode,
        method: Method::BinarySearch,
        diagnostics: Diagnostics {
            n_max: Some(n_max),
            n_max_capped: capped,
            sdp_probes: gc.probes,
            g_values: gc.cache.into_iter().collect(),
            sql_denominator: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::builtin_channel;
    use crate::oracle::exact_error_prob;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn pair(a: &str, pa: &[f64], b: &str, pb: &[f64]) -> ChannelPair {
        ChannelPair::new(
            &builtin_channel(a, pa).unwrap(),
            &builtin_channel(b, pb).unwrap(),
        )
        .unwrap()
    }

    fn rz_instance(theta: f64, p: f64, eps: f64) -> DiscriminationInstance {
        DiscriminationInstance::new(pair("identity", &[], "unitary_rz", &[theta]), p, eps).unwrap()
    }

    #[test]
    fn trivial_cases() {
        // eps >= min(p, q)
        let inst = rz_instance(FRAC_PI_2, 0.5, 0.5);
        assert!(trivial_case_check(&inst).unwrap().is_some());
        // perfectly distinguishable in one shot
        let inst = rz_instance(PI, 0.5, 0.0);
        assert!(trivial_case_check(&inst).unwrap().is_some());
        // neither
        let inst = rz_instance(FRAC_PI_2, 0.5, 0.01);
        assert!(trivial_case_check(&inst).unwrap().is_none());
    }

    #[test]
    fn error_floor_identical_channels() {
        let p = pair("dephasing", &[0.3], "dephasing", &[0.3]);
        let floor = error_prob_floor(&p, 5, 0.5, AccessMode::Parallel, DEFAULT_TOL).unwrap();
        assert!((floor - 0.5).abs() < 1e-5, "{floor}");
        let floor = error_prob_floor(&p, 3, 0.2, AccessMode::Parallel, DEFAULT_TOL).unwrap();
        assert!((floor - 0.2).abs() < 1e-5, "{floor}");
    }

    #[test]
    fn error_floor_vacuous_when_bound_large() {
        let p = pair("identity", &[], "unitary_rz", &[2.8]);
        let floor = error_prob_floor(&p, 8, 0.5, AccessMode::Parallel, DEFAULT_TOL).unwrap();
        assert_eq!(floor, 0.0);
    }

    #[test]
    fn error_floor_below_exact_error_probability() {
        let a = builtin_channel("identity", &[]).unwrap();
        let b = builtin_channel("unitary_rz", &[FRAC_PI_4]).unwrap();
        let p = ChannelPair::new(&a, &b).unwrap();
        for n in [1usize, 2] {
            let exact = exact_error_prob(0.5, &a, 0.5, &b, n).unwrap();
            for mode in [AccessMode::Parallel, AccessMode::Adaptive] {
                let floor = error_prob_floor(&p, n as u64, 0.5, mode, DEFAULT_TOL).unwrap();
                assert!(
                    floor <= exact + 1e-6,
                    "n={n} {mode}: floor {floor} > exact {exact}"
                );
            }
        }
    }

    #[test]
    fn quadratic_examples() {
        assert_eq!(quadratic_min_n(1.0, 0.0, 3.0, AccessMode::Parallel).unwrap(), 3);
        assert_eq!(quadratic_min_n(2.0, 1.0, 6.0, AccessMode::Parallel).unwrap(), 2);
        assert_eq!(quadratic_min_n(2.0, 1.0, 0.0, AccessMode::Parallel).unwrap(), 1);
        assert!(matches!(
            quadratic_min_n(0.0, 0.0, 1.0, AccessMode::Parallel),
            Err(Error::NoFiniteN)
        ));
        assert!(quadratic_min_n(1.0, 2.0, 1.0, AccessMode::Parallel).is_err());
    }

    #[test]
    fn quadratic_matches_exhaustive_scan() {
        let mut s = 123456789u64;
        let mut next = move || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let a = next() * 2.0;
            let b = next() * a;
            let c = next() * 50.0;
            for mode in [AccessMode::Parallel, AccessMode::Adaptive] {
                let beff = match mode {
                    AccessMode::Parallel => b,
                    AccessMode::Adaptive => (a * b).sqrt(),
                };
                let formula = match quadratic_min_n(a, b, c, mode) {
                    Ok(n) => n,
                    Err(_) => continue,
                };
                let mut scan = None;
                for n in 1..100_000u64 {
                    if n as f64 * (a + (n - 1) as f64 * beff) >= c {
                        scan = Some(n);
                        break;
                    }
                }
                assert_eq!(Some(formula), scan, "a={a} b={b} c={c} mode={mode:?}");
            }
        }
    }

    #[test]
    fn n_max_examples() {
        // identical channels: infinite
        let inst = DiscriminationInstance::new(
            pair("dephasing", &[0.3], "dephasing", &[0.3]),
            0.5,
            0.1,
        )
        .unwrap();
        assert_eq!(n_max_upper(&inst).unwrap(), NMax::Infinite);

        // sqrt(F) = 1/sqrt(2), eps = 0.1, p = q = 1/2: ceil(ln 5 / (ln 2 / 2)) = 5
        let inst = rz_instance(FRAC_PI_2, 0.5, 0.1);
        assert_eq!(n_max_upper(&inst).unwrap(), NMax::Finite(5));

        // eps = sqrt(pq): numerator zero, floor at 1
        let inst = rz_instance(FRAC_PI_2, 0.5, 0.5);
        assert_eq!(n_max_upper(&inst).unwrap(), NMax::Finite(1));

        // eps = 0: capped range
        let inst = rz_instance(FRAC_PI_2, 0.5, 0.0);
        assert_eq!(n_max_upper(&inst).unwrap(), NMax::FiniteCapped(1 << 16));
    }

    #[test]
    fn closed_form_identical_channels_is_infinite() {
        let inst = DiscriminationInstance::new(
            pair("dephasing", &[0.3], "dephasing", &[0.3]),
            0.5,
            0.1,
        )
        .unwrap();
        let r = query_lower_closed_form(&inst, AccessMode::Parallel).unwrap();
        assert_eq!(r.bound, QueryLowerBound::Infinite);
        assert_eq!(r.method, Method::ClosedFormSql);
    }

    #[test]
    fn closed_form_threshold_at_prior_gives_one() {
        let inst = rz_instance(FRAC_PI_2, 0.5, 0.5);
        let r = query_lower_closed_form(&inst, AccessMode::Parallel).unwrap();
        assert_eq!(r.bound, QueryLowerBound::Finite(1));
    }

    #[test]
    fn closed_form_two_query_case() {
        // perfect discrimination of I vs Rz(pi/2) needs exactly 2 queries;
        // the closed form must land in [1, 2]
        let inst = rz_instance(FRAC_PI_2, 0.5, 0.0);
        for mode in [AccessMode::Parallel, AccessMode::Adaptive] {
            let r = query_lower_closed_form(&inst, mode).unwrap();
            match r.bound {
                QueryLowerBound::Finite(n) => assert!((1..=2).contains(&n), "{mode}: {n}"),
                other => panic!("{mode}: unexpected {other}"),
            }
        }
    }

    #[test]
    fn binary_search_matches_linear_scan() {
        for (theta, eps) in [(FRAC_PI_4, 0.05), (FRAC_PI_2, 0.01), (1.2, 0.02)] {
            let inst = rz_instance(theta, 0.5, eps);
            for mode in [AccessMode::Parallel, AccessMode::Adaptive] {
                let bs = binary_search(&inst, mode).unwrap();
                let ls = linear_scan_query_bound(&inst, mode).unwrap();
                assert_eq!(bs.bound, ls.bound, "theta={theta} eps={eps} {mode}");
                if let Some(n_max) = bs.diagnostics.n_max {
                    let budget = (n_max as f64).log2().ceil() as usize + 1;
                    assert!(
                        bs.diagnostics.sdp_probes <= budget,
                        "probes {} over budget {budget}",
                        bs.diagnostics.sdp_probes
                    );
                }
            }
        }
    }

    #[test]
    fn binary_search_identical_channels_infinite() {
        let inst = DiscriminationInstance::new(
            pair("amplitude_damping", &[0.2], "amplitude_damping", &[0.2]),
            0.5,
            0.1,
        )
        .unwrap();
        let r = binary_search_adaptive(&inst).unwrap();
        assert_eq!(r.bound, QueryLowerBound::Infinite);
        assert!(r.diagnostics.sql_denominator.is_some());
    }

    #[test]
    fn binary_search_predicate_true_at_one() {
        // large angle: one query is already forced by the bound
        let inst = rz_instance(2.9, 0.5, 0.001);
        let r = binary_search_parallel(&inst).unwrap();
        assert_eq!(r.bound, QueryLowerBound::Finite(1));
    }

    #[test]
    fn adaptive_bound_not_above_parallel_bound() {
        let inst = rz_instance(FRAC_PI_4, 0.5, 0.05);
        let par = binary_search_parallel(&inst).unwrap();
        let ada = binary_search_adaptive(&inst).unwrap();
        match (par.bound, ada.bound) {
            (QueryLowerBound::Finite(np), QueryLowerBound::Finite(na)) => {
                assert!(na <= np, "adaptive {na} > parallel {np}");
            }
            other => panic!("unexpected bounds {other:?}"),
        }
    }

    #[test]
    fn chain_of_error_probabilities_at_one_query() {
        // p_e,adaptive <= p_e,parallel <= min(p, q) checked against the oracle
        let a = builtin_channel("dephasing", &[0.15]).unwrap();
        let b = builtin_channel("amplitude_damping", &[0.3]).unwrap();
        let pr = ChannelPair::new(&a, &b).unwrap();
        let p = 0.4;
        let exact = exact_error_prob(p, &a, 1.0 - p, &b, 1).unwrap();
        let floor_par = error_prob_floor(&pr, 1, p, AccessMode::Parallel, DEFAULT_TOL).unwrap();
        let floor_ada = error_prob_floor(&pr, 1, p, AccessMode::Adaptive, DEFAULT_TOL).unwrap();
        assert!(floor_ada <= floor_par + 1e-9);
        assert!(floor_par <= exact + 1e-6);
        assert!(exact <= p.min(1.0 - p) + 1e-9);
    }
}
