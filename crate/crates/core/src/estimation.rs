//! Minimax error and query-complexity lower bounds for channel estimation:
//! the reduction to discriminating channels whose parameters differ by more
//! than twice the tolerance window, the asymptotic Fisher-information
//! route, and the SQL/Heisenberg scaling classification.

use crate::channel::ChannelFamily;
use crate::channel_metrics::{
    adaptive_fisher_bound, fisher_heisenberg_coefficient, fisher_sql_denominator,
    parallel_fisher_bound, ChannelPair, ConstrainedInfimum,
};
use crate::discrimination::{
    binary_search_adaptive, binary_search_parallel, error_prob_floor,
    AccessMode, DiscriminationInstance, QueryBoundResult, QueryLowerBound,
};
use crate::error::{Error, Result};
use crate::sdp::DEFAULT_TOL;
use rayon::prelude::*;

/// Margin making the pair separation strictly larger than 2 delta.
const SEPARATION_MARGIN: f64 = 1.0 + 1e-6;

/// A channel-estimation instance: smooth family, tolerance window
/// half-width delta, error threshold, and the finite theta grid standing in
/// for the continuum.
#[derive(Clone, Debug)]
pub struct EstimationInstance {
    pub family: ChannelFamily,
    pub delta: f64,
    pub epsilon: f64,
    pub theta_grid: Vec<f64>,
    pub tol: f64,
}

impl EstimationInstance {
    pub fn new(family: ChannelFamily, delta: f64, epsilon: f64, theta_grid: Vec<f64>) -> Result<Self> {
        if delta <= 0.0 {
            return Err(Error::InvalidInput("delta must be positive".into()));
        }
        if !(epsilon > 0.0 && epsilon <= 0.5) {
            return Err(Error::InvalidInput(format!(
                "epsilon={epsilon} must lie in (0, 1/2]"
            )));
        }
        if theta_grid.is_empty() {
            return Err(Error::InvalidInput("theta grid is empty".into()));
        }
        for &t in &theta_grid {
            if !family.contains(t) {
                return Err(Error::OutOfDomain {
                    value: t,
                    lo: family.theta_domain().0,
                    hi: family.theta_domain().1,
                });
            }
        }
        Ok(Self {
            family,
            delta,
            epsilon,
            theta_grid,
            tol: DEFAULT_TOL,
        })
    }

    /// Uniform grid of `points` values strictly inside [lo, hi].
    pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
        let k = points.max(1);
        (0..k)
            .map(|i| lo + (i as f64 + 0.5) * (hi - lo) / k as f64)
            .collect()
    }

    /// Economical pairings (theta, theta + 2 delta (1 + margin)) that stay
    /// inside the family domain.
    fn economical_pairs(&self) -> Vec<(f64, f64)> {
        self.theta_grid
            .iter()
            .filter_map(|&t| {
                let t2 = t + 2.0 * self.delta * SEPARATION_MARGIN;
                self.family.contains(t2).then_some((t, t2))
            })
            .collect()
    }

    /// All grid pairs separated by more than 2 delta.
    fn admissible_grid_pairs(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for (i, &a) in self.theta_grid.iter().enumerate() {
            for &b in &self.theta_grid[i + 1..] {
                if (a - b).abs() > 2.0 * self.delta {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Lower bound on the minimax error probability at n queries: the
/// discrimination floor at even priors, maximized over the default
/// economical pairings theta' = theta + 2 delta (1 + margin). Any pairing
/// yields a valid lower bound, so the economical sweep stays sound.
pub fn minimax_error_floor(inst: &EstimationInstance, n: u64, mode: AccessMode) -> Result<f64> {
    let pairs = inst.economical_pairs();
    if pairs.is_empty() {
        return Err(Error::NoAdmissiblePair);
    }
    let floors: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|&(t1, t2)| {
            let pair = ChannelPair::from_family(&inst.family, t1, t2)?;
            error_prob_floor(&pair, n, 0.5, mode, inst.tol)
        })
        .collect();
    let mut best = 0.0f64;
    for f in floors {
        best = best.max(f?);
    }
    Ok(best)
}

/// Lower bound on the query complexity of estimation: the best
/// discrimination query bound (even priors, threshold epsilon) over every
/// admissible grid pair.
pub fn est_query_lower(inst: &EstimationInstance, mode: AccessMode) -> Result<QueryBoundResult> {
    let pairs = inst.admissible_grid_pairs();
    if pairs.is_empty() {
        return Err(Error::NoAdmissiblePair);
    }
    let results: Vec<Result<QueryBoundResult>> = pairs
        .par_iter()
        .map(|&(t1, t2)| {
            let pair = ChannelPair::from_family(&inst.family, t1, t2)?;
            let disc = DiscriminationInstance::new(pair, 0.5, inst.epsilon)?;
            match mode {
                AccessMode::Parallel => binary_search_parallel(&disc),
                AccessMode::Adaptive => binary_search_adaptive(&disc),
            }
        })
        .collect();
    let mut best: Option<QueryBoundResult> = None;
    for r in results {
        let r = r?;
        let replace = match (&best, &r.bound) {
            (None, _) => true,
            (Some(_), QueryLowerBound::Infinite) => true,
            (Some(b), QueryLowerBound::Finite(n)) => match b.bound {
                QueryLowerBound::Infinite => false,
                QueryLowerBound::Finite(m) => *n > m,
                QueryLowerBound::Trivial => *n > 1,
            },
            (Some(_), QueryLowerBound::Trivial) => false,
        };
        if replace {
            best = Some(r);
        }
    }
    Ok(best.expect("nonempty pair set"))
}

/// Scaling classification of a family over a theta grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scaling {
    /// The SQL-form bound is active: Heisenberg scaling is excluded.
    SqlCapped,
    /// No contraction certificate exists; n^2 growth is not excluded.
    HeisenbergPossible,
    /// Every grid point failed to solve.
    Indeterminate,
}

impl std::fmt::Display for Scaling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scaling::SqlCapped => "SQL_capped",
            Scaling::HeisenbergPossible => "Heisenberg_possible",
            Scaling::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ScalingClassification {
    pub kind: Scaling,
    /// Grid minimum of inf { a_theta : V^dag M_H = 0 } when feasible at
    /// every solved grid point; grid-approximate by construction.
    pub sql_denominator: Option<f64>,
    /// Grid minimum of the parallel n^2 coefficient inf b_theta.
    pub heis_coefficient: f64,
    /// Adaptive-route coefficient inf sqrt(a_theta b_theta) at the
    /// b-optimal witnesses.
    pub heis_coefficient_adaptive: f64,
    /// Per-theta outcomes (theta, denominator if feasible).
    pub per_theta: Vec<(f64, Option<f64>)>,
    pub skipped: usize,
}

/// Classify the estimation scaling of a family over a grid: SQL-capped if
/// the equality-constrained program is feasible at every (solved) grid
/// point, Heisenberg-possible as soon as one point is infeasible.
pub fn classify_scaling(fam: &ChannelFamily, theta_grid: &[f64], tol: f64) -> Result<ScalingClassification> {
    if theta_grid.is_empty() {
        return Err(Error::InvalidInput("theta grid is empty".into()));
    }
    #[derive(Clone)]
    enum PointOutcome {
        Feasible(f64, f64, f64),
        Infeasible(f64, f64),
        Failed,
    }
    let outcomes: Vec<PointOutcome> = theta_grid
        .par_iter()
        .map(|&t| {
            let heis = match fisher_heisenberg_coefficient(fam, t, tol) {
                Ok(r) => r.value,
                Err(_) => return PointOutcome::Failed,
            };
            match fisher_sql_denominator(fam, t, tol) {
                Ok(ConstrainedInfimum::Feasible(r)) => PointOutcome::Feasible(t, r.value, heis),
                Ok(ConstrainedInfimum::Infeasible) => PointOutcome::Infeasible(t, heis),
                Err(_) => PointOutcome::Failed,
            }
        })
        .collect();

    let mut per_theta = Vec::new();
    let mut skipped = 0usize;
    let mut any_infeasible = false;
    let mut denom: Option<f64> = None;
    let mut heis = f64::INFINITY;
    for o in &outcomes {
        match o {
            PointOutcome::Feasible(t, d, h) => {
                per_theta.push((*t, Some(*d)));
                denom = Some(denom.map_or(*d, |x: f64| x.min(*d)));
                heis = heis.min(*h);
            }
            PointOutcome::Infeasible(t, h) => {
                per_theta.push((*t, None));
                any_infeasible = true;
                heis = heis.min(*h);
            }
            PointOutcome::Failed => skipped += 1,
        }
    }
    let solved = theta_grid.len() - skipped;
    let kind = if solved == 0 {
        Scaling::Indeterminate
    } else if any_infeasible {
        Scaling::HeisenbergPossible
    } else {
        Scaling::SqlCapped
    };

    // adaptive-route coefficient from the witnesses of the b-only solves
    let mut heis_adaptive = f64::INFINITY;
    for &t in theta_grid {
        if let Ok(r) = fisher_heisenberg_coefficient(fam, t, tol) {
            let (a, b) = r.witness.terms();
            heis_adaptive = heis_adaptive.min((a * b).sqrt());
        }
    }

    Ok(ScalingClassification {
        kind,
        sql_denominator: if matches!(kind, Scaling::SqlCapped) {
            denom
        } else {
            None
        },
        heis_coefficient: if heis.is_finite() { heis } else { 0.0 },
        heis_coefficient_adaptive: if heis_adaptive.is_finite() {
            heis_adaptive
        } else {
            0.0
        },
        per_theta,
        skipped,
    })
}

/// Asymptotic (small-delta) floor on the minimax error probability from
/// the Fisher-information route: the delta^2 leading term with the
/// separation-2delta constant that matches the discrimination reduction,
/// maximized implicitly through the grid infimum. The o(delta^2) remainder
/// is dropped; outputs are labeled asymptotic by the callers.
pub fn fisher_minimax_floor(inst: &EstimationInstance, n: u64, mode: AccessMode) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("query count must be >= 1".into()));
    }
    let bounds: Vec<Result<f64>> = inst
        .theta_grid
        .par_iter()
        .map(|&t| {
            let rep = match mode {
                AccessMode::Parallel => parallel_fisher_bound(&inst.family, t, n, inst.tol)?,
                AccessMode::Adaptive => adaptive_fisher_bound(&inst.family, t, n, inst.tol)?,
            };
            Ok(rep.value)
        })
        .collect();
    let mut inf = f64::INFINITY;
    for b in bounds {
        inf = inf.min(b?);
    }
    // 1 - 4 pe (1 - pe) <= delta^2 * (n-query Fisher bound), evaluated at
    // pair separation 2 delta; Fisher bound already carries the factor 4n.
    let x = inst.delta * inst.delta * inf;
    if x >= 1.0 {
        return Ok(0.0);
    }
    Ok(0.5 * (1.0 - x.sqrt()))
}
