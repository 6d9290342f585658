//! Small dense semidefinite programs: a modeling layer for linear
//! objectives over affine Hermitian PSD constraints and linear equalities,
//! complex variables included. Complex blocks are lowered to real symmetric
//! ones through the standard doubling [[Re, -Im], [Im, Re]] and handed to
//! the Clarabel interior-point solver.
//!
//! Problems here are tiny (total PSD dimension is capped at 512), so the
//! layer is written for clarity and determinism, not throughput: expression
//! coefficients are dense matrices and assembly walks them in index order.

use crate::error::{Error, Result};
use crate::matrix::{c, ComplexMatrix};
use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Sub};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};

/// Default interior-point tolerance; bound reports quote values one order
/// looser (1e-6) to absorb embedding round-off.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Cap on the summed complex dimension of all PSD blocks in one problem.
pub const MAX_TOTAL_PSD_DIM: usize = 512;

/// Handle to a declared variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(usize);

#[derive(Clone, Debug)]
enum VarKind {
    RealScalar,
    Hermitian(usize),
    Complex(usize, usize),
}

#[derive(Clone, Debug)]
struct VarDecl {
    kind: VarKind,
    offset: usize,
    len: usize,
}

/// Affine matrix-valued expression C0 + sum_j x_j C_j over the real solver
/// parameters x. Coefficients are dense complex matrices.
#[derive(Clone, Debug)]
pub struct AffineMatrixExpr {
    rows: usize,
    cols: usize,
    constant: ComplexMatrix,
    terms: BTreeMap<usize, ComplexMatrix>,
}

impl AffineMatrixExpr {
    pub fn constant(m: ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            constant: m,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::constant(ComplexMatrix::identity(d))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::constant(ComplexMatrix::zeros(rows, cols))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn map(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let constant = f(&self.constant);
        Self {
            rows: constant.rows(),
            cols: constant.cols(),
            constant,
            terms: self.terms.iter().map(|(&p, m)| (p, f(m))).collect(),
        }
    }

    pub fn dagger(&self) -> Self {
        self.map(|m| m.dagger())
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.map(|m| m.scale_re(s))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|m| m.scale(s))
    }

    /// Hermitian part (E + E^dag)/2.
    pub fn re(&self) -> Self {
        (self + &self.dagger()).scale_re(0.5)
    }

    /// L * E * R with constant matrices on both sides.
    pub fn sandwich(&self, left: &ComplexMatrix, right: &ComplexMatrix) -> Self {
        self.map(|m| &(left * m) * right)
    }

    pub fn mul_left(&self, left: &ComplexMatrix) -> Self {
        self.map(|m| left * m)
    }

    pub fn mul_right(&self, right: &ComplexMatrix) -> Self {
        self.map(|m| m * right)
    }

    /// E ⊗ I_k.
    pub fn kron_id_right(&self, k: usize) -> Self {
        let id = ComplexMatrix::identity(k);
        self.map(|m| m.kron(&id))
    }

    /// Assemble [[a, b], [c, d]]; shapes must tile.
    pub fn block2x2(a: &Self, b: &Self, cc: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(cc.rows, d.rows);
        assert_eq!(a.cols, cc.cols);
        assert_eq!(b.cols, d.cols);
        let rows = a.rows + cc.rows;
        let cols = a.cols + b.cols;
        let place = |out: &mut ComplexMatrix, m: &ComplexMatrix, r0: usize, c0: usize| {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    out[(r0 + i, c0 + j)] += m[(i, j)];
                }
            }
        };
        let mut params: Vec<usize> = Vec::new();
        for e in [a, b, cc, d] {
            params.extend(e.terms.keys().copied());
        }
        params.sort_unstable();
        params.dedup();
        let assemble =
            |pa: &ComplexMatrix, pb: &ComplexMatrix, pc: &ComplexMatrix, pd: &ComplexMatrix| {
                let mut out = ComplexMatrix::zeros(rows, cols);
                place(&mut out, pa, 0, 0);
                place(&mut out, pb, 0, a.cols);
                place(&mut out, pc, a.rows, 0);
                place(&mut out, pd, a.rows, a.cols);
                out
            };
        let zero_of = |e: &Self| ComplexMatrix::zeros(e.rows, e.cols);
        let constant = assemble(&a.constant, &b.constant, &cc.constant, &d.constant);
        let mut terms = BTreeMap::new();
        for p in params {
            let ga = a.terms.get(&p).cloned().unwrap_or_else(|| zero_of(a));
            let gb = b.terms.get(&p).cloned().unwrap_or_else(|| zero_of(b));
            let gc = cc.terms.get(&p).cloned().unwrap_or_else(|| zero_of(cc));
            let gd = d.terms.get(&p).cloned().unwrap_or_else(|| zero_of(d));
            terms.insert(p, assemble(&ga, &gb, &gc, &gd));
        }
        Self {
            rows,
            cols,
            constant,
            terms,
        }
    }

    /// Evaluate at a full parameter vector.
    pub fn eval(&self, x: &[f64]) -> ComplexMatrix {
        let mut out = self.constant.clone();
        for (&p, m) in &self.terms {
            out = &out + &m.scale_re(x[p]);
        }
        out
    }
}

impl Add for &AffineMatrixExpr {
    type Output = AffineMatrixExpr;
    fn add(self, rhs: &AffineMatrixExpr) -> AffineMatrixExpr {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut terms = self.terms.clone();
        for (&p, m) in &rhs.terms {
            terms
                .entry(p)
                .and_modify(|e| *e = &*e + m)
                .or_insert_with(|| m.clone());
        }
        AffineMatrixExpr {
            rows: self.rows,
            cols: self.cols,
            constant: &self.constant + &rhs.constant,
            terms,
        }
    }
}

impl Sub for &AffineMatrixExpr {
    type Output = AffineMatrixExpr;
    fn sub(self, rhs: &AffineMatrixExpr) -> AffineMatrixExpr {
        self + &rhs.scale_re(-1.0)
    }
}

/// Norm-epigraph block shapes built from the Schur complement lemma.
#[derive(Clone, Copy, Debug)]
pub enum EpigraphMode {
    /// [[lambda I, A], [A^dag, I]] >= 0, the epigraph of ||A||^2.
    NormSquared,
    /// [[lambda I, A], [A^dag, lambda I]] >= 0, the epigraph of ||A||.
    Norm,
}

/// Outcome status of a solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatusKind {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

impl std::fmt::Display for SolveStatusKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SolveStatusKind::Optimal => "optimal",
            SolveStatusKind::Infeasible => "infeasible",
            SolveStatusKind::Unbounded => "unbounded",
            SolveStatusKind::NumericalFailure => "numerical_failure",
        };
        f.write_str(s)
    }
}

/// Solve result: status, objective, per-variable values and residuals.
#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub status: SolveStatusKind,
    pub objective_value: f64,
    values: Vec<ComplexMatrix>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: u32,
}

impl SdpSolution {
    pub fn value_of(&self, id: VarId) -> &ComplexMatrix {
        &self.values[id.0]
    }

    pub fn scalar_of(&self, id: VarId) -> f64 {
        self.values[id.0][(0, 0)].re
    }
}

/// Linear objective over affine Hermitian PSD constraints plus linear
/// equality constraints; always a minimization.
#[derive(Clone, Debug, Default)]
pub struct SdpProblem {
    vars: Vec<VarDecl>,
    n_params: usize,
    objective: Vec<(usize, f64)>,
    psd_blocks: Vec<AffineMatrixExpr>,
    eq_zero: Vec<AffineMatrixExpr>,
    nonneg_params: Vec<usize>,
}

impl SdpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    fn push_var(&mut self, kind: VarKind, len: usize) -> VarId {
        let id = VarId(self.vars.len());
        self.vars.push(VarDecl {
            kind,
            offset: self.n_params,
            len,
        });
        self.n_params += len;
        id
    }

    /// Real scalar variable (1x1 value in solutions).
    pub fn add_scalar(&mut self) -> VarId {
        self.push_var(VarKind::RealScalar, 1)
    }

    /// Scalar constrained to be nonnegative.
    pub fn add_scalar_nonneg(&mut self) -> VarId {
        let id = self.add_scalar();
        let off = self.vars[id.0].offset;
        self.nonneg_params.push(off);
        id
    }

    /// Hermitian d x d matrix variable (d^2 real parameters).
    pub fn add_hermitian(&mut self, d: usize) -> VarId {
        self.push_var(VarKind::Hermitian(d), d * d)
    }

    /// General complex matrix variable (2 r c real parameters).
    pub fn add_complex(&mut self, rows: usize, cols: usize) -> VarId {
        self.push_var(VarKind::Complex(rows, cols), 2 * rows * cols)
    }

    fn basis(&self, decl: &VarDecl) -> Vec<ComplexMatrix> {
        match decl.kind {
            VarKind::RealScalar => vec![ComplexMatrix::identity(1)],
            VarKind::Hermitian(d) => {
                let mut out = Vec::with_capacity(d * d);
                for i in 0..d {
                    let mut e = ComplexMatrix::zeros(d, d);
                    e[(i, i)] = c(1.0, 0.0);
                    out.push(e);
                }
                for i in 0..d {
                    for j in (i + 1)..d {
                        let mut re = ComplexMatrix::zeros(d, d);
                        re[(i, j)] = c(1.0, 0.0);
                        re[(j, i)] = c(1.0, 0.0);
                        out.push(re);
                        let mut im = ComplexMatrix::zeros(d, d);
                        im[(i, j)] = c(0.0, 1.0);
                        im[(j, i)] = c(0.0, -1.0);
                        out.push(im);
                    }
                }
                out
            }
            VarKind::Complex(r, cl) => {
                let mut out = Vec::with_capacity(2 * r * cl);
                for i in 0..r {
                    for j in 0..cl {
                        let mut re = ComplexMatrix::zeros(r, cl);
                        re[(i, j)] = c(1.0, 0.0);
                        out.push(re);
                        let mut im = ComplexMatrix::zeros(r, cl);
                        im[(i, j)] = c(0.0, 1.0);
                        out.push(im);
                    }
                }
                out
            }
        }
    }

    /// The variable as an affine expression.
    pub fn var_expr(&self, id: VarId) -> AffineMatrixExpr {
        let decl = &self.vars[id.0];
        let (rows, cols) = match decl.kind {
            VarKind::RealScalar => (1, 1),
            VarKind::Hermitian(d) => (d, d),
            VarKind::Complex(r, cl) => (r, cl),
        };
        let mut terms = BTreeMap::new();
        for (k, b) in self.basis(decl).into_iter().enumerate() {
            terms.insert(decl.offset + k, b);
        }
        AffineMatrixExpr {
            rows,
            cols,
            constant: ComplexMatrix::zeros(rows, cols),
            terms,
        }
    }

    /// lambda * I_d for a scalar variable.
    pub fn scalar_identity(&self, id: VarId, d: usize) -> AffineMatrixExpr {
        let decl = &self.vars[id.0];
        debug_assert!(matches!(decl.kind, VarKind::RealScalar));
        let mut terms = BTreeMap::new();
        terms.insert(decl.offset, ComplexMatrix::identity(d));
        AffineMatrixExpr {
            rows: d,
            cols: d,
            constant: ComplexMatrix::zeros(d, d),
            terms,
        }
    }

    /// Minimize sum coeff * scalar-variable.
    pub fn set_objective(&mut self, terms: &[(VarId, f64)]) {
        self.objective = terms
            .iter()
            .map(|&(id, w)| (self.vars[id.0].offset, w))
            .collect();
    }

    /// Require expr >= 0 (auto-symmetrized to its Hermitian part).
    pub fn add_psd(&mut self, expr: AffineMatrixExpr) {
        assert_eq!(expr.rows, expr.cols, "PSD constraint must be square");
        self.psd_blocks.push(expr.re());
    }

    /// Require expr == 0 entry-wise (complex equality).
    pub fn add_eq_zero(&mut self, expr: AffineMatrixExpr) {
        self.eq_zero.push(expr);
    }

    /// Emit the Schur-complement epigraph block for ||A|| or ||A||^2 with a
    /// scalar variable on the diagonal.
    pub fn norm_epigraph_psd(&mut self, lambda: VarId, a: &AffineMatrixExpr, mode: EpigraphMode) {
        let (r, cl) = (a.rows(), a.cols());
        let top_left = self.scalar_identity(lambda, r);
        let bottom_right = match mode {
            EpigraphMode::NormSquared => AffineMatrixExpr::identity(cl),
            EpigraphMode::Norm => self.scalar_identity(lambda, cl),
        };
        let block = AffineMatrixExpr::block2x2(&top_left, a, &a.dagger(), &bottom_right);
        self.add_psd(block);
    }

    /// Two-sided spectral-norm epigraph for a Hermitian expression:
    /// -lambda I <= B <= lambda I.
    pub fn herm_norm_epigraph(&mut self, lambda: VarId, b: &AffineMatrixExpr) {
        let li = self.scalar_identity(lambda, b.rows());
        self.add_psd(&li - b);
        self.add_psd(&li + b);
    }

    /// Require ||W|| <= 1 through the block [[I, W], [W^dag, I]] >= 0.
    pub fn contraction_constraint(&mut self, w: &AffineMatrixExpr) {
        let block = AffineMatrixExpr::block2x2(
            &AffineMatrixExpr::identity(w.rows()),
            w,
            &w.dagger(),
            &AffineMatrixExpr::identity(w.cols()),
        );
        self.add_psd(block);
    }

    pub fn solve(&self, tol: f64) -> Result<SdpSolution> {
        let total_psd: usize = self.psd_blocks.iter().map(|b| b.rows).sum();
        if total_psd > MAX_TOTAL_PSD_DIM {
            return Err(Error::TooLarge(format!(
                "total PSD dimension {total_psd} exceeds cap {MAX_TOTAL_PSD_DIM}"
            )));
        }

        let n = self.n_params;
        let mut cones: Vec<SupportedConeT<f64>> = Vec::new();
        let mut b_vec: Vec<f64> = Vec::new();
        // column triplets: col -> (row, val)
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut row = 0usize;

        // equality rows first (zero cone)
        let eq_rows: usize = self.eq_zero.iter().map(|e| 2 * e.rows * e.cols).sum();
        if eq_rows > 0 {
            cones.push(SupportedConeT::ZeroConeT(eq_rows));
            for e in &self.eq_zero {
                for i in 0..e.rows {
                    for j in 0..e.cols {
                        b_vec.push(-e.constant[(i, j)].re);
                        b_vec.push(-e.constant[(i, j)].im);
                        for (&p, m) in &e.terms {
                            let z = m[(i, j)];
                            if z.re != 0.0 {
                                cols[p].push((row, z.re));
                            }
                            if z.im != 0.0 {
                                cols[p].push((row + 1, z.im));
                            }
                        }
                        row += 2;
                    }
                }
            }
        }

        if !self.nonneg_params.is_empty() {
            cones.push(SupportedConeT::NonnegativeConeT(self.nonneg_params.len()));
            for &p in &self.nonneg_params {
                b_vec.push(0.0);
                cols[p].push((row, -1.0));
                row += 1;
            }
        }

        for blk in &self.psd_blocks {
            let d = 2 * blk.rows; // real embedded dimension
            cones.push(SupportedConeT::PSDTriangleConeT(d));
            let base = row;
            // svec layout: column-major upper triangle of the embedding
            for j in 0..d {
                for i in 0..=j {
                    let w = if i == j {
                        1.0
                    } else {
                        std::f64::consts::SQRT_2
                    };
                    b_vec.push(w * embedded_entry(&blk.constant, i, j));
                    for (&p, m) in &blk.terms {
                        let v = embedded_entry(m, i, j);
                        if v != 0.0 {
                            cols[p].push((row, -w * v));
                        }
                    }
                    row += 1;
                }
            }
            debug_assert_eq!(row - base, d * (d + 1) / 2);
        }

        let m_rows = row;
        let mut colptr = Vec::with_capacity(n + 1);
        let mut rowval = Vec::new();
        let mut nzval = Vec::new();
        colptr.push(0);
        for col in cols.iter_mut() {
            col.sort_unstable_by_key(|&(r, _)| r);
            for &(r, v) in col.iter() {
                rowval.push(r);
                nzval.push(v);
            }
            colptr.push(rowval.len());
        }
        let a_mat = CscMatrix::new(m_rows, n, colptr, rowval, nzval);
        let p_mat = CscMatrix::<f64>::zeros((n, n));
        let mut q = vec![0.0; n];
        for &(p, w) in &self.objective {
            q[p] += w;
        }

        if let Some(dir) = dump_dir() {
            let _ = self.write_dump(&dir, &a_mat, &q, &b_vec, &cones);
        }

        let settings = DefaultSettingsBuilder::default()
            .verbose(false)
            .max_iter(200)
            .tol_gap_abs(tol)
            .tol_gap_rel(tol)
            .tol_feas(tol)
            // keep static regularization below the requested accuracy
            .static_regularization_constant((tol * 1e-3).min(1e-9))
            .iterative_refinement_reltol(1e-14)
            .iterative_refinement_abstol(1e-14)
            .build()
            .map_err(|e| Error::SolverFailure(format!("settings: {e:?}")))?;
        let mut solver = DefaultSolver::new(&p_mat, &q, &a_mat, &b_vec, &cones, settings)
            .map_err(|e| Error::SolverFailure(format!("setup: {e:?}")))?;
        solver.solve();
        let sol = &solver.solution;

        let status = match sol.status {
            SolverStatus::Solved => SolveStatusKind::Optimal,
            SolverStatus::AlmostSolved => {
                if sol.r_prim.max(sol.r_dual) <= 1e-6 {
                    SolveStatusKind::Optimal
                } else {
                    SolveStatusKind::NumericalFailure
                }
            }
            SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
                SolveStatusKind::Infeasible
            }
            SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => {
                SolveStatusKind::Unbounded
            }
            _ => SolveStatusKind::NumericalFailure,
        };

        let values = self
            .vars
            .iter()
            .map(|decl| {
                let xs = &sol.x[decl.offset..decl.offset + decl.len];
                let mut acc = match decl.kind {
                    VarKind::RealScalar => ComplexMatrix::zeros(1, 1),
                    VarKind::Hermitian(d) => ComplexMatrix::zeros(d, d),
                    VarKind::Complex(r, cl) => ComplexMatrix::zeros(r, cl),
                };
                for (k, b) in self.basis(decl).into_iter().enumerate() {
                    acc = &acc + &b.scale_re(xs[k]);
                }
                acc
            })
            .collect();

        Ok(SdpSolution {
            status,
            objective_value: sol.obj_val,
            values,
            primal_residual: sol.r_prim,
            dual_residual: sol.r_dual,
            iterations: sol.iterations,
        })
    }

    fn write_dump(
        &self,
        dir: &PathBuf,
        a: &CscMatrix<f64>,
        q: &[f64],
        b: &[f64],
        cones: &[SupportedConeT<f64>],
    ) -> std::io::Result<()> {
        static COUNTER: AtomicUsize = AtomicUsize::new(0);
        let k = COUNTER.fetch_add(1, Ordering::SeqCst);
        let mut text = String::new();
        let _ = writeln!(text, "# sdp dump v1: min q'x  s.t.  b - A x in K");
        let _ = writeln!(text, "nvars {}", self.n_params);
        let _ = writeln!(text, "nrows {}", b.len());
        for cone in cones {
            match cone {
                SupportedConeT::ZeroConeT(m) => {
                    let _ = writeln!(text, "cone zero {m}");
                }
                SupportedConeT::NonnegativeConeT(m) => {
                    let _ = writeln!(text, "cone nonneg {m}");
                }
                SupportedConeT::PSDTriangleConeT(d) => {
                    let _ = writeln!(text, "cone psdtriangle {d}");
                }
                _ => {}
            }
        }
        for (i, v) in q.iter().enumerate() {
            if *v != 0.0 {
                let _ = writeln!(text, "q {i} {v:.17e}");
            }
        }
        for (i, v) in b.iter().enumerate() {
            if *v != 0.0 {
                let _ = writeln!(text, "b {i} {v:.17e}");
            }
        }
        for col in 0..a.n {
            for idx in a.colptr[col]..a.colptr[col + 1] {
                let _ = writeln!(text, "A {} {} {:.17e}", a.rowval[idx], col, a.nzval[idx]);
            }
        }
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("problem_{k:04}.sdp")), text)
    }
}

#[inline]
fn embedded_entry(m: &ComplexMatrix, i: usize, j: usize) -> f64 {
    // [[Re, -Im], [Im, Re]] indexing without materializing the embedding
    let d = m.rows();
    match (i < d, j < d) {
        (true, true) => m[(i, j)].re,
        (true, false) => -m[(i, j - d)].im,
        (false, true) => m[(i - d, j)].im,
        (false, false) => m[(i - d, j - d)].re,
    }
}

/// Real symmetric embedding [[Re H, -Im H], [Im H, Re H]] of a Hermitian
/// matrix; PSD iff the input is PSD, eigenvalues doubled in multiplicity.
/// Returned as a complex matrix with zero imaginary parts.
pub fn embed_hermitian_real(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(Error::ShapeError("embedding needs a square matrix".into()));
    }
    let dev = h.hermiticity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotHermitian(dev));
    }
    let d = h.rows();
    Ok(ComplexMatrix::from_fn(2 * d, 2 * d, |i, j| {
        c(embedded_entry(h, i, j), 0.0)
    }))
}

static DUMP_DIR: OnceLock<Mutex<Option<PathBuf>>> = OnceLock::new();

fn dump_cell() -> &'static Mutex<Option<PathBuf>> {
    DUMP_DIR.get_or_init(|| Mutex::new(None))
}

/// Direct subsequent solves to write their assembled problem data (the
/// sparse text format produced by the dump writer) into `dir`; `None`
/// disables dumping again.
pub fn set_dump_dir(dir: Option<PathBuf>) {
    *dump_cell().lock().unwrap() = dir;
}

fn dump_dir() -> Option<PathBuf> {
    dump_cell().lock().unwrap().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut s = seed;
        let mut next = move || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        ComplexMatrix::from_fn(n, n, |_, _| c(next(), next())).hermitian_part()
    }

    #[test]
    fn embedding_examples() {
        let e = embed_hermitian_real(&ComplexMatrix::identity(2)).unwrap();
        assert!((&e - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-15);

        let h = ComplexMatrix::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        let e = embed_hermitian_real(&h).unwrap();
        let expect = ComplexMatrix::diag(&[c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!((&e - &expect).frobenius_norm() < 1e-15);

        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(embed_hermitian_real(&m).is_err());
    }

    #[test]
    fn embedding_preserves_spectrum_on_random_hermitians() {
        for seed in 0..200u64 {
            let h = random_hermitian(3, seed + 1);
            let e = embed_hermitian_real(&h).unwrap();
            let eh = crate::matrix::eig_hermitian(&h).unwrap();
            let ee = crate::matrix::eig_hermitian(&e).unwrap();
            let min_h = eh.min_eigenvalue();
            let min_e = ee.min_eigenvalue();
            assert!(
                (min_h - min_e).abs() < 1e-9 * h.frobenius_norm().max(1.0),
                "seed {seed}: {min_h} vs {min_e}"
            );
        }
    }

    #[test]
    fn scalar_lp_as_sdp() {
        // min lambda s.t. lambda >= 3 (via 1x1 PSD block lambda - 3 >= 0)
        let mut p = SdpProblem::new();
        let lam = p.add_scalar_nonneg();
        p.set_objective(&[(lam, 1.0)]);
        let expr = &p.scalar_identity(lam, 1) - &AffineMatrixExpr::identity(1).scale_re(3.0);
        p.add_psd(expr);
        let sol = p.solve(DEFAULT_TOL).unwrap();
        assert_eq!(sol.status, SolveStatusKind::Optimal);
        assert!((sol.objective_value - 3.0).abs() < 1e-7);
    }

    #[test]
    fn bounded_trace_minimization() {
        // min Tr[X rho] over 0 <= X <= I with rho = diag(0.7, 0.3): optimum 0 at X = 0
        let mut p = SdpProblem::new();
        let x = p.add_hermitian(2);
        let xe = p.var_expr(x);
        p.add_psd(xe.clone());
        p.add_psd(&AffineMatrixExpr::identity(2) - &xe);
        // encode t = Tr[X rho] with an equality, then minimize t
        let t = p.add_scalar();
        p.set_objective(&[(t, 1.0)]);
        let rho = ComplexMatrix::diag(&[c(0.7, 0.0), c(0.3, 0.0)]);
        let mut lin = p.scalar_identity(t, 1);
        for i in 0..2 {
            let mut sel = ComplexMatrix::zeros(1, 2);
            sel[(0, i)] = c(1.0, 0.0);
            let picked = xe.sandwich(&sel, &sel.dagger()).scale(rho[(i, i)]);
            lin = &lin - &picked;
        }
        p.add_eq_zero(lin);
        let sol = p.solve(DEFAULT_TOL).unwrap();
        assert_eq!(sol.status, SolveStatusKind::Optimal);
        assert!(sol.objective_value.abs() < 1e-7, "{}", sol.objective_value);
    }

    #[test]
    fn norm_epigraph_modes() {
        // A = diag(2, 1): min lambda in squared mode -> 4, norm mode -> 2
        let a = AffineMatrixExpr::constant(ComplexMatrix::diag(&[c(2.0, 0.0), c(1.0, 0.0)]));
        for (mode, expect) in [(EpigraphMode::NormSquared, 4.0), (EpigraphMode::Norm, 2.0)] {
            let mut p = SdpProblem::new();
            let lam = p.add_scalar_nonneg();
            p.set_objective(&[(lam, 1.0)]);
            p.norm_epigraph_psd(lam, &a, mode);
            let sol = p.solve(DEFAULT_TOL).unwrap();
            assert_eq!(sol.status, SolveStatusKind::Optimal);
            assert!(
                (sol.objective_value - expect).abs() < 1e-6,
                "mode {mode:?}: {}",
                sol.objective_value
            );
        }
    }

    #[test]
    fn herm_two_sided_norm() {
        // B = diag(1, -3): spectral norm 3
        let b = AffineMatrixExpr::constant(ComplexMatrix::diag(&[c(1.0, 0.0), c(-3.0, 0.0)]));
        let mut p = SdpProblem::new();
        let lam = p.add_scalar_nonneg();
        p.set_objective(&[(lam, 1.0)]);
        p.herm_norm_epigraph(lam, &b);
        let sol = p.solve(DEFAULT_TOL).unwrap();
        assert!((sol.objective_value - 3.0).abs() < 1e-6);
    }

    #[test]
    fn contraction_infeasible_beyond_unit_norm() {
        // W pinned to 1.5 I by equalities; the contraction block must fail
        let mut p = SdpProblem::new();
        let w = p.add_complex(2, 2);
        let we = p.var_expr(w);
        p.contraction_constraint(&we);
        let fixed = &we - &AffineMatrixExpr::identity(2).scale_re(1.5);
        p.add_eq_zero(fixed);
        let t = p.add_scalar_nonneg();
        p.set_objective(&[(t, 1.0)]);
        let sol = p.solve(DEFAULT_TOL).unwrap();
        assert_eq!(sol.status, SolveStatusKind::Infeasible);
    }

    #[test]
    fn solution_values_satisfy_constraints() {
        // min lambda s.t. lambda I >= B with Hermitian witness check
        let b = random_hermitian(4, 11);
        let mut p = SdpProblem::new();
        let lam = p.add_scalar_nonneg();
        p.set_objective(&[(lam, 1.0)]);
        p.herm_norm_epigraph(lam, &AffineMatrixExpr::constant(b.clone()));
        let sol = p.solve(DEFAULT_TOL).unwrap();
        let lam_v = sol.scalar_of(lam);
        let eig = crate::matrix::eig_hermitian(&b).unwrap();
        let norm = eig.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
        assert!((lam_v - norm).abs() < 1e-7);
        assert!(sol.primal_residual.max(sol.dual_residual) < 1e-7);
    }

    #[test]
    fn determinism_bitwise() {
        let solve_once = || {
            let mut p = SdpProblem::new();
            let lam = p.add_scalar_nonneg();
            let a = AffineMatrixExpr::constant(random_hermitian(3, 42));
            p.set_objective(&[(lam, 1.0)]);
            p.herm_norm_epigraph(lam, &a);
            p.solve(DEFAULT_TOL).unwrap()
        };
        let s1 = solve_once();
        let s2 = solve_once();
        assert_eq!(s1.status, s2.status);
        assert_eq!(s1.objective_value.to_bits(), s2.objective_value.to_bits());
    }
}
