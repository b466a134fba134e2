//! Declarative semidefinite programs and a self-contained interior-point
//! solver.
//!
//! A [`ConicProblem`] declares matrix and scalar variables, a linear
//! objective, and constraints of the form `L(V) = R` or `L(V) ⪰ R`, where `L`
//! is a linear map given entrywise (see [`Expr`]) and `R` a constant
//! Hermitian operator. Problems with complex data are first rewritten by
//! [`embed_complex`] into an equivalent real problem, which is lowered to the
//! standard form `min cᵀx : Gx + s = h, Ax = b, s ∈ K` and solved by a
//! homogeneous self-dual primal-dual method with Nesterov-Todd scaling.

mod dump;
mod embed;
mod ipm;
mod lower;
mod verify;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{DimSignature, HermitianOperator};

pub use dump::dump;
pub use embed::{embed_complex, embed_hermitian};
pub use verify::{verify_solution, ResidualReport};

/// Default solver tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Residual and gap thresholds backing the `Optimal` status.
pub const REPORT_RESIDUAL: f64 = 1e-7;
pub const REPORT_GAP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cone {
    Psd,
    Nonneg,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub name: String,
    pub size: usize,
    pub cone: Cone,
    pub field: Field,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

/// `out[row, col] += coeff · V[src_row, src_col]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub src_row: usize,
    pub src_col: usize,
    pub coeff: Complex64,
}

/// Linear map from variables to `size × size` Hermitian matrices, stored as
/// entrywise contributions per variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub size: usize,
    pub terms: Vec<(VarId, Vec<Entry>)>,
}

fn ent(row: usize, col: usize, src_row: usize, src_col: usize, coeff: Complex64) -> Entry {
    Entry { row, col, src_row, src_col, coeff }
}

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

impl Expr {
    pub fn zero(size: usize) -> Self {
        Self { size, terms: Vec::new() }
    }

    /// V itself, for a variable of side `n`.
    pub fn var(v: VarId, n: usize) -> Self {
        let e = (0..n).flat_map(|i| (0..n).map(move |j| ent(i, j, i, j, ONE))).collect();
        Self { size: n, terms: vec![(v, e)] }
    }

    /// K ⊗ V for a constant K and a variable of side `n`.
    pub fn kron_const_left(k: &HermitianOperator, v: VarId, n: usize) -> Self {
        let m = k.dim();
        let mut e = Vec::new();
        for a in 0..m {
            for b in 0..m {
                let w = k.get(a, b);
                if w.norm() == 0.0 {
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        e.push(ent(a * n + i, b * n + j, i, j, w));
                    }
                }
            }
        }
        Self { size: m * n, terms: vec![(v, e)] }
    }

    /// 1_m ⊗ V.
    pub fn kron_identity_left(m: usize, v: VarId, n: usize) -> Self {
        let mut e = Vec::with_capacity(m * n * n);
        for a in 0..m {
            for i in 0..n {
                for j in 0..n {
                    e.push(ent(a * n + i, a * n + j, i, j, ONE));
                }
            }
        }
        Self { size: m * n, terms: vec![(v, e)] }
    }

    /// λ·C for a scalar variable λ.
    pub fn scalar_times(v: VarId, c: &HermitianOperator) -> Self {
        let d = c.dim();
        let mut e = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let w = c.get(i, j);
                if w.norm() != 0.0 {
                    e.push(ent(i, j, 0, 0, w));
                }
            }
        }
        Self { size: d, terms: vec![(v, e)] }
    }

    /// Partial trace of V over the subsystems not in `keep`.
    pub fn partial_trace(v: VarId, sig: &DimSignature, keep: &[usize]) -> Result<Self> {
        // Reuse the operator routine on basis indices: build index tables.
        let n = sig.total();
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        let dims = sig.dims();
        for &k in &keep {
            if k >= dims.len() {
                return Err(Error::IndexOutOfRange { index: k, count: dims.len() });
            }
        }
        let strides: Vec<usize> = (0..dims.len()).map(|k| dims[k + 1..].iter().product()).collect();
        let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
        let enumerate = |subs: &[usize]| -> Vec<usize> {
            let mut out = vec![0usize];
            for &k in subs {
                let (d, st) = (dims[k], strides[k]);
                out = out.iter().flat_map(|&b| (0..d).map(move |x| b + x * st)).collect();
            }
            out
        };
        let ko = enumerate(&keep);
        let to = enumerate(&traced);
        let mut e = Vec::with_capacity(ko.len() * ko.len() * to.len());
        for (i, &oi) in ko.iter().enumerate() {
            for (j, &oj) in ko.iter().enumerate() {
                for &t in &to {
                    e.push(ent(i, j, oi + t, oj + t, ONE));
                }
            }
        }
        debug_assert!(ko.iter().all(|&x| x < n));
        Ok(Self { size: ko.len(), terms: vec![(v, e)] })
    }

    /// Principal sub-block V[off..off+len, off..off+len].
    pub fn principal_block(v: VarId, off: usize, len: usize) -> Self {
        let e = (0..len).flat_map(|i| (0..len).map(move |j| ent(i, j, off + i, off + j, ONE))).collect();
        Self { size: len, terms: vec![(v, e)] }
    }

    /// Scalar tr(V).
    pub fn trace(v: VarId, n: usize) -> Self {
        Self { size: 1, terms: vec![(v, (0..n).map(|i| ent(0, 0, i, i, ONE)).collect())] }
    }

    /// Scalar tr(C V).
    pub fn inner(v: VarId, c: &HermitianOperator) -> Self {
        let d = c.dim();
        let mut e = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let w = c.get(j, i);
                if w.norm() != 0.0 {
                    e.push(ent(0, 0, i, j, w));
                }
            }
        }
        Self { size: 1, terms: vec![(v, e)] }
    }

    /// Scalar Re tr(X) for the off-diagonal block X = V[0..len, off..off+len].
    pub fn re_trace_offdiag(v: VarId, off: usize, len: usize) -> Self {
        let h = Complex64::new(0.5, 0.0);
        let mut e = Vec::with_capacity(2 * len);
        for i in 0..len {
            e.push(ent(0, 0, i, off + i, h));
            e.push(ent(0, 0, off + i, i, h));
        }
        Self { size: 1, terms: vec![(v, e)] }
    }

    /// Scalar variable as a 1×1 expression.
    pub fn scalar(v: VarId) -> Self {
        Self { size: 1, terms: vec![(v, vec![ent(0, 0, 0, 0, ONE)])] }
    }

    pub fn scaled(mut self, s: f64) -> Self {
        for (_, es) in self.terms.iter_mut() {
            for e in es.iter_mut() {
                e.coeff *= s;
            }
        }
        self
    }

    pub fn plus(mut self, other: Expr) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::Dimension(format!("expression sizes {} and {}", self.size, other.size)));
        }
        self.terms.extend(other.terms);
        Ok(self)
    }

    pub fn minus(self, other: Expr) -> Result<Self> {
        self.plus(other.scaled(-1.0))
    }

    /// Evaluates the map at the given variable values.
    pub fn eval(&self, values: &[HermitianOperator]) -> HermitianOperator {
        let k = self.size;
        let mut out = vec![Complex64::new(0.0, 0.0); k * k];
        for (v, es) in &self.terms {
            let x = &values[v.0];
            for e in es {
                out[e.row * k + e.col] += e.coeff * x.get(e.src_row, e.src_col);
            }
        }
        let m = crate::matcore::CMatrix::from_row_slice(k, k, &out);
        HermitianOperator::hermitian_part(&m)
    }

    /// Adjoint map applied to `y`, accumulated into per-variable operators.
    pub(crate) fn adjoint_into(&self, y: &HermitianOperator, acc: &mut [Vec<Complex64>], sizes: &[usize]) {
        for (v, es) in &self.terms {
            let n = sizes[v.0];
            for e in es {
                acc[v.0][e.src_col * n + e.src_row] += e.coeff * y.get(e.col, e.row);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    /// L(V) = R
    Equal,
    /// L(V) ⪰ R
    Geq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub expr: Expr,
    pub rhs: HermitianOperator,
    pub kind: ConstraintKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConicProblem {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub sense: Sense,
    /// 1×1 expression; the objective value is its real part.
    pub objective: Expr,
}

impl Default for ConicProblem {
    fn default() -> Self {
        Self::new()
    }
}

impl ConicProblem {
    pub fn new() -> Self {
        Self { variables: Vec::new(), constraints: Vec::new(), sense: Sense::Minimize, objective: Expr::zero(1) }
    }

    pub fn add_var(&mut self, name: &str, size: usize, cone: Cone, field: Field) -> VarId {
        self.variables.push(Variable { name: name.to_string(), size, cone, field });
        VarId(self.variables.len() - 1)
    }

    /// Complex Hermitian matrix variable.
    pub fn herm_var(&mut self, name: &str, size: usize, cone: Cone) -> VarId {
        self.add_var(name, size, cone, Field::Complex)
    }

    /// Real scalar variable.
    pub fn scalar_var(&mut self, name: &str, cone: Cone) -> VarId {
        self.add_var(name, 1, cone, Field::Real)
    }

    pub fn add_eq(&mut self, name: &str, expr: Expr, rhs: HermitianOperator) {
        self.constraints.push(Constraint { name: name.to_string(), expr, rhs, kind: ConstraintKind::Equal });
    }

    pub fn add_geq(&mut self, name: &str, expr: Expr, rhs: HermitianOperator) {
        self.constraints.push(Constraint { name: name.to_string(), expr, rhs, kind: ConstraintKind::Geq });
    }

    pub fn minimize(&mut self, expr: Expr) {
        self.sense = Sense::Minimize;
        self.objective = expr;
    }

    pub fn maximize(&mut self, expr: Expr) {
        self.sense = Sense::Maximize;
        self.objective = expr;
    }

    /// Checks that every expression references declared variables with
    /// in-range indices and matches its right-hand side.
    pub fn validate(&self) -> Result<()> {
        for v in &self.variables {
            if v.size == 0 {
                return Err(Error::InvalidArgument(format!("variable {} has size 0", v.name)));
            }
            if v.cone == Cone::Nonneg && v.size != 1 {
                return Err(Error::InvalidArgument(format!("nonnegative variable {} must be scalar", v.name)));
            }
        }
        let check = |label: &str, e: &Expr| -> Result<()> {
            for (v, es) in &e.terms {
                let var = self
                    .variables
                    .get(v.0)
                    .ok_or_else(|| Error::InvalidArgument(format!("{label}: undeclared variable {}", v.0)))?;
                for x in es {
                    if x.src_row >= var.size || x.src_col >= var.size || x.row >= e.size || x.col >= e.size {
                        return Err(Error::Dimension(format!("{label}: entry out of range for {}", var.name)));
                    }
                }
            }
            Ok(())
        };
        if self.objective.size != 1 {
            return Err(Error::Dimension("objective must be 1x1".into()));
        }
        check("objective", &self.objective)?;
        for c in &self.constraints {
            check(&c.name, &c.expr)?;
            if c.rhs.dim() != c.expr.size {
                return Err(Error::Dimension(format!(
                    "{}: rhs dim {} vs expression size {}",
                    c.name,
                    c.rhs.dim(),
                    c.expr.size
                )));
            }
        }
        Ok(())
    }

    /// True when no complex data or complex matrix variables are present.
    pub fn is_real(&self) -> bool {
        let real_expr = |e: &Expr| e.terms.iter().all(|(_, es)| es.iter().all(|x| x.coeff.im == 0.0));
        self.variables.iter().all(|v| v.field == Field::Real || v.size == 1)
            && real_expr(&self.objective)
            && self
                .constraints
                .iter()
                .all(|c| real_expr(&c.expr) && c.rhs.entries().iter().all(|z| z.im == 0.0))
    }

    /// Objective value at the given variable values.
    pub fn objective_value(&self, values: &[HermitianOperator]) -> f64 {
        self.objective.eval(values).get(0, 0).re
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Optimal,
    NearOptimal,
    Infeasible,
    Unbounded,
    Failed,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::NearOptimal => "near-optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
            Status::Failed => "failed",
        }
    }

    pub fn is_usable(&self) -> bool {
        matches!(self, Status::Optimal | Status::NearOptimal)
    }
}

/// Solver output. `duals` holds one multiplier per constraint, in the
/// convention of the minimization form: `C = Σ L*(Yₖ) + S` with `Yₖ ⪰ 0` for
/// `Geq` constraints and `S` in the dual of each variable's cone.
#[derive(Clone, Debug)]
pub struct ConicSolution {
    pub status: Status,
    pub values: Vec<HermitianOperator>,
    pub duals: Vec<HermitianOperator>,
    pub objective: f64,
    pub dual_objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub iterations: usize,
}

impl ConicSolution {
    pub fn value(&self, v: VarId) -> &HermitianOperator {
        &self.values[v.0]
    }

    pub fn scalar(&self, v: VarId) -> f64 {
        self.values[v.0].get(0, 0).re
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_iter: 120 }
    }
}

/// Solves with default iteration cap.
pub fn solve(problem: &ConicProblem, tol: f64) -> Result<ConicSolution> {
    solve_with(problem, SolverOptions { tol, ..SolverOptions::default() })
}

pub fn solve_with(problem: &ConicProblem, opts: SolverOptions) -> Result<ConicSolution> {
    problem.validate()?;
    if problem.is_real() {
        return lower::solve_real(problem, opts);
    }
    let embedded = embed::embed(problem)?;
    let sol = lower::solve_real(&embedded.problem, opts)?;
    Ok(embedded.recover(problem, sol))
}

#[cfg(test)]
mod tests;
