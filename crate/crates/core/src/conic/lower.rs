//! Lowering of real problems to the standard cone form consumed by the
//! interior-point method, and recovery of declarative values and duals.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ipm::{self, IpmStatus, StandardForm};
use super::{Cone, ConicProblem, ConicSolution, ConstraintKind, Expr, Sense, SolverOptions, Status};
use super::{REPORT_GAP, REPORT_RESIDUAL};
use crate::error::{Error, Result};
use crate::matcore::{CMatrix, HermitianOperator};

/// Where a declarative constraint landed in the standard form.
enum Slot {
    Lp(usize),
    Block(usize),
    /// (equality row, r, c) for r ≤ c
    Rows(Vec<(usize, usize, usize)>),
}

struct Params {
    offset: Vec<usize>,
    size: Vec<usize>,
    total: usize,
}

impl Params {
    fn new(p: &ConicProblem) -> Self {
        let mut offset = Vec::new();
        let mut size = Vec::new();
        let mut total = 0;
        for v in &p.variables {
            offset.push(total);
            size.push(v.size);
            total += v.size * (v.size + 1) / 2;
        }
        Self { offset, size, total }
    }

    /// Index of the parameter for entry (i, j) = (j, i) of variable v.
    #[inline]
    fn index(&self, v: usize, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let n = self.size[v];
        self.offset[v] + i * n - i * i.saturating_sub(1) / 2 + (j - i)
    }
}

/// Linear map entries per parameter: (param, r, c) → value.
fn collect(params: &Params, expr: &Expr) -> BTreeMap<(usize, usize, usize), f64> {
    let mut m = BTreeMap::new();
    for (v, es) in &expr.terms {
        for e in es {
            if e.coeff.re == 0.0 {
                continue;
            }
            let p = params.index(v.0, e.src_row, e.src_col);
            *m.entry((p, e.row, e.col)).or_insert(0.0) += e.coeff.re;
        }
    }
    m.retain(|_, v| *v != 0.0);
    m
}

fn to_dmat(h: &HermitianOperator) -> DMatrix<f64> {
    let k = h.dim();
    DMatrix::from_fn(k, k, |i, j| h.get(i, j).re)
}

fn from_dmat(m: &DMatrix<f64>) -> HermitianOperator {
    let k = m.nrows();
    HermitianOperator::hermitian_part(&CMatrix::from_fn(k, k, |i, j| Complex64::new(m[(i, j)], 0.0)))
}

/// Builds the standard form, solves it, and maps results back.
pub(crate) fn solve_real(problem: &ConicProblem, opts: SolverOptions) -> Result<ConicSolution> {
    let params = Params::new(problem);
    let n = params.total;
    let mut sf = StandardForm::new(n);
    let mut slots = Vec::with_capacity(problem.constraints.len());
    let mut a_rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut b: Vec<f64> = Vec::new();

    for c in &problem.constraints {
        let k = c.expr.size;
        let entries = collect(&params, &c.expr);
        match c.kind {
            ConstraintKind::Geq if k == 1 => {
                let row = sf.add_lp_row(-c.rhs.get(0, 0).re);
                for (&(p, _, _), &v) in &entries {
                    sf.push_lp(p, row, -v);
                }
                slots.push(Slot::Lp(row));
            }
            ConstraintKind::Geq => {
                let blk = sf.add_block(to_dmat(&c.rhs).scale(-1.0));
                // symmetry check per parameter
                for (&(p, r, col), &v) in &entries {
                    let mirror = entries.get(&(p, col, r)).copied().unwrap_or(0.0);
                    if (mirror - v).abs() > 1e-12 * (1.0 + v.abs()) {
                        return Err(Error::InvalidArgument(format!(
                            "{}: constraint map is not Hermitian-preserving",
                            c.name
                        )));
                    }
                    sf.push_block(p, blk, r, col, -v);
                }
                slots.push(Slot::Block(blk));
            }
            ConstraintKind::Equal => {
                let mut rows = BTreeMap::<(usize, usize), Vec<(usize, f64)>>::new();
                for (&(p, r, col), &v) in &entries {
                    if r <= col {
                        rows.entry((r, col)).or_default().push((p, v));
                    }
                }
                let mut list = Vec::new();
                for r in 0..k {
                    for col in r..k {
                        let rhs = c.rhs.get(r, col).re;
                        let coeffs = rows.remove(&(r, col)).unwrap_or_default();
                        if coeffs.is_empty() {
                            if rhs.abs() > 1e-12 {
                                return Ok(infeasible(problem, &format!("{}: 0 = {rhs}", c.name)));
                            }
                            continue;
                        }
                        list.push((a_rows.len(), r, col));
                        a_rows.push(coeffs);
                        b.push(rhs);
                    }
                }
                slots.push(Slot::Rows(list));
            }
        }
    }
    for (vi, v) in problem.variables.iter().enumerate() {
        match (v.cone, v.size) {
            (Cone::Free, _) => {}
            (_, 1) => {
                let row = sf.add_lp_row(0.0);
                sf.push_lp(params.index(vi, 0, 0), row, -1.0);
            }
            (Cone::Psd, s) => {
                let blk = sf.add_block(DMatrix::zeros(s, s));
                for i in 0..s {
                    for j in 0..s {
                        sf.push_block(params.index(vi, i, j), blk, i, j, -1.0);
                    }
                }
            }
            (Cone::Nonneg, _) => unreachable!("validated"),
        }
    }
    let sign = if problem.sense == Sense::Maximize { -1.0 } else { 1.0 };
    for (&(p, _, _), &v) in &collect(&params, &problem.objective) {
        sf.c[p] += sign * v;
    }

    // Equality rows: orthonormalize, dropping dependent rows.
    let m_orig = a_rows.len();
    let mut dense = DMatrix::<f64>::zeros(m_orig, n);
    for (i, row) in a_rows.iter().enumerate() {
        for &(p, v) in row {
            dense[(i, p)] += v;
        }
    }
    let reduced = match reduce_rows(&dense, &b) {
        Ok(r) => r,
        Err(msg) => return Ok(infeasible(problem, &msg)),
    };
    sf.a = reduced.a;
    sf.b = reduced.b;
    sf.finish();

    let res = ipm::solve(&sf, opts);

    let values: Vec<HermitianOperator> = problem
        .variables
        .iter()
        .enumerate()
        .map(|(vi, v)| {
            let s = v.size;
            let m = DMatrix::from_fn(s, s, |i, j| res.x[params.index(vi, i, j)]);
            from_dmat(&m)
        })
        .collect();
    let y_orig: Vec<f64> = (0..m_orig).map(|i| (0..reduced.t.nrows()).map(|r| reduced.t[(r, i)] * res.y[r]).sum()).collect();
    let duals = problem
        .constraints
        .iter()
        .zip(&slots)
        .map(|(c, slot)| match slot {
            Slot::Lp(row) => HermitianOperator::diagonal(&[res.z_lp[*row]]),
            Slot::Block(blk) => from_dmat(&res.z_blk[*blk]),
            Slot::Rows(list) => {
                let k = c.expr.size;
                let mut m = DMatrix::<f64>::zeros(k, k);
                for &(row, r, col) in list {
                    let y = -y_orig[row];
                    if r == col {
                        m[(r, r)] = y;
                    } else {
                        m[(r, col)] = 0.5 * y;
                        m[(col, r)] = 0.5 * y;
                    }
                }
                from_dmat(&m)
            }
        })
        .collect();

    let status = match res.status {
        IpmStatus::Converged => Status::Optimal,
        IpmStatus::PrimalInfeasible => Status::Infeasible,
        IpmStatus::DualInfeasible => Status::Unbounded,
        IpmStatus::Stopped => {
            if res.pres <= REPORT_RESIDUAL && res.dres <= REPORT_RESIDUAL && res.relgap <= REPORT_GAP {
                Status::Optimal
            } else if res.pres <= 1e-5 && res.dres <= 1e-5 && res.relgap <= 1e-4 {
                Status::NearOptimal
            } else {
                Status::Failed
            }
        }
    };
    let objective = problem.objective_value(&values);
    Ok(ConicSolution {
        status,
        values,
        duals,
        objective,
        dual_objective: sign * res.dcost,
        primal_residual: res.pres,
        dual_residual: res.dres,
        gap: res.relgap,
        iterations: res.iterations,
    })
}

fn infeasible(problem: &ConicProblem, _why: &str) -> ConicSolution {
    ConicSolution {
        status: Status::Infeasible,
        values: problem.variables.iter().map(|v| HermitianOperator::zeros(v.size)).collect(),
        duals: problem.constraints.iter().map(|c| HermitianOperator::zeros(c.expr.size)).collect(),
        objective: f64::NAN,
        dual_objective: f64::NAN,
        primal_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
        gap: f64::INFINITY,
        iterations: 0,
    }
}

struct Reduced {
    a: DMatrix<f64>,
    b: Vec<f64>,
    /// a = t · a_orig
    t: DMatrix<f64>,
}

/// Gram-Schmidt (applied twice) over the rows of `a`. Dependent rows are
/// dropped after checking consistency of `b`.
fn reduce_rows(a: &DMatrix<f64>, b: &[f64]) -> std::result::Result<Reduced, String> {
    let (m, n) = a.shape();
    let mut q: Vec<Vec<f64>> = Vec::new();
    let mut t: Vec<Vec<f64>> = Vec::new();
    let mut bq: Vec<f64> = Vec::new();
    for i in 0..m {
        let mut w: Vec<f64> = a.row(i).iter().copied().collect();
        let mut ti = vec![0.0; m];
        ti[i] = 1.0;
        let mut bi = b[i];
        let norm0 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        for _ in 0..2 {
            for (k, qk) in q.iter().enumerate() {
                let coef: f64 = qk.iter().zip(&w).map(|(x, y)| x * y).sum();
                if coef == 0.0 {
                    continue;
                }
                for (wj, qj) in w.iter_mut().zip(qk) {
                    *wj -= coef * qj;
                }
                for (tj, tk) in ti.iter_mut().zip(&t[k]) {
                    *tj -= coef * tk;
                }
                bi -= coef * bq[k];
            }
        }
        let nrm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm <= 1e-10 * norm0.max(1.0) {
            if bi.abs() > 1e-8 * (1.0 + b[i].abs()) {
                return Err(format!("inconsistent equality row {i} (residual {bi:.3e})"));
            }
            continue;
        }
        q.push(w.into_iter().map(|x| x / nrm).collect());
        t.push(ti.into_iter().map(|x| x / nrm).collect());
        bq.push(bi / nrm);
    }
    let r = q.len();
    Ok(Reduced {
        a: DMatrix::from_fn(r, n, |i, j| q[i][j]),
        b: bq,
        t: DMatrix::from_fn(r, m, |i, j| t[i][j]),
    })
}
