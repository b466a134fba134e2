//! Independent residual check of a returned solution against the
//! declarative problem.

use num_complex::Complex64;

use super::{Cone, ConicProblem, ConicSolution, ConstraintKind, Sense};
use crate::matcore::{CMatrix, HermitianOperator};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualReport {
    /// Largest relative violation of an equality constraint.
    pub primal_equality: f64,
    /// Largest violation of a `Geq` constraint or variable cone.
    pub primal_cone: f64,
    /// Largest violation of stationarity for free variables.
    pub dual_equality: f64,
    /// Largest violation of a dual cone.
    pub dual_cone: f64,
    /// Relative primal-dual objective gap.
    pub gap: f64,
    /// True when every entry is within ten times the tolerance.
    pub ok: bool,
}

fn scalar_violation(h: &HermitianOperator) -> f64 {
    (-h.min_eigenvalue()).max(0.0)
}

/// Recomputes primal feasibility, dual feasibility and the duality gap from
/// the returned variables and multipliers.
pub fn verify_solution(problem: &ConicProblem, sol: &ConicSolution, tol: f64) -> ResidualReport {
    let mut peq = 0.0f64;
    let mut pcone = 0.0f64;
    let mut dcone = 0.0f64;
    let mut deq = 0.0f64;

    for (c, y) in problem.constraints.iter().zip(&sol.duals) {
        let lhs = c.expr.eval(&sol.values);
        let scale = c.rhs.frobenius_norm().max(1.0);
        let Ok(diff) = lhs.sub(&c.rhs) else {
            peq = f64::INFINITY;
            continue;
        };
        match c.kind {
            ConstraintKind::Equal => peq = peq.max(diff.frobenius_norm() / scale),
            ConstraintKind::Geq => {
                pcone = pcone.max(scalar_violation(&diff) / scale);
                dcone = dcone.max(scalar_violation(y));
            }
        }
    }
    for (v, x) in problem.variables.iter().zip(&sol.values) {
        if v.cone != Cone::Free {
            pcone = pcone.max(scalar_violation(x) / x.frobenius_norm().max(1.0));
        }
    }

    // S = C − Σ L*(Y) in the minimization form
    let sizes: Vec<usize> = problem.variables.iter().map(|v| v.size).collect();
    let mut acc: Vec<Vec<Complex64>> = sizes.iter().map(|&n| vec![Complex64::new(0.0, 0.0); n * n]).collect();
    let sign = if problem.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let mut cobj: Vec<Vec<Complex64>> = acc.clone();
    problem.objective.adjoint_into(&HermitianOperator::identity(1).scale(sign), &mut cobj, &sizes);
    for (c, y) in problem.constraints.iter().zip(&sol.duals) {
        c.expr.adjoint_into(y, &mut acc, &sizes);
    }
    let cscale = cobj
        .iter()
        .map(|m| m.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum::<f64>()
        .sqrt()
        .max(1.0);
    for (i, v) in problem.variables.iter().enumerate() {
        let n = v.size;
        let m = CMatrix::from_fn(n, n, |a, b| cobj[i][a * n + b] - acc[i][a * n + b]);
        let s = HermitianOperator::hermitian_part(&m);
        match v.cone {
            Cone::Free => deq = deq.max(s.frobenius_norm() / cscale),
            _ => dcone = dcone.max(scalar_violation(&s) / cscale),
        }
    }

    let dual_min: f64 = problem
        .constraints
        .iter()
        .zip(&sol.duals)
        .map(|(c, y)| y.inner(&c.rhs))
        .sum();
    let primal = problem.objective_value(&sol.values);
    let gap = (sign * primal - dual_min).abs() / primal.abs().max(1.0);
    let lim = 10.0 * tol;
    let ok = [peq, pcone, deq, dcone, gap].iter().all(|&x| x <= lim);
    ResidualReport { primal_equality: peq, primal_cone: pcone, dual_equality: deq, dual_cone: dcone, gap, ok }
}
