//! Rewriting complex Hermitian problems as real symmetric ones.
//!
//! A complex variable V of side n becomes a real symmetric Z of side 2n read
//! through V = ½(Z₁₁ + Z₂₂) + ½i(Z₂₁ − Z₁₂). Every `Geq` constraint block O of
//! side k > 1 becomes [[Re O, −Im O],[Im O, Re O]] of side 2k. Equalities are
//! split into real and imaginary parts so no redundant rows appear.

use num_complex::Complex64;

use super::{Cone, ConicProblem, ConicSolution, Constraint, ConstraintKind, Entry, Expr, Field, VarId};
use crate::error::{Error, Result};
use crate::matcore::{CMatrix, HermitianOperator};

/// Real symmetric embedding of a constant Hermitian block.
pub fn embed_hermitian(h: &HermitianOperator) -> HermitianOperator {
    let k = h.dim();
    let m = CMatrix::from_fn(2 * k, 2 * k, |i, j| {
        let z = h.get(i % k, j % k);
        let v = match (i < k, j < k) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        };
        Complex64::new(v, 0.0)
    });
    HermitianOperator::hermitian_part(&m)
}

#[derive(Clone, Copy, Debug)]
enum VarEmbed {
    Same(VarId),
    Doubled(VarId, usize),
}

#[derive(Clone, Copy, Debug)]
enum ConsEmbed {
    Geq { idx: usize, k: usize, doubled: bool },
    Eq { re: usize, im: Option<usize>, k: usize },
}

pub(crate) struct Embedding {
    pub problem: ConicProblem,
    vars: Vec<VarEmbed>,
    cons: Vec<ConsEmbed>,
}

/// Equivalent real problem; see the module docs for the construction.
pub fn embed_complex(problem: &ConicProblem) -> Result<ConicProblem> {
    Ok(embed(problem)?.problem)
}

pub(crate) fn embed(problem: &ConicProblem) -> Result<Embedding> {
    problem.validate()?;
    for c in &problem.constraints {
        // rhs operators are Hermitian by construction; re-check the stored data
        HermitianOperator::new(c.rhs.dim(), c.rhs.entries().to_vec())
            .map_err(|_| Error::InvalidArgument(format!("{}: non-Hermitian constant block", c.name)))?;
    }
    let mut out = ConicProblem::new();
    let mut vars = Vec::with_capacity(problem.variables.len());
    for v in &problem.variables {
        if v.field == Field::Complex && v.size > 1 {
            let id = out.add_var(&v.name, 2 * v.size, v.cone, Field::Real);
            vars.push(VarEmbed::Doubled(id, v.size));
        } else {
            vars.push(VarEmbed::Same(out.add_var(&v.name, v.size, v.cone, Field::Real)));
        }
    }

    // V[a,b] as Σ w·Z[i,j]
    let subst = |v: VarId, a: usize, b: usize| -> Vec<(VarId, usize, usize, Complex64)> {
        match vars[v.0] {
            VarEmbed::Same(id) => vec![(id, a, b, Complex64::new(1.0, 0.0))],
            VarEmbed::Doubled(id, n) => vec![
                (id, a, b, Complex64::new(0.5, 0.0)),
                (id, n + a, n + b, Complex64::new(0.5, 0.0)),
                (id, n + a, b, Complex64::new(0.0, 0.5)),
                (id, a, n + b, Complex64::new(0.0, -0.5)),
            ],
        }
    };
    // Substituted entries grouped by new variable: (new var, out r, out c, Z i, Z j, κ)
    let substitute = |e: &Expr| -> Vec<(VarId, usize, usize, usize, usize, Complex64)> {
        let mut res = Vec::new();
        for (v, es) in &e.terms {
            for x in es {
                for (id, i, j, w) in subst(*v, x.src_row, x.src_col) {
                    res.push((id, x.row, x.col, i, j, x.coeff * w));
                }
            }
        }
        res
    };
    let build = |size: usize, items: Vec<(VarId, Entry)>| -> Expr {
        let mut terms: Vec<(VarId, Vec<Entry>)> = Vec::new();
        for (v, e) in items {
            match terms.iter_mut().find(|(id, _)| *id == v) {
                Some((_, es)) => es.push(e),
                None => terms.push((v, vec![e])),
            }
        }
        Expr { size, terms }
    };
    let real = |x: f64| Complex64::new(x, 0.0);
    let mk = |row, col, src_row, src_col, w: f64| Entry { row, col, src_row, src_col, coeff: real(w) };

    // objective: real part only (the 1×1 output is real for Hermitian maps)
    let obj_items = substitute(&problem.objective)
        .into_iter()
        .filter(|t| t.5.re != 0.0)
        .map(|(id, r, c, i, j, k)| (id, mk(r, c, i, j, k.re)))
        .collect();
    out.objective = build(1, obj_items);
    out.sense = problem.sense;

    let mut cons = Vec::with_capacity(problem.constraints.len());
    for c in &problem.constraints {
        let k = c.expr.size;
        let items = substitute(&c.expr);
        match c.kind {
            ConstraintKind::Geq if k > 1 => {
                let mut list = Vec::with_capacity(items.len() * 4);
                for (id, r, col, i, j, kap) in items {
                    if kap.re != 0.0 {
                        list.push((id, mk(r, col, i, j, kap.re)));
                        list.push((id, mk(k + r, k + col, i, j, kap.re)));
                    }
                    if kap.im != 0.0 {
                        list.push((id, mk(k + r, col, i, j, kap.im)));
                        list.push((id, mk(r, k + col, i, j, -kap.im)));
                    }
                }
                out.constraints.push(Constraint {
                    name: c.name.clone(),
                    expr: build(2 * k, list),
                    rhs: embed_hermitian(&c.rhs),
                    kind: ConstraintKind::Geq,
                });
                cons.push(ConsEmbed::Geq { idx: out.constraints.len() - 1, k, doubled: true });
            }
            ConstraintKind::Geq => {
                let list = items
                    .into_iter()
                    .filter(|t| t.5.re != 0.0)
                    .map(|(id, r, col, i, j, kap)| (id, mk(r, col, i, j, kap.re)))
                    .collect();
                out.constraints.push(Constraint {
                    name: c.name.clone(),
                    expr: build(1, list),
                    rhs: real_part(&c.rhs),
                    kind: ConstraintKind::Geq,
                });
                cons.push(ConsEmbed::Geq { idx: out.constraints.len() - 1, k, doubled: false });
            }
            ConstraintKind::Equal => {
                let mut re_list = Vec::new();
                let mut im_list = Vec::new();
                for (id, r, col, i, j, kap) in items {
                    if kap.re != 0.0 {
                        re_list.push((id, mk(r, col, i, j, kap.re)));
                    }
                    if kap.im != 0.0 && r < col {
                        im_list.push((id, mk(r, col, i, j, kap.im)));
                        im_list.push((id, mk(col, r, i, j, kap.im)));
                    }
                }
                out.constraints.push(Constraint {
                    name: format!("{}.re", c.name),
                    expr: build(k, re_list),
                    rhs: real_part(&c.rhs),
                    kind: ConstraintKind::Equal,
                });
                let re = out.constraints.len() - 1;
                let im_rhs = mirrored_imag(&c.rhs);
                let im = if im_list.is_empty() && im_rhs.frobenius_norm() == 0.0 {
                    None
                } else {
                    out.constraints.push(Constraint {
                        name: format!("{}.im", c.name),
                        expr: build(k, im_list),
                        rhs: im_rhs,
                        kind: ConstraintKind::Equal,
                    });
                    Some(out.constraints.len() - 1)
                };
                cons.push(ConsEmbed::Eq { re, im, k });
            }
        }
    }

    // Free complex variables: pin Z to the structured form so the extra
    // coordinates are not left unconstrained.
    for (v, emb) in problem.variables.iter().zip(&vars) {
        if let (Cone::Free, VarEmbed::Doubled(id, n)) = (v.cone, *emb) {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for r in 0..n {
                for col in 0..n {
                    a.push(mk(r, col, r, col, 1.0));
                    a.push(mk(r, col, n + r, n + col, -1.0));
                    b.push(mk(r, col, r, n + col, 1.0));
                    b.push(mk(r, col, n + r, col, 1.0));
                }
            }
            out.add_eq(&format!("{}.struct_re", v.name), Expr { size: n, terms: vec![(id, a)] }, HermitianOperator::zeros(n));
            out.add_eq(&format!("{}.struct_im", v.name), Expr { size: n, terms: vec![(id, b)] }, HermitianOperator::zeros(n));
        }
    }
    Ok(Embedding { problem: out, vars, cons })
}

fn real_part(h: &HermitianOperator) -> HermitianOperator {
    let k = h.dim();
    HermitianOperator::hermitian_part(&CMatrix::from_fn(k, k, |i, j| Complex64::new(h.get(i, j).re, 0.0)))
}

/// Real symmetric matrix carrying Im H[r,c] at both (r,c) and (c,r) for r < c.
fn mirrored_imag(h: &HermitianOperator) -> HermitianOperator {
    let k = h.dim();
    HermitianOperator::hermitian_part(&CMatrix::from_fn(k, k, |i, j| {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        Complex64::new(if a == b { 0.0 } else { h.get(a, b).im }, 0.0)
    }))
}

impl Embedding {
    /// Maps a solution of the embedded problem back to the original variables
    /// and constraints.
    pub(crate) fn recover(&self, original: &ConicProblem, sol: ConicSolution) -> ConicSolution {
        let values = self
            .vars
            .iter()
            .map(|e| match *e {
                VarEmbed::Same(id) => sol.values[id.0].clone(),
                VarEmbed::Doubled(id, n) => {
                    let z = &sol.values[id.0];
                    let m = CMatrix::from_fn(n, n, |a, b| {
                        let x = 0.5 * (z.get(a, b).re + z.get(n + a, n + b).re);
                        let y = 0.5 * (z.get(n + a, b).re - z.get(a, n + b).re);
                        Complex64::new(x, y)
                    });
                    HermitianOperator::hermitian_part(&m)
                }
            })
            .collect::<Vec<_>>();
        let duals = self
            .cons
            .iter()
            .map(|e| match *e {
                ConsEmbed::Geq { idx, k, doubled } => {
                    let z = &sol.duals[idx];
                    if !doubled {
                        return z.clone();
                    }
                    let m = CMatrix::from_fn(k, k, |a, b| {
                        let u = z.get(a, b).re + z.get(k + a, k + b).re;
                        let v = z.get(k + a, b).re - z.get(a, k + b).re;
                        Complex64::new(u, v)
                    });
                    HermitianOperator::hermitian_part(&m)
                }
                ConsEmbed::Eq { re, im, k } => {
                    let yr = &sol.duals[re];
                    let m = CMatrix::from_fn(k, k, |a, b| {
                        let v = match im {
                            Some(i) if a < b => sol.duals[i].get(a, b).re,
                            Some(i) if a > b => -sol.duals[i].get(b, a).re,
                            _ => 0.0,
                        };
                        Complex64::new(yr.get(a, b).re, v)
                    });
                    HermitianOperator::hermitian_part(&m)
                }
            })
            .collect();
        let objective = original.objective_value(&values);
        ConicSolution { values, duals, objective, ..sol }
    }
}
