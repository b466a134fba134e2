//! Plain-text rendering of a problem for debugging.
//!
//! One record per line: `var`, `objective`, `constraint`, then `term` lines
//! (`term <var> <row> <col> <src_row> <src_col> <re> <im>`) and `rhs` lines
//! for the nonzero constant entries.

use std::fmt::Write;

use super::{Cone, ConicProblem, ConstraintKind, Expr, Field, Sense};

fn terms(out: &mut String, problem: &ConicProblem, e: &Expr) {
    for (v, es) in &e.terms {
        let name = &problem.variables[v.0].name;
        for x in es {
            let _ = writeln!(
                out,
                "term {name} {} {} {} {} {:.17e} {:.17e}",
                x.row, x.col, x.src_row, x.src_col, x.coeff.re, x.coeff.im
            );
        }
    }
}

pub fn dump(problem: &ConicProblem) -> String {
    let mut out = String::new();
    for v in &problem.variables {
        let cone = match v.cone {
            Cone::Psd => "psd",
            Cone::Nonneg => "nonneg",
            Cone::Free => "free",
        };
        let field = match v.field {
            Field::Real => "real",
            Field::Complex => "complex",
        };
        let _ = writeln!(out, "var {} {} {cone} {field}", v.name, v.size);
    }
    let sense = match problem.sense {
        Sense::Minimize => "minimize",
        Sense::Maximize => "maximize",
    };
    let _ = writeln!(out, "objective {sense}");
    terms(&mut out, problem, &problem.objective);
    for c in &problem.constraints {
        let kind = match c.kind {
            ConstraintKind::Equal => "eq",
            ConstraintKind::Geq => "geq",
        };
        let _ = writeln!(out, "constraint {} {kind} {}", c.name, c.expr.size);
        terms(&mut out, problem, &c.expr);
        let k = c.rhs.dim();
        for i in 0..k {
            for j in 0..k {
                let z = c.rhs.get(i, j);
                if z.norm() != 0.0 {
                    let _ = writeln!(out, "rhs {i} {j} {:.17e} {:.17e}", z.re, z.im);
                }
            }
        }
    }
    out
}
