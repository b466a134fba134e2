//! Bicovariance and tele-covariance checks on the Choi level.

use num_complex::Complex64;

use super::{weyl_operators, BipartiteChannel};
use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix, HermitianOperator};

/// Finite unitary representations for a bicovariance identity
/// `N ∘ (U_g ⊗ V_h) = (W_{g,h} ⊗ Z_{g,h}) ∘ N`.
#[derive(Clone, Debug)]
pub struct CovarianceTable {
    pub input_a: Vec<CMatrix>,
    pub input_b: Vec<CMatrix>,
    /// (W, Z) at index `g * input_b.len() + h`.
    pub output: Vec<(CMatrix, CMatrix)>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TelecovReport {
    pub holds: bool,
    /// Largest entrywise Choi mismatch over all group elements.
    pub covariance_deviation: f64,
    /// Largest entrywise deviation of the input twirls from the trace-and-replace map.
    pub design_deviation: f64,
}

/// Choi of N ∘ (U ⊗ V): the transposes act on the reference systems.
fn precomposed(n: &BipartiteChannel, u: &CMatrix, v: &CMatrix) -> Result<HermitianOperator> {
    let sig = n.signature();
    let g = matcore::apply_local_unitary(n.choi(), &sig, &[0], &u.transpose())?;
    matcore::apply_local_unitary(&g, &sig, &[2], &v.transpose())
}

/// Choi of (W ⊗ Z) ∘ N.
fn postcomposed(n: &BipartiteChannel, w: &CMatrix, z: &CMatrix) -> Result<HermitianOperator> {
    let sig = n.signature();
    let g = matcore::apply_local_unitary(n.choi(), &sig, &[1], w)?;
    matcore::apply_local_unitary(&g, &sig, &[3], z)
}

/// max_{ij} ‖(1/|G|) Σ_g U_g E_ij U_g† − δ_ij 1/d‖_max
fn design_deviation(reps: &[CMatrix]) -> f64 {
    let d = reps[0].nrows();
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let mut acc = CMatrix::zeros(d, d);
            for u in reps {
                // U E_ij U† = col_i(U) col_j(U)†
                for r in 0..d {
                    for c in 0..d {
                        acc[(r, c)] += u[(r, i)] * u[(c, j)].conj();
                    }
                }
            }
            acc /= Complex64::new(reps.len() as f64, 0.0);
            for r in 0..d {
                for c in 0..d {
                    let want = if i == j && r == c { 1.0 / d as f64 } else { 0.0 };
                    worst = worst.max((acc[(r, c)] - Complex64::new(want, 0.0)).norm());
                }
            }
        }
    }
    worst
}

/// Verifies the covariance identity for every (g, h) and that both input
/// representations are unitary one-designs.
pub fn is_telecovariant(n: &BipartiteChannel, table: &CovarianceTable, tol: f64) -> Result<TelecovReport> {
    let d = n.dims();
    let (ng, nh) = (table.input_a.len(), table.input_b.len());
    if ng == 0 || nh == 0 || table.output.len() != ng * nh {
        return Err(Error::Dimension(format!(
            "table has {ng} x {nh} input elements and {} outputs",
            table.output.len()
        )));
    }
    let shape_ok = |m: &CMatrix, k: usize| m.nrows() == k && m.ncols() == k;
    if !table.input_a.iter().all(|u| shape_ok(u, d.a_in))
        || !table.input_b.iter().all(|v| shape_ok(v, d.b_in))
        || !table.output.iter().all(|(w, z)| shape_ok(w, d.a_out) && shape_ok(z, d.b_out))
    {
        return Err(Error::Dimension("representation dimension mismatch".into()));
    }
    let mut cov = 0.0f64;
    for (g, u) in table.input_a.iter().enumerate() {
        for (h, v) in table.input_b.iter().enumerate() {
            let (w, z) = &table.output[g * nh + h];
            let lhs = precomposed(n, u, v)?;
            let rhs = postcomposed(n, w, z)?;
            cov = cov.max(lhs.max_abs_diff(&rhs));
        }
    }
    let design = design_deviation(&table.input_a).max(design_deviation(&table.input_b));
    Ok(TelecovReport { holds: cov <= tol && design <= tol, covariance_deviation: cov, design_deviation: design })
}

/// Searches for output representations among products of Weyl operators,
/// with Weyl input representations on both parties. Returns `None` when some
/// input pair has no matching output pair.
pub fn weyl_covariance_table(n: &BipartiteChannel) -> Result<Option<CovarianceTable>> {
    let d = n.dims();
    if d.a_in < 2 || d.b_in < 2 || d.a_out < 2 || d.b_out < 2 {
        return Err(Error::InvalidArgument("Weyl search needs all dimensions >= 2".into()));
    }
    let in_a = weyl_operators(d.a_in);
    let in_b = weyl_operators(d.b_in);
    let out_a = weyl_operators(d.a_out);
    let out_b = weyl_operators(d.b_out);
    let mut candidates = Vec::with_capacity(out_a.len() * out_b.len());
    for w in &out_a {
        for z in &out_b {
            candidates.push((w.clone(), z.clone(), postcomposed(n, w, z)?));
        }
    }
    let mut output = Vec::with_capacity(in_a.len() * in_b.len());
    for u in &in_a {
        for v in &in_b {
            let lhs = precomposed(n, u, v)?;
            match candidates.iter().find(|(_, _, c)| c.max_abs_diff(&lhs) <= 1e-9) {
                Some((w, z, _)) => output.push((w.clone(), z.clone())),
                None => return Ok(None),
            }
        }
    }
    Ok(Some(CovarianceTable { input_a: in_a, input_b: in_b, output }))
}
