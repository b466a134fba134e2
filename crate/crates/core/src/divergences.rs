//! State divergences and conditional entropies.
//!
//! Closed forms go through eigendecompositions; the hypothesis-testing
//! divergence, the smoothed max-divergence and the optimized conditional
//! min-entropy are semidefinite programs. Values are in bits and `+∞` is
//! `f64::INFINITY`.

use num_complex::Complex64;

use crate::conic::{self, Cone, ConicProblem, ConicSolution, Entry, Expr, Status, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix, DimSignature, HermitianOperator};
use crate::optimize;

/// Largest kernel weight tolerated before a support condition counts as violated.
const SUPPORT_LEAK: f64 = 1e-9;

/// Largest smoothing/error parameter accepted by the hypothesis-testing quantities.
pub const EPS_MAX: f64 = 1.0 - 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenyiFamily {
    Sandwiched,
    Petz,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenyiOrder {
    alpha: f64,
    family: RenyiFamily,
}

impl RenyiOrder {
    /// Sandwiched order, α ∈ [1/2, ∞] (∞ allowed).
    pub fn sandwiched(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.5 {
            return Err(Error::InvalidArgument(format!("sandwiched order must be >= 1/2, got {alpha}")));
        }
        Ok(Self { alpha, family: RenyiFamily::Sandwiched })
    }

    /// Petz order, α ∈ [0, 2].
    pub fn petz(alpha: f64) -> Result<Self> {
        if !(0.0..=2.0).contains(&alpha) {
            return Err(Error::InvalidArgument(format!("Petz order must lie in [0, 2], got {alpha}")));
        }
        Ok(Self { alpha, family: RenyiFamily::Petz })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn family(&self) -> RenyiFamily {
        self.family
    }
}

/// Which purified-distance ball a smoothing radius refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ball {
    StatePurifiedDistance,
    ChoiPurifiedDistance,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothRadius {
    pub epsilon: f64,
    pub ball: Ball,
}

impl SmoothRadius {
    pub fn new(epsilon: f64, ball: Ball) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidArgument(format!("smoothing radius {epsilon} outside [0,1]")));
        }
        Ok(Self { epsilon, ball })
    }

    pub fn state(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, Ball::StatePurifiedDistance)
    }
}

/// Whether supp ρ ⊆ supp σ under the shared rank rule.
fn support_contained(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<bool> {
    rho.check_same(sigma)?;
    let d = sigma.dim();
    let perp = HermitianOperator::identity(d).sub(&sigma.support_projector())?;
    let leak = rho.conjugate(&perp.to_matrix())?.max_eigenvalue();
    Ok(leak <= SUPPORT_LEAK * rho.trace().abs().max(1.0))
}

pub(crate) fn require_usable(sol: ConicSolution, what: &str) -> Result<ConicSolution> {
    if sol.status.is_usable() {
        Ok(sol)
    } else {
        Err(Error::Solver(format!(
            "{what}: status {} (primal residual {:.2e}, dual residual {:.2e}, gap {:.2e})",
            sol.status.as_str(),
            sol.primal_residual,
            sol.dual_residual,
            sol.gap
        )))
    }
}

/// D(ρ‖σ) = tr ρ(log ρ − log σ), `+∞` unless supp ρ ⊆ supp σ.
pub fn rel_entropy(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    if !support_contained(rho, sigma)? {
        return Ok(f64::INFINITY);
    }
    let lr = rho.psd_log2()?;
    let ls = sigma.psd_log2()?;
    Ok(rho.inner(&lr) - rho.inner(&ls))
}

/// D_max(ρ‖σ) = log λ_max(σ^{−1/2} ρ σ^{−1/2}) on the support of σ.
pub fn dmax(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    if !support_contained(rho, sigma)? {
        return Ok(f64::INFINITY);
    }
    let s = sigma.psd_sqrt(true)?;
    let m = rho.conjugate(&s.to_matrix())?;
    Ok(m.max_eigenvalue().log2())
}

/// D_H^ε(ρ‖σ) = −log min{tr Λσ : 0 ⪯ Λ ⪯ 1, tr Λρ ≥ 1 − ε}. ε is clamped to
/// [`EPS_MAX`]; ε = 0 uses the support-projector closed form.
pub fn dhyp(rho: &HermitianOperator, sigma: &HermitianOperator, epsilon: f64) -> Result<f64> {
    rho.check_same(sigma)?;
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside [0,1]")));
    }
    let eps = epsilon.min(EPS_MAX);
    if eps == 0.0 {
        let t = rho.support_projector().inner(sigma);
        return Ok(if t > 0.0 { -t.log2() } else { f64::INFINITY });
    }
    let d = rho.dim();
    let mut p = ConicProblem::new();
    let lam = p.herm_var("Lambda", d, Cone::Psd);
    p.add_geq("upper", Expr::var(lam, d).scaled(-1.0), HermitianOperator::identity(d).scale(-1.0));
    p.add_geq("accept", Expr::inner(lam, rho), HermitianOperator::identity(1).scale(1.0 - eps));
    p.minimize(Expr::inner(lam, sigma));
    let sol = require_usable(conic::solve(&p, DEFAULT_TOL)?, "hypothesis testing SDP")?;
    let v = sol.objective.max(sol.dual_objective).max(0.0);
    Ok(if v > 0.0 { -v.log2() } else { f64::INFINITY })
}

/// Rényi divergence of the given family; α = 1 and α = ∞ dispatch to
/// [`rel_entropy`] and [`dmax`].
pub fn renyi(rho: &HermitianOperator, sigma: &HermitianOperator, order: RenyiOrder) -> Result<f64> {
    rho.check_same(sigma)?;
    let a = order.alpha;
    if a == 1.0 {
        return rel_entropy(rho, sigma);
    }
    if a.is_infinite() {
        return dmax(rho, sigma);
    }
    let contained = support_contained(rho, sigma)?;
    if a > 1.0 && !contained {
        return Ok(f64::INFINITY);
    }
    let q = match order.family {
        RenyiFamily::Petz => {
            if a == 0.0 {
                rho.support_projector().inner(sigma)
            } else {
                rho.psd_power(a)?.inner(&sigma.psd_power(1.0 - a)?)
            }
        }
        RenyiFamily::Sandwiched => {
            let g = sigma.psd_power((1.0 - a) / (2.0 * a))?;
            let inner = rho.conjugate(&g.to_matrix())?;
            inner.psd_power(a)?.trace()
        }
    };
    if q <= 0.0 {
        return Ok(f64::INFINITY);
    }
    if a == 0.0 {
        return Ok(-q.log2());
    }
    Ok(q.log2() / (a - 1.0))
}

pub fn vn_entropy(rho: &HermitianOperator) -> Result<f64> {
    Ok(matcore::spectral_entropy(&rho.psd_eigh()?.values))
}

fn bipartite(rho: &HermitianOperator, da: usize, db: usize) -> Result<DimSignature> {
    if da * db != rho.dim() {
        return Err(Error::Dimension(format!("{da} x {db} does not match operator dim {}", rho.dim())));
    }
    DimSignature::new(&[da, db])
}

/// S(A|B) = S(AB) − S(B).
pub fn cond_vn_entropy_state(rho: &HermitianOperator, da: usize, db: usize) -> Result<f64> {
    let sig = bipartite(rho, da, db)?;
    let rb = matcore::partial_trace(rho, &sig, &[1])?;
    Ok(vn_entropy(rho)? - vn_entropy(&rb)?)
}

/// S_∞(A|B) = −log sup{tr ρX : tr_A X = 1_B, X ⪰ 0}.
pub fn cond_min_entropy_state(rho: &HermitianOperator, da: usize, db: usize) -> Result<f64> {
    let sig = bipartite(rho, da, db)?;
    let n = da * db;
    let mut p = ConicProblem::new();
    let x = p.herm_var("X", n, Cone::Psd);
    p.add_eq("marginal", Expr::partial_trace(x, &sig, &[1])?, HermitianOperator::identity(db));
    p.maximize(Expr::inner(x, rho));
    let sol = require_usable(conic::solve(&p, DEFAULT_TOL)?, "conditional min-entropy SDP")?;
    Ok(-sol.objective.log2())
}

/// S^↓_∞(A|B) = −D_max(ρ_AB ‖ 1_A ⊗ ρ_B).
pub fn cond_min_entropy_down_state(rho: &HermitianOperator, da: usize, db: usize) -> Result<f64> {
    let sig = bipartite(rho, da, db)?;
    let rb = matcore::partial_trace(rho, &sig, &[1])?;
    Ok(-dmax(rho, &HermitianOperator::identity(da).kron(&rb))?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CondRenyiResult {
    pub value: f64,
    /// True for closed forms, or when some local search converged.
    pub converged: bool,
    /// Heuristic divergence minus the grid minimum (qubit conditioners only);
    /// at most a small positive number when the heuristic is sound.
    pub grid_gap: Option<f64>,
}

/// Density operator G G†/tr from 2d² real parameters.
fn state_from_params(x: &[f64], d: usize) -> HermitianOperator {
    let g = CMatrix::from_fn(d, d, |i, j| Complex64::new(x[2 * (i * d + j)], x[2 * (i * d + j) + 1]));
    let m = &g * g.adjoint();
    let h = HermitianOperator::hermitian_part(&m);
    let t = h.trace();
    h.scale(1.0 / t)
}

/// S_α(A|B) = −inf_σ D_α(ρ_AB ‖ 1_A ⊗ σ_B). The Petz family uses the
/// closed-form optimizer σ ∝ (tr_A ρ^α)^{1/α}; the sandwiched family runs a
/// seeded multi-start local search over σ and, for a qubit B, compares with a
/// Bloch-ball grid.
pub fn renyi_cond_entropy_state(rho: &HermitianOperator, da: usize, db: usize, order: RenyiOrder) -> Result<CondRenyiResult> {
    let sig = bipartite(rho, da, db)?;
    let a = order.alpha;
    let closed = |value: f64| Ok(CondRenyiResult { value, converged: true, grid_gap: None });
    if a == 1.0 {
        return closed(cond_vn_entropy_state(rho, da, db)?);
    }
    if a.is_infinite() {
        return closed(cond_min_entropy_state(rho, da, db)?);
    }
    if order.family == RenyiFamily::Petz {
        if a == 0.0 {
            let w = matcore::partial_trace(&rho.support_projector(), &sig, &[1])?;
            return closed(w.max_eigenvalue().log2());
        }
        let w = matcore::partial_trace(&rho.psd_power(a)?, &sig, &[1])?;
        let t = w.psd_power(1.0 / a)?.trace();
        return closed(a / (1.0 - a) * t.log2());
    }
    let id = HermitianOperator::identity(da);
    let objective = |x: &[f64]| -> f64 {
        let s = state_from_params(x, db);
        renyi(rho, &id.kron(&s), order).unwrap_or(f64::INFINITY)
    };
    let (best, converged) = optimize::multi_start(&objective, 2 * db * db, 8, 0x5eed, 300);
    let grid_gap = if db == 2 {
        let paulis = crate::channels::paulis();
        let steps = 20;
        let mut grid_min = f64::INFINITY;
        for i in 0..=steps {
            for j in 0..=steps {
                for k in 0..=steps {
                    let r = [i, j, k].map(|t| -1.0 + 2.0 * t as f64 / steps as f64);
                    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
                    if norm > 0.999 {
                        continue;
                    }
                    let m = (&paulis[0] + &paulis[1] * Complex64::new(r[0], 0.0) + &paulis[2] * Complex64::new(r[1], 0.0) + &paulis[3] * Complex64::new(r[2], 0.0)) * Complex64::new(0.5, 0.0);
                    let s = HermitianOperator::hermitian_part(&m);
                    grid_min = grid_min.min(renyi(rho, &id.kron(&s), order).unwrap_or(f64::INFINITY));
                }
            }
        }
        Some(best.value - grid_min)
    } else {
        None
    };
    Ok(CondRenyiResult { value: -best.value, converged: converged > 0, grid_gap })
}

/// Scalar Σ coeff·Z[i,i] over the diagonal of the block starting at `off`.
fn block_trace(z: conic::VarId, off: usize, len: usize) -> Expr {
    let es = (0..len)
        .map(|i| Entry { row: 0, col: 0, src_row: off + i, src_col: off + i, coeff: Complex64::new(1.0, 0.0) })
        .collect();
    Expr { size: 1, terms: vec![(z, es)] }
}

/// Fidelity ball around ρ: adds Z = [[D, Y],[Y†, ρ']] ⪰ 0 with ρ = V D V† on
/// its support and Re tr(V Y) ≥ √(1 − ε²), so that F(ρ, ρ') ≥ √(1 − ε²).
/// Restricting to the support keeps the program strictly feasible for
/// rank-deficient ρ. Returns Z and the offset of the ρ' block.
pub(crate) fn add_fidelity_ball(p: &mut ConicProblem, rho: &HermitianOperator, epsilon: f64) -> Result<(conic::VarId, usize)> {
    let d = rho.dim();
    let eig = rho.psd_eigh()?;
    let cut = matcore::support_cutoff(&eig.values);
    let r = eig.values.iter().filter(|&&v| v > cut).count();
    let z = p.herm_var("Z", r + d, Cone::Psd);
    p.add_eq("fixed", Expr::principal_block(z, 0, r), HermitianOperator::diagonal(&eig.values[..r]));
    let mut es = Vec::with_capacity(2 * r * d);
    for k in 0..r {
        for i in 0..d {
            let c = eig.vectors[(i, k)] * 0.5;
            if c.norm() == 0.0 {
                continue;
            }
            es.push(Entry { row: 0, col: 0, src_row: k, src_col: r + i, coeff: c });
            es.push(Entry { row: 0, col: 0, src_row: r + i, src_col: k, coeff: c.conj() });
        }
    }
    p.add_geq(
        "fidelity",
        Expr { size: 1, terms: vec![(z, es)] },
        HermitianOperator::identity(1).scale((1.0 - epsilon * epsilon).max(0.0).sqrt()),
    );
    Ok((z, r))
}

/// D_max^ε(ρ‖σ) = inf over subnormalized ρ' with P(ρ, ρ') ≤ ε of D_max(ρ'‖σ).
/// ε = 0 dispatches to [`dmax`].
pub fn smoothed_dmax_state(rho: &HermitianOperator, sigma: &HermitianOperator, radius: SmoothRadius) -> Result<f64> {
    rho.check_same(sigma)?;
    rho.check_state(1e-8)?;
    let eps = radius.epsilon;
    if eps >= 1.0 {
        return Err(Error::InvalidArgument("smoothing radius must be < 1".into()));
    }
    if eps == 0.0 {
        return dmax(rho, sigma);
    }
    let d = rho.dim();
    let mut p = ConicProblem::new();
    let (z, off) = add_fidelity_ball(&mut p, rho, eps)?;
    let lam = p.scalar_var("lambda", Cone::Nonneg);
    p.add_geq("subnormalized", block_trace(z, off, d).scaled(-1.0), HermitianOperator::identity(1).scale(-1.0));
    p.add_geq(
        "dominated",
        Expr::scalar_times(lam, sigma).minus(Expr::principal_block(z, off, d))?,
        HermitianOperator::zeros(d),
    );
    p.minimize(Expr::scalar(lam));
    let sol = conic::solve(&p, DEFAULT_TOL)?;
    if sol.status == Status::Infeasible {
        return Ok(f64::INFINITY);
    }
    let sol = require_usable(sol, "smoothed max-divergence SDP")?;
    Ok(sol.objective.log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn ket0() -> HermitianOperator {
        HermitianOperator::diagonal(&[1.0, 0.0])
    }

    #[test]
    fn basic_values() {
        let pi = HermitianOperator::maximally_mixed(2);
        assert!((rel_entropy(&ket0(), &pi).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(rel_entropy(&ket0(), &HermitianOperator::diagonal(&[0.0, 1.0])).unwrap(), f64::INFINITY);
        assert!((dmax(&ket0(), &pi).unwrap() - 1.0).abs() < 1e-12);
        assert!(dmax(&pi, &pi).unwrap().abs() < 1e-12);
        assert!((dhyp(&ket0(), &pi, 0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dhyp_self_is_log_inverse_acceptance() {
        let mut rng = random::rng(1);
        let rho = random::random_state(&mut rng, 3, 3);
        for eps in [0.1, 0.3, 0.6] {
            let v = dhyp(&rho, &rho, eps).unwrap();
            assert!((v + (1.0f64 - eps).log2()).abs() < 1e-6, "{eps}: {v}");
        }
    }

    #[test]
    fn smoothing_at_zero_is_dmax_and_self_is_nonpositive() {
        let mut rng = random::rng(2);
        let rho = random::random_state(&mut rng, 2, 2);
        let sigma = random::random_state(&mut rng, 2, 2);
        let r0 = SmoothRadius::state(0.0).unwrap();
        assert_eq!(smoothed_dmax_state(&rho, &sigma, r0).unwrap(), dmax(&rho, &sigma).unwrap());
        let v = smoothed_dmax_state(&rho, &rho, SmoothRadius::state(0.2).unwrap()).unwrap();
        assert!(v <= 1e-6, "{v}");
    }
}
