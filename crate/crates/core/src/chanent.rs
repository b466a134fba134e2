//! Channel divergences and conditional entropies of bipartite channels.
//!
//! The conditional min-entropy is the semidefinite program
//!
//! ```text
//! S_∞[A|B] = −log min{ tr M/|B'| : Γ ⪯ 1_{R_A A} ⊗ M, M ⪰ 0, tr_B M = (tr M/|B'|)·1_{R_B} }
//! ```
//!
//! over operators `M` on `R_B B`. Replacing `1_{R_A A}` by `1_{R_A} ⊗ γ` gives
//! the thermal variant used by [`crate::resource`]. Quantities that have no
//! exact program here (smoothed, hypothesis testing, no-signalling von Neumann)
//! come as brackets or flagged one-sided bounds.

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{is_telecovariant, BipartiteChannel, ChannelDims, CovarianceTable, TelecovReport};
use crate::conic::{self, Cone, ConicProblem, ConicSolution, Entry, Expr, VarId, DEFAULT_TOL};
use crate::divergences::{self, require_usable, EPS_MAX};
use crate::error::{Error, Result};
use crate::matcore::{self, DimSignature, HermitianOperator};
use crate::optimize;
use crate::random;

/// Largest real embedded dimension accepted for a single PSD block.
pub const MAX_EMBEDDED_DIM: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Sdp,
    ClosedForm,
    HeuristicLower,
    HeuristicUpper,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Sdp => "sdp",
            Method::ClosedForm => "closed-form",
            Method::HeuristicLower => "heuristic-lower",
            Method::HeuristicUpper => "heuristic-upper",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverDiagnostics {
    pub status: &'static str,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub iterations: usize,
}

impl From<&ConicSolution> for SolverDiagnostics {
    fn from(s: &ConicSolution) -> Self {
        Self {
            status: s.status.as_str(),
            primal_residual: s.primal_residual,
            dual_residual: s.dual_residual,
            gap: s.gap,
            iterations: s.iterations,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchDiagnostics {
    pub starts: usize,
    pub converged: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelEntropyResult {
    pub value: f64,
    pub method: Method,
    pub bracket: Option<(f64, f64)>,
    pub solver: Option<SolverDiagnostics>,
    pub search: Option<SearchDiagnostics>,
    /// Set when the value comes from the Choi-ball relaxation of a smoothed quantity.
    pub relaxed: bool,
}

impl ChannelEntropyResult {
    fn closed(value: f64) -> Self {
        Self { value, method: Method::ClosedForm, bracket: None, solver: None, search: None, relaxed: false }
    }

    /// lower − tol ≤ value ≤ upper + tol, vacuous without a bracket.
    pub fn bracket_contains(&self, tol: f64) -> bool {
        self.bracket.is_none_or(|(lo, up)| lo - tol <= self.value && self.value <= up + tol)
    }
}

/// Multi-start settings for the input-state searches.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub starts: usize,
    pub seed: u64,
    pub max_iter: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { starts: 32, seed: 0x5eed, max_iter: 200 }
    }
}

/// How the channel smoothing radius translates into a Choi-state radius.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BallConvention {
    /// Channel ball ½·P ≤ ε, Choi radius 2ε.
    HalfBall,
    /// Channel ball P ≤ ε, Choi radius ε.
    #[default]
    FullBall,
}

impl BallConvention {
    pub fn choi_radius(&self, epsilon: f64) -> f64 {
        match self {
            BallConvention::HalfBall => (2.0 * epsilon).min(1.0),
            BallConvention::FullBall => epsilon,
        }
    }
}

/// The −log|A'| shift between Choi-state and channel quantities.
pub fn choi_shift(dims: ChannelDims) -> f64 {
    (dims.a_in as f64).log2()
}

fn check_dims(n: &BipartiteChannel, m: &BipartiteChannel) -> Result<()> {
    if n.dims() != m.dims() {
        return Err(Error::Dimension(format!("channel dims {:?} vs {:?}", n.dims(), m.dims())));
    }
    Ok(())
}

/// D_∞[N‖M] = D_max(Γ^N ‖ Γ^M).
pub fn channel_dmax(n: &BipartiteChannel, m: &BipartiteChannel) -> Result<f64> {
    check_dims(n, m)?;
    divergences::dmax(n.choi(), m.choi())
}

/// Scalar-to-matrix map M ↦ (tr M / k)·1_k for M of side `n`.
fn trace_times_identity(v: VarId, n: usize, k: usize) -> Expr {
    let c = Complex64::new(1.0 / k as f64, 0.0);
    let es = (0..k).flat_map(|r| (0..n).map(move |i| Entry { row: r, col: r, src_row: i, src_col: i, coeff: c })).collect();
    Expr { size: k, terms: vec![(v, es)] }
}

/// Shifts every source index of `e` by `off`, addressing a diagonal block.
fn offset_source(mut e: Expr, off: usize) -> Expr {
    for (_, es) in e.terms.iter_mut() {
        for x in es.iter_mut() {
            x.src_row += off;
            x.src_col += off;
        }
    }
    e
}

fn guard_size(side: usize) -> Result<()> {
    if 2 * side > MAX_EMBEDDED_DIM {
        return Err(Error::Capacity(format!(
            "PSD block of side {side} embeds to {} > {MAX_EMBEDDED_DIM}",
            2 * side
        )));
    }
    Ok(())
}

/// Adds `M` on `R_B B` with the side-channel marginal constraint and the
/// objective tr M/|B'|.
fn side_variable(p: &mut ConicProblem, d: ChannelDims) -> Result<VarId> {
    let nb = d.b_in * d.b_out;
    let m = p.herm_var("M", nb, Cone::Psd);
    let sig = DimSignature::new(&[d.b_in, d.b_out])?;
    p.add_eq(
        "side-marginal",
        Expr::partial_trace(m, &sig, &[0])?.minus(trace_times_identity(m, nb, d.b_in))?,
        HermitianOperator::zeros(d.b_in),
    );
    p.minimize(Expr::trace(m, nb).scaled(1.0 / d.b_in as f64));
    Ok(m)
}

/// min{ tr M/|B'| : Γ ⪯ K ⊗ M, ... } for a kernel K on `R_A A`.
pub(crate) fn min_side_operator(n: &BipartiteChannel, kernel: &HermitianOperator) -> Result<ConicSolution> {
    let d = n.dims();
    if kernel.dim() != d.a_in * d.a_out {
        return Err(Error::Dimension(format!("kernel dim {} vs |R_A A| = {}", kernel.dim(), d.a_in * d.a_out)));
    }
    guard_size(d.choi_dim())?;
    let mut p = ConicProblem::new();
    let m = side_variable(&mut p, d)?;
    let nb = d.b_in * d.b_out;
    p.add_geq("dominance", Expr::kron_const_left(kernel, m, nb), n.choi().clone());
    require_usable(conic::solve(&p, DEFAULT_TOL)?, "conditional min-entropy SDP")
}

/// Choi-ball relaxation of min{ tr M/|B'| : Γ' ⪯ K ⊗ M } over Choi operators
/// Γ' of channels whose Choi states lie within purified distance `radius` of Φ^N.
pub(crate) fn min_side_operator_smoothed(n: &BipartiteChannel, kernel: &HermitianOperator, radius: f64) -> Result<ConicSolution> {
    let d = n.dims();
    let nc = d.choi_dim();
    guard_size(2 * nc)?;
    let din = d.input() as f64;
    let mut p = ConicProblem::new();
    let m = side_variable(&mut p, d)?;
    let nb = d.b_in * d.b_out;
    let (z, off) = divergences::add_fidelity_ball(&mut p, &n.choi_state(), radius)?;
    let sig = n.signature();
    p.add_eq(
        "cptp",
        offset_source(Expr::partial_trace(z, &sig, &[0, 2])?, off),
        HermitianOperator::maximally_mixed(d.input()),
    );
    p.add_geq(
        "dominance",
        Expr::kron_const_left(kernel, m, nb).minus(Expr::principal_block(z, off, nc).scaled(din))?,
        HermitianOperator::zeros(nc),
    );
    require_usable(conic::solve(&p, DEFAULT_TOL)?, "smoothed conditional min-entropy SDP")
}

fn sdp_only(n: &BipartiteChannel) -> Result<ChannelEntropyResult> {
    let d = n.dims();
    let sol = min_side_operator(n, &HermitianOperator::identity(d.a_in * d.a_out))?;
    Ok(ChannelEntropyResult {
        value: -sol.objective.log2(),
        method: Method::Sdp,
        bracket: None,
        solver: Some((&sol).into()),
        search: None,
        relaxed: false,
    })
}

/// S_∞[A|B] by its SDP, carrying the Choi-state brackets.
pub fn cond_min_entropy_channel(n: &BipartiteChannel) -> Result<ChannelEntropyResult> {
    let mut r = sdp_only(n)?;
    r.bracket = Some(choi_brackets(n)?);
    Ok(r)
}

/// S_∞[A|B] without the brackets, for large tensor powers.
pub fn cond_min_entropy_channel_value(n: &BipartiteChannel) -> Result<f64> {
    Ok(sdp_only(n)?.value)
}

fn parties(n: &BipartiteChannel) -> (usize, usize) {
    let d = n.dims();
    (d.a_in * d.a_out, d.b_in * d.b_out)
}

/// (S^↓_∞(R_AA|R_BB)_Φ − log|A'|, S_∞(R_AA|R_BB)_Φ − log|A'|).
pub fn choi_brackets(n: &BipartiteChannel) -> Result<(f64, f64)> {
    let (da, db) = parties(n);
    let phi = n.choi_state();
    let shift = choi_shift(n.dims());
    let lower = divergences::cond_min_entropy_down_state(&phi, da, db)? - shift;
    let upper = divergences::cond_min_entropy_state(&phi, da, db)? - shift;
    Ok((lower, upper))
}

/// S(R_AA|R_BB)_Φ − log|A'|.
pub fn choi_vn_value(n: &BipartiteChannel) -> Result<f64> {
    let (da, db) = parties(n);
    Ok(divergences::cond_vn_entropy_state(&n.choi_state(), da, db)? - choi_shift(n.dims()))
}

/// S^↓_∞(A|R_A R_B B)_Φ.
pub fn ns_cond_min_entropy(n: &BipartiteChannel) -> Result<f64> {
    let d = n.dims();
    let phi = matcore::permute_subsystems(&n.choi_state(), &n.signature(), &[1, 0, 2, 3])?;
    divergences::cond_min_entropy_down_state(&phi, d.a_out, d.a_in * d.b_in * d.b_out)
}

#[derive(Clone, Copy, Debug)]
pub enum VnMode<'a> {
    /// Exact Choi formula, allowed only when the table certifies tele-covariance.
    Telecov(&'a CovarianceTable),
    /// min over pure inputs ψ_{RA'B'} of S(A|RB), an upper bound on the no-signalling value.
    NoSignalHeuristic(SearchOptions),
}

/// Tolerance for accepting a tele-covariance certificate.
pub const TELECOV_TOL: f64 = 1e-8;

pub fn telecov_certificate(n: &BipartiteChannel, table: &CovarianceTable) -> Result<TelecovReport> {
    let rep = is_telecovariant(n, table, TELECOV_TOL)?;
    if !rep.holds {
        return Err(Error::Certificate(format!(
            "tele-covariance fails (covariance {:.2e}, design {:.2e})",
            rep.covariance_deviation, rep.design_deviation
        )));
    }
    Ok(rep)
}

/// Pure state on `len` amplitudes from 2·len real parameters.
fn pure_from_params(x: &[f64]) -> HermitianOperator {
    let v: Vec<Complex64> = x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    HermitianOperator::outer(&v.iter().map(|z| z / norm).collect::<Vec<_>>())
}

/// Maximally entangled input between a reference of dim |A'||B'| and A'B'.
fn max_entangled_input(din: usize) -> HermitianOperator {
    HermitianOperator::gamma(din).scale(1.0 / din as f64)
}

/// S(A|RB) of (id_R ⊗ N)(ψ).
fn ns_objective(n: &BipartiteChannel, psi: &HermitianOperator, r: usize) -> Result<f64> {
    let d = n.dims();
    let out = n.apply_with_reference(psi, r)?;
    let sig = DimSignature::new(&[r, d.a_out, d.b_out])?;
    let arb = matcore::permute_subsystems(&out, &sig, &[1, 0, 2])?;
    divergences::cond_vn_entropy_state(&arb, d.a_out, r * d.b_out)
}

pub fn cond_vn_entropy_channel(n: &BipartiteChannel, mode: VnMode<'_>) -> Result<ChannelEntropyResult> {
    match mode {
        VnMode::Telecov(table) => {
            telecov_certificate(n, table)?;
            Ok(ChannelEntropyResult::closed(choi_vn_value(n)?))
        }
        VnMode::NoSignalHeuristic(opts) => {
            let din = n.dims().input();
            let f = |x: &[f64]| ns_objective(n, &pure_from_params(x), din).unwrap_or(f64::INFINITY);
            let at_phi = ns_objective(n, &max_entangled_input(din), din)?;
            let (best, converged) = optimize::multi_start(&f, 2 * din * din, opts.starts, opts.seed, opts.max_iter);
            Ok(ChannelEntropyResult {
                value: best.value.min(at_phi),
                method: Method::HeuristicUpper,
                bracket: None,
                solver: None,
                search: Some(SearchDiagnostics { starts: opts.starts, converged, seed: opts.seed }),
                relaxed: false,
            })
        }
    }
}

/// Two-sided estimate of inf_Q D_H^ε[N ‖ R^K ⊗ Q], where R^K has Choi
/// operator K on `R_A A` (K = 1 for the conditional entropy, 1 ⊗ γ for athermality).
#[derive(Clone, Debug)]
pub(crate) struct HypDivergence {
    /// inf over Q at the maximally entangled input: an SDP value and a valid lower bound.
    pub lower: f64,
    /// sup over searched inputs at fixed Q: heuristic upper bound.
    pub upper: f64,
    pub solver: SolverDiagnostics,
    pub search: SearchDiagnostics,
}

pub(crate) fn hyp_divergence(n: &BipartiteChannel, kernel: &HermitianOperator, epsilon: f64, opts: SearchOptions) -> Result<HypDivergence> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside [0,1)")));
    }
    let eps = epsilon.min(EPS_MAX);
    let d = n.dims();
    let phi = n.choi_state();
    let nb = d.b_in * d.b_out;
    let din = d.input() as f64;
    let sig_b = DimSignature::new(&[d.b_in, d.b_out])?;
    guard_size(phi.dim())?;

    let mut p = ConicProblem::new();
    let g = p.herm_var("G", nb, Cone::Psd);
    p.add_eq("choi-marginal", Expr::partial_trace(g, &sig_b, &[0])?, HermitianOperator::identity(d.b_in));
    if eps == 0.0 {
        // sup_Q tr Π_Φ σ_Q with σ_Q = K ⊗ G/(|A'||B'|)
        let root = kernel.psd_sqrt(false)?.kron(&HermitianOperator::identity(nb));
        let pi = phi.support_projector().conjugate(&root.to_matrix())?;
        let c = matcore::partial_trace(&pi, &n.signature(), &[2, 3])?.scale(1.0 / din);
        p.maximize(Expr::inner(g, &c));
    } else {
        // dual of min{tr Λσ_Q : 0 ⪯ Λ ⪯ 1, tr Λ Φ ≥ 1 − ε}
        let nc = phi.dim();
        let y = p.herm_var("Y", nc, Cone::Psd);
        let mu = p.scalar_var("mu", Cone::Nonneg);
        let sigma_q = Expr::kron_const_left(kernel, g, nb).scaled(1.0 / din);
        p.add_geq(
            "dual-feasibility",
            Expr::var(y, nc).plus(sigma_q)?.minus(Expr::scalar_times(mu, &phi))?,
            HermitianOperator::zeros(nc),
        );
        p.maximize(Expr::scalar(mu).scaled(1.0 - eps).minus(Expr::trace(y, nc))?);
    }
    let sol = require_usable(conic::solve(&p, DEFAULT_TOL)?, "hypothesis-testing channel divergence SDP")?;
    let lower = -sol.objective.max(0.0).log2();

    let reduced = n.reduced_channel(&HermitianOperator::maximally_mixed(d.a_in))?;
    let mut upper = f64::INFINITY;
    let mut converged = 0;
    for q in [sol.value(g), reduced.choi()] {
        let (sup, c) = search_hyp_sup(n, &kernel.kron(q), eps, opts)?;
        upper = upper.min(sup);
        converged += c;
    }
    Ok(HypDivergence {
        lower,
        upper: upper.max(lower),
        solver: (&sol).into(),
        search: SearchDiagnostics { starts: opts.starts, converged, seed: opts.seed },
    })
}

/// Bracket on S_H^ε[A|B] = −inf_Q sup_ψ D_H^ε(N(ψ) ‖ (R^1 ⊗ Q)(ψ)).
///
/// The upper end fixes ψ to the maximally entangled input and solves the
/// remaining inf over Q exactly; it is the reported value. The lower end fixes
/// Q (the upper end's optimizer or the reduced channel at π, whichever is
/// better) and searches over inputs, so it is heuristic.
pub fn hyp_cond_entropy_channel(n: &BipartiteChannel, epsilon: f64, opts: SearchOptions) -> Result<ChannelEntropyResult> {
    let d = n.dims();
    let h = hyp_divergence(n, &HermitianOperator::identity(d.a_in * d.a_out), epsilon, opts)?;
    Ok(ChannelEntropyResult {
        value: -h.lower,
        method: Method::HeuristicUpper,
        bracket: Some((-h.upper, -h.lower)),
        solver: Some(h.solver),
        search: Some(h.search),
        relaxed: false,
    })
}

/// sup over searched pure inputs of D_H^ε(N(ψ) ‖ F(ψ)), F given by its Choi operator.
fn search_hyp_sup(n: &BipartiteChannel, free_choi: &HermitianOperator, eps: f64, opts: SearchOptions) -> Result<(f64, usize)> {
    let d = n.dims();
    let din = d.input();
    let free = BipartiteChannel::from_choi_unchecked(d, free_choi.clone())?;
    let div = |psi: &HermitianOperator| -> Result<f64> {
        let rho = n.apply_with_reference(psi, din)?;
        let sigma = free.apply_with_reference(psi, din)?;
        divergences::dhyp(&rho, &sigma, eps)
    };
    let mut best = div(&max_entangled_input(din))?;
    let mut converged = 0;
    if eps == 0.0 {
        let f = |x: &[f64]| -div(&pure_from_params(x)).unwrap_or(f64::NEG_INFINITY);
        let (m, c) = optimize::multi_start(&f, 2 * din * din, opts.starts, opts.seed, opts.max_iter);
        best = best.max(-m.value);
        converged = c;
    } else {
        // each evaluation is an SDP: sample inputs instead of descending
        let mut rng = random::rng(opts.seed);
        for _ in 0..opts.starts {
            let v = random::random_pure_vector(&mut rng, din * din);
            best = best.max(div(&HermitianOperator::outer(&v))?);
        }
    }
    Ok((best, converged))
}

/// S^ε_∞[A|B]. ε = 0 is the exact SDP; ε > 0 is the Choi-ball relaxation,
/// an upper bound, flagged as `relaxed`.
pub fn smoothed_cond_min_entropy_channel(n: &BipartiteChannel, epsilon: f64, ball: BallConvention) -> Result<ChannelEntropyResult> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside [0,1)")));
    }
    if epsilon == 0.0 {
        return sdp_only(n);
    }
    let d = n.dims();
    let kernel = HermitianOperator::identity(d.a_in * d.a_out);
    let sol = min_side_operator_smoothed(n, &kernel, ball.choi_radius(epsilon))?;
    Ok(ChannelEntropyResult {
        value: -sol.objective.log2(),
        method: Method::Sdp,
        bracket: None,
        solver: Some((&sol).into()),
        search: None,
        relaxed: true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AepReport {
    /// (1/k)·S_∞[A^k|B^k] for k = 1..=n.
    pub per_copy: Vec<f64>,
    /// S(R_AA|R_BB)_Φ − log|A'|.
    pub vn_bound: f64,
    pub certified: bool,
    /// Whether the per-copy values are nondecreasing and end below the bound, within `slack`.
    pub chain_holds: bool,
    pub slack: f64,
}

/// Finite-n equipartition check: S_∞[A|B] ≤ … ≤ (1/n)S_∞[Aⁿ|Bⁿ] ≤ S(R_AA|R_BB)_Φ − log|A'|.
pub fn aep_bracket(n: &BipartiteChannel, copies: usize, certificate: Option<&CovarianceTable>, slack: f64) -> Result<AepReport> {
    if !(1..=2).contains(&copies) {
        return Err(Error::InvalidArgument(format!("copies must be 1 or 2, got {copies}")));
    }
    guard_size(n.dims().choi_dim().pow(copies as u32))?;
    let certified = match certificate {
        Some(t) => is_telecovariant(n, t, TELECOV_TOL)?.holds,
        None => false,
    };
    let mut per_copy = Vec::with_capacity(copies);
    for k in 1..=copies {
        let nk = n.tensor_power(k)?;
        per_copy.push(cond_min_entropy_channel_value(&nk)? / k as f64);
    }
    let vn_bound = choi_vn_value(n)?;
    let mono = per_copy.windows(2).all(|w| w[0] <= w[1] + slack);
    let chain_holds = mono && per_copy.last().is_some_and(|&v| v <= vn_bound + slack);
    Ok(AepReport { per_copy, vn_bound, certified, chain_holds, slack })
}

/// ½‖N − M‖_⋄ = min{ ‖tr_out Z‖_∞ : Z ⪰ J, Z ⪰ 0 } with J = Γ^N − Γ^M.
pub fn diamond_distance(n: &BipartiteChannel, m: &BipartiteChannel) -> Result<f64> {
    check_dims(n, m)?;
    let d = n.dims();
    let sig = n.signature();
    // [R_A, A, R_B, B] → [R_A, R_B, A, B]
    let reorder = |g: &HermitianOperator| matcore::permute_subsystems(g, &sig, &[0, 2, 1, 3]);
    let j = reorder(n.choi())?.sub(&reorder(m.choi())?)?;
    let nc = j.dim();
    guard_size(nc)?;
    let io = DimSignature::new(&[d.input(), d.output()])?;
    let mut p = ConicProblem::new();
    let z = p.herm_var("Z", nc, Cone::Psd);
    let t = p.scalar_var("t", Cone::Nonneg);
    p.add_geq("dominates", Expr::var(z, nc), j);
    p.add_geq(
        "norm",
        Expr::scalar_times(t, &HermitianOperator::identity(d.input())).minus(Expr::partial_trace(z, &io, &[0])?)?,
        HermitianOperator::zeros(d.input()),
    );
    p.minimize(Expr::scalar(t));
    let sol = require_usable(conic::solve(&p, DEFAULT_TOL)?, "diamond distance SDP")?;
    Ok(sol.objective.max(0.0))
}

/// |A|·min{|A'||A|, |B'||B|}/ln 2, the continuity constant of S_∞[A|B].
pub fn continuity_constant(d: ChannelDims) -> f64 {
    let m = (d.a_in * d.a_out).min(d.b_in * d.b_out) as f64;
    d.a_out as f64 * m / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_and_cnot_values() {
        let s = cond_min_entropy_channel(&BipartiteChannel::swap(2).unwrap()).unwrap();
        assert!((s.value + 3.0).abs() < 1e-5, "{s:?}");
        let c = cond_min_entropy_channel(&BipartiteChannel::cnot().unwrap()).unwrap();
        assert!((c.value + 2.0).abs() < 1e-5, "{c:?}");
        assert!(c.bracket_contains(1e-6));
    }

    #[test]
    fn identity_channel_dmax_against_mixing() {
        let id = BipartiteChannel::identity(2, 1).unwrap();
        let r = BipartiteChannel::completely_mixing(id.dims()).unwrap();
        assert!((channel_dmax(&id, &r).unwrap() - 2.0).abs() < 1e-10);
        assert!(channel_dmax(&id, &id).unwrap().abs() < 1e-10);
    }

    #[test]
    fn diamond_of_phase_gate_is_sine_half_angle() {
        let theta: f64 = 1.1;
        let u = crate::matcore::CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, theta),
        ]));
        let a = BipartiteChannel::unitary(&u).unwrap();
        let b = BipartiteChannel::identity(2, 1).unwrap();
        let v = diamond_distance(&a, &b).unwrap();
        assert!((v - (theta / 2.0).sin()).abs() < 1e-6, "{v}");
    }
}
