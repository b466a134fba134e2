//! One-shot conditional athermality and purity rates, asymptotic capacities
//! for structured channels, superdense coding and channel free energies.
//!
//! Rates count qubit identity channels: they are half of a base-2 channel
//! divergence. Free energies are in natural units with β explicit.
//!
//! The yield and cost are taken in their single-divergence form,
//! `½ inf_Q D[N ‖ T^β ⊗ Q]`; no outer loop over side channels is run.

use serde::Serialize;

use crate::chanent::{self, BallConvention, SearchDiagnostics, SearchOptions, VnMode};
use crate::channels::{BipartiteChannel, CovarianceTable, Direction, GibbsSpec};
use crate::divergences;
use crate::error::{Error, Result};
use crate::matcore::{self, DimSignature, HermitianOperator};
use crate::optimize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateKind {
    Yield,
    Cost,
    Capacity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateResult {
    pub value: f64,
    pub kind: RateKind,
    pub epsilon: f64,
    /// False for relaxations and heuristic values.
    pub exact: bool,
    pub bracket: Option<(f64, f64)>,
    pub search: Option<SearchDiagnostics>,
}

fn check_gibbs(n: &BipartiteChannel, spec: &GibbsSpec) -> Result<HermitianOperator> {
    let d = n.dims();
    if spec.dim() != d.a_out {
        return Err(Error::Dimension(format!("Gibbs state on {} levels, |A| = {}", spec.dim(), d.a_out)));
    }
    Ok(HermitianOperator::identity(d.a_in).kron(&spec.gibbs_state()))
}

/// Cost^{(1,ε)} = ½ inf_Q D^ε_∞[N ‖ T^β ⊗ Q]. ε = 0 is exact; ε > 0 uses the
/// Choi-ball relaxation, which can only lower the cost, and is flagged inexact.
pub fn athermality_cost(n: &BipartiteChannel, spec: &GibbsSpec, epsilon: f64, ball: BallConvention) -> Result<RateResult> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside [0,1)")));
    }
    let kernel = check_gibbs(n, spec)?;
    let sol = if epsilon == 0.0 {
        chanent::min_side_operator(n, &kernel)?
    } else {
        chanent::min_side_operator_smoothed(n, &kernel, ball.choi_radius(epsilon))?
    };
    Ok(RateResult {
        value: 0.5 * sol.objective.log2(),
        kind: RateKind::Cost,
        epsilon,
        exact: epsilon == 0.0,
        bracket: None,
        search: None,
    })
}

/// Dist^{(1,ε)} = ½ inf_Q D_H^{ε²}[N ‖ T^β ⊗ Q] as a bracket. The reported
/// value is the lower end, which is a valid lower bound; the upper end comes
/// from an input search at fixed Q.
pub fn athermality_yield(n: &BipartiteChannel, spec: &GibbsSpec, epsilon: f64, opts: SearchOptions) -> Result<RateResult> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside [0,1)")));
    }
    let kernel = check_gibbs(n, spec)?;
    let h = chanent::hyp_divergence(n, &kernel, epsilon * epsilon, opts)?;
    let (lo, up) = (0.5 * h.lower, 0.5 * h.upper);
    Ok(RateResult {
        value: lo,
        kind: RateKind::Yield,
        epsilon,
        exact: up - lo <= 1e-6,
        bracket: Some((lo, up)),
        search: Some(h.search),
    })
}

/// Purity yield ½(log|A| − S_H^{ε²}[A|B]): the athermality yield at a trivial Hamiltonian.
pub fn purity_yield(n: &BipartiteChannel, epsilon: f64, opts: SearchOptions) -> Result<RateResult> {
    athermality_yield(n, &GibbsSpec::trivial(n.dims().a_out, 1.0)?, epsilon, opts)
}

/// Purity cost ½(log|A| − S^ε_∞[A|B]).
pub fn purity_cost(n: &BipartiteChannel, epsilon: f64, ball: BallConvention) -> Result<RateResult> {
    athermality_cost(n, &GibbsSpec::trivial(n.dims().a_out, 1.0)?, epsilon, ball)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffReport {
    /// Exact ε = 0 cost, an upper bound on Cost^{√ε}.
    pub cost: f64,
    /// Certified lower end of Dist^{√(1−ε)}.
    pub yield_lower: f64,
    /// ½ log(1/(1−ε)).
    pub slack: f64,
    /// yield_lower + slack − cost.
    pub margin: f64,
    pub holds: bool,
}

/// Checks Cost^{√ε} ≤ Dist^{√(1−ε)} + ½ log(1/(1−ε)) with the cost replaced by
/// its ε = 0 value and the yield by its certified lower end, so a pass is conclusive.
pub fn tradeoff_check(n: &BipartiteChannel, spec: &GibbsSpec, epsilon: f64, opts: SearchOptions) -> Result<TradeoffReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside (0,1)")));
    }
    let cost = athermality_cost(n, spec, 0.0, BallConvention::default())?.value;
    let y = athermality_yield(n, spec, (1.0 - epsilon).sqrt(), opts)?;
    let yield_lower = y.bracket.map_or(y.value, |b| b.0);
    let slack = 0.5 * (1.0 / (1.0 - epsilon)).log2();
    let margin = yield_lower + slack - cost;
    Ok(TradeoffReport { cost, yield_lower, slack, margin, holds: margin >= -1e-6 })
}

/// Structural certificate for the closed-form capacity.
#[derive(Clone, Copy, Debug)]
pub enum Certificate<'a> {
    Telecov(&'a CovarianceTable),
    NoSignal(SearchOptions),
}

/// Tolerance for the semicausality certificate.
pub const NOSIGNAL_TOL: f64 = 1e-8;

/// Purity capacity ½(log|A| − S[A|B]) for certified channels. Tele-covariant
/// channels use the Choi formula; no-signalling channels the input search,
/// reported inexact.
pub fn capacity_closed_form(n: &BipartiteChannel, cert: Certificate<'_>) -> Result<RateResult> {
    let d = n.dims();
    let log_a = (d.a_out as f64).log2();
    match cert {
        Certificate::Telecov(table) => {
            chanent::telecov_certificate(n, table)?;
            Ok(RateResult {
                value: 0.5 * (log_a - chanent::choi_vn_value(n)?),
                kind: RateKind::Capacity,
                epsilon: 0.0,
                exact: true,
                bracket: None,
                search: None,
            })
        }
        Certificate::NoSignal(opts) => {
            if d.a_in != d.a_out {
                return Err(Error::InvalidArgument("no-signalling capacity needs |A'| = |A|".into()));
            }
            let rep = n.semicausal(Direction::AToB, NOSIGNAL_TOL);
            if !rep.holds {
                return Err(Error::Certificate(format!("channel signals from A' to B (residual {:.2e})", rep.residual)));
            }
            let s = chanent::cond_vn_entropy_channel(n, VnMode::NoSignalHeuristic(opts))?;
            Ok(RateResult {
                value: 0.5 * (log_a - s.value),
                kind: RateKind::Capacity,
                epsilon: 0.0,
                exact: false,
                bracket: None,
                search: s.search,
            })
        }
    }
}

/// Dense-coding capacity log d_A + max(0, −S(A|B)_ρ) of a state on `A ⊗ B`.
pub fn sdc_capacity(rho: &HermitianOperator, da: usize, db: usize) -> Result<f64> {
    let s = divergences::cond_vn_entropy_state(rho, da, db)?;
    Ok((da as f64).log2() + (-s).max(0.0))
}

/// Dense-coding capacity of Φ^N split as `R_A A : R_B B`, for |A'| = |A|.
pub fn sdc_of_choi(n: &BipartiteChannel) -> Result<f64> {
    let d = n.dims();
    if d.a_in != d.a_out {
        return Err(Error::Dimension(format!("needs |A'| = |A|, got {} and {}", d.a_in, d.a_out)));
    }
    sdc_capacity(&n.choi_state(), d.a_in * d.a_out, d.b_in * d.b_out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FreeEnergyFlavor {
    Max,
    VnHeuristic(SearchOptions),
}

/// F^β[P] = β⁻¹ ln 2 · D[P ‖ T^β] for a point-to-point channel. `Max` is exact;
/// `VnHeuristic` maximizes D(P(ψ) ‖ ψ_R ⊗ γ) over searched pure inputs and is a lower bound.
pub fn free_energy(p: &BipartiteChannel, spec: &GibbsSpec, flavor: FreeEnergyFlavor) -> Result<f64> {
    let d = p.dims();
    if !d.is_point_to_point() {
        return Err(Error::InvalidArgument("free energy is defined for point-to-point channels".into()));
    }
    let thermal = BipartiteChannel::thermal(spec, d.a_in)?;
    if thermal.dims() != d {
        return Err(Error::Dimension(format!("Gibbs state on {} levels, |A| = {}", spec.dim(), d.a_out)));
    }
    let bits = match flavor {
        FreeEnergyFlavor::Max => chanent::channel_dmax(p, &thermal)?,
        FreeEnergyFlavor::VnHeuristic(opts) => {
            let r = d.a_in;
            let gamma = spec.gibbs_state();
            let sig = DimSignature::new(&[r, d.a_in])?;
            let div = |psi: &HermitianOperator| -> Result<f64> {
                let out = p.apply_with_reference(psi, r)?;
                let psi_r = matcore::partial_trace(psi, &sig, &[0])?;
                divergences::rel_entropy(&out, &psi_r.kron(&gamma))
            };
            let phi = HermitianOperator::gamma(r).scale(1.0 / r as f64);
            let f = |x: &[f64]| {
                let v: Vec<_> = x.chunks(2).map(|c| num_complex::Complex64::new(c[0], c[1])).collect();
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
                let psi = HermitianOperator::outer(&v.iter().map(|z| z / norm).collect::<Vec<_>>());
                -div(&psi).unwrap_or(f64::NEG_INFINITY)
            };
            let (best, _) = optimize::multi_start(&f, 2 * r * d.a_in, opts.starts, opts.seed, opts.max_iter);
            div(&phi)?.max(-best.value)
        }
    };
    Ok(bits * std::f64::consts::LN_2 / spec.beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnot_and_swap_costs() {
        let cnot = BipartiteChannel::cnot().unwrap();
        let c = purity_cost(&cnot, 0.0, BallConvention::default()).unwrap();
        assert!((c.value - 1.5).abs() < 1e-5, "{c:?}");
        let s = purity_cost(&BipartiteChannel::swap(2).unwrap(), 0.0, BallConvention::default()).unwrap();
        assert!((s.value - 2.0).abs() < 1e-5, "{s:?}");
    }

    #[test]
    fn bell_state_dense_coding() {
        let bell = HermitianOperator::gamma(2).scale(0.5);
        assert!((sdc_capacity(&bell, 2, 2).unwrap() - 2.0).abs() < 1e-12);
        let mixed = HermitianOperator::maximally_mixed(4);
        assert!((sdc_capacity(&mixed, 2, 2).unwrap() - 1.0).abs() < 1e-12);
    }
}
