use condent::chanent::{BallConvention, SearchOptions};
use condent::channels::{weyl_covariance_table, BipartiteChannel, ChannelDims, GibbsSpec};
use condent::matcore::{CMatrix, HermitianOperator};
use condent::random;
use condent::resource::{self, Certificate, FreeEnergyFlavor, RateKind};

const D22: ChannelDims = ChannelDims { a_in: 2, b_in: 2, a_out: 2, b_out: 2 };

fn quick() -> SearchOptions {
    SearchOptions { starts: 3, seed: 4, max_iter: 80 }
}

fn trivial() -> GibbsSpec {
    GibbsSpec::trivial(2, 1.0).unwrap()
}

#[test]
fn purity_costs_of_named_unitaries() {
    let cnot = resource::purity_cost(&BipartiteChannel::cnot().unwrap(), 0.0, BallConvention::default()).unwrap();
    assert_eq!(cnot.kind, RateKind::Cost);
    assert!(cnot.exact);
    assert!((cnot.value - 1.5).abs() < 1e-5);
    let swap = resource::athermality_cost(&BipartiteChannel::swap(2).unwrap(), &trivial(), 0.0, BallConvention::default()).unwrap();
    assert!((swap.value - 2.0).abs() < 1e-5);
}

#[test]
fn bell_replacer_zero_error_yield() {
    // S_H^0(A|B)_Φ = log λ_max(tr_A Π_Φ) = −1, so the yield is ½(1 + 1)
    let bell = HermitianOperator::gamma(2).scale(0.5);
    let r = BipartiteChannel::replacer(&bell, D22).unwrap();
    let y = resource::purity_yield(&r, 0.0, quick()).unwrap();
    assert!((y.value - 1.0).abs() < 1e-6, "{y:?}");
    let (lo, up) = y.bracket.unwrap();
    assert!((up - lo).abs() < 1e-6);
}

#[test]
fn yield_below_cost_plus_smoothing_penalty() {
    let mut rng = random::rng(560);
    for _ in 0..4 {
        let n = BipartiteChannel::random(D22, 2, &mut rng).unwrap();
        let cost = resource::purity_cost(&n, 0.0, BallConvention::default()).unwrap().value;
        for e in [0.1, 0.5] {
            let y = resource::purity_yield(&n, e, quick()).unwrap();
            let lo = y.bracket.unwrap().0;
            assert!(lo <= cost + 0.5 * (1.0 / (1.0 - e * e)).log2() + 1e-6, "ε={e}: {lo} vs cost {cost}");
        }
    }
}

#[test]
fn tradeoff_holds_for_cnot() {
    let r = resource::tradeoff_check(&BipartiteChannel::cnot().unwrap(), &trivial(), 0.5, quick()).unwrap();
    assert!(r.holds, "{r:?}");
    assert!((r.cost - 1.5).abs() < 1e-5);
    assert!((r.slack - 0.5).abs() < 1e-12);
}

#[test]
fn cost_and_yield_are_monotone_in_epsilon() {
    let n = BipartiteChannel::cnot().unwrap().white_noise(0.3).unwrap();
    let grid = [0.0, 0.05, 0.1, 0.2, 0.3];
    let mut prev_cost = f64::INFINITY;
    let mut prev_yield = f64::NEG_INFINITY;
    for e in grid {
        let c = resource::purity_cost(&n, e, BallConvention::default()).unwrap();
        assert!(c.value <= prev_cost + 1e-6, "cost at ε={e}: {} > {prev_cost}", c.value);
        assert_eq!(c.exact, e == 0.0);
        prev_cost = c.value;
        let y = resource::purity_yield(&n, e, SearchOptions { starts: 1, seed: 5, max_iter: 40 }).unwrap();
        assert!(y.value >= prev_yield - 1e-6, "yield at ε={e}: {} < {prev_yield}", y.value);
        prev_yield = y.value;
    }
}

#[test]
fn product_channel_cost_is_the_local_cost() {
    let mut rng = random::rng(600);
    let spec = GibbsSpec::new(HermitianOperator::diagonal(&[0.0, 0.8]), 1.3).unwrap();
    for _ in 0..10 {
        let p = BipartiteChannel::random(ChannelDims::point_to_point(2, 2), 2, &mut rng).unwrap();
        let q = BipartiteChannel::random(ChannelDims::point_to_point(2, 2), 2, &mut rng).unwrap();
        let prod = BipartiteChannel::local_product(&p, &q).unwrap();
        let a = resource::athermality_cost(&prod, &spec, 0.0, BallConvention::default()).unwrap().value;
        let b = resource::athermality_cost(&p, &spec, 0.0, BallConvention::default()).unwrap().value;
        assert!((a - b).abs() < 1e-5, "{a} vs {b}");
    }
}

#[test]
fn closed_form_capacities() {
    let cnot = BipartiteChannel::cnot().unwrap();
    let table = weyl_covariance_table(&cnot).unwrap().unwrap();
    let c = resource::capacity_closed_form(&cnot, Certificate::Telecov(&table)).unwrap();
    assert!(c.exact);
    assert!((c.value - 1.5).abs() < 1e-9);

    let id = BipartiteChannel::identity(2, 2).unwrap();
    let c = resource::capacity_closed_form(&id, Certificate::NoSignal(quick())).unwrap();
    assert!(!c.exact);
    assert!((c.value - 1.0).abs() < 1e-6, "{c:?}");

    // CNOT signals from A' to B, so the no-signalling certificate is refused
    assert!(resource::capacity_closed_form(&cnot, Certificate::NoSignal(quick())).is_err());
}

#[test]
fn dense_coding_of_cnot_choi_is_twice_its_capacity() {
    let cnot = BipartiteChannel::cnot().unwrap();
    let sdc = resource::sdc_of_choi(&cnot).unwrap();
    assert!((sdc - 3.0).abs() < 1e-9);
    let table = weyl_covariance_table(&cnot).unwrap().unwrap();
    let cap = resource::capacity_closed_form(&cnot, Certificate::Telecov(&table)).unwrap().value;
    assert!((sdc - 2.0 * cap).abs() < 1e-9);
}

#[test]
fn free_energy_of_the_qubit_identity() {
    let id = BipartiteChannel::unitary(&CMatrix::identity(2, 2)).unwrap();
    for beta in [0.5, 1.0, 2.0] {
        let spec = GibbsSpec::trivial(2, beta).unwrap();
        let want = 4f64.ln() / beta;
        let fmax = resource::free_energy(&id, &spec, FreeEnergyFlavor::Max).unwrap();
        assert!((fmax - want).abs() < 1e-9);
        let fvn = resource::free_energy(&id, &spec, FreeEnergyFlavor::VnHeuristic(quick())).unwrap();
        assert!((fvn - want).abs() < 1e-6, "{fvn} vs {want}");
    }
    let (e, beta) = (1.7, 0.9);
    let spec = GibbsSpec::new(HermitianOperator::diagonal(&[0.0, e]), beta).unwrap();
    // tr γ⁻¹ for γ = diag(1, e^{−βE})/Z
    let z = 1.0 + (-beta * e).exp();
    let tr_inv = z * (1.0 + (beta * e).exp());
    let f = resource::free_energy(&id, &spec, FreeEnergyFlavor::Max).unwrap();
    assert!((f - tr_inv.ln() / beta).abs() < 1e-9);
}

#[test]
fn max_free_energy_vanishes_only_on_the_thermal_channel() {
    let spec = GibbsSpec::new(HermitianOperator::diagonal(&[0.0, 0.5, 1.5]), 1.1).unwrap();
    let thermal = BipartiteChannel::thermal(&spec, 2).unwrap();
    assert!(resource::free_energy(&thermal, &spec, FreeEnergyFlavor::Max).unwrap().abs() < 1e-9);
    let mut rng = random::rng(601);
    for _ in 0..10 {
        let p = BipartiteChannel::random(ChannelDims::point_to_point(2, 3), 2, &mut rng).unwrap();
        assert!(resource::free_energy(&p, &spec, FreeEnergyFlavor::Max).unwrap() > 1e-6);
    }
}

#[test]
fn rate_inputs_are_validated() {
    let cnot = BipartiteChannel::cnot().unwrap();
    assert!(resource::purity_cost(&cnot, 1.0, BallConvention::default()).is_err());
    assert!(resource::athermality_cost(&cnot, &GibbsSpec::trivial(3, 1.0).unwrap(), 0.0, BallConvention::default()).is_err());
    assert!(resource::free_energy(&cnot, &trivial(), FreeEnergyFlavor::Max).is_err());
}
