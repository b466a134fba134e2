use condent::chanent::{self, BallConvention, SearchOptions, VnMode};
use condent::channels::{self, BipartiteChannel, ChannelDims, Direction};
use condent::divergences as dv;
use condent::experiments;
use condent::matcore::{self, CMatrix, DimSignature, HermitianOperator};
use condent::random::{self, Rng};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

const D22: ChannelDims = ChannelDims { a_in: 2, b_in: 2, a_out: 2, b_out: 2 };

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(0xc4a7), failure_persistence: None, ..ProptestConfig::default() }
}

fn smin(n: &BipartiteChannel) -> f64 {
    chanent::cond_min_entropy_channel_value(n).unwrap()
}

fn quick() -> SearchOptions {
    SearchOptions { starts: 4, seed: 1, max_iter: 100 }
}

fn random_p2p(rng: &mut Rng, d: usize) -> BipartiteChannel {
    BipartiteChannel::random(ChannelDims::point_to_point(d, d), 2, rng).unwrap()
}

#[test]
fn channel_dmax_is_additive_over_a_shared_side_channel() {
    let mut rng = random::rng(440);
    for _ in 0..5 {
        let p = random_p2p(&mut rng, 2);
        let p2 = BipartiteChannel::random(ChannelDims::point_to_point(2, 2), 4, &mut rng).unwrap();
        let q = random_p2p(&mut rng, 2);
        let lhs = chanent::channel_dmax(&BipartiteChannel::local_product(&p, &q).unwrap(), &BipartiteChannel::local_product(&p2, &q).unwrap()).unwrap();
        // Γ^{P⊗Q} = Γ^P ⊗ Γ^Q: the Q factor cancels in the spectrum of the ratio
        let oracle = dv::dmax(p.choi(), p2.choi()).unwrap();
        assert!((lhs - oracle).abs() < 1e-7, "{lhs} vs {oracle}");
    }
}

#[test]
fn free_object_reaches_the_maximum() {
    let mut rng = random::rng(450);
    let r = BipartiteChannel::completely_mixing(ChannelDims::point_to_point(2, 2)).unwrap();
    for _ in 0..3 {
        let q = random_p2p(&mut rng, 2);
        let v = smin(&BipartiteChannel::local_product(&r, &q).unwrap());
        assert!((v - 1.0).abs() < 1e-6, "{v}");
    }
}

#[test]
fn noisy_swap_brackets_coincide() {
    let swap = BipartiteChannel::swap(2).unwrap();
    for p in [0.0, 0.25, 0.5, 1.0] {
        let r = chanent::cond_min_entropy_channel(&swap.white_noise(p).unwrap()).unwrap();
        let (lo, up) = r.bracket.unwrap();
        assert!((up - lo).abs() < 1e-5, "p={p}: ({lo}, {up})");
        assert!(r.bracket_contains(1e-6));
    }
}

#[test]
fn two_qubit_unitaries_sit_on_the_upper_bracket() {
    let mut rng = random::rng(458);
    for _ in 0..5 {
        let u = BipartiteChannel::from_unitary(&random::haar_unitary(&mut rng, 4), D22).unwrap();
        let r = chanent::cond_min_entropy_channel(&u).unwrap();
        assert!((r.value - r.bracket.unwrap().1).abs() < 1e-5);
    }
}

#[test]
fn no_signalling_entropy_of_unitaries_is_minus_log_a() {
    let mut rng = random::rng(466);
    for _ in 0..5 {
        let u = BipartiteChannel::from_unitary(&random::haar_unitary(&mut rng, 4), D22).unwrap();
        assert!((chanent::ns_cond_min_entropy(&u).unwrap() + 1.0).abs() < 1e-6);
    }
    let u = BipartiteChannel::from_unitary(&random::haar_unitary(&mut rng, 6), ChannelDims::new(3, 2, 3, 2)).unwrap();
    assert!((chanent::ns_cond_min_entropy(&u).unwrap() + 3f64.log2()).abs() < 1e-6);
    assert!((chanent::ns_cond_min_entropy(&BipartiteChannel::cnot().unwrap()).unwrap() + 1.0).abs() < 1e-6);
}

#[test]
fn no_signalling_entropy_is_below_channel_entropy_for_semicausal_channels() {
    let mut rng = random::rng(467);
    for _ in 0..10 {
        let n = BipartiteChannel::random_semicausal(D22, 2, &mut rng).unwrap();
        assert!(n.semicausal(Direction::AToB, 1e-8).holds);
        assert!(chanent::ns_cond_min_entropy(&n).unwrap() <= smin(&n) + 1e-6);
    }
}

#[test]
fn bell_replacer_no_signalling_entropy() {
    let bell = HermitianOperator::gamma(2).scale(0.5);
    let r = BipartiteChannel::replacer(&bell, D22).unwrap();
    assert!((chanent::ns_cond_min_entropy(&r).unwrap() + 1.0).abs() < 1e-6);
}

#[test]
fn telecovariant_von_neumann_entropy_of_cnot() {
    let cnot = BipartiteChannel::cnot().unwrap();
    let table = channels::weyl_covariance_table(&cnot).unwrap().unwrap();
    let r = chanent::cond_vn_entropy_channel(&cnot, VnMode::Telecov(&table)).unwrap();
    assert!((r.value + 2.0).abs() < 1e-9);
    // the certificate is checked, not assumed
    let generic = BipartiteChannel::random_seeded(D22, 4, 3).unwrap();
    assert!(chanent::cond_vn_entropy_channel(&generic, VnMode::Telecov(&table)).is_err());
}

#[test]
fn no_signalling_heuristic_on_products_and_replacers() {
    let id = BipartiteChannel::unitary(&CMatrix::identity(2, 2)).unwrap();
    let q = random_p2p(&mut random::rng(476), 2);
    let prod = BipartiteChannel::local_product(&id, &q).unwrap();
    let r = chanent::cond_vn_entropy_channel(&prod, VnMode::NoSignalHeuristic(quick())).unwrap();
    assert!((r.value + 1.0).abs() < 1e-6, "{}", r.value);

    let rho = random::random_state(&mut random::rng(477), 4, 2);
    let rep = BipartiteChannel::replacer(&rho, D22).unwrap();
    let r = chanent::cond_vn_entropy_channel(&rep, VnMode::NoSignalHeuristic(quick())).unwrap();
    let oracle = dv::cond_vn_entropy_state(&rho, 2, 2).unwrap();
    assert!((r.value - oracle).abs() < 1e-6, "{} vs {oracle}", r.value);
}

#[test]
fn zero_error_hypothesis_testing_entropy_of_a_replacer() {
    // rank-two state: S_H^0(A|B)_ρ = log λ_max(tr_A Π_ρ)
    let mut rng = random::rng(484);
    let rho = random::random_state(&mut rng, 4, 2);
    let pi_b = matcore::partial_trace(&rho.support_projector(), &DimSignature::new(&[2, 2]).unwrap(), &[1]).unwrap();
    let oracle = pi_b.max_eigenvalue().log2();
    let rep = BipartiteChannel::replacer(&rho, D22).unwrap();
    let r = chanent::hyp_cond_entropy_channel(&rep, 0.0, quick()).unwrap();
    let (lo, up) = r.bracket.unwrap();
    assert!((up - oracle).abs() < 1e-6, "{up} vs {oracle}");
    assert!((up - lo).abs() < 1e-6, "({lo}, {up})");
}

#[test]
fn hypothesis_testing_entropy_decreases_with_epsilon() {
    let n = BipartiteChannel::cnot().unwrap().white_noise(0.3).unwrap();
    let opts = SearchOptions { starts: 2, seed: 2, max_iter: 50 };
    let mut prev = f64::INFINITY;
    for e in [0.0, 0.1, 0.3, 0.6] {
        let r = chanent::hyp_cond_entropy_channel(&n, e, opts).unwrap();
        let (lo, up) = r.bracket.unwrap();
        assert!(lo <= up + 1e-9);
        assert!(up <= prev + 1e-6, "ε={e}: {up} > {prev}");
        prev = up;
    }
}

#[test]
fn unsmoothed_channel_entropy_matches_exact_sdp() {
    let mut rng = random::rng(493);
    for _ in 0..20 {
        let n = BipartiteChannel::random(D22, 2, &mut rng).unwrap();
        let s = chanent::smoothed_cond_min_entropy_channel(&n, 0.0, BallConvention::default()).unwrap();
        assert!(!s.relaxed);
        assert!((s.value - smin(&n)).abs() < 1e-9);
    }
}

#[test]
fn smoothed_swap_respects_its_upper_bound() {
    let swap = BipartiteChannel::swap(2).unwrap();
    let mut prev = -3.0 - 1e-6;
    for e in [0.05, 0.1, 0.2] {
        for ball in [BallConvention::FullBall, BallConvention::HalfBall] {
            let r = chanent::smoothed_cond_min_entropy_channel(&swap, e, ball).unwrap();
            assert!(r.relaxed);
            // the relaxation bounds S^ε from above; the analytic bound is for Choi radius ε
            if ball == BallConvention::FullBall {
                let bound = -3.0 + (1.0 / (1.0 - e * e)).log2();
                assert!(r.value <= bound + 1e-6, "ε={e}: {} > {bound}", r.value);
                assert!(r.value >= prev - 1e-7);
                prev = r.value;
            }
        }
    }
}

#[test]
fn equipartition_chain_for_a_product_unitary() {
    let id = BipartiteChannel::identity(2, 2).unwrap();
    let r = chanent::aep_bracket(&id, 2, None, 1e-4).unwrap();
    for v in &r.per_copy {
        assert!((v + 1.0).abs() < 1e-5, "{:?}", r.per_copy);
    }
    assert!((r.vn_bound + 1.0).abs() < 1e-9);
    assert!(r.chain_holds);
}

#[test]
fn controlled_unitaries_are_symmetric_under_party_exchange() {
    for m in [2, 3] {
        let c = experiments::controlled_shift(m).unwrap();
        let want = -2.0 * (m as f64).log2();
        assert!((smin(&c) - want).abs() < 1e-5);
        assert!((smin(&c.swap_parties()) - want).abs() < 1e-5);
    }
    // with a four-level control and a qubit target the reversed direction is
    // limited by its own dimension bound −log(|B'|²|B|) = −3
    let p = experiments::pauli_controlled().unwrap();
    assert!((smin(&p) + 4.0).abs() < 1e-5);
    assert!(smin(&p.swap_parties()) >= -3.0 - 1e-6);
}

#[test]
fn diamond_distance_between_replacers_is_trace_distance() {
    let mut rng = random::rng(517);
    for _ in 0..5 {
        let (a, b) = (random::random_state(&mut rng, 2, 2), random::random_state(&mut rng, 2, 2));
        let dims = ChannelDims::point_to_point(2, 2);
        let ra = BipartiteChannel::replacer(&a, dims).unwrap();
        let rb = BipartiteChannel::replacer(&b, dims).unwrap();
        let oracle = 0.5 * a.sub(&b).unwrap().trace_norm();
        assert!((chanent::diamond_distance(&ra, &rb).unwrap() - oracle).abs() < 1e-6);
    }
    let cnot = BipartiteChannel::cnot().unwrap();
    assert!(chanent::diamond_distance(&cnot, &cnot).unwrap().abs() < 1e-6);
}

/// Prints the gap between the channel value and the upper Choi bound for
/// white-noise two-qubit unitaries. Nothing is asserted about the gap.
#[test]
fn two_qubit_white_noise_conjecture_probe() {
    let mut rng = random::rng(527);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let u = BipartiteChannel::from_unitary(&random::haar_unitary(&mut rng, 4), D22).unwrap();
        for p in [0.2, 0.5, 0.8] {
            let r = chanent::cond_min_entropy_channel(&u.white_noise(p).unwrap()).unwrap();
            worst = worst.max((r.bracket.unwrap().1 - r.value).abs());
        }
    }
    println!("white-noise two-qubit unitaries: max |upper - value| = {worst:.3e}");
}

fn dims_strategy() -> impl Strategy<Value = ChannelDims> {
    prop_oneof![
        Just(ChannelDims::new(2, 2, 2, 2)),
        Just(ChannelDims::new(2, 1, 2, 2)),
        Just(ChannelDims::new(2, 2, 3, 1)),
        Just(ChannelDims::new(3, 2, 2, 2)),
    ]
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn bracket_containment_and_dimension_bounds(seed in any::<u64>(), d in dims_strategy(), env in 1usize..=4) {
        let mut rng = random::rng(seed);
        let env = env.max(d.input().div_ceil(d.output()));
        let n = BipartiteChannel::random(d, env, &mut rng).unwrap();
        let r = chanent::cond_min_entropy_channel(&n).unwrap();
        prop_assert!(r.bracket_contains(1e-6), "{:?}", r);
        let floor = -((d.a_in * d.b_in * d.b_out).min(d.a_in * d.a_in * d.a_out) as f64).log2();
        prop_assert!(r.value >= floor - 1e-6 && r.value <= (d.a_out as f64).log2() + 1e-6, "{} outside [{}, log|A|]", r.value, floor);
    }
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn semicausal_floor(seed in any::<u64>(), memory in 1usize..=3) {
        let mut rng = random::rng(seed);
        let n = BipartiteChannel::random_semicausal(D22, memory, &mut rng).unwrap();
        prop_assert!(n.semicausal(Direction::AToB, 1e-8).holds);
        prop_assert!(smin(&n) >= -1.0 - 1e-6);
    }

    #[test]
    fn ppt_floor(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let n = BipartiteChannel::random(D22, 2, &mut rng).unwrap();
        let m = experiments::ppt_by_noise(&n).unwrap();
        prop_assert!(m.ppt_choi(1e-9).holds);
        prop_assert!(smin(&m) >= -1.0 - 1e-6);
    }

    #[test]
    fn controlled_unitary_floor(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let us: Vec<CMatrix> = (0..2).map(|_| random::haar_unitary(&mut rng, 2)).collect();
        prop_assert!(smin(&BipartiteChannel::controlled_unitary(&us).unwrap()) >= -2.0 - 1e-6);
    }
}

proptest! {
    #![proptest_config(config(20))]

    #[test]
    fn continuity_bound(seed in any::<u64>(), t in 0.0f64..0.3) {
        let mut rng = random::rng(seed);
        let n = BipartiteChannel::random(D22, 2, &mut rng).unwrap();
        let other = BipartiteChannel::random(D22, 2, &mut rng).unwrap();
        let m = BipartiteChannel::mix(&[&n, &other], &[1.0 - t, t]).unwrap();
        let delta = chanent::diamond_distance(&n, &m).unwrap();
        let bound = chanent::continuity_constant(D22) * delta;
        prop_assert!((smin(&n) - smin(&m)).abs() <= bound + 1e-6);
    }
}
