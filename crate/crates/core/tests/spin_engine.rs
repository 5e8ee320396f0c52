mod common;

use common::{c, dense_spin_floquet, max_diff, random_state, rng};
use fcl_core::spin::{Parity, SpinRegister, SpinState};
use fcl_core::ModelParams;
use proptest::prelude::*;

#[test]
fn floquet_matches_dense_operator() {
    let mut r = rng(7);
    for (l, j, b) in [(4, 0.6, 0.2), (4, -1.3, 2.1), (6, 0.9, 0.45), (6, 2.8, -0.3)] {
        let dense = dense_spin_floquet(l, j, b);
        let p = ModelParams::new(j, b, l).unwrap();
        let psi = random_state(&mut r, 1 << l);
        let mut state = SpinState::from_amplitudes(l, psi.clone()).unwrap();
        let mut reference = psi;
        for _ in 0..5 {
            state.apply_floquet(&p).unwrap();
            reference = dense.mul_vec(&reference).unwrap();
        }
        let diff = max_diff(state.amplitudes(), &reference);
        assert!(diff < 1e-12, "L={l}: {diff:e}");
    }
}

#[test]
fn norm_preserved_over_long_runs() {
    let p = ModelParams::new(0.77, 0.31, 10).unwrap();
    let mut state = SpinState::from_amplitudes(10, random_state(&mut rng(3), 1 << 10)).unwrap();
    let mut prev = state.norm_sqr();
    for _ in 0..1000 {
        state.apply_floquet(&p).unwrap();
        let norm = state.norm_sqr();
        assert!((norm - prev).abs() < 1e-13);
        prev = norm;
    }
    assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
}

#[test]
fn cluster_state_is_stabilized_without_field() {
    for l in [4, 6, 8] {
        let j = 0.83;
        let p = ModelParams::new(j, 0.0, l).unwrap();
        let start = SpinState::cluster(l).unwrap();
        let mut state = start.clone();
        state.apply_floquet(&p).unwrap();
        // Every ZXZ stabilizer has eigenvalue +1.
        let phase = c(0.0, j * l as f64 / 2.0).exp();
        let expected: Vec<_> = start.amplitudes().iter().map(|a| a * phase).collect();
        assert!(max_diff(state.amplitudes(), &expected) < 1e-12);
    }
}

#[test]
fn plus_state_picks_up_field_phase_only() {
    let (l, b) = (8, 0.6);
    let p = ModelParams::new(0.0, b, l).unwrap();
    let mut state = SpinState::plus(l).unwrap();
    for t in 1..=7 {
        state.apply_floquet(&p).unwrap();
        let phase = c(0.0, t as f64 * l as f64 * b / 2.0).exp();
        let expected = vec![phase * 2f64.powf(-(l as f64) / 2.0); 1 << l];
        assert!(max_diff(state.amplitudes(), &expected) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parities_are_conserved(seed in 0u64..1000, j in -3.0f64..3.0, b in -3.0f64..3.0) {
        let l = 6;
        let p = ModelParams::new(j, b, l).unwrap();
        let mut state = SpinState::from_amplitudes(l, random_state(&mut rng(seed), 1 << l)).unwrap();
        let before: Vec<f64> = [Parity::Even, Parity::Odd, Parity::Total]
            .iter()
            .map(|&q| state.parity_expectation(q))
            .collect();
        for _ in 0..10 {
            state.apply_floquet(&p).unwrap();
        }
        for (q, b0) in [Parity::Even, Parity::Odd, Parity::Total].iter().zip(before) {
            prop_assert!((state.parity_expectation(*q) - b0).abs() < 1e-12);
        }
    }

    #[test]
    fn bloch_vectors_stay_in_ball(seed in 0u64..1000, j in -3.0f64..3.0, b in -3.0f64..3.0) {
        let l = 6;
        let p = ModelParams::new(j, b, l).unwrap();
        let mut state = SpinState::from_amplitudes(l, random_state(&mut rng(seed), 1 << l)).unwrap();
        state.apply_floquet(&p).unwrap();
        for x in 0..l {
            let [a, bb, cc] = state.bloch_vector(x).unwrap();
            prop_assert!(a * a + bb * bb + cc * cc <= 1.0 + 1e-12);
        }
        let q = state.q_pure();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&q));
    }
}
