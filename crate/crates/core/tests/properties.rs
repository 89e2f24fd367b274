mod common;

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use linopt::fock::{
    embed_logical, enumerate_basis, sector_size, LogicalAmplitudes, OccupationVector,
    PolarizedMode, StateVector,
};
use linopt::herald::{condition, DetectorConstraint, HeraldPattern};
use linopt::nls::{closed_form_coefficients, simulate_nls, NlsParams};
use linopt::search::canonicalize;
use linopt::unitary::{
    beamsplitter_unitary, compose, pbs_unitary, phase_shift_unitary, rotator_unitary, ModeUnitary,
};
use linopt::Complex64;
use proptest::prelude::*;

use common::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn logical() -> impl Strategy<Value = LogicalAmplitudes> {
    (complex(), complex(), complex())
        .prop_filter("non-zero", |(a, b, c)| {
            a.norm_sqr() + b.norm_sqr() + c.norm_sqr() > 1e-3
        })
        .prop_map(|(a, b, c)| {
            let n = (a.norm_sqr() + b.norm_sqr() + c.norm_sqr()).sqrt();
            LogicalAmplitudes::new(a / n, b / n, c / n)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn basis_index_round_trips(modes in 1usize..=8, photons in 0usize..=6) {
        prop_assume!(sector_size(modes, photons) <= 10_000);
        let b = enumerate_basis(modes, photons).unwrap();
        prop_assert_eq!(b.len() as u128, sector_size(modes, photons));
        for (k, s) in b.states().iter().enumerate() {
            prop_assert_eq!(s.total(), photons);
            prop_assert_eq!(b.index_of(s), Some(k));
        }
        for w in b.states().windows(2) {
            prop_assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn embedded_norm_is_one(amps in logical()) {
        let sectors = embed_logical(amps, PolarizedMode::h(0), PolarizedMode::v(1), 4).unwrap();
        let total: f64 = sectors.iter().map(|s| s.state.norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn element_unitaries_are_unitary(x in -10.0..10.0f64, t in 0.0..=1.0f64, phi in -10.0..10.0f64) {
        prop_assert!(rotator_unitary(x, 1, 6).unwrap().unitarity_error() < 1e-10);
        prop_assert!(pbs_unitary(0, 2, 6).unwrap().unitarity_error() < 1e-10);
        prop_assert!(beamsplitter_unitary(2, 0, t, 6).unwrap().unitarity_error() < 1e-10);
        prop_assert!(phase_shift_unitary(PolarizedMode::v(2), phi, 6).unwrap().unitarity_error() < 1e-10);
    }

    #[test]
    fn rotations_add(x in -10.0..10.0f64, y in -10.0..10.0f64) {
        let a = rotator_unitary(x, 0, 4).unwrap();
        let b = rotator_unitary(y, 0, 4).unwrap();
        let ab = a.then(&b).unwrap();
        prop_assert!(ab.max_deviation(&rotator_unitary(x + y, 0, 4).unwrap()) < 1e-12);
    }

    #[test]
    fn compose_is_unitary_and_associative(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let c1 = compose(&random_circuit(&mut rng, 3, 4)).unwrap();
        let c2 = compose(&random_circuit(&mut rng, 3, 4)).unwrap();
        let c3 = compose(&random_circuit(&mut rng, 3, 4)).unwrap();
        let left = c1.then(&c2).unwrap().then(&c3).unwrap();
        let right = c1.then(&c2.then(&c3).unwrap()).unwrap();
        prop_assert!(left.max_deviation(&right) < 1e-12);
        prop_assert!(left.unitarity_error() < 1e-10);
    }

    #[test]
    fn exact_conditioning_is_linear(seed in any::<u64>(), a in complex(), b in complex()) {
        let mut rng = rng(seed);
        let basis = Arc::new(enumerate_basis(4, 3).unwrap());
        let s1 = StateVector::new(basis.clone(), (0..basis.len()).map(|_| random_complex(&mut rng)).collect()).unwrap();
        let s2 = StateVector::new(basis.clone(), (0..basis.len()).map(|_| random_complex(&mut rng)).collect()).unwrap();
        let pattern = HeraldPattern::new(4, [
            (PolarizedMode::v(0), DetectorConstraint::Exactly(1)),
            (PolarizedMode::h(1), DetectorConstraint::Exactly(0)),
            (PolarizedMode::v(1), DetectorConstraint::Exactly(0)),
        ]).unwrap();
        let mixed = s1.scaled(a).add(&s2.scaled(b)).unwrap();
        let lhs = condition(&mixed, &pattern).unwrap();
        let r1 = condition(&s1, &pattern).unwrap();
        let r2 = condition(&s2, &pattern).unwrap();
        let rhs = r1.state().unwrap().scaled(a).add(&r2.state().unwrap().scaled(b)).unwrap();
        for (x, y) in lhs.state().unwrap().amplitudes().iter().zip(rhs.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
        prop_assert!(lhs.probability <= mixed.norm_sqr() + 1e-12);
        prop_assert!(lhs.probability >= 0.0);
    }

    #[test]
    fn exhaustive_exact_patterns_sum_to_norm(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let photons = 3u32;
        let basis = Arc::new(enumerate_basis(4, photons as usize).unwrap());
        let s = StateVector::new(basis.clone(), (0..basis.len()).map(|_| random_complex(&mut rng)).collect()).unwrap();
        // every (k1, k2) record on the two port-1 detectors
        let mut total = 0.0;
        for k1 in 0..=photons {
            for k2 in 0..=photons - k1 {
                let pattern = HeraldPattern::new(4, [
                    (PolarizedMode::h(1), DetectorConstraint::Exactly(k1)),
                    (PolarizedMode::v(1), DetectorConstraint::Exactly(k2)),
                ]).unwrap();
                let out = condition(&s, &pattern).unwrap();
                prop_assert!(out.probability >= 0.0 && out.probability <= s.norm_sqr() + 1e-12);
                total += out.probability;
            }
        }
        prop_assert!((total - s.norm_sqr()).abs() < 1e-10);
    }

    #[test]
    fn threshold_branches_add_incoherently(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let basis = Arc::new(enumerate_basis(4, 3).unwrap());
        let s = StateVector::new(basis.clone(), (0..basis.len()).map(|_| random_complex(&mut rng)).collect()).unwrap();
        let pattern = HeraldPattern::new(4, [
            (PolarizedMode::h(1), DetectorConstraint::AtLeast(1)),
            (PolarizedMode::v(1), DetectorConstraint::Exactly(0)),
        ]).unwrap();
        let out = condition(&s, &pattern).unwrap();
        let by_branch: f64 = out.branches.iter().map(|b| b.state.norm_sqr()).sum();
        let direct: f64 = s.iter().filter(|(o, _)| o.get(2) >= 1 && o.get(3) == 0).map(|(_, a)| a.norm_sqr()).sum();
        prop_assert!((out.probability - by_branch).abs() < 1e-12);
        prop_assert!((out.probability - direct).abs() < 1e-12);
    }

    #[test]
    fn theta_parity_is_exact(s in -20.0..20.0f64, t in -20.0..20.0f64) {
        let a = closed_form_coefficients(NlsParams::new(s, t).unwrap());
        let b = closed_form_coefficients(NlsParams::new(s, -t).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn canonical_form_preserves_the_gate_up_to_sign(s in -20.0..20.0f64, t in -20.0..20.0f64) {
        let p = NlsParams::new(s, t).unwrap();
        let c = canonicalize(p);
        prop_assert!((0.0..=PI).contains(&c.sigma));
        prop_assert!((0.0..=PI / 2.0).contains(&c.theta));
        let a = closed_form_coefficients(p);
        let b = closed_form_coefficients(c);
        let same = (0..3).all(|k| (a[k] - b[k]).abs() < 1e-9);
        let flipped = (0..3).all(|k| (a[k] + b[k]).abs() < 1e-9);
        prop_assert!(same || flipped);
        // idempotent
        let cc = canonicalize(c);
        prop_assert!((cc.sigma - c.sigma).abs() < 1e-12 && (cc.theta - c.theta).abs() < 1e-12);
    }

    #[test]
    fn simulation_matches_closed_form(s in 0.0..TAU, t in 0.0..TAU) {
        let p = NlsParams::new(s, t).unwrap();
        let sim = simulate_nls(p).unwrap();
        let cf = closed_form_coefficients(p);
        for (c, x) in sim.coefficients.iter().zip(cf) {
            prop_assert!((c - Complex64::new(x, 0.0)).norm() < 1e-10);
        }
    }
}

#[test]
fn identity_unitary_is_neutral() {
    let u = ModeUnitary::identity(8);
    let b = Arc::new(enumerate_basis(8, 2).unwrap());
    let s =
        StateVector::basis_state(b, &OccupationVector::new(vec![1, 0, 0, 0, 0, 0, 0, 1])).unwrap();
    assert_eq!(linopt::evolution::apply(&u, &s).unwrap(), s);
}
