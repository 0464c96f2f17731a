use enfreq::blockstate::{block_coefficients, readout_probabilities, MeasurementSetting};
use enfreq::channel::{apply_to_qubit, channel_at, cp_check, xi, NoiseParams, QubitDensity, CP_POLARIZATION_LIMIT};
use enfreq::energetics::{energy_from_outcomes, energy_rho6};
use enfreq::metrology::{cfi, qfi_exact, DerivativeMode};
use proptest::prelude::*;

/// Parameters inside the region where the channel is CP at every time.
fn cp_params() -> impl Strategy<Value = NoiseParams> {
    (0.2f64..3.0, 0.01f64..0.57, -2.0f64..1.5, 1e-3f64..0.249).prop_map(|(omega, eps, log_lambda, ratio)| {
        let lambda = 10f64.powf(log_lambda);
        NoiseParams::new(omega, omega / (2.0 * eps.atanh()), ratio * lambda * eps, lambda).unwrap()
    })
}

fn angle() -> impl Strategy<Value = f64> {
    -std::f64::consts::PI..std::f64::consts::PI
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn thermal_state_is_a_fixed_point(p in cp_params(), t in 0.0f64..50.0) {
        let thermal = QubitDensity::thermal(p.epsilon());
        let out = apply_to_qubit(&channel_at(&p, t).unwrap(), &thermal).unwrap();
        prop_assert!(out.max_abs_diff(&thermal) < 1e-15);
    }

    #[test]
    fn channel_is_cp_below_critical_ratio(p in cp_params(), t in 0.0f64..100.0) {
        prop_assert!(p.epsilon() <= CP_POLARIZATION_LIMIT);
        let status = cp_check(&channel_at(&p, t).unwrap());
        prop_assert!(status.is_cp, "margin {}", status.margin);
    }

    #[test]
    fn channel_preserves_states(p in cp_params(), t in 0.0f64..20.0, theta in 0.0f64..std::f64::consts::PI, az in angle()) {
        let out = apply_to_qubit(&channel_at(&p, t).unwrap(), &QubitDensity::pure(theta, az)).unwrap();
        prop_assert!(out.validate(1e-12).is_ok());
    }

    #[test]
    fn xi_decays_monotonically_below_critical_ratio(ratio in 0.0f64..0.249, lambda in 0.1f64..10.0, t in 0.0f64..10.0, dt in 1e-3f64..1.0) {
        let a = xi(ratio, lambda, t).unwrap();
        let b = xi(ratio, lambda, t + dt).unwrap();
        prop_assert!(a <= 1.0 && b > 0.0 && b <= a);
    }

    #[test]
    fn blocks_have_unit_trace(p in cp_params(), n in 1usize..400, t in 0.0f64..10.0) {
        let blocks = block_coefficients(n, p.epsilon(), &channel_at(&p, t).unwrap()).unwrap();
        prop_assert!((blocks.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn readout_is_a_distribution(p in cp_params(), n in 1usize..300, t in 0.0f64..10.0, z1 in angle(), z2 in angle()) {
        let snap = channel_at(&p, t).unwrap();
        let blocks = block_coefficients(n, p.epsilon(), &snap).unwrap();
        let dist = readout_probabilities(&blocks, snap.phi, &MeasurementSetting::new(z1, z2, p.omega())).unwrap();
        prop_assert!((dist.total() - 1.0).abs() < 1e-12);
        prop_assert!(dist.weighted().iter().flatten().all(|&q| q >= 0.0));
        prop_assert!(dist.control_polarization().abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn closed_form_energy_matches_outcomes(p in cp_params(), n in 1usize..120, t in 0.0f64..5.0, z1 in angle(), z2 in angle()) {
        let blocks = block_coefficients(n, p.epsilon(), &channel_at(&p, t).unwrap()).unwrap();
        let s = MeasurementSetting::new(z1, z2, p.omega());
        let closed = energy_rho6(&blocks, p.omega(), &s);
        let summed = energy_from_outcomes(&blocks, p.omega(), &s).unwrap();
        prop_assert!((closed - summed).abs() <= 1e-12 * (1.0 + n as f64 * p.omega()));
    }

    #[test]
    fn classical_information_respects_quantum_bound(p in cp_params(), n in 1usize..40, t in 0.01f64..5.0, z1 in angle(), z2 in angle()) {
        let s = MeasurementSetting::new(z1, z2, p.omega());
        for mode in [DerivativeMode::FrozenRatioBias, DerivativeMode::FiniteDifference] {
            let c = cfi(&p, n, t, &s, mode).unwrap();
            let q = qfi_exact(&p, n, t, mode).unwrap();
            prop_assert!(c >= 0.0);
            prop_assert!(c <= q * (1.0 + 1e-7) + 1e-300, "{mode:?}: {c} > {q}");
        }
    }

    #[test]
    fn shifting_zeta2_by_pi_relabels_outcomes(p in cp_params(), n in 1usize..40, t in 0.01f64..5.0, z1 in angle(), z2 in angle()) {
        let a = cfi(&p, n, t, &MeasurementSetting::new(z1, z2, p.omega()), DerivativeMode::FrozenRatioBias).unwrap();
        let b = cfi(&p, n, t, &MeasurementSetting::new(z1, z2 + std::f64::consts::PI, p.omega()), DerivativeMode::FrozenRatioBias).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1e-300));
    }
}
