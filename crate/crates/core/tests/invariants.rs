use proptest::prelude::*;
use qbc::analytics::{erfc, ln_erfc};
use qbc::gaussian::{GaussianState, ModeIndex};
use qbc::link::{apply_channel, Alphabet, ChannelParams, Symbol, IDLER, RETURN};
use qbc::montecarlo::{derive_trial_seed, wilson_interval, Z_95};
use qbc::receivers::{sfg_nulling_params, sfg_residual_correlation};
use std::f64::consts::TAU;

fn physical_state() -> impl Strategy<Value = GaussianState> {
    (
        0.0..3.0f64,
        0.0..2.0f64,
        0.0..1.0f64,
        0.0..TAU,
        1.0..4.0f64,
        0.0..TAU,
    )
        .prop_map(|(ns, nb, eta, phi, g, th)| {
            GaussianState::tmss(ns)
                .unwrap()
                .tensor(&GaussianState::thermal(nb).unwrap())
                .apply_beam_splitter(0, 2, eta, phi)
                .unwrap()
                .apply_two_mode_squeeze(1, 2, g, th)
                .unwrap()
        })
}

fn link() -> impl Strategy<Value = (ChannelParams, Symbol)> {
    (
        0.0..1.0f64,
        0.0..TAU,
        0.0..500.0f64,
        1e-4..2.0f64,
        0.0..1.0f64,
        0.0..TAU,
    )
        .prop_map(|(eta, phi, nz, ns, amp, ph)| {
            (
                ChannelParams::new(eta, phi, nz, 1000, ns).unwrap(),
                Symbol::new(amp, ph).unwrap(),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn uncertainty_holds(st in physical_state()) {
        for nu in st.symplectic_eigenvalues() {
            prop_assert!(nu >= 0.5 - 1e-9, "{nu}");
        }
        let reduced = st.partial_trace(&[ModeIndex(2), ModeIndex(0)]).unwrap();
        prop_assert!(reduced.is_physical());
    }

    #[test]
    fn beam_splitter_conserves_photons(
        st in physical_state(),
        eta in 0.0..1.0f64,
        phi in 0.0..TAU,
    ) {
        let before = st.mean_photon_number(0).unwrap() + st.mean_photon_number(1).unwrap();
        let out = st.apply_beam_splitter(0, 1, eta, phi).unwrap();
        let after = out.mean_photon_number(0).unwrap() + out.mean_photon_number(1).unwrap();
        prop_assert!((before - after).abs() <= 1e-10 * before.max(1.0));
        prop_assert!((st.mean_photon_number(2).unwrap() - out.mean_photon_number(2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn tmss_cross_correlation(ns in 0.0..10.0f64) {
        let st = GaussianState::tmss(ns).unwrap();
        let c = st.phase_sensitive_correlation(0, 1).unwrap();
        prop_assert!((c.norm() - (ns * (ns + 1.0)).sqrt()).abs() <= 1e-12 * (1.0 + ns));
        prop_assert!((st.mean_photon_number(0).unwrap() - ns).abs() <= 1e-12 * (1.0 + ns));
    }

    #[test]
    fn tmso_nulls_its_target((cp, sym) in link()) {
        let res = sfg_residual_correlation(&cp, &sym, &sym).unwrap();
        prop_assert!(res.norm() <= 1e-10, "{}", res.norm());
        let (g, _) = sfg_nulling_params(&sym, &cp).unwrap();
        prop_assert!(g >= 1.0);
    }

    #[test]
    fn channel_output_is_physical((cp, sym) in link()) {
        let st = apply_channel(&cp, &sym).unwrap();
        prop_assert!(st.is_physical());
        let c = st.phase_sensitive_correlation(RETURN, IDLER).unwrap();
        let want = (sym.eta() * cp.n_s * (cp.n_s + 1.0)).sqrt();
        prop_assert!((c.norm() - want).abs() <= 1e-11 * (1.0 + want));
    }

    #[test]
    fn rotation_preserves_distances(eta in 1e-3..1.0f64, delta in 0.0..TAU) {
        let a = Alphabet::qpsk(eta).unwrap();
        let r = a.rotated(delta);
        prop_assert!((a.min_squared_distance().unwrap() - r.min_squared_distance().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn erfc_is_monotone_and_consistent(x in -5.0..26.0f64, dx in 1e-6..1.0f64) {
        prop_assert!(erfc(x + dx) < erfc(x));
        prop_assert!((erfc(x) + erfc(-x) - 2.0).abs() < 1e-15);
        prop_assert!((ln_erfc(x) - erfc(x).ln()).abs() <= 1e-13 * erfc(x).ln().abs().max(1.0));
    }

    #[test]
    fn wilson_contains_estimate(trials in 1u64..100_000, frac in 0.0..=1.0f64) {
        let errors = (frac * trials as f64).floor() as u64;
        let (lo, hi) = wilson_interval(errors, trials, Z_95);
        let p = errors as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }

    #[test]
    fn trial_seeds_are_injective(
        master in any::<u64>(),
        point in 0u64..(1 << 24),
        t1 in 0u64..(1 << 40),
        t2 in 0u64..(1 << 40),
    ) {
        prop_assume!(t1 != t2);
        prop_assert_ne!(derive_trial_seed(master, point, t1), derive_trial_seed(master, point, t2));
        prop_assert_eq!(derive_trial_seed(master, point, t1), derive_trial_seed(master, point, t1));
    }
}
