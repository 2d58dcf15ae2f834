//! Library routines checked against independent references: a 50-digit
//! erfc table, Fock-space expectation values and closed-form pure and
//! diagonal-state results.

mod common;

use nalgebra::DMatrix;
use num_complex::Complex64;
use qbc::analytics::{chernoff_exponent_oracle, erfc, gaussian_to_fock, helstrom_oracle, ln_erfc};
use qbc::gaussian::GaussianState;
use qbc::link::{apply_channel, Alphabet, ChannelParams, Symbol, IDLER};
use qbc::receivers::{pa_statistic_moments, VarianceModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn erfc_matches_reference_table() {
    let table = common::erfc_reference();
    assert_eq!(table.len(), 10_000);
    let mut worst = 0.0f64;
    for &(x, want) in &table {
        let rel = ((erfc(x) - want) / want).abs();
        worst = worst.max(rel);
        let ln_rel = (ln_erfc(x) - want.ln()).abs() / want.ln().abs().max(1.0);
        assert!(ln_rel < 1e-12, "ln_erfc({x})");
    }
    assert!(worst <= 1e-12, "worst relative error {worst:e}");
}

/// `⟨O⟩` and `⟨O²⟩ - ⟨O⟩²` for `O = a_I a_R + a_I† a_R†` in a truncated basis.
fn fock_pa_moments(state: &GaussianState, n_max: usize) -> (f64, f64) {
    let rho = gaussian_to_fock(state, n_max).unwrap();
    let d = n_max + 1;
    let a = common::lowering(d);
    let id = DMatrix::<Complex64>::identity(d, d);
    let a_r = common::kron(&a, &id);
    let a_i = common::kron(&id, &a);
    let o = &a_i * &a_r + a_i.adjoint() * a_r.adjoint();
    let mean = (&rho.matrix * &o).trace().re;
    let second = (&rho.matrix * &o * &o).trace().re;
    (mean, second - mean * mean)
}

#[test]
fn pa_exact_variance_matches_fock_oracle() {
    let cases = [
        (0.3, 0.0, 0.2, 0.15, 1.0, 0.0),
        (0.6, 0.9, 0.1, 0.3, 1.0, std::f64::consts::PI),
        (0.5, 2.1, 0.25, 0.05, 0.7, 0.4),
        (0.9, 5.0, 0.05, 0.2, 0.4, 1.3),
    ];
    for (eta, phi, n_z, n_s, amp, phase) in cases {
        let cp = ChannelParams::new(eta, phi, n_z, 1000, n_s).unwrap();
        let sym = Symbol::new(amp, phase).unwrap();
        let m = pa_statistic_moments(&cp, &sym, VarianceModel::Exact).unwrap();
        let st = apply_channel(&cp, &sym)
            .unwrap()
            .apply_phase_shift(IDLER, -phi)
            .unwrap();
        let (mean, var) = fock_pa_moments(&st, 22);
        assert!((m.mean - mean).abs() < 1e-9, "mean {} vs {mean}", m.mean);
        assert!(
            (m.variance - var).abs() < 1e-8 * var,
            "var {} vs {var}",
            m.variance
        );
        // the approximate model is the thermal background alone
        let approx = pa_statistic_moments(&cp, &sym, VarianceModel::Approximate).unwrap();
        assert_eq!(approx.variance, n_z);
    }
}

#[test]
fn pa_decision_levels_follow_cross_correlation() {
    let a = Alphabet::bpsk(0.2).unwrap();
    let cp = ChannelParams::new(0.2, 0.0, 0.1, 1000, 0.1).unwrap();
    for s in a.symbols() {
        let m = pa_statistic_moments(&cp, s, VarianceModel::Exact).unwrap();
        let want = 2.0 * (s.eta() * 0.1 * 1.1f64).sqrt() * s.phase().cos();
        assert!((m.mean - want).abs() < 1e-14);
    }
}

fn coherent(re: f64, im: f64, n_max: usize) -> qbc::analytics::FockOperator {
    gaussian_to_fock(&GaussianState::coherent(Complex64::new(re, im)), n_max).unwrap()
}

#[test]
fn chernoff_and_helstrom_on_coherent_pairs() {
    // pure states: Tr ρ0^s ρ1^{1-s} = |⟨α|β⟩|² = e^{-|α-β|²} for every s
    for (a, b) in [
        ((0.0, 0.0), (0.5, 0.0)),
        ((0.3, -0.2), (-0.4, 0.5)),
        ((1.0, 0.0), (0.0, 1.0)),
    ] {
        let r0 = coherent(a.0, a.1, 30);
        let r1 = coherent(b.0, b.1, 30);
        let d2 = (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
        let xi = chernoff_exponent_oracle(&r0, &r1, 41).unwrap();
        assert!((xi - d2).abs() < 1e-8, "{xi} vs {d2}");
        let ph = helstrom_oracle(&r0, &r1).unwrap();
        let want = 0.5 * (1.0 - (1.0 - (-d2).exp()).sqrt());
        assert!((ph - want).abs() < 1e-9, "{ph} vs {want}");
    }
}

#[test]
fn chernoff_on_thermal_pair() {
    // commuting diagonal states: brute-force min over s of Σ p_n^s q_n^{1-s}
    let (n0, n1) = (0.2, 0.9);
    let geo = |nb: f64, k: usize| nb.powi(k as i32) / (1.0 + nb).powi(k as i32 + 1);
    let q = |s: f64| {
        (0..400)
            .map(|k| geo(n0, k).powf(s) * geo(n1, k).powf(1.0 - s))
            .sum::<f64>()
    };
    let brute = (0..=100_000)
        .map(|i| q(i as f64 / 100_000.0))
        .fold(f64::INFINITY, f64::min);
    let r0 = gaussian_to_fock(&GaussianState::thermal(n0).unwrap(), 40).unwrap();
    let r1 = gaussian_to_fock(&GaussianState::thermal(n1).unwrap(), 40).unwrap();
    let xi = chernoff_exponent_oracle(&r0, &r1, 21).unwrap();
    // the 40-level truncation of n = 0.9 drops ~4e-12 of the trace
    assert!((xi + brute.ln()).abs() < 1e-6, "{xi} vs {}", -brute.ln());
}

#[test]
fn helstrom_below_chernoff_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..20 {
        let (r0, r1) = if i % 2 == 0 {
            let a = common::random_single_mode(&mut rng);
            let b = common::random_single_mode(&mut rng);
            (
                gaussian_to_fock(&a, 30).unwrap(),
                gaussian_to_fock(&b, 30).unwrap(),
            )
        } else {
            let a = common::random_link_state(&mut rng);
            let b = common::random_link_state(&mut rng);
            (
                gaussian_to_fock(&a, 9).unwrap(),
                gaussian_to_fock(&b, 9).unwrap(),
            )
        };
        let ph = helstrom_oracle(&r0, &r1).unwrap();
        let xi = chernoff_exponent_oracle(&r0, &r1, 21).unwrap();
        let slack = r0.trace_deficit + r1.trace_deficit;
        assert!(
            ph <= 0.5 * (-xi).exp() + slack + 1e-12,
            "case {i}: {ph} vs {}",
            0.5 * (-xi).exp()
        );
        assert!(ph >= 0.0 && xi >= 0.0);
    }
}
