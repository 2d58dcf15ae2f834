//! Monte Carlo BER sweep for each receiver on BPSK, with Wilson intervals
//! and the fitted error exponent.
//!
//! `cargo run --release --example ber_sweep`

use qbc::link::AlphabetKind;
use qbc::montecarlo::{fit_error_exponent, run_experiment, ExperimentConfig};
use qbc::receivers::{ReceiverKind, ReceiverSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for kind in [
        ReceiverKind::Heterodyne,
        ReceiverKind::Pa,
        ReceiverKind::Sfg,
    ] {
        let cfg = ExperimentConfig {
            alphabet: AlphabetKind::Bpsk,
            receiver: ReceiverSpec::new(kind),
            n_s: 0.01,
            n_z: 100.0,
            m: 10_000_000,
            sweep: vec![0.5, 1.0, 1.5, 2.0],
            trials_per_point: 20_000,
            master_seed: 7,
        };
        let curve = run_experiment(&cfg)?;
        println!("{}", kind.name());
        for p in &curve.points {
            println!(
                "  s={:.2} ber={:.4e} [{:.4e}, {:.4e}] bound={:.4e}",
                p.s, p.empirical_ber, p.wilson_ci_low, p.wilson_ci_high, p.analytic_bound
            );
        }
        match fit_error_exponent(&curve, 0.0) {
            Ok(k) => println!("  fitted exponent {k:.3}"),
            Err(e) => println!("  no fit: {e}"),
        }
    }
    Ok(())
}
