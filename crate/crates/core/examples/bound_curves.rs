//! Prints the analytic error-probability bounds of every receiver against
//! the signal-to-noise ratio, with the exponent gain over heterodyne.

use qbc::analytics::{bound_at_snr, exponent_gain_db};
use qbc::link::AlphabetKind;
use qbc::receivers::ReceiverKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pairs = [
        (ReceiverKind::Heterodyne, AlphabetKind::Bpsk),
        (ReceiverKind::Pa, AlphabetKind::Bpsk),
        (ReceiverKind::Sfg, AlphabetKind::Bpsk),
        (ReceiverKind::Heterodyne, AlphabetKind::Qpsk),
        (ReceiverKind::Sfg, AlphabetKind::Qpsk),
    ];
    print!("{:>5}", "s");
    for (r, a) in pairs {
        print!(" {:>14}", format!("{}_{}", r.name(), a.name()));
    }
    println!();
    for i in 1..=10 {
        let s = i as f64;
        print!("{s:>5.1}");
        for (r, a) in pairs {
            print!(" {:>14.4e}", bound_at_snr(r, a, s)?.value);
        }
        println!();
    }

    let het = bound_at_snr(ReceiverKind::Heterodyne, AlphabetKind::Bpsk, 1.0)?;
    for r in [ReceiverKind::Pa, ReceiverKind::Sfg] {
        let b = bound_at_snr(r, AlphabetKind::Bpsk, 1.0)?;
        println!(
            "{} bpsk gain {:.3} dB",
            r.name(),
            exponent_gain_db(&b, &het)?
        );
    }
    Ok(())
}
