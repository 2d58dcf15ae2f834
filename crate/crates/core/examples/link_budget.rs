//! Turns a physical link description into the simulator's channel
//! parameters: transmissivity, background occupancy and mode count.

use qbc::link::{ChannelParams, LinkBudget};
use std::f64::consts::TAU;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lb = LinkBudget {
        g_t: 10.0,
        g_r: 10.0,
        omega: TAU * 1e9,
        r_t: 5.0,
        r_r: 5.0,
        sigma_q: 1e-2,
        temperature: 290.0,
        bandwidth: 1e7,
        symbol_duration: 1e-3,
        tag_phase: 0.0,
    };
    let rtt = lb.rtt()?;
    let n_z = lb.thermal_occupancy()?;
    let m = lb.mode_pairs()?;
    let phase = lb.phase()?;
    println!(
        "eta        {:.6e} (exceeds 1: {})",
        rtt.eta, rtt.exceeds_unity
    );
    println!("N_Z        {n_z:.4}");
    println!("M          {m}");
    println!("phase      {:.6} rad", phase.wavenumber);

    let n_s = 0.01;
    let cp = ChannelParams::new(rtt.eta.min(1.0), phase.wavenumber, n_z, m, n_s)?;
    println!("s          {:.6e}", cp.snr());
    for w in cp.regime_warnings() {
        println!("warning    {w:?}");
    }
    Ok(())
}
