//! Builds a two-mode squeezed source, sends the signal through a thermal
//! beam splitter and prints the surviving quantum correlation.

use qbc::gaussian::{GaussianState, ModeIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_s = 0.01;
    let (eta, n_b) = (0.05, 50.0);

    let source = GaussianState::tmss(n_s)?;
    let joint = source.tensor(&GaussianState::thermal(n_b)?);
    let out = joint
        .apply_beam_splitter(0, 2, eta, 0.3)?
        .partial_trace(&[ModeIndex(0), ModeIndex(1)])?;

    let c = out.phase_sensitive_correlation(0, 1)?;
    println!("return photons   {:.6}", out.mean_photon_number(0)?);
    println!("idler photons    {:.6}", out.mean_photon_number(1)?);
    println!("|<a_R a_I>|      {:.6e}", c.norm());
    println!("sqrt(eta N(N+1)) {:.6e}", (eta * n_s * (n_s + 1.0)).sqrt());
    println!("arg <a_R a_I>    {:.6}", c.arg());
    println!("min symplectic   {:.6}", out.min_symplectic_eigenvalue());

    // a coherent state is the only pure state with vacuum-level noise
    let coh = GaussianState::coherent(num_complex::Complex64::new(1.5, -0.5));
    println!("coherent <a>     {}", coh.mean_amplitude(0)?);
    Ok(())
}
