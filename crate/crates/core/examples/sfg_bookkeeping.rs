//! Per-cycle photon bookkeeping of the sum-frequency-generation receiver and
//! the TMSO setting that nulls one hypothesis.

use qbc::link::{Alphabet, ChannelParams};
use qbc::receivers::{
    sfg_bookkeeping, sfg_nulling_params, sfg_residual_correlation, ReceiverKind, ReceiverSpec,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n_s, n_z, m) = (0.01, 100.0, 1_000_000);
    let eta = n_z / (n_s * m as f64);
    let cp = ChannelParams::new(eta, 0.0, n_z, m, n_s)?;
    let alphabet = Alphabet::bpsk(eta)?;
    let spec = ReceiverSpec::new(ReceiverKind::Sfg);

    let d2 = alphabet.squared_distance(0, 1);
    let bk = sfg_bookkeeping(&cp, d2, &spec)?;
    println!("tau          {:.3e}", bk.tau);
    println!("decay x      {:.6}", bk.decay);
    println!("cycles K     {}", bk.k);
    println!("total        {:.6}", bk.total);
    println!("closed form  {:.6}", bk.closed_form_total());
    println!("K -> inf     {:.6}", bk.infinite_total());
    println!("photon rate  {:.6} (s = {:.3})", bk.photon_rate(), cp.snr());
    for (k, c) in bk.cycles.iter().take(3).enumerate() {
        println!("  cycle {:>2}: n_b = {:.4e}", k + 1, c.n_b);
    }

    let [a, b] = [alphabet.symbols()[0], alphabet.symbols()[1]];
    let (g, theta) = sfg_nulling_params(&a, &cp)?;
    println!("TMSO gain    {g:.12}");
    println!("TMSO angle   {theta:.6}");
    println!(
        "C nulled     {:.3e}",
        sfg_residual_correlation(&cp, &a, &a)?.norm()
    );
    println!(
        "C other      {:.3e}",
        sfg_residual_correlation(&cp, &a, &b)?.norm()
    );
    Ok(())
}
