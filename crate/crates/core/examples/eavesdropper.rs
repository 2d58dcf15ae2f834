//! An eavesdropper with heterodyne detection against phase randomization,
//! and the cost of a power divider on the legitimate receivers.

use qbc::analytics::{
    eve_exponent_ratio, eve_random_phase_ber, power_divider_penalty, PhaseDefense,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (eta, n_s, m, n_z) = (0.01, 0.01, 1_000_000, 100.0);
    let trials = 50_000;
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let known = eve_random_phase_ber(eta, n_s, m, n_z, trials, PhaseDefense::Fixed(0.0), &mut rng)?;
    let binary = eve_random_phase_ber(eta, n_s, m, n_z, trials, PhaseDefense::Binary, &mut rng)?;
    let uniform = eve_random_phase_ber(eta, n_s, m, n_z, trials, PhaseDefense::Uniform, &mut rng)?;
    println!("eve ber, known phase    {known:.4}");
    println!("eve ber, binary offset  {binary:.4}");
    println!("eve ber, uniform offset {uniform:.4}");

    let ratio = eve_exponent_ratio();
    println!("alice/eve exponent ratio {ratio}");
    for f in [1.0, 0.75, 0.5, 0.25] {
        let p = power_divider_penalty(f)?;
        println!(
            "divider keeps {f:.2}: sfg/het {:.2}, pa/het {:.2}",
            ratio * p,
            ratio / 2.0 * p
        );
    }
    Ok(())
}
