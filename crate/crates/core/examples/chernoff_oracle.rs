//! Compares the quantum Chernoff exponent and Helstrom error of two
//! truncated Fock-space states with their closed forms.

use num_complex::Complex64;
use qbc::analytics::{chernoff_exponent_oracle, gaussian_to_fock, helstrom_oracle};
use qbc::gaussian::GaussianState;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (a, b) = (Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0));
    let rho0 = gaussian_to_fock(&GaussianState::coherent(a), 20)?;
    let rho1 = gaussian_to_fock(&GaussianState::coherent(b), 20)?;

    let xi = chernoff_exponent_oracle(&rho0, &rho1, 101)?;
    let overlap = (a - b).norm_sqr();
    println!("chernoff  {xi:.10}  closed form {overlap:.10}");

    let p_h = helstrom_oracle(&rho0, &rho1)?;
    let exact = 0.5 * (1.0 - (1.0 - (-overlap).exp()).sqrt());
    println!("helstrom  {p_h:.10}  closed form {exact:.10}");
    println!("bound     {:.10}", 0.5 * (-xi).exp());

    let th0 = gaussian_to_fock(&GaussianState::thermal(0.2)?, 30)?;
    let th1 = gaussian_to_fock(&GaussianState::thermal(0.4)?, 30)?;
    println!(
        "thermal   {:.10}",
        chernoff_exponent_oracle(&th0, &th1, 201)?
    );
    Ok(())
}
