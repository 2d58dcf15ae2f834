use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// Real phase-space matrix of the linear Bogoliubov map
/// `a'_j = Σ_k A_jk a_k + B_jk a_k†` acting on `modes`, identity elsewhere.
///
/// With `a = (x + ip)/√2`:
/// `x'_j = Σ_k Re(A+B)_jk x_k - Im(A-B)_jk p_k` and
/// `p'_j = Σ_k Im(A+B)_jk x_k + Re(A-B)_jk p_k`.
fn bogoliubov(
    n_modes: usize,
    modes: &[usize],
    a: &[&[Complex64]],
    b: &[&[Complex64]],
) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for &m in modes {
        s[(2 * m, 2 * m)] = 0.0;
        s[(2 * m + 1, 2 * m + 1)] = 0.0;
    }
    for (j, &mj) in modes.iter().enumerate() {
        for (k, &mk) in modes.iter().enumerate() {
            let plus = a[j][k] + b[j][k];
            let minus = a[j][k] - b[j][k];
            s[(2 * mj, 2 * mk)] = plus.re;
            s[(2 * mj, 2 * mk + 1)] = -minus.im;
            s[(2 * mj + 1, 2 * mk)] = plus.im;
            s[(2 * mj + 1, 2 * mk + 1)] = minus.re;
        }
    }
    s
}

pub(super) fn beam_splitter(
    n_modes: usize,
    a: usize,
    b: usize,
    eta: f64,
    phi: f64,
) -> DMatrix<f64> {
    let t = eta.sqrt();
    let r = (1.0 - eta).sqrt();
    let zero = Complex64::new(0.0, 0.0);
    let row_a = [Complex64::from_polar(t, -phi), Complex64::new(r, 0.0)];
    let row_b = [Complex64::new(r, 0.0), -Complex64::from_polar(t, phi)];
    bogoliubov(
        n_modes,
        &[a, b],
        &[&row_a, &row_b],
        &[&[zero, zero], &[zero, zero]],
    )
}

/// Two-mode squeezer with `cosh r = √G` and `sinh r = √(G-1)` given directly.
pub(super) fn two_mode_squeezer(
    n_modes: usize,
    a: usize,
    b: usize,
    cosh_r: f64,
    sinh_r: f64,
    theta: f64,
) -> DMatrix<f64> {
    let g = Complex64::new(cosh_r, 0.0);
    let h = Complex64::from_polar(sinh_r, theta);
    let zero = Complex64::new(0.0, 0.0);
    bogoliubov(
        n_modes,
        &[a, b],
        &[&[g, zero], &[zero, g]],
        &[&[zero, h], &[h, zero]],
    )
}

pub(super) fn phase_shift(n_modes: usize, m: usize, phi: f64) -> DMatrix<f64> {
    let zero = Complex64::new(0.0, 0.0);
    bogoliubov(
        n_modes,
        &[m],
        &[&[Complex64::from_polar(1.0, -phi)]],
        &[&[zero]],
    )
}

/// Standard symplectic form for interleaved ordering.
pub(crate) fn omega(n_modes: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for m in 0..n_modes {
        w[(2 * m, 2 * m + 1)] = 1.0;
        w[(2 * m + 1, 2 * m)] = -1.0;
    }
    w
}

/// Symplectic spectrum via `S = V^{1/2} Ω V^{1/2}`: `SᵀS` is symmetric with
/// every `ν²` appearing twice. Non-positive covariance eigenvalues are clamped
/// to zero, which drives the reported spectrum below `1/2`.
pub(super) fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Vec<f64> {
    let n = cov.nrows() / 2;
    let eig = SymmetricEigen::new(cov.clone());
    let sqrt_d = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let root = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_d) * eig.eigenvectors.transpose();
    let s = &root * omega(n) * &root;
    let gram = s.transpose() * &s;
    let mut sq: Vec<f64> = SymmetricEigen::new(gram)
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0))
        .collect();
    sq.sort_by(f64::total_cmp);
    sq.chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).sqrt())
        .collect()
}
