//! Truncated number-basis representation of Gaussian states and the
//! state-discrimination oracles built on it.
//!
//! Matrix elements come from the Husimi function. With `z = α*`, `w = α`
//! treated as independent variables,
//! `F(z, w) = e^{z·w} ⟨α|ρ|α⟩ = Σ ρ_{mn} z^m w^n / √(m! n!)`, and for a
//! Gaussian state `F = C exp(½ζᵀAζ + bᵀζ)` with `ζ = (w, z)`. The scaled
//! Taylor coefficients `h_k = c_k √(k!)` obey
//! `h_{k+e_i} = (b_i h_k + Σ_j A_ij √k_j h_{k-e_j}) / √(k_i+1)`,
//! and `ρ_{mn} = C h_{(n, m)}`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::AnalyticsError;
use crate::gaussian::GaussianState;

pub const MAX_FOCK_CUTOFF: usize = 40;
const HERMITIAN_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;
/// Eigenvalues at or below this are treated as exactly zero (`0^s = 0`).
const ZERO_EIGENVALUE: f64 = 1e-14;

/// Density operator in the number basis `|n_1, …⟩`, first mode most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    /// Levels per mode, `n_max + 1`.
    pub dimension: usize,
    pub n_modes: usize,
    pub matrix: DMatrix<Complex64>,
    /// `1 - Tr ρ` lost to truncation.
    pub trace_deficit: f64,
}

impl FockOperator {
    /// Hermiticity and positivity checks; returns the eigen-decomposition.
    fn spectrum(&self) -> Result<SymmetricEigen<Complex64, nalgebra::Dyn>, AnalyticsError> {
        let herm = (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if herm > HERMITIAN_TOL {
            return Err(AnalyticsError::NotHermitian(herm));
        }
        let sym = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(sym);
        let min = eig.eigenvalues.min();
        if min < -PSD_TOL {
            return Err(AnalyticsError::NotPositive(min));
        }
        Ok(eig)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>, AnalyticsError> {
        let mut v: Vec<f64> = self.spectrum()?.eigenvalues.iter().copied().collect();
        v.sort_by(|a, b| b.total_cmp(a));
        Ok(v)
    }
}

fn multi_index(mut flat: usize, vars: usize, d: usize, out: &mut [usize]) {
    for i in (0..vars).rev() {
        out[i] = flat % d;
        flat /= d;
    }
}

/// Truncated density matrix with `n_max + 1` levels per mode (one or two
/// modes, `n_max ≤ 40`).
pub fn gaussian_to_fock(
    state: &GaussianState,
    n_max: usize,
) -> Result<FockOperator, AnalyticsError> {
    let n = state.n_modes();
    if n > 2 {
        return Err(AnalyticsError::TooManyModes(n));
    }
    if n_max > MAX_FOCK_CUTOFF {
        return Err(AnalyticsError::CutoffTooLarge(n_max));
    }
    let d = n_max + 1;
    let vars = 2 * n;

    // r = U ζ with x_j = (w_j + z_j)/√2, p_j = -i(w_j - z_j)/√2
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = DMatrix::<Complex64>::zeros(vars, vars);
    for j in 0..n {
        u[(2 * j, j)] = Complex64::new(s, 0.0);
        u[(2 * j, n + j)] = Complex64::new(s, 0.0);
        u[(2 * j + 1, j)] = Complex64::new(0.0, -s);
        u[(2 * j + 1, n + j)] = Complex64::new(0.0, s);
    }
    let q = state.cov() + DMatrix::<f64>::identity(vars, vars) * 0.5;
    let det = q.determinant();
    let gamma = q
        .try_inverse()
        .ok_or(AnalyticsError::SingularCovariance)?
        .map(|v| Complex64::new(v, 0.0));
    let k = u.transpose() * gamma * &u;
    let mut x = DMatrix::<Complex64>::zeros(vars, vars);
    for j in 0..n {
        x[(j, n + j)] = Complex64::new(1.0, 0.0);
        x[(n + j, j)] = Complex64::new(1.0, 0.0);
    }
    let a = x - &k;
    let mut zeta_bar = DVector::<Complex64>::zeros(vars);
    for j in 0..n {
        let mu = state.mean_amplitude(j)?;
        zeta_bar[j] = mu;
        zeta_bar[n + j] = mu.conj();
    }
    let b = &k * &zeta_bar;
    let quad = (zeta_bar.transpose() * &k * &zeta_bar)[(0, 0)];
    let prefactor = (-0.5 * quad).exp() / det.sqrt();

    let total = d.pow(vars as u32);
    let mut h = vec![Complex64::new(0.0, 0.0); total];
    h[0] = Complex64::new(1.0, 0.0);
    let strides: Vec<usize> = (0..vars).map(|i| d.pow((vars - 1 - i) as u32)).collect();
    let mut idx = vec![0usize; vars];
    for flat in 1..total {
        multi_index(flat, vars, d, &mut idx);
        let i = idx.iter().position(|&v| v > 0).unwrap_or(0);
        let prev = flat - strides[i];
        idx[i] -= 1;
        let mut acc = b[i] * h[prev];
        for j in 0..vars {
            if idx[j] > 0 {
                acc += a[(i, j)] * (idx[j] as f64).sqrt() * h[prev - strides[j]];
            }
        }
        h[flat] = acc / ((idx[i] + 1) as f64).sqrt();
    }

    // ζ = (w, z): w carries the ket index n, z the bra index m
    let dim = d.pow(n as u32);
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    for row in 0..dim {
        for col in 0..dim {
            rho[(row, col)] = prefactor * h[col * dim + row];
        }
    }
    let trace_deficit = 1.0 - rho.trace().re;
    Ok(FockOperator {
        dimension: d,
        n_modes: n,
        matrix: rho,
        trace_deficit,
    })
}

fn check_pair(rho0: &FockOperator, rho1: &FockOperator) -> Result<(), AnalyticsError> {
    if rho0.matrix.shape() != rho1.matrix.shape() {
        return Err(AnalyticsError::DimensionMismatch(
            rho0.matrix.nrows(),
            rho1.matrix.nrows(),
        ));
    }
    Ok(())
}

/// `Q(s) = Tr(ρ₀^s ρ₁^{1-s}) = Σ_ij λ_i^s μ_j^{1-s} |⟨u_i|v_j⟩|²`.
struct ChernoffObjective {
    lambda: Vec<f64>,
    mu: Vec<f64>,
    overlap: DMatrix<f64>,
}

fn power(v: f64, s: f64) -> f64 {
    if v <= ZERO_EIGENVALUE {
        0.0
    } else {
        v.powf(s)
    }
}

impl ChernoffObjective {
    fn eval(&self, s: f64) -> f64 {
        let a: Vec<f64> = self.lambda.iter().map(|&l| power(l, s)).collect();
        let b: Vec<f64> = self.mu.iter().map(|&m| power(m, 1.0 - s)).collect();
        let mut acc = 0.0;
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0.0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                acc += ai * bj * self.overlap[(i, j)];
            }
        }
        acc
    }
}

/// Quantum Chernoff exponent `-ln min_{s∈[0,1]} Tr(ρ₀^s ρ₁^{1-s})`: a grid of
/// `s_grid` points followed by golden-section refinement around the best one.
pub fn chernoff_exponent_oracle(
    rho0: &FockOperator,
    rho1: &FockOperator,
    s_grid: usize,
) -> Result<f64, AnalyticsError> {
    check_pair(rho0, rho1)?;
    let e0 = rho0.spectrum()?;
    let e1 = rho1.spectrum()?;
    let ov = e0.eigenvectors.adjoint() * &e1.eigenvectors;
    let obj = ChernoffObjective {
        lambda: e0.eigenvalues.iter().copied().collect(),
        mu: e1.eigenvalues.iter().copied().collect(),
        overlap: ov.map(|c| c.norm_sqr()),
    };
    let n = s_grid.max(3);
    let grid: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let (best, _) = grid
        .iter()
        .enumerate()
        .map(|(i, &s)| (i, obj.eval(s)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, 1.0));
    let mut lo = grid[best.saturating_sub(1)];
    let mut hi = grid[(best + 1).min(n - 1)];
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (obj.eval(c), obj.eval(d));
    for _ in 0..100 {
        if (hi - lo).abs() < 1e-12 {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = obj.eval(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = obj.eval(d);
        }
    }
    let q = obj
        .eval(grid[best])
        .min(fc)
        .min(fd)
        .min(obj.eval(0.5 * (lo + hi)));
    Ok(-q.ln())
}

/// One-shot Helstrom error `(1 - D)/2` with trace distance
/// `D = ½ Σ |eig(ρ₀ - ρ₁)|`, equal priors.
pub fn helstrom_oracle(rho0: &FockOperator, rho1: &FockOperator) -> Result<f64, AnalyticsError> {
    check_pair(rho0, rho1)?;
    rho0.spectrum()?;
    rho1.spectrum()?;
    let diff = &rho0.matrix - &rho1.matrix;
    let diff = (&diff + diff.adjoint()) * Complex64::new(0.5, 0.0);
    let dist = 0.5
        * SymmetricEigen::new(diff)
            .eigenvalues
            .iter()
            .map(|l| l.abs())
            .sum::<f64>();
    Ok(0.5 * (1.0 - dist))
}
