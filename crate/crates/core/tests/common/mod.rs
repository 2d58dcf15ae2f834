#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qbc::gaussian::GaussianState;
use qbc::link::{apply_channel, ChannelParams, Symbol};
use rand::Rng;

/// `(x, erfc(x))` rows of the 50-digit reference table.
pub fn erfc_reference() -> Vec<(f64, f64)> {
    let text = include_str!("../data/erfc_reference.txt");
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace();
            let x = it.next().unwrap().parse().unwrap();
            let y = it.next().unwrap().parse().unwrap();
            (x, y)
        })
        .collect()
}

/// Displaced squeezed thermal state with occupation kept small enough for a
/// 30-level truncation.
pub fn random_single_mode<R: Rng>(rng: &mut R) -> GaussianState {
    let n = rng.random_range(0.0..0.3);
    let r: f64 = rng.random_range(0.0..0.4);
    let th: f64 = rng.random_range(0.0..std::f64::consts::PI);
    let (c, s) = (th.cos(), th.sin());
    let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
    let diag = DMatrix::from_diagonal(&DVector::from_vec(vec![
        (n + 0.5) * (2.0 * r).exp(),
        (n + 0.5) * (-2.0 * r).exp(),
    ]));
    let cov = &rot * diag * rot.transpose();
    let mean = DVector::from_vec(vec![
        rng.random_range(-0.8..0.8),
        rng.random_range(-0.8..0.8),
    ]);
    GaussianState::from_moments(mean, cov).unwrap()
}

/// Return-idler state of a weak random link under a random symbol.
pub fn random_link_state<R: Rng>(rng: &mut R) -> GaussianState {
    let cp = ChannelParams::new(
        rng.random_range(0.05..0.9),
        rng.random_range(0.0..std::f64::consts::TAU),
        rng.random_range(0.0..0.15),
        1,
        rng.random_range(0.01..0.2),
    )
    .unwrap();
    let sym = Symbol::new(
        rng.random_range(0.2..1.0),
        rng.random_range(0.0..std::f64::consts::TAU),
    )
    .unwrap();
    apply_channel(&cp, &sym).unwrap()
}

/// Annihilation operator on `levels` number states.
pub fn lowering(levels: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(levels, levels, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}
