//! Simulator for backscatter communication with entangled probes.
//!
//! A two-mode squeezed source sends its signal arm to a tag that modulates
//! the round-trip transmissivity and phase, and the receiver combines the
//! noisy return with the retained idler. The crate models that link with
//! Gaussian states ([`gaussian`], [`link`]), decodes it with heterodyne,
//! parametric-amplifier and sum-frequency-generation receivers
//! ([`receivers`]), gives analytic error bounds and Fock-space oracles
//! ([`analytics`]), and estimates BER curves by seeded Monte Carlo
//! ([`montecarlo`]). [`cli`] backs the `qbc` binary.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod cli;
pub mod gaussian;
pub mod link;
pub mod montecarlo;
pub mod receivers;
