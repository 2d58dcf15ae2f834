//! Seeded BER sweeps over `s = η N_S M / N_Z` with `η` back-solved at fixed
//! `N_S`, `N_Z`, `M`.
//!
//! Trial `j` of sweep point `p` draws everything (true symbol, receiver
//! noise) from its own ChaCha8 stream seeded by
//! [`derive_trial_seed`]`(master_seed, p, j)`, and points aggregate error
//! counts only, so results do not depend on thread count or scheduling.

mod seed;
mod stats;

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::{bound_at_snr, AnalyticsError};
use crate::link::{Alphabet, AlphabetKind, ChannelParams, LinkError};
use crate::receivers::{
    prepare_receiver, ReceiverError, ReceiverKind, ReceiverSpec, SymbolReceiver,
};

pub use seed::{derive_trial_seed, TrialSeed};
pub use stats::{fit_error_exponent, fit_exponent_points, wilson_interval, Tally, Z_95};

pub const MIN_TRIALS: u64 = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MonteCarloError {
    #[error("{receiver:?} receiver does not support {alphabet:?}")]
    Unsupported {
        receiver: ReceiverKind,
        alphabet: AlphabetKind,
    },
    #[error("need at least {MIN_TRIALS} trials per point, got {0}")]
    TooFewTrials(u64),
    #[error("too many trials per point ({0})")]
    TooManyTrials(u64),
    #[error("sweep is empty")]
    EmptySweep,
    #[error("sweep has {0} points, above the supported maximum")]
    TooManyPoints(usize),
    #[error("sweep must be strictly increasing and non-negative (at index {0})")]
    BadSweep(usize),
    #[error("s = {s} needs eta = {eta} > 1")]
    EtaAboveOne { s: f64, eta: f64 },
    #[error("N_S and N_Z must be positive (N_S = {n_s}, N_Z = {n_z})")]
    NonPositiveSource { n_s: f64, n_z: f64 },
    #[error("exponent fit needs at least 3 points with errors, got {0}")]
    InsufficientPoints(usize),
    #[error(transparent)]
    Receiver(#[from] ReceiverError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub alphabet: AlphabetKind,
    pub receiver: ReceiverSpec,
    pub n_s: f64,
    pub n_z: f64,
    pub m: u64,
    /// Strictly increasing `s` values.
    pub sweep: Vec<f64>,
    pub trials_per_point: u64,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), MonteCarloError> {
        if !self.receiver.kind.supports(self.alphabet) || self.alphabet == AlphabetKind::Custom {
            return Err(MonteCarloError::Unsupported {
                receiver: self.receiver.kind,
                alphabet: self.alphabet,
            });
        }
        if self.trials_per_point < MIN_TRIALS {
            return Err(MonteCarloError::TooFewTrials(self.trials_per_point));
        }
        if self.trials_per_point > seed::MAX_TRIALS {
            return Err(MonteCarloError::TooManyTrials(self.trials_per_point));
        }
        if !(self.n_s > 0.0 && self.n_z > 0.0) {
            return Err(MonteCarloError::NonPositiveSource {
                n_s: self.n_s,
                n_z: self.n_z,
            });
        }
        if self.sweep.is_empty() {
            return Err(MonteCarloError::EmptySweep);
        }
        if self.sweep.len() > seed::MAX_POINTS {
            return Err(MonteCarloError::TooManyPoints(self.sweep.len()));
        }
        for (i, &s) in self.sweep.iter().enumerate() {
            if !(s >= 0.0 && s.is_finite()) || (i > 0 && s <= self.sweep[i - 1]) {
                return Err(MonteCarloError::BadSweep(i));
            }
            let eta = self.eta_at(s);
            if eta > 1.0 {
                return Err(MonteCarloError::EtaAboveOne { s, eta });
            }
        }
        Ok(())
    }

    /// `η = s N_Z / (N_S M)`.
    pub fn eta_at(&self, s: f64) -> f64 {
        s * self.n_z / (self.n_s * self.m as f64)
    }

    /// Channel and alphabet of sweep point `s`.
    pub fn channel_at(&self, s: f64) -> Result<(ChannelParams, Alphabet), MonteCarloError> {
        let eta = self.eta_at(s);
        if eta > 1.0 {
            return Err(MonteCarloError::EtaAboveOne { s, eta });
        }
        let cp = ChannelParams::new(eta, 0.0, self.n_z, self.m, self.n_s)?;
        Ok((cp, Alphabet::sweep_point(self.alphabet, eta)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub s: f64,
    pub eta: f64,
    pub empirical_ber: f64,
    pub errors: u64,
    pub trials: u64,
    pub wilson_ci_low: f64,
    pub wilson_ci_high: f64,
    pub analytic_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerCurve {
    pub receiver: ReceiverKind,
    pub alphabet: AlphabetKind,
    pub points: Vec<BerPoint>,
}

fn trial_error(rx: &dyn SymbolReceiver, master_seed: u64, point: u64, trial: u64) -> bool {
    let mut rng = ChaCha8Rng::from_seed(derive_trial_seed(master_seed, point, trial));
    let truth = rng.random_range(0..rx.alphabet_len());
    rx.decide_index(truth, &mut rng) != truth
}

/// Error tally of the trials `trials` of sweep point `point_index`.
pub fn run_point(
    cfg: &ExperimentConfig,
    point_index: usize,
    trials: Range<u64>,
) -> Result<Tally, MonteCarloError> {
    let s = *cfg
        .sweep
        .get(point_index)
        .ok_or(MonteCarloError::BadSweep(point_index))?;
    let (cp, alphabet) = cfg.channel_at(s)?;
    let rx = prepare_receiver(&cfg.receiver, &cp, &alphabet)?;
    let rx: &dyn SymbolReceiver = rx.as_ref();
    let n = trials.end.saturating_sub(trials.start);
    let p = point_index as u64;
    let errors = trials
        .into_par_iter()
        .filter(|&j| trial_error(rx, cfg.master_seed, p, j))
        .count() as u64;
    Ok(Tally { errors, trials: n })
}

pub fn point_from_tally(
    cfg: &ExperimentConfig,
    point_index: usize,
    tally: Tally,
) -> Result<BerPoint, MonteCarloError> {
    let s = cfg.sweep[point_index];
    let (lo, hi) = tally.wilson();
    Ok(BerPoint {
        s,
        eta: cfg.eta_at(s),
        empirical_ber: tally.rate(),
        errors: tally.errors,
        trials: tally.trials,
        wilson_ci_low: lo,
        wilson_ci_high: hi,
        analytic_bound: bound_at_snr(cfg.receiver.kind, cfg.alphabet, s)?.value,
    })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<BerCurve, MonteCarloError> {
    cfg.validate()?;
    let points = (0..cfg.sweep.len())
        .map(|p| {
            let tally = run_point(cfg, p, 0..cfg.trials_per_point)?;
            point_from_tally(cfg, p, tally)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BerCurve {
        receiver: cfg.receiver.kind,
        alphabet: cfg.alphabet,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::erfc;

    fn cfg(
        alphabet: AlphabetKind,
        kind: ReceiverKind,
        sweep: Vec<f64>,
        trials: u64,
    ) -> ExperimentConfig {
        ExperimentConfig {
            alphabet,
            receiver: ReceiverSpec::new(kind),
            n_s: 0.01,
            n_z: 100.0,
            m: 100_000,
            sweep,
            trials_per_point: trials,
            master_seed: 2024,
        }
    }

    fn sigma(p: f64, n: u64) -> f64 {
        (p * (1.0 - p) / n as f64).sqrt()
    }

    #[test]
    fn validation() {
        let ok = cfg(AlphabetKind::Bpsk, ReceiverKind::Pa, vec![0.5, 1.0], 1000);
        assert!(ok.validate().is_ok());
        let pa_q = cfg(AlphabetKind::Qpsk, ReceiverKind::Pa, vec![1.0], 1000);
        assert!(matches!(
            run_experiment(&pa_q),
            Err(MonteCarloError::Unsupported { .. })
        ));
        let few = ExperimentConfig {
            trials_per_point: 999,
            ..ok.clone()
        };
        assert_eq!(few.validate(), Err(MonteCarloError::TooFewTrials(999)));
        let unsorted = ExperimentConfig {
            sweep: vec![1.0, 1.0],
            ..ok.clone()
        };
        assert_eq!(unsorted.validate(), Err(MonteCarloError::BadSweep(1)));
        let bright = ExperimentConfig {
            sweep: vec![1e4],
            ..ok
        };
        assert!(matches!(
            bright.validate(),
            Err(MonteCarloError::EtaAboveOne { .. })
        ));
    }

    #[test]
    fn uninformative_channel_is_chance() {
        let n = 20_000;
        for (alphabet, kind, chance) in [
            (AlphabetKind::Bpsk, ReceiverKind::Heterodyne, 0.5),
            (AlphabetKind::Pam, ReceiverKind::Pa, 0.5),
            (AlphabetKind::Bpsk, ReceiverKind::Sfg, 0.5),
            (AlphabetKind::Qpsk, ReceiverKind::Heterodyne, 0.75),
            (AlphabetKind::Qpsk, ReceiverKind::Sfg, 0.75),
        ] {
            let c = run_experiment(&cfg(alphabet, kind, vec![0.0], n)).unwrap();
            let ber = c.points[0].empirical_ber;
            assert!(
                (ber - chance).abs() < 3.0 * sigma(chance, n),
                "{kind:?}/{alphabet:?}: {ber}"
            );
        }
    }

    #[test]
    fn heterodyne_matches_erfc() {
        let n = 20_000;
        let c = cfg(
            AlphabetKind::Bpsk,
            ReceiverKind::Heterodyne,
            vec![0.5, 1.0, 2.0],
            n,
        );
        let c = run_experiment(&ExperimentConfig { m: 1_000_000, ..c }).unwrap();
        for p in &c.points {
            // the return shields (1 - η) of the background
            let snr = p.eta * 0.01 * 1e6 / (1.0 + (1.0 - p.eta) * 100.0);
            let want = 0.5 * erfc(snr.sqrt());
            assert!(
                (p.empirical_ber - want).abs() < 4.0 * sigma(want, n),
                "{p:?}"
            );
            assert!(p.wilson_ci_low <= p.empirical_ber && p.empirical_ber <= p.wilson_ci_high);
            assert!(p.empirical_ber >= p.analytic_bound - 3.0 * sigma(p.analytic_bound, n));
        }
    }

    #[test]
    fn deterministic_and_partition_invariant() {
        let c = cfg(AlphabetKind::Qpsk, ReceiverKind::Sfg, vec![0.5, 1.0], 5000);
        assert_eq!(run_experiment(&c).unwrap(), run_experiment(&c).unwrap());
        let whole = run_point(&c, 1, 0..5000).unwrap();
        let parts = [0..1234, 1234..1300, 1300..5000]
            .into_iter()
            .map(|r| run_point(&c, 1, r).unwrap())
            .fold(Tally::default(), Tally::merge);
        assert_eq!(whole, parts);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        assert_eq!(single.install(|| run_point(&c, 1, 0..5000).unwrap()), whole);
    }

    #[test]
    fn curve_fit_on_sfg() {
        let c = run_experiment(&cfg(
            AlphabetKind::Bpsk,
            ReceiverKind::Sfg,
            vec![0.5, 0.75, 1.0, 1.25],
            200_000,
        ))
        .unwrap();
        let slope = fit_error_exponent(&c, 0.0).unwrap();
        assert!((slope - 4.0).abs() < 0.5, "{slope}");
    }
}
