use num_complex::Complex64;
use rand::RngCore;

use super::{nearest_index, ReceiverError, SymbolReceiver};
use crate::gaussian::HeterodyneLaw;
use crate::link::{apply_channel_classical, Alphabet, ChannelParams, Symbol};

/// Sample-mean envelope `(Σ samples)/(M √N_S)`; its expectation is `√η e^{-iφ}`.
pub fn heterodyne_envelope(samples: &[Complex64], n_s: f64) -> Result<Complex64, ReceiverError> {
    if !(n_s > 0.0) {
        return Err(ReceiverError::NonPositiveBrightness(n_s));
    }
    if samples.is_empty() {
        return Err(ReceiverError::NoSamples);
    }
    let sum: Complex64 = samples.iter().sum();
    Ok(sum / (samples.len() as f64 * n_s.sqrt()))
}

/// Index of the constellation point `√η_k e^{-iφ_k}` nearest to `envelope`.
pub fn heterodyne_decide_index(envelope: Complex64, alphabet: &Alphabet) -> usize {
    nearest_index(
        alphabet
            .symbols()
            .iter()
            .map(|s| (envelope - s.point()).norm()),
    )
}

pub fn heterodyne_decide(envelope: Complex64, alphabet: &Alphabet) -> Symbol {
    alphabet.symbols()[heterodyne_decide_index(envelope, alphabet)]
}

/// Classical receiver prepared for Monte Carlo: per-symbol law of the
/// `M`-sample average, drawn in one shot (the mean of `M` i.i.d. Gaussian
/// outcomes is itself Gaussian with covariance divided by `M`).
#[derive(Debug, Clone)]
pub struct HeterodyneReceiver {
    alphabet: Alphabet,
    laws: Vec<HeterodyneLaw>,
    derotate: Complex64,
    scale: f64,
}

impl HeterodyneReceiver {
    pub fn new(cp: &ChannelParams, alphabet: &Alphabet) -> Result<Self, ReceiverError> {
        if !(cp.n_s > 0.0) {
            return Err(ReceiverError::NonPositiveBrightness(cp.n_s));
        }
        let m = usize::try_from(cp.m).unwrap_or(usize::MAX);
        let laws = alphabet
            .symbols()
            .iter()
            .map(|s| {
                let st = apply_channel_classical(cp, s)?;
                Ok(st.heterodyne_law(0)?.averaged(m))
            })
            .collect::<Result<Vec<_>, ReceiverError>>()?;
        Ok(Self {
            alphabet: alphabet.clone(),
            laws,
            derotate: Complex64::from_polar(1.0, cp.phi),
            scale: 1.0 / cp.n_s.sqrt(),
        })
    }

    /// Envelope `S̄` for one transmission of symbol `true_index`.
    pub fn envelope(&self, true_index: usize, rng: &mut dyn RngCore) -> Complex64 {
        self.laws[true_index].sample(rng) * self.scale * self.derotate
    }
}

impl SymbolReceiver for HeterodyneReceiver {
    fn decide_index(&self, true_index: usize, rng: &mut dyn RngCore) -> usize {
        heterodyne_decide_index(self.envelope(true_index, rng), &self.alphabet)
    }

    fn alphabet_len(&self) -> usize {
        self.alphabet.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussianState;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn noiseless_envelope() {
        let (eta, ns, phi) = (0.04f64, 0.5f64, 1.1f64);
        let s = Complex64::from_polar((eta * ns).sqrt(), -phi);
        let env = heterodyne_envelope(&[s, s, s], ns).unwrap();
        assert!((env - Complex64::from_polar(eta.sqrt(), -phi)).norm() < 1e-15);
        assert_eq!(heterodyne_envelope(&[], ns), Err(ReceiverError::NoSamples));
        assert!(heterodyne_envelope(&[s], 0.0).is_err());
    }

    #[test]
    fn monte_carlo_envelope_mean() {
        let (eta, ns, nz) = (0.01, 0.01, 100.0);
        let cp = ChannelParams::new(eta, 0.0, nz, 100_000, ns).unwrap();
        let alpha = Alphabet::bpsk(eta).unwrap();
        let st = apply_channel_classical(&cp, &alpha.symbols()[0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = 100_000;
        let samples: Vec<_> = (0..m)
            .map(|_| st.heterodyne_sample(0, &mut rng).unwrap())
            .collect();
        let env = heterodyne_envelope(&samples, ns).unwrap();
        let law = st.heterodyne_law(0).unwrap();
        let se = (law.var_re / m as f64).sqrt() / ns.sqrt();
        assert!(
            (env.re - 0.1).abs() < 4.0 * se,
            "{} vs 0.1 (se {se})",
            env.re
        );
        assert!(env.im.abs() < 4.0 * se);
    }

    #[test]
    fn phase_flip_envelope() {
        let cp = ChannelParams::new(0.04, 0.0, 0.0, 10, 1.0).unwrap();
        let st = apply_channel_classical(&cp, &Symbol::new(0.2, PI).unwrap()).unwrap();
        let law = st.heterodyne_law(0).unwrap();
        assert!((law.mean.re / 1.0 - (-0.2)).abs() < 1e-15);
    }

    #[test]
    fn nearest_symbol_rules() {
        let b = Alphabet::bpsk(0.04).unwrap();
        assert_eq!(heterodyne_decide_index(Complex64::new(0.2, 0.0), &b), 0);
        assert_eq!(heterodyne_decide_index(Complex64::new(-0.2, 0.0), &b), 1);
        assert_eq!(heterodyne_decide_index(Complex64::new(0.0, 0.0), &b), 0);
        let q = Alphabet::qpsk(0.09).unwrap();
        let env = Complex64::from_polar(0.3, -FRAC_PI_2) * 1.05;
        assert_eq!(heterodyne_decide(env, &q), q.symbols()[1]);
    }

    #[test]
    fn decision_rotation_invariance() {
        let q = Alphabet::qpsk(0.2).unwrap();
        let env = Complex64::new(0.13, -0.31);
        for k in 0..12 {
            let d = 0.37 * k as f64;
            let rotated = q.rotated(d);
            assert_eq!(
                heterodyne_decide_index(env * Complex64::from_polar(1.0, -d), &rotated),
                heterodyne_decide_index(env, &q)
            );
        }
    }

    #[test]
    fn averaged_draw_matches_explicit_samples() {
        // one-shot draw of the M-sample mean has the same law as averaging M draws
        let cp = ChannelParams::new(0.05, 0.0, 20.0, 50, 0.3).unwrap();
        let alpha = Alphabet::bpsk(0.05).unwrap();
        let rx = HeterodyneReceiver::new(&cp, &alpha).unwrap();
        let st = apply_channel_classical(&cp, &alpha.symbols()[1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let trials = 20_000;
        let fast: Vec<f64> = (0..trials).map(|_| rx.envelope(1, &mut rng).re).collect();
        let slow: Vec<f64> = (0..trials)
            .map(|_| {
                let s: Vec<_> = (0..50)
                    .map(|_| st.heterodyne_sample(0, &mut rng).unwrap())
                    .collect();
                heterodyne_envelope(&s, 0.3).unwrap().re
            })
            .collect();
        let mv = |v: &[f64]| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            (
                m,
                v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64,
            )
        };
        let (mf, vf) = mv(&fast);
        let (ms, vs) = mv(&slow);
        let se = (vf / trials as f64).sqrt();
        assert!((mf - ms).abs() < 4.0 * se * 2f64.sqrt());
        assert!((vf / vs - 1.0).abs() < 0.05);
        let _ = GaussianState::vacuum(1);
    }
}
