//! Closed-form error-probability bounds.
//!
//! Every bound depends on the channel only through `d² N_S M / N_Z`, where
//! `d²` is the minimum squared distance of the alphabet. The `exponent`
//! field of [`EpBound`] is the coefficient of that quantity in `-ln P`.

use super::erfc::erfc;
use super::{AnalyticsError, BoundKind, EpBound};
use crate::link::{Alphabet, AlphabetKind};
use crate::receivers::ReceiverKind;

fn check_channel(n_s: f64, m: u64, n_z: f64) -> Result<(), AnalyticsError> {
    if !(n_z > 0.0) {
        return Err(AnalyticsError::NonPositiveNoise(n_z));
    }
    if m < 1 {
        return Err(AnalyticsError::NoModePairs);
    }
    if !(n_s >= 0.0) {
        return Err(AnalyticsError::NegativeBrightness(n_s));
    }
    Ok(())
}

fn distance_snr(a: &Alphabet, n_s: f64, m: u64, n_z: f64) -> Result<f64, AnalyticsError> {
    check_channel(n_s, m, n_z)?;
    let d2 = a.min_squared_distance()?;
    if !(d2 > 0.0) {
        return Err(AnalyticsError::DegenerateAlphabet);
    }
    Ok(d2 * n_s * m as f64 / n_z)
}

/// Classical lower bound `(1/(2|A|)) erfc(√(x/4))` at `x = d² N_S M/N_Z`.
pub fn classical_bound_at(alphabet_size: usize, x: f64) -> EpBound {
    let prefactor = 1.0 / (2.0 * alphabet_size as f64);
    EpBound {
        value: prefactor * erfc((x / 4.0).sqrt()),
        exponent: 0.25,
        prefactor,
        kind: BoundKind::Lower,
    }
}

/// PA upper bound `e^{-x/2}`.
pub fn pa_bound_at(kind: AlphabetKind, x: f64) -> Result<EpBound, AnalyticsError> {
    match kind {
        AlphabetKind::Pam | AlphabetKind::Bpsk => Ok(EpBound {
            value: (-x / 2.0).exp(),
            exponent: 0.5,
            prefactor: 1.0,
            kind: BoundKind::Upper,
        }),
        other => Err(AnalyticsError::Unsupported {
            receiver: ReceiverKind::Pa,
            alphabet: other,
        }),
    }
}

/// SFG upper bound: `e^{-x}` for PAM/BPSK, `min(1, 4e^{-x/2})` for QPSK.
pub fn sfg_bound_at(kind: AlphabetKind, x: f64) -> Result<EpBound, AnalyticsError> {
    match kind {
        AlphabetKind::Pam | AlphabetKind::Bpsk => Ok(EpBound {
            value: (-x).exp(),
            exponent: 1.0,
            prefactor: 1.0,
            kind: BoundKind::Upper,
        }),
        AlphabetKind::Qpsk => Ok(EpBound {
            value: (4.0 * (-x / 2.0).exp()).min(1.0),
            exponent: 0.5,
            prefactor: 4.0,
            kind: BoundKind::Upper,
        }),
        AlphabetKind::Custom => Err(AnalyticsError::Unsupported {
            receiver: ReceiverKind::Sfg,
            alphabet: AlphabetKind::Custom,
        }),
    }
}

pub fn classical_ep_lower_bound(
    a: &Alphabet,
    n_s: f64,
    m: u64,
    n_z: f64,
) -> Result<EpBound, AnalyticsError> {
    Ok(classical_bound_at(a.len(), distance_snr(a, n_s, m, n_z)?))
}

pub fn pa_ep_upper_bound(
    a: &Alphabet,
    n_s: f64,
    m: u64,
    n_z: f64,
) -> Result<EpBound, AnalyticsError> {
    pa_bound_at(a.kind(), distance_snr(a, n_s, m, n_z)?)
}

pub fn sfg_ep_upper_bound(
    a: &Alphabet,
    n_s: f64,
    m: u64,
    n_z: f64,
) -> Result<EpBound, AnalyticsError> {
    sfg_bound_at(a.kind(), distance_snr(a, n_s, m, n_z)?)
}

/// Bound of `receiver` for a standard alphabet at `s = η N_S M / N_Z`
/// (PAM as on-off keying), the sweep axis of BER curves.
pub fn bound_at_snr(
    receiver: ReceiverKind,
    kind: AlphabetKind,
    s: f64,
) -> Result<EpBound, AnalyticsError> {
    let per_eta = kind
        .distance_per_eta()
        .ok_or(AnalyticsError::DegenerateAlphabet)?;
    let x = per_eta * s;
    match receiver {
        ReceiverKind::Heterodyne => {
            let size = if kind == AlphabetKind::Qpsk { 4 } else { 2 };
            Ok(classical_bound_at(size, x))
        }
        ReceiverKind::Pa => pa_bound_at(kind, x),
        ReceiverKind::Sfg => sfg_bound_at(kind, x),
    }
}

/// `10 log₁₀(b1.exponent / b2.exponent)`.
pub fn exponent_gain_db(b1: &EpBound, b2: &EpBound) -> Result<f64, AnalyticsError> {
    if !(b1.exponent > 0.0 && b2.exponent > 0.0) {
        return Err(AnalyticsError::ZeroExponent);
    }
    Ok(10.0 * (b1.exponent / b2.exponent).log10())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::erfc::erfc;

    /// BPSK at η with `η N_S M / N_Z = s`.
    fn bpsk_args(s: f64) -> (Alphabet, f64, u64, f64) {
        let (n_s, n_z, m) = (0.01, 100.0, 100_000u64);
        let eta = s * n_z / (n_s * m as f64);
        (Alphabet::bpsk(eta).unwrap(), n_s, m, n_z)
    }

    #[test]
    fn spot_values() {
        let (a, n_s, m, n_z) = bpsk_args(1.0);
        let c = classical_ep_lower_bound(&a, n_s, m, n_z).unwrap();
        assert!((c.value - 0.25 * erfc(1.0)).abs() < 1e-15);
        assert!((c.value - 0.039_324_8).abs() < 1e-6);
        let pa = pa_ep_upper_bound(&a, n_s, m, n_z).unwrap();
        assert!((pa.value - (-2.0f64).exp()).abs() < 1e-14);
        let sfg = sfg_ep_upper_bound(&a, n_s, m, n_z).unwrap();
        assert!((sfg.value - 0.018_315_64).abs() < 1e-8);
    }

    #[test]
    fn zero_argument() {
        let b = classical_bound_at(2, 0.0);
        assert_eq!(b.value, 0.25);
        assert_eq!(pa_bound_at(AlphabetKind::Bpsk, 0.0).unwrap().value, 1.0);
        assert_eq!(sfg_bound_at(AlphabetKind::Qpsk, 0.0).unwrap().value, 1.0);
        assert_eq!(classical_bound_at(4, 0.0).prefactor, 0.125);
    }

    #[test]
    fn exponent_fields_and_gains() {
        let het = bound_at_snr(ReceiverKind::Heterodyne, AlphabetKind::Bpsk, 1.0).unwrap();
        let pa = bound_at_snr(ReceiverKind::Pa, AlphabetKind::Bpsk, 1.0).unwrap();
        let sfg = bound_at_snr(ReceiverKind::Sfg, AlphabetKind::Bpsk, 1.0).unwrap();
        let sfg_q = bound_at_snr(ReceiverKind::Sfg, AlphabetKind::Qpsk, 1.0).unwrap();
        assert_eq!(
            [het.exponent, pa.exponent, sfg.exponent, sfg_q.exponent],
            [0.25, 0.5, 1.0, 0.5]
        );
        assert!((exponent_gain_db(&sfg, &het).unwrap() - 6.020_599_913).abs() < 1e-8);
        assert!((exponent_gain_db(&pa, &het).unwrap() - 3.010_299_957).abs() < 1e-8);
        assert_eq!(exponent_gain_db(&het, &het).unwrap(), 0.0);
        let zero = EpBound {
            exponent: 0.0,
            ..het
        };
        assert!(exponent_gain_db(&zero, &het).is_err());
    }

    #[test]
    fn rejections() {
        let q = Alphabet::qpsk(0.01).unwrap();
        assert!(matches!(
            pa_ep_upper_bound(&q, 0.01, 1000, 100.0),
            Err(AnalyticsError::Unsupported { .. })
        ));
        let (a, n_s, m, _) = bpsk_args(1.0);
        assert!(classical_ep_lower_bound(&a, n_s, m, 0.0).is_err());
        assert!(classical_ep_lower_bound(&a, n_s, 0, 100.0).is_err());
    }

    #[test]
    fn bpsk_ordering_on_grid() {
        for i in 0..100 {
            let s = 0.48 + i as f64 * 0.2;
            let sfg = bound_at_snr(ReceiverKind::Sfg, AlphabetKind::Bpsk, s)
                .unwrap()
                .value;
            let pa = bound_at_snr(ReceiverKind::Pa, AlphabetKind::Bpsk, s)
                .unwrap()
                .value;
            assert!(sfg < pa && pa < (-s).exp(), "s={s}");
        }
    }
}
