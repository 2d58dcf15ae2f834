//! SFG receiver at the photon-bookkeeping level.
//!
//! A TMSO first nulls the return-idler correlation of one hypothesis. Each of
//! the `K` feed-forward cycles then deposits `n_b^(k) = τ M |C(0)|² x^{2k}`
//! coherent photons in the sum-frequency mode `b` (and as many in the
//! feed-forward mode `E`), `x = 1 - τ(1+N_Z)`. The nulled hypothesis yields no
//! photons, so counting photons discriminates it from the rest.
//!
//! With `C0_sq = d² N_S(N_S+1)/4` for a hypothesis pair at squared distance
//! `d²`, the Poisson mean of the total count under the non-nulled hypothesis
//! is `4·total`, tending to `d² N_S(N_S+1) M/(1+N_Z)` as `τ → 0`.

use num_complex::Complex64;
use rand::{Rng, RngCore};
use rand_distr::{Distribution, Exp1, Geometric, Poisson};

use super::{ReceiverError, ReceiverSpec, SymbolReceiver};
use crate::link::{apply_channel, Alphabet, AlphabetKind, ChannelParams, Symbol, IDLER, RETURN};

/// Cyclic order in which QPSK hypotheses are tested (alphabet indices of the
/// phases 0, π/2, π, 3π/2). Each decision starts at a uniformly drawn offset.
pub const QPSK_TEST_ORDER: [usize; 4] = [0, 1, 2, 3];

const MAX_CYCLES: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfgCycle {
    pub n_b: f64,
    pub n_e: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SfgBookkeeping {
    pub c0_sq: f64,
    pub cycles: Vec<SfgCycle>,
    pub k: usize,
    /// `Σ_{k≤K} (n_b^(k) + n_E^(k))`.
    pub total: f64,
    pub tau: f64,
    /// Per-cycle decay factor `x = 1 - τ(1+N_Z)`.
    pub decay: f64,
    /// Thermal residual `Σ_{k≤K} τ n_R n_I x^{2k}`, dropped unless requested.
    pub thermal_residual: f64,
    m: f64,
}

impl SfgBookkeeping {
    /// `Σ_{k≥1} 2 n_b^(k) = 2τ M C0_sq x²/(1-x²)`.
    pub fn infinite_total(&self) -> f64 {
        let x2 = self.decay * self.decay;
        2.0 * self.tau * self.m * self.c0_sq * x2 / (1.0 - x2)
    }

    /// Finite geometric sum `2τ M C0_sq x²(1-x^{2K})/(1-x²)`.
    pub fn closed_form_total(&self) -> f64 {
        self.infinite_total() * -(2.0 * self.k as f64 * self.decay.ln()).exp_m1()
    }

    /// Poisson mean of the total photon count under the non-nulled hypothesis.
    pub fn photon_rate(&self) -> f64 {
        4.0 * self.total
    }
}

fn capture_cycles(decay: f64, eps: f64) -> usize {
    // minimal K with x^{2K} <= eps
    let ln_x2 = 2.0 * decay.ln();
    let mut k = ((eps.ln() / ln_x2).ceil() as usize).max(1);
    while k > 1 && ((k - 1) as f64 * ln_x2).exp() <= eps {
        k -= 1;
    }
    while (k as f64 * ln_x2).exp() > eps {
        k += 1;
    }
    k
}

/// Per-cycle photon bookkeeping for a hypothesis pair at squared distance
/// `symbol_distance_sq`. `K` is the smallest cycle count capturing a
/// `1 - ε` fraction of the infinite series.
pub fn sfg_bookkeeping(
    cp: &ChannelParams,
    symbol_distance_sq: f64,
    spec: &ReceiverSpec,
) -> Result<SfgBookkeeping, ReceiverError> {
    let tau = spec.tau(cp);
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(ReceiverError::NonPositiveTau(tau));
    }
    let eps = spec.sfg_capture_eps;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(ReceiverError::BadCaptureEps(eps));
    }
    let load = tau * (1.0 + cp.n_z);
    if load >= 1.0 {
        return Err(ReceiverError::TapTooLarge(load));
    }
    let decay = 1.0 - load;
    let k = capture_cycles(decay, eps);
    if k > MAX_CYCLES {
        return Err(ReceiverError::TooManyCycles(k));
    }
    let m = cp.m as f64;
    let c0_sq = symbol_distance_sq.max(0.0) * cp.n_s * (cp.n_s + 1.0) / 4.0;
    let n_r = cp.eta * cp.n_s + (1.0 - cp.eta) * cp.n_z;
    let x2 = decay * decay;
    let mut w = 1.0;
    let mut cycles = Vec::with_capacity(k);
    let mut total = 0.0;
    let mut geometric = 0.0;
    for _ in 0..k {
        w *= x2;
        let n_b = tau * m * c0_sq * w;
        cycles.push(SfgCycle { n_b, n_e: n_b });
        total += 2.0 * n_b;
        geometric += w;
    }
    Ok(SfgBookkeeping {
        c0_sq,
        cycles,
        k,
        total,
        tau,
        decay,
        thermal_residual: tau * n_r * cp.n_s * geometric,
        m,
    })
}

/// TMSO `(G, θ)` that zeroes `⟨â_R â_I⟩` of the joint state under `symbol`:
/// `tanh 2r = 2|C|/(n_R + n_I + 1)`, `G = cosh² r`, `θ = arg C + π`.
pub fn sfg_nulling_params(
    symbol: &Symbol,
    cp: &ChannelParams,
) -> Result<(f64, f64), ReceiverError> {
    let (r, theta) = nulling_squeeze(symbol, cp)?;
    Ok((r.cosh().powi(2), theta))
}

/// Squeeze parameter `r` and phase `θ` of the nulling TMSO.
fn nulling_squeeze(symbol: &Symbol, cp: &ChannelParams) -> Result<(f64, f64), ReceiverError> {
    let st = apply_channel(cp, symbol)?;
    let c = st.phase_sensitive_correlation(RETURN, IDLER)?;
    let n = st.mean_photon_number(RETURN)? + st.mean_photon_number(IDLER)? + 1.0;
    let ratio = 2.0 * c.norm() / n;
    if ratio >= 1.0 {
        return Err(ReceiverError::CannotNull(ratio));
    }
    Ok((0.5 * ratio.atanh(), c.arg() + std::f64::consts::PI))
}

/// `⟨â_R â_I⟩` left under `true_symbol` after the TMSO that nulls `nulled`.
pub fn sfg_residual_correlation(
    cp: &ChannelParams,
    true_symbol: &Symbol,
    nulled: &Symbol,
) -> Result<Complex64, ReceiverError> {
    let (r, theta) = nulling_squeeze(nulled, cp)?;
    let st = apply_channel(cp, true_symbol)?.apply_two_mode_squeeze_r(RETURN, IDLER, r, theta)?;
    Ok(st.phase_sensitive_correlation(RETURN, IDLER)?)
}

fn residual_sampler(bk: &SfgBookkeeping, spec: &ReceiverSpec) -> Option<Geometric> {
    if spec.include_thermal_residual && bk.thermal_residual > 0.0 {
        Geometric::new(1.0 / (1.0 + bk.thermal_residual)).ok()
    } else {
        None
    }
}

/// Binary zero-photon test (PAM or BPSK). PAM nulls `(√η₁, 0)`, BPSK nulls
/// the phase-π symbol; the nulled hypothesis is declared iff no photon is
/// counted.
#[derive(Debug, Clone)]
pub struct SfgBinaryReceiver {
    null_index: usize,
    rate: f64,
    poisson: Option<Poisson<f64>>,
    residual: Option<Geometric>,
    bookkeeping: SfgBookkeeping,
}

impl SfgBinaryReceiver {
    pub fn new(
        cp: &ChannelParams,
        alphabet: &Alphabet,
        spec: &ReceiverSpec,
    ) -> Result<Self, ReceiverError> {
        if alphabet.len() != 2 {
            return Err(ReceiverError::AlphabetSize {
                receiver: "SFG zero-photon test",
                expected: 2,
                got: alphabet.len(),
            });
        }
        let null_index = match alphabet.kind() {
            AlphabetKind::Pam => 0,
            AlphabetKind::Bpsk => 1,
            kind => {
                return Err(ReceiverError::AlphabetKind {
                    receiver: "SFG zero-photon test",
                    kind,
                })
            }
        };
        let bookkeeping = sfg_bookkeeping(cp, alphabet.squared_distance(0, 1), spec)?;
        let rate = bookkeeping.photon_rate();
        Ok(Self {
            null_index,
            rate,
            poisson: Poisson::new(rate).ok(),
            residual: residual_sampler(&bookkeeping, spec),
            bookkeeping,
        })
    }

    pub fn null_index(&self) -> usize {
        self.null_index
    }

    /// Poisson mean of the count when the non-nulled symbol is true.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn bookkeeping(&self) -> &SfgBookkeeping {
        &self.bookkeeping
    }

    /// Total photon count `Σ(n_b + n_E)` observed when `true_index` was sent.
    pub fn count(&self, true_index: usize, rng: &mut dyn RngCore) -> u64 {
        let mut n = 0;
        if true_index != self.null_index {
            if let Some(p) = &self.poisson {
                n += p.sample(rng) as u64;
            }
        }
        if let Some(g) = &self.residual {
            n += g.sample(rng);
        }
        n
    }
}

impl SymbolReceiver for SfgBinaryReceiver {
    fn decide_index(&self, true_index: usize, rng: &mut dyn RngCore) -> usize {
        if self.count(true_index, rng) == 0 {
            self.null_index
        } else {
            1 - self.null_index
        }
    }

    fn alphabet_len(&self) -> usize {
        2
    }
}

fn index_of(alphabet: &Alphabet, symbol: &Symbol) -> Result<usize, ReceiverError> {
    alphabet
        .symbols()
        .iter()
        .position(|s| s == symbol)
        .ok_or(ReceiverError::UnknownSymbol)
}

pub fn sfg_decide_zero_photon<R: Rng>(
    cp: &ChannelParams,
    alphabet: &Alphabet,
    true_symbol: &Symbol,
    spec: &ReceiverSpec,
    rng: &mut R,
) -> Result<Symbol, ReceiverError> {
    let rx = SfgBinaryReceiver::new(cp, alphabet, spec)?;
    let t = index_of(alphabet, true_symbol)?;
    Ok(alphabet.symbols()[rx.decide_index(t, rng)])
}

/// QPSK sequential test. Hypotheses are tested one after another on the
/// remaining mode pairs; a hypothesis is discarded at its first photon, and
/// the TMSO then switches to the next one for the modes still unused. The
/// tested hypothesis is declared if its share of modes ends photon-free; the
/// last hypothesis in the order is declared when all others are discarded.
///
/// Photons under the pair `(true, tested)` arrive as a Poisson process in the
/// consumed fraction `u ∈ [0, 1]` of the `M` modes, with rate `4·total` of
/// that pair's bookkeeping.
#[derive(Debug, Clone)]
pub struct SfgQpskReceiver {
    rates: [[f64; 4]; 4],
    residual_rate: f64,
}

impl SfgQpskReceiver {
    pub fn new(
        cp: &ChannelParams,
        alphabet: &Alphabet,
        spec: &ReceiverSpec,
    ) -> Result<Self, ReceiverError> {
        if alphabet.len() != 4 {
            return Err(ReceiverError::AlphabetSize {
                receiver: "SFG sequential test",
                expected: 4,
                got: alphabet.len(),
            });
        }
        if alphabet.kind() != AlphabetKind::Qpsk {
            return Err(ReceiverError::AlphabetKind {
                receiver: "SFG sequential test",
                kind: alphabet.kind(),
            });
        }
        let mut rates = [[0.0; 4]; 4];
        let mut residual_rate = 0.0;
        for (t, row) in rates.iter_mut().enumerate() {
            for (h, r) in row.iter_mut().enumerate() {
                if t != h {
                    let bk = sfg_bookkeeping(cp, alphabet.squared_distance(t, h), spec)?;
                    *r = bk.photon_rate();
                    if spec.include_thermal_residual {
                        residual_rate = bk.thermal_residual;
                    }
                }
            }
        }
        Ok(Self {
            rates,
            residual_rate,
        })
    }

    /// Photon rate (per unit mode fraction) under `(true, tested)`.
    pub fn rate(&self, true_index: usize, tested: usize) -> f64 {
        self.rates[true_index][tested]
    }

    /// Decision with the test order starting at position `start` of
    /// [`QPSK_TEST_ORDER`].
    pub fn decide_from(&self, true_index: usize, start: usize, rng: &mut dyn RngCore) -> usize {
        let mut remaining = 1.0;
        for step in 0..3 {
            let h = QPSK_TEST_ORDER[(start + step) % 4];
            let lambda = self.rates[true_index][h] + self.residual_rate;
            if lambda <= 0.0 {
                return h;
            }
            let first_photon: f64 = Exp1.sample(rng);
            let at = first_photon / lambda;
            if at >= remaining {
                return h;
            }
            remaining -= at;
        }
        QPSK_TEST_ORDER[(start + 3) % 4]
    }
}

impl SymbolReceiver for SfgQpskReceiver {
    fn decide_index(&self, true_index: usize, rng: &mut dyn RngCore) -> usize {
        let start = rng.random_range(0..4);
        self.decide_from(true_index, start, rng)
    }

    fn alphabet_len(&self) -> usize {
        4
    }
}

pub fn sfg_decide_qpsk<R: Rng>(
    cp: &ChannelParams,
    alphabet: &Alphabet,
    true_symbol: &Symbol,
    spec: &ReceiverSpec,
    rng: &mut R,
) -> Result<Symbol, ReceiverError> {
    let rx = SfgQpskReceiver::new(cp, alphabet, spec)?;
    let t = index_of(alphabet, true_symbol)?;
    Ok(alphabet.symbols()[rx.decide_index(t, rng)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::receivers::ReceiverKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec() -> ReceiverSpec {
        ReceiverSpec::new(ReceiverKind::Sfg)
    }

    /// Channel with `s = η N_S M / N_Z` set by `M` at `η = 0.01`, `N_S = 0.01`.
    fn channel_at(s: f64, n_z: f64) -> ChannelParams {
        let m = (s * n_z / 1e-4).round() as u64;
        ChannelParams::new(0.01, 0.0, n_z, m, 0.01).unwrap()
    }

    #[test]
    fn geometric_series() {
        let cp = channel_at(1.0, 100.0);
        let bk = sfg_bookkeeping(&cp, 0.04, &spec()).unwrap();
        let brute: f64 = bk.cycles.iter().map(|c| c.n_b + c.n_e).sum();
        assert!((brute - bk.total).abs() <= 1e-12 * bk.total);
        assert!((bk.closed_form_total() / bk.total - 1.0).abs() < 1e-9);
        let inf = bk.infinite_total();
        assert!(bk.total <= inf && (inf - bk.total) <= 1e-3 * inf * (1.0 + 1e-9));
        // the K-1 prefix misses the capture target
        let prefix: f64 = bk.cycles[..bk.k - 1].iter().map(|c| 2.0 * c.n_b).sum();
        assert!(prefix < (1.0 - 1e-3) * inf);
        for w in bk.cycles.windows(2) {
            assert!(w[1].n_b < w[0].n_b && w[1].n_b > 0.0);
            assert_eq!(w[0].n_b, w[0].n_e);
        }
    }

    #[test]
    fn small_tau_limit() {
        let cp = channel_at(1.0, 1000.0);
        let sp = ReceiverSpec {
            sfg_tau: Some(1e-5),
            ..spec()
        };
        let bk = sfg_bookkeeping(&cp, 0.04, &sp).unwrap();
        let limit = cp.m as f64 * bk.c0_sq / (1.0 + cp.n_z);
        assert!((bk.total / limit - 1.0).abs() < 0.02);
    }

    #[test]
    fn zero_distance_and_errors() {
        let cp = channel_at(1.0, 100.0);
        let bk = sfg_bookkeeping(&cp, 0.0, &spec()).unwrap();
        assert_eq!(bk.total, 0.0);
        assert!(bk.cycles.iter().all(|c| c.n_b == 0.0));
        let big = ReceiverSpec {
            sfg_tau: Some(1.0 / 101.0),
            ..spec()
        };
        assert!(matches!(
            sfg_bookkeeping(&cp, 0.04, &big),
            Err(ReceiverError::TapTooLarge(_))
        ));
    }

    #[test]
    fn bpsk_rate_matches_exponent() {
        for n_z in [100.0, 1000.0] {
            let cp = channel_at(1.0, n_z);
            let b = Alphabet::bpsk(cp.eta).unwrap();
            let bk = sfg_bookkeeping(&cp, b.squared_distance(0, 1), &spec()).unwrap();
            let target = 4.0 * cp.eta * cp.n_s * cp.m as f64 / n_z;
            assert!(
                (bk.photon_rate() / target - 1.0).abs() < 0.02,
                "{}",
                bk.photon_rate()
            );
        }
    }

    #[test]
    fn nulling() {
        let cp = ChannelParams::new(0.01, 0.3, 100.0, 1000, 0.01).unwrap();
        let b = Alphabet::bpsk(0.01).unwrap();
        let (pi_sym, zero_sym) = (b.symbols()[1], b.symbols()[0]);
        assert!(
            sfg_residual_correlation(&cp, &pi_sym, &pi_sym)
                .unwrap()
                .norm()
                < 1e-10
        );
        let res = sfg_residual_correlation(&cp, &zero_sym, &pi_sym).unwrap();
        let c = (0.01f64 * 0.01 * 1.01).sqrt();
        assert!((res.norm() / (2.0 * c) - 1.0).abs() < 1e-6);
        let (g, _) = sfg_nulling_params(&Symbol::new(0.0, 0.0).unwrap(), &cp).unwrap();
        assert_eq!(g, 1.0);
    }

    #[test]
    fn zero_photon_test() {
        let cp = channel_at(1.0, 100.0);
        let b = Alphabet::bpsk(cp.eta).unwrap();
        let rx = SfgBinaryReceiver::new(&cp, &b, &spec()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!((0..10_000).all(|_| rx.decide_index(1, &mut rng) == 1));
        let n = 1_000_000;
        let errors = (0..n).filter(|_| rx.decide_index(0, &mut rng) == 1).count() as f64;
        let p = (-rx.rate()).exp();
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((errors / n as f64 - p).abs() < 3.0 * sigma);
        assert!((rx.rate() / 4.0 - 1.0).abs() < 0.02);

        let q = Alphabet::qpsk(cp.eta).unwrap();
        assert!(matches!(
            SfgBinaryReceiver::new(&cp, &q, &spec()),
            Err(ReceiverError::AlphabetSize { .. })
        ));
        let d = sfg_decide_zero_photon(&cp, &b, &b.symbols()[1], &spec(), &mut rng).unwrap();
        assert_eq!(d, b.symbols()[1]);
    }

    #[test]
    fn pam_nulls_low_level() {
        let cp = channel_at(1.0, 100.0);
        let a = Alphabet::pam(0.0, cp.eta).unwrap();
        let rx = SfgBinaryReceiver::new(&cp, &a, &spec()).unwrap();
        assert_eq!(rx.null_index(), 0);
        // OOK: C0_sq = η N_S(N_S+1)/4, a quarter of the BPSK pair at equal η
        assert!((rx.bookkeeping().c0_sq - cp.eta * 0.01 * 1.01 / 4.0).abs() < 1e-18);
    }

    #[test]
    fn thermal_residual_breaks_null_certainty() {
        let cp = channel_at(1.0, 100.0);
        let b = Alphabet::bpsk(cp.eta).unwrap();
        let sp = ReceiverSpec {
            include_thermal_residual: true,
            ..spec()
        };
        let rx = SfgBinaryReceiver::new(&cp, &b, &sp).unwrap();
        let mu = rx.bookkeeping().thermal_residual;
        assert!(mu > 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 200_000;
        let wrong = (0..n).filter(|_| rx.decide_index(1, &mut rng) == 0).count() as f64;
        let p = mu / (1.0 + mu);
        assert!((wrong / n as f64 - p).abs() < 4.0 * (p * (1.0 - p) / n as f64).sqrt() + 1e-12);
    }

    #[test]
    fn qpsk_sequential() {
        let cp = channel_at(2.0, 100.0);
        let q = Alphabet::qpsk(cp.eta).unwrap();
        let rx = SfgQpskReceiver::new(&cp, &q, &spec()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        // true hypothesis tested first never sees a photon
        for t in 0..4 {
            assert!((0..1000).all(|_| rx.decide_from(t, t, &mut rng) == t));
        }
        let n = 100_000;
        let rates: Vec<f64> = (0..4)
            .map(|t| (0..n).filter(|_| rx.decide_index(t, &mut rng) != t).count() as f64 / n as f64)
            .collect();
        let mean = rates.iter().sum::<f64>() / 4.0;
        let sigma = (mean * (1.0 - mean) / n as f64).sqrt();
        for r in &rates {
            assert!((r - mean).abs() < 3.0 * sigma * 2.0, "{rates:?}");
        }
        let s = cp.eta * cp.n_s * cp.m as f64 / cp.n_z;
        assert!(mean <= 4.0 * (-s).exp() * 1.1);
        assert!(matches!(
            SfgQpskReceiver::new(&cp, &Alphabet::bpsk(0.01).unwrap(), &spec()),
            Err(ReceiverError::AlphabetSize { .. })
        ));
    }

    #[test]
    fn decisions_deterministic_per_stream() {
        let cp = channel_at(1.0, 100.0);
        let q = Alphabet::qpsk(cp.eta).unwrap();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..100)
                .map(|i| sfg_decide_qpsk(&cp, &q, &q.symbols()[i % 4], &spec(), &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(5), run(5));
    }
}
