/// Seed for one ChaCha8 trial stream.
pub type TrialSeed = [u8; 32];

const MAX_POINT_BITS: u32 = 24;
const TRIAL_BITS: u32 = 40;

/// Bijective mixer on 128-bit words (xor-shifts and odd multipliers are each
/// invertible mod 2^128).
fn mix(mut z: u128) -> u128 {
    z ^= z >> 67;
    z = z.wrapping_mul(0x9e37_79b9_7f4a_7c15_f39c_c060_5ced_c835);
    z ^= z >> 61;
    z = z.wrapping_mul(0xd1b5_4a32_d192_ed03_bf58_476d_1ce4_e5b9);
    z ^= z >> 64;
    z
}

/// Seed for trial `trial_index` of sweep point `point_index`.
///
/// The 128-bit state is `master_seed ‖ (point_index << 40 | trial_index)`,
/// injective for `point_index < 2^24` and `trial_index < 2^40`; the 32-byte
/// seed is `mix(state) ‖ mix(!state)`, so distinct inputs yield distinct
/// first halves.
pub fn derive_trial_seed(master_seed: u64, point_index: u64, trial_index: u64) -> TrialSeed {
    debug_assert!(point_index < 1 << MAX_POINT_BITS && trial_index < 1 << TRIAL_BITS);
    let counter = (point_index << TRIAL_BITS) | (trial_index & ((1 << TRIAL_BITS) - 1));
    let state = ((master_seed as u128) << 64) | counter as u128;
    let mut seed = [0u8; 32];
    seed[..16].copy_from_slice(&mix(state).to_le_bytes());
    seed[16..].copy_from_slice(&mix(!state).to_le_bytes());
    seed
}

pub(crate) const MAX_POINTS: usize = 1 << MAX_POINT_BITS;
pub(crate) const MAX_TRIALS: u64 = 1 << TRIAL_BITS;
