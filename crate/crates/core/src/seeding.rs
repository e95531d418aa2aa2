//! Stable seed derivation.
//!
//! Experiments fan out into many independently seeded streams (one per node,
//! per trial, per (time, pair) coin). Deriving every sub-seed by hashing keeps
//! results identical no matter what order the work runs in, which is what
//! makes the parallel sweeps reproducible.

/// splitmix64 step: advances `state` and returns the next output.
///
/// This is the standard Steele/Lea/Flood generator; its output function is
/// also a decent 64-bit mixer, which is how [`derive`] uses it.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// derives a sub-seed from a master seed and a path of integers.
///
/// Same (seed, parts) always gives the same output; nearby paths give
/// unrelated outputs. Each part is folded into the fully mixed previous
/// output rather than the raw counter, so small parts (node ids, time
/// steps) cannot cancel against each other.
pub fn derive(seed: u64, parts: &[u64]) -> u64 {
    let mut state = seed;
    let mut out = splitmix64(&mut state);
    for &p in parts {
        state = out ^ p;
        out = splitmix64(&mut state);
    }
    out
}

/// maps a hash to a uniform f64 in [0, 1) using the top 53 bits.
pub fn unit_f64(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
