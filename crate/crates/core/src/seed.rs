//! Deterministic sub-seed derivation.
//!
//! Every randomized component takes a single 64-bit seed; independent
//! streams (columns, repetitions, noise sources) are derived from it with a
//! stable FNV-1a hash over the component label and index. The derivation is
//! fixed so outputs reproduce bit-exactly across runs and platforms.

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(state: u64, bytes: &[u8]) -> u64 {
    let mut h = state;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Derive the sub-seed for `(label, index)` under a master seed.
pub fn derive(seed: u64, label: &str, index: u64) -> u64 {
    let mut h = fnv1a(FNV_OFFSET, &seed.to_le_bytes());
    h = fnv1a(h, label.as_bytes());
    h = fnv1a(h, &index.to_le_bytes());
    // splitmix-style finalizer to spread low-entropy inputs
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
