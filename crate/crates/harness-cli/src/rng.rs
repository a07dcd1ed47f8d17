//! Counter-based random streams. Replica `r` of sub-experiment `label` always
//! reads ChaCha8 stream `(label, r)` under the run's seed, so results do not
//! depend on how replicas are spread over threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Low 24 bits of FNV-1a, placed above a 40-bit replica counter.
fn label_bits(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    (h & 0xff_ffff) << 40
}

pub fn substream(seed: u64, label: &str, replica: u64) -> ChaCha8Rng {
    assert!(replica < 1 << 40, "replica index out of range");
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(label_bits(label) | replica);
    r
}

/// `f(r, rng_r)` for `r in 0..n`, in parallel, in replica order.
pub fn replicate<T, F>(seed: u64, label: &str, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(|r| f(r, &mut substream(seed, label, r as u64))).collect()
}
