//! Counter-style RNG streams: every (seed, domain, entity, slot) tuple gets
//! its own ChaCha stream, so draws never depend on who else consumed
//! randomness before.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) const DOMAIN_REQUESTS: u64 = 0x7265_7175;
pub(crate) const DOMAIN_FAILURES: u64 = 0x6661_696c;
pub(crate) const DOMAIN_RANDOM_POLICY: u64 = 0x7261_6e64;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn stream(seed: u64, domain: u64, entity: u64, slot: u64) -> ChaCha8Rng {
    let key = splitmix64(seed ^ splitmix64(domain ^ splitmix64(entity)));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(slot);
    rng
}
