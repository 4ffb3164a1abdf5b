//! Seed derivation and the few samplers shared by the simulation code.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SimRng = ChaCha8Rng;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a base seed with a stream path, e.g. `(seed, [replication])`.
/// Distinct paths give unrelated streams, independent of evaluation order.
pub fn derive_seed(seed: u64, stream: &[u64]) -> u64 {
    stream.iter().fold(splitmix(seed), |acc, &s| splitmix(acc ^ splitmix(s)))
}

pub fn stream_rng(seed: u64, stream: &[u64]) -> SimRng {
    SimRng::seed_from_u64(derive_seed(seed, stream))
}

/// Writes a point uniform in the unit ball of R^{out.len()} into `out`:
/// a uniform direction scaled by U^{1/d}.
pub fn uniform_in_unit_ball<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    let d = out.len();
    loop {
        let mut norm2 = 0.0;
        for x in out.iter_mut() {
            *x = rng.sample(StandardNormal);
            norm2 += *x * *x;
        }
        if norm2 > 0.0 {
            let u: f64 = rng.random();
            let scale = u.powf(1.0 / d as f64) / norm2.sqrt();
            out.iter_mut().for_each(|x| *x *= scale);
            return;
        }
    }
}

pub fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, center: &[f64], radius: f64) -> Vec<f64> {
    let mut p = vec![0.0; center.len()];
    uniform_in_unit_ball(rng, &mut p);
    p.iter_mut().zip(center).for_each(|(x, c)| *x = c + radius * *x);
    p
}
