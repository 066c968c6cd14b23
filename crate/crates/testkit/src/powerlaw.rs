//! Seeded sampling from a discrete power law (zeta distribution).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Draws `n` samples from `P(X = k) = k^-alpha / zeta(alpha)` for
/// `k >= xmin` by inverting a cumulative table. The table stops once the
/// remaining tail mass is below 1e-9 of the total (or at 2^21 entries);
/// draws beyond it clamp to the last entry, a distortion of order 1e-9.
pub fn sample_zeta(alpha: f64, xmin: u64, n: usize, seed: u64) -> Vec<u64> {
    assert!(alpha > 1.0, "tail mass diverges for alpha <= 1");
    assert!(xmin >= 1);

    // Unnormalized CDF over k = xmin.. with the integral tail bound
    // x^(1-alpha)/(alpha-1).
    const MAX_TABLE: usize = 1 << 21;
    let mut cumulative = Vec::new();
    let mut acc = 0.0f64;
    let mut k = xmin;
    loop {
        acc += (k as f64).powf(-alpha);
        cumulative.push(acc);
        let tail_bound = (k as f64).powf(1.0 - alpha) / (alpha - 1.0);
        if tail_bound < acc * 1e-9 || cumulative.len() >= MAX_TABLE {
            break;
        }
        k += 1;
    }
    let total = *cumulative.last().expect("table non-empty");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen::<f64>() * total;
            let idx = cumulative.partition_point(|&c| c < u);
            xmin + idx.min(cumulative.len() - 1) as u64
        })
        .collect()
}
