//! Reproducible random instances for benchmarks and randomized checks.
//!
//! The recipe is fixed so results can be reproduced across runs and
//! implementations: from a ChaCha8 stream seeded with `seed`, draw all `n`
//! positions first, then all `n` masses uniform on (0, 1], then assign each
//! atom to μ or ν by a fair coin, in that order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::measure::{canonicalize, DiscreteMeasure};

fn split_pair(positions: &[f64], masses: &[f64], coins: &[bool]) -> (DiscreteMeasure, DiscreteMeasure) {
    let mut mu = Vec::new();
    let mut nu = Vec::new();
    for ((&p, &m), &heads) in positions.iter().zip(masses).zip(coins) {
        if heads {
            mu.push((p, m));
        } else {
            nu.push((p, m));
        }
    }
    (
        canonicalize(&mu).expect("generated atoms are finite and positive"),
        canonicalize(&nu).expect("generated atoms are finite and positive"),
    )
}

fn draw(rng: &mut ChaCha8Rng, n: usize, positions: impl Fn(&mut ChaCha8Rng, usize) -> Vec<f64>) -> (Vec<f64>, Vec<f64>, Vec<bool>) {
    let pos = positions(rng, n);
    let masses: Vec<f64> = (0..n).map(|_| 1.0 - rng.random::<f64>()).collect();
    let coins: Vec<bool> = (0..n).map(|_| rng.random::<bool>()).collect();
    (pos, masses, coins)
}

/// `n` atoms with positions i.i.d. uniform on [−1, 1], split into a pair of
/// measures. Either side may come out empty.
pub fn clustered_pair(n: usize, seed: u64) -> (DiscreteMeasure, DiscreteMeasure) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (pos, masses, coins) = draw(&mut rng, n, |rng, n| {
        (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()
    });
    split_pair(&pos, &masses, &coins)
}

/// `n` atoms whose consecutive gaps are 2 + uniform(0, 1), so every two
/// masses are farther than 2 apart, split into a pair of measures.
pub fn spread_pair(n: usize, seed: u64) -> (DiscreteMeasure, DiscreteMeasure) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (pos, masses, coins) = draw(&mut rng, n, |rng, n| {
        let mut x = 0.0;
        (0..n)
            .map(|i| {
                if i > 0 {
                    x += 2.0 + rng.random::<f64>();
                }
                x
            })
            .collect()
    });
    split_pair(&pos, &masses, &coins)
}

/// A clustered pair with ν rescaled to μ's total mass (for metrics that need
/// mass balance). Needs `n >= 2`; the first two atoms go to μ and ν
/// deterministically so neither side is empty.
pub fn equal_mass_clustered_pair(n: usize, seed: u64) -> (DiscreteMeasure, DiscreteMeasure) {
    assert!(n >= 2, "an equal-mass pair needs at least two atoms");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (pos, masses, mut coins) = draw(&mut rng, n, |rng, n| {
        (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()
    });
    coins[0] = true;
    coins[1] = false;
    let (mu, nu) = split_pair(&pos, &masses, &coins);
    let nu = nu.scale_mass(mu.total_mass() / nu.total_mass());
    (mu, nu)
}
