#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qwalk::WeightMatrix;

/// Hand-checked genus-1 walks as integer counts, rows `i = 1, 0, -1`.
pub const ORDER3: [[i64; 3]; 3] = [[0, 0, 1], [1, 0, 0], [0, 2, 0]];
pub const ORDER4: [[i64; 3]; 3] = [[0, 0, 1], [1, 0, 2], [2, 0, 0]];
pub const ORDER5: [[i64; 3]; 3] = [[0, 1, 1], [1, 0, 2], [1, 2, 1]];
pub const INFINITE: [[i64; 3]; 3] = [[0, 0, 1], [1, 0, 0], [0, 1, 1]];

pub fn fixtures() -> Vec<WeightMatrix> {
    [ORDER3, ORDER4, ORDER5, INFINITE]
        .into_iter()
        .map(|c| WeightMatrix::from_counts(c).unwrap())
        .chain([qwalk::walk::compass_example()])
        .collect()
}

/// A random walk whose weights share a denominator `d <= 12`.
///
/// A random subset of the eight steps gets one unit each; the remaining units
/// land on supported steps or on the stay weight.
pub fn random_walk(rng: &mut ChaCha8Rng) -> WeightMatrix {
    let mut cells: Vec<(usize, usize)> = (0..3)
        .flat_map(|r| (0..3).map(move |c| (r, c)))
        .filter(|&rc| rc != (1, 1))
        .collect();
    cells.shuffle(rng);
    let d: i64 = rng.gen_range(2..=12);
    let k = rng.gen_range(2..=(d as usize).min(8));
    let support = &cells[..k];
    let mut counts = [[0i64; 3]; 3];
    for &(r, c) in support {
        counts[r][c] = 1;
    }
    for _ in 0..(d - k as i64) {
        if rng.gen_bool(0.15) {
            counts[1][1] += 1;
        } else {
            let (r, c) = support[rng.gen_range(0..k)];
            counts[r][c] += 1;
        }
    }
    WeightMatrix::from_counts(counts).unwrap()
}

pub fn sample(n: usize, seed: u64) -> Vec<WeightMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = fixtures();
    out.extend((0..n).map(|_| random_walk(&mut rng)));
    out
}
