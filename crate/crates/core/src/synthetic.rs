//! Seeded synthetic datasets for tests, examples and quick benchmarks.
//!
//! [`shift_split`] is the two-class time-shift problem. Every series carries
//! four narrow Gaussian bumps, one inside each quarter of the series, at
//! independently drawn positions:
//!
//! * class `"same"`: all bumps point up;
//! * class `"flip"`: the last bump points down.
//!
//! The class lives in one sign while the positions vary far more than the
//! bump width. Lock-step comparison mostly sees misaligned bumps and is
//! dominated by the nuisance positions, whereas an elastic alignment pairs
//! the bumps up.
//!
//! [`bump_split`] is a simpler problem with a single broad bump, up or down,
//! jittered by a few steps around the centre. Nearly any splitter separates
//! it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::data::{Dataset, TimeSeries};

/// Standard deviation of the additive white noise in [`shift_split`].
pub const SHIFT_NOISE: f64 = 0.1;
/// Bump width (Gaussian standard deviation, in time steps) in [`shift_split`].
pub const SHIFT_BUMP_WIDTH: f64 = 1.0;
/// Bumps per series in [`shift_split`], one per equal segment.
pub const SHIFT_BUMPS: usize = 4;

fn bump(out: &mut [f64], centre: f64, width: f64, height: f64) {
    for (t, v) in out.iter_mut().enumerate() {
        let z = (t as f64 - centre) / width;
        *v += height * (-0.5 * z * z).exp();
    }
}

fn shift_series(len: usize, flip: bool, rng: &mut ChaCha8Rng, noise: &Normal<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = (0..len).map(|_| noise.sample(rng)).collect();
    let n = len as f64;
    for k in 0..SHIFT_BUMPS {
        let lo = (k as f64 + 0.1) / SHIFT_BUMPS as f64;
        let hi = (k as f64 + 0.9) / SHIFT_BUMPS as f64;
        let centre = rng.random_range(lo * n..hi * n);
        let height = if flip && k == SHIFT_BUMPS - 1 { -1.0 } else { 1.0 };
        bump(&mut v, centre, SHIFT_BUMP_WIDTH, height);
    }
    v
}

/// Two-class time-shift problem with `train_per_class` and `test_per_class`
/// instances of each class, series of length `len`. Classes alternate within
/// each split. Both counts must be at least 1.
pub fn shift_split(train_per_class: usize, test_per_class: usize, len: usize, seed: u64) -> (Dataset, Dataset) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, SHIFT_NOISE).expect("valid noise");
    let mut make = |per_class: usize| {
        let mut rows = Vec::with_capacity(2 * per_class);
        for _ in 0..per_class {
            for (flip, label) in [(false, "same"), (true, "flip")] {
                let v = shift_series(len, flip, &mut rng, &noise);
                rows.push(TimeSeries::new(v, Some(label.to_owned())).expect("finite values"));
            }
        }
        rows
    };
    let train = make(train_per_class);
    let test = make(test_per_class);
    (dataset(train), dataset(test))
}

/// Single broad bump, up (`"up"`) or down (`"down"`), centre jittered by at
/// most three steps.
pub fn bump_split(train_per_class: usize, test_per_class: usize, len: usize, seed: u64) -> (Dataset, Dataset) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 0.02).expect("valid noise");
    let mut make = |per_class: usize| {
        let mut rows = Vec::with_capacity(2 * per_class);
        for _ in 0..per_class {
            for (height, label) in [(1.0, "up"), (-1.0, "down")] {
                let mut v: Vec<f64> = (0..len).map(|_| noise.sample(&mut rng)).collect();
                let centre = len as f64 / 2.0 + rng.random_range(-3i32..=3) as f64;
                bump(&mut v, centre, 3.0, height);
                rows.push(TimeSeries::new(v, Some(label.to_owned())).expect("finite values"));
            }
        }
        rows
    };
    let train = make(train_per_class);
    let test = make(test_per_class);
    (dataset(train), dataset(test))
}

fn dataset(rows: Vec<TimeSeries>) -> Dataset {
    Dataset::new(rows).expect("at least one instance per class and split")
}
