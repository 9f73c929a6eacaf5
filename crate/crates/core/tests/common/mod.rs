#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use proximity_forest::data::{load_ucr, Dataset};

/// Directory holding the bundled datasets.
pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// The bundled synthetic time-shift split, 100 + 100 per class, length 100.
pub fn bundled_shift() -> (Dataset, Dataset) {
    let dir = data_dir();
    (
        load_ucr(dir.join("SyntheticShift_TRAIN.tsv")).expect("bundled train split"),
        load_ucr(dir.join("SyntheticShift_TEST.tsv")).expect("bundled test split"),
    )
}
