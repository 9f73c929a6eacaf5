//! Load a UCR-format split and print a summary.
//!
//!     cargo run --example load_ucr -- path/to/Name_TRAIN.tsv
//!
//! Without an argument the bundled synthetic split is used.

use std::path::PathBuf;

use proximity_forest::data::load_ucr;
use proximity_forest::transform::TransformKind;

fn main() {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/SyntheticShift_TRAIN.tsv"));
    let data = match load_ucr(&path) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            std::process::exit(1);
        }
    };
    println!("{}: {} series of length {}", path.display(), data.len(), data.series_len());
    for (name, count) in data.classes().iter().zip(data.class_counts()) {
        println!("  class {name:<8} {count}");
    }
    println!("  sigma raw {:.4}, derivative {:.4}", data.sigma(TransformKind::Raw), data.sigma(TransformKind::FirstDerivative));
}
