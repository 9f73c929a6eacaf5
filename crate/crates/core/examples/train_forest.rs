//! Train a forest on the bundled time-shift data and compare it with 1NN
//! under lock-step and elastic alignment.

use std::time::Instant;

use proximity_forest::distance::{CostExponent, MeasureParams};
use proximity_forest::forest::{train, ForestConfig};
use proximity_forest::nn::nn_classify;
use proximity_forest::synthetic;
use proximity_forest::transform::TransformKind;
use proximity_forest::tree::TreeNode;

fn main() {
    let (train_set, test_set) = synthetic::shift_split(100, 100, 100, 2024);
    let config = ForestConfig { trees: 20, candidates: 5, seed: 42, ..Default::default() };

    let start = Instant::now();
    let forest = train(&train_set, &config).unwrap();
    println!("trained {} trees in {:.2} s", forest.trees().len(), start.elapsed().as_secs_f64());
    println!("forest accuracy {:.3}", forest.accuracy(&test_set).unwrap());

    let tree = &forest.trees()[0];
    println!("first tree: depth {}, {} leaves", tree.depth(), tree.n_leaves());
    if let TreeNode::Internal { splitter, .. } = &tree.nodes()[0] {
        println!("  root splits on {:?} over the {} series", splitter.measure, splitter.transform.name());
    }

    let q = &test_set.series()[0];
    println!("votes for the first test series {:?} -> {}", forest.vote_counts(q).unwrap(), forest.predict(q).unwrap());

    for (name, p) in [
        ("1nn direct alignment", MeasureParams::Cdtw { window: 0, gamma: CostExponent::Two }),
        ("1nn full dtw", MeasureParams::Cdtw { window: 99, gamma: CostExponent::Two }),
    ] {
        let correct = test_set
            .series()
            .iter()
            .enumerate()
            .filter(|(i, s)| nn_classify(&train_set, s, &p, TransformKind::Raw).unwrap() == test_set.label_of(*i))
            .count();
        println!("{name:<22} {:.3}", correct as f64 / test_set.len() as f64);
    }
}
