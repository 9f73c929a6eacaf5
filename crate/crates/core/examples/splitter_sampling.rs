//! Draw candidate splitters the way tree induction does and tabulate them.

use std::collections::BTreeMap;

use proximity_forest::distance::{MeasureKind, MeasureParams};
use proximity_forest::forest::tree_rng;
use proximity_forest::splitter::{gen_candidate_splitter, split_gain, class_counts, TreeContext};
use proximity_forest::synthetic;

fn main() {
    let (data, _) = synthetic::shift_split(20, 1, 60, 4);
    let node: Vec<usize> = (0..data.len()).collect();
    let mut ctx = TreeContext::new(&data, &MeasureKind::ALL, tree_rng(42, 0)).unwrap();
    println!("omega' per transform and exponent {:?}", ctx.omega_prime);

    let parent = class_counts(&data, &node);
    let mut by_kind: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
    for k in 0..300 {
        let sp = gen_candidate_splitter(&data, &node, &mut ctx);
        let parts = sp.partition(&data, &node).unwrap();
        let children: Vec<Vec<usize>> = parts.iter().map(|p| class_counts(&data, p)).collect();
        let gain = split_gain(&parent, &children).unwrap();
        let e = by_kind.entry(sp.measure.kind().name()).or_default();
        e.0 += 1;
        e.1 = e.1.max(gain);
        if k < 5 {
            let param = match sp.measure {
                MeasureParams::Adtw { omega, gamma } => format!("omega {omega:.3e}, gamma {}", gamma.value()),
                MeasureParams::Cdtw { window, gamma } => format!("window {window}, gamma {}", gamma.value()),
                MeasureParams::Lcss { epsilon, window } => format!("epsilon {epsilon:.3}, window {window}"),
            };
            let ex: Vec<usize> = sp.exemplars.iter().map(|e| e.train_index).collect();
            println!("{:<5} {:<16} {param:<32} exemplars {ex:?} gain {gain:.3}", sp.measure.kind().name(), sp.transform.name());
        }
    }
    for (kind, (n, best)) in by_kind {
        println!("{kind}: {n} draws, best gain {best:.3}");
    }
}
