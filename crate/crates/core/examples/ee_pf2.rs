//! Leave-one-out tuning of the six 1NN constituents and their
//! accuracy-weighted vote.

use proximity_forest::nn::{default_constituents, ee_pf2_train, nn_classify};
use proximity_forest::synthetic;

fn main() {
    let (train, test) = synthetic::shift_split(15, 50, 40, 8);
    let ensemble = ee_pf2_train(&train, default_constituents(&train, 0).unwrap()).unwrap();

    let score = |pred: &[usize]| pred.iter().enumerate().filter(|(i, &p)| p == test.label_of(*i)).count() as f64 / test.len() as f64;
    for c in &ensemble.constituents {
        let pred: Vec<usize> = test.series().iter().map(|q| nn_classify(&train, q, c.params(), c.transform).unwrap()).collect();
        println!(
            "{:<5} {:<16} grid {:>3}  loocv {:.3}  test {:.3}  {:?}",
            c.family.name(),
            c.transform.name(),
            c.grid.len(),
            c.accuracy(),
            score(&pred),
            c.params()
        );
    }
    let pred = ensemble.predict_batch(&train, test.series()).unwrap();
    println!("ensemble test accuracy {:.3}", score(&pred));
}
