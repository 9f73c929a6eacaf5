//! Three stratified resamples of a small split, forest against two 1NN
//! baselines, written as a CSV report.

use proximity_forest::bench::{parse_list, read_report, run_bench, write_report, BenchPlan};
use proximity_forest::forest::ForestConfig;
use proximity_forest::synthetic;

fn main() {
    let (train, test) = synthetic::shift_split(20, 20, 50, 3);
    let plan = BenchPlan {
        dataset: "shift".into(),
        classifiers: parse_list("pf2,nn:da,nn:dtw").unwrap(),
        resamples: 3,
        normalize: false,
        forest: ForestConfig { trees: 10, candidates: 5, seed: 42, ..Default::default() },
    };
    let rows = run_bench(&train, &test, &plan, |r| {
        println!("fold {} {:<7} accuracy {:.3}", r.fold, r.classifier, r.accuracy.unwrap_or(f64::NAN));
        Ok(())
    })
    .unwrap();

    let path = std::env::temp_dir().join(format!("pf2-bench-{}.csv", std::process::id()));
    write_report(&rows, &path, false).unwrap();
    print!("{}", std::fs::read_to_string(&path).unwrap());
    assert_eq!(read_report(&path).unwrap(), rows);
    std::fs::remove_file(&path).ok();
}
