use proximity_forest::forest::{train, ForestConfig};
use proximity_forest::{model, synthetic};

fn main() {
    let (train_set, test_set) = synthetic::shift_split(30, 30, 60, 5);
    let forest = train(&train_set, &ForestConfig { trees: 10, seed: 1, ..Default::default() }).unwrap();

    let dir = tempdir();
    let path = dir.join("forest.json");
    model::save(&forest, &path).unwrap();
    let bytes = std::fs::metadata(&path).unwrap().len();
    let loaded = model::load(&path).unwrap();

    assert_eq!(loaded, forest);
    let before = forest.predict_batch(test_set.series()).unwrap();
    let after = loaded.predict_batch(test_set.series()).unwrap();
    assert_eq!(before, after);
    println!("{} ({bytes} bytes) reloads to the same forest; {} predictions agree", path.display(), after.len());
    std::fs::remove_dir_all(&dir).ok();
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("pf2-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
