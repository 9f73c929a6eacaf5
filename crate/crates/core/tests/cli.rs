mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use proximity_forest::bench::read_report;
use proximity_forest::synthetic;

fn pf2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pf2")).args(args).output().expect("run pf2")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn status(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn bundled_data_matches_its_generator() {
    let (train, test) = common::bundled_shift();
    let (g_train, g_test) = synthetic::shift_split(100, 100, 100, 2024);
    assert_eq!(train.series(), g_train.series());
    assert_eq!(test.series(), g_test.series());
}

#[test]
fn train_then_test() {
    let dir = tempfile::tempdir().unwrap();
    let data = common::data_dir();
    let train = data.join("SyntheticShift_TRAIN.tsv");
    let test = data.join("SyntheticShift_TEST.tsv");
    let (m1, m2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let report = dir.path().join("r.csv");
    let preds = dir.path().join("p.csv");

    for m in [&m1, &m2] {
        let o = pf2(&["train", "--train", p(&train), "--trees", "10", "--candidates", "5", "--seed", "42", "--out", p(m)]);
        assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(fs::read(&m1).unwrap(), fs::read(&m2).unwrap());

    let run_test = || {
        pf2(&[
            "test", "--model", p(&m1), "--test", p(&test), "--report", p(&report), "--append", "--predictions", p(&preds),
        ])
    };
    let first = run_test();
    assert_eq!(status(&first), 0, "{}", String::from_utf8_lossy(&first.stderr));
    let second = run_test();
    let stdout = String::from_utf8(first.stdout).unwrap();
    assert!(stdout.starts_with("accuracy "));

    // confusion rows sum to the per-class test counts
    let rows: Vec<Vec<usize>> = stdout
        .lines()
        .skip_while(|l| !l.starts_with("actual\\predicted"))
        .skip(1)
        .map(|l| l.split('\t').skip(1).map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.iter().sum::<usize>() == 100));

    let records = read_report(&report).unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0].accuracy, records[1].accuracy);
    assert_eq!(String::from_utf8(second.stdout).unwrap().lines().next(), stdout.lines().next());
    assert_eq!(fs::read_to_string(&preds).unwrap().lines().count(), 201);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let data = common::data_dir();
    let train = data.join("SyntheticShift_TRAIN.tsv");
    let out = dir.path().join("m.json");

    let o = pf2(&["train", "--train", p(&train), "--trees", "0", "--out", p(&out)]);
    assert_eq!(status(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[parameter]"));
    assert_eq!(status(&pf2(&["train", "--train", p(&train)])), 2);
    assert_eq!(status(&pf2(&["frobnicate"])), 2);
    assert_eq!(status(&pf2(&["bench", "--train", p(&train), "--test", p(&train), "--classifiers", "knn"])), 2);

    let bad = dir.path().join("bad.tsv");
    fs::write(&bad, "a\t1\t2\nb\t1\tx\n").unwrap();
    let o = pf2(&["train", "--train", p(&bad), "--out", p(&out)]);
    assert_eq!(status(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[data-format]"));

    // a model of length-100 series against length-2 test data
    let o = pf2(&["train", "--train", p(&train), "--trees", "2", "--out", p(&out)]);
    assert_eq!(status(&o), 0);
    let short = dir.path().join("short.tsv");
    fs::write(&short, "same\t1\t2\nflip\t2\t1\n").unwrap();
    let o = pf2(&["test", "--model", p(&out), "--test", p(&short)]);
    assert_eq!(status(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[schema]"));

    let o = pf2(&["train", "--train", p(&dir.path().join("missing.tsv")), "--out", p(&out)]);
    assert_eq!(status(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[io]"));
    let o = pf2(&["train", "--train", p(&train), "--trees", "1", "--out", "/nonexistent-dir/m.json"]);
    assert_eq!(status(&o), 4);
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
}

#[test]
fn bench_reports_per_fold_and_classifier() {
    let dir = tempfile::tempdir().unwrap();
    let (train, test) = synthetic::shift_split(8, 8, 30, 3);
    let (tr, te) = (dir.path().join("s_TRAIN.tsv"), dir.path().join("s_TEST.tsv"));
    proximity_forest::data::save_ucr(&train, &tr).unwrap();
    proximity_forest::data::save_ucr(&test, &te).unwrap();
    let report = dir.path().join("bench.csv");
    let args = [
        "--threads", "2", "bench", "--train", p(&tr), "--test", p(&te), "--classifiers", "pf2,nn:cdtw", "--resamples", "3",
        "--trees", "5", "--seed", "7", "--out", p(&report), "--append",
    ];
    let o = pf2(&args);
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let first = read_report(&report).unwrap();
    assert_eq!(first.len(), 6);
    assert!(first.iter().all(|r| r.dataset == "s"));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 7);

    // appending again keeps the earlier rows and reproduces the accuracies
    assert_eq!(status(&pf2(&args)), 0);
    let both = read_report(&report).unwrap();
    assert_eq!(both.len(), 12);
    for (a, b) in both[..6].iter().zip(&both[6..]) {
        assert_eq!((&a.classifier, a.fold, a.accuracy), (&b.classifier, b.fold, b.accuracy));
    }
    assert_eq!(both[..6], first[..]);
}
