mod common;

use std::collections::BTreeSet;
use std::fs;

use figdesc::baseline::{fold_assignments, kfold_cv, load_labeled_jsonl, LogRegHyperparams};
use proptest::prelude::*;

fn items() -> Vec<figdesc::baseline::LabeledItem> {
    load_labeled_jsonl(&fs::read_to_string(common::fixture("labeled.jsonl")).unwrap()).unwrap()
}

#[test]
fn fixture_is_balanced() {
    let items = items();
    assert_eq!(items.len(), 200);
    assert_eq!(items.iter().filter(|i| i.label == 1).count(), 100);
}

#[test]
fn cross_validation_report_is_consistent_and_repeatable() {
    let items = items();
    let hp = LogRegHyperparams::default();
    let a = kfold_cv(&items, 10, 7, &hp).unwrap();
    let b = kfold_cv(&items, 10, 7, &hp).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());

    let mean_acc = a.folds.iter().map(|f| f.metrics.accuracy).sum::<f64>() / 10.0;
    let mean_f1 = a.folds.iter().map(|f| f.metrics.f1).sum::<f64>() / 10.0;
    assert!((a.mean_accuracy - mean_acc).abs() < 1e-12);
    assert!((a.mean_f1 - mean_f1).abs() < 1e-12);
    for f in &a.folds {
        let m = &f.metrics;
        assert_eq!(m.tp + m.fp + m.tn + m.fn_, f.test_size);
        assert_eq!(f.train_size + f.test_size, 200);
    }
    assert!(a.mean_accuracy > 0.9);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let items = items();
    let hp = LogRegHyperparams::default();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| serde_json::to_string(&kfold_cv(&items, 5, 1, &hp).unwrap()).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn bad_fold_counts() {
    assert!(fold_assignments(10, 1, 0).is_err());
    assert!(fold_assignments(3, 4, 0).is_err());
    assert!(load_labeled_jsonl("{\"text\": \"x\", \"label\": 2}").is_err());
}

proptest! {
    #[test]
    fn folds_partition_the_items(n in 2usize..300, k in 2usize..12, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let folds = fold_assignments(n, k, seed).unwrap();
        prop_assert_eq!(folds.len(), k);
        let all: BTreeSet<usize> = folds.iter().flatten().copied().collect();
        prop_assert_eq!(all.len(), n);
        prop_assert_eq!(folds.iter().map(Vec::len).sum::<usize>(), n);
        let (lo, hi) = (n / k, n.div_ceil(k));
        prop_assert!(folds.iter().all(|f| f.len() >= lo && f.len() <= hi));
    }
}
