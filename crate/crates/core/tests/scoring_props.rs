use figdesc::scoring::{
    calibrate, classify, compute_threshold, evaluate, lambda_sweep, sentence_weight, ScoringConfig, ScoringError, WeightTable,
    DEFAULT_LAMBDAS,
};
use figdesc::tmr::{ElementKind, ElementSource, Tmr, TmrElement};
use proptest::prelude::*;

const NAMES: [&str; 8] = ["DRAWING", "GRAPH", "PEAK", "SHAPE", "GEOMETRIC-ASPECT", "EVENT", "AGENT", "CURVE"];

fn element() -> impl Strategy<Value = TmrElement> {
    (any::<bool>(), 0..NAMES.len(), 1u32..6, 0u8..5).prop_map(|(concept, n, d, src)| TmrElement {
        kind: if concept { ElementKind::Concept } else { ElementKind::Property },
        name: NAMES[n].to_string(),
        distance: d,
        source: match src {
            0 => ElementSource::Placeholder,
            1 => ElementSource::Relation,
            _ => ElementSource::Lexeme { token: n, form: "w".into() },
        },
    })
}

fn tmrs() -> impl Strategy<Value = Vec<Tmr>> {
    proptest::collection::vec(proptest::collection::vec(element(), 0..8), 1..10).prop_map(|sets| {
        sets.into_iter()
            .enumerate()
            .map(|(i, elements)| Tmr {
                sentence: i,
                elements,
                ..Tmr::default()
            })
            .collect()
    })
}

fn brute_counts(pred: &[bool], gold: &[bool]) -> (usize, usize, usize, usize) {
    let count = |p: bool, g: bool| pred.iter().zip(gold).filter(|(a, b)| **a == p && **b == g).count();
    (count(true, true), count(true, false), count(false, false), count(false, true))
}

proptest! {
    #[test]
    fn categories_are_normalized(ts in tmrs()) {
        let cfg = ScoringConfig::default();
        match calibrate(&ts, &cfg) {
            Ok(table) => {
                for map in [&table.concepts, &table.properties] {
                    if !map.is_empty() {
                        prop_assert!((map.values().sum::<f64>() - 1.0).abs() <= 1e-9);
                    }
                    prop_assert!(map.values().all(|w| *w > 0.0 && *w <= 1.0));
                }
                prop_assert!(!table.concepts.contains_key("EVENT"));
                prop_assert!(!table.properties.contains_key("AGENT"));
                prop_assert!(table.validate(&cfg).is_ok());
            }
            Err(e) => prop_assert!(matches!(e, ScoringError::Degenerate)),
        }
    }

    #[test]
    fn calibration_ignores_order(ts in tmrs(), seed in any::<u64>()) {
        let cfg = ScoringConfig::default();
        let mut shuffled = ts.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (seed as usize).wrapping_mul(i + 7) % (i + 1));
        }
        match (calibrate(&ts, &cfg), calibrate(&shuffled, &cfg)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.to_json(), b.to_json()),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "one order calibrated and the other did not"),
        }
    }

    #[test]
    fn adding_a_weighted_element_never_lowers_the_score(ts in tmrs(), pick in 0..NAMES.len(), d in 1u32..6) {
        let cfg = ScoringConfig::default();
        let Ok(table) = calibrate(&ts, &cfg) else { return Ok(()); };
        let mut t = ts[0].clone();
        let before = sentence_weight(&t, &table, &cfg);
        t.elements.push(TmrElement {
            kind: ElementKind::Concept,
            name: NAMES[pick].to_string(),
            distance: d,
            source: ElementSource::Lexeme { token: 99, form: "x".into() },
        });
        let after = sentence_weight(&t, &table, &cfg);
        prop_assert!(after >= before);
        let w = table.weight(ElementKind::Concept, NAMES[pick]);
        prop_assert!((after - before - w / f64::from(d * d)).abs() < 1e-12);
    }

    #[test]
    fn positives_shrink_as_lambda_grows(scores in proptest::collection::vec(0.0f64..1.0, 1..50), mean in 0.01f64..1.0) {
        let mut last = usize::MAX;
        for l in DEFAULT_LAMBDAS {
            let t = compute_threshold(mean, l).unwrap();
            let n = scores.iter().filter(|s| classify(**s, t)).count();
            prop_assert!(n <= last);
            last = n;
        }
    }

    #[test]
    fn sweep_rows_match_direct_evaluation(
        pairs in proptest::collection::vec((0.0f64..1.0, any::<bool>()), 1..60),
        mean in 0.01f64..1.0,
    ) {
        let (scores, gold): (Vec<f64>, Vec<bool>) = pairs.into_iter().unzip();
        let rows = lambda_sweep(&scores, mean, &DEFAULT_LAMBDAS, &gold).unwrap();
        for row in rows {
            let pred: Vec<bool> = scores.iter().map(|s| *s > mean * row.lambda).collect();
            let m = evaluate(&pred, &gold).unwrap();
            prop_assert!((row.threshold - mean * row.lambda).abs() < 1e-15);
            prop_assert_eq!(row.accuracy, m.accuracy);
            prop_assert_eq!(row.f1, m.f1);
        }
    }

    #[test]
    fn metrics_match_counting(pairs in proptest::collection::vec((any::<bool>(), any::<bool>()), 0..80)) {
        let (pred, gold): (Vec<bool>, Vec<bool>) = pairs.into_iter().unzip();
        let m = evaluate(&pred, &gold).unwrap();
        let (tp, fp, tn, fn_) = brute_counts(&pred, &gold);
        prop_assert_eq!((m.tp, m.fp, m.tn, m.fn_), (tp, fp, tn, fn_));
        let n = pred.len();
        if n > 0 {
            prop_assert!((m.accuracy - (tp + tn) as f64 / n as f64).abs() < 1e-15);
        }
        // F1 written as 2tp / (2tp + fp + fn), zero when there are no positives at all
        let f1 = if tp == 0 { 0.0 } else { 2.0 * tp as f64 / (2 * tp + fp + fn_) as f64 };
        prop_assert!((m.f1 - f1).abs() < 1e-12);
    }
}

#[test]
fn threshold_is_strict() {
    assert!(!classify(0.2, 0.2));
    assert!(classify(0.2000001, 0.2));
    assert!(compute_threshold(0.4, 0.0).is_err());
    assert!(compute_threshold(0.4, f64::NAN).is_err());
}

#[test]
fn weight_table_round_trips() {
    let t = WeightTable::new([("A".to_string(), 0.25), ("B".to_string(), 0.75)], [("P".to_string(), 1.0)], 0.3);
    let back = WeightTable::from_json(t.to_json().as_bytes()).unwrap();
    assert_eq!(back, t);
    assert!(t.validate(&ScoringConfig::default()).is_ok());
    let bad = WeightTable::new([("A".to_string(), 0.5)], [], 0.3);
    assert!(bad.validate(&ScoringConfig::default()).is_err());
}
