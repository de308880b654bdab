mod common;

use factorlab::evalharness::{kfold_cv, ModelSpec};
use factorlab::forest::{
    feature_importance, forest_from_json, forest_to_json, predict_frame, train_forest, ForestConfig, Node,
};
use factorlab::rng::stream_rng;
use factorlab::Error;
use proptest::prelude::*;
use rand::Rng;

use common::{frame_from_rows, interaction_threshold, names, normal, random_problem};

fn small(n_trees: usize, seed: u64) -> ForestConfig {
    ForestConfig {
        n_trees,
        seed,
        ..ForestConfig::default()
    }
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn training_is_independent_of_thread_count() {
    let frame = interaction_threshold(3, 300);
    let cfg = small(40, 9);
    let one = in_pool(1, || train_forest(&frame, &names(4), "y", &cfg).unwrap());
    let many = in_pool(4, || train_forest(&frame, &names(4), "y", &cfg).unwrap());
    assert_eq!(one, many);
    let p1 = in_pool(1, || predict_frame(&one, &frame).unwrap());
    let p4 = in_pool(4, || predict_frame(&many, &frame).unwrap());
    assert_eq!(p1, p4);
}

#[test]
fn smaller_forest_is_a_prefix_of_a_larger_one() {
    let frame = interaction_threshold(5, 200);
    let short = train_forest(&frame, &names(4), "y", &small(15, 77)).unwrap();
    let long = train_forest(&frame, &names(4), "y", &small(40, 77)).unwrap();
    assert_eq!(short.trees[..], long.trees[..15]);
}

#[test]
fn seed_changes_the_ensemble() {
    let frame = interaction_threshold(5, 200);
    let a = train_forest(&frame, &names(4), "y", &small(10, 1)).unwrap();
    let b = train_forest(&frame, &names(4), "y", &small(10, 2)).unwrap();
    assert_ne!(a.trees, b.trees);
}

#[test]
fn importance_concentrates_on_the_only_signal() {
    let mut rng = stream_rng(12, 0);
    let x: Vec<Vec<f64>> = (0..300).map(|_| (0..4).map(|_| rng.random::<f64>()).collect()).collect();
    let y: Vec<f64> = x.iter().map(|r| 8.0 * r[2] + 0.2 * normal(&mut rng)).collect();
    let frame = frame_from_rows(&x, &y);
    let model = train_forest(&frame, &names(4), "y", &small(60, 4)).unwrap();
    let imp = feature_importance(&model);
    assert!((imp.values().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(imp["x3"] > 0.9, "{imp:?}");
}

#[test]
fn forest_beats_linear_on_interactions() {
    let frame = interaction_threshold(17, 500);
    let linear = kfold_cv(&frame, &ModelSpec::Linear { predictors: names(4) }, 10, 17).unwrap();
    let forest = kfold_cv(
        &frame,
        &ModelSpec::Forest {
            config: small(60, 17),
            predictors: names(4),
        },
        10,
        17,
    )
    .unwrap();
    assert!(forest.rmse < linear.rmse, "forest {} vs linear {}", forest.rmse, linear.rmse);
}

#[test]
fn min_leaf_at_least_n_yields_mean_stumps() {
    let (x, y) = random_problem(8, 30, 3);
    let frame = frame_from_rows(&x, &y);
    let cfg = ForestConfig {
        min_leaf: 30,
        bootstrap: false,
        ..small(5, 1)
    };
    let model = train_forest(&frame, &names(3), "y", &cfg).unwrap();
    assert!(model.trees.iter().all(|t| t.is_stump()));
    let mean = y.iter().sum::<f64>() / 30.0;
    for p in predict_frame(&model, &frame).unwrap() {
        assert!((p - mean).abs() < 1e-12);
    }
    assert!(feature_importance(&model).values().all(|v| *v == 0.0));
}

#[test]
fn json_round_trip_preserves_predictions() {
    let frame = interaction_threshold(2, 150);
    let model = train_forest(&frame, &names(4), "y", &small(12, 3)).unwrap();
    let text = forest_to_json(&model).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["format"], "factorlab-forest");
    assert!(doc["spec_version"].is_string());
    let back = forest_from_json(&text).unwrap();
    assert_eq!(back, model);
    assert_eq!(predict_frame(&back, &frame).unwrap(), predict_frame(&model, &frame).unwrap());

    let mut bad = doc.clone();
    bad["version"] = 99.into();
    assert!(matches!(forest_from_json(&bad.to_string()), Err(Error::Schema(_))));
    let mut bad = doc;
    bad["trees"].as_array_mut().unwrap().pop();
    assert!(matches!(forest_from_json(&bad.to_string()), Err(Error::Schema(_))));
}

#[test]
fn invalid_configs_are_rejected() {
    let frame = interaction_threshold(2, 50);
    for cfg in [
        ForestConfig { n_trees: 0, ..small(1, 0) },
        ForestConfig { min_leaf: 0, ..small(1, 0) },
        ForestConfig { m_try: Some(5), ..small(1, 0) },
        ForestConfig { m_try: Some(0), ..small(1, 0) },
    ] {
        assert!(matches!(
            train_forest(&frame, &names(4), "y", &cfg),
            Err(Error::ConfigInvalid(_))
        ));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn predictions_stay_within_training_range(seed in any::<u64>(), min_leaf in 1usize..8, bootstrap in any::<bool>()) {
        let (x, y) = random_problem(seed, 60, 3);
        let frame = frame_from_rows(&x, &y);
        let cfg = ForestConfig { min_leaf, bootstrap, ..small(8, seed) };
        let model = train_forest(&frame, &names(3), "y", &cfg).unwrap();
        let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (probe, _) = random_problem(seed ^ 1, 40, 3);
        let probe_frame = frame_from_rows(&probe, &vec![0.0; 40]);
        for p in predict_frame(&model, &probe_frame).unwrap() {
            prop_assert!(p >= lo && p <= hi);
        }
        for tree in &model.trees {
            for node in tree.nodes() {
                if let Node::Leaf { count, .. } = node {
                    prop_assert!(*count >= min_leaf || tree.is_stump());
                }
            }
        }
    }
}
