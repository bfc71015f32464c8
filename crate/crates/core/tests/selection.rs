use cbosel_core::data::synthetic::{generate, SyntheticSpec};
use cbosel_core::data::{split_train_test, LabeledDataset, SplitSpec};
use cbosel_core::nn::{holdout_accuracy, ClassifierConfig, TrainConfig};
use cbosel_core::selection::{
    candidate_seed, decode_mask, exhaustive_search, select_features, wrapper_fitness, FeatureMask, OptimizerKind,
    SelectionConfig, WrapperFitnessSpec,
};
use proptest::prelude::*;

fn synthetic_train() -> LabeledDataset<f64> {
    let ds = generate::<f64>(&SyntheticSpec::default()).unwrap();
    split_train_test(&ds, &SplitSpec::new(70.0, 1)).unwrap().0
}

fn selection_gru() -> ClassifierConfig {
    ClassifierConfig::Gru(TrainConfig {
        epochs: 15,
        ..TrainConfig::default()
    })
}

#[test]
fn informative_pair_maximizes_knn_accuracy() {
    let spec = WrapperFitnessSpec::holdout(&synthetic_train(), ClassifierConfig::Knn { k: 5 }, 1).unwrap();
    let all = exhaustive_search(&spec).unwrap();
    assert_eq!(all.len(), 1023);
    let best = all.iter().map(|(_, a)| *a).fold(0.0, f64::max);
    let pair = FeatureMask::parse("1100000000").unwrap();
    assert_eq!(spec.score_mask(&pair).unwrap(), best);
    for (mask, acc) in &all {
        if *acc == best {
            assert!(mask.contains(0) && mask.contains(1), "{mask}");
        }
    }
}

#[test]
fn cbo_keeps_both_informative_columns() {
    let train = synthetic_train();
    let hits = (0..10)
        .filter(|&seed| {
            let spec = WrapperFitnessSpec::holdout(&train, selection_gru(), seed).unwrap();
            let r = select_features(&spec, &SelectionConfig::new(OptimizerKind::Cbo, 10, 15)).unwrap();
            let m = r.feature_mask().unwrap();
            m.contains(0) && m.contains(1)
        })
        .count();
    assert!(hits >= 8, "{hits}/10");
}

#[test]
fn selection_result_is_consistent() {
    let spec = WrapperFitnessSpec::holdout(&synthetic_train(), selection_gru(), 3).unwrap();
    let cfg = SelectionConfig::new(OptimizerKind::Pso, 6, 4);
    let r = select_features(&spec, &cfg).unwrap();
    assert_eq!(r.trace.len(), 5);
    assert!(r.trace.windows(2).all(|w| w[1] >= w[0]));
    assert_eq!(r.accuracy, *r.trace.last().unwrap());
    assert_eq!(wrapper_fitness(&r.best_position, &spec).unwrap(), r.accuracy);
    assert_eq!(spec.score_mask(&r.feature_mask().unwrap()).unwrap(), r.accuracy);
    let parallel = select_features(&spec, &SelectionConfig { jobs: 4, ..cfg }).unwrap();
    assert_eq!(parallel, r);
}

#[test]
fn all_ones_mask_equals_all_features_baseline() {
    let spec = WrapperFitnessSpec::holdout(&synthetic_train(), selection_gru(), 5).unwrap();
    let all = FeatureMask::all(10).unwrap();
    let baseline = holdout_accuracy(
        &spec.classifier().with_seed(candidate_seed(5, &all)),
        spec.train(),
        spec.validation(),
    )
    .unwrap();
    assert_eq!(spec.score_mask(&all).unwrap(), baseline);
    assert_eq!(wrapper_fitness(&[1.0; 10], &spec).unwrap(), baseline);
}

#[test]
fn constant_label_validation_scores_one() {
    let train = LabeledDataset::unnamed(vec![0.1, 0.2, 0.3, 0.4], 1, vec![2, 2, 2, 2], 3).unwrap();
    let val = LabeledDataset::unnamed(vec![0.9, 0.0], 1, vec![2, 2], 3).unwrap();
    let spec = WrapperFitnessSpec::new(train, val, ClassifierConfig::Knn { k: 3 }, 0).unwrap();
    assert_eq!(wrapper_fitness(&[0.7], &spec).unwrap(), 1.0);
}

#[test]
fn identical_positions_score_identically() {
    let spec = WrapperFitnessSpec::holdout(&synthetic_train(), selection_gru(), 8).unwrap();
    let p = [0.9, 0.1, 0.6, 0.2, 0.3, 0.8, 0.0, 0.4, 0.5, 0.45];
    assert_eq!(wrapper_fitness(&p, &spec).unwrap(), wrapper_fitness(&p, &spec).unwrap());
    // a different position decoding to the same mask scores the same
    let q = [0.95, 0.2, 0.7, 0.1, 0.0, 0.99, 0.3, 0.1, 0.51, 0.0];
    assert_eq!(wrapper_fitness(&p, &spec).unwrap(), wrapper_fitness(&q, &spec).unwrap());
}

proptest! {
    #[test]
    fn decoded_masks_are_never_empty(p in proptest::collection::vec(0.0f64..=1.0, 1..30), tau in 0.01f64..0.99) {
        let m = decode_mask(&p, tau).unwrap();
        prop_assert!(m.count() >= 1);
        prop_assert_eq!(m.len(), p.len());
    }

    #[test]
    fn projection_keeps_selected_columns_in_order(bits in proptest::collection::vec(any::<bool>(), 1..8)) {
        prop_assume!(bits.iter().any(|&b| b));
        let n = bits.len();
        let feats: Vec<f64> = (0..3 * n).map(|v| v as f64).collect();
        let ds = LabeledDataset::unnamed(feats, n, vec![0, 1, 0], 2).unwrap();
        let mask = FeatureMask::new(bits.clone()).unwrap();
        let p = ds.project(mask.included()).unwrap();
        prop_assert_eq!(p.n_features(), mask.count());
        for r in 0..3 {
            let expect: Vec<f64> = mask.indices().iter().map(|&c| ds.row(r)[c]).collect();
            prop_assert_eq!(p.row(r), expect.as_slice());
        }
    }
}
