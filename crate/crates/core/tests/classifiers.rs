use prereqx::classify::{predict, train, ModelKind, Standardizer, TrainConfig};
use prereqx::eval::{kfold_split, run_supervised, CvConfig};
use prereqx::features::{FeatureRow, FeatureSet, FeatureTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn table(names: &[&str], data: Vec<(Vec<f64>, u8)>) -> FeatureTable {
    FeatureTable {
        names: names.iter().map(|s| s.to_string()).collect(),
        rows: data
            .into_iter()
            .enumerate()
            .map(|(i, (values, l))| FeatureRow {
                target: format!("t{i}"),
                candidate: format!("c{i}"),
                label: Some(l),
                values,
                missing_page: false,
            })
            .collect(),
    }
}

/// Two well separated blobs in 3 dimensions.
fn separable(n: usize, seed: u64) -> FeatureTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n)
        .map(|i| {
            let l = (i % 2) as u8;
            let centre = if l == 1 { 3.0 } else { -3.0 };
            let v = (0..3).map(|_| centre + rng.gen_range(-1.0..1.0)).collect();
            (v, l)
        })
        .collect();
    table(&["x", "y", "z"], data)
}

fn accuracy(t: &FeatureTable, kind: ModelKind) -> f64 {
    let cfg = TrainConfig { trees: 25, ..TrainConfig::default() };
    let m = train(t, kind, 3, &cfg).unwrap();
    let p = predict(&m, t).unwrap();
    let hits = p.iter().zip(&t.rows).filter(|(p, r)| Some(p.label) == r.label).count();
    hits as f64 / t.rows.len() as f64
}

#[test]
fn every_model_separates_blobs() {
    let t = separable(80, 1);
    for kind in ModelKind::ALL {
        assert!(accuracy(&t, kind) >= 0.95, "{kind}");
    }
}

#[test]
fn naive_bayes_follows_prior_without_signal() {
    // one constant feature, 3:1 class ratio
    let data = (0..40).map(|i| (vec![1.0], (i % 4 != 0) as u8)).collect();
    let t = table(&["k"], data);
    let m = train(&t, ModelKind::NaiveBayes, 0, &TrainConfig::default()).unwrap();
    let p = predict(&m, &t).unwrap();
    assert!(p.iter().all(|p| p.label == 1));
    assert!((p[0].score - 0.75).abs() < 1e-9);
}

#[test]
fn forest_is_deterministic_per_seed() {
    let t = separable(40, 2);
    let cfg = TrainConfig { trees: 10, ..TrainConfig::default() };
    let a = train(&t, ModelKind::RandomForest, 9, &cfg).unwrap();
    let b = train(&t, ModelKind::RandomForest, 9, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn forest_memorizes_noisy_training_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let data = (0..60)
        .map(|_| ((0..4).map(|_| rng.gen_range(0.0..1.0)).collect(), rng.gen_range(0..2)))
        .collect();
    let t = table(&["a", "b", "c", "d"], data);
    assert!(accuracy(&t, ModelKind::RandomForest) >= 0.95);
}

#[test]
fn labels_agree_with_scores() {
    let t = separable(30, 4);
    let cfg = TrainConfig { trees: 15, ..TrainConfig::default() };
    for kind in ModelKind::ALL {
        let m = train(&t, kind, 1, &cfg).unwrap();
        for p in predict(&m, &t).unwrap() {
            let cut = if kind == ModelKind::LinearSvm { 0.0 } else { 0.5 };
            assert_eq!(p.label, (p.score > cut) as u8, "{kind}");
        }
    }
}

#[test]
fn model_round_trips_through_json() {
    let t = separable(30, 6);
    let cfg = TrainConfig { trees: 5, ..TrainConfig::default() };
    for kind in ModelKind::ALL {
        let m = train(&t, kind, 1, &cfg).unwrap();
        let back: prereqx::classify::TrainedClassifier =
            serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(predict(&back, &t).unwrap(), predict(&m, &t).unwrap());
    }
}

#[test]
fn standardizer_uses_training_rows_only() {
    let train_rows = vec![vec![0.0, 10.0], vec![2.0, 10.0]];
    let s = Standardizer::fit(&train_rows);
    assert_eq!(s.mean, [1.0, 10.0]);
    // constant column keeps unit scale
    assert_eq!(s.scale, [1.0, 1.0]);
    assert_eq!(s.transform(&[100.0, 11.0]), [99.0, 1.0]);
}

#[test]
fn book_feature_alone_gives_perfect_forest() {
    // labels fully determined by book_tfidf > 0
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let data = (0..100)
        .map(|i| {
            let pos = i % 3 == 0;
            let tfidf = if pos { rng.gen_range(0.05..0.5) } else { 0.0 };
            let order = rng.gen_range(-5..5) as f64;
            (vec![tfidf, order], pos as u8)
        })
        .collect();
    let t = table(&["book_tfidf", "order_diff"], data);
    let cv = CvConfig::default();
    let cfg = TrainConfig { trees: 20, ..TrainConfig::default() };
    let res = run_supervised(&t, &[ModelKind::RandomForest], &[FeatureSet::BookOnly], cv, &cfg).unwrap();
    assert_eq!(res.len(), 1);
    assert_eq!(res[0].f1, 1.0);
    let split = kfold_split(&t.labels().unwrap(), cv).unwrap();
    assert_eq!(split.assignments.len(), 100);
}
