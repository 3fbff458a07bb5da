use std::cmp::Ordering;

use proptest::prelude::*;

use prereqx::classify::{f1_at, theta_grid, tune_theta};
use prereqx::corpus::{compare_sections, ConceptSet, SynonymTable, WikiLinkGraph};
use prereqx::eval::metrics::{auprc, prf};
use prereqx::eval::{kfold_split, CvConfig};
use prereqx::features::{pagerank, refd, GraphStats, RefdWeights, CONVERGENCE, PAGERANK_DAMPING};
use prereqx::matrix::{apply_ordering, implicit_closure, ClosureMode, PrereqMatrix, Stage};
use prereqx::textstats::{best_match, cosine, phrase_freq, tfidf, tokenize, Vectorizer};

const WORDS: [&str; 8] = ["force", "mass", "speed", "energy", "kinetic", "of", "motion", "time"];

fn text() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(&WORDS[..]), 0..25).prop_map(|w| w.join(" "))
}

fn section_number() -> impl Strategy<Value = String> {
    prop::collection::vec(1u32..12, 1..4)
        .prop_map(|v| v.iter().map(u32::to_string).collect::<Vec<_>>().join("."))
}

fn matrix(max_n: usize) -> impl Strategy<Value = PrereqMatrix> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0.0), 2 => 0.01f64..1.0], n), n)
            .prop_map(|rows| PrereqMatrix::from_rows(&rows, Stage::Explicit).unwrap())
    })
}

fn graph(max_n: usize) -> impl Strategy<Value = WikiLinkGraph> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |e| WikiLinkGraph::from_edges(n, e))
    })
}

fn labeled(max: usize) -> impl Strategy<Value = Vec<(f64, u8)>> {
    prop::collection::vec((0.0f64..1.0, 0u8..2), 1..max).prop_map(|mut v| {
        v[0].1 = 1;
        v
    })
}

proptest! {
    #[test]
    fn section_order_is_total(a in section_number(), b in section_number(), c in section_number()) {
        let ab = compare_sections(&a, &b).unwrap();
        prop_assert_eq!(ab, compare_sections(&b, &a).unwrap().reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        if ab != Ordering::Greater && compare_sections(&b, &c).unwrap() != Ordering::Greater {
            prop_assert_ne!(compare_sections(&a, &c).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn normalize_is_idempotent(t in text()) {
        let concepts = ConceptSet::new(["kinetic energy", "speed", "force"]).unwrap();
        let syn = SynonymTable::build(
            [("energy of motion", "kinetic energy"), ("motion", "speed"), ("mass time", "force")],
            &concepts,
        ).unwrap();
        let once = syn.normalize(&t);
        prop_assert_eq!(syn.normalize(&once), once.clone());
        prop_assert!(!tokenize(&once).windows(3).any(|w| w == ["energy", "of", "motion"]));
    }

    #[test]
    fn cosine_symmetric_and_bounded(docs in prop::collection::vec(text(), 1..5), a in text(), b in text()) {
        let v = Vectorizer::fit(&docs);
        let (va, vb) = (v.transform(&a), v.transform(&b));
        let ab = cosine(&va, &vb);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((ab - cosine(&vb, &va)).abs() < 1e-12);
        if !va.is_empty() {
            prop_assert!((cosine(&va, &va) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn phrase_freq_bounded(t in text(), k in 1usize..3) {
        let phrase = WORDS[..k].join(" ");
        prop_assert!(phrase_freq(&phrase, &t) * k <= tokenize(&t).len());
    }

    #[test]
    fn best_match_ignores_scale(docs in prop::collection::vec(text(), 2..5), reference in text()) {
        let v = Vectorizer::fit(&docs);
        let doubled = format!("{reference} {reference}");
        prop_assert_eq!(best_match(&docs, &reference, &v), best_match(&docs, &doubled, &v));
    }

    #[test]
    fn tfidf_grows_with_frequency(rest in text(), extra in 1usize..4) {
        let concepts = ["force", "mass", "speed", "energy", "time", "motion"];
        let base = format!("force {rest}");
        let more = format!("{} {rest}", vec!["force"; 1 + extra].join(" "));
        let set = [base.as_str(), "mass", "speed", "time"];
        let set_more = [more.as_str(), "mass", "speed", "time"];
        let lo = tfidf("force", &base, &set, &concepts);
        let hi = tfidf("force", &more, &set_more, &concepts);
        prop_assert!(lo >= 0.0);
        prop_assert!(hi >= lo - 1e-12);
    }

    #[test]
    fn closure_idempotent_and_monotone(m in matrix(7)) {
        let c = implicit_closure(&m, ClosureMode::Fixpoint);
        prop_assert_eq!(implicit_closure(&c, ClosureMode::Fixpoint).rows(), c.rows());
        for i in 0..m.n() {
            prop_assert_eq!(c.get(i, i), 0.0);
            for j in 0..m.n() {
                if i != j {
                    prop_assert!(c.get(i, j) >= m.get(i, j));
                }
                for k in 0..m.n() {
                    if i != j && i != k && j != k {
                        prop_assert!(c.get(i, j) >= c.get(i, k).min(c.get(k, j)));
                    }
                }
            }
        }
    }

    #[test]
    fn ordered_matrix_is_acyclic(m in matrix(8), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let n = m.n();
        let mut ranks: Vec<usize> = (0..n).collect();
        ranks.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let o = apply_ordering(&implicit_closure(&m, ClosureMode::Fixpoint), &ranks);
        for i in 0..n {
            for j in 0..n {
                if o.get(i, j) > 0.0 {
                    prop_assert!(ranks[i] > ranks[j]);
                    prop_assert_eq!(o.get(j, i), 0.0);
                }
            }
        }
    }

    #[test]
    fn refd_antisymmetric(g in graph(7)) {
        let s = GraphStats::new(&g);
        let n = s.node_count();
        for a in 0..n {
            for b in 0..n {
                let v = refd(a, b, &s, &RefdWeights::Equal);
                prop_assert!((-1.0..=1.0).contains(&v));
                prop_assert!((v + refd(b, a, &s, &RefdWeights::Equal)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pagerank_is_a_distribution(g in graph(9)) {
        let pr = pagerank(&g, PAGERANK_DAMPING, CONVERGENCE);
        prop_assert!((pr.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        prop_assert!(pr.iter().all(|&p| p > 0.0));
    }

    #[test]
    fn prf_bounded(pairs in prop::collection::vec((0u8..2, 0u8..2), 1..40)) {
        let (pred, gold): (Vec<u8>, Vec<u8>) = pairs.into_iter().unzip();
        let r = prf(&pred, &gold).unwrap();
        for v in [r.precision, r.recall, r.f1] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        prop_assert!(r.f1 <= r.precision.max(r.recall) + 1e-12);
    }

    #[test]
    fn kfold_partitions(labels in prop::collection::vec(0u8..2, 10..80), k in 2usize..7, seed in any::<u64>()) {
        let split = kfold_split(&labels, CvConfig { k, seed, stratified: true }).unwrap();
        let mut seen = vec![0; labels.len()];
        for f in 0..k {
            for i in split.test_indices(f) {
                seen[i] += 1;
            }
            prop_assert_eq!(split.test_indices(f).len() + split.train_indices(f).len(), labels.len());
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        let pos: Vec<usize> = (0..k)
            .map(|f| split.test_indices(f).iter().filter(|&&i| labels[i] == 1).count())
            .collect();
        prop_assert!(pos.iter().max().unwrap() - pos.iter().min().unwrap() <= 1);
        let again = kfold_split(&labels, CvConfig { k, seed, stratified: true }).unwrap();
        prop_assert_eq!(split, again);
    }

    #[test]
    fn tuned_theta_is_optimal(scored in labeled(40)) {
        let theta = tune_theta(&scored).unwrap().theta();
        let best = f1_at(&scored, theta);
        for t in theta_grid() {
            let f = f1_at(&scored, t);
            prop_assert!(f <= best);
            if f == best {
                prop_assert!(t >= theta);
            }
        }
    }

    #[test]
    fn auprc_in_unit_interval(scored in labeled(30)) {
        let (s, l): (Vec<f64>, Vec<u8>) = scored.into_iter().unzip();
        let a = auprc(&s, &l).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
    }
}
