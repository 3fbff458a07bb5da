//! End-to-end behavior on the committed mini textbook.

use std::path::PathBuf;

use prereqx::corpus::{load_corpus, Corpus};
use prereqx::eval::{run_statistical, CvConfig};
use prereqx::matrix::{apply_ordering, ClosureMode};
use prereqx::pipeline::{analyze, PipelineConfig};

fn fixture() -> Corpus {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/mini_physics");
    load_corpus(dir).expect("fixture loads")
}

#[test]
fn fixture_counts() {
    let c = fixture();
    let counts = c.counts();
    assert_eq!(counts.concepts, 12);
    assert_eq!(counts.sections, 16);
    assert_eq!(counts.pairs, 132);
    assert_eq!(counts.positive_pairs, 45);
    assert_eq!(counts.pages, 12);
    assert!(c.warnings.is_empty(), "{:?}", c.warnings);
}

#[test]
fn every_concept_lands_in_its_own_section() {
    let c = fixture();
    let a = analyze(&c, PipelineConfig::default());
    for p in &a.resolution.placements {
        let sec = &a.book.sections[p.rho.expect("placed")];
        assert_eq!(sec.title, c.concepts.id(p.concept), "concept {}", c.concepts.id(p.concept));
        assert_eq!(p.sigma, p.rho);
    }
    // book order is a valid teaching order
    let ranks = a.ranks();
    let order = ["distance", "time", "mass", "velocity", "acceleration", "equations of motion",
        "force", "momentum", "impulse", "work", "kinetic energy", "power"];
    for (r, id) in order.iter().enumerate() {
        assert_eq!(ranks[c.concepts.lookup(id).unwrap()], r);
    }
}

#[test]
fn ordering_recovers_planted_dag() {
    let c = fixture();
    let on = analyze(&c, PipelineConfig::default());
    for p in &c.pairs {
        let v = on.omega.get(p.target, p.candidate);
        assert_eq!(v > 0.0, p.is_positive(), "{} <- {}: {v}", c.concepts.id(p.target), c.concepts.id(p.candidate));
    }
    let cv = CvConfig::default();
    let with = run_statistical("with", &on.omega, &c.pairs, cv).unwrap();
    let off = analyze(&c, PipelineConfig { ordering: false, closure: ClosureMode::Fixpoint });
    let without = run_statistical("without", &off.omega, &c.pairs, cv).unwrap();
    assert_eq!(with.f1, 1.0);
    assert!(without.f1 < with.f1, "without ordering F1 {}", without.f1);
    assert!(without.auprc <= with.auprc);
    // toggling ordering touches only the last stage
    assert_eq!(on.explicit, off.explicit);
    assert_eq!(on.closed, off.closed);
    assert_eq!(apply_ordering(&off.closed, off.ranks()), on.omega);
}
