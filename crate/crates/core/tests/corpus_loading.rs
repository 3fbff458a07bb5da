use std::fs;
use std::path::Path;

use prereqx::corpus::{
    build_corpus, load_corpus, load_corpus_with, CorpusError, CorpusSources, LoadOptions, TextbookCorpus,
};
use prereqx::pipeline::{analyze, PipelineConfig};

const BOOK: &str = r#"{
  "title": "Tiny",
  "sections": [
    {"number": "1", "title": "Speed", "text": "Speed is distance per time. Speed matters."},
    {"number": "1.1", "title": "Velocity", "text": "Velocity is speed with a direction; velocity uses speed."},
    {"number": "2", "title": "Acceleration", "text": "Acceleration is the rate of change of velocity."}
  ]
}"#;

fn write(dir: &Path, name: &str, body: &str) {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).unwrap();
    }
    fs::write(path, body).unwrap();
}

fn tiny(pairs: Option<&str>) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "book.json", BOOK);
    write(d, "concepts.txt", "Speed\nVelocity\nAcceleration\nJerk\n");
    write(d, "synonyms.tsv", "speed\tpace\n");
    write(d, "wiki/speed.txt", "Speed is the magnitude of velocity.");
    write(d, "wiki/velocity.txt", "Velocity is the rate of change of position.");
    write(d, "links.tsv", "velocity\tspeed\nacceleration\tvelocity\nacceleration\tsnap\n");
    if let Some(p) = pairs {
        write(d, "pairs.csv", p);
    }
    dir
}

#[test]
fn three_section_book_loads() {
    let dir = tiny(Some("target,candidate,label\nvelocity,speed,1\nspeed,velocity,0\nacceleration,pace,1\n"));
    let c = load_corpus(dir.path()).unwrap();
    let n = c.counts();
    assert_eq!((n.sections, n.concepts, n.pages, n.links, n.pairs, n.positive_pairs), (3, 4, 2, 2, 3, 2));
    // synonym resolves the pair endpoint
    assert_eq!(c.pairs[2].candidate, c.concepts.lookup("speed").unwrap());
    // one dropped link, missing pages, one pair touching one of them
    assert_eq!(c.warnings.len(), 3, "{:?}", c.warnings);
    assert!(c.warnings.iter().any(|w| w.contains("acceleration")));

    let a = analyze(&c, PipelineConfig::default());
    let (speed, velocity) = (0, 1);
    assert!(a.omega.get(velocity, speed) > 0.0);
    assert_eq!(a.omega.get(speed, velocity), 0.0);
}

#[test]
fn flip_swaps_orientation() {
    let dir = tiny(Some("target,candidate,label\nvelocity,speed,1\n"));
    let c = load_corpus_with(dir.path(), LoadOptions { flip_pairs: true }).unwrap();
    assert_eq!((c.pairs[0].target, c.pairs[0].candidate), (0, 1));
}

#[test]
fn header_only_pairs_file() {
    let dir = tiny(Some("target,candidate,label\n"));
    let c = load_corpus(dir.path()).unwrap();
    assert!(c.pairs.is_empty());
    let absent = tiny(None);
    assert!(load_corpus(absent.path()).unwrap().pairs.is_empty());
}

#[test]
fn book_json_round_trips() {
    let b = TextbookCorpus::from_json(BOOK).unwrap();
    assert_eq!(TextbookCorpus::from_json(&b.to_json()).unwrap(), b);
    assert_eq!(b.sections[1].number.to_string(), "1.1");
}

#[test]
fn bad_inputs_are_rejected() {
    let dir = tiny(Some("target,candidate,label\nvelocity,snap,1\n"));
    assert!(matches!(
        load_corpus(dir.path()).unwrap_err(),
        CorpusError::UnknownConcept(c) if c == "snap"
    ));

    let dir = tiny(Some("target,candidate,label\nvelocity,speed,yes\n"));
    assert!(matches!(load_corpus(dir.path()).unwrap_err(), CorpusError::BadLabel(_)));

    let dir = tiny(Some("target,candidate,label\nspeed,pace,1\n"));
    assert!(matches!(load_corpus(dir.path()).unwrap_err(), CorpusError::SelfPair(_)));

    let dir = tiny(None);
    write(dir.path(), "book.json", &BOOK.replace("\"1.1\"", "\"0.5\""));
    assert!(load_corpus(dir.path()).is_err());

    let dir = tiny(None);
    write(dir.path(), "book.json", &BOOK.replace("\"2\"", "\"1\""));
    assert!(matches!(load_corpus(dir.path()).unwrap_err(), CorpusError::SectionOrder { .. }));

    let dir = tiny(None);
    write(dir.path(), "book.json", &BOOK.replace("\"1.1\"", "\"1\""));
    assert!(matches!(load_corpus(dir.path()).unwrap_err(), CorpusError::DuplicateSection(_)));

    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(load_corpus(dir.path()).unwrap_err(), CorpusError::Io { .. }));
}

#[test]
fn in_memory_sources_match_disk() {
    let pairs = "target,candidate,label\nvelocity,speed,1\n";
    let dir = tiny(Some(pairs));
    let disk = load_corpus(dir.path()).unwrap();
    let src = CorpusSources {
        root: "mem".into(),
        book: BOOK.into(),
        concepts: "Speed\nVelocity\nAcceleration\nJerk\n".into(),
        synonyms: Some("speed\tpace\n".into()),
        pages: [
            ("speed".to_string(), "Speed is the magnitude of velocity.".to_string()),
            ("velocity".to_string(), "Velocity is the rate of change of position.".to_string()),
        ]
        .into(),
        links: Some("velocity\tspeed\nacceleration\tvelocity\nacceleration\tsnap\n".into()),
        pairs: Some(pairs.into()),
    };
    let mem = build_corpus(&src, LoadOptions::default()).unwrap();
    assert_eq!(mem.counts(), disk.counts());
    assert_eq!(mem.pages, disk.pages);
    assert_eq!(mem.pairs, disk.pairs);
    assert_eq!(mem.warnings, disk.warnings);
}
