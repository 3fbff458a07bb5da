//! Placing each concept in the textbook: which section holds its content
//! and where it sits in the teaching order.
//!
//! Resolution runs in four steps per concept:
//!
//! 1. collect sections whose title matches the concept (`match_titles`);
//! 2. reduce them to one section, first per chapter and then across
//!    chapters, by similarity to the concept's Wikipedia page
//!    (`disambiguate`);
//! 3. find the earliest section that discusses the concept more than once
//!    (`first_discussion`);
//! 4. combine both into a position and a content section
//!    (`finalize_placement`).
//!
//! All section references are indices into `TextbookCorpus::sections`, which
//! is validated to be in reading order, so index order is section order.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::{ConceptSet, SectionNumber, TextbookCorpus};
use crate::textstats::{best_match, count_phrase, first_offset, tokenize, Vectorizer};

/// Sections whose titles match a concept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    pub concept: usize,
    pub sections: Vec<usize>,
}

/// Earliest section mentioning a concept more than once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirstMention {
    pub concept: usize,
    pub section: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConceptPlacement {
    pub concept: usize,
    /// Section giving the concept's position.
    pub rho: Option<usize>,
    /// Section whose body is the concept's content.
    pub sigma: Option<usize>,
    pub basic: bool,
    /// First token offset of the concept inside its `rho` section.
    pub offset: Option<usize>,
}

impl ConceptPlacement {
    pub fn sigma_text<'b>(&self, book: &'b TextbookCorpus) -> &'b str {
        self.sigma.map_or("", |s| book.sections[s].text.as_str())
    }

    pub fn rho_number<'b>(&self, book: &'b TextbookCorpus) -> Option<&'b SectionNumber> {
        self.rho.map(|s| &book.sections[s].number)
    }
}

/// Works on a synonym-normalized book.
#[derive(Debug, Clone)]
pub struct Resolver<'a> {
    book: &'a TextbookCorpus,
    vectorizer: Vectorizer,
    title_tokens: Vec<Vec<String>>,
    text_tokens: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Disambiguated {
    pub set: CandidateSet,
    pub warning: Option<String>,
}

fn contains_seq(haystack: &[String], needle: &[String]) -> bool {
    !needle.is_empty() && first_offset(needle, haystack).is_some()
}

impl<'a> Resolver<'a> {
    pub fn new(book: &'a TextbookCorpus) -> Self {
        let texts: Vec<&str> = book.sections.iter().map(|s| s.text.as_str()).collect();
        Resolver {
            book,
            vectorizer: Vectorizer::fit(&texts),
            title_tokens: book.sections.iter().map(|s| tokenize(&s.title)).collect(),
            text_tokens: book.sections.iter().map(|s| tokenize(&s.text)).collect(),
        }
    }

    pub fn book(&self) -> &TextbookCorpus {
        self.book
    }

    pub fn vectorizer(&self) -> &Vectorizer {
        &self.vectorizer
    }

    pub fn section_tokens(&self, section: usize) -> &[String] {
        &self.text_tokens[section]
    }

    /// Sections whose title equals the concept, contains it, or is contained
    /// in it, all as contiguous token sequences.
    pub fn match_titles(&self, concept: usize, concept_id: &str) -> CandidateSet {
        let phrase = tokenize(concept_id);
        let sections = self
            .title_tokens
            .iter()
            .enumerate()
            .filter(|(_, title)| contains_seq(title, &phrase) || contains_seq(&phrase, title))
            .map(|(i, _)| i)
            .collect();
        CandidateSet { concept, sections }
    }

    fn best_of(&self, sections: &[usize], wiki: &str) -> usize {
        let texts: Vec<&str> = sections
            .iter()
            .map(|&s| self.book.sections[s].text.as_str())
            .collect();
        sections[best_match(&texts, wiki, &self.vectorizer).expect("non-empty")]
    }

    /// Reduces a candidate set to at most one section: the best match to
    /// the wiki page within each chapter, then the best across chapters.
    /// Without a page, a multi-section set falls back to its shallowest,
    /// earliest section and reports a warning.
    pub fn disambiguate(&self, cands: &CandidateSet, wiki: Option<&str>) -> Disambiguated {
        let mut sections = cands.sections.clone();
        sections.sort_unstable();
        sections.dedup();
        if sections.len() <= 1 {
            return Disambiguated {
                set: CandidateSet {
                    concept: cands.concept,
                    sections,
                },
                warning: None,
            };
        }
        let Some(wiki) = wiki else {
            let pick = *sections
                .iter()
                .min_by_key(|&&s| (self.book.sections[s].number.depth(), s))
                .expect("non-empty");
            return Disambiguated {
                set: CandidateSet {
                    concept: cands.concept,
                    sections: vec![pick],
                },
                warning: Some(format!(
                    "{} title matches but no Wikipedia page; kept section {}",
                    sections.len(),
                    self.book.sections[pick].number
                )),
            };
        };
        let mut chapters: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for s in sections {
            chapters
                .entry(self.book.sections[s].number.chapter())
                .or_default()
                .push(s);
        }
        let per_chapter: Vec<usize> = chapters
            .values()
            .map(|group| self.best_of(group, wiki))
            .collect();
        Disambiguated {
            set: CandidateSet {
                concept: cands.concept,
                sections: vec![self.best_of(&per_chapter, wiki)],
            },
            warning: None,
        }
    }

    /// Frequency of the concept in every section, in reading order.
    pub fn frequencies(&self, concept_id: &str) -> Vec<usize> {
        let phrase = tokenize(concept_id);
        self.text_tokens
            .iter()
            .map(|t| count_phrase(&phrase, t))
            .collect()
    }

    /// Earliest section where the concept occurs more than once. A single
    /// occurrence counts as a passing reference.
    pub fn first_discussion(&self, concept: usize, concept_id: &str) -> FirstMention {
        let section = self
            .frequencies(concept_id)
            .into_iter()
            .position(|f| f > 1);
        FirstMention { concept, section }
    }

    /// Combines a disambiguated title match with the first discussion.
    ///
    /// | alpha | beta | rho               | sigma        |
    /// |-------|------|-------------------|--------------|
    /// | none  | none | basic concept     | none         |
    /// | a     | none | a                 | a            |
    /// | none  | b    | b                 | none         |
    /// | a     | b    | best of {a, b}    | same as rho  |
    pub fn finalize_placement(
        &self,
        alpha: &CandidateSet,
        beta: FirstMention,
        concept_id: &str,
        wiki: Option<&str>,
    ) -> ConceptPlacement {
        debug_assert!(alpha.sections.len() <= 1, "alpha must be disambiguated");
        let alpha_section = alpha.sections.first().copied();
        let (rho, sigma) = match (alpha_section, beta.section) {
            (None, None) => (None, None),
            (Some(a), None) => (Some(a), Some(a)),
            (None, Some(b)) => (Some(b), None),
            (Some(a), Some(b)) if a == b => (Some(a), Some(a)),
            (Some(a), Some(b)) => {
                let pick = match wiki {
                    Some(w) => {
                        let ordered = if a < b { [a, b] } else { [b, a] };
                        self.best_of(&ordered, w)
                    }
                    None => a,
                };
                (Some(pick), Some(pick))
            }
        };
        let offset = rho.and_then(|r| first_offset(&tokenize(concept_id), &self.text_tokens[r]));
        ConceptPlacement {
            concept: alpha.concept,
            rho,
            sigma,
            basic: rho.is_none(),
            offset,
        }
    }

    /// Runs all four steps for one concept.
    pub fn resolve(
        &self,
        concept: usize,
        concept_id: &str,
        wiki: Option<&str>,
    ) -> (ConceptPlacement, Option<String>) {
        let alpha = self.match_titles(concept, concept_id);
        let Disambiguated { set, warning } = self.disambiguate(&alpha, wiki);
        let beta = self.first_discussion(concept, concept_id);
        let mut warning = warning.map(|w| format!("{concept_id}: {w}"));
        if wiki.is_none() && !set.sections.is_empty() && beta.section.is_some_and(|b| b != set.sections[0]) {
            warning.get_or_insert_with(|| {
                format!("{concept_id}: no Wikipedia page to choose between title match and first discussion; kept title match")
            });
        }
        (self.finalize_placement(&set, beta, concept_id, wiki), warning)
    }
}

/// Ranks concepts into a strict total order: basic concepts first by id,
/// then by position section, first offset within that section (missing
/// offsets last) and id.
pub fn rank_concepts(placements: &[ConceptPlacement], concepts: &ConceptSet) -> Vec<usize> {
    let mut order: Vec<&ConceptPlacement> = placements.iter().collect();
    order.sort_by(|a, b| {
        let key = |p: &ConceptPlacement| (p.rho.is_some(), p.rho, p.offset.unwrap_or(usize::MAX));
        key(a)
            .cmp(&key(b))
            .then_with(|| concepts.id(a.concept).cmp(concepts.id(b.concept)))
    });
    let mut ranks = vec![0; placements.len()];
    for (rank, p) in order.iter().enumerate() {
        ranks[p.concept] = rank;
    }
    ranks
}

/// Placements and ranks for a whole concept set.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub placements: Vec<ConceptPlacement>,
    pub ranks: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Resolves every concept against a normalized book. `pages` holds the
/// normalized Wikipedia text per concept index.
pub fn resolve_all(
    book: &TextbookCorpus,
    concepts: &ConceptSet,
    pages: &[Option<String>],
) -> Resolution {
    let resolver = Resolver::new(book);
    let mut placements = Vec::with_capacity(concepts.len());
    let mut warnings = Vec::new();
    for (i, concept) in concepts.iter().enumerate() {
        let wiki = pages.get(i).and_then(|p| p.as_deref());
        let (placement, warning) = resolver.resolve(i, &concept.id, wiki);
        if let Some(w) = warning {
            log::warn!("{w}");
            warnings.push(w);
        }
        placements.push(placement);
    }
    let ranks = rank_concepts(&placements, concepts);
    Resolution {
        placements,
        ranks,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TocSection;

    fn book(sections: &[(&str, &str, &str)]) -> TextbookCorpus {
        TextbookCorpus::new(
            "t",
            sections
                .iter()
                .map(|(n, title, text)| TocSection {
                    number: n.parse().unwrap(),
                    title: title.to_string(),
                    text: text.to_string(),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn title_matching_branches() {
        let b = book(&[
            ("1", "velocity", ""),
            ("2", "velocity and acceleration", ""),
            ("3", "architecture", ""),
            ("4", "angular", ""),
        ]);
        let r = Resolver::new(&b);
        assert_eq!(r.match_titles(0, "velocity").sections, [0, 1]);
        assert!(r.match_titles(0, "arc").sections.is_empty());
        assert!(r.match_titles(0, "motion").sections.is_empty());
        // title contained in concept
        assert_eq!(r.match_titles(0, "angular velocity").sections, [0, 3]);
    }

    #[test]
    fn first_discussion_scan() {
        let b = book(&[
            ("1", "", "nothing here"),
            ("1.1", "", "force once"),
            ("2", "", "force force force"),
            ("2.1", "", "force and force"),
        ]);
        let r = Resolver::new(&b);
        assert_eq!(r.frequencies("force"), [0, 1, 3, 2]);
        assert_eq!(r.first_discussion(0, "force").section, Some(2));
        assert_eq!(r.first_discussion(0, "mass").section, None);
        let once = book(&[("1", "", "force"), ("2", "", "a force b")]);
        assert_eq!(Resolver::new(&once).first_discussion(0, "force").section, None);
    }

    #[test]
    fn finalize_cases() {
        let b = book(&[
            ("2.1", "speed", "speed measures how fast an object moves speed"),
            ("4.2", "other", "speed appears here twice speed in a worked example about trains"),
        ]);
        let r = Resolver::new(&b);
        let alpha = CandidateSet { concept: 0, sections: vec![0] };
        let none = CandidateSet { concept: 0, sections: vec![] };
        let p = r.finalize_placement(&alpha, FirstMention { concept: 0, section: None }, "speed", None);
        assert_eq!((p.rho, p.sigma, p.basic), (Some(0), Some(0), false));
        let p = r.finalize_placement(&none, FirstMention { concept: 0, section: Some(1) }, "speed", None);
        assert_eq!((p.rho, p.sigma, p.basic), (Some(1), None, false));
        let p = r.finalize_placement(&none, FirstMention { concept: 0, section: None }, "speed", None);
        assert!(p.basic && p.rho.is_none() && p.sigma.is_none());
        let wiki = "speed measures how fast an object moves";
        let p = r.finalize_placement(&alpha, FirstMention { concept: 0, section: Some(1) }, "speed", Some(wiki));
        assert_eq!((p.rho, p.sigma), (Some(0), Some(0)));
        assert_eq!(p.offset, Some(0));
    }

    #[test]
    fn disambiguation_without_page_falls_back() {
        let b = book(&[("3", "force", ""), ("3.1", "force", ""), ("4", "force", "")]);
        let r = Resolver::new(&b);
        let d = r.disambiguate(&CandidateSet { concept: 0, sections: vec![1, 2, 0] }, None);
        assert_eq!(d.set.sections, [0]);
        assert!(d.warning.is_some());
        let d = r.disambiguate(&CandidateSet { concept: 0, sections: vec![] }, None);
        assert!(d.set.sections.is_empty() && d.warning.is_none());
    }

    #[test]
    fn ranks_basic_first_then_sections_then_offsets() {
        let concepts = ConceptSet::new(["a", "b", "c", "d", "e"]).unwrap();
        let place = |concept, rho: Option<usize>, offset| ConceptPlacement {
            concept,
            rho,
            sigma: rho,
            basic: rho.is_none(),
            offset,
        };
        let placements = vec![
            place(0, Some(1), Some(0)),
            place(1, Some(3), Some(0)),
            place(2, Some(2), Some(17)),
            place(3, None, None),
            place(4, Some(2), Some(4)),
        ];
        assert_eq!(rank_concepts(&placements, &concepts), [1, 4, 3, 0, 2]);
    }
}
