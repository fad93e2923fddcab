//! The bundled poset corpus.

use serde::Deserialize;

use crate::extensions::count_extensions;
use crate::poset::{Poset, PosetSpec};

/// Bundled corpus, embedded at compile time.
pub const CORPUS_JSON: &str = include_str!("../corpus/corpus.json");

/// Posets with more extensions than this only take part in counting checks;
/// matrices, monoids and spectra are skipped for them.
pub const FULL_PIPELINE_LIMIT: usize = 200;

#[derive(Deserialize)]
struct RawEntry {
    name: String,
    #[serde(flatten)]
    spec: PosetSpec,
    #[serde(default)]
    note: String,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub note: String,
    pub poset: Poset,
    pub extension_count: usize,
}

impl CorpusEntry {
    pub fn is_full(&self) -> bool {
        self.extension_count <= FULL_PIPELINE_LIMIT
    }
}

/// Parse a corpus file: a JSON list of `{"name", "n", "covers", "note"}`.
pub fn parse(text: &str) -> Result<Vec<CorpusEntry>, String> {
    let raw: Vec<RawEntry> = serde_json::from_str(text).map_err(|e| format!("corpus: {e}"))?;
    raw.into_iter()
        .map(|r| {
            let poset = Poset::from_spec(&r.spec)
                .and_then(|p| p.require_natural().map(|_| p))
                .map_err(|e| format!("corpus entry {}: {e}", r.name))?;
            let extension_count = count_extensions(&poset);
            Ok(CorpusEntry {
                name: r.name,
                note: r.note,
                poset,
                extension_count,
            })
        })
        .collect()
}

pub fn bundled() -> Vec<CorpusEntry> {
    parse(CORPUS_JSON).expect("bundled corpus is valid")
}

pub fn get(name: &str) -> Option<CorpusEntry> {
    bundled().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_corpus_parses() {
        let c = bundled();
        assert_eq!(c[0].name, "P0");
        assert_eq!(c[0].extension_count, 5);
        let big = get("chains-3-4-2-5").unwrap();
        assert!(!big.is_full());
        assert!(c.iter().all(|e| e.poset.is_naturally_labeled()));
    }
}
