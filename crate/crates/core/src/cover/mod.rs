//! Coset enumeration, fundamental groups of triangle complexes, homology
//! certificates and finite covers.
//!
//! Words are strings of generator names; the upper-cased name denotes the
//! inverse. Names need not be single letters: words are tokenized by longest
//! match, and whitespace or `.` may separate tokens.

mod complex;
mod enumerate;

pub use complex::{
    build_cover, homology_rank, is_triangulable, pi1_presentation, Certificate, Cover, TriangleComplex,
    Triangulability, TriangulabilityReport,
};
pub use enumerate::{todd_coxeter, CosetTable, EnumerationOutcome, EnumerationStatus, DEFAULT_COSET_LIMIT};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("cannot parse {word:?}: {reason}")]
    Word { word: String, reason: String },
    #[error("bad argument: {0}")]
    Argument(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("malformed complex: {0}")]
    Complex(String),
    #[error("coset enumeration overflowed at {0} cosets")]
    Overflow(usize),
    #[error("malformed input: {0}")]
    Parse(String),
}

/// A finitely presented group with a subgroup given by generating words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    #[serde(default, rename = "subgroup")]
    pub subgroup_words: Vec<String>,
}

/// Letter `2g` is generator `g`, letter `2g + 1` its inverse.
pub type Word = Vec<usize>;

pub fn inverse_letter(l: usize) -> usize {
    l ^ 1
}

impl Presentation {
    pub fn new(generators: &[&str], relators: &[&str], subgroup: &[&str]) -> Result<Self, CoverError> {
        let p = Presentation {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            relators: relators.iter().map(|s| s.to_string()).collect(),
            subgroup_words: subgroup.iter().map(|s| s.to_string()).collect(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn from_json(text: &str) -> Result<Self, CoverError> {
        let p: Presentation = serde_json::from_str(text).map_err(|e| CoverError::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("presentation serializes")
    }

    fn validate(&self) -> Result<(), CoverError> {
        let mut names: Vec<String> = Vec::new();
        for g in &self.generators {
            if g.is_empty() || g.chars().any(|c| c.is_whitespace() || c == '.') {
                return Err(CoverError::Argument(format!("bad generator name {g:?}")));
            }
            if g.to_uppercase() == *g {
                return Err(CoverError::Argument(format!(
                    "generator {g:?} has no lower-case letter to invert"
                )));
            }
            names.push(g.clone());
            names.push(g.to_uppercase());
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(CoverError::Argument("generator names collide".into()));
        }
        self.relator_words()?;
        self.subgroup_letters()?;
        Ok(())
    }

    pub fn parse_word(&self, word: &str) -> Result<Word, CoverError> {
        let tokens: Vec<(String, usize)> = self
            .generators
            .iter()
            .enumerate()
            .flat_map(|(g, name)| [(name.clone(), 2 * g), (name.to_uppercase(), 2 * g + 1)])
            .collect();
        let mut out = Vec::new();
        for chunk in word.split(|c: char| c.is_whitespace() || c == '.') {
            let mut rest = chunk;
            while !rest.is_empty() {
                let best = tokens
                    .iter()
                    .filter(|(t, _)| rest.starts_with(t.as_str()))
                    .max_by_key(|(t, _)| t.len());
                let Some((t, l)) = best else {
                    return Err(CoverError::Word {
                        word: word.to_string(),
                        reason: format!("no generator matches at {rest:?}"),
                    });
                };
                out.push(*l);
                rest = &rest[t.len()..];
            }
        }
        Ok(out)
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        word.iter()
            .map(|&l| {
                let name = &self.generators[l / 2];
                if l % 2 == 0 {
                    name.clone()
                } else {
                    name.to_uppercase()
                }
            })
            .collect()
    }

    pub fn relator_words(&self) -> Result<Vec<Word>, CoverError> {
        self.relators.iter().map(|r| self.parse_word(r)).collect()
    }

    pub fn subgroup_letters(&self) -> Result<Vec<Word>, CoverError> {
        self.subgroup_words.iter().map(|r| self.parse_word(r)).collect()
    }
}
