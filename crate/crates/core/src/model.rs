//! Domain types shared by every stage of the pipeline: narrators, chains,
//! hadith records, and the generation-to-era mapping.
//!
//! All types here are immutable after construction and safe to share across
//! threads.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest generation index a narrator may carry.
pub const MAX_GENERATION: u8 = 12;

/// Maps a narrator generation (0..=12) onto one of the four transmission
/// eras: companions (era 1), then three successive generations of students
/// (eras 2-4).
///
/// Total and monotone non-decreasing over its domain; out-of-range input is
/// a domain error naming the offending value.
pub fn era_of_generation(generation: u8) -> Result<u8> {
    match generation {
        0 => Ok(1),
        1..=6 => Ok(2),
        7..=9 => Ok(3),
        10..=12 => Ok(4),
        g => Err(Error::Domain(format!(
            "generation {g} out of range 0..={MAX_GENERATION}"
        ))),
    }
}

/// One narrator: a node in the transmission graph plus its metadata.
///
/// `era` is always derived from `generation`; use [`Narrator::new`] to keep
/// the pair consistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Narrator {
    /// Stable external identifier, e.g. `"20020"`.
    pub id: String,
    /// Display name.
    pub name: String,
    /// Generation index, 0..=12.
    pub generation: u8,
    /// Primary locality; free text, may be empty when unknown.
    pub city: String,
    /// Era 1..=4, derived from `generation`.
    pub era: u8,
}

impl Narrator {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        generation: u8,
        city: impl Into<String>,
    ) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::Validation("narrator id must be non-empty".into()));
        }
        let era = era_of_generation(generation)?;
        Ok(Narrator {
            id,
            name: name.into(),
            generation,
            city: city.into(),
            era,
        })
    }
}

/// Lookup table of narrators keyed by id.
///
/// Iteration order is ascending by id, which downstream code relies on for
/// reproducible output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NarratorTable {
    entries: BTreeMap<String, Narrator>,
}

impl NarratorTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a narrator; duplicate ids are a validation error.
    pub fn insert(&mut self, narrator: Narrator) -> Result<()> {
        if self.entries.contains_key(&narrator.id) {
            return Err(Error::Validation(format!(
                "duplicate narrator id {:?}",
                narrator.id
            )));
        }
        self.entries.insert(narrator.id.clone(), narrator);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&Narrator> {
        self.entries.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.entries.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Narrators in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = &Narrator> {
        self.entries.values()
    }

    /// A copy of this table restricted to the given ids.
    ///
    /// Ids absent from the table are an error; callers use this to pin the
    /// table persisted next to a graph to exactly the graph's nodes.
    pub fn restrict<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<NarratorTable> {
        let mut out = NarratorTable::new();
        for id in ids {
            let narrator = self
                .get(id)
                .ok_or_else(|| Error::UnknownId(id.to_string()))?;
            out.insert(narrator.clone())?;
        }
        Ok(out)
    }
}

impl FromIterator<Narrator> for Result<NarratorTable> {
    fn from_iter<T: IntoIterator<Item = Narrator>>(iter: T) -> Self {
        let mut table = NarratorTable::new();
        for narrator in iter {
            table.insert(narrator)?;
        }
        Ok(table)
    }
}

/// One chain of transmission, stored source-first: the earliest transmitter
/// (the narrator closest to the origin) comes first, the latest last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chain {
    pub narrators: Vec<String>,
}

impl Chain {
    pub fn new(narrators: Vec<String>) -> Self {
        Chain { narrators }
    }

    pub fn len(&self) -> usize {
        self.narrators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.narrators.is_empty()
    }

    /// Consecutive (teacher, student) pairs along the chain.
    pub fn adjacent_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.narrators
            .windows(2)
            .map(|w| (w[0].as_str(), w[1].as_str()))
    }

    /// Ids repeated within this chain, in first-repeat order. A chain is
    /// meant to be a simple path; repeats are reported by validation.
    pub fn repeated_ids(&self) -> Vec<String> {
        let mut seen = std::collections::BTreeSet::new();
        let mut repeats = Vec::new();
        for id in &self.narrators {
            if !seen.insert(id.as_str()) && !repeats.contains(id) {
                repeats.push(id.clone());
            }
        }
        repeats
    }
}

/// Identity of a hadith record within a corpus.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RecordKey {
    pub collection: String,
    pub book: String,
    pub number: String,
}

impl RecordKey {
    pub fn new(
        collection: impl Into<String>,
        book: impl Into<String>,
        number: impl Into<String>,
    ) -> Self {
        RecordKey {
            collection: collection.into(),
            book: book.into(),
            number: number.into(),
        }
    }
}

impl fmt::Display for RecordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.collection, self.book, self.number)
    }
}

/// One hadith with one or more narrator chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadithRecord {
    pub key: RecordKey,
    pub chains: Vec<Chain>,
}

impl HadithRecord {
    pub fn new(key: RecordKey, chains: Vec<Chain>) -> Self {
        HadithRecord { key, chains }
    }

    /// A record with two or more chains for the same text.
    pub fn is_multi_chain(&self) -> bool {
        self.chains.len() >= 2
    }
}
