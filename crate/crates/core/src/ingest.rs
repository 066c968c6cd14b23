//! Parsing and validation of the offline corpus files.
//!
//! Two inputs feed the pipeline: a narrator CSV (`id,name,generation,city`)
//! and a hadith file with one JSON record per line carrying `collection`,
//! `book`, `number` and `chains` (an array of arrays of narrator ids).
//!
//! Sanad text lists the compiler-side narrator first, so hadith files default
//! to [`ChainOrder::CompilerFirst`]; every chain is normalized to source-first
//! storage before anything downstream sees it.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Chain, HadithRecord, Narrator, NarratorTable, RecordKey};

/// Direction in which chains are listed in a hadith file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChainOrder {
    /// Earliest transmitter first; stored as-is.
    SourceFirst,
    /// Compiler-side narrator first (sanad text convention); chains are
    /// reversed during parsing.
    #[default]
    CompilerFirst,
}

impl fmt::Display for ChainOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainOrder::SourceFirst => write!(f, "source-first"),
            ChainOrder::CompilerFirst => write!(f, "compiler-first"),
        }
    }
}

/// Corpus-level defects found before graph construction.
///
/// Defects are collected, not thrown: a partially defective corpus stays
/// analyzable and the report preserves what was dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// (record key, id) pairs where a chain references an id missing from
    /// the narrator table.
    pub unknown_narrator_refs: Vec<(RecordKey, String)>,
    /// Keys of records whose (collection, book, number) duplicates an
    /// earlier record; one entry per rejected occurrence.
    pub duplicate_records: Vec<RecordKey>,
    /// (record key, id) pairs where an id occurs twice within one chain.
    pub intra_chain_repeats: Vec<(RecordKey, String)>,
    /// Number of records inspected.
    pub record_count: usize,
    /// Number of records with two or more chains.
    pub multi_chain_count: usize,
}

impl ValidationReport {
    /// True when the corpus has no defects and is accepted for graph
    /// building as-is.
    pub fn is_clean(&self) -> bool {
        self.unknown_narrator_refs.is_empty()
            && self.duplicate_records.is_empty()
            && self.intra_chain_repeats.is_empty()
    }

    pub fn defect_count(&self) -> usize {
        self.unknown_narrator_refs.len()
            + self.duplicate_records.len()
            + self.intra_chain_repeats.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "records={} multi_chain={} defects={}",
            self.record_count,
            self.multi_chain_count,
            self.defect_count()
        )?;
        for (key, id) in &self.unknown_narrator_refs {
            writeln!(f, "unknown narrator id {id:?} referenced by {key}")?;
        }
        for key in &self.duplicate_records {
            writeln!(f, "duplicate record key {key}")?;
        }
        for (key, id) in &self.intra_chain_repeats {
            writeln!(f, "id {id:?} repeated within a chain of {key}")?;
        }
        Ok(())
    }
}

/// Reads the narrator CSV at `path`. Header must be `id,name,generation,city`.
pub fn parse_narrators(path: impl AsRef<Path>) -> Result<NarratorTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_narrators_str(&text, &path.display().to_string())
}

/// Same as [`parse_narrators`] but over in-memory text; `source` labels
/// error messages.
pub fn parse_narrators_str(text: &str, source: &str) -> Result<NarratorTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    {
        let headers = reader
            .headers()
            .map_err(|e| Error::parse(source, 1, e.to_string()))?;
        let expected = ["id", "name", "generation", "city"];
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(Error::parse(
                source,
                1,
                format!("expected header {expected:?}, got {got:?}"),
            ));
        }
    }

    let mut table = NarratorTable::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            Error::parse(source, line, e.to_string())
        })?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != 4 {
            return Err(Error::parse(
                source,
                line,
                format!("expected 4 fields, got {}", row.len()),
            ));
        }
        let id = &row[0];
        let name = &row[1];
        let generation: i64 = row[2]
            .parse()
            .map_err(|_| Error::parse(source, line, format!("bad generation {:?}", &row[2])))?;
        if !(0..=i64::from(crate::model::MAX_GENERATION)).contains(&generation) {
            return Err(Error::Domain(format!(
                "generation {generation} out of range 0..=12 for narrator {id:?} at {source}:{line}"
            )));
        }
        let narrator = Narrator::new(id, name, generation as u8, &row[3])?;
        table.insert(narrator)?;
    }
    Ok(table)
}

#[derive(Debug, Serialize, Deserialize)]
struct RecordLine {
    collection: String,
    book: String,
    number: String,
    chains: Vec<Chain>,
}

/// Reads a hadith file (one JSON record per line) and normalizes every
/// chain to source-first order.
pub fn parse_hadith_records(
    path: impl AsRef<Path>,
    order: ChainOrder,
) -> Result<Vec<HadithRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_hadith_records_str(&text, &path.display().to_string(), order)
}

/// Same as [`parse_hadith_records`] but over in-memory text.
pub fn parse_hadith_records_str(
    text: &str,
    source: &str,
    order: ChainOrder,
) -> Result<Vec<HadithRecord>> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = (i + 1) as u64;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RecordLine =
            serde_json::from_str(line).map_err(|e| Error::parse(source, line_no, e.to_string()))?;
        let key = RecordKey::new(raw.collection, raw.book, raw.number);
        if raw.chains.is_empty() {
            return Err(Error::Validation(format!(
                "record {key} at {source}:{line_no} has no chains"
            )));
        }
        let mut chains = raw.chains;
        for chain in &mut chains {
            if chain.is_empty() {
                return Err(Error::Validation(format!(
                    "record {key} at {source}:{line_no} has an empty chain"
                )));
            }
            if order == ChainOrder::CompilerFirst {
                chain.narrators.reverse();
            }
        }
        records.push(HadithRecord::new(key, chains));
    }
    Ok(records)
}

/// Serializes records back to the line format, chains source-first.
/// `parse_hadith_records_str(write_hadith_records(r), _, SourceFirst)` is
/// the identity.
pub fn write_hadith_records(records: &[HadithRecord]) -> String {
    let mut out = String::new();
    for record in records {
        let line = RecordLine {
            collection: record.key.collection.clone(),
            book: record.key.book.clone(),
            number: record.key.number.clone(),
            chains: record.chains.clone(),
        };
        out.push_str(&serde_json::to_string(&line).expect("record serialization cannot fail"));
        out.push('\n');
    }
    out
}

/// Inspects a corpus against a narrator table and reports every defect.
pub fn validate_corpus(records: &[HadithRecord], table: &NarratorTable) -> ValidationReport {
    let mut report = ValidationReport {
        record_count: records.len(),
        ..ValidationReport::default()
    };
    let mut seen_keys = std::collections::BTreeSet::new();
    for record in records {
        if record.is_multi_chain() {
            report.multi_chain_count += 1;
        }
        if !seen_keys.insert(record.key.clone()) {
            report.duplicate_records.push(record.key.clone());
        }
        for chain in &record.chains {
            for id in chain.repeated_ids() {
                report.intra_chain_repeats.push((record.key.clone(), id));
            }
            let mut reported = std::collections::BTreeSet::new();
            for id in &chain.narrators {
                if !table.contains(id) && reported.insert(id.as_str()) {
                    report
                        .unknown_narrator_refs
                        .push((record.key.clone(), id.clone()));
                }
            }
        }
    }
    report
}

/// Splits a corpus into records accepted for graph building and a report of
/// everything that was dropped: unknown-id references, duplicate keys
/// (first occurrence wins), and chains with repeated ids.
pub fn quarantine(
    records: Vec<HadithRecord>,
    table: &NarratorTable,
) -> (Vec<HadithRecord>, ValidationReport) {
    let report = validate_corpus(&records, table);
    let mut seen_keys = std::collections::BTreeSet::new();
    let included = records
        .into_iter()
        .filter(|record| {
            if !seen_keys.insert(record.key.clone()) {
                return false;
            }
            record.chains.iter().all(|chain| {
                chain.repeated_ids().is_empty()
                    && chain.narrators.iter().all(|id| table.contains(id))
            })
        })
        .collect();
    (included, report)
}
