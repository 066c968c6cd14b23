//! Persisted graph snapshot.
//!
//! Expensive analyses compose without re-parsing the corpus by running off a
//! snapshot written at ingest time. The format is a structured text document:
//! a header with corpus counts, the sorted node list with narrator metadata,
//! and the sorted `source,target,weight` edge list. Writing is bit-exact for
//! a given graph.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::NarratorGraph;
use crate::model::NarratorTable;

const MAGIC: &str = "isnad-snapshot 1";

/// A narrator graph together with the metadata and corpus counts the
/// analyses need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub graph: NarratorGraph,
    /// Metadata for exactly the graph's nodes.
    pub table: NarratorTable,
    pub hadith_count: usize,
    pub multi_chain_count: usize,
}

impl Snapshot {
    /// Bundles a graph with its metadata; every node must have a table entry.
    pub fn new(
        graph: NarratorGraph,
        table: &NarratorTable,
        hadith_count: usize,
        multi_chain_count: usize,
    ) -> Result<Self> {
        let table = table.restrict(graph.node_ids().iter().map(|s| s.as_str()))?;
        Ok(Snapshot {
            graph,
            table,
            hadith_count,
            multi_chain_count,
        })
    }
}

/// Renders a snapshot to its canonical text form.
pub fn write_snapshot(snapshot: &Snapshot) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    out.push_str(&format!("hadith_count={}\n", snapshot.hadith_count));
    out.push_str(&format!(
        "multi_chain_count={}\n",
        snapshot.multi_chain_count
    ));

    out.push_str("[nodes]\n");
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["id", "name", "generation", "city"])
        .expect("csv write to memory cannot fail");
    for id in snapshot.graph.node_ids() {
        let n = snapshot
            .table
            .get(id)
            .expect("snapshot table covers all nodes");
        writer
            .write_record([
                n.id.as_str(),
                n.name.as_str(),
                &n.generation.to_string(),
                n.city.as_str(),
            ])
            .expect("csv write to memory cannot fail");
    }
    out.push_str(&csv_into_string(writer));

    out.push_str("[edges]\n");
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["source", "target", "weight"])
        .expect("csv write to memory cannot fail");
    for (src, dst, weight) in snapshot.graph.edges() {
        writer
            .write_record([src, dst, &weight.to_string()])
            .expect("csv write to memory cannot fail");
    }
    out.push_str(&csv_into_string(writer));
    out
}

fn csv_into_string(writer: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(writer.into_inner().expect("csv flush cannot fail"))
        .expect("csv output is utf-8")
}

/// Parses a snapshot document.
pub fn read_snapshot(text: &str) -> Result<Snapshot> {
    let source = "<snapshot>";
    let mut lines = text.lines().enumerate();

    let (_, magic) = lines
        .next()
        .ok_or_else(|| Error::parse(source, 1, "empty snapshot"))?;
    if magic != MAGIC {
        return Err(Error::parse(
            source,
            1,
            format!("expected {MAGIC:?}, got {magic:?}"),
        ));
    }
    let hadith_count = parse_header_count(&mut lines, "hadith_count", source)?;
    let multi_chain_count = parse_header_count(&mut lines, "multi_chain_count", source)?;

    let (i, section) = lines
        .next()
        .ok_or_else(|| Error::parse(source, 4, "missing [nodes] section"))?;
    if section != "[nodes]" {
        return Err(Error::parse(source, (i + 1) as u64, "expected [nodes]"));
    }

    let mut node_lines = String::new();
    let mut edge_lines = String::new();
    let mut in_edges = false;
    for (_, line) in lines {
        if line == "[edges]" {
            in_edges = true;
            continue;
        }
        let target = if in_edges {
            &mut edge_lines
        } else {
            &mut node_lines
        };
        target.push_str(line);
        target.push('\n');
    }
    if !in_edges {
        return Err(Error::parse(source, 0, "missing [edges] section"));
    }

    let table = crate::ingest::parse_narrators_str(&node_lines, source)?;

    let mut edges = Vec::new();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(edge_lines.as_bytes());
    {
        let headers = reader
            .headers()
            .map_err(|e| Error::parse(source, 0, e.to_string()))?;
        let got: Vec<&str> = headers.iter().collect();
        if got != ["source", "target", "weight"] {
            return Err(Error::parse(source, 0, format!("bad edge header {got:?}")));
        }
    }
    for row in reader.records() {
        let row = row.map_err(|e| Error::parse(source, 0, e.to_string()))?;
        if row.len() != 3 {
            return Err(Error::parse(source, 0, "edge row needs 3 fields"));
        }
        let weight: u64 = row[2]
            .parse()
            .map_err(|_| Error::parse(source, 0, format!("bad weight {:?}", &row[2])))?;
        edges.push((row[0].to_string(), row[1].to_string(), weight));
    }

    let node_ids: Vec<String> = table.iter().map(|n| n.id.clone()).collect();
    let graph = NarratorGraph::from_parts(node_ids, edges)?;
    // Edges may not introduce nodes absent from the metadata section.
    for id in graph.node_ids() {
        if table.get(id).is_none() {
            return Err(Error::Validation(format!(
                "edge references node {id:?} missing from [nodes]"
            )));
        }
    }
    Ok(Snapshot {
        graph,
        table,
        hadith_count,
        multi_chain_count,
    })
}

fn parse_header_count<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
    source: &str,
) -> Result<usize> {
    let (i, line) = lines
        .next()
        .ok_or_else(|| Error::parse(source, 0, format!("missing {key} header")))?;
    let line_no = (i + 1) as u64;
    let value = line
        .strip_prefix(&format!("{key}="))
        .ok_or_else(|| Error::parse(source, line_no, format!("expected {key}=N")))?;
    value
        .parse()
        .map_err(|_| Error::parse(source, line_no, format!("bad {key} value {value:?}")))
}

/// Rebuilds [`SummaryStats`](crate::graph::SummaryStats) from a snapshot:
/// corpus counts come from the header, per-era counts and the cycle
/// diagnosis from the graph and its metadata.
pub fn summary_from_snapshot(snapshot: &Snapshot) -> Result<crate::graph::SummaryStats> {
    let mut per_era = std::collections::BTreeMap::new();
    for id in snapshot.graph.node_ids() {
        let narrator = snapshot
            .table
            .get(id)
            .ok_or_else(|| Error::UnknownId(id.clone()))?;
        *per_era.entry(narrator.era).or_insert(0) += 1;
    }
    Ok(crate::graph::SummaryStats {
        hadith_count: snapshot.hadith_count,
        narrator_count: snapshot.graph.node_count(),
        multi_chain_count: snapshot.multi_chain_count,
        edge_count: snapshot.graph.edge_count(),
        per_era_narrator_counts: per_era,
        cycle_edges: crate::graph::cycle_edges(&snapshot.graph),
    })
}

/// Writes a snapshot file.
pub fn save_snapshot(snapshot: &Snapshot, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, write_snapshot(snapshot)).map_err(|e| Error::io(path, e))
}

/// Loads a snapshot file.
pub fn load_snapshot(path: impl AsRef<Path>) -> Result<Snapshot> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_snapshot(&text)
}
