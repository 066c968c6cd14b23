//! Graph exporters: GEXF 1.2 for visualization tools, DOT, and a plain
//! `source,target,weight` edge list.
//!
//! Every writer emits a deterministic byte stream for a given graph and
//! annotation set: nodes and edges appear in sorted order and no timestamps
//! are written.

use std::fmt::Write as _;

use crate::centrality::ScoreTable;
use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::NarratorGraph;
use crate::layout::NodePositions;
use crate::model::NarratorTable;

/// Palette for community coloring; cycled by community id.
const PALETTE: [(u8, u8, u8); 12] = [
    (31, 119, 180),
    (255, 127, 14),
    (44, 160, 44),
    (214, 39, 40),
    (148, 103, 189),
    (140, 86, 75),
    (227, 119, 194),
    (127, 127, 127),
    (188, 189, 34),
    (23, 190, 207),
    (174, 199, 232),
    (255, 187, 120),
];

fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Writes the graph as GEXF 1.2 with directed weighted edges and node
/// attributes for era, generation, city, every score table, and community.
/// Positions become `viz:position`; community drives `viz:color`; the first
/// score table drives `viz:size` (scaled linearly into 1..=50, raw scores
/// stay in the attributes).
///
/// Every annotation must cover every node; partial coverage is a validation
/// error.
pub fn export_gexf(
    graph: &NarratorGraph,
    table: &NarratorTable,
    scores: &[ScoreTable],
    partition: Option<&Partition>,
    positions: Option<&NodePositions>,
) -> Result<String> {
    for id in graph.node_ids() {
        if table.get(id).is_none() {
            return Err(Error::Validation(format!(
                "narrator table missing node {id:?}"
            )));
        }
        for score_table in scores {
            if score_table.get(id).is_none() {
                return Err(Error::Validation(format!(
                    "score table {:?} missing node {id:?}",
                    score_table.measure_name
                )));
            }
        }
        if let Some(p) = partition {
            if p.community_of(id).is_none() {
                return Err(Error::Validation(format!("partition missing node {id:?}")));
            }
        }
        if let Some(pos) = positions {
            if !pos.contains(id) {
                return Err(Error::Validation(format!("positions missing node {id:?}")));
            }
        }
    }

    // Size scale from the first score table.
    let size_range = scores.first().map(|t| {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for (_, s) in t.iter() {
            min = min.min(s);
            max = max.max(s);
        }
        (min, max)
    });

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<gexf xmlns=\"http://www.gexf.net/1.2draft\" xmlns:viz=\"http://www.gexf.net/1.2draft/viz\" version=\"1.2\">\n");
    out.push_str("  <graph defaultedgetype=\"directed\">\n");

    out.push_str("    <attributes class=\"node\">\n");
    let mut attr_id = 0usize;
    let mut attr = |out: &mut String, title: &str, kind: &str| -> usize {
        let id = attr_id;
        writeln!(
            out,
            "      <attribute id=\"{id}\" title=\"{}\" type=\"{kind}\"/>",
            xml_escape(title)
        )
        .expect("writing to string cannot fail");
        attr_id += 1;
        id
    };
    let era_attr = attr(&mut out, "era", "integer");
    let generation_attr = attr(&mut out, "generation", "integer");
    let city_attr = attr(&mut out, "city", "string");
    let score_attrs: Vec<usize> = scores
        .iter()
        .map(|t| attr(&mut out, &t.measure_name, "double"))
        .collect();
    let community_attr = partition.map(|_| attr(&mut out, "community", "integer"));
    out.push_str("    </attributes>\n");

    out.push_str("    <nodes>\n");
    for id in graph.node_ids() {
        let narrator = table.get(id).expect("coverage checked");
        writeln!(
            out,
            "      <node id=\"{}\" label=\"{}\">",
            xml_escape(id),
            xml_escape(&narrator.name)
        )
        .expect("writing to string cannot fail");
        out.push_str("        <attvalues>\n");
        writeln!(
            out,
            "          <attvalue for=\"{era_attr}\" value=\"{}\"/>",
            narrator.era
        )
        .expect("writing to string cannot fail");
        writeln!(
            out,
            "          <attvalue for=\"{generation_attr}\" value=\"{}\"/>",
            narrator.generation
        )
        .expect("writing to string cannot fail");
        writeln!(
            out,
            "          <attvalue for=\"{city_attr}\" value=\"{}\"/>",
            xml_escape(&narrator.city)
        )
        .expect("writing to string cannot fail");
        for (score_table, &attr_index) in scores.iter().zip(&score_attrs) {
            writeln!(
                out,
                "          <attvalue for=\"{attr_index}\" value=\"{}\"/>",
                score_table.get(id).expect("coverage checked")
            )
            .expect("writing to string cannot fail");
        }
        if let (Some(p), Some(attr_index)) = (partition, community_attr) {
            writeln!(
                out,
                "          <attvalue for=\"{attr_index}\" value=\"{}\"/>",
                p.community_of(id).expect("coverage checked")
            )
            .expect("writing to string cannot fail");
        }
        out.push_str("        </attvalues>\n");
        if let Some(pos) = positions {
            let (x, y) = pos.get(id).expect("coverage checked");
            writeln!(out, "        <viz:position x=\"{x}\" y=\"{y}\" z=\"0\"/>")
                .expect("writing to string cannot fail");
        }
        if let Some((min, max)) = size_range {
            let raw = scores[0].get(id).expect("coverage checked");
            let size = if max > min {
                1.0 + 49.0 * (raw - min) / (max - min)
            } else {
                10.0
            };
            writeln!(out, "        <viz:size value=\"{size}\"/>")
                .expect("writing to string cannot fail");
        }
        if let Some(p) = partition {
            let community = p.community_of(id).expect("coverage checked");
            let (r, g, b) = PALETTE[community % PALETTE.len()];
            writeln!(out, "        <viz:color r=\"{r}\" g=\"{g}\" b=\"{b}\"/>")
                .expect("writing to string cannot fail");
        }
        out.push_str("      </node>\n");
    }
    out.push_str("    </nodes>\n");

    out.push_str("    <edges>\n");
    for (i, (src, dst, weight)) in graph.edges().enumerate() {
        writeln!(
            out,
            "      <edge id=\"{i}\" source=\"{}\" target=\"{}\" weight=\"{weight}\"/>",
            xml_escape(src),
            xml_escape(dst)
        )
        .expect("writing to string cannot fail");
    }
    out.push_str("    </edges>\n");
    out.push_str("  </graph>\n");
    out.push_str("</gexf>\n");
    Ok(out)
}

fn dot_escape(id: &str) -> String {
    id.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Writes the graph in DOT form with `weight` edge attributes.
pub fn export_dot(graph: &NarratorGraph) -> String {
    let mut out = String::from("digraph narrators {\n");
    for id in graph.node_ids() {
        writeln!(out, "  \"{}\";", dot_escape(id)).expect("writing to string cannot fail");
    }
    for (src, dst, weight) in graph.edges() {
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [weight={weight}];",
            dot_escape(src),
            dot_escape(dst)
        )
        .expect("writing to string cannot fail");
    }
    out.push_str("}\n");
    out
}

/// Writes the sorted `source,target,weight` CSV edge list.
pub fn export_edgelist(graph: &NarratorGraph) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["source", "target", "weight"])
        .expect("csv write to memory cannot fail");
    for (src, dst, weight) in graph.edges() {
        writer
            .write_record([src, dst, &weight.to_string()])
            .expect("csv write to memory cannot fail");
    }
    String::from_utf8(writer.into_inner().expect("csv flush cannot fail"))
        .expect("csv output is utf-8")
}

/// Parses an edge list written by [`export_edgelist`].
pub fn parse_edgelist(text: &str) -> Result<Vec<(String, String, u64)>> {
    let source = "<edgelist>";
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    {
        let headers = reader
            .headers()
            .map_err(|e| Error::parse(source, 1, e.to_string()))?;
        let got: Vec<&str> = headers.iter().collect();
        if got != ["source", "target", "weight"] {
            return Err(Error::parse(source, 1, format!("bad header {got:?}")));
        }
    }
    let mut edges = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::parse(source, 0, e.to_string()))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != 3 {
            return Err(Error::parse(source, line, "expected 3 fields"));
        }
        let weight: u64 = row[2]
            .parse()
            .map_err(|_| Error::parse(source, line, format!("bad weight {:?}", &row[2])))?;
        edges.push((row[0].to_string(), row[1].to_string(), weight));
    }
    Ok(edges)
}
