//! Pure rendering of analysis results to text.
//!
//! Every function here is a deterministic function of its inputs; the
//! `report` subcommand reuses these exact renderers so its sections are
//! byte-identical to the standalone subcommand outputs.

use isnad_core::centrality::{top_k, ScoreTable};
use isnad_core::community::Partition;
use isnad_core::era::EraCityTable;
use isnad_core::graph::SummaryStats;
use isnad_core::layout::NodePositions;
use isnad_core::snapshot::Snapshot;
use isnad_core::topology::{DegreeHistogram, PowerLawFit};

/// Tabular output separator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Tsv,
    Markdown,
}

impl TableFormat {
    fn separator(self) -> &'static str {
        match self {
            TableFormat::Csv => ",",
            TableFormat::Tsv => "\t",
            TableFormat::Markdown => " | ",
        }
    }
}

fn field(value: &str, format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            if value.contains([',', '"', '\n']) {
                format!("\"{}\"", value.replace('"', "\"\""))
            } else {
                value.to_string()
            }
        }
        TableFormat::Tsv => value.replace(['\t', '\n'], " "),
        TableFormat::Markdown => value.replace('|', "\\|"),
    }
}

fn row(fields: &[&str], format: TableFormat) -> String {
    let cells: Vec<String> = fields.iter().map(|f| field(f, format)).collect();
    match format {
        TableFormat::Markdown => format!("| {} |\n", cells.join(" | ")),
        _ => format!("{}\n", cells.join(format.separator())),
    }
}

fn markdown_divider(columns: usize) -> String {
    format!("|{}\n", " --- |".repeat(columns))
}

/// `metric,value` lines for the corpus summary, including per-era counts and
/// the cycle diagnosis.
pub fn summary(stats: &SummaryStats) -> String {
    let mut out = String::from("metric,value\n");
    out.push_str(&format!("hadith_count,{}\n", stats.hadith_count));
    out.push_str(&format!("narrator_count,{}\n", stats.narrator_count));
    out.push_str(&format!("multi_chain_count,{}\n", stats.multi_chain_count));
    out.push_str(&format!("edge_count,{}\n", stats.edge_count));
    for era in 1..=4u8 {
        let count = stats
            .per_era_narrator_counts
            .get(&era)
            .copied()
            .unwrap_or(0);
        out.push_str(&format!("era{era}_narrators,{count}\n"));
    }
    out.push_str(&format!("cycle_edges,{}\n", stats.cycle_edges.len()));
    out.push_str(&format!("acyclic,{}\n", stats.is_acyclic()));
    out
}

/// `rank,id,name,score` rows for the top `k` entries of a score table.
pub fn scores(snapshot: &Snapshot, table: &ScoreTable, k: usize, format: TableFormat) -> String {
    let mut out = row(&["rank", "id", "name", "score"], format);
    if format == TableFormat::Markdown {
        out.push_str(&markdown_divider(4));
    }
    for (rank, (id, score)) in top_k(table, k).into_iter().enumerate() {
        let name = snapshot
            .table
            .get(&id)
            .map(|n| n.name.as_str())
            .unwrap_or("");
        out.push_str(&row(
            &[&(rank + 1).to_string(), &id, name, &score.to_string()],
            format,
        ));
    }
    out
}

/// `id,name,community` rows followed by the partition summary line.
pub fn communities(snapshot: &Snapshot, partition: &Partition) -> String {
    let mut out = String::from("id,name,community\n");
    for (id, &community) in &partition.assignment {
        let name = snapshot
            .table
            .get(id)
            .map(|n| n.name.as_str())
            .unwrap_or("");
        out.push_str(&row(&[id, name, &community.to_string()], TableFormat::Csv));
    }
    out.push_str(&community_summary(partition));
    out
}

/// The one-line partition summary shared by `communities` and `report`.
pub fn community_summary(partition: &Partition) -> String {
    format!(
        "# community_count={} modularity={:.6}\n",
        partition.community_count, partition.modularity
    )
}

/// `city,era1,era2,era3,era4,total` table.
pub fn era_table(table: &EraCityTable, format: TableFormat) -> String {
    let mut out = row(&["city", "era1", "era2", "era3", "era4", "total"], format);
    if format == TableFormat::Markdown {
        out.push_str(&markdown_divider(6));
    }
    for r in &table.rows {
        out.push_str(&row(
            &[
                &r.city,
                &r.counts[0].to_string(),
                &r.counts[1].to_string(),
                &r.counts[2].to_string(),
                &r.counts[3].to_string(),
                &r.total.to_string(),
            ],
            format,
        ));
    }
    out
}

/// `k,count` buckets; with `loglog` two extra base-10 log columns (empty for
/// k = 0, which has no finite log).
pub fn degree_dist(hist: &DegreeHistogram, loglog: bool) -> String {
    let mut out = if loglog {
        String::from("k,count,log10k,log10count\n")
    } else {
        String::from("k,count\n")
    };
    for (&k, &count) in &hist.buckets {
        if loglog {
            let log_k = if k > 0 {
                format!("{}", (k as f64).log10())
            } else {
                String::new()
            };
            out.push_str(&format!("{k},{count},{log_k},{}\n", (count as f64).log10()));
        } else {
            out.push_str(&format!("{k},{count}\n"));
        }
    }
    out
}

/// Clustering coefficient and average path length as `metric,value`.
pub fn smallworld(clustering: f64, avg_path_length: f64) -> String {
    format!("metric,value\nclustering,{clustering}\navg_path_length,{avg_path_length}\n")
}

/// Power-law fit as `metric,value`.
pub fn powerlaw(fit: &PowerLawFit, direction: &str) -> String {
    format!(
        "metric,value\ndirection,{direction}\nalpha,{}\nxmin,{}\nn_tail,{}\n",
        fit.alpha, fit.xmin, fit.n_tail
    )
}

/// `id,x,y` coordinate rows.
pub fn positions(positions: &NodePositions) -> String {
    let mut out = String::from("id,x,y\n");
    for (id, (x, y)) in positions.iter() {
        out.push_str(&row(
            &[id, &x.to_string(), &y.to_string()],
            TableFormat::Csv,
        ));
    }
    out
}

/// A section header inside the combined report.
pub fn section(title: &str) -> String {
    format!("== {title} ==\n")
}
