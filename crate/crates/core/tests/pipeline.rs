//! End-to-end library pipeline over the worked-example corpus: the
//! single-chain hadith (Book of Revelation no. 1) and the two-chain hadith
//! (Book of Jihad no. 133) whose chains merge on the source side.

use isnad_core::graph::{build_graph, corpus_summary, degree_profile, BuildConfig, PairDedup};
use isnad_core::ingest::{
    parse_hadith_records_str, parse_narrators_str, quarantine, validate_corpus, ChainOrder,
};
use isnad_core::snapshot::{read_snapshot, write_snapshot, Snapshot};

const NARRATORS: &str = include_str!("../../../data/narrators.csv");
const HADITH: &str = include_str!("../../../data/hadith.jsonl");

const UMAR: &str = "10001";
const ANAS: &str = "10003";
const QATADA: &str = "11020";
const HMAM: &str = "20297";
const HISHAM: &str = "20301";
const SNAN: &str = "30002";

#[test]
fn worked_example_corpus_builds_the_expected_graph() {
    let table = parse_narrators_str(NARRATORS, "narrators.csv").unwrap();
    let records =
        parse_hadith_records_str(HADITH, "hadith.jsonl", ChainOrder::CompilerFirst).unwrap();

    let report = validate_corpus(&records, &table);
    assert!(report.is_clean());
    assert_eq!(report.record_count, 2);
    assert_eq!(report.multi_chain_count, 1);

    let (included, _) = quarantine(records, &table);
    let graph = build_graph(&included, &table, &BuildConfig::default()).unwrap();

    // Six narrators in the single chain, five in the merged pair of chains.
    assert_eq!(graph.node_count(), 11);
    assert_eq!(graph.edge_count(), 9);

    // The source-side companion of the single chain.
    let umar = degree_profile(&graph, UMAR).unwrap();
    assert_eq!(umar.indegree, 0);
    assert_eq!(umar.outdegree, 1);

    // Pairs shared by the two chains of the multi-chain record weigh 1.
    assert_eq!(graph.weight(ANAS, QATADA), Some(1));
    assert_eq!(graph.weight(QATADA, HMAM), Some(1));
    // The fork to the two students.
    assert_eq!(graph.weight(HMAM, HISHAM), Some(1));
    assert_eq!(graph.weight(HMAM, SNAN), Some(1));

    let summary = corpus_summary(&graph, &included, &table).unwrap();
    assert_eq!(summary.hadith_count, 2);
    assert_eq!(summary.narrator_count, 11);
    assert_eq!(summary.multi_chain_count, 1);
    assert!(summary.is_acyclic());
}

#[test]
fn chain_dedup_mode_doubles_the_shared_pairs() {
    let table = parse_narrators_str(NARRATORS, "narrators.csv").unwrap();
    let records =
        parse_hadith_records_str(HADITH, "hadith.jsonl", ChainOrder::CompilerFirst).unwrap();
    let (included, _) = quarantine(records, &table);
    let config = BuildConfig {
        pair_dedup: PairDedup::Chain,
    };
    let graph = build_graph(&included, &table, &config).unwrap();
    assert_eq!(graph.weight(ANAS, QATADA), Some(2));
    assert_eq!(graph.weight(HMAM, HISHAM), Some(1));
}

#[test]
fn snapshot_round_trip_preserves_the_pipeline_output() {
    let table = parse_narrators_str(NARRATORS, "narrators.csv").unwrap();
    let records =
        parse_hadith_records_str(HADITH, "hadith.jsonl", ChainOrder::CompilerFirst).unwrap();
    let (included, _) = quarantine(records, &table);
    let graph = build_graph(&included, &table, &BuildConfig::default()).unwrap();
    let snapshot = Snapshot::new(graph, &table, 2, 1).unwrap();

    let text = write_snapshot(&snapshot);
    let reread = read_snapshot(&text).unwrap();
    assert_eq!(snapshot, reread);
    assert_eq!(write_snapshot(&reread), text);
}
