//! Era-by-city narrator counts: the table showing how the center of
//! transmission shifted geographically across the four eras.

use std::collections::BTreeMap;

use crate::model::NarratorTable;

/// Label of the row collecting narrators with an empty city.
pub const UNKNOWN_CITY: &str = "unknown";
/// Label of the residual row aggregating cities below the row-total cutoff.
pub const OTHER_CITIES: &str = "other";

/// One row: a city with its four per-era counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EraCityRow {
    pub city: String,
    /// Counts for eras 1..=4; index 0 is era 1.
    pub counts: [u64; 4],
    pub total: u64,
}

/// City-by-era count matrix, rows ordered descending by total, ties broken
/// by city name.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EraCityTable {
    pub rows: Vec<EraCityRow>,
}

impl EraCityTable {
    pub fn row(&self, city: &str) -> Option<&EraCityRow> {
        self.rows.iter().find(|r| r.city == city)
    }

    /// Column sums over all rows, eras 1..=4.
    pub fn era_totals(&self) -> [u64; 4] {
        let mut totals = [0u64; 4];
        for row in &self.rows {
            for (t, c) in totals.iter_mut().zip(row.counts.iter()) {
                *t += c;
            }
        }
        totals
    }

    pub fn grand_total(&self) -> u64 {
        self.rows.iter().map(|r| r.total).sum()
    }
}

/// Groups narrators by (city, era). Cities are matched after trimming and
/// case-folding; the displayed label keeps the spelling of the first narrator
/// (in id order) seen for the group. Narrators with an empty city land in the
/// `"unknown"` row; named cities whose row total is below `min_row_total`
/// are folded into the `"other"` row.
pub fn era_city_table(table: &NarratorTable, min_row_total: u64) -> EraCityTable {
    // folded key -> (display label, per-era counts)
    let mut groups: BTreeMap<String, (String, [u64; 4])> = BTreeMap::new();
    for narrator in table.iter() {
        let trimmed = narrator.city.trim();
        let (key, label) = if trimmed.is_empty() {
            (UNKNOWN_CITY.to_string(), UNKNOWN_CITY.to_string())
        } else {
            (trimmed.to_lowercase(), trimmed.to_string())
        };
        let entry = groups.entry(key).or_insert_with(|| (label, [0u64; 4]));
        entry.1[(narrator.era - 1) as usize] += 1;
    }

    let mut rows = Vec::new();
    let mut other = [0u64; 4];
    let mut has_other = false;
    for (key, (label, counts)) in groups {
        let total: u64 = counts.iter().sum();
        if key != UNKNOWN_CITY && total < min_row_total {
            for (o, c) in other.iter_mut().zip(counts.iter()) {
                *o += c;
            }
            has_other = true;
        } else {
            rows.push(EraCityRow {
                city: label,
                counts,
                total,
            });
        }
    }
    if has_other {
        rows.push(EraCityRow {
            city: OTHER_CITIES.to_string(),
            counts: other,
            total: other.iter().sum(),
        });
    }
    rows.sort_by(|a, b| b.total.cmp(&a.total).then_with(|| a.city.cmp(&b.city)));
    EraCityTable { rows }
}

/// Narrators per era over the whole table.
pub fn per_era_counts(table: &NarratorTable) -> BTreeMap<u8, u64> {
    let mut counts = BTreeMap::new();
    for narrator in table.iter() {
        *counts.entry(narrator.era).or_insert(0) += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Narrator;

    fn table_of(rows: &[(&str, u8, &str)]) -> NarratorTable {
        let mut table = NarratorTable::new();
        for (id, generation, city) in rows {
            table
                .insert(Narrator::new(*id, *id, *generation, *city).unwrap())
                .unwrap();
        }
        table
    }

    #[test]
    fn groups_by_city_and_era() {
        let table = table_of(&[("1", 0, "Makkah"), ("2", 0, "Makkah"), ("3", 8, "Kufa")]);
        let result = era_city_table(&table, 1);
        assert_eq!(result.row("Makkah").unwrap().counts, [2, 0, 0, 0]);
        assert_eq!(result.row("Kufa").unwrap().counts, [0, 0, 1, 0]);
    }

    #[test]
    fn rows_sorted_by_total_then_name() {
        let table = table_of(&[
            ("1", 0, "Basra"),
            ("2", 1, "Basra"),
            ("3", 0, "Kufa"),
            ("4", 0, "Hijaz"),
        ]);
        let result = era_city_table(&table, 1);
        let cities: Vec<&str> = result.rows.iter().map(|r| r.city.as_str()).collect();
        assert_eq!(cities, vec!["Basra", "Hijaz", "Kufa"]);
    }

    #[test]
    fn small_rows_fold_into_other() {
        let table = table_of(&[
            ("1", 0, "Madinah"),
            ("2", 1, "Madinah"),
            ("3", 8, "Madinah"),
            ("4", 0, "Bulkh"),
            ("5", 11, "Merv"),
        ]);
        let result = era_city_table(&table, 2);
        assert_eq!(result.rows.len(), 2);
        assert_eq!(result.row("Madinah").unwrap().total, 3);
        let other = result.row(OTHER_CITIES).unwrap();
        assert_eq!(other.counts, [1, 0, 0, 1]);
        assert_eq!(result.grand_total(), 5);
    }

    #[test]
    fn empty_city_goes_to_unknown_row() {
        let table = table_of(&[("1", 0, ""), ("2", 3, "  "), ("3", 0, "Makkah")]);
        let result = era_city_table(&table, 1);
        let unknown = result.row(UNKNOWN_CITY).unwrap();
        assert_eq!(unknown.counts, [1, 1, 0, 0]);
    }

    #[test]
    fn city_matching_trims_and_case_folds() {
        let table = table_of(&[("1", 0, "Kufa"), ("2", 1, " kufa "), ("3", 7, "KUFA")]);
        let result = era_city_table(&table, 1);
        assert_eq!(result.rows.len(), 1);
        // Display label comes from the first narrator in id order.
        assert_eq!(result.rows[0].city, "Kufa");
        assert_eq!(result.rows[0].total, 3);
    }

    #[test]
    fn empty_table_has_no_rows() {
        let result = era_city_table(&NarratorTable::new(), 5);
        assert!(result.rows.is_empty());
    }

    #[test]
    fn per_era_counts_fixture() {
        let table = table_of(&[("1", 0, "Makkah"), ("2", 0, "Makkah"), ("3", 8, "Kufa")]);
        assert_eq!(per_era_counts(&table), BTreeMap::from([(1, 2), (3, 1)]));
    }

    #[test]
    fn per_era_counts_single_late_narrator() {
        let table = table_of(&[("1", 12, "Bukhara")]);
        assert_eq!(per_era_counts(&table), BTreeMap::from([(4, 1)]));
    }

    #[test]
    fn column_sums_match_per_era_counts() {
        let table = table_of(&[
            ("1", 0, "Makkah"),
            ("2", 2, "Kufa"),
            ("3", 8, ""),
            ("4", 12, "Merv"),
            ("5", 3, "kufa"),
        ]);
        let matrix = era_city_table(&table, 0);
        let per_era = per_era_counts(&table);
        let totals = matrix.era_totals();
        for era in 1..=4u8 {
            assert_eq!(
                totals[(era - 1) as usize],
                per_era.get(&era).copied().unwrap_or(0),
                "era {era}"
            );
        }
        assert_eq!(matrix.grand_total() as usize, table.len());
    }
}
