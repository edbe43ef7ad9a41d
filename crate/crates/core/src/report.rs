//! Comparison tables: one row per airline, per-period columns, and a
//! percent-difference column when exactly two periods are compared.
//! Rendered as aligned text or as CSV.

use std::collections::BTreeMap;

use crate::analysis::{format_percent, percent_delta, CoreReportRow, LayerSummary, Metric};
use crate::mag::GraphMode;

/// Label of the row that sums the listed airlines.
pub const TOTAL_LABEL: &str = "TOTAL";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Headered CSV with LF line endings.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
    }

    /// Space-aligned columns; the first column is left-aligned, the rest
    /// right-aligned.
    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(String::len).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, &w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

fn delta_cell(before: u64, after: u64) -> String {
    percent_delta(before, after).map_or_else(|_| "n/a".to_string(), format_percent)
}

/// Airports, routes and flights per airline and period.
///
/// `rows` maps each airline to its summaries in `periods` order. A TOTAL row
/// summing every listed airline is appended when `with_total` is set.
pub fn summary_table(rows: &[(String, Vec<LayerSummary>)], periods: &[u32], with_total: bool) -> Table {
    let metrics = [
        (Metric::Airports, "airports"),
        (Metric::Routes, "routes"),
        (Metric::Flights, "flights"),
    ];
    let diff = periods.len() == 2;
    let mut header = vec!["airline".to_string()];
    for (_, name) in metrics {
        header.extend(periods.iter().map(|p| format!("{name}_p{p}")));
        if diff {
            header.push(format!("{name}_diff_pct"));
        }
    }

    let mut totals: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut body = Vec::new();
    for (airline, summaries) in rows {
        let mut cells = vec![airline.clone()];
        for (mi, (metric, _)) in metrics.iter().enumerate() {
            let values: Vec<u64> = summaries.iter().map(|s| metric.of(s) as u64).collect();
            for (pi, v) in values.iter().enumerate() {
                *totals.entry((mi, pi)).or_insert(0) += v;
            }
            cells.extend(values.iter().map(u64::to_string));
            if diff {
                cells.push(delta_cell(values[0], values[1]));
            }
        }
        body.push(cells);
    }
    if with_total {
        let mut cells = vec![TOTAL_LABEL.to_string()];
        for mi in 0..metrics.len() {
            let values: Vec<u64> = (0..periods.len())
                .map(|pi| totals.get(&(mi, pi)).copied().unwrap_or(0))
                .collect();
            cells.extend(values.iter().map(u64::to_string));
            if diff {
                cells.push(delta_cell(values[0], values[1]));
            }
        }
        body.push(cells);
    }
    Table { header, rows: body }
}

/// Maximum core (k, airports, routes or flights) per airline and period in
/// one mode.
pub fn core_table(rows: &[(String, Vec<CoreReportRow>)], periods: &[u32], mode: GraphMode) -> Table {
    let edges = match mode {
        GraphMode::Digraph => "routes",
        GraphMode::MultiDigraph => "flights",
    };
    let mut header = vec!["airline".to_string()];
    for p in periods {
        header.extend([format!("k_p{p}"), format!("airports_p{p}"), format!("{edges}_p{p}")]);
    }
    let body = rows
        .iter()
        .map(|(airline, reports)| {
            let mut cells = vec![airline.clone()];
            for r in reports {
                cells.extend([r.k.to_string(), r.airports.to_string(), r.edges.to_string()]);
            }
            cells
        })
        .collect();
    Table { header, rows: body }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(airline: &str, period: u32, airports: usize, routes: usize, flights: usize) -> LayerSummary {
        LayerSummary {
            airline: airline.into(),
            period,
            airports,
            routes,
            flights,
        }
    }

    #[test]
    fn two_periods_add_difference_columns() {
        let rows = vec![
            (
                "G3".to_string(),
                vec![s("G3", 1, 56, 324, 6644), s("G3", 2, 53, 242, 4188)],
            ),
            (
                "AD".to_string(),
                vec![s("AD", 1, 100, 806, 12039), s("AD", 2, 100, 720, 10794)],
            ),
        ];
        let t = summary_table(&rows, &[1, 2], true);
        assert_eq!(t.header.len(), 1 + 3 * 3);
        assert_eq!(t.rows[0][4..7], ["324", "242", "-25"]);
        assert_eq!(t.rows[0][9], "-37");
        let total = t.rows.last().unwrap();
        assert_eq!(total[0], TOTAL_LABEL);
        assert_eq!(total[4..7], ["1130", "962", "-15"]);
        assert_eq!(total[7..10], ["18683", "14982", "-20"]);
    }

    #[test]
    fn single_period_omits_difference() {
        let rows = vec![("XA".to_string(), vec![s("XA", 1, 4, 5, 7)])];
        let t = summary_table(&rows, &[1], false);
        assert_eq!(t.header, ["airline", "airports_p1", "routes_p1", "flights_p1"]);
        assert_eq!(t.rows, vec![vec!["XA", "4", "5", "7"]]);
    }

    #[test]
    fn zero_baseline_is_not_available() {
        let rows = vec![("XA".to_string(), vec![s("XA", 1, 0, 0, 0), s("XA", 2, 2, 1, 1)])];
        let t = summary_table(&rows, &[1, 2], false);
        assert_eq!(t.rows[0][3], "n/a");
    }

    #[test]
    fn renderings() {
        let t = Table {
            header: vec!["airline".into(), "k".into()],
            rows: vec![vec!["XA".into(), "160".into()], vec!["TOTAL".into(), "2".into()]],
        };
        assert_eq!(t.to_csv(), "airline,k\nXA,160\nTOTAL,2\n");
        assert_eq!(t.to_text(), "airline    k\nXA       160\nTOTAL      2\n");
    }

    #[test]
    fn core_table_layout() {
        let r = |p, k, a, e| CoreReportRow {
            airline: "O6".into(),
            period: p,
            mode: GraphMode::MultiDigraph,
            k,
            airports: a,
            edges: e,
        };
        let t = core_table(
            &[("O6".into(), vec![r(1, 160, 2, 160), r(2, 160, 2, 160)])],
            &[1, 2],
            GraphMode::MultiDigraph,
        );
        assert_eq!(t.header[1..4], ["k_p1", "airports_p1", "flights_p1"]);
        assert_eq!(t.rows[0], ["O6", "160", "2", "160", "160", "2", "160"]);
    }
}
