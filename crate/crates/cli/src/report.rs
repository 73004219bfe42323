//! Dimension reports and the comparison table.

use std::fmt::Write as _;

use mw_core::engine::{symmetric_algebra_dim, Engine};
use mw_core::enumerate::{Space, TOOL_VERSION};
use mw_core::error::Result;
use rayon::prelude::*;
use serde::Serialize;

/// Published values: (degree, dim of the quotient, dim of its primitive part).
pub const TABLE: [(usize, usize, usize); 5] = [(0, 1, 1), (3, 1, 1), (6, 2, 1), (9, 3, 1), (12, 5, 2)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Match {
    Yes,
    No,
    /// The empty graph is the unit and is not counted as primitive.
    Convention,
}

impl Match {
    pub fn as_str(&self) -> &'static str {
        match self {
            Match::Yes => "yes",
            Match::No => "no",
            Match::Convention => "convention",
        }
    }
}

pub fn table_value(degree: usize, connected: bool) -> Option<usize> {
    TABLE.iter().find(|r| r.0 == degree).map(|&(_, d, p)| if connected { p } else { d })
}

pub fn compare(degree: usize, connected: bool, computed: usize) -> Option<Match> {
    let expected = table_value(degree, connected)?;
    Some(if computed == expected {
        Match::Yes
    } else if connected && degree == 0 {
        Match::Convention
    } else {
        Match::No
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub degree: usize,
    pub space: Space,
    pub classes: usize,
    pub rank: usize,
    pub dim: usize,
    pub dim_connected: usize,
    /// Free commutative algebra on the connected dimensions of degrees `1..=degree`.
    pub sym_prediction: Option<usize>,
    pub paper_value: Option<usize>,
    #[serde(rename = "match")]
    pub matches: Option<Match>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionReport {
    pub version: String,
    pub connected: bool,
    pub rows: Vec<Row>,
}

pub fn dimension_report(engine: &Engine, degrees: &[usize], space: Space, connected: bool) -> Result<DimensionReport> {
    let top = degrees.iter().copied().max().unwrap_or(0);
    engine.check(top, space)?;
    let connected_dims: Vec<usize> =
        (0..=top).into_par_iter().map(|m| engine.quotient_dim(m, space, true)).collect::<Result<_>>()?;
    let rows = degrees
        .par_iter()
        .map(|&m| {
            let q = engine.quotient(m, space, connected)?;
            let dim_connected = connected_dims[m];
            let with_table = space == Space::Cmc;
            Ok(Row {
                degree: m,
                space,
                classes: q.classes(),
                rank: q.rank(),
                dim: q.dim(),
                dim_connected,
                sym_prediction: (!connected).then(|| symmetric_algebra_dim(&connected_dims[..=m], m)),
                paper_value: table_value(m, connected).filter(|_| with_table),
                matches: compare(m, connected, q.dim()).filter(|_| with_table),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DimensionReport { version: TOOL_VERSION.to_string(), connected, rows })
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

impl DimensionReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,space,classes,rank,dim,dim_connected,sym_prediction,paper_value,match\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.degree,
                r.space,
                r.classes,
                r.rank,
                r.dim,
                r.dim_connected,
                opt(&r.sym_prediction),
                opt(&r.paper_value),
                r.matches.map(|m| m.as_str()).unwrap_or_default()
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Outcome of comparing every table cell against the computed values.
pub struct Verification {
    pub text: String,
    pub low_degrees_match: bool,
}

pub fn verify_table(engine: &Engine) -> Result<Verification> {
    let degrees: Vec<usize> = TABLE.iter().map(|r| r.0).collect();
    let full = dimension_report(engine, &degrees, Space::Cmc, false)?;
    let mut text = String::new();
    let mut ok = true;
    for row in &full.rows {
        for (label, connected, computed) in [("dim", false, row.dim), ("primitive dim", true, row.dim_connected)] {
            let expected = table_value(row.degree, connected).expect("table degrees");
            let verdict = compare(row.degree, connected, computed).expect("table degrees");
            let note = match verdict {
                Match::Yes => "match",
                Match::No if row.degree > 9 => "MISMATCH (informational)",
                Match::No => {
                    ok = false;
                    "MISMATCH"
                }
                Match::Convention => "differs by convention: the empty graph is not primitive",
            };
            writeln!(text, "n={:<2} {label:<13} computed {computed:>2}  table {expected:>2}  {note}", row.degree).unwrap();
        }
        if let Some(pred) = row.sym_prediction {
            writeln!(text, "n={:<2} symmetric-algebra prediction {pred}", row.degree).unwrap();
        }
    }
    writeln!(text, "degrees 0-9: {}", if ok { "all cells match" } else { "MISMATCH" }).unwrap();
    Ok(Verification { text, low_degrees_match: ok })
}
