//! JSON chart files.
//!
//! ```json
//! { "name": "...", "n": 1, "coords": ["x1", "y1"],
//!   "J": [["0", "1"], ["-1", "0"]],
//!   "connection": { "christoffel": [{"upper": 0, "lower1": 0, "lower2": 1, "expr": "x1"}] },
//!   "base_point": ["0", "1/2"] }
//! ```
//!
//! `connection` may instead be `{ "metric": [[...]] }`, in which case the
//! Levi-Civita connection is used. Indices are 0-based.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sympcalc_exact::linalg::Matrix;
use sympcalc_exact::{parse_expr, RatFunc, Rational, Ring};

use super::{levi_civita_symbols, Builtin, Chart, FedosovStructure, KahlerStructure, Slot, Tensor};
use crate::error::Error;
use crate::symplin::SympSpace;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChartFile {
    pub name: String,
    pub n: usize,
    pub coords: Vec<String>,
    #[serde(rename = "J")]
    pub j: Vec<Vec<String>>,
    pub connection: ConnectionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ConnectionSpec {
    Christoffel(Vec<ChristoffelEntry>),
    Metric(Vec<Vec<String>>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChristoffelEntry {
    pub upper: usize,
    pub lower1: usize,
    pub lower2: usize,
    pub expr: String,
}

fn parse_matrix(rows: &[Vec<String>], d: usize, ring: &Arc<Ring>, what: &str) -> Result<Matrix<RatFunc>, Error> {
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(Error::ChartFormat(format!("{what} must be a {d}x{d} matrix")));
    }
    rows.iter()
        .enumerate()
        .map(|(a, row)| {
            row.iter()
                .enumerate()
                .map(|(b, text)| {
                    parse_expr(text, ring).map_err(|source| Error::Expression {
                        field: format!("{what}[{a}][{b}]"),
                        source,
                    })
                })
                .collect()
        })
        .collect()
}

/// Parses and validates chart JSON. Format and grammar problems are
/// reported as configuration errors, failed geometric invariants as
/// `Error::Invariant`.
pub fn parse_chart_file(text: &str) -> Result<Builtin, Error> {
    let file: ChartFile = serde_json::from_str(text).map_err(|e| Error::ChartFormat(e.to_string()))?;
    let n = file.n;
    let d = 2 * n;
    if n == 0 {
        return Err(Error::ChartFormat("n must be positive".into()));
    }
    if file.coords.len() != d {
        return Err(Error::ChartFormat(format!(
            "expected {d} coordinates, got {}",
            file.coords.len()
        )));
    }
    for (i, c) in file.coords.iter().enumerate() {
        let mut chars = c.chars();
        let ok = chars.next().is_some_and(|h| h.is_ascii_alphabetic())
            && chars.all(|x| x.is_ascii_alphanumeric() || x == '_');
        if !ok || file.coords[..i].contains(c) {
            return Err(Error::ChartFormat(format!("bad or repeated coordinate name {c:?}")));
        }
    }
    let ring = Ring::new(&file.coords);
    let j = parse_matrix(&file.j, d, &ring, "J")?;
    let base = match &file.base_point {
        None => vec![Rational::ZERO; d],
        Some(p) if p.len() == d => p
            .iter()
            .map(|s| {
                s.parse::<Rational>()
                    .map_err(|e| Error::ChartFormat(format!("base_point: {e}")))
            })
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(Error::ChartFormat(format!("base_point must have {d} entries"))),
    };
    let chart = Chart::new(&file.name, SympSpace::new(n, ring.clone(), j, base)?)?;
    match &file.connection {
        ConnectionSpec::Christoffel(entries) => {
            let mut gamma = Tensor::zero(&ring, d, &[Slot::Up, Slot::Down, Slot::Down]);
            let mut seen = std::collections::BTreeSet::new();
            for e in entries {
                if e.upper >= d || e.lower1 >= d || e.lower2 >= d {
                    return Err(Error::ChartFormat(format!(
                        "christoffel index out of range: ({}, {}, {})",
                        e.upper, e.lower1, e.lower2
                    )));
                }
                if !seen.insert((e.upper, e.lower1, e.lower2)) {
                    return Err(Error::ChartFormat(format!(
                        "duplicate christoffel entry ({}, {}, {})",
                        e.upper, e.lower1, e.lower2
                    )));
                }
                let v = parse_expr(&e.expr, &ring).map_err(|source| Error::Expression {
                    field: format!("christoffel[{}][{}][{}]", e.upper, e.lower1, e.lower2),
                    source,
                })?;
                gamma.set(&[e.upper, e.lower1, e.lower2], v);
            }
            Ok(Builtin {
                fedosov: FedosovStructure::new(chart, gamma)?,
                kahler: None,
            })
        }
        ConnectionSpec::Metric(rows) => {
            let g = parse_matrix(rows, d, &ring, "metric")?;
            match KahlerStructure::new(chart.clone(), g.clone()) {
                Ok(k) => Ok(Builtin {
                    fedosov: k.fedosov.clone(),
                    kahler: Some(k),
                }),
                Err(_) => {
                    let gamma = levi_civita_symbols(&chart, &g)?;
                    Ok(Builtin {
                        fedosov: FedosovStructure::new(chart, gamma)?,
                        kahler: None,
                    })
                }
            }
        }
    }
}

pub fn load_chart_file(path: &Path) -> Result<Builtin, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_chart_file(&text)
}

/// Serialises a structure. Kähler structures are written with their
/// metric; others with the nonzero Christoffel symbols.
pub fn chart_to_file(b: &Builtin) -> ChartFile {
    let chart = &b.fedosov.chart;
    let d = chart.dim();
    let show = |x: &RatFunc| x.to_string();
    let j = chart
        .space
        .j_lower
        .iter()
        .map(|r| r.iter().map(show).collect())
        .collect();
    let connection = match &b.kahler {
        Some(k) => ConnectionSpec::Metric(k.data.g.iter().map(|r| r.iter().map(show).collect()).collect()),
        None => {
            let mut entries = Vec::new();
            for c in 0..d {
                for a in 0..d {
                    for bb in 0..d {
                        let v = b.fedosov.gamma.get(&[c, a, bb]);
                        if !v.is_zero() {
                            entries.push(ChristoffelEntry {
                                upper: c,
                                lower1: a,
                                lower2: bb,
                                expr: show(v),
                            });
                        }
                    }
                }
            }
            ConnectionSpec::Christoffel(entries)
        }
    };
    let base = &chart.space.base_point;
    ChartFile {
        name: chart.name.clone(),
        n: chart.n,
        coords: chart.ring().vars().to_vec(),
        j,
        connection,
        base_point: if base.iter().all(|x| x.is_zero()) {
            None
        } else {
            Some(base.iter().map(|x| x.to_string()).collect())
        },
    }
}
