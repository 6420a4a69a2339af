//! Output documents and their text renderings.

use std::fmt::Write as _;

use cartesian_codes::{CodeParams, VerificationReport};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct ParamsReport {
    pub q: u32,
    pub cards: Vec<u64>,
    pub d: u64,
    pub length: u64,
    pub dimension: u64,
    pub min_distance: u64,
    pub regularity: u64,
    pub saturated: bool,
}

impl ParamsReport {
    pub fn new(q: u32, cards: Vec<u64>, d: u64, params: &CodeParams) -> Self {
        ParamsReport {
            q,
            cards,
            d,
            length: params.length,
            dimension: params.dimension,
            min_distance: params.min_distance,
            regularity: params.regularity,
            saturated: params.is_saturated(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TableRow {
    pub d: u64,
    pub length: u64,
    pub dimension: u64,
    pub min_distance: u64,
}

impl TableRow {
    pub fn new(d: u64, params: &CodeParams) -> Self {
        TableRow {
            d,
            length: params.length,
            dimension: params.dimension,
            min_distance: params.min_distance,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TableReport {
    pub q: u32,
    pub cards: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<u64>>,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,length,dimension,min_distance\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                r.d, r.length, r.dimension, r.min_distance
            )
            .unwrap();
        }
        out
    }

    /// One column per degree, one row per quantity.
    pub fn to_markdown(&self) -> String {
        let line = |label: &str, f: &dyn Fn(&TableRow) -> u64| {
            let cells: Vec<String> = self.rows.iter().map(|r| f(r).to_string()).collect();
            format!("| {label} | {} |\n", cells.join(" | "))
        };
        let mut out = line("d", &|r| r.d);
        out.push_str(&format!("|---|{}\n", "---|".repeat(self.rows.len())));
        out.push_str(&line("length", &|r| r.length));
        out.push_str(&line("dim", &|r| r.dimension));
        out.push_str(&line("δ", &|r| r.min_distance));
        out
    }
}

#[derive(Debug, Serialize)]
pub struct SubgroupReport {
    pub order: u64,
    pub generator: u32,
    pub elements: Vec<u32>,
}

#[derive(Debug, Serialize)]
pub struct ConstructReport {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub degrees: Vec<u64>,
    pub v: Vec<u64>,
    pub subgroups: Vec<SubgroupReport>,
    pub regularity: u64,
    pub table: Vec<TableRow>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    /// No check failed.
    pub passed: bool,
    /// Every check ran and passed.
    pub fully_verified: bool,
    pub reports: Vec<VerificationReport>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
