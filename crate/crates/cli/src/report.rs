//! Run reports: one JSON document per invocation, deterministic for fixed
//! inputs and seeds (timings go to the log, never into the JSON).

use std::collections::BTreeMap;

use serde::Serialize;

use mwt_core::geom::Instance;
use mwt_core::heuristics::{EdgeStatus, EdgeStatusLedger};
use mwt_core::rounding::CostLedger;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub input: String,
    pub seed: u64,
    pub n: usize,
    pub potential_edges: usize,
    pub empty_triangles: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ledger: Option<LedgerSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solvable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<FaceReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp: Option<LpReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integer_cost: Option<f64>,
    /// integer_cost / lp_objective; at least 1 up to tolerance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triangulation: Option<TriangulationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounding: Option<CostLedger>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}

impl RunReport {
    pub fn new(command: &str, input: &str, seed: u64, inst: &Instance) -> RunReport {
        RunReport {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            input: input.to_string(),
            seed,
            n: inst.n(),
            potential_edges: inst.edges().len(),
            empty_triangles: inst.triangles().len(),
            ledger: None,
            solvable: None,
            faces: None,
            lp: None,
            integer_cost: None,
            gap: None,
            triangulation: None,
            rounding: None,
            oracle: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerSummary {
    pub forced_in: usize,
    pub forced_out: usize,
    pub unknown: usize,
    pub by_rule: BTreeMap<String, usize>,
}

impl LedgerSummary {
    pub fn from_ledger(ledger: &EdgeStatusLedger) -> LedgerSummary {
        let mut by_rule = BTreeMap::new();
        for prov in ledger.provenance.iter().flatten() {
            *by_rule.entry(prov.0.name().to_string()).or_insert(0) += 1;
        }
        LedgerSummary {
            forced_in: ledger.count(EdgeStatus::ForcedIn),
            forced_out: ledger.count(EdgeStatus::ForcedOut),
            unknown: ledger.count(EdgeStatus::Unknown),
            by_rule,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceReport {
    pub boundary: Vec<u32>,
    pub empty: bool,
    pub convex: bool,
    /// "dp" when the face was triangulated exactly, "lp" otherwise.
    pub method: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LpReport {
    pub columns: usize,
    pub rows: usize,
    pub objective: f64,
    pub classification: String,
    pub fractional_triangles: usize,
    /// Fraction of catalog triangles removed by the ledger reduction.
    pub eliminated_triangle_fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TriangulationReport {
    pub cost: f64,
    pub triangles: Vec<[u32; 3]>,
    pub edges: Vec<[u32; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub triangulations: Option<usize>,
    pub mwt_cost: f64,
    pub optima: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_pipeline: Option<bool>,
}

pub fn triangulation_report(inst: &Instance, tris: &[u32]) -> TriangulationReport {
    let mut edges: Vec<[u32; 2]> = tris
        .iter()
        .flat_map(|&t| {
            inst.tri(t).edges.iter().map(|&e| {
                let edge = inst.edge(e);
                [edge.u, edge.v]
            })
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    TriangulationReport {
        cost: tris.iter().map(|&t| inst.tri(t).cost).sum(),
        triangles: tris.iter().map(|&t| inst.tri(t).verts).collect(),
        edges,
    }
}
