//! Minimum-weight triangulation workbench.
//!
//! The crate is organized around an immutable [`geom::Instance`]: a planar
//! point set with exact rational coordinates, its convex-hull boundary, and
//! the catalogs of potential edges and empty triangles. On top of that sit
//!
//! * [`heuristics`] — the classical inclusion/exclusion conditions
//!   (β-skeleton, YXY, diamond, maximality, independence, LMT) and their
//!   logical closure into an edge-status ledger,
//! * [`dp`] — the cubic dynamic program for simple-polygon triangulation,
//! * [`lp`] — the triangle-weight LP in edge-constraint form with a
//!   built-in primal simplex that returns basic optimal solutions,
//! * [`rounding`] — blanket decomposition, edge/triangle/blanket
//!   transposal and the cost-bound ledger over a convex partition,
//! * [`oracle`] — exhaustive triangulation enumeration and brute-force
//!   minimum-weight search for desk-scale ground truth,
//! * [`corpus`] — seeded generators for test instances.

pub mod corpus;
pub mod dp;
pub mod geom;
pub mod heuristics;
pub mod lp;
pub mod oracle;
pub mod rounding;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Instance file could not be parsed; line numbers are 1-based.
    Parse { line: usize, msg: String },
    /// Input violates a precondition (degenerate instance, crossing edges, ...).
    InvalidInput(String),
    /// The heuristic closure forced an edge both in and out.
    Contradiction { u: u32, v: u32, detail: String },
    /// A linear program (or a construction feeding it) has no feasible point.
    Infeasible(String),
    /// An exhaustive operation was asked to run above its size guard.
    SizeGuard { n: usize, max: usize },
    /// An internal invariant failed; indicates a bug, not bad input.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Contradiction { u, v, detail } => {
                write!(f, "contradiction on edge ({u},{v}): {detail}")
            }
            Error::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            Error::SizeGuard { n, max } => {
                write!(f, "instance size {n} exceeds exhaustive-search guard {max}")
            }
            Error::Internal(msg) => write!(f, "internal invariant violation: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
