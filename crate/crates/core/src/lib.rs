//! Pairing-Hamiltonian graphs: builders for rook and related graphs, pairing
//! enumeration, constructive and search-based extenders, and a PH checker.
//!
//! A pairing of a graph `G` is a perfect matching of the complete graph on `V(G)`.
//! It extends when some Hamiltonian cycle contains all of its pairs and uses only
//! edges of `G` otherwise.

pub mod check;
pub mod construct;
pub mod cycle;
pub mod error;
pub mod format;
pub mod graph;
pub mod matching;
pub mod search;

pub use check::{
    check_ph, explore_bishop_on_rook, verify_extension, CheckConfig, ExtenderChoice, Mode,
    Parallelism, PhReport, Verdict,
};
pub use construct::{extend_knn, extend_rook, extend_rook_with, Extension, NonextendableWitness};
pub use cycle::HamCycle;
pub use error::{Error, Result};
pub use graph::{Family, Graph, Vertex};
pub use matching::{enumerate_pairings, pairing_count, random_pairing, Pairing};
pub use search::{search, Certificate, CertificateOutcome, SearchConfig, SearchOutcome};
