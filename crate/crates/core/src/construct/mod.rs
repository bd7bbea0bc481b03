//! Constructive extenders: the rook-graph dispatcher, the two-case procedure for
//! `4 × m` boards with `m` odd, and the induction for `K_{n,n}`.

mod knn;
mod rook4;

pub use knn::{extend_knn, extend_knn_traced, KnnTrace};
pub use rook4::{
    case1_extend, case2_extend, extend_4xm_odd, plan_case1, plan_case2, BridgePath, Case1Plan,
    Case2Plan,
};

use serde::Serialize;

use crate::cycle::HamCycle;
use crate::error::{invalid, Error, Result};
use crate::graph::{build_rook, Vertex};
use crate::matching::{cut_pairing, Pairing};
use crate::search::{search, Certificate, SearchConfig, SearchOutcome};

/// Why a pairing does not extend.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonextendableWitness {
    /// The vertical cut of `rook 2 m2`, `m2` odd: every cycle through it alternates
    /// rows, which an odd number of columns cannot close up.
    CutPairing { m2: u32 },
    /// Two vertices carry no Hamiltonian cycle at all.
    TooSmall,
    /// Exhaustive search found nothing.
    Search(Certificate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    Extended(HamCycle),
    Nonextendable(NonextendableWitness),
}

impl Extension {
    pub fn cycle(&self) -> Option<&HamCycle> {
        match self {
            Extension::Extended(c) => Some(c),
            Extension::Nonextendable(_) => None,
        }
    }
}

/// A rook-graph automorphism: independent permutations of rows and columns (old → new).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RookRelabel {
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
}

impl RookRelabel {
    pub fn apply(&self, v: Vertex) -> Vertex {
        Vertex::new(self.rows[v.row as usize], self.cols[v.col as usize])
    }

    pub fn inverse(&self) -> RookRelabel {
        let inv = |p: &[u32]| {
            let mut out = vec![0; p.len()];
            for (old, &new) in p.iter().enumerate() {
                out[new as usize] = old as u32;
            }
            out
        };
        RookRelabel { rows: inv(&self.rows), cols: inv(&self.cols) }
    }
}

/// Extends a pairing of the `m1 × m2` rook graph, dispatching on the board shape.
pub fn extend_rook(m1: u32, m2: u32, m: &Pairing) -> Result<Extension> {
    extend_rook_with(m1, m2, m, &SearchConfig::default())
}

pub fn extend_rook_with(m1: u32, m2: u32, m: &Pairing, config: &SearchConfig) -> Result<Extension> {
    if m1 == 0 || m2 == 0 {
        return Err(invalid("board sides must be positive"));
    }
    if m1 % 2 == 1 && m2 % 2 == 1 {
        return Err(Error::NoPairingExists((m1 * m2) as usize));
    }
    if m1 % 2 == 1 {
        let flipped = m.mapped(Vertex::transposed);
        let out = extend_rook_with(m2, m1, &flipped, config)?;
        return Ok(match out {
            Extension::Extended(c) => Extension::Extended(c.mapped(Vertex::transposed)),
            other => other,
        });
    }
    let g = build_rook(m1, m2)?;
    m.check_covers(&g)?;

    if m2 == 1 {
        if m1 == 2 {
            return Ok(Extension::Nonextendable(NonextendableWitness::TooSmall));
        }
        // K_{m1}: chain the pairs, joining consecutive pairs by complete-graph edges
        let order = m.pairs().iter().flat_map(|&(u, v)| [u, v]).collect();
        return Ok(Extension::Extended(HamCycle::new(order)?));
    }
    if m1 == 2 && m2 % 2 == 1 {
        if *m == cut_pairing(m2)? {
            return Ok(Extension::Nonextendable(NonextendableWitness::CutPairing { m2 }));
        }
        let outcome = search(&g, m, config)?;
        return match outcome {
            SearchOutcome::Extendable(c, _) => Ok(Extension::Extended(c)),
            SearchOutcome::Nonextendable(_) => Ok(Extension::Nonextendable(
                NonextendableWitness::Search(Certificate::from_outcome(&g, m, &outcome, config.budget)),
            )),
            SearchOutcome::Inconclusive(_) => {
                Err(Error::BudgetExceeded(config.budget.unwrap_or(u64::MAX)))
            }
        };
    }
    if m1 == 4 && m2 % 2 == 1 {
        return rook4::extend_4xm_odd_with(m2, m, config).map(Extension::Extended);
    }
    // every remaining board is PH; search on the full rook graph
    match search(&g, m, config)? {
        SearchOutcome::Extendable(c, _) => Ok(Extension::Extended(c)),
        SearchOutcome::Nonextendable(_) => Err(Error::InternalInvariant(format!(
            "search found no extension on rook {m1} {m2}, which is PH"
        ))),
        SearchOutcome::Inconclusive(_) => Err(Error::BudgetExceeded(config.budget.unwrap_or(u64::MAX))),
    }
}
