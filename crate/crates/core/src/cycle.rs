use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::Vertex;

/// A cyclic vertex sequence visiting each of its vertices once. Two cycles compare
/// equal when they differ by rotation or reflection.
#[derive(Clone, Debug)]
pub struct HamCycle {
    order: Vec<Vertex>,
}

impl HamCycle {
    /// At least three distinct vertices; the closing edge is implicit.
    pub fn new(order: Vec<Vertex>) -> Result<HamCycle> {
        if order.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "a cycle needs at least 3 vertices, got {}",
                order.len()
            )));
        }
        let mut seen = HashSet::with_capacity(order.len());
        if let Some(v) = order.iter().find(|v| !seen.insert(**v)) {
            return Err(Error::InvalidParameter(format!("{v} repeated in cycle")));
        }
        Ok(HamCycle { order })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Consecutive pairs, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let n = self.order.len();
        (0..n).map(move |i| (self.order[i], self.order[(i + 1) % n]))
    }

    /// Starts at the least vertex and walks towards its lesser neighbour.
    pub fn canonical(&self) -> Vec<Vertex> {
        let n = self.order.len();
        let start = (0..n).min_by_key(|&i| self.order[i]).expect("nonempty");
        let fwd = self.order[(start + 1) % n];
        let back = self.order[(start + n - 1) % n];
        if fwd <= back {
            (0..n).map(|k| self.order[(start + k) % n]).collect()
        } else {
            (0..n).map(|k| self.order[(start + n - k) % n]).collect()
        }
    }

    pub fn mapped(&self, f: impl Fn(Vertex) -> Vertex) -> HamCycle {
        HamCycle { order: self.order.iter().map(|&v| f(v)).collect() }
    }

    /// Replaces the cycle edge `x`–`y` by the path `x, inner..., y`.
    pub(crate) fn splice(&mut self, x: Vertex, y: Vertex, inner: &[Vertex]) -> Result<()> {
        let n = self.order.len();
        let pos = |v: Vertex| {
            self.order
                .iter()
                .position(|&w| w == v)
                .ok_or_else(|| Error::InternalInvariant(format!("{v} not on cycle")))
        };
        let (i, j) = (pos(x)?, pos(y)?);
        let (after, run): (usize, Vec<Vertex>) = if j == (i + 1) % n {
            (i, inner.to_vec())
        } else if i == (j + 1) % n {
            (j, inner.iter().rev().copied().collect())
        } else {
            return Err(Error::InternalInvariant(format!("{x} {y} is not a cycle edge")));
        };
        self.order.splice(after + 1..after + 1, run);
        Ok(())
    }
}

impl PartialEq for HamCycle {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for HamCycle {}
