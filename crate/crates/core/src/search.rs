//! Exact search for a Hamiltonian cycle of `K_G` that contains a forced pairing and
//! whose remaining edges all belong to the host graph `G`.
//!
//! The main engine contracts every forced pair into a super-node. A partial solution is
//! a path of super-nodes with two open ends (head and tail); each step enters an unvisited
//! super-node from one end through a host edge and leaves it through the partner vertex.
//! When every super-node is on the path, the cycle closes with a host edge from tail to head.
//!
//! [`search_direct`] is an independent vertex-level backtracker used to cross-check the
//! contracted engine.

use serde::{Deserialize, Serialize};

use crate::cycle::HamCycle;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matching::Pairing;

pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// Search knobs. Each pruning rule can be switched off independently; decisions do not
/// depend on them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Node budget; exceeding it yields [`SearchOutcome::Inconclusive`].
    pub budget: Option<u64>,
    /// Every endpoint of an unvisited super-node keeps a usable host neighbour.
    pub prune_degree: bool,
    /// Unvisited super-nodes and both path ends stay connected through host edges.
    pub prune_connectivity: bool,
    /// Both path ends keep an unvisited host neighbour, so the cycle can still close.
    pub prune_closure: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: Some(DEFAULT_BUDGET),
            prune_degree: true,
            prune_connectivity: true,
            prune_closure: true,
        }
    }
}

impl SearchConfig {
    pub fn unpruned() -> Self {
        SearchConfig {
            prune_degree: false,
            prune_connectivity: false,
            prune_closure: false,
            ..SearchConfig::default()
        }
    }

    pub fn with_budget(self, budget: Option<u64>) -> Self {
        SearchConfig { budget, ..self }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_visited: u64,
    pub prunes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Extendable(HamCycle, SearchStats),
    /// The whole search space was exhausted without a solution.
    Nonextendable(SearchStats),
    /// The node budget ran out first.
    Inconclusive(SearchStats),
}

impl SearchOutcome {
    pub fn stats(&self) -> SearchStats {
        match self {
            SearchOutcome::Extendable(_, s)
            | SearchOutcome::Nonextendable(s)
            | SearchOutcome::Inconclusive(s) => *s,
        }
    }

    /// `Some(true)` extendable, `Some(false)` nonextendable, `None` inconclusive.
    pub fn decision(&self) -> Option<bool> {
        match self {
            SearchOutcome::Extendable(..) => Some(true),
            SearchOutcome::Nonextendable(_) => Some(false),
            SearchOutcome::Inconclusive(_) => None,
        }
    }
}

/// A host graph together with a pairing to be forced into the cycle.
pub struct ForcedInstance<'a> {
    host: &'a Graph,
    partner: Vec<usize>,
}

impl<'a> ForcedInstance<'a> {
    pub fn new(host: &'a Graph, forced: &Pairing) -> Result<Self> {
        if host.order() % 2 == 1 {
            return Err(Error::NoPairingExists(host.order()));
        }
        let partner = forced.partner_indices(host)?;
        Ok(ForcedInstance { host, partner })
    }

    pub fn host(&self) -> &Graph {
        self.host
    }

    /// Edge of `E(host) ∪ forced`.
    pub fn is_effective_edge(&self, i: usize, j: usize) -> bool {
        self.partner[i] == j || self.host.adjacent(i, j)
    }

    fn cycle_from_indices(&self, order: &[usize]) -> HamCycle {
        HamCycle::new(order.iter().map(|&i| self.host.vertex(i)).collect())
            .expect("search emits simple cycles")
    }
}

enum Flow {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Contracted<'a> {
    inst: &'a ForcedInstance<'a>,
    config: SearchConfig,
    visited: Vec<bool>,
    head: usize,
    tail: usize,
    front: Vec<usize>,
    back: Vec<usize>,
    remaining: usize,
    stats: SearchStats,
    scratch: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Contracted<'a> {
    fn host(&self) -> &'a Graph {
        self.inst.host
    }

    fn usable_from_end(&self, v: usize) -> bool {
        self.host()
            .neighbors(v)
            .iter()
            .any(|&w| !self.visited[w])
    }

    fn degree_ok(&self) -> bool {
        let (g, partner) = (self.host(), &self.inst.partner);
        (0..g.order()).filter(|&w| !self.visited[w]).all(|w| {
            g.neighbors(w).iter().any(|&x| {
                (x != partner[w] && !self.visited[x]) || x == self.head || x == self.tail
            })
        })
    }

    fn connectivity_ok(&mut self) -> bool {
        let g = self.inst.host;
        let partner = &self.inst.partner;
        let scratch = &mut self.scratch;
        let queue = &mut self.queue;
        scratch.iter_mut().for_each(|s| *s = false);
        queue.clear();
        scratch[self.tail] = true;
        queue.push(self.tail);
        let mut reached_head = false;
        let mut reached = 0;
        while let Some(x) = queue.pop() {
            for &y in g.neighbors(x) {
                if y == self.head {
                    reached_head = true;
                }
                if !self.visited[y] && !scratch[y] {
                    scratch[y] = true;
                    scratch[partner[y]] = true;
                    reached += 2;
                    queue.push(y);
                    queue.push(partner[y]);
                }
            }
        }
        reached_head && reached == 2 * self.remaining
    }

    fn closure_ok(&self) -> bool {
        self.usable_from_end(self.head) && self.usable_from_end(self.tail)
    }

    fn dfs(&mut self) -> Flow {
        self.stats.nodes_visited += 1;
        if let Some(b) = self.config.budget {
            if self.stats.nodes_visited > b {
                return Flow::OutOfBudget;
            }
        }
        if self.remaining == 0 {
            let closes = self.host().adjacent(self.head, self.tail)
                && self.inst.partner[self.tail] != self.head;
            return if closes { Flow::Found } else { Flow::Exhausted };
        }
        let pruned = (self.config.prune_closure && !self.closure_ok())
            || (self.config.prune_degree && !self.degree_ok())
            || (self.config.prune_connectivity && !self.connectivity_ok());
        if pruned {
            self.stats.prunes += 1;
            return Flow::Exhausted;
        }

        let host = self.host();
        let moves = |end: usize| host.neighbors(end).iter().filter(|&&w| !self.visited[w]).count();
        let at_tail = moves(self.tail) <= moves(self.head);
        let end = if at_tail { self.tail } else { self.head };
        for &y in host.neighbors(end) {
            if self.visited[y] {
                continue;
            }
            let py = self.inst.partner[y];
            self.visited[y] = true;
            self.visited[py] = true;
            self.remaining -= 1;
            let saved = if at_tail {
                self.back.extend([y, py]);
                std::mem::replace(&mut self.tail, py)
            } else {
                self.front.extend([y, py]);
                std::mem::replace(&mut self.head, py)
            };
            match self.dfs() {
                Flow::Exhausted => {}
                other => return other,
            }
            if at_tail {
                self.back.truncate(self.back.len() - 2);
                self.tail = saved;
            } else {
                self.front.truncate(self.front.len() - 2);
                self.head = saved;
            }
            self.remaining += 1;
            self.visited[y] = false;
            self.visited[py] = false;
        }
        Flow::Exhausted
    }

    fn cycle(&self) -> Vec<usize> {
        let start = [0, self.inst.partner[0]];
        self.front
            .iter()
            .rev()
            .chain(start.iter())
            .chain(self.back.iter())
            .copied()
            .collect()
    }
}

/// Contracted-pair search with the given configuration.
pub fn search(host: &Graph, forced: &Pairing, config: &SearchConfig) -> Result<SearchOutcome> {
    let inst = ForcedInstance::new(host, forced)?;
    Ok(search_instance(&inst, config))
}

pub fn search_instance(inst: &ForcedInstance<'_>, config: &SearchConfig) -> SearchOutcome {
    let n = inst.host.order();
    if n == 0 {
        return SearchOutcome::Nonextendable(SearchStats::default());
    }
    let mut st = Contracted {
        inst,
        config: *config,
        visited: vec![false; n],
        head: 0,
        tail: inst.partner[0],
        front: Vec::new(),
        back: Vec::new(),
        remaining: n / 2 - 1,
        stats: SearchStats::default(),
        scratch: vec![false; n],
        queue: Vec::with_capacity(n),
    };
    st.visited[0] = true;
    st.visited[inst.partner[0]] = true;
    match st.dfs() {
        Flow::Found => {
            let cycle = inst.cycle_from_indices(&st.cycle());
            SearchOutcome::Extendable(cycle, st.stats)
        }
        Flow::Exhausted => SearchOutcome::Nonextendable(st.stats),
        Flow::OutOfBudget => SearchOutcome::Inconclusive(st.stats),
    }
}

/// Extension by exhaustive search with default settings. `Ok(None)` means proven
/// nonextendable; running out of budget is reported as [`Error::BudgetExceeded`].
pub fn extend_by_search(host: &Graph, forced: &Pairing) -> Result<Option<HamCycle>> {
    let config = SearchConfig::default();
    match search(host, forced, &config)? {
        SearchOutcome::Extendable(c, _) => Ok(Some(c)),
        SearchOutcome::Nonextendable(_) => Ok(None),
        SearchOutcome::Inconclusive(_) => {
            Err(Error::BudgetExceeded(config.budget.unwrap_or(u64::MAX)))
        }
    }
}

/// Vertex-level backtracking over `E(host) ∪ forced`: grows a path from vertex 0 one
/// vertex at a time and rejects a step only when it leaves a vertex with two non-forced
/// cycle edges. No contraction and no lookahead.
pub fn search_direct(host: &Graph, forced: &Pairing, budget: Option<u64>) -> Result<SearchOutcome> {
    let inst = ForcedInstance::new(host, forced)?;
    let n = host.order();
    let mut stats = SearchStats::default();
    if n < 4 {
        return Ok(SearchOutcome::Nonextendable(stats));
    }
    let mut path = vec![0usize];
    let mut on_path = vec![false; n];
    on_path[0] = true;
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut list = host.neighbors(i).to_vec();
            if !host.adjacent(i, inst.partner[i]) {
                list.push(inst.partner[i]);
                list.sort_unstable();
            }
            list
        })
        .collect();
    // next candidate position per path depth
    let mut cursor = vec![0usize; n];
    loop {
        stats.nodes_visited += 1;
        if budget.is_some_and(|b| stats.nodes_visited > b) {
            return Ok(SearchOutcome::Inconclusive(stats));
        }
        let depth = path.len() - 1;
        let end = path[depth];
        if path.len() == n && cursor[depth] == 0 {
            cursor[depth] = usize::MAX;
            if inst.is_effective_edge(end, 0) {
                let cycle = HamCycle::new(path.iter().map(|&i| host.vertex(i)).collect())
                    .expect("distinct");
                let closes = cycle
                    .edges()
                    .filter(|&(u, v)| forced.contains_pair(u, v))
                    .count()
                    == n / 2;
                if closes {
                    return Ok(SearchOutcome::Extendable(cycle, stats));
                }
            }
        }
        let mut advanced = false;
        while path.len() < n && cursor[depth] < neighbors[end].len() {
            let v = neighbors[end][cursor[depth]];
            cursor[depth] += 1;
            if on_path[v] {
                continue;
            }
            // `end` needs its forced edge among its two cycle edges
            if depth > 0 {
                let prev = path[depth - 1];
                if inst.partner[end] != prev && inst.partner[end] != v {
                    continue;
                }
            }
            path.push(v);
            on_path[v] = true;
            cursor[depth + 1] = 0;
            advanced = true;
            break;
        }
        if !advanced {
            let v = path.pop().expect("nonempty");
            on_path[v] = false;
            if path.is_empty() {
                return Ok(SearchOutcome::Nonextendable(stats));
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateOutcome {
    Extendable,
    Nonextendable,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub graph: String,
    pub pairing: Vec<String>,
}

/// Serializable verdict of an exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub instance: Instance,
    pub outcome: CertificateOutcome,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cycle: Option<Vec<String>>,
    pub nodes_visited: u64,
    pub prunes: u64,
    pub budget: Option<u64>,
}

impl Certificate {
    pub fn from_outcome(host: &Graph, forced: &Pairing, outcome: &SearchOutcome, budget: Option<u64>) -> Self {
        let stats = outcome.stats();
        let (kind, cycle) = match outcome {
            SearchOutcome::Extendable(c, _) => (
                CertificateOutcome::Extendable,
                Some(c.vertices().iter().map(|v| v.to_string()).collect()),
            ),
            SearchOutcome::Nonextendable(_) => (CertificateOutcome::Nonextendable, None),
            SearchOutcome::Inconclusive(_) => (CertificateOutcome::Inconclusive, None),
        };
        Certificate {
            instance: Instance {
                graph: host.family().to_string(),
                pairing: forced.pairs().iter().map(|(u, v)| format!("{u} {v}")).collect(),
            },
            outcome: kind,
            cycle,
            nodes_visited: stats.nodes_visited,
            prunes: stats.prunes,
            budget,
        }
    }
}

/// Runs the contracted search to completion (or budget) and packages the result.
/// A nonextendable certificate is only issued after the search space is exhausted.
pub fn decide_nonextendable(host: &Graph, forced: &Pairing, config: &SearchConfig) -> Result<Certificate> {
    let outcome = search(host, forced, config)?;
    Ok(Certificate::from_outcome(host, forced, &outcome, config.budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::verify_extension;
    use crate::graph::{build_petersen, build_rook, Vertex};
    use crate::matching::{cut_pairing, enumerate_pairings};

    fn v(r: u32, c: u32) -> Vertex {
        Vertex::new(r, c)
    }

    #[test]
    fn cut_pairing_on_prism_is_nonextendable() {
        let g = build_rook(2, 3).unwrap();
        let m = cut_pairing(3).unwrap();
        assert_eq!(extend_by_search(&g, &m).unwrap(), None);
        let cert = decide_nonextendable(&g, &m, &SearchConfig::default()).unwrap();
        assert_eq!(cert.outcome, CertificateOutcome::Nonextendable);
        assert!(cert.cycle.is_none());

        let g5 = build_rook(2, 5).unwrap();
        let cert = decide_nonextendable(&g5, &cut_pairing(5).unwrap(), &SearchConfig::default()).unwrap();
        assert_eq!(cert.outcome, CertificateOutcome::Nonextendable);
    }

    #[test]
    fn vertical_pairing_on_rook_2_4_extends() {
        let g = build_rook(2, 4).unwrap();
        let m = Pairing::new((0..4).map(|j| (v(0, j), v(1, j)))).unwrap();
        let cert = decide_nonextendable(&g, &m, &SearchConfig::default()).unwrap();
        assert_eq!(cert.outcome, CertificateOutcome::Extendable);
        let c = extend_by_search(&g, &m).unwrap().unwrap();
        assert!(verify_extension(&g, &m, &c));
    }

    #[test]
    fn alternate_edges_of_a_known_cycle() {
        let g = build_rook(4, 3).unwrap();
        // boustrophedon Hamiltonian cycle: down column 0, then snake through columns 1..3
        let order = [
            v(0, 0), v(1, 0), v(2, 0), v(3, 0), v(3, 1), v(3, 2),
            v(2, 2), v(2, 1), v(1, 1), v(1, 2), v(0, 2), v(0, 1),
        ];
        let m = Pairing::new((0..6).map(|k| (order[2 * k], order[2 * k + 1]))).unwrap();
        let c = extend_by_search(&g, &m).unwrap().unwrap();
        assert!(verify_extension(&g, &m, &c));
    }

    #[test]
    fn petersen_has_a_nonextendable_pairing() {
        let g = build_petersen();
        let bad = enumerate_pairings(&g)
            .unwrap()
            .find(|m| extend_by_search(&g, m).unwrap().is_none());
        assert!(bad.is_some());
    }

    #[test]
    fn direct_and_contracted_agree_on_small_rooks() {
        for (m1, m2) in [(2, 2), (2, 3), (4, 2)] {
            let g = build_rook(m1, m2).unwrap();
            for m in enumerate_pairings(&g).unwrap() {
                let a = search(&g, &m, &SearchConfig::default()).unwrap();
                let b = search_direct(&g, &m, None).unwrap();
                assert_eq!(a.decision(), b.decision(), "{m:?}");
                if let SearchOutcome::Extendable(c, _) = &b {
                    assert!(verify_extension(&g, &m, c));
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let g = build_rook(4, 4).unwrap();
        let m = crate::matching::random_pairing(&g, 11).unwrap();
        let a = extend_by_search(&g, &m).unwrap().unwrap();
        let b = extend_by_search(&g, &m).unwrap().unwrap();
        assert_eq!(a.vertices(), b.vertices());
    }

    #[test]
    fn budget_gives_inconclusive() {
        let g = build_rook(2, 5).unwrap();
        let m = cut_pairing(5).unwrap();
        let cfg = SearchConfig::unpruned().with_budget(Some(3));
        assert!(matches!(search(&g, &m, &cfg).unwrap(), SearchOutcome::Inconclusive(_)));
        let cert = decide_nonextendable(&g, &m, &cfg).unwrap();
        assert_eq!(cert.outcome, CertificateOutcome::Inconclusive);
    }

    #[test]
    fn two_vertices_never_extend() {
        let g = build_rook(2, 1).unwrap();
        let m = Pairing::new([(v(0, 0), v(1, 0))]).unwrap();
        assert_eq!(search(&g, &m, &SearchConfig::default()).unwrap().decision(), Some(false));
        assert_eq!(search_direct(&g, &m, None).unwrap().decision(), Some(false));
    }

    #[test]
    fn certificate_json_shape() {
        let g = build_rook(2, 3).unwrap();
        let cert = decide_nonextendable(&g, &cut_pairing(3).unwrap(), &SearchConfig::default()).unwrap();
        let json: serde_json::Value = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["outcome"], "nonextendable");
        assert_eq!(json["instance"]["graph"], "rook 2 3");
        assert!(json.get("cycle").is_none());
        assert!(json["nodes_visited"].as_u64().unwrap() > 0);
    }
}
