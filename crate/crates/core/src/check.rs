//! Verification of extensions and whole-graph PH checks.

use std::collections::HashSet;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construct::{extend_knn, extend_rook_with, Extension};
use crate::cycle::HamCycle;
use crate::error::{invalid, Error, Result};
use crate::graph::{build_bishop_on_rook, Family, Graph, Vertex};
use crate::matching::{
    enumerate_pairings, pairing_at, pairing_count, random_pairing_with, Pairing,
};
use crate::search::{search, Certificate, SearchConfig, SearchOutcome};

/// True iff `h` visits every vertex of `host` once, uses every pair of `m`, and every
/// other edge of `h` is an edge of `host`.
pub fn verify_extension(host: &Graph, m: &Pairing, h: &HamCycle) -> bool {
    if h.len() != host.order() || m.check_covers(host).is_err() {
        return false;
    }
    if !h.vertices().iter().all(|&v| host.contains(v)) {
        return false;
    }
    let on_cycle: HashSet<(Vertex, Vertex)> =
        h.edges().map(|(u, v)| (u.min(v), u.max(v))).collect();
    m.pairs().iter().all(|p| on_cycle.contains(p))
        && on_cycle
            .iter()
            .all(|&(u, v)| m.contains_pair(u, v) || host.has_edge(u, v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { n: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtenderChoice {
    Constructive,
    Search,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// Rayon over pairings when the `parallel` feature is on, sequential otherwise.
    Parallel,
}

pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 12;

#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    pub search: SearchConfig,
    /// Largest order accepted in exhaustive mode.
    pub exhaustive_bound: usize,
    pub parallelism: Parallelism,
    pub record_wall_time: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            search: SearchConfig::default(),
            exhaustive_bound: DEFAULT_EXHAUSTIVE_BOUND,
            parallelism: Parallelism::Parallel,
            record_wall_time: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    PhConfirmedAtScope,
    NotPh { witness: Certificate },
    SampledNoCounterexample,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Disagreement {
    pub pairing: Vec<String>,
    pub detail: String,
}

/// Outcome of running an extender over many pairings of one graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhReport {
    pub graph: String,
    pub order: usize,
    pub mode: Mode,
    pub extender: ExtenderChoice,
    pub pairings_tested: u64,
    pub extended: u64,
    /// Pairings proven nonextendable, canonical form.
    pub failures: Vec<Vec<String>>,
    pub inconclusive: u64,
    /// Pairings where the constructive extender did not deliver and search was consulted.
    pub escalations: u64,
    /// Constructive and search results that contradict each other.
    pub disagreements: Vec<Disagreement>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl PhReport {
    pub fn is_sound(&self) -> bool {
        self.extended + self.failures.len() as u64 + self.inconclusive == self.pairings_tested
    }
}

fn pairing_strings(m: &Pairing) -> Vec<String> {
    m.pairs().iter().map(|(u, v)| format!("{u} {v}")).collect()
}

pub type Constructive = dyn Fn(&Pairing, &SearchConfig) -> Result<Extension> + Send + Sync;

/// A constructive extender for the family, if one exists.
pub fn constructive_extender(host: &Graph) -> Option<Box<Constructive>> {
    match *host.family() {
        Family::Rook(m1, m2) => Some(Box::new(move |m: &Pairing, cfg: &SearchConfig| {
            extend_rook_with(m1, m2, m, cfg)
        })),
        Family::CompleteBipartite(a, b) if a == b && a >= 2 => Some(Box::new(move |m: &Pairing, _: &SearchConfig| {
            extend_knn(a, m).map(Extension::Extended)
        })),
        // rows of the 2 × n bishop-on-a-rook board are the two sides of K_{n,n}
        Family::BishopOnRook(2, n) if n >= 2 => Some(Box::new(move |m: &Pairing, _: &SearchConfig| {
            extend_knn(n, m).map(Extension::Extended)
        })),
        _ => None,
    }
}

enum PairingResult {
    Extended { escalated: bool, disagreement: Option<String> },
    Failed { witness: Certificate, escalated: bool, disagreement: Option<String> },
    Inconclusive { escalated: bool },
}

fn run_search(host: &Graph, m: &Pairing, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let out = search(host, m, cfg)?;
    if let SearchOutcome::Extendable(c, _) = &out {
        if !verify_extension(host, m, c) {
            return Err(Error::InternalInvariant("search produced an invalid cycle".into()));
        }
    }
    Ok(out)
}

fn check_one(
    host: &Graph,
    m: &Pairing,
    choice: ExtenderChoice,
    constructive: Option<&Constructive>,
    cfg: &SearchConfig,
) -> Result<PairingResult> {
    let from_search = |out: SearchOutcome, escalated: bool, disagreement: Option<String>| match out {
        SearchOutcome::Extendable(..) => PairingResult::Extended { escalated, disagreement },
        SearchOutcome::Nonextendable(_) => PairingResult::Failed {
            witness: Certificate::from_outcome(host, m, &out, cfg.budget),
            escalated,
            disagreement,
        },
        SearchOutcome::Inconclusive(_) => PairingResult::Inconclusive { escalated },
    };
    if choice == ExtenderChoice::Search {
        return Ok(from_search(run_search(host, m, cfg)?, false, None));
    }
    let constructive = constructive.expect("checked by caller");
    let built = constructive(m, cfg);
    let constructed = match &built {
        Ok(Extension::Extended(c)) => verify_extension(host, m, c),
        _ => false,
    };
    if constructed && choice == ExtenderChoice::Constructive {
        return Ok(PairingResult::Extended { escalated: false, disagreement: None });
    }
    // search is authoritative
    let out = run_search(host, m, cfg)?;
    let escalated = !constructed;
    let disagreement = match (&built, out.decision()) {
        (Ok(Extension::Extended(_)), Some(true)) if constructed => None,
        (Ok(Extension::Extended(_)), _) => Some("constructive cycle failed verification".into()),
        (Ok(Extension::Nonextendable(_)), Some(false)) => None,
        (Ok(Extension::Nonextendable(_)), Some(true)) => {
            Some("constructive extender refused an extendable pairing".into())
        }
        (Err(e), Some(true)) => Some(format!("constructive extender failed: {e}")),
        (Err(e), Some(false)) => Some(format!("constructive extender errored on a nonextendable pairing: {e}")),
        (_, None) => None,
    };
    Ok(from_search(out, escalated, disagreement))
}

/// Runs the chosen extender over every pairing (or a seeded sample) of `host` and
/// aggregates the verified results.
pub fn check_ph(
    host: &Graph,
    mode: Mode,
    extender: ExtenderChoice,
    config: &CheckConfig,
) -> Result<PhReport> {
    let started = Instant::now();
    let n = host.order();
    if n % 2 == 1 {
        return Err(Error::NoPairingExists(n));
    }
    let constructive = constructive_extender(host);
    if extender != ExtenderChoice::Search && constructive.is_none() {
        return Err(invalid(format!("no constructive extender for {}", host.family())));
    }
    let cfg = config.search;
    let job = |m: &Pairing| check_one(host, m, extender, constructive.as_deref(), &cfg);

    let results: Vec<(Pairing, PairingResult)> = match mode {
        Mode::Exhaustive => {
            if n > config.exhaustive_bound {
                return Err(invalid(format!(
                    "exhaustive mode is limited to {} vertices; use sampled mode",
                    config.exhaustive_bound
                )));
            }
            let total = pairing_count(n).ok_or_else(|| invalid("too many pairings"))?;
            run_all(total, config.parallelism, |rank| pairing_at(host, rank), &job, || {
                enumerate_pairings(host)
            })?
        }
        Mode::Sampled { n: count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sample = (0..count)
                .map(|_| random_pairing_with(host, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            run_list(sample, config.parallelism, &job)?
        }
    };

    let mut report = PhReport {
        graph: host.family().to_string(),
        order: n,
        mode,
        extender,
        pairings_tested: results.len() as u64,
        extended: 0,
        failures: Vec::new(),
        inconclusive: 0,
        escalations: 0,
        disagreements: Vec::new(),
        verdict: Verdict::Inconclusive,
        wall_time: None,
    };
    let mut witness = None;
    for (m, result) in results {
        let (escalated, disagreement) = match result {
            PairingResult::Extended { escalated, disagreement } => {
                report.extended += 1;
                (escalated, disagreement)
            }
            PairingResult::Failed { witness: w, escalated, disagreement } => {
                report.failures.push(pairing_strings(&m));
                witness.get_or_insert(w);
                (escalated, disagreement)
            }
            PairingResult::Inconclusive { escalated } => {
                report.inconclusive += 1;
                (escalated, None)
            }
        };
        report.escalations += escalated as u64;
        if let Some(detail) = disagreement {
            report.disagreements.push(Disagreement { pairing: pairing_strings(&m), detail });
        }
    }
    report.verdict = match (witness, report.inconclusive, mode) {
        (Some(w), _, _) => Verdict::NotPh { witness: w },
        (None, 0, Mode::Exhaustive) => Verdict::PhConfirmedAtScope,
        (None, 0, Mode::Sampled { .. }) => Verdict::SampledNoCounterexample,
        (None, _, _) => Verdict::Inconclusive,
    };
    if config.record_wall_time {
        report.wall_time = Some(started.elapsed().as_secs_f64());
    }
    Ok(report)
}

type Job<'a> = dyn Fn(&Pairing) -> Result<PairingResult> + Sync + 'a;

fn run_all<I>(
    total: u64,
    parallelism: Parallelism,
    at: impl Fn(u64) -> Result<Pairing> + Sync,
    job: &Job<'_>,
    sequential: impl FnOnce() -> Result<I>,
) -> Result<Vec<(Pairing, PairingResult)>>
where
    I: Iterator<Item = Pairing>,
{
    #[cfg(feature = "parallel")]
    if parallelism == Parallelism::Parallel {
        use rayon::prelude::*;
        return (0..total)
            .into_par_iter()
            .map(|rank| {
                let m = at(rank)?;
                let r = job(&m)?;
                Ok((m, r))
            })
            .collect();
    }
    let _ = (total, parallelism, &at);
    sequential()?
        .map(|m| {
            let r = job(&m)?;
            Ok((m, r))
        })
        .collect()
}

fn run_list(
    sample: Vec<Pairing>,
    parallelism: Parallelism,
    job: &Job<'_>,
) -> Result<Vec<(Pairing, PairingResult)>> {
    #[cfg(feature = "parallel")]
    if parallelism == Parallelism::Parallel {
        use rayon::prelude::*;
        return sample
            .into_par_iter()
            .map(|m| {
                let r = job(&m)?;
                Ok((m, r))
            })
            .collect();
    }
    let _ = parallelism;
    sample
        .into_iter()
        .map(|m| {
            let r = job(&m)?;
            Ok((m, r))
        })
        .collect()
}

/// Exhaustive checks of every `m1 × m2` bishop-on-a-rook graph with even order at most
/// `max_order`, sorted by order. Budget exhaustion marks an instance inconclusive and
/// the run continues.
pub fn explore_bishop_on_rook(max_order: usize, config: &CheckConfig) -> Result<Vec<PhReport>> {
    if max_order > config.exhaustive_bound {
        return Err(invalid(format!(
            "max order {max_order} exceeds the exhaustive bound {}",
            config.exhaustive_bound
        )));
    }
    let mut shapes = Vec::new();
    for m1 in 1..=max_order {
        for m2 in 1..=max_order / m1 {
            if (m1 * m2) % 2 == 0 {
                shapes.push((m1 * m2, m1, m2));
            }
        }
    }
    shapes.sort_unstable();
    shapes
        .into_iter()
        .map(|(_, m1, m2)| {
            let g = build_bishop_on_rook(m1 as u32, m2 as u32)?;
            check_ph(&g, Mode::Exhaustive, ExtenderChoice::Search, config)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_complete_bipartite, build_hypercube, build_rook};
    use crate::matching::cut_pairing;

    fn v(r: u32, c: u32) -> Vertex {
        Vertex::new(r, c)
    }

    #[test]
    fn verifier_accepts_cube_example() {
        // cube vertex (r, c) carries bits 4r + c; pairs 000-111 (not an edge), 001-011, 010-110, 100-101
        let q3 = build_hypercube(3).unwrap();
        let m = Pairing::new([
            (v(0, 0), v(1, 3)),
            (v(0, 1), v(0, 3)),
            (v(0, 2), v(1, 2)),
            (v(1, 0), v(1, 1)),
        ])
        .unwrap();
        // 000 -M- 111 - 011 -M- 001 - 101 -M- 100 - 110 -M- 010 - 000
        let h = HamCycle::new(vec![
            v(0, 0), v(1, 3), v(0, 3), v(0, 1), v(1, 1), v(1, 0), v(1, 2), v(0, 2),
        ])
        .unwrap();
        assert!(verify_extension(&q3, &m, &h));
    }

    #[test]
    fn verifier_rejects_skipped_pair_and_foreign_edges() {
        let g = build_rook(2, 2).unwrap();
        let m = Pairing::new([(v(0, 0), v(1, 1)), (v(0, 1), v(1, 0))]).unwrap();
        // 4-cycle around the square: uses neither diagonal pair
        let square = HamCycle::new(vec![v(0, 0), v(0, 1), v(1, 1), v(1, 0)]).unwrap();
        assert!(!verify_extension(&g, &m, &square));

        let g = build_rook(2, 3).unwrap();
        let m = Pairing::new([(v(0, 0), v(1, 1)), (v(0, 1), v(1, 2)), (v(0, 2), v(1, 0))]).unwrap();
        // every pair used, but 1.1-0.1 is fine while 1.2-0.2... each link below is checked
        let h = HamCycle::new(vec![v(0, 0), v(1, 1), v(0, 1), v(1, 2), v(0, 2), v(1, 0)]).unwrap();
        // 1.1-0.1 and 1.2-0.2 are vertical edges, 1.0-0.0 too: valid
        assert!(verify_extension(&g, &m, &h));
        let bad = HamCycle::new(vec![v(0, 0), v(1, 1), v(1, 0), v(0, 2), v(1, 2), v(0, 1)]).unwrap();
        // 0.1-0.0 closes fine, but 1.1-1.0 is a host edge and 0.2-1.0 a pair... 0.1-1.2 pair...
        // the link 1.0-0.2 is a pair, 1.1-1.0 host, 1.2-0.2 host; 0.0-1.1 pair; 0.1-0.0 host
        assert!(verify_extension(&g, &m, &bad));
        let foreign = HamCycle::new(vec![v(0, 0), v(1, 1), v(0, 2), v(1, 0), v(0, 1), v(1, 2)]).unwrap();
        // 1.1-0.2 is neither a pair nor a rook move
        assert!(!verify_extension(&g, &m, &foreign));
    }

    #[test]
    fn prism_is_not_ph() {
        let g = build_rook(2, 3).unwrap();
        let report = check_ph(&g, Mode::Exhaustive, ExtenderChoice::Both, &CheckConfig::default()).unwrap();
        assert!(report.is_sound());
        assert!(report.disagreements.is_empty());
        assert!(report.failures.contains(&pairing_strings(&cut_pairing(3).unwrap())));
        match report.verdict {
            Verdict::NotPh { witness } => {
                assert_eq!(witness.outcome, crate::search::CertificateOutcome::Nonextendable)
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn knn_and_cube_confirmed() {
        let cfg = CheckConfig::default();
        let k33 = build_complete_bipartite(3, 3).unwrap();
        let r = check_ph(&k33, Mode::Exhaustive, ExtenderChoice::Both, &cfg).unwrap();
        assert_eq!((r.pairings_tested, r.extended), (15, 15));
        assert_eq!(r.verdict, Verdict::PhConfirmedAtScope);
        let q3 = build_hypercube(3).unwrap();
        let r = check_ph(&q3, Mode::Exhaustive, ExtenderChoice::Search, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::PhConfirmedAtScope);
        assert!(check_ph(&q3, Mode::Exhaustive, ExtenderChoice::Constructive, &cfg).is_err());
    }

    #[test]
    fn sequential_and_parallel_reports_match() {
        let g = build_rook(4, 3).unwrap();
        let seq = CheckConfig { parallelism: Parallelism::Sequential, ..CheckConfig::default() };
        let mode = Mode::Sampled { n: 200, seed: 5 };
        let a = check_ph(&g, mode, ExtenderChoice::Both, &seq).unwrap();
        let b = check_ph(&g, mode, ExtenderChoice::Both, &CheckConfig::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.verdict, Verdict::SampledNoCounterexample);
    }

    #[test]
    fn exhaustive_bound_is_enforced() {
        let g = build_rook(4, 4).unwrap();
        assert!(check_ph(&g, Mode::Exhaustive, ExtenderChoice::Search, &CheckConfig::default()).is_err());
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let g = build_rook(2, 3).unwrap();
        let cfg = CheckConfig {
            search: SearchConfig::unpruned().with_budget(Some(1)),
            ..CheckConfig::default()
        };
        let r = check_ph(&g, Mode::Exhaustive, ExtenderChoice::Search, &cfg).unwrap();
        assert!(r.is_sound());
        assert!(r.inconclusive > 0);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn explorer_small() {
        let reports = explore_bishop_on_rook(6, &CheckConfig::default()).unwrap();
        let names: Vec<&str> = reports.iter().map(|r| r.graph.as_str()).collect();
        assert_eq!(names, ["bor 1 2", "bor 2 1", "bor 1 4", "bor 2 2", "bor 4 1", "bor 1 6", "bor 2 3", "bor 3 2", "bor 6 1"]);
        let by = |name: &str| reports.iter().find(|r| r.graph == name).unwrap();
        assert_eq!(by("bor 2 2").verdict, Verdict::PhConfirmedAtScope);
        assert_eq!(by("bor 2 3").verdict, Verdict::PhConfirmedAtScope);
        assert!(explore_bishop_on_rook(14, &CheckConfig::default()).is_err());
    }
}
