//! Pairings of the `4 × m` rook graph, `m` odd.
//!
//! Rows 0..4 are called a, b, c, d and column `i - 1` carries the subscript `i`, so
//! `a_1 = (0, 0)` and `d_m = (3, m - 1)`. Column `i` induces the clique `K_4^i`.
//!
//! * Case 1, some column is not matched internally: split that column off, extend the
//!   induced pairing of the remaining `4 × (m - 1)` board, and splice the column back in.
//! * Case 2, every column is matched internally: normalize rows and columns so the column
//!   classes appear as `ab|cd`, then `ac|bd`, then `ad|bc` with non-increasing counts, and
//!   either emit a fixed cycle (small profiles) or route the b/c rows through the paths
//!   of a cycle of `K_2 □ K_m` and close them up through the a/d rows.

use crate::check::verify_extension;
use crate::cycle::HamCycle;
use crate::error::{invalid, Error, Result};
use crate::graph::{build_rook, Graph, Vertex};
use crate::matching::{classify_columns, ColumnClass, NuProfile, Pairing};
use crate::search::{search, SearchConfig, SearchOutcome};

use super::{extend_rook_with, Extension, RookRelabel};

const A: u32 = 0;
const B: u32 = 1;
const C: u32 = 2;
const D: u32 = 3;

/// Cell in row `row` of column `i` (1-based).
fn cell(row: u32, i: usize) -> Vertex {
    Vertex::new(row, i as u32 - 1)
}

fn internal(msg: impl Into<String>) -> Error {
    Error::InternalInvariant(msg.into())
}

/// Case 1 bookkeeping for the split column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case1Plan {
    pub split_col: u32,
    /// Perfect matching of the split column's `K_4` extending the pairs inside it.
    pub m1_matching: [(Vertex, Vertex); 2],
    /// Each pair `(p, q)` added to complete the column, with the outside partners `(x, y)`
    /// of `p` and `q`.
    pub bridge_pairs: Vec<((Vertex, Vertex), (Vertex, Vertex))>,
}

fn column_pairs(m: &Pairing, col: u32) -> Vec<(Vertex, Vertex)> {
    m.pairs()
        .iter()
        .copied()
        .filter(|(u, v)| u.col == col && v.col == col)
        .collect()
}

/// `None` if every column is matched internally.
pub fn plan_case1(m2: u32, m: &Pairing) -> Result<Option<Case1Plan>> {
    for col in 0..m2 {
        let inside = column_pairs(m, col);
        let added: Vec<(Vertex, Vertex)> = match inside.as_slice() {
            [_, _] => continue,
            [] => vec![
                (Vertex::new(A, col), Vertex::new(B, col)),
                (Vertex::new(C, col), Vertex::new(D, col)),
            ],
            [(s, t)] => {
                let rest: Vec<u32> = (0..4).filter(|&r| r != s.row && r != t.row).collect();
                vec![(Vertex::new(rest[0], col), Vertex::new(rest[1], col))]
            }
            _ => return Err(internal("a column holds more than two pairs")),
        };
        let mut m1_matching: Vec<(Vertex, Vertex)> =
            inside.iter().chain(added.iter()).copied().collect();
        m1_matching.sort_unstable();
        let bridge_pairs = added
            .iter()
            .map(|&(p, q)| {
                let x = m.partner(p).ok_or_else(|| internal(format!("{p} unpaired")))?;
                let y = m.partner(q).ok_or_else(|| internal(format!("{q} unpaired")))?;
                Ok(((p, q), (x, y)))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(Some(Case1Plan {
            split_col: col,
            m1_matching: [m1_matching[0], m1_matching[1]],
            bridge_pairs,
        }));
    }
    Ok(None)
}

/// Case 1: extend the pairing induced on the other columns recursively and splice the
/// split column back into the cycle.
pub fn case1_extend(m2: u32, m: &Pairing, plan: &Case1Plan) -> Result<HamCycle> {
    case1_extend_with(m2, m, plan, &SearchConfig::default())
}

fn case1_extend_with(m2: u32, m: &Pairing, plan: &Case1Plan, config: &SearchConfig) -> Result<HamCycle> {
    let k = plan.split_col;
    let inside = column_pairs(m, k);
    if inside.len() >= 2 || inside.len() + plan.bridge_pairs.len() != 2 {
        return Err(internal("split column does not match the plan"));
    }
    for &((p, q), (x, y)) in &plan.bridge_pairs {
        if m.partner(p) != Some(x) || m.partner(q) != Some(y) || x.col == k || y.col == k {
            return Err(internal(format!("bridge {p}-{q} does not leave the column")));
        }
    }

    // remaining columns, renumbered 0..m2-1
    let squeeze = |v: Vertex| Vertex::new(v.row, if v.col > k { v.col - 1 } else { v.col });
    let unsqueeze = |v: Vertex| Vertex::new(v.row, if v.col >= k { v.col + 1 } else { v.col });
    let reduced = Pairing::new(
        m.pairs()
            .iter()
            .copied()
            .filter(|(u, v)| u.col != k && v.col != k)
            .chain(plan.bridge_pairs.iter().map(|&(_, xy)| xy))
            .map(|(u, v)| (squeeze(u), squeeze(v))),
    )?;
    let inner = match extend_rook_with(4, m2 - 1, &reduced, config)? {
        Extension::Extended(c) => c.mapped(unsqueeze),
        Extension::Nonextendable(_) => {
            return Err(internal(format!("rook 4 {} pairing did not extend", m2 - 1)))
        }
    };

    let mut cycle = inner;
    match (plan.bridge_pairs.as_slice(), inside.as_slice()) {
        ([((p, q), (x, y))], [(s, t)]) => {
            // x p t s q y: through the pair kept inside the column
            cycle.splice(*x, *y, &[*p, *t, *s, *q])?;
        }
        ([((p, q), (x, y)), ((p2, q2), (u, v))], []) => {
            cycle.splice(*x, *y, &[*p, *q])?;
            cycle.splice(*u, *v, &[*p2, *q2])?;
        }
        _ => return Err(internal("split column does not match the plan")),
    }
    Ok(cycle)
}

/// A maximal run of the b/c cycle after deleting the auxiliary pairs, with the
/// a/d-row partners `x` of its first vertex and `y` of its last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgePath {
    pub vertices: Vec<Vertex>,
    pub x: Vertex,
    pub y: Vertex,
}

impl BridgePath {
    pub fn u(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn v(&self) -> Vertex {
        *self.vertices.last().expect("nonempty path")
    }
}

/// Case 2 bookkeeping. `nu`, `paths` and everything derived from them live in the
/// normalized labeling obtained by applying `row_perm` and `col_perm` (old → new).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case2Plan {
    pub nu: NuProfile,
    pub row_perm: [u32; 4],
    pub col_perm: Vec<u32>,
    pub r: usize,
    pub r_prime: usize,
    /// Empty unless `nu_ab_cd >= 3`.
    pub paths: Vec<BridgePath>,
}

impl Case2Plan {
    fn relabel(&self) -> RookRelabel {
        RookRelabel { rows: self.row_perm.to_vec(), cols: self.col_perm.clone() }
    }
}

fn permutations4() -> Vec<[u32; 4]> {
    let mut out = Vec::with_capacity(24);
    for code in 0..256u32 {
        let p = [code & 3, (code >> 2) & 3, (code >> 4) & 3, (code >> 6) & 3];
        if (0..4).all(|r| p.contains(&r)) {
            out.push(p);
        }
    }
    out.sort_unstable();
    out
}

/// Class of a column after sending row `r` to `perm[r]`.
fn permuted_class(class: ColumnClass, perm: &[u32; 4]) -> ColumnClass {
    let [(p, q), (s, t)] = class.row_pairs();
    let mate_of_a = [(perm[p as usize], perm[q as usize]), (perm[s as usize], perm[t as usize])]
        .into_iter()
        .find_map(|(x, y)| match (x, y) {
            (0, o) | (o, 0) => Some(o),
            _ => None,
        })
        .expect("some pair holds row a");
    match mate_of_a {
        1 => ColumnClass::AbCd,
        2 => ColumnClass::AcBd,
        _ => ColumnClass::AdBc,
    }
}

pub fn plan_case2(m2: u32, m: &Pairing) -> Result<Case2Plan> {
    let g = build_rook(4, m2)?;
    let nu = classify_columns(&g, m)?
        .ok_or_else(|| invalid("case 2 needs every column matched internally"))?;

    let row_perm = permutations4()
        .into_iter()
        .find(|perm| {
            let mut counts = [0usize; 3];
            for &class in &nu.column_classes {
                counts[permuted_class(class, perm).index()] += 1;
            }
            counts[0] >= counts[1] && counts[1] >= counts[2]
        })
        .expect("some row order sorts the counts");
    let classes: Vec<ColumnClass> =
        nu.column_classes.iter().map(|&c| permuted_class(c, &row_perm)).collect();
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&i| classes[i]);
    let mut col_perm = vec![0u32; classes.len()];
    for (new, &old) in order.iter().enumerate() {
        col_perm[old] = new as u32;
    }
    let mut sorted = classes.clone();
    sorted.sort();
    let nu = NuProfile::from_classes(sorted);

    let r = nu.nu_ab_cd + nu.nu_ac_bd;
    let r_prime = r - r % 2;
    let mut plan = Case2Plan { nu, row_perm, col_perm, r, r_prime, paths: Vec::new() };
    if plan.nu.nu_ab_cd >= 3 {
        let normalized = m.mapped(|v| plan.relabel().apply(v));
        plan.paths = bc_paths(m2 as usize, r, r_prime, &normalized)?;
    }
    Ok(plan)
}

/// The cycle `H_1` of the b/c rows:
/// `b_1 … b_{r'}, b_{r'+1}, c_{r'+1}, c_{r'+2}, b_{r'+2}, …, c_m, c_{r'}, …, c_1`.
fn bc_cycle(m: usize, r_prime: usize) -> Vec<Vertex> {
    let mut h1: Vec<Vertex> = (1..=r_prime).map(|i| cell(B, i)).collect();
    for (t, i) in (r_prime + 1..=m).enumerate() {
        if t % 2 == 0 {
            h1.extend([cell(B, i), cell(C, i)]);
        } else {
            h1.extend([cell(C, i), cell(B, i)]);
        }
    }
    h1.extend((1..=r_prime).rev().map(|i| cell(C, i)));
    h1
}

/// Auxiliary pairs `M_1 - M`: `b_{2k-1} b_{2k}`, `c_{2k-1} c_{2k}` for `2k <= r'`, and
/// `b_i c_i` for `r' < i <= r`.
fn is_auxiliary(u: Vertex, v: Vertex, r: usize, r_prime: usize) -> bool {
    let (i, j) = (u.col as usize + 1, v.col as usize + 1);
    if u.row == v.row {
        let lo = i.min(j);
        j.abs_diff(i) == 1 && lo % 2 == 1 && i.max(j) <= r_prime
    } else {
        i == j && i > r_prime && i <= r
    }
}

fn bc_paths(m: usize, r: usize, r_prime: usize, normalized: &Pairing) -> Result<Vec<BridgePath>> {
    let h1 = bc_cycle(m, r_prime);
    let n = h1.len();
    let cut_after: Vec<bool> =
        (0..n).map(|i| is_auxiliary(h1[i], h1[(i + 1) % n], r, r_prime)).collect();
    let start = cut_after
        .iter()
        .position(|&c| c)
        .ok_or_else(|| internal("no auxiliary edge on H1"))?;
    let mut paths = Vec::new();
    let mut current = Vec::new();
    for k in 1..=n {
        let i = (start + k) % n;
        current.push(h1[i]);
        if cut_after[i] {
            let vertices = std::mem::take(&mut current);
            let (u, v) = (vertices[0], *vertices.last().expect("nonempty"));
            let x = normalized.partner(u).ok_or_else(|| internal("unpaired"))?;
            let y = normalized.partner(v).ok_or_else(|| internal("unpaired"))?;
            if u == v || ![A, D].contains(&x.row) || ![A, D].contains(&y.row) {
                return Err(internal(format!("path {u}..{v} does not end at a/d partners")));
            }
            paths.push(BridgePath { vertices, x, y });
        }
    }
    if paths.len() != r {
        return Err(internal(format!("expected {r} paths, found {}", paths.len())));
    }
    Ok(paths)
}

/// `M_2 = {x_i y_i} ∪ {a_i d_i : i > r}` on the a/d rows, in normalized labels.
pub(crate) fn ad_pairing(m: usize, plan: &Case2Plan) -> Result<Pairing> {
    Pairing::new(
        plan.paths
            .iter()
            .map(|p| (p.x, p.y))
            .chain((plan.r + 1..=m).map(|i| (cell(A, i), cell(D, i)))),
    )
}

fn fixed_cycle(labels: &[(u32, usize)]) -> HamCycle {
    HamCycle::new(labels.iter().map(|&(row, i)| cell(row, i)).collect()).expect("fixed cycle")
}

/// Profile (1,1,1), `m = 3`.
fn cycle_111() -> HamCycle {
    fixed_cycle(&[
        (A, 1), (B, 1), (C, 1), (D, 1), (D, 3), (A, 3),
        (C, 3), (B, 3), (B, 2), (D, 2), (C, 2), (A, 2),
    ])
}

/// Profile (2,1,0), `m = 3`.
fn cycle_210() -> HamCycle {
    fixed_cycle(&[
        (A, 1), (B, 1), (B, 2), (A, 2), (A, 3), (C, 3),
        (B, 3), (D, 3), (D, 2), (C, 2), (C, 1), (D, 1),
    ])
}

/// Profile (2,2,1), `m = 5`.
fn cycle_221() -> HamCycle {
    fixed_cycle(&[
        (A, 1), (A, 4), (C, 4), (D, 4), (B, 4), (B, 5), (C, 5), (A, 5), (D, 5), (D, 2),
        (C, 2), (C, 1), (D, 1), (D, 3), (B, 3), (C, 3), (A, 3), (A, 2), (B, 2), (B, 1),
    ])
}

pub fn case2_extend(m2: u32, m: &Pairing, plan: &Case2Plan) -> Result<HamCycle> {
    case2_extend_with(m2, m, plan, &SearchConfig::default())
}

fn case2_extend_with(m2: u32, m: &Pairing, plan: &Case2Plan, config: &SearchConfig) -> Result<HamCycle> {
    let relabel = plan.relabel();
    let normalized = m.mapped(|v| relabel.apply(v));
    let g = build_rook(4, m2)?;
    if classify_columns(&g, &normalized)?.as_ref() != Some(&plan.nu) {
        return Err(internal("plan normalization does not match the pairing"));
    }
    let counts = plan.nu.counts();
    let cycle = match counts {
        [1, 1, 1] => cycle_111(),
        [2, 1, 0] => cycle_210(),
        [2, 2, 1] => cycle_221(),
        [a, _, _] if a >= 3 => long_profile(&g, m2 as usize, plan, &normalized, config)?,
        other => return Err(internal(format!("unexpected profile {other:?}"))),
    };
    let back = relabel.inverse();
    Ok(cycle.mapped(|v| back.apply(v)))
}

/// `nu_ab_cd >= 3`: close the b/c paths through a cycle of the a/d rows that carries
/// `M_2`, found by search on `K_2 □ K_m`.
fn long_profile(
    g: &Graph,
    m: usize,
    plan: &Case2Plan,
    normalized: &Pairing,
    config: &SearchConfig,
) -> Result<HamCycle> {
    let m_ad = ad_pairing(m, plan)?;
    let ad_cells: Vec<Vertex> = (1..=m).flat_map(|i| [cell(A, i), cell(D, i)]).collect();
    let g2 = g.induced_subgraph(&ad_cells, "rook-ad-rows")?;
    let mut cycle = match search(&g2, &m_ad, config)? {
        SearchOutcome::Extendable(c, _) => c,
        SearchOutcome::Nonextendable(_) => {
            return Err(internal("a/d pairing does not extend on K_2 x K_m"))
        }
        SearchOutcome::Inconclusive(_) => {
            return Err(Error::BudgetExceeded(config.budget.unwrap_or(u64::MAX)))
        }
    };
    for p in &plan.paths {
        if normalized.partner(p.u()) != Some(p.x) || normalized.partner(p.v()) != Some(p.y) {
            return Err(internal("plan paths do not match the pairing"));
        }
        cycle.splice(p.x, p.y, &p.vertices)?;
    }
    Ok(cycle)
}

/// Extends a pairing of the `4 × m2` rook graph, `m2` odd.
pub fn extend_4xm_odd(m2: u32, m: &Pairing) -> Result<HamCycle> {
    extend_4xm_odd_with(m2, m, &SearchConfig::default())
}

pub(crate) fn extend_4xm_odd_with(m2: u32, m: &Pairing, config: &SearchConfig) -> Result<HamCycle> {
    if m2 < 3 || m2 % 2 == 0 {
        return Err(invalid(format!("expected an odd number of columns >= 3, got {m2}")));
    }
    let g = build_rook(4, m2)?;
    m.check_covers(&g)?;
    let cycle = match plan_case1(m2, m)? {
        Some(plan) => case1_extend_with(m2, m, &plan, config)?,
        None => case2_extend_with(m2, m, &plan_case2(m2, m)?, config)?,
    };
    if !verify_extension(&g, m, &cycle) {
        return Err(internal("constructed cycle failed verification"));
    }
    Ok(cycle)
}
