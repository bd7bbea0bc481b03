//! Pairings (perfect matchings of the complete graph on a vertex set).

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::{Family, Graph, Vertex};

/// A set of disjoint unordered vertex pairs, kept in canonical form:
/// each pair lesser-first, pairs sorted lexicographically.
#[derive(Clone, Debug)]
pub struct Pairing {
    pairs: Vec<(Vertex, Vertex)>,
    partner: HashMap<Vertex, Vertex>,
}

impl PartialEq for Pairing {
    fn eq(&self, other: &Self) -> bool {
        self.pairs == other.pairs
    }
}

impl Eq for Pairing {}

impl std::hash::Hash for Pairing {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.pairs.hash(state);
    }
}

impl Pairing {
    /// Disjoint pairs of distinct vertices; coverage is not checked here.
    pub fn new(pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Pairing> {
        let mut canon: Vec<(Vertex, Vertex)> = pairs
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        canon.sort_unstable();
        let mut partner = HashMap::with_capacity(canon.len() * 2);
        for &(u, v) in &canon {
            if u == v {
                return Err(Error::InvalidPairing(format!("{u} is paired with itself")));
            }
            for (a, b) in [(u, v), (v, u)] {
                if partner.insert(a, b).is_some() {
                    return Err(Error::InvalidPairing(format!("{a} appears in two pairs")));
                }
            }
        }
        Ok(Pairing { pairs: canon, partner })
    }

    /// Like [`Pairing::new`], additionally requiring the pairs to cover exactly `V(ground)`.
    pub fn for_graph(
        ground: &Graph,
        pairs: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Pairing> {
        let p = Pairing::new(pairs)?;
        p.check_covers(ground)?;
        Ok(p)
    }

    pub fn check_covers(&self, ground: &Graph) -> Result<()> {
        if let Some(v) = self.partner.keys().find(|v| !ground.contains(**v)) {
            return Err(Error::InvalidPairing(format!("{v} is not a vertex of the graph")));
        }
        if self.partner.len() != ground.order() {
            return Err(Error::InvalidPairing(format!(
                "pairing covers {} of {} vertices",
                self.partner.len(),
                ground.order()
            )));
        }
        Ok(())
    }

    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn partner(&self, v: Vertex) -> Option<Vertex> {
        self.partner.get(&v).copied()
    }

    pub fn contains_pair(&self, u: Vertex, v: Vertex) -> bool {
        self.partner(u) == Some(v)
    }

    /// Partner of every vertex of `ground`, by vertex index.
    pub fn partner_indices(&self, ground: &Graph) -> Result<Vec<usize>> {
        self.check_covers(ground)?;
        Ok(ground
            .vertices()
            .iter()
            .map(|&v| ground.index_of(self.partner[&v]).expect("covered"))
            .collect())
    }

    /// The pairing obtained by sending every vertex through `f`.
    pub fn mapped(&self, f: impl Fn(Vertex) -> Vertex) -> Pairing {
        Pairing::new(self.pairs.iter().map(|&(u, v)| (f(u), f(v))))
            .expect("relabeling is injective")
    }
}

/// `(n - 1)!!`, the number of pairings of `n` vertices (0 for odd `n`, `None` on overflow).
pub fn pairing_count(n: usize) -> Option<u64> {
    if n % 2 == 1 {
        return Some(0);
    }
    let mut acc: u64 = 1;
    let mut k = n as u64;
    while k > 1 {
        acc = acc.checked_mul(k - 1)?;
        k -= 2;
    }
    Some(acc)
}

fn require_even(ground: &Graph) -> Result<()> {
    if ground.order() % 2 == 1 {
        Err(Error::NoPairingExists(ground.order()))
    } else {
        Ok(())
    }
}

/// Decodes a mixed-radix digit vector: at level `k` the least unmatched vertex is
/// paired with the `digits[k]`-th unmatched vertex above it.
fn decode(vertices: &[Vertex], digits: &[usize]) -> Pairing {
    let mut free: Vec<Vertex> = vertices.to_vec();
    let mut pairs = Vec::with_capacity(digits.len());
    for &d in digits {
        let first = free.remove(0);
        let second = free.remove(d);
        pairs.push((first, second));
    }
    Pairing::new(pairs).expect("decoded pairs are disjoint")
}

/// Every pairing of `V(ground)` exactly once, in the order obtained by pairing the least
/// unmatched vertex with each greater unmatched vertex in turn.
pub struct PairingIter {
    vertices: Vec<Vertex>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for PairingIter {
    type Item = Pairing;

    fn next(&mut self) -> Option<Pairing> {
        if self.done {
            return None;
        }
        let out = decode(&self.vertices, &self.digits);
        let n = self.vertices.len();
        let mut level = self.digits.len();
        loop {
            if level == 0 {
                self.done = true;
                break;
            }
            level -= 1;
            self.digits[level] += 1;
            if self.digits[level] < n - 1 - 2 * level {
                break;
            }
            self.digits[level] = 0;
        }
        Some(out)
    }
}

pub fn enumerate_pairings(ground: &Graph) -> Result<PairingIter> {
    require_even(ground)?;
    Ok(PairingIter {
        vertices: ground.vertices().to_vec(),
        digits: vec![0; ground.order() / 2],
        done: false,
    })
}

/// The pairing at position `rank` of [`enumerate_pairings`].
pub fn pairing_at(ground: &Graph, rank: u64) -> Result<Pairing> {
    require_even(ground)?;
    let n = ground.order();
    let total = pairing_count(n).ok_or_else(|| invalid("too many pairings to rank"))?;
    if rank >= total {
        return Err(invalid(format!("rank {rank} out of range 0..{total}")));
    }
    let levels = n / 2;
    let mut digits = vec![0; levels];
    let mut r = rank;
    for level in (0..levels).rev() {
        let radix = (n - 1 - 2 * level) as u64;
        digits[level] = (r % radix) as usize;
        r /= radix;
    }
    Ok(decode(ground.vertices(), &digits))
}

/// Uniform random pairing of `V(ground)`, drawn from a ChaCha8 stream seeded with `seed`.
pub fn random_pairing(ground: &Graph, seed: u64) -> Result<Pairing> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_pairing_with(ground, &mut rng)
}

pub fn random_pairing_with<R: Rng>(ground: &Graph, rng: &mut R) -> Result<Pairing> {
    require_even(ground)?;
    let n = ground.order();
    let digits: Vec<usize> = (0..n / 2).map(|k| rng.gen_range(0..n - 1 - 2 * k)).collect();
    Ok(decode(ground.vertices(), &digits))
}

/// True iff every pair of `m` is an edge of `ground`.
pub fn is_perfect_matching_of(ground: &Graph, m: &Pairing) -> bool {
    m.check_covers(ground).is_ok() && m.pairs().iter().all(|&(u, v)| ground.has_edge(u, v))
}

/// The vertical edge cut of the `2 × m2` rook graph. Only odd `m2` is accepted since
/// only then is it a nonextendable pairing.
pub fn cut_pairing(m2: u32) -> Result<Pairing> {
    if m2 < 3 || m2 % 2 == 0 {
        return Err(invalid(format!("cut pairing needs an odd m2 >= 3, got {m2}")));
    }
    Pairing::new((0..m2).map(|j| (Vertex::new(0, j), Vertex::new(1, j))))
}

/// How a pairing meets the 4-clique of one column of a `4 × m` rook graph. Rows 0..4
/// are called a, b, c, d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ColumnClass {
    AbCd,
    AcBd,
    AdBc,
}

impl ColumnClass {
    pub const ALL: [ColumnClass; 3] = [ColumnClass::AbCd, ColumnClass::AcBd, ColumnClass::AdBc];

    /// The two row pairs of the class.
    pub fn row_pairs(self) -> [(u32, u32); 2] {
        match self {
            ColumnClass::AbCd => [(0, 1), (2, 3)],
            ColumnClass::AcBd => [(0, 2), (1, 3)],
            ColumnClass::AdBc => [(0, 3), (1, 2)],
        }
    }

    /// Class of the row pair containing row 0.
    fn from_partner_of_a(row: u32) -> Option<ColumnClass> {
        match row {
            1 => Some(ColumnClass::AbCd),
            2 => Some(ColumnClass::AcBd),
            3 => Some(ColumnClass::AdBc),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Column classification of a pairing of `rook 4 m` in which every column is matched internally.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuProfile {
    pub nu_ab_cd: usize,
    pub nu_ac_bd: usize,
    pub nu_ad_bc: usize,
    pub column_classes: Vec<ColumnClass>,
}

impl NuProfile {
    pub fn counts(&self) -> [usize; 3] {
        [self.nu_ab_cd, self.nu_ac_bd, self.nu_ad_bc]
    }

    pub fn from_classes(column_classes: Vec<ColumnClass>) -> NuProfile {
        let mut c = [0; 3];
        for class in &column_classes {
            c[class.index()] += 1;
        }
        NuProfile { nu_ab_cd: c[0], nu_ac_bd: c[1], nu_ad_bc: c[2], column_classes }
    }
}

pub(crate) fn rook4_columns(g: &Graph) -> Result<u32> {
    match g.family() {
        Family::Rook(4, m) => Ok(*m),
        other => Err(invalid(format!("expected rook 4 m, got {other}"))),
    }
}

/// `None` when some column is not matched internally by `m`.
pub fn classify_columns(g: &Graph, m: &Pairing) -> Result<Option<NuProfile>> {
    let cols = rook4_columns(g)?;
    m.check_covers(g)?;
    let mut classes = Vec::with_capacity(cols as usize);
    for col in 0..cols {
        let mate = |row| m.partner(Vertex::new(row, col)).expect("covered");
        let a_mate = mate(0);
        if a_mate.col != col {
            return Ok(None);
        }
        let class = ColumnClass::from_partner_of_a(a_mate.row).expect("distinct row");
        let [_, (p, q)] = class.row_pairs();
        if mate(p) != Vertex::new(q, col) {
            return Ok(None);
        }
        classes.push(class);
    }
    Ok(Some(NuProfile::from_classes(classes)))
}
