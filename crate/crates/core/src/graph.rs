//! Graph families on board-cell labels.
//!
//! Every graph, including products and line graphs, lives on [`Vertex`] labels
//! `(row, col)`. The canonical embeddings are:
//!
//! * `complete n`, `empty n`, `path q`: row 0, columns `0..n`.
//! * `knn a b`: row 0 holds the `a` vertices of one side, row 1 the `b` of the other.
//! * products `G □ H`, `G * H`: the vertex pairing the `i`-th vertex of `G` with the
//!   `j`-th vertex of `H` (in label order) becomes `(i, j)`.
//! * line graphs: the edge between the `i`-th and `j`-th vertex (`i < j`) becomes `(i, j)`.
//! * `hypercube n`: the bit string `x` becomes `(x >> k, x & (2^k - 1))` with `k = ceil(n / 2)`,
//!   so `Q_n` is a spanning subgraph of `rook 2^(n-k) 2^k`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A board cell, also used as a coordinate pair for product graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub row: u32,
    pub col: u32,
}

impl Vertex {
    pub const fn new(row: u32, col: u32) -> Self {
        Vertex { row, col }
    }

    pub const fn transposed(self) -> Self {
        Vertex { row: self.col, col: self.row }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.row, self.col)
    }
}

impl FromStr for Vertex {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (r, c) = s
            .split_once('.')
            .ok_or_else(|| format!("vertex label `{s}` is not of the form <row>.<col>"))?;
        let row = r.parse().map_err(|_| format!("bad row in `{s}`"))?;
        let col = c.parse().map_err(|_| format!("bad column in `{s}`"))?;
        Ok(Vertex { row, col })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProductKind {
    Cartesian,
    Conormal,
}

/// Which construction produced a graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Complete(u32),
    Empty(u32),
    Path(u32),
    CompleteBipartite(u32, u32),
    Rook(u32, u32),
    BishopOnRook(u32, u32),
    Hypercube(u32),
    Product(ProductKind, Box<Family>, Box<Family>),
    LineGraphOf(Box<Family>),
    Custom(String),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Complete(n) => write!(f, "complete {n}"),
            Family::Empty(n) => write!(f, "empty {n}"),
            Family::Path(q) => write!(f, "path {q}"),
            Family::CompleteBipartite(a, b) => write!(f, "knn {a} {b}"),
            Family::Rook(a, b) => write!(f, "rook {a} {b}"),
            Family::BishopOnRook(a, b) => write!(f, "bor {a} {b}"),
            Family::Hypercube(n) => write!(f, "hypercube {n}"),
            Family::Product(kind, l, r) => {
                let name = match kind {
                    ProductKind::Cartesian => "cartesian",
                    ProductKind::Conormal => "conormal",
                };
                write!(f, "{name} ({l}) ({r})")
            }
            Family::LineGraphOf(g) => write!(f, "line ({g})"),
            Family::Custom(name) => write!(f, "custom {name}"),
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut tokens = Vec::new();
        let mut word = String::new();
        for ch in s.chars() {
            match ch {
                '(' | ')' => {
                    if !word.is_empty() {
                        tokens.push(std::mem::take(&mut word));
                    }
                    tokens.push(ch.to_string());
                }
                c if c.is_whitespace() => {
                    if !word.is_empty() {
                        tokens.push(std::mem::take(&mut word));
                    }
                }
                c => word.push(c),
            }
        }
        if !word.is_empty() {
            tokens.push(word);
        }
        let mut pos = 0;
        let family = parse_family(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(format!("trailing tokens in family `{s}`"));
        }
        Ok(family)
    }
}

fn parse_family(tokens: &[String], pos: &mut usize) -> std::result::Result<Family, String> {
    let next = |pos: &mut usize| -> std::result::Result<String, String> {
        let t = tokens
            .get(*pos)
            .cloned()
            .ok_or_else(|| "unexpected end of family".to_string())?;
        *pos += 1;
        Ok(t)
    };
    let num = |pos: &mut usize| -> std::result::Result<u32, String> {
        let t = next(pos)?;
        t.parse().map_err(|_| format!("expected a number, found `{t}`"))
    };
    let nested = |pos: &mut usize| -> std::result::Result<Family, String> {
        if next(pos)? != "(" {
            return Err("expected `(`".into());
        }
        let f = parse_family(tokens, pos)?;
        if next(pos)? != ")" {
            return Err("expected `)`".into());
        }
        Ok(f)
    };
    let name = next(pos)?;
    Ok(match name.as_str() {
        "complete" => Family::Complete(num(pos)?),
        "empty" => Family::Empty(num(pos)?),
        "path" => Family::Path(num(pos)?),
        "knn" => Family::CompleteBipartite(num(pos)?, num(pos)?),
        "rook" => Family::Rook(num(pos)?, num(pos)?),
        "bor" => Family::BishopOnRook(num(pos)?, num(pos)?),
        "hypercube" => Family::Hypercube(num(pos)?),
        "cartesian" | "conormal" => {
            let kind = if name == "cartesian" {
                ProductKind::Cartesian
            } else {
                ProductKind::Conormal
            };
            let l = nested(pos)?;
            let r = nested(pos)?;
            Family::Product(kind, Box::new(l), Box::new(r))
        }
        "line" => Family::LineGraphOf(Box::new(nested(pos)?)),
        "custom" => Family::Custom(next(pos)?),
        other => return Err(format!("unknown family `{other}`")),
    })
}

/// An immutable simple undirected graph on [`Vertex`] labels.
#[derive(Clone, Debug)]
pub struct Graph {
    family: Family,
    vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    adjacency: Vec<Vec<usize>>,
    edge_set: HashSet<(usize, usize)>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.vertices == other.vertices
            && self.edge_set == other.edge_set
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from labels and edges. Vertices are sorted; loops,
    /// repeated edges and unknown endpoints are rejected.
    pub fn from_edges<I>(family: Family, vertices: Vec<Vertex>, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut vertices = vertices;
        vertices.sort_unstable();
        let index: HashMap<Vertex, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        if index.len() != vertices.len() {
            return Err(invalid("repeated vertex label"));
        }
        let mut adjacency = vec![Vec::new(); vertices.len()];
        let mut edge_set = HashSet::new();
        for (u, v) in edges {
            let (Some(&i), Some(&j)) = (index.get(&u), index.get(&v)) else {
                return Err(invalid(format!("edge {u} {v} has an endpoint outside the vertex set")));
            };
            if i == j {
                return Err(invalid(format!("loop at {u}")));
            }
            if !edge_set.insert((i.min(j), i.max(j))) {
                return Err(invalid(format!("repeated edge {u} {v}")));
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph { family, vertices, index, adjacency, edge_set })
    }

    /// Builds a graph from vertices and an adjacency predicate evaluated on all pairs.
    fn from_predicate(
        family: Family,
        vertices: Vec<Vertex>,
        adjacent: impl Fn(usize, usize) -> bool,
    ) -> Graph {
        let n = vertices.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(i, j) {
                    edges.push((vertices[i], vertices[j]));
                }
            }
        }
        Graph::from_edges(family, vertices, edges).expect("predicate graphs are simple")
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn size(&self) -> usize {
        self.edge_set.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Vertex {
        self.vertices[i]
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.index.contains_key(&v)
    }

    /// Neighbours of the `i`-th vertex, by index, ascending.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.edge_set.contains(&(i.min(j), i.max(j)))
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.adjacent(i, j),
            _ => false,
        }
    }

    /// All edges as label pairs, lesser label first, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out: Vec<_> = self
            .edge_set
            .iter()
            .map(|&(i, j)| (self.vertices[i], self.vertices[j]))
            .collect();
        out.sort_unstable();
        out
    }

    /// Subgraph induced by `keep`, keeping the original labels.
    pub fn induced_subgraph(&self, keep: &[Vertex], name: &str) -> Result<Graph> {
        let set: HashSet<Vertex> = keep.iter().copied().collect();
        if let Some(v) = keep.iter().find(|v| !self.contains(**v)) {
            return Err(invalid(format!("vertex {v} is not in the graph")));
        }
        let edges = self
            .edges()
            .into_iter()
            .filter(|(u, v)| set.contains(u) && set.contains(v))
            .collect::<Vec<_>>();
        let mut vertices: Vec<Vertex> = set.into_iter().collect();
        vertices.sort_unstable();
        Graph::from_edges(Family::Custom(name.to_string()), vertices, edges)
    }

    /// The same graph with every label sent through `f`, which must be injective.
    pub fn relabeled(&self, family: Family, f: impl Fn(Vertex) -> Vertex) -> Result<Graph> {
        let vertices = self.vertices.iter().map(|&v| f(v)).collect();
        let edges = self.edges().into_iter().map(|(u, v)| (f(u), f(v)));
        Graph::from_edges(family, vertices, edges)
    }
}

fn row_of(n: u32) -> Vec<Vertex> {
    (0..n).map(|j| Vertex::new(0, j)).collect()
}

fn positive(name: &str, n: u32) -> Result<()> {
    if n == 0 {
        Err(invalid(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

pub fn build_complete(n: u32) -> Result<Graph> {
    positive("n", n)?;
    Ok(Graph::from_predicate(Family::Complete(n), row_of(n), |_, _| true))
}

/// The edgeless graph on `n` vertices.
pub fn build_empty(n: u32) -> Result<Graph> {
    positive("n", n)?;
    Ok(Graph::from_predicate(Family::Empty(n), row_of(n), |_, _| false))
}

pub fn build_path(q: u32) -> Result<Graph> {
    positive("q", q)?;
    Ok(Graph::from_predicate(Family::Path(q), row_of(q), |i, j| j == i + 1))
}

/// `K_{a,b}`: row 0 is the side of size `a`, row 1 the side of size `b`.
pub fn build_complete_bipartite(a: u32, b: u32) -> Result<Graph> {
    positive("a", a)?;
    positive("b", b)?;
    let vertices: Vec<Vertex> = (0..a)
        .map(|j| Vertex::new(0, j))
        .chain((0..b).map(|j| Vertex::new(1, j)))
        .collect();
    let rows: Vec<u32> = vertices.iter().map(|v| v.row).collect();
    Ok(Graph::from_predicate(
        Family::CompleteBipartite(a, b),
        vertices,
        |i, j| rows[i] != rows[j],
    ))
}

fn product(
    kind: ProductKind,
    g: &Graph,
    h: &Graph,
    adjacent: impl Fn((usize, usize), (usize, usize)) -> bool,
) -> Result<Graph> {
    if g.order() == 0 || h.order() == 0 {
        return Err(invalid("product of an empty graph"));
    }
    let (ng, nh) = (g.order(), h.order());
    let coords: Vec<(usize, usize)> =
        (0..ng).flat_map(|i| (0..nh).map(move |j| (i, j))).collect();
    let vertices = coords
        .iter()
        .map(|&(i, j)| Vertex::new(i as u32, j as u32))
        .collect();
    let family = Family::Product(kind, Box::new(g.family.clone()), Box::new(h.family.clone()));
    Ok(Graph::from_predicate(family, vertices, |a, b| adjacent(coords[a], coords[b])))
}

/// `G □ H`: equal in one coordinate and adjacent in the other.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Graph> {
    product(ProductKind::Cartesian, g, h, |(a, b), (c, d)| {
        (a == c && h.adjacent(b, d)) || (b == d && g.adjacent(a, c))
    })
}

/// `G * H`: adjacent in the first coordinate or adjacent in the second.
pub fn conormal_product(g: &Graph, h: &Graph) -> Result<Graph> {
    product(ProductKind::Conormal, g, h, |(a, b), (c, d)| {
        g.adjacent(a, c) || h.adjacent(b, d)
    })
}

/// `L(G)`: the edge joining the `i`-th and `j`-th vertices of `g` becomes `(i, j)`.
pub fn line_graph(g: &Graph) -> Result<Graph> {
    let mut ends: Vec<(usize, usize)> = g.edge_set.iter().copied().collect();
    if ends.is_empty() {
        return Err(invalid("line graph of an edgeless graph"));
    }
    ends.sort_unstable();
    let vertices = ends
        .iter()
        .map(|&(i, j)| Vertex::new(i as u32, j as u32))
        .collect();
    Ok(Graph::from_predicate(
        Family::LineGraphOf(Box::new(g.family.clone())),
        vertices,
        |a, b| {
            let ((p, q), (r, s)) = (ends[a], ends[b]);
            p == r || p == s || q == r || q == s
        },
    ))
}

/// The `m1 × m2` rook graph `K_{m1} □ K_{m2}`; cell `(i, j)` is row `i`, column `j`.
pub fn build_rook(m1: u32, m2: u32) -> Result<Graph> {
    let g = cartesian_product(&build_complete(m1)?, &build_complete(m2)?)?;
    Ok(Graph { family: Family::Rook(m1, m2), ..g })
}

/// The `m1 × m2` bishop-on-a-rook graph `K_{m1} * empty(m2)`: cells adjacent iff rows differ.
pub fn build_bishop_on_rook(m1: u32, m2: u32) -> Result<Graph> {
    let g = conormal_product(&build_complete(m1)?, &build_empty(m2)?)?;
    Ok(Graph { family: Family::BishopOnRook(m1, m2), ..g })
}

pub const MAX_HYPERCUBE_DIM: u32 = 20;

pub fn build_hypercube(n: u32) -> Result<Graph> {
    if n == 0 || n > MAX_HYPERCUBE_DIM {
        return Err(invalid(format!("hypercube dimension must be in 1..={MAX_HYPERCUBE_DIM}")));
    }
    let low = n.div_ceil(2);
    let mask = (1u32 << low) - 1;
    let label = |x: u32| Vertex::new(x >> low, x & mask);
    let vertices: Vec<Vertex> = (0..1u32 << n).map(label).collect();
    let mut edges = Vec::with_capacity((n as usize) << (n - 1));
    for x in 0..1u32 << n {
        for bit in 0..n {
            let y = x ^ (1 << bit);
            if x < y {
                edges.push((label(x), label(y)));
            }
        }
    }
    Graph::from_edges(Family::Hypercube(n), vertices, edges)
}

/// The Petersen graph: outer 5-cycle on row 0, inner pentagram on row 1, spokes `(0,i)-(1,i)`.
pub fn build_petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((Vertex::new(0, i), Vertex::new(0, (i + 1) % 5)));
        edges.push((Vertex::new(1, i), Vertex::new(1, (i + 2) % 5)));
        edges.push((Vertex::new(0, i), Vertex::new(1, i)));
    }
    let vertices = (0..2).flat_map(|r| (0..5).map(move |c| Vertex::new(r, c))).collect();
    Graph::from_edges(Family::Custom("petersen".into()), vertices, edges)
        .expect("petersen graph is simple")
}

/// Rebuilds a graph from its family tag alone, when the tag names a builder.
pub fn build_family(family: &Family) -> Result<Graph> {
    match family {
        Family::Complete(n) => build_complete(*n),
        Family::Empty(n) => build_empty(*n),
        Family::Path(q) => build_path(*q),
        Family::CompleteBipartite(a, b) => build_complete_bipartite(*a, *b),
        Family::Rook(a, b) => build_rook(*a, *b),
        Family::BishopOnRook(a, b) => build_bishop_on_rook(*a, *b),
        Family::Hypercube(n) => build_hypercube(*n),
        Family::Product(kind, l, r) => {
            let (l, r) = (build_family(l)?, build_family(r)?);
            match kind {
                ProductKind::Cartesian => cartesian_product(&l, &r),
                ProductKind::Conormal => conormal_product(&l, &r),
            }
        }
        Family::LineGraphOf(g) => line_graph(&build_family(g)?),
        Family::Custom(name) if name == "petersen" => Ok(build_petersen()),
        Family::Custom(name) => Err(Error::InvalidParameter(format!(
            "custom family `{name}` has no builder"
        ))),
    }
}
