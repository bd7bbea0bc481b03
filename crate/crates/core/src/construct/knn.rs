use crate::cycle::HamCycle;
use crate::error::{invalid, Error, Result};
use crate::graph::{build_complete_bipartite, Vertex};
use crate::matching::Pairing;

/// How the `K_{n,n}` induction went.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KnnTrace {
    /// Number of vertex pairs `u_n, w_n` removed before reaching a closed case.
    pub depth: usize,
    /// The recursion stopped above the `K_{2,2}` base at a level where the pairing
    /// was `{u_i w_i}`.
    pub identity_shortcut: bool,
}

/// Extends a pairing of `K_{n,n}` (row 0 = `u_1..u_n`, row 1 = `w_1..w_n`).
pub fn extend_knn(n: u32, m: &Pairing) -> Result<HamCycle> {
    extend_knn_traced(n, m).map(|(c, _)| c)
}

pub fn extend_knn_traced(n: u32, m: &Pairing) -> Result<(HamCycle, KnnTrace)> {
    if n < 2 {
        return Err(invalid(format!("K_(n,n) needs n >= 2, got {n}")));
    }
    let g = build_complete_bipartite(n, n)?;
    m.check_covers(&g)?;
    let us: Vec<Vertex> = (0..n).map(|i| Vertex::new(0, i)).collect();
    let ws: Vec<Vertex> = (0..n).map(|i| Vertex::new(1, i)).collect();
    let mut trace = KnnTrace::default();
    let order = induct(us, ws, m.clone(), &mut trace)?;
    Ok((HamCycle::new(order)?, trace))
}

fn induct(
    mut us: Vec<Vertex>,
    mut ws: Vec<Vertex>,
    m: Pairing,
    trace: &mut KnnTrace,
) -> Result<Vec<Vertex>> {
    let k = us.len();
    if k == 2 {
        return base_case(&us, &ws, &m);
    }
    if (0..k).all(|i| m.contains_pair(us[i], ws[i])) {
        trace.identity_shortcut = true;
        return Ok((0..k).flat_map(|i| [us[i], ws[i]]).collect());
    }
    let j = (0..k)
        .find(|&i| !m.contains_pair(us[i], ws[i]))
        .expect("identity case handled above");
    us.swap(j, k - 1);
    ws.swap(j, k - 1);
    let (un, wn) = (us.pop().expect("k > 2"), ws.pop().expect("k > 2"));
    let x = m.partner(un).expect("covered");
    let y = m.partner(wn).expect("covered");
    let reduced = Pairing::new(
        m.pairs()
            .iter()
            .copied()
            .filter(|&(a, b)| a != un && b != un && a != wn && b != wn)
            .chain(std::iter::once((x, y))),
    )?;
    trace.depth += 1;
    let inner = induct(us, ws, reduced, trace)?;
    let mut cycle = HamCycle::new(inner)?;
    cycle.splice(x, y, &[un, wn])?;
    Ok(cycle.vertices().to_vec())
}

/// `K_{2,2}` is a 4-cycle; one of the three Hamiltonian cycles of `K_4` on its
/// vertices uses both pairs and two of its edges.
fn base_case(us: &[Vertex], ws: &[Vertex], m: &Pairing) -> Result<Vec<Vertex>> {
    let (u1, u2, w1, w2) = (us[0], us[1], ws[0], ws[1]);
    let candidates = [[u1, u2, w1, w2], [u1, u2, w2, w1], [u1, w1, u2, w2]];
    candidates
        .into_iter()
        .find(|c| {
            (0..4).all(|i| {
                let (a, b) = (c[i], c[(i + 1) % 4]);
                m.contains_pair(a, b) || a.row != b.row
            }) && (0..4).filter(|&i| m.contains_pair(c[i], c[(i + 1) % 4])).count() == 2
        })
        .map(|c| c.to_vec())
        .ok_or_else(|| Error::InternalInvariant("no K_(2,2) completion".into()))
}
