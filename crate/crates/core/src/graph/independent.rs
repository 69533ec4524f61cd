use super::{Graph, VertexSet};
use crate::error::{Error, Result};

/// Largest graph accepted by the exact independence-number solver.
pub const MAX_INDEPENDENCE_VERTICES: usize = 40;

/// Below this size the plain include/exclude recursion is used.
const EXHAUSTIVE_BELOW: usize = 20;

pub fn is_independent(g: &Graph, set: &VertexSet) -> bool {
    let s = set.as_slice();
    s.iter()
        .enumerate()
        .all(|(t, &u)| s[t + 1..].iter().all(|&v| !g.has_edge(u, v)))
}

/// α(G).
pub fn independence_number(g: &Graph) -> Result<usize> {
    maximum_independent_set(g).map(|s| s.len())
}

/// A maximum independent set.
///
/// Small graphs use exhaustive include/exclude recursion; from 20 vertices
/// on, a maximum clique of the complement is found by branch and bound with
/// a greedy-colouring bound.
pub fn maximum_independent_set(g: &Graph) -> Result<VertexSet> {
    let n = g.n();
    if n > MAX_INDEPENDENCE_VERTICES {
        return Err(Error::cap(
            "independence number vertex count",
            MAX_INDEPENDENCE_VERTICES as u64,
            n as u64,
        ));
    }
    if n < EXHAUSTIVE_BELOW {
        return maximum_independent_set_exhaustive(g);
    }
    let comp: Vec<u64> = g
        .complement()
        .neighbor_masks()
        .expect("cap keeps the graph within 64 vertices");
    let mut best = Vec::new();
    let mut cur = Vec::new();
    let all = if n == 64 { !0 } else { (1u64 << n) - 1 };
    expand(all, &comp, &mut cur, &mut best);
    Ok(VertexSet::new(best))
}

/// Include/exclude recursion on the lowest remaining vertex. Exponential;
/// rejects graphs beyond the solver cap.
pub fn maximum_independent_set_exhaustive(g: &Graph) -> Result<VertexSet> {
    if g.n() > MAX_INDEPENDENCE_VERTICES {
        return Err(Error::cap(
            "independence number vertex count",
            MAX_INDEPENDENCE_VERTICES as u64,
            g.n() as u64,
        ));
    }
    let adj = g.neighbor_masks()?;
    fn go(remaining: u64, adj: &[u64]) -> u64 {
        if remaining == 0 {
            return 0;
        }
        let v = remaining.trailing_zeros() as usize;
        let rest = remaining & !(1 << v);
        let with = go(rest & !adj[v], adj) | 1 << v;
        // A vertex without remaining neighbours is always worth taking.
        if adj[v] & rest == 0 {
            return with;
        }
        let without = go(rest, adj);
        if with.count_ones() >= without.count_ones() {
            with
        } else {
            without
        }
    }
    let all = if g.n() == 64 { !0 } else { (1u64 << g.n()) - 1 };
    Ok(VertexSet::from_mask(go(all, &adj)))
}

/// Greedy colouring of `cand`, returning vertices in colour order with their colour numbers.
fn colour_order(cand: u64, adj: &[u64]) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(cand.count_ones() as usize);
    let mut bounds = Vec::with_capacity(order.capacity());
    let mut uncoloured = cand;
    let mut colour = 0;
    while uncoloured != 0 {
        colour += 1;
        let mut avail = uncoloured;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !(1 << v) & !adj[v];
            uncoloured &= !(1 << v);
            order.push(v);
            bounds.push(colour);
        }
    }
    (order, bounds)
}

fn expand(mut cand: u64, adj: &[u64], cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    let (order, bounds) = colour_order(cand, adj);
    for t in (0..order.len()).rev() {
        if cur.len() + bounds[t] <= best.len() {
            return;
        }
        let v = order[t];
        cur.push(v);
        let next = cand & adj[v];
        if next == 0 {
            if cur.len() > best.len() {
                *best = cur.clone();
            }
        } else {
            expand(next, adj, cur, best);
        }
        cur.pop();
        cand &= !(1 << v);
    }
}
