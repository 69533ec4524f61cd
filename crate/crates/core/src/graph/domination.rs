use super::{is_independent, Graph, VertexSet};
use crate::error::{Error, Result};

/// Largest graph accepted by [`min_dominating_set`].
pub const MAX_EXACT_DOMINATION_VERTICES: usize = 30;

pub fn is_dominating(g: &Graph, d: &VertexSet) -> bool {
    (0..g.n()).all(|v| d.contains(v) || g.neighbors(v).iter().any(|&w| d.contains(w)))
}

/// A dominating set of minimum size γ(G).
///
/// Iterative deepening on the size; at each level the lowest undominated
/// vertex must be dominated by one of its closed neighbours, which gives
/// the branching.
pub fn min_dominating_set(g: &Graph) -> Result<VertexSet> {
    let n = g.n();
    if n > MAX_EXACT_DOMINATION_VERTICES {
        return Err(Error::cap(
            "exact dominating set vertex count",
            MAX_EXACT_DOMINATION_VERTICES as u64,
            n as u64,
        ));
    }
    let closed: Vec<u64> = g
        .neighbor_masks()?
        .iter()
        .enumerate()
        .map(|(v, m)| m | 1 << v)
        .collect();
    let all = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let max_cover = g.max_degree() as u32 + 1;

    fn go(
        dominated: u64,
        all: u64,
        left: usize,
        closed: &[u64],
        max_cover: u32,
        chosen: &mut Vec<usize>,
    ) -> bool {
        let open = all & !dominated;
        if open == 0 {
            return true;
        }
        if left == 0 || (left as u32) * max_cover < open.count_ones() {
            return false;
        }
        let v = open.trailing_zeros() as usize;
        let mut options = closed[v];
        while options != 0 {
            let u = options.trailing_zeros() as usize;
            options &= options - 1;
            chosen.push(u);
            if go(
                dominated | closed[u],
                all,
                left - 1,
                closed,
                max_cover,
                chosen,
            ) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    for size in 0..=n {
        let mut chosen = Vec::with_capacity(size);
        if go(0, all, size, &closed, max_cover, &mut chosen) {
            return Ok(VertexSet::new(chosen));
        }
    }
    unreachable!("the whole vertex set dominates")
}

/// A maximal independent set built greedily in ascending vertex order. It
/// dominates, and its size is at most α(G).
pub fn greedy_dominating_set(g: &Graph) -> Result<VertexSet> {
    greedy_dominating_set_from(g, &VertexSet::default())
}

/// Extends the independent set `seed` greedily, in ascending vertex order,
/// to a maximal independent set.
pub fn greedy_dominating_set_from(g: &Graph, seed: &VertexSet) -> Result<VertexSet> {
    g.reject_isolated()?;
    g.check_set(seed)?;
    if !is_independent(g, seed) {
        return Err(Error::InvalidGraph(
            "greedy seed is not an independent set".into(),
        ));
    }
    let mut blocked = vec![false; g.n()];
    let mut chosen = Vec::new();
    let mut take = |v: usize, blocked: &mut Vec<bool>| {
        chosen.push(v);
        blocked[v] = true;
        for &w in g.neighbors(v) {
            blocked[w] = true;
        }
    };
    for &v in seed {
        take(v, &mut blocked);
    }
    for v in 0..g.n() {
        if !blocked[v] {
            take(v, &mut blocked);
        }
    }
    Ok(VertexSet::new(chosen))
}
