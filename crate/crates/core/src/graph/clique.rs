use super::{intersect_sorted, Graph, VertexSet};
use crate::error::{Error, Result};

/// Default work budget for [`count_cliques`], in estimated search nodes.
pub const DEFAULT_CLIQUE_BUDGET: u64 = 1_000_000_000;

/// Some set of `r` pairwise adjacent vertices, if one exists.
pub fn find_clique(g: &Graph, r: usize) -> Option<VertexSet> {
    if r == 0 {
        return Some(VertexSet::default());
    }
    let mut cur = Vec::with_capacity(r);
    for v in 0..g.n() {
        let cand: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| w > v).collect();
        cur.push(v);
        if search(g, &cand, r, &mut cur) {
            return Some(VertexSet::new(cur));
        }
        cur.pop();
    }
    None
}

fn search(g: &Graph, cand: &[usize], r: usize, cur: &mut Vec<usize>) -> bool {
    if cur.len() == r {
        return true;
    }
    if cur.len() + cand.len() < r {
        return false;
    }
    for (t, &v) in cand.iter().enumerate() {
        if cur.len() + cand.len() - t < r {
            return false;
        }
        let next = intersect_sorted(&cand[t + 1..], g.neighbors(v));
        cur.push(v);
        if search(g, &next, r, cur) {
            return true;
        }
        cur.pop();
    }
    false
}

/// Number of `r`-vertex complete subgraphs, under [`DEFAULT_CLIQUE_BUDGET`].
pub fn count_cliques(g: &Graph, r: usize) -> Result<u64> {
    count_cliques_with_budget(g, r, DEFAULT_CLIQUE_BUDGET)
}

/// Rejects the instance up front when `n · C(Δ, r − 1)` exceeds `budget`.
pub fn count_cliques_with_budget(g: &Graph, r: usize, budget: u64) -> Result<u64> {
    if r == 0 {
        return Ok(1);
    }
    let estimate = (g.n() as u128).saturating_mul(binomial(g.max_degree() as u64, r as u64 - 1));
    if estimate > budget as u128 {
        return Err(Error::cap(
            "clique counting work estimate",
            budget,
            estimate.min(u64::MAX as u128) as u64,
        ));
    }
    fn go(g: &Graph, cand: &[usize], left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        if cand.len() < left {
            return 0;
        }
        if left == 1 {
            return cand.len() as u64;
        }
        cand.iter()
            .enumerate()
            .map(|(t, &v)| {
                go(
                    g,
                    &intersect_sorted(&cand[t + 1..], g.neighbors(v)),
                    left - 1,
                )
            })
            .sum()
    }
    Ok((0..g.n())
        .map(|v| {
            let cand: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| w > v).collect();
            go(g, &cand, r - 1)
        })
        .sum())
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}
