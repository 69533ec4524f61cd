//! Undirected side information graphs and the exact combinatorial solvers
//! built on them.

mod clique;
mod domination;
mod homomorphism;
mod independent;

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

pub use clique::{count_cliques, count_cliques_with_budget, find_clique, DEFAULT_CLIQUE_BUDGET};
pub use domination::{
    greedy_dominating_set, greedy_dominating_set_from, is_dominating, min_dominating_set,
    MAX_EXACT_DOMINATION_VERTICES,
};
pub use homomorphism::{find_homomorphism, homomorphism_exists, MAX_HOMOMORPHISM_SOURCE};
pub use independent::{
    independence_number, is_independent, maximum_independent_set,
    maximum_independent_set_exhaustive, MAX_INDEPENDENCE_VERTICES,
};

/// A simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// The graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Repeated edges collapse; loops are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    /// Adjacency lists must already be sorted, symmetric and loop-free.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        debug_assert!(adj.iter().enumerate().all(|(u, l)| {
            l.windows(2).all(|w| w[0] < w[1])
                && l.iter()
                    .all(|&v| v != u && adj[v].binary_search(&u).is_ok())
        }));
        Graph { adj }
    }

    pub fn complete(n: usize) -> Self {
        Graph {
            adj: (0..n)
                .map(|i| (0..n).filter(|&j| j != i).collect())
                .collect(),
        }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    /// The star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("valid star")
    }

    /// The graph whose edge set is selected by `mask` over the pairs `(u, v)`,
    /// `u < v`, in lexicographic order. Used to sweep all labeled graphs.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_edges(
            n,
            pairs
                .enumerate()
                .filter(|(t, _)| mask >> t & 1 == 1)
                .map(|(_, e)| e),
        )
        .expect("valid pairs")
    }

    /// Every labeled graph on `n` vertices.
    pub fn all_labeled(n: usize) -> impl Iterator<Item = Graph> {
        let pairs = n * n.saturating_sub(1) / 2;
        assert!(pairs < 64);
        (0u64..1 << pairs).map(move |mask| Graph::from_edge_mask(n, mask))
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// The common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    pub fn isolated_vertex(&self) -> Option<usize> {
        self.adj.iter().position(Vec::is_empty)
    }

    pub(crate) fn reject_isolated(&self) -> Result<()> {
        match self.isolated_vertex() {
            Some(v) => Err(Error::IsolatedVertex(v)),
            None => Ok(()),
        }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    /// Same vertices, exactly the missing pairs as edges.
    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = (0..n)
            .map(|u| {
                let mut out = Vec::with_capacity(n - 1 - self.adj[u].len());
                let mut it = self.adj[u].iter().peekable();
                for v in 0..n {
                    if it.peek() == Some(&&v) {
                        it.next();
                    } else if v != u {
                        out.push(v);
                    }
                }
                out
            })
            .collect();
        Graph { adj }
    }

    /// `G[U]`, relabeled so that `U`'s `t`-th smallest vertex becomes `t`.
    /// The returned map sends new labels back to original vertices.
    pub fn induced_subgraph(&self, u: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        self.check_set(u)?;
        let n = self.n();
        let mut position = vec![usize::MAX; n];
        for (t, &v) in u.iter().enumerate() {
            position[v] = t;
        }
        let adj = u
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&w| (position[w] != usize::MAX).then_some(position[w]))
                    .collect()
            })
            .collect();
        Ok((Graph { adj }, u.as_slice().to_vec()))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            });
        }
        Ok(())
    }

    pub fn check_set(&self, u: &VertexSet) -> Result<()> {
        match u.last() {
            Some(v) => self.check_vertex(v),
            None => Ok(()),
        }
    }

    /// Adjacency as bitmasks; only for graphs on at most 64 vertices.
    pub fn neighbor_masks(&self) -> Result<Vec<u64>> {
        if self.n() > 64 {
            return Err(Error::cap("bitmask graph size", 64, self.n() as u64));
        }
        Ok(self
            .adj
            .iter()
            .map(|l| l.iter().fold(0u64, |m, &v| m | 1 << v))
            .collect())
    }

    /// A stable fingerprint of the vertex count and edge set.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }
}

/// A sorted set of distinct vertices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(vertices: I) -> Self {
        let mut v: Vec<usize> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn all(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn from_mask(mask: u64) -> Self {
        VertexSet((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &v| {
            assert!(v < 64, "vertex {v} does not fit a 64-bit mask");
            m | 1 << v
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Position of `v` within the set, if present.
    pub fn index_of(&self, v: usize) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Intersection of two ascending lists.
pub(crate) fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
