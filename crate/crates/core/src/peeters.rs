//! The graph family `G_k` on non-orthogonal vector pairs, and the
//! experiments that probe its pseudo-random structure.
//!
//! The vertices of `G_k` are the pairs `(u, v)` of vectors in F₂ᵏ with
//! `⟨u, v⟩ = 1`. Two vertices `(u₁, v₁)` and `(u₂, v₂)` are adjacent when
//! `⟨u₁, v₂⟩ = ⟨v₁, u₂⟩ = 0`. The complement of `G_k` has minrank exactly
//! `k`, witnessed by the matrix of all inner products `⟨u_x, v_y⟩`.
//!
//! Vertices are numbered in lexicographic order of their labels written as
//! bit strings (coordinate 0 first), `u` major.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, Subspace, MAX_ENUMERATION_DIM};
use crate::graph::{count_cliques, find_clique, Graph, VertexSet};
use crate::minrank::RepresentingMatrix;

/// Largest `k` for which `G_k` is generated.
pub const MAX_K: usize = 7;

/// Largest `k` accepted by the sampling experiments.
pub const MAX_EXPERIMENT_K: usize = 6;

/// Vertex count `(2^k − 1)·2^(k−1)` of `G_k`.
pub fn vertex_count(k: usize) -> usize {
    assert!(k >= 1);
    ((1usize << k) - 1) << (k - 1)
}

/// Degree `(2^(k−1) − 1)·2^(k−2)` of `G_k` (zero for `k = 1`).
pub fn degree(k: usize) -> usize {
    assert!(k >= 1);
    if k == 1 {
        return 0;
    }
    ((1usize << (k - 1)) - 1) << (k - 2)
}

/// `2^(3k/2 − 3)`, the largest non-principal eigenvalue magnitude for `k ≥ 3`.
pub fn second_eigenvalue(k: usize) -> f64 {
    2f64.powf(1.5 * k as f64 - 3.0)
}

#[derive(Clone, Debug)]
pub struct PeetersGraph {
    k: usize,
    graph: Graph,
    // Labels packed with coordinate 0 as the most significant of k bits, so
    // integer order is string order.
    labels: Vec<(u32, u32)>,
}

fn dot(a: u32, b: u32) -> bool {
    (a & b).count_ones() & 1 == 1
}

/// Builds `G_k` with its labels.
pub fn generate(k: usize) -> Result<PeetersGraph> {
    if k == 0 {
        return Err(Error::InvalidGraph("the family starts at k = 1".into()));
    }
    if k > MAX_K {
        return Err(Error::cap("Peeters parameter k", MAX_K as u64, k as u64));
    }
    let side = 1u32 << k;
    let labels: Vec<(u32, u32)> = (0..side)
        .flat_map(|u| (0..side).filter(move |&v| dot(u, v)).map(move |v| (u, v)))
        .collect();
    let adj: Vec<Vec<usize>> = labels
        .par_iter()
        .enumerate()
        .map(|(x, &(ux, vx))| {
            labels
                .iter()
                .enumerate()
                .filter(|&(y, &(uy, vy))| y != x && !dot(ux, vy) && !dot(vx, uy))
                .map(|(y, _)| y)
                .collect()
        })
        .collect();
    Ok(PeetersGraph {
        k,
        graph: Graph::from_sorted_adjacency(adj),
        labels,
    })
}

impl PeetersGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    fn unpack(&self, bits: u32) -> BitVector {
        BitVector::from_bits((0..self.k).map(|j| bits >> (self.k - 1 - j) & 1 == 1))
    }

    fn pack(&self, v: &BitVector) -> u32 {
        (0..self.k).fold(0, |acc, j| acc << 1 | v.get(j) as u32)
    }

    /// The pair `(u, v)` labelling vertex `x`.
    pub fn label(&self, x: usize) -> (BitVector, BitVector) {
        let (u, v) = self.labels[x];
        (self.unpack(u), self.unpack(v))
    }

    /// Index of the vertex labelled `(u, v)`, if that pair is a vertex.
    pub fn vertex_of(&self, u: &BitVector, v: &BitVector) -> Option<usize> {
        if u.len() != self.k || v.len() != self.k {
            return None;
        }
        self.labels
            .binary_search(&(self.pack(u), self.pack(v)))
            .ok()
    }

    /// Labels as `(u, v)` bit strings, by vertex index.
    pub fn label_strings(&self) -> Vec<(String, String)> {
        (0..self.n())
            .map(|x| {
                let (u, v) = self.label(x);
                (u.to_string(), v.to_string())
            })
            .collect()
    }

    /// `M₁ᵀ · M₂`, where column `x` of `M₁` is `u_x` and of `M₂` is `v_x`.
    pub fn inner_product_matrix(&self) -> BitMatrix {
        let n = self.n();
        let m1 = BitMatrix::from_fn(self.k, n, |i, x| self.label(x).0.get(i));
        let m2 = BitMatrix::from_fn(self.k, n, |i, x| self.label(x).1.get(i));
        m1.transpose()
            .multiply(&m2)
            .expect("both factors have k rows")
    }

    /// The representing matrix of the complement, certified and of rank `k`.
    pub fn representing_matrix(&self) -> RepresentingMatrix {
        let m = self.inner_product_matrix();
        RepresentingMatrix::certify_for_complement(m, &self.graph)
            .expect("inner products vanish across every edge of G_k")
    }

    /// The `k` vertices `(e_i, e_i)`: a clique in `G_k`, hence independent in its complement.
    pub fn canonical_independent_set(&self) -> VertexSet {
        VertexSet::new((0..self.k).map(|i| {
            let e = BitVector::unit(self.k, i);
            self.vertex_of(&e, &e).expect("(e_i, e_i) is a vertex")
        }))
    }
}

/// `M[x][y] = ⟨u_x, v_y⟩` for arbitrary labels, certified against `g`.
/// Labels read from a file go through here, so nothing about them is trusted.
pub fn witness_from_labels(
    labels: &[(BitVector, BitVector)],
    g: &Graph,
) -> Result<RepresentingMatrix> {
    let k = labels.first().map_or(0, |(u, _)| u.len());
    if labels.len() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for {} vertices",
            labels.len(),
            g.n()
        )));
    }
    if labels.iter().any(|(u, v)| u.len() != k || v.len() != k) {
        return Err(Error::DimensionMismatch("labels of unequal length".into()));
    }
    let m1 = BitMatrix::from_fn(k, g.n(), |i, x| labels[x].0.get(i));
    let m2 = BitMatrix::from_fn(k, g.n(), |i, x| labels[x].1.get(i));
    RepresentingMatrix::certify(m1.transpose().multiply(&m2)?, g)
}

/// The certified representing matrix of the complement of `G_k`.
pub fn explicit_representing_matrix(k: usize) -> Result<RepresentingMatrix> {
    Ok(generate(k)?.representing_matrix())
}

/// The vertices `(e_i, e_i)` of `G_k`.
pub fn canonical_independent_set(k: usize) -> Result<VertexSet> {
    Ok(generate(k)?.canonical_independent_set())
}

/// Number of pairs `(w₁, w₂) ∈ W₁ × W₂` with `⟨w₁, w₂⟩ = 1`, by enumeration.
pub fn subspace_pair_count(w1: &Subspace, w2: &Subspace) -> Result<u64> {
    let k = w1.ambient_dim();
    if w2.ambient_dim() != k {
        return Err(Error::DimensionMismatch(format!(
            "subspaces of F2^{k} and F2^{}",
            w2.ambient_dim()
        )));
    }
    if k > MAX_ENUMERATION_DIM {
        return Err(Error::cap(
            "subspace pair count ambient dimension",
            MAX_ENUMERATION_DIM as u64,
            k as u64,
        ));
    }
    let second: Vec<u64> = w2
        .elements()
        .map(|e| e.to_mask().expect("small ambient"))
        .collect();
    Ok(w1
        .elements()
        .map(|a| {
            let a = a.to_mask().expect("small ambient");
            second
                .iter()
                .filter(|&&b| (a & b).count_ones() & 1 == 1)
                .count() as u64
        })
        .sum())
}

/// `(2^(k−ℓ) − 2^ℓ) · 2^(k−ℓ−1)`: the guaranteed number of non-orthogonal
/// pairs between two subspaces of dimension at least `k − ℓ`.
pub fn subspace_pair_bound(k: usize, l: usize) -> f64 {
    assert!(l <= k);
    let d = (k - l) as i32;
    (2f64.powi(d) - 2f64.powi(l as i32)) * 2f64.powi(d - 1)
}

/// Size above which every vertex subset of an `(n, d, λ)`-graph contains `K_r`:
/// `((λ + 1) n / d) · (1 + n/d + … + (n/d)^(r−2))`.
pub fn kr_threshold(n: usize, d: usize, lambda: f64, r: usize) -> f64 {
    assert!(r >= 2, "r must be at least 2");
    assert!(d > 0, "d must be positive");
    let ratio = n as f64 / d as f64;
    let tail: f64 = (0..=r - 2).map(|t| ratio.powi(t as i32)).sum();
    (lambda + 1.0) * ratio * tail
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub k: usize,
    pub r: usize,
    pub subset_size: usize,
    pub trials: usize,
    pub successes: usize,
}

impl ThresholdReport {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    pub fn all_succeeded(&self) -> bool {
        self.successes == self.trials
    }
}

fn check_experiment(pg: &PeetersGraph, subset_size: usize) -> Result<()> {
    if pg.k > MAX_EXPERIMENT_K {
        return Err(Error::cap(
            "experiment parameter k",
            MAX_EXPERIMENT_K as u64,
            pg.k as u64,
        ));
    }
    if subset_size > pg.n() {
        return Err(Error::cap("subset size", pg.n() as u64, subset_size as u64));
    }
    Ok(())
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_subset(n: usize, size: usize, rng: &mut ChaCha8Rng) -> VertexSet {
    VertexSet::new(sample(rng, n, size))
}

/// Samples `trials` uniform subsets of `subset_size` vertices and counts how
/// many induce a copy of `K_r`. Trial `t` draws from its own stream of the
/// seeded generator, so results do not depend on scheduling.
pub fn kr_subset_experiment(
    pg: &PeetersGraph,
    r: usize,
    subset_size: usize,
    trials: usize,
    seed: u64,
) -> Result<ThresholdReport> {
    check_experiment(pg, subset_size)?;
    let successes = (0..trials as u64)
        .into_par_iter()
        .filter(|&t| {
            let u = random_subset(pg.n(), subset_size, &mut trial_rng(seed, t));
            let (sub, _) = pg
                .graph
                .induced_subgraph(&u)
                .expect("sampled vertices are in range");
            find_clique(&sub, r).is_some()
        })
        .count();
    Ok(ThresholdReport {
        k: pg.k,
        r,
        subset_size,
        trials,
        successes,
    })
}

/// Runs [`kr_subset_experiment`] at each size; returns every report and the
/// smallest size at which all trials found `K_r`.
pub fn threshold_scan(
    pg: &PeetersGraph,
    r: usize,
    sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<(Vec<ThresholdReport>, Option<usize>)> {
    let reports = sizes
        .iter()
        .map(|&s| kr_subset_experiment(pg, r, s, trials, seed))
        .collect::<Result<Vec<_>>>()?;
    let smallest = reports
        .iter()
        .filter(|r| r.all_succeeded())
        .map(|r| r.subset_size)
        .min();
    Ok((reports, smallest))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliqueCountReport {
    pub k: usize,
    pub r: usize,
    pub subset_size: usize,
    pub exact: u64,
    /// `m^r / r! · 4^(−C(r, 2))`.
    pub predicted: f64,
    pub ratio: f64,
}

/// Exact number of `K_r` copies in a random `m`-subset, against the count
/// expected in a random graph of edge density 1/4.
pub fn clique_count_experiment(
    pg: &PeetersGraph,
    r: usize,
    subset_size: usize,
    seed: u64,
) -> Result<CliqueCountReport> {
    check_experiment(pg, subset_size)?;
    let u = random_subset(pg.n(), subset_size, &mut trial_rng(seed, 0));
    let (sub, _) = pg.graph.induced_subgraph(&u)?;
    let exact = count_cliques(&sub, r)?;
    let m = subset_size as f64;
    let factorial: f64 = (1..=r).map(|i| i as f64).product();
    let pairs = (r * r.saturating_sub(1) / 2) as i32;
    let predicted = m.powi(r as i32) / factorial * 4f64.powi(-pairs);
    let ratio = if predicted > 0.0 {
        exact as f64 / predicted
    } else {
        f64::NAN
    };
    Ok(CliqueCountReport {
        k: pg.k,
        r,
        subset_size,
        exact,
        predicted,
        ratio,
    })
}

/// Among a family of non-orthogonal pairs in F₂ᵏ × F₂ᵏ, finds `r` members
/// `(u_i, v_i)` with `⟨u_i, v_j⟩ = 0` whenever `i ≠ j`. Returns their
/// positions in `family`.
pub fn find_cross_orthogonal_pairs(
    family: &[(BitVector, BitVector)],
    r: usize,
) -> Result<Option<Vec<usize>>> {
    for (t, (u, v)) in family.iter().enumerate() {
        if !u.inner_product(v)? {
            return Err(Error::InvalidGraph(format!(
                "family member {t} is an orthogonal pair"
            )));
        }
    }
    let n = family.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| {
                    y != x
                        && !family[x].0.dot_unchecked(&family[y].1)
                        && !family[x].1.dot_unchecked(&family[y].0)
                })
                .collect()
        })
        .collect();
    Ok(find_clique(&Graph::from_sorted_adjacency(adj), r).map(|s| s.as_slice().to_vec()))
}
