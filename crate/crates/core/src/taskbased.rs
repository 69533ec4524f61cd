//! Neighbourhood partitions, the task-based parameter `tb(G)`, the
//! dominating-set construction, and the non-linear variant `β₁`.

use std::collections::HashMap;
use std::sync::RwLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{
    build_index_code, verify_task_based_code, Decoder, EmbeddedCode, SenderEncoder, TaskBasedCode,
};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::graph::{greedy_dominating_set, is_dominating, Graph, VertexSet};
use crate::minrank::{
    minrank_exact, minrank_exact_with, restricted_witness, MinrankCertificate,
    MinrankCertificateRecord, RepresentingMatrix, MAX_FREE_ENTRIES,
};

/// Largest number of sender assignments enumerated.
pub const MAX_PARTITIONS: u64 = 10_000_000;

/// Largest graph accepted by [`beta1_exact_micro`].
pub const MAX_BETA1_VERTICES: usize = 4;

/// A partition of `V` into sets `N_i ⊆ N(i)`, stored as the map `v ↦ f(v)`
/// sending each vertex to the sender whose set contains it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NeighborhoodPartition {
    assignment: Vec<usize>,
}

impl NeighborhoodPartition {
    pub fn new(g: &Graph, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != g.n() {
            return Err(Error::InvalidPartition(format!(
                "assignment covers {} of {} vertices",
                assignment.len(),
                g.n()
            )));
        }
        if let Some((v, &f)) = assignment
            .iter()
            .enumerate()
            .find(|(v, &f)| f >= g.n() || !g.has_edge(*v, f))
        {
            return Err(Error::InvalidPartition(format!(
                "vertex {v} is assigned to {f}, not a neighbour"
            )));
        }
        Ok(NeighborhoodPartition { assignment })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// The senders `S`, ascending.
    pub fn senders(&self) -> VertexSet {
        self.assignment.iter().copied().collect()
    }

    /// `(i, N_i)` for every sender, ascending in `i`.
    pub fn blocks(&self) -> Vec<(usize, VertexSet)> {
        let mut by_sender: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut order: Vec<usize> = (0..self.assignment.len()).collect();
        order.sort_by_key(|&v| (self.assignment[v], v));
        for v in order {
            let s = self.assignment[v];
            match by_sender.last_mut() {
                Some((last, members)) if *last == s => members.push(v),
                _ => by_sender.push((s, vec![v])),
            }
        }
        by_sender
            .into_iter()
            .map(|(s, m)| (s, VertexSet::new(m)))
            .collect()
    }
}

/// Budgets for the exhaustive searches of this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_partitions: u64,
    pub max_free_entries: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_partitions: MAX_PARTITIONS,
            max_free_entries: MAX_FREE_ENTRIES,
        }
    }
}

fn partition_count(g: &Graph, max: u64) -> Result<u64> {
    g.reject_isolated()?;
    let count = (0..g.n()).fold(1u64, |acc, v| acc.saturating_mul(g.degree(v) as u64));
    if count > max {
        return Err(Error::cap("neighbourhood partition count", max, count));
    }
    Ok(count)
}

/// Every neighbourhood partition once, as assignments in mixed-radix order
/// (vertex 0 varies slowest).
pub fn enumerate_partitions(g: &Graph) -> Result<impl Iterator<Item = NeighborhoodPartition> + '_> {
    enumerate_partitions_with(g, MAX_PARTITIONS)
}

pub fn enumerate_partitions_with(
    g: &Graph,
    max_partitions: u64,
) -> Result<impl Iterator<Item = NeighborhoodPartition> + '_> {
    let total = partition_count(g, max_partitions)?;
    Ok(assignments(g, 0, total).map(|assignment| NeighborhoodPartition { assignment }))
}

/// Assignments with the digits of vertices `fixed..` free and earlier ones
/// taken from the counter.
fn assignments(g: &Graph, start: u64, end: u64) -> impl Iterator<Item = Vec<usize>> + '_ {
    (start..end).map(move |mut t| {
        let mut f = vec![0; g.n()];
        for v in (0..g.n()).rev() {
            let d = g.degree(v) as u64;
            f[v] = g.neighbors(v)[(t % d) as usize];
            t /= d;
        }
        f
    })
}

/// One block of an optimal partition with its minrank certificate, in the
/// local indexing of `G[N_i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCertificate {
    pub sender: usize,
    pub receivers: VertexSet,
    pub certificate: MinrankCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TbCertificate {
    pub value: usize,
    pub partition: NeighborhoodPartition,
    pub blocks: Vec<BlockCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRecord {
    pub sender: usize,
    pub receivers: Vec<usize>,
    pub minrank: MinrankCertificateRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TbCertificateRecord {
    pub value: usize,
    pub assignment: Vec<usize>,
    pub blocks: Vec<BlockRecord>,
}

impl From<&TbCertificate> for TbCertificateRecord {
    fn from(c: &TbCertificate) -> Self {
        TbCertificateRecord {
            value: c.value,
            assignment: c.partition.assignment().to_vec(),
            blocks: c
                .blocks
                .iter()
                .map(|b| BlockRecord {
                    sender: b.sender,
                    receivers: b.receivers.as_slice().to_vec(),
                    minrank: (&b.certificate).into(),
                })
                .collect(),
        }
    }
}

/// Per-subset cache shared by the workers of a partition sweep.
struct Memo<T> {
    table: RwLock<HashMap<VertexSet, T>>,
}

impl<T: Clone> Memo<T> {
    fn new() -> Self {
        Memo {
            table: RwLock::new(HashMap::new()),
        }
    }

    fn get_or_try(&self, key: &VertexSet, compute: impl FnOnce() -> Result<T>) -> Result<T> {
        if let Some(v) = self.table.read().expect("memo lock").get(key) {
            return Ok(v.clone());
        }
        let v = compute()?;
        self.table
            .write()
            .expect("memo lock")
            .insert(key.clone(), v.clone());
        Ok(v)
    }
}

/// Minimises `Σ_{i∈S} cost(N_i)` over all partitions, splitting the sweep
/// across workers by the assignment of vertex 0.
fn minimise_over_partitions<F>(
    g: &Graph,
    max_partitions: u64,
    block_cost: F,
) -> Result<(usize, NeighborhoodPartition)>
where
    F: Fn(&VertexSet) -> Result<usize> + Sync,
{
    let total = partition_count(g, max_partitions)?;
    let chunk = total / g.degree(0) as u64;
    let best = (0..g.degree(0) as u64)
        .into_par_iter()
        .map(|c| -> Result<Option<(usize, Vec<usize>)>> {
            let mut best: Option<(usize, Vec<usize>)> = None;
            for f in assignments(g, c * chunk, (c + 1) * chunk) {
                let p = NeighborhoodPartition { assignment: f };
                let mut cost = 0;
                for (_, block) in p.blocks() {
                    cost += block_cost(&block)?;
                }
                if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                    best = Some((cost, p.assignment));
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .min_by_key(|(cost, _)| *cost)
        .expect("a graph without isolated vertices has a partition");
    Ok((best.0, NeighborhoodPartition { assignment: best.1 }))
}

/// Exact `tb(G)`: the minimum over neighbourhood partitions of
/// `Σ minrk₂(G[N_i])`, with the optimal partition and its certificates.
pub fn tb_exact(g: &Graph) -> Result<TbCertificate> {
    tb_exact_with(g, &Limits::default())
}

pub fn tb_exact_with(g: &Graph, limits: &Limits) -> Result<TbCertificate> {
    let exact =
        |u: &VertexSet| minrank_exact_with(&g.induced_subgraph(u)?.0, limits.max_free_entries);
    let memo = Memo::new();
    let minrank = |u: &VertexSet| memo.get_or_try(u, || Ok(exact(u)?.value));
    let (value, partition) = minimise_over_partitions(g, limits.max_partitions, minrank)?;
    let blocks = partition
        .blocks()
        .into_iter()
        .map(|(sender, receivers)| {
            let certificate = exact(&receivers)?;
            Ok(BlockCertificate {
                sender,
                receivers,
                certificate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    debug_assert_eq!(
        value,
        blocks.iter().map(|b| b.certificate.value).sum::<usize>()
    );
    Ok(TbCertificate {
        value,
        partition,
        blocks,
    })
}

/// Sender `i` broadcasts a row basis of its block's witness; receiver `h`
/// decodes from row `h` of that witness.
pub fn build_from_partition(
    g: &Graph,
    partition: &NeighborhoodPartition,
    witnesses: &[RepresentingMatrix],
) -> Result<TaskBasedCode> {
    if partition.assignment().len() != g.n() {
        return Err(Error::InvalidPartition(
            "partition is for a different graph".into(),
        ));
    }
    let blocks = partition.blocks();
    if witnesses.len() != blocks.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} witnesses for {} blocks",
            witnesses.len(),
            blocks.len()
        )));
    }
    let mut senders = Vec::with_capacity(blocks.len());
    // Per receiver: (sender, local decoder, local-to-global vertex map).
    let mut local: Vec<Option<(usize, Decoder, Vec<usize>)>> = vec![None; g.n()];
    for ((sender, receivers), witness) in blocks.iter().zip(witnesses) {
        let (sub, map) = g.induced_subgraph(receivers)?;
        let index_code = build_index_code(witness, &sub)?;
        let sender_nb = g.neighbors(*sender);
        let position: Vec<usize> = map
            .iter()
            .map(|v| {
                sender_nb
                    .binary_search(v)
                    .expect("N_i ⊆ N(i) checked at construction")
            })
            .collect();
        let encoder = BitMatrix::from_rows(
            sender_nb.len(),
            index_code
                .encoder()
                .rows()
                .iter()
                .map(|r| r.scatter(&position, sender_nb.len()))
                .collect(),
        )?;
        senders.push(SenderEncoder {
            sender: *sender,
            encoder,
        });
        for (a, d) in index_code.decoders().iter().enumerate() {
            let global_side: Vec<usize> = sub.neighbors(a).iter().map(|&b| map[b]).collect();
            local[map[a]] = Some((*sender, d.clone(), global_side));
        }
    }

    let mut offsets = HashMap::new();
    let mut total = 0;
    for s in &senders {
        offsets.insert(s.sender, total);
        total += s.encoder.num_rows();
    }
    let decoders = local
        .into_iter()
        .enumerate()
        .map(|(h, entry)| {
            let (sender, d, side_vertices) = entry.expect("blocks cover every vertex");
            let offset = offsets[&sender];
            let broadcast = BitVector::from_bits((0..total).map(|t| {
                t >= offset && t < offset + d.broadcast.len() && d.broadcast.get(t - offset)
            }));
            let nb = g.neighbors(h);
            let positions: Vec<usize> = side_vertices
                .iter()
                .map(|v| nb.binary_search(v).expect("edges of G[N_i] are edges of G"))
                .collect();
            Decoder {
                broadcast,
                side: d.side.scatter(&positions, nb.len()),
            }
        })
        .collect();
    // Senders with a zero-rank witness cannot occur: every block is nonempty.
    let embedded = EmbeddedCode::new(g.n(), senders, decoders)?;
    let code = TaskBasedCode::new(embedded, partition.assignment().to_vec())?;
    let verdict = verify_task_based_code(&code, g)?;
    if !verdict.accepted() {
        return Err(Error::Structural(format!(
            "built code fails at receivers {:?}",
            verdict.failures
        )));
    }
    Ok(code)
}

/// Output of [`tb_upper_dominating`].
#[derive(Clone, Debug)]
pub struct DominatingConstruction {
    pub dominating_set: VertexSet,
    pub partition: NeighborhoodPartition,
    pub code: TaskBasedCode,
    /// Rank of the representing matrix the blocks were cut from.
    pub rank_bound: usize,
    /// `|D|·(rank_bound + 1)`.
    pub bound: usize,
}

/// The partition of the dominating-set construction: the `j`-th vertex of
/// `D` takes its neighbours not already taken, and any vertex of `D` left
/// over goes to its lowest neighbour (necessarily outside `D`).
pub fn dominating_partition(g: &Graph, d: &VertexSet) -> Result<NeighborhoodPartition> {
    g.reject_isolated()?;
    g.check_set(d)?;
    if !is_dominating(g, d) {
        return Err(Error::InvalidGraph(
            "the given set does not dominate".into(),
        ));
    }
    let mut f: Vec<Option<usize>> = vec![None; g.n()];
    for &i in d {
        for &v in g.neighbors(i) {
            f[v].get_or_insert(i);
        }
    }
    for &i in d {
        if f[i].is_none() {
            f[i] = Some(g.neighbors(i)[0]);
        }
    }
    let assignment = f.into_iter().map(|x| x.expect("D dominates")).collect();
    NeighborhoodPartition::new(g, assignment)
}

/// A verified task-based code from a dominating set `D` (default: greedy
/// maximal independent set) and a representing matrix of `G` (default:
/// an exact minrank witness). Each block uses the principal submatrix of
/// that matrix, so its cost is at most the matrix's rank.
pub fn tb_upper_dominating(
    g: &Graph,
    d: Option<&VertexSet>,
    witness: Option<&RepresentingMatrix>,
) -> Result<DominatingConstruction> {
    g.reject_isolated()?;
    let dominating_set = match d {
        Some(d) => d.clone(),
        None => greedy_dominating_set(g)?,
    };
    let searched;
    let witness = match witness {
        Some(w) => w,
        None => {
            searched = minrank_exact(g)?.witness;
            &searched
        }
    };
    let partition = dominating_partition(g, &dominating_set)?;
    let witnesses = partition
        .blocks()
        .iter()
        .map(|(_, block)| restricted_witness(witness, g, block))
        .collect::<Result<Vec<_>>>()?;
    let code = build_from_partition(g, &partition, &witnesses)?;
    let rank_bound = witness.rank();
    let bound = dominating_set.len() * (rank_bound + 1);
    debug_assert!(code.length() <= bound);
    Ok(DominatingConstruction {
        dominating_set,
        partition,
        code,
        rank_bound,
        bound,
    })
}

/// Exact `β₁(G)`, the shortest possibly non-linear code: `⌈log₂ χ⌉` of the
/// confusion graph on `{0,1}ⁿ`, where `x ~ y` when some receiver `i` sees
/// the same side information but wants a different bit.
pub fn beta1_exact_micro(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > MAX_BETA1_VERTICES {
        return Err(Error::cap(
            "non-linear search vertex count",
            MAX_BETA1_VERTICES as u64,
            n as u64,
        ));
    }
    let nb = g.neighbor_masks()?;
    let size = 1usize << n;
    let confused = |x: usize, y: usize| {
        let diff = (x ^ y) as u64;
        (0..n).any(|i| diff >> i & 1 == 1 && diff & nb[i] == 0)
    };
    let adj: Vec<Vec<usize>> = (0..size)
        .map(|x| (0..x).filter(|&y| confused(x, y)).collect())
        .collect();

    // Colours are assigned in vertex order and a new colour may only be the
    // next unused one, so x = 0 always gets colour 0.
    fn colour(x: usize, adj: &[Vec<usize>], colours: &mut [usize], used: usize, k: usize) -> bool {
        if x == colours.len() {
            return true;
        }
        for c in 0..(used + 1).min(k) {
            if adj[x].iter().all(|&y| colours[y] != c) {
                colours[x] = c;
                if colour(x + 1, adj, colours, used.max(c + 1), k) {
                    return true;
                }
            }
        }
        false
    }

    let mut colours = vec![0; size];
    Ok((0..=n)
        .find(|&l| colour(0, &adj, &mut colours, 0, 1 << l))
        .expect("the identity encoding has no confusion"))
}

/// `min Σ β₁(G[N_i])` over neighbourhood partitions.
pub fn tb_nonlinear_micro(g: &Graph) -> Result<usize> {
    tb_nonlinear_micro_with(g, &Limits::default())
}

pub fn tb_nonlinear_micro_with(g: &Graph, limits: &Limits) -> Result<usize> {
    let memo = Memo::new();
    let beta = |u: &VertexSet| memo.get_or_try(u, || beta1_exact_micro(&g.induced_subgraph(u)?.0));
    Ok(minimise_over_partitions(g, limits.max_partitions, beta)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::Scheme;
    use crate::graph::{maximum_independent_set, min_dominating_set};
    use crate::minrank::minrank_pattern_search;
    use crate::peeters;
    use proptest::prelude::*;

    fn edge_plus_isolated() -> Graph {
        Graph::from_edges(3, [(0, 1)]).unwrap()
    }

    #[test]
    fn partition_enumeration_examples() {
        let k2: Vec<_> = enumerate_partitions(&Graph::complete(2)).unwrap().collect();
        assert_eq!(k2.len(), 1);
        assert_eq!(k2[0].assignment(), &[1, 0]);
        let k3: Vec<_> = enumerate_partitions(&Graph::complete(3)).unwrap().collect();
        assert_eq!(k3.len(), 8);
        let distinct: std::collections::HashSet<_> = k3.iter().collect();
        assert_eq!(distinct.len(), 8);
        assert!(matches!(
            enumerate_partitions(&edge_plus_isolated()),
            Err(Error::IsolatedVertex(2))
        ));
    }

    #[test]
    fn partition_enumeration_matches_brute_force() {
        for g in Graph::all_labeled(4).filter(|g| g.isolated_vertex().is_none()) {
            let ours: std::collections::HashSet<Vec<usize>> = enumerate_partitions(&g)
                .unwrap()
                .map(|p| p.assignment().to_vec())
                .collect();
            let mut brute = std::collections::HashSet::new();
            for t in 0..4usize.pow(4) {
                let f: Vec<usize> = (0..4).map(|v| t / 4usize.pow(v) % 4).collect();
                if f.iter().enumerate().all(|(v, &w)| g.has_edge(v, w)) {
                    brute.insert(f);
                }
            }
            assert_eq!(ours, brute);
        }
    }

    #[test]
    fn partition_cap_is_enforced() {
        let big = Graph::complete(12);
        assert!(enumerate_partitions(&big).err().unwrap().is_cap());
    }

    #[test]
    fn blocks_and_validation() {
        let c4 = Graph::cycle(4);
        let p = NeighborhoodPartition::new(&c4, vec![1, 0, 1, 0]).unwrap();
        assert_eq!(
            p.blocks(),
            vec![(0, VertexSet::new([1, 3])), (1, VertexSet::new([0, 2]))]
        );
        assert_eq!(p.senders(), VertexSet::new([0, 1]));
        assert!(NeighborhoodPartition::new(&c4, vec![2, 0, 1, 0]).is_err());
        assert!(NeighborhoodPartition::new(&c4, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn tb_examples() {
        assert_eq!(tb_exact(&Graph::complete(2)).unwrap().value, 2);
        let k3 = tb_exact(&Graph::complete(3)).unwrap();
        assert_eq!(k3.value, 2);
        assert_eq!(k3.blocks.len(), 2);
        assert_eq!(tb_exact(&Graph::cycle(4)).unwrap().value, 4);
        assert!(matches!(
            tb_exact(&edge_plus_isolated()),
            Err(Error::IsolatedVertex(2))
        ));
    }

    #[test]
    fn tb_matches_naive_minimum() {
        // Independent oracle: recompute every partition's cost from scratch.
        for g in Graph::all_labeled(4).filter(|g| g.isolated_vertex().is_none()) {
            let naive = enumerate_partitions(&g)
                .unwrap()
                .map(|p| {
                    p.blocks()
                        .iter()
                        .map(|(_, b)| {
                            minrank_pattern_search(&g.induced_subgraph(b).unwrap().0)
                                .unwrap()
                                .value
                        })
                        .sum::<usize>()
                })
                .min()
                .unwrap();
            let cert = tb_exact(&g).unwrap();
            assert_eq!(cert.value, naive);
            let sum: usize = cert.blocks.iter().map(|b| b.certificate.value).sum();
            assert_eq!(sum, cert.value);
        }
    }

    #[test]
    fn tb_sandwich_small_graphs() {
        for n in 2..=5 {
            for g in Graph::all_labeled(n).filter(|g| g.isolated_vertex().is_none()) {
                let tb = tb_exact(&g).unwrap();
                let mr = minrank_pattern_search(&g).unwrap().value;
                let gamma = min_dominating_set(&g).unwrap().len();
                assert!(tb.value >= 2);
                assert!(mr <= tb.value && tb.value <= gamma * (mr + 1), "{g:?}");
                for b in &tb.blocks {
                    let (sub, _) = g.induced_subgraph(&b.receivers).unwrap();
                    let alpha = maximum_independent_set(&sub).unwrap().len();
                    assert!(
                        alpha <= b.certificate.value && b.certificate.value <= b.receivers.len()
                    );
                }
                let witnesses: Vec<_> = tb
                    .blocks
                    .iter()
                    .map(|b| b.certificate.witness.clone())
                    .collect();
                let code = build_from_partition(&g, &tb.partition, &witnesses).unwrap();
                assert_eq!(code.length(), tb.value);
            }
        }
    }

    #[test]
    fn dominating_construction_examples() {
        let c4 = Graph::cycle(4);
        let out = tb_upper_dominating(&c4, Some(&VertexSet::new([0, 1])), None).unwrap();
        assert_eq!(
            out.partition.blocks(),
            vec![(0, VertexSet::new([1, 3])), (1, VertexSet::new([0, 2]))]
        );
        assert_eq!(out.code.length(), 4);
        assert_eq!(out.bound, 6);

        for n in 2..=6 {
            let kn = Graph::complete(n);
            let out = tb_upper_dominating(&kn, Some(&VertexSet::new([0])), None).unwrap();
            assert_eq!(out.partition.assignment()[0], 1);
            assert_eq!(out.code.length(), 2);
        }
        assert!(tb_upper_dominating(&c4, Some(&VertexSet::new([0])), None).is_err());
        assert!(matches!(
            tb_upper_dominating(&edge_plus_isolated(), None, None),
            Err(Error::IsolatedVertex(2))
        ));
    }

    #[test]
    fn build_from_partition_examples() {
        let k2 = Graph::complete(2);
        let p = NeighborhoodPartition::new(&k2, vec![1, 0]).unwrap();
        let one = RepresentingMatrix::certify(BitMatrix::ones(1, 1), &Graph::empty(1)).unwrap();
        let code = build_from_partition(&k2, &p, &[one.clone(), one.clone()]).unwrap();
        assert_eq!(code.length(), 2);
        assert_eq!(code.assignment(), &[1, 0]);

        let k3 = Graph::complete(3);
        let p = NeighborhoodPartition::new(&k3, vec![1, 0, 1]).unwrap();
        let ones = RepresentingMatrix::certify(BitMatrix::ones(2, 2), &Graph::complete(2)).unwrap();
        let code = build_from_partition(&k3, &p, &[one.clone(), ones]).unwrap();
        assert_eq!(code.length(), 2);
        assert!(code
            .simulator(&k3)
            .unwrap()
            .recovers_all_messages()
            .unwrap());

        let id2 = RepresentingMatrix::certify(BitMatrix::identity(2), &Graph::empty(2)).unwrap();
        // Identity witnesses fit any block but cost its full size.
        let code = build_from_partition(&k3, &p, &[one.clone(), id2.clone()]).unwrap();
        assert_eq!(code.length(), 3);
        assert!(build_from_partition(&k3, &p, &[one]).is_err());
        // A witness for a different block size is a mismatch.
        let wrong = RepresentingMatrix::certify(BitMatrix::identity(3), &Graph::empty(3)).unwrap();
        assert!(build_from_partition(&k3, &p, &[id2, wrong]).is_err());
    }

    #[test]
    fn peeters_complement_construction() {
        let pg = peeters::generate(3).unwrap();
        let g = pg.graph().complement();
        let seed = pg.canonical_independent_set();
        let d = crate::graph::greedy_dominating_set_from(&g, &seed).unwrap();
        let m = pg.representing_matrix();
        assert_eq!(m.rank(), 3);
        let out = tb_upper_dominating(&g, Some(&d), Some(&m)).unwrap();
        assert!(verify_task_based_code(&out.code, &g).unwrap().accepted());
        assert!(out.code.length() <= d.len() * 4);
        assert!(out.code.length() >= 3);
    }

    #[test]
    fn beta1_examples() {
        assert_eq!(beta1_exact_micro(&Graph::complete(3)).unwrap(), 1);
        assert_eq!(beta1_exact_micro(&Graph::path(3)).unwrap(), 2);
        assert_eq!(beta1_exact_micro(&Graph::empty(3)).unwrap(), 3);
        assert_eq!(beta1_exact_micro(&Graph::empty(0)).unwrap(), 0);
        assert!(beta1_exact_micro(&Graph::empty(5)).err().unwrap().is_cap());
    }

    /// Whether some map `{0,1}ⁿ → {0,1}^ℓ` has no confusion, by trying all of them.
    fn brute_force_encodable(g: &Graph, l: usize) -> bool {
        let n = g.n();
        let size = 1usize << n;
        let nb = g.neighbor_masks().unwrap();
        let codes = 1u64 << (l * size);
        (0..codes).any(|e| {
            let enc = |x: usize| (e >> (l * x)) & ((1 << l) - 1);
            (0..size).all(|x| {
                (0..x).all(|y| {
                    let diff = (x ^ y) as u64;
                    enc(x) != enc(y) || !(0..n).any(|i| diff >> i & 1 == 1 && diff & nb[i] == 0)
                })
            })
        })
    }

    #[test]
    fn beta1_matches_brute_force_encodings() {
        for n in 1..=3 {
            for g in Graph::all_labeled(n) {
                let oracle = (0..=n)
                    .find(|&l| l == n || brute_force_encodable(&g, l))
                    .unwrap();
                assert_eq!(beta1_exact_micro(&g).unwrap(), oracle, "{g:?}");
            }
        }
    }

    #[test]
    fn nonlinear_examples_and_comparison() {
        assert_eq!(tb_nonlinear_micro(&Graph::complete(2)).unwrap(), 2);
        assert_eq!(tb_nonlinear_micro(&Graph::complete(3)).unwrap(), 2);
        assert_eq!(tb_nonlinear_micro(&Graph::cycle(4)).unwrap(), 4);
        for n in 2..=5 {
            for g in Graph::all_labeled(n).filter(|g| g.isolated_vertex().is_none()) {
                assert!(tb_nonlinear_micro(&g).unwrap() <= tb_exact(&g).unwrap().value);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn sandwich_on_random_seven_vertex_graphs(mask in any::<u32>()) {
            let g = Graph::from_edge_mask(7, mask as u64 | (mask as u64) << 21);
            prop_assume!(g.isolated_vertex().is_none());
            let tb = tb_exact(&g).unwrap().value;
            let mr = minrank_exact(&g).unwrap().value;
            let gamma = min_dominating_set(&g).unwrap().len();
            prop_assert!(mr <= tb && tb <= gamma * (mr + 1));
        }

        #[test]
        fn dominating_code_verifies(mask in any::<u64>(), n in 2usize..=6) {
            let g = Graph::from_edge_mask(n, mask);
            prop_assume!(g.isolated_vertex().is_none());
            let out = tb_upper_dominating(&g, None, None).unwrap();
            prop_assert!(verify_task_based_code(&out.code, &g).unwrap().accepted());
            prop_assert!(out.code.length() <= out.bound);
            prop_assert!(out.code.simulator(&g).unwrap().recovers_all_messages().unwrap());
        }
    }
}
