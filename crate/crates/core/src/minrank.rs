//! Representing matrices and `minrk₂`.
//!
//! A square matrix over GF(2) represents a graph when its diagonal is all
//! ones and every off-diagonal entry at a non-edge is zero; entries on
//! edges are free, and the two entries of an undirected edge are chosen
//! independently. `minrk₂(G)` is the least rank of such a matrix and equals
//! the shortest linear index code for `G`.
//!
//! Three independent routes compute it exactly on small graphs:
//! [`minrank_pattern_search`] sweeps every completion of the fit pattern,
//! [`min_linear_code_length`] sweeps encoder row spaces against the
//! decodability criterion, and [`minrank_via_homomorphism`] looks for the
//! least `k` admitting a homomorphism from the complement into `G_k`.

use serde::{Deserialize, Serialize};

use crate::code::verify_linear_decodability;
use crate::error::{Error, Result};
use crate::gf2::{enumerate_subspaces, rank_u64, subspaces_uncapped, BitMatrix};
use crate::graph::{
    greedy_dominating_set, homomorphism_exists, maximum_independent_set, Graph, VertexSet,
    MAX_INDEPENDENCE_VERTICES,
};
use crate::peeters;

/// Default cap on free entries (twice the edge count) for [`minrank_pattern_search`].
pub const MAX_FREE_ENTRIES: usize = 26;

/// Largest graph accepted by [`min_linear_code_length`].
pub const MAX_ENCODER_SEARCH_VERTICES: usize = 5;

/// Largest graph accepted by [`minrank_via_homomorphism`].
pub const MAX_HOMOMORPHISM_VERTICES: usize = 4;

/// A matrix certified to represent some graph, with its rank cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentingMatrix {
    matrix: BitMatrix,
    rank: usize,
}

impl RepresentingMatrix {
    /// Checks the fit pattern against `g`.
    pub fn certify(matrix: BitMatrix, g: &Graph) -> Result<Self> {
        if !represents(&matrix, g)? {
            return Err(Error::PatternViolation(format!(
                "{}x{} matrix does not fit the pattern of the graph",
                matrix.num_rows(),
                matrix.num_cols()
            )));
        }
        let rank = matrix.rank();
        Ok(RepresentingMatrix { matrix, rank })
    }

    /// Checks the fit pattern against the complement of `base` without building it.
    pub(crate) fn certify_for_complement(matrix: BitMatrix, base: &Graph) -> Result<Self> {
        check_square(&matrix, base)?;
        for i in 0..base.n() {
            if !matrix.get(i, i) {
                return Err(Error::PatternViolation(format!(
                    "zero diagonal entry at {i}"
                )));
            }
            // Non-edges of the complement are exactly the edges of the base graph.
            if let Some(&j) = base.neighbors(i).iter().find(|&&j| matrix.get(i, j)) {
                return Err(Error::PatternViolation(format!(
                    "nonzero entry ({i}, {j}) at a non-edge"
                )));
            }
        }
        let rank = matrix.rank();
        Ok(RepresentingMatrix { matrix, rank })
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> BitMatrix {
        self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> usize {
        self.matrix.num_rows()
    }
}

fn check_square(m: &BitMatrix, g: &Graph) -> Result<()> {
    if m.num_rows() != g.n() || m.num_cols() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix against a graph on {} vertices",
            m.num_rows(),
            m.num_cols(),
            g.n()
        )));
    }
    Ok(())
}

/// Whether `m` has a unit diagonal and zeros at every non-edge of `g`.
pub fn represents(m: &BitMatrix, g: &Graph) -> Result<bool> {
    check_square(m, g)?;
    Ok((0..g.n()).all(|i| m.get(i, i) && m.row(i).iter_ones().all(|j| j == i || g.has_edge(i, j))))
}

/// Exact `minrk₂` with an optimal witness and an independent-set lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinrankCertificate {
    pub value: usize,
    pub witness: RepresentingMatrix,
    pub lower_bound: VertexSet,
}

/// Serializable view of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinrankCertificateRecord {
    pub value: usize,
    pub witness_matrix: Vec<String>,
    pub lower_bound_witness: Vec<usize>,
}

impl From<&MinrankCertificate> for MinrankCertificateRecord {
    fn from(c: &MinrankCertificate) -> Self {
        MinrankCertificateRecord {
            value: c.value,
            witness_matrix: c.witness.matrix().to_row_strings(),
            lower_bound_witness: c.lower_bound.as_slice().to_vec(),
        }
    }
}

/// Exact `minrk₂` by enumerating every completion of the fit pattern, under
/// the default cap of [`MAX_FREE_ENTRIES`] free entries.
pub fn minrank_pattern_search(g: &Graph) -> Result<MinrankCertificate> {
    minrank_pattern_search_with(g, MAX_FREE_ENTRIES)
}

/// As [`minrank_pattern_search`] with an explicit cap on free entries.
///
/// Completions are visited in Gray-code order, so consecutive candidates
/// differ in one entry. The sweep stops as soon as the rank meets the size
/// of the independent set found up front.
pub fn minrank_pattern_search_with(
    g: &Graph,
    max_free_entries: usize,
) -> Result<MinrankCertificate> {
    let n = g.n();
    let free_count = 2 * g.edge_count();
    if free_count > max_free_entries {
        return Err(Error::cap(
            "pattern search free entries",
            max_free_entries as u64,
            free_count as u64,
        ));
    }
    if n > 64 {
        return Err(Error::cap("pattern search vertex count", 64, n as u64));
    }
    let lower_bound = independent_lower_bound(g)?;
    let free: Vec<(usize, usize)> = g.edges().flat_map(|(u, v)| [(u, v), (v, u)]).collect();

    let mut rows: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    let mut scratch = rows.clone();
    let mut best = n;
    let mut best_rows = rows.clone();
    if best > lower_bound.len() {
        for t in 1u64..1 << free.len() {
            let (i, j) = free[t.trailing_zeros() as usize];
            rows[i] ^= 1 << j;
            scratch.copy_from_slice(&rows);
            let r = rank_u64(&mut scratch);
            if r < best {
                best = r;
                best_rows.copy_from_slice(&rows);
                if best == lower_bound.len() {
                    break;
                }
            }
        }
    }
    let matrix = BitMatrix::from_fn(n, n, |i, j| best_rows[i] >> j & 1 == 1);
    let witness = RepresentingMatrix::certify(matrix, g)?;
    debug_assert_eq!(witness.rank(), best);
    Ok(MinrankCertificate {
        value: best,
        witness,
        lower_bound,
    })
}

/// Largest graph for the row-space sweep inside [`minrank_exact`].
pub const MAX_ROW_SPACE_SWEEP_VERTICES: usize = 7;

/// Exact `minrk₂` by whichever sweep fits: the pattern search when the
/// graph has few edges, otherwise a sweep over candidate row spaces, which
/// is cheap for dense graphs on up to seven vertices.
pub fn minrank_exact(g: &Graph) -> Result<MinrankCertificate> {
    minrank_exact_with(g, MAX_FREE_ENTRIES)
}

/// As [`minrank_exact`] with an explicit pattern-search cap.
pub fn minrank_exact_with(g: &Graph, max_free_entries: usize) -> Result<MinrankCertificate> {
    if 2 * g.edge_count() <= max_free_entries || g.n() > MAX_ROW_SPACE_SWEEP_VERTICES {
        return minrank_pattern_search_with(g, max_free_entries);
    }
    minrank_row_space_sweep(g)
}

fn minrank_row_space_sweep(g: &Graph) -> Result<MinrankCertificate> {
    let n = g.n();
    let closed: Vec<u64> = g
        .neighbor_masks()?
        .iter()
        .enumerate()
        .map(|(i, m)| m | 1 << i)
        .collect();
    let lower_bound = independent_lower_bound(g)?;
    for dim in lower_bound.len()..=n {
        for space in subspaces_uncapped(n, dim) {
            let elements: Vec<u64> = space
                .elements()
                .map(|v| v.to_mask().expect("n <= 6"))
                .collect();
            let rows: Option<Vec<u64>> = (0..n)
                .map(|i| {
                    elements
                        .iter()
                        .copied()
                        .find(|&e| e >> i & 1 == 1 && e & !closed[i] == 0)
                })
                .collect();
            if let Some(rows) = rows {
                let matrix = BitMatrix::from_fn(n, n, |i, j| rows[i] >> j & 1 == 1);
                let witness = RepresentingMatrix::certify(matrix, g)?;
                debug_assert!(witness.rank() <= dim);
                return Ok(MinrankCertificate {
                    value: witness.rank(),
                    witness,
                    lower_bound,
                });
            }
        }
    }
    unreachable!("the identity matrix represents every graph")
}

fn independent_lower_bound(g: &Graph) -> Result<VertexSet> {
    if g.n() <= MAX_INDEPENDENCE_VERTICES {
        maximum_independent_set(g)
    } else if g.isolated_vertex().is_none() {
        greedy_dominating_set(g)
    } else {
        Ok(VertexSet::default())
    }
}

/// The shortest linear index code found by sweeping encoder row spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCodeSearch {
    pub length: usize,
    pub encoder: BitMatrix,
}

/// Smallest `ℓ` for which some `ℓ × n` encoder lets every receiver decode.
///
/// An encoder matters only through its row space, so each `ℓ`-dimensional
/// subspace of F₂ⁿ is tried once.
pub fn min_linear_code_length(g: &Graph) -> Result<LinearCodeSearch> {
    let n = g.n();
    if n > MAX_ENCODER_SEARCH_VERTICES {
        return Err(Error::cap(
            "encoder search vertex count",
            MAX_ENCODER_SEARCH_VERTICES as u64,
            n as u64,
        ));
    }
    for length in 0..=n {
        for space in enumerate_subspaces(n, length)? {
            let encoder = space.basis();
            let mut ok = true;
            for i in 0..n {
                if !verify_linear_decodability(encoder, g, i)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(LinearCodeSearch {
                    length,
                    encoder: encoder.clone(),
                });
            }
        }
    }
    unreachable!("the identity encoder always decodes")
}

/// Smallest `k` with a homomorphism from the complement of `g` into `G_k`.
pub fn minrank_via_homomorphism(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > MAX_HOMOMORPHISM_VERTICES {
        return Err(Error::cap(
            "homomorphism minrank vertex count",
            MAX_HOMOMORPHISM_VERTICES as u64,
            n as u64,
        ));
    }
    if n == 0 {
        return Ok(0);
    }
    let comp = g.complement();
    for k in 1..=n {
        if homomorphism_exists(&comp, peeters::generate(k)?.graph())? {
            return Ok(k);
        }
    }
    unreachable!("the labels (e_i, e_i) give a homomorphism into G_n")
}

/// The principal submatrix on `u`, certified against `G[U]`.
pub fn restricted_witness(
    m: &RepresentingMatrix,
    g: &Graph,
    u: &VertexSet,
) -> Result<RepresentingMatrix> {
    check_square(m.matrix(), g)?;
    let (sub, _) = g.induced_subgraph(u)?;
    let restricted = m.matrix().principal_submatrix(u.as_slice());
    RepresentingMatrix::certify(restricted, &sub).map_err(|e| match e {
        Error::PatternViolation(msg) => Error::PatternViolation(format!(
            "internal: principal submatrix lost the fit pattern: {msg}"
        )),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_independent;

    #[test]
    fn represents_examples() {
        assert!(represents(&BitMatrix::ones(4, 4), &Graph::complete(4)).unwrap());
        assert!(represents(&BitMatrix::identity(5), &Graph::cycle(5)).unwrap());
        assert!(!represents(&BitMatrix::ones(3, 3), &Graph::path(3)).unwrap());
        assert!(represents(&BitMatrix::ones(3, 2), &Graph::path(3)).is_err());
        assert!(RepresentingMatrix::certify(BitMatrix::zeros(2, 2), &Graph::complete(2)).is_err());
    }

    #[test]
    fn pattern_search_examples() {
        let k4 = minrank_pattern_search(&Graph::complete(4)).unwrap();
        assert_eq!(k4.value, 1);
        assert_eq!(k4.witness.matrix(), &BitMatrix::ones(4, 4));

        assert_eq!(minrank_pattern_search(&Graph::empty(4)).unwrap().value, 4);
        assert_eq!(minrank_pattern_search(&Graph::cycle(4)).unwrap().value, 2);
        assert!(minrank_pattern_search(&Graph::complete(6))
            .unwrap_err()
            .is_cap());
    }

    #[test]
    fn c5_has_minrank_three_by_full_enumeration() {
        // Independent oracle: every completion of the 10 free entries, no early exit.
        let g = Graph::cycle(5);
        let free: Vec<(usize, usize)> = g.edges().flat_map(|(u, v)| [(u, v), (v, u)]).collect();
        let brute = (0u32..1 << free.len())
            .map(|mask| {
                BitMatrix::from_fn(5, 5, |i, j| {
                    i == j
                        || free
                            .iter()
                            .enumerate()
                            .any(|(t, &e)| e == (i, j) && mask >> t & 1 == 1)
                })
                .rank()
            })
            .min()
            .unwrap();
        assert_eq!(brute, 3);
        let cert = minrank_pattern_search(&g).unwrap();
        assert_eq!(cert.value, 3);
        assert_eq!(cert.witness.rank(), 3);
        assert!(represents(cert.witness.matrix(), &g).unwrap());
    }

    #[test]
    fn certificates_are_consistent() {
        for n in 0..=5 {
            for g in Graph::all_labeled(n) {
                let c = minrank_pattern_search(&g).unwrap();
                assert_eq!(c.witness.rank(), c.value);
                assert!(represents(c.witness.matrix(), &g).unwrap());
                assert!(is_independent(&g, &c.lower_bound));
                assert!(c.lower_bound.len() <= c.value);
            }
        }
    }

    #[test]
    fn encoder_search_examples() {
        let k3 = min_linear_code_length(&Graph::complete(3)).unwrap();
        assert_eq!(k3.length, 1);
        assert_eq!(k3.encoder.to_row_strings(), vec!["111"]);
        assert_eq!(min_linear_code_length(&Graph::empty(2)).unwrap().length, 2);
        assert_eq!(min_linear_code_length(&Graph::cycle(5)).unwrap().length, 3);
        assert!(min_linear_code_length(&Graph::empty(6))
            .unwrap_err()
            .is_cap());
    }

    #[test]
    fn homomorphism_examples() {
        assert_eq!(minrank_via_homomorphism(&Graph::complete(3)).unwrap(), 1);
        assert_eq!(minrank_via_homomorphism(&Graph::empty(2)).unwrap(), 2);
        assert_eq!(minrank_via_homomorphism(&Graph::path(3)).unwrap(), 2);
        assert_eq!(minrank_pattern_search(&Graph::path(3)).unwrap().value, 2);
        assert!(minrank_via_homomorphism(&Graph::empty(5))
            .unwrap_err()
            .is_cap());
    }

    #[test]
    fn complement_of_c5_maps_into_g3() {
        let g3 = peeters::generate(3).unwrap();
        assert!(homomorphism_exists(&Graph::cycle(5).complement(), g3.graph()).unwrap());
        let g2 = peeters::generate(2).unwrap();
        assert!(!homomorphism_exists(&Graph::cycle(5).complement(), g2.graph()).unwrap());
    }

    #[test]
    fn restriction_examples() {
        let g = Graph::cycle(5);
        let m = minrank_pattern_search(&g).unwrap().witness;
        assert_eq!(restricted_witness(&m, &g, &VertexSet::all(5)).unwrap(), m);
        let single = restricted_witness(&m, &g, &VertexSet::new([3])).unwrap();
        assert_eq!(single.matrix(), &BitMatrix::identity(1));
        for mask in 0u64..32 {
            let r = restricted_witness(&m, &g, &VertexSet::from_mask(mask)).unwrap();
            assert!(r.rank() <= m.rank());
        }
    }

    #[test]
    fn peeters_witness_restricted_to_neighbourhoods() {
        let pg = peeters::generate(3).unwrap();
        let comp = pg.graph().complement();
        let m = pg.representing_matrix();
        assert!(represents(m.matrix(), &comp).unwrap());
        for v in 0..comp.n() {
            let nb = VertexSet::new(comp.neighbors(v).iter().copied());
            let r = restricted_witness(&m, &comp, &nb).unwrap();
            assert!(r.rank() <= 3);
        }
    }

    #[test]
    fn exact_minrank_on_dense_six_vertex_graphs() {
        assert_eq!(minrank_exact(&Graph::complete(6)).unwrap().value, 1);
        let k222 = Graph::from_edges(
            6,
            Graph::complete(6)
                .edges()
                .filter(|&(u, v)| !(u % 2 == 0 && v == u + 1)),
        )
        .unwrap();
        let c = minrank_exact(&k222).unwrap();
        assert_eq!(c.value, 2);
        assert!(represents(c.witness.matrix(), &k222).unwrap());
    }

    #[test]
    fn row_space_sweep_matches_pattern_search() {
        for n in 1..=5 {
            for g in Graph::all_labeled(n) {
                let a = minrank_row_space_sweep(&g).unwrap();
                assert_eq!(a.value, minrank_pattern_search(&g).unwrap().value);
                assert!(represents(a.witness.matrix(), &g).unwrap());
            }
        }
    }
}
