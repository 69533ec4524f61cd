//! Dense linear algebra over the two-element field.
//!
//! Vectors and matrix rows are bit-packed into `u64` words; addition is XOR
//! and multiplication is AND. Bits past the logical length of a vector are
//! always zero, so word-level equality is value equality.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Largest ambient dimension accepted by [`enumerate_subspaces`].
pub const MAX_ENUMERATION_DIM: usize = 6;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector in F₂ⁿ.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = !0;
        }
        v.trim();
        v
    }

    /// The unit vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD == 0 {
                words.push(0);
            }
            if b {
                words[len / WORD] |= 1 << (len % WORD);
            }
            len += 1;
        }
        BitVector { len, words }
    }

    /// Vector whose coordinate `j` is bit `j` of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD, "from_mask supports at most 64 coordinates");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = mask;
            v.trim();
        }
        v
    }

    /// Inverse of [`BitVector::from_mask`]; `None` when longer than 64.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "index {i} out of range for length {}",
            self.len
        );
        let bit = 1 << (i % WORD);
        if value {
            self.words[i / WORD] |= bit;
        } else {
            self.words[i / WORD] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    fn check_len(&self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch(format!(
                "vector lengths {} and {}",
                self.len, other.len
            )));
        }
        Ok(())
    }

    /// `self += other` over GF(2).
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    /// Parity of `self AND other`; lengths must agree.
    #[inline]
    pub(crate) fn dot_unchecked(&self, other: &BitVector) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// ⟨a, b⟩ over GF(2).
    pub fn inner_product(&self, other: &BitVector) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.dot_unchecked(other))
    }

    /// The coordinates listed in `indices`, in that order.
    pub fn gather(&self, indices: &[usize]) -> BitVector {
        BitVector::from_bits(indices.iter().map(|&i| self.get(i)))
    }

    /// Places `self[t]` at coordinate `indices[t]` of a zero vector of length `len`.
    pub fn scatter(&self, indices: &[usize], len: usize) -> BitVector {
        assert_eq!(self.len, indices.len());
        let mut out = BitVector::zeros(len);
        for t in self.iter_ones() {
            out.set(indices[t], true);
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = BitVector {
            len,
            words: (0..words_for(len)).map(|_| rng.gen()).collect(),
        };
        v.trim();
        v
    }

    fn trim(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

/// Binary string, coordinate 0 first.
impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!(
                    "unexpected character {other:?} in bit string"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitVector::from_bits)
    }
}

/// A dense `rows × cols` matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVector::ones(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from its rows. `cols` fixes the width when `rows` is empty.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Ok(BitMatrix { cols, rows })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        BitMatrix {
            cols,
            rows: (0..rows)
                .map(|i| BitVector::from_bits((0..cols).map(|j| f(i, j))))
                .collect(),
        }
    }

    /// Parses rows given as 0/1 strings. `cols` is required for the empty matrix.
    pub fn parse_rows<S: AsRef<str>>(cols: usize, rows: &[S]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<BitVector>>>()?;
        Self::from_rows(cols, rows)
    }

    pub fn to_row_strings(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.to_string()).collect()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn multiply(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows.len(),
                self.cols,
                other.rows.len(),
                other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVector::zeros(other.cols);
                for t in row.iter_ones() {
                    acc.xor_assign(&other.rows[t]);
                }
                acc
            })
            .collect();
        Ok(BitMatrix {
            cols: other.cols,
            rows,
        })
    }

    /// `M x` for a column vector `x`.
    pub fn apply(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok(BitVector::from_bits(
            self.rows.iter().map(|r| r.dot_unchecked(x)),
        ))
    }

    /// Row-stacks `self` on top of `other`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "stacking widths {} and {}",
                self.cols, other.cols
            )));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix {
            cols: self.cols,
            rows,
        })
    }

    /// Submatrix with the given rows and columns, in the given orders.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        BitMatrix {
            cols: cols.len(),
            rows: rows.iter().map(|&i| self.rows[i].gather(cols)).collect(),
        }
    }

    pub fn principal_submatrix(&self, indices: &[usize]) -> BitMatrix {
        self.submatrix(indices, indices)
    }

    /// Reduced row-echelon form with zero rows dropped, and the pivot column of each row.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        (
            BitMatrix {
                cols: self.cols,
                rows,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        // Forward elimination only; cheaper than a full rref.
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot_row = &head[rank];
            for row in tail.iter_mut() {
                if row.get(col) {
                    row.xor_assign(pivot_row);
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel_basis(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let generators = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVector::unit(self.cols, free);
                for (row, &p) in r.rows.iter().zip(&pivots) {
                    if row.get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        Subspace::spanned_by(self.cols, generators)
            .expect("kernel generators have the ambient width")
    }

    pub fn row_space(&self) -> Subspace {
        let (basis, _) = self.rref();
        Subspace {
            ambient_dim: self.cols,
            basis,
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            write!(f, " {r}")?;
        }
        write!(f, ")")
    }
}

/// ⟨a, b⟩ over GF(2).
pub fn inner_product(a: &BitVector, b: &BitVector) -> Result<bool> {
    a.inner_product(b)
}

/// Rank over GF(2).
pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

/// Whether `v` lies in the row span of `basis_a` stacked on `basis_b`.
pub fn in_span(v: &BitVector, basis_a: &BitMatrix, basis_b: &BitMatrix) -> Result<bool> {
    if v.len() != basis_a.num_cols() || v.len() != basis_b.num_cols() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against spans of width {} and {}",
            v.len(),
            basis_a.num_cols(),
            basis_b.num_cols()
        )));
    }
    let (r, pivots) = basis_a.vstack(basis_b)?.rref();
    Ok(reduce(v, &r, &pivots).is_zero())
}

/// Reduces `v` against a reduced row-echelon basis.
fn reduce(v: &BitVector, rref: &BitMatrix, pivots: &[usize]) -> BitVector {
    let mut w = v.clone();
    for (row, &p) in rref.rows.iter().zip(pivots) {
        if w.get(p) {
            w.xor_assign(row);
        }
    }
    w
}

/// Rank of at most 64 packed rows of width at most 64. Clobbers `rows`.
pub fn rank_u64(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let pivot = rows[i];
        if pivot == 0 {
            continue;
        }
        rank += 1;
        let low = pivot & pivot.wrapping_neg();
        for r in rows[i + 1..].iter_mut() {
            if *r & low != 0 {
                *r ^= pivot;
            }
        }
    }
    rank
}

/// A linear subspace of F₂ⁿ kept in canonical reduced row-echelon form,
/// so two subspaces are equal exactly when their representations are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: BitMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: BitMatrix::zeros(0, ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: BitMatrix::identity(ambient_dim),
        }
    }

    /// The span of `generators`, which need not be independent.
    pub fn spanned_by(ambient_dim: usize, generators: Vec<BitVector>) -> Result<Self> {
        Ok(BitMatrix::from_rows(ambient_dim, generators)?.row_space())
    }

    /// A uniformly random subspace of the given dimension.
    pub fn random<R: Rng + ?Sized>(ambient_dim: usize, dim: usize, rng: &mut R) -> Self {
        assert!(dim <= ambient_dim);
        loop {
            let gens = (0..dim)
                .map(|_| BitVector::random(ambient_dim, rng))
                .collect();
            let s = Self::spanned_by(ambient_dim, gens).expect("generator width");
            if s.dim() == dim {
                return s;
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.num_rows()
    }

    pub fn basis(&self) -> &BitMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &BitVector) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient_dim
            )));
        }
        let pivots: Vec<usize> = self
            .basis
            .rows
            .iter()
            .map(|r| r.first_one().expect("rref rows are nonzero"))
            .collect();
        Ok(reduce(v, &self.basis, &pivots).is_zero())
    }

    /// `{w : ⟨w, s⟩ = 0 for all s in self}`.
    pub fn orthogonal_complement(&self) -> Subspace {
        self.basis.kernel_basis()
    }

    /// All `2^dim` members. Dimension must be below 64.
    pub fn elements(&self) -> impl Iterator<Item = BitVector> + '_ {
        let d = self.dim();
        assert!(d < 64, "subspace too large to enumerate");
        (0u64..1 << d).map(move |mask| {
            let mut v = BitVector::zeros(self.ambient_dim);
            let mut m = mask;
            while m != 0 {
                v.xor_assign(&self.basis.rows[m.trailing_zeros() as usize]);
                m &= m - 1;
            }
            v
        })
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in F2^{}: {:?})",
            self.dim(),
            self.ambient_dim,
            self.basis.to_row_strings()
        )
    }
}

/// Every `dim`-dimensional subspace of F₂^`ambient_dim`, each exactly once.
///
/// Subspaces are produced in canonical order: by pivot columns
/// (lexicographically), then by the free entries of the echelon basis read
/// as a binary counter.
pub fn enumerate_subspaces(
    ambient_dim: usize,
    dim: usize,
) -> Result<impl Iterator<Item = Subspace>> {
    if ambient_dim > MAX_ENUMERATION_DIM {
        return Err(Error::cap(
            "subspace enumeration ambient dimension",
            MAX_ENUMERATION_DIM as u64,
            ambient_dim as u64,
        ));
    }
    if dim > ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "subspace dimension {dim} exceeds ambient dimension {ambient_dim}"
        )));
    }
    Ok(subspaces_uncapped(ambient_dim, dim).into_iter())
}

pub(crate) fn subspaces_uncapped(ambient_dim: usize, dim: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    for pivots in combinations(ambient_dim, dim) {
        // Free slots: columns right of a row's pivot that are not pivots themselves.
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| {
                let pivots = &pivots;
                (p + 1..ambient_dim)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        for assignment in 0u64..1 << free.len() {
            let mut basis = BitMatrix::zeros(dim, ambient_dim);
            for (r, &p) in pivots.iter().enumerate() {
                basis.set(r, p, true);
            }
            for (t, &(r, c)) in free.iter().enumerate() {
                if assignment >> t & 1 == 1 {
                    basis.set(r, c, true);
                }
            }
            out.push(Subspace { ambient_dim, basis });
        }
    }
    out
}

/// Number of `dim`-dimensional subspaces of F₂^`n` (Gaussian binomial at q = 2).
pub fn gaussian_binomial(n: usize, dim: usize) -> u64 {
    if dim > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..dim {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    (num / den) as u64
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}
