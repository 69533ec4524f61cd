//! Linear index codes, embedded index codes and task-based embedded index
//! codes, with exact algebraic verification and message-level simulation.
//!
//! Every decoder here is linear: receiver `i` outputs the inner product of
//! a coefficient vector with the broadcast bits it may read, plus the inner
//! product of a second vector with its side information `x|N(i)`. Since
//! the encoders are linear too, the output is `c · x` for a vector `c`
//! determined by the code, and the decoder is correct for all `2ⁿ`
//! messages exactly when `c = e_i`. Verification checks that identity per
//! receiver; it never enumerates messages.
//!
//! Broadcast layout for embedded codes: blocks ordered by ascending sender
//! index, rows within a block in encoder order. Decoder broadcast
//! coefficients index that concatenation.

use std::ops::Range;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{in_span, BitMatrix, BitVector};
use crate::graph::Graph;
use crate::minrank::{represents, RepresentingMatrix};

/// A message `x ∈ F₂ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Message(pub BitVector);

impl Message {
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Message(BitVector::random(n, rng))
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        Message(BitVector::from_mask(n, mask))
    }

    pub fn bits(&self) -> &BitVector {
        &self.0
    }
}

/// Linear decoder of one receiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoder {
    /// Coefficients over the broadcast bits.
    pub broadcast: BitVector,
    /// Coefficients over `N(i)`, in ascending vertex order.
    pub side: BitVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReceiverFailure {
    /// No linear decoder exists from what the receiver may read.
    Undecodable,
    /// A decoder exists but the given one computes something other than `x_i`.
    WrongDecoder,
    /// The decoder reads the block of a sender other than its assigned one.
    ForeignBlock { sender: usize },
}

/// Outcome of verifying a code: the receivers that fail, if any.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub failures: Vec<(usize, ReceiverFailure)>,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Whether `e_i ∈ rowspan(broadcast_rows) + span{e_h : h ∈ N(i)}`, i.e.
/// whether receiver `i` has some linear decoder for these broadcast rows.
pub fn verify_linear_decodability(broadcast_rows: &BitMatrix, g: &Graph, i: usize) -> Result<bool> {
    let n = g.n();
    g.check_vertex(i)?;
    if broadcast_rows.num_cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "broadcast rows of width {} for a graph on {n} vertices",
            broadcast_rows.num_cols()
        )));
    }
    let side = BitMatrix::from_rows(
        n,
        g.neighbors(i)
            .iter()
            .map(|&h| BitVector::unit(n, h))
            .collect(),
    )?;
    in_span(&BitVector::unit(n, i), broadcast_rows, &side)
}

/// A centralized linear index code: one encoder over the whole message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexCode {
    encoder: BitMatrix,
    decoders: Vec<Decoder>,
}

impl IndexCode {
    pub fn new(encoder: BitMatrix, decoders: Vec<Decoder>) -> Result<Self> {
        if decoders.len() != encoder.num_cols() {
            return Err(Error::DimensionMismatch(format!(
                "{} decoders for a message of length {}",
                decoders.len(),
                encoder.num_cols()
            )));
        }
        if let Some((i, d)) = decoders
            .iter()
            .enumerate()
            .find(|(_, d)| d.broadcast.len() != encoder.num_rows())
        {
            return Err(Error::DimensionMismatch(format!(
                "decoder {i} has {} broadcast coefficients for a length-{} code",
                d.broadcast.len(),
                encoder.num_rows()
            )));
        }
        Ok(IndexCode { encoder, decoders })
    }

    pub fn n(&self) -> usize {
        self.encoder.num_cols()
    }

    pub fn length(&self) -> usize {
        self.encoder.num_rows()
    }

    pub fn encoder(&self) -> &BitMatrix {
        &self.encoder
    }

    pub fn decoders(&self) -> &[Decoder] {
        &self.decoders
    }

    pub fn decoders_mut(&mut self) -> &mut [Decoder] {
        &mut self.decoders
    }
}

/// One sender's encoder: `ℓ_j` rows over the coordinates `N(j)`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SenderEncoder {
    pub sender: usize,
    pub encoder: BitMatrix,
}

/// Receivers broadcast functions of their own side information.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedCode {
    n: usize,
    senders: Vec<SenderEncoder>,
    decoders: Vec<Decoder>,
}

impl EmbeddedCode {
    /// Senders are put in ascending order; repeated senders and senders
    /// broadcasting nothing are rejected.
    pub fn new(n: usize, mut senders: Vec<SenderEncoder>, decoders: Vec<Decoder>) -> Result<Self> {
        senders.sort_by_key(|s| s.sender);
        if let Some(w) = senders.windows(2).find(|w| w[0].sender == w[1].sender) {
            return Err(Error::Structural(format!(
                "sender {} appears twice",
                w[0].sender
            )));
        }
        if let Some(s) = senders.iter().find(|s| s.encoder.num_rows() == 0) {
            return Err(Error::Structural(format!(
                "sender {} broadcasts no bits",
                s.sender
            )));
        }
        if let Some(s) = senders.iter().find(|s| s.sender >= n) {
            return Err(Error::VertexOutOfRange {
                vertex: s.sender,
                n,
            });
        }
        let length: usize = senders.iter().map(|s| s.encoder.num_rows()).sum();
        if decoders.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} decoders for {n} receivers",
                decoders.len()
            )));
        }
        if let Some((i, d)) = decoders
            .iter()
            .enumerate()
            .find(|(_, d)| d.broadcast.len() != length)
        {
            return Err(Error::DimensionMismatch(format!(
                "decoder {i} has {} broadcast coefficients for total length {length}",
                d.broadcast.len()
            )));
        }
        Ok(EmbeddedCode {
            n,
            senders,
            decoders,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total length `Σ ℓ_j`.
    pub fn length(&self) -> usize {
        self.senders.iter().map(|s| s.encoder.num_rows()).sum()
    }

    pub fn senders(&self) -> &[SenderEncoder] {
        &self.senders
    }

    pub fn decoders(&self) -> &[Decoder] {
        &self.decoders
    }

    pub fn decoders_mut(&mut self) -> &mut [Decoder] {
        &mut self.decoders
    }

    /// Position of each sender's block within the broadcast.
    pub fn blocks(&self) -> Vec<(usize, Range<usize>)> {
        let mut start = 0;
        self.senders
            .iter()
            .map(|s| {
                let end = start + s.encoder.num_rows();
                let r = (s.sender, start..end);
                start = end;
                r
            })
            .collect()
    }

    pub fn block_of(&self, sender: usize) -> Option<Range<usize>> {
        self.blocks()
            .into_iter()
            .find(|(s, _)| *s == sender)
            .map(|(_, r)| r)
    }

    /// All broadcast rows as functions of the full message, after checking
    /// that every sender reads exactly its neighbourhood.
    pub fn lifted_broadcast(&self, g: &Graph) -> Result<BitMatrix> {
        check_receivers(self.n, &self.decoders, g)?;
        let mut rows = Vec::with_capacity(self.length());
        for s in &self.senders {
            let nb = g.neighbors(s.sender);
            if s.encoder.num_cols() != nb.len() {
                return Err(Error::Structural(format!(
                    "sender {} encodes {} coordinates but knows only its {} neighbours",
                    s.sender,
                    s.encoder.num_cols(),
                    nb.len()
                )));
            }
            rows.extend(s.encoder.rows().iter().map(|r| r.scatter(nb, self.n)));
        }
        BitMatrix::from_rows(self.n, rows)
    }
}

/// An embedded code in which receiver `i` reads only the block of sender `j_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskBasedCode {
    code: EmbeddedCode,
    assignment: Vec<usize>,
}

impl TaskBasedCode {
    pub fn new(code: EmbeddedCode, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != code.n() {
            return Err(Error::DimensionMismatch(format!(
                "assignment of length {} for {} receivers",
                assignment.len(),
                code.n()
            )));
        }
        if let Some((i, &j)) = assignment.iter().enumerate().find(|(_, &j)| {
            code.senders()
                .binary_search_by_key(&j, |s| s.sender)
                .is_err()
        }) {
            return Err(Error::Structural(format!(
                "receiver {i} is assigned to {j}, which is not a sender"
            )));
        }
        Ok(TaskBasedCode { code, assignment })
    }

    pub fn embedded(&self) -> &EmbeddedCode {
        &self.code
    }

    pub fn into_embedded(self) -> EmbeddedCode {
        self.code
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn assignment_mut(&mut self) -> &mut [usize] {
        &mut self.assignment
    }

    pub fn decoders_mut(&mut self) -> &mut [Decoder] {
        self.code.decoders_mut()
    }

    pub fn length(&self) -> usize {
        self.code.length()
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }
}

fn check_receivers(n: usize, decoders: &[Decoder], g: &Graph) -> Result<()> {
    if g.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "code for {n} receivers on a graph with {} vertices",
            g.n()
        )));
    }
    for (i, d) in decoders.iter().enumerate() {
        if d.side.len() != g.degree(i) {
            return Err(Error::DimensionMismatch(format!(
                "decoder {i} has {} side coefficients but {} neighbours",
                d.side.len(),
                g.degree(i)
            )));
        }
    }
    Ok(())
}

/// `Σ_t coeffs[t]·rows[t] + lift(side)`, restricted to `visible` rows.
fn decoded_functional(
    rows: &BitMatrix,
    visible: Range<usize>,
    d: &Decoder,
    g: &Graph,
    i: usize,
) -> BitVector {
    let mut acc = d.side.scatter(g.neighbors(i), g.n());
    for t in d.broadcast.iter_ones().filter(|t| visible.contains(t)) {
        acc.xor_assign(rows.row(t));
    }
    acc
}

fn classify(
    rows: &BitMatrix,
    visible: Range<usize>,
    d: &Decoder,
    g: &Graph,
    i: usize,
) -> Result<Option<ReceiverFailure>> {
    if decoded_functional(rows, visible.clone(), d, g, i) == BitVector::unit(g.n(), i) {
        return Ok(None);
    }
    let readable = BitMatrix::from_rows(g.n(), rows.rows()[visible].to_vec())?;
    Ok(Some(if verify_linear_decodability(&readable, g, i)? {
        ReceiverFailure::WrongDecoder
    } else {
        ReceiverFailure::Undecodable
    }))
}

fn collect_failures<F>(decoders: &[Decoder], check: F) -> Result<Verdict>
where
    F: Fn(usize, &Decoder) -> Result<Option<ReceiverFailure>> + Sync,
{
    let results: Vec<Option<ReceiverFailure>> = decoders
        .par_iter()
        .enumerate()
        .map(|(i, d)| check(i, d))
        .collect::<Result<_>>()?;
    Ok(Verdict {
        failures: results
            .into_iter()
            .enumerate()
            .filter_map(|(i, f)| f.map(|f| (i, f)))
            .collect(),
    })
}

/// Checks every decoder identity of a centralized code.
pub fn verify_index_code(code: &IndexCode, g: &Graph) -> Result<Verdict> {
    check_receivers(code.n(), code.decoders(), g)?;
    collect_failures(code.decoders(), |i, d| {
        classify(code.encoder(), 0..code.length(), d, g, i)
    })
}

/// Checks an embedded code. A sender whose encoder is not over exactly
/// `N(j)` is an error rather than a failing receiver.
pub fn verify_embedded_code(code: &EmbeddedCode, g: &Graph) -> Result<Verdict> {
    let rows = code.lifted_broadcast(g)?;
    collect_failures(code.decoders(), |i, d| {
        classify(&rows, 0..code.length(), d, g, i)
    })
}

/// Checks a task-based code: as an embedded code, with receiver `i`
/// restricted to the block of its assigned sender.
pub fn verify_task_based_code(code: &TaskBasedCode, g: &Graph) -> Result<Verdict> {
    let embedded = code.embedded();
    let rows = embedded.lifted_broadcast(g)?;
    let blocks = embedded.blocks();
    collect_failures(embedded.decoders(), |i, d| {
        let own = embedded
            .block_of(code.assignment()[i])
            .expect("assignment checked at construction");
        if let Some(t) = d.broadcast.iter_ones().find(|t| !own.contains(t)) {
            let sender = blocks
                .iter()
                .find(|(_, r)| r.contains(&t))
                .map(|(s, _)| *s)
                .expect("t < length");
            return Ok(Some(ReceiverFailure::ForeignBlock { sender }));
        }
        classify(&rows, own, d, g, i)
    })
}

/// The standard code from a representing matrix: broadcast a row basis of
/// `M`; receiver `i` rebuilds `M_i · x` from the basis and strips off the
/// neighbours' bits, which `M` allows only on `N(i)`.
pub fn build_index_code(m: &RepresentingMatrix, g: &Graph) -> Result<IndexCode> {
    if !represents(m.matrix(), g)? {
        return Err(Error::PatternViolation(
            "matrix is certified for a different graph".into(),
        ));
    }
    let (basis, pivots) = m.matrix().rref();
    let decoders = (0..g.n())
        .map(|i| {
            let row = m.matrix().row(i);
            Decoder {
                broadcast: BitVector::from_bits(pivots.iter().map(|&p| row.get(p))),
                side: row.gather(g.neighbors(i)),
            }
        })
        .collect();
    IndexCode::new(basis, decoders)
}

/// Anything that can be run on a message.
pub trait Scheme {
    fn n(&self) -> usize;

    /// Total number of broadcast bits.
    fn length(&self) -> usize;

    /// Precomputes the linear maps each party applies.
    fn simulator(&self, g: &Graph) -> Result<Simulator>;

    /// Encodes `x`, runs every decoder on what it may read, and returns the
    /// recovered bits.
    fn simulate(&self, g: &Graph, x: &Message) -> Result<BitVector> {
        self.simulator(g)?.run(x)
    }
}

struct ReceiverView {
    /// Broadcast coefficients, zeroed outside the bits this receiver sees.
    broadcast: BitVector,
    /// Side coefficients placed at their coordinates in `N(i)`.
    side: BitVector,
}

/// A compiled scheme: encoders lifted to full-message functionals that
/// read only their sender's coordinates, and one view per receiver.
pub struct Simulator {
    n: usize,
    broadcast_rows: Vec<BitVector>,
    receivers: Vec<ReceiverView>,
}

impl Simulator {
    fn build(
        rows: &BitMatrix,
        decoders: &[Decoder],
        visible: impl Fn(usize) -> Range<usize>,
        g: &Graph,
    ) -> Self {
        let receivers = decoders
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let seen = visible(i);
                ReceiverView {
                    broadcast: BitVector::from_bits(
                        d.broadcast
                            .iter()
                            .enumerate()
                            .map(|(t, b)| b && seen.contains(&t)),
                    ),
                    side: d.side.scatter(g.neighbors(i), g.n()),
                }
            })
            .collect();
        Simulator {
            n: g.n(),
            broadcast_rows: rows.rows().to_vec(),
            receivers,
        }
    }

    pub fn run(&self, x: &Message) -> Result<BitVector> {
        let x = x.bits();
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "message of length {} for {} receivers",
                x.len(),
                self.n
            )));
        }
        let sent = BitVector::from_bits(self.broadcast_rows.iter().map(|r| r.dot_unchecked(x)));
        Ok(BitVector::from_bits(self.receivers.iter().map(|v| {
            v.broadcast.dot_unchecked(&sent) ^ v.side.dot_unchecked(x)
        })))
    }

    /// Whether every receiver recovers its bit for every one of the `2ⁿ` messages.
    pub fn recovers_all_messages(&self) -> Result<bool> {
        if self.n > 24 {
            return Err(Error::cap(
                "exhaustive simulation message length",
                24,
                self.n as u64,
            ));
        }
        for mask in 0u64..1 << self.n {
            let x = Message::from_mask(self.n, mask);
            if self.run(&x)? != x.0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Scheme for IndexCode {
    fn n(&self) -> usize {
        IndexCode::n(self)
    }

    fn length(&self) -> usize {
        IndexCode::length(self)
    }

    fn simulator(&self, g: &Graph) -> Result<Simulator> {
        check_receivers(self.n(), self.decoders(), g)?;
        let l = self.length();
        Ok(Simulator::build(
            self.encoder(),
            self.decoders(),
            |_| 0..l,
            g,
        ))
    }
}

impl Scheme for EmbeddedCode {
    fn n(&self) -> usize {
        self.n
    }

    fn length(&self) -> usize {
        EmbeddedCode::length(self)
    }

    fn simulator(&self, g: &Graph) -> Result<Simulator> {
        let rows = self.lifted_broadcast(g)?;
        let l = self.length();
        Ok(Simulator::build(&rows, self.decoders(), |_| 0..l, g))
    }
}

impl Scheme for TaskBasedCode {
    fn n(&self) -> usize {
        self.code.n
    }

    fn length(&self) -> usize {
        self.code.length()
    }

    fn simulator(&self, g: &Graph) -> Result<Simulator> {
        let rows = self.code.lifted_broadcast(g)?;
        let blocks = self.code.blocks();
        let own = |i: usize| {
            blocks
                .iter()
                .find(|(s, _)| *s == self.assignment[i])
                .map(|(_, r)| r.clone())
                .expect("assignment checked at construction")
        };
        // A receiver cannot evaluate coefficients on bits it never hears.
        for (i, d) in self.code.decoders().iter().enumerate() {
            let seen = own(i);
            if let Some(t) = d.broadcast.iter_ones().find(|t| !seen.contains(t)) {
                return Err(Error::Structural(format!(
                    "receiver {i} reads broadcast bit {t}, outside the block of sender {}",
                    self.assignment[i]
                )));
            }
        }
        Ok(Simulator::build(&rows, self.code.decoders(), own, g))
    }
}
