//! Strict partial orders and total orders on `[n]`.
//!
//! An `OrderRelation` is stored as a transitively closed, irreflexive,
//! antisymmetric boolean matrix (one bitmask row per element). Equality is
//! matrix equality, so two orders are equal iff they relate the same pairs.

use crate::error::{Error, Result};
use crate::graph::{check_n, DirectedGraph};

/// A strict partial order on `1..=n`. Always transitively closed; the empty
/// relation (antichain) is a valid value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderRelation {
    n: usize,
    rows: Vec<u64>,
}

impl OrderRelation {
    /// The empty order (antichain) on `n` elements.
    pub fn empty(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(OrderRelation {
            n,
            rows: vec![0; n],
        })
    }

    /// Closure of the given generator edges; convenience over
    /// `DirectedGraph::transitive_closure`.
    pub fn from_generators(n: usize, pairs: &[(u32, u32)]) -> Result<Self> {
        DirectedGraph::from_edge_list(n, pairs)?.transitive_closure()
    }

    /// Caller guarantees `rows` is closed, irreflexive and antisymmetric.
    pub(crate) fn from_closed_rows(n: usize, rows: Vec<u64>) -> Self {
        debug_assert_eq!(rows.len(), n);
        debug_assert!(Self::rows_are_strict_order(n, &rows));
        OrderRelation { n, rows }
    }

    fn rows_are_strict_order(n: usize, rows: &[u64]) -> bool {
        for a in 0..n {
            if rows[a] >> a & 1 == 1 {
                return false;
            }
            let mut r = rows[a];
            while r != 0 {
                let b = r.trailing_zeros() as usize;
                if rows[b] >> a & 1 == 1 || rows[a] | rows[b] != rows[a] {
                    return false;
                }
                r &= r - 1;
            }
        }
        true
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// True iff `a < b` in this order (1-based labels; false out of range).
    pub fn less(&self, a: u32, b: u32) -> bool {
        if a == 0 || b == 0 || a as usize > self.n || b as usize > self.n {
            return false;
        }
        self.rows[(a - 1) as usize] >> (b - 1) & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Related pairs as 1-based `(smaller, larger)`, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        self.as_graph().edges()
    }

    /// The relation as a raw digraph.
    pub fn as_graph(&self) -> DirectedGraph {
        DirectedGraph::from_rows(self.n, self.rows.clone())
    }

    /// Digraph whose edge set is the union of both strict relations.
    pub fn union(&self, other: &OrderRelation) -> Result<DirectedGraph> {
        self.as_graph().union_graph(&other.as_graph())
    }

    /// Two orders are compatible iff some partial order refines both, i.e.
    /// the union of their relations is acyclic. Symmetric in its arguments.
    pub fn compatible(&self, other: &OrderRelation) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(compatible_rows(self.n, &self.rows, &other.rows))
    }

    /// True iff every pair of distinct elements is comparable.
    pub fn is_total(&self) -> bool {
        self.edge_count() == self.n * (self.n - 1) / 2
    }

    /// Reads a complete comparability relation back as a permutation.
    pub fn as_total(&self) -> Option<TotalOrder> {
        if !self.is_total() {
            return None;
        }
        // Element with k successors sits at position n-1-k.
        let mut seq = vec![0u32; self.n];
        for a in 0..self.n {
            let succ = self.rows[a].count_ones() as usize;
            seq[self.n - 1 - succ] = a as u32 + 1;
        }
        TotalOrder::from_seq(seq).ok()
    }

    /// Sort key used for the canonical family enumeration order:
    /// edge count first, then the row-major matrix bits read as a number
    /// with the (1,1) entry most significant.
    pub(crate) fn sort_key(&self) -> (usize, Vec<u64>) {
        let mut packed = vec![0u64; self.n];
        for (a, &row) in self.rows.iter().enumerate() {
            let mut rev = 0u64;
            for b in 0..self.n {
                if row >> b & 1 == 1 {
                    rev |= 1 << (63 - b);
                }
            }
            packed[a] = rev;
        }
        (self.edge_count(), packed)
    }
}

pub(crate) fn compatible_rows(n: usize, a: &[u64], b: &[u64]) -> bool {
    let rows: Vec<u64> = a.iter().zip(b).map(|(x, y)| x | y).collect();
    DirectedGraph::from_rows(n, rows).is_acyclic()
}

/// A total (linear) order on `1..=n`, stored as the permutation whose `i`-th
/// entry is the `i`-th smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TotalOrder {
    seq: Vec<u32>,
    pos: Vec<u32>,
}

impl TotalOrder {
    /// The identity order `1 < 2 < ... < n`.
    pub fn identity(n: usize) -> Result<Self> {
        check_n(n)?;
        Self::from_seq((1..=n as u32).collect())
    }

    /// Validates that `seq` is a permutation of `1..=n`.
    pub fn from_seq(seq: Vec<u32>) -> Result<Self> {
        let n = seq.len();
        check_n(n)?;
        let mut pos = vec![u32::MAX; n];
        for (i, &label) in seq.iter().enumerate() {
            if label == 0 || label as usize > n {
                return Err(Error::OutOfRange { label, n });
            }
            if pos[(label - 1) as usize] != u32::MAX {
                return Err(Error::InvariantViolation {
                    what: "total order",
                    detail: format!("label {label} repeated in seq"),
                });
            }
            pos[(label - 1) as usize] = i as u32;
        }
        Ok(TotalOrder { seq, pos })
    }

    pub fn n(&self) -> usize {
        self.seq.len()
    }

    pub fn seq(&self) -> &[u32] {
        &self.seq
    }

    /// Zero-based position of a label in the sequence.
    pub fn position(&self, label: u32) -> Result<usize> {
        if label == 0 || label as usize > self.n() {
            return Err(Error::OutOfRange { label, n: self.n() });
        }
        Ok(self.pos[(label - 1) as usize] as usize)
    }

    /// True iff the edge `(tail, head)` is reversed in this order, i.e. the
    /// head is placed before the tail.
    pub fn contradicts(&self, edge: (u32, u32)) -> Result<bool> {
        let (u, v) = edge;
        if u == v {
            return Err(Error::SelfLoop { v: u });
        }
        Ok(self.position(v)? < self.position(u)?)
    }

    /// The complete comparability relation induced by the permutation.
    pub fn to_relation(&self) -> OrderRelation {
        let n = self.n();
        let mut rows = vec![0u64; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let a = (self.seq[i] - 1) as usize;
                let b = (self.seq[j] - 1) as usize;
                rows[a] |= 1 << b;
            }
        }
        OrderRelation::from_closed_rows(n, rows)
    }

    /// Rank of this permutation in lexicographic enumeration order.
    pub fn lex_rank(&self) -> u64 {
        let n = self.n();
        let mut rank = 0u64;
        for i in 0..n {
            let smaller_later = (i + 1..n).filter(|&j| self.seq[j] < self.seq[i]).count() as u64;
            rank += smaller_later * factorial((n - 1 - i) as u64);
        }
        rank
    }
}

pub(crate) fn factorial(k: u64) -> u64 {
    (1..=k).product::<u64>().max(1)
}
