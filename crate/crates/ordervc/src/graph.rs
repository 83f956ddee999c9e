//! Raw labeled digraphs on `[n]` with bitmask adjacency rows.

use crate::error::{Error, Result};
use crate::order::{OrderRelation, TotalOrder};
use crate::rng::SplitMix64;

/// Hard representation bound: one `u64` adjacency row per vertex.
pub const MAX_VERTICES: usize = 64;

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VERTICES {
        return Err(Error::CapExceeded {
            what: "n",
            requested: n,
            cap: MAX_VERTICES,
        });
    }
    Ok(())
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A directed graph on vertices labeled `1..=n`. No self-loops; the edge set
/// is duplicate-free by construction (bitmask adjacency).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    n: usize,
    rows: Vec<u64>,
}

impl DirectedGraph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(DirectedGraph {
            n,
            rows: vec![0; n],
        })
    }

    /// Builds a graph from 1-based `(tail, head)` pairs. Duplicates collapse;
    /// labels outside `1..=n` and self-loops are errors.
    pub fn from_edge_list(n: usize, pairs: &[(u32, u32)]) -> Result<Self> {
        let mut g = DirectedGraph::empty(n)?;
        for &(u, v) in pairs {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    pub(crate) fn from_rows(n: usize, rows: Vec<u64>) -> Self {
        debug_assert_eq!(rows.len(), n);
        DirectedGraph { n, rows }
    }

    pub(crate) fn insert_edge(&mut self, u: u32, v: u32) -> Result<()> {
        let (a, b) = self.check_pair(u, v)?;
        self.rows[a] |= 1 << b;
        Ok(())
    }

    pub(crate) fn check_pair(&self, u: u32, v: u32) -> Result<(usize, usize)> {
        for label in [u, v] {
            if label == 0 || label as usize > self.n {
                return Err(Error::OutOfRange { label, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop { v: u });
        }
        Ok(((u - 1) as usize, (v - 1) as usize))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        match self.check_pair(u, v) {
            Ok((a, b)) => self.rows[a] >> b & 1 == 1,
            Err(_) => false,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Edges as 1-based pairs, sorted by `(tail, head)`.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for a in 0..self.n {
            let mut row = self.rows[a];
            while row != 0 {
                let b = row.trailing_zeros();
                out.push((a as u32 + 1, b + 1));
                row &= row - 1;
            }
        }
        out
    }

    /// Edge-set union of two graphs on the same vertex count.
    pub fn union_graph(&self, other: &DirectedGraph) -> Result<DirectedGraph> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a | b)
            .collect();
        Ok(DirectedGraph { n: self.n, rows })
    }

    /// Predecessor masks: bit `u` of entry `v` is set iff `u -> v`.
    fn pred_masks(&self) -> Vec<u64> {
        let mut preds = vec![0u64; self.n];
        for (a, &row) in self.rows.iter().enumerate() {
            let mut r = row;
            while r != 0 {
                let b = r.trailing_zeros() as usize;
                preds[b] |= 1 << a;
                r &= r - 1;
            }
        }
        preds
    }

    /// True iff the graph has no directed cycle. Kahn-style peeling on
    /// bitmask rows.
    pub fn is_acyclic(&self) -> bool {
        let preds = self.pred_masks();
        let mut remaining = full_mask(self.n);
        while remaining != 0 {
            let mut ready = 0u64;
            let mut rem = remaining;
            while rem != 0 {
                let v = rem.trailing_zeros() as usize;
                if preds[v] & remaining == 0 {
                    ready |= 1 << v;
                }
                rem &= rem - 1;
            }
            if ready == 0 {
                return false;
            }
            remaining &= !ready;
        }
        true
    }

    /// Deterministic linear extension: repeatedly emit the smallest-labeled
    /// vertex of in-degree zero.
    pub fn topological_sort(&self) -> Result<TotalOrder> {
        self.toposort_by(|ready| ready.trailing_zeros() as usize)
    }

    /// Linear extension with seeded random tie-breaking among the ready set.
    pub fn topological_sort_seeded(&self, seed: u64) -> Result<TotalOrder> {
        let mut rng = SplitMix64::new(seed);
        self.toposort_by(move |ready| {
            let count = ready.count_ones() as u64;
            let pick = rng.next_below(count) as u32;
            let mut r = ready;
            for _ in 0..pick {
                r &= r - 1;
            }
            r.trailing_zeros() as usize
        })
    }

    fn toposort_by(&self, mut choose: impl FnMut(u64) -> usize) -> Result<TotalOrder> {
        let preds = self.pred_masks();
        let mut remaining = full_mask(self.n);
        let mut seq = Vec::with_capacity(self.n);
        while remaining != 0 {
            let mut ready = 0u64;
            let mut rem = remaining;
            while rem != 0 {
                let v = rem.trailing_zeros() as usize;
                if preds[v] & remaining == 0 {
                    ready |= 1 << v;
                }
                rem &= rem - 1;
            }
            if ready == 0 {
                return Err(Error::CyclicInput);
            }
            let v = choose(ready);
            debug_assert!(ready >> v & 1 == 1);
            seq.push(v as u32 + 1);
            remaining &= !(1 << v);
        }
        TotalOrder::from_seq(seq)
    }

    /// Smallest transitively closed superset of the edge relation, as a
    /// strict partial order. Fails with `CyclicInput` on cyclic graphs.
    pub fn transitive_closure(&self) -> Result<OrderRelation> {
        let mut rows = self.rows.clone();
        for k in 0..self.n {
            let rk = rows[k];
            for row in rows.iter_mut() {
                if *row >> k & 1 == 1 {
                    *row |= rk;
                }
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if row >> i & 1 == 1 {
                return Err(Error::CyclicInput);
            }
        }
        Ok(OrderRelation::from_closed_rows(self.n, rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edge_list_basic() {
        let g = DirectedGraph::from_edge_list(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges(), vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = DirectedGraph::from_edge_list(3, &[(1, 2), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn self_loop_rejected() {
        assert_eq!(
            DirectedGraph::from_edge_list(2, &[(1, 1)]),
            Err(Error::SelfLoop { v: 1 })
        );
    }

    #[test]
    fn out_of_range_rejected() {
        assert_eq!(
            DirectedGraph::from_edge_list(2, &[(1, 3)]),
            Err(Error::OutOfRange { label: 3, n: 2 })
        );
        assert!(matches!(
            DirectedGraph::from_edge_list(2, &[(0, 1)]),
            Err(Error::OutOfRange { label: 0, .. })
        ));
    }

    #[test]
    fn acyclicity_examples() {
        let transitive_triangle =
            DirectedGraph::from_edge_list(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert!(transitive_triangle.is_acyclic());

        let two_cycle = DirectedGraph::from_edge_list(2, &[(1, 2), (2, 1)]).unwrap();
        assert!(!two_cycle.is_acyclic());

        let three_cycle = DirectedGraph::from_edge_list(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        assert!(!three_cycle.is_acyclic());
    }

    #[test]
    fn closure_forces_chain_edge() {
        let g = DirectedGraph::from_edge_list(3, &[(1, 2), (2, 3)]).unwrap();
        let ord = g.transitive_closure().unwrap();
        assert!(ord.less(1, 2) && ord.less(2, 3) && ord.less(1, 3));
        assert_eq!(ord.edge_count(), 3);
    }

    #[test]
    fn closure_of_empty_graph_is_antichain() {
        let g = DirectedGraph::empty(4).unwrap();
        let ord = g.transitive_closure().unwrap();
        assert_eq!(ord.edge_count(), 0);
    }

    #[test]
    fn closure_rejects_cycle() {
        let g = DirectedGraph::from_edge_list(2, &[(1, 2), (2, 1)]).unwrap();
        assert_eq!(g.transitive_closure(), Err(Error::CyclicInput));
    }

    #[test]
    fn toposort_smallest_first() {
        // In-degree-zero set starts as {2}; smallest-first Kahn yields [2,3,1,4].
        let g = DirectedGraph::from_edge_list(4, &[(3, 1), (1, 4), (2, 3), (2, 4)]).unwrap();
        assert_eq!(g.topological_sort().unwrap().seq(), &[2, 3, 1, 4]);
    }

    #[test]
    fn toposort_of_empty_graph_is_label_order() {
        let g = DirectedGraph::empty(3).unwrap();
        assert_eq!(g.topological_sort().unwrap().seq(), &[1, 2, 3]);
    }

    #[test]
    fn toposort_forced_edge() {
        let g = DirectedGraph::from_edge_list(2, &[(2, 1)]).unwrap();
        assert_eq!(g.topological_sort().unwrap().seq(), &[2, 1]);
    }

    #[test]
    fn toposort_rejects_cycle() {
        let g = DirectedGraph::from_edge_list(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        assert_eq!(g.topological_sort().unwrap_err(), Error::CyclicInput);
    }

    #[test]
    fn seeded_toposort_is_a_linear_extension() {
        let g = DirectedGraph::from_edge_list(4, &[(3, 1), (1, 4), (2, 3), (2, 4)]).unwrap();
        for seed in 0..32 {
            let t = g.topological_sort_seeded(seed).unwrap();
            for (u, v) in g.edges() {
                assert!(t.position(u).unwrap() < t.position(v).unwrap());
            }
        }
    }

    #[test]
    fn n_zero_and_oversized_rejected() {
        assert!(DirectedGraph::empty(0).is_err());
        assert!(DirectedGraph::empty(65).is_err());
        assert!(DirectedGraph::empty(64).is_ok());
    }
}
