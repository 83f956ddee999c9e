//! Exhaustive, deterministic enumeration of the ground families: all partial
//! orders and all total orders on `[n]` at small `n`, with stable indexing.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::check_n;
use crate::order::{factorial, OrderRelation, TotalOrder};

/// Factorial guard for total-order enumeration.
pub const MAX_TOTAL_N: usize = 8;

/// Pair-assignment space is `3^(n(n-1)/2)`; n = 7 is past desk scale.
pub const MAX_PARTIAL_N: usize = 6;

/// Every total order on `[n]` in lexicographic permutation order.
pub fn all_total_orders(n: usize) -> Result<Vec<TotalOrder>> {
    check_n(n)?;
    if n > MAX_TOTAL_N {
        return Err(Error::CapExceeded {
            what: "total-order enumeration n",
            requested: n,
            cap: MAX_TOTAL_N,
        });
    }
    let mut seq: Vec<u32> = (1..=n as u32).collect();
    let mut out = Vec::with_capacity(factorial(n as u64) as usize);
    loop {
        out.push(TotalOrder::from_seq(seq.clone())?);
        if !next_permutation(&mut seq) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(seq: &mut [u32]) -> bool {
    let n = seq.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

/// Every strict partial order on `[n]`, each exactly once, sorted by
/// (edge count, row-major matrix bits).
///
/// Generation backtracks over unordered pairs in lexicographic order,
/// assigning each pair one of {incomparable, forward, backward} and pruning
/// as soon as a fully assigned triple violates transitivity. Pair `(y, z)`
/// is the last of its triple `{x, y, z}` (x < y < z) to be assigned, so
/// checking all triples `(x, y, z)` with `x < y` right after assigning
/// `(y, z)` covers every constraint exactly once.
pub fn all_partial_orders(n: usize) -> Result<Vec<OrderRelation>> {
    check_n(n)?;
    if n > MAX_PARTIAL_N {
        return Err(Error::CapExceeded {
            what: "partial-order enumeration n",
            requested: n,
            cap: MAX_PARTIAL_N,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .collect();
    let mut rows = vec![0u64; n];
    let mut out = Vec::new();
    backtrack(n, &pairs, 0, &mut rows, &mut out);
    out.sort_by_cached_key(|r| r.sort_key());
    Ok(out)
}

fn backtrack(
    n: usize,
    pairs: &[(usize, usize)],
    depth: usize,
    rows: &mut Vec<u64>,
    out: &mut Vec<OrderRelation>,
) {
    if depth == pairs.len() {
        out.push(OrderRelation::from_closed_rows(n, rows.clone()));
        return;
    }
    let (y, z) = pairs[depth];
    // incomparable / y < z / z < y
    for choice in 0..3u8 {
        match choice {
            1 => rows[y] |= 1 << z,
            2 => rows[z] |= 1 << y,
            _ => {}
        }
        if triples_transitive(rows, y, z) {
            backtrack(n, pairs, depth + 1, rows, out);
        }
        match choice {
            1 => rows[y] &= !(1 << z),
            2 => rows[z] &= !(1 << y),
            _ => {}
        }
    }
}

fn triples_transitive(rows: &[u64], y: usize, z: usize) -> bool {
    for x in 0..y {
        let t = [x, y, z];
        for &a in &t {
            for &b in &t {
                for &c in &t {
                    if a != b
                        && b != c
                        && a != c
                        && rows[a] >> b & 1 == 1
                        && rows[b] >> c & 1 == 1
                        && rows[a] >> c & 1 == 0
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Which family a descriptor denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    AllPartial,
    AllTotal,
    Explicit,
}

/// A concrete, materialized family of orders on `[n]` with a stable
/// enumeration order and O(1) membership lookup.
#[derive(Debug, Clone)]
pub struct Family {
    kind: FamilyKind,
    n: usize,
    members: Vec<OrderRelation>,
    index: HashMap<OrderRelation, usize>,
}

impl Family {
    pub fn all_partial(n: usize) -> Result<Self> {
        Self::build(FamilyKind::AllPartial, n, all_partial_orders(n)?)
    }

    pub fn all_total(n: usize) -> Result<Self> {
        let members = all_total_orders(n)?
            .iter()
            .map(TotalOrder::to_relation)
            .collect();
        Self::build(FamilyKind::AllTotal, n, members)
    }

    /// Explicit family; members must share `n` and be pairwise distinct.
    pub fn explicit(members: Vec<OrderRelation>) -> Result<Self> {
        let n = match members.first() {
            Some(m) => m.n(),
            None => {
                return Err(Error::InvariantViolation {
                    what: "explicit family",
                    detail: "no members".into(),
                })
            }
        };
        for m in &members {
            if m.n() != n {
                return Err(Error::SizeMismatch {
                    left: n,
                    right: m.n(),
                });
            }
        }
        Self::build(FamilyKind::Explicit, n, members)
    }

    fn build(kind: FamilyKind, n: usize, members: Vec<OrderRelation>) -> Result<Self> {
        let mut index = HashMap::with_capacity(members.len());
        for (i, m) in members.iter().enumerate() {
            if index.insert(m.clone(), i).is_some() {
                return Err(Error::InvariantViolation {
                    what: "family",
                    detail: format!("duplicate member at enumeration index {i}"),
                });
            }
        }
        Ok(Family {
            kind,
            n,
            members,
            index,
        })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[OrderRelation] {
        &self.members
    }

    pub fn member_at(&self, i: usize) -> Option<&OrderRelation> {
        self.members.get(i)
    }

    /// Position of `x` in the family's deterministic enumeration; inverse of
    /// `member_at`.
    pub fn index_of(&self, x: &OrderRelation) -> Result<usize> {
        self.index.get(x).copied().ok_or(Error::NotAMember)
    }
}
