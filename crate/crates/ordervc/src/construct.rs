//! The explicit shattered-set constructions and their witness strategies,
//! plus a proof-checker that replays the upper-bound argument (contradiction
//! edge extraction, acyclicity, parallel paths, triangles, Mantel bound) on
//! concrete shattered sets of total orders.

use rayon::prelude::*;

use crate::enumerate::Family;
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::order::{OrderRelation, TotalOrder};
use crate::rng::SplitMix64;
use crate::shatter::is_shattered;

/// Exhaustive subset verification guard.
pub const MAX_EXHAUSTIVE_PARTS: usize = 20;

/// Which construction a family came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstructionKind {
    /// Complete bipartite orientation; one single-edge part per block pair.
    Thm1Lower,
    /// The u/v-vertex family with 3(floor(n/2) - 1) parts.
    Thm2G,
    /// The w-vertex family with 2(n - 3) parts.
    Thm2H,
}

impl ConstructionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstructionKind::Thm1Lower => "thm1",
            ConstructionKind::Thm2G => "thm2g",
            ConstructionKind::Thm2H => "thm2h",
        }
    }
}

impl std::fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An ordered list of subgraph parts on `1..=n`, together with the label
/// bookkeeping that maps construction vertex names onto `1..=n`.
#[derive(Debug, Clone)]
pub struct ConstructionFamily {
    n: usize,
    kind: ConstructionKind,
    parts: Vec<DirectedGraph>,
    part_names: Vec<String>,
    vertex_names: Vec<String>,
    k: Option<usize>,
}

impl ConstructionFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ConstructionKind {
        self.kind
    }

    pub fn parts(&self) -> &[DirectedGraph] {
        &self.parts
    }

    pub fn part_names(&self) -> &[String] {
        &self.part_names
    }

    /// Construction-side name of each vertex label (`vertex_names[label-1]`).
    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    /// `floor(n/2)` for the constructions parameterized by it.
    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Union of all parts as one digraph.
    pub fn union_of_parts(&self) -> Result<DirectedGraph> {
        let mut acc = DirectedGraph::empty(self.n)?;
        for p in &self.parts {
            acc = acc.union_graph(p)?;
        }
        Ok(acc)
    }

    /// Transitive closures of the parts: the actual ground orders that get
    /// shattered (a 2-edge path gains its chord under closure).
    pub fn closed_parts(&self) -> Result<Vec<OrderRelation>> {
        self.parts
            .iter()
            .map(DirectedGraph::transitive_closure)
            .collect()
    }
}

fn default_vertex_names(n: usize) -> Vec<String> {
    (1..=n).map(|v| v.to_string()).collect()
}

/// Block-pair index set: `1 <= i <= floor(n/2) < j <= n`, row-major in
/// `(i, j)`. One forward edge `i -> j` per pair; `floor(n^2/4)` pairs total.
pub fn thm1_pairs(n: usize) -> Vec<(u32, u32)> {
    let k = n / 2;
    let mut out = Vec::with_capacity(k * (n - k));
    for i in 1..=k {
        for j in (k + 1)..=n {
            out.push((i as u32, j as u32));
        }
    }
    out
}

/// The `floor(n^2/4)` total orders of the bipartite lower-bound construction:
/// for each block pair `(i, j)`, the deterministic topological sort of the
/// graph holding every forward edge except `i -> j` plus the reversed edge
/// `j -> i`.
pub fn thm1_shattered_set(n: usize) -> Result<(ConstructionFamily, Vec<TotalOrder>)> {
    thm1_shattered_set_with(n, None)
}

/// Same construction with seeded random topological tie-breaking; the
/// shattering property must not depend on which linear extension is chosen.
pub fn thm1_shattered_set_seeded(
    n: usize,
    seed: u64,
) -> Result<(ConstructionFamily, Vec<TotalOrder>)> {
    thm1_shattered_set_with(n, Some(seed))
}

fn thm1_shattered_set_with(
    n: usize,
    seed: Option<u64>,
) -> Result<(ConstructionFamily, Vec<TotalOrder>)> {
    if n < 4 {
        return Err(Error::TooSmall { n });
    }
    crate::graph::check_n(n)?;
    let pairs = thm1_pairs(n);
    let mut parts = Vec::with_capacity(pairs.len());
    let mut part_names = Vec::with_capacity(pairs.len());
    let mut orders = Vec::with_capacity(pairs.len());
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        parts.push(DirectedGraph::from_edge_list(n, &[(i, j)])?);
        part_names.push(format!("e({i},{j})"));
        let mut edges: Vec<(u32, u32)> = vec![(j, i)];
        edges.extend(pairs.iter().filter(|&&p| p != (i, j)));
        let g = DirectedGraph::from_edge_list(n, &edges)?;
        let order = match seed {
            None => g.topological_sort()?,
            // Offset the seed per pair so ties break differently across orders.
            Some(s) => g.topological_sort_seeded(s.wrapping_add(idx as u64))?,
        };
        orders.push(order);
    }
    let fam = ConstructionFamily {
        n,
        kind: ConstructionKind::Thm1Lower,
        parts,
        part_names,
        vertex_names: default_vertex_names(n),
        k: Some(n / 2),
    };
    Ok((fam, orders))
}

/// Witness for a chosen subset of block pairs: the transitive closure of
/// exactly the chosen forward edges. Compatible with the order of every
/// unchosen pair and incompatible with every chosen one.
pub fn thm1_witness(n: usize, chosen: &[(u32, u32)]) -> Result<OrderRelation> {
    if n < 4 {
        return Err(Error::TooSmall { n });
    }
    let k = n / 2;
    for &(i, j) in chosen {
        let in_range = 1 <= i && (i as usize) <= k && k < (j as usize) && (j as usize) <= n;
        if !in_range {
            return Err(Error::OutOfRange {
                label: if (i as usize) > k || i == 0 { i } else { j },
                n,
            });
        }
    }
    OrderRelation::from_generators(n, chosen)
}

/// The w-vertex construction: paths `w1 -> w_i -> w2` for `4 <= i <= n` and
/// single edges `w3 -> w_i`, giving `2(n-3)` parts. Empty for `n < 4`.
pub fn thm2_h_family(n: usize) -> Result<ConstructionFamily> {
    crate::graph::check_n(n)?;
    let mut parts = Vec::new();
    let mut part_names = Vec::new();
    if n >= 4 {
        for i in 1..=(n - 3) {
            let w = (i + 3) as u32;
            parts.push(DirectedGraph::from_edge_list(n, &[(1, w), (w, 2)])?);
            part_names.push(format!("H{i}"));
        }
        for i in 1..=(n - 3) {
            let w = (i + 3) as u32;
            parts.push(DirectedGraph::from_edge_list(n, &[(3, w)])?);
            part_names.push(format!("H{}", (n - 3) + i));
        }
    }
    Ok(ConstructionFamily {
        n,
        kind: ConstructionKind::Thm2H,
        parts,
        part_names,
        vertex_names: (1..=n).map(|v| format!("w{v}")).collect(),
        k: None,
    })
}

/// The u/v-vertex construction with `k = floor(n/2)`: a chain `u2 .. u_{k+1}`
/// flanked by the two paths `u1 -> u2 -> u_{k+2}` and `u1 -> u_{k+1} -> u_{k+2}`,
/// plus for each `3 <= j <= k` a path `u1 -> v_j -> u_{k+2}` and a chord
/// `u_j -> v_j`; `3(k-1)` parts. Labels: `u_i -> i`, `v_j -> k + j`; when `n`
/// is odd, label `n` stays isolated. Empty for `n < 4`.
pub fn thm2_g_family(n: usize) -> Result<ConstructionFamily> {
    crate::graph::check_n(n)?;
    let mut parts = Vec::new();
    let mut part_names = Vec::new();
    let mut vertex_names = default_vertex_names(n);
    let mut k_field = None;
    if n >= 4 {
        let k = n / 2;
        k_field = Some(k);
        let u = |i: usize| i as u32;
        let v = |j: usize| (k + j) as u32;
        for (label, name) in vertex_names.iter_mut().zip(1..) {
            if name <= k + 2 {
                *label = format!("u{name}");
            } else if name <= 2 * k {
                *label = format!("v{}", name - k);
            } else {
                *label = "isolated".to_string();
            }
        }
        let mut push = |edges: &[(u32, u32)], name: String| -> Result<()> {
            parts.push(DirectedGraph::from_edge_list(n, edges)?);
            part_names.push(name);
            Ok(())
        };
        push(&[(u(1), u(2)), (u(2), u(k + 2))], "G1".into())?;
        for p in 2..=k {
            push(&[(u(p), u(p + 1))], format!("G{p}"))?;
        }
        push(
            &[(u(1), u(k + 1)), (u(k + 1), u(k + 2))],
            format!("G{}", k + 1),
        )?;
        for j in 3..=k {
            push(&[(u(1), v(j)), (v(j), u(k + 2))], format!("G{}", k + j - 1))?;
        }
        for j in 3..=k {
            push(&[(u(j), v(j))], format!("G{}", 2 * k + j - 3))?;
        }
    }
    Ok(ConstructionFamily {
        n,
        kind: ConstructionKind::Thm2G,
        parts,
        part_names,
        vertex_names,
        k: k_field,
    })
}

/// Result of applying the flip strategy for one selected subset.
#[derive(Debug, Clone)]
pub struct FlipWitness {
    pub graph: DirectedGraph,
    pub order: TotalOrder,
    /// True when the written strategy produced a cycle and the brute-force
    /// per-part edge-choice search had to supply the witness instead.
    pub fallback_used: bool,
}

/// Applies the construction's flip-and-delete strategy for the selected part
/// indices (0-based): every selected part contributes exactly one flipped
/// edge and loses its other edges, unselected parts stay intact. Returns the
/// resulting acyclic graph and its deterministic topological sort, whose
/// compatibility trace over the closed parts is exactly the complement of
/// the selection.
pub fn thm2_witness(fam: &ConstructionFamily, selected: &[usize]) -> Result<FlipWitness> {
    let mask = selection_mask(fam, selected)?;
    let edges = match fam.kind {
        ConstructionKind::Thm2H => h_strategy_edges(fam, mask),
        ConstructionKind::Thm2G => g_strategy_edges(fam, mask),
        ConstructionKind::Thm1Lower => {
            return Err(Error::InvariantViolation {
                what: "thm2_witness family kind",
                detail: "flip strategy applies to thm2g/thm2h families".into(),
            })
        }
    };
    let graph = DirectedGraph::from_edge_list(fam.n, &edges)?;
    if graph.is_acyclic() {
        let order = graph.topological_sort()?;
        return Ok(FlipWitness {
            graph,
            order,
            fallback_used: false,
        });
    }
    // Strategy produced a cycle: our reading of the construction is wrong
    // for this subset. Search all per-part edge choices before giving up.
    if let Some(graph) = brute_force_flip(fam, mask) {
        let order = graph.topological_sort()?;
        return Ok(FlipWitness {
            graph,
            order,
            fallback_used: true,
        });
    }
    Err(Error::StrategyFailure { subset: mask })
}

/// Subset masks are single u64 words.
fn check_mask_width(parts: usize) -> Result<()> {
    if parts > 63 {
        return Err(Error::CapExceeded {
            what: "subset mask width (parts)",
            requested: parts,
            cap: 63,
        });
    }
    Ok(())
}

fn selection_mask(fam: &ConstructionFamily, selected: &[usize]) -> Result<u64> {
    check_mask_width(fam.parts.len())?;
    let mut mask = 0u64;
    for &idx in selected {
        if idx >= fam.parts.len() {
            return Err(Error::OutOfRange {
                label: idx as u32,
                n: fam.parts.len(),
            });
        }
        mask |= 1 << idx;
    }
    Ok(mask)
}

fn is_sel(mask: u64, part: usize) -> bool {
    mask >> part & 1 == 1
}

/// Flip strategy for the w-vertex family. Path parts pair with the single
/// edge on the same middle vertex: flip the first path edge when the partner
/// is selected too, otherwise flip the second; selected singles just flip.
fn h_strategy_edges(fam: &ConstructionFamily, mask: u64) -> Vec<(u32, u32)> {
    let n = fam.n;
    let m = n.saturating_sub(3);
    let mut edges = Vec::new();
    for part in 0..fam.parts.len() {
        let selected = is_sel(mask, part);
        if part < m {
            let w = (part + 4) as u32;
            if !selected {
                edges.push((1, w));
                edges.push((w, 2));
            } else if is_sel(mask, part + m) {
                edges.push((w, 1)); // flip w1 -> w_i, drop w_i -> w2
            } else {
                edges.push((2, w)); // flip w_i -> w2, drop w1 -> w_i
            }
        } else {
            let w = (part - m + 4) as u32;
            if selected {
                edges.push((w, 3));
            } else {
                edges.push((3, w));
            }
        }
    }
    edges
}

/// Flip strategy for the u/v-vertex family. Single-edge parts flip directly.
/// Each 2-edge u-path switches between its edges on whether its adjacent
/// chain part is selected: `G1` keys on `G2` (the edge leaving `u2`) and
/// `G_{k+1}` keys on `Gk` (the edge entering `u_{k+1}`). The invariant that
/// keeps the result acyclic: a flipped adjacent part strips its endpoint of
/// all remaining out- (resp. in-) edges, so the newly reversed edge has no
/// return route, including detours through the v-vertices. v-paths pair
/// with their chord part the same way the w-vertex paths pair with their
/// singles.
fn g_strategy_edges(fam: &ConstructionFamily, mask: u64) -> Vec<(u32, u32)> {
    let n = fam.n;
    let k = n / 2;
    let u = |i: usize| i as u32;
    let v = |j: usize| (k + j) as u32;
    // 0-based part layout: 0 = G1; 1..k-1 = chain; k = G_{k+1};
    // k+1..2k-2 = v-paths; 2k-1..3k-4 = chords.
    let chord_part = |j: usize| 2 * k - 1 + (j - 3);
    let mut edges = Vec::new();
    for part in 0..fam.parts.len() {
        let selected = is_sel(mask, part);
        if part == 0 {
            if !selected {
                edges.push((u(1), u(2)));
                edges.push((u(2), u(k + 2)));
            } else if is_sel(mask, 1) {
                edges.push((u(k + 2), u(2))); // flip u2 -> u_{k+2}, drop u1 -> u2
            } else {
                edges.push((u(2), u(1))); // flip u1 -> u2, drop u2 -> u_{k+2}
            }
        } else if part < k {
            let (a, b) = (u(part + 1), u(part + 2));
            if selected {
                edges.push((b, a));
            } else {
                edges.push((a, b));
            }
        } else if part == k {
            if !selected {
                edges.push((u(1), u(k + 1)));
                edges.push((u(k + 1), u(k + 2)));
            } else if is_sel(mask, k - 1) {
                edges.push((u(k + 1), u(1))); // flip u1 -> u_{k+1}, drop u_{k+1} -> u_{k+2}
            } else {
                edges.push((u(k + 2), u(k + 1))); // flip u_{k+1} -> u_{k+2}, drop u1 -> u_{k+1}
            }
        } else if part <= 2 * k - 2 {
            let j = part - k + 2;
            if !selected {
                edges.push((u(1), v(j)));
                edges.push((v(j), u(k + 2)));
            } else if is_sel(mask, chord_part(j)) {
                edges.push((v(j), u(1))); // flip u1 -> v_j, drop v_j -> u_{k+2}
            } else {
                edges.push((u(k + 2), v(j))); // flip v_j -> u_{k+2}, drop u1 -> v_j
            }
        } else {
            let j = part - (2 * k - 1) + 3;
            if selected {
                edges.push((v(j), u(j)));
            } else {
                edges.push((u(j), v(j)));
            }
        }
    }
    edges
}

/// Exhaustive search over one-edge-per-selected-part choices, flipping the
/// chosen edge and deleting the rest. Returns the first acyclic result.
fn brute_force_flip(fam: &ConstructionFamily, mask: u64) -> Option<DirectedGraph> {
    let selected: Vec<usize> = (0..fam.parts.len()).filter(|&p| is_sel(mask, p)).collect();
    let choices: Vec<Vec<(u32, u32)>> = selected.iter().map(|&p| fam.parts[p].edges()).collect();
    let mut pick = vec![0usize; selected.len()];
    loop {
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for (p, part) in fam.parts.iter().enumerate() {
            if !is_sel(mask, p) {
                edges.extend(part.edges());
            }
        }
        for (slot, &p) in selected.iter().enumerate() {
            let _ = p;
            let (a, b) = choices[slot][pick[slot]];
            edges.push((b, a));
        }
        if let Ok(g) = DirectedGraph::from_edge_list(fam.n, &edges) {
            if g.is_acyclic() {
                return Some(g);
            }
        }
        // Next assignment in mixed radix.
        let mut slot = 0;
        loop {
            if slot == pick.len() {
                return None;
            }
            pick[slot] += 1;
            if pick[slot] < choices[slot].len() {
                break;
            }
            pick[slot] = 0;
            slot += 1;
        }
    }
}

/// Subset coverage for property verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

/// One failing subset, kept for diagnosis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarFailure {
    pub subset: u64,
    pub detail: String,
}

/// Outcome of verifying the flip property over subsets of a construction.
#[derive(Debug, Clone)]
pub struct StarReport {
    pub kind: ConstructionKind,
    pub n: usize,
    pub part_count: usize,
    pub subsets_tested: u64,
    pub failures: Vec<StarFailure>,
    /// Subsets where the written strategy cycled and brute force stepped in.
    pub fallback_count: u64,
}

impl StarReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn star_masks(part_count: usize, mode: StarMode) -> Result<Vec<u64>> {
    check_mask_width(part_count)?;
    match mode {
        StarMode::Exhaustive => {
            if part_count > MAX_EXHAUSTIVE_PARTS {
                return Err(Error::CapExceeded {
                    what: "exhaustive subset verification parts",
                    requested: part_count,
                    cap: MAX_EXHAUSTIVE_PARTS,
                });
            }
            Ok((0..(1u64 << part_count)).collect())
        }
        StarMode::Sampled { count, seed } => {
            if count == 0 {
                return Err(Error::InvariantViolation {
                    what: "sample count",
                    detail: "must be at least 1".into(),
                });
            }
            let mut rng = SplitMix64::new(seed);
            Ok((0..count)
                .map(|_| rng.next_below(1u64 << part_count))
                .collect())
        }
    }
}

fn mask_to_selected(mask: u64, part_count: usize) -> Vec<usize> {
    (0..part_count).filter(|&p| mask >> p & 1 == 1).collect()
}

/// Checks the flip property for every covered subset of the family: the
/// witness graph is acyclic and the witness's compatibility trace over the
/// closed parts is exactly the complement of the subset.
pub fn verify_property_star(fam: &ConstructionFamily, mode: StarMode) -> Result<StarReport> {
    match fam.kind {
        ConstructionKind::Thm1Lower => {
            let (_, orders) = thm1_shattered_set(fam.n)?;
            verify_thm1_star(fam.n, &orders, mode)
        }
        ConstructionKind::Thm2G | ConstructionKind::Thm2H => {
            let masks = star_masks(fam.parts.len(), mode)?;
            let closed = fam.closed_parts()?;
            let full = if fam.parts.is_empty() {
                0
            } else {
                (1u64 << fam.parts.len()) - 1
            };
            let results: Vec<(Option<StarFailure>, bool)> = masks
                .par_iter()
                .map(|&mask| check_thm2_subset(fam, &closed, full, mask))
                .collect();
            let mut failures = Vec::new();
            let mut fallback_count = 0;
            for (fail, fell_back) in results {
                if let Some(f) = fail {
                    failures.push(f);
                }
                if fell_back {
                    fallback_count += 1;
                }
            }
            failures.sort_by_key(|f| f.subset);
            Ok(StarReport {
                kind: fam.kind,
                n: fam.n,
                part_count: fam.parts.len(),
                subsets_tested: masks.len() as u64,
                failures,
                fallback_count,
            })
        }
    }
}

fn check_thm2_subset(
    fam: &ConstructionFamily,
    closed: &[OrderRelation],
    full: u64,
    mask: u64,
) -> (Option<StarFailure>, bool) {
    let selected = mask_to_selected(mask, fam.parts.len());
    match thm2_witness(fam, &selected) {
        Err(e) => (
            Some(StarFailure {
                subset: mask,
                detail: e.to_string(),
            }),
            false,
        ),
        Ok(w) => {
            let rel = w.order.to_relation();
            let mut got = 0u64;
            for (i, part) in closed.iter().enumerate() {
                if rel.compatible(part).expect("same n") {
                    got |= 1 << i;
                }
            }
            let expect = full & !mask;
            let fail = if got != expect {
                Some(StarFailure {
                    subset: mask,
                    detail: format!("trace {got:#b}, expected complement {expect:#b}"),
                })
            } else {
                None
            };
            (fail, w.fallback_used)
        }
    }
}

/// Property verification for the bipartite construction against an explicit
/// order list (canonical or re-sorted with different tie-breaking).
pub fn verify_thm1_star(n: usize, orders: &[TotalOrder], mode: StarMode) -> Result<StarReport> {
    let pairs = thm1_pairs(n);
    if orders.len() != pairs.len() {
        return Err(Error::SizeMismatch {
            left: orders.len(),
            right: pairs.len(),
        });
    }
    let masks = star_masks(pairs.len(), mode)?;
    let relations: Vec<OrderRelation> = orders.iter().map(TotalOrder::to_relation).collect();
    let full = (1u64 << pairs.len()) - 1;
    let failures: Vec<StarFailure> = masks
        .par_iter()
        .filter_map(|&mask| {
            let chosen: Vec<(u32, u32)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let witness = match thm1_witness(n, &chosen) {
                Ok(w) => w,
                Err(e) => {
                    return Some(StarFailure {
                        subset: mask,
                        detail: e.to_string(),
                    })
                }
            };
            let mut got = 0u64;
            for (i, rel) in relations.iter().enumerate() {
                if witness.compatible(rel).expect("same n") {
                    got |= 1 << i;
                }
            }
            let expect = full & !mask;
            if got != expect {
                Some(StarFailure {
                    subset: mask,
                    detail: format!("trace {got:#b}, expected complement {expect:#b}"),
                })
            } else {
                None
            }
        })
        .collect();
    let mut failures = failures;
    failures.sort_by_key(|f| f.subset);
    Ok(StarReport {
        kind: ConstructionKind::Thm1Lower,
        n,
        part_count: pairs.len(),
        subsets_tested: masks.len() as u64,
        failures,
        fallback_count: 0,
    })
}

/// Checks evaluated by the proof replay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProofChecks {
    /// The contradiction-edge graph has no directed cycle.
    pub acyclic: bool,
    /// No directed path of length >= 2 runs parallel to one of its edges.
    pub no_parallel_path: bool,
    /// Its underlying undirected graph has no triangle.
    pub triangle_free: bool,
    /// Edge count is at most floor(n^2/4).
    pub mantel_bound: bool,
}

impl ProofChecks {
    pub fn all(&self) -> bool {
        self.acyclic && self.no_parallel_path && self.triangle_free && self.mantel_bound
    }
}

/// One row of the extraction: ground element, its exclusive witness, and the
/// chosen contradiction edge.
#[derive(Debug, Clone)]
pub struct EdgeAssignment {
    pub ground_index: usize,
    pub witness: OrderRelation,
    pub edge: (u32, u32),
}

/// Replay record for the upper-bound argument on one shattered set.
#[derive(Debug, Clone)]
pub struct ProofCheckReport {
    pub n: usize,
    pub set_size: usize,
    pub edge_assignment: Vec<EdgeAssignment>,
    pub edge_graph: DirectedGraph,
    pub edge_count: usize,
    pub checks: ProofChecks,
}

/// Replays the upper-bound extraction on a shattered set `S` of total
/// orders: for each `A` in `S`, takes the first witness (enumeration order)
/// whose trace is exactly `S` minus `A`, extracts its lexicographically
/// smallest edge contradicting `A`, and runs the four structural checks on
/// the assembled edge graph.
pub fn proofcheck_thm1_upper(set: &[TotalOrder], witnesses: &Family) -> Result<ProofCheckReport> {
    if set.is_empty() {
        return Err(Error::InvariantViolation {
            what: "proofcheck set",
            detail: "ground set must be nonempty".into(),
        });
    }
    let n = witnesses.n();
    for t in set {
        if t.n() != n {
            return Err(Error::SizeMismatch {
                left: t.n(),
                right: n,
            });
        }
    }
    let ground: Vec<OrderRelation> = set.iter().map(TotalOrder::to_relation).collect();
    let cert = is_shattered(&ground, witnesses)?.ok_or(Error::NotShattered)?;
    let full = (1u64 << set.len()) - 1;

    let mut edge_graph = DirectedGraph::empty(n)?;
    let mut edge_assignment = Vec::with_capacity(set.len());
    for (a, order) in set.iter().enumerate() {
        let mask = full & !(1 << a);
        let witness = cert.witnesses()[&mask].clone();
        let edge = witness
            .edges()
            .into_iter()
            .find(|&e| order.contradicts(e).expect("edge labels in range"))
            .ok_or(Error::NoContradictionEdge { ground_index: a })?;
        edge_graph.insert_edge(edge.0, edge.1)?;
        edge_assignment.push(EdgeAssignment {
            ground_index: a,
            witness,
            edge,
        });
    }

    let edge_count = edge_graph.edge_count();
    let checks = ProofChecks {
        acyclic: edge_graph.is_acyclic(),
        no_parallel_path: no_parallel_path(&edge_graph),
        triangle_free: triangle_free(&edge_graph),
        mantel_bound: edge_count <= n * n / 4,
    };
    Ok(ProofCheckReport {
        n,
        set_size: set.len(),
        edge_assignment,
        edge_graph,
        edge_count,
        checks,
    })
}

/// True iff no edge `(x, y)` has a parallel directed walk of length >= 2
/// from `x` to `y`. On acyclic graphs (the only case the argument needs)
/// walks and simple paths coincide.
fn no_parallel_path(g: &DirectedGraph) -> bool {
    let n = g.n();
    let adj = g.rows();
    // reach[v] = vertices reachable by a path of length >= 1 (works on
    // cyclic graphs too).
    let mut reach = adj.to_vec();
    for k in 0..n {
        let rk = reach[k];
        for row in reach.iter_mut() {
            if *row >> k & 1 == 1 {
                *row |= rk;
            }
        }
    }
    for &out in adj {
        // two_plus = targets of (edge from x) . (path >= 1)
        let mut two_plus = 0u64;
        let mut row = out;
        while row != 0 {
            let z = row.trailing_zeros() as usize;
            two_plus |= reach[z];
            row &= row - 1;
        }
        if out & two_plus != 0 {
            return false;
        }
    }
    true
}

/// True iff the underlying undirected graph has no triangle.
fn triangle_free(g: &DirectedGraph) -> bool {
    let n = g.n();
    let adj = g.rows();
    let mut sym = vec![0u64; n];
    for a in 0..n {
        let mut row = adj[a];
        while row != 0 {
            let b = row.trailing_zeros() as usize;
            sym[a] |= 1 << b;
            sym[b] |= 1 << a;
            row &= row - 1;
        }
    }
    for a in 0..n {
        let mut row = sym[a];
        while row != 0 {
            let b = row.trailing_zeros() as usize;
            if b > a && sym[a] & sym[b] != 0 {
                return false;
            }
            row &= row - 1;
        }
    }
    true
}
