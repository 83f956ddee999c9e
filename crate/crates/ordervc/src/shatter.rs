//! Shattering engine: traces, shattered-set certificates, and exact
//! VC-dimension of a witness family over a ground list, where membership is
//! order compatibility.
//!
//! The dimension search is level-wise with apriori-style candidate
//! generation: shattering is hereditary, so a k-subset can only be shattered
//! if all of its (k-1)-subsets are, and candidates are joined from the
//! surviving sets of the previous level. Compatibility bits are precomputed
//! once per (witness, ground element) pair so each candidate test is a pure
//! bit-gather pass over the witness family.

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::Family;
use crate::error::{Error, Result};
use crate::order::OrderRelation;

/// Mask width guard for a single shattering check.
pub const MAX_GROUND: usize = 25;

/// Trace of a witness over a ground list: bit `i` is set iff the witness is
/// compatible with `ground[i]`.
pub fn trace(witness: &OrderRelation, ground: &[OrderRelation]) -> Result<u64> {
    if ground.len() > 64 {
        return Err(Error::CapExceeded {
            what: "ground size",
            requested: ground.len(),
            cap: 64,
        });
    }
    let mut mask = 0u64;
    for (i, g) in ground.iter().enumerate() {
        if witness.compatible(g)? {
            mask |= 1 << i;
        }
    }
    Ok(mask)
}

/// Proof that a ground list is shattered: one witness per subset bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShatterCertificate {
    ground: Vec<OrderRelation>,
    witnesses: BTreeMap<u64, OrderRelation>,
}

impl ShatterCertificate {
    /// Assembles a certificate from parts without reverification; use
    /// [`verify_certificate`] to check it.
    pub fn from_parts(ground: Vec<OrderRelation>, witnesses: BTreeMap<u64, OrderRelation>) -> Self {
        ShatterCertificate { ground, witnesses }
    }

    pub fn ground(&self) -> &[OrderRelation] {
        &self.ground
    }

    pub fn witnesses(&self) -> &BTreeMap<u64, OrderRelation> {
        &self.witnesses
    }

    pub fn size(&self) -> usize {
        self.ground.len()
    }
}

/// Why a certificate failed verification.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateDefect {
    #[error("ground has {got} elements, beyond the supported mask width")]
    GroundTooLarge { got: usize },
    #[error("no witness recorded for mask {mask}")]
    MissingMask { mask: u64 },
    #[error("witness for mask {mask} has n={witness_n}, ground has n={ground_n}")]
    WrongSize {
        mask: u64,
        witness_n: usize,
        ground_n: usize,
    },
    #[error("witness for mask {mask} actually traces {actual}")]
    WrongTrace { mask: u64, actual: u64 },
}

/// Independently rechecks every (mask, witness) pair via [`trace`] and that
/// all `2^|ground|` masks are present. `Ok(())` iff the certificate is valid;
/// the error describes the first failure found.
pub fn verify_certificate(cert: &ShatterCertificate) -> std::result::Result<(), CertificateDefect> {
    let k = cert.ground.len();
    if k > MAX_GROUND {
        return Err(CertificateDefect::GroundTooLarge { got: k });
    }
    let ground_n = cert.ground.first().map(OrderRelation::n);
    for mask in 0..(1u64 << k) {
        let witness = cert
            .witnesses
            .get(&mask)
            .ok_or(CertificateDefect::MissingMask { mask })?;
        if let Some(n) = ground_n {
            if witness.n() != n {
                return Err(CertificateDefect::WrongSize {
                    mask,
                    witness_n: witness.n(),
                    ground_n: n,
                });
            }
        }
        let actual = trace(witness, &cert.ground).map_err(|_| CertificateDefect::WrongSize {
            mask,
            witness_n: witness.n(),
            ground_n: ground_n.unwrap_or(0),
        })?;
        if actual != mask {
            return Err(CertificateDefect::WrongTrace { mask, actual });
        }
    }
    Ok(())
}

/// Checks whether `ground` is shattered by the witness family; on success
/// returns the certificate assigning each mask its first realizing witness
/// in family enumeration order.
pub fn is_shattered(
    ground: &[OrderRelation],
    witnesses: &Family,
) -> Result<Option<ShatterCertificate>> {
    let k = ground.len();
    if k > MAX_GROUND {
        return Err(Error::CapExceeded {
            what: "ground size",
            requested: k,
            cap: MAX_GROUND,
        });
    }
    for g in ground {
        if g.n() != witnesses.n() {
            return Err(Error::SizeMismatch {
                left: g.n(),
                right: witnesses.n(),
            });
        }
    }
    let needed = 1u64 << k;
    let mut found: BTreeMap<u64, OrderRelation> = BTreeMap::new();
    for w in witnesses.members() {
        let mask = trace(w, ground)?;
        found.entry(mask).or_insert_with(|| w.clone());
        if found.len() as u64 == needed {
            break;
        }
    }
    if found.len() as u64 == needed {
        Ok(Some(ShatterCertificate {
            ground: ground.to_vec(),
            witnesses: found,
        }))
    } else {
        Ok(None)
    }
}

/// How a dimension search ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Some level had candidates and none of them was shattered.
    LevelExhausted,
    /// Shattering a k-set needs 2^k distinct witnesses; the next level would
    /// exceed the witness family size, so no larger set can be shattered.
    InformationBound,
    /// Every subset of the ground family up to its full size was covered.
    GroundExhausted,
    /// The wall-clock budget ran out; the result is only a lower bound.
    Budget,
}

/// Evidence that the search was complete (or how far it got).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exhaustion {
    pub search_complete: bool,
    pub termination: Termination,
    /// Subset candidates actually tested across all levels.
    pub candidates_tested: u64,
    /// Candidates surviving hereditary pruning at the first failed level
    /// (0 when the search ended by bound or ground exhaustion).
    pub final_level_candidates: u64,
    pub levels_completed: usize,
}

/// Exact dimension result: a positive certificate at the dimension plus
/// negative exhaustion evidence one level above.
#[derive(Debug, Clone)]
pub struct VcReport {
    pub dimension: usize,
    pub certificate: ShatterCertificate,
    pub exhaustion: Exhaustion,
    /// Indices (into the ground family) of the certified shattered set.
    pub ground_indices: Vec<u32>,
}

/// Search tuning: `budget` turns an exact run into a certified-lower-bound
/// run when exceeded.
#[derive(Debug, Clone, Default)]
pub struct SearchConfig {
    pub budget: Option<Duration>,
}

/// Exact VC-dimension of `witnesses` grounded on `ground`, by level-wise
/// exhaustive search with hereditary pruning.
pub fn vc_dimension(
    ground: &Family,
    witnesses: &Family,
    config: &SearchConfig,
) -> Result<VcReport> {
    if ground.n() != witnesses.n() {
        return Err(Error::SizeMismatch {
            left: ground.n(),
            right: witnesses.n(),
        });
    }
    let deadline = config.budget.map(|b| Instant::now() + b);
    let g_count = ground.len();
    let w_count = witnesses.len();

    // compat[w] = bitset over ground indices, one word row per witness.
    let words = g_count.div_ceil(64);
    let compat: Vec<Vec<u64>> = witnesses
        .members()
        .par_iter()
        .map(|w| {
            let mut row = vec![0u64; words];
            for (gi, g) in ground.members().iter().enumerate() {
                // Same n throughout the families; unwrap is safe.
                if w.compatible(g).expect("validated n") {
                    row[gi / 64] |= 1 << (gi % 64);
                }
            }
            row
        })
        .collect();

    let mut best: Vec<u32> = Vec::new();
    let mut prev: Vec<Vec<u32>> = vec![Vec::new()];
    let mut tested: u64 = 0;
    let mut level = 1usize;
    let termination;
    let mut final_level_candidates = 0u64;

    loop {
        if level > g_count {
            termination = Termination::GroundExhausted;
            break;
        }
        // Pigeonhole: each of the 2^k masks needs its own witness.
        if (level < 64 && (1u64 << level) > w_count as u64) || level >= 64 {
            termination = Termination::InformationBound;
            break;
        }
        if deadline.is_some_and(|d| Instant::now() > d) {
            termination = Termination::Budget;
            break;
        }
        let candidates = apriori_candidates(&prev, level, g_count);
        if candidates.is_empty() {
            termination = Termination::LevelExhausted;
            final_level_candidates = 0;
            break;
        }
        let mut shattered: Vec<Vec<u32>> = Vec::new();
        let mut truncated = false;
        for chunk in candidates.chunks(4096) {
            if deadline.is_some_and(|d| Instant::now() > d) {
                truncated = true;
                break;
            }
            tested += chunk.len() as u64;
            let mut hits: Vec<Vec<u32>> = chunk
                .par_iter()
                .filter(|cand| subset_is_shattered(cand, &compat))
                .cloned()
                .collect();
            shattered.append(&mut hits);
        }
        if truncated {
            termination = Termination::Budget;
            break;
        }
        if shattered.is_empty() {
            termination = Termination::LevelExhausted;
            final_level_candidates = candidates.len() as u64;
            break;
        }
        shattered.sort();
        best = shattered[0].clone();
        prev = shattered;
        level += 1;
    }

    let dimension = best.len();
    let ground_members: Vec<OrderRelation> = best
        .iter()
        .map(|&i| ground.members()[i as usize].clone())
        .collect();
    let certificate = is_shattered(&ground_members, witnesses)?
        .expect("level-wise search only keeps shattered sets");
    Ok(VcReport {
        dimension,
        certificate,
        exhaustion: Exhaustion {
            search_complete: termination != Termination::Budget,
            termination,
            candidates_tested: tested,
            final_level_candidates,
            levels_completed: level - 1,
        },
        ground_indices: best,
    })
}

/// Candidates for level `k`: k-subsets of ground indices all of whose
/// (k-1)-subsets were shattered. Join step pairs (k-1)-sets sharing a
/// (k-2)-prefix; the subsequent filter enforces full hereditarity.
fn apriori_candidates(prev: &[Vec<u32>], level: usize, g_count: usize) -> Vec<Vec<u32>> {
    if level == 1 {
        return (0..g_count as u32).map(|i| vec![i]).collect();
    }
    let prev_set: HashSet<&[u32]> = prev.iter().map(Vec::as_slice).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < prev.len() {
        // Group of (k-1)-sets sharing the same (k-2)-prefix; `prev` is sorted.
        let prefix = &prev[i][..level - 2];
        let mut j = i;
        while j < prev.len() && &prev[j][..level - 2] == prefix {
            j += 1;
        }
        for a in i..j {
            'pair: for b in (a + 1)..j {
                let mut cand = prev[a].clone();
                cand.push(*prev[b].last().expect("nonempty"));
                // Join guarantees the two generating subsets; check the rest.
                let mut sub = Vec::with_capacity(level - 1);
                for skip in 0..level - 2 {
                    sub.clear();
                    sub.extend(cand.iter().enumerate().filter_map(|(p, &v)| {
                        if p == skip {
                            None
                        } else {
                            Some(v)
                        }
                    }));
                    if !prev_set.contains(sub.as_slice()) {
                        continue 'pair;
                    }
                }
                out.push(cand);
            }
        }
        i = j;
    }
    out
}

/// All `2^k` masks realized by some witness? Pure bit-gather over the
/// precomputed compatibility rows.
fn subset_is_shattered(cand: &[u32], compat: &[Vec<u64>]) -> bool {
    let k = cand.len();
    let needed: u64 = 1 << k;
    let mut seen = vec![0u64; (needed as usize).div_ceil(64)];
    let mut found: u64 = 0;
    for row in compat {
        let mut mask = 0u64;
        for (pos, &gi) in cand.iter().enumerate() {
            let gi = gi as usize;
            mask |= (row[gi / 64] >> (gi % 64) & 1) << pos;
        }
        let slot = &mut seen[(mask / 64) as usize];
        let bit = 1u64 << (mask % 64);
        if *slot & bit == 0 {
            *slot |= bit;
            found += 1;
            if found == needed {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{all_total_orders, Family};
    use crate::order::TotalOrder;

    fn totals_as_relations(n: usize) -> Vec<OrderRelation> {
        all_total_orders(n)
            .unwrap()
            .iter()
            .map(TotalOrder::to_relation)
            .collect()
    }

    #[test]
    fn trace_of_empty_order_is_all_ones() {
        let ground = totals_as_relations(3);
        let empty = OrderRelation::empty(3).unwrap();
        assert_eq!(trace(&empty, &ground).unwrap(), (1 << ground.len()) - 1);
    }

    #[test]
    fn trace_of_total_ground_element_is_its_own_bit() {
        let ground = totals_as_relations(3);
        assert_eq!(trace(&ground[0], &ground).unwrap(), 1);
    }

    #[test]
    fn trace_two_element_example() {
        let asc = TotalOrder::from_seq(vec![1, 2, 3]).unwrap().to_relation();
        let desc = TotalOrder::from_seq(vec![3, 2, 1]).unwrap().to_relation();
        let ground = vec![asc.clone(), desc];
        assert_eq!(trace(&asc, &ground).unwrap(), 0b01);
    }

    #[test]
    fn cyclic_shift_triple_is_shattered() {
        let ground: Vec<OrderRelation> = [[1u32, 2, 3], [2, 3, 1], [3, 1, 2]]
            .iter()
            .map(|s| TotalOrder::from_seq(s.to_vec()).unwrap().to_relation())
            .collect();
        let witnesses = Family::all_partial(3).unwrap();
        let cert = is_shattered(&ground, &witnesses).unwrap().unwrap();
        assert_eq!(cert.size(), 3);
        assert!(verify_certificate(&cert).is_ok());
    }

    #[test]
    fn two_totals_not_shattered_by_totals() {
        let ground = totals_as_relations(3);
        let witnesses = Family::all_total(3).unwrap();
        let pair = vec![ground[0].clone(), ground[1].clone()];
        assert!(is_shattered(&pair, &witnesses).unwrap().is_none());
    }

    #[test]
    fn empty_ground_is_vacuously_shattered() {
        let witnesses = Family::all_total(3).unwrap();
        let cert = is_shattered(&[], &witnesses).unwrap().unwrap();
        assert_eq!(cert.size(), 0);
        assert_eq!(cert.witnesses().len(), 1);
        assert!(cert.witnesses().contains_key(&0));
        assert!(verify_certificate(&cert).is_ok());
    }

    #[test]
    fn corrupted_certificate_fails_verification() {
        let ground: Vec<OrderRelation> = [[1u32, 2, 3], [2, 3, 1], [3, 1, 2]]
            .iter()
            .map(|s| TotalOrder::from_seq(s.to_vec()).unwrap().to_relation())
            .collect();
        let witnesses = Family::all_partial(3).unwrap();
        let cert = is_shattered(&ground, &witnesses).unwrap().unwrap();
        let mut bad = cert.witnesses().clone();
        // The empty order traces all-ones, so planting it at mask 3 must fail.
        bad.insert(3, OrderRelation::empty(3).unwrap());
        let bad_cert = ShatterCertificate::from_parts(cert.ground().to_vec(), bad);
        assert_eq!(
            verify_certificate(&bad_cert),
            Err(CertificateDefect::WrongTrace { mask: 3, actual: 7 })
        );
    }

    #[test]
    fn hand_built_certificate_verifies() {
        // Ground 123, 231, 312; witnesses chosen by hand:
        // pairwise intersections give the doubleton masks, each ground order
        // gives its own singleton, the empty order gives all-ones, and the
        // reversed total 321 conflicts with all three.
        let g: Vec<OrderRelation> = [[1u32, 2, 3], [2, 3, 1], [3, 1, 2]]
            .iter()
            .map(|s| TotalOrder::from_seq(s.to_vec()).unwrap().to_relation())
            .collect();
        let mut witnesses = BTreeMap::new();
        witnesses.insert(
            0b000,
            TotalOrder::from_seq(vec![3, 2, 1]).unwrap().to_relation(),
        );
        witnesses.insert(0b001, g[0].clone());
        witnesses.insert(0b010, g[1].clone());
        witnesses.insert(0b100, g[2].clone());
        witnesses.insert(0b011, OrderRelation::from_generators(3, &[(2, 3)]).unwrap());
        witnesses.insert(0b101, OrderRelation::from_generators(3, &[(1, 2)]).unwrap());
        witnesses.insert(0b110, OrderRelation::from_generators(3, &[(3, 1)]).unwrap());
        witnesses.insert(0b111, OrderRelation::empty(3).unwrap());
        let cert = ShatterCertificate::from_parts(g, witnesses);
        assert!(verify_certificate(&cert).is_ok());
    }

    #[test]
    fn vc_dimension_totals_on_partials_small_n() {
        for (n, expected) in [(1usize, 0usize), (2, 1), (3, 3)] {
            let ground = Family::all_total(n).unwrap();
            let witnesses = Family::all_partial(n).unwrap();
            let report = vc_dimension(&ground, &witnesses, &SearchConfig::default()).unwrap();
            assert_eq!(report.dimension, expected, "n={n}");
            assert!(report.exhaustion.search_complete);
            assert_eq!(report.certificate.size(), expected);
            assert!(verify_certificate(&report.certificate).is_ok());
        }
    }

    #[test]
    fn vc_dimension_totals_on_totals_is_one() {
        for n in 2..=4usize {
            let fam = Family::all_total(n).unwrap();
            let report = vc_dimension(&fam, &fam, &SearchConfig::default()).unwrap();
            assert_eq!(report.dimension, 1, "n={n}");
            assert!(report.exhaustion.search_complete);
        }
    }

    /// Naive all-subsets oracle: enumerate every subset of the ground family
    /// (no pruning, no information bound) and take the largest shattered one.
    fn naive_vc(ground: &Family, witnesses: &Family) -> usize {
        let g = ground.members();
        let mut best = 0;
        for subset_mask in 0u64..(1 << g.len()) {
            let size = subset_mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let members: Vec<OrderRelation> = (0..g.len())
                .filter(|i| subset_mask >> i & 1 == 1)
                .map(|i| g[i].clone())
                .collect();
            let mut seen = HashSet::new();
            for w in witnesses.members() {
                seen.insert(trace(w, &members).unwrap());
            }
            if seen.len() == 1 << size {
                best = size;
            }
        }
        best
    }

    #[test]
    fn level_wise_matches_naive_oracle_up_to_n3() {
        for n in 1..=3usize {
            let totals = Family::all_total(n).unwrap();
            let partials = Family::all_partial(n).unwrap();
            for (ground, witnesses) in [
                (&totals, &partials),
                (&partials, &totals),
                (&totals, &totals),
            ] {
                let fast = vc_dimension(ground, witnesses, &SearchConfig::default()).unwrap();
                assert_eq!(fast.dimension, naive_vc(ground, witnesses), "n={n}");
                assert!(fast.exhaustion.search_complete);
            }
        }
    }

    #[test]
    fn information_bound_always_holds() {
        for n in 1..=4usize {
            let ground = Family::all_total(n).unwrap();
            let witnesses = Family::all_total(n).unwrap();
            let report = vc_dimension(&ground, &witnesses, &SearchConfig::default()).unwrap();
            let log2_w = 63 - (witnesses.len() as u64).leading_zeros();
            assert!(report.dimension as u32 <= log2_w);
        }
    }

    #[test]
    fn zero_budget_yields_incomplete_lower_bound() {
        let ground = Family::all_total(3).unwrap();
        let witnesses = Family::all_partial(3).unwrap();
        let config = SearchConfig {
            budget: Some(Duration::ZERO),
        };
        let report = vc_dimension(&ground, &witnesses, &config).unwrap();
        assert!(!report.exhaustion.search_complete);
        assert_eq!(report.exhaustion.termination, Termination::Budget);
    }

    #[test]
    fn size_mismatch_rejected() {
        let g3 = Family::all_total(3).unwrap();
        let w4 = Family::all_partial(4).unwrap();
        assert!(vc_dimension(&g3, &w4, &SearchConfig::default()).is_err());
        let bad = [OrderRelation::empty(4).unwrap()];
        assert!(is_shattered(&bad, &Family::all_partial(3).unwrap()).is_err());
    }
}
