//! Brute-force enumeration oracles for small ground sets.
//!
//! Matroid enumeration walks the candidate basis families (bitmasks over the
//! `C(n, r)` subsets) depth-first, deciding the highest subset index first
//! and visiting the exclude branch before the include branch, so valid
//! families come out in ascending bitmask order.  Exchange requirements are
//! tracked as witness masks: a pending requirement whose witnesses are all
//! decided and excluded kills the whole subtree.  Pruning only ever removes
//! families that a direct exchange check would reject.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitVec;
use crate::johnson::{binomial, count_stable_sets, SubsetIndexer};
use crate::matroid::Matroid;
use crate::{Error, Limits, Result};

fn enum_guards(n: usize, r: usize, limits: &Limits) -> Result<SubsetIndexer> {
    let ix = SubsetIndexer::new(n, r)?;
    let count = binomial(n, r);
    let limit = limits.enum_bits.min(64) as u64;
    if count > limit {
        return Err(Error::BudgetExceeded {
            what: "candidate-space width C(n,r)",
            value: count,
            limit,
        });
    }
    Ok(ix)
}

/// For each ordered pair of subset indices `(i, j)` and each element `e`
/// removable from subset `i` against subset `j`, the mask of indices that
/// would witness the exchange.
struct ExchangeTables {
    vertex_count: usize,
    masks: Vec<u64>,
    spans: Vec<(u32, u32)>,
}

impl ExchangeTables {
    fn build(ix: &SubsetIndexer) -> Self {
        let nv = ix.vertex_count();
        let mut masks = Vec::new();
        let mut spans = vec![(0u32, 0u32); nv * nv];
        for i in 0..nv {
            let bi = ix.vertex_mask(i);
            for j in 0..nv {
                if i == j {
                    continue;
                }
                let bj = ix.vertex_mask(j);
                let start = masks.len() as u32;
                let mut removable = bi & !bj;
                while removable != 0 {
                    let e = removable.trailing_zeros();
                    removable &= removable - 1;
                    let stripped = bi & !(1u64 << e);
                    let mut witness = 0u64;
                    let mut insertable = bj & !bi;
                    while insertable != 0 {
                        let f = insertable.trailing_zeros();
                        insertable &= insertable - 1;
                        witness |= 1u64 << ix.rank_unchecked(stripped | 1u64 << f);
                    }
                    masks.push(witness);
                }
                spans[i * nv + j] = (start, masks.len() as u32);
            }
        }
        ExchangeTables {
            vertex_count: nv,
            masks,
            spans,
        }
    }

    #[inline]
    fn pair(&self, i: usize, j: usize) -> &[u64] {
        let (a, b) = self.spans[i * self.vertex_count + j];
        &self.masks[a as usize..b as usize]
    }
}

/// Applies one decision to the DFS state.  Returns `false` when some
/// requirement can no longer be satisfied; `pending` may then hold extra
/// entries that the caller discards by truncating.
fn apply_decision(
    tables: &ExchangeTables,
    include: bool,
    idx: usize,
    included: &mut u64,
    pending: &mut Vec<u64>,
) -> bool {
    let undecided = (1u64 << idx) - 1;
    if include {
        let next = *included | 1u64 << idx;
        if !pending.iter().all(|&w| w & next != 0 || w & undecided != 0) {
            return false;
        }
        let mut members = *included;
        while members != 0 {
            let i = members.trailing_zeros() as usize;
            members &= members - 1;
            for &w in tables.pair(i, idx).iter().chain(tables.pair(idx, i)) {
                if w & next == 0 && w & undecided == 0 {
                    return false;
                }
                pending.push(w);
            }
        }
        *included = next;
        true
    } else {
        pending
            .iter()
            .all(|&w| w & *included != 0 || w & undecided != 0)
    }
}

fn dfs(
    tables: &ExchangeTables,
    depth: usize,
    included: u64,
    pending: &mut Vec<u64>,
    out: &mut Vec<u64>,
) {
    if depth == 0 {
        if included != 0 {
            out.push(included);
        }
        return;
    }
    let idx = depth - 1;
    let mark = pending.len();

    let mut excluded_state = included;
    if apply_decision(tables, false, idx, &mut excluded_state, pending) {
        dfs(tables, idx, excluded_state, pending, out);
    }
    pending.truncate(mark);

    let mut included_state = included;
    if apply_decision(tables, true, idx, &mut included_state, pending) {
        dfs(tables, idx, included_state, pending, out);
    }
    pending.truncate(mark);
}

/// All basis families over the `r`-subsets of an `n`-set that satisfy the
/// exchange axiom, as bitmasks in ascending order.
pub fn enumerate_basis_masks(n: usize, r: usize, limits: &Limits) -> Result<Vec<u64>> {
    let ix = enum_guards(n, r, limits)?;
    let tables = ExchangeTables::build(&ix);
    let nv = ix.vertex_count();
    const SEQUENTIAL_BITS: usize = 14;
    if nv <= SEQUENTIAL_BITS {
        let mut out = Vec::new();
        dfs(&tables, nv, 0, &mut Vec::new(), &mut out);
        return Ok(out);
    }
    // Split the top bits into prefixes; each worker replays its prefix and
    // finishes depth-first.  Prefixes come back in ascending order, so
    // concatenation preserves the global order.
    let prefix_bits = nv - SEQUENTIAL_BITS;
    let chunks: Vec<Vec<u64>> = (0u64..1 << prefix_bits)
        .into_par_iter()
        .map(|prefix| {
            let mut pending = Vec::new();
            let mut included = 0u64;
            for b in (0..prefix_bits).rev() {
                let idx = SEQUENTIAL_BITS + b;
                let include = prefix >> b & 1 == 1;
                if !apply_decision(&tables, include, idx, &mut included, &mut pending) {
                    return Vec::new();
                }
            }
            let mut out = Vec::new();
            dfs(&tables, SEQUENTIAL_BITS, included, &mut pending, &mut out);
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Streams every matroid of rank `r` on `n` elements, in ascending basis
/// bitmask order.
pub fn enumerate_matroids(n: usize, r: usize, limits: &Limits) -> Result<MatroidStream> {
    let ix = enum_guards(n, r, limits)?;
    let masks = enumerate_basis_masks(n, r, limits)?;
    Ok(MatroidStream {
        ix,
        masks: masks.into_iter(),
    })
}

pub struct MatroidStream {
    ix: SubsetIndexer,
    masks: std::vec::IntoIter<u64>,
}

impl Iterator for MatroidStream {
    type Item = Matroid;

    fn next(&mut self) -> Option<Matroid> {
        let mask = self.masks.next()?;
        let mut bases = BitVec::zeros(self.ix.vertex_count());
        let mut bits = mask;
        while bits != 0 {
            bases.set(bits.trailing_zeros() as usize, true);
            bits &= bits - 1;
        }
        Some(Matroid::from_parts_unchecked(self.ix.clone(), bases))
    }
}

/// Streams every sparse paving matroid of rank `r` on `n` elements, one per
/// stable set of `J(n, r)`, in depth-first stable-set order.
pub fn enumerate_sparse_paving(n: usize, r: usize, limits: &Limits) -> Result<SparsePavingStream> {
    if r == 0 || r >= n {
        return Err(Error::DegenerateRank { r, n });
    }
    let ix = SubsetIndexer::new(n, r)?;
    if n > limits.stable_ground {
        return Err(Error::BudgetExceeded {
            what: "ground set size for stable-set enumeration",
            value: n as u64,
            limit: limits.stable_ground as u64,
        });
    }
    let adj = ix.adjacency_masks()?;
    Ok(SparsePavingStream {
        ix,
        vertex_count: adj.len(),
        adj,
        stack: Vec::new(),
        pending_empty: true,
    })
}

pub struct SparsePavingStream {
    ix: SubsetIndexer,
    adj: Vec<u64>,
    vertex_count: usize,
    stack: Vec<(u64, usize)>,
    pending_empty: bool,
}

impl SparsePavingStream {
    fn next_stable_mask(&mut self) -> Option<u64> {
        if self.pending_empty {
            self.pending_empty = false;
            self.stack.push((0, 0));
            return Some(0);
        }
        while let Some((current, start)) = self.stack.pop() {
            let mut v = start;
            while v < self.vertex_count && self.adj[v] & current != 0 {
                v += 1;
            }
            if v < self.vertex_count {
                self.stack.push((current, v + 1));
                let child = current | 1u64 << v;
                self.stack.push((child, v + 1));
                return Some(child);
            }
        }
        None
    }
}

impl Iterator for SparsePavingStream {
    type Item = Matroid;

    fn next(&mut self) -> Option<Matroid> {
        loop {
            let mask = self.next_stable_mask()?;
            if mask.count_ones() as usize == self.vertex_count {
                continue; // no bases would remain
            }
            let mut bases = BitVec::ones(self.vertex_count);
            let mut bits = mask;
            while bits != 0 {
                bases.set(bits.trailing_zeros() as usize, false);
                bits &= bits - 1;
            }
            return Some(Matroid::from_parts_unchecked(self.ix.clone(), bases));
        }
    }
}

/// How much of a count report could be computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMode {
    /// All tables computed by exhaustive enumeration.
    Full,
    /// Only the sparse paving column (stable-set counts).
    SparsePavingOnly,
    /// Nothing computed; every column is marked absent.
    Unavailable,
}

/// Per-rank exact counts; `None` marks a column that was not computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankCounts {
    pub r: usize,
    pub matroids: Option<BigUint>,
    pub no_loops_coloops: Option<BigUint>,
    pub sparse_paving: Option<BigUint>,
}

/// Exact count tables for ground-set size `n`, with totals and the empirical
/// rank distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub n: usize,
    pub mode: CountMode,
    pub rows: Vec<RankCounts>,
    pub total_matroids: Option<BigUint>,
    pub total_no_loops_coloops: Option<BigUint>,
    pub total_sparse_paving: Option<BigUint>,
    /// `matroids[r] / total_matroids`, when both are available.
    pub rank_fractions: Vec<Option<f64>>,
}

/// Exhaustively counts matroids, loop/coloop-free matroids, and sparse
/// paving matroids of every rank on `n` elements.
///
/// The sparse paving column is counted two independent ways in full mode —
/// stable-set recursion and enumeration followed by classification — and the
/// two must agree.  Ranks `0` and `n` contribute one sparse paving matroid
/// each by the classification convention.
pub fn count_report(n: usize, limits: &Limits) -> Result<CountReport> {
    if n == 0 || n > crate::johnson::MAX_GROUND {
        return Err(Error::GroundSetSize {
            n,
            max: crate::johnson::MAX_GROUND,
        });
    }
    let full = (0..=n).all(|r| binomial(n, r) <= limits.enum_bits.min(64) as u64);
    let sparse = n <= limits.stable_ground && (0..=n).all(|r| binomial(n, r) <= 64);
    let mode = if full {
        CountMode::Full
    } else if sparse {
        CountMode::SparsePavingOnly
    } else {
        CountMode::Unavailable
    };

    let mut rows = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let sparse_paving = match mode {
            CountMode::Unavailable => None,
            _ => Some(if r == 0 || r == n {
                BigUint::from(1u32)
            } else {
                count_stable_sets(n, r, limits)?
            }),
        };
        let (matroids, no_loops_coloops) = if full {
            let mut total = BigUint::from(0u32);
            let mut clean = BigUint::from(0u32);
            let mut sparse_seen = BigUint::from(0u32);
            for m in enumerate_matroids(n, r, limits)? {
                total += 1u32;
                let (loops, coloops) = m.loops_coloops();
                if loops == 0 && coloops == 0 {
                    clean += 1u32;
                }
                if m.classify_paving().sparse_paving {
                    sparse_seen += 1u32;
                }
            }
            if Some(&sparse_seen) != sparse_paving.as_ref() {
                return Err(Error::Inconsistent(format!(
                    "sparse paving counts disagree at n={n}, r={r}: \
                     enumeration found {sparse_seen}, stable-set count says {:?}",
                    sparse_paving
                )));
            }
            (Some(total), Some(clean))
        } else {
            (None, None)
        };
        rows.push(RankCounts {
            r,
            matroids,
            no_loops_coloops,
            sparse_paving,
        });
    }

    let sum = |take: fn(&RankCounts) -> &Option<BigUint>| -> Option<BigUint> {
        rows.iter()
            .map(take)
            .try_fold(BigUint::from(0u32), |acc, v| v.as_ref().map(|v| acc + v))
    };
    let total_matroids = sum(|row| &row.matroids);
    let total_no_loops_coloops = sum(|row| &row.no_loops_coloops);
    let total_sparse_paving = sum(|row| &row.sparse_paving);

    let rank_fractions = rows
        .iter()
        .map(|row| match (&row.matroids, &total_matroids) {
            (Some(m), Some(total)) => {
                let m = u64::try_from(m).ok()?;
                let total = u64::try_from(total).ok()?;
                Some(m as f64 / total as f64)
            }
            _ => None,
        })
        .collect();

    Ok(CountReport {
        n,
        mode,
        rows,
        total_matroids,
        total_no_loops_coloops,
        total_sparse_paving,
        rank_fractions,
    })
}

/// JSON form of a count report; counts are decimal strings.
#[derive(Debug, Clone, Serialize)]
pub struct CountReportJson {
    pub n: usize,
    pub mode: CountMode,
    pub rows: Vec<RankCountsJson>,
    pub total_matroids: Option<String>,
    pub total_no_loops_coloops: Option<String>,
    pub total_sparse_paving: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankCountsJson {
    pub r: usize,
    pub matroids: Option<String>,
    pub no_loops_coloops: Option<String>,
    pub sparse_paving: Option<String>,
    pub fraction_of_matroids: Option<f64>,
}

impl CountReport {
    pub fn to_json(&self) -> CountReportJson {
        let text = |v: &Option<BigUint>| v.as_ref().map(|b| b.to_string());
        CountReportJson {
            n: self.n,
            mode: self.mode,
            rows: self
                .rows
                .iter()
                .zip(&self.rank_fractions)
                .map(|(row, fraction)| RankCountsJson {
                    r: row.r,
                    matroids: text(&row.matroids),
                    no_loops_coloops: text(&row.no_loops_coloops),
                    sparse_paving: text(&row.sparse_paving),
                    fraction_of_matroids: *fraction,
                })
                .collect(),
            total_matroids: text(&self.total_matroids),
            total_no_loops_coloops: text(&self.total_no_loops_coloops),
            total_sparse_paving: text(&self.total_sparse_paving),
        }
    }

    /// Aligned plain-text table; absent counts print as `-`.
    pub fn to_text_table(&self) -> String {
        let cell = |v: &Option<BigUint>| v.as_ref().map_or("-".to_string(), |b| b.to_string());
        let mut lines = vec![format!(
            "{:>4} {:>16} {:>16} {:>16}",
            "r", "matroids", "no-loops-coloops", "sparse-paving"
        )];
        for row in &self.rows {
            lines.push(format!(
                "{:>4} {:>16} {:>16} {:>16}",
                row.r,
                cell(&row.matroids),
                cell(&row.no_loops_coloops),
                cell(&row.sparse_paving)
            ));
        }
        lines.push(format!(
            "{:>4} {:>16} {:>16} {:>16}",
            "all",
            cell(&self.total_matroids),
            cell(&self.total_no_loops_coloops),
            cell(&self.total_sparse_paving)
        ));
        lines.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{validate_basis_family, validate_rank_axioms};

    #[test]
    fn enumerate_rank_one_examples() {
        let limits = Limits::default();
        let masks = enumerate_basis_masks(2, 1, &limits).unwrap();
        assert_eq!(masks, vec![0b01, 0b10, 0b11]);
        let masks = enumerate_basis_masks(3, 1, &limits).unwrap();
        assert_eq!(masks.len(), 7);
        assert!(masks.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumerate_total_n2() {
        let limits = Limits::default();
        let total: usize = (0..=2)
            .map(|r| enumerate_basis_masks(2, r, &limits).unwrap().len())
            .sum();
        assert_eq!(total, 5);
    }

    #[test]
    fn enumeration_matches_direct_validation() {
        // Every enumerated family passes both validators, and nothing valid
        // is missed.
        let limits = Limits::default();
        for n in 1..=4usize {
            for r in 0..=n {
                let masks = enumerate_basis_masks(n, r, &limits).unwrap();
                let nv = binomial(n, r) as usize;
                let mut expected = Vec::new();
                for word in 1..(1u64 << nv) {
                    let bases = crate::matroid::tests::bitvec_from_word(word, nv);
                    if validate_basis_family(n, r, &bases).unwrap().is_none() {
                        expected.push(word);
                    }
                }
                assert_eq!(masks, expected, "mismatch at n={n} r={r}");
                for word in &masks {
                    let bases = crate::matroid::tests::bitvec_from_word(*word, nv);
                    assert!(validate_rank_axioms(n, r, &bases).unwrap().is_none());
                }
            }
        }
    }

    #[test]
    fn enumeration_is_worker_independent() {
        let limits = Limits::default();
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = pool1.install(|| enumerate_basis_masks(5, 2, &limits).unwrap());
        let b = pool4.install(|| enumerate_basis_masks(5, 2, &limits).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn enumerate_budget_refusal() {
        let err = enumerate_basis_masks(7, 3, &Limits::default()).unwrap_err();
        assert!(matches!(
            err,
            Error::BudgetExceeded {
                value: 35,
                limit: 20,
                ..
            }
        ));
    }

    #[test]
    fn sparse_paving_stream_examples() {
        let limits = Limits::default();
        let count = enumerate_sparse_paving(4, 2, &limits).unwrap().count();
        assert_eq!(count, 10);

        let ms: Vec<Matroid> = enumerate_sparse_paving(2, 1, &limits).unwrap().collect();
        assert_eq!(ms.len(), 3);
        for m in &ms {
            assert!(m.classify_paving().sparse_paving);
        }
    }

    #[test]
    fn sparse_paving_stream_agrees_with_filter() {
        let limits = Limits::default();
        for n in 2..=5usize {
            for r in 1..n {
                let mut from_stable: Vec<Vec<usize>> = enumerate_sparse_paving(n, r, &limits)
                    .unwrap()
                    .map(|m| m.non_basis_indices())
                    .collect();
                from_stable.sort();
                let mut from_filter: Vec<Vec<usize>> = enumerate_matroids(n, r, &limits)
                    .unwrap()
                    .filter(|m| m.classify_paving().sparse_paving)
                    .map(|m| m.non_basis_indices())
                    .collect();
                from_filter.sort();
                assert_eq!(from_stable, from_filter, "disagreement at n={n} r={r}");
            }
        }
    }

    #[test]
    fn count_report_small_values() {
        let limits = Limits::default();
        let report = count_report(2, &limits).unwrap();
        assert_eq!(report.mode, CountMode::Full);
        let column: Vec<u64> = report
            .rows
            .iter()
            .map(|row| u64::try_from(row.matroids.as_ref().unwrap()).unwrap())
            .collect();
        assert_eq!(column, vec![1, 3, 1]);
        assert_eq!(report.total_matroids, Some(BigUint::from(5u32)));

        let report = count_report(4, &limits).unwrap();
        assert_eq!(report.rows[2].sparse_paving, Some(BigUint::from(10u32)));
    }

    #[test]
    fn count_report_duality_symmetry() {
        let limits = Limits::default();
        for n in 1..=5usize {
            let report = count_report(n, &limits).unwrap();
            for r in 0..=n {
                assert_eq!(report.rows[r].matroids, report.rows[n - r].matroids);
                assert_eq!(
                    report.rows[r].sparse_paving,
                    report.rows[n - r].sparse_paving
                );
                // The column bounds: sparse paving and loop/coloop-free
                // counts never exceed the full count.
                let m = report.rows[r].matroids.as_ref().unwrap();
                assert!(report.rows[r].sparse_paving.as_ref().unwrap() <= m);
                assert!(report.rows[r].no_loops_coloops.as_ref().unwrap() <= m);
            }
        }
    }

    #[test]
    fn count_report_sparse_only_mode() {
        let limits = Limits::default();
        let report = count_report(7, &limits).unwrap();
        assert_eq!(report.mode, CountMode::SparsePavingOnly);
        assert!(report.rows.iter().all(|row| row.matroids.is_none()));
        assert!(report.rows.iter().all(|row| row.sparse_paving.is_some()));
        assert!(report.total_matroids.is_none());
        assert!(report.total_sparse_paving.is_some());
        let table = report.to_text_table();
        assert!(table.contains('-'));
    }

    #[test]
    fn count_report_unavailable_mode() {
        let report = count_report(9, &Limits::default()).unwrap();
        assert_eq!(report.mode, CountMode::Unavailable);
        assert!(report.rows.iter().all(|row| row.sparse_paving.is_none()));
    }
}
