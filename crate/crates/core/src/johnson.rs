//! The Johnson graph `J(n, r)` and its stable sets.
//!
//! Vertices are the `r`-subsets of `{0, .., n-1}`; two subsets are adjacent
//! exactly when their symmetric difference has two elements.  Subsets are
//! identified with dense indices through colexicographic ranking, which is
//! also the fixed linear order used by the encoding procedure in
//! [`crate::codec`].

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};

use crate::{Error, Limits, Result};

/// Largest ground-set size supported by subset ranking (masks are `u64`).
pub const MAX_GROUND: usize = 63;

/// Hard cap on vertices for the algorithms that use one `u64` per vertex set.
const MAX_BITMASK_VERTICES: usize = 64;

/// Hard cap on vertices for indexers that materialize the subset table.
const MAX_INDEXED_VERTICES: u64 = 1 << 22;

/// Exact binomial coefficient `C(n, k)` for `n <= 63`.
///
/// The largest value in that range, `C(63, 31)`, still fits in a `u64`.
pub fn binomial(n: usize, k: usize) -> u64 {
    assert!(n <= MAX_GROUND, "binomial supports n <= {MAX_GROUND}");
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) as u128 / i as u128;
    }
    acc as u64
}

/// An `r`-element subset of `{0, .., n-1}`, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RSubset(pub u64);

impl RSubset {
    pub fn from_elements(elements: &[usize]) -> Self {
        let mut mask = 0u64;
        for &e in elements {
            debug_assert!(e < 64);
            mask |= 1 << e;
        }
        RSubset(mask)
    }

    pub fn elements(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.0.count_ones() as usize);
        let mut bits = self.0;
        while bits != 0 {
            out.push(bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
        out
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, element: usize) -> bool {
        element < 64 && (self.0 >> element) & 1 == 1
    }

    /// Adjacency in the Johnson graph: symmetric difference of size two.
    pub fn adjacent(self, other: RSubset) -> bool {
        (self.0 ^ other.0).count_ones() == 2
    }
}

/// Bijection between `r`-subsets of an `n`-set and `{0, .., C(n,r)-1}`.
///
/// The order is colexicographic: for elements `x1 < .. < xr` the index is
/// `sum_k C(x_k, k)`.  On subsets of equal size this coincides with numeric
/// order of the bitmasks, so the full subset table is generated by stepping
/// through bit permutations.
#[derive(Debug, Clone)]
pub struct SubsetIndexer {
    n: usize,
    r: usize,
    degree: usize,
    verts: Vec<u64>,
}

impl SubsetIndexer {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundSetSize { n, max: MAX_GROUND });
        }
        if r > n {
            return Err(Error::RankOutOfRange { r, n });
        }
        let count = binomial(n, r);
        if count > MAX_INDEXED_VERTICES {
            return Err(Error::BudgetExceeded {
                what: "subset count for materialized indexing",
                value: count,
                limit: MAX_INDEXED_VERTICES,
            });
        }
        let mut verts = Vec::with_capacity(count as usize);
        if r == 0 {
            verts.push(0);
        } else {
            let mut mask: u64 = (1u64 << r) - 1;
            verts.push(mask);
            for _ in 1..count {
                mask = next_same_weight(mask);
                verts.push(mask);
            }
        }
        Ok(SubsetIndexer {
            n,
            r,
            degree: r * (n - r),
            verts,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn subset_size(&self) -> usize {
        self.r
    }

    /// Number of vertices of `J(n, r)`, i.e. `C(n, r)`.
    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    /// Degree of every vertex of `J(n, r)`, i.e. `r (n - r)`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn check_subset(&self, x: RSubset) -> Result<()> {
        if x.len() != self.r {
            return Err(Error::SubsetSize {
                got: x.len(),
                want: self.r,
            });
        }
        if x.0 & !self.full_mask() != 0 {
            let element = (64 - (x.0 & !self.full_mask()).leading_zeros() - 1) as usize;
            return Err(Error::ElementOutOfRange { element, n: self.n });
        }
        Ok(())
    }

    fn require_proper(&self) -> Result<()> {
        if self.r == 0 || self.r == self.n {
            return Err(Error::DegenerateRank {
                r: self.r,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Colexicographic index of a subset.
    pub fn rank(&self, x: RSubset) -> Result<usize> {
        self.check_subset(x)?;
        Ok(self.rank_unchecked(x.0))
    }

    pub(crate) fn rank_unchecked(&self, mask: u64) -> usize {
        let mut idx = 0u64;
        let mut bits = mask;
        let mut k = 0usize;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            k += 1;
            idx += binomial(e, k);
        }
        idx as usize
    }

    /// Inverse of [`rank`](Self::rank).
    pub fn unrank(&self, index: usize) -> Result<RSubset> {
        if index >= self.verts.len() {
            return Err(Error::IndexOutOfRange {
                index,
                count: self.verts.len(),
            });
        }
        Ok(RSubset(self.verts[index]))
    }

    #[inline]
    pub(crate) fn vertex_mask(&self, index: usize) -> u64 {
        self.verts[index]
    }

    /// The Johnson-graph neighbourhood of `x`: all subsets obtained by a
    /// single swap `x - e + y`, sorted by colexicographic index.
    pub fn neighborhood(&self, x: RSubset) -> Result<Vec<RSubset>> {
        self.require_proper()?;
        self.check_subset(x)?;
        let mut out = Vec::with_capacity(self.degree);
        for e in x.elements() {
            let removed = x.0 & !(1u64 << e);
            for y in 0..self.n {
                if !x.contains(y) {
                    out.push(RSubset(removed | 1u64 << y));
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// The row and column cliques around `x`.
    ///
    /// Row `e` (for `e` in `x`) holds the swaps that remove `e`; column `y`
    /// (for `y` outside `x`) holds the swaps that insert `y`.  Rows and
    /// columns induce cliques, their union is the neighbourhood of `x`, and
    /// any row meets any column in exactly one subset.
    #[allow(clippy::type_complexity)]
    pub fn clique_lines(
        &self,
        x: RSubset,
    ) -> Result<(BTreeMap<usize, Vec<RSubset>>, BTreeMap<usize, Vec<RSubset>>)> {
        self.require_proper()?;
        self.check_subset(x)?;
        let mut rows = BTreeMap::new();
        let mut cols: BTreeMap<usize, Vec<RSubset>> = BTreeMap::new();
        for e in x.elements() {
            let removed = x.0 & !(1u64 << e);
            let mut row = Vec::with_capacity(self.n - self.r);
            for y in 0..self.n {
                if !x.contains(y) {
                    let swapped = RSubset(removed | 1u64 << y);
                    row.push(swapped);
                    cols.entry(y).or_default().push(swapped);
                }
            }
            row.sort_unstable();
            rows.insert(e, row);
        }
        for col in cols.values_mut() {
            col.sort_unstable();
        }
        Ok((rows, cols))
    }

    /// Adjacency lists over vertex indices, for algorithms on the whole graph.
    pub(crate) fn adjacency_lists(&self) -> Vec<Vec<u32>> {
        let nv = self.verts.len();
        let mut adj = vec![Vec::with_capacity(self.degree); nv];
        for (i, row) in adj.iter_mut().enumerate() {
            let x = RSubset(self.verts[i]);
            for e in x.elements() {
                let removed = x.0 & !(1u64 << e);
                for y in 0..self.n {
                    if !x.contains(y) {
                        row.push(self.rank_unchecked(removed | 1u64 << y) as u32);
                    }
                }
            }
            row.sort_unstable();
        }
        adj
    }

    /// Adjacency as one `u64` mask per vertex; only for graphs on at most 64
    /// vertices.
    pub(crate) fn adjacency_masks(&self) -> Result<Vec<u64>> {
        let nv = self.verts.len();
        if nv > MAX_BITMASK_VERTICES {
            return Err(Error::BudgetExceeded {
                what: "vertex count for bitmask algorithms",
                value: nv as u64,
                limit: MAX_BITMASK_VERTICES as u64,
            });
        }
        let mut adj = vec![0u64; nv];
        for i in 0..nv {
            for j in i + 1..nv {
                if (self.verts[i] ^ self.verts[j]).count_ones() == 2 {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        Ok(adj)
    }
}

/// Next bitmask with the same popcount (Gosper).
fn next_same_weight(v: u64) -> u64 {
    let t = v | (v - 1);
    let low = !t & (!t).wrapping_neg();
    (t + 1) | ((low - 1) >> (v.trailing_zeros() + 1))
}

/// A stable (independent) vertex set of a Johnson graph, stored as sorted
/// colexicographic indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct StableSet {
    indices: Vec<usize>,
}

impl StableSet {
    /// Sorts and deduplicates; stability is not checked here.
    pub fn from_indices(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        StableSet { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn subsets(&self, ix: &SubsetIndexer) -> Result<Vec<RSubset>> {
        self.indices.iter().map(|&i| ix.unrank(i)).collect()
    }

    /// Checks pairwise non-adjacency; the error names an adjacent pair.
    pub fn verify_stable(&self, ix: &SubsetIndexer) -> Result<()> {
        for &i in &self.indices {
            if i >= ix.vertex_count() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    count: ix.vertex_count(),
                });
            }
        }
        for (a, &i) in self.indices.iter().enumerate() {
            for &j in &self.indices[a + 1..] {
                let x = RSubset(ix.vertex_mask(i));
                let y = RSubset(ix.vertex_mask(j));
                if x.adjacent(y) {
                    return Err(Error::NotStable {
                        n: ix.ground_size(),
                        r: ix.subset_size(),
                        first: x.elements(),
                        second: y.elements(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Builds a stable set from explicit subsets, validating sizes, range,
    /// distinctness and stability.
    pub fn from_subsets(ix: &SubsetIndexer, subsets: &[Vec<usize>]) -> Result<Self> {
        let mut indices = Vec::with_capacity(subsets.len());
        for elems in subsets {
            for &e in elems {
                if e >= ix.ground_size() {
                    return Err(Error::ElementOutOfRange {
                        element: e,
                        n: ix.ground_size(),
                    });
                }
            }
            let sub = RSubset::from_elements(elems);
            if sub.len() != elems.len() {
                return Err(Error::InvalidFormat {
                    what: "subset",
                    detail: format!("repeated element in {elems:?}"),
                });
            }
            indices.push(ix.rank(sub)?);
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidFormat {
                what: "stable set",
                detail: "repeated subset".into(),
            });
        }
        let set = StableSet { indices };
        set.verify_stable(ix)?;
        Ok(set)
    }
}

/// The `r + 1` distinct eigenvalues of `J(n, r)` for `1 <= r <= n/2`,
/// descending: `(r - i)(n - r - i) - i` for `i = 0, .., r`.
pub fn johnson_spectrum(n: usize, r: usize) -> Result<Vec<i64>> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::GroundSetSize { n, max: MAX_GROUND });
    }
    if r == 0 || r == n {
        return Err(Error::DegenerateRank { r, n });
    }
    if 2 * r > n {
        return Err(Error::DualizeFirst { n, r });
    }
    Ok((0..=r)
        .map(|i| ((r - i) * (n - r - i)) as i64 - i as i64)
        .collect())
}

/// Checks, in exact integer arithmetic, that the adjacency matrix of
/// `J(n, r)` is annihilated by the product of `(A - lambda I)` over the given
/// eigenvalue list.
pub fn annihilation_with_eigenvalues(n: usize, r: usize, eigenvalues: &[i64]) -> Result<bool> {
    if n > 8 {
        return Err(Error::BudgetExceeded {
            what: "ground set size for the dense spectral check",
            value: n as u64,
            limit: 8,
        });
    }
    let ix = SubsetIndexer::new(n, r)?;
    ix.require_proper()?;
    let nv = ix.vertex_count();
    let mut adjacency = vec![vec![BigInt::from(0); nv]; nv];
    for (i, row) in ix.adjacency_lists().iter().enumerate() {
        for &j in row {
            adjacency[i][j as usize] = BigInt::from(1);
        }
    }
    let mut product = identity(nv);
    for &lambda in eigenvalues {
        let shifted = shift_diagonal(&adjacency, lambda);
        product = mat_mul(&product, &shifted);
    }
    let zero = BigInt::from(0);
    Ok(product.iter().flatten().all(|v| *v == zero))
}

/// `true` iff the product of `(A - lambda I)` over the spectrum of `J(n, r)`
/// is exactly the zero matrix.
pub fn verify_spectrum_annihilation(n: usize, r: usize) -> Result<bool> {
    let eigenvalues = johnson_spectrum(n, r)?;
    annihilation_with_eigenvalues(n, r, &eigenvalues)
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::from(0); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::from(1);
    }
    m
}

fn shift_diagonal(a: &[Vec<BigInt>], lambda: i64) -> Vec<Vec<BigInt>> {
    let mut m = a.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= BigInt::from(lambda);
    }
    m
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::from(0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = &a[i][k];
            if *aik == BigInt::from(0) {
                continue;
            }
            for j in 0..n {
                let bkj = &b[k][j];
                if *bkj != BigInt::from(0) {
                    out[i][j] += aik * bkj;
                }
            }
        }
    }
    out
}

fn stable_guards(n: usize, r: usize, limits: &Limits) -> Result<Vec<u64>> {
    let ix = SubsetIndexer::new(n, r)?;
    ix.require_proper()?;
    if n > limits.stable_ground {
        return Err(Error::BudgetExceeded {
            what: "ground set size for stable-set search",
            value: n as u64,
            limit: limits.stable_ground as u64,
        });
    }
    ix.adjacency_masks()
}

/// Exact number of stable sets of `J(n, r)`, including the empty set.
///
/// Branches on a maximum-degree vertex: every stable set either avoids it or
/// contains it and avoids its neighbourhood.  Subtrees whose remaining
/// vertices are pairwise non-adjacent close in one step.
pub fn count_stable_sets(n: usize, r: usize, limits: &Limits) -> Result<BigUint> {
    let adj = stable_guards(n, r, limits)?;
    let all = full_vertex_mask(adj.len());
    Ok(count_rec(&adj, all))
}

fn full_vertex_mask(nv: usize) -> u64 {
    if nv == 64 {
        u64::MAX
    } else {
        (1u64 << nv) - 1
    }
}

fn count_rec(adj: &[u64], active: u64) -> BigUint {
    if active == 0 {
        return BigUint::from(1u32);
    }
    let (v, deg) = busiest_vertex(adj, active);
    if deg == 0 {
        return BigUint::from(1u32) << active.count_ones();
    }
    let without = active & !(1u64 << v);
    let dropped = without & !adj[v];
    if active.count_ones() >= 30 {
        let (a, b) = rayon::join(|| count_rec(adj, without), || count_rec(adj, dropped));
        a + b
    } else {
        count_rec(adj, without) + count_rec(adj, dropped)
    }
}

/// Active vertex of maximum degree in the induced subgraph; ties break to the
/// smallest index.
fn busiest_vertex(adj: &[u64], active: u64) -> (usize, u32) {
    let mut best_v = 0usize;
    let mut best_deg = 0u32;
    let mut found = false;
    let mut bits = active;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let deg = (adj[v] & active).count_ones();
        if !found || deg > best_deg {
            best_v = v;
            best_deg = deg;
            found = true;
        }
    }
    (best_v, best_deg)
}

/// A maximum-cardinality stable set of `J(n, r)` and its size.
pub fn max_stable_set(n: usize, r: usize, limits: &Limits) -> Result<(usize, StableSet)> {
    let adj = stable_guards(n, r, limits)?;
    let all = full_vertex_mask(adj.len());
    let mut best = (0u32, 0u64);
    max_rec(&adj, all, 0, &mut best);
    let indices = mask_indices(best.1);
    Ok((best.0 as usize, StableSet::from_indices(indices)))
}

fn max_rec(adj: &[u64], active: u64, current: u64, best: &mut (u32, u64)) {
    let size = current.count_ones();
    if size + active.count_ones() <= best.0 {
        return;
    }
    if active == 0 {
        *best = (size, current);
        return;
    }
    let (v, deg) = busiest_vertex(adj, active);
    if deg == 0 {
        *best = (size + active.count_ones(), current | active);
        return;
    }
    let without = active & !(1u64 << v);
    max_rec(adj, without & !adj[v], current | 1u64 << v, best);
    max_rec(adj, without, current, best);
}

fn mask_indices(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut bits = mask;
    while bits != 0 {
        out.push(bits.trailing_zeros() as usize);
        bits &= bits - 1;
    }
    out
}

/// Partitions the `r`-subsets of an `n`-set into `n` classes by element sum
/// modulo `n`.  Adjacent subsets differ by a single swap, so their sums fall
/// in different residue classes and every class is stable; the largest class
/// has at least `C(n, r) / n` members.
pub fn graham_sloane_partition(n: usize, r: usize) -> Result<Vec<StableSet>> {
    let ix = SubsetIndexer::new(n, r)?;
    ix.require_proper()?;
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..ix.vertex_count() {
        let sum: usize = RSubset(ix.vertex_mask(i)).elements().iter().sum();
        classes[sum % n].push(i);
    }
    Ok(classes.into_iter().map(StableSet::from_indices).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn subs(elems: &[usize]) -> RSubset {
        RSubset::from_elements(elems)
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(5, 6), 0);
        assert_eq!(binomial(63, 31), 916312070471295267);
    }

    #[test]
    fn colex_rank_examples() {
        let ix = SubsetIndexer::new(4, 2).unwrap();
        assert_eq!(ix.rank(subs(&[0, 1])).unwrap(), 0);
        assert_eq!(ix.rank(subs(&[1, 2])).unwrap(), 2);
        assert_eq!(ix.rank(subs(&[2, 3])).unwrap(), 5);
        assert_eq!(ix.unrank(0).unwrap(), subs(&[0, 1]));
    }

    #[test]
    fn rank_rejects_bad_subsets() {
        let ix = SubsetIndexer::new(4, 2).unwrap();
        assert!(matches!(
            ix.rank(subs(&[0, 1, 2])),
            Err(Error::SubsetSize { got: 3, want: 2 })
        ));
        assert!(matches!(
            ix.rank(subs(&[0, 5])),
            Err(Error::ElementOutOfRange { element: 5, n: 4 })
        ));
        assert!(matches!(
            ix.unrank(6),
            Err(Error::IndexOutOfRange { index: 6, count: 6 })
        ));
    }

    #[test]
    fn rank_unrank_roundtrip_exhaustive() {
        for n in 1..=8 {
            for r in 0..=n {
                let ix = SubsetIndexer::new(n, r).unwrap();
                assert_eq!(ix.vertex_count() as u64, binomial(n, r));
                for i in 0..ix.vertex_count() {
                    let x = ix.unrank(i).unwrap();
                    assert_eq!(x.len(), r);
                    assert_eq!(ix.rank(x).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn neighborhood_example() {
        let ix = SubsetIndexer::new(4, 2).unwrap();
        let nb = ix.neighborhood(subs(&[0, 1])).unwrap();
        let expect: Vec<RSubset> = [[0usize, 2], [1, 2], [0, 3], [1, 3]]
            .iter()
            .map(|p| subs(p))
            .collect();
        assert_eq!(nb, expect);
    }

    #[test]
    fn neighborhood_is_regular_and_symmetric() {
        for n in 2..=7 {
            for r in 1..n {
                let ix = SubsetIndexer::new(n, r).unwrap();
                let mut sets: Vec<Vec<RSubset>> = Vec::new();
                for i in 0..ix.vertex_count() {
                    let x = ix.unrank(i).unwrap();
                    let nb = ix.neighborhood(x).unwrap();
                    assert_eq!(nb.len(), r * (n - r));
                    for y in &nb {
                        assert!(x.adjacent(*y));
                        assert!(!nb.contains(&x));
                    }
                    sets.push(nb);
                }
                if n > 6 {
                    continue; // symmetry sweep below is exhaustive for n <= 6
                }
                for i in 0..sets.len() {
                    let x = ix.unrank(i).unwrap();
                    for y in &sets[i] {
                        let j = ix.rank(*y).unwrap();
                        assert!(sets[j].contains(&x), "adjacency not symmetric");
                    }
                }
            }
        }
    }

    #[test]
    fn clique_lines_example() {
        let ix = SubsetIndexer::new(4, 2).unwrap();
        let (rows, cols) = ix.clique_lines(subs(&[0, 1])).unwrap();
        assert_eq!(rows[&0], vec![subs(&[1, 2]), subs(&[1, 3])]);
        assert_eq!(cols[&2], vec![subs(&[0, 2]), subs(&[1, 2])]);
    }

    #[test]
    fn clique_lines_structure() {
        for n in 2..=6 {
            for r in 1..n {
                let ix = SubsetIndexer::new(n, r).unwrap();
                for i in 0..ix.vertex_count() {
                    let x = ix.unrank(i).unwrap();
                    let (rows, cols) = ix.clique_lines(x).unwrap();
                    assert_eq!(rows.len(), r);
                    assert_eq!(cols.len(), n - r);
                    let mut union: Vec<RSubset> = Vec::new();
                    for row in rows.values() {
                        assert_eq!(row.len(), n - r);
                        assert_clique(row);
                        union.extend_from_slice(row);
                    }
                    for col in cols.values() {
                        assert_eq!(col.len(), r);
                        assert_clique(col);
                    }
                    union.sort_unstable();
                    assert_eq!(union, ix.neighborhood(x).unwrap());
                    for row in rows.values() {
                        for col in cols.values() {
                            let common: Vec<_> = row.iter().filter(|v| col.contains(v)).collect();
                            assert_eq!(common.len(), 1);
                        }
                    }
                }
            }
        }
    }

    fn assert_clique(vertices: &[RSubset]) {
        for (i, a) in vertices.iter().enumerate() {
            for b in &vertices[i + 1..] {
                assert!(a.adjacent(*b), "{a:?} and {b:?} not adjacent");
            }
        }
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(johnson_spectrum(4, 2).unwrap(), vec![4, 0, -2]);
        assert_eq!(johnson_spectrum(6, 3).unwrap(), vec![9, 3, -1, -3]);
        for n in 2..=12 {
            for r in 1..=n / 2 {
                let spec = johnson_spectrum(n, r).unwrap();
                assert_eq!(spec.len(), r + 1);
                assert_eq!(*spec.last().unwrap(), -(r as i64));
                assert!(spec.windows(2).all(|w| w[0] > w[1]), "not descending");
            }
        }
        assert!(matches!(
            johnson_spectrum(4, 3),
            Err(Error::DualizeFirst { n: 4, r: 3 })
        ));
    }

    #[test]
    fn annihilation_small_cases() {
        assert!(verify_spectrum_annihilation(4, 2).unwrap());
        assert!(verify_spectrum_annihilation(6, 3).unwrap());
    }

    #[test]
    fn annihilation_detects_perturbation() {
        let mut eigs = johnson_spectrum(4, 2).unwrap();
        eigs[0] += 1;
        assert!(!annihilation_with_eigenvalues(4, 2, &eigs).unwrap());
    }

    #[test]
    fn annihilation_rejects_large_instances() {
        assert!(matches!(
            annihilation_with_eigenvalues(9, 2, &[1]),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    /// Independent oracle: scan all subsets of the vertex set.
    fn brute_count_stable(adj: &[u64]) -> BigUint {
        let nv = adj.len();
        assert!(nv <= 20);
        let mut count = 0u64;
        'outer: for mask in 0..(1u64 << nv) {
            let mut bits = mask;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if adj[v] & mask != 0 {
                    continue 'outer;
                }
            }
            count += 1;
        }
        BigUint::from(count)
    }

    fn brute_max_stable(adj: &[u64]) -> usize {
        let nv = adj.len();
        let mut best = 0;
        'outer: for mask in 0..(1u64 << nv) {
            if (mask.count_ones() as usize) <= best {
                continue;
            }
            let mut bits = mask;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if adj[v] & mask != 0 {
                    continue 'outer;
                }
            }
            best = mask.count_ones() as usize;
        }
        best
    }

    #[test]
    fn count_stable_examples() {
        let limits = Limits::default();
        assert_eq!(
            count_stable_sets(2, 1, &limits).unwrap(),
            BigUint::from(3u32)
        );
        assert_eq!(
            count_stable_sets(3, 1, &limits).unwrap(),
            BigUint::from(4u32)
        );
        assert_eq!(
            count_stable_sets(4, 2, &limits).unwrap(),
            BigUint::from(10u32)
        );
    }

    #[test]
    fn count_stable_matches_brute_force() {
        let limits = Limits::default();
        for n in 2..=6 {
            for r in 1..n {
                let ix = SubsetIndexer::new(n, r).unwrap();
                if ix.vertex_count() > 16 {
                    continue;
                }
                let adj = ix.adjacency_masks().unwrap();
                assert_eq!(
                    count_stable_sets(n, r, &limits).unwrap(),
                    brute_count_stable(&adj),
                    "mismatch at J({n},{r})"
                );
            }
        }
    }

    #[test]
    fn count_stable_budget_refusal() {
        let err = count_stable_sets(8, 2, &Limits::default()).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { limit: 7, .. }));
    }

    #[test]
    fn max_stable_examples() {
        let limits = Limits::default();
        let (size, _) = max_stable_set(3, 1, &limits).unwrap();
        assert_eq!(size, 1);
        let (size, witness) = max_stable_set(4, 2, &limits).unwrap();
        assert_eq!(size, 2);
        let ix = SubsetIndexer::new(4, 2).unwrap();
        witness.verify_stable(&ix).unwrap();
        assert_eq!(
            witness.subsets(&ix).unwrap(),
            vec![subs(&[0, 1]), subs(&[2, 3])]
        );
        let (size, _) = max_stable_set(5, 2, &limits).unwrap();
        assert_eq!(size, 2);
    }

    #[test]
    fn max_stable_matches_brute_force_and_hoffman() {
        let limits = Limits::default();
        for n in 2..=6 {
            for r in 1..n {
                let ix = SubsetIndexer::new(n, r).unwrap();
                if ix.vertex_count() > 16 {
                    continue;
                }
                let adj = ix.adjacency_masks().unwrap();
                let (size, witness) = max_stable_set(n, r, &limits).unwrap();
                assert_eq!(size, brute_max_stable(&adj));
                witness.verify_stable(&ix).unwrap();
                // Spectral bound: size * (n - s + 1) <= C(n, r) with s = min(r, n-r).
                let s = r.min(n - r);
                assert!(size as u64 * (n - s + 1) as u64 <= binomial(n, r));
            }
        }
    }

    #[test]
    fn graham_sloane_examples() {
        let ix = SubsetIndexer::new(5, 2).unwrap();
        let classes = graham_sloane_partition(5, 2).unwrap();
        assert_eq!(classes.len(), 5);
        assert!(classes.iter().all(|c| c.len() == 2));
        assert_eq!(
            classes[1].subsets(&ix).unwrap(),
            vec![subs(&[0, 1]), subs(&[2, 4])]
        );

        let ix4 = SubsetIndexer::new(4, 2).unwrap();
        let classes4 = graham_sloane_partition(4, 2).unwrap();
        let sizes: Vec<usize> = classes4.iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![1, 2, 1, 2]);
        assert_eq!(
            classes4[1].subsets(&ix4).unwrap(),
            vec![subs(&[0, 1]), subs(&[2, 3])]
        );
    }

    #[test]
    fn graham_sloane_partition_properties() {
        for n in 2..=10 {
            for r in 1..n {
                let ix = SubsetIndexer::new(n, r).unwrap();
                let classes = graham_sloane_partition(n, r).unwrap();
                assert_eq!(classes.len(), n);
                let mut seen = vec![false; ix.vertex_count()];
                let mut max_class = 0;
                for class in &classes {
                    class.verify_stable(&ix).unwrap();
                    max_class = max_class.max(class.len());
                    for &i in class.indices() {
                        assert!(!seen[i], "classes overlap");
                        seen[i] = true;
                    }
                }
                assert!(seen.iter().all(|&s| s), "classes are not exhaustive");
                assert!(max_class as u64 * n as u64 >= binomial(n, r));
            }
        }
    }

    #[test]
    fn stable_count_dominates_largest_residue_class() {
        let limits = Limits::default();
        for n in 2..=7 {
            for r in 1..n {
                if SubsetIndexer::new(n, r).unwrap().vertex_count() > 35 {
                    continue;
                }
                let classes = graham_sloane_partition(n, r).unwrap();
                let max_class = classes.iter().map(|c| c.len()).max().unwrap();
                let count = count_stable_sets(n, r, &limits).unwrap();
                assert!(count >= BigUint::from(1u32) << max_class);
            }
        }
    }

    #[test]
    fn verify_stable_reports_adjacent_pair() {
        let ix = SubsetIndexer::new(4, 2).unwrap();
        let set = StableSet::from_indices(vec![0, 1]);
        let err = set.verify_stable(&ix).unwrap_err();
        assert!(matches!(err, Error::NotStable { .. }));
    }

    proptest! {
        #[test]
        fn prop_rank_unrank_roundtrip(n in 1usize..=12, seed in 0usize..1000) {
            for r in 0..=n {
                let ix = SubsetIndexer::new(n, r).unwrap();
                let i = seed % ix.vertex_count();
                let x = ix.unrank(i).unwrap();
                prop_assert_eq!(ix.rank(x).unwrap(), i);
            }
        }

        #[test]
        fn prop_adjacency_iff_symdiff_two(n in 2usize..=9, a in 0usize..=200, b in 0usize..=200) {
            let r = n / 2;
            let ix = SubsetIndexer::new(n, r).unwrap();
            let x = ix.unrank(a % ix.vertex_count()).unwrap();
            let y = ix.unrank(b % ix.vertex_count()).unwrap();
            let in_neighborhood = ix.neighborhood(x).unwrap().contains(&y);
            prop_assert_eq!(in_neighborhood, (x.0 ^ y.0).count_ones() == 2);
        }
    }
}
