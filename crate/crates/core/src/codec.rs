//! Compressed matroid descriptions and their faithful decoder.
//!
//! The encoder walks the Johnson graph `J(n, r)` with a deterministic
//! deletion loop: while the available vertex set is large or still contains a
//! vertex of induced degree at least `r`, it picks the available vertex of
//! maximum induced degree (ties to the smallest colexicographic index).  A
//! dependent pick joins the selected stable set and takes its whole closed
//! neighbourhood out of play, paying at most two flat-rank cover pairs; an
//! independent pick is simply dropped.  Afterwards a greedy maximal stable
//! set is taken among the leftover dependent vertices whose row and column
//! status is already forced, and the matroid is published as the stable set
//! `selected ∪ completion` plus the cover.
//!
//! The decoder replays the loop on the sparse paving matroid defined by the
//! published stable set, which reproduces the selected set and the leftover
//! vertex set exactly, and then classifies every `r`-subset: outside the
//! replayed structures everything is a basis, inside the selected
//! neighbourhoods the cover decides, and on the leftover vertices dependence
//! is forced by fully-decided rows and columns, membership in the published
//! completion, or a swap argument through a completion neighbour.

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::johnson::{RSubset, StableSet, SubsetIndexer};
use crate::matroid::{FlatRankPair, Matroid};
use crate::{Error, Result};

/// Compressed description of a matroid.
///
/// `n` and `r` are the ground-set size and rank of the matroid as presented.
/// When `dualized` is set the stable set and cover describe the dual matroid
/// (of rank `n - r`), keeping the encoded rank at most `n / 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    pub n: usize,
    pub r: usize,
    pub dualized: bool,
    pub stable_set: StableSet,
    pub cover: Vec<FlatRankPair>,
}

impl Encoding {
    /// Rank of the Johnson graph the payload lives in.
    pub fn working_rank(&self) -> usize {
        if self.dualized {
            self.n - self.r
        } else {
            self.r
        }
    }
}

/// Intermediate state of one encoder run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeTrace {
    /// Dependent vertices picked by the deletion loop.
    pub selected: StableSet,
    /// Flat-rank pairs collected for the selected vertices.
    pub cover: Vec<FlatRankPair>,
    /// Vertices still available when the loop stopped, ascending.
    pub available: Vec<usize>,
    /// Greedy maximal stable set among the qualifying leftover non-bases.
    pub completion: StableSet,
}

/// Result of replaying the deletion loop from a stable set alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayOutcome {
    pub selected: StableSet,
    pub available: Vec<usize>,
}

/// First vertex in the canonical ordering of `vertices`: maximum degree in
/// the induced subgraph, ties broken by minimum colexicographic index.
pub fn canonical_first(ix: &SubsetIndexer, vertices: &BitVec) -> Result<RSubset> {
    if vertices.len() != ix.vertex_count() {
        return Err(Error::InvalidFormat {
            what: "vertex set",
            detail: format!(
                "length {} does not match C({},{}) = {}",
                vertices.len(),
                ix.ground_size(),
                ix.subset_size(),
                ix.vertex_count()
            ),
        });
    }
    if !vertices.any() {
        return Err(Error::EmptyVertexSet);
    }
    let adj = ix.adjacency_lists();
    let mut best: Option<(usize, usize)> = None;
    for v in vertices.iter_ones() {
        let deg = adj[v].iter().filter(|&&w| vertices.get(w as usize)).count();
        match best {
            Some((_, best_deg)) if deg <= best_deg => {}
            _ => best = Some((v, deg)),
        }
    }
    ix.unrank(best.expect("nonempty").0)
}

struct LoopOutput {
    selected: Vec<usize>,
    active: BitVec,
}

/// The shared deletion loop.  `dependent` answers vertex queries; when
/// `non_bases` is given, the containment chain
/// `selected ⊆ non-bases ⊆ selected ∪ N(selected) ∪ active` is asserted
/// after every iteration.
fn deletion_loop(
    ix: &SubsetIndexer,
    adj: &[Vec<u32>],
    dependent: &dyn Fn(usize) -> bool,
    non_bases: Option<&BitVec>,
) -> LoopOutput {
    let nv = ix.vertex_count();
    let n = ix.ground_size();
    let r = ix.subset_size();
    let mut active = BitVec::ones(nv);
    let mut active_count = nv;
    let mut degree: Vec<u32> = adj.iter().map(|row| row.len() as u32).collect();
    let mut selected: Vec<usize> = Vec::new();
    let mut selected_closed = BitVec::zeros(nv);

    let remove =
        |v: usize, active: &mut BitVec, active_count: &mut usize, degree: &mut Vec<u32>| {
            active.set(v, false);
            *active_count -= 1;
            for &w in &adj[v] {
                if active.get(w as usize) {
                    degree[w as usize] -= 1;
                }
            }
        };

    loop {
        // Canonical-first scan; also yields the maximum induced degree.
        let mut pick: Option<(usize, u32)> = None;
        for v in active.iter_ones() {
            match pick {
                Some((_, best)) if degree[v] <= best => {}
                _ => pick = Some((v, degree[v])),
            }
        }
        let max_degree = pick.map_or(0, |(_, d)| d) as usize;
        // The size guard |active| > N / (n - r + 1) is exact: both sides are
        // integers after cross-multiplying.
        let oversized = (active_count as u64) * ((n - r + 1) as u64) > nv as u64;
        if !(oversized || max_degree >= r) {
            break;
        }
        let (x, _) = pick.expect("loop guard implies a nonempty active set");
        if dependent(x) {
            selected.push(x);
            selected_closed.set(x, true);
            remove(x, &mut active, &mut active_count, &mut degree);
            for &w in &adj[x] {
                selected_closed.set(w as usize, true);
                if active.get(w as usize) {
                    remove(w as usize, &mut active, &mut active_count, &mut degree);
                }
            }
        } else {
            remove(x, &mut active, &mut active_count, &mut degree);
        }
        if let Some(k) = non_bases {
            for v in 0..nv {
                if k.get(v) {
                    assert!(
                        selected_closed.get(v) || active.get(v),
                        "containment invariant broken at vertex {v}"
                    );
                }
                if selected.contains(&v) {
                    assert!(k.get(v), "selected vertex {v} is a basis");
                }
            }
        }
    }

    LoopOutput { selected, active }
}

/// Encodes a loopless, coloopless matroid with `0 < r < n`.
pub fn encode(m: &Matroid) -> Result<(Encoding, EncodeTrace)> {
    encode_impl(m, false)
}

/// Same as [`encode`] but asserts the loop containment invariant after every
/// iteration.
pub fn encode_diagnostic(m: &Matroid) -> Result<(Encoding, EncodeTrace)> {
    encode_impl(m, true)
}

fn encode_impl(m: &Matroid, diagnostics: bool) -> Result<(Encoding, EncodeTrace)> {
    let n = m.ground_size();
    let r = m.rank();
    if r == 0 || r == n {
        return Err(Error::DegenerateRank { r, n });
    }
    let (loops, coloops) = m.loops_coloops();
    if loops != 0 || coloops != 0 {
        return Err(Error::LoopsOrColoops {
            loops: RSubset(loops).elements(),
            coloops: RSubset(coloops).elements(),
        });
    }

    let dualized = 2 * r > n;
    let work_owned;
    let work: &Matroid = if dualized {
        work_owned = m.dual();
        &work_owned
    } else {
        m
    };

    let ix = work.indexer();
    let nv = ix.vertex_count();
    let adj = ix.adjacency_lists();
    let non_bases = diagnostics.then(|| {
        let mut k = BitVec::zeros(nv);
        for v in 0..nv {
            if !work.is_basis_index(v) {
                k.set(v, true);
            }
        }
        k
    });
    let dependent = |v: usize| !work.is_basis_index(v);
    let out = deletion_loop(ix, &adj, &dependent, non_bases.as_ref());

    // Leftover dependent vertices whose row and column status is forced:
    // some row and some column are both fully outside the available set and
    // still contain a basis.
    let mut qualified: Vec<usize> = Vec::new();
    for v in out.active.iter_ones() {
        if work.is_basis_index(v) {
            continue;
        }
        let x = ix.unrank(v)?;
        if line_exists(work, &out.active, x, LineKind::Row)
            && line_exists(work, &out.active, x, LineKind::Column)
        {
            qualified.push(v);
        }
    }
    let mut completion: Vec<usize> = Vec::new();
    for &v in &qualified {
        let x_mask = ix.vertex_mask(v);
        if completion
            .iter()
            .all(|&w| (ix.vertex_mask(w) ^ x_mask).count_ones() != 2)
        {
            completion.push(v);
        }
    }

    let mut cover: Vec<FlatRankPair> = Vec::new();
    for &v in &out.selected {
        cover.extend(work.local_cover(ix.unrank(v)?)?);
    }
    cover.sort_unstable();
    cover.dedup();

    let selected = StableSet::from_indices(out.selected);
    let completion = StableSet::from_indices(completion);
    let mut all: Vec<usize> = selected.indices().to_vec();
    all.extend_from_slice(completion.indices());
    let stable_set = StableSet::from_indices(all);
    debug_assert!(stable_set.verify_stable(ix).is_ok());

    let encoding = Encoding {
        n,
        r,
        dualized,
        stable_set,
        cover: cover.clone(),
    };
    let trace = EncodeTrace {
        selected,
        cover,
        available: out.active.iter_ones().collect(),
        completion,
    };
    Ok((encoding, trace))
}

enum LineKind {
    Row,
    Column,
}

/// Is there a row of `x` (a swap family removing one fixed element) or a
/// column (inserting one fixed element) that avoids `available` entirely and
/// contains at least one basis?
fn line_exists(work: &Matroid, available: &BitVec, x: RSubset, kind: LineKind) -> bool {
    let ix = work.indexer();
    let n = ix.ground_size();
    match kind {
        LineKind::Row => x.elements().into_iter().any(|e| {
            let removed = x.0 & !(1u64 << e);
            let mut has_basis = false;
            for y in 0..n {
                if x.contains(y) {
                    continue;
                }
                let j = ix.rank_unchecked(removed | 1u64 << y);
                if available.get(j) {
                    return false;
                }
                has_basis |= work.is_basis_index(j);
            }
            has_basis
        }),
        LineKind::Column => (0..n).filter(|&y| !x.contains(y)).any(|y| {
            let mut has_basis = false;
            for e in x.elements() {
                let j = ix.rank_unchecked(x.0 & !(1u64 << e) | 1u64 << y);
                if available.get(j) {
                    return false;
                }
                has_basis |= work.is_basis_index(j);
            }
            has_basis
        }),
    }
}

/// Replays the deletion loop where "dependent" means membership in the given
/// stable set, i.e. on the sparse paving matroid whose non-bases are exactly
/// `stable`.  On any encoder output this reproduces the encoder's selected
/// and available sets.
pub fn replay(n: usize, r: usize, stable: &StableSet) -> Result<ReplayOutcome> {
    if r == 0 || r >= n {
        return Err(Error::DegenerateRank { r, n });
    }
    if 2 * r > n {
        return Err(Error::DualizeFirst { n, r });
    }
    let ix = SubsetIndexer::new(n, r)?;
    stable.verify_stable(&ix)?;
    let adj = ix.adjacency_lists();
    let dependent = |v: usize| stable.contains(v);
    let out = deletion_loop(&ix, &adj, &dependent, None);
    Ok(ReplayOutcome {
        selected: StableSet::from_indices(out.selected),
        available: out.active.iter_ones().collect(),
    })
}

/// Reconstructs the matroid described by an encoding.
///
/// Inputs that are not genuine encoder outputs are rejected with
/// [`Error::InvalidEncoding`]: either the reconstructed family fails the
/// exchange axiom, or re-encoding the reconstruction does not reproduce the
/// input exactly.
pub fn decode(enc: &Encoding) -> Result<Matroid> {
    let n = enc.n;
    let r = enc.r;
    if n == 0 || n > crate::johnson::MAX_GROUND {
        return Err(Error::GroundSetSize {
            n,
            max: crate::johnson::MAX_GROUND,
        });
    }
    if r == 0 || r >= n {
        return Err(Error::DegenerateRank { r, n });
    }
    if enc.dualized != (2 * r > n) {
        return Err(Error::InvalidEncoding {
            reason: format!(
                "dualized flag {} is inconsistent with n={n}, r={r}",
                enc.dualized
            ),
        });
    }
    let rr = enc.working_rank();
    let ix = SubsetIndexer::new(n, rr)?;
    let nv = ix.vertex_count();
    for pair in &enc.cover {
        if pair.flat & !ix.full_mask() != 0 {
            return Err(Error::InvalidEncoding {
                reason: format!(
                    "cover flat {:?} leaves the ground set",
                    pair.flat_elements()
                ),
            });
        }
        if pair.rank > pair.flat.count_ones() as usize {
            return Err(Error::InvalidEncoding {
                reason: format!(
                    "cover pair ({:?}, {}) asserts a rank above its size",
                    pair.flat_elements(),
                    pair.rank
                ),
            });
        }
    }

    let replayed = replay(n, rr, &enc.stable_set)?;
    let in_selected = BitVec::from_indices(nv, replayed.selected.indices());
    let in_available = BitVec::from_indices(nv, &replayed.available);
    let completion: Vec<usize> = enc
        .stable_set
        .indices()
        .iter()
        .copied()
        .filter(|i| !in_selected.get(*i))
        .collect();
    let in_completion = BitVec::from_indices(nv, &completion);

    let adj = ix.adjacency_lists();
    let mut near_selected = BitVec::zeros(nv);
    for v in in_selected.iter_ones() {
        for &w in &adj[v] {
            near_selected.set(w as usize, true);
        }
    }

    let covered = |v: usize| -> bool {
        let mask = ix.vertex_mask(v);
        enc.cover.iter().any(|pair| pair.covers(mask))
    };

    // Dependence for every vertex outside the available set: forced bases
    // outside the selected closed neighbourhood, cover decisions inside it.
    let mut dependent = BitVec::zeros(nv);
    for v in 0..nv {
        if !in_available.get(v) && (in_selected.get(v) || near_selected.get(v)) && covered(v) {
            dependent.set(v, true);
        }
    }

    // Available vertices: dependent iff a fully-decided all-dependent row or
    // column exists, or the vertex sits in the completion, or a completion
    // neighbour forces it through decided lines.
    for v in in_available.iter_ones() {
        let x = ix.unrank(v)?;
        let is_dependent = in_completion.get(v)
            || full_dependent_line(&ix, &dependent, &in_available, x, LineKind::Row)
            || full_dependent_line(&ix, &dependent, &in_available, x, LineKind::Column)
            || forced_by_completion_neighbor(
                &ix,
                &adj,
                &dependent,
                &in_available,
                &in_completion,
                v,
            );
        if is_dependent {
            dependent.set(v, true);
        }
    }

    let mut bases = BitVec::zeros(nv);
    for v in 0..nv {
        if !dependent.get(v) {
            bases.set(v, true);
        }
    }
    if let Some(violation) = crate::matroid::exchange_violation(&ix, &bases) {
        return Err(Error::InvalidEncoding {
            reason: format!("reconstructed family is not a matroid: {violation}"),
        });
    }
    let working = Matroid::from_parts_unchecked(ix, bases);
    let presented = if enc.dualized {
        working.dual()
    } else {
        working
    };

    // Faithfulness: a genuine encoding re-encodes to itself.
    match encode(&presented) {
        Ok((again, _)) => {
            let normalized = normalized(enc);
            if again != normalized {
                return Err(Error::InvalidEncoding {
                    reason: "re-encoding the reconstruction does not reproduce the input".into(),
                });
            }
        }
        Err(Error::LoopsOrColoops { loops, coloops }) => {
            return Err(Error::InvalidEncoding {
                reason: format!("reconstruction has loops {loops:?} / coloops {coloops:?}"),
            });
        }
        Err(e) => return Err(e),
    }
    Ok(presented)
}

fn normalized(enc: &Encoding) -> Encoding {
    let mut cover = enc.cover.clone();
    cover.sort_unstable();
    cover.dedup();
    Encoding {
        n: enc.n,
        r: enc.r,
        dualized: enc.dualized,
        stable_set: StableSet::from_indices(enc.stable_set.indices().to_vec()),
        cover,
    }
}

/// A row/column of `x` disjoint from the available set with every member
/// already marked dependent.
fn full_dependent_line(
    ix: &SubsetIndexer,
    dependent: &BitVec,
    available: &BitVec,
    x: RSubset,
    kind: LineKind,
) -> bool {
    let n = ix.ground_size();
    match kind {
        LineKind::Row => x.elements().into_iter().any(|e| {
            let removed = x.0 & !(1u64 << e);
            (0..n).filter(|&y| !x.contains(y)).all(|y| {
                let j = ix.rank_unchecked(removed | 1u64 << y);
                !available.get(j) && dependent.get(j)
            })
        }),
        LineKind::Column => (0..n).filter(|&y| !x.contains(y)).any(|y| {
            x.elements().into_iter().all(|e| {
                let j = ix.rank_unchecked(x.0 & !(1u64 << e) | 1u64 << y);
                !available.get(j) && dependent.get(j)
            })
        }),
    }
}

/// Swap argument through a completion neighbour `y = x - u + w`: if some row
/// and column of `y` are fully decided and contain a basis, then `x` is
/// dependent exactly when one of the two back-swaps is dependent.
fn forced_by_completion_neighbor(
    ix: &SubsetIndexer,
    adj: &[Vec<u32>],
    dependent: &BitVec,
    available: &BitVec,
    in_completion: &BitVec,
    v: usize,
) -> bool {
    let n = ix.ground_size();
    let x_mask = ix.vertex_mask(v);
    for &nb in &adj[v] {
        let y_idx = nb as usize;
        if !in_completion.get(y_idx) {
            continue;
        }
        let y_mask = ix.vertex_mask(y_idx);
        let from_x = (x_mask & !y_mask).trailing_zeros() as usize;
        let from_y = (y_mask & !x_mask).trailing_zeros() as usize;
        let y = RSubset(y_mask);

        let decided_basis_rows: Vec<usize> = y
            .elements()
            .into_iter()
            .filter(|&e| {
                let removed = y_mask & !(1u64 << e);
                let mut has_basis = false;
                for w in 0..n {
                    if y.contains(w) {
                        continue;
                    }
                    let j = ix.rank_unchecked(removed | 1u64 << w);
                    if available.get(j) {
                        return false;
                    }
                    has_basis |= !dependent.get(j);
                }
                has_basis
            })
            .collect();
        if decided_basis_rows.is_empty() {
            continue;
        }
        let decided_basis_cols: Vec<usize> = (0..n)
            .filter(|&w| !y.contains(w))
            .filter(|&w| {
                let mut has_basis = false;
                for e in y.elements() {
                    let j = ix.rank_unchecked(y_mask & !(1u64 << e) | 1u64 << w);
                    if available.get(j) {
                        return false;
                    }
                    has_basis |= !dependent.get(j);
                }
                has_basis
            })
            .collect();
        for &e in &decided_basis_rows {
            let back_row = ix.rank_unchecked(y_mask & !(1u64 << e) | 1u64 << from_x);
            for &f in &decided_basis_cols {
                let back_col = ix.rank_unchecked(y_mask & !(1u64 << from_y) | 1u64 << f);
                if dependent.get(back_row) || dependent.get(back_col) {
                    return true;
                }
            }
        }
    }
    false
}

/// Wire format for encodings: stable set sorted by colexicographic index,
/// cover sorted by flat mask then rank.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EncodingJson {
    pub n: usize,
    pub r: usize,
    pub dualized: bool,
    pub stable_set: Vec<Vec<usize>>,
    pub cover: Vec<CoverPairJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverPairJson {
    pub flat: Vec<usize>,
    pub rank: usize,
}

impl Encoding {
    pub fn to_json(&self) -> EncodingJson {
        let ix = SubsetIndexer::new(self.n, self.working_rank()).expect("indexer");
        let stable_set = self
            .stable_set
            .indices()
            .iter()
            .map(|&i| RSubset(ix.vertex_mask(i)).elements())
            .collect();
        let cover = self
            .cover
            .iter()
            .map(|p| CoverPairJson {
                flat: p.flat_elements(),
                rank: p.rank,
            })
            .collect();
        EncodingJson {
            n: self.n,
            r: self.r,
            dualized: self.dualized,
            stable_set,
            cover,
        }
    }

    pub fn from_json(json: &EncodingJson) -> Result<Encoding> {
        let n = json.n;
        let r = json.r;
        if n == 0 || n > crate::johnson::MAX_GROUND {
            return Err(Error::GroundSetSize {
                n,
                max: crate::johnson::MAX_GROUND,
            });
        }
        if r == 0 || r >= n {
            return Err(Error::DegenerateRank { r, n });
        }
        let rr = if json.dualized { n - r } else { r };
        let ix = SubsetIndexer::new(n, rr)?;
        let stable_set = StableSet::from_subsets(&ix, &json.stable_set)?;
        let mut cover = Vec::with_capacity(json.cover.len());
        for pair in &json.cover {
            for &e in &pair.flat {
                if e >= n {
                    return Err(Error::ElementOutOfRange { element: e, n });
                }
            }
            let flat = RSubset::from_elements(&pair.flat);
            if flat.len() != pair.flat.len() {
                return Err(Error::InvalidFormat {
                    what: "cover flat",
                    detail: format!("repeated element in {:?}", pair.flat),
                });
            }
            if pair.rank > flat.len() {
                return Err(Error::InvalidFormat {
                    what: "cover pair",
                    detail: format!(
                        "asserted rank {} exceeds flat size {}",
                        pair.rank,
                        flat.len()
                    ),
                });
            }
            cover.push(FlatRankPair {
                flat: flat.0,
                rank: pair.rank,
            });
        }
        cover.sort_unstable();
        cover.dedup();
        Ok(Encoding {
            n,
            r,
            dualized: json.dualized,
            stable_set,
            cover,
        })
    }

    /// Canonical single-line JSON; byte-identical for equal encodings.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(text: &str) -> Result<Encoding> {
        let json: EncodingJson = serde_json::from_str(text).map_err(|e| Error::InvalidFormat {
            what: "encoding JSON",
            detail: e.to_string(),
        })?;
        Encoding::from_json(&json)
    }
}
