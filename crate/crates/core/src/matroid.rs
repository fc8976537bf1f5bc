//! Matroids over basis indicator vectors.
//!
//! A matroid of rank `r` on ground set `{0, .., n-1}` is a nonempty family of
//! `r`-subsets (its bases) closed under basis exchange.  The family is stored
//! as one bit per `r`-subset, indexed colexicographically.  Every query here
//! reduces to the rank function `rank_of(Y) = max |Y ∩ B|` over the bases.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::johnson::{RSubset, StableSet, SubsetIndexer};
use crate::{Error, Result};

/// Bitmask over ground-set elements (bit `i` = element `i`).
pub type ElementMask = u64;

/// Why a family of `r`-subsets fails the basis exchange axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisViolation {
    /// The family contains no set at all.
    Empty,
    /// No exchange: removing `element` from `basis` admits no replacement
    /// from `other` that lands back in the family.
    Exchange {
        basis: Vec<usize>,
        other: Vec<usize>,
        element: usize,
    },
}

impl fmt::Display for BasisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisViolation::Empty => write!(f, "the family is empty"),
            BasisViolation::Exchange {
                basis,
                other,
                element,
            } => write!(
                f,
                "no exchange for element {element} of basis {basis:?} against {other:?}"
            ),
        }
    }
}

/// Why a derived rank function fails the matroid rank axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankAxiomViolation {
    Empty,
    Monotonicity {
        set: Vec<usize>,
        element: usize,
    },
    UnitIncrease {
        set: Vec<usize>,
        element: usize,
    },
    Submodularity {
        first: Vec<usize>,
        second: Vec<usize>,
    },
}

/// Paving classification of a matroid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PavingClass {
    pub paving: bool,
    pub sparse_paving: bool,
}

/// A flat together with its rank, certifying dependence of any set that
/// meets the flat in more than `rank` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlatRankPair {
    pub flat: ElementMask,
    pub rank: usize,
}

impl FlatRankPair {
    /// `true` iff `|flat ∩ set| > rank`.
    pub fn covers(&self, set: ElementMask) -> bool {
        (self.flat & set).count_ones() as usize > self.rank
    }

    pub fn flat_elements(&self) -> Vec<usize> {
        RSubset(self.flat).elements()
    }
}

/// The unique circuit inside, and the unique cocircuit disjoint from, an
/// `r`-subset of rank `r - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircuitCocircuit {
    pub circuit: ElementMask,
    pub cocircuit: ElementMask,
}

/// A matroid, stored as ground-set size, rank, and basis indicator.
#[derive(Debug, Clone)]
pub struct Matroid {
    bases: BitVec,
    ix: SubsetIndexer,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground_size() == other.ground_size()
            && self.rank() == other.rank()
            && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl Matroid {
    /// Validates the exchange axiom and wraps the family.
    pub fn new(n: usize, r: usize, bases: BitVec) -> Result<Self> {
        let ix = SubsetIndexer::new(n, r)?;
        if bases.len() != ix.vertex_count() {
            return Err(Error::InvalidFormat {
                what: "basis indicator",
                detail: format!(
                    "length {} does not match C({n},{r}) = {}",
                    bases.len(),
                    ix.vertex_count()
                ),
            });
        }
        if let Some(v) = exchange_violation(&ix, &bases) {
            return Err(Error::NotAMatroid(v));
        }
        Ok(Matroid { bases, ix })
    }

    /// Wraps a family already known to satisfy exchange.
    pub(crate) fn from_parts_unchecked(ix: SubsetIndexer, bases: BitVec) -> Self {
        debug_assert_eq!(bases.len(), ix.vertex_count());
        debug_assert!(exchange_violation(&ix, &bases).is_none());
        Matroid { bases, ix }
    }

    /// Builds a matroid from explicit basis lists, validating everything.
    pub fn from_basis_lists(n: usize, r: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let ix = SubsetIndexer::new(n, r)?;
        let mut bases = BitVec::zeros(ix.vertex_count());
        for list in lists {
            for &e in list {
                if e >= n {
                    return Err(Error::ElementOutOfRange { element: e, n });
                }
            }
            let sub = RSubset::from_elements(list);
            if sub.len() != list.len() {
                return Err(Error::InvalidFormat {
                    what: "basis",
                    detail: format!("repeated element in {list:?}"),
                });
            }
            let i = ix.rank(sub)?;
            if bases.get(i) {
                return Err(Error::InvalidFormat {
                    what: "basis list",
                    detail: format!("basis {list:?} listed twice"),
                });
            }
            bases.set(i, true);
        }
        Matroid::new(n, r, bases)
    }

    pub fn ground_size(&self) -> usize {
        self.ix.ground_size()
    }

    pub fn rank(&self) -> usize {
        self.ix.subset_size()
    }

    pub fn indexer(&self) -> &SubsetIndexer {
        &self.ix
    }

    pub fn basis_indicator(&self) -> &BitVec {
        &self.bases
    }

    pub fn basis_count(&self) -> usize {
        self.bases.count_ones()
    }

    #[inline]
    pub fn is_basis_index(&self, index: usize) -> bool {
        self.bases.get(index)
    }

    pub fn is_basis(&self, x: RSubset) -> Result<bool> {
        Ok(self.bases.get(self.ix.rank(x)?))
    }

    /// Basis subsets as element masks, in colexicographic order.
    pub fn basis_masks(&self) -> Vec<ElementMask> {
        self.bases
            .iter_ones()
            .map(|i| self.ix.vertex_mask(i))
            .collect()
    }

    /// Basis subsets as sorted element lists, in colexicographic order.
    pub fn basis_lists(&self) -> Vec<Vec<usize>> {
        self.bases
            .iter_ones()
            .map(|i| RSubset(self.ix.vertex_mask(i)).elements())
            .collect()
    }

    /// Colexicographic indices of the non-bases.
    pub fn non_basis_indices(&self) -> Vec<usize> {
        (0..self.bases.len())
            .filter(|&i| !self.bases.get(i))
            .collect()
    }

    /// Rank of an arbitrary element set: largest intersection with a basis.
    pub fn rank_of(&self, set: ElementMask) -> usize {
        self.bases
            .iter_ones()
            .map(|i| (self.ix.vertex_mask(i) & set).count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// The smallest flat containing `set`: all elements whose addition does
    /// not raise the rank.
    pub fn closure(&self, set: ElementMask) -> ElementMask {
        let base_rank = self.rank_of(set);
        let mut out = set;
        for e in 0..self.ground_size() {
            let bit = 1u64 << e;
            if out & bit == 0 && self.rank_of(set | bit) == base_rank {
                out |= bit;
            }
        }
        out
    }

    /// For an `r`-subset of rank `r - 1`: the unique circuit inside it and
    /// the unique cocircuit disjoint from it.
    ///
    /// The circuit collects the elements whose removal keeps the rank at
    /// `r - 1`; the cocircuit is the complement of the closure.  The bases in
    /// the neighbourhood of `x` are then exactly the swaps that remove a
    /// circuit element and insert a cocircuit element.
    pub fn circuit_cocircuit(&self, x: RSubset) -> Result<CircuitCocircuit> {
        self.ix.rank(x)?;
        let r = self.rank();
        if r == 0 || self.rank_of(x.0) != r - 1 {
            return Err(Error::RankPrecondition {
                detail: format!(
                    "subset {:?} has rank {}, expected r - 1 = {}",
                    x.elements(),
                    self.rank_of(x.0),
                    r.wrapping_sub(1)
                ),
            });
        }
        let mut circuit = 0u64;
        for e in x.elements() {
            if self.rank_of(x.0 & !(1u64 << e)) == r - 1 {
                circuit |= 1u64 << e;
            }
        }
        let full = self.ix.full_mask();
        let cocircuit = full & !self.closure(x.0);
        Ok(CircuitCocircuit { circuit, cocircuit })
    }

    /// At most two flat-rank pairs covering every dependent set in the closed
    /// neighbourhood of a dependent `r`-subset `x`, and no independent one.
    pub fn local_cover(&self, x: RSubset) -> Result<Vec<FlatRankPair>> {
        self.ix.rank(x)?;
        let r = self.rank();
        let rk = self.rank_of(x.0);
        if rk >= r {
            return Err(Error::RankPrecondition {
                detail: format!("subset {:?} is independent", x.elements()),
            });
        }
        let mut pairs = if rk + 1 < r {
            vec![FlatRankPair {
                flat: self.closure(x.0),
                rank: rk,
            }]
        } else {
            let cc = self.circuit_cocircuit(x)?;
            let circuit_flat = self.closure(cc.circuit);
            vec![
                FlatRankPair {
                    flat: circuit_flat,
                    rank: self.rank_of(circuit_flat),
                },
                FlatRankPair {
                    flat: self.ix.full_mask() & !cc.cocircuit,
                    rank: r - 1,
                },
            ]
        };
        pairs.sort_unstable();
        pairs.dedup();
        Ok(pairs)
    }

    /// Elements lying in no basis, and elements lying in every basis.
    pub fn loops_coloops(&self) -> (ElementMask, ElementMask) {
        let full = self.ix.full_mask();
        let mut union = 0u64;
        let mut intersection = full;
        for mask in self.bases.iter_ones().map(|i| self.ix.vertex_mask(i)) {
            union |= mask;
            intersection &= mask;
        }
        (full & !union, intersection)
    }

    /// The dual matroid: complements of bases, rank `n - r`.
    pub fn dual(&self) -> Matroid {
        let n = self.ground_size();
        let r = self.rank();
        let dual_ix = SubsetIndexer::new(n, n - r).expect("dual indexer");
        let full = self.ix.full_mask();
        let mut bases = BitVec::zeros(dual_ix.vertex_count());
        for i in self.bases.iter_ones() {
            let co = full & !self.ix.vertex_mask(i);
            bases.set(dual_ix.rank_unchecked(co), true);
        }
        Matroid { bases, ix: dual_ix }
    }

    /// Paving (every `(r-1)`-subset independent, hence no circuit shorter
    /// than `r`) and sparse paving (both the matroid and its dual paving).
    pub fn classify_paving(&self) -> PavingClass {
        let paving = self.is_paving();
        let sparse_paving = paving && self.dual().is_paving();
        PavingClass {
            paving,
            sparse_paving,
        }
    }

    fn is_paving(&self) -> bool {
        let r = self.rank();
        if r == 0 {
            return true;
        }
        let n = self.ground_size();
        let sub_ix = SubsetIndexer::new(n, r - 1).expect("indexer");
        (0..sub_ix.vertex_count()).all(|i| self.rank_of(sub_ix.vertex_mask(i)) == r - 1)
    }

    /// The sparse paving matroid whose non-bases are exactly the given stable
    /// set of `J(n, r)`.
    pub fn from_stable_set(n: usize, r: usize, non_bases: &StableSet) -> Result<Matroid> {
        if r == 0 || r >= n {
            return Err(Error::DegenerateRank { r, n });
        }
        let ix = SubsetIndexer::new(n, r)?;
        non_bases.verify_stable(&ix)?;
        if non_bases.len() == ix.vertex_count() {
            return Err(Error::InvalidFormat {
                what: "stable set",
                detail: "it excludes every r-subset, leaving no bases".into(),
            });
        }
        let mut bases = BitVec::ones(ix.vertex_count());
        for &i in non_bases.indices() {
            bases.set(i, false);
        }
        debug_assert!(exchange_violation(&ix, &bases).is_none());
        Ok(Matroid { bases, ix })
    }
}

/// Builds a basis indicator from explicit subset lists without requiring the
/// family to be a matroid, so both validators can be run on arbitrary input.
pub fn basis_indicator_from_lists(n: usize, r: usize, lists: &[Vec<usize>]) -> Result<BitVec> {
    let ix = SubsetIndexer::new(n, r)?;
    let mut bases = BitVec::zeros(ix.vertex_count());
    for list in lists {
        for &e in list {
            if e >= n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
        }
        let sub = RSubset::from_elements(list);
        if sub.len() != list.len() {
            return Err(Error::InvalidFormat {
                what: "basis",
                detail: format!("repeated element in {list:?}"),
            });
        }
        bases.set(ix.rank(sub)?, true);
    }
    Ok(bases)
}

/// Direct check of the basis exchange axiom over a family of `r`-subsets.
/// `Ok(None)` means the family is the basis family of a matroid.
pub fn validate_basis_family(n: usize, r: usize, bases: &BitVec) -> Result<Option<BasisViolation>> {
    let ix = SubsetIndexer::new(n, r)?;
    if bases.len() != ix.vertex_count() {
        return Err(Error::InvalidFormat {
            what: "basis indicator",
            detail: format!(
                "length {} does not match C({n},{r}) = {}",
                bases.len(),
                ix.vertex_count()
            ),
        });
    }
    Ok(exchange_violation(&ix, bases))
}

pub(crate) fn exchange_violation(ix: &SubsetIndexer, bases: &BitVec) -> Option<BasisViolation> {
    if !bases.any() {
        return Some(BasisViolation::Empty);
    }
    let masks: Vec<u64> = bases.iter_ones().map(|i| ix.vertex_mask(i)).collect();
    for &b in &masks {
        for &other in &masks {
            if b == other {
                continue;
            }
            let removable = b & !other;
            let insertable = other & !b;
            let mut out_bits = removable;
            while out_bits != 0 {
                let e = out_bits.trailing_zeros() as usize;
                out_bits &= out_bits - 1;
                let stripped = b & !(1u64 << e);
                let mut in_bits = insertable;
                let mut exchanged = false;
                while in_bits != 0 {
                    let f = in_bits.trailing_zeros() as usize;
                    in_bits &= in_bits - 1;
                    if bases.get(ix.rank_unchecked(stripped | 1u64 << f)) {
                        exchanged = true;
                        break;
                    }
                }
                if !exchanged {
                    return Some(BasisViolation::Exchange {
                        basis: RSubset(b).elements(),
                        other: RSubset(other).elements(),
                        element: e,
                    });
                }
            }
        }
    }
    None
}

/// Independent second validator: derives `rank_of` from the family over every
/// subset of the ground set and checks the rank axioms (monotonicity, unit
/// increase, submodularity).  Accepts exactly the families accepted by
/// [`validate_basis_family`].
pub fn validate_rank_axioms(
    n: usize,
    r: usize,
    bases: &BitVec,
) -> Result<Option<RankAxiomViolation>> {
    if n > 12 {
        return Err(Error::BudgetExceeded {
            what: "ground set size for the rank-axiom validator",
            value: n as u64,
            limit: 12,
        });
    }
    let ix = SubsetIndexer::new(n, r)?;
    if bases.len() != ix.vertex_count() {
        return Err(Error::InvalidFormat {
            what: "basis indicator",
            detail: format!(
                "length {} does not match C({n},{r}) = {}",
                bases.len(),
                ix.vertex_count()
            ),
        });
    }
    if !bases.any() {
        return Ok(Some(RankAxiomViolation::Empty));
    }
    let masks: Vec<u64> = bases.iter_ones().map(|i| ix.vertex_mask(i)).collect();
    let space = 1usize << n;
    let mut rk = vec![0u8; space];
    for (set, slot) in rk.iter_mut().enumerate() {
        *slot = masks
            .iter()
            .map(|&b| (b & set as u64).count_ones() as u8)
            .max()
            .unwrap();
    }
    for set in 0..space {
        for e in 0..n {
            let bit = 1usize << e;
            if set & bit != 0 {
                continue;
            }
            let step = rk[set | bit] as i32 - rk[set] as i32;
            if step < 0 {
                return Ok(Some(RankAxiomViolation::Monotonicity {
                    set: RSubset(set as u64).elements(),
                    element: e,
                }));
            }
            if step > 1 {
                return Ok(Some(RankAxiomViolation::UnitIncrease {
                    set: RSubset(set as u64).elements(),
                    element: e,
                }));
            }
        }
    }
    for a in 0..space {
        for b in 0..space {
            if rk[a | b] as u32 + rk[a & b] as u32 > rk[a] as u32 + rk[b] as u32 {
                return Ok(Some(RankAxiomViolation::Submodularity {
                    first: RSubset(a as u64).elements(),
                    second: RSubset(b as u64).elements(),
                }));
            }
        }
    }
    Ok(None)
}

/// Wire format: `{"n":..,"r":..,"bases":[[..],..]}` with each basis sorted
/// ascending and bases ordered colexicographically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatroidJson {
    pub n: usize,
    pub r: usize,
    pub bases: Vec<Vec<usize>>,
}

impl Matroid {
    pub fn to_json(&self) -> MatroidJson {
        MatroidJson {
            n: self.ground_size(),
            r: self.rank(),
            bases: self.basis_lists(),
        }
    }

    pub fn from_json(json: &MatroidJson) -> Result<Matroid> {
        Matroid::from_basis_lists(json.n, json.r, &json.bases)
    }

    /// Canonical single-line JSON; byte-identical for equal matroids.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(text: &str) -> Result<Matroid> {
        let json: MatroidJson = serde_json::from_str(text).map_err(|e| Error::InvalidFormat {
            what: "matroid JSON",
            detail: e.to_string(),
        })?;
        Matroid::from_json(&json)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn uniform(n: usize, r: usize) -> Matroid {
        let ix = SubsetIndexer::new(n, r).unwrap();
        let bases = BitVec::ones(ix.vertex_count());
        Matroid::new(n, r, bases).unwrap()
    }

    /// Rank 2 on four elements, all pairs are bases except {0,1}.
    pub(crate) fn one_nonbasis() -> Matroid {
        let stable = StableSet::from_indices(vec![0]);
        Matroid::from_stable_set(4, 2, &stable).unwrap()
    }

    fn mask(elems: &[usize]) -> ElementMask {
        RSubset::from_elements(elems).0
    }

    #[test]
    fn validate_uniform_ok() {
        let m = uniform(4, 2);
        assert_eq!(m.basis_count(), 6);
        assert_eq!(
            validate_basis_family(4, 2, m.basis_indicator()).unwrap(),
            None
        );
    }

    #[test]
    fn validate_reports_exchange_failure() {
        // {{0,1},{2,3}} as a basis family: removing 0 from {0,1} admits no
        // replacement from {2,3}.
        let ix = SubsetIndexer::new(4, 2).unwrap();
        let mut bases = BitVec::zeros(ix.vertex_count());
        bases.set(0, true); // {0,1}
        bases.set(5, true); // {2,3}
        let violation = validate_basis_family(4, 2, &bases).unwrap().unwrap();
        match violation {
            BasisViolation::Exchange { basis, element, .. } => {
                assert_eq!(basis, vec![0, 1]);
                assert_eq!(element, 0);
            }
            other => panic!("unexpected violation {other:?}"),
        }
    }

    #[test]
    fn validate_reports_empty() {
        let bases = BitVec::zeros(6);
        assert_eq!(
            validate_basis_family(4, 2, &bases).unwrap(),
            Some(BasisViolation::Empty)
        );
    }

    #[test]
    fn rank_examples() {
        let u = uniform(4, 2);
        assert_eq!(u.rank_of(mask(&[0, 1, 2])), 2);
        assert_eq!(u.rank_of(0), 0);
        let w = one_nonbasis();
        assert_eq!(w.rank_of(mask(&[0, 1])), 1);
    }

    #[test]
    fn closure_examples() {
        let w = one_nonbasis();
        assert_eq!(w.closure(mask(&[0])), mask(&[0, 1]));
        let u = uniform(4, 2);
        assert_eq!(u.closure(mask(&[0])), mask(&[0]));
    }

    #[test]
    fn closure_is_idempotent() {
        for m in [uniform(4, 2), one_nonbasis(), uniform(5, 3)] {
            let full = m.indexer().full_mask();
            for set in 0..=full {
                let c = m.closure(set);
                assert_eq!(m.closure(c), c);
                assert_eq!(set & c, set);
            }
        }
    }

    #[test]
    fn circuit_cocircuit_examples() {
        let w = one_nonbasis();
        let cc = w
            .circuit_cocircuit(RSubset::from_elements(&[0, 1]))
            .unwrap();
        assert_eq!(cc.circuit, mask(&[0, 1]));
        assert_eq!(cc.cocircuit, mask(&[2, 3]));

        // Two parallel pairs: bases are the mixed pairs {i, j}, i in {0,1},
        // j in {2,3}.
        let m = Matroid::from_basis_lists(4, 2, &[vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]])
            .unwrap();
        let cc = m
            .circuit_cocircuit(RSubset::from_elements(&[0, 1]))
            .unwrap();
        assert_eq!(cc.circuit, mask(&[0, 1]));
        assert_eq!(cc.cocircuit, mask(&[2, 3]));
    }

    #[test]
    fn circuit_cocircuit_rejects_bases() {
        let w = one_nonbasis();
        assert!(matches!(
            w.circuit_cocircuit(RSubset::from_elements(&[0, 2])),
            Err(Error::RankPrecondition { .. })
        ));
    }

    #[test]
    fn covers_examples() {
        let pair = FlatRankPair {
            flat: mask(&[0, 1]),
            rank: 1,
        };
        assert!(pair.covers(mask(&[0, 1])));
        assert!(!pair.covers(mask(&[0, 2])));
        let triple = FlatRankPair {
            flat: mask(&[0, 1, 2]),
            rank: 2,
        };
        assert!(triple.covers(mask(&[0, 1, 2])));
        assert!(!triple.covers(mask(&[0, 1])));
    }

    #[test]
    fn local_cover_examples() {
        let w = one_nonbasis();
        let cover = w.local_cover(RSubset::from_elements(&[0, 1])).unwrap();
        assert_eq!(
            cover,
            vec![FlatRankPair {
                flat: mask(&[0, 1]),
                rank: 1
            }]
        );

        // Rank 3 on five elements, elements 0 and 1 parallel.
        let bases: Vec<Vec<usize>> = {
            let ix = SubsetIndexer::new(5, 3).unwrap();
            (0..ix.vertex_count())
                .map(|i| ix.unrank(i).unwrap())
                .filter(|x| !(x.contains(0) && x.contains(1)))
                .map(|x| x.elements())
                .collect()
        };
        let m = Matroid::from_basis_lists(5, 3, &bases).unwrap();
        let cover = m.local_cover(RSubset::from_elements(&[0, 1, 2])).unwrap();
        assert_eq!(
            cover,
            vec![
                FlatRankPair {
                    flat: mask(&[0, 1]),
                    rank: 1
                },
                FlatRankPair {
                    flat: mask(&[0, 1, 2]),
                    rank: 2
                },
            ]
        );
    }

    #[test]
    fn local_cover_rejects_independent_sets() {
        let u = uniform(4, 2);
        assert!(matches!(
            u.local_cover(RSubset::from_elements(&[0, 1])),
            Err(Error::RankPrecondition { .. })
        ));
    }

    #[test]
    fn loops_coloops_examples() {
        assert_eq!(uniform(4, 2).loops_coloops(), (0, 0));
        let m = Matroid::from_basis_lists(3, 2, &[vec![0, 1]]).unwrap();
        assert_eq!(m.loops_coloops(), (mask(&[2]), mask(&[0, 1])));
        assert_eq!(one_nonbasis().loops_coloops(), (0, 0));
    }

    #[test]
    fn dual_examples() {
        let u = uniform(4, 2);
        assert_eq!(u.dual(), u);
        let w = one_nonbasis();
        let dual = w.dual();
        assert_eq!(dual.rank(), 2);
        // Complement of {0,1} is {2,3}: the dual drops exactly that basis.
        assert_eq!(dual.non_basis_indices(), vec![5]);
        assert_eq!(dual.dual(), w);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            uniform(4, 2).classify_paving(),
            PavingClass {
                paving: true,
                sparse_paving: true
            }
        );
        assert_eq!(
            one_nonbasis().classify_paving(),
            PavingClass {
                paving: true,
                sparse_paving: true
            }
        );
        // Elements 0 and 1 parallel at rank 3: circuit {0,1} is shorter
        // than the rank, so the matroid is not paving.
        let m = Matroid::from_basis_lists(4, 3, &[vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        assert!(!m.classify_paving().paving);
    }

    #[test]
    fn from_stable_set_examples() {
        let empty = StableSet::default();
        assert_eq!(
            Matroid::from_stable_set(4, 2, &empty).unwrap(),
            uniform(4, 2)
        );

        let w = Matroid::from_stable_set(4, 2, &StableSet::from_indices(vec![0])).unwrap();
        assert_eq!(w, one_nonbasis());
        assert!(w.classify_paving().sparse_paving);

        let two = StableSet::from_indices(vec![0, 5]); // {0,1} and {2,3}
        let m = Matroid::from_stable_set(4, 2, &two).unwrap();
        assert!(m.classify_paving().sparse_paving);
        assert_eq!(
            validate_basis_family(4, 2, m.basis_indicator()).unwrap(),
            None
        );
    }

    #[test]
    fn from_stable_set_rejects_unstable() {
        let not_stable = StableSet::from_indices(vec![0, 1]);
        assert!(matches!(
            Matroid::from_stable_set(4, 2, &not_stable),
            Err(Error::NotStable { .. })
        ));
    }

    #[test]
    fn dual_is_involution_exhaustive() {
        let limits = crate::Limits::default();
        for n in 1..=5usize {
            for r in 0..=n {
                for m in crate::enumerate::enumerate_matroids(n, r, &limits).unwrap() {
                    let dual = m.dual();
                    assert_eq!(dual.rank(), n - r);
                    assert_eq!(dual.dual(), m, "dual not an involution at n={n} r={r}");
                    assert_eq!(
                        m.classify_paving().sparse_paving,
                        dual.classify_paving().sparse_paving,
                        "sparse paving not self-dual at n={n} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn rank_axiom_validator_examples() {
        let u = uniform(4, 2);
        assert_eq!(
            validate_rank_axioms(4, 2, u.basis_indicator()).unwrap(),
            None
        );
        let ix = SubsetIndexer::new(4, 2).unwrap();
        let mut bad = BitVec::zeros(ix.vertex_count());
        bad.set(0, true);
        bad.set(5, true);
        assert!(matches!(
            validate_rank_axioms(4, 2, &bad).unwrap(),
            Some(RankAxiomViolation::Submodularity { .. })
        ));
    }

    #[test]
    fn validators_agree_small() {
        // Exhaustive for n <= 4 here; the acceptance suite covers n = 5.
        for n in 1..=4usize {
            for r in 0..=n {
                let count = crate::johnson::binomial(n, r);
                for word in 0..(1u64 << count) {
                    let bases = bitvec_from_word(word, count as usize);
                    let exchange_ok = validate_basis_family(n, r, &bases).unwrap().is_none();
                    let rank_ok = validate_rank_axioms(n, r, &bases).unwrap().is_none();
                    assert_eq!(
                        exchange_ok, rank_ok,
                        "validators disagree on n={n} r={r} word={word:b}"
                    );
                }
            }
        }
    }

    pub(crate) fn bitvec_from_word(word: u64, len: usize) -> BitVec {
        let mut v = BitVec::zeros(len);
        for i in 0..len {
            if word >> i & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    #[test]
    fn json_roundtrip_is_canonical() {
        let w = one_nonbasis();
        let text = w.to_json_string();
        assert_eq!(
            text,
            r#"{"n":4,"r":2,"bases":[[0,2],[1,2],[0,3],[1,3],[2,3]]}"#
        );
        let back = Matroid::from_json_str(&text).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn json_rejects_non_matroids() {
        let text = r#"{"n":4,"r":2,"bases":[[0,1],[2,3]]}"#;
        assert!(matches!(
            Matroid::from_json_str(text),
            Err(Error::NotAMatroid(_))
        ));
    }
}
