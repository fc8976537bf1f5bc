//! Compressed descriptions of matroids over Johnson graphs.
//!
//! A matroid of rank `r` on `n` elements is stored as a basis indicator over
//! all `r`-subsets, i.e. as a subset of the vertices of the Johnson graph
//! `J(n, r)`.  The [`codec`] module turns such a matroid into a pair
//! `(stable set, flat-rank cover)` and faithfully reconstructs it from that
//! pair alone.  Around the codec sit:
//!
//! - [`johnson`]: colexicographic subset ranking, Johnson graph structure,
//!   spectrum checks, exact stable-set counting, and the sum-residue stable
//!   partition;
//! - [`matroid`]: basis-family validation, rank/closure/circuit queries,
//!   duality, paving classification, and local covers;
//! - [`enumerate`]: brute-force enumeration of all matroids and all sparse
//!   paving matroids on small ground sets, with exact count tables;
//! - [`bounds`]: exact finite-size evaluation of the stable-set and matroid
//!   counting bounds, in outward-rounded log2 arithmetic.
//!
//! All counting is exact (big integers); all comparisons between large counts
//! happen in log2 space with explicit rounding directions.

pub mod bits;
pub mod bounds;
pub mod codec;
pub mod enumerate;
mod error;
pub mod johnson;
pub mod matroid;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Instance-size limits for the exhaustive operations.
///
/// The defaults keep every exhaustive computation in the range of seconds on
/// one core; callers may raise them explicitly.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Largest ground-set size accepted by stable-set counting and search.
    pub stable_ground: usize,
    /// Largest candidate-space width `C(n, r)`, in bits, accepted by
    /// exhaustive matroid enumeration.
    pub enum_bits: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            stable_ground: 7,
            enum_bits: 20,
        }
    }
}
