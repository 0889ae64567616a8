//! Simplicial homology, fundamental-group presentations, the
//! Q-superperfect certificate and dual complexes.

mod dual;
mod group;
mod homology;
pub mod snf;

use serde::Serialize;

use crate::complex::SimplicialComplex;

pub use dual::{dual_complex, dual_move, DualComplexMove, DualMoveKind};
pub use group::{free_reduce, fundamental_group, AbelianGroup, GroupPresentation, PresentationStats, Word};
pub use homology::{homology, ChainComplex, HomologyProfile, Ring};
pub use snf::{invariant_factors, smith_normal_form, IntMatrix, SmithForm};

/// Outcome of [`q_superperfect_certificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuperperfectReport {
    pub connected: bool,
    /// Reduced rational Betti numbers in degrees 0, 1, 2.
    pub reduced_betti_q: [usize; 3],
    /// Degrees `<= 2` with non-vanishing reduced rational homology.
    pub obstructions: Vec<usize>,
    /// Free rank of the abelianized edge-path presentation of `π1`.
    pub pi1_abelianization_rank: Option<usize>,
    pub certified: bool,
}

/// Certifies that `π1(K)` is Q-superperfect when `K` is Q-acyclic through
/// degree 2: `H1(π1) = H1(K)` and Hopf's surjection `H2(K) -> H2(π1)` then
/// kill both groups. Obstructing degrees are listed otherwise.
pub fn q_superperfect_certificate(k: &SimplicialComplex) -> SuperperfectReport {
    let connected = k.vertex_count() > 0 && k.is_connected();
    let h = homology(k, Ring::Q);
    let reduced: [usize; 3] = std::array::from_fn(|d| h.reduced_betti.get(d).copied().unwrap_or(0));
    let obstructions: Vec<usize> = (0..3).filter(|&d| reduced[d] != 0).collect();
    let pi1_abelianization_rank = connected
        .then(|| fundamental_group(k).ok())
        .flatten()
        .map(|p| p.abelianization().free_rank);
    SuperperfectReport {
        connected,
        reduced_betti_q: reduced,
        certified: connected && obstructions.is_empty(),
        obstructions,
        pi1_abelianization_rank,
    }
}
