use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use super::snf::{invariant_factors, IntMatrix};
use crate::complex::SimplicialComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    Z,
    Q,
}

/// Simplicial chain complex with boundary matrices `∂_k : C_k -> C_{k-1}`
/// in the lexicographic simplex bases.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    /// `ranks[k]` is the number of `k`-simplices.
    pub ranks: Vec<usize>,
    /// `boundaries[k]` for `k >= 1`; `boundaries[0]` is the empty map.
    pub boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn of(k: &SimplicialComplex) -> Self {
        let top = k.dimension();
        if top < 0 {
            return ChainComplex {
                ranks: Vec::new(),
                boundaries: Vec::new(),
            };
        }
        let top = top as usize;
        let bases: Vec<Vec<&Vec<usize>>> = (0..=top).map(|d| k.simplices_of_dim(d)).collect();
        let index: Vec<BTreeMap<&Vec<usize>, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, s)| (*s, i)).collect())
            .collect();
        let mut boundaries = vec![IntMatrix::zeros(0, bases[0].len())];
        for d in 1..=top {
            let mut m = IntMatrix::zeros(bases[d - 1].len(), bases[d].len());
            for (j, s) in bases[d].iter().enumerate() {
                for skip in 0..s.len() {
                    let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                    let i = index[d - 1][&face];
                    let sign = if skip % 2 == 0 { 1 } else { -1 };
                    m.set(i, j, BigInt::from(sign));
                }
            }
            boundaries.push(m);
        }
        ChainComplex {
            ranks: bases.iter().map(|b| b.len()).collect(),
            boundaries,
        }
    }

    /// `∂_{k-1} ∘ ∂_k = 0` for every `k`.
    pub fn is_chain_complex(&self) -> bool {
        (2..self.boundaries.len()).all(|k| self.boundaries[k - 1].mul(&self.boundaries[k]).is_zero())
    }
}

fn bigints<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let text: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    text.serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub ring: Ring,
    pub betti: Vec<usize>,
    pub reduced_betti: Vec<usize>,
    /// Invariant factors greater than one, per degree (empty over Q).
    #[serde(serialize_with = "bigints")]
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologyProfile {
    /// Betti numbers with trailing zeros removed, for comparing complexes of
    /// different dimension.
    pub fn trimmed_betti(&self) -> Vec<usize> {
        let mut b = self.betti.clone();
        while b.last() == Some(&0) {
            b.pop();
        }
        b
    }

    /// Reduced homology vanishes in degrees `0..=max_degree`.
    pub fn is_acyclic_through(&self, max_degree: usize) -> bool {
        (0..=max_degree).all(|d| {
            self.reduced_betti.get(d).copied().unwrap_or(0) == 0
                && self.torsion.get(d).is_none_or(|t| t.is_empty())
        })
    }
}

/// Homology of `k` over Z (Smith normal form) or Q (exact rank).
pub fn homology(k: &SimplicialComplex, ring: Ring) -> HomologyProfile {
    let chains = ChainComplex::of(k);
    let top = chains.ranks.len();
    let mut ranks = vec![0usize; top + 1];
    let mut factors: Vec<Vec<BigInt>> = vec![Vec::new(); top + 1];
    for d in 1..top {
        let m = &chains.boundaries[d];
        match ring {
            Ring::Z => {
                let f = invariant_factors(m);
                ranks[d] = f.len();
                factors[d] = f;
            }
            Ring::Q => ranks[d] = m.rank(),
        }
    }
    let betti: Vec<usize> = (0..top).map(|d| chains.ranks[d] - ranks[d] - ranks[d + 1]).collect();
    let mut reduced_betti = betti.clone();
    if let Some(b0) = reduced_betti.first_mut() {
        *b0 -= 1;
    }
    let torsion = (0..top)
        .map(|d| match ring {
            Ring::Z => factors[d + 1].iter().filter(|x| !x.is_one()).cloned().collect(),
            Ring::Q => Vec::new(),
        })
        .collect();
    HomologyProfile {
        ring,
        betti,
        reduced_betti,
        torsion,
    }
}
