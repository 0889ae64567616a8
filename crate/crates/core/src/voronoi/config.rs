use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::SiteSet;
use crate::error::{Error, Result};
use crate::polyhedra::Rational;
use crate::topology::IntMatrix;

pub const DEFAULT_RETRY_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigurationReport {
    pub simple: bool,
    /// Smallest failing subset (by size, then lexicographically).
    pub witness: Option<Vec<usize>>,
}

/// Sites scaled by the common denominator of all coordinates. Affine
/// dependence and cosphericity are invariant under this scaling.
fn integer_sites(y: &SiteSet) -> Vec<Vec<BigInt>> {
    let lcm = y
        .sites
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    y.sites
        .iter()
        .map(|s| s.iter().map(|x| x.numer() * (&lcm / x.denom())).collect())
        .collect()
}

/// Fraction-free (Bareiss) determinant.
fn int_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = false;
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            m.swap(p, c);
            sign = !sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let v = &m[c][c] * &m[i][j] - &m[i][c] * &m[c][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[c][c].clone();
    }
    if sign {
        -prev
    } else {
        prev
    }
}

fn differences(z: &[Vec<BigInt>], w: &[usize]) -> Vec<Vec<BigInt>> {
    let base = &z[w[0]];
    w[1..]
        .iter()
        .map(|&j| z[j].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect()
}

fn independent(z: &[Vec<BigInt>], w: &[usize], n: usize) -> bool {
    let rows = differences(z, w);
    if rows.len() == n {
        !int_det(rows).is_zero()
    } else {
        IntMatrix::from_rows(n, rows).rank() == w.len() - 1
    }
}

/// Normalized integer key of the sphere through `N + 1` affinely independent
/// sites: `(D, D c_1, .., D c_N, D (|z_0|² - 2 c·z_0))` divided by its
/// content, with `c` the centre and `D > 0`.
fn sphere_key(z: &[Vec<BigInt>], w: &[usize]) -> Vec<BigInt> {
    let n = z[0].len();
    let base = &z[w[0]];
    let sq = |v: &[BigInt]| v.iter().map(|x| x * x).sum::<BigInt>();
    let base_sq = sq(base);
    let a: Vec<Vec<BigInt>> = w[1..]
        .iter()
        .map(|&j| z[j].iter().zip(base).map(|(x, b)| (x - b) * 2).collect())
        .collect();
    let rhs: Vec<BigInt> = w[1..].iter().map(|&j| sq(&z[j]) - &base_sq).collect();
    let mut d = int_det(a.clone());
    let mut key = Vec::with_capacity(n + 2);
    let mut cramer: Vec<BigInt> = (0..n)
        .map(|col| {
            let m = a
                .iter()
                .zip(&rhs)
                .map(|(row, r)| {
                    let mut row = row.clone();
                    row[col] = r.clone();
                    row
                })
                .collect();
            int_det(m)
        })
        .collect();
    if d.is_negative() {
        d = -d;
        cramer.iter_mut().for_each(|x| *x = -x.clone());
    }
    let offset = &base_sq * &d - cramer.iter().zip(base).map(|(c, b)| c * b).sum::<BigInt>() * 2;
    key.push(d);
    key.extend(cramer);
    key.push(offset);
    let g = key.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    key.iter().map(|x| x / &g).collect()
}

/// Checks that every subset `W` with `2 <= |W| <= N + 2` has a transversal
/// equidistance system: subsets of size at most `N + 1` must be affinely
/// independent and no `N + 2` sites may lie on a common sphere.
pub fn is_simple_configuration(y: &SiteSet) -> ConfigurationReport {
    let n = y.ambient_dim;
    let k = y.len();
    let z = integer_sites(y);
    // independence of every (N+1)-subset implies it for smaller ones
    let top_ok = k < n + 1 || (0..k).combinations(n + 1).all(|w| independent(&z, &w, n));
    if !top_ok || k < n + 1 {
        // sizes 2 are distinct sites, hence always independent
        for size in 3..=(n + 1).min(k) {
            for w in (0..k).combinations(size) {
                if !independent(&z, &w, n) {
                    return ConfigurationReport {
                        simple: false,
                        witness: Some(w),
                    };
                }
            }
        }
    }
    if k >= n + 2 {
        let mut spheres: HashMap<Vec<BigInt>, Vec<usize>> = HashMap::new();
        for w in (0..k).combinations(n + 1) {
            let entry = spheres.entry(sphere_key(&z, &w)).or_default();
            entry.extend(w);
        }
        let witness = spheres
            .into_values()
            .filter_map(|mut pts| {
                pts.sort_unstable();
                pts.dedup();
                (pts.len() >= n + 2).then(|| pts[..n + 2].to_vec())
            })
            .min();
        if witness.is_some() {
            return ConfigurationReport {
                simple: false,
                witness,
            };
        }
    }
    ConfigurationReport {
        simple: true,
        witness: None,
    }
}

/// Moves every coordinate by a seeded rational offset of absolute value at
/// most `bound` until the configuration is simple. Offsets have denominator
/// `2^e` with `e` drawn from the seed; the offset scale halves on each retry.
pub fn perturb_to_simple(y: &SiteSet, bound: &Rational, seed: u64, cap: usize) -> Result<SiteSet> {
    if bound.is_negative() {
        return Err(Error::InvalidBound);
    }
    if is_simple_configuration(y).simple {
        return Ok(y.clone());
    }
    if bound.is_zero() {
        return Err(Error::InvalidBound);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exponent: u32 = 12 + rng.gen_range(0..8);
    let denom = 1i64 << exponent;
    let mut scale = bound.clone();
    for _ in 0..cap {
        let moved: Vec<Vec<Rational>> = y
            .sites
            .iter()
            .map(|s| {
                s.iter()
                    .map(|x| {
                        let u: i64 = rng.gen_range(-denom..=denom);
                        x + &scale * Rational::new(BigInt::from(u), BigInt::from(denom))
                    })
                    .collect()
            })
            .collect();
        if let Ok(candidate) = SiteSet::new(y.ambient_dim, moved) {
            if is_simple_configuration(&candidate).simple {
                return Ok(candidate);
            }
        }
        scale /= Rational::from_integer(2.into());
    }
    Err(Error::RetryCapExceeded { cap })
}
