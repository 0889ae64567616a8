//! Exact check that five affine spaces glued along a line, two planes and
//! two solids cannot map compatibly into a variety without collapsing the
//! line.
//!
//! A regular function on the target pulls back to polynomials
//! `e(x)` on the line, `a(x, y)` and `b(x, z)` on the planes, and `f`, `g` on
//! the solids. The gluing maps force
//!
//! ```text
//! e(x) = a(x, 0)        a(x, y) = f(x, y, 0)     a(x, y) = g(x, y, 0)
//! e(x) = b(x, 0)        b(x, z) = f(x, z, z²)    b(x, z) = g(x + z, z, z²)
//! ```
//!
//! With `f`, `g` of degree at most `D` (so `a`, `b`, `e` of degree at most
//! `2D`) these are linear equations on the coefficients. The line is
//! collapsed exactly when every solution has constant `e`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyhedra::Rational;

type Functional = BTreeMap<usize, Rational>;

/// Row echelon form over sparse rows; each stored row is keyed by, and
/// normalized at, its smallest column.
#[derive(Default)]
struct Echelon {
    rows: BTreeMap<usize, Functional>,
}

impl Echelon {
    fn reduce(&self, mut v: Functional) -> Functional {
        let mut from = 0;
        loop {
            let Some((&col, coeff)) = v.range(from..).find(|(c, _)| self.rows.contains_key(c)) else {
                return v;
            };
            let coeff = coeff.clone();
            for (&k, x) in &self.rows[&col] {
                let entry = v.entry(k).or_insert_with(Rational::zero);
                *entry -= &coeff * x;
                if entry.is_zero() {
                    v.remove(&k);
                }
            }
            from = col + 1;
        }
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    fn insert(&mut self, v: Functional) -> bool {
        let v = self.reduce(v);
        let Some((&col, lead)) = v.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        let row = v.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        self.rows.insert(col, row);
        true
    }

    fn contains(&self, v: Functional) -> bool {
        self.reduce(v).is_empty()
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Column layout of the unknown coefficients.
struct Unknowns {
    degree: usize,
    line: usize,
    plane_y: HashMap<(usize, usize), usize>,
    plane_z: HashMap<(usize, usize), usize>,
    solid_u: HashMap<(usize, usize, usize), usize>,
    solid_v: HashMap<(usize, usize, usize), usize>,
    count: usize,
}

impl Unknowns {
    fn new(degree: usize) -> Self {
        let top = 2 * degree;
        let mut count = top + 1;
        let mut plane = || {
            let mut m = HashMap::new();
            for i in 0..=top {
                for j in 0..=top - i {
                    m.insert((i, j), count);
                    count += 1;
                }
            }
            m
        };
        let plane_y = plane();
        let plane_z = plane();
        let mut solid = || {
            let mut m = HashMap::new();
            for i in 0..=degree {
                for j in 0..=degree - i {
                    for k in 0..=degree - i - j {
                        m.insert((i, j, k), count);
                        count += 1;
                    }
                }
            }
            m
        };
        let solid_u = solid();
        let solid_v = solid();
        Unknowns {
            degree,
            line: 0,
            plane_y,
            plane_z,
            solid_u,
            solid_v,
            count,
        }
    }
}

/// Coefficient-wise equations of one polynomial identity, keyed by monomial.
#[derive(Default)]
struct Identity {
    by_monomial: BTreeMap<(usize, usize), Functional>,
}

impl Identity {
    fn add(&mut self, monomial: (usize, usize), column: usize, coeff: Rational) {
        let row = self.by_monomial.entry(monomial).or_default();
        let entry = row.entry(column).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            row.remove(&column);
        }
    }

    fn rows(self) -> impl Iterator<Item = Functional> {
        self.by_monomial.into_values().filter(|r| !r.is_empty())
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn plane_identities(u: &Unknowns, plane: &HashMap<(usize, usize), usize>) -> Vec<Functional> {
    let mut id = Identity::default();
    for i in 0..=2 * u.degree {
        id.add((i, 0), u.line + i, Rational::one());
        id.add((i, 0), plane[&(i, 0)], -Rational::one());
    }
    id.rows().collect()
}

/// `plane(x, y) = solid(x, y, 0)`.
fn flat_identities(plane: &HashMap<(usize, usize), usize>, solid: &HashMap<(usize, usize, usize), usize>) -> Vec<Functional> {
    let mut id = Identity::default();
    for (&m, &col) in plane {
        id.add(m, col, Rational::one());
    }
    for (&(i, j, k), &col) in solid {
        if k == 0 {
            id.add((i, j), col, -Rational::one());
        }
    }
    id.rows().collect()
}

/// `plane(x, z) = solid(x + s z, z, z²)` with shear `s` in {0, 1}.
fn curved_identities(
    plane: &HashMap<(usize, usize), usize>,
    solid: &HashMap<(usize, usize, usize), usize>,
    shear: bool,
) -> Vec<Functional> {
    let mut id = Identity::default();
    for (&m, &col) in plane {
        id.add(m, col, Rational::one());
    }
    for (&(i, j, k), &col) in solid {
        // (x + z)^i z^j z^{2k}
        let shifts = if shear { i } else { 0 };
        for l in 0..=shifts {
            let c = Rational::from_integer(binomial(i, l));
            id.add((i - l, l + j + 2 * k), col, -c);
        }
    }
    id.rows().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFamily {
    /// Which solid's two gluing equations imply it: `"u"` or `"v"`.
    pub source: String,
    pub identity: String,
    pub instances: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoLimitReport {
    pub max_degree: usize,
    pub sheared: bool,
    pub unknowns: usize,
    pub equations: usize,
    pub solution_dim: usize,
    /// Dimension of the space of restrictions `e` of solutions to the line.
    pub restriction_image_dim: usize,
    pub identities: Vec<IdentityFamily>,
}

impl NoLimitReport {
    /// Every solution is constant along the line.
    pub fn collapses_line(&self) -> bool {
        self.restriction_image_dim == 1
    }
}

/// Solves the gluing equations up to `max_degree` and measures the
/// restriction to the line.
pub fn no_limit_witness(max_degree: usize) -> Result<NoLimitReport> {
    no_limit_system(max_degree, true)
}

/// The same system with the second solid glued by `(x, z) ↦ (x, z, z²)`,
/// i.e. without the shear.
pub fn no_limit_control(max_degree: usize) -> Result<NoLimitReport> {
    no_limit_system(max_degree, false)
}

fn no_limit_system(max_degree: usize, shear: bool) -> Result<NoLimitReport> {
    if max_degree == 0 {
        return Err(Error::InvalidDegree);
    }
    let u = Unknowns::new(max_degree);
    let top = 2 * max_degree;
    let via_u: Vec<Functional> = flat_identities(&u.plane_y, &u.solid_u)
        .into_iter()
        .chain(curved_identities(&u.plane_z, &u.solid_u, false))
        .collect();
    let via_v: Vec<Functional> = flat_identities(&u.plane_y, &u.solid_v)
        .into_iter()
        .chain(curved_identities(&u.plane_z, &u.solid_v, shear))
        .collect();
    let on_line: Vec<Functional> = plane_identities(&u, &u.plane_y)
        .into_iter()
        .chain(plane_identities(&u, &u.plane_z))
        .collect();
    let equations = via_u.len() + via_v.len() + on_line.len();

    let mut full = Echelon::default();
    for row in on_line.iter().chain(&via_u).chain(&via_v) {
        full.insert(row.clone());
    }
    let rank = full.rank();
    let mut pinned = 0;
    for i in 0..=top {
        if full.insert(Functional::from([(u.line + i, Rational::one())])) {
            pinned += 1;
        }
    }

    let a = |i: usize, j: usize| u.plane_y[&(i, j)];
    let b = |i: usize, j: usize| u.plane_z[&(i, j)];
    let difference = |terms: &[(usize, i64)]| -> Functional {
        let mut f = Functional::new();
        for &(col, c) in terms {
            *f.entry(col).or_insert_with(Rational::zero) += Rational::from_integer(c.into());
        }
        f.retain(|_, x| !x.is_zero());
        f
    };
    let family = |source: &str, identity: &str, rows: &[Functional], instances: Vec<Functional>| {
        let mut e = Echelon::default();
        for r in rows {
            e.insert(r.clone());
        }
        IdentityFamily {
            source: source.into(),
            identity: identity.into(),
            instances: instances.len(),
            holds: instances.into_iter().all(|f| e.contains(f)),
        }
    };
    let zero_terms: Vec<Functional> = (0..=top).map(|i| difference(&[(a(i, 0), 1), (b(i, 0), -1)])).collect();
    let linear_terms: Vec<Functional> = (0..top).map(|i| difference(&[(a(i, 1), 1), (b(i, 1), -1)])).collect();
    let sheared_terms: Vec<Functional> = (0..top)
        .map(|i| difference(&[(a(i, 1), 1), (b(i, 1), -1), (b(i + 1, 0), i as i64 + 1)]))
        .collect();
    let identities = vec![
        family("u", "a(i,0) = b(i,0)", &via_u, zero_terms.clone()),
        family("u", "a(i,1) = b(i,1)", &via_u, linear_terms),
        family("v", "a(i,0) = b(i,0)", &via_v, zero_terms),
        family("v", "a(i,1) = b(i,1) - (i+1) b(i+1,0)", &via_v, sheared_terms),
    ];

    Ok(NoLimitReport {
        max_degree,
        sheared: shear,
        unknowns: u.count,
        equations,
        solution_dim: u.count - rank,
        restriction_image_dim: pinned,
        identities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_collapses_in_low_degree() {
        for d in 1..=3 {
            let r = no_limit_witness(d).unwrap();
            assert_eq!(r.restriction_image_dim, 1, "degree {d}");
            assert!(r.identities.iter().all(|f| f.holds), "{:?}", r.identities);
        }
    }

    #[test]
    fn control_keeps_the_line() {
        let r = no_limit_control(2).unwrap();
        assert_eq!(r.restriction_image_dim, 3);
        assert!(!r.identities[3].holds);
    }

    #[test]
    fn zero_degree_rejected() {
        assert_eq!(no_limit_witness(0), Err(Error::InvalidDegree));
    }
}
