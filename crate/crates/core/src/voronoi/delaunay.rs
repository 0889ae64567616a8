use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{is_simple_configuration, voronoi_complex, SiteSet};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::polyhedra::feasibility::{find_point, Constraint, Relation};
use crate::polyhedra::linalg::{determinant, rank, rref};
use crate::polyhedra::rational::{serde_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelaunayCertificate {
    /// Dimension of the affine hull of the sites.
    pub hull_dim: usize,
    pub affinely_independent: bool,
    pub pairwise_disjoint: bool,
    /// Sum of top-simplex volumes and hull volume, measured in the same
    /// coordinate projection. Absent when the hull dimension exceeds 3.
    #[serde(with = "opt_rational")]
    pub simplex_volume_sum: Option<Rational>,
    #[serde(with = "opt_rational")]
    pub hull_volume: Option<Rational>,
    pub all_volumes_positive: bool,
}

impl DelaunayCertificate {
    pub fn passed(&self) -> bool {
        self.affinely_independent
            && self.pairwise_disjoint
            && self.all_volumes_positive
            && self.simplex_volume_sum == self.hull_volume
    }
}

mod opt_rational {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(r) => serde_rational::serialize(r, s),
            None => s.serialize_none(),
        }
    }
}

/// Nerve of the Voronoi complex on site labels together with its affine
/// realization (vertex `i` goes to site `i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelaunayRealization {
    pub complex: SimplicialComplex,
    pub eta: Vec<Vec<Rational>>,
    pub certificate: DelaunayCertificate,
}

pub fn delaunay(y: &SiteSet) -> Result<DelaunayRealization> {
    let report = is_simple_configuration(y);
    if !report.simple {
        return Err(Error::NonSimpleConfiguration {
            witness: report.witness.unwrap_or_default(),
        });
    }
    let v = voronoi_complex(y)?;
    let nerve = v.complex.nerve()?;
    // nerve vertices are facets in id order; facet ids are site indices
    let facets: Vec<_> = v.complex.facets().into_iter().collect();
    if facets != v.cell_of {
        return Err(Error::Inconsistent("Voronoi facets do not match sites".into()));
    }
    let complex = nerve.with_labels((0..y.len()).map(|i| i.to_string()).collect())?;
    let certificate = certify(y, &complex);
    Ok(DelaunayRealization {
        complex,
        eta: y.sites().to_vec(),
        certificate,
    })
}

/// Coordinates on which the projection is injective on the affine hull of
/// the sites, plus the hull dimension.
fn chart(y: &SiteSet) -> Vec<usize> {
    let base = &y.sites()[0];
    let mut diffs: Vec<Vec<Rational>> = y.sites()[1..]
        .iter()
        .map(|s| s.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rref(&mut diffs, y.ambient_dim())
}

fn project(p: &[Rational], coords: &[usize]) -> Vec<Rational> {
    coords.iter().map(|&c| p[c].clone()).collect()
}

/// `|det(v_1 - v_0, ..., v_d - v_0)| / d!` for `d + 1` points of Q^d.
fn simplex_volume(points: &[Vec<Rational>]) -> Rational {
    let base = &points[0];
    let m: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let d = m.len();
    let fact: Rational = (1..=d).map(|i| Rational::from_integer(i.into())).product();
    determinant(&m).abs() / fact
}

/// Volume of the convex hull of points in general position in Q^d, from its
/// facets coned to the centroid. A `d`-subset spans a facet when all other
/// points lie strictly on one side of its hyperplane.
pub(crate) fn hull_volume(points: &[Vec<Rational>]) -> Rational {
    let d = points[0].len();
    if d == 0 {
        return Rational::one();
    }
    let k = Rational::from_integer(points.len().into());
    let centroid: Vec<Rational> = (0..d)
        .map(|i| points.iter().map(|p| p[i].clone()).sum::<Rational>() / &k)
        .collect();
    let mut total = Rational::zero();
    for facet in (0..points.len()).combinations(d) {
        // hyperplane normal: cofactor expansion of det(x - p_0, p_1 - p_0, ...)
        let p0 = &points[facet[0]];
        let rows: Vec<Vec<Rational>> = facet[1..]
            .iter()
            .map(|&j| points[j].iter().zip(p0).map(|(a, b)| a - b).collect())
            .collect();
        if rank(&rows, d) != d - 1 {
            continue;
        }
        let side = |x: &[Rational]| {
            let mut m = vec![x.iter().zip(p0).map(|(a, b)| a - b).collect::<Vec<_>>()];
            m.extend(rows.iter().cloned());
            determinant(&m)
        };
        let signs: Vec<Rational> = (0..points.len())
            .filter(|j| !facet.contains(j))
            .map(|j| side(&points[j]))
            .collect();
        let all_pos = signs.iter().all(|s| s.is_positive());
        let all_neg = signs.iter().all(|s| s.is_negative());
        if !(all_pos || all_neg) {
            continue;
        }
        let mut cone: Vec<Vec<Rational>> = vec![centroid.clone()];
        cone.extend(facet.iter().map(|&j| points[j].clone()));
        total += simplex_volume(&cone);
    }
    total
}

/// Open simplices `conv(a)` and `conv(b)` share a point: positive barycentric
/// weights on both sides giving the same point.
fn open_simplices_meet(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    let n = a[0].len();
    let (p, q) = (a.len(), b.len());
    let vars = p + q;
    let mut cs = Vec::new();
    for i in 0..vars {
        let mut c = vec![Rational::zero(); vars];
        c[i] = -Rational::one();
        cs.push(Constraint::new(c, Rational::zero(), Relation::Lt));
    }
    let mut sum_a = vec![Rational::zero(); vars];
    let mut sum_b = vec![Rational::zero(); vars];
    for i in 0..p {
        sum_a[i] = Rational::one();
    }
    for j in 0..q {
        sum_b[p + j] = Rational::one();
    }
    cs.push(Constraint::new(sum_a, Rational::one(), Relation::Eq));
    cs.push(Constraint::new(sum_b, Rational::one(), Relation::Eq));
    for coord in 0..n {
        let mut c: Vec<Rational> = a.iter().map(|v| v[coord].clone()).collect();
        c.extend(b.iter().map(|w| -w[coord].clone()));
        cs.push(Constraint::new(c, Rational::zero(), Relation::Eq));
    }
    find_point(vars, &cs).is_some()
}

fn bounding_boxes_meet(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    (0..a[0].len()).all(|c| {
        let lo_a = a.iter().map(|v| &v[c]).min().expect("non-empty");
        let hi_a = a.iter().map(|v| &v[c]).max().expect("non-empty");
        let lo_b = b.iter().map(|v| &v[c]).min().expect("non-empty");
        let hi_b = b.iter().map(|v| &v[c]).max().expect("non-empty");
        lo_a <= hi_b && lo_b <= hi_a
    })
}

fn certify(y: &SiteSet, k: &SimplicialComplex) -> DelaunayCertificate {
    let sites = y.sites();
    let images = |s: &[usize]| s.iter().map(|&i| sites[i].clone()).collect::<Vec<_>>();
    let affinely_independent = k.simplices().all(|s| {
        let pts = images(s);
        let diffs: Vec<Vec<Rational>> = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
            .collect();
        rank(&diffs, y.ambient_dim()) == s.len() - 1
    });
    let all: Vec<&Vec<usize>> = k.simplices().collect();
    let pairwise_disjoint = all.iter().tuple_combinations().all(|(s, t)| {
        let (a, b) = (images(s), images(t));
        !bounding_boxes_meet(&a, &b) || !open_simplices_meet(&a, &b)
    });
    let coords = chart(y);
    let hull_dim = coords.len();
    let (mut simplex_volume_sum, mut hull, mut all_volumes_positive) = (None, None, true);
    if hull_dim <= 3 {
        let projected: Vec<Vec<Rational>> = sites.iter().map(|p| project(p, &coords)).collect();
        let mut sum = Rational::zero();
        for s in k.simplices_of_dim(hull_dim) {
            let vol = simplex_volume(&s.iter().map(|&i| projected[i].clone()).collect::<Vec<_>>());
            all_volumes_positive &= vol.is_positive();
            sum += vol;
        }
        simplex_volume_sum = Some(sum);
        hull = Some(hull_volume(&projected));
    }
    DelaunayCertificate {
        hull_dim,
        affinely_independent,
        pairwise_disjoint,
        simplex_volume_sum,
        hull_volume: hull,
        all_volumes_positive,
    }
}
