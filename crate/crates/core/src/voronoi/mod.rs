//! Voronoi complexes of finite rational site sets, genericity testing and
//! perturbation, Delaunay nerves and complexes clipped to polyhedral regions.

mod clip;
mod config;
mod delaunay;

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::complex::{Face, FaceId, PolyhedralComplex};
use crate::error::{Error, Result};
use crate::polyhedra::linalg::solve_affine;
use crate::polyhedra::rational::{dot, zero, Rational};
use crate::polyhedra::{LinearInequality, RationalPolyhedron};

pub use clip::{clipped_complex, dense_lattice, PolyhedralRegion};
pub use config::{is_simple_configuration, perturb_to_simple, ConfigurationReport, DEFAULT_RETRY_CAP};
pub use delaunay::{delaunay, DelaunayCertificate, DelaunayRealization};

/// Ordered set of pairwise distinct points of Q^N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteSet {
    ambient_dim: usize,
    sites: Vec<Vec<Rational>>,
}

impl SiteSet {
    pub fn new(ambient_dim: usize, sites: Vec<Vec<Rational>>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::EmptySiteSet);
        }
        for s in &sites {
            if s.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: s.len(),
                });
            }
        }
        let mut seen: BTreeMap<&Vec<Rational>, usize> = BTreeMap::new();
        for (i, s) in sites.iter().enumerate() {
            if let Some(&j) = seen.get(s) {
                return Err(Error::DuplicateSite(j, i));
            }
            seen.insert(s, i);
        }
        Ok(SiteSet { ambient_dim, sites })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn sites(&self) -> &[Vec<Rational>] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Indices of the sites at minimal squared distance from `x`.
    pub fn nearest(&self, x: &[Rational]) -> Vec<usize> {
        let dists: Vec<Rational> = self.sites.iter().map(|s| squared_distance(s, x)).collect();
        let best = dists.iter().min().expect("non-empty site set");
        (0..dists.len()).filter(|&i| dists[i] == *best).collect()
    }
}

pub(crate) fn squared_distance(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(zero(), |acc, (x, y)| {
        let d = x - y;
        acc + &d * &d
    })
}

/// Voronoi complex with the map from sites to their cells. Facet ids
/// coincide with site indices; `nearest` records, for every face, the sites
/// equidistant and nearest on its relative interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoronoiComplex {
    pub complex: PolyhedralComplex,
    pub cell_of: Vec<FaceId>,
    pub nearest: BTreeMap<FaceId, Vec<usize>>,
}

/// The bisector half-space `2(other - site) · x <= |other|² - |site|²`.
fn bisector(site: &[Rational], other: &[Rational]) -> LinearInequality {
    let two = Rational::from_integer(2.into());
    let normal = other.iter().zip(site).map(|(o, s)| (o - s) * &two).collect();
    LinearInequality::le(normal, dot(other, other) - dot(site, site))
}

/// Cell of site `i` with redundant bisectors removed. Other sites are
/// visited nearest first. Once the cell of a nearby batch is bounded with
/// vertices within distance `R` of the site, sites farther than `2R` cannot
/// cut it and are skipped.
pub fn voronoi_cell(y: &SiteSet, i: usize) -> RationalPolyhedron {
    cell_and_others(y, i).0
}

/// The cell of site `i` with the other sites sorted by squared distance.
fn cell_and_others(y: &SiteSet, i: usize) -> (RationalPolyhedron, Vec<(Rational, usize)>) {
    let n = y.ambient_dim;
    let site = &y.sites[i];
    let mut others: Vec<(Rational, usize)> = (0..y.len())
        .filter(|&j| j != i)
        .map(|j| (squared_distance(site, &y.sites[j]), j))
        .collect();
    others.sort();
    let reduce = |ineqs: Vec<LinearInequality>| {
        RationalPolyhedron::new(n, ineqs).expect("dimensions match").remove_redundant().0
    };
    let mut batch = 4 * (n + 1);
    loop {
        if batch >= others.len() {
            let cell = reduce(others.iter().map(|(_, j)| bisector(site, &y.sites[*j])).collect());
            return (cell, others);
        }
        let cell = reduce(others[..batch].iter().map(|(_, j)| bisector(site, &y.sites[*j])).collect());
        if let Some(r2) = max_vertex_distance(&cell, site) {
            let reach = r2 * Rational::from_integer(4.into());
            let mut ineqs = cell.inequalities().to_vec();
            ineqs.extend(
                others[batch..]
                    .iter()
                    .take_while(|(d, _)| *d < reach)
                    .map(|(_, j)| bisector(site, &y.sites[*j])),
            );
            return (reduce(ineqs), others);
        }
        batch *= 2;
    }
}

/// Largest squared distance from `site` to a vertex of the bounded
/// full-dimensional polytope `cell`, or `None` when `cell` is unbounded.
fn max_vertex_distance(cell: &RationalPolyhedron, site: &[Rational]) -> Option<Rational> {
    let n = cell.ambient_dim();
    if !cell.is_bounded() {
        return None;
    }
    let rows: Vec<Vec<Rational>> = cell
        .inequalities()
        .iter()
        .map(|h| {
            let mut r = h.normal.clone();
            r.push(h.offset.clone());
            r
        })
        .collect();
    let mut best: Option<Rational> = None;
    for subset in (0..rows.len()).combinations(n) {
        let eqs: Vec<Vec<Rational>> = subset.iter().map(|&k| rows[k].clone()).collect();
        let Some((p, dirs)) = solve_affine(&eqs, n) else { continue };
        if !dirs.is_empty() || !cell.contains_point(&p) {
            continue;
        }
        let d = squared_distance(&p, site);
        if best.as_ref().is_none_or(|b| d > *b) {
            best = Some(d);
        }
    }
    best
}

pub fn voronoi_complex(y: &SiteSet) -> Result<VoronoiComplex> {
    SiteSet::new(y.ambient_dim, y.sites.clone())?;
    let mut by_sites: BTreeMap<Vec<usize>, (RationalPolyhedron, usize)> = BTreeMap::new();
    let four = Rational::from_integer(4.into());
    for i in 0..y.len() {
        let (cell, others) = cell_and_others(y, i);
        for f in cell.enumerate_closed_faces()? {
            let probe = f.interior.witness().expect("relative interior is non-empty");
            // the probe lies in the cell of `i`, so only sites within twice
            // its distance from site `i` can be as near
            let reach = squared_distance(&probe, &y.sites[i]);
            let mut w: Vec<usize> = others
                .iter()
                .take_while(|(d, _)| *d <= &reach * &four)
                .filter(|(_, j)| squared_distance(&probe, &y.sites[*j]) == reach)
                .map(|(_, j)| *j)
                .collect();
            w.push(i);
            w.sort_unstable();
            by_sites.entry(w).or_insert((f.face, f.dim));
        }
    }
    let mut order: Vec<(Vec<usize>, (RationalPolyhedron, usize))> = by_sites.into_iter().collect();
    // facets (singletons) in site order first, then by decreasing dimension
    order.sort_by(|a, b| {
        (a.0.len() > 1, std::cmp::Reverse(a.1 .1), &a.0).cmp(&(b.0.len() > 1, std::cmp::Reverse(b.1 .1), &b.0))
    });
    let mut faces = BTreeMap::new();
    let mut nearest = BTreeMap::new();
    for (k, (w, (poly, dim))) in order.into_iter().enumerate() {
        faces.insert(FaceId(k), Face { poly, dim });
        nearest.insert(FaceId(k), w);
    }
    let mut morphisms = BTreeSet::new();
    for (&a, wa) in &nearest {
        for (&b, wb) in &nearest {
            if wb.len() < wa.len() && wb.iter().all(|s| wa.binary_search(s).is_ok()) {
                morphisms.insert((a, b));
            }
        }
    }
    let cell_of = (0..y.len()).map(FaceId).collect();
    Ok(VoronoiComplex {
        complex: PolyhedralComplex::assemble(y.ambient_dim, faces, morphisms),
        cell_of,
        nearest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::rational::{int, rat};

    fn sites(n: usize, pts: &[&[i64]]) -> SiteSet {
        SiteSet::new(n, pts.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn two_points_on_a_line() {
        let v = voronoi_complex(&sites(1, &[&[0], &[1]])).unwrap();
        assert_eq!(v.complex.len(), 3);
        assert_eq!(v.complex.facets().len(), 2);
        let left = &v.complex.face(v.cell_of[0]).unwrap().poly;
        assert!(left.contains_point(&[rat(1, 2)]));
        assert!(left.contains_point(&[int(-100)]));
        assert!(!left.contains_point(&[rat(2, 3)]));
        let shared = v.nearest.iter().find(|(_, w)| w.len() == 2).unwrap().0;
        let p = &v.complex.face(*shared).unwrap().poly;
        assert!(p.same_set(&RationalPolyhedron::point(&[rat(1, 2)])));
    }

    #[test]
    fn triangle_sites_meet_at_circumcenter() {
        let v = voronoi_complex(&sites(2, &[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert_eq!(v.complex.len(), 7);
        let center = v.nearest.iter().find(|(_, w)| w.len() == 3).unwrap().0;
        let p = &v.complex.face(*center).unwrap().poly;
        assert!(p.same_set(&RationalPolyhedron::point(&[rat(1, 2), rat(1, 2)])));
        assert!(v.complex.is_simple().simple);
    }

    #[test]
    fn single_site_is_whole_space() {
        let v = voronoi_complex(&sites(3, &[&[1, 2, 3]])).unwrap();
        assert_eq!(v.complex.len(), 1);
        assert_eq!(v.complex.face(FaceId(0)).unwrap().dim, 3);
    }

    #[test]
    fn duplicates_rejected() {
        let err = SiteSet::new(1, vec![vec![int(0)], vec![int(0)]]).unwrap_err();
        assert_eq!(err, Error::DuplicateSite(0, 1));
    }

    #[test]
    fn square_corners_are_not_simple_complex() {
        let v = voronoi_complex(&sites(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap();
        let report = v.complex.is_simple();
        assert!(!report.simple);
        let w = report.witness.unwrap();
        assert_eq!(v.nearest[&w].len(), 4);
        let nerve = v.complex.nerve().unwrap();
        assert_eq!(nerve.simplices_of_dim(2).len(), 4);
    }
}
