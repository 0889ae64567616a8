use itertools::Itertools;
use num_traits::{Signed, Zero};
use polycomplex::polyhedra::rational::{int, rat};
use polycomplex::polyhedra::{Rational, RationalPolyhedron};
use polycomplex::voronoi::{
    clipped_complex, delaunay, is_simple_configuration, perturb_to_simple, voronoi_cell, voronoi_complex, PolyhedralRegion,
    SiteSet, DEFAULT_RETRY_CAP,
};
use polycomplex::Error;
use proptest::prelude::*;

fn sites(n: usize, coords: &[Rational]) -> SiteSet {
    SiteSet::new(n, coords.chunks(n).map(<[Rational]>::to_vec).collect()).unwrap()
}

fn int_sites(n: usize, coords: &[i64]) -> SiteSet {
    sites(n, &coords.iter().map(|&x| int(x)).collect::<Vec<_>>())
}

fn distinct(n: usize, coords: &[i64]) -> bool {
    coords.chunks(n).all_unique()
}

/// Rank of a rational matrix and whether `A x = b` is solvable, by plain
/// Gaussian elimination on the augmented matrix.
fn rank_and_solvable(a: &[Vec<Rational>], b: &[Rational]) -> (usize, bool) {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    let mut rank = 0;
    for c in 0..=cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                let pivot = m[rank].clone();
                m[i].iter_mut().zip(&pivot).for_each(|(x, y)| *x -= &f * y);
            }
        }
        if c == cols {
            // pivot in the right-hand side column
            return (rank, false);
        }
        rank += 1;
    }
    (rank, true)
}

/// The transversality condition on every subset of every size.
fn subset_is_transversal(y: &SiteSet, w: &[usize]) -> bool {
    let n = y.ambient_dim();
    let p = |i: usize| &y.sites()[i];
    let sq = |v: &[Rational]| v.iter().map(|x| x * x).sum::<Rational>();
    let a: Vec<Vec<Rational>> = w[1..].iter().map(|&j| p(j).iter().zip(p(w[0])).map(|(x, b)| (x - b) * int(2)).collect()).collect();
    let b: Vec<Rational> = w[1..].iter().map(|&j| sq(p(j)) - sq(p(w[0]))).collect();
    let (rank, solvable) = rank_and_solvable(&a, &b);
    if w.len() - 1 <= n {
        rank == w.len() - 1
    } else {
        !solvable
    }
}

fn exhaustive_simple(y: &SiteSet) -> bool {
    (2..=y.len()).all(|s| (0..y.len()).combinations(s).all(|w| subset_is_transversal(y, &w)))
}

fn cross(o: &[Rational], a: &[Rational], b: &[Rational]) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Area of the convex hull of planar points by monotone chain and the
/// shoelace formula.
fn hull_area(points: &[Vec<Rational>]) -> Rational {
    let mut pts = points.to_vec();
    pts.sort();
    let mut hull: Vec<Vec<Rational>> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let seq: Vec<&Vec<Rational>> = if pass == 0 { pts.iter().collect() } else { pts.iter().rev().collect() };
        for p in seq {
            while hull.len() >= start + 2 && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p).is_positive() {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    let twice: Rational = (0..hull.len()).map(|i| cross(&[int(0), int(0)], &hull[i], &hull[(i + 1) % hull.len()])).sum();
    twice.abs() / int(2)
}

fn small_sites(max_coord: i64) -> impl Strategy<Value = (usize, Vec<i64>)> {
    (1usize..=2, 2usize..=6)
        .prop_flat_map(move |(n, k)| (Just(n), prop::collection::vec(0..=max_coord, n * k)))
        .prop_filter("distinct sites", |(n, c)| distinct(*n, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn capped_check_agrees_with_full_enumeration((n, coords) in small_sites(4)) {
        let y = int_sites(n, &coords);
        let report = is_simple_configuration(&y);
        prop_assert_eq!(report.simple, exhaustive_simple(&y));
        if let Some(w) = report.witness {
            prop_assert!(w.len() <= n + 2);
            prop_assert!(!subset_is_transversal(&y, &w));
        }
    }

    #[test]
    fn cells_cover_and_faces_have_the_right_degree(
        (n, coords) in small_sites(40),
        probes in prop::collection::vec(prop::collection::vec(-60i64..=60, 2), 8),
    ) {
        let y = sites(n, &coords.iter().map(|&x| rat(x, 3)).collect::<Vec<_>>());
        let v = voronoi_complex(&y).unwrap();
        for probe in &probes {
            let x: Vec<Rational> = probe[..n].iter().map(|&c| rat(c, 7)).collect();
            let dist = |s: &[Rational]| s.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum::<Rational>();
            let best = (0..y.len()).min_by_key(|&i| dist(&y.sites()[i])).unwrap();
            prop_assert!(v.complex.face(v.cell_of[best]).unwrap().poly.contains_point(&x));
            prop_assert!(voronoi_cell(&y, best).contains_point(&x));
        }
        if is_simple_configuration(&y).simple {
            prop_assert_eq!(v.complex.facets().len(), y.len());
            for f in v.complex.face_ids() {
                let k = v.complex.face(f).unwrap().dim;
                prop_assert_eq!(v.complex.facets_over(f).len(), n - k + 1);
                prop_assert_eq!(v.nearest[&f].len(), n - k + 1);
            }
        }
    }

    #[test]
    fn delaunay_volume_matches_hull((n, coords) in small_sites(30)) {
        let y = sites(n, &coords.iter().map(|&x| rat(x, 5)).collect::<Vec<_>>());
        prop_assume!(is_simple_configuration(&y).simple && y.len() > n);
        let d = delaunay(&y).unwrap();
        prop_assert!(d.certificate.passed(), "{:?}", d.certificate);
        let hull = if n == 1 {
            let xs: Vec<&Rational> = y.sites().iter().map(|s| &s[0]).collect();
            *xs.iter().max().unwrap() - *xs.iter().min().unwrap()
        } else {
            hull_area(y.sites())
        };
        prop_assert_eq!(d.certificate.hull_volume.clone(), Some(hull.clone()));
        let tops: Rational = d
            .complex
            .simplices_of_dim(n)
            .iter()
            .map(|s| {
                if n == 1 {
                    (&d.eta[s[1]][0] - &d.eta[s[0]][0]).abs()
                } else {
                    cross(&d.eta[s[0]], &d.eta[s[1]], &d.eta[s[2]]).abs() / int(2)
                }
            })
            .sum();
        prop_assert_eq!(tops, hull);
    }

    #[test]
    fn perturbation_is_bounded_and_seeded((n, coords) in small_sites(3), seed in any::<u64>()) {
        let y = int_sites(n, &coords);
        let bound = rat(1, 100);
        let moved = perturb_to_simple(&y, &bound, seed, DEFAULT_RETRY_CAP).unwrap();
        prop_assert!(is_simple_configuration(&moved).simple);
        for (a, b) in y.sites().iter().flatten().zip(moved.sites().iter().flatten()) {
            prop_assert!((a - b).abs() <= bound);
        }
        prop_assert_eq!(perturb_to_simple(&y, &bound, seed, DEFAULT_RETRY_CAP).unwrap(), moved);
    }
}

#[test]
fn two_sites_on_a_line() {
    let v = voronoi_complex(&int_sites(1, &[0, 1])).unwrap();
    let c = &v.complex;
    assert_eq!(c.len(), 3);
    let half = rat(1, 2);
    let left = RationalPolyhedron::new(1, vec![polycomplex::polyhedra::LinearInequality::le(vec![int(1)], half.clone())]).unwrap();
    assert!(c.face(v.cell_of[0]).unwrap().poly.same_set(&left));
    let vertex = c.face_ids().find(|&f| c.face(f).unwrap().dim == 0).unwrap();
    assert!(c.face(vertex).unwrap().poly.same_set(&RationalPolyhedron::point(&[half])));
    let d = delaunay(&int_sites(1, &[0, 1])).unwrap();
    assert_eq!(d.complex.maximal_simplices(), vec![vec![0, 1]]);
}

#[test]
fn right_triangle_circumcenter() {
    let y = int_sites(2, &[0, 0, 1, 0, 0, 1]);
    let v = voronoi_complex(&y).unwrap();
    let centre = RationalPolyhedron::point(&[rat(1, 2), rat(1, 2)]);
    let vertices: Vec<_> = v.complex.face_ids().filter(|&f| v.complex.face(f).unwrap().dim == 0).collect();
    assert_eq!(vertices.len(), 1);
    assert!(v.complex.face(vertices[0]).unwrap().poly.same_set(&centre));
    assert!(v.cell_of.iter().all(|&f| !v.complex.face(f).unwrap().poly.is_bounded()));
    let d = delaunay(&y).unwrap();
    assert_eq!(d.complex.maximal_simplices(), vec![vec![0, 1, 2]]);
    assert_eq!(d.certificate.hull_volume, Some(rat(1, 2)));
}

#[test]
fn single_site_owns_everything() {
    for n in 1..=3 {
        let v = voronoi_complex(&int_sites(n, &vec![1; n])).unwrap();
        assert_eq!(v.complex.len(), 1);
        assert!(v.complex.face(v.cell_of[0]).unwrap().poly.inequalities().is_empty());
    }
}

#[test]
fn configuration_examples() {
    assert!(is_simple_configuration(&int_sites(2, &[0, 0, 1, 0, 0, 1, 2, 3])).simple);
    let square = is_simple_configuration(&int_sites(2, &[0, 0, 1, 0, 0, 1, 1, 1]));
    assert_eq!(square.witness, Some(vec![0, 1, 2, 3]));
    let collinear = is_simple_configuration(&int_sites(2, &[0, 0, 1, 1, 2, 2]));
    assert_eq!(collinear.witness, Some(vec![0, 1, 2]));
}

#[test]
fn perturbation_edge_cases() {
    let square = int_sites(2, &[0, 0, 1, 0, 0, 1, 1, 1]);
    assert!(matches!(perturb_to_simple(&square, &int(0), 1, DEFAULT_RETRY_CAP), Err(Error::InvalidBound)));
    let simple = int_sites(2, &[0, 0, 1, 0, 0, 1]);
    assert_eq!(perturb_to_simple(&simple, &int(0), 1, DEFAULT_RETRY_CAP).unwrap(), simple);
    assert!(matches!(perturb_to_simple(&square, &rat(1, 10), 1, 0), Err(Error::RetryCapExceeded { cap: 0 })));
    assert!(matches!(delaunay(&square), Err(Error::NonSimpleConfiguration { .. })));
}

#[test]
fn clipping_to_a_box_inside_one_cell() {
    let y = int_sites(2, &[0, 0, 10, 1, 3, 9]);
    let b = |lo: (i64, i64), hi: (i64, i64)| {
        RationalPolyhedron::closed_box(&[rat(lo.0, 10), rat(lo.1, 10)], &[rat(hi.0, 10), rat(hi.1, 10)]).unwrap()
    };
    let inner = PolyhedralRegion::new(vec![b((-5, -5), (5, 5))]).unwrap();
    let c = clipped_complex(&y, &inner).unwrap();
    assert_eq!(c.len(), 1);
    assert!(c.is_simple().simple);

    let line = int_sites(1, &[0, 1]);
    let hull = PolyhedralRegion::new(vec![RationalPolyhedron::closed_box(&[int(0)], &[int(1)]).unwrap()]).unwrap();
    assert_eq!(clipped_complex(&line, &hull).unwrap().len(), voronoi_complex(&line).unwrap().complex.len());
}
