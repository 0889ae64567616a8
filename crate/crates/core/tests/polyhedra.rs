//! Property tests for the polyhedron layer against independent oracles.

use itertools::Itertools;
use num_traits::Zero;
use polycomplex::polyhedra::rational::{int, rat};
use polycomplex::polyhedra::{LinearInequality, Rational, RationalPolyhedron};
use proptest::prelude::*;

/// Integer row `(normal, offset, strict)`.
type Row = (Vec<i64>, i64, bool);

fn build(n: usize, rows: &[Row]) -> RationalPolyhedron {
    let ineqs = rows
        .iter()
        .map(|(a, b, s)| LinearInequality::new(a.iter().map(|&x| int(x)).collect(), int(*b), *s))
        .collect();
    RationalPolyhedron::new(n, ineqs).unwrap()
}

fn holds(rows: &[Row], x: &[Rational]) -> bool {
    rows.iter().all(|(a, b, s)| {
        let lhs: Rational = a.iter().zip(x).map(|(&c, v)| int(c) * v).sum();
        if *s {
            lhs < int(*b)
        } else {
            lhs <= int(*b)
        }
    })
}

/// Sample points meeting every face of the line arrangement of `rows`
/// inside a box large enough to hit any non-empty system with coefficients
/// of height at most 4.
fn arrangement_samples(n: usize, rows: &[Row]) -> Vec<Vec<Rational>> {
    const M: i64 = 40;
    match n {
        1 => {
            let mut cuts: Vec<Rational> = rows.iter().filter(|r| r.0[0] != 0).map(|r| rat(r.1, r.0[0])).collect();
            cuts.push(int(-M));
            cuts.push(int(M));
            cuts.sort();
            cuts.dedup();
            let mut out: Vec<Vec<Rational>> = cuts.iter().map(|c| vec![c.clone()]).collect();
            for w in cuts.windows(2) {
                out.push(vec![(&w[0] + &w[1]) / int(2)]);
            }
            out
        }
        2 => {
            let mut lines: Vec<(i64, i64, i64)> =
                rows.iter().filter(|r| r.0 != [0, 0]).map(|r| (r.0[0], r.0[1], r.1)).collect();
            lines.extend([(1, 0, M), (1, 0, -M), (0, 1, M), (0, 1, -M)]);
            let in_box = |p: &[Rational]| p.iter().all(|c| *c >= int(-M) && *c <= int(M));
            let mut vertices: Vec<Vec<Rational>> = Vec::new();
            for (l1, l2) in lines.iter().tuple_combinations() {
                let det = l1.0 * l2.1 - l1.1 * l2.0;
                if det == 0 {
                    continue;
                }
                let p = vec![rat(l1.2 * l2.1 - l2.2 * l1.1, det), rat(l1.0 * l2.2 - l2.0 * l1.2, det)];
                if in_box(&p) && !vertices.contains(&p) {
                    vertices.push(p);
                }
            }
            let mut out = vertices.clone();
            for (a, b) in vertices.iter().tuple_combinations() {
                out.push(vec![(&a[0] + &b[0]) / int(2), (&a[1] + &b[1]) / int(2)]);
            }
            for (a, b, c) in vertices.iter().tuple_combinations() {
                out.push(vec![(&a[0] + &b[0] + &c[0]) / int(3), (&a[1] + &b[1] + &c[1]) / int(3)]);
            }
            out
        }
        _ => unreachable!("oracle covers N <= 2"),
    }
}

fn rows(n: usize, max_rows: usize) -> impl Strategy<Value = Vec<Row>> {
    prop::collection::vec((prop::collection::vec(-4i64..=4, n), -4i64..=4, any::<bool>()), 1..=max_rows)
}

fn small_system() -> impl Strategy<Value = (usize, Vec<Row>)> {
    (1usize..=2).prop_flat_map(|n| (Just(n), rows(n, 5)))
}

/// Closed systems in up to three variables with up to six rows.
fn closed_system() -> impl Strategy<Value = (usize, Vec<Row>)> {
    (1usize..=3).prop_flat_map(|n| {
        (Just(n), rows(n, 6)).prop_map(|(n, rs)| (n, rs.into_iter().map(|(a, b, _)| (a, b, false)).collect()))
    })
}

fn grid(n: usize) -> Vec<Vec<Rational>> {
    let axis: Vec<Rational> = (-10..=10).map(|k| rat(k, 2)).collect();
    (0..n).map(|_| axis.iter().cloned()).multi_cartesian_product().collect()
}

/// Faces by tightening every subset of rows, deduplicated by solution set.
fn brute_force_faces(p: &RationalPolyhedron) -> Vec<RationalPolyhedron> {
    let m = p.inequalities().len();
    let mut out: Vec<RationalPolyhedron> = Vec::new();
    for subset in (0..m).powerset() {
        let f = p.clone().with_tightened(subset).unwrap();
        if !f.is_empty() && !out.iter().any(|g| g.same_set(&f)) {
            out.push(f);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn emptiness_matches_arrangement_oracle((n, rs) in small_system()) {
        let p = build(n, &rs);
        let oracle_nonempty = arrangement_samples(n, &rs).iter().any(|x| holds(&rs, x));
        prop_assert_eq!(p.is_empty(), !oracle_nonempty, "{}", p);
        if let Some(w) = p.witness() {
            prop_assert!(holds(&rs, &w));
        }
    }

    #[test]
    fn intersection_is_commutative_and_associative(
        (n, a) in small_system(),
        b in rows(2, 3),
        c in rows(2, 3),
    ) {
        let fit = |rs: Vec<Row>| -> Vec<Row> { rs.into_iter().map(|(v, o, s)| (v[..n].to_vec(), o, s)).collect() };
        let (p, q, r) = (build(n, &a), build(n, &fit(b)), build(n, &fit(c)));
        let pq = p.intersect(&q).unwrap();
        prop_assert!(pq.same_set(&q.intersect(&p).unwrap()));
        let left = pq.intersect(&r).unwrap();
        let right = p.intersect(&q.intersect(&r).unwrap()).unwrap();
        prop_assert!(left.same_set(&right));
        for x in grid(n) {
            let each = p.contains_point(&x) && q.contains_point(&x) && r.contains_point(&x);
            prop_assert_eq!(left.contains_point(&x), each);
        }
    }

    #[test]
    fn interior_keeps_dimension_and_closure((n, rs) in small_system()) {
        let p = build(n, &rs);
        prop_assume!(!p.is_empty());
        let inner = p.interior().unwrap();
        prop_assert_eq!(inner.dimension(), p.dimension());
        prop_assert!(inner.is_subset_of(&p));
        if p.is_bounded() {
            prop_assert!(inner.closure().same_set(&p.closure()));
        }
    }

    #[test]
    fn faces_match_tightening_oracle_and_close_up((n, rs) in closed_system()) {
        let p = build(n, &rs);
        prop_assume!(!p.is_empty());
        let faces = p.enumerate_faces().unwrap();
        let oracle = brute_force_faces(&p);
        prop_assert_eq!(faces.len(), oracle.len());
        for f in &oracle {
            prop_assert!(faces.iter().any(|g| g.same_set(f)));
        }
        prop_assert!(faces.iter().any(|f| f.same_set(&p)));
        for f in &faces {
            for g in f.enumerate_faces().unwrap() {
                prop_assert!(faces.iter().any(|h| h.same_set(&g)), "face {} of {} is not a face of {}", g, f, p);
            }
        }
    }
}

#[test]
fn unit_square_has_nine_faces() {
    let sq = RationalPolyhedron::closed_box(&[int(0), int(0)], &[int(1), int(1)]).unwrap();
    let faces = sq.enumerate_faces().unwrap();
    assert_eq!(faces.len(), 9);
    let by_dim = faces.iter().map(|f| f.dimension()).counts();
    assert_eq!((by_dim[&0], by_dim[&1], by_dim[&2]), (4, 4, 1));
    assert_eq!(brute_force_faces(&sq).len(), 9);
}

#[test]
fn half_line_and_segment() {
    let half = build(1, &[(vec![-1], 0, false)]);
    assert_eq!(half.enumerate_faces().unwrap().len(), 2);
    let seg = build(1, &[(vec![-1], 0, false), (vec![1], 1, false)]);
    assert_eq!(seg.enumerate_faces().unwrap().len(), 3);
    let open = seg.interior().unwrap();
    assert!(!open.contains_point(&[int(0)]) && open.contains_point(&[rat(1, 2)]));
}

#[test]
fn empty_polyhedron_has_empty_span() {
    let p = build(1, &[(vec![1], 0, true), (vec![-1], 0, false)]);
    assert!(p.is_empty());
    assert_eq!(p.dimension(), -1);
    assert!(p.affine_span().is_empty());
    assert!(p.enumerate_faces().is_err());
    assert!(p.interior().is_err());
    let point = build(1, &[(vec![2], 1, false), (vec![-2], -1, false)]);
    assert_eq!(point.dimension(), 0);
    assert!(point.witness().unwrap()[0].clone() - rat(1, 2) == Rational::zero());
}
