use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::subspace::ProjectiveSubspace;
use crate::complex::{FaceId, PolyhedralComplex};
use crate::error::{Error, Result};

/// Projective completion of the affine span of every face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanAssignment {
    pub ambient_dim: usize,
    pub spans: BTreeMap<FaceId, ProjectiveSubspace>,
}

impl SpanAssignment {
    pub fn span(&self, c: FaceId) -> Result<&ProjectiveSubspace> {
        self.spans.get(&c).ok_or(Error::UnknownFace(c))
    }
}

pub fn span_assignment(c: &PolyhedralComplex) -> Result<SpanAssignment> {
    let mut spans = BTreeMap::new();
    for (&id, face) in c.faces() {
        let affine = face.poly.affine_span();
        if affine.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        spans.insert(id, ProjectiveSubspace::completion(&affine));
    }
    for &(a, b) in c.morphisms() {
        if !spans[&b].contains(&spans[&a]) {
            return Err(Error::Inconsistent(format!("span of {a} is not inside the span of {b}")));
        }
    }
    Ok(SpanAssignment {
        ambient_dim: c.ambient_dim(),
        spans,
    })
}

/// A parasitic subspace of `P_ambient`. Records produced by [`saturate`]
/// carry `saturated = true` and keep the tuple and ambient face of the
/// intersection they were transported from in `tuple` and `origin`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParasiticRecord {
    pub ambient_face: FaceId,
    pub tuple: Vec<FaceId>,
    pub subspace: ProjectiveSubspace,
    pub saturated: bool,
    pub origin: FaceId,
}

/// Proper faces of `c` in id order.
fn faces_below(c: &PolyhedralComplex, id: FaceId) -> Vec<FaceId> {
    let mut v: Vec<FaceId> = c.below(id).collect();
    v.sort_unstable();
    v
}

/// Intersections of spans of antichains of proper faces of each face that
/// are not the span of a face lying below every member of the tuple. Tuples
/// are extended in id order; a face whose span already contains the running
/// intersection is skipped, which loses no intersection.
pub fn parasitic_intersections(c: &PolyhedralComplex, a: &SpanAssignment) -> Vec<ParasiticRecord> {
    let mut out = Vec::new();
    for ambient in c.face_ids() {
        let below = faces_below(c, ambient);
        let mut found: BTreeMap<ProjectiveSubspace, Vec<FaceId>> = BTreeMap::new();
        let mut stack: Vec<(Vec<usize>, ProjectiveSubspace)> =
            (0..below.len()).map(|i| (vec![i], a.spans[&below[i]].clone())).collect();
        stack.reverse();
        while let Some((tuple, meet)) = stack.pop() {
            let last = *tuple.last().expect("non-empty tuple");
            let mut children = Vec::new();
            for j in last + 1..below.len() {
                let f = below[j];
                if tuple.iter().any(|&t| c.has_morphism(below[t], f) || c.has_morphism(f, below[t])) {
                    continue;
                }
                let span = &a.spans[&f];
                if span.contains(&meet) {
                    continue;
                }
                let next = meet.intersect(span);
                if next.is_empty() {
                    continue;
                }
                let mut t = tuple.clone();
                t.push(j);
                let faces: Vec<FaceId> = t.iter().map(|&k| below[k]).collect();
                if !found.contains_key(&next) && !realized(c, a, &faces, &next) {
                    found.insert(next.clone(), faces);
                }
                children.push((t, next));
            }
            stack.extend(children.into_iter().rev());
        }
        out.extend(found.into_iter().map(|(subspace, tuple)| ParasiticRecord {
            ambient_face: ambient,
            tuple,
            subspace,
            saturated: false,
            origin: ambient,
        }));
    }
    out
}

/// Some face below every member of `tuple` has span `meet`.
fn realized(c: &PolyhedralComplex, a: &SpanAssignment, tuple: &[FaceId], meet: &ProjectiveSubspace) -> bool {
    c.face_ids()
        .any(|c0| tuple.iter().all(|&t| c.has_morphism(c0, t)) && a.spans[&c0] == *meet)
}

/// Closes the records under images along morphisms (the same subspace, now
/// in the target span), preimages (intersection with the source span) and
/// pairwise intersection within one face, keeping non-empty results. Input
/// records come first in the output, new ones follow in discovery order
/// with `saturated = true`.
pub fn saturate(c: &PolyhedralComplex, a: &SpanAssignment, parasites: &[ParasiticRecord]) -> Vec<ParasiticRecord> {
    let mut seen: BTreeSet<(FaceId, ProjectiveSubspace)> = BTreeSet::new();
    let mut out: Vec<ParasiticRecord> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for r in parasites {
        if seen.insert((r.ambient_face, r.subspace.clone())) {
            queue.push_back(out.len());
            out.push(r.clone());
        }
    }
    while let Some(idx) = queue.pop_front() {
        let r = out[idx].clone();
        let mut moves: Vec<(FaceId, ProjectiveSubspace)> =
            c.above(r.ambient_face).map(|b| (b, r.subspace.clone())).collect();
        for b in faces_below(c, r.ambient_face) {
            let meet = r.subspace.intersect(&a.spans[&b]);
            if !meet.is_empty() {
                moves.push((b, meet));
            }
        }
        for other in out.iter().filter(|o| o.ambient_face == r.ambient_face) {
            let meet = r.subspace.intersect(&other.subspace);
            if !meet.is_empty() {
                moves.push((r.ambient_face, meet));
            }
        }
        for (b, subspace) in moves {
            if seen.insert((b, subspace.clone())) {
                queue.push_back(out.len());
                out.push(ParasiticRecord {
                    ambient_face: b,
                    tuple: r.tuple.clone(),
                    subspace,
                    saturated: true,
                    origin: r.origin,
                });
            }
        }
    }
    out
}

/// A face of dimension `d` is simple when each of its proper faces of
/// dimension `k` lies in exactly `d - k` of its codimension-one faces.
pub fn is_simple_face(c: &PolyhedralComplex, id: FaceId) -> Result<bool> {
    let d = c.face(id)?.dim;
    let below = faces_below(c, id);
    let walls: Vec<FaceId> = below.iter().copied().filter(|&f| c.faces()[&f].dim + 1 == d).collect();
    Ok(below.iter().all(|&f| {
        let k = c.faces()[&f].dim;
        walls.iter().filter(|&&w| c.has_morphism(f, w)).count() == d - k
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProperViolation {
    /// 1: dimension bound, 3: a face of the ambient span lies in the record.
    pub check: u8,
    pub record: usize,
    pub face: Option<FaceId>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProperReport {
    pub passed: bool,
    pub dimension_bound: isize,
    pub records_checked: usize,
    pub violations: Vec<ProperViolation>,
    pub log: Vec<String>,
}

/// Checks that every record has projective dimension at most `N - 2` and
/// contains the span of no face of its ambient face (the ambient face
/// included). Every face polyhedron must be simple.
pub fn verify_proper(c: &PolyhedralComplex, a: &SpanAssignment, records: &[ParasiticRecord]) -> Result<ProperReport> {
    for id in c.face_ids() {
        if !is_simple_face(c, id)? {
            return Err(Error::NonSimpleFace(id));
        }
    }
    let bound = c.ambient_dim() as isize - 2;
    let mut violations = Vec::new();
    let mut log = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let dim = r.subspace.dimension();
        let dim_ok = dim <= bound;
        if !dim_ok {
            violations.push(ProperViolation {
                check: 1,
                record: i,
                face: None,
                detail: format!("dimension {dim} exceeds {bound}"),
            });
        }
        let b = r.ambient_face;
        let swallowed: Vec<FaceId> = std::iter::once(b)
            .chain(faces_below(c, b))
            .filter(|f| a.spans.get(f).is_some_and(|s| r.subspace.contains(s)))
            .collect();
        for &f in &swallowed {
            violations.push(ProperViolation {
                check: 3,
                record: i,
                face: Some(f),
                detail: format!("record {} in face {b} contains face {f}", r.subspace),
            });
        }
        log.push(format!(
            "record {i} in face {b}: {} dim {dim} {} {bound}; {}",
            r.subspace,
            if dim_ok { "<=" } else { ">" },
            if swallowed.is_empty() { "contains no face".to_string() } else { format!("contains {} face(s)", swallowed.len()) }
        ));
    }
    Ok(ProperReport {
        passed: violations.is_empty(),
        dimension_bound: bound,
        records_checked: records.len(),
        violations,
        log,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaithfulnessReport {
    pub pairs_checked: usize,
    /// Pairs of faces below a common face whose span intersection is not
    /// the span of a common face.
    pub unrealized: Vec<(FaceId, FaceId)>,
    /// Unrealized pairs whose intersection lies in no record of a common
    /// upper face.
    pub uncovered: Vec<(FaceId, FaceId)>,
}

/// Span-level strict faithfulness: two faces of a common face should meet,
/// as spans, exactly in the span of a common face; every other non-empty
/// meeting must be resolved by a record in a face containing both.
pub fn strict_faithfulness(c: &PolyhedralComplex, a: &SpanAssignment, records: &[ParasiticRecord]) -> FaithfulnessReport {
    let mut by_face: BTreeMap<FaceId, Vec<&ProjectiveSubspace>> = BTreeMap::new();
    for r in records {
        by_face.entry(r.ambient_face).or_default().push(&r.subspace);
    }
    let ids: Vec<FaceId> = c.face_ids().collect();
    let mut report = FaithfulnessReport {
        pairs_checked: 0,
        unrealized: Vec::new(),
        uncovered: Vec::new(),
    };
    for (i, &x) in ids.iter().enumerate() {
        for &y in &ids[i + 1..] {
            if c.has_morphism(x, y) || c.has_morphism(y, x) {
                continue;
            }
            let uppers: Vec<FaceId> = ids.iter().copied().filter(|&u| c.has_morphism(x, u) && c.has_morphism(y, u)).collect();
            if uppers.is_empty() {
                continue;
            }
            report.pairs_checked += 1;
            let meet = a.spans[&x].intersect(&a.spans[&y]);
            if meet.is_empty() || realized(c, a, &[x, y], &meet) {
                continue;
            }
            report.unrealized.push((x, y));
            let covered = uppers
                .iter()
                .any(|u| by_face.get(u).is_some_and(|rs| rs.iter().any(|s| s.contains(&meet))));
            if !covered {
                report.uncovered.push((x, y));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::rational::int;
    use crate::polyhedra::RationalPolyhedron;

    fn cube(n: usize, lo: i64, hi: i64) -> RationalPolyhedron {
        RationalPolyhedron::closed_box(&vec![int(lo); n], &vec![int(hi); n]).unwrap()
    }

    fn point(coords: &[i64]) -> ProjectiveSubspace {
        let n = coords.len() - 1;
        ProjectiveSubspace::new(n, vec![coords.iter().map(|&x| int(x)).collect()]).unwrap()
    }

    fn pipeline(c: &PolyhedralComplex) -> (SpanAssignment, Vec<ParasiticRecord>, Vec<ParasiticRecord>) {
        let a = span_assignment(c).unwrap();
        let p = parasitic_intersections(c, &a);
        let s = saturate(c, &a, &p);
        (a, p, s)
    }

    #[test]
    fn square_has_two_points_at_infinity() {
        let c = PolyhedralComplex::from_subdivision(&[cube(2, 0, 1)]).unwrap();
        let (a, p, s) = pipeline(&c);
        let subspaces: BTreeSet<_> = p.iter().map(|r| r.subspace.clone()).collect();
        assert_eq!(subspaces, BTreeSet::from([point(&[1, 0, 0]), point(&[0, 1, 0])]));
        assert!(p.iter().all(|r| c.face(r.ambient_face).unwrap().dim == 2));
        // each point also lands on the two parallel edges
        assert_eq!(s.len(), 2 + 4);
        assert!(s[2..].iter().all(|r| r.saturated && c.face(r.ambient_face).unwrap().dim == 1));
        let report = verify_proper(&c, &a, &s).unwrap();
        assert!(report.passed, "{:?}", report.violations);
        assert_eq!(saturate(&c, &a, &s), s);
        let faithful = strict_faithfulness(&c, &a, &s);
        assert_eq!(faithful.unrealized.len(), 2);
        assert!(faithful.uncovered.is_empty());
    }

    #[test]
    fn adjacent_edges_meet_in_their_vertex() {
        let c = PolyhedralComplex::from_subdivision(&[cube(2, 0, 1)]).unwrap();
        let a = span_assignment(&c).unwrap();
        let origin = point(&[0, 0, 1]);
        let vertex = c.face_ids().find(|f| a.spans[f] == origin).unwrap();
        let edges: Vec<FaceId> = c.above(vertex).filter(|&e| c.face(e).unwrap().dim == 1).collect();
        assert_eq!(a.spans[&edges[0]].intersect(&a.spans[&edges[1]]), origin);
        assert!(realized(&c, &a, &edges, &origin));
    }

    #[test]
    fn triangle_has_no_parasites() {
        let tri = RationalPolyhedron::new(
            2,
            vec![
                crate::polyhedra::LinearInequality::le(vec![int(-1), int(0)], int(0)),
                crate::polyhedra::LinearInequality::le(vec![int(0), int(-1)], int(0)),
                crate::polyhedra::LinearInequality::le(vec![int(1), int(1)], int(1)),
            ],
        )
        .unwrap();
        let c = PolyhedralComplex::from_subdivision(&[tri]).unwrap();
        let (_, p, s) = pipeline(&c);
        assert!(p.is_empty() && s.is_empty());
    }

    #[test]
    fn injected_edge_span_fails_check_three() {
        let c = PolyhedralComplex::from_subdivision(&[cube(2, 0, 1)]).unwrap();
        let (a, _, mut s) = pipeline(&c);
        let square = c.face_ids().find(|&f| c.face(f).unwrap().dim == 2).unwrap();
        let edge = c.below(square).find(|&f| c.face(f).unwrap().dim == 1).unwrap();
        s.push(ParasiticRecord {
            ambient_face: square,
            tuple: vec![edge],
            subspace: a.spans[&edge].clone(),
            saturated: false,
            origin: square,
        });
        let report = verify_proper(&c, &a, &s).unwrap();
        assert!(!report.passed);
        let bad: Vec<_> = report.violations.iter().filter(|v| v.check == 3).collect();
        assert!(bad.iter().all(|v| v.record == s.len() - 1));
        assert!(bad.iter().any(|v| v.face == Some(edge)));
    }

    #[test]
    fn pyramid_is_not_simple() {
        let apex_cut = RationalPolyhedron::new(
            3,
            vec![
                crate::polyhedra::LinearInequality::le(vec![int(0), int(0), int(-1)], int(0)),
                crate::polyhedra::LinearInequality::le(vec![int(1), int(0), int(1)], int(1)),
                crate::polyhedra::LinearInequality::le(vec![int(-1), int(0), int(1)], int(1)),
                crate::polyhedra::LinearInequality::le(vec![int(0), int(1), int(1)], int(1)),
                crate::polyhedra::LinearInequality::le(vec![int(0), int(-1), int(1)], int(1)),
            ],
        )
        .unwrap();
        let c = PolyhedralComplex::from_subdivision(&[apex_cut]).unwrap();
        let a = span_assignment(&c).unwrap();
        assert!(matches!(verify_proper(&c, &a, &[]), Err(Error::NonSimpleFace(_))));
    }
}
