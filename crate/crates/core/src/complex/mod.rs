//! Embedded polyhedral complexes: faces are rational polyhedra in a common
//! ambient space and morphisms are inclusions.

mod simplicial;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyhedra::{AffineSubspace, RationalPolyhedron};

pub use simplicial::SimplicialComplex;
pub(crate) use simplicial::is_subset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceId(pub usize);

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub poly: RationalPolyhedron,
    pub dim: usize,
}

/// Finite category of polyhedra in Q^N. `morphisms` holds the strict
/// inclusions `(src, dst)`, transitively closed; identities are implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralComplex {
    ambient_dim: usize,
    faces: BTreeMap<FaceId, Face>,
    morphisms: BTreeSet<(FaceId, FaceId)>,
}

/// Outcome of [`PolyhedralComplex::is_simple`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicityReport {
    pub simple: bool,
    /// Pure dimension, when the complex is pure.
    pub dimension: Option<usize>,
    /// First face (in id order) whose residue nerve is not a full simplex.
    pub witness: Option<FaceId>,
}

/// Face poset: `leq` holds the pairs `(a, b)` with `a <= b`, reflexive pairs
/// included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePoset {
    pub elements: Vec<FaceId>,
    pub leq: BTreeSet<(FaceId, FaceId)>,
}

impl FacePoset {
    pub fn le(&self, a: FaceId, b: FaceId) -> bool {
        self.leq.contains(&(a, b))
    }

    /// Order-preserving bijection test against another poset by brute force
    /// over element orderings with matching rank. Meant for small posets.
    pub fn is_isomorphic(&self, other: &FacePoset) -> bool {
        if self.elements.len() != other.elements.len() || self.leq.len() != other.leq.len() {
            return false;
        }
        let profile = |p: &FacePoset, x: FaceId| {
            let down = p.elements.iter().filter(|&&y| p.le(y, x)).count();
            let up = p.elements.iter().filter(|&&y| p.le(x, y)).count();
            (down, up)
        };
        let n = self.elements.len();
        let mut assign: Vec<Option<usize>> = vec![None; n];
        let mut used = vec![false; n];
        fn search(
            i: usize,
            a: &FacePoset,
            b: &FacePoset,
            assign: &mut Vec<Option<usize>>,
            used: &mut Vec<bool>,
            profile: &dyn Fn(&FacePoset, FaceId) -> (usize, usize),
        ) -> bool {
            if i == a.elements.len() {
                return true;
            }
            for j in 0..b.elements.len() {
                if used[j] || profile(a, a.elements[i]) != profile(b, b.elements[j]) {
                    continue;
                }
                let consistent = (0..i).all(|k| {
                    let m = assign[k].expect("assigned");
                    a.le(a.elements[k], a.elements[i]) == b.le(b.elements[m], b.elements[j])
                        && a.le(a.elements[i], a.elements[k]) == b.le(b.elements[j], b.elements[m])
                });
                if !consistent {
                    continue;
                }
                assign[i] = Some(j);
                used[j] = true;
                if search(i + 1, a, b, assign, used, profile) {
                    return true;
                }
                used[j] = false;
                assign[i] = None;
            }
            false
        }
        search(0, self, other, &mut assign, &mut used, &profile)
    }
}

impl PolyhedralComplex {
    /// Assembles a complex from faces and inclusion pairs. Empty faces are
    /// rejected, morphisms are checked to be set inclusions and closed
    /// transitively.
    pub fn from_parts(
        ambient_dim: usize,
        faces: impl IntoIterator<Item = (FaceId, RationalPolyhedron)>,
        morphisms: impl IntoIterator<Item = (FaceId, FaceId)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (id, poly) in faces {
            if poly.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: poly.ambient_dim(),
                });
            }
            let dim = poly.dimension();
            if dim < 0 {
                return Err(Error::EmptyPolyhedron);
            }
            map.insert(id, Face { poly, dim: dim as usize });
        }
        let mut arrows = BTreeSet::new();
        for (s, t) in morphisms {
            let (fs, ft) = match (map.get(&s), map.get(&t)) {
                (Some(a), Some(b)) => (a, b),
                (None, _) => return Err(Error::UnknownFace(s)),
                (_, None) => return Err(Error::UnknownFace(t)),
            };
            if s == t {
                continue;
            }
            if fs.dim >= ft.dim || !fs.poly.is_subset_of(&ft.poly) {
                return Err(Error::Inconsistent(format!("morphism {s} -> {t} is not a proper inclusion")));
            }
            arrows.insert((s, t));
        }
        Ok(Self::assemble(ambient_dim, map, arrows))
    }

    /// Builds without re-checking inclusions; closes morphisms transitively.
    pub(crate) fn assemble(
        ambient_dim: usize,
        faces: BTreeMap<FaceId, Face>,
        mut morphisms: BTreeSet<(FaceId, FaceId)>,
    ) -> Self {
        loop {
            let extra: Vec<(FaceId, FaceId)> = morphisms
                .iter()
                .flat_map(|&(a, b)| {
                    morphisms
                        .range((b, FaceId(0))..=(b, FaceId(usize::MAX)))
                        .map(move |&(_, c)| (a, c))
                })
                .filter(|p| !morphisms.contains(p))
                .collect();
            if extra.is_empty() {
                break;
            }
            morphisms.extend(extra);
        }
        PolyhedralComplex {
            ambient_dim,
            faces,
            morphisms,
        }
    }

    /// Complex generated by `cells`: their faces, deduplicated by solution
    /// set, with inclusions as morphisms. Every pairwise intersection of
    /// cells must be a face of both.
    pub fn from_subdivision(cells: &[RationalPolyhedron]) -> Result<Self> {
        let ambient_dim = cells.first().map(|c| c.ambient_dim()).ok_or(Error::EmptyPolyhedron)?;
        for c in cells {
            if c.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: c.ambient_dim(),
                });
            }
            if c.is_empty() {
                return Err(Error::EmptyPolyhedron);
            }
        }
        for (i, j) in (0..cells.len()).tuple_combinations() {
            let meet = cells[i].intersect(&cells[j])?;
            if meet.is_empty() {
                continue;
            }
            if !is_face_of(&meet, &cells[i]) || !is_face_of(&meet, &cells[j]) {
                return Err(Error::OverlapNotFace { first: i, second: j });
            }
        }
        let mut buckets: BTreeMap<AffineSubspace, Vec<FaceId>> = BTreeMap::new();
        let mut faces: BTreeMap<FaceId, Face> = BTreeMap::new();
        for cell in cells {
            for face in cell.enumerate_faces()? {
                let span = face.affine_span();
                let bucket = buckets.entry(span.clone()).or_default();
                if bucket.iter().any(|id| faces[id].poly.same_set(&face)) {
                    continue;
                }
                let id = FaceId(faces.len());
                bucket.push(id);
                faces.insert(
                    id,
                    Face {
                        poly: face,
                        dim: span.dimension() as usize,
                    },
                );
            }
        }
        let morphisms = inclusion_pairs(&faces);
        Ok(Self::assemble(ambient_dim, faces, morphisms))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn faces(&self) -> &BTreeMap<FaceId, Face> {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> Result<&Face> {
        self.faces.get(&id).ok_or(Error::UnknownFace(id))
    }

    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> + '_ {
        self.faces.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn morphisms(&self) -> &BTreeSet<(FaceId, FaceId)> {
        &self.morphisms
    }

    /// Morphism `a -> b`, identity included.
    pub fn has_morphism(&self, a: FaceId, b: FaceId) -> bool {
        a == b || self.morphisms.contains(&(a, b))
    }

    /// Faces receiving a proper morphism from `c`.
    pub fn above(&self, c: FaceId) -> impl Iterator<Item = FaceId> + '_ {
        self.morphisms
            .range((c, FaceId(0))..=(c, FaceId(usize::MAX)))
            .map(|&(_, d)| d)
    }

    /// Faces with a proper morphism into `c`.
    pub fn below(&self, c: FaceId) -> impl Iterator<Item = FaceId> + '_ {
        self.morphisms.iter().filter(move |&&(_, d)| d == c).map(|&(s, _)| s)
    }

    pub fn facets(&self) -> BTreeSet<FaceId> {
        self.face_ids().filter(|&c| self.above(c).next().is_none()).collect()
    }

    /// Facets `f` with a morphism `c -> f`, `c` itself if it is a facet.
    pub fn facets_over(&self, c: FaceId) -> BTreeSet<FaceId> {
        let facets = self.facets();
        std::iter::once(c)
            .chain(self.above(c))
            .filter(|f| facets.contains(f))
            .collect()
    }

    /// Pure dimension: every facet has the same dimension. `None` otherwise
    /// and for the empty complex.
    pub fn pure_dimension(&self) -> Option<usize> {
        let dims: BTreeSet<usize> = self.facets().iter().map(|f| self.faces[f].dim).collect();
        (dims.len() == 1).then(|| *dims.iter().next().expect("one element"))
    }

    /// Full subcategory on `c` and every face receiving a morphism from it.
    pub fn residue(&self, c: FaceId) -> Result<PolyhedralComplex> {
        self.face(c)?;
        let keep: BTreeSet<FaceId> = std::iter::once(c).chain(self.above(c)).collect();
        Ok(self.full_subcategory(&keep))
    }

    pub fn full_subcategory(&self, keep: &BTreeSet<FaceId>) -> PolyhedralComplex {
        PolyhedralComplex {
            ambient_dim: self.ambient_dim,
            faces: self
                .faces
                .iter()
                .filter(|(id, _)| keep.contains(id))
                .map(|(id, f)| (*id, f.clone()))
                .collect(),
            morphisms: self
                .morphisms
                .iter()
                .filter(|(a, b)| keep.contains(a) && keep.contains(b))
                .copied()
                .collect(),
        }
    }

    /// Nerve on the facets (vertex `i` is the `i`-th facet in id order, and
    /// is labelled by its face id): facets `c_0..c_k` span a simplex when some
    /// face of dimension `n - k` maps into all of them.
    pub fn nerve(&self) -> Result<SimplicialComplex> {
        let n = self.pure_dimension().ok_or(Error::NotPure)?;
        let facets: Vec<FaceId> = self.facets().into_iter().collect();
        let index: BTreeMap<FaceId, usize> = facets.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut simplices: Vec<Vec<usize>> = Vec::new();
        for (&d, face) in &self.faces {
            let k = n - face.dim;
            let over: Vec<usize> = self.facets_over(d).iter().map(|f| index[f]).collect();
            if over.len() < k + 1 {
                continue;
            }
            simplices.extend(over.into_iter().combinations(k + 1));
        }
        SimplicialComplex::new(facets.len(), simplices)?
            .with_labels(facets.iter().map(|f| f.to_string()).collect())
    }

    /// Number of nerve simplices dual to `c`: `C(m, n - dim c + 1)` for `m`
    /// facets over `c`.
    pub fn dual_simplex_count(&self, c: FaceId) -> Result<usize> {
        let n = self.pure_dimension().ok_or(Error::NotPure)?;
        let k = n - self.face(c)?.dim;
        let m = self.facets_over(c).len();
        Ok(binomial(m, k + 1))
    }

    /// Pure of some dimension `n` with every `k`-face's residue nerve the
    /// full simplex on `n - k + 1` vertices.
    pub fn is_simple(&self) -> SimplicityReport {
        let Some(n) = self.pure_dimension() else {
            return SimplicityReport {
                simple: false,
                dimension: None,
                witness: None,
            };
        };
        for (&c, face) in &self.faces {
            let ok = self
                .residue(c)
                .and_then(|r| r.nerve())
                .map(|nerve| nerve.vertex_count() == n - face.dim + 1 && nerve.is_full_simplex())
                .unwrap_or(false);
            if !ok {
                return SimplicityReport {
                    simple: false,
                    dimension: Some(n),
                    witness: Some(c),
                };
            }
        }
        SimplicityReport {
            simple: true,
            dimension: Some(n),
            witness: None,
        }
    }

    /// Checks that `b` names faces of the complex and is closed under
    /// taking faces.
    pub fn check_subcomplex(&self, b: &BTreeSet<FaceId>) -> Result<()> {
        for &x in b {
            self.face(x)?;
            if let Some(y) = self.below(x).find(|y| !b.contains(y)) {
                return Err(Error::NotSubcomplex(y));
            }
        }
        Ok(())
    }

    /// `C − B`: every face outside `b` loses the points of the `b`-faces
    /// below it. Face ids and dimensions are kept.
    pub fn difference(&self, b: &BTreeSet<FaceId>) -> Result<PolyhedralComplex> {
        self.check_subcomplex(b)?;
        let mut faces = BTreeMap::new();
        for (&c, face) in &self.faces {
            if b.contains(&c) {
                continue;
            }
            let removed: Vec<FaceId> = self.below(c).filter(|x| b.contains(x)).collect();
            let maximal = removed
                .iter()
                .filter(|&&x| !removed.iter().any(|&y| y != x && self.morphisms.contains(&(x, y))));
            let mut poly = face.poly.clone();
            for &x in maximal {
                poly = poly.cut_face(&self.faces[&x].poly)?;
            }
            faces.insert(c, Face { poly, dim: face.dim });
        }
        let morphisms = self
            .morphisms
            .iter()
            .filter(|(s, t)| faces.contains_key(s) && faces.contains_key(t))
            .copied()
            .collect();
        Ok(PolyhedralComplex {
            ambient_dim: self.ambient_dim,
            faces,
            morphisms,
        })
    }

    pub fn poset(&self) -> FacePoset {
        let elements: Vec<FaceId> = self.face_ids().collect();
        let mut leq: BTreeSet<(FaceId, FaceId)> = elements.iter().map(|&c| (c, c)).collect();
        leq.extend(self.morphisms.iter().copied());
        FacePoset { elements, leq }
    }

    /// Order complex of the face poset. For a bounded complex of closed
    /// polyhedra this triangulates the underlying space.
    pub fn barycentric_triangulation(&self) -> SimplicialComplex {
        let ids: Vec<FaceId> = self.face_ids().collect();
        SimplicialComplex::order_complex(ids.len(), |a, b| self.morphisms.contains(&(ids[a], ids[b])))
    }

    /// Re-checks the subdivision axioms: every face of a face is a face of
    /// the complex with a morphism into it, and every non-empty intersection
    /// of two faces is a face of the complex below both.
    pub fn validate(&self) -> Result<()> {
        let find = |p: &RationalPolyhedron| {
            self.faces
                .iter()
                .find(|(_, f)| f.poly.same_set(p))
                .map(|(id, _)| *id)
        };
        for (&c, face) in &self.faces {
            if face.poly.closure().same_set(&face.poly) {
                for sub in face.poly.enumerate_faces()? {
                    match find(&sub) {
                        Some(id) if self.has_morphism(id, c) => {}
                        _ => return Err(Error::NotSubcomplex(c)),
                    }
                }
            }
        }
        let ids: Vec<FaceId> = self.face_ids().collect();
        for (&a, &b) in ids.iter().tuple_combinations() {
            let meet = self.faces[&a].poly.intersect(&self.faces[&b].poly)?;
            if meet.is_empty() {
                continue;
            }
            match find(&meet) {
                Some(id) if self.has_morphism(id, a) && self.has_morphism(id, b) => {}
                _ => {
                    return Err(Error::OverlapNotFace {
                        first: a.0,
                        second: b.0,
                    })
                }
            }
        }
        Ok(())
    }
}

pub fn is_face_of(face: &RationalPolyhedron, poly: &RationalPolyhedron) -> bool {
    poly.has_face(face)
}

/// Strict inclusions among the given faces.
pub(crate) fn inclusion_pairs(faces: &BTreeMap<FaceId, Face>) -> BTreeSet<(FaceId, FaceId)> {
    let witnesses: BTreeMap<FaceId, Vec<_>> = faces
        .iter()
        .map(|(id, f)| (*id, f.poly.witness().expect("non-empty face")))
        .collect();
    let mut out = BTreeSet::new();
    for (&a, fa) in faces {
        for (&b, fb) in faces {
            if fa.dim < fb.dim && fb.poly.contains_point(&witnesses[&a]) && fa.poly.is_subset_of(&fb.poly) {
                out.insert((a, b));
            }
        }
    }
    out
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::rational::{int, rat};

    fn seg(a: i64, b: i64) -> RationalPolyhedron {
        RationalPolyhedron::closed_box(&[int(a)], &[int(b)]).unwrap()
    }

    fn two_segments() -> PolyhedralComplex {
        PolyhedralComplex::from_subdivision(&[seg(0, 1), seg(1, 2)]).unwrap()
    }

    fn find(c: &PolyhedralComplex, p: &RationalPolyhedron) -> FaceId {
        c.faces().iter().find(|(_, f)| f.poly.same_set(p)).map(|(i, _)| *i).unwrap()
    }

    #[test]
    fn two_segment_complex() {
        let c = two_segments();
        assert_eq!(c.len(), 5);
        let facets = c.facets();
        assert_eq!(facets.len(), 2);
        assert!(facets.contains(&find(&c, &seg(0, 1))));
        let mid = find(&c, &seg(1, 1));
        assert_eq!(c.above(mid).count(), 2);
        let nerve = c.nerve().unwrap();
        assert_eq!(nerve.f_vector(), vec![2, 1]);
        c.validate().unwrap();
    }

    #[test]
    fn overlap_must_be_face() {
        let bad = RationalPolyhedron::closed_box(&[rat(1, 2)], &[int(2)]).unwrap();
        assert_eq!(
            PolyhedralComplex::from_subdivision(&[seg(0, 1), bad]),
            Err(Error::OverlapNotFace { first: 0, second: 1 })
        );
    }

    #[test]
    fn residues() {
        let c = two_segments();
        let mid = find(&c, &seg(1, 1));
        assert_eq!(c.residue(mid).unwrap().len(), 3);
        let left = find(&c, &seg(0, 1));
        assert_eq!(c.residue(left).unwrap().len(), 1);
        assert!(matches!(c.residue(FaceId(99)), Err(Error::UnknownFace(_))));
    }

    #[test]
    fn difference_of_segment() {
        let c = PolyhedralComplex::from_subdivision(&[seg(0, 1)]).unwrap();
        let zero = find(&c, &seg(0, 0));
        let d = c.difference(&BTreeSet::from([zero])).unwrap();
        assert_eq!(d.len(), 2);
        let open = find(&c, &seg(0, 1));
        let half_open = &d.face(open).unwrap().poly;
        assert!(!half_open.contains_point(&[int(0)]));
        assert!(half_open.contains_point(&[int(1)]));
        assert_eq!(half_open.dimension(), 1);
        let top = BTreeSet::from([open]);
        assert!(matches!(c.difference(&top), Err(Error::NotSubcomplex(_))));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 3), 4);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(5, 0), 1);
    }
}
