use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::feasibility::{find_point, Constraint, Relation};
use super::linalg::{rank, solve_affine};
use super::rational::{
    dot, format_rational, normalize_leading, one, parse_rational, serde_rational,
    serde_rational_vec, zero, Rational,
};
use crate::error::{Error, Result};

/// `normal · x <= offset`, or `<` when `strict`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearInequality {
    #[serde(with = "serde_rational_vec")]
    pub normal: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub offset: Rational,
    pub strict: bool,
}

impl LinearInequality {
    pub fn new(normal: Vec<Rational>, offset: Rational, strict: bool) -> Self {
        LinearInequality {
            normal,
            offset,
            strict,
        }
    }

    pub fn le(normal: Vec<Rational>, offset: Rational) -> Self {
        Self::new(normal, offset, false)
    }

    pub fn lt(normal: Vec<Rational>, offset: Rational) -> Self {
        Self::new(normal, offset, true)
    }

    /// `x_axis >= value`
    pub fn lower_bound(dim: usize, axis: usize, value: Rational) -> Self {
        let mut normal = vec![zero(); dim];
        normal[axis] = -one();
        Self::le(normal, -value)
    }

    /// `x_axis <= value`
    pub fn upper_bound(dim: usize, axis: usize, value: Rational) -> Self {
        let mut normal = vec![zero(); dim];
        normal[axis] = one();
        Self::le(normal, value)
    }

    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let lhs = dot(&self.normal, x);
        if self.strict {
            lhs < self.offset
        } else {
            lhs <= self.offset
        }
    }

    fn is_trivial(&self) -> bool {
        self.normal.iter().all(Zero::is_zero)
    }

    fn trivially_true(&self) -> bool {
        if self.strict {
            self.offset.is_positive()
        } else {
            !self.offset.is_negative()
        }
    }

    /// The complementary open or closed half-space.
    fn violated(&self) -> Constraint {
        let normal: Vec<Rational> = self.normal.iter().map(|x| -x).collect();
        let rel = if self.strict { Relation::Le } else { Relation::Lt };
        Constraint::new(normal, -self.offset.clone(), rel)
    }
}

/// Smallest affine subspace containing a set, in canonical form: the
/// basepoint has zero free coordinates and the directions are the reduced
/// nullspace basis, so equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineSubspace {
    pub ambient_dim: usize,
    pub basepoint: Option<Vec<Rational>>,
    pub directions: Vec<Vec<Rational>>,
}

impl AffineSubspace {
    pub fn empty(ambient_dim: usize) -> Self {
        AffineSubspace {
            ambient_dim,
            basepoint: None,
            directions: Vec::new(),
        }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Self::from_equations(ambient_dim, &[])
    }

    /// Solution set of rows `[a_1 .. a_N, b]` read as `a · x = b`.
    pub fn from_equations(ambient_dim: usize, eqs: &[Vec<Rational>]) -> Self {
        match solve_affine(eqs, ambient_dim) {
            Some((basepoint, directions)) => AffineSubspace {
                ambient_dim,
                basepoint: Some(basepoint),
                directions,
            },
            None => Self::empty(ambient_dim),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.basepoint.is_none()
    }

    pub fn dimension(&self) -> isize {
        if self.is_empty() {
            -1
        } else {
            self.directions.len() as isize
        }
    }
}

pub(crate) struct ClosedFace {
    pub face: RationalPolyhedron,
    pub dim: usize,
    pub interior: RationalPolyhedron,
}

/// Convex polyhedron in Q^N cut out by a finite mixed system of strict and
/// non-strict inequalities. Indices in `tightened` are read as equalities;
/// they record which face of the parent system this polyhedron is.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalPolyhedron {
    ambient_dim: usize,
    inequalities: Vec<LinearInequality>,
    #[serde(default)]
    tightened: BTreeSet<usize>,
}

impl RationalPolyhedron {
    /// Builds a polyhedron. Inequalities with a zero normal are dropped when
    /// they hold trivially; a trivially false one is kept as the single
    /// canonical `0 <= -1` marker.
    pub fn new(ambient_dim: usize, inequalities: Vec<LinearInequality>) -> Result<Self> {
        let mut kept = Vec::with_capacity(inequalities.len());
        let mut contradictory = false;
        for ineq in inequalities {
            if ineq.normal.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: ineq.normal.len(),
                });
            }
            if ineq.is_trivial() {
                contradictory |= !ineq.trivially_true();
                continue;
            }
            kept.push(ineq);
        }
        if contradictory {
            return Ok(Self::empty_set(ambient_dim));
        }
        Ok(RationalPolyhedron {
            ambient_dim,
            inequalities: kept,
            tightened: BTreeSet::new(),
        })
    }

    pub fn with_tightened(mut self, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        for i in indices {
            if i >= self.inequalities.len() {
                return Err(Error::BadInequalityIndex(i));
            }
            self.tightened.insert(i);
        }
        Ok(self)
    }

    pub fn universe(ambient_dim: usize) -> Self {
        RationalPolyhedron {
            ambient_dim,
            inequalities: Vec::new(),
            tightened: BTreeSet::new(),
        }
    }

    pub fn empty_set(ambient_dim: usize) -> Self {
        RationalPolyhedron {
            ambient_dim,
            inequalities: vec![LinearInequality::le(vec![zero(); ambient_dim], -one())],
            tightened: BTreeSet::new(),
        }
    }

    /// Closed axis-aligned box `lo <= x <= hi`.
    pub fn closed_box(lo: &[Rational], hi: &[Rational]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        let n = lo.len();
        let mut ineqs = Vec::with_capacity(2 * n);
        for i in 0..n {
            ineqs.push(LinearInequality::lower_bound(n, i, lo[i].clone()));
            ineqs.push(LinearInequality::upper_bound(n, i, hi[i].clone()));
        }
        Self::new(n, ineqs)
    }

    /// The single point `p`, as a degenerate box.
    pub fn point(p: &[Rational]) -> Self {
        Self::closed_box(p, p).expect("matching lengths")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn inequalities(&self) -> &[LinearInequality] {
        &self.inequalities
    }

    pub fn tightened(&self) -> &BTreeSet<usize> {
        &self.tightened
    }

    pub fn constraints(&self) -> Vec<Constraint> {
        self.inequalities
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let rel = if self.tightened.contains(&i) {
                    Relation::Eq
                } else if q.strict {
                    Relation::Lt
                } else {
                    Relation::Le
                };
                Constraint::new(q.normal.clone(), q.offset.clone(), rel)
            })
            .collect()
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        self.constraints().iter().all(|c| c.holds_at(x))
    }

    /// Some point of the solution set.
    pub fn witness(&self) -> Option<Vec<Rational>> {
        find_point(self.ambient_dim, &self.constraints())
    }

    pub fn is_empty(&self) -> bool {
        self.witness().is_none()
    }

    fn feasible_with(&self, extra: Constraint) -> bool {
        let mut cs = self.constraints();
        cs.push(extra);
        find_point(self.ambient_dim, &cs).is_some()
    }

    /// Indices of constraints that hold with equality on the whole set
    /// (tightened ones included); `None` for the empty set.
    pub fn implicit_equalities(&self) -> Option<BTreeSet<usize>> {
        let x = self.witness()?;
        let mut eq = self.tightened.clone();
        for (i, q) in self.inequalities.iter().enumerate() {
            if q.strict || eq.contains(&i) {
                continue;
            }
            if dot(&q.normal, &x) < q.offset {
                continue;
            }
            let below = Constraint::new(q.normal.clone(), q.offset.clone(), Relation::Lt);
            if !self.feasible_with(below) {
                eq.insert(i);
            }
        }
        Some(eq)
    }

    pub fn affine_span(&self) -> AffineSubspace {
        match self.implicit_equalities() {
            None => AffineSubspace::empty(self.ambient_dim),
            Some(eq) => AffineSubspace::from_equations(self.ambient_dim, &self.equation_rows(&eq)),
        }
    }

    fn equation_rows(&self, eq: &BTreeSet<usize>) -> Vec<Vec<Rational>> {
        eq.iter()
            .map(|&i| {
                let q = &self.inequalities[i];
                let mut row = q.normal.clone();
                row.push(q.offset.clone());
                row
            })
            .collect()
    }

    pub fn dimension(&self) -> isize {
        match self.implicit_equalities() {
            None => -1,
            Some(eq) => self.dimension_given(&eq),
        }
    }

    /// Dimension of a non-empty polyhedron whose implicit equalities are `eq`.
    fn dimension_given(&self, eq: &BTreeSet<usize>) -> isize {
        let normals: Vec<Vec<Rational>> = eq.iter().map(|&i| self.inequalities[i].normal.clone()).collect();
        (self.ambient_dim - rank(&normals, self.ambient_dim)) as isize
    }

    /// No non-zero recession direction.
    pub fn is_bounded(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let n = self.ambient_dim;
        let cone: Vec<Constraint> = self
            .inequalities
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let rel = if self.tightened.contains(&i) { Relation::Eq } else { Relation::Le };
                Constraint::new(q.normal.clone(), zero(), rel)
            })
            .collect();
        for axis in 0..n {
            for sign in [one(), -one()] {
                let mut cs = cone.clone();
                let mut c = vec![zero(); n];
                c[axis] = -sign.clone();
                cs.push(Constraint::new(c, -one(), Relation::Le));
                if find_point(n, &cs).is_some() {
                    return false;
                }
            }
        }
        true
    }

    /// Relative interior: implicit equalities stay equalities, every other
    /// inequality becomes strict.
    pub fn interior(&self) -> Result<Self> {
        let eq = self.implicit_equalities().ok_or(Error::EmptyPolyhedron)?;
        Ok(self.interior_given(eq))
    }

    /// Relative interior of a non-empty polyhedron whose implicit equalities
    /// are exactly `eq`.
    fn interior_given(&self, eq: BTreeSet<usize>) -> Self {
        let inequalities = self
            .inequalities
            .iter()
            .enumerate()
            .map(|(i, q)| LinearInequality::new(q.normal.clone(), q.offset.clone(), q.strict || !eq.contains(&i)))
            .collect();
        RationalPolyhedron {
            ambient_dim: self.ambient_dim,
            inequalities,
            tightened: eq,
        }
    }

    /// Topological closure: strict inequalities become non-strict.
    pub fn closure(&self) -> Self {
        let mut out = self.clone();
        for q in &mut out.inequalities {
            q.strict = false;
        }
        out
    }

    /// All distinct non-empty faces, `self` included. Faces are returned with
    /// `tightened` set to their full implicit-equality set, largest dimension
    /// first.
    pub fn enumerate_faces(&self) -> Result<Vec<RationalPolyhedron>> {
        Ok(self.enumerate_closed_faces()?.into_iter().map(|f| f.face).collect())
    }

    /// [`Self::enumerate_faces`] with each face's dimension and relative
    /// interior, both read off the closed tightened set.
    pub(crate) fn enumerate_closed_faces(&self) -> Result<Vec<ClosedFace>> {
        let root = self.implicit_equalities().ok_or(Error::EmptyPolyhedron)?;
        let mut seen: BTreeMap<BTreeSet<usize>, RationalPolyhedron> = BTreeMap::new();
        let mut queue = VecDeque::new();
        queue.push_back(root);
        while let Some(key) = queue.pop_front() {
            if seen.contains_key(&key) {
                continue;
            }
            let face = RationalPolyhedron {
                ambient_dim: self.ambient_dim,
                inequalities: self.inequalities.clone(),
                tightened: key.clone(),
            };
            for (i, q) in self.inequalities.iter().enumerate() {
                if q.strict || key.contains(&i) {
                    continue;
                }
                let mut child = face.clone();
                child.tightened.insert(i);
                if let Some(child_key) = child.implicit_equalities() {
                    if !seen.contains_key(&child_key) {
                        queue.push_back(child_key);
                    }
                }
            }
            seen.insert(key, face);
        }
        let mut faces: Vec<ClosedFace> = seen
            .into_values()
            .map(|face| ClosedFace {
                dim: face.dimension_given(&face.tightened) as usize,
                interior: face.interior_given(face.tightened.clone()),
                face,
            })
            .collect();
        faces.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.face.tightened.cmp(&b.face.tightened)));
        Ok(faces)
    }

    /// Vertices of the polyhedron (zero-dimensional faces). Meaningful for
    /// pointed polyhedra; used by volume and closure checks.
    pub(crate) fn vertices(&self) -> Result<Vec<Vec<Rational>>> {
        let mut out: Vec<Vec<Rational>> = self
            .enumerate_faces()?
            .into_iter()
            .filter(|f| f.dimension() == 0)
            .filter_map(|f| f.witness())
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let shift = self.inequalities.len();
        let mut inequalities = self.inequalities.clone();
        inequalities.extend(other.inequalities.iter().cloned());
        let mut tightened = self.tightened.clone();
        tightened.extend(other.tightened.iter().map(|i| i + shift));
        Ok(RationalPolyhedron {
            ambient_dim: self.ambient_dim,
            inequalities,
            tightened,
        }
        .canonical())
    }

    /// Rescales every inequality to a leading coefficient of ±1, removes
    /// exact duplicates and inequalities dominated by a parallel one.
    pub fn canonical(&self) -> Self {
        // normal -> (equalities by offset, best plain inequality)
        let mut groups: BTreeMap<Vec<Rational>, (BTreeSet<Rational>, Option<(Rational, bool)>)> =
            BTreeMap::new();
        let mut contradictory = false;
        for (i, q) in self.inequalities.iter().enumerate() {
            if q.is_trivial() {
                contradictory |= !q.trivially_true();
                continue;
            }
            let mut normal = q.normal.clone();
            let f = normalize_leading(&mut normal);
            let offset = &q.offset * f;
            let entry = groups.entry(normal).or_default();
            if self.tightened.contains(&i) {
                entry.0.insert(offset);
            } else {
                match &mut entry.1 {
                    Some((best, strict)) if offset > *best || (offset == *best && !q.strict) => {
                        let _ = strict;
                    }
                    Some((best, strict)) if offset == *best => *strict = true,
                    slot => *slot = Some((offset, q.strict)),
                }
            }
        }
        if contradictory {
            return Self::empty_set(self.ambient_dim);
        }
        let mut inequalities = Vec::new();
        let mut tightened = BTreeSet::new();
        for (normal, (eqs, plain)) in groups {
            for off in &eqs {
                tightened.insert(inequalities.len());
                inequalities.push(LinearInequality::le(normal.clone(), off.clone()));
            }
            if let Some((off, strict)) = plain {
                let dominated = eqs.iter().any(|e| *e < off || (*e == off && !strict));
                if !dominated {
                    inequalities.push(LinearInequality::new(normal, off, strict));
                }
            }
        }
        RationalPolyhedron {
            ambient_dim: self.ambient_dim,
            inequalities,
            tightened,
        }
    }

    /// `self ⊆ other`, decided by checking that `self` entails every
    /// constraint of `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        if self.is_empty() {
            return true;
        }
        other.inequalities.iter().enumerate().all(|(i, q)| {
            if self.feasible_with(q.violated()) {
                return false;
            }
            if other.tightened.contains(&i) {
                let above = Constraint::new(q.normal.clone(), q.offset.clone(), Relation::Lt);
                return !self.feasible_with(above);
            }
            true
        })
    }

    /// Solution-set equality by mutual entailment.
    pub fn same_set(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Drops inequalities implied by the others. Candidates are tested in
    /// order against the running irredundant set, so each test only involves
    /// the constraints kept so far. Returns the reduced polyhedron and, for
    /// each kept inequality, its index in `self`.
    pub fn remove_redundant(&self) -> (Self, Vec<usize>) {
        if self.is_empty() {
            return (Self::empty_set(self.ambient_dim), Vec::new());
        }
        let all = self.constraints();
        let mut kept: Vec<usize> = self.tightened.iter().copied().collect();
        let is_redundant = |idx: usize, set: &[usize]| {
            let mut cs: Vec<Constraint> =
                set.iter().filter(|&&j| j != idx).map(|&j| all[j].clone()).collect();
            cs.push(self.inequalities[idx].violated());
            find_point(self.ambient_dim, &cs).is_none()
        };
        for i in 0..self.inequalities.len() {
            if self.tightened.contains(&i) || is_redundant(i, &kept) {
                continue;
            }
            kept.push(i);
            let mut j = 0;
            while j < kept.len() {
                let cand = kept[j];
                if cand != i && !self.tightened.contains(&cand) && is_redundant(cand, &kept) {
                    kept.remove(j);
                } else {
                    j += 1;
                }
            }
        }
        kept.sort_unstable();
        let inequalities = kept.iter().map(|&i| self.inequalities[i].clone()).collect();
        let tightened = kept
            .iter()
            .enumerate()
            .filter(|(_, i)| self.tightened.contains(i))
            .map(|(pos, _)| pos)
            .collect();
        (
            RationalPolyhedron {
                ambient_dim: self.ambient_dim,
                inequalities,
                tightened,
            },
            kept,
        )
    }

    /// Indices of non-strict inequalities holding with equality on all of
    /// `subset` (assumed contained in `self`).
    pub fn tight_on(&self, subset: &Self) -> Vec<usize> {
        self.inequalities
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.strict)
            .filter(|(_, q)| {
                let below = Constraint::new(q.normal.clone(), q.offset.clone(), Relation::Lt);
                !subset.feasible_with(below)
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Whether `face` is a face of `self`: it is contained in `self` and
    /// tightening the inequalities tight on it gives back `face`.
    pub fn has_face(&self, face: &Self) -> bool {
        if face.is_empty() || !face.is_subset_of(self) {
            return false;
        }
        let generated = self.clone().with_tightened(self.tight_on(face)).expect("indices in range");
        generated.is_subset_of(face)
    }

    /// Removes a face of `self` (and with it all faces of that face) by
    /// adding the strict form of an inequality that exposes exactly `face`.
    pub fn cut_face(&self, face: &Self) -> Result<Self> {
        let eq = self.implicit_equalities().ok_or(Error::EmptyPolyhedron)?;
        let mut normal = vec![zero(); self.ambient_dim];
        let mut offset = zero();
        let mut any = false;
        for i in self.tight_on(face) {
            if eq.contains(&i) {
                continue;
            }
            let q = &self.inequalities[i];
            any = true;
            for (n, a) in normal.iter_mut().zip(&q.normal) {
                *n += a;
            }
            offset += &q.offset;
        }
        if !any {
            return Ok(Self::empty_set(self.ambient_dim));
        }
        let mut out = self.clone();
        out.inequalities.push(LinearInequality::lt(normal, offset));
        Ok(out)
    }

    /// POLY/1 text: `N m`, then one `a_1 .. a_N rel b` line per inequality.
    /// Tightened inequalities are written as a pair of opposite `<=` lines.
    pub fn to_poly_text(&self) -> String {
        let mut lines = Vec::new();
        let mut push = |normal: &[Rational], rel: &str, offset: &Rational| {
            let mut parts: Vec<String> = normal.iter().map(format_rational).collect();
            parts.push(rel.to_string());
            parts.push(format_rational(offset));
            lines.push(parts.join(" "));
        };
        for (i, q) in self.inequalities.iter().enumerate() {
            push(&q.normal, if q.strict { "<" } else { "<=" }, &q.offset);
            if self.tightened.contains(&i) {
                let neg: Vec<Rational> = q.normal.iter().map(|x| -x).collect();
                push(&neg, "<=", &-q.offset.clone());
            }
        }
        let mut out = format!("{} {}\n", self.ambient_dim, lines.len());
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
        out
    }

    pub fn from_poly_text(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let poly = parse_poly_block(&mut lines)?;
        if let Some((n, _)) = lines.next_content() {
            return Err(Error::parse(n, 1, "trailing content after POLY/1 block"));
        }
        Ok(poly)
    }
}

impl fmt::Display for RationalPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .inequalities
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let lhs: Vec<String> = q.normal.iter().map(format_rational).collect();
                let rel = if self.tightened.contains(&i) {
                    "="
                } else if q.strict {
                    "<"
                } else {
                    "<="
                };
                format!("[{}] {} {}", lhs.join(" "), rel, format_rational(&q.offset))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Line cursor shared by the text formats; skips blank lines and `#`
/// comments and keeps 1-based line numbers for error messages.
pub(crate) struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }

    pub(crate) fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, line) in self.inner.by_ref() {
            let trimmed = line.split('#').next().unwrap_or("").trim();
            if !trimmed.is_empty() {
                return Some((i + 1, line));
            }
        }
        None
    }

    pub(crate) fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next_content()
            .ok_or_else(|| Error::parse(0, 0, format!("unexpected end of input, expected {what}")))
    }
}

/// Splits a line into whitespace-separated tokens with their 1-based column.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub(crate) fn parse_usize(line: usize, (col, tok): (usize, &str)) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, col, format!("expected a non-negative integer, found {tok:?}")))
}

pub(crate) fn parse_rat(line: usize, (col, tok): (usize, &str)) -> Result<Rational> {
    parse_rational(tok).ok_or_else(|| Error::parse(line, col, format!("expected a rational, found {tok:?}")))
}

pub(crate) fn parse_poly_block(lines: &mut Lines<'_>) -> Result<RationalPolyhedron> {
    let (ln, header) = lines.expect("POLY/1 header `N m`")?;
    let toks = tokens(header);
    if toks.len() != 2 {
        return Err(Error::parse(ln, 1, "POLY/1 header must be `N m`"));
    }
    let n = parse_usize(ln, toks[0])?;
    let m = parse_usize(ln, toks[1])?;
    let mut ineqs = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, line) = lines.expect("an inequality line")?;
        let toks = tokens(line);
        if toks.len() != n + 2 {
            let col = toks.last().map(|t| t.0).unwrap_or(1);
            return Err(Error::parse(ln, col, format!("expected {} tokens, found {}", n + 2, toks.len())));
        }
        let normal = toks[..n].iter().map(|&t| parse_rat(ln, t)).collect::<Result<Vec<_>>>()?;
        let strict = match toks[n].1 {
            "<=" => false,
            "<" => true,
            other => {
                return Err(Error::parse(ln, toks[n].0, format!("relation must be `<=` or `<`, found {other:?}")))
            }
        };
        let offset = parse_rat(ln, toks[n + 1])?;
        ineqs.push(LinearInequality::new(normal, offset, strict));
    }
    RationalPolyhedron::new(n, ineqs)
}
