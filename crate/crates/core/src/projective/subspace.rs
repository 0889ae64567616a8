use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyhedra::linalg::{nullspace, rref};
use crate::polyhedra::rational::{dot, format_rational, serde_rational_matrix, Rational};
use crate::polyhedra::AffineSubspace;

/// Linear subspace of P^N given by homogeneous generators in Q^{N+1}; the
/// last coordinate is the chart coordinate `w`. Generators are stored in
/// reduced row echelon form, so equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSubspace", into = "RawSubspace")]
pub struct ProjectiveSubspace {
    ambient_dim: usize,
    generators: Vec<Vec<Rational>>,
    /// Linear forms cutting the subspace out, determined by `generators`.
    forms: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct RawSubspace {
    ambient_dim: usize,
    #[serde(with = "serde_rational_matrix")]
    generators: Vec<Vec<Rational>>,
}

impl TryFrom<RawSubspace> for ProjectiveSubspace {
    type Error = Error;

    fn try_from(raw: RawSubspace) -> Result<Self> {
        ProjectiveSubspace::new(raw.ambient_dim, raw.generators)
    }
}

impl From<ProjectiveSubspace> for RawSubspace {
    fn from(s: ProjectiveSubspace) -> Self {
        RawSubspace {
            ambient_dim: s.ambient_dim,
            generators: s.generators,
        }
    }
}

impl ProjectiveSubspace {
    /// Span of `generators`; dependent or zero vectors are allowed and
    /// dropped.
    pub fn new(ambient_dim: usize, mut generators: Vec<Vec<Rational>>) -> Result<Self> {
        for g in &generators {
            if g.len() != ambient_dim + 1 {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim + 1,
                    found: g.len(),
                });
            }
        }
        rref(&mut generators, ambient_dim + 1);
        let forms = nullspace(&generators, ambient_dim + 1);
        Ok(ProjectiveSubspace {
            ambient_dim,
            generators,
            forms,
        })
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self::new(ambient_dim, Vec::new()).expect("no generators")
    }

    pub fn whole(ambient_dim: usize) -> Self {
        let generators = (0..=ambient_dim)
            .map(|i| (0..=ambient_dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Self::new(ambient_dim, generators).expect("square identity")
    }

    /// Projective completion of an affine subspace: `(p, 1)` for the
    /// basepoint and `(v, 0)` for each direction.
    pub fn completion(affine: &AffineSubspace) -> Self {
        let n = affine.ambient_dim;
        let Some(base) = &affine.basepoint else {
            return Self::empty(n);
        };
        let mut generators = Vec::with_capacity(affine.directions.len() + 1);
        let mut p = base.clone();
        p.push(Rational::one());
        generators.push(p);
        for d in &affine.directions {
            let mut v = d.clone();
            v.push(Rational::zero());
            generators.push(v);
        }
        Self::new(n, generators).expect("lengths match")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    /// Projective dimension; `-1` for the empty subspace.
    pub fn dimension(&self) -> isize {
        self.generators.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        self.forms.iter().all(|f| dot(f, v).is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &ProjectiveSubspace) -> bool {
        other.generators.iter().all(|g| self.contains_vector(g))
    }

    pub fn intersect(&self, other: &ProjectiveSubspace) -> ProjectiveSubspace {
        debug_assert_eq!(self.ambient_dim, other.ambient_dim);
        if self.contains(other) {
            return other.clone();
        }
        if other.contains(self) {
            return self.clone();
        }
        if self.generators.len() <= 1 || other.generators.len() <= 1 {
            return Self::empty(self.ambient_dim);
        }
        let mut forms = self.forms.clone();
        forms.extend(other.forms.iter().cloned());
        let generators = nullspace(&forms, self.ambient_dim + 1);
        Self::new(self.ambient_dim, generators).expect("lengths match")
    }

    pub fn join(&self, other: &ProjectiveSubspace) -> ProjectiveSubspace {
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        Self::new(self.ambient_dim, generators).expect("lengths match")
    }
}

impl fmt::Display for ProjectiveSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let point = |g: &Vec<Rational>| format!("({})", g.iter().map(format_rational).collect::<Vec<_>>().join(" : "));
        match self.generators.len() {
            0 => write!(f, "∅"),
            1 => write!(f, "{}", point(&self.generators[0])),
            _ => write!(f, "<{}>", self.generators.iter().map(point).collect::<Vec<_>>().join(", ")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::rational::int;

    fn sub(n: usize, rows: &[&[i64]]) -> ProjectiveSubspace {
        ProjectiveSubspace::new(n, rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn parallel_lines_meet_at_infinity() {
        // y = 0 and y = 1 in the plane
        let bottom = sub(2, &[&[0, 0, 1], &[1, 0, 0]]);
        let top = sub(2, &[&[0, 1, 1], &[1, 0, 0]]);
        let meet = bottom.intersect(&top);
        assert_eq!(meet, sub(2, &[&[1, 0, 0]]));
        assert_eq!(meet.dimension(), 0);
        assert_eq!(meet.to_string(), "(1 : 0 : 0)");
    }

    #[test]
    fn canonical_and_containment() {
        let a = sub(2, &[&[1, 1, 1], &[2, 0, 0]]);
        let b = sub(2, &[&[0, 1, 1], &[1, 0, 0], &[3, 1, 1]]);
        assert_eq!(a, b);
        assert!(ProjectiveSubspace::whole(2).contains(&a));
        assert!(a.contains(&sub(2, &[&[5, 1, 1]])));
        assert!(!a.contains(&ProjectiveSubspace::whole(2)));
        assert!(a.contains(&ProjectiveSubspace::empty(2)));
        assert_eq!(ProjectiveSubspace::empty(2).dimension(), -1);
        assert_eq!(a.join(&sub(2, &[&[0, 0, 1]])), ProjectiveSubspace::whole(2));
    }

    #[test]
    fn skew_lines_in_three_space() {
        let x_axis = sub(3, &[&[0, 0, 0, 1], &[1, 0, 0, 0]]);
        let shifted = sub(3, &[&[0, 0, 1, 1], &[0, 1, 0, 0]]);
        assert!(x_axis.intersect(&shifted).is_empty());
    }

    #[test]
    fn json_round_trip() {
        let s = sub(2, &[&[1, 0, 0]]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<ProjectiveSubspace>(&text).unwrap(), s);
        assert!(serde_json::from_str::<ProjectiveSubspace>(r#"{"ambient_dim":2,"generators":[["1"]]}"#).is_err());
    }
}
