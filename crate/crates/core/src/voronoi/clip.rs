use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::{is_simple_configuration, voronoi_complex, SiteSet};
use crate::complex::{FaceId, PolyhedralComplex};
use crate::error::{Error, Result};
use crate::polyhedra::{parse_poly_block, parse_usize, tokens, Lines, Rational, RationalPolyhedron};

/// Finite union of non-empty bounded polyhedra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralRegion {
    ambient_dim: usize,
    pieces: Vec<RationalPolyhedron>,
}

impl PolyhedralRegion {
    pub fn new(pieces: Vec<RationalPolyhedron>) -> Result<Self> {
        let ambient_dim = pieces.first().ok_or(Error::InvalidRegion)?.ambient_dim();
        for p in &pieces {
            if p.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: p.ambient_dim(),
                });
            }
            if p.is_empty() || !p.is_bounded() {
                return Err(Error::InvalidRegion);
            }
        }
        Ok(PolyhedralRegion { ambient_dim, pieces })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn pieces(&self) -> &[RationalPolyhedron] {
        &self.pieces
    }

    pub fn meets(&self, p: &RationalPolyhedron) -> Result<bool> {
        for piece in &self.pieces {
            if !piece.intersect(p)?.is_empty() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// RGN/1: a line with the piece count, then that many POLY/1 blocks.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.pieces.len());
        for p in &self.pieces {
            out.push_str(&p.to_poly_text());
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (ln, header) = lines.expect("RGN/1 piece count")?;
        let toks = tokens(header);
        if toks.len() != 1 {
            return Err(Error::parse(ln, 1, "RGN/1 header must be a single count"));
        }
        let count = parse_usize(ln, toks[0])?;
        let mut pieces = Vec::with_capacity(count);
        for _ in 0..count {
            pieces.push(parse_poly_block(&mut lines)?);
        }
        if let Some((ln, _)) = lines.next_content() {
            return Err(Error::parse(ln, 1, "trailing content after RGN/1 pieces"));
        }
        Self::new(pieces)
    }
}

/// `V(Y) − W(Y)` where `W(Y)` collects the Voronoi faces missing `s`.
pub fn clipped_complex(y: &SiteSet, s: &PolyhedralRegion) -> Result<PolyhedralComplex> {
    if y.ambient_dim() != s.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: y.ambient_dim(),
            found: s.ambient_dim(),
        });
    }
    let report = is_simple_configuration(y);
    if !report.simple {
        return Err(Error::NonSimpleConfiguration {
            witness: report.witness.unwrap_or_default(),
        });
    }
    let v = voronoi_complex(y)?;
    let mut outside: BTreeSet<FaceId> = BTreeSet::new();
    for (&id, face) in v.complex.faces() {
        if !s.meets(&face.poly)? {
            outside.insert(id);
        }
    }
    let clipped = v.complex.difference(&outside)?;
    let check = clipped.is_simple();
    if !check.simple {
        return Err(Error::NonSimpleComplex(check.witness));
    }
    Ok(clipped)
}

/// Points of `(eps Z)^N` within L∞ distance `eps` of the region.
pub fn dense_lattice(s: &PolyhedralRegion, eps: &Rational) -> Result<SiteSet> {
    if !eps.is_positive() {
        return Err(Error::InvalidBound);
    }
    let n = s.ambient_dim();
    let mut lo: Vec<Option<Rational>> = vec![None; n];
    let mut hi: Vec<Option<Rational>> = vec![None; n];
    for piece in s.pieces() {
        for v in piece.closure().vertices()? {
            for i in 0..n {
                if lo[i].as_ref().is_none_or(|l| v[i] < *l) {
                    lo[i] = Some(v[i].clone());
                }
                if hi[i].as_ref().is_none_or(|h| v[i] > *h) {
                    hi[i] = Some(v[i].clone());
                }
            }
        }
    }
    let ranges: Vec<(BigInt, BigInt)> = (0..n)
        .map(|i| {
            let l = (lo[i].clone().expect("bounded piece has vertices") - eps) / eps;
            let h = (hi[i].clone().expect("bounded piece has vertices") + eps) / eps;
            (ceil(&l), h.floor().to_integer())
        })
        .collect();
    let mut points = Vec::new();
    let mut idx: Vec<BigInt> = ranges.iter().map(|r| r.0.clone()).collect();
    'outer: loop {
        let x: Vec<Rational> = idx.iter().map(|k| Rational::from_integer(k.clone()) * eps).collect();
        let lo_box: Vec<Rational> = x.iter().map(|c| c - eps).collect();
        let hi_box: Vec<Rational> = x.iter().map(|c| c + eps).collect();
        let near = RationalPolyhedron::closed_box(&lo_box, &hi_box)?;
        if s.meets(&near)? {
            points.push(x);
        }
        for i in (0..n).rev() {
            if idx[i] < ranges[i].1 {
                idx[i] += 1;
                for (j, r) in ranges.iter().enumerate().skip(i + 1) {
                    idx[j] = r.0.clone();
                }
                continue 'outer;
            }
        }
        break;
    }
    SiteSet::new(n, points)
}

fn ceil(r: &Rational) -> BigInt {
    let (q, rem) = r.numer().div_rem(r.denom());
    if rem.is_positive() {
        q + 1
    } else {
        q
    }
}
