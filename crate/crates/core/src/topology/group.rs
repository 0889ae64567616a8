//! Finite group presentations: edge-path presentations of simplicial
//! complexes, abelianization, a small Tietze simplifier, the GRP/1 text form
//! and a simplicial model of the presentation complex.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use super::snf::{invariant_factors, IntMatrix};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::polyhedra::{tokens, Lines};

/// A letter is a non-zero integer: `i` stands for generator `x_i`
/// (1-based), `-i` for its inverse.
pub type Word = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupPresentation {
    generators: usize,
    relators: Vec<Word>,
}

fn bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
}

/// Finitely generated abelian group `Z^free_rank ⊕ ⊕ Z/t_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(serialize_with = "bigints")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationStats {
    pub euler_characteristic: i64,
    pub balanced: bool,
}

pub fn free_reduce(word: &[i64]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &x in word {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn cyclic_reduce(word: &[i64]) -> Word {
    let mut w = free_reduce(word);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

fn inverse(word: &[i64]) -> Word {
    word.iter().rev().map(|x| -x).collect()
}

impl GroupPresentation {
    /// Relators are freely reduced; empty ones are dropped.
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            for &x in r {
                let g = x.unsigned_abs() as usize;
                if x == 0 || g > generators {
                    return Err(Error::GeneratorOutOfRange {
                        index: g,
                        count: generators,
                    });
                }
            }
        }
        let relators = relators
            .iter()
            .map(|r| free_reduce(r))
            .filter(|r| !r.is_empty())
            .collect();
        Ok(GroupPresentation { generators, relators })
    }

    /// `⟨x_1..x_4 | x_i x_i x_{i+1} x_i^-1 x_{i+1}^-1⟩`, indices mod 4.
    pub fn higman() -> Self {
        let relators = (1..=4i64)
            .map(|i| {
                let j = i % 4 + 1;
                vec![i, i, j, -i, -j]
            })
            .collect();
        Self::new(4, relators).expect("valid generators")
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Exponent-sum matrix (one row per relator).
    pub fn relation_matrix(&self) -> IntMatrix {
        let rows = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::from(0); self.generators];
                for &x in r {
                    row[x.unsigned_abs() as usize - 1] += x.signum();
                }
                row
            })
            .collect();
        IntMatrix::from_rows(self.generators, rows)
    }

    pub fn abelianization(&self) -> AbelianGroup {
        let factors = invariant_factors(&self.relation_matrix());
        AbelianGroup {
            free_rank: self.generators - factors.len(),
            torsion: factors.into_iter().filter(|f| !f.is_one()).collect(),
        }
    }

    /// Euler characteristic `1 - g + r` of the one-vertex presentation
    /// complex, and whether `g = r`.
    pub fn stats(&self) -> PresentationStats {
        PresentationStats {
            euler_characteristic: 1 - self.generators as i64 + self.relators.len() as i64,
            balanced: self.generators == self.relators.len(),
        }
    }

    /// Free and cyclic reduction, removal of generators killed by a
    /// one-letter relator, and elimination of a generator occurring exactly
    /// once in some relator. Does not decide triviality in general.
    pub fn simplify(&self) -> GroupPresentation {
        let mut gens = self.generators;
        let mut rels: Vec<Word> = self.relators.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty()).collect();
        let max_len = 4 * self.relators.iter().map(Vec::len).sum::<usize>().max(16);
        loop {
            rels = rels.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty()).collect();
            rels.sort();
            rels.dedup();
            // find a relator r = u g^e w with g occurring once in r
            let mut pick = None;
            for (ri, r) in rels.iter().enumerate() {
                let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
                for &x in r {
                    *counts.entry(x.unsigned_abs()).or_default() += 1;
                }
                if let Some((&g, _)) = counts.iter().find(|(_, &c)| c == 1) {
                    pick = Some((ri, g as i64));
                    break;
                }
            }
            let Some((ri, g)) = pick else { break };
            let r = rels.remove(ri);
            let pos = r.iter().position(|x| x.abs() == g).expect("occurs once");
            // g^e = u^-1 w^-1, so g = (u^-1 w^-1)^e
            let mut value = inverse(&r[..pos]);
            value.extend(inverse(&r[pos + 1..]));
            if r[pos] < 0 {
                value = inverse(&value);
            }
            let value = free_reduce(&value);
            let substituted: Vec<Word> = rels
                .iter()
                .map(|w| {
                    let mut out = Vec::new();
                    for &x in w {
                        if x == g {
                            out.extend(value.iter().copied());
                        } else if x == -g {
                            out.extend(inverse(&value));
                        } else {
                            out.push(x);
                        }
                    }
                    free_reduce(&out)
                })
                .collect();
            if substituted.iter().any(|w| w.len() > max_len) {
                rels.insert(ri, r);
                break;
            }
            // renumber generators above g
            rels = substituted
                .into_iter()
                .map(|w| w.into_iter().map(|x| if x.abs() > g { x - x.signum() } else { x }).collect())
                .collect();
            gens -= 1;
        }
        GroupPresentation {
            generators: gens,
            relators: rels,
        }
    }

    /// GRP/1: `gens g`, then one relator per line written with `x1 .. xg`,
    /// optionally raised to an integer power (`x2^-1`, `x1^3`).
    pub fn to_text(&self) -> String {
        let mut out = format!("gens {}\n", self.generators);
        for r in &self.relators {
            let letters: Vec<String> = r
                .iter()
                .map(|&x| if x > 0 { format!("x{x}") } else { format!("x{}^-1", -x) })
                .collect();
            out.push_str(&letters.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (ln, header) = lines.expect("GRP/1 header `gens g`")?;
        let toks = tokens(header);
        if toks.len() != 2 || toks[0].1 != "gens" {
            return Err(Error::parse(ln, 1, "GRP/1 header must be `gens g`"));
        }
        let generators: usize = toks[1]
            .1
            .parse()
            .map_err(|_| Error::parse(ln, toks[1].0, "generator count must be a non-negative integer"))?;
        let mut relators = Vec::new();
        while let Some((ln, line)) = lines.next_content() {
            let mut word = Vec::new();
            for (col, tok) in tokens(line) {
                let (name, power) = match tok.split_once('^') {
                    Some((n, p)) => {
                        let p: i64 = p.parse().map_err(|_| Error::parse(ln, col, format!("bad exponent in {tok:?}")))?;
                        (n, p)
                    }
                    None => (tok, 1),
                };
                let index: i64 = name
                    .strip_prefix('x')
                    .and_then(|n| n.parse().ok())
                    .filter(|&i: &i64| i >= 1)
                    .ok_or_else(|| Error::parse(ln, col, format!("expected a generator x1..x{generators}, found {tok:?}")))?;
                if index as usize > generators {
                    return Err(Error::parse(ln, col, format!("generator {name} exceeds count {generators}")));
                }
                let letter = if power < 0 { -index } else { index };
                word.extend(std::iter::repeat_n(letter, power.unsigned_abs() as usize));
            }
            relators.push(word);
        }
        Self::new(generators, relators)
    }

    /// Simplicial model of the presentation complex. Each generator loop is
    /// a triangle boundary `v, p_g, q_g`; each relator of length `L` is a disk
    /// whose boundary ring of `3L` vertices follows the loops, joined by a
    /// collar to an inner ring of `3L` fresh vertices coned to a centre.
    pub fn to_complex(&self) -> SimplicialComplex {
        let g = self.generators;
        let loop_vertices = |x: i64| {
            let i = x.unsigned_abs() as usize - 1;
            let (p, q) = (1 + 2 * i, 2 + 2 * i);
            if x > 0 {
                [0, p, q]
            } else {
                [0, q, p]
            }
        };
        let mut next = 1 + 2 * g;
        let mut simplices: Vec<Vec<usize>> = Vec::new();
        for i in 0..g {
            let (p, q) = (1 + 2 * i, 2 + 2 * i);
            simplices.extend([vec![0, p], vec![p, q], vec![q, 0]]);
        }
        for r in &self.relators {
            let ring: Vec<usize> = r.iter().flat_map(|&x| loop_vertices(x)).collect();
            let m = ring.len();
            let inner: Vec<usize> = (next..next + m).collect();
            let centre = next + m;
            next = centre + 1;
            for i in 0..m {
                let j = (i + 1) % m;
                simplices.push(vec![ring[i], ring[j], inner[i]]);
                simplices.push(vec![ring[j], inner[i], inner[j]]);
                simplices.push(vec![inner[i], inner[j], centre]);
            }
        }
        SimplicialComplex::new(next, simplices).expect("vertices allocated in range")
    }
}

/// Edge-path presentation of `π1` from a breadth-first spanning tree rooted
/// at vertex 0: non-tree edges generate and triangles relate.
pub fn fundamental_group(k: &SimplicialComplex) -> Result<GroupPresentation> {
    if k.vertex_count() == 0 || !k.is_connected() {
        return Err(Error::Disconnected);
    }
    let edges: Vec<(usize, usize)> = k.simplices_of_dim(1).iter().map(|e| (e[0], e[1])).collect();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); k.vertex_count()];
    for &(a, b) in &edges {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let mut tree: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut seen = vec![false; k.vertex_count()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                tree.insert((v.min(w), v.max(w)));
                queue.push_back(w);
            }
        }
    }
    let generator: BTreeMap<(usize, usize), i64> = edges
        .iter()
        .filter(|e| !tree.contains(e))
        .enumerate()
        .map(|(i, &e)| (e, i as i64 + 1))
        .collect();
    let letter = |a: usize, b: usize| generator.get(&(a, b)).copied();
    let relators = k
        .simplices_of_dim(2)
        .iter()
        .map(|t| {
            let mut w = Vec::new();
            w.extend(letter(t[0], t[1]));
            w.extend(letter(t[1], t[2]));
            w.extend(letter(t[0], t[2]).map(|x| -x));
            w
        })
        .collect();
    GroupPresentation::new(generator.len(), relators)
}
