//! Dual complexes of normal-crossing strata and the two blow-up moves on
//! them.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::complex::{is_subset, SimplicialComplex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualMoveKind {
    /// Barycentric subdivision of the target simplex, extended to the
    /// simplices containing it.
    Barycentric,
    /// A new vertex joined to every simplex of the closed star of the target.
    ConeOverStar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualComplexMove {
    pub kind: DualMoveKind,
    pub target: Vec<usize>,
}

pub fn dual_move(k: &SimplicialComplex, mv: &DualComplexMove) -> Result<SimplicialComplex> {
    let mut target = mv.target.clone();
    target.sort_unstable();
    target.dedup();
    if target.is_empty() || !k.contains(&target) {
        return Err(Error::MissingSimplex(target));
    }
    match mv.kind {
        DualMoveKind::Barycentric => Ok(barycentric(k, &target)),
        DualMoveKind::ConeOverStar => {
            let apex = k.vertex_count();
            let star = k.closed_star(&target)?;
            let mut generators: Vec<Vec<usize>> = k.maximal_simplices();
            generators.extend(star.into_iter().map(|mut s| {
                s.push(apex);
                s
            }));
            let mut labels = k.labels().to_vec();
            labels.push(format!("cone{}", label_of(k, &target)));
            SimplicialComplex::new(apex + 1, generators)?.with_labels(labels)
        }
    }
}

fn label_of(k: &SimplicialComplex, simplex: &[usize]) -> String {
    format!("[{}]", simplex.iter().map(|&v| k.labels()[v].as_str()).join(","))
}

/// Stellar subdivisions at every face of `target` of dimension at least one,
/// largest first.
fn barycentric(k: &SimplicialComplex, target: &[usize]) -> SimplicialComplex {
    let mut faces: Vec<Vec<usize>> = (2..=target.len())
        .rev()
        .flat_map(|size| target.iter().copied().combinations(size))
        .collect();
    faces.sort_by_key(|f| std::cmp::Reverse(f.len()));
    let mut current = k.clone();
    for face in faces {
        current = stellar(&current, &face);
    }
    current
}

fn stellar(k: &SimplicialComplex, face: &[usize]) -> SimplicialComplex {
    let b = k.vertex_count();
    let mut generators = Vec::new();
    for rho in k.maximal_simplices() {
        if is_subset(face, &rho) {
            for &v in face {
                let mut s: Vec<usize> = rho.iter().copied().filter(|&x| x != v).collect();
                s.push(b);
                generators.push(s);
            }
        } else {
            generators.push(rho);
        }
    }
    let mut labels = k.labels().to_vec();
    labels.push(format!("b{}", label_of(k, face)));
    SimplicialComplex::new(b + 1, generators)
        .and_then(|s| s.with_labels(labels))
        .expect("vertices in range")
}

/// Dual complex of a divisor with the given components. `strata` maps a set
/// of at least two component labels to the number of connected components
/// of their common intersection; missing sets count as empty. With all
/// counts at most one the result has one vertex per component; otherwise it
/// is the order complex of the stratum components, where copy `t` over `J`
/// lies on copy `min(t, c(J') - 1)` over each `J' ⊂ J`.
pub fn dual_complex(components: &[String], strata: &[(Vec<String>, usize)]) -> Result<SimplicialComplex> {
    let index: BTreeMap<&str, usize> = components.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    if index.len() != components.len() {
        return Err(Error::Inconsistent("duplicate component label".into()));
    }
    let mut counts: BTreeMap<Vec<usize>, usize> = (0..components.len()).map(|i| (vec![i], 1)).collect();
    for (labels, count) in strata {
        let mut set = labels
            .iter()
            .map(|l| index.get(l.as_str()).copied().ok_or_else(|| Error::UnknownLabel(l.clone())))
            .collect::<Result<Vec<_>>>()?;
        set.sort_unstable();
        set.dedup();
        if set.len() == 1 {
            if *count != 1 {
                return Err(Error::Inconsistent(format!("component {} must count once", labels[0])));
            }
            continue;
        }
        if set.is_empty() {
            return Err(Error::Inconsistent("empty stratum".into()));
        }
        if *count > 0 {
            counts.insert(set, *count);
        }
    }
    for set in counts.keys() {
        for size in 2..set.len() {
            for sub in set.iter().copied().combinations(size) {
                if !counts.contains_key(&sub) {
                    return Err(Error::StrataNotDownwardClosed(set.iter().map(|&i| components[i].clone()).collect()));
                }
            }
        }
    }
    let name = |set: &[usize]| set.iter().map(|&i| components[i].as_str()).join("&");
    if counts.values().all(|&c| c == 1) {
        let generators: Vec<&Vec<usize>> = counts.keys().collect();
        return SimplicialComplex::new(components.len(), generators)?.with_labels(components.to_vec());
    }
    let cells: Vec<(Vec<usize>, usize)> = counts
        .iter()
        .flat_map(|(set, &c)| (0..c).map(move |t| (set.clone(), t)))
        .collect();
    let position: BTreeMap<&(Vec<usize>, usize), usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut below: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (i, (set, t)) in cells.iter().enumerate() {
        for size in 1..set.len() {
            for sub in set.iter().copied().combinations(size) {
                let copy = (*t).min(counts[&sub] - 1);
                below.insert((position[&(sub, copy)], i));
            }
        }
    }
    loop {
        let extra: Vec<(usize, usize)> = below
            .iter()
            .flat_map(|&(a, b)| below.iter().filter(move |&&(c, _)| c == b).map(move |&(_, d)| (a, d)))
            .filter(|p| !below.contains(p))
            .collect();
        if extra.is_empty() {
            break;
        }
        below.extend(extra);
    }
    let labels = cells.iter().map(|(set, t)| format!("{}#{}", name(set), t)).collect();
    SimplicialComplex::order_complex(cells.len(), |a, b| below.contains(&(a, b))).with_labels(labels)
}
