use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// Abstract finite simplicial complex on vertices `0..vertex_count`. Every
/// vertex is a 0-simplex; all non-empty faces are stored explicitly as
/// sorted vertex lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    simplices: BTreeSet<Vec<usize>>,
}

impl SimplicialComplex {
    /// Closure of `generators` under taking non-empty subsets.
    pub fn new<I, S>(vertex_count: usize, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let mut simplices: BTreeSet<Vec<usize>> = (0..vertex_count).map(|v| vec![v]).collect();
        for g in generators {
            let mut s = g.as_ref().to_vec();
            s.sort_unstable();
            s.dedup();
            if let Some(&v) = s.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    count: vertex_count,
                });
            }
            insert_closed(&mut simplices, &s);
        }
        Ok(SimplicialComplex {
            labels: (0..vertex_count).map(|v| v.to_string()).collect(),
            simplices,
        })
    }

    /// The full simplex on `n + 1` vertices with all its faces.
    pub fn full_simplex(n: usize) -> Self {
        Self::new(n + 1, [(0..=n).collect::<Vec<_>>()]).expect("vertices in range")
    }

    /// The boundary of the `n`-simplex, a triangulated `(n-1)`-sphere.
    pub fn simplex_boundary(n: usize) -> Self {
        let facets = (0..=n).map(|skip| (0..=n).filter(|&v| v != skip).collect::<Vec<_>>());
        Self::new(n + 1, facets).expect("vertices in range")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: self.vertex_count(),
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.simplices.iter()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        let mut s = simplex.to_vec();
        s.sort_unstable();
        s.dedup();
        self.simplices.contains(&s)
    }

    /// −1 for the complex with no vertices.
    pub fn dimension(&self) -> isize {
        self.simplices.iter().map(|s| s.len() as isize - 1).max().unwrap_or(-1)
    }

    /// Simplices of dimension `k`, in lexicographic order.
    pub fn simplices_of_dim(&self, k: usize) -> Vec<&Vec<usize>> {
        self.simplices.iter().filter(|s| s.len() == k + 1).collect()
    }

    /// Number of simplices per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = vec![0; (self.dimension() + 1).max(0) as usize];
        for s in &self.simplices {
            out[s.len() - 1] += 1;
        }
        out
    }

    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        self.simplices
            .iter()
            .filter(|s| {
                !self
                    .simplices
                    .iter()
                    .any(|t| t.len() > s.len() && is_subset(s, t))
            })
            .cloned()
            .collect()
    }

    /// Every simplex having `simplex` as a face, together with all their faces.
    pub fn closed_star(&self, simplex: &[usize]) -> Result<BTreeSet<Vec<usize>>> {
        let mut target = simplex.to_vec();
        target.sort_unstable();
        if !self.simplices.contains(&target) {
            return Err(Error::MissingSimplex(target));
        }
        let mut out = BTreeSet::new();
        for s in self.simplices.iter().filter(|s| is_subset(&target, s)) {
            insert_closed(&mut out, s);
        }
        Ok(out)
    }

    /// Connected components of the 1-skeleton, each as a sorted vertex list.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], v: usize) -> usize {
            let mut r = v;
            while parent[r] != r {
                r = parent[r];
            }
            let mut v = v;
            while parent[v] != r {
                let next = parent[v];
                parent[v] = r;
                v = next;
            }
            r
        }
        for e in self.simplices_of_dim(1) {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// True iff this is the face complex of a single simplex on all vertices.
    pub fn is_full_simplex(&self) -> bool {
        let all: Vec<usize> = (0..self.vertex_count()).collect();
        !all.is_empty() && self.simplices.contains(&all)
    }

    /// Order complex of a finite poset on `0..n` given by its strict
    /// relation `less(a, b)`: one simplex per chain.
    pub fn order_complex(n: usize, less: impl Fn(usize, usize) -> bool) -> Self {
        let mut chains: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut frontier: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        while let Some(chain) = frontier.pop() {
            let top = *chain.last().expect("non-empty chain");
            for next in 0..n {
                if less(top, next) {
                    let mut longer = chain.clone();
                    longer.push(next);
                    frontier.push(longer);
                }
            }
            let mut sorted = chain;
            sorted.sort_unstable();
            chains.insert(sorted);
        }
        SimplicialComplex {
            labels: (0..n).map(|v| v.to_string()).collect(),
            simplices: chains,
        }
    }
}

pub(crate) fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

fn insert_closed(set: &mut BTreeSet<Vec<usize>>, simplex: &[usize]) {
    if simplex.is_empty() || set.contains(simplex) {
        return;
    }
    let k = simplex.len();
    for mask in 1u64..(1u64 << k) {
        let sub: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| simplex[i]).collect();
        set.insert(sub);
    }
}
