//! Integer matrices, Smith normal form with unimodular certificates, and
//! fraction-free rank.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::polyhedra::linalg::determinant;
use crate::polyhedra::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(cols: usize, data: Vec<Vec<BigInt>>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
    }

    pub fn row_data(&self) -> &[Vec<BigInt>] {
        &self.data
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(Zero::is_zero)
    }

    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let m: Vec<Vec<Rational>> = self
            .data
            .iter()
            .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect();
        determinant(&m).to_integer()
    }

    /// Rank over Q by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            for i in r + 1..self.rows {
                for j in c + 1..self.cols {
                    let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                    m[i][j] = v / &prev;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            r += 1;
            if r == self.rows {
                break;
            }
        }
        r
    }
}

/// `P * M * Q = D` with `D` diagonal, diagonal entries `d_1 | d_2 | ...`
/// followed by zeros, `P` and `Q` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub p: IntMatrix,
    pub q: IntMatrix,
    pub d: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Re-multiplies the certificate and checks the diagonal and
    /// divisibility conditions.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        if self.p.mul(m).mul(&self.q) != self.d {
            return false;
        }
        if !self.p.determinant().abs().is_one() || !self.q.determinant().abs().is_one() {
            return false;
        }
        for i in 0..self.d.rows {
            for j in 0..self.d.cols {
                let v = self.d.get(i, j);
                let expected = if i == j && i < self.invariant_factors.len() {
                    self.invariant_factors[i].clone()
                } else {
                    BigInt::zero()
                };
                if *v != expected {
                    return false;
                }
            }
        }
        self.invariant_factors
            .windows(2)
            .all(|w| w[0].is_positive() && (&w[1] % &w[0]).is_zero())
            && self.invariant_factors.iter().all(|d| d.is_positive())
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut d = m.clone();
    let mut p = IntMatrix::identity(m.rows);
    let mut q = IntMatrix::identity(m.cols);
    let factors = reduce(&mut d, Some((&mut p, &mut q)));
    SmithForm {
        invariant_factors: factors,
        p,
        q,
        d,
    }
}

/// Non-zero invariant factors only, without transforms.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut d = m.clone();
    reduce(&mut d, None)
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    m.data.swap(a, b);
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in &mut m.data {
        row.swap(a, b);
    }
}

/// row_a += f * row_b
fn add_row(m: &mut IntMatrix, a: usize, b: usize, f: &BigInt) {
    for j in 0..m.cols {
        if !m.data[b][j].is_zero() {
            let v = &m.data[b][j] * f;
            m.data[a][j] += v;
        }
    }
}

/// col_a += f * col_b
fn add_col(m: &mut IntMatrix, a: usize, b: usize, f: &BigInt) {
    for row in &mut m.data {
        if !row[b].is_zero() {
            let v = &row[b] * f;
            row[a] += v;
        }
    }
}

fn negate_row(m: &mut IntMatrix, a: usize) {
    for x in &mut m.data[a] {
        *x = -x.clone();
    }
}

/// Diagonalizes `d` in place, recording row operations in `P` and column
/// operations in `Q`. Pivot rule: smallest absolute value, first in
/// row-major order.
fn reduce(d: &mut IntMatrix, mut transforms: Option<(&mut IntMatrix, &mut IntMatrix)>) -> Vec<BigInt> {
    let (rows, cols) = (d.rows, d.cols);
    let mut factors = Vec::new();
    for t in 0..rows.min(cols) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = &d.data[i][j];
                if !v.is_zero() && pivot.is_none_or(|(pi, pj)| v.abs() < d.data[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        let row_swap = |d: &mut IntMatrix, a: usize, b: usize, tr: &mut Option<(&mut IntMatrix, &mut IntMatrix)>| {
            if a != b {
                swap_rows(d, a, b);
                if let Some((p, _)) = tr {
                    swap_rows(p, a, b);
                }
            }
        };
        row_swap(d, t, pi, &mut transforms);
        if pj != t {
            swap_cols(d, t, pj);
            if let Some((_, q)) = &mut transforms {
                swap_cols(q, t, pj);
            }
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if d.data[i][t].is_zero() {
                    continue;
                }
                let f = -d.data[i][t].div_floor(&d.data[t][t]);
                add_row(d, i, t, &f);
                if let Some((p, _)) = &mut transforms {
                    add_row(p, i, t, &f);
                }
                if !d.data[i][t].is_zero() {
                    row_swap(d, t, i, &mut transforms);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if d.data[t][j].is_zero() {
                    continue;
                }
                let f = -d.data[t][j].div_floor(&d.data[t][t]);
                add_col(d, j, t, &f);
                if let Some((_, q)) = &mut transforms {
                    add_col(q, j, t, &f);
                }
                if !d.data[t][j].is_zero() {
                    swap_cols(d, t, j);
                    if let Some((_, q)) = &mut transforms {
                        swap_cols(q, t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let offending = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !(&d.data[i][j] % &d.data[t][t]).is_zero())
            });
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    add_row(d, t, i, &one);
                    if let Some((p, _)) = &mut transforms {
                        add_row(p, t, i, &one);
                    }
                }
                None => break,
            }
        }
        if d.data[t][t].is_negative() {
            negate_row(d, t);
            if let Some((p, _)) = &mut transforms {
                negate_row(p, t);
            }
        }
        factors.push(d.data[t][t].clone());
    }
    factors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn diag_two_three() {
        let m = IntMatrix::from_i64(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariant_factors, ints(&[1, 6]));
        assert!(s.verify(&m));
    }

    #[test]
    fn identity_and_zero() {
        let id = IntMatrix::identity(4);
        assert_eq!(smith_normal_form(&id).invariant_factors, ints(&[1, 1, 1, 1]));
        let z = IntMatrix::zeros(3, 2);
        let s = smith_normal_form(&z);
        assert!(s.invariant_factors.is_empty());
        assert!(s.verify(&z));
    }

    #[test]
    fn empty_shapes() {
        let m = IntMatrix::zeros(0, 3);
        let s = smith_normal_form(&m);
        assert!(s.verify(&m));
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn bareiss_rank() {
        let m = IntMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(invariant_factors(&m).len(), 2);
    }
}
