//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use super::rational::Rational;

/// Reduces `rows` (each of length `cols`) to reduced row echelon form in
/// place, dropping zero rows. Returns the pivot column of each remaining row.
pub fn rref(rows: &mut Vec<Vec<Rational>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rational>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, cols).len()
}

/// Basis of `{x : rows * x = 0}`, one vector per free column, in canonical
/// form (the free coordinate is one, the other free coordinates zero).
pub fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, cols);
    nullspace_from_rref(&m, &pivots, cols)
}

fn nullspace_from_rref(m: &[Vec<Rational>], pivots: &[usize], cols: usize) -> Vec<Vec<Rational>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in m.iter().zip(pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solution set of `A x = b` as (particular solution, nullspace basis), or
/// `None` when the system is inconsistent. `eqs` holds rows `[a_1..a_n, b]`.
pub fn solve_affine(eqs: &[Vec<Rational>], n: usize) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let mut m = eqs.to_vec();
    let pivots = rref(&mut m, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut base = vec![Rational::zero(); n];
    for (row, &p) in m.iter().zip(&pivots) {
        base[p] = row[n].clone();
    }
    let coeffs: Vec<Vec<Rational>> = m.iter().map(|r| r[..n].to_vec()).collect();
    Some((base, nullspace_from_rref(&coeffs, &pivots, n)))
}

/// Determinant by fraction-exact elimination.
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut m = matrix.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let pivot_row = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * p;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a, 3), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let s: Rational = row.iter().zip(&ns[0]).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn affine_solve_detects_inconsistency() {
        let eqs = m(&[&[1, 1, 2], &[1, 1, 3]]);
        assert!(solve_affine(&eqs, 2).is_none());
        let eqs = m(&[&[2, 0, 1]]);
        let (base, dirs) = solve_affine(&eqs, 2).unwrap();
        assert_eq!(base, vec![rat(1, 2), int(0)]);
        assert_eq!(dirs, vec![vec![int(0), int(1)]]);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&m(&[&[2, 1], &[1, 3]])), int(5));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), int(0));
    }
}
