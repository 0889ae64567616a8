//! Exact feasibility for mixed strict / non-strict / equality systems.
//!
//! Equalities are eliminated first by parametrizing their solution set; the
//! remaining inequalities go through Fourier–Motzkin elimination with
//! strictness tracking. Rows are cleared of denominators and kept with
//! coprime integer entries, and parallel rows are merged, which keeps the growth in
//! check for the small systems this crate works with. A witness point is
//! recovered by back-substitution through the stored elimination stages.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::solve_affine;
use super::rational::{dot, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Lt,
    Eq,
}

/// `coeffs · x  (<= | < | =)  rhs`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub rel: Relation,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational, rel: Relation) -> Self {
        Constraint { coeffs, rhs, rel }
    }

    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.rel {
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug)]
struct Row {
    c: Vec<Rational>,
    rhs: Rational,
    strict: bool,
}

/// Returns a point satisfying every constraint, or `None` if there is none.
pub fn find_point(dim: usize, constraints: &[Constraint]) -> Option<Vec<Rational>> {
    let eqs: Vec<Vec<Rational>> = constraints
        .iter()
        .filter(|c| c.rel == Relation::Eq)
        .map(|c| {
            let mut row = c.coeffs.clone();
            row.push(c.rhs.clone());
            row
        })
        .collect();
    let (base, dirs) = if eqs.is_empty() {
        let dirs = (0..dim)
            .map(|i| {
                let mut e = vec![Rational::zero(); dim];
                e[i] = Rational::one();
                e
            })
            .collect();
        (vec![Rational::zero(); dim], dirs)
    } else {
        solve_affine(&eqs, dim)?
    };
    let m = dirs.len();

    let rows: Vec<Row> = constraints
        .iter()
        .filter(|c| c.rel != Relation::Eq)
        .map(|c| Row {
            c: dirs.iter().map(|d| dot(&c.coeffs, d)).collect(),
            rhs: &c.rhs - dot(&c.coeffs, &base),
            strict: c.rel == Relation::Lt,
        })
        .collect();

    let params = solve_inequalities(m, rows)?;
    let mut x = base;
    for (t, d) in params.iter().zip(&dirs) {
        if t.is_zero() {
            continue;
        }
        for (xi, di) in x.iter_mut().zip(d) {
            *xi += t * di;
        }
    }
    debug_assert!(constraints.iter().all(|c| c.holds_at(&x)));
    Some(x)
}

pub fn is_feasible(dim: usize, constraints: &[Constraint]) -> bool {
    find_point(dim, constraints).is_some()
}

/// Integer row `c · x (< | <=) rhs`, kept with coprime entries.
#[derive(Clone, Debug)]
struct IntRow {
    c: Vec<BigInt>,
    rhs: BigInt,
    strict: bool,
}

impl IntRow {
    fn from_rational(row: Row) -> Self {
        let lcm = row
            .c
            .iter()
            .chain(std::iter::once(&row.rhs))
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scale = |x: &Rational| x.numer() * (&lcm / x.denom());
        IntRow {
            c: row.c.iter().map(scale).collect(),
            rhs: scale(&row.rhs),
            strict: row.strict,
        }
    }

    /// Holds trivially (`Some(true)`), fails (`Some(false)`) or is not
    /// constant (`None`).
    fn constant_truth(&self) -> Option<bool> {
        if !self.c.iter().all(Zero::is_zero) {
            return None;
        }
        Some(if self.strict { self.rhs.is_positive() } else { !self.rhs.is_negative() })
    }
}

fn solve_inequalities(m: usize, rows: Vec<Row>) -> Option<Vec<Rational>> {
    // stages[k] is a system in variables 0..k
    let mut stages: Vec<Vec<IntRow>> = vec![Vec::new(); m + 1];
    stages[m] = canonicalize(rows.into_iter().map(IntRow::from_rational).collect())?;
    for k in (0..m).rev() {
        let next = eliminate(&stages[k + 1], k)?;
        stages[k] = next;
    }

    let mut x: Vec<Rational> = Vec::with_capacity(m);
    for k in 1..=m {
        let var = k - 1;
        let mut lower: Option<(Rational, bool)> = None;
        let mut upper: Option<(Rational, bool)> = None;
        for row in &stages[k] {
            let a = &row.c[var];
            let rest: Rational = row.c[..var]
                .iter()
                .zip(&x)
                .fold(Rational::zero(), |acc, (ci, xi)| acc + xi * ci);
            let slack = Rational::from_integer(row.rhs.clone()) - rest;
            if a.is_zero() {
                let ok = if row.strict { slack.is_positive() } else { !slack.is_negative() };
                if !ok {
                    return None;
                }
                continue;
            }
            let bound = slack / a;
            if a.is_positive() {
                tighten(&mut upper, bound, row.strict, |new, old| new < old);
            } else {
                tighten(&mut lower, bound, row.strict, |new, old| new > old);
            }
        }
        x.push(pick_value(lower, upper)?);
    }
    Some(x)
}

fn tighten(
    slot: &mut Option<(Rational, bool)>,
    bound: Rational,
    strict: bool,
    better: impl Fn(&Rational, &Rational) -> bool,
) {
    match slot {
        None => *slot = Some((bound, strict)),
        Some((old, old_strict)) => {
            if better(&bound, old) {
                *slot = Some((bound, strict));
            } else if bound == *old && strict {
                *old_strict = true;
            }
        }
    }
}

fn pick_value(lower: Option<(Rational, bool)>, upper: Option<(Rational, bool)>) -> Option<Rational> {
    match (lower, upper) {
        (None, None) => Some(Rational::zero()),
        (Some((l, s)), None) => Some(if s { l + Rational::one() } else { l }),
        (None, Some((u, s))) => Some(if s { u - Rational::one() } else { u }),
        (Some((l, ls)), Some((u, us))) => {
            if l < u {
                Some((l + u) / Rational::from_integer(2.into()))
            } else if l == u && !ls && !us {
                Some(l)
            } else {
                None
            }
        }
    }
}

/// Drops trivially true constant rows and keeps only the tightest of each
/// family of parallel rows. `None` signals a violated constant row.
fn canonicalize(rows: Vec<IntRow>) -> Option<Vec<IntRow>> {
    // key: primitive direction; value: index into `out`, content of the normal
    let mut best: HashMap<Vec<BigInt>, (usize, BigInt)> = HashMap::new();
    let mut out: Vec<IntRow> = Vec::new();
    for row in rows {
        match row.constant_truth() {
            Some(true) => continue,
            Some(false) => return None,
            None => {}
        }
        let g = row.c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let dir: Vec<BigInt> = row.c.iter().map(|x| x / &g).collect();
        let h = g.gcd(&row.rhs);
        let row = if h.is_one() {
            row
        } else {
            IntRow {
                c: row.c.iter().map(|x| x / &h).collect(),
                rhs: &row.rhs / &h,
                strict: row.strict,
            }
        };
        let g = &g / &h;
        match best.get_mut(&dir) {
            Some((idx, g_old)) => {
                // compare rhs / g against old.rhs / g_old
                let old = &mut out[*idx];
                let lhs = &row.rhs * &*g_old;
                let rhs = &old.rhs * &g;
                if lhs < rhs {
                    *old = row;
                    *g_old = g;
                } else if lhs == rhs && row.strict {
                    old.strict = true;
                }
            }
            None => {
                best.insert(dir, (out.len(), g));
                out.push(row);
            }
        }
    }
    Some(out)
}

fn eliminate(rows: &[IntRow], var: usize) -> Option<Vec<IntRow>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for row in rows {
        let a = &row.c[var];
        if a.is_zero() {
            out.push(row.clone());
        } else if a.is_positive() {
            pos.push(row);
        } else {
            neg.push(row);
        }
    }
    for p in &pos {
        for n in &neg {
            let g = p.c[var].gcd(&n.c[var]);
            let ap = &p.c[var] / &g;
            let an = -(&n.c[var] / &g);
            // an * p + ap * n cancels the variable
            let c: Vec<BigInt> = p.c.iter().zip(&n.c).map(|(x, y)| &an * x + &ap * y).collect();
            out.push(IntRow {
                c,
                rhs: &an * &p.rhs + &ap * &n.rhs,
                strict: p.strict || n.strict,
            });
        }
    }
    canonicalize(out)
}
