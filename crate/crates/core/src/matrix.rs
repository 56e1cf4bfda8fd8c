//! Square matrices over polynomials and exact linear algebra over the rationals.

use std::fmt;

use crate::poly::{Polynomial, VarSet};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    n: usize,
    vars: VarSet,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zero(n: usize, vars: VarSet) -> Self {
        PolyMatrix {
            n,
            vars,
            entries: vec![Polynomial::zero(vars); n * n],
        }
    }

    pub fn identity(n: usize, vars: VarSet) -> Self {
        let mut m = Self::zero(n, vars);
        for i in 0..n {
            m.set(i, i, Polynomial::one(vars));
        }
        m
    }

    /// Builds from a row-major closure.
    pub fn from_fn(n: usize, vars: VarSet, mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = f(i, j);
                assert_eq!(e.vars(), vars, "matrix entry in the wrong varset");
                entries.push(e);
            }
        }
        PolyMatrix { n, vars, entries }
    }

    /// A constant matrix, entries over the empty varset.
    pub fn from_rationals(rows: &[Vec<Rational>]) -> Self {
        let n = rows.len();
        let vars = VarSet::generic(0);
        Self::from_fn(n, vars, |i, j| {
            Polynomial::constant(vars, rows[i][j].clone())
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        assert_eq!(p.vars(), self.vars);
        self.entries[i * self.n + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// Upper triangular; with `strict`, also zero on the diagonal.
    pub fn is_upper_triangular(&self, strict: bool) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let allowed = if strict { j > i } else { j >= i };
                allowed || self.get(i, j).is_zero()
            })
        })
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        PolyMatrix::from_fn(n, self.vars, |i, j| {
            let mut acc = Polynomial::zero(self.vars);
            for k in 0..n {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        PolyMatrix::from_fn(self.n, self.vars, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        PolyMatrix::from_fn(self.n, self.vars, |i, j| self.get(i, j).scale(c))
    }

    /// Matrix times column vector.
    pub fn mul_column(&self, col: &[Polynomial]) -> Vec<Polynomial> {
        (0..self.n)
            .map(|i| {
                let mut acc = Polynomial::zero(self.vars);
                for (k, c) in col.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !c.is_zero() {
                        acc = &acc + &(a * c);
                    }
                }
                acc
            })
            .collect()
    }

    /// Entries as constants, if every entry is constant.
    pub fn to_rationals(&self) -> Option<Vec<Vec<Rational>>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).as_constant()).collect())
            .collect()
    }

    pub fn rows_as_strings(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows_as_strings()
            .into_iter()
            .map(|r| format!("[{}]", r.join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Row-reduces a copy of `rows`; returns the rank and the pivot column of each pivot row.
pub fn rank_and_pivots(rows: &[Vec<Rational>]) -> (usize, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                subtract_row(&mut m, r, i, c, &f);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (r, pivots)
}

/// `m[dst][from..] -= f * m[src][from..]`, with `src != dst`.
fn subtract_row(m: &mut [Vec<Rational>], src: usize, dst: usize, from: usize, f: &Rational) {
    let (s, d) = if src < dst {
        let (a, b) = m.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = m.split_at_mut(src);
        (&b[0], &mut a[dst])
    };
    for (x, y) in d[from..].iter_mut().zip(&s[from..]) {
        *x -= &(y * f);
    }
}

/// A basis of `{ v : rows * v = 0 }` for vectors of length `ncols`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in &mut m[r][c..] {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                subtract_row(&mut m, r, i, c, &f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

/// Determinant by Gaussian elimination over the rationals.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut m = rows.to_vec();
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
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                subtract_row(&mut m, c, i, c, &f);
            }
        }
    }
    det
}
