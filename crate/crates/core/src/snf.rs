//! Smith normal form over the integers.
//!
//! `smith_normal_form` only reports the invariant factors. It eliminates
//! unit pivots first (cheap on cube differentials, whose entries are 0 and
//! ±1), then finishes the remainder with smallest-pivot elimination. The
//! arithmetic runs in checked `i64` and restarts in `BigInt` on overflow.
//!
//! `smith_decomposition` also records the unimodular transforms; it is the
//! slow reference path.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[i64]>::to_vec).collect()
    }

    /// `self · other`, skipping zero entries of `other`. Entries are widened
    /// to `i128` so products of differentials cannot overflow.
    pub fn mul_wide(&self, other: &IntMatrix) -> Vec<i128> {
        assert_eq!(self.cols, other.rows);
        let mut out = vec![0i128; self.rows * other.cols];
        for k in 0..other.rows {
            for j in 0..other.cols {
                let b = other.get(k, j);
                if b == 0 {
                    continue;
                }
                for i in 0..self.rows {
                    let a = self.get(i, k);
                    if a != 0 {
                        out[i * other.cols + j] += a as i128 * b as i128;
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero invariant factors `d_1 | d_2 | …`, all positive.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

trait Scalar: Clone + PartialEq {
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn abs_big(&self) -> BigInt;
    fn abs_lt(&self, other: &Self) -> bool;
    /// Truncated quotient.
    fn quot(&self, d: &Self) -> Self;
    fn divides(&self, x: &Self) -> bool;
    /// `self - f * x`, or `None` on overflow.
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self>;
    fn add(&self, x: &Self) -> Option<Self>;
}

impl Scalar for i64 {
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_big(&self) -> BigInt {
        BigInt::from(*self).abs()
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn quot(&self, d: &Self) -> Self {
        self.checked_div(*d).unwrap_or(0)
    }
    fn divides(&self, x: &Self) -> bool {
        x.checked_rem(*self).is_none_or(|r| r == 0)
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(f.checked_mul(*x)?)
    }
    fn add(&self, x: &Self) -> Option<Self> {
        self.checked_add(*x)
    }
}

impl Scalar for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn abs_big(&self) -> BigInt {
        self.abs()
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, x: &Self) -> bool {
        Zero::is_zero(&(x % self))
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        Some(self - f * x)
    }
    fn add(&self, x: &Self) -> Option<Self> {
        Some(self + x)
    }
}

struct Overflow;

/// Invariant factors of `a` (rows of equal length), or `Overflow`.
fn diagonalize<S: Scalar>(mut a: Vec<Vec<S>>, cols: usize) -> Result<Vec<BigInt>, Overflow> {
    let mut diag = Vec::new();
    let mut row_alive: Vec<bool> = vec![true; a.len()];
    let mut col_alive: Vec<bool> = vec![true; cols];

    // Unit pivots: after clearing the pivot column, the pivot row and column
    // can be dropped without touching the rest.
    loop {
        let mut progress = false;
        for c in 0..cols {
            if !col_alive[c] {
                continue;
            }
            let Some(p) = (0..a.len()).find(|&r| row_alive[r] && a[r][c].is_unit()) else {
                continue;
            };
            let pivot = a[p][c].clone();
            for r in 0..a.len() {
                if r == p || !row_alive[r] || a[r][c].is_nil() {
                    continue;
                }
                // row_r -= (a[r][c] / pivot) * row_p, and pivot = ±1
                let f = a[r][c].quot(&pivot);
                for k in 0..cols {
                    if col_alive[k] && !a[p][k].is_nil() {
                        a[r][k] = a[r][k].sub_mul(&f, &a[p][k]).ok_or(Overflow)?;
                    }
                }
            }
            row_alive[p] = false;
            col_alive[c] = false;
            diag.push(BigInt::one());
            progress = true;
        }
        if !progress {
            break;
        }
    }

    let rest_cols: Vec<usize> = (0..cols).filter(|&c| col_alive[c]).collect();
    let mut m: Vec<Vec<S>> = a
        .into_iter()
        .zip(row_alive)
        .filter(|(row, alive)| *alive && rest_cols.iter().any(|&c| !row[c].is_nil()))
        .map(|(row, _)| rest_cols.iter().map(|&c| row[c].clone()).collect())
        .collect();
    let mut rest = general_smith(&mut m, rest_cols.len())?;
    diag.append(&mut rest);
    Ok(diag)
}

/// Smallest-pivot elimination on a dense block.
fn general_smith<S: Scalar>(a: &mut [Vec<S>], cols: usize) -> Result<Vec<BigInt>, Overflow> {
    let rows = a.len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = smallest(a, t, rows, cols) else { break };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut clean = true;
            for r in t + 1..rows {
                if a[r][t].is_nil() {
                    continue;
                }
                let f = a[r][t].quot(&a[t][t]);
                for k in t..cols {
                    if !a[t][k].is_nil() {
                        a[r][k] = a[r][k].sub_mul(&f, &a[t][k]).ok_or(Overflow)?;
                    }
                }
                clean &= a[r][t].is_nil();
            }
            for k in t + 1..cols {
                if a[t][k].is_nil() {
                    continue;
                }
                let f = a[t][k].quot(&a[t][t]);
                for r in t..rows {
                    if !a[r][t].is_nil() {
                        a[r][k] = a[r][k].sub_mul(&f, &a[r][t]).ok_or(Overflow)?;
                    }
                }
                clean &= a[t][k].is_nil();
            }
            if !clean {
                // move the smallest leftover in row/column t onto the pivot
                let mut best = (t, t);
                for r in t + 1..rows {
                    if !a[r][t].is_nil() && a[r][t].abs_lt(&a[best.0][best.1]) {
                        best = (r, t);
                    }
                }
                for k in t + 1..cols {
                    if !a[t][k].is_nil() && a[t][k].abs_lt(&a[best.0][best.1]) {
                        best = (t, k);
                    }
                }
                if best.1 == t {
                    a.swap(t, best.0);
                } else {
                    for row in a.iter_mut() {
                        row.swap(t, best.1);
                    }
                }
                continue;
            }
            let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|k| !a[t][t].divides(&a[r][k])));
            match bad {
                Some(r) => {
                    for k in t..cols {
                        a[t][k] = a[t][k].add(&a[r][k]).ok_or(Overflow)?;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs_big());
    }
    Ok(diag)
}

fn smallest<S: Scalar>(a: &[Vec<S>], t: usize, rows: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..rows {
        for c in t..cols {
            if a[r][c].is_nil() {
                continue;
            }
            if best.is_none_or(|(br, bc)| a[r][c].abs_lt(&a[br][bc])) {
                best = Some((r, c));
                if a[r][c].is_unit() {
                    return best;
                }
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows: Vec<Vec<i64>> = m.to_rows();
    let diagonal = match diagonalize(rows, m.cols) {
        Ok(d) => d,
        Err(Overflow) => smith_normal_form_big(&to_big(m)).diagonal,
    };
    SmithForm { rank: diagonal.len(), diagonal }
}

/// Same as `smith_normal_form` for arbitrary-precision input.
pub fn smith_normal_form_big(m: &[Vec<BigInt>]) -> SmithForm {
    let cols = m.first().map_or(0, Vec::len);
    let diagonal = match diagonalize(m.to_vec(), cols) {
        Ok(d) => d,
        Err(Overflow) => unreachable!("BigInt arithmetic cannot overflow"),
    };
    SmithForm { rank: diagonal.len(), diagonal }
}

fn to_big(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()
}

/// `left · m · right = diagonal`, with `left` and `right` unimodular.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
    pub diagonal: Vec<Vec<BigInt>>,
    pub form: SmithForm,
}

pub fn smith_decomposition(m: &[Vec<BigInt>]) -> SmithDecomposition {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let ident = |n: usize| -> Vec<Vec<BigInt>> {
        (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect()).collect()
    };
    let mut a = m.to_vec();
    let mut left = ident(rows);
    let mut right = ident(cols);

    // row_r -= f * row_s, mirrored on `left`
    fn row_op(a: &mut [Vec<BigInt>], l: &mut [Vec<BigInt>], r: usize, s: usize, f: &BigInt) {
        for k in 0..a[r].len() {
            let v = &a[s][k] * f;
            a[r][k] -= v;
        }
        for k in 0..l[r].len() {
            let v = &l[s][k] * f;
            l[r][k] -= v;
        }
    }
    fn col_op(a: &mut [Vec<BigInt>], rt: &mut [Vec<BigInt>], c: usize, s: usize, f: &BigInt) {
        for row in a.iter_mut() {
            let v = &row[s] * f;
            row[c] -= v;
        }
        for row in rt.iter_mut() {
            let v = &row[s] * f;
            row[c] -= v;
        }
    }
    fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = smallest(&a, t, rows, cols) else { break };
        a.swap(t, pr);
        left.swap(t, pr);
        swap_cols(&mut a, t, pc);
        swap_cols(&mut right, t, pc);
        loop {
            let mut clean = true;
            for r in t + 1..rows {
                if !a[r][t].is_zero() {
                    let f = &a[r][t] / &a[t][t];
                    row_op(&mut a, &mut left, r, t, &f);
                    clean &= a[r][t].is_zero();
                }
            }
            for k in t + 1..cols {
                if !a[t][k].is_zero() {
                    let f = &a[t][k] / &a[t][t];
                    col_op(&mut a, &mut right, k, t, &f);
                    clean &= a[t][k].is_zero();
                }
            }
            if !clean {
                let mut best = (t, t);
                for r in t + 1..rows {
                    if !a[r][t].is_zero() && a[r][t].magnitude() < a[best.0][best.1].magnitude() {
                        best = (r, t);
                    }
                }
                for k in t + 1..cols {
                    if !a[t][k].is_zero() && a[t][k].magnitude() < a[best.0][best.1].magnitude() {
                        best = (t, k);
                    }
                }
                if best.1 == t {
                    a.swap(t, best.0);
                    left.swap(t, best.0);
                } else {
                    swap_cols(&mut a, t, best.1);
                    swap_cols(&mut right, t, best.1);
                }
                continue;
            }
            let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|k| !(&a[r][k] % &a[t][t]).is_zero()));
            match bad {
                Some(r) => row_op(&mut a, &mut left, t, r, &BigInt::from(-1)),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for k in 0..cols {
                a[t][k] = -a[t][k].clone();
            }
            for k in 0..rows {
                left[t][k] = -left[t][k].clone();
            }
        }
        t += 1;
    }
    let diagonal: Vec<BigInt> = (0..rows.min(cols)).map(|i| a[i][i].clone()).filter(|d| !d.is_zero()).collect();
    SmithDecomposition { left, right, diagonal: a, form: SmithForm { rank: diagonal.len(), diagonal } }
}
