//! Dense Smith normal form with unimodular transforms, for the small
//! complexes where class coordinates are needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-major dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl DenseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseIntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &DenseIntMatrix) -> DenseIntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Rows `from..` as a new matrix.
    pub fn row_block(&self, from: usize) -> DenseIntMatrix {
        DenseIntMatrix {
            rows: self.rows - from,
            cols: self.cols,
            data: self.data[from * self.cols..].to_vec(),
        }
    }

    /// Columns `from..` as a new matrix.
    pub fn col_block(&self, from: usize) -> DenseIntMatrix {
        let cols = self.cols - from;
        let mut out = Self::zeros(self.rows, cols);
        for r in 0..self.rows {
            for c in 0..cols {
                out.set(r, c, self.get(r, from + c).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[t] += q * row[s]`
    fn add_row(&mut self, t: usize, q: &BigInt, s: usize) {
        for c in 0..self.cols {
            let v = &self.data[s * self.cols + c] * q;
            if !v.is_zero() {
                self.data[t * self.cols + c] += v;
            }
        }
    }

    /// `col[t] += q * col[s]`
    fn add_col(&mut self, t: usize, q: &BigInt, s: usize) {
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + s] * q;
            if !v.is_zero() {
                self.data[r * self.cols + t] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = &mut self.data[r * self.cols + c];
            *v = -std::mem::take(v);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = &mut self.data[r * self.cols + c];
            *v = -std::mem::take(v);
        }
    }
}

/// `U`, `V` and their inverses with `U · M · V = D`.
#[derive(Clone, Debug)]
pub struct Transforms {
    pub u: DenseIntMatrix,
    pub u_inv: DenseIntMatrix,
    pub v: DenseIntMatrix,
    pub v_inv: DenseIntMatrix,
}

struct Reducer {
    a: DenseIntMatrix,
    t: Transforms,
}

impl Reducer {
    fn row_add(&mut self, t: usize, q: &BigInt, s: usize) {
        self.a.add_row(t, q, s);
        self.t.u.add_row(t, q, s);
        self.t.u_inv.add_col(s, &-q, t);
    }

    fn col_add(&mut self, t: usize, q: &BigInt, s: usize) {
        self.a.add_col(t, q, s);
        self.t.v.add_col(t, q, s);
        self.t.v_inv.add_row(s, &-q, t);
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.a.swap_rows(a, b);
        self.t.u.swap_rows(a, b);
        self.t.u_inv.swap_cols(a, b);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.a.swap_cols(a, b);
        self.t.v.swap_cols(a, b);
        self.t.v_inv.swap_rows(a, b);
    }

    fn row_negate(&mut self, r: usize) {
        self.a.negate_row(r);
        self.t.u.negate_row(r);
        self.t.u_inv.negate_col(r);
    }
}

fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    if r.magnitude() * 2u32 > *b.magnitude() {
        q + 1
    } else {
        q
    }
}

/// Full Smith normal form.  Returns the diagonal (positive, each dividing
/// the next) and the transforms.
pub(crate) fn smith_dense(m: DenseIntMatrix) -> (Vec<BigInt>, Transforms) {
    let (rows, cols) = (m.rows, m.cols);
    let mut red = Reducer {
        a: m,
        t: Transforms {
            u: DenseIntMatrix::identity(rows),
            u_inv: DenseIntMatrix::identity(rows),
            v: DenseIntMatrix::identity(cols),
            v_inv: DenseIntMatrix::identity(cols),
        },
    };
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    let v = red.a.get(r, c);
                    if !v.is_zero()
                        && best.map_or(true, |(br, bc)| v.magnitude() < red.a.get(br, bc).magnitude())
                    {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else {
                return (diag, red.t);
            };
            red.row_swap(t, br);
            red.col_swap(t, bc);
            let p = red.a.get(t, t).clone();
            let mut dirty = false;
            for r in t + 1..rows {
                if !red.a.get(r, t).is_zero() {
                    let q = nearest_quotient(red.a.get(r, t), &p);
                    red.row_add(r, &-q, t);
                    dirty |= !red.a.get(r, t).is_zero();
                }
            }
            for c in t + 1..cols {
                if !red.a.get(t, c).is_zero() {
                    let q = nearest_quotient(red.a.get(t, c), &p);
                    red.col_add(c, &-q, t);
                    dirty |= !red.a.get(t, c).is_zero();
                }
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&r| (t + 1..cols).any(|c| !red.a.get(r, c).is_multiple_of(&p)));
            if let Some(r) = offender {
                red.row_add(t, &BigInt::one(), r);
                continue;
            }
            break;
        }
        if red.a.get(t, t).is_negative() {
            red.row_negate(t);
        }
        diag.push(red.a.get(t, t).clone());
    }
    (diag, red.t)
}
