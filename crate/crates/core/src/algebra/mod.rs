//! Exact sparse linear algebra over ℤ and prime fields.

mod dense;
mod eliminate;
mod ring;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
pub use dense::{DenseIntMatrix, Transforms};
use eliminate::{eliminate, Elimination};
use ring::{BigInts, MachineInts, PrimeField, Ring, SmallInts};

pub(crate) use ring::is_prime;

/// Coefficient ring of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coefficients {
    Integers,
    /// The field with `p` elements; `p` is prime.
    Prime(u64),
}

impl Coefficients {
    pub const F2: Coefficients = Coefficients::Prime(2);

    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Coefficients::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, Coefficients::Prime(_))
    }

    /// `"Z"`, `"F2"`, `"F<p>"`.
    pub fn tag(&self) -> String {
        match self {
            Coefficients::Integers => "Z".into(),
            Coefficients::Prime(p) => format!("F{p}"),
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// Accepts `z`, `f2`, `f<p>` in either case.
impl FromStr for Coefficients {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "z" {
            return Ok(Coefficients::Integers);
        }
        let p = lower
            .strip_prefix('f')
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse(format!("unknown coefficients {s:?}; use z, f2 or f<p>")))?;
        Coefficients::prime(p)
    }
}

/// Order of an element of an abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(BigUint),
    Infinite,
}

impl Order {
    pub fn finite(t: u64) -> Order {
        Order::Finite(BigUint::from(t))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self {
            Order::Finite(t) => t.to_u64(),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(t) => write!(f, "{t}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

/// An entry: inline when it fits a machine word.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    fn new(v: BigInt) -> Int {
        match v.to_i64() {
            Some(x) => Int::Small(x),
            None => Int::Big(Box::new(v)),
        }
    }

    fn value(&self) -> BigInt {
        match self {
            Int::Small(x) => BigInt::from(*x),
            Int::Big(b) => (**b).clone(),
        }
    }

    fn in_ring<R: Ring>(&self, ring: &R) -> Option<R::E> {
        match self {
            Int::Small(x) => ring.from_i64(*x),
            Int::Big(b) => ring.from_bigint(b),
        }
    }
}

/// Sparse integer matrix; rows are kept sorted by column, without zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(u32, Int)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    /// Sums duplicate entries and drops zeros.
    pub fn from_triplets<V: Into<BigInt>>(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, V)>,
    ) -> Result<Self> {
        let mut acc: Vec<BTreeMap<u32, BigInt>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::InvalidArgument(format!(
                    "entry ({r},{c}) outside a {rows}x{cols} matrix"
                )));
            }
            *acc[r].entry(c as u32).or_default() += v.into();
        }
        let data = acc
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, Int::new(v)))
                    .collect()
            })
            .collect();
        Ok(SparseIntMatrix { rows, cols, data })
    }

    /// Rows of `(column, value)` pairs; each row is sorted, duplicates are
    /// summed and zeros dropped.
    pub fn from_rows(cols: usize, rows: Vec<Vec<(u32, i64)>>) -> Result<Self> {
        let data = rows
            .into_iter()
            .map(|mut row| {
                row.sort_unstable_by_key(|(c, _)| *c);
                let mut out: Vec<(u32, BigInt)> = Vec::with_capacity(row.len());
                for (c, v) in row {
                    if c as usize >= cols {
                        return Err(Error::InvalidArgument(format!("column {c} outside {cols} columns")));
                    }
                    match out.last_mut() {
                        Some((last, acc)) if *last == c => *acc += v,
                        _ => out.push((c, BigInt::from(v))),
                    }
                }
                Ok(out
                    .into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, Int::new(v)))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseIntMatrix {
            rows: data.len(),
            cols,
            data,
        })
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v)));
        Self::from_triplets(rows.len(), cols, entries).expect("in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    /// `(column, value)` pairs of row `r`, by column.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, BigInt)> + '_ {
        self.data[r].iter().map(|(c, v)| (*c as usize, v.value()))
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.data[r]
            .binary_search_by_key(&(c as u32), |(cc, _)| *cc)
            .map_or_else(|_| BigInt::zero(), |k| self.data[r][k].1.value())
    }

    /// `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, BigInt)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c as usize, v.value())))
    }

    pub fn to_dense(&self) -> DenseIntMatrix {
        let mut m = DenseIntMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            m.set(r, c, v);
        }
        m
    }

    pub fn to_dense_i64(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.to_i64().expect("entry fits in i64");
        }
        out
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        self.transpose_without(&[])
    }

    /// The transpose, with the rows coming from `dropped` columns left empty.
    pub fn transpose_without(&self, dropped: &[usize]) -> SparseIntMatrix {
        let mut keep = vec![true; self.cols];
        for &c in dropped {
            keep[c] = false;
        }
        let mut len = vec![0usize; self.cols];
        for row in &self.data {
            for (c, _) in row {
                len[*c as usize] += 1;
            }
        }
        let mut data: Vec<Vec<(u32, Int)>> = len
            .iter()
            .zip(&keep)
            .map(|(&n, &k)| Vec::with_capacity(if k { n } else { 0 }))
            .collect();
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                if keep[*c as usize] {
                    data[*c as usize].push((r as u32, v.clone()));
                }
            }
        }
        SparseIntMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Reorders rows and columns: entry `(r, c)` moves to `(row_perm[r], col_perm[c])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseIntMatrix {
        let entries = self
            .triplets()
            .map(|(r, c, v)| (row_perm[r], col_perm[c], v));
        Self::from_triplets(self.rows, self.cols, entries).expect("in range")
    }

    pub fn mul(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
            for (k, a) in row {
                let a = a.value();
                for (c, b) in &other.data[*k as usize] {
                    *acc.entry(*c).or_default() += &a * b.value();
                }
            }
            entries.extend(acc.into_iter().map(|(c, v)| (r, c as usize, v)));
        }
        Self::from_triplets(self.rows, other.cols, entries)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        self.data
            .iter()
            .map(|row| row.iter().map(|(c, a)| a.value() * &v[*c as usize]).sum())
            .collect()
    }

    /// Matrix Market coordinate format, 1-based, integer field.
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate integer general")?;
        writeln!(w, "{} {} {}", self.rows, self.cols, self.nnz())?;
        for (r, c, v) in self.triplets() {
            writeln!(w, "{} {} {}", r + 1, c + 1, v)?;
        }
        Ok(())
    }

    fn into_rows_in<R: Ring>(self, ring: &R) -> Option<Vec<Vec<(u32, R::E)>>> {
        self.data
            .into_iter()
            .map(|row| {
                let mut out = Vec::with_capacity(row.len());
                for (c, v) in row {
                    let e = v.in_ring(ring)?;
                    if !ring.is_zero(&e) {
                        out.push((c, e));
                    }
                }
                Some(out)
            })
            .collect()
    }

    fn rows_in<R: Ring>(&self, ring: &R) -> Option<Vec<Vec<(u32, R::E)>>> {
        self.data
            .iter()
            .map(|row| {
                let mut out = Vec::with_capacity(row.len());
                for (c, v) in row {
                    let e = v.in_ring(ring)?;
                    if !ring.is_zero(&e) {
                        out.push((*c, e));
                    }
                }
                Some(out)
            })
            .collect()
    }
}

/// Invariant factors `d_1 | d_2 | … | d_r` of an integer matrix.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    pub transforms: Option<Transforms>,
}

impl SmithForm {
    /// The factors larger than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

/// Runs the eliminator over ℤ with 32-bit, then 64-bit, then big integers,
/// moving on as soon as an entry or an intermediate does not fit.  The
/// first attempt consumes `m`; `again` rebuilds it for the others.
fn eliminate_integral(
    m: SparseIntMatrix,
    again: impl Fn() -> SparseIntMatrix,
    tracked: &[Vec<BigInt>],
) -> Elimination<BigInt> {
    let cols = m.cols;
    if let Some(e) = try_machine(&SmallInts, m.into_rows_in(&SmallInts), cols, tracked) {
        return e;
    }
    let m = again();
    if let Some(e) = try_machine(&MachineInts, m.rows_in(&MachineInts), cols, tracked) {
        return e;
    }
    let rows = m.into_rows_in(&BigInts).expect("big integers always convert");
    eliminate(&BigInts, rows, cols, tracked.to_vec()).expect("big integers do not overflow")
}

fn try_machine<R: Ring>(
    ring: &R,
    rows: Option<Vec<Vec<(u32, R::E)>>>,
    cols: usize,
    tracked: &[Vec<BigInt>],
) -> Option<Elimination<BigInt>>
where
    R::E: Into<BigInt>,
{
    let tracked = tracked
        .iter()
        .map(|v| v.iter().map(|x| ring.from_bigint(x)).collect())
        .collect::<Option<Vec<Vec<R::E>>>>()?;
    let e = eliminate(ring, rows?, cols, tracked).ok()?;
    Some(Elimination {
        units: e.units,
        pivots: e
            .pivots
            .into_iter()
            .map(|(r, c, d)| (r, c, d.into()))
            .collect(),
        tracked: e
            .tracked
            .into_iter()
            .map(|v| v.into_iter().map(Into::into).collect())
            .collect(),
    })
}

/// Turns the diagonal of a diagonalised matrix into a divisibility chain.
fn diagonal_to_chain(diag: Vec<BigInt>) -> Vec<BigInt> {
    let mut units = 0;
    let mut rest: Vec<BigInt> = Vec::new();
    for d in diag {
        let d = d.abs();
        if d.is_one() {
            units += 1;
        } else {
            rest.push(d);
        }
    }
    rest.sort();
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            if !rest[j].is_multiple_of(&rest[i]) {
                let g = rest[i].gcd(&rest[j]);
                let l = rest[i].lcm(&rest[j]);
                rest[i] = g;
                rest[j] = l;
            }
        }
    }
    let mut out = vec![BigInt::one(); units];
    out.extend(rest);
    out.sort_by(|a, b| a.cmp(b));
    out
}

/// Smith normal form.  With `with_transforms` the (dense) unimodular
/// transforms are returned as well; only use that on small matrices.
pub fn smith_normal_form(m: &SparseIntMatrix, with_transforms: bool) -> SmithForm {
    if with_transforms {
        let (diag, t) = dense::smith_dense(m.to_dense());
        return SmithForm {
            rank: diag.len(),
            invariant_factors: diag,
            transforms: Some(t),
        };
    }
    let e = eliminate_integral(m.clone(), || m.clone(), &[]);
    let factors = diagonal_to_chain(e.pivots.into_iter().map(|(_, _, d)| d).collect());
    SmithForm {
        rank: factors.len(),
        invariant_factors: factors,
        transforms: None,
    }
}

/// Rank and torsion of a matrix, plus the unit pivots found before any
/// column operation: `(row, column)` pairs whose rows and columns meet in a
/// unimodular block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub rank: usize,
    /// Invariant factors larger than one; always empty over a field.
    pub torsion: Vec<BigInt>,
    pub unit_pivots: Vec<(usize, usize)>,
}

pub fn reduce(m: &SparseIntMatrix, coefficients: Coefficients) -> Result<Reduction> {
    reduce_consuming(m.clone(), coefficients, || m.clone())
}

/// Like [`reduce`], but frees the matrix while it is being reduced.
/// `again` rebuilds it in the rare case that machine integers overflow.
pub fn reduce_consuming(
    m: SparseIntMatrix,
    coefficients: Coefficients,
    again: impl Fn() -> SparseIntMatrix,
) -> Result<Reduction> {
    match coefficients {
        Coefficients::Integers => {
            let e = eliminate_integral(m, again, &[]);
            let unit_pivots = e.pivots[..e.units]
                .iter()
                .map(|(r, c, _)| (*r, *c as usize))
                .collect();
            let factors = diagonal_to_chain(e.pivots.into_iter().map(|(_, _, d)| d).collect());
            Ok(Reduction {
                rank: factors.len(),
                torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
                unit_pivots,
            })
        }
        Coefficients::Prime(p) => {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            let field = PrimeField { p };
            let cols = m.cols;
            let rows = m.into_rows_in(&field).expect("reduction mod p always succeeds");
            let e = eliminate(&field, rows, cols, Vec::new()).expect("fields do not overflow");
            Ok(Reduction {
                rank: e.pivots.len(),
                torsion: Vec::new(),
                unit_pivots: e.pivots.iter().map(|(r, c, _)| (*r, *c as usize)).collect(),
            })
        }
    }
}

/// Rank over the field with `p` elements.
pub fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let field = PrimeField { p };
    let rows = m.rows_in(&field).expect("reduction mod p always succeeds");
    let e = eliminate(&field, rows, m.cols, Vec::new()).expect("fields do not overflow");
    Ok(e.pivots.len())
}

/// Rank over `coefficients` (over ℤ: the rank over ℚ).
pub fn rank(m: &SparseIntMatrix, coefficients: Coefficients) -> Result<usize> {
    match coefficients {
        Coefficients::Integers => Ok(eliminate_integral(m.clone(), || m.clone(), &[]).pivots.len()),
        Coefficients::Prime(p) => rank_mod_p(m, p),
    }
}

/// Smallest `t ≥ 1` with `t·v` in the column space of `m`, or infinity.
pub fn preimage_order(m: &SparseIntMatrix, v: &[BigInt]) -> Result<Order> {
    if v.len() != m.rows {
        return Err(Error::InvalidArgument(format!(
            "vector of length {} against a matrix with {} rows",
            v.len(),
            m.rows
        )));
    }
    if v.iter().all(Zero::is_zero) {
        return Ok(Order::finite(1));
    }
    let e = eliminate_integral(m.clone(), || m.clone(), &[v.to_vec()]);
    let w = &e.tracked[0];
    let mut is_pivot = vec![false; m.rows];
    let mut order = BigInt::one();
    for (r, _, d) in &e.pivots {
        is_pivot[*r] = true;
        let d = d.abs();
        let t = &d / d.gcd(&w[*r]);
        order = order.lcm(&t);
    }
    if (0..m.rows).any(|r| !is_pivot[r] && !w[r].is_zero()) {
        return Ok(Order::Infinite);
    }
    Ok(Order::Finite(order.to_biguint().expect("positive")))
}

/// Whether `v` lies in the column space of `m` over the field with `p` elements.
pub fn in_column_space_mod_p(m: &SparseIntMatrix, v: &[BigInt], p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if v.len() != m.rows {
        return Err(Error::InvalidArgument("vector length does not match rows".into()));
    }
    let field = PrimeField { p };
    let rows = m.rows_in(&field).expect("reduction mod p always succeeds");
    let tracked: Vec<u64> = v.iter().map(|x| field.from_bigint(x).unwrap()).collect();
    let e = eliminate(&field, rows, m.cols, vec![tracked]).expect("fields do not overflow");
    let mut is_pivot = vec![false; m.rows];
    for (r, _, _) in &e.pivots {
        is_pivot[*r] = true;
    }
    Ok((0..m.rows).all(|r| is_pivot[r] || e.tracked[0][r] == 0))
}
