//! Cohomology classes as relative cocycles: coordinates, orders and the
//! stacking product of one-boundary slit pictures.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{self, Coefficients, DenseIntMatrix, Order};
use crate::complex::{Cell, ModuliIndex};
use crate::error::{Error, Result};
use crate::homology::{self, GradedMatrixComplex};
use crate::perm::{Images, Tableau};

/// A finitely supported function on the non-degenerate cells of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    index: ModuliIndex,
    degree: usize,
    coefficients: Coefficients,
    support: BTreeMap<Cell, BigInt>,
}

#[derive(Serialize, Deserialize)]
struct CochainJson {
    g: usize,
    n: usize,
    m: usize,
    degree: usize,
    support: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    cell: String,
    coeff: BigIntJson,
}

/// Coefficients go to JSON as plain integers when they fit.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BigIntJson {
    Small(i64),
    Big(String),
}

impl Cochain {
    pub fn zero(index: ModuliIndex, degree: usize, coefficients: Coefficients) -> Self {
        Cochain {
            index,
            degree,
            coefficients,
            support: BTreeMap::new(),
        }
    }

    /// Checks that every cell is non-degenerate and of the given degree.
    pub fn from_terms<V: Into<BigInt>>(
        index: ModuliIndex,
        degree: usize,
        coefficients: Coefficients,
        terms: impl IntoIterator<Item = (Cell, V)>,
    ) -> Result<Self> {
        let mut x = Cochain::zero(index, degree, coefficients);
        for (cell, v) in terms {
            if cell.degree() != degree {
                return Err(Error::InvalidArgument(format!(
                    "{cell} has degree {}, not {degree}",
                    cell.degree()
                )));
            }
            if !cell.is_nondegenerate(&index) {
                return Err(Error::InvalidArgument(format!(
                    "{cell} is not a non-degenerate cell for {index}"
                )));
            }
            x.add_term(cell, v.into());
        }
        Ok(x)
    }

    /// The dual `Σ*` of a single cell.
    pub fn dual(index: ModuliIndex, cell: Cell, coefficients: Coefficients) -> Result<Self> {
        let d = cell.degree();
        Cochain::from_terms(index, d, coefficients, [(cell, 1)])
    }

    fn normalize(&self, v: BigInt) -> BigInt {
        match self.coefficients {
            Coefficients::Integers => v,
            Coefficients::Prime(p) => v.mod_floor(&BigInt::from(p)),
        }
    }

    fn add_term(&mut self, cell: Cell, v: BigInt) {
        let entry = self.support.entry(cell).or_default();
        let sum = std::mem::take(entry) + v;
        let sum = match self.coefficients {
            Coefficients::Integers => sum,
            Coefficients::Prime(p) => sum.mod_floor(&BigInt::from(p)),
        };
        *entry = sum;
        self.support.retain(|_, v| !v.is_zero());
    }

    pub fn index(&self) -> &ModuliIndex {
        &self.index
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Cell, &BigInt)> {
        self.support.iter()
    }

    pub fn get(&self, cell: &Cell) -> BigInt {
        self.support.get(cell).cloned().unwrap_or_default()
    }

    pub fn scaled(&self, k: &BigInt) -> Cochain {
        let mut out = Cochain::zero(self.index, self.degree, self.coefficients);
        for (c, v) in &self.support {
            let w = self.normalize(v * k);
            if !w.is_zero() {
                out.support.insert(c.clone(), w);
            }
        }
        out
    }

    pub fn plus(&self, other: &Cochain) -> Result<Cochain> {
        if other.index != self.index || other.degree != self.degree || other.coefficients != self.coefficients {
            return Err(Error::InvalidArgument("cochains live in different groups".into()));
        }
        let mut out = self.clone();
        for (c, v) in &other.support {
            out.add_term(c.clone(), v.clone());
        }
        Ok(out)
    }

    /// Coefficient vector against the basis of the complex.
    pub fn to_vector(&self, complex: &GradedMatrixComplex) -> Result<Vec<BigInt>> {
        self.check_complex(complex)?;
        let terms: Vec<(Cell, BigInt)> = self.support.iter().map(|(c, v)| (c.clone(), v.clone())).collect();
        homology::dense_vector(complex, self.degree, &terms)
    }

    pub fn from_vector(
        complex: &GradedMatrixComplex,
        degree: usize,
        coefficients: Coefficients,
        v: &[BigInt],
    ) -> Cochain {
        let mut out = Cochain::zero(*complex.index(), degree, coefficients);
        for (cell, x) in complex.basis(degree).iter().zip(v) {
            let x = out.normalize(x.clone());
            if !x.is_zero() {
                out.support.insert(cell.clone(), x);
            }
        }
        out
    }

    fn check_complex(&self, complex: &GradedMatrixComplex) -> Result<()> {
        if complex.index() != &self.index {
            return Err(Error::InvalidArgument(format!(
                "cochain on {} evaluated in the complex of {}",
                self.index,
                complex.index()
            )));
        }
        if self.degree > complex.top_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: self.degree,
                max: complex.top_degree(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let j = CochainJson {
            g: self.index.g,
            n: self.index.n,
            m: self.index.m,
            degree: self.degree,
            support: self
                .support
                .iter()
                .map(|(c, v)| TermJson {
                    cell: c.to_string(),
                    coeff: match v.to_i64() {
                        Some(s) => BigIntJson::Small(s),
                        None => BigIntJson::Big(v.to_string()),
                    },
                })
                .collect(),
        };
        Ok(serde_json::to_string(&j)?)
    }

    pub fn from_json(text: &str, coefficients: Coefficients) -> Result<Cochain> {
        let j: CochainJson = serde_json::from_str(text)?;
        let index = ModuliIndex::new(j.g, j.n, j.m)?;
        let terms = j
            .support
            .into_iter()
            .map(|t| {
                let v = match t.coeff {
                    BigIntJson::Small(s) => BigInt::from(s),
                    BigIntJson::Big(s) => s
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?,
                };
                Ok((t.cell.parse::<Cell>()?, v))
            })
            .collect::<Result<Vec<_>>>()?;
        Cochain::from_terms(index, j.degree, coefficients, terms)
    }
}

/// `δx`.
pub fn coboundary(x: &Cochain, complex: &GradedMatrixComplex) -> Result<Cochain> {
    let v = x.to_vector(complex)?;
    let w = complex.coboundary(x.degree).mul_vec(&v);
    Ok(Cochain::from_vector(complex, x.degree + 1, x.coefficients, &w))
}

pub fn is_cocycle(x: &Cochain, complex: &GradedMatrixComplex) -> Result<bool> {
    Ok(coboundary(x, complex)?.is_zero())
}

fn require_cocycle(x: &Cochain, complex: &GradedMatrixComplex) -> Result<Vec<BigInt>> {
    if !is_cocycle(x, complex)? {
        return Err(Error::NotACocycle);
    }
    x.to_vector(complex)
}

/// Smallest `t ≥ 1` with `t·[x] = 0`.
pub fn class_order(x: &Cochain, complex: &GradedMatrixComplex) -> Result<Order> {
    homology::check_orientation(complex.index(), x.coefficients)?;
    let v = require_cocycle(x, complex)?;
    let a = complex.incoming(x.degree);
    match x.coefficients {
        Coefficients::Integers => algebra::preimage_order(&a, &v),
        Coefficients::Prime(p) => Ok(if algebra::in_column_space_mod_p(&a, &v, p)? {
            Order::finite(1)
        } else {
            Order::finite(p)
        }),
    }
}

/// Whether `x` represents a non-zero class.
pub fn is_nonzero_class(x: &Cochain, complex: &GradedMatrixComplex) -> Result<bool> {
    Ok(class_order(x, complex)? != Order::finite(1))
}

/// Coordinates of a class: free coordinates, then `(value, modulus)` for
/// each cyclic torsion summand.  Over a field only `free` is used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCoordinates {
    pub free: Vec<BigInt>,
    pub torsion: Vec<(BigInt, BigInt)>,
}

impl ClassCoordinates {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(|(v, _)| v.is_zero())
    }
}

/// A presentation of `H^d` with explicit generators.
///
/// Over ℤ the summands are ordered as the Smith form of the coboundaries
/// inside the cocycles: the torsion summands `ℤ/t_i` first, then the free
/// ones.  Over a field the generators form a basis.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    degree: usize,
    coefficients: Coefficients,
    inner: BasisData,
}

#[derive(Clone, Debug)]
enum BasisData {
    Integral {
        /// Kernel coordinates: rows `r..` of `V⁻¹` for `δ_d`.
        to_kernel: DenseIntMatrix,
        /// `U` of the Smith form of the coboundaries in kernel coordinates.
        u: DenseIntMatrix,
        /// Moduli of the summands, `None` for free ones.
        moduli: Vec<Option<BigInt>>,
        generators: Vec<Vec<BigInt>>,
    },
    Field {
        p: u64,
        echelon: Echelon,
        generators: Vec<Vec<u64>>,
    },
}

impl CohomologyBasis {
    /// Dense computation; meant for complexes with at most a few thousand
    /// cells per degree.
    pub fn compute(complex: &GradedMatrixComplex, degree: usize, coefficients: Coefficients) -> Result<Self> {
        homology::check_orientation(complex.index(), coefficients)?;
        if degree > complex.top_degree() {
            return Err(Error::DegreeOutOfRange {
                degree,
                max: complex.top_degree(),
            });
        }
        let b = complex.coboundary(degree);
        let a = complex.incoming(degree);
        let inner = match coefficients {
            Coefficients::Integers => integral_basis(&b, &a),
            Coefficients::Prime(p) => field_basis(&b, &a, p),
        };
        Ok(CohomologyBasis {
            degree,
            coefficients,
            inner,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Free rank (dimension over a field).
    pub fn rank(&self) -> usize {
        match &self.inner {
            BasisData::Integral { moduli, .. } => moduli.iter().filter(|m| m.is_none()).count(),
            BasisData::Field { generators, .. } => generators.len(),
        }
    }

    /// Torsion moduli, ascending.
    pub fn torsion(&self) -> Vec<BigInt> {
        match &self.inner {
            BasisData::Integral { moduli, .. } => moduli.iter().flatten().cloned().collect(),
            BasisData::Field { .. } => Vec::new(),
        }
    }

    /// One representative cocycle per summand, in summand order.
    pub fn generators(&self, complex: &GradedMatrixComplex) -> Vec<Cochain> {
        match &self.inner {
            BasisData::Integral { generators, .. } => generators
                .iter()
                .map(|g| Cochain::from_vector(complex, self.degree, self.coefficients, g))
                .collect(),
            BasisData::Field { generators, .. } => generators
                .iter()
                .map(|g| {
                    let v: Vec<BigInt> = g.iter().map(|&x| BigInt::from(x)).collect();
                    Cochain::from_vector(complex, self.degree, self.coefficients, &v)
                })
                .collect(),
        }
    }

    pub fn coordinates(&self, x: &Cochain, complex: &GradedMatrixComplex) -> Result<ClassCoordinates> {
        if x.degree != self.degree || x.coefficients != self.coefficients {
            return Err(Error::InvalidArgument("cochain does not match this basis".into()));
        }
        let v = require_cocycle(x, complex)?;
        match &self.inner {
            BasisData::Integral { to_kernel, u, moduli, .. } => {
                let y = to_kernel.mul_vec(&v);
                let z = u.mul_vec(&y);
                let mut out = ClassCoordinates {
                    free: Vec::new(),
                    torsion: Vec::new(),
                };
                for (zi, m) in z.into_iter().zip(moduli) {
                    match m {
                        Some(t) => out.torsion.push((zi.mod_floor(t), t.clone())),
                        None => out.free.push(zi),
                    }
                }
                Ok(out)
            }
            BasisData::Field { p, echelon, .. } => {
                let w: Vec<u64> = v
                    .iter()
                    .map(|x| x.mod_floor(&BigInt::from(*p)).to_u64().unwrap())
                    .collect();
                let (residual, tags) = echelon.reduce(w);
                if residual.iter().any(|&r| r != 0) {
                    return Err(Error::Consistency("cocycle outside the computed kernel".into()));
                }
                Ok(ClassCoordinates {
                    free: tags.into_iter().map(BigInt::from).collect(),
                    torsion: Vec::new(),
                })
            }
        }
    }
}

/// Coordinates with respect to a freshly computed basis.
pub fn class_coordinates(x: &Cochain, complex: &GradedMatrixComplex) -> Result<ClassCoordinates> {
    CohomologyBasis::compute(complex, x.degree, x.coefficients)?.coordinates(x, complex)
}

fn integral_basis(b: &algebra::SparseIntMatrix, a: &algebra::SparseIntMatrix) -> BasisData {
    let n = b.cols();
    let sb = algebra::smith_normal_form(b, true);
    let tb = sb.transforms.expect("requested");
    let r = sb.rank;
    let kernel = tb.v.col_block(r);
    let to_kernel = tb.v_inv.row_block(r);
    let k = n - r;
    // coboundaries in kernel coordinates
    let ad = a.to_dense();
    let x = to_kernel.mul(&ad);
    let sx = algebra::smith_normal_form(&dense_to_sparse(&x), true);
    let tx = sx.transforms.expect("requested");
    let mut moduli: Vec<Option<BigInt>> = sx
        .invariant_factors
        .iter()
        .map(|d| Some(d.clone()))
        .collect();
    moduli.resize(k, None);
    let gens_matrix = kernel.mul(&tx.u_inv);
    let keep: Vec<usize> = (0..k).filter(|&i| moduli[i].as_ref().map_or(true, |d| !d.is_one())).collect();
    let generators = keep.iter().map(|&i| gens_matrix.column(i)).collect();
    // drop unit summands from the coordinate map as well
    let mut u = DenseIntMatrix::zeros(keep.len(), k);
    for (row, &i) in keep.iter().enumerate() {
        for c in 0..k {
            u.set(row, c, tx.u.get(i, c).clone());
        }
    }
    let moduli = keep.iter().map(|&i| moduli[i].clone()).collect();
    BasisData::Integral {
        to_kernel,
        u,
        moduli,
        generators,
    }
}

fn dense_to_sparse(m: &DenseIntMatrix) -> algebra::SparseIntMatrix {
    let entries = (0..m.rows())
        .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
        .filter(|&(r, c)| !m.get(r, c).is_zero())
        .map(|(r, c)| (r, c, m.get(r, c).clone()));
    algebra::SparseIntMatrix::from_triplets(m.rows(), m.cols(), entries).expect("in range")
}

/// Incrementally built row echelon basis over `F_p`, tracking how each
/// stored vector combines the tagged generators.
#[derive(Clone, Debug)]
struct Echelon {
    p: u64,
    tags: usize,
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
}

impl Echelon {
    fn new(p: u64, tags: usize) -> Self {
        Echelon {
            p,
            tags,
            rows: Vec::new(),
        }
    }

    fn reduce(&self, mut v: Vec<u64>) -> (Vec<u64>, Vec<u64>) {
        let p = self.p;
        let mut acc = vec![0u64; self.tags];
        for (pivot, row, tags) in &self.rows {
            let c = v[*pivot];
            if c == 0 {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x = (*x + p - (c * y) % p) % p;
            }
            for (x, y) in acc.iter_mut().zip(tags) {
                *x = (*x + c * y) % p;
            }
        }
        (v, acc)
    }

    /// Inserts `v` tagged by `tag`; returns whether it was independent.
    fn insert(&mut self, v: Vec<u64>, tag: Option<usize>) -> bool {
        let p = self.p;
        let (residual, acc) = self.reduce(v);
        let Some(pivot) = residual.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = mod_inverse(residual[pivot], p);
        let row: Vec<u64> = residual.iter().map(|&x| x * inv % p).collect();
        // stored = (tag - acc) / pivot value
        let mut tags: Vec<u64> = acc.iter().map(|&x| (p - x) % p).collect();
        if let Some(t) = tag {
            tags[t] = (tags[t] + 1) % p;
        }
        let tags = tags.into_iter().map(|x| x * inv % p).collect();
        self.rows.push((pivot, row, tags));
        true
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Basis of `{x : Bx = 0}` over `F_p`.
fn kernel_mod_p(b: &algebra::SparseIntMatrix, p: u64) -> Vec<Vec<u64>> {
    let n = b.cols();
    let pb = BigInt::from(p);
    let mut rows: Vec<Vec<u64>> = (0..b.rows())
        .map(|r| {
            let mut row = vec![0u64; n];
            for (c, v) in b.row(r) {
                row[c] = v.mod_floor(&pb).to_u64().unwrap();
            }
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut lead = 0;
    for col in 0..n {
        let Some(r) = (lead..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(lead, r);
        let inv = mod_inverse(rows[lead][col], p);
        for x in rows[lead].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = rows[lead].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != lead && row[col] != 0 {
                let c = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - c * y % p) % p;
                }
            }
        }
        pivot_cols.push(col);
        lead += 1;
    }
    let is_pivot: Vec<bool> = (0..n).map(|c| pivot_cols.contains(&c)).collect();
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = (p - rows[r][f]) % p;
            }
            v
        })
        .collect()
}

fn field_basis(b: &algebra::SparseIntMatrix, a: &algebra::SparseIntMatrix, p: u64) -> BasisData {
    let kernel = kernel_mod_p(b, p);
    let pb = BigInt::from(p);
    let n = b.cols();
    // at most one generator per kernel vector; tags are assigned lazily
    let mut echelon = Echelon::new(p, kernel.len());
    let at = a.transpose();
    for c in 0..at.rows() {
        let mut v = vec![0u64; n];
        for (r, x) in at.row(c) {
            v[r] = x.mod_floor(&pb).to_u64().unwrap();
        }
        echelon.insert(v, None);
    }
    let mut generators = Vec::new();
    for k in kernel {
        let tag = generators.len();
        if echelon.insert(k.clone(), Some(tag)) {
            generators.push(k);
        }
    }
    echelon.tags = generators.len();
    for row in &mut echelon.rows {
        row.2.truncate(generators.len());
    }
    BasisData::Field {
        p,
        echelon,
        generators,
    }
}

/// `merge(α, β)` on `[p1 + p2]`: the top strip of the lower picture and the
/// bottom strip of the upper one become a single strip.
fn merge(alpha: &[u8], beta: &[u8], out: &mut Images) {
    let p1 = alpha.len() - 1;
    let p2 = beta.len() - 1;
    out.clear();
    out.extend_from_slice(&alpha[..p1]);
    for y in 0..=p2 {
        out.push(if y == p2 { 0 } else { (p1 + beta[y] as usize) as u8 });
    }
}

/// The stacking product `x · y` for one boundary curve: `x` occupies the
/// lower band.  A pair of cells goes to the single stacked cell whose jumps
/// run through the lower picture first, with sign `(-1)^{p_1 q_2}`.
pub fn stack_product(x: &Cochain, y: &Cochain) -> Result<Cochain> {
    if x.index.n != 1 || y.index.n != 1 {
        return Err(Error::InvalidArgument(
            "the stacking product is defined for one boundary curve".into(),
        ));
    }
    if x.coefficients != y.coefficients {
        return Err(Error::InvalidArgument("coefficient rings differ".into()));
    }
    let index = ModuliIndex::new(x.index.g + y.index.g, 1, x.index.m + y.index.m)?;
    let mut out = Cochain::zero(index, x.degree + y.degree, x.coefficients);
    for (c1, v1) in &x.support {
        for (c2, v2) in &y.support {
            let (sign, cell) = stacked_cell(c1, c2);
            if !cell.is_nondegenerate(&index) {
                return Err(Error::Consistency(format!(
                    "stacking {c1} on {c2} gave the degenerate cell {cell}"
                )));
            }
            let coeff = v1 * v2;
            out.add_term(cell, if sign > 0 { coeff } else { -coeff });
        }
    }
    Ok(out)
}

/// `lower` stacked under `upper`: first the jumps of `lower` with `upper`
/// at rest, then those of `upper`.
pub fn stacked_cell(lower: &Cell, upper: &Cell) -> (i8, Cell) {
    let (q1, q2) = (lower.q(), upper.q());
    let p1 = lower.tableau().total_width();
    let p2 = upper.tableau().total_width();
    let q = q1 + q2;
    let mut images = Vec::with_capacity((q + 1) * (p1 + p2 + 1));
    let mut merged = Images::new();
    // σ_q first
    for k in (0..=q).rev() {
        let (k1, k2) = if k <= q1 { (k, 0) } else { (q1, k - q1) };
        merge(lower.raw(k1), upper.raw(k2), &mut merged);
        images.extend_from_slice(&merged);
    }
    let sign = if (p1 * q2) % 2 == 0 { 1 } else { -1 };
    (sign, Cell::from_raw(Tableau::single(p1 + p2), q, images))
}

/// The unit: the point cell of the disk.
pub fn unit(coefficients: Coefficients) -> Cochain {
    let index = ModuliIndex::new(0, 1, 0).expect("valid");
    let cell: Cell = "0;0;(0)".parse().expect("valid");
    Cochain::dual(index, cell, coefficients).expect("the point is non-degenerate")
}

/// The canonical fixture cell `(⟨0,2,1,3⟩ : ⟨0,2,3⟩⟨1⟩ : ⟨0,1,2,3⟩)` of the
/// torus with one boundary curve.
pub fn torus_five_cell() -> Cell {
    "2;3;(0,2,1,3)|(0,2,3)(1)|(0,1,2,3)".parse().expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::enumerate_nondegenerate;
    use num_traits::Signed;

    fn torus() -> GradedMatrixComplex {
        let ix = ModuliIndex::new(1, 1, 0).unwrap();
        GradedMatrixComplex::assemble(&enumerate_nondegenerate(&ix).unwrap()).unwrap()
    }

    #[test]
    fn merge_keeps_the_forced_cycle() {
        let mut out = Images::new();
        merge(&[1, 2, 0], &[1, 0], &mut out);
        assert_eq!(out.as_slice(), &[1, 2, 3, 0]);
        merge(&[0], &[1, 2, 0], &mut out);
        assert_eq!(out.as_slice(), &[1, 2, 0]);
        merge(&[1, 2, 0], &[0], &mut out);
        assert_eq!(out.as_slice(), &[1, 2, 0]);
    }

    #[test]
    fn stacked_torus_cells() {
        let d = torus_five_cell();
        let (sign, cell) = stacked_cell(&d, &d);
        assert_eq!(sign, 1);
        assert_eq!(cell.q(), 4);
        assert_eq!(cell.degree(), 10);
        assert!(cell.is_nondegenerate(&ModuliIndex::new(2, 1, 0).unwrap()));
    }

    #[test]
    fn dual_of_the_five_cell() {
        let c = torus();
        let x = Cochain::dual(*c.index(), torus_five_cell(), Coefficients::Integers).unwrap();
        assert!(is_cocycle(&x, &c).unwrap());
        assert_eq!(class_order(&x, &c).unwrap(), Order::Infinite);
        let coords = class_coordinates(&x, &c).unwrap();
        assert_eq!(coords.free.len(), 1);
        assert_eq!(coords.free[0].abs(), BigInt::one());
        assert!(coords.torsion.is_empty());
    }

    #[test]
    fn coboundaries_have_zero_coordinates() {
        let c = torus();
        for d in 0..c.top_degree() {
            for cell in c.basis(d) {
                let y = Cochain::dual(*c.index(), cell.clone(), Coefficients::Integers).unwrap();
                let dy = coboundary(&y, &c).unwrap();
                assert!(is_cocycle(&dy, &c).unwrap());
                assert!(class_coordinates(&dy, &c).unwrap().is_zero());
                assert_eq!(class_order(&dy, &c).unwrap(), Order::finite(1));
            }
        }
    }

    #[test]
    fn non_cocycles_are_rejected() {
        let c = torus();
        let cell = c.basis(4)[0].clone();
        let y = Cochain::dual(*c.index(), cell, Coefficients::Integers).unwrap();
        assert!(!is_cocycle(&y, &c).unwrap());
        assert!(matches!(class_order(&y, &c), Err(Error::NotACocycle)));
    }

    #[test]
    fn json_round_trip() {
        let c = torus();
        let x = Cochain::dual(*c.index(), torus_five_cell(), Coefficients::Integers).unwrap();
        let s = x.to_json().unwrap();
        assert_eq!(
            s,
            r#"{"g":1,"n":1,"m":0,"degree":5,"support":[{"cell":"2;3;(0,2,1,3)|(0,2,3)(1)|(0,1,2,3)","coeff":1}]}"#
        );
        assert_eq!(Cochain::from_json(&s, Coefficients::Integers).unwrap(), x);
    }

    #[test]
    fn unit_is_neutral_on_cochains() {
        let x = Cochain::dual(
            ModuliIndex::new(1, 1, 0).unwrap(),
            torus_five_cell(),
            Coefficients::Integers,
        )
        .unwrap();
        let u = unit(Coefficients::Integers);
        assert_eq!(stack_product(&u, &x).unwrap(), x);
        assert_eq!(stack_product(&x, &u).unwrap(), x);
    }
}
