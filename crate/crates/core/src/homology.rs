//! The relative cochain complex of the non-degenerate cells and its
//! cohomology, reported as homology of the moduli space via
//! `H_k(𝔐) ≅ H^{3h-k}(P, P')`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{self, Coefficients, SparseIntMatrix};
use crate::complex::{self, Cell, CellSet, ModuliIndex};
use crate::error::{Error, Result};

/// Per-degree bases and coboundary matrices `δ_d : C^d → C^{d+1}`.
///
/// `δ_d` has one row per cell of degree `d + 1` and one column per cell of
/// degree `d`; faces landing on degenerate cells are dropped.
#[derive(Clone, Debug)]
pub struct GradedMatrixComplex {
    index: ModuliIndex,
    bases: Vec<Vec<Cell>>,
    coboundaries: Vec<SparseIntMatrix>,
}

impl GradedMatrixComplex {
    /// Builds all coboundary matrices and checks `δ ∘ δ = 0`.
    pub fn assemble(cells: &CellSet) -> Result<Self> {
        Self::from_cells(cells.clone())
    }

    /// Like [`assemble`](Self::assemble), but moves the cells into the bases.
    pub fn from_cells(cells: CellSet) -> Result<Self> {
        let (index, bases) = split_bases(cells)?;
        let coboundaries = (0..bases.len())
            .map(|d| coboundary_matrix(&bases, d))
            .collect::<Result<Vec<_>>>()?;
        for d in 1..coboundaries.len() {
            check_pair(&bases, d, &coboundaries[d], &coboundaries[d - 1])?;
        }
        Ok(GradedMatrixComplex {
            index,
            bases,
            coboundaries,
        })
    }

    pub fn index(&self) -> &ModuliIndex {
        &self.index
    }

    /// Top cochain degree `3h`.
    pub fn top_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, d: usize) -> &[Cell] {
        self.bases.get(d).map_or(&[], |b| b.as_slice())
    }

    pub fn position(&self, d: usize, cell: &Cell) -> Option<usize> {
        self.bases.get(d)?.binary_search(cell).ok()
    }

    pub fn cells_per_degree(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// `δ_d`; past the top degree this is an empty matrix.
    pub fn coboundary(&self, d: usize) -> SparseIntMatrix {
        match self.coboundaries.get(d) {
            Some(m) => m.clone(),
            None => SparseIntMatrix::zeros(0, self.basis(d).len()),
        }
    }

    pub fn coboundary_ref(&self, d: usize) -> Option<&SparseIntMatrix> {
        self.coboundaries.get(d)
    }

    /// `δ_{d-1}`, whose image is the coboundaries in degree `d`.
    pub fn incoming(&self, d: usize) -> SparseIntMatrix {
        if d == 0 {
            SparseIntMatrix::zeros(self.basis(0).len(), 0)
        } else {
            self.coboundary(d - 1)
        }
    }

    /// `H^d(P, P')` for every `d` in `0..=3h`.
    pub fn cohomology(&self, coefficients: Coefficients) -> Result<Vec<HomologyGroup>> {
        check_orientation(&self.index, coefficients)?;
        let reductions: Vec<(usize, Vec<u64>)> = self
            .coboundaries
            .par_iter()
            .map(|m| reduce(m, coefficients))
            .collect::<Result<_>>()?;
        Ok(cohomology_groups(&self.cells_per_degree(), &reductions))
    }

    /// Homology of the moduli space, `H_k = H^{3h-k}`.
    pub fn homology_table(&self, coefficients: Coefficients) -> Result<HomologyTable> {
        Ok(HomologyTable::from_cohomology(
            self.index,
            coefficients,
            self.cohomology(coefficients)?,
            self.cells_per_degree(),
        ))
    }
}

/// The homology table straight from the cells.  Each coboundary matrix is
/// reduced right after it is built and checked against its predecessor, so
/// at most two matrices are alive at a time.
///
/// Degrees are reduced upwards with clearing.  The unit pivots of `δ_{d-1}`
/// pair some cells of degree `d` with cells of degree `d-1` through a
/// unimodular block; those cells span a complement to `im δ_{d-1}` that `δ_d`
/// kills, so their columns of `δ_d` are dropped without changing its image.
/// What is left is reduced as a transpose, where almost every row becomes a
/// pivot.
pub fn homology_from_cells(cells: CellSet, coefficients: Coefficients) -> Result<HomologyTable> {
    check_orientation(cells.index(), coefficients)?;
    let (index, mut bases) = split_bases(cells)?;
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    let mut reductions = Vec::with_capacity(bases.len());
    let mut previous: Option<SparseIntMatrix> = None;
    let mut cleared: Vec<usize> = Vec::new();
    for d in 0..bases.len() {
        let m = coboundary_matrix(&bases, d)?;
        if let Some(p) = previous.take() {
            check_pair(&bases, d, &m, &p)?;
            bases[d - 1] = Vec::new();
        }
        let r = algebra::reduce_consuming(m.transpose_without(&cleared), coefficients, || {
            m.transpose_without(&cleared)
        })?;
        cleared = r.unit_pivots.iter().map(|(_, c)| *c).collect();
        reductions.push((r.rank, torsion_u64(&r.torsion)?));
        previous = Some(m);
    }
    drop(bases);
    let groups = cohomology_groups(&dims, &reductions);
    Ok(HomologyTable::from_cohomology(index, coefficients, groups, dims))
}

fn torsion_u64(t: &[BigInt]) -> Result<Vec<u64>> {
    t.iter()
        .map(|t| {
            t.to_u64()
                .ok_or_else(|| Error::Consistency(format!("torsion {t} exceeds 64 bits")))
        })
        .collect()
}

/// Per-degree bases, each sorted so positions can be found by binary search.
fn split_bases(cells: CellSet) -> Result<(ModuliIndex, Vec<Vec<Cell>>)> {
    let index = *cells.index();
    let top = index.dimension();
    let mut bases: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
    for (b, v) in cells.into_by_bidegree() {
        let d = b.total_degree();
        if d > top {
            return Err(Error::Consistency(format!(
                "cells above the top degree {top}"
            )));
        }
        bases[d].extend(v);
    }
    for b in &mut bases {
        if !b.is_sorted() {
            b.par_sort_unstable();
        }
    }
    Ok((index, bases))
}

fn coboundary_matrix(bases: &[Vec<Cell>], d: usize) -> Result<SparseIntMatrix> {
    let rows: &[Cell] = bases.get(d + 1).map_or(&[], |b| b.as_slice());
    let cols = &bases[d];
    let data: Vec<Vec<(u32, i64)>> = rows
        .par_iter()
        .map(|cell| {
            let mut out = Vec::new();
            cell.for_each_face(|sign, face| {
                if let Ok(c) = cols.binary_search(&face) {
                    out.push((c as u32, sign as i64));
                }
            });
            out.shrink_to_fit();
            out
        })
        .collect();
    SparseIntMatrix::from_rows(cols.len(), data)
}

/// `δ_d ∘ δ_{d-1} = 0`, row by row so the product is never held in memory.
fn check_pair(bases: &[Vec<Cell>], d: usize, a: &SparseIntMatrix, b: &SparseIntMatrix) -> Result<()> {
    let bad = (0..a.rows()).into_par_iter().find_map_any(|r| {
        let mut acc: Vec<(usize, BigInt)> = Vec::new();
        for (k, x) in a.row(r) {
            acc.extend(b.row(k).map(|(c, y)| (c, &x * y)));
        }
        acc.sort_by_key(|(c, _)| *c);
        acc.chunk_by(|p, q| p.0 == q.0)
            .map(|run| (run[0].0, run.iter().map(|(_, v)| v).sum::<BigInt>()))
            .find(|(_, v)| *v != BigInt::from(0))
            .map(|(c, v)| (r, c, v))
    });
    match bad {
        Some((r, c, v)) => Err(Error::Consistency(format!(
            "δ∘δ ≠ 0 from degree {}: entry {v} between {} and {}",
            d - 1,
            bases[d - 1][c],
            bases[d + 1][r]
        ))),
        None => Ok(()),
    }
}

/// Betti numbers and torsion from the ranks and torsion of every `δ_d`.
fn cohomology_groups(dims: &[usize], reductions: &[(usize, Vec<u64>)]) -> Vec<HomologyGroup> {
    (0..dims.len())
        .map(|d| {
            let (in_rank, torsion) = if d == 0 {
                (0, Vec::new())
            } else {
                reductions[d - 1].clone()
            };
            HomologyGroup {
                degree: d,
                betti: dims[d] - reductions[d].0 - in_rank,
                torsion,
            }
        })
        .collect()
}

/// Rank and torsion (empty over fields) of one coboundary matrix.
fn reduce(m: &SparseIntMatrix, coefficients: Coefficients) -> Result<(usize, Vec<u64>)> {
    let r = algebra::reduce(m, coefficients)?;
    Ok((r.rank, torsion_u64(&r.torsion)?))
}

/// Integral and odd-characteristic coefficients need the orientation system
/// to be constant, which holds for at most one puncture.
pub fn check_orientation(index: &ModuliIndex, coefficients: Coefficients) -> Result<()> {
    if index.m >= 2 && coefficients != Coefficients::F2 {
        return Err(Error::UnsupportedOrientation {
            m: index.m,
            coefficients: coefficients.tag(),
        });
    }
    Ok(())
}

/// One homology group `ℤ^betti ⊕ ⊕ ℤ/t` (or a vector space of dimension `betti`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Number of torsion summands divisible by `p`.
    pub fn p_torsion_rank(&self, p: u64) -> usize {
        self.torsion.iter().filter(|t| *t % p == 0).count()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|&&x| x == t).count();
            parts.push(if run == 1 {
                format!("Z{t}")
            } else {
                format!("Z{t}^{run}")
            });
            i += run;
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// `H_k(𝔐_{g,n}^m)` for `k = 0..=3h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub index: ModuliIndex,
    pub coefficients: Coefficients,
    pub groups: Vec<HomologyGroup>,
    pub cells_per_degree: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    g: usize,
    n: usize,
    m: usize,
    coefficients: String,
    h: usize,
    homology: Vec<HomologyGroup>,
    cells_per_degree: Vec<usize>,
}

impl HomologyTable {
    /// Reindexes cohomology of the cell complex as homology, `H_k = H^{3h-k}`.
    fn from_cohomology(
        index: ModuliIndex,
        coefficients: Coefficients,
        cohomology: Vec<HomologyGroup>,
        cells_per_degree: Vec<usize>,
    ) -> Self {
        let top = cohomology.len() - 1;
        let mut groups: Vec<HomologyGroup> = cohomology
            .into_iter()
            .map(|g| HomologyGroup {
                degree: top - g.degree,
                ..g
            })
            .collect();
        groups.sort_by_key(|g| g.degree);
        HomologyTable {
            index,
            coefficients,
            groups,
            cells_per_degree,
        }
    }

    pub fn group(&self, k: usize) -> Option<&HomologyGroup> {
        self.groups.get(k)
    }

    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    /// Largest degree with a non-zero group.
    pub fn top_nonzero(&self) -> Option<usize> {
        self.groups.iter().rposition(|g| !g.is_zero())
    }

    pub fn to_json(&self) -> Result<String> {
        let j = TableJson {
            g: self.index.g,
            n: self.index.n,
            m: self.index.m,
            coefficients: self.coefficients.tag(),
            h: self.index.h(),
            homology: self.groups.clone(),
            cells_per_degree: self.cells_per_degree.clone(),
        };
        Ok(serde_json::to_string(&j)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: TableJson = serde_json::from_str(text)?;
        let index = ModuliIndex::new(j.g, j.n, j.m)?;
        Ok(HomologyTable {
            index,
            coefficients: j.coefficients.parse()?,
            groups: j.homology,
            cells_per_degree: j.cells_per_degree,
        })
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "H_*(M; {}) for {} (h = {})", self.coefficients, self.index, self.index.h())?;
        for g in &self.groups {
            writeln!(f, "  H_{:<2} = {}", g.degree, g)?;
        }
        Ok(())
    }
}

/// Enumerates, assembles and computes in one go.
pub fn homology_groups(index: &ModuliIndex, coefficients: Coefficients) -> Result<HomologyTable> {
    check_orientation(index, coefficients)?;
    homology_from_cells(complex::enumerate_nondegenerate(index)?, coefficients)
}

/// Integral cohomology of one column: a fixed tableau, varying `q`, with
/// only the faces `∂'_k` (sign `(-1)^k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnReport {
    pub widths: Vec<usize>,
    /// Number of cells for each `q = 0..=h`.
    pub cells_per_q: Vec<usize>,
    /// `H^q` of the column for each `q = 0..=h`.
    pub cohomology: Vec<HomologyGroup>,
    pub top_degree: usize,
    pub concentrated: bool,
}

/// Checks whether the column with the given widths has its cohomology
/// concentrated in degree `q = h`.
pub fn column_concentration(cells: &CellSet, widths: &[usize]) -> Result<ColumnReport> {
    let h = cells.index().h();
    let mut by_q: Vec<Vec<&Cell>> = vec![Vec::new(); h + 1];
    for (b, v) in cells.by_bidegree() {
        if b.widths == widths {
            by_q[b.q].extend(v.iter());
        }
    }
    let positions: Vec<HashMap<&Cell, usize>> = by_q
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, c)| (*c, i)).collect())
        .collect();
    let mut ranks_torsion = Vec::with_capacity(h + 1);
    for q in 0..=h {
        let rows: &[&Cell] = by_q.get(q + 1).map_or(&[], |v| v.as_slice());
        let mut entries: Vec<(usize, usize, i64)> = Vec::new();
        for (r, cell) in rows.iter().enumerate() {
            for k in 0..=cell.q() {
                let face = cell.horizontal_face(k).expect("q >= 1");
                if let Some(&c) = positions[q].get(&face) {
                    entries.push((r, c, if k % 2 == 0 { 1 } else { -1 }));
                }
            }
        }
        let m = SparseIntMatrix::from_triplets(rows.len(), by_q[q].len(), entries)?;
        ranks_torsion.push(reduce(&m, Coefficients::Integers)?);
    }
    let cohomology: Vec<HomologyGroup> = (0..=h)
        .map(|q| {
            let (in_rank, torsion) = if q == 0 {
                (0, Vec::new())
            } else {
                ranks_torsion[q - 1].clone()
            };
            HomologyGroup {
                degree: q,
                betti: by_q[q].len() - ranks_torsion[q].0 - in_rank,
                torsion,
            }
        })
        .collect();
    let concentrated = cohomology.iter().all(|g| g.degree == h || g.is_zero());
    Ok(ColumnReport {
        widths: widths.to_vec(),
        cells_per_q: by_q.iter().map(Vec::len).collect(),
        cohomology,
        top_degree: h,
        concentrated,
    })
}

/// Column reports for every tableau that carries cells.
pub fn all_columns(cells: &CellSet) -> Result<Vec<ColumnReport>> {
    let mut widths: Vec<Vec<usize>> = cells.by_bidegree().keys().map(|b| b.widths.clone()).collect();
    widths.sort();
    widths.dedup();
    widths
        .par_iter()
        .map(|w| column_concentration(cells, w))
        .collect()
}

/// Coefficient vector of a cochain against the basis of degree `d`.
pub(crate) fn dense_vector(complex: &GradedMatrixComplex, d: usize, support: &[(Cell, BigInt)]) -> Result<Vec<BigInt>> {
    let mut v = vec![BigInt::from(0); complex.basis(d).len()];
    for (cell, coeff) in support {
        let i = complex.position(d, cell).ok_or_else(|| {
            Error::InvalidArgument(format!("{cell} is not a non-degenerate cell of degree {d}"))
        })?;
        v[i] += coeff;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(g: usize, n: usize, m: usize) -> ModuliIndex {
        ModuliIndex::new(g, n, m).unwrap()
    }

    #[test]
    fn point() {
        let t = homology_groups(&ix(0, 1, 0), Coefficients::Integers).unwrap();
        assert_eq!(t.groups.len(), 1);
        assert_eq!(t.groups[0].betti, 1);
    }

    #[test]
    fn torus_with_boundary() {
        let t = homology_groups(&ix(1, 1, 0), Coefficients::Integers).unwrap();
        assert_eq!(t.betti(), vec![1, 1, 0, 0, 0, 0, 0]);
        assert!(t.groups.iter().all(|g| g.torsion.is_empty()));
        assert_eq!(t.cells_per_degree, vec![0, 0, 0, 0, 2, 4, 2]);
    }

    #[test]
    fn orientation_gate() {
        let err = homology_groups(&ix(0, 1, 2), Coefficients::Integers).unwrap_err();
        assert!(matches!(err, Error::UnsupportedOrientation { m: 2, .. }));
        assert!(homology_groups(&ix(0, 1, 2), Coefficients::Prime(3)).is_err());
        assert!(homology_groups(&ix(0, 1, 2), Coefficients::F2).is_ok());
    }

    #[test]
    fn group_display() {
        let g = HomologyGroup {
            degree: 3,
            betti: 1,
            torsion: vec![2, 2, 3],
        };
        assert_eq!(g.to_string(), "Z+Z2^2+Z3");
        assert_eq!(HomologyGroup { degree: 0, betti: 0, torsion: vec![] }.to_string(), "0");
    }

    #[test]
    fn json_shape() {
        let t = homology_groups(&ix(1, 1, 0), Coefficients::Integers).unwrap();
        let s = t.to_json().unwrap();
        assert!(s.starts_with(r#"{"g":1,"n":1,"m":0,"coefficients":"Z","h":2,"homology":[{"degree":0,"betti":1,"torsion":[]}"#));
        assert_eq!(HomologyTable::from_json(&s).unwrap(), t);
    }

    #[test]
    fn torus_columns() {
        let cells = complex::enumerate_nondegenerate(&ix(1, 1, 0)).unwrap();
        let three = column_concentration(&cells, &[3]).unwrap();
        assert!(three.concentrated);
        assert_eq!(three.cells_per_q, vec![0, 1, 3]);
        assert_eq!(three.cohomology[2].betti, 2);
        assert!(column_concentration(&cells, &[2]).unwrap().concentrated);
        assert!(all_columns(&cells).unwrap().iter().all(|c| c.concentrated));
    }
}
