//! Cells of the bar-type multisimplicial complex `P_{g,n}^m` and the
//! enumeration of its non-degenerate part.
//!
//! A cell `(σ_q : … : σ_0)` of bidegree `(q; p_1, …, p_n)` is a tuple of
//! permutations of the tableau `[p_1, …, p_n]`.  It belongs to the complex
//! when the total norm of its jumps `σ_k σ_{k-1}⁻¹` is at most `h` and
//! `σ_q` has at most `m + n` cycles.  The non-degenerate cells are the ones
//! satisfying the seven conditions checked by [`Cell::is_nondegenerate`];
//! the relative cochain complex lives on them.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{self, Images, Tableau, TableauPermutation};

/// Largest `h` enumerated unless the caller raises the budget.
pub const DEFAULT_BUDGET: usize = 5;

/// Header tag of the cell cache format.
pub const CACHE_MAGIC: &str = "slitkit-cells v1";

/// `(g, n, m)`: genus, boundary curves, punctures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuliIndex {
    pub g: usize,
    pub n: usize,
    pub m: usize,
}

impl ModuliIndex {
    pub fn new(g: usize, n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "at least one boundary curve is required".into(),
            ));
        }
        Ok(ModuliIndex { g, n, m })
    }

    /// `h = 2g - 2 + 2n + m`; zero only for the disk `(0, 1, 0)`.
    pub fn h(&self) -> usize {
        2 * self.g + 2 * self.n + self.m - 2
    }

    /// Dimension `3h` of the slit domain space.
    pub fn dimension(&self) -> usize {
        3 * self.h()
    }

    pub fn is_exceptional(&self) -> bool {
        self.g == 0 && self.n == 1 && self.m == 0
    }
}

impl fmt::Display for ModuliIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={} n={} m={}", self.g, self.n, self.m)
    }
}

/// `(q; p_1, …, p_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub q: usize,
    pub widths: Vec<usize>,
}

impl Bidegree {
    pub fn total_degree(&self) -> usize {
        self.q + self.widths.iter().sum::<usize>()
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.widths.iter().map(|p| p.to_string()).collect();
        write!(f, "({};{})", self.q, w.join(","))
    }
}

/// A bar cell `(σ_q : … : σ_0)`.
///
/// The permutations are packed into one byte array in serialisation order
/// (`σ_q` first), which is also the order used for sorting.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    tableau: Tableau,
    q: u8,
    images: Box<[u8]>,
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.q
            .cmp(&other.q)
            .then_with(|| self.tableau.cmp(&other.tableau))
            .then_with(|| self.images.cmp(&other.images))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// One signed face of a cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub sign: i8,
    pub cell: Cell,
}

impl Cell {
    /// Builds a cell from `(σ_q, …, σ_0)`.
    pub fn from_perms(perms: &[TableauPermutation]) -> Result<Cell> {
        let first = perms
            .first()
            .ok_or_else(|| Error::InvalidArgument("a cell needs at least σ_0".into()))?;
        let tableau = first.tableau().clone();
        let mut images = Vec::with_capacity(perms.len() * tableau.symbol_count());
        for sigma in perms {
            if sigma.tableau() != &tableau {
                return Err(Error::TableauMismatch {
                    left: tableau.to_string(),
                    right: sigma.tableau().to_string(),
                });
            }
            images.extend_from_slice(sigma.images());
        }
        Ok(Cell {
            tableau,
            q: (perms.len() - 1) as u8,
            images: images.into_boxed_slice(),
        })
    }

    pub(crate) fn from_raw(tableau: Tableau, q: usize, images: Vec<u8>) -> Cell {
        debug_assert_eq!(images.len(), (q + 1) * tableau.symbol_count());
        Cell {
            tableau,
            q: q as u8,
            images: images.into_boxed_slice(),
        }
    }

    pub fn q(&self) -> usize {
        self.q as usize
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    pub fn bidegree(&self) -> Bidegree {
        Bidegree {
            q: self.q(),
            widths: self.tableau.widths(),
        }
    }

    /// Total degree `q + p_1 + … + p_n`.
    pub fn degree(&self) -> usize {
        self.q() + self.tableau.total_width()
    }

    /// Images of `σ_k`.
    pub fn raw(&self, k: usize) -> &[u8] {
        let s = self.tableau.symbol_count();
        let slot = self.q() - k;
        &self.images[slot * s..(slot + 1) * s]
    }

    pub fn perm(&self, k: usize) -> TableauPermutation {
        TableauPermutation::from_raw(self.tableau.clone(), self.raw(k))
    }

    /// `(σ_q, …, σ_0)`.
    pub fn perms(&self) -> Vec<TableauPermutation> {
        (0..=self.q()).rev().map(|k| self.perm(k)).collect()
    }

    /// `σ_k σ_{k-1}⁻¹` for `k ≥ 1`.
    pub fn jump(&self, k: usize) -> TableauPermutation {
        let mut inv = Images::new();
        perm::inverse_into(self.raw(k - 1), &mut inv);
        let mut out = Images::new();
        perm::compose_into(self.raw(k), &inv, &mut out);
        TableauPermutation::from_raw(self.tableau.clone(), &out)
    }

    /// `Σ_{k=1}^q N(σ_k σ_{k-1}⁻¹)`.
    pub fn total_norm(&self) -> usize {
        (1..=self.q())
            .map(|k| perm::distance(self.raw(k), self.raw(k - 1)))
            .sum()
    }

    /// `C(σ_q)`.
    pub fn top_cycle_count(&self) -> usize {
        perm::cycle_count(self.raw(self.q()))
    }

    pub fn is_bar_cell(&self, index: &ModuliIndex) -> bool {
        self.tableau.layers() == index.n
            && self.total_norm() <= index.h()
            && self.top_cycle_count() <= index.m + index.n
    }

    /// Conditions S1–S7 (plus membership in the complex).
    pub fn is_nondegenerate(&self, index: &ModuliIndex) -> bool {
        if !self.is_bar_cell(index) {
            return false;
        }
        let t = &self.tableau;
        let n = t.layers();
        let zeros: Vec<usize> = (1..=n).map(|i| t.offset(i)).collect();
        let tops: Vec<usize> = (1..=n).map(|i| t.offset(i) + t.width(i)).collect();

        // S1
        let mut expected = Images::new();
        perm::layer_cycles_into(t.raw_widths(), &mut expected);
        if self.raw(0) != expected.as_slice() {
            return false;
        }
        for k in 0..=self.q() {
            let sigma = self.raw(k);
            // S2
            if (0..n).any(|i| sigma[tops[i]] as usize != zeros[i]) {
                return false;
            }
            // S3
            if !zeros_in_distinct_cycles(sigma, &zeros) {
                return false;
            }
        }
        // S4
        if self.top_cycle_count() != n + index.m {
            return false;
        }
        // S5
        if self.total_norm() != index.h() {
            return false;
        }
        // S6
        if (1..=self.q()).any(|k| self.raw(k) == self.raw(k - 1)) {
            return false;
        }
        for i in 1..=n {
            for j in 0..t.width(i) {
                let x = t.offset(i) + j;
                if (0..=self.q()).all(|k| self.raw(k)[x] as usize == x + 1) {
                    return false;
                }
            }
        }
        // S7
        layers_connected(t, (0..=self.q()).map(|k| self.raw(k)))
    }

    /// All faces `∂'_k` and `∂^i_j` with their signs in the total complex:
    /// `∂'_k` carries `(-1)^k`, `∂^i_j` carries
    /// `(-1)^{(q+1) + p_1 + … + p_{i-1} + j}`.
    pub fn boundary_faces(&self) -> Vec<Face> {
        let mut out = Vec::new();
        self.for_each_face(|sign, cell| out.push(Face { sign, cell }));
        out
    }

    pub fn for_each_face(&self, mut f: impl FnMut(i8, Cell)) {
        let q = self.q();
        let s = self.tableau.symbol_count();
        if q >= 1 {
            for k in 0..=q {
                let mut images = Vec::with_capacity(q * s);
                for kk in (0..=q).rev().filter(|&kk| kk != k) {
                    images.extend_from_slice(self.raw(kk));
                }
                let sign = if k % 2 == 0 { 1 } else { -1 };
                f(sign, Cell::from_raw(self.tableau.clone(), q - 1, images));
            }
        }
        let mut before = 0;
        let mut scratch = Images::new();
        for i in 1..=self.tableau.layers() {
            let p = self.tableau.width(i);
            if p >= 1 {
                let smaller = self.tableau.without_one(i).expect("p >= 1");
                for j in 0..=p {
                    let index = self.tableau.offset(i) + j;
                    let mut images = Vec::with_capacity((q + 1) * (s - 1));
                    for kk in (0..=q).rev() {
                        perm::delete_into(self.raw(kk), index, &mut scratch);
                        images.extend_from_slice(&scratch);
                    }
                    let exponent = q + 1 + before + j;
                    let sign = if exponent % 2 == 0 { 1 } else { -1 };
                    f(sign, Cell::from_raw(smaller.clone(), q, images));
                }
            }
            before += p;
        }
    }

    /// `∂'_k`.
    pub fn horizontal_face(&self, k: usize) -> Option<Cell> {
        if self.q() == 0 || k > self.q() {
            return None;
        }
        let perms: Vec<_> = (0..=self.q())
            .rev()
            .filter(|&kk| kk != k)
            .map(|kk| self.perm(kk))
            .collect();
        Some(Cell::from_perms(&perms).expect("same tableau"))
    }

    /// `∂^i_j`.
    pub fn deletion_face(&self, layer: usize, position: usize) -> Result<Cell> {
        let perms = (0..=self.q())
            .rev()
            .map(|k| self.perm(k).delete(layer, position))
            .collect::<Result<Vec<_>>>()?;
        Cell::from_perms(&perms)
    }

    /// Bar notation `(σ_q:…:σ_0)`.
    pub fn bar_notation(&self) -> String {
        let parts: Vec<String> = self.perms().iter().map(|p| p.to_string()).collect();
        format!("({})", parts.join(":"))
    }
}

/// Cache-line form `q;p_1[,p_2…];σ_q|…|σ_0`.
impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.tableau.widths().iter().map(|p| p.to_string()).collect();
        let perms: Vec<String> = self.perms().iter().map(|p| p.to_string()).collect();
        write!(f, "{};{};{}", self.q, w.join(","), perms.join("|"))
    }
}

impl FromStr for Cell {
    type Err = Error;

    fn from_str(line: &str) -> Result<Cell> {
        let mut parts = line.trim().splitn(3, ';');
        let (q, widths, perms) = match (parts.next(), parts.next(), parts.next()) {
            (Some(q), Some(w), Some(p)) => (q, w, p),
            _ => return Err(Error::Parse(format!("malformed cell line {line:?}"))),
        };
        let q: usize = q
            .parse()
            .map_err(|_| Error::Parse(format!("bad q in {line:?}")))?;
        let widths = widths
            .split(',')
            .map(|w| w.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("bad widths in {line:?}")))?;
        let tableau = Tableau::new(&widths)?;
        let perms = perms
            .split('|')
            .map(|p| TableauPermutation::parse_on(&tableau, p))
            .collect::<Result<Vec<_>>>()?;
        if perms.len() != q + 1 {
            return Err(Error::Parse(format!(
                "expected {} permutations in {line:?}",
                q + 1
            )));
        }
        Cell::from_perms(&perms)
    }
}

/// Conditions (i) and (ii) on a raw tuple `(σ_q, …, σ_0)`.
pub fn is_bar_cell(perms: &[TableauPermutation], index: &ModuliIndex) -> Result<bool> {
    Ok(Cell::from_perms(perms)?.is_bar_cell(index))
}

fn zeros_in_distinct_cycles(sigma: &[u8], zeros: &[usize]) -> bool {
    if zeros.len() < 2 {
        return true;
    }
    for &z in zeros {
        let mut x = sigma[z] as usize;
        while x != z {
            if zeros.contains(&x) {
                return false;
            }
            x = sigma[x] as usize;
        }
    }
    true
}

fn layers_connected<'a>(t: &Tableau, perms: impl Iterator<Item = &'a [u8]>) -> bool {
    let n = t.layers();
    if n == 1 {
        return true;
    }
    let layer_of: Vec<usize> = (0..t.symbol_count()).map(|x| t.symbol_at(x).layer - 1).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for sigma in perms {
        for (x, &y) in sigma.iter().enumerate() {
            let (a, b) = (find(&mut parent, layer_of[x]), find(&mut parent, layer_of[y as usize]));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let root = find(&mut parent, 0);
    (1..n).all(|i| find(&mut parent, i) == root)
}

/// The non-degenerate cells of `P_{g,n}^m`, grouped by bidegree and sorted.
#[derive(Clone, Debug)]
pub struct CellSet {
    index: ModuliIndex,
    cells: BTreeMap<Bidegree, Vec<Cell>>,
}

impl CellSet {
    /// Groups and sorts the given cells.  Duplicates are removed.
    pub fn from_cells(index: ModuliIndex, cells: impl IntoIterator<Item = Cell>) -> CellSet {
        let mut grouped: BTreeMap<Bidegree, Vec<Cell>> = BTreeMap::new();
        for c in cells {
            grouped.entry(c.bidegree()).or_default().push(c);
        }
        for v in grouped.values_mut() {
            v.sort_unstable();
            v.dedup();
        }
        CellSet {
            index,
            cells: grouped,
        }
    }

    pub fn index(&self) -> &ModuliIndex {
        &self.index
    }

    pub fn len(&self) -> usize {
        self.cells.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cell> {
        self.cells.values().flatten()
    }

    pub fn by_bidegree(&self) -> &BTreeMap<Bidegree, Vec<Cell>> {
        &self.cells
    }

    pub fn into_by_bidegree(self) -> BTreeMap<Bidegree, Vec<Cell>> {
        self.cells
    }

    pub fn bidegree_counts(&self) -> BTreeMap<Bidegree, usize> {
        self.cells.iter().map(|(b, v)| (b.clone(), v.len())).collect()
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.cells
            .get(&cell.bidegree())
            .is_some_and(|v| v.binary_search(cell).is_ok())
    }

    /// Number of cells in each total degree `0..=3h`.
    pub fn counts_per_degree(&self) -> Vec<usize> {
        let mut counts = vec![0; self.index.dimension() + 1];
        for (b, v) in &self.cells {
            let d = b.total_degree();
            if d >= counts.len() {
                counts.resize(d + 1, 0);
            }
            counts[d] += v.len();
        }
        counts
    }

    /// Cells of total degree `d` in canonical order (bidegree, then cell).
    pub fn cells_of_degree(&self, d: usize) -> Vec<&Cell> {
        self.cells
            .iter()
            .filter(|(b, _)| b.total_degree() == d)
            .flat_map(|(_, v)| v.iter())
            .collect()
    }

    /// Largest total degree of a cell.
    pub fn max_degree(&self) -> Option<usize> {
        self.cells.keys().map(Bidegree::total_degree).max()
    }

    /// Writes the cache format: a header line followed by one cell per line.
    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<()> {
        let ix = &self.index;
        writeln!(
            w,
            "{CACHE_MAGIC} g={} n={} m={} h={}",
            ix.g,
            ix.n,
            ix.m,
            ix.h()
        )?;
        for c in self.iter() {
            writeln!(w, "{c}")?;
        }
        Ok(())
    }

    pub fn read_cache<R: BufRead>(r: R) -> Result<CellSet> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty cell cache".into()))??;
        let index = parse_cache_header(&header)?;
        let mut cells = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            cells.push(line.parse::<Cell>()?);
        }
        Ok(CellSet::from_cells(index, cells))
    }
}

fn parse_cache_header(header: &str) -> Result<ModuliIndex> {
    let rest = header
        .strip_prefix(CACHE_MAGIC)
        .ok_or_else(|| Error::Parse(format!("not a cell cache header: {header:?}")))?;
    let mut fields = BTreeMap::new();
    for tok in rest.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header field {tok:?}")))?;
        let v: usize = v
            .parse()
            .map_err(|_| Error::Parse(format!("bad header value {tok:?}")))?;
        fields.insert(k.to_string(), v);
    }
    let get = |k: &str| {
        fields
            .get(k)
            .copied()
            .ok_or_else(|| Error::Parse(format!("header lacks {k}")))
    };
    let index = ModuliIndex::new(get("g")?, get("n")?, get("m")?)?;
    if get("h")? != index.h() {
        return Err(Error::Parse(format!("inconsistent h in {header:?}")));
    }
    Ok(index)
}

/// Enumerates the non-degenerate cells with the default budget.
pub fn enumerate_nondegenerate(index: &ModuliIndex) -> Result<CellSet> {
    enumerate_with_budget(index, DEFAULT_BUDGET)
}

/// Depth-first search over jump sequences `τ_1, …, τ_q` with
/// `Σ N(τ_k) = h`, starting at the forced `σ_0`.
///
/// Every jump fixes the symbols `(i,0)` (a consequence of S2), partial
/// sequences are pruned by S3, by the distance of `C(σ_k)` to `n + m`, and
/// by the number of strips that still carry no slit; S4, S6 and S7 are
/// checked at the leaves.
pub fn enumerate_with_budget(index: &ModuliIndex, budget: usize) -> Result<CellSet> {
    let h = index.h();
    if h > budget {
        return Err(Error::BudgetExceeded { h, budget });
    }
    let tableaux = tableaux_up_to(index.n, 2 * h);
    let tasks: Vec<Search> = tableaux
        .into_iter()
        .map(|widths| Search::new(index, &widths))
        .collect::<Result<_>>()?;
    // One work item per (tableau, first jump) keeps the rayon split even.
    let mut items: Vec<(usize, Option<usize>)> = Vec::new();
    for (t, search) in tasks.iter().enumerate() {
        if h == 0 {
            items.push((t, None));
        } else {
            items.extend((0..search.jumps.len()).map(|j| (t, Some(j))));
        }
    }
    let cells: Vec<Cell> = items
        .par_iter()
        .flat_map_iter(|&(t, first)| tasks[t].run(first))
        .collect();
    Ok(CellSet::from_cells(*index, cells))
}

/// All `[p_1, …, p_n]` with `Σ p_i ≤ max_total`.
fn tableaux_up_to(n: usize, max_total: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for p in 0..=left {
            cur.push(p);
            rec(n, left - p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_total, &mut Vec::new(), &mut out);
    out
}

struct Search {
    tableau: Tableau,
    h: usize,
    target_cycles: usize,
    zeros: Vec<usize>,
    /// Jumps sorted by norm; `by_norm[k]` is the index range of norm `k`.
    jumps: Vec<Images>,
    by_norm: Vec<std::ops::Range<usize>>,
    /// Bit `x` set iff `x` is a strip below the top of its layer.
    strips: u64,
    sigma0: Images,
}

impl Search {
    fn new(index: &ModuliIndex, widths: &[usize]) -> Result<Search> {
        let tableau = Tableau::new(widths)?;
        let n = tableau.layers();
        let h = index.h();
        let s = tableau.symbol_count();
        let zeros: Vec<usize> = (1..=n).map(|i| tableau.offset(i)).collect();
        let movable: Vec<u8> = (0..s).filter(|x| !zeros.contains(x)).map(|x| x as u8).collect();
        let mut jumps = permutations_up_to_norm(s, &movable, h);
        jumps.sort_by_key(|j| s - perm::cycle_count(j));
        let mut by_norm = vec![0..0; h + 1];
        let mut start = 0;
        for (k, range) in by_norm.iter_mut().enumerate() {
            let end = start + jumps[start..].iter().take_while(|j| s - perm::cycle_count(j) == k).count();
            *range = start..end;
            start = end;
        }
        let mut strips = 0u64;
        for i in 1..=n {
            for j in 0..tableau.width(i) {
                strips |= 1 << (tableau.offset(i) + j);
            }
        }
        let mut sigma0 = Images::new();
        perm::layer_cycles_into(tableau.raw_widths(), &mut sigma0);
        Ok(Search {
            tableau,
            h,
            target_cycles: n + index.m,
            zeros,
            jumps,
            by_norm,
            strips,
            sigma0,
        })
    }

    fn run(&self, first: Option<usize>) -> Vec<Cell> {
        let mut out = Vec::new();
        let mut stack = vec![self.sigma0.clone()];
        match first {
            None => self.dfs(&mut stack, self.h, self.strips, &mut out),
            Some(j) => {
                let jump = &self.jumps[j];
                let norm = jump.len() - perm::cycle_count(jump);
                if norm == 0 || norm > self.h {
                    return out;
                }
                self.step(&mut stack, jump, self.h - norm, self.strips, &mut out);
            }
        }
        out
    }

    fn step(&self, stack: &mut Vec<Images>, jump: &Images, remaining: usize, unresolved: u64, out: &mut Vec<Cell>) {
        let mut next = Images::new();
        perm::compose_into(jump, stack.last().unwrap(), &mut next);
        if !zeros_in_distinct_cycles(&next, &self.zeros) {
            return;
        }
        let cycles = perm::cycle_count(&next);
        if cycles.abs_diff(self.target_cycles) > remaining {
            return;
        }
        let mut unresolved = unresolved;
        let mut bits = unresolved;
        while bits != 0 {
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if next[x] as usize != x + 1 {
                unresolved &= !(1 << x);
            }
        }
        if unresolved.count_ones() as usize > 2 * remaining {
            return;
        }
        stack.push(next);
        self.dfs(stack, remaining, unresolved, out);
        stack.pop();
    }

    fn dfs(&self, stack: &mut Vec<Images>, remaining: usize, unresolved: u64, out: &mut Vec<Cell>) {
        if remaining == 0 {
            let top = stack.last().unwrap();
            if unresolved == 0
                && perm::cycle_count(top) == self.target_cycles
                && layers_connected(&self.tableau, stack.iter().map(|s| s.as_slice()))
            {
                let q = stack.len() - 1;
                let mut images = Vec::with_capacity(stack.len() * top.len());
                for s in stack.iter().rev() {
                    images.extend_from_slice(s);
                }
                out.push(Cell::from_raw(self.tableau.clone(), q, images));
            }
            return;
        }
        for norm in 1..=remaining {
            for jump in &self.jumps[self.by_norm[norm].clone()] {
                self.step(stack, jump, remaining - norm, unresolved, out);
            }
        }
    }
}

/// All permutations of `{0..s}` moving only `movable` with norm `≤ max_norm`.
///
/// Built by inserting the movable symbols one at a time either as a new
/// fixed point or right after an earlier symbol in its cycle, which hits
/// every permutation exactly once.
pub(crate) fn permutations_up_to_norm(s: usize, movable: &[u8], max_norm: usize) -> Vec<Images> {
    fn rec(
        movable: &[u8],
        k: usize,
        norm: usize,
        max_norm: usize,
        cur: &mut Images,
        out: &mut Vec<Images>,
    ) {
        if k == movable.len() {
            out.push(cur.clone());
            return;
        }
        let e = movable[k] as usize;
        rec(movable, k + 1, norm, max_norm, cur, out);
        if norm < max_norm {
            for &x in &movable[..k] {
                let x = x as usize;
                let y = cur[x];
                cur[x] = e as u8;
                cur[e] = y;
                rec(movable, k + 1, norm + 1, max_norm, cur, out);
                cur[e] = e as u8;
                cur[x] = y;
            }
        }
    }
    let mut cur: Images = (0..s as u8).collect();
    let mut out = Vec::new();
    rec(movable, 0, 0, max_norm, &mut cur, &mut out);
    out
}

/// Closes a set of non-degenerate cells under non-degenerate faces.
///
/// Used as an independent cross-check of [`enumerate_nondegenerate`] when
/// seeded with the top cells.
pub fn close_under_faces(index: &ModuliIndex, seeds: impl IntoIterator<Item = Cell>) -> CellSet {
    let mut seen: HashSet<Cell> = HashSet::new();
    let mut queue: VecDeque<Cell> = VecDeque::new();
    for c in seeds {
        if c.is_nondegenerate(index) && seen.insert(c.clone()) {
            queue.push_back(c);
        }
    }
    while let Some(c) = queue.pop_front() {
        c.for_each_face(|_, f| {
            if !seen.contains(&f) && f.is_nondegenerate(index) {
                seen.insert(f.clone());
                queue.push_back(f);
            }
        });
    }
    CellSet::from_cells(*index, seen)
}

/// Checks that no degenerate face of an enumerated cell has a
/// non-degenerate face of its own, i.e. that the degenerate cells met by
/// the boundary maps form a subcomplex.
pub fn check_degenerate_closure(cells: &CellSet) -> Result<()> {
    let index = *cells.index();
    let offending: Vec<String> = cells
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|c| {
            let mut bad = Vec::new();
            c.for_each_face(|_, f| {
                if cells.contains(&f) || !f.is_bar_cell(&index) {
                    return;
                }
                f.for_each_face(|_, ff| {
                    if cells.contains(&ff) {
                        bad.push(format!("{} -> {} -> {}", c, f, ff));
                    }
                });
            });
            bad
        })
        .collect();
    if let Some(first) = offending.first() {
        return Err(Error::Consistency(format!(
            "{} degenerate cells have non-degenerate faces, e.g. {first}",
            offending.len()
        )));
    }
    Ok(())
}
