//! Permutations of tableaux.
//!
//! A tableau `[p_1, …, p_n]` is the set of symbols `(i, j)` with `1 ≤ i ≤ n`
//! and `0 ≤ j ≤ p_i`.  Symbols are stored as one flat index in layer-major
//! order, so `(1,0), (1,1), …, (1,p_1), (2,0), …`.  Permutations store their
//! image array in that order; the `(i, j)` view only exists for parsing and
//! printing.
//!
//! Cycle notation reads left to right: `(x_1,…,x_r)` sends `x_k` to
//! `x_{k+1}` and `x_r` back to `x_1`.  The canonical textual form lists every
//! cycle (fixed points included) starting at its smallest symbol, cycles
//! sorted by that smallest symbol.  Single-layer tableaux print symbols as
//! plain `j`, multi-layer ones as `i.j`.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest number of symbols a tableau may carry.
pub const MAX_SYMBOLS: usize = 64;

pub(crate) type Images = SmallVec<[u8; 16]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    widths: SmallVec<[u8; 4]>,
}

/// A symbol `(layer, position)`; layers count from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub layer: usize,
    pub position: usize,
}

impl Symbol {
    pub fn new(layer: usize, position: usize) -> Self {
        Symbol { layer, position }
    }
}

impl Tableau {
    pub fn new(widths: &[usize]) -> Result<Self> {
        if widths.is_empty() {
            return Err(Error::InvalidArgument(
                "a tableau needs at least one layer".into(),
            ));
        }
        let total: usize = widths.iter().map(|p| p + 1).sum();
        if total > MAX_SYMBOLS {
            return Err(Error::InvalidArgument(format!(
                "tableau with {total} symbols exceeds the limit of {MAX_SYMBOLS}"
            )));
        }
        Ok(Tableau {
            widths: widths.iter().map(|&p| p as u8).collect(),
        })
    }

    pub fn single(p: usize) -> Self {
        Tableau::new(&[p]).expect("single layer tableau")
    }

    pub fn layers(&self) -> usize {
        self.widths.len()
    }

    /// Width `p_i` of layer `i` (1-based).
    pub fn width(&self, layer: usize) -> usize {
        self.widths[layer - 1] as usize
    }

    pub fn widths(&self) -> Vec<usize> {
        self.widths.iter().map(|&p| p as usize).collect()
    }

    pub(crate) fn raw_widths(&self) -> &[u8] {
        &self.widths
    }

    /// `p_1 + … + p_n`.
    pub fn total_width(&self) -> usize {
        self.widths.iter().map(|&p| p as usize).sum()
    }

    /// `n + p_1 + … + p_n`.
    pub fn symbol_count(&self) -> usize {
        self.layers() + self.total_width()
    }

    /// Flat index of `(layer, 0)`.
    pub fn offset(&self, layer: usize) -> usize {
        self.widths[..layer - 1]
            .iter()
            .map(|&p| p as usize + 1)
            .sum()
    }

    pub fn index_of(&self, symbol: Symbol) -> Option<usize> {
        if symbol.layer == 0 || symbol.layer > self.layers() {
            return None;
        }
        if symbol.position > self.width(symbol.layer) {
            return None;
        }
        Some(self.offset(symbol.layer) + symbol.position)
    }

    pub fn symbol_at(&self, mut index: usize) -> Symbol {
        for (i, &p) in self.widths.iter().enumerate() {
            let len = p as usize + 1;
            if index < len {
                return Symbol::new(i + 1, index);
            }
            index -= len;
        }
        panic!("symbol index out of range for {self}");
    }

    /// The tableau with `p_layer` lowered by one.
    pub fn without_one(&self, layer: usize) -> Result<Tableau> {
        if layer == 0 || layer > self.layers() || self.width(layer) == 0 {
            return Err(Error::InvalidArgument(format!(
                "cannot shrink layer {layer} of {self}"
            )));
        }
        let mut widths = self.widths.clone();
        widths[layer - 1] -= 1;
        Ok(Tableau { widths })
    }

    fn check_same(&self, other: &Tableau) -> Result<()> {
        if self != other {
            return Err(Error::TableauMismatch {
                left: self.to_string(),
                right: other.to_string(),
            });
        }
        Ok(())
    }

    fn format_symbol(&self, index: usize, out: &mut String) {
        use std::fmt::Write;
        let s = self.symbol_at(index);
        if self.layers() == 1 {
            write!(out, "{}", s.position).unwrap();
        } else {
            write!(out, "{}.{}", s.layer, s.position).unwrap();
        }
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, p) in self.widths.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableauPermutation {
    tableau: Tableau,
    images: Images,
}

impl TableauPermutation {
    pub fn identity(tableau: &Tableau) -> Self {
        let images = (0..tableau.symbol_count() as u8).collect();
        TableauPermutation {
            tableau: tableau.clone(),
            images,
        }
    }

    /// `∏_i ⟨(i,0), …, (i,p_i)⟩`, one full cycle per layer.
    pub fn layer_cycles(tableau: &Tableau) -> Self {
        let mut images = Images::new();
        layer_cycles_into(tableau.raw_widths(), &mut images);
        TableauPermutation {
            tableau: tableau.clone(),
            images,
        }
    }

    pub fn from_images(tableau: &Tableau, images: &[usize]) -> Result<Self> {
        let s = tableau.symbol_count();
        if images.len() != s {
            return Err(Error::InvalidPermutation(format!(
                "{} images for {} symbols",
                images.len(),
                s
            )));
        }
        let mut seen = vec![false; s];
        for &y in images {
            if y >= s || seen[y] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
            seen[y] = true;
        }
        Ok(TableauPermutation {
            tableau: tableau.clone(),
            images: images.iter().map(|&y| y as u8).collect(),
        })
    }

    pub(crate) fn from_raw(tableau: Tableau, images: &[u8]) -> Self {
        debug_assert_eq!(images.len(), tableau.symbol_count());
        TableauPermutation {
            tableau,
            images: images.into(),
        }
    }

    /// Builds a permutation from cycles; symbols not mentioned are fixed.
    pub fn from_cycles(tableau: &Tableau, cycles: &[Vec<Symbol>]) -> Result<Self> {
        let s = tableau.symbol_count();
        let mut images: Vec<usize> = (0..s).collect();
        let mut seen = vec![false; s];
        for cycle in cycles {
            let idx = cycle
                .iter()
                .map(|&sym| {
                    tableau.index_of(sym).ok_or(Error::SymbolOutOfRange {
                        layer: sym.layer,
                        position: sym.position,
                        tableau: tableau.to_string(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            for (k, &x) in idx.iter().enumerate() {
                if seen[x] {
                    return Err(Error::InvalidPermutation(format!(
                        "symbol {} occurs twice",
                        tableau.symbol_at(x).position
                    )));
                }
                seen[x] = true;
                images[x] = idx[(k + 1) % idx.len()];
            }
        }
        Self::from_images(tableau, &images)
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, index: usize) -> usize {
        self.images[index] as usize
    }

    pub fn apply_symbol(&self, symbol: Symbol) -> Option<Symbol> {
        let x = self.tableau.index_of(symbol)?;
        Some(self.tableau.symbol_at(self.apply(x)))
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &TableauPermutation) -> Result<TableauPermutation> {
        self.tableau.check_same(&other.tableau)?;
        let mut images = Images::new();
        compose_into(&self.images, &other.images, &mut images);
        Ok(TableauPermutation {
            tableau: self.tableau.clone(),
            images,
        })
    }

    pub fn inverse(&self) -> TableauPermutation {
        let mut images = Images::new();
        inverse_into(&self.images, &mut images);
        TableauPermutation {
            tableau: self.tableau.clone(),
            images,
        }
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        cycle_count(&self.images)
    }

    /// Word length with respect to all transpositions.
    pub fn norm(&self) -> usize {
        self.images.len() - self.cycle_count()
    }

    /// Cycles in canonical order, each starting at its smallest symbol.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let s = self.images.len();
        let mut seen = vec![false; s];
        let mut out = Vec::new();
        for start in 0..s {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// The deletion map `D^i_j`: skip `(layer, position)` in the cycle
    /// notation and renumber the later symbols of that layer down by one.
    pub fn delete(&self, layer: usize, position: usize) -> Result<TableauPermutation> {
        let symbol = Symbol::new(layer, position);
        let index = self
            .tableau
            .index_of(symbol)
            .ok_or_else(|| Error::SymbolOutOfRange {
                layer,
                position,
                tableau: self.tableau.to_string(),
            })?;
        let tableau = self.tableau.without_one(layer)?;
        let mut images = Images::new();
        delete_into(&self.images, index, &mut images);
        Ok(TableauPermutation { tableau, images })
    }

    /// Parses canonical (or any valid) cycle notation, inferring the tableau.
    /// Every symbol has to be listed, fixed points included.
    pub fn parse(text: &str) -> Result<Self> {
        let cycles = parse_cycles(text)?;
        let multi = text.contains('.');
        let mut widths: Vec<usize> = Vec::new();
        let mut count = 0;
        for &(layer, pos) in cycles.iter().flatten() {
            let layer = if multi { layer } else { 1 };
            if layer == 0 {
                return Err(Error::Parse(format!("layer 0 in {text:?}")));
            }
            if widths.len() < layer {
                widths.resize(layer, 0);
            }
            widths[layer - 1] = widths[layer - 1].max(pos);
            count += 1;
        }
        if widths.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        let tableau = Tableau::new(&widths)?;
        if count != tableau.symbol_count() {
            return Err(Error::Parse(format!(
                "{text:?} does not list every symbol of {tableau}"
            )));
        }
        Self::parse_on(&tableau, text)
    }

    /// Parses cycle notation on a known tableau; omitted symbols are fixed.
    pub fn parse_on(tableau: &Tableau, text: &str) -> Result<Self> {
        let multi = text.contains('.');
        let cycles = parse_cycles(text)?
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|(layer, pos)| Symbol::new(if multi { layer } else { 1 }, pos))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        if !multi && tableau.layers() > 1 {
            return Err(Error::Parse(format!(
                "{text:?} uses single-layer notation for {tableau}"
            )));
        }
        Self::from_cycles(tableau, &cycles)
    }
}

impl fmt::Display for TableauPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for cycle in self.cycles() {
            out.push('(');
            for (k, &x) in cycle.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                self.tableau.format_symbol(x, &mut out);
            }
            out.push(')');
        }
        f.write_str(&out)
    }
}

impl FromStr for TableauPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableauPermutation::parse(s)
    }
}

/// Splits `(a,b,c)(d)` into cycles of `(layer, position)`; single-layer
/// symbols come back with layer 0 and are fixed up by the caller.
fn parse_cycles(text: &str) -> Result<Vec<Vec<(usize, usize)>>> {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = text.as_str();
    let mut cycles = Vec::new();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
        let end = body
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in {text:?}")))?;
        let cycle = body[..end]
            .split(',')
            .map(|tok| parse_symbol(tok).ok_or_else(|| Error::Parse(format!("bad symbol {tok:?}"))))
            .collect::<Result<Vec<_>>>()?;
        cycles.push(cycle);
        rest = &body[end + 1..];
    }
    Ok(cycles)
}

fn parse_symbol(tok: &str) -> Option<(usize, usize)> {
    match tok.split_once('.') {
        Some((i, j)) => Some((i.parse().ok()?, j.parse().ok()?)),
        None => Some((0, tok.parse().ok()?)),
    }
}

// Slice kernels used on the enumeration and assembly hot paths.

pub(crate) fn compose_into(a: &[u8], b: &[u8], out: &mut Images) {
    out.clear();
    out.extend(b.iter().map(|&x| a[x as usize]));
}

pub(crate) fn inverse_into(a: &[u8], out: &mut Images) {
    out.clear();
    out.resize(a.len(), 0);
    for (x, &y) in a.iter().enumerate() {
        out[y as usize] = x as u8;
    }
}

pub(crate) fn cycle_count(a: &[u8]) -> usize {
    let mut seen: SmallVec<[bool; 32]> = SmallVec::from_elem(false, a.len());
    let mut count = 0;
    for start in 0..a.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = a[x] as usize;
        }
    }
    count
}

/// Norm of `a ∘ b⁻¹` without materialising the product.
pub(crate) fn distance(a: &[u8], b: &[u8]) -> usize {
    let mut binv = Images::new();
    inverse_into(b, &mut binv);
    let mut prod = Images::new();
    compose_into(a, &binv, &mut prod);
    prod.len() - cycle_count(&prod)
}

pub(crate) fn delete_into(a: &[u8], index: usize, out: &mut Images) {
    let d = index as u8;
    out.clear();
    for (x, &y) in a.iter().enumerate() {
        if x == index {
            continue;
        }
        let y = if y == d { a[index] } else { y };
        out.push(if y > d { y - 1 } else { y });
    }
}

pub(crate) fn layer_cycles_into(widths: &[u8], out: &mut Images) {
    out.clear();
    let mut offset = 0u8;
    for &p in widths {
        for j in 0..p {
            out.push(offset + j + 1);
        }
        out.push(offset);
        offset += p + 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> TableauPermutation {
        TableauPermutation::parse(s).unwrap()
    }

    #[test]
    fn compose_example() {
        let t = Tableau::single(2);
        let a = TableauPermutation::parse_on(&t, "(0,1)").unwrap();
        let b = TableauPermutation::parse_on(&t, "(1,2)").unwrap();
        // 0 -> 0 -> 1, 1 -> 2 -> 2, 2 -> 1 -> 0
        assert_eq!(a.compose(&b).unwrap(), p("(0,1,2)"));
        let id = TableauPermutation::identity(&t);
        assert_eq!(id.compose(&a).unwrap(), a);
        assert!(a.compose(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn compose_rejects_mismatch() {
        let a = TableauPermutation::identity(&Tableau::single(2));
        let b = TableauPermutation::identity(&Tableau::single(3));
        assert!(matches!(a.compose(&b), Err(Error::TableauMismatch { .. })));
    }

    #[test]
    fn norm_and_cycles() {
        assert_eq!(TableauPermutation::identity(&Tableau::single(4)).norm(), 0);
        assert_eq!(p("(0,1,2,3)").norm(), 3);
        assert_eq!(p("(0,2)(1,3)").norm(), 2);
        assert_eq!(TableauPermutation::identity(&Tableau::single(5)).cycle_count(), 6);
        assert_eq!(p("(0,2,3)(1)").cycle_count(), 2);
        assert_eq!(p("(0,2,1,3)").cycle_count(), 1);
    }

    #[test]
    fn delete_examples() {
        let id3 = TableauPermutation::identity(&Tableau::single(3));
        assert_eq!(
            id3.delete(1, 1).unwrap(),
            TableauPermutation::identity(&Tableau::single(2))
        );
        assert_eq!(p("(0,2,1,3)").delete(1, 1).unwrap(), p("(0,1,2)"));
        assert!(p("(0,1)").delete(1, 2).is_err());
        assert!(p("(0,1)").delete(2, 0).is_err());
        assert!(TableauPermutation::identity(&Tableau::single(0)).delete(1, 0).is_err());
    }

    #[test]
    fn canonical_text() {
        let s = p("(3,0,2,1)(4)");
        assert_eq!(s.to_string(), "(0,2,1,3)(4)");
        let t = Tableau::new(&[3, 3]).unwrap();
        let sigma = TableauPermutation::parse_on(&t, "(1.0,1.2,2.2,2.1,1.3)(1.1)(2.0,2.3)").unwrap();
        assert_eq!(sigma.to_string(), "(1.0,1.2,2.2,2.1,1.3)(1.1)(2.0,2.3)");
        assert_eq!(TableauPermutation::parse(&sigma.to_string()).unwrap(), sigma);
        assert_eq!(
            TableauPermutation::layer_cycles(&t).to_string(),
            "(1.0,1.1,1.2,1.3)(2.0,2.1,2.2,2.3)"
        );
    }

    #[test]
    fn parse_errors() {
        assert!(TableauPermutation::parse("(0,1").is_err());
        assert!(TableauPermutation::parse("(0,1)(1)").is_err());
        assert!(TableauPermutation::parse("(0,2)").is_err());
        assert!(TableauPermutation::parse("0,1").is_err());
    }

    #[test]
    fn symbols_round_trip() {
        let t = Tableau::new(&[2, 0, 3]).unwrap();
        for x in 0..t.symbol_count() {
            assert_eq!(t.index_of(t.symbol_at(x)), Some(x));
        }
        assert_eq!(t.offset(3), 4);
        assert_eq!(t.index_of(Symbol::new(2, 1)), None);
    }
}
