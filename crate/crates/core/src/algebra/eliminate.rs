//! Sparse diagonalisation by row operations plus column operations that
//! only ever touch the pivot row.
//!
//! Unit pivots are taken first, shortest row first and sparsest column
//! within the row; a pivot row and column then split off as a direct
//! summand without further work.  What is left (no units anywhere) is
//! reduced by a Euclid-style loop on the smallest entry.  Row operations are
//! replayed on the tracked vectors so that column-space membership can be
//! read off at the end.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::ring::{Overflow, Ring};

pub(crate) type SparseRow<E> = Vec<(u32, E)>;

pub(crate) struct Elimination<E> {
    /// `(row, column, diagonal entry)` of each pivot, in pivot order.
    pub pivots: Vec<(usize, u32, E)>,
    /// The first `units` pivots were taken before any column operation.
    /// Their rows and columns meet in a unimodular block of the input.
    pub units: usize,
    /// The tracked vectors after all row operations.
    pub tracked: Vec<Vec<E>>,
}

struct State<'r, R: Ring> {
    ring: &'r R,
    rows: Vec<SparseRow<R::E>>,
    active: Vec<bool>,
    col_rows: Vec<Vec<u32>>,
    /// Entries in `rows` and in `col_rows`; the latter keeps stale entries
    /// until it is compacted.
    live: usize,
    indexed: usize,
    tracked: Vec<Vec<R::E>>,
    pivots: Vec<(usize, u32, R::E)>,
    heap: BinaryHeap<Reverse<(usize, u32)>>,
}

pub(crate) fn eliminate<R: Ring>(
    ring: &R,
    rows: Vec<SparseRow<R::E>>,
    ncols: usize,
    tracked: Vec<Vec<R::E>>,
) -> Result<Elimination<R::E>, Overflow> {
    let mut col_rows = vec![Vec::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c as usize].push(r as u32);
        }
    }
    let heap = rows
        .iter()
        .enumerate()
        .filter(|(_, row)| !row.is_empty())
        .map(|(r, row)| Reverse((row.len(), r as u32)))
        .collect();
    let live = rows.iter().map(Vec::len).sum();
    let mut st = State {
        ring,
        live,
        indexed: live,
        active: vec![true; rows.len()],
        rows,
        col_rows,
        tracked,
        pivots: Vec::new(),
        heap,
    };
    st.unit_phase()?;
    let units = st.pivots.len();
    st.euclid_phase()?;
    Ok(Elimination {
        units,
        pivots: st.pivots,
        tracked: st.tracked,
    })
}

fn find<E>(row: &[(u32, E)], c: u32) -> Option<usize> {
    row.binary_search_by_key(&c, |(cc, _)| *cc).ok()
}

impl<R: Ring> State<'_, R> {
    fn live_rows_of(&mut self, c: u32, except: usize) -> Vec<usize> {
        let rows = &self.rows;
        let active = &self.active;
        let list = &mut self.col_rows[c as usize];
        list.sort_unstable();
        list.dedup();
        list.retain(|&r| active[r as usize] && find(&rows[r as usize], c).is_some());
        list.iter().map(|&r| r as usize).filter(|&r| r != except).collect()
    }

    /// `row[target] -= q * row[src]`, also on the tracked vectors.
    fn row_op(&mut self, target: usize, q: &R::E, src: usize) -> Result<(), Overflow> {
        let ring = self.ring;
        let a = std::mem::take(&mut self.rows[target]);
        let b = &self.rows[src];
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let zero = ring.zero();
        while i < a.len() || j < b.len() {
            let ca = a.get(i).map_or(u32::MAX, |e| e.0);
            let cb = b.get(j).map_or(u32::MAX, |e| e.0);
            if ca < cb {
                out.push(a[i].clone());
                i += 1;
            } else {
                let base = if ca == cb { &a[i].1 } else { &zero };
                let v = ring.sub_mul(base, q, &b[j].1)?;
                if !ring.is_zero(&v) {
                    out.push((cb, v));
                    if ca != cb {
                        self.col_rows[cb as usize].push(target as u32);
                        self.indexed += 1;
                    }
                }
                if ca == cb {
                    i += 1;
                }
                j += 1;
            }
        }
        out.shrink_to_fit();
        self.live = self.live + out.len() - a.len();
        self.rows[target] = out;
        if self.indexed > 2 * self.live + (1 << 16) {
            self.compact();
        }
        for t in &mut self.tracked {
            if !ring.is_zero(&t[src]) {
                t[target] = ring.sub_mul(&t[target], q, &t[src])?;
            }
        }
        Ok(())
    }

    /// Drops stale entries from every column list.
    fn compact(&mut self) {
        let rows = &self.rows;
        let active = &self.active;
        let mut indexed = 0;
        for (c, list) in self.col_rows.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            list.retain(|&r| active[r as usize] && find(&rows[r as usize], c as u32).is_some());
            list.shrink_to_fit();
            indexed += list.len();
        }
        self.indexed = indexed;
    }

    fn retire(&mut self, r: usize, c: u32) {
        let value = self.rows[r][find(&self.rows[r], c).unwrap()].1.clone();
        self.pivots.push((r, c, value));
        self.active[r] = false;
        self.live -= self.rows[r].len();
        self.rows[r] = Vec::new();
        self.col_rows[c as usize].clear();
    }

    fn unit_phase(&mut self) -> Result<(), Overflow> {
        while let Some(Reverse((len, r))) = self.heap.pop() {
            let r = r as usize;
            if !self.active[r] || self.rows[r].len() != len || len == 0 {
                continue;
            }
            let ring = self.ring;
            let pivot = self.rows[r]
                .iter()
                .filter(|(_, v)| ring.is_unit(v))
                .min_by_key(|(c, _)| (self.col_rows[*c as usize].len(), *c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((c, a)) = pivot else { continue };
            for r2 in self.live_rows_of(c, r) {
                let k = find(&self.rows[r2], c).unwrap();
                let q = ring.quo(&self.rows[r2][k].1, &a);
                self.row_op(r2, &q, r)?;
                let l = self.rows[r2].len();
                if l > 0 {
                    self.heap.push(Reverse((l, r2 as u32)));
                }
            }
            self.retire(r, c);
        }
        Ok(())
    }

    fn smallest_entry(&self) -> Option<(usize, u32)> {
        let ring = self.ring;
        let mut best: Option<(usize, u32)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if !self.active[r] {
                continue;
            }
            for (c, v) in row {
                let better = match best {
                    None => true,
                    Some((br, bc)) => {
                        let bv = &self.rows[br][find(&self.rows[br], bc).unwrap()].1;
                        ring.smaller(v, bv) || (!ring.smaller(bv, v) && row.len() < self.rows[br].len())
                    }
                };
                if better {
                    best = Some((r, *c));
                }
            }
        }
        best
    }

    fn entry(&self, r: usize, c: u32) -> Option<&R::E> {
        find(&self.rows[r], c).map(|k| &self.rows[r][k].1)
    }

    fn euclid_phase(&mut self) -> Result<(), Overflow> {
        let ring = self.ring;
        while let Some((mut r, mut c)) = self.smallest_entry() {
            loop {
                let a = self.entry(r, c).unwrap().clone();
                // clear the column by row operations
                let mut next: Option<usize> = None;
                for r2 in self.live_rows_of(c, r) {
                    let q = ring.quo(self.entry(r2, c).unwrap(), &a);
                    self.row_op(r2, &q, r)?;
                    if let Some(v) = self.entry(r2, c) {
                        let better = match next {
                            None => true,
                            Some(n) => ring.smaller(v, self.entry(n, c).unwrap()),
                        };
                        if better {
                            next = Some(r2);
                        }
                    }
                }
                if let Some(r2) = next {
                    r = r2;
                    continue;
                }
                // clear the row by column operations; column c is zero
                // outside row r, so only row r changes
                let mut row = std::mem::take(&mut self.rows[r]);
                for (c2, v) in row.iter_mut() {
                    if *c2 != c {
                        let q = ring.quo(v, &a);
                        *v = ring.sub_mul(v, &q, &a)?;
                    }
                }
                let before = row.len();
                row.retain(|(_, v)| !ring.is_zero(v));
                self.live -= before - row.len();
                let mut next_c: Option<(u32, &R::E)> = None;
                for (c2, v) in row.iter().filter(|(c2, _)| *c2 != c) {
                    if next_c.map_or(true, |(_, best)| ring.smaller(v, best)) {
                        next_c = Some((*c2, v));
                    }
                }
                let next_c = next_c.map(|(c2, _)| c2);
                self.rows[r] = row;
                match next_c {
                    Some(c2) => c = c2,
                    None => break,
                }
            }
            self.retire(r, c);
        }
        Ok(())
    }
}
