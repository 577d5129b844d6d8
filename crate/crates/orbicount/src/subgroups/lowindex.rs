//! Systematic low-index subgroup enumeration.
//!
//! Depth-first extension of partial coset tables in row-major scan order,
//! defining new cosets in increasing order, with relator-tracing deductions
//! after every definition. Complete tables correspond bijectively to
//! subgroups of index <= N; a rebase-minimality post-filter keeps exactly one
//! table per conjugacy class.

use super::coset::CosetTable;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::presentations::Presentation;

const UNDEF: u32 = u32::MAX;

struct Search<'a> {
    n_gens: usize,
    cols: usize,
    max_index: usize,
    relators: Vec<Vec<i32>>,
    /// occurrences[g] = list of (relator index, position, letter sign)
    occurrences: Vec<Vec<(usize, usize, bool)>>,
    table: Vec<u32>,
    n_cosets: usize,
    log: Vec<usize>,
    nodes: u64,
    node_cap: u64,
    budget_hit: bool,
    out: &'a mut dyn FnMut(CosetTable),
}

impl<'a> Search<'a> {
    #[inline]
    fn cell(&self, z: usize, col: usize) -> u32 {
        self.table[z * self.cols + col]
    }

    #[inline]
    fn set_cell(&mut self, z: usize, col: usize, v: u32) {
        self.table[z * self.cols + col] = v;
        self.log.push(z * self.cols + col);
    }

    #[inline]
    fn col_of(l: i32) -> usize {
        if l > 0 {
            2 * (l - 1) as usize
        } else {
            2 * (-l - 1) as usize + 1
        }
    }

    #[inline]
    fn image(&self, l: i32, z: usize) -> u32 {
        self.cell(z, Self::col_of(l))
    }

    /// Record `l * from = to` in both directions. Returns false on conflict.
    /// Newly defined edges are pushed to `queue` as (generator, source).
    fn define(&mut self, l: i32, from: usize, to: usize, queue: &mut Vec<(usize, usize)>) -> bool {
        let g = (l.unsigned_abs() - 1) as usize;
        let (fwd_src, fwd_dst) = if l > 0 { (from, to) } else { (to, from) };
        let existing = self.cell(fwd_src, 2 * g);
        if existing != UNDEF {
            return existing as usize == fwd_dst;
        }
        if self.cell(fwd_dst, 2 * g + 1) != UNDEF {
            return false;
        }
        self.set_cell(fwd_src, 2 * g, fwd_dst as u32);
        self.set_cell(fwd_dst, 2 * g + 1, fwd_src as u32);
        queue.push((g, fwd_src));
        true
    }

    /// Trace relator `r` at coset `z`, deducing at most one edge per pass and
    /// repeating. Returns false on contradiction.
    fn scan(&mut self, z: usize, ri: usize, queue: &mut Vec<(usize, usize)>) -> bool {
        loop {
            let r = &self.relators[ri];
            let m = r.len();
            // suffix walk: state[m] = z, state[i] = r[i] * state[i+1]
            let mut i = m;
            let mut c = z;
            while i > 0 {
                let img = self.image(r[i - 1], c);
                if img == UNDEF {
                    break;
                }
                c = img as usize;
                i -= 1;
            }
            if i == 0 {
                return c == z;
            }
            // prefix walk: state[0] = z, advance applying inverse letters
            let mut j = 0;
            let mut d = z;
            while j < i - 1 {
                let img = self.image(-r[j], d);
                if img == UNDEF {
                    break;
                }
                d = img as usize;
                j += 1;
            }
            if j == i - 1 {
                // single gap: r[j] * state[i] = state[j], i.e. r[j] * c = d
                if !self.define(r[j], c, d, queue) {
                    return false;
                }
                // re-scan for cascading deductions within this relator
                continue;
            }
            return true;
        }
    }

    /// Process queued edge definitions: every relator occurrence of the edge
    /// generator is re-anchored and scanned.
    fn propagate(&mut self, queue: &mut Vec<(usize, usize)>) -> bool {
        while let Some((g, src)) = queue.pop() {
            let occ = self.occurrences[g].clone();
            for (ri, pos, positive) in occ {
                let r = &self.relators[ri];
                let m = r.len();
                // the walk uses edge src -g-> dst at word position `pos`:
                // state[pos+1] = anchor source. Positive occurrences consume
                // the edge forward; negative ones consume it backward.
                let anchor = if positive {
                    src
                } else {
                    match self.cell(src, 2 * g) {
                        UNDEF => continue,
                        v => v as usize,
                    }
                };
                // walk up from state[pos+1] to state[m] = z applying inverse
                // letters
                let mut idx = pos + 1;
                let mut c = anchor;
                let mut full = true;
                while idx < m {
                    let img = self.image(-r[idx], c);
                    if img == UNDEF {
                        full = false;
                        break;
                    }
                    c = img as usize;
                    idx += 1;
                }
                if full {
                    if !self.scan(c as usize, ri, queue) {
                        return false;
                    }
                    continue;
                }
                // walk down from state[pos] (image of the anchor) to state[0]
                let down_start = self.image(r[pos], anchor);
                if down_start == UNDEF {
                    continue;
                }
                let mut idx = pos;
                let mut d = down_start as usize;
                let mut full = true;
                while idx > 0 {
                    let img = self.image(r[idx - 1], d);
                    if img == UNDEF {
                        full = false;
                        break;
                    }
                    d = img as usize;
                    idx -= 1;
                }
                if full && !self.scan(d, ri, queue) {
                    return false;
                }
            }
        }
        true
    }

    fn first_undefined(&self) -> Option<(usize, usize)> {
        for z in 0..self.n_cosets {
            for col in 0..self.cols {
                if self.cell(z, col) == UNDEF {
                    return Some((z, col));
                }
            }
        }
        None
    }

    fn emit(&mut self) {
        let action: Vec<Vec<usize>> = (0..self.n_gens)
            .map(|g| (0..self.n_cosets).map(|z| self.cell(z, 2 * g) as usize).collect())
            .collect();
        let table = CosetTable::new(self.n_gens, action).expect("search emits valid tables");
        (self.out)(table);
    }

    fn dfs(&mut self) -> Result<()> {
        let Some((z, col)) = self.first_undefined() else {
            self.emit();
            return Ok(());
        };
        let paired = col ^ 1;
        let letter = if col % 2 == 0 { (col / 2 + 1) as i32 } else { -((col / 2 + 1) as i32) };
        let candidate_count = self.n_cosets + usize::from(self.n_cosets < self.max_index);
        for y in 0..candidate_count {
            let fresh = y == self.n_cosets;
            if !fresh && self.cell(y, paired) != UNDEF {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.node_cap {
                self.budget_hit = true;
                return Err(Error::budget("low-index search node cap"));
            }
            let log_mark = self.log.len();
            let cosets_mark = self.n_cosets;
            if fresh {
                self.n_cosets += 1;
            }
            let mut queue = Vec::new();
            let ok = self.define(letter, z, y, &mut queue) && self.propagate(&mut queue);
            if ok {
                self.dfs()?;
            }
            while self.log.len() > log_mark {
                let idx = self.log.pop().unwrap();
                self.table[idx] = UNDEF;
            }
            self.n_cosets = cosets_mark;
        }
        Ok(())
    }
}

/// Enumerate one complete coset table per subgroup of index <= `max_index`,
/// in deterministic order.
pub fn all_subgroup_tables(
    p: &Presentation,
    max_index: usize,
    budget: &Budget,
) -> Result<Vec<CosetTable>> {
    if max_index == 0 {
        return Err(Error::invalid("max index must be >= 1"));
    }
    let n_gens = p.generator_count();
    if n_gens == 0 {
        return Ok(vec![CosetTable::new(0, Vec::new())?]);
    }
    let relators: Vec<Vec<i32>> = p.relators().iter().map(|w| w.letters().to_vec()).collect();
    let mut occurrences = vec![Vec::new(); n_gens];
    for (ri, r) in relators.iter().enumerate() {
        for (pos, &l) in r.iter().enumerate() {
            occurrences[(l.unsigned_abs() - 1) as usize].push((ri, pos, l > 0));
        }
    }
    let mut tables = Vec::new();
    {
        let mut sink = |t: CosetTable| tables.push(t);
        let mut search = Search {
            n_gens,
            cols: 2 * n_gens,
            max_index,
            relators,
            occurrences,
            table: vec![UNDEF; max_index * 2 * n_gens],
            n_cosets: 1,
            log: Vec::new(),
            nodes: 0,
            node_cap: budget.search_nodes,
            budget_hit: false,
            out: &mut sink,
        };
        search.dfs()?;
    }
    // the DFS numbering is already breadth-first from coset 0
    debug_assert!(tables.iter().all(|t| t.rebase(0) == *t));
    for t in &tables {
        t.validate_against(p)?;
    }
    Ok(tables)
}

/// Keep exactly one table per conjugacy class: the ones equal to their own
/// canonical (rebase-minimal) form.
pub fn class_representative_tables(tables: Vec<CosetTable>) -> Vec<CosetTable> {
    let mut reps: Vec<CosetTable> = tables
        .into_iter()
        .filter(|t| {
            let flat = t.flat();
            (1..t.index()).all(|z| t.rebase(z).flat() >= flat)
        })
        .collect();
    reps.sort_by(|a, b| (a.index(), a.flat()).cmp(&(b.index(), b.flat())));
    reps
}
