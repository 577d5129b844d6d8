//! Complete coset tables: the permutation action of a presentation's
//! generators on the cosets of a finite-index subgroup, with the Schreier
//! apparatus (spanning tree, subgroup generators, rewriting).
//!
//! Conventions: words act on cosets on the left, so a word `l1 l2 ... lm`
//! applies its rightmost letter first. Coset 0 represents the subgroup.

use crate::error::{Error, Result};
use crate::presentations::{Presentation, Word};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetTable {
    n_gens: usize,
    n_cosets: usize,
    /// `action[g][z]` = image of coset `z` under left multiplication by
    /// generator `g+1`.
    action: Vec<Vec<usize>>,
    /// Inverse permutations of `action`.
    action_inv: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CosetTableJson {
    pub index: usize,
    pub action: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn new(n_gens: usize, action: Vec<Vec<usize>>) -> Result<CosetTable> {
        if action.len() != n_gens {
            return Err(Error::invalid("one action row per generator required"));
        }
        let n_cosets = if n_gens == 0 { 1 } else { action[0].len() };
        let mut action_inv = Vec::with_capacity(n_gens);
        for row in &action {
            if row.len() != n_cosets {
                return Err(Error::invalid("ragged coset action"));
            }
            let mut inv = vec![usize::MAX; n_cosets];
            for (z, &y) in row.iter().enumerate() {
                if y >= n_cosets || inv[y] != usize::MAX {
                    return Err(Error::invalid("coset action is not a permutation"));
                }
                inv[y] = z;
            }
            action_inv.push(inv);
        }
        let t = CosetTable { n_gens, n_cosets, action, action_inv };
        if !t.is_transitive() {
            return Err(Error::invalid("coset action is not transitive"));
        }
        Ok(t)
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn index(&self) -> usize {
        self.n_cosets
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    /// Apply a single signed letter to a coset.
    #[inline]
    pub fn apply_letter(&self, l: i32, z: usize) -> usize {
        if l > 0 {
            self.action[(l - 1) as usize][z]
        } else {
            self.action_inv[(-l - 1) as usize][z]
        }
    }

    /// Apply a word (rightmost letter first).
    pub fn trace(&self, w: &Word, z: usize) -> usize {
        w.letters().iter().rev().fold(z, |c, &l| self.apply_letter(l, c))
    }

    fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.n_cosets];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(z) = stack.pop() {
            for g in 0..self.n_gens {
                for y in [self.action[g][z], self.action_inv[g][z]] {
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
        }
        count == self.n_cosets
    }

    /// Every relator must act as the identity permutation at every coset.
    pub fn validate_against(&self, p: &Presentation) -> Result<()> {
        if p.generator_count() != self.n_gens {
            return Err(Error::invalid("generator count mismatch"));
        }
        for r in p.relators() {
            for z in 0..self.n_cosets {
                if self.trace(r, z) != z {
                    return Err(Error::VerificationFailed(format!(
                        "relator {:?} moves coset {z}",
                        r.letters()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Flat cell list in scan order, for lexicographic comparison. Columns
    /// alternate generator-forward, generator-backward.
    pub fn flat(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n_cosets * 2 * self.n_gens);
        for z in 0..self.n_cosets {
            for g in 0..self.n_gens {
                out.push(self.action[g][z]);
                out.push(self.action_inv[g][z]);
            }
        }
        out
    }

    /// Renumber cosets by breadth-first discovery from `root`, scanning
    /// columns generator-forward then generator-backward. The result is the
    /// same abstract action based at `root`.
    pub fn rebase(&self, root: usize) -> CosetTable {
        let mut new_of_old = vec![usize::MAX; self.n_cosets];
        let mut old_of_new = Vec::with_capacity(self.n_cosets);
        new_of_old[root] = 0;
        old_of_new.push(root);
        let mut qi = 0;
        while qi < old_of_new.len() {
            let z = old_of_new[qi];
            qi += 1;
            for g in 0..self.n_gens {
                for y in [self.action[g][z], self.action_inv[g][z]] {
                    if new_of_old[y] == usize::MAX {
                        new_of_old[y] = old_of_new.len();
                        old_of_new.push(y);
                    }
                }
            }
        }
        let action: Vec<Vec<usize>> = (0..self.n_gens)
            .map(|g| (0..self.n_cosets).map(|nz| new_of_old[self.action[g][old_of_new[nz]]]).collect())
            .collect();
        CosetTable::new(self.n_gens, action).expect("rebase preserves validity")
    }

    /// The lexicographically least rebase, plus the roots that achieve it.
    /// Two coset tables describe conjugate subgroups iff their canonical
    /// forms are equal.
    pub fn canonical_form(&self) -> (CosetTable, Vec<usize>) {
        let mut best = self.rebase(0);
        let mut best_flat = best.flat();
        let mut roots = vec![0usize];
        for z in 1..self.n_cosets {
            let cand = self.rebase(z);
            let flat = cand.flat();
            match flat.cmp(&best_flat) {
                std::cmp::Ordering::Less => {
                    best = cand;
                    best_flat = flat;
                    roots = vec![z];
                }
                std::cmp::Ordering::Equal => roots.push(z),
                std::cmp::Ordering::Greater => {}
            }
        }
        (best, roots)
    }

    /// Cosets fixed by every element of the subgroup (equivalently by all of
    /// its Schreier generators); these realize `N_Gamma(H)/H`.
    pub fn fixed_cosets(&self, schreier: &SchreierData) -> Vec<usize> {
        (0..self.n_cosets)
            .filter(|&z| schreier.generator_words.iter().all(|w| self.trace(w, z) == z))
            .collect()
    }

    pub fn to_json(&self) -> CosetTableJson {
        CosetTableJson { index: self.n_cosets, action: self.action.clone() }
    }

    pub fn from_json(j: &CosetTableJson, n_gens: usize) -> Result<CosetTable> {
        if j.action.len() != n_gens {
            return Err(Error::invalid("coset table generator count mismatch"));
        }
        CosetTable::new(n_gens, j.action.clone())
    }
}

/// Spanning tree and Schreier generators of the subgroup at coset 0.
#[derive(Debug, Clone)]
pub struct SchreierData {
    /// `tree_word[z]` maps coset 0 to coset `z`.
    pub tree_words: Vec<Word>,
    /// Non-redundant Schreier generator words (in the ambient generators);
    /// tree edges are dropped.
    pub generator_words: Vec<Word>,
    /// For each forward edge `(z, g)`: 0 when the edge is a tree edge,
    /// otherwise the 1-based Schreier generator index.
    token: Vec<Vec<usize>>,
}

impl SchreierData {
    pub fn build(table: &CosetTable) -> SchreierData {
        let n = table.index();
        let gens = table.n_gens();
        // breadth-first spanning tree, columns forward then backward
        let mut tree_words: Vec<Option<Word>> = vec![None; n];
        tree_words[0] = Some(Word::empty());
        let mut order = vec![0usize];
        let mut qi = 0;
        while qi < order.len() {
            let z = order[qi];
            qi += 1;
            for g in 0..gens {
                let letter = (g + 1) as i32;
                for (y, l) in [
                    (table.apply_letter(letter, z), letter),
                    (table.apply_letter(-letter, z), -letter),
                ] {
                    if tree_words[y].is_none() {
                        let w = Word::new(
                            std::iter::once(l)
                                .chain(tree_words[z].as_ref().unwrap().letters().iter().copied())
                                .collect(),
                        );
                        tree_words[y] = Some(w);
                        order.push(y);
                    }
                }
            }
        }
        let tree_words: Vec<Word> = tree_words.into_iter().map(Option::unwrap).collect();

        let mut generator_words = Vec::new();
        let mut token = vec![vec![0usize; n]; gens];
        for z in 0..n {
            for g in 0..gens {
                let letter = (g + 1) as i32;
                let y = table.apply_letter(letter, z);
                // w_y^-1 * g * w_z stabilizes coset 0
                let word = tree_words[y]
                    .inverse()
                    .concat(&Word::new(vec![letter]))
                    .concat(&tree_words[z]);
                if !word.is_empty() {
                    generator_words.push(word);
                    token[g][z] = generator_words.len();
                }
            }
        }
        SchreierData { tree_words, generator_words, token }
    }

    /// The Schreier generator index of the forward edge `(z, g)`, or `None`
    /// for tree edges (0-based generator, 0-based result).
    pub fn token_of(&self, z: usize, g: usize) -> Option<usize> {
        match self.token[g][z] {
            0 => None,
            k => Some(k - 1),
        }
    }

    /// Rewrite a word that stabilizes coset 0 into a word in the Schreier
    /// generators. Panics if the word does not stabilize coset 0.
    pub fn rewrite(&self, table: &CosetTable, w: &Word) -> Word {
        let mut tokens: Vec<i32> = Vec::new();
        let mut z = 0usize;
        for &l in w.letters().iter().rev() {
            if l > 0 {
                let g = (l - 1) as usize;
                let t = self.token[g][z];
                if t != 0 {
                    tokens.push(t as i32);
                }
                z = table.apply_letter(l, z);
            } else {
                let g = (-l - 1) as usize;
                let y = table.apply_letter(l, z); // y with g*y = z
                let t = self.token[g][y];
                if t != 0 {
                    tokens.push(-(t as i32));
                }
                z = y;
            }
        }
        assert_eq!(z, 0, "word does not stabilize the base coset");
        tokens.reverse();
        Word::new(tokens)
    }

    /// Reidemeister-Schreier relators: the rewrite of every ambient relator
    /// traced at every coset. Empty rewrites are dropped by `Presentation`.
    pub fn subgroup_relators(&self, table: &CosetTable, p: &Presentation) -> Vec<Word> {
        let mut out = Vec::new();
        for r in p.relators() {
            for z in 0..table.index() {
                out.push(self.rewrite_at(table, r, z));
            }
        }
        out
    }

    /// Rewrite of `w_z^-1 * r * w_z`, traced directly from coset `z`.
    fn rewrite_at(&self, table: &CosetTable, r: &Word, z0: usize) -> Word {
        let mut tokens: Vec<i32> = Vec::new();
        let mut z = z0;
        for &l in r.letters().iter().rev() {
            if l > 0 {
                let g = (l - 1) as usize;
                let t = self.token[g][z];
                if t != 0 {
                    tokens.push(t as i32);
                }
                z = table.apply_letter(l, z);
            } else {
                let g = (-l - 1) as usize;
                let y = table.apply_letter(l, z);
                let t = self.token[g][y];
                if t != 0 {
                    tokens.push(-(t as i32));
                }
                z = y;
            }
        }
        assert_eq!(z, z0, "relator does not fix the coset");
        tokens.reverse();
        Word::new(tokens)
    }
}
