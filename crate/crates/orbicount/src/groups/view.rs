use super::finite::{ConjClasses, FiniteGroup};
use super::wreath::WreathCodec;
use crate::error::Result;
use std::collections::HashMap;

/// Group operations on integer element ids. Implemented by dense
/// multiplication tables and by the wreath codec, so enumeration code is
/// generic over whether a table was materialized.
pub trait GroupOps {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    fn generating_set(&self) -> Vec<usize>;

    fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    fn element_order(&self, x: usize) -> usize {
        let e = self.identity();
        let mut n = 1;
        let mut y = x;
        while y != e {
            y = self.mul(y, x);
            n += 1;
        }
        n
    }
}

impl GroupOps for FiniteGroup {
    fn order(&self) -> usize {
        FiniteGroup::order(self)
    }

    fn identity(&self) -> usize {
        FiniteGroup::identity(self)
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        FiniteGroup::mul(self, a, b)
    }

    #[inline]
    fn inv(&self, a: usize) -> usize {
        FiniteGroup::inv(self, a)
    }

    fn generating_set(&self) -> Vec<usize> {
        self.generators().to_vec()
    }
}

/// Either a dense group or a codec-backed wreath group.
#[derive(Clone, Copy)]
pub enum View<'a> {
    Dense(&'a FiniteGroup),
    Wreath(&'a WreathCodec),
}

impl<'a> View<'a> {
    pub fn conj_classes(&self) -> Result<ConjClasses> {
        match self {
            View::Dense(g) => Ok(g.classes().clone()),
            View::Wreath(c) => Ok(c.conj_classes()?.clone()),
        }
    }
}

impl<'a> GroupOps for View<'a> {
    fn order(&self) -> usize {
        match self {
            View::Dense(g) => g.order(),
            View::Wreath(c) => GroupOps::order(*c),
        }
    }

    fn identity(&self) -> usize {
        match self {
            View::Dense(g) => g.identity(),
            View::Wreath(c) => GroupOps::identity(*c),
        }
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        match self {
            View::Dense(g) => g.mul(a, b),
            View::Wreath(c) => GroupOps::mul(*c, a, b),
        }
    }

    #[inline]
    fn inv(&self, a: usize) -> usize {
        match self {
            View::Dense(g) => g.inv(a),
            View::Wreath(c) => GroupOps::inv(*c, a),
        }
    }

    fn generating_set(&self) -> Vec<usize> {
        match self {
            View::Dense(g) => g.generators().to_vec(),
            View::Wreath(c) => c.generating_set(),
        }
    }
}

/// An explicit subgroup of an ambient group, as a sorted list of global
/// element ids plus a position index.
pub struct Members<'a, G: GroupOps> {
    pub ops: &'a G,
    elems: Vec<usize>,
    pos: HashMap<usize, u32>,
    whole: bool,
}

/// Conjugacy data of a [`Members`] subgroup. `class_of` is indexed by the
/// member *position*, not the global id.
#[derive(Debug, Clone)]
pub struct MemberClasses {
    pub reps: Vec<usize>,
    pub sizes: Vec<usize>,
    pub class_of: Vec<u32>,
}

impl MemberClasses {
    pub fn count(&self) -> usize {
        self.reps.len()
    }
}

impl<'a, G: GroupOps> Members<'a, G> {
    /// The whole ambient group as a member set.
    pub fn whole(ops: &'a G) -> Members<'a, G> {
        let elems: Vec<usize> = (0..ops.order()).collect();
        Members { ops, elems, pos: HashMap::new(), whole: true }
    }

    /// An explicit member list; must be closed under the group operations
    /// (checked in debug builds, exhaustively only for small lists).
    pub fn subgroup(ops: &'a G, mut elems: Vec<usize>) -> Members<'a, G> {
        elems.sort_unstable();
        elems.dedup();
        let pos = elems.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
        let m = Members { ops, elems, pos, whole: false };
        debug_assert!(m.is_closed());
        m
    }

    pub fn is_closed(&self) -> bool {
        if !self.contains(self.ops.identity())
            || !self.elems.iter().all(|&a| self.contains(self.ops.inv(a)))
        {
            return false;
        }
        if self.elems.len() <= 200 {
            return self
                .elems
                .iter()
                .all(|&a| self.elems.iter().all(|&b| self.contains(self.ops.mul(a, b))));
        }
        // deterministic sample of products for large lists
        let n = self.elems.len() as u64;
        let mut state: u64 = 0x853c49e6748fea9b;
        (0..2_000).all(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let a = self.elems[(state % n) as usize];
            state = state.wrapping_mul(0x2545f4914f6cdd1d);
            let b = self.elems[(state % n) as usize];
            self.contains(self.ops.mul(a, b))
        })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn is_whole_group(&self) -> bool {
        self.whole
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        if self.whole {
            x < self.elems.len()
        } else {
            self.pos.contains_key(&x)
        }
    }

    #[inline]
    pub fn position(&self, x: usize) -> u32 {
        if self.whole {
            x as u32
        } else {
            self.pos[&x]
        }
    }

    /// Greedy small generating set of the subgroup.
    pub fn generators(&self) -> Vec<usize> {
        if self.whole {
            return self.ops.generating_set();
        }
        let e = self.ops.identity();
        let mut gens: Vec<usize> = Vec::new();
        let mut closed: HashMap<usize, ()> = HashMap::new();
        closed.insert(e, ());
        while closed.len() < self.elems.len() {
            let next = *self.elems.iter().find(|x| !closed.contains_key(x)).unwrap();
            gens.push(next);
            let mut queue: Vec<usize> = closed.keys().copied().collect();
            closed.insert(next, ());
            queue.push(next);
            let mut qi = 0;
            while qi < queue.len() {
                let x = queue[qi];
                qi += 1;
                for &g in &gens {
                    let y = self.ops.mul(x, g);
                    if !closed.contains_key(&y) {
                        closed.insert(y, ());
                        queue.push(y);
                    }
                }
            }
        }
        gens
    }

    /// Conjugacy classes of the subgroup under its own conjugation action.
    pub fn conj_classes(&self) -> MemberClasses {
        let gens = self.generators();
        let n = self.elems.len();
        let mut class_of = vec![u32::MAX; n];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for i in 0..n {
            if class_of[i] != u32::MAX {
                continue;
            }
            let cls = reps.len() as u32;
            reps.push(self.elems[i]);
            let mut orbit = vec![self.elems[i]];
            class_of[i] = cls;
            let mut qi = 0;
            while qi < orbit.len() {
                let y = orbit[qi];
                qi += 1;
                for &g in &gens {
                    let z = self.ops.conj(g, y);
                    let zp = self.position(z) as usize;
                    if class_of[zp] == u32::MAX {
                        class_of[zp] = cls;
                        orbit.push(z);
                    }
                }
            }
            sizes.push(orbit.len());
        }
        MemberClasses { reps, sizes, class_of }
    }

    /// Members commuting with `x`.
    pub fn centralizer_of(&self, x: usize) -> Vec<usize> {
        self.elems
            .iter()
            .copied()
            .filter(|&g| self.ops.mul(g, x) == self.ops.mul(x, g))
            .collect()
    }

    /// Members commuting with every element of `s`.
    pub fn centralizer_of_set(&self, s: &[usize]) -> Vec<usize> {
        self.elems
            .iter()
            .copied()
            .filter(|&g| s.iter().all(|&x| self.ops.mul(g, x) == self.ops.mul(x, g)))
            .collect()
    }
}
