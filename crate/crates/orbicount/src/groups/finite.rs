use super::perm::Permutation;
use crate::error::{Error, Result};
use std::collections::HashMap;

/// Conjugacy data of a finite group: class index per element, one
/// representative (the least element id) and the size per class. Classes are
/// ordered by representative.
#[derive(Debug, Clone)]
pub struct ConjClasses {
    pub class_of: Vec<u32>,
    pub reps: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl ConjClasses {
    pub fn count(&self) -> usize {
        self.reps.len()
    }
}

/// A finite group as a closed multiplication table, with cached inverse
/// table, a small generating set, and eagerly computed conjugacy classes.
///
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
    generators: Vec<usize>,
    classes: ConjClasses,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validate a raw multiplication table and build the group.
    ///
    /// Associativity is checked exhaustively up to order 200 and on a
    /// deterministic sample above that; identity and inverse laws are always
    /// checked in full.
    pub fn from_mult_table(mult_rows: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let order = mult_rows.len();
        if order == 0 {
            return Err(Error::invalid("empty multiplication table"));
        }
        let mut mult = Vec::with_capacity(order * order);
        for row in &mult_rows {
            if row.len() != order {
                return Err(Error::invalid("multiplication table is not square"));
            }
            for &v in row {
                if v >= order {
                    return Err(Error::invalid("table entry out of range"));
                }
                mult.push(v as u32);
            }
        }
        Self::from_flat_table(order, mult)
    }

    /// Build from a multiplication closure over ids `0..order`.
    pub fn from_index_mul(
        order: usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<FiniteGroup> {
        let mut mult = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                mult.push(mul(a, b) as u32);
            }
        }
        Self::from_flat_table(order, mult)
    }

    fn from_flat_table(order: usize, mult: Vec<u32>) -> Result<FiniteGroup> {
        let at = |a: usize, b: usize| mult[a * order + b] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::invalid("table has no two-sided identity"))?;
        let mut inv = vec![u32::MAX; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::invalid("table has a non-invertible element"))?;
            inv[a] = b as u32;
        }
        if order <= 200 {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if at(at(a, b), c) != at(a, at(b, c)) {
                            return Err(Error::invalid("table is not associative"));
                        }
                    }
                }
            }
        } else {
            // deterministic sample of 10_000 triples
            let mut state: u64 = 0x9e3779b97f4a7c15;
            for _ in 0..10_000 {
                let mut next = || {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state % order as u64) as usize
                };
                let (a, b, c) = (next(), next(), next());
                if at(at(a, b), c) != at(a, at(b, c)) {
                    return Err(Error::invalid("table is not associative"));
                }
            }
        }

        let generators = greedy_generators(order, identity, &|a, b| at(a, b));
        let classes = conj_classes_from(order, &generators, &|a, b| at(a, b), &|a| inv[a] as usize);
        Ok(FiniteGroup { order, mult, inv, identity, generators, classes, labels: None })
    }

    /// The trivial group.
    pub fn trivial() -> FiniteGroup {
        FiniteGroup::from_index_mul(1, |_, _| 0).expect("trivial group is valid")
    }

    /// Cyclic group of order `n`, elements `0..n` under addition.
    pub fn cyclic(n: usize) -> FiniteGroup {
        let g = FiniteGroup::from_index_mul(n.max(1), |a, b| (a + b) % n.max(1))
            .expect("cyclic table is valid");
        g.with_labels((0..n.max(1)).map(|i| i.to_string()).collect())
    }

    /// Symmetric group `S_n` as a permutation group on `n` points.
    pub fn symmetric(n: usize) -> FiniteGroup {
        if n <= 1 {
            return FiniteGroup::trivial();
        }
        let gens = vec![
            Permutation::from_cycles(n, &[vec![0, 1]]),
            Permutation::from_cycles(n, &[(0..n).collect()]),
        ];
        group_from_generators(n, &gens, usize::MAX).expect("S_n closes")
    }

    /// Direct product; element `a * |B| + b` represents the pair `(a, b)`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let nb = b.order();
        FiniteGroup::from_index_mul(a.order() * nb, |x, y| {
            let (xa, xb) = (x / nb, x % nb);
            let (ya, yb) = (y / nb, y % nb);
            a.mul(xa, ya) * nb + b.mul(xb, yb)
        })
        .expect("product table is valid")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> FiniteGroup {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn classes(&self) -> &ConjClasses {
        &self.classes
    }

    pub fn label_of(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut n = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            n += 1;
        }
        n
    }

    /// All elements commuting with every element of `s`; the whole group when
    /// `s` is empty.
    pub fn centralizer(&self, s: &[usize]) -> Vec<usize> {
        (0..self.order)
            .filter(|&g| s.iter().all(|&x| self.mul(g, x) == self.mul(x, g)))
            .collect()
    }

    /// The center.
    pub fn center(&self) -> Vec<usize> {
        self.centralizer(&(0..self.order).collect::<Vec<_>>())
    }
}

/// Greedy small generating set: repeatedly adjoin the least element outside
/// the closure of the current set.
pub(crate) fn greedy_generators(
    order: usize,
    identity: usize,
    mul: &dyn Fn(usize, usize) -> usize,
) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut closed = vec![false; order];
    closed[identity] = true;
    let mut closed_count = 1;
    while closed_count < order {
        let next = (0..order).find(|&x| !closed[x]).unwrap();
        gens.push(next);
        // close: BFS over right multiplication by gens
        let mut queue: Vec<usize> = (0..order).filter(|&x| closed[x]).collect();
        // seed with the new generator
        if !closed[next] {
            closed[next] = true;
            closed_count += 1;
            queue.push(next);
        }
        let mut qi = 0;
        while qi < queue.len() {
            let x = queue[qi];
            qi += 1;
            for &g in &gens {
                let y = mul(x, g);
                if !closed[y] {
                    closed[y] = true;
                    closed_count += 1;
                    queue.push(y);
                }
            }
        }
    }
    gens
}

/// Conjugation-orbit partition, classes ordered by least element.
pub(crate) fn conj_classes_from(
    order: usize,
    generators: &[usize],
    mul: &dyn Fn(usize, usize) -> usize,
    inv: &dyn Fn(usize) -> usize,
) -> ConjClasses {
    let mut class_of = vec![u32::MAX; order];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for x in 0..order {
        if class_of[x] != u32::MAX {
            continue;
        }
        let cls = reps.len() as u32;
        reps.push(x);
        let mut orbit = vec![x];
        class_of[x] = cls;
        let mut qi = 0;
        while qi < orbit.len() {
            let y = orbit[qi];
            qi += 1;
            for &g in generators {
                let z = mul(mul(g, y), inv(g));
                if class_of[z] == u32::MAX {
                    class_of[z] = cls;
                    orbit.push(z);
                }
            }
        }
        sizes.push(orbit.len());
    }
    ConjClasses { class_of, reps, sizes }
}

/// Close a set of permutations of `{0..n-1}` into the subgroup of `S_n` they
/// generate, and build the multiplication table. Elements are sorted
/// lexicographically by image array, which puts the identity at id 0.
///
/// Errors when the closure exceeds `order_cap`.
pub fn group_from_generators(
    n: usize,
    gens: &[Permutation],
    order_cap: usize,
) -> Result<FiniteGroup> {
    for g in gens {
        if g.degree() != n {
            return Err(Error::invalid("generator degree mismatch"));
        }
    }
    let mut elems: Vec<Permutation> = vec![Permutation::identity(n)];
    let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
    seen.insert(elems[0].images().to_vec(), ());
    let mut qi = 0;
    while qi < elems.len() {
        let cur = elems[qi].clone();
        qi += 1;
        for g in gens {
            let next = g.compose(&cur);
            if !seen.contains_key(next.images()) {
                if elems.len() >= order_cap {
                    return Err(Error::cap(format!(
                        "permutation closure exceeds order cap {order_cap}"
                    )));
                }
                seen.insert(next.images().to_vec(), ());
                elems.push(next);
            }
        }
    }
    elems.sort();
    let index: HashMap<Vec<usize>, usize> =
        elems.iter().enumerate().map(|(i, p)| (p.images().to_vec(), i)).collect();
    let group = FiniteGroup::from_index_mul(elems.len(), |a, b| {
        index[elems[a].compose(&elems[b]).images()]
    })?;
    let labels = elems.iter().map(|p| format!("{:?}", p.images())).collect();
    Ok(group.with_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closes_a_three_cycle() {
        let g = group_from_generators(3, &[Permutation::from_cycles(3, &[vec![0, 1, 2]])], 100)
            .unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.classes().count(), 3);
    }

    #[test]
    fn closes_s3_with_expected_classes() {
        let g = group_from_generators(
            3,
            &[
                Permutation::from_cycles(3, &[vec![0, 1]]),
                Permutation::from_cycles(3, &[vec![0, 1, 2]]),
            ],
            100,
        )
        .unwrap();
        assert_eq!(g.order(), 6);
        let mut sizes = g.classes().sizes.to_vec();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn empty_generator_list_gives_trivial_group() {
        let g = group_from_generators(4, &[], 100).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn closure_respects_cap() {
        let gens = vec![
            Permutation::from_cycles(5, &[vec![0, 1]]),
            Permutation::from_cycles(5, &[vec![0, 1, 2, 3, 4]]),
        ];
        assert!(matches!(group_from_generators(5, &gens, 100), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn identity_and_inverse_laws() {
        let g = FiniteGroup::symmetric(4);
        assert_eq!(g.order(), 24);
        for x in 0..g.order() {
            assert_eq!(g.mul(x, g.identity()), x);
            assert_eq!(g.mul(g.inv(x), x), g.identity());
        }
        // class sizes sum to the order and divide it
        let total: usize = g.classes().sizes.iter().sum();
        assert_eq!(total, 24);
        for &s in &g.classes().sizes {
            assert_eq!(24 % s, 0);
        }
    }

    #[test]
    fn rejects_non_group_tables() {
        // 2x2 with no identity
        assert!(FiniteGroup::from_mult_table(vec![vec![1, 1], vec![1, 1]]).is_err());
        // non-associative magma with identity: e=0, and 1*1=1 breaks inverses
        assert!(FiniteGroup::from_mult_table(vec![vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn centralizers_in_s3() {
        let g = FiniteGroup::symmetric(3);
        // a 3-cycle: its centralizer has order 3
        let three_cycle = (0..6).find(|&x| g.element_order(x) == 3).unwrap();
        assert_eq!(g.centralizer(&[three_cycle]).len(), 3);
        assert_eq!(g.centralizer(&[]).len(), 6);
        assert_eq!(g.center().len(), 1);
    }

    #[test]
    fn direct_product_orders_and_classes() {
        let a = FiniteGroup::cyclic(2);
        let b = FiniteGroup::symmetric(3);
        let p = FiniteGroup::direct_product(&a, &b);
        assert_eq!(p.order(), 12);
        assert_eq!(p.classes().count(), 2 * 3);
    }
}
