//! Homomorphism enumeration and counting.
//!
//! Backtracking enumeration works for any presentation; catalog presentations
//! (free, free abelian, surface, non-orientable) also have counting paths
//! through class-function convolution that never enumerate tuples.

use super::view::{GroupOps, MemberClasses, Members};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::presentations::{Family, Presentation, Word};
use crate::Int;
use num_traits::{One, Zero};

/// A homomorphism out of a presented group, recorded by its generator images
/// (global element ids of the target).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupHom {
    pub images: Vec<usize>,
}

/// Evaluate a word at the given generator images.
pub fn eval_word<G: GroupOps>(ops: &G, images: &[usize], w: &Word) -> usize {
    let mut acc = ops.identity();
    for &l in w.letters() {
        let img = images[(l.unsigned_abs() - 1) as usize];
        let factor = if l > 0 { img } else { ops.inv(img) };
        acc = ops.mul(acc, factor);
    }
    acc
}

/// Check the defining property: every relator maps to the identity.
pub fn is_hom<G: GroupOps>(ops: &G, p: &Presentation, images: &[usize]) -> bool {
    images.len() == p.generator_count()
        && p.relators().iter().all(|r| eval_word(ops, images, r) == ops.identity())
}

struct Search<'a, 'b, G: GroupOps> {
    p: &'a Presentation,
    members: &'a Members<'b, G>,
    // generator assignment order: by first appearance in relators
    order: Vec<usize>,
    // relators to check once the k-th assignment (in `order`) is made
    checks: Vec<Vec<&'a Word>>,
    nodes: u64,
    node_cap: u64,
}

impl<'a, 'b, G: GroupOps> Search<'a, 'b, G> {
    fn new(p: &'a Presentation, members: &'a Members<'b, G>, budget: &Budget) -> Search<'a, 'b, G> {
        let n = p.generator_count();
        let mut order = Vec::with_capacity(n);
        for r in p.relators() {
            for &l in r.letters() {
                let g = (l.unsigned_abs() - 1) as usize;
                if !order.contains(&g) {
                    order.push(g);
                }
            }
        }
        for g in 0..n {
            if !order.contains(&g) {
                order.push(g);
            }
        }
        let rank_of = |g: usize| order.iter().position(|&x| x == g).unwrap();
        let mut checks: Vec<Vec<&Word>> = vec![Vec::new(); n];
        for r in p.relators() {
            let last = r
                .letters()
                .iter()
                .map(|&l| rank_of((l.unsigned_abs() - 1) as usize))
                .max()
                .expect("relators are non-empty");
            checks[last].push(r);
        }
        Search { p, members, order, checks, nodes: 0, node_cap: budget.hom_nodes }
    }

    fn run(&mut self, mut visit: impl FnMut(&[usize])) -> Result<()> {
        let n = self.p.generator_count();
        if n == 0 {
            visit(&[]);
            return Ok(());
        }
        let mut images = vec![usize::MAX; n];
        self.extend(0, &mut images, &mut visit)
    }

    fn extend(
        &mut self,
        depth: usize,
        images: &mut [usize],
        visit: &mut impl FnMut(&[usize]),
    ) -> Result<()> {
        if depth == self.order.len() {
            visit(images);
            return Ok(());
        }
        let gen = self.order[depth];
        for i in 0..self.members.len() {
            let x = self.members.elems()[i];
            self.nodes += 1;
            if self.nodes > self.node_cap {
                return Err(Error::budget("homomorphism search node cap"));
            }
            images[gen] = x;
            let ok = self.checks[depth]
                .iter()
                .all(|r| eval_word(self.members.ops, images, r) == self.members.ops.identity());
            if ok {
                self.extend(depth + 1, images, visit)?;
            }
        }
        images[gen] = usize::MAX;
        Ok(())
    }
}

/// Enumerate `Hom(p, K)` for the subgroup `K` given by `members`. The result
/// is complete, duplicate-free, and sorted lexicographically by image ids.
pub fn enumerate_homs<G: GroupOps>(
    p: &Presentation,
    members: &Members<'_, G>,
    budget: &Budget,
) -> Result<Vec<GroupHom>> {
    let mut out = Vec::new();
    Search::new(p, members, budget).run(|images| out.push(GroupHom { images: images.to_vec() }))?;
    out.sort();
    Ok(out)
}

/// Count `|Hom(p, K)|` by backtracking without storing the homomorphisms.
pub fn count_homs_backtracking<G: GroupOps>(
    p: &Presentation,
    members: &Members<'_, G>,
    budget: &Budget,
) -> Result<Int> {
    let mut count = Int::zero();
    Search::new(p, members, budget).run(|_| count += 1)?;
    Ok(count)
}

/// Conjugation orbits of the whole target group on `Hom(p, K)`.
/// Returns `(lexicographically least representative, orbit size)` pairs,
/// sorted by representative.
pub fn hom_classes<G: GroupOps>(
    p: &Presentation,
    members: &Members<'_, G>,
    budget: &Budget,
) -> Result<Vec<(GroupHom, usize)>> {
    let homs = enumerate_homs(p, members, budget)?;
    let index: std::collections::HashMap<&[usize], usize> =
        homs.iter().enumerate().map(|(i, h)| (h.images.as_slice(), i)).collect();
    let gens = members.generators();
    let mut seen = vec![false; homs.len()];
    let mut classes = Vec::new();
    for start in 0..homs.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut qi = 0;
        while qi < orbit.len() {
            let cur = orbit[qi];
            qi += 1;
            for &g in &gens {
                let conj: Vec<usize> =
                    homs[cur].images.iter().map(|&x| members.ops.conj(g, x)).collect();
                let j = *index.get(conj.as_slice()).expect("conjugate of a hom is a hom");
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                }
            }
        }
        let rep = orbit.iter().map(|&i| &homs[i]).min().unwrap().clone();
        classes.push((rep, orbit.len()));
    }
    classes.sort();
    Ok(classes)
}

/// The distribution `x -> #{(a,b) in K^2 : [a,b] = x}` as a class function,
/// one value per class of `cls`.
///
/// Uses `#{b : [a,b] = x} = |C(a)|` when `a^-1 x` is conjugate to `a^-1`,
/// and `0` otherwise.
pub fn comm_class_distribution<G: GroupOps>(m: &Members<'_, G>, cls: &MemberClasses) -> Vec<Int> {
    let k = cls.count();
    let n = m.len();
    // per member: inverse and the class of the inverse
    let inv: Vec<usize> = m.elems().iter().map(|&a| m.ops.inv(a)).collect();
    let inv_class: Vec<u32> = inv.iter().map(|&ai| cls.class_of[m.position(ai) as usize]).collect();
    let mut out = vec![Int::zero(); k];
    for target in 0..k {
        let rep = cls.reps[target];
        let mut total = Int::zero();
        for i in 0..n {
            let shifted = m.ops.mul(inv[i], rep);
            if cls.class_of[m.position(shifted) as usize] == inv_class[i] {
                let centralizer_order = n / cls.sizes[cls.class_of[i] as usize];
                total += centralizer_order;
            }
        }
        out[target] = total;
    }
    out
}

/// The distribution `x -> #{a in K : a^2 = x}` as a class function.
pub fn square_class_distribution<G: GroupOps>(
    m: &Members<'_, G>,
    cls: &MemberClasses,
) -> Vec<Int> {
    let mut acc = vec![0usize; cls.count()];
    for &a in m.elems() {
        let sq = m.ops.mul(a, a);
        acc[cls.class_of[m.position(sq) as usize] as usize] += 1;
    }
    // acc[c] counted every element of the class; the count per element is
    // constant on the class
    acc.iter()
        .zip(&cls.sizes)
        .map(|(&total, &size)| {
            assert_eq!(total % size, 0, "square counts must be constant on classes");
            Int::from(total / size)
        })
        .collect()
}

/// Convolution of two class functions: `(f * g)(rep_k) = sum_y f(y) g(y^-1 rep_k)`.
pub fn class_convolve<G: GroupOps>(
    m: &Members<'_, G>,
    cls: &MemberClasses,
    f: &[Int],
    g: &[Int],
) -> Vec<Int> {
    let inv_class: Vec<(usize, u32)> = m
        .elems()
        .iter()
        .enumerate()
        .map(|(i, &y)| (m.ops.inv(y), cls.class_of[i]))
        .collect();
    (0..cls.count())
        .map(|kk| {
            let rep = cls.reps[kk];
            let mut total = Int::zero();
            for &(y_inv, y_class) in &inv_class {
                let fy = &f[y_class as usize];
                if fy.is_zero() {
                    continue;
                }
                let z = m.ops.mul(y_inv, rep);
                total += fy * &g[cls.class_of[m.position(z) as usize] as usize];
            }
            total
        })
        .collect()
}

/// Relator shapes with convolution counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelatorShape {
    /// `[a_1,b_1]...[a_m,b_m]`: the defining relator of the genus-`m`
    /// orientable surface group.
    CommutatorPower(usize),
    /// `c_1^2...c_m^2`: the defining relator of the genus-`m` non-orientable
    /// surface group.
    SquaresPower(usize),
}

/// Per-class counts of tuples whose relator word evaluates into each class,
/// computed by class-function convolution. The value at the identity class is
/// `|Hom|` of the corresponding surface group.
pub fn relator_count_distribution(
    g: &super::finite::FiniteGroup,
    shape: RelatorShape,
    budget: &Budget,
) -> Result<Vec<Int>> {
    if g.order() > budget.convolution_order_cap {
        return Err(Error::cap(format!(
            "group order {} exceeds convolution cap {}",
            g.order(),
            budget.convolution_order_cap
        )));
    }
    let m = Members::whole(g);
    let cls = m.conj_classes();
    Ok(relator_distribution_in(&m, &cls, shape))
}

pub(crate) fn relator_distribution_in<G: GroupOps>(
    m: &Members<'_, G>,
    cls: &MemberClasses,
    shape: RelatorShape,
) -> Vec<Int> {
    let (base, power) = match shape {
        RelatorShape::CommutatorPower(k) => (comm_class_distribution(m, cls), k),
        RelatorShape::SquaresPower(k) => (square_class_distribution(m, cls), k),
    };
    assert!(power >= 1);
    let mut acc = base.clone();
    for _ in 1..power {
        acc = class_convolve(m, cls, &acc, &base);
    }
    acc
}

fn identity_class<G: GroupOps>(m: &Members<'_, G>, cls: &MemberClasses) -> usize {
    cls.class_of[m.position(m.ops.identity()) as usize] as usize
}

/// Count pairwise-commuting `d`-tuples (the `Z^d` homomorphism count),
/// optionally restricted to elements of `p`-power order (the `Z_p^d` model).
fn commuting_tuple_count<G: GroupOps>(
    m: &Members<'_, G>,
    d: usize,
    p_power_only: Option<u64>,
) -> Int {
    let admissible = |x: usize| match p_power_only {
        None => true,
        Some(p) => {
            let mut ord = m.ops.element_order(x) as u64;
            while ord % p == 0 {
                ord /= p;
            }
            ord == 1
        }
    };
    match d {
        0 => Int::one(),
        1 => Int::from(m.elems().iter().filter(|&&x| admissible(x)).count()),
        _ => {
            let cls = m.conj_classes();
            let mut total = Int::zero();
            for (i, &rep) in cls.reps.iter().enumerate() {
                if !admissible(rep) {
                    continue;
                }
                let cz = Members::subgroup(m.ops, m.centralizer_of(rep));
                total += Int::from(cls.sizes[i]) * commuting_tuple_count(&cz, d - 1, p_power_only);
            }
            total
        }
    }
}

/// `|Hom(p, K)|` for the subgroup `K` given by `members`.
///
/// Catalog presentations are counted without enumeration (powers of the
/// order, commuting tuples, or class convolution); everything else falls back
/// to backtracking.
pub fn hom_count<G: GroupOps>(
    p: &Presentation,
    members: &Members<'_, G>,
    budget: &Budget,
) -> Result<Int> {
    let n = Int::from(members.len());
    match p.catalog_family() {
        Some((Family::Free, s)) => Ok(num_traits::pow::pow(n, s)),
        Some((Family::FreeAbelian, d)) => Ok(commuting_tuple_count(members, d, None)),
        Some((Family::Surface, k)) => {
            let cls = members.conj_classes();
            let dist = relator_distribution_in(members, &cls, RelatorShape::CommutatorPower(k));
            Ok(dist[identity_class(members, &cls)].clone())
        }
        Some((Family::Nonorientable, k)) => {
            let cls = members.conj_classes();
            let dist = relator_distribution_in(members, &cls, RelatorShape::SquaresPower(k));
            Ok(dist[identity_class(members, &cls)].clone())
        }
        None => {
            if p.generator_count() == 0 {
                return Ok(Int::one());
            }
            if p.relators().is_empty() {
                return Ok(num_traits::pow::pow(n, p.generator_count()));
            }
            if is_abelian(members) {
                return Ok(abelian_target_hom_count(p, members));
            }
            count_homs_backtracking(p, members, budget)
        }
    }
}

fn is_abelian<G: GroupOps>(m: &Members<'_, G>) -> bool {
    let gens = m.generators();
    gens.iter()
        .all(|&a| gens.iter().all(|&b| m.ops.mul(a, b) == m.ops.mul(b, a)))
}

/// For abelian targets, homomorphisms factor through the abelianization:
/// `|Hom(Z^a + sum Z_{d_i}, K)| = |K|^a * prod #{x in K : x^{d_i} = e}`.
fn abelian_target_hom_count<G: GroupOps>(p: &Presentation, m: &Members<'_, G>) -> Int {
    use num_traits::ToPrimitive;
    let inv = crate::subgroups::abelianization(p);
    let mut out = num_traits::pow::pow(Int::from(m.len()), inv.free_rank);
    for d in &inv.torsion {
        let e = m.ops.identity();
        let count = m
            .elems()
            .iter()
            .filter(|&&x| {
                // x^d depends only on d mod ord(x)
                let reduced =
                    (d % Int::from(m.ops.element_order(x))).to_usize().expect("small order");
                let mut acc = e;
                for _ in 0..reduced {
                    acc = m.ops.mul(acc, x);
                }
                acc == e
            })
            .count();
        out *= Int::from(count);
    }
    out
}

/// `|Hom(p x Z, K)| = sum_z |Hom(p, C_K(z))|`, summed over class
/// representatives with class-size weights. By Burnside this equals
/// `|K| * |Hom(p, K)/K|`.
pub fn hom_count_times_z<G: GroupOps>(
    p: &Presentation,
    members: &Members<'_, G>,
    budget: &Budget,
) -> Result<Int> {
    let cls = members.conj_classes();
    let mut total = Int::zero();
    for (i, &rep) in cls.reps.iter().enumerate() {
        let cz = Members::subgroup(members.ops, members.centralizer_of(rep));
        total += Int::from(cls.sizes[i]) * hom_count(p, &cz, budget)?;
    }
    Ok(total)
}

/// Count `d`-tuples of pairwise commuting elements of `p`-power order; the
/// model for `|Hom(Z_p^d, G)|`.
pub fn commuting_p_power_tuples(
    g: &super::finite::FiniteGroup,
    d: usize,
    p: u64,
) -> Result<Int> {
    if d == 0 {
        return Err(Error::invalid("arity must be >= 1"));
    }
    if p < 2 || (2..p).take_while(|q| q * q <= p).any(|q| p % q == 0) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let m = Members::whole(g);
    Ok(commuting_tuple_count(&m, d, Some(p)))
}
