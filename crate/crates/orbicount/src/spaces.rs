//! Virtual finite `G`-sets standing in for `G`-manifolds.
//!
//! A space is an integer combination of honest finite `G`-sets; every Euler
//! characteristic the crate computes is linear in fixed-point counts, so
//! virtual spaces realize all integer values of the invariants. Quotients are
//! defined through the Burnside average, which agrees with orbit counting on
//! honest terms (checked).

use crate::budget::Budget;
use crate::bundles::{aut_data, aut_group, rho_orbits};
use crate::error::{Error, Result};
use crate::groups::{enumerate_homs, FiniteGroup, Members, WreathCodec};
use crate::presentations::{presentation_catalog, product_with_z, Family, Presentation};
use crate::series::geometric_power;
use crate::subgroups::SubgroupRecord;
use crate::{Int, Rat};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// One honest `G`-set with an integer coefficient: a full action table
/// `action[g][point]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    action: Vec<Vec<usize>>,
}

impl Term {
    pub fn degree(&self) -> usize {
        if self.action.is_empty() {
            0
        } else {
            self.action[0].len()
        }
    }

    #[inline]
    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    /// Points fixed by every listed element.
    fn fixed_points(&self, elems: &[usize]) -> Vec<usize> {
        (0..self.degree())
            .filter(|&x| elems.iter().all(|&g| self.action[g][x] == x))
            .collect()
    }

    /// Orbits under a list of elements closed under the group operations.
    fn orbit_count(&self, subgroup: &[usize]) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut count = 0;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(x) = stack.pop() {
                for &g in subgroup {
                    let y = self.action[g][x];
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        count
    }
}

/// A virtual finite `G`-set: an integer combination of honest `G`-sets, tied
/// to a specific group by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualGSpace {
    order: usize,
    terms: Vec<Term>,
}

impl VirtualGSpace {
    /// A single fixed point with coefficient 1.
    pub fn point(g: &FiniteGroup) -> VirtualGSpace {
        VirtualGSpace { order: g.order(), terms: vec![Term { coeff: 1, action: vec![vec![0]; g.order()] }] }
    }

    /// The coset space `G/H` for a subgroup given by its element list.
    pub fn coset_space(g: &FiniteGroup, subgroup: &[usize]) -> VirtualGSpace {
        let mut point_of = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        for x in 0..g.order() {
            if point_of[x] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(x);
            for &h in subgroup {
                point_of[g.mul(x, h)] = idx;
            }
        }
        let action: Vec<Vec<usize>> = (0..g.order())
            .map(|a| reps.iter().map(|&x| point_of[g.mul(a, x)]).collect())
            .collect();
        VirtualGSpace { order: g.order(), terms: vec![Term { coeff: 1, action }] }
    }

    /// The regular `G`-set.
    pub fn regular(g: &FiniteGroup) -> VirtualGSpace {
        Self::coset_space(g, &[g.identity()])
    }

    /// Build one term from images of the group's generating set; the images
    /// must extend to an action (checked on every Cayley edge).
    pub fn from_generator_images(
        g: &FiniteGroup,
        degree: usize,
        gen_images: &[Vec<usize>],
        coeff: i64,
    ) -> Result<VirtualGSpace> {
        let gens = g.generators();
        if gen_images.len() != gens.len() {
            return Err(Error::invalid("one permutation per group generator required"));
        }
        for img in gen_images {
            if img.len() != degree || crate::groups::Permutation::new(img.clone()).is_none() {
                return Err(Error::invalid("generator image is not a permutation"));
            }
        }
        let mut action: Vec<Option<Vec<usize>>> = vec![None; g.order()];
        action[g.identity()] = Some((0..degree).collect());
        let mut queue = vec![g.identity()];
        while let Some(x) = queue.pop() {
            for (gi, &gg) in gens.iter().enumerate() {
                let y = g.mul(x, gg);
                let composed: Vec<usize> = {
                    let ax = action[x].as_ref().unwrap();
                    // alpha(x * g) = alpha(x) o alpha(g)
                    (0..degree).map(|pt| ax[gen_images[gi][pt]]).collect()
                };
                match &action[y] {
                    Some(existing) => {
                        if *existing != composed {
                            return Err(Error::invalid(
                                "generator images do not define an action",
                            ));
                        }
                    }
                    None => {
                        action[y] = Some(composed);
                        queue.push(y);
                    }
                }
            }
        }
        let action: Vec<Vec<usize>> = action.into_iter().map(Option::unwrap).collect();
        Ok(VirtualGSpace { order: g.order(), terms: vec![Term { coeff, action }] })
    }

    /// Scale every coefficient.
    pub fn scaled(mut self, c: i64) -> VirtualGSpace {
        for t in &mut self.terms {
            t.coeff *= c;
        }
        self
    }

    /// Disjoint union (sum of virtual terms); both sides must be over the
    /// same group.
    pub fn union(mut self, other: VirtualGSpace) -> VirtualGSpace {
        assert_eq!(self.order, other.order, "spaces over different groups");
        self.terms.extend(other.terms);
        self
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    /// `chi(M)`: the sum of coefficients times degrees.
    pub fn euler(&self) -> i64 {
        self.terms.iter().map(|t| t.coeff * t.degree() as i64).sum()
    }

    /// `chi(M^S)`: fixed points are those fixed by every listed element
    /// (fixed by `S` iff fixed by the generated subgroup).
    pub fn fixed_euler(&self, elems: &[usize]) -> i64 {
        for &e in elems {
            assert!(e < self.order, "element id out of range");
        }
        self.terms.iter().map(|t| t.coeff * t.fixed_points(elems).len() as i64).sum()
    }

    /// `chi(M/K)` for a subgroup `K` given by its element list: the Burnside
    /// average, which must agree with orbit counting on every honest term.
    pub fn quotient_euler(&self, subgroup: &[usize]) -> Result<i64> {
        if subgroup.is_empty() {
            return Err(Error::invalid("empty subgroup list"));
        }
        let mut total = 0i64;
        for t in &self.terms {
            let burnside_sum: i64 =
                subgroup.iter().map(|&k| t.fixed_points(&[k]).len() as i64).sum();
            if burnside_sum % subgroup.len() as i64 != 0 {
                return Err(Error::invalid("element list is not closed under the group law"));
            }
            let average = burnside_sum / subgroup.len() as i64;
            let orbits = t.orbit_count(subgroup) as i64;
            if average != orbits {
                return Err(Error::VerificationFailed(format!(
                    "Burnside average {average} disagrees with orbit count {orbits}"
                )));
            }
            total += t.coeff * average;
        }
        Ok(total)
    }

    /// The fixed subspace `M^S` as a virtual space, with the action of a
    /// subgroup that preserves it (given as an element list of this group).
    pub fn fixed_subspace(&self, elems: &[usize], acting: &[usize]) -> Result<VirtualGSpace> {
        let mut terms = Vec::new();
        for t in &self.terms {
            let pts = t.fixed_points(elems);
            let index_of: std::collections::HashMap<usize, usize> =
                pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
            let mut action = Vec::with_capacity(acting.len());
            for &a in acting {
                let row: Option<Vec<usize>> =
                    pts.iter().map(|&p| index_of.get(&t.action[a][p]).copied()).collect();
                let row = row.ok_or_else(|| {
                    Error::invalid("acting elements do not preserve the fixed subspace")
                })?;
                action.push(row);
            }
            terms.push(Term { coeff: t.coeff, action });
        }
        Ok(VirtualGSpace { order: acting.len(), terms })
    }

    /// Deterministic pseudo-random virtual space for tests: a few coset
    /// spaces of cyclic subgroups with small nonzero coefficients.
    pub fn sample(g: &FiniteGroup, seed: u64) -> VirtualGSpace {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = |m: u64| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % m) as usize
        };
        let n_terms = 1 + next(3);
        let mut out: Option<VirtualGSpace> = None;
        for _ in 0..n_terms {
            let x = next(g.order() as u64);
            let cyclic: Vec<usize> = {
                let mut elems = vec![g.identity()];
                let mut y = x;
                while y != g.identity() {
                    elems.push(y);
                    y = g.mul(y, x);
                }
                elems
            };
            let coeff = [1i64, -1, 2, -2, 1][next(5)];
            let term = VirtualGSpace::coset_space(g, &cyclic).scaled(coeff);
            out = Some(match out {
                None => term,
                Some(acc) => acc.union(term),
            });
        }
        out.unwrap()
    }
}

/// An invariant value with its integrality contract.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbifoldValue {
    pub value: Rat,
    pub integral: bool,
}

impl OrbifoldValue {
    pub fn rational(value: Rat) -> OrbifoldValue {
        OrbifoldValue { value, integral: false }
    }

    pub fn integer(value: Rat) -> Result<OrbifoldValue> {
        if !value.denom().is_one() {
            return Err(Error::VerificationFailed(format!(
                "value {value} asserted integral has a denominator"
            )));
        }
        Ok(OrbifoldValue { value, integral: true })
    }

    pub fn as_int(&self) -> Option<Int> {
        self.value.denom().is_one().then(|| self.value.numer().clone())
    }
}

/// `chi^orb_Gamma(M; G) = (1/|G|) sum_{phi: Gamma -> G} chi(M^phi)`.
pub fn chi_orb_gamma(
    p: &Presentation,
    g: &FiniteGroup,
    m: &VirtualGSpace,
    budget: &Budget,
) -> Result<OrbifoldValue> {
    let members = Members::whole(g);
    let homs = enumerate_homs(p, &members, budget)?;
    let mut total = Int::zero();
    for hom in &homs {
        total += Int::from(m.fixed_euler(&hom.images));
    }
    Ok(OrbifoldValue::rational(Rat::new(total, Int::from(g.order()))))
}

/// `chi^orb` for the `Z_p^d` model: the average of `chi(M^phi)` over
/// commuting `d`-tuples of `p`-power-order elements.
pub fn chi_orb_p_primary(
    d: usize,
    prime: u64,
    g: &FiniteGroup,
    m: &VirtualGSpace,
    budget: &Budget,
) -> Result<OrbifoldValue> {
    let p = presentation_catalog(Family::FreeAbelian, d)?;
    let members = Members::whole(g);
    let homs = enumerate_homs(&p, &members, budget)?;
    let mut total = Int::zero();
    for hom in &homs {
        let all_p_power = hom.images.iter().all(|&x| {
            let mut ord = g.element_order(x) as u64;
            while ord % prime == 0 {
                ord /= prime;
            }
            ord == 1
        });
        if all_p_power {
            total += Int::from(m.fixed_euler(&hom.images));
        }
    }
    Ok(OrbifoldValue::rational(Rat::new(total, Int::from(g.order()))))
}

/// `chi_Gamma(M; G) = sum over [phi] of chi(M^phi / C(phi))`, cross-checked
/// against `chi^orb_{Gamma x Z}(M; G)`; always an integer.
pub fn chi_gamma(
    p: &Presentation,
    g: &FiniteGroup,
    m: &VirtualGSpace,
    budget: &Budget,
) -> Result<OrbifoldValue> {
    let members = Members::whole(g);
    let classes = crate::groups::hom_classes(p, &members, budget)?;
    let mut total = Int::zero();
    for (rep, _) in &classes {
        let centralizer = g.centralizer(&rep.images);
        let sub = m.fixed_subspace(&rep.images, &centralizer)?;
        let all: Vec<usize> = (0..centralizer.len()).collect();
        total += Int::from(sub.quotient_euler(&all)?);
    }
    let direct = OrbifoldValue::integer(Rat::from_integer(total))?;
    let via_product = chi_orb_gamma(&product_with_z(p), g, m, budget)?;
    if via_product.value != direct.value {
        return Err(Error::VerificationFailed(format!(
            "chi_Gamma = {} but chi^orb over Gamma x Z = {}",
            direct.value, via_product.value
        )));
    }
    Ok(direct)
}

/// `chi^(d)_H(M; G) = chi^orb over H x Z^{d+1}` (the iterated product
/// route); `d = 0` recovers `chi_H`.
pub fn chi_d_of_presentation(
    p: &Presentation,
    d: usize,
    g: &FiniteGroup,
    m: &VirtualGSpace,
    budget: &Budget,
) -> Result<OrbifoldValue> {
    let extended = crate::presentations::product_with_z_iter(p, d);
    chi_gamma(&extended, g, m, budget)
}

/// The invariant associated to the transitive `Gamma`-set of a subgroup
/// record: the sum over `[rho] in Hom(H, G)/(N_Gamma(H) x G)` of the
/// `d`-th-order invariant of the fixed set with its automorphism action.
/// `d = 0` is the plain `chi_{[Gamma/H]}`.
pub fn chi_class_transitive(
    record: &SubgroupRecord,
    g: &FiniteGroup,
    m: &VirtualGSpace,
    d: usize,
    budget: &Budget,
) -> Result<OrbifoldValue> {
    let orbits = rho_orbits(record, g, budget)?;
    let mut total = Rat::zero();
    for (rho, _) in &orbits {
        if d == 0 {
            // Burnside over the T_rho / H pairs, acting through G-parts
            let data = aut_data(record, g, rho)?;
            let mut acc = Int::zero();
            for &(_, g0) in &data.pairs {
                let mut elems = rho.clone();
                elems.push(g0);
                acc += Int::from(m.fixed_euler(&elems));
            }
            total += Rat::new(acc, Int::from(data.aut_order));
        } else {
            let (aut, g_parts) = aut_group(record, g, rho)?;
            let sub = m.fixed_subspace(rho, &g_parts)?;
            let p = presentation_catalog(Family::FreeAbelian, d)?;
            total += chi_gamma(&p, &aut, &sub, budget)?.value;
        }
    }
    OrbifoldValue::integer(total)
}

/// The invariant of a general finite `Gamma`-set given by `(record,
/// multiplicity)` orbits: the product over distinct classes of the
/// coefficient of `q^r` in `(1 - q)^{-chi_{[Gamma/H]}}`. An empty set gives 1.
pub fn chi_class_gset(
    items: &[(&SubgroupRecord, usize)],
    g: &FiniteGroup,
    m: &VirtualGSpace,
    budget: &Budget,
) -> Result<OrbifoldValue> {
    // group multiplicities by conjugacy class
    let mut classes: Vec<(Vec<usize>, &SubgroupRecord, usize)> = Vec::new();
    for &(record, mult) in items {
        let key = record.table.canonical_form().0.flat();
        match classes.iter_mut().find(|(k, _, _)| *k == key) {
            Some(entry) => entry.2 += mult,
            None => classes.push((key, record, mult)),
        }
    }
    let mut total = Rat::one();
    for (_, record, mult) in &classes {
        if *mult == 0 {
            continue;
        }
        let chi = chi_class_transitive(record, g, m, 0, budget)?;
        let series = geometric_power(&chi.value, *mult);
        total *= series.coeff(*mult).clone();
    }
    OrbifoldValue::integer(total)
}

/// Fixed-point Euler characteristic of `M^n` under a homomorphism into
/// `G wr S_n` (generator images under the codec), by direct constraint
/// propagation over the induced orbits. Exact for virtual `M`.
pub fn fixed_euler_power(m: &VirtualGSpace, codec: &WreathCodec, theta: &[usize]) -> Int {
    let n = codec.degree();
    let base = codec.base();
    let decoded: Vec<(Vec<usize>, crate::groups::Permutation)> =
        theta.iter().map(|&t| codec.decode(t)).collect();
    let inverses: Vec<crate::groups::Permutation> =
        decoded.iter().map(|(_, s)| s.inverse()).collect();
    let mut seen = vec![false; n];
    let mut result = Int::one();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // spanning tree of the orbit: (child, parent, generator, forward?)
        let mut orbit = vec![start];
        seen[start] = true;
        let mut tree: Vec<(usize, usize, usize, bool)> = Vec::new();
        let mut qi = 0;
        while qi < orbit.len() {
            let z = orbit[qi];
            qi += 1;
            for (gi, (_, sigma)) in decoded.iter().enumerate() {
                for (y, fwd) in [(sigma.apply(z), true), (inverses[gi].apply(z), false)] {
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                        tree.push((y, z, gi, fwd));
                    }
                }
            }
        }
        // a fixed tuple is determined by its value at the orbit base; count
        // base values whose propagation satisfies every constraint
        let mut orbit_sum = Int::zero();
        for t in m.terms() {
            let mut count = 0i64;
            for x0 in 0..t.degree() {
                let mut x = vec![usize::MAX; n];
                x[start] = x0;
                for &(child, parent, gi, fwd) in &tree {
                    let f = &decoded[gi].0;
                    x[child] = if fwd {
                        // child = sigma(parent): x_child = f(child) . x_parent
                        t.apply(f[child], x[parent])
                    } else {
                        // parent = sigma(child): x_parent = f(parent) . x_child
                        t.apply(base.inv(f[parent]), x[parent])
                    };
                }
                let ok = orbit.iter().all(|&k| {
                    decoded.iter().zip(&inverses).all(|((f, _), sigma_inv)| {
                        x[k] == t.apply(f[k], x[sigma_inv.apply(k)])
                    })
                });
                if ok {
                    count += 1;
                }
            }
            orbit_sum += Int::from(t.coeff) * Int::from(count);
        }
        result *= orbit_sum;
    }
    result
}

/// JSON form: `{"group": <name>, "terms": [{"coeff": -1, "degree": m,
/// "gens": [[...], ...]}]}` with one permutation per group generator.
#[derive(Debug, Serialize, Deserialize)]
pub struct VirtualGSpaceJson {
    pub group: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: i64,
    pub degree: usize,
    pub gens: Vec<Vec<usize>>,
}

pub fn space_to_json(m: &VirtualGSpace, g: &FiniteGroup, group_name: &str) -> VirtualGSpaceJson {
    VirtualGSpaceJson {
        group: group_name.to_owned(),
        terms: m
            .terms()
            .iter()
            .map(|t| TermJson {
                coeff: t.coeff,
                degree: t.degree(),
                gens: g.generators().iter().map(|&gg| t.action[gg].clone()).collect(),
            })
            .collect(),
    }
}

pub fn space_from_json(g: &FiniteGroup, j: &VirtualGSpaceJson) -> Result<VirtualGSpace> {
    let mut out: Option<VirtualGSpace> = None;
    for t in &j.terms {
        let term = VirtualGSpace::from_generator_images(g, t.degree, &t.gens, t.coeff)?;
        out = Some(match out {
            None => term,
            Some(acc) => acc.union(term),
        });
    }
    out.ok_or_else(|| Error::invalid("a virtual space needs at least one term"))
}
