//! Decomposition of homomorphisms into wreath products as equivariant bundle
//! data.
//!
//! A homomorphism `theta: Gamma -> G wr S_n` induces an action on the `n`
//! points; each orbit carries an isotropy subgroup `H` (as a coset table) and
//! a homomorphism `rho: H -> G` read off the `G`-components. Components are
//! classified up to simultaneous base-point change (the `N_Gamma(H)`-action)
//! and `G`-conjugacy; the automorphism group of a component has order
//! `|C_G(rho)| * |N^rho / H|` and the full centralizer of `theta` is a direct
//! product of wreath products over the classified components.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groups::{eval_word, FiniteGroup, GroupOps, Members, Permutation, WreathCodec};
use crate::presentations::{Presentation, Word};
use crate::subgroups::{conjugate_rho_images, CosetTable, SubgroupRecord};
use crate::Int;
use num_traits::One;
use std::collections::BTreeSet;

/// One orbit of the induced action, with its isotropy data.
#[derive(Debug, Clone)]
pub struct BundleComponent {
    /// Original points of the orbit, sorted ascending.
    pub orbit: Vec<usize>,
    /// Least point of the orbit; its stabilizer is the recorded subgroup.
    pub base_point: usize,
    /// Original point of each renumbered coset (coset 0 = base point).
    pub point_of_coset: Vec<usize>,
    /// Isotropy subgroup data for the base point.
    pub record: SubgroupRecord,
    /// Images of the record's Schreier generators in the base group.
    pub rho: Vec<usize>,
}

/// Classification key: canonical coset table of the isotropy class and the
/// minimal representative of the `(N_Gamma(H) x G)`-orbit of `rho` on it.
/// Two components are isomorphic as equivariant bundles iff keys are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassKey {
    pub table: Vec<usize>,
    pub rho: Vec<usize>,
}

#[derive(Debug)]
pub struct BundleDecomposition {
    pub theta: Vec<usize>,
    pub components: Vec<BundleComponent>,
    /// Sorted by key: the component indices sharing each key.
    pub grouped: Vec<(ClassKey, Vec<usize>)>,
}

impl BundleDecomposition {
    /// The multiset of keys with multiplicities, as a comparable value.
    pub fn key_multiset(&self) -> Vec<(ClassKey, usize)> {
        self.grouped.iter().map(|(k, v)| (k.clone(), v.len())).collect()
    }
}

fn theta_sigma(codec: &WreathCodec, theta: &[usize]) -> Vec<Permutation> {
    theta.iter().map(|&t| codec.projection(t)).collect()
}

/// `f(w, point)`: evaluate `theta` on a word and read off the `G`-component
/// at a point.
fn f_component(
    codec: &WreathCodec,
    theta: &[usize],
    w: &Word,
    point: usize,
) -> usize {
    let val = eval_word(codec, theta, w);
    codec.decode(val).0[point]
}

/// Decompose `theta` (given by generator images under `codec`) into bundle
/// components. `n = 0` yields an empty decomposition.
pub fn decompose(
    p: &Presentation,
    codec: &WreathCodec,
    theta: &[usize],
    budget: &Budget,
) -> Result<BundleDecomposition> {
    let n = codec.degree();
    let sigmas = theta_sigma(codec, theta);
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // collect the orbit breadth-first in the same column order as coset
        // tables use, so the resulting table equals its own rebase at 0
        let mut point_of_coset = vec![start];
        seen[start] = true;
        let mut qi = 0;
        while qi < point_of_coset.len() {
            let z = point_of_coset[qi];
            qi += 1;
            for s in &sigmas {
                for y in [s.apply(z), s.inverse().apply(z)] {
                    if !seen[y] {
                        seen[y] = true;
                        point_of_coset.push(y);
                    }
                }
            }
        }
        let coset_of_point: std::collections::HashMap<usize, usize> =
            point_of_coset.iter().enumerate().map(|(c, &pt)| (pt, c)).collect();
        let action: Vec<Vec<usize>> = sigmas
            .iter()
            .map(|s| point_of_coset.iter().map(|&pt| coset_of_point[&s.apply(pt)]).collect())
            .collect();
        let table = CosetTable::new(p.generator_count(), action)?;
        let record = SubgroupRecord::from_table(p, table)?;
        let rho: Vec<usize> = record
            .schreier_generators()
            .iter()
            .map(|w| f_component(codec, theta, w, start))
            .collect();
        let mut orbit = point_of_coset.clone();
        orbit.sort_unstable();
        components.push(BundleComponent {
            orbit,
            base_point: start,
            point_of_coset,
            record,
            rho,
        });
    }

    let mut grouped: Vec<(ClassKey, Vec<usize>)> = Vec::new();
    for (i, c) in components.iter().enumerate() {
        let key = classify(p, codec, theta, c, budget)?;
        match grouped.binary_search_by(|(k, _)| k.cmp(&key)) {
            Ok(pos) => grouped[pos].1.push(i),
            Err(pos) => grouped.insert(pos, (key, vec![i])),
        }
    }
    Ok(BundleDecomposition { theta: theta.to_vec(), components, grouped })
}

/// Canonical classification key of one component.
pub fn classify(
    p: &Presentation,
    codec: &WreathCodec,
    theta: &[usize],
    c: &BundleComponent,
    budget: &Budget,
) -> Result<ClassKey> {
    let (canonical_table, roots) = c.record.table.canonical_form();
    let canonical = SubgroupRecord::from_table(p, canonical_table)?;
    // transport rho to the canonical table: read it off at the least root,
    // whose stabilizer is the canonical subgroup
    let root = roots[0];
    let root_point = c.point_of_coset[root];
    let rho0: Vec<usize> = canonical
        .schreier_generators()
        .iter()
        .map(|w| f_component(codec, theta, w, root_point))
        .collect();
    let min_rho = minimize_rho(&canonical, codec.base(), &rho0, budget)?;
    Ok(ClassKey { table: canonical.table.flat(), rho: min_rho })
}

/// Lexicographically least element of the `(N_Gamma(H) x G)`-orbit of `rho`.
fn minimize_rho(
    record: &SubgroupRecord,
    g: &FiniteGroup,
    rho: &[usize],
    budget: &Budget,
) -> Result<Vec<usize>> {
    Ok(rho_orbit(record, g, rho, budget)?.into_iter().min().unwrap())
}

/// The full `(N_Gamma(H) x G)`-orbit of `rho`, breadth-first.
fn rho_orbit(
    record: &SubgroupRecord,
    g: &FiniteGroup,
    rho: &[usize],
    budget: &Budget,
) -> Result<BTreeSet<Vec<usize>>> {
    let fixed = record.table.fixed_cosets(&record.schreier);
    let normalizer_words: Vec<Word> =
        fixed.iter().map(|&z| record.schreier.tree_words[z].clone()).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(rho.to_vec());
    let mut queue: Vec<Vec<usize>> = vec![rho.to_vec()];
    while let Some(cur) = queue.pop() {
        if seen.len() > budget.orbit_states {
            return Err(Error::budget("rho-orbit state cap"));
        }
        for &gg in g.generators() {
            let conj: Vec<usize> = cur.iter().map(|&x| g.conj(gg, x)).collect();
            if seen.insert(conj.clone()) {
                queue.push(conj);
            }
        }
        for u in &normalizer_words {
            let moved = conjugate_rho_images(record, g, &cur, u)?;
            if seen.insert(moved.clone()) {
                queue.push(moved);
            }
        }
    }
    Ok(seen)
}

/// Orbit representatives and sizes of `Hom(H, G) / (N_Gamma(H) x G)`,
/// enumerated from the subgroup presentation.
pub fn rho_orbits(
    record: &SubgroupRecord,
    g: &FiniteGroup,
    budget: &Budget,
) -> Result<Vec<(Vec<usize>, usize)>> {
    let members = Members::whole(g);
    let homs = crate::groups::enumerate_homs(&record.subgroup_presentation, &members, budget)?;
    let mut remaining: BTreeSet<Vec<usize>> = homs.into_iter().map(|h| h.images).collect();
    let mut out = Vec::new();
    while let Some(first) = remaining.iter().next().cloned() {
        let orbit = rho_orbit(record, g, &first, budget)?;
        for x in &orbit {
            assert!(remaining.remove(x), "orbit left Hom(H, G)");
        }
        let size = orbit.len();
        out.push((orbit.into_iter().min().unwrap(), size));
    }
    out.sort();
    Ok(out)
}

/// Automorphism data of one component: the `T_rho / H` pair model.
#[derive(Debug, Clone)]
pub struct AutData {
    /// `|N^rho_Gamma(H) / H|`: normalizer classes fixing the G-class of rho.
    pub n_rho_quotient_order: usize,
    /// `|C_G(rho)|`.
    pub c_g_rho_order: usize,
    /// `|Aut| = |C_G(rho)| * |N^rho / H|`.
    pub aut_order: usize,
    /// The pairs `(fixed coset z, g)` with `g^-1 rho^{u_z} g = rho`; one per
    /// automorphism.
    pub pairs: Vec<(usize, usize)>,
    /// The subgroup of `G` through which the automorphisms act on fixed
    /// sets.
    pub acting_subgroup: Vec<usize>,
}

/// Compute automorphism data for `rho` on a subgroup record.
pub fn aut_data(record: &SubgroupRecord, g: &FiniteGroup, rho: &[usize]) -> Result<AutData> {
    let fixed = record.table.fixed_cosets(&record.schreier);
    let mut pairs = Vec::new();
    let mut fixing_cosets = 0usize;
    for &z in &fixed {
        let u = &record.schreier.tree_words[z];
        let rho_u = conjugate_rho_images(record, g, rho, u)?;
        let mut found = false;
        for cand in 0..g.order() {
            let matches = rho
                .iter()
                .zip(&rho_u)
                .all(|(&r, &ru)| g.mul(g.mul(g.inv(cand), ru), cand) == r);
            if matches {
                pairs.push((z, cand));
                found = true;
            }
        }
        if found {
            fixing_cosets += 1;
        }
    }
    let c_g_rho_order = g.centralizer(rho).len();
    let aut_order = c_g_rho_order * fixing_cosets;
    if pairs.len() != aut_order {
        return Err(Error::VerificationFailed(format!(
            "T_rho pair count {} != |C_G(rho)| * |N^rho/H| = {aut_order}",
            pairs.len()
        )));
    }
    let mut acting: Vec<usize> = pairs.iter().map(|&(_, gg)| gg).collect();
    acting.sort_unstable();
    acting.dedup();
    Ok(AutData {
        n_rho_quotient_order: fixing_cosets,
        c_g_rho_order,
        aut_order,
        pairs,
        acting_subgroup: acting,
    })
}

/// Materialize the automorphism group as a finite group on the `T_rho / H`
/// pairs, together with the `G`-part of each element (its action on fixed
/// sets).
pub fn aut_group(
    record: &SubgroupRecord,
    g: &FiniteGroup,
    rho: &[usize],
) -> Result<(FiniteGroup, Vec<usize>)> {
    let data = aut_data(record, g, rho)?;
    let pairs = data.pairs.clone();
    let index_of = |z: usize, gg: usize| -> usize {
        pairs.iter().position(|&(pz, pg)| pz == z && pg == gg).expect("pair closure")
    };
    let table = &record.table;
    let sch = &record.schreier;
    let mul = |a: usize, b: usize| -> usize {
        let (z1, g1) = pairs[a];
        let (z2, g2) = pairs[b];
        // (u1, g1)(u2, g2) = (u1 u2, g1 g2); normalize u1 u2 = u_{z3} h
        let u1 = &sch.tree_words[z1];
        let u2 = &sch.tree_words[z2];
        let z3 = table.trace(u1, z2);
        let h = sch.tree_words[z3].inverse().concat(u1).concat(u2);
        let rho_h = eval_word(g, rho, &sch.rewrite(table, &h));
        let g3 = g.mul(g.mul(g1, g2), g.inv(rho_h));
        index_of(z3, g3)
    };
    let group = FiniteGroup::from_index_mul(pairs.len(), mul)?;
    let g_parts = pairs.iter().map(|&(_, gg)| gg).collect();
    Ok((group, g_parts))
}

/// `|C_{G_n}(theta)|` from the classified decomposition:
/// the product over keys of `aut_order^mult * mult!`.
pub fn centralizer_order_structural(
    p: &Presentation,
    codec: &WreathCodec,
    d: &BundleDecomposition,
) -> Result<Int> {
    let _ = p;
    let mut total = Int::one();
    for (_, comps) in &d.grouped {
        let rep = &d.components[comps[0]];
        let data = aut_data(&rep.record, codec.base(), &rep.rho)?;
        let mult = comps.len();
        total *= num_traits::pow::pow(Int::from(data.aut_order), mult);
        total *= Int::from(crate::groups::factorial(mult));
    }
    Ok(total)
}

/// All wreath elements commuting with every `theta` image, by scanning the
/// whole wreath group. The oracle for the structural order.
pub fn brute_centralizer(codec: &WreathCodec, theta: &[usize], cap: usize) -> Result<Vec<usize>> {
    if codec.order() > cap {
        return Err(Error::cap(format!("wreath order {} over brute cap {cap}", codec.order())));
    }
    Ok((0..codec.order())
        .filter(|&c| theta.iter().all(|&t| codec.mul(c, t) == codec.mul(t, c)))
        .collect())
}

/// Rebuild a homomorphism from grouped `(H, rho)` data with canonical section
/// choices: blocks are laid out key by key, and the `G`-component over each
/// coset edge is `rho` of the edge's Schreier token.
pub fn reconstruct(
    p: &Presentation,
    codec: &WreathCodec,
    d: &BundleDecomposition,
) -> Result<Vec<usize>> {
    let n = codec.degree();
    let g = codec.base();
    let mut images = Vec::with_capacity(p.generator_count());
    for gen in 0..p.generator_count() {
        let mut sigma = vec![usize::MAX; n];
        let mut f = vec![g.identity(); n];
        let mut offset = 0usize;
        for (key, comps) in &d.grouped {
            let index = key_index(key, p.generator_count());
            let table = CosetTable::new(p.generator_count(), unflatten(key, p.generator_count()))?;
            let record = SubgroupRecord::from_table(p, table)?;
            for _ in comps {
                for z in 0..index {
                    let z_next = record.table.apply_letter((gen + 1) as i32, z);
                    sigma[offset + z] = offset + z_next;
                    f[offset + z_next] = match record.schreier.token_of(z, gen) {
                        Some(k) => key.rho[k],
                        None => g.identity(),
                    };
                }
                offset += index;
            }
        }
        let sigma = Permutation::new(sigma).expect("coset actions are bijective");
        images.push(codec.encode(&f, &sigma));
    }
    if !crate::groups::is_hom(codec, p, &images) {
        return Err(Error::VerificationFailed("reconstructed map is not a homomorphism".into()));
    }
    Ok(images)
}

fn key_index(key: &ClassKey, n_gens: usize) -> usize {
    if n_gens == 0 {
        1
    } else {
        key.table.len() / (2 * n_gens)
    }
}

fn unflatten(key: &ClassKey, n_gens: usize) -> Vec<Vec<usize>> {
    let index = key_index(key, n_gens);
    (0..n_gens)
        .map(|g| (0..index).map(|z| key.table[z * 2 * n_gens + 2 * g]).collect())
        .collect()
}

/// Search the whole wreath group for a conjugator between two
/// homomorphisms.
pub fn find_conjugator(
    codec: &WreathCodec,
    theta1: &[usize],
    theta2: &[usize],
    cap: usize,
) -> Result<Option<usize>> {
    if codec.order() > cap {
        return Err(Error::cap("wreath order over conjugator-search cap"));
    }
    Ok((0..codec.order()).find(|&eta| {
        theta1
            .iter()
            .zip(theta2)
            .all(|(&a, &b)| codec.mul(codec.mul(eta, a), codec.inv(eta)) == b)
    }))
}

/// The structural centralizer as an explicit element set: within-component
/// automorphisms from the `T_rho / H` pairs, block swaps between isomorphic
/// components, closed under multiplication.
pub fn structural_centralizer_elements(
    p: &Presentation,
    codec: &WreathCodec,
    d: &BundleDecomposition,
    cap: usize,
) -> Result<Vec<usize>> {
    let g = codec.base();
    let n = codec.degree();
    let mut generators: Vec<usize> = Vec::new();

    for (_, comps) in &d.grouped {
        let rep = &d.components[comps[0]];
        let data = aut_data(&rep.record, g, &rep.rho)?;
        // automorphisms of the representative component, extended by the
        // identity elsewhere
        for &(z_fixed, g0) in &data.pairs {
            let u0 = &rep.record.schreier.tree_words[z_fixed];
            let mut sigma = vec![usize::MAX; n];
            let mut f = vec![g.identity(); n];
            for i in 0..n {
                if !rep.orbit.contains(&i) {
                    sigma[i] = i;
                }
            }
            for (c, &pt) in rep.point_of_coset.iter().enumerate() {
                // v = tree word of coset c maps base to pt
                let v = &rep.record.schreier.tree_words[c];
                let vu = v.concat(&u0.inverse());
                let target_coset = rep.record.table.trace(&vu, 0);
                let target = rep.point_of_coset[target_coset];
                sigma[pt] = target;
                let fv = f_component(codec, &d.theta, &vu, target);
                let f_l = f_component(codec, &d.theta, v, pt);
                f[target] = g.mul(g.mul(fv, g0), g.inv(f_l));
            }
            let sigma = Permutation::new(sigma)
                .ok_or_else(|| Error::VerificationFailed("automorphism is not bijective".into()))?;
            generators.push(codec.encode(&f, &sigma));
        }
        // adjacent block swaps between isomorphic components
        for w in comps.windows(2) {
            generators.push(swap_element(p, codec, d, w[0], w[1])?);
        }
    }

    // close under multiplication
    let mut elems: BTreeSet<usize> = BTreeSet::new();
    elems.insert(codec.identity());
    let mut queue: Vec<usize> = vec![codec.identity()];
    while let Some(x) = queue.pop() {
        if elems.len() > cap {
            return Err(Error::budget("structural centralizer closure cap"));
        }
        for &gg in &generators {
            let y = codec.mul(x, gg);
            if elems.insert(y) {
                queue.push(y);
            }
        }
    }
    Ok(elems.into_iter().collect())
}

/// A wreath element swapping two isomorphic components through an explicit
/// bundle isomorphism witness, fixing everything else.
fn swap_element(
    p: &Presentation,
    codec: &WreathCodec,
    d: &BundleDecomposition,
    i: usize,
    j: usize,
) -> Result<usize> {
    let _ = p;
    let g = codec.base();
    let n = codec.degree();
    let ci = &d.components[i];
    let cj = &d.components[j];
    // find a point z of the j-orbit with the same stabilizer as ci's base,
    // and g0 conjugating the rho read at z onto ci's rho
    let mut witness: Option<(usize, usize)> = None;
    'outer: for &z in &cj.orbit {
        let stab_matches = ci
            .record
            .schreier_generators()
            .iter()
            .all(|w| codec.projection(eval_word(codec, &d.theta, w)).apply(z) == z);
        if !stab_matches {
            continue;
        }
        let rho_z: Vec<usize> = ci
            .record
            .schreier_generators()
            .iter()
            .map(|w| f_component(codec, &d.theta, w, z))
            .collect();
        for cand in 0..g.order() {
            let ok = ci
                .rho
                .iter()
                .zip(&rho_z)
                .all(|(&r, &rz)| g.mul(g.mul(g.inv(cand), rz), cand) == r);
            if ok {
                witness = Some((z, cand));
                break 'outer;
            }
        }
    }
    let (z0, g0) = witness.ok_or_else(|| {
        Error::VerificationFailed("components with equal keys must admit a witness".into())
    })?;

    let mut sigma = vec![usize::MAX; n];
    let mut f = vec![g.identity(); n];
    for k in 0..n {
        if !ci.orbit.contains(&k) && !cj.orbit.contains(&k) {
            sigma[k] = k;
        }
    }
    for (c, &pt) in ci.point_of_coset.iter().enumerate() {
        let v = &ci.record.schreier.tree_words[c];
        // alpha(theta(v)(base_i, e)) = theta(v)(z0, g0)
        let target = codec.projection(eval_word(codec, &d.theta, v)).apply(z0);
        sigma[pt] = target;
        let fw = g.mul(
            g.mul(f_component(codec, &d.theta, v, target), g0),
            g.inv(f_component(codec, &d.theta, v, pt)),
        );
        f[target] = fw;
        // inverse direction: target -> pt with the inverse G-part
        sigma[target] = pt;
        f[pt] = g.inv(fw);
    }
    let sigma = Permutation::new(sigma)
        .ok_or_else(|| Error::VerificationFailed("swap is not bijective".into()))?;
    Ok(codec.encode(&f, &sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{presentation_catalog, Family};

    fn b() -> Budget {
        Budget::default()
    }

    fn z_pres() -> Presentation {
        presentation_catalog(Family::FreeAbelian, 1).unwrap()
    }

    #[test]
    fn decompose_a_three_cycle_over_the_trivial_group() {
        let p = z_pres();
        let codec = WreathCodec::new(FiniteGroup::trivial(), 3).unwrap();
        let theta = vec![codec.encode(&[0, 0, 0], &Permutation::from_cycles(3, &[vec![0, 1, 2]]))];
        let d = decompose(&p, &codec, &theta, &b()).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].record.index(), 3);
        assert!(d.components[0].rho.iter().all(|&x| x == 0));
    }

    #[test]
    fn decompose_the_trivial_map() {
        let p = presentation_catalog(Family::Free, 2).unwrap();
        let s3 = FiniteGroup::symmetric(3);
        let codec = WreathCodec::new(s3, 3).unwrap();
        let theta = vec![codec.identity(); 2];
        let d = decompose(&p, &codec, &theta, &b()).unwrap();
        assert_eq!(d.components.len(), 3);
        assert_eq!(d.grouped.len(), 1);
        assert_eq!(d.grouped[0].1.len(), 3);
        for c in &d.components {
            assert_eq!(c.record.index(), 1);
        }
        // orbit sizes sum to n
        let total: usize = d.components.iter().map(|c| c.orbit.len()).sum();
        assert_eq!(total, 3);
    }

    /// The running example: theta: Z -> Z2 wr S2, 1 |-> ((1,0), (0 1)).
    fn d4_example() -> (Presentation, WreathCodec, Vec<usize>) {
        let p = z_pres();
        let z2 = FiniteGroup::cyclic(2);
        let codec = WreathCodec::new(z2, 2).unwrap();
        let theta =
            vec![codec.encode(&[1, 0], &Permutation::from_cycles(2, &[vec![0, 1]]))];
        (p, codec, theta)
    }

    #[test]
    fn d4_example_has_nontrivial_rho() {
        let (p, codec, theta) = d4_example();
        let d = decompose(&p, &codec, &theta, &b()).unwrap();
        assert_eq!(d.components.len(), 1);
        let c = &d.components[0];
        assert_eq!(c.record.index(), 2, "H = 2Z");
        // theta(z^2) = ((1,1), e): the schreier generator maps to 1 in Z2
        assert_eq!(c.rho, vec![1]);
    }

    #[test]
    fn d4_example_aut_data() {
        let (p, codec, theta) = d4_example();
        let d = decompose(&p, &codec, &theta, &b()).unwrap();
        let c = &d.components[0];
        let data = aut_data(&c.record, codec.base(), &c.rho).unwrap();
        assert_eq!(data.c_g_rho_order, 2);
        assert_eq!(data.n_rho_quotient_order, 2);
        assert_eq!(data.aut_order, 4);
        // brute force agrees
        let brute = brute_centralizer(&codec, &theta, 20_000).unwrap();
        assert_eq!(brute.len(), 4);
        let structural = centralizer_order_structural(&p, &codec, &d).unwrap();
        assert_eq!(structural, Int::from(4));
        // explicit element set agrees as well
        let elems = structural_centralizer_elements(&p, &codec, &d, 20_000).unwrap();
        assert_eq!(elems, brute);
    }

    #[test]
    fn trivial_theta_centralizer_is_everything() {
        let p = z_pres();
        let z2 = FiniteGroup::cyclic(2);
        let codec = WreathCodec::new(z2, 3).unwrap();
        let theta = vec![codec.identity()];
        let d = decompose(&p, &codec, &theta, &b()).unwrap();
        let structural = centralizer_order_structural(&p, &codec, &d).unwrap();
        assert_eq!(structural, Int::from(48));
        let brute = brute_centralizer(&codec, &theta, 20_000).unwrap();
        assert_eq!(brute.len(), 48);
    }

    #[test]
    fn double_transposition_in_s4() {
        // theta: Z -> S4 (G trivial, n = 4), 1 |-> (0 1)(2 3):
        // two isomorphic components, centralizer order (2^1)^2 * 2! = 8
        let p = z_pres();
        let codec = WreathCodec::new(FiniteGroup::trivial(), 4).unwrap();
        let sigma = Permutation::from_cycles(4, &[vec![0, 1], vec![2, 3]]);
        let theta = vec![codec.encode(&[0; 4], &sigma)];
        let d = decompose(&p, &codec, &theta, &b()).unwrap();
        assert_eq!(d.components.len(), 2);
        assert_eq!(d.grouped.len(), 1, "both components share one key");
        let structural = centralizer_order_structural(&p, &codec, &d).unwrap();
        assert_eq!(structural, Int::from(8));
        assert_eq!(brute_centralizer(&codec, &theta, 30_000).unwrap().len(), 8);
        let elems = structural_centralizer_elements(&p, &codec, &d, 30_000).unwrap();
        let brute = brute_centralizer(&codec, &theta, 30_000).unwrap();
        assert_eq!(elems, brute);
    }

    #[test]
    fn classification_collapses_g_conjugates() {
        // rho and g rho g^-1 give equal keys
        let p = z_pres();
        let s3 = FiniteGroup::symmetric(3);
        let codec = WreathCodec::new(s3.clone(), 1).unwrap();
        let id_perm = Permutation::identity(1);
        let x = s3.generators()[0];
        let keys: Vec<ClassKey> = (0..s3.order())
            .map(|g| {
                let theta = vec![codec.encode(&[s3.conj(g, x)], &id_perm)];
                let d = decompose(&p, &codec, &theta, &b()).unwrap();
                d.grouped[0].0.clone()
            })
            .collect();
        for k in &keys {
            assert_eq!(*k, keys[0]);
        }
    }

    #[test]
    fn abelian_source_and_target_keys_stay_distinct() {
        // Gamma = Z^2, G = Z2, H = Gamma: rho1 = (1, 0) and rho2 = (0, 1)
        // are distinct keys (no normalizer or conjugation can merge them)
        let p = presentation_catalog(Family::FreeAbelian, 2).unwrap();
        let z2 = FiniteGroup::cyclic(2);
        let codec = WreathCodec::new(z2, 1).unwrap();
        let id_perm = Permutation::identity(1);
        let theta1 = vec![codec.encode(&[1], &id_perm), codec.encode(&[0], &id_perm)];
        let theta2 = vec![codec.encode(&[0], &id_perm), codec.encode(&[1], &id_perm)];
        let d1 = decompose(&p, &codec, &theta1, &b()).unwrap();
        let d2 = decompose(&p, &codec, &theta2, &b()).unwrap();
        assert_ne!(d1.grouped[0].0, d2.grouped[0].0);
    }

    #[test]
    fn reconstruct_is_conjugate_to_the_original() {
        let (p, codec, theta) = d4_example();
        let d = decompose(&p, &codec, &theta, &b()).unwrap();
        let rebuilt = reconstruct(&p, &codec, &d).unwrap();
        let eta = find_conjugator(&codec, &rebuilt, &theta, 20_000).unwrap();
        assert!(eta.is_some(), "reconstruction must be conjugate to the original");
        // trivial theta reconstructs to itself
        let p2 = presentation_catalog(Family::Free, 1).unwrap();
        let codec2 = WreathCodec::new(FiniteGroup::cyclic(2), 2).unwrap();
        let trivial = vec![codec2.identity()];
        let d2 = decompose(&p2, &codec2, &trivial, &b()).unwrap();
        assert_eq!(reconstruct(&p2, &codec2, &d2).unwrap(), trivial);
        // a 3-cycle reconstructs to an n-cycle (same key multiset)
        let codec3 = WreathCodec::new(FiniteGroup::trivial(), 3).unwrap();
        let theta3 =
            vec![codec3.encode(&[0; 3], &Permutation::from_cycles(3, &[vec![0, 1, 2]]))];
        let d3 = decompose(&p2, &codec3, &theta3, &b()).unwrap();
        let rebuilt3 = reconstruct(&p2, &codec3, &d3).unwrap();
        let d3b = decompose(&p2, &codec3, &rebuilt3, &b()).unwrap();
        assert_eq!(d3.key_multiset(), d3b.key_multiset());
    }

    #[test]
    fn rho_orbits_partition_hom() {
        // Gamma = Z, index-2 subgroup, G = S3: orbits partition Hom(H, G)
        let p = z_pres();
        let records = crate::subgroups::low_index_subgroups(&p, 2, &b()).unwrap();
        let rec = records.iter().find(|r| r.index() == 2).unwrap();
        let s3 = FiniteGroup::symmetric(3);
        let orbits = rho_orbits(rec, &s3, &b()).unwrap();
        let total: usize = orbits.iter().map(|(_, s)| s).sum();
        assert_eq!(total, 6, "Hom(Z, S3) has 6 elements");
    }
}
