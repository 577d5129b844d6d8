//! Character-table data and the character-formula cross-checks.
//!
//! Tables are shipped as JSON data and validated mechanically: class profiles
//! must match the bound group, full tables must pass exact row orthogonality
//! and the degree-square sum. Groups with irrational character values ship
//! degree-only entries; every check that needs values is restricted to full
//! rational tables, and every character-side number is compared against an
//! enumeration or convolution oracle.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groups::{
    relator_count_distribution, FiniteGroup, Members, RelatorShape,
};
use crate::presentations::{presentation_catalog, Family};
use crate::{Int, Rat};
use num_traits::{One, Zero};
use serde::Deserialize;
use std::collections::BTreeMap;

#[derive(Deserialize)]
struct CatalogJson {
    tables: Vec<EntryJson>,
}

#[derive(Deserialize)]
struct EntryJson {
    name: String,
    kind: String,
    classes: Vec<ClassJson>,
    #[serde(default)]
    rows: Vec<Vec<String>>,
    #[serde(default)]
    degrees: Vec<String>,
}

#[derive(Deserialize)]
struct ClassJson {
    order: usize,
    size: usize,
}

/// A validated character table bound to a concrete group.
pub struct CharacterData {
    pub name: String,
    pub group: FiniteGroup,
    /// Table column assigned to each group class (by class index).
    pub column_of_class: Vec<usize>,
    /// `(order, size)` per table column.
    pub class_profiles: Vec<(usize, usize)>,
    /// Full rational values (rows = irreducibles), when shipped.
    pub table: Option<Vec<Vec<Rat>>>,
    /// Irreducible degrees.
    pub degrees: Vec<Int>,
}

impl CharacterData {
    pub fn has_values(&self) -> bool {
        self.table.is_some()
    }

    /// Schur indicator per irreducible: `eps_2(chi) = (1/|G|) sum_g chi(g^2)`.
    pub fn schur_indicators(&self) -> Result<Vec<Rat>> {
        let table = self
            .table
            .as_ref()
            .ok_or_else(|| Error::invalid("Schur indicators need a full rational table"))?;
        let g = &self.group;
        let classes = g.classes();
        // column of the class of g^2, per class of g (squaring is constant
        // on classes)
        let sq_col: Vec<usize> = classes
            .reps
            .iter()
            .map(|&r| self.column_of_class[classes.class_of[g.mul(r, r)] as usize])
            .collect();
        Ok(table
            .iter()
            .map(|row| {
                let mut acc = Rat::zero();
                for (ci, &col) in sq_col.iter().enumerate() {
                    acc += Rat::from_integer(Int::from(classes.sizes[ci])) * &row[col];
                }
                acc / Rat::from_integer(Int::from(g.order()))
            })
            .collect())
    }
}

/// Build the quaternion group of order 8 from its presentation-free
/// multiplication rules: elements `+-1, +-i, +-j, +-k`.
fn quaternion_group() -> FiniteGroup {
    // id = sign * 4 + symbol, sign in {0 -> +, 1 -> -}, symbols 1, i, j, k
    let mul_sym = |a: usize, b: usize| -> (usize, usize) {
        // returns (sign flip, symbol) for symbol product
        match (a, b) {
            (0, x) => (0, x),
            (x, 0) => (0, x),
            (1, 1) => (1, 0),
            (2, 2) => (1, 0),
            (3, 3) => (1, 0),
            (1, 2) => (0, 3),
            (2, 1) => (1, 3),
            (2, 3) => (0, 1),
            (3, 2) => (1, 1),
            (3, 1) => (0, 2),
            (1, 3) => (1, 2),
            _ => unreachable!(),
        }
    };
    FiniteGroup::from_index_mul(8, |x, y| {
        let (sx, ax) = (x / 4, x % 4);
        let (sy, ay) = (y / 4, y % 4);
        let (flip, sym) = mul_sym(ax, ay);
        ((sx + sy + flip) % 2) * 4 + sym
    })
    .expect("quaternion table is a group")
    .with_labels(vec!["1", "i", "j", "k", "-1", "-i", "-j", "-k"].into_iter().map(String::from).collect())
}

fn dihedral_4() -> FiniteGroup {
    crate::groups::group_from_generators(
        4,
        &[
            crate::groups::Permutation::from_cycles(4, &[vec![0, 1, 2, 3]]),
            crate::groups::Permutation::from_cycles(4, &[vec![1, 3]]),
        ],
        100,
    )
    .expect("D4 closes")
}

/// Construct the group an entry is bound to.
pub fn catalog_group(name: &str) -> Result<FiniteGroup> {
    match name {
        "trivial" => Ok(FiniteGroup::trivial()),
        "S3" => Ok(FiniteGroup::symmetric(3)),
        "S4" => Ok(FiniteGroup::symmetric(4)),
        "S5" => Ok(FiniteGroup::symmetric(5)),
        "D4" => Ok(dihedral_4()),
        "Q8" => Ok(quaternion_group()),
        "V4" => Ok(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))),
        _ => {
            if let Some(n) = name.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
                Ok(FiniteGroup::cyclic(n))
            } else {
                Err(Error::invalid(format!("unknown character-table group `{name}`")))
            }
        }
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map(Int::from)
            .map_err(|_| Error::invalid(format!("bad rational `{s}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => Ok(Rat::new(parse_int(n)?, parse_int(d)?)),
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

/// Load and validate one catalog entry by group name.
pub fn load_character_data(name: &str) -> Result<CharacterData> {
    let catalog: CatalogJson = serde_json::from_str(include_str!("char_tables.json"))?;
    let entry = catalog
        .tables
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::invalid(format!("no shipped table for `{name}`")))?;
    let group = catalog_group(name)?;
    build_character_data(entry, group)
}

/// Names of all shipped entries.
pub fn catalog_names() -> Vec<String> {
    let catalog: CatalogJson =
        serde_json::from_str(include_str!("char_tables.json")).expect("shipped data parses");
    catalog.tables.into_iter().map(|e| e.name).collect()
}

fn build_character_data(entry: EntryJson, group: FiniteGroup) -> Result<CharacterData> {
    let classes = group.classes();
    if entry.classes.len() != classes.count() {
        return Err(Error::invalid(format!(
            "{}: table lists {} classes, group has {}",
            entry.name,
            entry.classes.len(),
            classes.count()
        )));
    }
    let profiles: Vec<(usize, usize)> =
        entry.classes.iter().map(|c| (c.order, c.size)).collect();
    // assign table columns to group classes by (order, size) profile
    let group_profiles: Vec<(usize, usize)> = classes
        .reps
        .iter()
        .zip(&classes.sizes)
        .map(|(&r, &s)| (group.element_order(r), s))
        .collect();
    let mut column_of_class = vec![usize::MAX; classes.count()];
    let mut used = vec![false; profiles.len()];
    for (ci, gp) in group_profiles.iter().enumerate() {
        let col = profiles
            .iter()
            .enumerate()
            .find(|(j, p)| !used[*j] && *p == gp)
            .map(|(j, _)| j)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "{}: class profile {gp:?} missing from the shipped table",
                    entry.name
                ))
            })?;
        used[col] = true;
        column_of_class[ci] = col;
    }

    let order = Int::from(group.order());
    let (table, degrees) = match entry.kind.as_str() {
        "table" => {
            let mut rows = Vec::new();
            for r in &entry.rows {
                if r.len() != profiles.len() {
                    return Err(Error::invalid(format!("{}: ragged table row", entry.name)));
                }
                rows.push(r.iter().map(|s| parse_rat(s)).collect::<Result<Vec<Rat>>>()?);
            }
            if rows.len() != profiles.len() {
                return Err(Error::invalid(format!(
                    "{}: {} rows for {} classes",
                    entry.name,
                    rows.len(),
                    profiles.len()
                )));
            }
            // exact row orthogonality
            for i in 0..rows.len() {
                for j in 0..rows.len() {
                    let mut acc = Rat::zero();
                    for c in 0..profiles.len() {
                        acc +=
                            Rat::from_integer(Int::from(profiles[c].1)) * &rows[i][c] * &rows[j][c];
                    }
                    let expect = if i == j {
                        Rat::from_integer(order.clone())
                    } else {
                        Rat::zero()
                    };
                    if acc != expect {
                        return Err(Error::VerificationFailed(format!(
                            "{}: rows {i},{j} fail orthogonality (got {acc})",
                            entry.name
                        )));
                    }
                }
            }
            let id_col = column_of_class
                [classes.class_of[group.identity()] as usize];
            let degrees: Vec<Int> = rows
                .iter()
                .map(|r| {
                    let d = &r[id_col];
                    if !d.denom().is_one() {
                        return Err(Error::invalid("degrees must be integers"));
                    }
                    Ok(d.numer().clone())
                })
                .collect::<Result<_>>()?;
            (Some(rows), degrees)
        }
        "degrees_only" => {
            let degrees: Vec<Int> = entry
                .degrees
                .iter()
                .map(|s| parse_rat(s).map(|r| r.numer().clone()))
                .collect::<Result<_>>()?;
            if degrees.len() != profiles.len() {
                return Err(Error::invalid(format!(
                    "{}: degree count differs from class count",
                    entry.name
                )));
            }
            (None, degrees)
        }
        other => return Err(Error::invalid(format!("unknown table kind `{other}`"))),
    };
    // sum of squared degrees equals the order
    let sq_sum: Int = degrees.iter().map(|d| d * d).sum();
    if sq_sum != order {
        return Err(Error::VerificationFailed(format!(
            "{}: degree squares sum to {sq_sum}, order is {order}",
            entry.name
        )));
    }
    Ok(CharacterData {
        name: entry.name,
        group,
        column_of_class,
        class_profiles: profiles,
        table,
        degrees,
    })
}

/// Which character formula to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharacterCheck {
    /// `|Hom(Gamma_{g+1}, G)| / |G| = sum_V (|G|/dim V)^{2g}`.
    Eq115First { g: usize },
    /// `|Hom(Gamma_{g+1}, G)/G| = sum_{[sigma]} sum_{V in Irred(C(sigma))}
    /// (|C(sigma)|/dim V)^{2g}`.
    Eq115Second { g: usize },
    /// `|Hom(Lambda_{h+2}, S_n)| / n! = sum_V (n!/dim V)^h`.
    Eq516 { h: usize },
    /// `|Hom(Lambda_{h+2}, G)| / |G| = sum_V (|G|/dim V)^h eps_2(V)^{h+2}`.
    Eq517 { h: usize },
}

#[derive(Debug)]
pub struct CharacterReport {
    pub name: String,
    pub check: CharacterCheck,
    pub character_side: Rat,
    pub oracle_side: Rat,
    pub pass: bool,
}

/// Evaluate one character formula against its enumeration/convolution
/// oracle.
pub fn character_check(
    data: &CharacterData,
    check: CharacterCheck,
    budget: &Budget,
) -> Result<CharacterReport> {
    let g = &data.group;
    let order = Int::from(g.order());
    let e_class = g.classes().class_of[g.identity()] as usize;
    let (character_side, oracle_side) = match check {
        CharacterCheck::Eq115First { g: genus } => {
            let mut acc = Rat::zero();
            for d in &data.degrees {
                acc += Rat::from_integer(num_traits::pow::pow(&order / d, 2 * genus));
            }
            let dist =
                relator_count_distribution(g, RelatorShape::CommutatorPower(genus + 1), budget)?;
            (acc, Rat::new(dist[e_class].clone(), order.clone()))
        }
        CharacterCheck::Eq115Second { g: genus } => {
            let mut acc = Rat::zero();
            for (ci, &rep) in g.classes().reps.iter().enumerate() {
                let _ = ci;
                let centralizer = g.centralizer(&[rep]);
                let c_order = Int::from(centralizer.len());
                let degrees = degrees_by_fingerprint(g, &centralizer)?;
                for d in &degrees {
                    acc += Rat::from_integer(num_traits::pow::pow(&c_order / d, 2 * genus));
                }
            }
            let p = presentation_catalog(Family::Surface, genus + 1)?;
            let count =
                crate::groups::hom_count_times_z(&p, &Members::whole(g), budget)?;
            (acc, Rat::new(count, order.clone()))
        }
        CharacterCheck::Eq516 { h } => {
            let mut acc = Rat::zero();
            for d in &data.degrees {
                acc += Rat::from_integer(num_traits::pow::pow(&order / d, h));
            }
            let dist = relator_count_distribution(g, RelatorShape::SquaresPower(h + 2), budget)?;
            (acc, Rat::new(dist[e_class].clone(), order.clone()))
        }
        CharacterCheck::Eq517 { h } => {
            let eps = data.schur_indicators()?;
            let mut acc = Rat::zero();
            for (d, e) in data.degrees.iter().zip(&eps) {
                let mut term = Rat::from_integer(num_traits::pow::pow(&order / d, h));
                for _ in 0..h + 2 {
                    term *= e;
                }
                acc += term;
            }
            let dist = relator_count_distribution(g, RelatorShape::SquaresPower(h + 2), budget)?;
            (acc, Rat::new(dist[e_class].clone(), order.clone()))
        }
    };
    Ok(CharacterReport {
        name: data.name.clone(),
        check,
        pass: character_side == oracle_side,
        character_side,
        oracle_side,
    })
}

/// Irreducible degrees of a subgroup, looked up in the shipped catalog by
/// isomorphism fingerprint (order plus element-order multiset).
fn degrees_by_fingerprint(ambient: &FiniteGroup, elems: &[usize]) -> Result<Vec<Int>> {
    let fingerprint = |orders: &mut Vec<usize>| {
        orders.sort_unstable();
        orders.clone()
    };
    let mut target: Vec<usize> = elems.iter().map(|&x| ambient.element_order(x)).collect();
    let target_fp = fingerprint(&mut target);
    for name in catalog_names() {
        let group = catalog_group(&name)?;
        if group.order() != elems.len() {
            continue;
        }
        let mut orders: Vec<usize> = (0..group.order()).map(|x| group.element_order(x)).collect();
        if fingerprint(&mut orders) == target_fp {
            let data = load_character_data(&name)?;
            return Ok(data.degrees);
        }
    }
    Err(Error::invalid(format!(
        "no catalog table matches a centralizer of order {}",
        elems.len()
    )))
}

/// Load every shipped table (validating all of them).
pub fn load_all() -> Result<BTreeMap<String, CharacterData>> {
    let mut out = BTreeMap::new();
    for name in catalog_names() {
        out.insert(name.clone(), load_character_data(&name)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn all_shipped_tables_validate() {
        let all = load_all().unwrap();
        assert!(all.contains_key("S5"));
        assert!(all.contains_key("Q8"));
        // full tables where expected
        for name in ["S3", "S4", "S5", "D4", "Q8", "V4", "Z2", "Z1"] {
            assert!(all[name].has_values(), "{name} should ship values");
        }
        for name in ["Z3", "Z4", "Z5", "Z6"] {
            assert!(!all[name].has_values(), "{name} is degree-only");
        }
    }

    #[test]
    fn corrupted_tables_are_rejected()  {
        // flipping one character value must break orthogonality
        let mut entry: serde_json::Value =
            serde_json::from_str(include_str!("char_tables.json")).unwrap();
        let rows = entry["tables"]
            .as_array_mut()
            .unwrap()
            .iter_mut()
            .find(|e| e["name"] == "S3")
            .unwrap()["rows"]
            .as_array_mut()
            .unwrap();
        rows[2].as_array_mut().unwrap()[1] = serde_json::Value::String("1".into());
        let text = serde_json::to_string(&entry).unwrap();
        let catalog: CatalogJson = serde_json::from_str(&text).unwrap();
        let bad = catalog.tables.into_iter().find(|e| e.name == "S3").unwrap();
        assert!(build_character_data(bad, FiniteGroup::symmetric(3)).is_err());
    }

    #[test]
    fn schur_indicators_are_real_for_symmetric_groups() {
        for name in ["S3", "S4", "S5"] {
            let data = load_character_data(name).unwrap();
            for e in data.schur_indicators().unwrap() {
                assert_eq!(e, rat(1), "{name} has a non-real-type indicator");
            }
        }
    }

    #[test]
    fn quaternion_indicators_include_minus_one() {
        let data = load_character_data("Q8").unwrap();
        let eps = data.schur_indicators().unwrap();
        assert!(eps.contains(&rat(-1)), "the 2-dim irreducible of Q8 is quaternionic");
        assert_eq!(eps.iter().filter(|&e| *e == rat(1)).count(), 4);
    }

    #[test]
    fn s3_genus_one_count() {
        // sum (6/d)^2 = 81 and |Hom(Gamma_2, S3)| = 486
        let data = load_character_data("S3").unwrap();
        let report =
            character_check(&data, CharacterCheck::Eq115First { g: 1 }, &Budget::default())
                .unwrap();
        assert!(report.pass);
        assert_eq!(report.character_side, rat(81));
    }

    #[test]
    fn eq_5_16_n3_h0() {
        // sum over S3 irreps of (6/d)^0 = 3 = |Hom(Lambda_2, S3)| / 6
        let data = load_character_data("S3").unwrap();
        let report =
            character_check(&data, CharacterCheck::Eq516 { h: 0 }, &Budget::default()).unwrap();
        assert!(report.pass);
        assert_eq!(report.character_side, rat(3));
    }

    #[test]
    fn eq_5_17_exercises_quaternionic_type() {
        let b = Budget::default();
        for name in ["Q8", "D4", "V4", "S3", "S4"] {
            let data = load_character_data(name).unwrap();
            for h in 0..3 {
                let report = character_check(&data, CharacterCheck::Eq517 { h }, &b).unwrap();
                assert!(report.pass, "{name} h={h}: {:?}", report);
            }
        }
    }

    #[test]
    fn eq_1_15_second_for_s3_and_s4() {
        let b = Budget::default();
        for name in ["S3", "S4"] {
            let data = load_character_data(name).unwrap();
            for g in 1..3 {
                let report =
                    character_check(&data, CharacterCheck::Eq115Second { g }, &b).unwrap();
                assert!(report.pass, "{name} g={g}");
            }
        }
    }
}
