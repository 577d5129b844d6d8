//! Words, group presentations, the presentation language, and the builtin
//! families (free, surface, non-orientable, free abelian).
//!
//! Generators are anonymous 1-based indices internally; names exist only at
//! the parse/render/JSON boundary.

mod parser;
mod word;

pub use parser::{parse_presentation, render_presentation};
pub use word::Word;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The builtin presentation families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Free group `F_s` on `s` generators.
    Free,
    /// Orientable surface group on `2k` generators with the single relator
    /// `[a_1,b_1]...[a_k,b_k]`.
    Surface,
    /// Non-orientable surface group on `k` generators with the single relator
    /// `c_1^2 ... c_k^2`.
    Nonorientable,
    /// `Z^d`, with all pairwise commutators as relators.
    FreeAbelian,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Free => "free",
            Family::Surface => "surface",
            Family::Nonorientable => "nonorientable",
            Family::FreeAbelian => "free_abelian",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        match name {
            "free" => Some(Family::Free),
            "surface" => Some(Family::Surface),
            "nonorientable" => Some(Family::Nonorientable),
            "free_abelian" => Some(Family::FreeAbelian),
            _ => None,
        }
    }
}

/// A finite presentation: a generator count and a list of freely reduced,
/// non-empty relator words. Empty relators are dropped on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    generator_count: usize,
    relators: Vec<Word>,
    label: Option<String>,
}

impl Presentation {
    /// Build a presentation, freely reducing relators and dropping the ones
    /// that reduce to the empty word.
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Presentation> {
        let mut reduced = Vec::new();
        for w in relators {
            if let Some(&l) = w.letters().iter().find(|&&l| l.unsigned_abs() as usize > generator_count || l == 0) {
                return Err(Error::invalid(format!(
                    "relator letter {l} out of range for {generator_count} generators"
                )));
            }
            if !w.is_empty() {
                reduced.push(w);
            }
        }
        Ok(Presentation { generator_count, relators: reduced, label: None })
    }

    /// The presentation of the trivial group: no generators, no relators.
    pub fn trivial() -> Presentation {
        Presentation { generator_count: 0, relators: Vec::new(), label: None }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Presentation {
        self.label = Some(label.into());
        self
    }

    /// The catalog family and size, when the label records one.
    pub fn catalog_family(&self) -> Option<(Family, usize)> {
        let label = self.label.as_deref()?;
        let (name, size) = label.rsplit_once('_').map(|(n, s)| (n, s)).or(Some((label, "")))?;
        let family = Family::from_name(name)?;
        let size: usize = size.parse().ok()?;
        Some((family, size))
    }

    /// Structural equality ignoring the label.
    pub fn same_presentation(&self, other: &Presentation) -> bool {
        self.generator_count == other.generator_count && self.relators == other.relators
    }

    /// A stable 64-bit content hash (FNV-1a over generator count and relators),
    /// used for cache keys. Labels do not participate.
    pub fn content_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |v: i64| {
            for b in v.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        eat(self.generator_count as i64);
        for w in &self.relators {
            eat(i64::MIN); // relator separator
            for &l in w.letters() {
                eat(l as i64);
            }
        }
        h
    }
}

/// Construct a catalog presentation.
///
/// `free(s)` has `s` generators and no relators; `surface(k)` is the genus-`k`
/// orientable surface group on generators `a1,b1,...,ak,bk`;
/// `nonorientable(k)` is the genus-`k` non-orientable surface group;
/// `free_abelian(d)` is `Z^d` with all pairwise commutators.
pub fn presentation_catalog(family: Family, size: usize) -> Result<Presentation> {
    if size == 0 {
        return Err(Error::invalid("catalog size must be >= 1"));
    }
    let pres = match family {
        Family::Free => Presentation::new(size, Vec::new())?,
        Family::Surface => {
            // generators interleaved a1,b1,a2,b2,... so the relator is
            // [1,2][3,4]... in index form
            let mut rel = Vec::with_capacity(4 * size);
            for i in 0..size {
                let a = (2 * i + 1) as i32;
                let b = (2 * i + 2) as i32;
                rel.extend_from_slice(&[a, b, -a, -b]);
            }
            Presentation::new(2 * size, vec![Word::new(rel)])?
        }
        Family::Nonorientable => {
            let mut rel = Vec::with_capacity(2 * size);
            for i in 0..size {
                let c = (i + 1) as i32;
                rel.extend_from_slice(&[c, c]);
            }
            Presentation::new(size, vec![Word::new(rel)])?
        }
        Family::FreeAbelian => {
            let mut relators = Vec::new();
            for i in 1..=size as i32 {
                for j in (i + 1)..=size as i32 {
                    relators.push(Word::new(vec![i, j, -i, -j]));
                }
            }
            Presentation::new(size, relators)?
        }
    };
    Ok(pres.with_label(format!("{}_{}", family.name(), size)))
}

/// The direct product with `Z`: one new generator `z`, and a commutator
/// `[g_i, z]` for each original generator. Original relators are kept.
pub fn product_with_z(p: &Presentation) -> Presentation {
    let n = p.generator_count();
    let z = (n + 1) as i32;
    let mut relators = p.relators().to_vec();
    for i in 1..=n as i32 {
        relators.push(Word::new(vec![i, z, -i, -z]));
    }
    Presentation::new(n + 1, relators).expect("letters stay in range")
}

/// `p x Z^d` by iterating [`product_with_z`].
pub fn product_with_z_iter(p: &Presentation, d: usize) -> Presentation {
    let mut out = p.clone();
    for _ in 0..d {
        out = product_with_z(&out);
    }
    out
}

/// Serialized form: `{"generators": ["a","b"], "relators": [[1,2,-1,-2]],
/// "label": "surface_1"}` with relators as arrays of signed 1-based integers.
#[derive(Debug, Serialize, Deserialize)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<i32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Default generator names for rendering and JSON output: catalog families
/// use their conventional names, everything else gets `g1, g2, ...`.
pub fn default_names(p: &Presentation) -> Vec<String> {
    match p.catalog_family() {
        Some((Family::Surface, k)) => {
            let mut names = Vec::with_capacity(2 * k);
            for i in 1..=k {
                names.push(format!("a{i}"));
                names.push(format!("b{i}"));
            }
            names
        }
        Some((Family::Nonorientable, k)) => (1..=k).map(|i| format!("c{i}")).collect(),
        _ => (1..=p.generator_count()).map(|i| format!("g{i}")).collect(),
    }
}

pub fn to_json(p: &Presentation) -> PresentationJson {
    PresentationJson {
        generators: default_names(p),
        relators: p.relators().iter().map(|w| w.letters().to_vec()).collect(),
        label: p.label().map(str::to_owned),
    }
}

pub fn from_json(j: &PresentationJson) -> Result<Presentation> {
    let pres = Presentation::new(
        j.generators.len(),
        j.relators.iter().map(|r| Word::new(r.clone())).collect(),
    )?;
    Ok(match &j.label {
        Some(l) => pres.with_label(l.clone()),
        None => pres,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_surface_2() {
        let p = presentation_catalog(Family::Surface, 2).unwrap();
        assert_eq!(p.generator_count(), 4);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0].letters(), &[1, 2, -1, -2, 3, 4, -3, -4]);
        assert_eq!(p.label(), Some("surface_2"));
    }

    #[test]
    fn catalog_free_abelian_1_is_z() {
        let p = presentation_catalog(Family::FreeAbelian, 1).unwrap();
        assert_eq!(p.generator_count(), 1);
        assert!(p.relators().is_empty());
    }

    #[test]
    fn catalog_nonorientable_2_is_klein_bottle() {
        let p = presentation_catalog(Family::Nonorientable, 2).unwrap();
        assert_eq!(p.generator_count(), 2);
        assert_eq!(p.relators()[0].letters(), &[1, 1, 2, 2]);
    }

    #[test]
    fn catalog_rejects_size_zero() {
        assert!(presentation_catalog(Family::Free, 0).is_err());
    }

    #[test]
    fn product_with_z_free_1() {
        let p = presentation_catalog(Family::Free, 1).unwrap();
        let q = product_with_z(&p);
        assert_eq!(q.generator_count(), 2);
        assert_eq!(q.relators().len(), 1);
        assert_eq!(q.relators()[0].letters(), &[1, 2, -1, -2]);
    }

    #[test]
    fn product_with_z_klein_bottle() {
        let p = presentation_catalog(Family::Nonorientable, 2).unwrap();
        let q = product_with_z(&p);
        assert_eq!(q.generator_count(), 3);
        let rels: Vec<_> = q.relators().iter().map(|w| w.letters().to_vec()).collect();
        assert_eq!(
            rels,
            vec![vec![1, 1, 2, 2], vec![1, 3, -1, -3], vec![2, 3, -2, -3]]
        );
    }

    #[test]
    fn product_with_z_counts() {
        for (fam, size) in [(Family::Surface, 2), (Family::Free, 3), (Family::FreeAbelian, 2)] {
            let p = presentation_catalog(fam, size).unwrap();
            let q = product_with_z(&p);
            assert_eq!(q.generator_count(), p.generator_count() + 1);
            assert_eq!(q.relators().len(), p.relators().len() + p.generator_count());
        }
    }

    #[test]
    fn product_with_z_on_free_abelian_matches_next_rank() {
        // same relators as free_abelian(d+1) up to ordering
        for d in 1..4 {
            let a = product_with_z(&presentation_catalog(Family::FreeAbelian, d).unwrap());
            let b = presentation_catalog(Family::FreeAbelian, d + 1).unwrap();
            let mut ra: Vec<_> = a.relators().iter().map(|w| w.letters().to_vec()).collect();
            let mut rb: Vec<_> = b.relators().iter().map(|w| w.letters().to_vec()).collect();
            ra.sort();
            rb.sort();
            assert_eq!(ra, rb);
            assert_eq!(a.generator_count(), b.generator_count());
        }
    }

    #[test]
    fn json_round_trip() {
        let p = presentation_catalog(Family::Surface, 1).unwrap();
        let j = to_json(&p);
        let text = serde_json::to_string(&j).unwrap();
        let back: PresentationJson = serde_json::from_str(&text).unwrap();
        let q = from_json(&back).unwrap();
        assert!(p.same_presentation(&q));
        assert_eq!(q.label(), Some("surface_1"));
    }

    #[test]
    fn content_hash_ignores_label_but_not_relators() {
        let a = presentation_catalog(Family::Surface, 1).unwrap();
        let b = presentation_catalog(Family::FreeAbelian, 2).unwrap();
        // same relator [a,b], different labels
        assert_eq!(a.content_hash(), b.content_hash());
        let c = presentation_catalog(Family::Nonorientable, 2).unwrap();
        assert_ne!(a.content_hash(), c.content_hash());
    }
}
