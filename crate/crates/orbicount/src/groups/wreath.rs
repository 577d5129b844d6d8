use super::finite::{ConjClasses, FiniteGroup};
use super::perm::{factorial, Permutation};
use super::view::GroupOps;
use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Element codec for the wreath product `G wr S_n` of a finite base group
/// with the symmetric group permuting `n` coordinates.
///
/// Elements are pairs `(f, sigma)` with `f: {0..n-1} -> G`; the product is
/// `(f1, s1)(f2, s2) = (f1 . (s1 f2), s1 s2)` with `(s.f)(k) = f(s^-1(k))`.
/// Ids order elements by `(lex rank of sigma, f lexicographic)`, so the codec
/// multiplies and inverts without materializing a table.
#[derive(Debug)]
pub struct WreathCodec {
    base: FiniteGroup,
    n: usize,
    order: usize,
    f_space: usize,
    classes: OnceLock<ConjClasses>,
}

impl Clone for WreathCodec {
    fn clone(&self) -> Self {
        WreathCodec {
            base: self.base.clone(),
            n: self.n,
            order: self.order,
            f_space: self.f_space,
            classes: OnceLock::new(),
        }
    }
}

/// Largest wreath order for which conjugacy data is computed on demand.
const CLASS_DATA_CAP: usize = 8_000_000;

impl WreathCodec {
    /// `n = 0` encodes the trivial group.
    pub fn new(base: FiniteGroup, n: usize) -> Result<WreathCodec> {
        let g = base.order() as u128;
        let mut order: u128 = factorial(n) as u128;
        let mut f_space: u128 = 1;
        for _ in 0..n {
            f_space *= g;
        }
        order *= f_space;
        if order > usize::MAX as u128 / 2 {
            return Err(Error::cap(format!("wreath order {order} does not fit an element id")));
        }
        Ok(WreathCodec {
            base,
            n,
            order: order as usize,
            f_space: f_space as usize,
            classes: OnceLock::new(),
        })
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn encode(&self, f: &[usize], sigma: &Permutation) -> usize {
        debug_assert_eq!(f.len(), self.n);
        let g = self.base.order();
        let mut fid = 0usize;
        for &x in f {
            fid = fid * g + x;
        }
        sigma.lex_rank() as usize * self.f_space + fid
    }

    pub fn decode(&self, id: usize) -> (Vec<usize>, Permutation) {
        let g = self.base.order();
        let sigma = Permutation::from_lex_rank(self.n, (id / self.f_space) as u64);
        let mut fid = id % self.f_space;
        let mut f = vec![0usize; self.n];
        for k in (0..self.n).rev() {
            f[k] = fid % g;
            fid /= g;
        }
        (f, sigma)
    }

    pub fn mul_pairs(
        &self,
        (f1, s1): (&[usize], &Permutation),
        (f2, s2): (&[usize], &Permutation),
    ) -> (Vec<usize>, Permutation) {
        let s1_inv = s1.inverse();
        let f: Vec<usize> =
            (0..self.n).map(|k| self.base.mul(f1[k], f2[s1_inv.apply(k)])).collect();
        (f, s1.compose(s2))
    }

    pub fn projection(&self, id: usize) -> Permutation {
        Permutation::from_lex_rank(self.n, (id / self.f_space) as u64)
    }

    fn lifted_base_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        if self.n == 0 {
            return gens;
        }
        let id_perm = Permutation::identity(self.n);
        for &g in self.base.generators() {
            let mut f = vec![self.base.identity(); self.n];
            f[0] = g;
            gens.push(self.encode(&f, &id_perm));
        }
        if self.n >= 2 {
            let f = vec![self.base.identity(); self.n];
            gens.push(self.encode(&f, &Permutation::from_cycles(self.n, &[vec![0, 1]])));
            if self.n >= 3 {
                gens.push(self.encode(&f, &Permutation::from_cycles(self.n, &[(0..self.n).collect()])));
            }
        }
        gens
    }

    /// Conjugacy data, computed once on demand.
    pub fn conj_classes(&self) -> Result<&ConjClasses> {
        if self.order > CLASS_DATA_CAP {
            return Err(Error::cap(format!(
                "wreath order {} too large for conjugacy data",
                self.order
            )));
        }
        Ok(self.classes.get_or_init(|| {
            let gens = self.lifted_base_generators();
            super::finite::conj_classes_from(
                self.order,
                &gens,
                &|a, b| GroupOps::mul(self, a, b),
                &|a| GroupOps::inv(self, a),
            )
        }))
    }
}

impl GroupOps for WreathCodec {
    fn order(&self) -> usize {
        self.order
    }

    fn identity(&self) -> usize {
        let f = vec![self.base.identity(); self.n];
        self.encode(&f, &Permutation::identity(self.n))
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let (f1, s1) = self.decode(a);
        let (f2, s2) = self.decode(b);
        let (f, s) = self.mul_pairs((&f1, &s1), (&f2, &s2));
        self.encode(&f, &s)
    }

    fn inv(&self, a: usize) -> usize {
        let (f, s) = self.decode(a);
        let s_inv = s.inverse();
        let fi: Vec<usize> = (0..self.n).map(|k| self.base.inv(f[s.apply(k)])).collect();
        self.encode(&fi, &s_inv)
    }

    fn generating_set(&self) -> Vec<usize> {
        self.lifted_base_generators()
    }
}

/// Materialize `G wr S_n` as a dense [`FiniteGroup`] together with its codec.
///
/// Errors when `|G|^n * n!` exceeds `order_cap`.
pub fn wreath_product(
    base: &FiniteGroup,
    n: usize,
    order_cap: usize,
) -> Result<(FiniteGroup, WreathCodec)> {
    let codec = WreathCodec::new(base.clone(), n)?;
    if codec.order() > order_cap {
        return Err(Error::cap(format!(
            "wreath order {} exceeds cap {order_cap}",
            codec.order()
        )));
    }
    let group = FiniteGroup::from_index_mul(codec.order(), |a, b| GroupOps::mul(&codec, a, b))?;
    let labels = (0..codec.order())
        .map(|id| {
            let (f, s) = codec.decode(id);
            let fl: Vec<String> = f.iter().map(|&x| codec.base().label_of(x)).collect();
            format!("([{}], {:?})", fl.join(","), s.images())
        })
        .collect();
    Ok((group.with_labels(labels), codec))
}
