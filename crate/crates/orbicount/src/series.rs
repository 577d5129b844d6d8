//! Truncated formal power series with exact rational coefficients.
//!
//! A series carries coefficients for `q^0 .. q^N`; binary operations truncate
//! to the smaller `N` of the operands and never silently extend. No floating
//! point anywhere.

use crate::error::{Error, Result};
use crate::{Int, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rat>,
}

impl PowerSeries {
    /// Build from coefficients `[c_0, c_1, ..., c_N]`.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> PowerSeries {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        PowerSeries { coeffs }
    }

    pub fn zero(truncation: usize) -> PowerSeries {
        PowerSeries { coeffs: vec![Rat::zero(); truncation + 1] }
    }

    pub fn one(truncation: usize) -> PowerSeries {
        let mut s = Self::zero(truncation);
        s.coeffs[0] = Rat::one();
        s
    }

    /// `c * q^k`.
    pub fn monomial(c: Rat, k: usize, truncation: usize) -> PowerSeries {
        let mut s = Self::zero(truncation);
        if k <= truncation {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Rat {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Drop terms above `n`.
    pub fn truncate_to(&self, n: usize) -> PowerSeries {
        assert!(n <= self.truncation(), "cannot extend a truncated series");
        PowerSeries { coeffs: self.coeffs[..=n].to_vec() }
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.truncation().min(other.truncation());
        PowerSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.truncation().min(other.truncation());
        PowerSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.truncation().min(other.truncation());
        let mut coeffs = vec![Rat::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if !other.coeffs[j].is_zero() {
                    coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
                }
            }
        }
        PowerSeries { coeffs }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<PowerSeries> {
        if self.coeffs[0].is_zero() {
            return Err(Error::invalid("inverse requires a nonzero constant term"));
        }
        let n = self.truncation();
        let mut out = vec![Rat::zero(); n + 1];
        let c0_inv = Rat::one() / self.coeffs[0].clone();
        out[0] = c0_inv.clone();
        for k in 1..=n {
            let mut acc = Rat::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &out[k - i];
            }
            out[k] = -acc * &c0_inv;
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// Formal exponential; requires a zero constant term.
    pub fn exp(&self) -> Result<PowerSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::invalid("exp requires a zero constant term"));
        }
        let n = self.truncation();
        let mut out = vec![Rat::zero(); n + 1];
        out[0] = Rat::one();
        // E' = E * A'  =>  k E_k = sum_{i=1..k} i A_i E_{k-i}
        for k in 1..=n {
            let mut acc = Rat::zero();
            for i in 1..=k {
                acc += Rat::from_integer(Int::from(i)) * &self.coeffs[i] * &out[k - i];
            }
            out[k] = acc / Rat::from_integer(Int::from(k));
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// Formal logarithm; requires constant term 1.
    pub fn log(&self) -> Result<PowerSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::invalid("log requires constant term 1"));
        }
        let n = self.truncation();
        let mut out = vec![Rat::zero(); n + 1];
        // A' = A L'  =>  k A_k = sum_{i=1..k} i L_i A_{k-i}
        for k in 1..=n {
            let mut acc = Rat::zero();
            for i in 1..k {
                acc += Rat::from_integer(Int::from(i)) * &out[i] * &self.coeffs[k - i];
            }
            out[k] = &self.coeffs[k] - acc / Rat::from_integer(Int::from(k));
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `self^c = exp(c log self)` for exact rational `c`; requires constant
    /// term 1.
    pub fn pow_rational(&self, c: &Rat) -> Result<PowerSeries> {
        Ok(self.log()?.scale(c).exp()?)
    }

    /// Term-by-term formal derivative (truncation drops by one).
    pub fn derivative(&self) -> PowerSeries {
        let n = self.truncation();
        if n == 0 {
            return PowerSeries::zero(0);
        }
        PowerSeries {
            coeffs: (1..=n)
                .map(|k| &self.coeffs[k] * Rat::from_integer(Int::from(k)))
                .collect(),
        }
    }

    /// Coefficients as exact `num/den` strings, for report output.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.denom().is_one() {
                    c.numer().to_string()
                } else {
                    format!("{}/{}", c.numer(), c.denom())
                }
            })
            .collect()
    }
}

/// `prod_{r<=N} (1 - q^r)^{-a_r}` truncated at `N`, computed as
/// `exp(sum_r a_r sum_l q^{rl} / l)`.
pub fn product_expansion(exponents: &BTreeMap<usize, Rat>, truncation: usize) -> PowerSeries {
    let mut arg = PowerSeries::zero(truncation);
    for (&r, a) in exponents {
        if r == 0 || r > truncation || a.is_zero() {
            continue;
        }
        let mut l = 1;
        while r * l <= truncation {
            arg.coeffs[r * l] += a / Rat::from_integer(Int::from(l));
            l += 1;
        }
    }
    arg.exp().expect("constant term is zero by construction")
}

/// Invert [`product_expansion`]: the unique exponents `a_r` with
/// `f = prod (1 - q^r)^{-a_r}` to truncation. Requires constant term 1.
///
/// From `log f = sum_r a_r sum_l q^{rl}/l`, the coefficient at `q^m` gives
/// `m L_m = sum_{r | m} r a_r`, solved triangularly.
pub fn extract_exponents(f: &PowerSeries) -> Result<BTreeMap<usize, Rat>> {
    let log = f.log()?;
    let n = f.truncation();
    let mut a: Vec<Rat> = vec![Rat::zero(); n + 1];
    let mut out = BTreeMap::new();
    for m in 1..=n {
        let mut acc = log.coeffs[m].clone() * Rat::from_integer(Int::from(m));
        for d in 1..m {
            if m % d == 0 {
                acc -= Rat::from_integer(Int::from(d)) * &a[d];
            }
        }
        a[m] = acc / Rat::from_integer(Int::from(m));
        if !a[m].is_zero() {
            out.insert(m, a[m].clone());
        }
    }
    Ok(out)
}

/// `1 / (1 - q)^c` via the product form; handy shorthand.
pub fn geometric_power(c: &Rat, truncation: usize) -> PowerSeries {
    let mut e = BTreeMap::new();
    e.insert(1, c.clone());
    product_expansion(&e, truncation)
}
