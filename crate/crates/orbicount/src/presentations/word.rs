/// A word in the generators of a presentation, stored as signed 1-based
/// generator indices (positive = generator, negative = its inverse).
///
/// Words are freely reduced on construction: no `x x^-1` pair survives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<i32>,
}

impl Word {
    /// Build a word, applying free reduction.
    pub fn new(letters: Vec<i32>) -> Word {
        Word { letters: free_reduce(&letters) }
    }

    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|&l| -l).collect() }
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::new(letters)
    }

    /// `u * self * u^-1`, freely reduced.
    pub fn conjugate_by(&self, u: &Word) -> Word {
        u.concat(self).concat(&u.inverse())
    }

    /// Exponent sum of each generator (1-based indexing shifted down by one).
    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generator_count];
        for &l in &self.letters {
            let idx = (l.unsigned_abs() - 1) as usize;
            sums[idx] += if l > 0 { 1 } else { -1 };
        }
        sums
    }

    /// Total letter count parity; this is the exponent-sum parity under the
    /// map sending every generator to 1 mod 2.
    pub fn total_parity(&self) -> u8 {
        (self.letters.len() % 2) as u8
    }
}

/// One-pass stack free reduction. Idempotent, never increases length.
pub fn free_reduce(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        debug_assert!(l != 0, "0 is not a letter");
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduces_adjacent_inverses() {
        assert_eq!(Word::new(vec![1, -1]).letters(), &[] as &[i32]);
        assert_eq!(Word::new(vec![1, 2, -2, -1, 3]).letters(), &[3]);
        assert_eq!(Word::new(vec![1, 2, -1, -2]).letters(), &[1, 2, -1, -2]);
    }

    #[test]
    fn inverse_cancels() {
        let w = Word::new(vec![1, 2, -3, 1]);
        assert!(w.concat(&w.inverse()).is_empty());
        assert!(w.inverse().concat(&w).is_empty());
    }

    fn letter() -> impl Strategy<Value = i32> {
        prop_oneof![1..=4i32, (1..=4i32).prop_map(|k| -k)]
    }

    proptest! {
        #[test]
        fn free_reduction_is_idempotent_and_non_increasing(raw in proptest::collection::vec(letter(), 0..40)) {
            let once = free_reduce(&raw);
            prop_assert!(once.len() <= raw.len());
            prop_assert_eq!(free_reduce(&once), once.clone());
            // no adjacent cancelling pair survives
            for pair in once.windows(2) {
                prop_assert_ne!(pair[0], -pair[1]);
            }
        }

        #[test]
        fn concat_is_associative(a in proptest::collection::vec(letter(), 0..15),
                                  b in proptest::collection::vec(letter(), 0..15),
                                  c in proptest::collection::vec(letter(), 0..15)) {
            let (a, b, c) = (Word::new(a), Word::new(b), Word::new(c));
            prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        }
    }
}
