/// A permutation of `{0..n-1}`, stored by its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Build from an image array, checking bijectivity.
    pub fn new(images: Vec<usize>) -> Option<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation { images })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (0..n).collect() }
    }

    /// Build from disjoint-cycle notation on `{0..n-1}`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        for c in cycles {
            for i in 0..c.len() {
                images[c[i]] = c[(i + 1) % c.len()];
            }
        }
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self * other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Lexicographic rank of the image array among all permutations of the
    /// same degree (Lehmer code). The identity has rank 0.
    pub fn lex_rank(&self) -> u64 {
        let n = self.images.len();
        let mut rank: u64 = 0;
        for i in 0..n {
            let smaller = (i + 1..n).filter(|&j| self.images[j] < self.images[i]).count() as u64;
            rank = rank * (n - i) as u64 + smaller;
        }
        rank
    }

    /// Inverse of [`lex_rank`].
    pub fn from_lex_rank(n: usize, mut rank: u64) -> Permutation {
        let mut code = vec![0u64; n];
        for i in (0..n).rev() {
            let base = (n - i) as u64;
            code[i] = rank % base;
            rank /= base;
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let images = code.iter().map(|&c| pool.remove(c as usize)).collect();
        Permutation { images }
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
