//! Symmetric multi-index arithmetic.
//!
//! A multi-index is stored as a counts vector: `counts[mu]` is the number of
//! occurrences of the base index `mu`. The representation is canonical by
//! construction (the order in which indices were added never matters) and
//! all arithmetic is O(n) independent of the total order.

use num_bigint::BigInt;
use num_traits::One;
use std::fmt;

/// A symmetric multi-index over `base_dim` base indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    counts: Vec<u32>,
}

impl MultiIndex {
    /// The empty multi-index (all counts zero).
    pub fn empty(base_dim: usize) -> Self {
        MultiIndex {
            counts: vec![0; base_dim],
        }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        MultiIndex { counts }
    }

    /// Build from an explicit list of base indices, e.g. `[0, 0, 1]`.
    ///
    /// Panics if an index is out of range; use [`MultiIndex::checked_add`]
    /// when the indices come from untrusted input.
    pub fn from_indices(base_dim: usize, indices: &[usize]) -> Self {
        let mut mi = MultiIndex::empty(base_dim);
        for &i in indices {
            mi = mi.add(i);
        }
        mi
    }

    pub fn base_dim(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Multiplicity of the base index `mu`.
    pub fn count(&self, mu: usize) -> u32 {
        self.counts[mu]
    }

    /// Total order `|Λ|`.
    pub fn order(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// `λ + Λ`: increment the count of `lambda`. Returns `None` when the
    /// index is out of range.
    pub fn checked_add(&self, lambda: usize) -> Option<MultiIndex> {
        if lambda >= self.counts.len() {
            return None;
        }
        let mut counts = self.counts.clone();
        counts[lambda] += 1;
        Some(MultiIndex { counts })
    }

    /// `λ + Λ`; panics when `lambda` is out of range.
    pub fn add(&self, lambda: usize) -> MultiIndex {
        self.checked_add(lambda)
            .expect("base index out of range for multi-index")
    }

    /// Remove one occurrence of `lambda`; `None` when it does not occur.
    pub fn remove(&self, lambda: usize) -> Option<MultiIndex> {
        if lambda >= self.counts.len() || self.counts[lambda] == 0 {
            return None;
        }
        let mut counts = self.counts.clone();
        counts[lambda] -= 1;
        Some(MultiIndex { counts })
    }

    /// Component-wise sum of two multi-indices.
    pub fn union(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.counts.len(), other.counts.len());
        MultiIndex {
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `Λ! = Λ_0! · Λ_1! ⋯ Λ_{n-1}!`.
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &c in &self.counts {
            for k in 2..=c {
                acc *= BigInt::from(k);
            }
        }
        acc
    }

    /// All ordered pairs `(Σ, Ξ)` with `Σ + Ξ = Λ` component-wise. Each
    /// distinct pair appears exactly once, in lexicographic order of the
    /// `Σ` counts. The number of pairs is `Π (Λ_mu + 1)`.
    pub fn splits(&self) -> Vec<(MultiIndex, MultiIndex)> {
        let n = self.counts.len();
        let mut out = Vec::new();
        let mut sigma = vec![0u32; n];
        loop {
            let xi: Vec<u32> = self
                .counts
                .iter()
                .zip(&sigma)
                .map(|(t, s)| t - s)
                .collect();
            out.push((
                MultiIndex {
                    counts: sigma.clone(),
                },
                MultiIndex { counts: xi },
            ));
            // mixed-radix increment from the last position
            let mut pos = n;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if sigma[pos] < self.counts[pos] {
                    sigma[pos] += 1;
                    for s in sigma.iter_mut().skip(pos + 1) {
                        *s = 0;
                    }
                    break;
                }
            }
        }
    }

    /// The indices expanded with multiplicity, in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order() as usize);
        for (mu, &c) in self.counts.iter().enumerate() {
            for _ in 0..c {
                out.push(mu);
            }
        }
        out
    }

    /// Digit-string form used inside brackets, e.g. `"001"` for counts
    /// `[2, 1]`. Empty string for the empty multi-index.
    pub fn to_digits(&self) -> String {
        self.indices()
            .into_iter()
            .map(|i| {
                std::char::from_digit(i as u32, 10).expect("digit form requires base_dim <= 10")
            })
            .collect()
    }

    /// Parse a digit string; digits are base indices, order-insensitive.
    pub fn parse_digits(s: &str, base_dim: usize) -> Option<MultiIndex> {
        let mut mi = MultiIndex::empty(base_dim);
        for ch in s.chars() {
            let d = ch.to_digit(10)? as usize;
            mi = mi.checked_add(d)?;
        }
        Some(mi)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_digits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn mi(n: usize, idx: &[usize]) -> MultiIndex {
        MultiIndex::from_indices(n, idx)
    }

    #[test]
    fn add_builds_counts() {
        let e = MultiIndex::empty(2);
        assert_eq!(e.add(0), mi(2, &[0]));
        assert_eq!(e.add(0).add(0), mi(2, &[0, 0]));
        assert_eq!(e.add(0).add(0).order(), 2);
        let m = e.add(0).add(0).add(1);
        assert_eq!(m.counts(), &[2, 1]);
        assert!(e.checked_add(2).is_none());
    }

    #[test]
    fn add_is_order_insensitive() {
        let e = MultiIndex::empty(3);
        assert_eq!(e.add(0).add(2).add(1), e.add(2).add(1).add(0));
    }

    #[test]
    fn factorials() {
        assert_eq!(MultiIndex::empty(2).factorial(), BigInt::from(1));
        assert_eq!(mi(1, &[0, 0]).factorial(), BigInt::from(2));
        assert_eq!(mi(2, &[0, 0, 1]).factorial(), BigInt::from(2));
        assert_eq!(mi(2, &[0, 0, 0, 1, 1]).factorial(), BigInt::from(12));
    }

    #[test]
    fn factorial_divides_total_factorial() {
        let cases = [mi(2, &[0, 0, 1]), mi(3, &[0, 1, 2, 2]), mi(2, &[1, 1, 1])];
        for m in cases {
            let mut total = BigInt::from(1);
            for k in 2..=m.order() {
                total *= BigInt::from(k);
            }
            assert_eq!(&total % m.factorial(), BigInt::from(0));
        }
    }

    #[test]
    fn splits_enumeration() {
        let e = MultiIndex::empty(1);
        assert_eq!(e.splits(), vec![(e.clone(), e.clone())]);

        let one = mi(1, &[0]);
        assert_eq!(
            one.splits(),
            vec![(e.clone(), one.clone()), (one.clone(), e.clone())]
        );

        let two = mi(1, &[0, 0]);
        assert_eq!(
            two.splits(),
            vec![
                (e.clone(), two.clone()),
                (one.clone(), one.clone()),
                (two.clone(), e.clone()),
            ]
        );
    }

    #[test]
    fn splits_count_matches_product_formula() {
        for m in [mi(2, &[0, 0, 1]), mi(3, &[0, 1, 1, 2, 2, 2]), mi(2, &[])] {
            let expect: u64 = m.counts().iter().map(|&c| (c + 1) as u64).product();
            assert_eq!(m.splits().len() as u64, expect);
            // each split recombines to the original
            for (s, x) in m.splits() {
                assert_eq!(s.union(&x), m);
            }
        }
    }

    #[test]
    fn digit_round_trip() {
        let m = mi(2, &[0, 0, 1]);
        assert_eq!(m.to_digits(), "001");
        assert_eq!(m.to_string(), "[001]");
        assert_eq!(MultiIndex::parse_digits("010", 2), Some(m));
        assert_eq!(MultiIndex::parse_digits("", 2), Some(MultiIndex::empty(2)));
        assert_eq!(MultiIndex::parse_digits("3", 2), None);
    }
}
