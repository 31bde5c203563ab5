//! Colours and bitmask colour sets.
//!
//! Colours are bare integer ids. A [`ColourSet`] is a 128-bit mask, so ids
//! must lie in `0..ColourSet::CAPACITY`. Instance loading compacts larger ids
//! (see [`crate::io`]).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ModelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Colour(pub u32);

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColourSet(u128);

impl ColourSet {
    pub const CAPACITY: u32 = 128;

    pub const fn empty() -> Self {
        ColourSet(0)
    }

    pub const fn from_bits(bits: u128) -> Self {
        ColourSet(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    /// `{0, 1, .., n-1}`.
    pub fn range(n: u32) -> Self {
        assert!(n <= Self::CAPACITY, "colour range {n} exceeds capacity");
        if n == Self::CAPACITY {
            ColourSet(u128::MAX)
        } else {
            ColourSet((1u128 << n) - 1)
        }
    }

    /// Builds a set from ids known to be in range. Panics otherwise; use
    /// [`ColourSet::try_from_ids`] for untrusted input.
    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Self {
        Self::try_from_ids(ids).expect("colour id out of range")
    }

    pub fn try_from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Result<Self, ModelError> {
        let mut bits = 0u128;
        for id in ids {
            if id >= Self::CAPACITY {
                return Err(ModelError::ColourOutOfRange(id));
            }
            bits |= 1u128 << id;
        }
        Ok(ColourSet(bits))
    }

    pub fn singleton(c: Colour) -> Self {
        Self::from_ids([c.0])
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, c: Colour) -> bool {
        c.0 < Self::CAPACITY && self.0 >> c.0 & 1 == 1
    }

    pub fn insert(&mut self, c: Colour) {
        assert!(c.0 < Self::CAPACITY, "colour id {} out of range", c.0);
        self.0 |= 1u128 << c.0;
    }

    pub fn remove(&mut self, c: Colour) {
        if c.0 < Self::CAPACITY {
            self.0 &= !(1u128 << c.0);
        }
    }

    pub fn union(self, other: Self) -> Self {
        ColourSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ColourSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ColourSet(self.0 & !other.0)
    }

    pub fn symmetric_difference(self, other: Self) -> Self {
        ColourSet(self.0 ^ other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn max(self) -> Option<Colour> {
        (self.0 != 0).then(|| Colour(127 - self.0.leading_zeros()))
    }

    /// Ascending iteration.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().map(|c| c.0).collect()
    }

    /// The `k` smallest colours, or `None` if the set is too small.
    pub fn smallest(self, k: usize) -> Option<Self> {
        if self.len() < k {
            return None;
        }
        Some(self.iter().take(k).collect())
    }

    /// All `k`-subsets in colex order.
    pub fn subsets(self, k: usize) -> Subsets {
        Subsets::new(self.iter().collect(), k)
    }
}

impl fmt::Debug for ColourSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|c| c.0)).finish()
    }
}

impl FromIterator<Colour> for ColourSet {
    fn from_iter<I: IntoIterator<Item = Colour>>(iter: I) -> Self {
        let mut s = ColourSet::empty();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl IntoIterator for ColourSet {
    type Item = Colour;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl Serialize for ColourSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|c| c.0))
    }
}

impl<'de> Deserialize<'de> for ColourSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ids = Vec::<u32>::deserialize(deserializer)?;
        let set = ColourSet::try_from_ids(ids.iter().copied()).map_err(serde::de::Error::custom)?;
        if set.len() != ids.len() {
            return Err(serde::de::Error::custom("duplicate colour in list"));
        }
        Ok(set)
    }
}

#[derive(Clone, Debug)]
pub struct Iter(u128);

impl Iterator for Iter {
    type Item = Colour;

    fn next(&mut self) -> Option<Colour> {
        if self.0 == 0 {
            return None;
        }
        let c = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(Colour(c))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Iterator over `k`-combinations of `0..n` as index masks, in colex order
/// (equivalently, increasing numeric order of the mask).
#[derive(Clone, Debug)]
pub struct IndexCombinations {
    n: u32,
    next: Option<u128>,
}

impl IndexCombinations {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n < 128, "combination universe too large");
        let next = (k <= n).then(|| if k == 0 { 0 } else { (1u128 << k) - 1 });
        IndexCombinations { n: n as u32, next }
    }
}

impl Iterator for IndexCombinations {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let low = cur & cur.wrapping_neg();
            let ripple = cur + low;
            let succ = (((cur ^ ripple) >> 2) / low) | ripple;
            (succ >> self.n == 0).then_some(succ)
        };
        Some(cur)
    }
}

/// `k`-subsets of a colour set in colex order of element positions.
#[derive(Clone, Debug)]
pub struct Subsets {
    elements: Vec<Colour>,
    inner: IndexCombinations,
}

impl Subsets {
    fn new(elements: Vec<Colour>, k: usize) -> Self {
        let inner = IndexCombinations::new(elements.len(), k);
        Subsets { elements, inner }
    }
}

impl Iterator for Subsets {
    type Item = ColourSet;

    fn next(&mut self) -> Option<ColourSet> {
        let mask = self.inner.next()?;
        Some(select(&self.elements, mask))
    }
}

/// Picks `items[i]` for every set bit `i` of `mask`.
pub fn select(items: &[Colour], mask: u128) -> ColourSet {
    items
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, c)| *c)
        .collect()
}

/// Binomial coefficient in `u128`; exact for the small arguments used by the
/// enumeration code (the lemma lab uses big integers instead).
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[u32]) -> ColourSet {
        ColourSet::from_ids(ids.iter().copied())
    }

    #[test]
    fn colex_order_of_two_subsets() {
        let got: Vec<Vec<u32>> = set(&[1, 2, 3, 4]).subsets(2).map(|s| s.to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 4],
                vec![2, 4],
                vec![3, 4]
            ]
        );
    }

    #[test]
    fn combination_counts() {
        for n in 0..12 {
            for k in 0..=n + 1 {
                assert_eq!(
                    IndexCombinations::new(n, k).count() as u128,
                    binomial(n, k),
                    "n={n} k={k}"
                );
            }
        }
        assert_eq!(IndexCombinations::new(8, 4).count(), 70);
    }

    #[test]
    fn empty_subset_is_yielded_once() {
        let v: Vec<_> = set(&[5, 9]).subsets(0).collect();
        assert_eq!(v, vec![ColourSet::empty()]);
    }

    #[test]
    fn high_ids_round_trip() {
        let s = set(&[0, 63, 64, 127]);
        assert_eq!(s.to_vec(), vec![0, 63, 64, 127]);
        assert_eq!(s.max(), Some(Colour(127)));
        assert!(ColourSet::try_from_ids([128]).is_err());
    }

    #[test]
    fn serde_rejects_duplicates() {
        assert!(serde_json::from_str::<ColourSet>("[1,1]").is_err());
        let s: ColourSet = serde_json::from_str("[4,1]").unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,4]");
    }
}
