use std::fmt;

use serde::{Serialize, Serializer};

/// A set of worlds, as a bitmask over world indices `0..16`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet(u16);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn from_bits(bits: u16) -> Self {
        WorldSet(bits)
    }

    pub fn universe(n: usize) -> Self {
        debug_assert!(n <= 16);
        if n >= 16 {
            WorldSet(u16::MAX)
        } else {
            WorldSet((1u16 << n) - 1)
        }
    }

    pub fn singleton(world: usize) -> Self {
        WorldSet(1 << world)
    }

    pub fn from_worlds(worlds: impl IntoIterator<Item = usize>) -> Self {
        WorldSet(worlds.into_iter().fold(0, |acc, w| acc | 1 << w))
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn contains(self, world: usize) -> bool {
        self.0 >> world & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn intersect(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    pub fn minus(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & !other.0)
    }

    /// Complement relative to `universe`.
    pub fn complement_in(self, universe: WorldSet) -> WorldSet {
        WorldSet(universe.0 & !self.0)
    }

    pub fn is_subset_of(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..16).filter(move |&w| self.contains(w))
    }

    /// Every subset of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = WorldSet> {
        let universe = self.0;
        // Submask enumeration, ascending: next = ((cur | !universe) + 1) & universe.
        let mut next = Some(0u16);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == universe {
                None
            } else {
                Some((cur | !universe).wrapping_add(1) & universe)
            };
            Some(WorldSet(cur))
        })
    }
}

impl fmt::Display for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, w) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for WorldSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_cover_powerset_in_order() {
        let all: Vec<u16> = WorldSet::universe(3).subsets().map(WorldSet::bits).collect();
        assert_eq!(all, (0..8).collect::<Vec<_>>());
        let sparse: Vec<u16> = WorldSet::from_bits(0b101).subsets().map(WorldSet::bits).collect();
        assert_eq!(sparse, [0, 1, 4, 5]);
        assert_eq!(WorldSet::EMPTY.subsets().count(), 1);
        assert_eq!(WorldSet::universe(16).subsets().count(), 1 << 16);
    }

    #[test]
    fn display_is_brace_list() {
        assert_eq!(WorldSet::from_worlds([0, 2]).to_string(), "{0,2}");
        assert_eq!(WorldSet::EMPTY.to_string(), "{}");
    }
}
