//! Finite preference models.
//!
//! A [`Relation`] is a square boolean matrix over at most [`MAX_WORLDS`]
//! worlds, stored as one bitmask per row. The betterness relation of a
//! model is kept in its weak form; strict betterness and equal goodness are
//! always derived from it.

mod format;
mod worldset;

use std::collections::BTreeMap;
use std::fmt;

pub use format::{parse_model, serialize_model, ModelError};
pub use worldset::WorldSet;

pub const MAX_WORLDS: usize = 16;

/// A boolean matrix; `get(i, j)` is read "world i is at least as good as
/// world j" when the relation is a betterness relation.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    rows: [u16; MAX_WORLDS],
}

impl Relation {
    /// The empty relation on `n` worlds.
    ///
    /// Panics if `n` is zero or exceeds [`MAX_WORLDS`].
    pub fn empty(n: usize) -> Self {
        assert!((1..=MAX_WORLDS).contains(&n), "world count {n} out of range");
        Relation { n, rows: [0; MAX_WORLDS] }
    }

    pub fn full(n: usize) -> Self {
        let mut r = Relation::empty(n);
        let all = WorldSet::universe(n).bits();
        for row in r.rows.iter_mut().take(n) {
            *row = all;
        }
        r
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for i in 0..n {
            r.rows[i] = 1 << i;
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Relation::empty(n);
        for (i, j) in pairs {
            r.set(i, j, true);
        }
        r
    }

    /// Decodes the row-major bit code used by enumeration: cell (0,0) is
    /// the most significant of the `n*n` bits, so numeric order on codes is
    /// lexicographic order on matrices.
    pub fn from_code(n: usize, code: u64) -> Self {
        assert!(n * n <= 64, "codes only cover n <= 8");
        let mut r = Relation::empty(n);
        let cells = n * n;
        for k in 0..cells {
            if code >> (cells - 1 - k) & 1 == 1 {
                r.rows[k / n] |= 1 << (k % n);
            }
        }
        r
    }

    pub fn code(&self) -> u64 {
        assert!(self.n * self.n <= 64, "codes only cover n <= 8");
        let mut code = 0u64;
        for i in 0..self.n {
            for j in 0..self.n {
                code = code << 1 | u64::from(self.get(i, j));
            }
        }
        code
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.rows[..self.n].iter().all(|r| *r == 0)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.n && j < self.n, "cell ({i},{j}) outside {}x{}", self.n, self.n);
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    /// Worlds `j` with `i R j`.
    pub fn successors(&self, i: usize) -> WorldSet {
        WorldSet::from_bits(self.rows[i])
    }

    /// Worlds `j` with `j R i`.
    pub fn predecessors(&self, i: usize) -> WorldSet {
        let mut bits = 0u16;
        for j in 0..self.n {
            bits |= ((self.rows[j] >> i) & 1) << j;
        }
        WorldSet::from_bits(bits)
    }

    pub fn universe(&self) -> WorldSet {
        WorldSet::universe(self.n)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (0..self.n).filter(move |&j| self.get(i, j)).map(move |j| (i, j)))
    }

    pub fn transpose(&self) -> Relation {
        let mut t = Relation::empty(self.n);
        for (i, j) in self.pairs() {
            t.rows[j] |= 1 << i;
        }
        t
    }

    pub fn intersect(&self, other: &Relation) -> Relation {
        debug_assert_eq!(self.n, other.n);
        let mut r = *self;
        for i in 0..self.n {
            r.rows[i] &= other.rows[i];
        }
        r
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        (0..self.n).all(|i| self.rows[i] & !other.rows[i] == 0)
    }

    /// `a > b` iff `a >= b` and not `b >= a`.
    pub fn strict_part(&self) -> Relation {
        let t = self.transpose();
        let mut r = *self;
        for i in 0..self.n {
            r.rows[i] &= !t.rows[i];
        }
        r
    }

    /// `a ~ b` iff `a >= b` and `b >= a`.
    pub fn equal_goodness(&self) -> Relation {
        self.intersect(&self.transpose())
    }

    /// Least transitive relation containing `self` (Warshall).
    pub fn transitive_closure(&self) -> Relation {
        let mut r = *self;
        for k in 0..self.n {
            let through_k = r.rows[k];
            for i in 0..self.n {
                if r.rows[i] >> k & 1 == 1 {
                    r.rows[i] |= through_k;
                }
            }
        }
        r
    }

    /// The relation `{(perm[i], perm[j]) : (i, j) in self}`.
    pub fn permuted(&self, perm: &[usize]) -> Relation {
        debug_assert_eq!(perm.len(), self.n);
        let mut r = Relation::empty(self.n);
        for (i, j) in self.pairs() {
            r.rows[perm[i]] |= 1 << perm[j];
        }
        r
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation({}; ", self.n)?;
        let pairs: Vec<String> = self.pairs().map(|(i, j)| format!("{i}>={j}")).collect();
        write!(f, "{})", pairs.join(" "))
    }
}

/// A world count plus a betterness relation plus a valuation of atoms.
///
/// Atoms absent from the valuation denote the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceModel {
    betterness: Relation,
    valuation: BTreeMap<String, WorldSet>,
}

impl PreferenceModel {
    pub fn new(betterness: Relation) -> Self {
        PreferenceModel { betterness, valuation: BTreeMap::new() }
    }

    pub fn with_valuation(
        betterness: Relation,
        valuation: impl IntoIterator<Item = (String, WorldSet)>,
    ) -> Self {
        let mut m = PreferenceModel::new(betterness);
        for (atom, set) in valuation {
            m.assign(atom, set);
        }
        m
    }

    /// Sets the extension of `atom`, clipped to the universe.
    pub fn assign(&mut self, atom: impl Into<String>, set: WorldSet) {
        let set = set.intersect(self.universe());
        self.valuation.insert(atom.into(), set);
    }

    pub fn world_count(&self) -> usize {
        self.betterness.len()
    }

    pub fn universe(&self) -> WorldSet {
        self.betterness.universe()
    }

    pub fn betterness(&self) -> &Relation {
        &self.betterness
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    pub fn extension(&self, atom: &str) -> Option<WorldSet> {
        self.valuation.get(atom).copied()
    }

    pub fn strict_part(&self) -> Relation {
        self.betterness.strict_part()
    }

    pub fn equal_goodness(&self) -> Relation {
        self.betterness.equal_goodness()
    }
}
