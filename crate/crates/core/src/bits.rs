//! Fixed-width subsets of a finite sort.
//!
//! Every subset handled by this crate lives in a single `u64`: bit `i` is set
//! iff element `i` (by list position) belongs to the set. Contexts are capped
//! at [`MAX_SORT`] elements per sort.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not};

/// Largest number of objects (or features) a context may carry.
pub const MAX_SORT: usize = 64;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(u64);

impl Bits {
    pub const EMPTY: Bits = Bits(0);

    pub const fn from_raw(raw: u64) -> Self {
        Bits(raw)
    }

    pub const fn raw(self) -> u64 {
        self.0
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_SORT);
        if n == MAX_SORT {
            Bits(u64::MAX)
        } else {
            Bits((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_SORT);
        Bits(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_SORT && self.0 & (1u64 << i) != 0
    }

    pub fn with(self, i: usize) -> Self {
        self | Bits::singleton(i)
    }

    pub fn without(self, i: usize) -> Self {
        Bits(self.0 & !(1u64 << i))
    }

    pub fn insert(&mut self, i: usize) {
        *self = self.with(i);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: Bits) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_strict_subset(self, other: Bits) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn minus(self, other: Bits) -> Bits {
        Bits(self.0 & !other.0)
    }

    pub fn iter(self) -> BitsIter {
        BitsIter(self.0)
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
}

impl BitAnd for Bits {
    type Output = Bits;
    fn bitand(self, rhs: Bits) -> Bits {
        Bits(self.0 & rhs.0)
    }
}

impl BitOr for Bits {
    type Output = Bits;
    fn bitor(self, rhs: Bits) -> Bits {
        Bits(self.0 | rhs.0)
    }
}

impl Not for Bits {
    type Output = Bits;
    fn not(self) -> Bits {
        Bits(!self.0)
    }
}

impl FromIterator<usize> for Bits {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(Bits::EMPTY, Bits::with)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct BitsIter(u64);

impl Iterator for BitsIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for BitsIter {}

/// Every subset of `{0, .., n-1}`, in increasing bit-pattern order.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Bits> {
    assert!(n < MAX_SORT, "subset enumeration over {n} elements");
    (0..(1u64 << n)).map(Bits)
}
