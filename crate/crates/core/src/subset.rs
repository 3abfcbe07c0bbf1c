//! Subsets of a ground set as 64-bit masks.
//!
//! Every set-valued quantity in the crate (ground sets, flats, family members,
//! contract/delete sets) is a [`Subset`]: bit `i` set means element `i` is in
//! the set. Ground sets are capped at [`MAX_GROUND`] elements, which keeps all
//! set operations O(1) and makes subset enumeration cheap.
//!
//! The canonical order on subsets used for deterministic tie-breaking
//! everywhere in the crate is ascending mask value (`Ord` on the raw bits).

use std::fmt;

/// Hard cap on ground set size.
pub const MAX_GROUND: usize = 64;

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Subset {
        Subset(bits)
    }

    /// The set {0, 1, ..., n-1}.
    pub fn full(n: usize) -> Subset {
        assert!(n <= MAX_GROUND);
        if n == MAX_GROUND {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: usize) -> Subset {
        assert!(e < MAX_GROUND);
        Subset(1u64 << e)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Subset {
        let mut s = Subset::EMPTY;
        for e in indices {
            s = s.with(e);
        }
        s
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn card(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_GROUND && self.0 & (1u64 << e) != 0
    }

    #[must_use]
    pub fn with(self, e: usize) -> Subset {
        assert!(e < MAX_GROUND);
        Subset(self.0 | (1u64 << e))
    }

    #[must_use]
    pub fn without(self, e: usize) -> Subset {
        assert!(e < MAX_GROUND);
        Subset(self.0 & !(1u64 << e))
    }

    #[must_use]
    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    #[must_use]
    pub fn intersect(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    #[must_use]
    pub fn minus(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    /// Least element, if any.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Elements in ascending order.
    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct SubsetIter(u64);

impl Iterator for SubsetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let e = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(e)
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Space-separated element indices, the on-disk representation of a subset.
impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// All k-element subsets of `parent`, in ascending mask order.
pub fn k_subsets(parent: Subset, k: usize) -> Vec<Subset> {
    let elems = parent.to_vec();
    let n = elems.len();
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(Subset::EMPTY);
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(Subset::from_indices(idx.iter().map(|&i| elems[i])));
        if !advance_combination(&mut idx, n) {
            break;
        }
    }
    out.sort();
    out
}

/// Step an ascending index combination to its lexicographic successor.
fn advance_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
