//! Ordered families of subsets and similarity bookkeeping.
//!
//! Families are ordered and may repeat members; indices into the family are
//! stable identifiers used in witnesses. Two sets are *similar* in a view
//! when their closures agree; `epsilon` counts similarity classes, and
//! `simplify` keeps the first member of each class.

use crate::matroid::Minor;
use crate::subset::Subset;
use std::collections::HashMap;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SetFamily {
    members: Vec<Subset>,
}

/// One similarity class: the shared closure and the member indices, in
/// first-occurrence order.
#[derive(Clone, Debug)]
pub struct SimClass {
    pub closure: Subset,
    pub members: Vec<usize>,
}

impl SetFamily {
    pub fn new(members: Vec<Subset>) -> SetFamily {
        SetFamily { members }
    }

    pub fn empty() -> SetFamily {
        SetFamily { members: Vec::new() }
    }

    /// Family of singleton sets, one per element of `x` in ascending order.
    pub fn singletons_of(x: Subset) -> SetFamily {
        SetFamily { members: x.iter().map(Subset::singleton).collect() }
    }

    pub fn push(&mut self, s: Subset) {
        self.members.push(s);
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn member(&self, i: usize) -> Subset {
        self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        self.members.iter().copied()
    }

    pub fn union_all(&self) -> Subset {
        self.members.iter().fold(Subset::EMPTY, |acc, s| acc.union(*s))
    }

    pub fn contains_member(&self, s: Subset) -> bool {
        self.members.contains(&s)
    }

    pub fn position(&self, s: Subset) -> Option<usize> {
        self.members.iter().position(|m| *m == s)
    }

    /// Subfamily selected by index list, in the given order.
    pub fn subfamily(&self, indices: &[usize]) -> SetFamily {
        SetFamily { members: indices.iter().map(|&i| self.members[i]).collect() }
    }

    /// Similarity classes in `ctx`, in first-occurrence order.
    pub fn similarity_classes(&self, ctx: &Minor) -> Vec<SimClass> {
        let mut order: Vec<SimClass> = Vec::new();
        let mut index: HashMap<u64, usize> = HashMap::new();
        for (i, s) in self.members.iter().enumerate() {
            let cl = ctx.closure(*s);
            match index.get(&cl.bits()) {
                Some(&k) => order[k].members.push(i),
                None => {
                    index.insert(cl.bits(), order.len());
                    order.push(SimClass { closure: cl, members: vec![i] });
                }
            }
        }
        order
    }

    /// Number of similarity classes.
    pub fn epsilon(&self, ctx: &Minor) -> u64 {
        self.similarity_classes(ctx).len() as u64
    }

    /// Indices of the first member of each similarity class.
    pub fn simple_indices(&self, ctx: &Minor) -> Vec<usize> {
        self.similarity_classes(ctx).iter().map(|c| c.members[0]).collect()
    }

    /// Keep the first member of each similarity class.
    pub fn simplify(&self, ctx: &Minor) -> SetFamily {
        self.subfamily(&self.simple_indices(ctx))
    }

    pub fn is_simple(&self, ctx: &Minor) -> bool {
        self.epsilon(ctx) == self.len() as u64
    }
}

impl FromIterator<Subset> for SetFamily {
    fn from_iter<T: IntoIterator<Item = Subset>>(iter: T) -> SetFamily {
        SetFamily { members: iter.into_iter().collect() }
    }
}
