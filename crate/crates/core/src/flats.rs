//! Flat enumeration, layered by rank.
//!
//! Flats of rank k+1 are exactly the closures cl(F ∪ e) for F a rank-k flat
//! and e a live element outside F, so a breadth-first sweep from cl(∅)
//! enumerates the lattice one rank layer at a time. Layers are deduplicated
//! and sorted, so enumeration order is canonical. A hard cap aborts the sweep
//! on lattices too large to enumerate rather than thrashing.

use crate::error::{Error, Result};
use crate::matroid::Minor;
use crate::subset::Subset;
use std::collections::BTreeSet;

/// Maximum number of flats a single enumeration may produce.
pub const FLAT_CAP: usize = 1 << 20;

/// Flats of a view, grouped by rank: `by_rank[k]` holds the rank-k flats in
/// ascending bitmask order.
#[derive(Clone, Debug)]
pub struct FlatLattice {
    pub by_rank: Vec<Vec<Subset>>,
}

impl FlatLattice {
    pub fn total(&self) -> usize {
        self.by_rank.iter().map(Vec::len).sum()
    }

    pub fn of_rank(&self, k: usize) -> &[Subset] {
        static EMPTY: [Subset; 0] = [];
        self.by_rank.get(k).map(Vec::as_slice).unwrap_or(&EMPTY)
    }

    /// All flats in (rank, mask) order.
    pub fn all(&self) -> impl Iterator<Item = Subset> + '_ {
        self.by_rank.iter().flatten().copied()
    }
}

/// Enumerate flats of rank 0..=max_rank (clamped to the full rank).
pub fn enumerate_flats(ctx: &Minor, max_rank: usize) -> Result<FlatLattice> {
    let r_full = ctx.rank_full();
    let top = max_rank.min(r_full);
    let mut by_rank: Vec<Vec<Subset>> = Vec::with_capacity(top + 1);
    by_rank.push(vec![ctx.closure(Subset::EMPTY)]);
    let live = ctx.live();
    let mut total = 1usize;
    for k in 0..top {
        let mut next: BTreeSet<Subset> = BTreeSet::new();
        for &f in &by_rank[k] {
            for e in live.minus(f).iter() {
                next.insert(ctx.closure(f.with(e)));
                if total + next.len() > FLAT_CAP {
                    return Err(Error::LatticeTooLarge { cap: FLAT_CAP });
                }
            }
        }
        total += next.len();
        by_rank.push(next.into_iter().collect());
    }
    Ok(FlatLattice { by_rank })
}

/// Rank-(r−1) flats of the view.
pub fn hyperplanes(ctx: &Minor) -> Result<Vec<Subset>> {
    let r = ctx.rank_full();
    if r == 0 {
        return Ok(Vec::new());
    }
    Ok(enumerate_flats(ctx, r - 1)?.by_rank[r - 1].clone())
}

/// Is `x` a flat of the view?
pub fn is_flat(ctx: &Minor, x: Subset) -> bool {
    ctx.closure(x) == x
}
