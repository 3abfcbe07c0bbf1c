//! Exact minimum covers by flats.
//!
//! Three entry points share one exact branch-and-bound solver:
//!
//! * [`tau_a`] — fewest rank-a flats covering every live element;
//! * [`tau_weighted`] — flats of any rank, weight d^rank each, minimizing
//!   total weight over covers of the live elements;
//! * [`dmin_cover_family`] — weighted cover of a *family*: each member must
//!   lie inside some chosen flat.
//!
//! The solver seeds with a greedy cover, then branches on the least-index
//! uncovered target, trying candidate flats in lattice enumeration order. The
//! lower bound walks the uncovered targets and charges, for each, the
//! cheapest candidate covering it, skipping targets already reachable by a
//! previously charged flat; the charged flats are pairwise target-disjoint so
//! the bound never exceeds the true optimum. Weights use u64 with a hard
//! overflow cap — overflow is an error, never a wrap.
//!
//! Restricting [`tau_a`] candidates to flats of rank exactly a loses nothing:
//! if the full rank is at least a, every flat of smaller rank extends to a
//! rank-a flat containing it, and swapping a cover member for a superset
//! keeps the cover a cover. When the full rank is at most a, the single flat
//! cl(E) is the unique minimum cover.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::flats::{enumerate_flats, is_flat};
use crate::matroid::Minor;
use crate::subset::Subset;

/// Total weights above this cap abort with [`Error::WeightOverflow`].
pub const WEIGHT_CAP: u64 = 1 << 62;

/// A cover witness: the weight parameter and the chosen flats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatCover {
    pub d: u64,
    pub flats: Vec<Subset>,
}

impl FlatCover {
    pub fn weight(&self, ctx: &Minor) -> Result<u64> {
        weight_of_flats(ctx, &self.flats, self.d)
    }

    pub fn count(&self) -> usize {
        self.flats.len()
    }

    /// Does every live element lie in some chosen flat?
    pub fn covers_elements(&self, ctx: &Minor) -> bool {
        let union = self.flats.iter().fold(Subset::EMPTY, |a, f| a.union(*f));
        ctx.live().is_subset_of(union)
    }

    /// Does every family member lie inside some chosen flat?
    pub fn covers_family(&self, fam: &SetFamily) -> bool {
        fam.iter().all(|m| self.flats.iter().any(|f| m.is_subset_of(*f)))
    }
}

/// d^e with the overflow cap enforced.
pub fn checked_pow(d: u64, e: usize) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(d).ok_or(Error::WeightOverflow)?;
        if acc > WEIGHT_CAP {
            return Err(Error::WeightOverflow);
        }
    }
    Ok(acc)
}

/// Sum of d^rank(F) over the given flats, overflow-checked.
pub fn weight_of_flats(ctx: &Minor, flats: &[Subset], d: u64) -> Result<u64> {
    let mut total: u64 = 0;
    for f in flats {
        total = total
            .checked_add(checked_pow(d, ctx.rank(*f))?)
            .filter(|t| *t <= WEIGHT_CAP)
            .ok_or(Error::WeightOverflow)?;
    }
    Ok(total)
}

/// Exact binomial coefficient; errors on overflow past u64.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return Err(Error::WeightOverflow);
        }
    }
    Ok(acc as u64)
}

/// Check a claimed cover against a view: flats must be flats, the claimed
/// weight must match, and the live set must be covered.
pub fn validate_element_cover(ctx: &Minor, cover: &FlatCover, claimed_weight: u64) -> Result<()> {
    for f in &cover.flats {
        if !is_flat(ctx, *f) {
            return Err(Error::Input(format!("{f:?} is not a flat")));
        }
    }
    let w = cover.weight(ctx)?;
    if w != claimed_weight {
        return Err(Error::Input(format!("cover weight {w} differs from claimed {claimed_weight}")));
    }
    if !cover.covers_elements(ctx) {
        return Err(Error::Input("cover misses a live element".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Shared exact solver
// ---------------------------------------------------------------------------

/// A candidate flat with its weight and the targets it covers (bitmask over
/// target indices).
#[derive(Clone, Debug)]
struct Cand {
    flat: Subset,
    weight: u64,
    cov: u64,
}

/// Targets a candidate list must cover, as a full bitmask.
fn all_mask(n_targets: usize) -> u64 {
    debug_assert!(n_targets <= 64);
    if n_targets == 64 {
        u64::MAX
    } else {
        (1u64 << n_targets) - 1
    }
}

/// Greedy cover: repeatedly take the candidate minimizing weight per newly
/// covered target (ties to the earlier candidate). Assumes coverability.
fn greedy_cover(cands: &[Cand], all: u64) -> (u64, Vec<usize>) {
    let mut covered = 0u64;
    let mut chosen = Vec::new();
    let mut weight = 0u64;
    while covered != all {
        let mut best: Option<(usize, u64, u32)> = None; // (index, weight, new)
        for (i, c) in cands.iter().enumerate() {
            let new = (c.cov & all & !covered).count_ones();
            if new == 0 {
                continue;
            }
            let better = match best {
                None => true,
                // c.weight / new < bw / bnew  via cross-multiplication
                Some((_, bw, bnew)) => (c.weight as u128) * (bnew as u128) < (bw as u128) * (new as u128),
            };
            if better {
                best = Some((i, c.weight, new));
            }
        }
        let (i, w, _) = best.expect("coverable");
        covered |= cands[i].cov & all;
        weight = weight.saturating_add(w);
        chosen.push(i);
    }
    (weight, chosen)
}

/// Scale applied before flooring the per-target charges of [`lower_bound`],
/// so each floor loses less than 1/LB_SCALE of a weight unit.
const LB_SCALE: u128 = 1 << 20;

/// Admissible lower bound by fractional charging: every uncovered target
/// charges the best weight-per-covered-target ratio among the candidates
/// covering it. Any true cover pays at least the sum of the charges, because
/// a chosen flat's weight, split evenly over the uncovered targets it
/// covers, is at least each of their charges. Charges are scaled and floored,
/// so the sum only ever under-approximates. Returns `u64::MAX` when some
/// target has no candidate at all.
fn lower_bound(cands: &[Cand], uncovered: u64) -> u64 {
    if uncovered == 0 {
        return 0;
    }
    let mut charge = [u128::MAX; 64];
    for c in cands {
        let hit = c.cov & uncovered;
        let k = hit.count_ones();
        if k == 0 {
            continue;
        }
        let val = (c.weight as u128 * LB_SCALE) / k as u128;
        let mut m = hit;
        while m != 0 {
            let t = m.trailing_zeros() as usize;
            if val < charge[t] {
                charge[t] = val;
            }
            m &= m - 1;
        }
    }
    let mut total: u128 = 0;
    let mut m = uncovered;
    while m != 0 {
        let t = m.trailing_zeros() as usize;
        if charge[t] == u128::MAX {
            return u64::MAX;
        }
        total += charge[t];
        m &= m - 1;
    }
    (total / LB_SCALE) as u64
}

/// Exact minimum-weight cover. Returns (weight, chosen indices). The chosen
/// index list is the first optimum found by the deterministic search.
fn exact_min_cover(cands: &[Cand], all: u64) -> (u64, Vec<usize>) {
    if all == 0 {
        return (0, Vec::new());
    }
    let (gw, gchosen) = greedy_cover(cands, all);
    let mut best_w = gw;
    let mut best: Vec<usize> = gchosen;
    let mut stack: Vec<usize> = Vec::new();
    let mut memo: HashMap<u64, u64> = HashMap::new();
    dfs_min(cands, all, 0, 0, &mut stack, &mut best_w, &mut best, &mut memo);
    (best_w, best)
}

#[allow(clippy::too_many_arguments)]
fn dfs_min(
    cands: &[Cand],
    all: u64,
    covered: u64,
    weight: u64,
    stack: &mut Vec<usize>,
    best_w: &mut u64,
    best: &mut Vec<usize>,
    memo: &mut HashMap<u64, u64>,
) {
    if covered == all {
        if weight < *best_w {
            *best_w = weight;
            *best = stack.clone();
        }
        return;
    }
    // Transposition pruning: an earlier visit to the same covered set at no
    // greater weight already explored every completion this visit could use.
    match memo.entry(covered) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            if *e.get() <= weight {
                return;
            }
            e.insert(weight);
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(weight);
        }
    }
    let lb = lower_bound(cands, all & !covered);
    if weight.saturating_add(lb) >= *best_w {
        return;
    }
    // Branch on the uncovered target with the fewest candidates (ties to the
    // lower index): the smallest branching factor first.
    let mut pick_bit = 0u64;
    let mut pick_n = usize::MAX;
    let mut rem = all & !covered;
    while rem != 0 {
        let tbit = rem & rem.wrapping_neg();
        let n = cands.iter().filter(|c| c.cov & tbit != 0).count();
        if n < pick_n {
            pick_n = n;
            pick_bit = tbit;
        }
        rem &= rem - 1;
    }
    // Try candidates in ascending weight-per-newly-covered-target order (ties
    // to the lower index), so good covers tighten the bound early.
    let mut order: Vec<usize> =
        (0..cands.len()).filter(|&i| cands[i].cov & pick_bit != 0).collect();
    order.sort_by(|&i, &j| {
        let ni = (cands[i].cov & !covered).count_ones() as u128;
        let nj = (cands[j].cov & !covered).count_ones() as u128;
        (cands[i].weight as u128 * nj).cmp(&(cands[j].weight as u128 * ni)).then(i.cmp(&j))
    });
    for i in order {
        stack.push(i);
        // Clip to `all`: callers may ask for a sub-cover, and coverage
        // outside the asked-for targets must not disturb the completion test.
        dfs_min(
            cands,
            all,
            covered | (cands[i].cov & all),
            weight + cands[i].weight,
            stack,
            best_w,
            best,
            memo,
        );
        stack.pop();
    }
}

/// Among covers of weight exactly `wstar`, find the canonical one:
/// if `maximize_count`, the most flats wins first; remaining ties go to the
/// lexicographically least sorted flat list. Requires `wstar` to be the
/// optimal weight, so every such cover is irredundant and no optimal cover
/// contains another.
fn canonical_at_weight(cands: &[Cand], all: u64, wstar: u64, maximize_count: bool) -> Vec<Subset> {
    if maximize_count {
        // The count-maximizing tie-break has no first-found shortcut; walk
        // every optimal cover.
        let mut best: Option<(usize, Vec<Subset>)> = None;
        let mut stack: Vec<usize> = Vec::new();
        dfs_exact(cands, all, 0, 0, wstar, true, &mut stack, &mut best);
        return best.expect("an optimal cover exists").1;
    }
    // The sorted flat list of the canonical cover is built left to right:
    // its k-th entry is the least flat f beyond the prefix such that flats
    // strictly above f can finish the cover at exactly the remaining budget.
    // Optimality of wstar makes "at exactly" the same as "within": a cheaper
    // completion would put a full cover below wstar.
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by(|&i, &j| cands[i].flat.cmp(&cands[j].flat));
    let ordered: Vec<Cand> = order.iter().map(|&i| cands[i].clone()).collect();
    let mut chosen: Vec<Subset> = Vec::new();
    let mut covered = 0u64;
    let mut spent = 0u64;
    let mut start = 0usize;
    while covered != all {
        let mut advanced = false;
        for j in start..ordered.len() {
            let c = &ordered[j];
            // A flat adding no coverage can never sit in an optimal cover.
            if c.cov & !covered == 0 || spent + c.weight > wstar {
                continue;
            }
            let rem = wstar - spent - c.weight;
            let todo = all & !(covered | c.cov);
            let feasible =
                if todo == 0 { rem == 0 } else { min_cover_within(&ordered[j + 1..], todo, rem) };
            if feasible {
                chosen.push(c.flat);
                covered |= c.cov;
                spent += c.weight;
                start = j + 1;
                advanced = true;
                break;
            }
        }
        assert!(advanced, "an optimal cover exists");
    }
    chosen
}

/// Is there a cover of `all` from `cands` with weight at most `cap`?
fn min_cover_within(cands: &[Cand], all: u64, cap: u64) -> bool {
    let mut best_w = cap.saturating_add(1);
    let mut best: Vec<usize> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut memo: HashMap<u64, u64> = HashMap::new();
    dfs_min(cands, all, 0, 0, &mut stack, &mut best_w, &mut best, &mut memo);
    best_w <= cap
}

#[allow(clippy::too_many_arguments)]
fn dfs_exact(
    cands: &[Cand],
    all: u64,
    covered: u64,
    weight: u64,
    wstar: u64,
    maximize_count: bool,
    stack: &mut Vec<usize>,
    best: &mut Option<(usize, Vec<Subset>)>,
) {
    if covered == all {
        if weight == wstar {
            let mut flats: Vec<Subset> = stack.iter().map(|&i| cands[i].flat).collect();
            flats.sort();
            let better = match best {
                None => true,
                Some((bc, bf)) => {
                    if maximize_count && flats.len() != *bc {
                        flats.len() > *bc
                    } else {
                        flats < *bf
                    }
                }
            };
            if better {
                *best = Some((flats.len(), flats));
            }
        }
        return;
    }
    if weight.saturating_add(lower_bound(cands, all & !covered)) > wstar {
        return;
    }
    let t = (all & !covered).trailing_zeros();
    let tbit = 1u64 << t;
    for (i, c) in cands.iter().enumerate() {
        if c.cov & tbit != 0 {
            stack.push(i);
            dfs_exact(
                cands,
                all,
                covered | (c.cov & all),
                weight + c.weight,
                wstar,
                maximize_count,
                stack,
                best,
            );
            stack.pop();
        }
    }
}

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

/// Covering number: the least number of rank-a flats whose union is the live
/// set, together with a witness cover.
pub fn tau_a(ctx: &Minor, a: usize) -> Result<(u64, FlatCover)> {
    if a == 0 {
        return Err(Error::Input("covering rank a must be at least 1".into()));
    }
    let live = ctx.live();
    if live.is_empty() {
        return Ok((0, FlatCover { d: 1, flats: Vec::new() }));
    }
    if ctx.rank_full() <= a {
        return Ok((1, FlatCover { d: 1, flats: vec![ctx.closure(live)] }));
    }
    let lattice = enumerate_flats(ctx, a)?;
    let targets: Vec<usize> = live.to_vec();
    let cands: Vec<Cand> = lattice.by_rank[a]
        .iter()
        .map(|&f| Cand { flat: f, weight: 1, cov: cov_mask(f, &targets) })
        .collect();
    debug_assert!(cands.iter().fold(0u64, |m, c| m | c.cov) == all_mask(targets.len()));
    let (w, chosen) = exact_min_cover(&cands, all_mask(targets.len()));
    let mut flats: Vec<Subset> = chosen.iter().map(|&i| cands[i].flat).collect();
    flats.sort();
    Ok((w, FlatCover { d: 1, flats }))
}

fn cov_mask(flat: Subset, targets: &[usize]) -> u64 {
    let mut m = 0u64;
    for (t, &e) in targets.iter().enumerate() {
        if flat.contains(e) {
            m |= 1u64 << t;
        }
    }
    m
}

fn cov_mask_family(flat: Subset, fam: &SetFamily) -> u64 {
    let mut m = 0u64;
    for (t, s) in fam.iter().enumerate() {
        if s.is_subset_of(flat) {
            m |= 1u64 << t;
        }
    }
    m
}

/// Minimum weight of a cover of the live elements by flats of any rank,
/// where a rank-k flat weighs d^k.
pub fn tau_weighted(ctx: &Minor, d: u64) -> Result<(u64, FlatCover)> {
    if d == 0 {
        return Err(Error::Input("weight base d must be at least 1".into()));
    }
    let live = ctx.live();
    if live.is_empty() {
        return Ok((0, FlatCover { d, flats: Vec::new() }));
    }
    let lattice = enumerate_flats(ctx, ctx.rank_full())?;
    let targets: Vec<usize> = live.to_vec();
    let mut cands: Vec<Cand> = Vec::with_capacity(lattice.total());
    for (k, layer) in lattice.by_rank.iter().enumerate() {
        let w = checked_pow(d, k)?;
        for &f in layer {
            let cov = cov_mask(f, &targets);
            if cov != 0 {
                cands.push(Cand { flat: f, weight: w, cov });
            }
        }
    }
    let (w, chosen) = exact_min_cover(&cands, all_mask(targets.len()));
    let mut flats: Vec<Subset> = chosen.iter().map(|&i| cands[i].flat).collect();
    flats.sort();
    Ok((w, FlatCover { d, flats }))
}

/// Minimum weight of a family cover: every member must lie inside some chosen
/// flat. Ties at the optimal weight resolve to the most flats when
/// `maximize_count` is set, then to the lexicographically least sorted flat
/// list, so the witness is canonical either way.
pub fn dmin_cover_family(
    ctx: &Minor,
    fam: &SetFamily,
    d: u64,
    maximize_count: bool,
) -> Result<(u64, FlatCover)> {
    if d == 0 {
        return Err(Error::Input("weight base d must be at least 1".into()));
    }
    if fam.is_empty() {
        return Ok((0, FlatCover { d, flats: Vec::new() }));
    }
    if fam.len() > 64 {
        return Err(Error::Input(format!("family of {} members exceeds solver width 64", fam.len())));
    }
    let live = ctx.live();
    for m in fam.iter() {
        if !m.is_subset_of(live) {
            return Err(Error::NotLive(format!("{:?}", m.minus(live))));
        }
    }
    let lattice = enumerate_flats(ctx, ctx.rank_full())?;
    let mut cands: Vec<Cand> = Vec::new();
    for (k, layer) in lattice.by_rank.iter().enumerate() {
        let w = checked_pow(d, k)?;
        for &f in layer {
            let cov = cov_mask_family(f, fam);
            if cov != 0 {
                cands.push(Cand { flat: f, weight: w, cov });
            }
        }
    }
    let all = all_mask(fam.len());
    debug_assert!(cands.iter().fold(0u64, |m, c| m | c.cov) == all, "cl(E) covers everything");
    let (wstar, _) = exact_min_cover(&cands, all);
    let flats = canonical_at_weight(&cands, all, wstar, maximize_count);
    Ok((wstar, FlatCover { d, flats }))
}

// ---------------------------------------------------------------------------
// Constructive rank-a covers with few flats
// ---------------------------------------------------------------------------

/// Build a cover of the live set by rank-a flats, of size at most
/// binomial(b−1, a) per rank-(a+1) piece, by the arc-growing recursion:
///
/// * Base case (full rank a+1): grow a maximal arc X greedily — every a+1
///   of its elements have full rank a+1. If X reaches b elements the
///   precondition (no such arc) is violated and the arc is returned as an
///   error witness. Otherwise |X| ≤ b−1 and the closures of the a-subsets of
///   X cover the live set.
/// * Recursive case (rank > a+1): contract the first nonloop e, cover the
///   contraction recursively with rank-a flats, lift each flat F to
///   cl(F ∪ e) (rank a+1 in the original), and refine each lifted piece by
///   the base case applied to its restriction.
///
/// Preconditions: rank > a and no (a+1)-arc with b elements; `b > a + 1`.
pub fn cover_kd(ctx: &Minor, a: usize, b: usize) -> Result<FlatCover> {
    if a == 0 || b <= a + 1 {
        return Err(Error::Input("need a >= 1 and b > a + 1".into()));
    }
    let r = ctx.rank_full();
    if r <= a {
        return Err(Error::Precondition(format!("rank {r} not above a={a}")));
    }
    let flats = cover_kd_inner(ctx, a, b)?;
    let cover = FlatCover { d: 1, flats };
    debug_assert!(cover.covers_elements(ctx));
    Ok(cover)
}

fn cover_kd_inner(ctx: &Minor, a: usize, b: usize) -> Result<Vec<Subset>> {
    let r = ctx.rank_full();
    if r == a + 1 {
        return cover_kd_base(ctx, a, b);
    }
    let e = ctx
        .nonloops()
        .first()
        .ok_or(Error::AllLoops)?;
    let contracted = ctx.contract(Subset::singleton(e))?;
    let lower = cover_kd_inner(&contracted, a, b)?;
    let mut out: Vec<Subset> = Vec::new();
    for f in lower {
        // Lift: rank a in the contraction means rank a+1 over e here, so the
        // restriction to the lifted closure always has rank exactly a+1.
        let lifted = ctx.closure(f.with(e));
        let piece = ctx.restrict(lifted)?;
        for g in cover_kd_base(&piece, a, b)? {
            out.push(g);
        }
    }
    out = dedup_sorted(out);
    Ok(out)
}

fn dedup_sorted(mut v: Vec<Subset>) -> Vec<Subset> {
    v.sort();
    v.dedup();
    v
}

/// Base case of [`cover_kd`]: the view has rank exactly a+1.
fn cover_kd_base(ctx: &Minor, a: usize, b: usize) -> Result<Vec<Subset>> {
    debug_assert_eq!(ctx.rank_full(), a + 1);
    // Grow a maximal (a+1)-arc greedily: X such that every min(|X|, a+1)
    // elements of X are independent.
    let mut arc: Vec<usize> = Vec::new();
    for e in ctx.live().iter() {
        if arc_accepts(ctx, &arc, e, a) {
            arc.push(e);
            if arc.len() >= b {
                return Err(Error::Precondition(format!(
                    "found an (a+1)-arc with {b} elements: {:?}",
                    Subset::from_indices(arc.iter().copied())
                )));
            }
        }
    }
    if arc.len() <= a {
        // While the arc has at most a elements the acceptance test is plain
        // independence, so the greedy pass builds a basis and reaches a+1
        // elements in a rank-(a+1) view. Stalling earlier is impossible.
        return Err(Error::Invariant(format!("arc stalled at {} elements", arc.len())));
    }
    let arc_set = Subset::from_indices(arc.iter().copied());
    let mut out: Vec<Subset> = Vec::new();
    for s in crate::subset::k_subsets(arc_set, a) {
        out.push(ctx.closure(s));
    }
    let covered = out.iter().fold(Subset::EMPTY, |acc, f| acc.union(*f));
    if !ctx.live().is_subset_of(covered) {
        // Maximality of the arc means every live element either joined the
        // arc or failed the arc test, i.e. lies in the span of a elements of
        // the arc — hence in one of the closures above.
        return Err(Error::Invariant(format!(
            "arc cover missed {:?}",
            ctx.live().minus(covered)
        )));
    }
    Ok(dedup_sorted(out))
}

/// Would adding e keep `arc` an (a+1)-independent arc (every a+1 elements
/// independent)?
fn arc_accepts(ctx: &Minor, arc: &[usize], e: usize, a: usize) -> bool {
    if arc.contains(&e) {
        return false;
    }
    if arc.len() < a + 1 {
        let s = Subset::from_indices(arc.iter().copied()).with(e);
        return ctx.rank(s) == s.card();
    }
    // Every a-subset of the arc plus e must be independent.
    let arc_set = Subset::from_indices(arc.iter().copied());
    for s in crate::subset::k_subsets(arc_set, a) {
        if ctx.rank(s.with(e)) != a + 1 {
            return false;
        }
    }
    true
}
