//! Thickness, firmness, scatteredness, and uniform-minor detection.

use crate::budget::Ticker;
use crate::cover::{binomial, checked_pow, dmin_cover_family, tau_a, weight_of_flats};
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::flats::{enumerate_flats, hyperplanes};
use crate::matroid::Minor;
use crate::subset::{k_subsets, Subset};
use crate::verdict::Verdict;
use std::collections::BTreeSet;

/// Thickness of a set: the covering number tau_{r−1} of its restriction,
/// where r is the set's rank. Rank-0 and rank-1 sets cannot be separated by
/// lower-rank flats at all, so their thickness is unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Thickness {
    Finite(u64),
    Unbounded,
}

impl Thickness {
    /// Is the thickness at least d?
    pub fn at_least(self, d: u64) -> bool {
        match self {
            Thickness::Unbounded => true,
            Thickness::Finite(t) => t >= d,
        }
    }
}

pub fn thickness(ctx: &Minor, x: Subset) -> Result<Thickness> {
    let r = ctx.rank(x);
    if r <= 1 {
        return Ok(Thickness::Unbounded);
    }
    let rest = ctx.restrict(x)?;
    let (t, _) = tau_a(&rest, r - 1)?;
    Ok(Thickness::Finite(t))
}

pub fn is_d_thick(ctx: &Minor, x: Subset, d: u64) -> Result<bool> {
    Ok(thickness(ctx, x)?.at_least(d))
}

/// Result of a firmness check. When the family is not d-firm, `witness`
/// holds the indices of a maximal low-rank subfamily exceeding the allowed
/// fraction (all members inside one hyperplane of the span).
#[derive(Clone, Debug)]
pub struct FirmCheck {
    pub firm: bool,
    pub witness: Vec<usize>,
}

/// Is the family d-firm: no subfamily of proper rank (rank below the
/// family's span) contains more than a 1/d fraction of the members?
///
/// Every proper-rank subfamily lies inside a hyperplane of the restriction
/// to the family's span, and conversely, so it suffices to count members
/// inside each hyperplane and compare the maximum against |family| / d.
pub fn is_d_firm(ctx: &Minor, fam: &SetFamily, d: u64) -> Result<FirmCheck> {
    if d == 0 {
        return Err(Error::Input("firmness base d must be at least 1".into()));
    }
    if fam.is_empty() {
        return Ok(FirmCheck { firm: true, witness: Vec::new() });
    }
    let live = ctx.live();
    let union = fam.union_all();
    if !union.is_subset_of(live) {
        return Err(Error::NotLive(format!("{:?}", union.minus(live))));
    }
    let span = ctx.closure(union);
    let rest = ctx.restrict(span)?;
    if rest.rank_full() == 0 {
        // Every subfamily has the full (zero) rank; nothing can violate.
        return Ok(FirmCheck { firm: true, witness: Vec::new() });
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for h in hyperplanes(&rest)? {
        let inside: Vec<usize> =
            (0..fam.len()).filter(|&i| fam.member(i).is_subset_of(h)).collect();
        if best.as_ref().is_none_or(|(c, _)| inside.len() > *c) {
            best = Some((inside.len(), inside));
        }
    }
    let (count, witness) = best.unwrap_or((0, Vec::new()));
    if (count as u64).saturating_mul(d) > fam.len() as u64 {
        Ok(FirmCheck { firm: false, witness })
    } else {
        Ok(FirmCheck { firm: true, witness: Vec::new() })
    }
}

/// Result of a scatteredness check, with the two weights compared.
#[derive(Clone, Debug)]
pub struct ScatterCheck {
    pub scattered: bool,
    pub closure_weight: u64,
    pub cover_weight: u64,
    pub thin_member: Option<usize>,
}

/// Is the family d-scattered: every member d-thick, and the family of
/// distinct member closures is itself a minimum-weight d-cover of the family
/// (no cheaper flat cover merges members)?
pub fn is_d_scattered(ctx: &Minor, fam: &SetFamily, d: u64) -> Result<ScatterCheck> {
    if d == 0 {
        return Err(Error::Input("weight base d must be at least 1".into()));
    }
    for (i, m) in fam.iter().enumerate() {
        if !is_d_thick(ctx, m, d)? {
            return Ok(ScatterCheck {
                scattered: false,
                closure_weight: 0,
                cover_weight: 0,
                thin_member: Some(i),
            });
        }
    }
    let closures: BTreeSet<Subset> = fam.iter().map(|m| ctx.closure(m)).collect();
    let closure_list: Vec<Subset> = closures.into_iter().collect();
    let closure_weight = weight_of_flats(ctx, &closure_list, d)?;
    let (cover_weight, _) = dmin_cover_family(ctx, fam, d, false)?;
    Ok(ScatterCheck {
        scattered: closure_weight == cover_weight,
        closure_weight,
        cover_weight,
        thin_member: None,
    })
}

/// Witness for a U_{a,b}-style minor: after contracting `contract`, the
/// elements of `arc` lie in a rank-(a+1) flat and every a+1 of them are
/// independent, so restricting to the arc and truncating yields the uniform
/// pattern.
#[derive(Clone, Debug)]
pub struct UniformMinorWitness {
    pub contract: Subset,
    pub arc: Subset,
    pub a: usize,
    pub b: usize,
}

impl UniformMinorWitness {
    /// Re-verify the witness against a view from scratch.
    pub fn verify(&self, ctx: &Minor) -> Result<()> {
        let c = self.contract;
        if ctx.rank(c) != c.card() {
            return Err(Error::Invariant("witness contract set is dependent".into()));
        }
        let view = ctx.contract(c)?;
        if self.arc.card() != self.b {
            return Err(Error::Invariant("witness arc has wrong size".into()));
        }
        if view.rank(self.arc) != self.a + 1 {
            return Err(Error::Invariant("witness arc has wrong rank".into()));
        }
        for s in k_subsets(self.arc, self.a + 1) {
            if view.rank(s) != self.a + 1 {
                return Err(Error::Invariant("witness arc has a dependent (a+1)-subset".into()));
            }
        }
        Ok(())
    }
}

/// Search for a rank-(a+1) arc of b elements in some contraction of the
/// view: a set X with |X| = b, r(X) = a+1 after contracting an independent
/// set C, and every a+1 elements of X independent. Such an X certifies a
/// U_{a+1,b} minor up to truncation and parallel cleanup.
///
/// The search is exhaustive up to the node budget: contractions in
/// (size, lexicographic) order, candidate flats in lattice order, arc
/// extension by ascending element. Budget exhaustion is an error; a clean
/// sweep returning `None` means no such arc exists.
pub fn has_uniform_minor(
    ctx: &Minor,
    a: usize,
    b: usize,
    budget: u64,
) -> Result<Option<UniformMinorWitness>> {
    if a == 0 || b <= a + 1 {
        return Err(Error::Input("need a >= 1 and b > a + 1".into()));
    }
    let mut ticker = Ticker::new(budget);
    let r = ctx.rank_full();
    if r < a + 1 {
        return Ok(None);
    }
    let max_contract = r - (a + 1);
    let live = ctx.live();
    let mut stack: Vec<usize> = Vec::new();
    for size in 0..=max_contract {
        let mut found: Option<UniformMinorWitness> = None;
        search_contracts(ctx, live, a, b, size, 0, &mut stack, &mut ticker, &mut found)?;
        if let Some(w) = found {
            w.verify(ctx)?;
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn search_contracts(
    ctx: &Minor,
    live: Subset,
    a: usize,
    b: usize,
    size: usize,
    from: usize,
    stack: &mut Vec<usize>,
    ticker: &mut Ticker,
    found: &mut Option<UniformMinorWitness>,
) -> Result<()> {
    if found.is_some() {
        return Ok(());
    }
    if stack.len() == size {
        let c = Subset::from_indices(stack.iter().copied());
        ticker.spend(1)?;
        if let Some(arc) = arc_in_contraction(ctx, c, a, b, ticker)? {
            *found = Some(UniformMinorWitness { contract: c, arc, a, b });
        }
        return Ok(());
    }
    let c = Subset::from_indices(stack.iter().copied());
    for e in live.iter() {
        if e < from || c.contains(e) {
            continue;
        }
        // Keep the contract set independent: dependent contractions give the
        // same minor as an independent subset already tried.
        if ctx.rank(c.with(e)) != c.card() + 1 {
            continue;
        }
        stack.push(e);
        search_contracts(ctx, live, a, b, size, e + 1, stack, ticker, found)?;
        stack.pop();
        if found.is_some() {
            return Ok(());
        }
    }
    Ok(())
}

/// Look for a b-element (a+1)-arc inside one rank-(a+1) flat of ctx/c.
fn arc_in_contraction(
    ctx: &Minor,
    c: Subset,
    a: usize,
    b: usize,
    ticker: &mut Ticker,
) -> Result<Option<Subset>> {
    let view = ctx.contract(c)?;
    if view.rank_full() < a + 1 {
        return Ok(None);
    }
    let lattice = enumerate_flats(&view, a + 1)?;
    for &f in &lattice.by_rank[a + 1] {
        if f.card() < b {
            continue;
        }
        ticker.spend(1)?;
        let mut arc: Vec<usize> = Vec::new();
        if grow_arc(&view, f, a, b, 0, &mut arc, ticker)? {
            return Ok(Some(Subset::from_indices(arc.iter().copied())));
        }
    }
    Ok(None)
}

fn grow_arc(
    view: &Minor,
    flat: Subset,
    a: usize,
    b: usize,
    from: usize,
    arc: &mut Vec<usize>,
    ticker: &mut Ticker,
) -> Result<bool> {
    if arc.len() == b {
        return Ok(true);
    }
    // Not enough elements left to reach b.
    let remaining = flat.iter().filter(|&e| e >= from).count();
    if arc.len() + remaining < b {
        return Ok(false);
    }
    for e in flat.iter() {
        if e < from {
            continue;
        }
        ticker.spend(1)?;
        if arc_extends(view, arc, e, a) {
            arc.push(e);
            if grow_arc(view, flat, a, b, e + 1, arc, ticker)? {
                return Ok(true);
            }
            arc.pop();
        }
    }
    Ok(false)
}

fn arc_extends(view: &Minor, arc: &[usize], e: usize, a: usize) -> bool {
    let cur = Subset::from_indices(arc.iter().copied());
    if arc.len() <= a {
        let s = cur.with(e);
        return view.rank(s) == s.card();
    }
    for s in k_subsets(cur, a) {
        if view.rank(s.with(e)) != a + 1 {
            return false;
        }
    }
    true
}

/// Check one instance of the implication "binomial(b,a)-thick and rank above
/// a implies a uniform-style minor": decide the hypothesis, then search for
/// the witness if it applies.
pub fn check_thick_implies_uniform(
    ctx: &Minor,
    a: usize,
    b: usize,
    budget: u64,
) -> Result<(Verdict, Option<UniformMinorWitness>)> {
    if a == 0 || b <= a + 1 {
        return Err(Error::Input("need a >= 1 and b > a + 1".into()));
    }
    let live = ctx.live();
    if live.is_empty() || ctx.rank_full() <= a {
        return Ok((Verdict::Vacuous, None));
    }
    let threshold = binomial(b as u64, a as u64)?;
    let thick = thickness(ctx, live)?;
    if !thick.at_least(threshold) {
        return Ok((Verdict::Vacuous, None));
    }
    match has_uniform_minor(ctx, a, b, budget) {
        Ok(Some(w)) => Ok((Verdict::Pass, Some(w))),
        Ok(None) => Ok((Verdict::Fail, None)),
        Err(Error::BudgetExhausted { .. }) => Ok((Verdict::BudgetExceeded, None)),
        Err(e) => Err(e),
    }
}

/// Weight d^{r(F)} of the closure of a single set — convenience used by the
/// scatteredness reports.
pub fn closure_weight(ctx: &Minor, x: Subset, d: u64) -> Result<u64> {
    checked_pow(d, ctx.rank(x))
}
