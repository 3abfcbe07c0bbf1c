//! Constructive extraction routines: firm subfamilies, contraction choices,
//! and skew-or-concentrate splitting.
//!
//! Each routine follows a counting argument with explicit deterministic
//! tie-breaks (first index, lexicographically least element), asserts the
//! counting bound it relies on, and re-validates its output before returning.
//! A violated bound is reported as [`Error::Invariant`], never papered over.

use crate::cover::checked_pow;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::matroid::Minor;
use crate::structure::is_d_firm;
use crate::subset::Subset;

/// Extract a d-firm subfamily of rank above a from a family of rank-a sets
/// with at least d^(r−a) similarity classes, where r is the view's rank.
///
/// Simplify, then repeatedly: if the current family is d-firm and spans rank
/// above a, done; otherwise replace it by the largest hyperplane-bounded
/// subfamily, which keeps more than a 1/d fraction of the members while
/// strictly dropping the span's rank. The class-count hypothesis guarantees
/// the loop ends at rank above a.
pub fn firm_extract(ctx: &Minor, fam: &SetFamily, a: usize, d: u64) -> Result<SetFamily> {
    if d < 2 {
        return Err(Error::Input("firmness base d must be at least 2".into()));
    }
    let live = ctx.live();
    for (i, m) in fam.iter().enumerate() {
        if !m.is_subset_of(live) {
            return Err(Error::NotLive(format!("member {i}")));
        }
        if ctx.rank(m) != a {
            return Err(Error::Precondition(format!("member {i} does not have rank {a}")));
        }
    }
    let r = ctx.rank_full();
    if r <= a {
        return Err(Error::Precondition(format!("view rank {r} not above a={a}")));
    }
    let eps = fam.epsilon(ctx);
    let need = checked_pow(d, r - a)?;
    if eps < need {
        return Err(Error::Precondition(format!(
            "{eps} similarity classes, need at least d^(r-a) = {need}"
        )));
    }
    let mut cur = fam.simplify(ctx);
    loop {
        let span_rank = ctx.rank(cur.union_all());
        let check = is_d_firm(ctx, &cur, d)?;
        if check.firm {
            if span_rank > a {
                return Ok(cur);
            }
            // The counting argument keeps at least d^(span_rank - a) members
            // at every step; reaching span rank a with a firm family would
            // contradict it.
            return Err(Error::Invariant("firm family collapsed to rank a".into()));
        }
        let next = cur.subfamily(&check.witness);
        debug_assert!(ctx.rank(next.union_all()) < span_rank);
        cur = next;
    }
}

/// Relative version: the family lives in a minor n of m, has rank a in both,
/// and has many more similarity classes in m than in n. Normalizes the
/// contraction, picks the class of n-similar members that is richest in m,
/// and runs [`firm_extract`] inside the restriction spanned by that class and
/// the normalized contract set. The output is d-firm of rank above a in m.
pub fn firm_extract_relative(
    m: &Minor,
    n: &Minor,
    fam: &SetFamily,
    a: usize,
    d: u64,
) -> Result<SetFamily> {
    if d < 2 {
        return Err(Error::Input("firmness base d must be at least 2".into()));
    }
    if !m.same_base(n) {
        return Err(Error::Input("views must share a base matroid".into()));
    }
    if !m.contract_set().is_subset_of(n.contract_set())
        || !m.delete_set().is_subset_of(n.delete_set())
    {
        return Err(Error::Input("second view must be a minor of the first".into()));
    }
    let live_n = n.live();
    for (i, x) in fam.iter().enumerate() {
        if !x.is_subset_of(live_n) {
            return Err(Error::NotLive(format!("member {i}")));
        }
        if m.rank(x) != a || n.rank(x) != a {
            return Err(Error::Precondition(format!("member {i} does not have rank {a} in both views")));
        }
    }
    // Normalize: replace the relative contract set by an independent set C'
    // with the same span behaviour. C0 = greedy basis of the contracted
    // part; B extends it from the deleted part until C' ∪ live(n) spans m.
    let rel_contract = n.contract_set().minus(m.contract_set());
    let rel_delete = n.delete_set().minus(m.delete_set());
    let c0 = Subset::from_indices(m.greedy_basis(rel_contract));
    let mut cprime = c0;
    let base_span = c0.union(live_n);
    let mut cur_rank = m.rank(base_span);
    for e in rel_delete.iter() {
        if m.rank(base_span.union(cprime).with(e)) > cur_rank {
            cprime = cprime.with(e);
            cur_rank += 1;
        }
    }
    let k = m.rank_full() - n.rank_full();
    debug_assert_eq!(m.rank(cprime), cprime.card());
    debug_assert_eq!(cprime.card(), k, "normalized contract set has the rank drop's size");
    // Hypothesis: many more classes in m than in n, by a factor above d^k.
    let eps_m = fam.epsilon(m);
    let eps_n = fam.epsilon(n);
    let dk = checked_pow(d, k)?;
    if eps_m <= dk.saturating_mul(eps_n) {
        return Err(Error::Precondition(format!(
            "{eps_m} classes in the view vs {eps_n} in the minor: need a factor above d^k = {dk}"
        )));
    }
    // Pick the first n-similarity class whose members split into more than
    // d^k classes in m; one exists by averaging.
    let classes = fam.similarity_classes(n);
    let mut picked: Option<SetFamily> = None;
    for class in &classes {
        let sub = fam.subfamily(&class.members);
        if sub.epsilon(m) > dk {
            picked = Some(sub);
            break;
        }
    }
    let sub = picked.ok_or_else(|| {
        Error::Invariant("no class splits beyond d^k despite the average".into())
    })?;
    // All members of the class lie in cl_m(X ∪ C') for its first member X.
    let x0 = sub.member(0);
    let span = m.closure(x0.union(cprime));
    for (i, y) in sub.iter().enumerate() {
        if !y.is_subset_of(span) {
            return Err(Error::Invariant(format!("class member {i} escapes the class span")));
        }
    }
    let rest = m.restrict(span)?;
    let out = firm_extract(&rest, &sub, a, d)?;
    // Firmness and rank transfer verbatim from the restriction to m.
    let check = is_d_firm(m, &out, d)?;
    if !check.firm || m.rank(out.union_all()) <= a {
        return Err(Error::Invariant("extracted family lost firmness in the outer view".into()));
    }
    Ok(out)
}

/// The outcome of [`pick_contract`]: a nonloop element whose contraction
/// keeps most similarity classes at rank a.
#[derive(Clone, Debug)]
pub struct ContractChoice {
    pub element: usize,
    /// Greedy lexicographically-least basis the element was drawn from.
    pub basis: Vec<usize>,
    /// For each basis element, how many simplified members span it.
    pub counts: Vec<u64>,
    /// Indices (into the input family) of members whose rank survives the
    /// contraction.
    pub survivors: Vec<usize>,
    pub eps_before: u64,
    pub eps_after: u64,
}

/// Choose a basis element e minimizing the number of simplified members
/// whose closure contains e. Contracting e keeps every similarity class
/// whose closure avoids e, and by averaging over the basis that is at least
/// a (1 − a/r) fraction of the classes.
pub fn pick_contract(ctx: &Minor, fam: &SetFamily) -> Result<ContractChoice> {
    if fam.is_empty() {
        return Err(Error::Input("family is empty".into()));
    }
    let live = ctx.live();
    let a = ctx.rank(fam.member(0));
    for (i, x) in fam.iter().enumerate() {
        if !x.is_subset_of(live) {
            return Err(Error::NotLive(format!("member {i}")));
        }
        if ctx.rank(x) != a {
            return Err(Error::Precondition(format!("member {i} does not have rank {a}")));
        }
    }
    let r = ctx.rank_full();
    if r == 0 {
        return Err(Error::AllLoops);
    }
    let simple = fam.simple_indices(ctx);
    let closures: Vec<Subset> = simple.iter().map(|&i| ctx.closure(fam.member(i))).collect();
    let basis = ctx.greedy_basis(live);
    debug_assert_eq!(basis.len(), r);
    let counts: Vec<u64> = basis
        .iter()
        .map(|&f| closures.iter().filter(|cl| cl.contains(f)).count() as u64)
        .collect();
    let best = counts
        .iter()
        .enumerate()
        .min_by_key(|&(i, c)| (*c, i))
        .map(|(i, _)| i)
        .expect("basis nonempty");
    let element = basis[best];
    let survivors: Vec<usize> = (0..fam.len())
        .filter(|&i| !ctx.closure(fam.member(i)).contains(element))
        .collect();
    let eps_before = fam.epsilon(ctx);
    let eps_after = fam.subfamily(&survivors).epsilon(ctx);
    // Averaging bound, cross-multiplied to stay in integers:
    // eps_after >= (1 - a/r) * eps_before.
    if eps_after * (r as u64) < eps_before * ((r - a) as u64) {
        return Err(Error::Invariant(format!(
            "survivor classes {eps_after} fall below ({} / {r}) of {eps_before}",
            r - a
        )));
    }
    Ok(ContractChoice { element, basis, counts, survivors, eps_before, eps_after })
}

/// Outcome of [`find_skew`]: either t mutually skew members, or a
/// concentration — a contraction in which a sizable subfamily shares one
/// spanning element.
#[derive(Clone, Debug)]
pub enum SkewOutcome {
    /// Indices of t mutually skew members, in family order.
    SkewFamily(Vec<usize>),
    Concentration(Concentration),
}

#[derive(Clone, Debug)]
pub struct Concentration {
    /// Elements contracted (a prefix of the skew union's greedy basis).
    pub contracted: Vec<usize>,
    /// The contracted view.
    pub view: Minor,
    /// The next basis element: in the view's closure of every member below.
    pub element: usize,
    /// Indices (into the input family) of members that keep rank a in the
    /// view and span `element` there. Members are read in the view by the
    /// usual minor convention: a member X stands for X minus the contracted
    /// elements.
    pub members: Vec<usize>,
}

/// Find t mutually skew members, or concentrate the family.
///
/// Greedily collect a maximal prefix-skew subfamily W. If it reaches t,
/// done. Otherwise contract the greedy basis e_1, e_2, ... of W's union one
/// element at a time; every member loses rank at some first step i (members
/// of W included, and non-members because W was maximal and rank drop is
/// monotone under contraction). Taking the most common first step i0 gives
/// a subfamily of at least |fam| / (a·t) members, each of rank a in the view
/// contracted to just before i0 and spanning e_{i0} there.
pub fn find_skew(ctx: &Minor, fam: &SetFamily, a: usize, t: usize) -> Result<SkewOutcome> {
    if t == 0 {
        return Err(Error::Input("need t >= 1".into()));
    }
    if a == 0 {
        return Err(Error::Input("need member rank a >= 1".into()));
    }
    if fam.is_empty() {
        return Err(Error::Input("family is empty".into()));
    }
    let live = ctx.live();
    for (i, x) in fam.iter().enumerate() {
        if !x.is_subset_of(live) {
            return Err(Error::NotLive(format!("member {i}")));
        }
        if ctx.rank(x) != a {
            return Err(Error::Precondition(format!("member {i} does not have rank {a}")));
        }
    }
    // Greedy prefix-skew collection.
    let mut w: Vec<usize> = Vec::new();
    let mut union = Subset::EMPTY;
    for (i, x) in fam.iter().enumerate() {
        if ctx.rank(union.union(x)) == ctx.rank(union) + a {
            w.push(i);
            union = union.union(x);
            if w.len() == t {
                return Ok(SkewOutcome::SkewFamily(w));
            }
        }
    }
    let k = w.len();
    debug_assert!(k >= 1, "the first member is always skew to nothing");
    let basis = ctx.greedy_basis(union);
    debug_assert_eq!(basis.len(), a * k, "mutually skew members have additive rank");
    // First rank-dropping step for each member: least j with
    // r(X ∪ prefix_j) − j < a, where prefix_j = first j basis elements.
    let mut first_drop: Vec<usize> = Vec::with_capacity(fam.len());
    for x in fam.iter() {
        let mut prefix = Subset::EMPTY;
        let mut drop = None;
        for (j, &e) in basis.iter().enumerate() {
            prefix = prefix.with(e);
            if ctx.rank(x.union(prefix)) - (j + 1) < a {
                drop = Some(j + 1);
                break;
            }
        }
        let j = drop.ok_or_else(|| {
            Error::Invariant(
                "a member kept full rank under contracting the whole skew union".into(),
            )
        })?;
        first_drop.push(j);
    }
    // Most common first step, earliest index on ties.
    let mut counts: Vec<usize> = vec![0; a * k + 1];
    for &j in &first_drop {
        counts[j] += 1;
    }
    let i0 = counts
        .iter()
        .enumerate()
        .skip(1)
        .max_by_key(|&(j, c)| (*c, usize::MAX - j))
        .map(|(j, _)| j)
        .expect("counts nonempty");
    let contracted: Vec<usize> = basis[..i0 - 1].to_vec();
    let element = basis[i0 - 1];
    let view = ctx.contract(Subset::from_indices(contracted.iter().copied()))?;
    let members: Vec<usize> =
        (0..fam.len()).filter(|&i| first_drop[i] == i0).collect();
    // Counting bound: the members split over at most a·k <= a·t steps.
    if members.len() * a * t < fam.len() {
        return Err(Error::Invariant(format!(
            "concentration keeps {} of {} members, below 1/(a t)",
            members.len(),
            fam.len()
        )));
    }
    // Validate the concentration's defining properties (minor convention:
    // read each member as the member minus the contracted elements).
    let cset = Subset::from_indices(contracted.iter().copied());
    for &i in &members {
        let x = fam.member(i).minus(cset);
        if view.rank(x) != a {
            return Err(Error::Invariant(format!("member {i} lost rank in the view")));
        }
        if !view.closure(x).contains(element) {
            return Err(Error::Invariant(format!("member {i} does not span the element")));
        }
    }
    Ok(SkewOutcome::Concentration(Concentration { contracted, view, element, members }))
}
