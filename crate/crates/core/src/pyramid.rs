//! Pyramids: layered families over a spine, and the operations that shrink,
//! restrict, project, augment, and climb them.
//!
//! A pyramid holds a view M, a spine e_1..e_h of independent elements, a
//! family of rank-a sets skew to the spine, and parameters (a, q, h, d).
//! Writing M_i for M with the first i spine elements contracted, the layer
//! condition says: for every member S and every level i below h, the
//! M_{i+1}-similarity class of S within the family splits into at least q
//! distinct M_i-closures. Members must also be d-thick in M.
//!
//! All construction operations re-validate their output with
//! [`verify_pyramid`] before returning it; a construction whose result fails
//! validation reports the reason instead of returning a bad pyramid.

use crate::budget::Ticker;
use crate::cover::checked_pow;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::flats::enumerate_flats;
use crate::matroid::{Matroid, Minor};
use crate::structure::{is_d_firm, is_d_thick};
use crate::subset::Subset;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PyramidParams {
    pub a: usize,
    pub q: usize,
    pub h: usize,
    pub d: u64,
}

#[derive(Clone, Debug)]
pub struct Pyramid {
    pub ctx: Minor,
    pub family: SetFamily,
    /// Spine elements e_1..e_h, in order. Order matters: level i contracts
    /// the first i elements.
    pub spine: Vec<usize>,
    pub params: PyramidParams,
}

/// Outcome of validation: valid, or the first failed condition.
#[derive(Clone, Debug)]
pub struct PyramidCheck {
    pub valid: bool,
    pub reason: Option<String>,
}

impl PyramidCheck {
    fn ok() -> PyramidCheck {
        PyramidCheck { valid: true, reason: None }
    }

    fn fail(reason: impl Into<String>) -> PyramidCheck {
        PyramidCheck { valid: false, reason: Some(reason.into()) }
    }
}

impl Pyramid {
    pub fn new(ctx: Minor, family: SetFamily, spine: Vec<usize>, params: PyramidParams) -> Pyramid {
        Pyramid { ctx, family, spine, params }
    }

    pub fn spine_set(&self) -> Subset {
        Subset::from_indices(self.spine.iter().copied())
    }

    /// The level-i view M_i (first i spine elements contracted).
    pub fn level(&self, i: usize) -> Result<Minor> {
        let prefix = Subset::from_indices(self.spine[..i].iter().copied());
        self.ctx.contract(prefix)
    }
}

/// Validate every pyramid condition, reporting the first failure:
/// structure (spine length/distinctness/liveness, independence, nonempty
/// family), membership (rank a, disjoint from and skew to the spine), the
/// layer condition at every level, and d-thickness of every member.
pub fn verify_pyramid(p: &Pyramid) -> Result<PyramidCheck> {
    let PyramidParams { a, q, h, d } = p.params;
    if p.spine.len() != h {
        return Ok(PyramidCheck::fail(format!("spine has {} elements, h = {h}", p.spine.len())));
    }
    let live = p.ctx.live();
    let spine_set = p.spine_set();
    if spine_set.card() != h {
        return Ok(PyramidCheck::fail("spine elements are not distinct"));
    }
    if !spine_set.is_subset_of(live) {
        return Ok(PyramidCheck::fail("spine is not live"));
    }
    if p.ctx.rank(spine_set) != h {
        return Ok(PyramidCheck::fail("spine is dependent"));
    }
    if p.family.is_empty() {
        return Ok(PyramidCheck::fail("family is empty"));
    }
    for (i, s) in p.family.iter().enumerate() {
        if !s.is_subset_of(live) {
            return Ok(PyramidCheck::fail(format!("member {i} is not live")));
        }
        if !s.is_disjoint(spine_set) {
            return Ok(PyramidCheck::fail(format!("member {i} meets the spine")));
        }
        if p.ctx.rank(s) != a {
            return Ok(PyramidCheck::fail(format!("member {i} does not have rank {a}")));
        }
        if p.ctx.rank(s.union(spine_set)) != a + h {
            return Ok(PyramidCheck::fail(format!("member {i} is not skew to the spine")));
        }
    }
    // Layer condition.
    for i in 0..h {
        let mi = p.level(i)?;
        let mi1 = p.level(i + 1)?;
        let lower: Vec<Subset> = p.family.iter().map(|s| mi.closure(s)).collect();
        let upper: Vec<Subset> = p.family.iter().map(|s| mi1.closure(s)).collect();
        let mut split: HashMap<u64, std::collections::BTreeSet<u64>> = HashMap::new();
        for (lo, up) in lower.iter().zip(&upper) {
            split.entry(up.bits()).or_default().insert(lo.bits());
        }
        for (j, up) in upper.iter().enumerate() {
            if split[&up.bits()].len() < q {
                return Ok(PyramidCheck::fail(format!(
                    "member {j} splits into {} closures at level {i}, need {q}",
                    split[&up.bits()].len()
                )));
            }
        }
    }
    for (i, s) in p.family.iter().enumerate() {
        if !is_d_thick(&p.ctx, s, d)? {
            return Ok(PyramidCheck::fail(format!("member {i} is not {d}-thick")));
        }
    }
    Ok(PyramidCheck::ok())
}

fn require_valid(p: Pyramid, label: &str) -> Result<Pyramid> {
    let check = verify_pyramid(&p)?;
    if check.valid {
        Ok(p)
    } else {
        Err(Error::Construction(format!(
            "{label}: {}",
            check.reason.unwrap_or_else(|| "invalid".into())
        )))
    }
}

/// The standard example over projective geometry: in PG(h, q) (rank h+1),
/// take the spine to be the h unit-vector points u_0..u_{h−1} and the
/// family to be every singleton point whose last coordinate is nonzero.
/// There are q^h such points; at the top they are pairwise dissimilar, and
/// contracting each successive spine point merges closures q-to-1, giving a
/// (1, q, h, d)-pyramid for every d (singletons of a projective geometry are
/// thick to every order since their rank is 1).
pub fn pg_pyramid(q: u32, h: usize, d: u64) -> Result<Pyramid> {
    let m = Arc::new(Matroid::pg(h + 1, q)?);
    let rep = match m.kind() {
        crate::matroid::Kind::ProjectiveGeometry { rep } => rep.clone(),
        _ => unreachable!("pg builds projective geometry"),
    };
    let n = m.n();
    // Locate the unit-vector points u_0..u_{h-1} by scanning columns.
    let mut spine: Vec<usize> = Vec::with_capacity(h);
    for i in 0..h {
        let mut found = None;
        for c in 0..n {
            let col = rep.column(c);
            if col.iter().enumerate().all(|(r, &v)| v == u8::from(r == i)) {
                found = Some(c);
                break;
            }
        }
        spine.push(found.ok_or_else(|| Error::Invariant(format!("unit point {i} missing")))?);
    }
    // Family: singletons of the points with last coordinate nonzero.
    let mut family = SetFamily::empty();
    for c in 0..n {
        if rep.entry(h, c) != 0 {
            family.push(Subset::singleton(c));
        }
    }
    let params = PyramidParams { a: 1, q: q as usize, h, d };
    require_valid(Pyramid::new(Minor::of(m), family, spine, params), "pg pyramid")
}

/// Contract the spine segment [i, j), lowering the height by j − i. Members
/// keep rank a (they were skew to the spine) and the remaining levels keep
/// their splitting counts.
pub fn shrink_pyramid(p: &Pyramid, i: usize, j: usize) -> Result<Pyramid> {
    let h = p.params.h;
    if i > j || j > h {
        return Err(Error::SpineIndices { i, j, h });
    }
    if i == j {
        return require_valid(p.clone(), "shrink (identity)");
    }
    let segment = Subset::from_indices(p.spine[i..j].iter().copied());
    let ctx = p.ctx.contract(segment)?;
    let mut spine = p.spine[..i].to_vec();
    spine.extend_from_slice(&p.spine[j..]);
    let params = PyramidParams { h: h - (j - i), ..p.params };
    require_valid(Pyramid::new(ctx, p.family.clone(), spine, params), "shrink")
}

/// Restrict to the fiber of one member: keep the members sharing s's
/// M_h-closure, restricted to the span of s and the spine. The result is a
/// pyramid of the same height whose view has rank exactly a + h.
pub fn restrict_pyramid(p: &Pyramid, s: Subset) -> Result<Pyramid> {
    if !p.family.contains_member(s) {
        return Err(Error::NotAMember);
    }
    let mh = p.level(p.params.h)?;
    let target = mh.closure(s);
    let keep: Vec<usize> = (0..p.family.len())
        .filter(|&i| mh.closure(p.family.member(i)) == target)
        .collect();
    let span = p.ctx.closure(s.union(p.spine_set()));
    let ctx = p.ctx.restrict(span)?;
    let out = Pyramid::new(ctx, p.family.subfamily(&keep), p.spine.clone(), p.params);
    if out.ctx.rank_full() != p.params.a + p.params.h {
        return Err(Error::Construction(format!(
            "fiber restriction has rank {}, expected a + h = {}",
            out.ctx.rank_full(),
            p.params.a + p.params.h
        )));
    }
    require_valid(out, "fiber restriction")
}

/// Class-count accounting: the family has at least q^h times as many
/// similarity classes at the top as at level h.
#[derive(Clone, Debug)]
pub struct EpsCheck {
    pub eps_top: u64,
    pub eps_bottom: u64,
    pub factor: u64,
    pub ok: bool,
}

pub fn pyramid_size_check(p: &Pyramid) -> Result<EpsCheck> {
    let eps_top = p.family.epsilon(&p.ctx);
    let mh = p.level(p.params.h)?;
    let eps_bottom = p.family.epsilon(&mh);
    let factor = checked_pow(p.params.q as u64, p.params.h)?;
    let ok = eps_top >= factor.saturating_mul(eps_bottom);
    Ok(EpsCheck { eps_top, eps_bottom, factor, ok })
}

/// Shrink to height h', then restrict to the first member's fiber: a
/// height-h' pyramid whose view has rank a + h' and whose family has at
/// least q^{h'} similarity classes.
pub fn bound_pyramid(p: &Pyramid, h_prime: usize) -> Result<Pyramid> {
    let h = p.params.h;
    if h_prime > h {
        return Err(Error::SpineIndices { i: h_prime, j: h, h });
    }
    let shrunk = shrink_pyramid(p, h_prime, h)?;
    let first = shrunk.family.member(0);
    let out = restrict_pyramid(&shrunk, first)?;
    let eps = out.family.epsilon(&out.ctx);
    let need = checked_pow(out.params.q as u64, h_prime)?;
    if eps < need {
        return Err(Error::Construction(format!(
            "bounded pyramid has {eps} classes, expected at least q^h' = {need}"
        )));
    }
    Ok(out)
}

/// Project a pyramid onto a minor of its base. `n` must be a minor of
/// M/spine (same base matroid, contract set containing the view's contract
/// plus the spine). The projected view M' un-contracts the spine from n, so
/// M'/spine = n exactly. Survivors are the members that stay live, keep
/// rank a, stay skew to the spine, stay d-thick, and — iterating to a
/// greatest fixpoint — keep their layer splitting counts among survivors.
/// The given family must survive.
pub fn minor_project_pyramid(p: &Pyramid, n: &Minor, fam: &SetFamily) -> Result<Pyramid> {
    let PyramidParams { a, q, h, d } = p.params;
    if !n.same_base(&p.ctx) {
        return Err(Error::Input("projection target must share the base matroid".into()));
    }
    let spine_set = p.spine_set();
    if !p.ctx.contract_set().union(spine_set).is_subset_of(n.contract_set()) {
        return Err(Error::Input("target must contract the view's contract set and the spine".into()));
    }
    if !p.ctx.delete_set().is_subset_of(n.delete_set()) {
        return Err(Error::Input("target must delete the view's delete set".into()));
    }
    for m in fam.iter() {
        if !p.family.contains_member(m) {
            return Err(Error::NotAMember);
        }
    }
    let ctx = Minor::assemble(
        p.ctx.base().clone(),
        n.contract_set().minus(spine_set),
        n.delete_set(),
    )?;
    let live = ctx.live();
    // Pointwise survival.
    let mut alive: Vec<usize> = (0..p.family.len())
        .filter(|&i| {
            let s = p.family.member(i);
            s.is_subset_of(live) && ctx.rank(s) == a && ctx.rank(s.union(spine_set)) == a + h
        })
        .collect();
    let mut thick_alive = Vec::with_capacity(alive.len());
    for &i in &alive {
        if is_d_thick(&ctx, p.family.member(i), d)? {
            thick_alive.push(i);
        }
    }
    alive = thick_alive;
    // Greatest fixpoint of the layer condition among survivors.
    let levels: Vec<Minor> = (0..=h)
        .map(|i| {
            let prefix = Subset::from_indices(p.spine[..i].iter().copied());
            ctx.contract(prefix)
        })
        .collect::<Result<Vec<_>>>()?;
    loop {
        let mut drop_any = false;
        let mut keep: Vec<usize> = Vec::with_capacity(alive.len());
        'member: for &i in &alive {
            let s = p.family.member(i);
            for lvl in 0..h {
                let up = levels[lvl + 1].closure(s);
                let mut distinct = std::collections::BTreeSet::new();
                for &j in &alive {
                    let t = p.family.member(j);
                    if levels[lvl + 1].closure(t) == up {
                        distinct.insert(levels[lvl].closure(t).bits());
                    }
                }
                if distinct.len() < q {
                    drop_any = true;
                    continue 'member;
                }
            }
            keep.push(i);
        }
        alive = keep;
        if !drop_any {
            break;
        }
    }
    let survivor_sets: Vec<Subset> = alive.iter().map(|&i| p.family.member(i)).collect();
    for m in fam.iter() {
        if !survivor_sets.contains(&m) {
            return Err(Error::Construction(format!(
                "required member {m:?} does not survive the projection"
            )));
        }
    }
    let family = SetFamily::new(survivor_sets);
    require_valid(
        Pyramid::new(ctx, family, p.spine.clone(), PyramidParams { a, q, h, d }),
        "projection",
    )
}

/// Augment a height-h (a, q+1, h, d)-pyramid P living under the contraction
/// of e into a height-(h+1) (a, q+1, h+1, d)-pyramid with spine e followed
/// by P's spine. Every member of P must belong to a similarity class of
/// `fam` in m/e with more than q members; the extra members of each class
/// supply the q+1 distinct closures needed at the new bottom level.
pub fn augment_pyramid(
    m: &Minor,
    e: usize,
    fam: &SetFamily,
    q: usize,
    p: &Pyramid,
) -> Result<Pyramid> {
    let PyramidParams { a, q: pq, h, d } = p.params;
    if pq != q + 1 {
        return Err(Error::Input(format!("pyramid splitting {pq} must equal q + 1 = {}", q + 1)));
    }
    if !m.same_base(&p.ctx) {
        return Err(Error::Input("views must share a base matroid".into()));
    }
    let live_m = m.live();
    if !live_m.contains(e) {
        return Err(Error::NotLive(format!("{{{e}}}")));
    }
    if m.is_loop(e) {
        return Err(Error::Precondition(format!("element {e} is a loop")));
    }
    if !p.ctx.contract_set().contains(e) {
        return Err(Error::Input("pyramid view must contract the distinguished element".into()));
    }
    if !m.contract_set().with(e).is_subset_of(p.ctx.contract_set())
        || !m.delete_set().is_subset_of(p.ctx.delete_set())
    {
        return Err(Error::Input("pyramid view must be a minor of the ambient view plus e".into()));
    }
    let me = m.contract(Subset::singleton(e))?;
    for (i, x) in fam.iter().enumerate() {
        if !x.is_subset_of(live_m) {
            return Err(Error::NotLive(format!("member {i}")));
        }
        if x.contains(e) {
            return Err(Error::Precondition(format!("member {i} contains the distinguished element")));
        }
        if m.rank(x) != a {
            return Err(Error::Precondition(format!("member {i} does not have rank {a}")));
        }
    }
    if !fam.is_simple(m) {
        return Err(Error::Precondition("family must be simple in the ambient view".into()));
    }
    // Classes of fam in m/e with more than q members.
    let classes = fam.similarity_classes(&me);
    let rich: Vec<&crate::family::SimClass> =
        classes.iter().filter(|c| c.members.len() > q).collect();
    // Every pyramid member must belong to fam and to a rich class.
    let mut class_of: HashMap<u64, usize> = HashMap::new();
    for (ci, c) in rich.iter().enumerate() {
        for &mi in &c.members {
            class_of.insert(fam.member(mi).bits(), ci);
        }
    }
    for s in p.family.iter() {
        if !class_of.contains_key(&s.bits()) {
            return Err(Error::Precondition(format!(
                "pyramid member {s:?} is not in a class of more than {q} members"
            )));
        }
    }
    // The augmented view un-contracts e.
    let ctx = Minor::assemble(
        p.ctx.base().clone(),
        p.ctx.contract_set().without(e),
        p.ctx.delete_set(),
    )?;
    let mut spine = vec![e];
    spine.extend_from_slice(&p.spine);
    let spine_set = Subset::from_indices(spine.iter().copied());
    // Distinct rich classes touched by the pyramid's family, in first-touch
    // order; from each, greedily pick q+1 lifts with distinct closures in
    // the augmented view.
    let mut touched: Vec<usize> = Vec::new();
    for s in p.family.iter() {
        let ci = class_of[&s.bits()];
        if !touched.contains(&ci) {
            touched.push(ci);
        }
    }
    let mut family = SetFamily::empty();
    for &ci in &touched {
        let class = rich[ci];
        let mut closures: Vec<u64> = Vec::new();
        let mut picked = 0usize;
        for &mi in &class.members {
            let x = fam.member(mi);
            if !x.is_subset_of(ctx.live()) || ctx.rank(x) != a {
                continue;
            }
            if ctx.rank(x.union(spine_set)) != a + h + 1 {
                continue;
            }
            if !is_d_thick(&ctx, x, d)? {
                continue;
            }
            let cl = ctx.closure(x).bits();
            if closures.contains(&cl) {
                continue;
            }
            closures.push(cl);
            family.push(x);
            picked += 1;
            if picked == q + 1 {
                break;
            }
        }
        if picked < q + 1 {
            return Err(Error::Construction(format!(
                "class {ci} yields only {picked} usable lifts, need {}",
                q + 1
            )));
        }
    }
    let params = PyramidParams { a, q: q + 1, h: h + 1, d };
    require_valid(Pyramid::new(ctx, family, spine, params), "augmentation")
}

/// Result of [`climb_inductive`]: either one firm family of rank a+1 drawn
/// from the pyramid's members, or q lifted families, each d-firm of rank a,
/// pairwise dissimilar in the view, skew to the spine element, and similar
/// to the input family under contracting it.
#[derive(Clone, Debug)]
pub enum ClimbResult {
    FirmUp(SetFamily),
    Lifted(Vec<SetFamily>),
}

/// One inductive climb step on a height-1 pyramid.
///
/// Preconditions: the pyramid is valid with h = 1; the chosen family is a
/// subfamily of the pyramid's members, spans rank a under contracting the
/// spine element e, and is d^(q+2)-firm there.
///
/// First a flat scan looks for a ready-made firm family: members inside one
/// rank-(a+1) flat of the view spanning it and d-firm. Failing that, each
/// input member contributes q witnesses (members of its e-contraction class
/// with distinct closures in the view), and the witness families are pruned
/// index-wise through hyperplane violations until every one is firm of rank
/// a or a whole level reaches rank a+1 firmly.
pub fn climb_inductive(
    p: &Pyramid,
    fam: &SetFamily,
    a: usize,
    d: u64,
    budget: u64,
) -> Result<ClimbResult> {
    let PyramidParams { a: pa, q, h, d: _pd } = p.params;
    if h != 1 {
        return Err(Error::Input(format!("climb needs a height-1 pyramid, got h = {h}")));
    }
    if pa != a {
        return Err(Error::Input(format!("pyramid member rank {pa} differs from a = {a}")));
    }
    if d < 2 {
        return Err(Error::Input("firmness base d must be at least 2".into()));
    }
    let check = verify_pyramid(p)?;
    if !check.valid {
        return Err(Error::Precondition(format!(
            "pyramid invalid: {}",
            check.reason.unwrap_or_default()
        )));
    }
    if fam.is_empty() {
        return Err(Error::Input("family is empty".into()));
    }
    for x in fam.iter() {
        if !p.family.contains_member(x) {
            return Err(Error::NotAMember);
        }
    }
    let mut ticker = Ticker::new(budget);
    let m = &p.ctx;
    let e = p.spine[0];
    let me = m.contract(Subset::singleton(e))?;
    if me.rank(fam.union_all()) != a {
        return Err(Error::Precondition(format!(
            "family must span rank {a} under contracting the spine element"
        )));
    }
    let dq2 = checked_pow(d, q + 2)?;
    let firm_in_me = is_d_firm(&me, fam, dq2)?;
    if !firm_in_me.firm {
        return Err(Error::Precondition(format!("family is not d^(q+2) = {dq2}-firm in the contraction")));
    }
    // Flat scan: a rank-(a+1) flat whose pyramid members span it firmly.
    let lattice = enumerate_flats(m, a + 1)?;
    for &f in &lattice.by_rank[a + 1] {
        ticker.spend(1)?;
        let inside: Vec<usize> =
            (0..p.family.len()).filter(|&i| p.family.member(i).is_subset_of(f)).collect();
        if inside.is_empty() {
            continue;
        }
        let cand = p.family.subfamily(&inside);
        if m.rank(cand.union_all()) != a + 1 {
            continue;
        }
        if is_d_firm(m, &cand, d)?.firm {
            return Ok(ClimbResult::FirmUp(cand));
        }
    }
    // Witness lists: for each input member, q members of its e-contraction
    // class with pairwise distinct closures in the view. The pyramid's layer
    // condition guarantees they exist.
    let mut witnesses: Vec<Vec<Subset>> = Vec::with_capacity(fam.len());
    for x in fam.iter() {
        let target = me.closure(x);
        let mut wits: Vec<Subset> = Vec::new();
        let mut seen: Vec<u64> = Vec::new();
        for s in p.family.iter() {
            if me.closure(s) != target {
                continue;
            }
            let cl = m.closure(s).bits();
            if seen.contains(&cl) {
                continue;
            }
            seen.push(cl);
            wits.push(s);
            if wits.len() == q {
                break;
            }
        }
        if wits.len() < q {
            return Err(Error::Invariant(format!(
                "a member's class offers only {} distinct closures, need {q}",
                wits.len()
            )));
        }
        witnesses.push(wits);
    }
    // Indexed descent: level j uses witness j−1 of every surviving index.
    let mut live_idx: Vec<usize> = (0..fam.len()).collect();
    let mut out: Vec<SetFamily> = Vec::with_capacity(q);
    #[allow(clippy::needless_range_loop)] // j indexes the inner witness lists
    for j in 0..q {
        ticker.spend(1)?;
        let cj: SetFamily = live_idx.iter().map(|&i| witnesses[i][j]).collect();
        let r = m.rank(cj.union_all());
        if r == a + 1 {
            let fc = is_d_firm(m, &cj, d)?;
            if fc.firm {
                return climb_validate_firm_up(m, cj, a, d);
            }
            let next_idx: Vec<usize> = fc.witness.iter().map(|&w| live_idx[w]).collect();
            let xj = cj.subfamily(&fc.witness);
            out.push(xj);
            live_idx = next_idx;
        } else if r <= a {
            out.push(cj);
            // live_idx unchanged.
        } else {
            return Err(Error::Invariant(format!(
                "level {j} spans rank {r}, expected at most a + 1 = {}",
                a + 1
            )));
        }
        if live_idx.is_empty() {
            return Err(Error::Invariant("all indices eliminated during the descent".into()));
        }
    }
    climb_validate_lifted(m, &me, fam, out, a, d)
}

fn climb_validate_firm_up(m: &Minor, fam: SetFamily, a: usize, d: u64) -> Result<ClimbResult> {
    if m.rank(fam.union_all()) != a + 1 {
        return Err(Error::Invariant("firm-up family does not span rank a + 1".into()));
    }
    if !is_d_firm(m, &fam, d)?.firm {
        return Err(Error::Invariant("firm-up family is not firm".into()));
    }
    Ok(ClimbResult::FirmUp(fam))
}

fn climb_validate_lifted(
    m: &Minor,
    me: &Minor,
    fam: &SetFamily,
    out: Vec<SetFamily>,
    a: usize,
    d: u64,
) -> Result<ClimbResult> {
    let e = m.live().minus(me.live()).first().expect("contracted element");
    let target = me.closure(fam.union_all());
    let mut spans: Vec<u64> = Vec::with_capacity(out.len());
    for (j, xj) in out.iter().enumerate() {
        if xj.is_empty() {
            return Err(Error::Invariant(format!("lifted family {j} is empty")));
        }
        let u = xj.union_all();
        if m.rank(u) != a {
            return Err(Error::Invariant(format!("lifted family {j} does not span rank {a}")));
        }
        if m.rank(u.with(e)) != a + 1 {
            return Err(Error::Invariant(format!(
                "lifted family {j} is not skew to the spine element"
            )));
        }
        if !is_d_firm(m, xj, d)?.firm {
            return Err(Error::Invariant(format!("lifted family {j} is not firm")));
        }
        if me.closure(u) != target {
            return Err(Error::Invariant(format!(
                "lifted family {j} is not similar to the input under the contraction"
            )));
        }
        let span = m.closure(u).bits();
        if spans.contains(&span) {
            return Err(Error::Invariant(format!("lifted family {j} repeats an earlier span")));
        }
        spans.push(span);
    }
    Ok(ClimbResult::Lifted(out))
}
