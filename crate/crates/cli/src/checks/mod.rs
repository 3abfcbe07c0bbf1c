//! Per-lemma check implementations and their shared plumbing.
//!
//! Each task runs one lemma group against one instance and returns report
//! records. Randomized cells derive their generator from the suite seed, the
//! lemma-group name, and the instance id with a fixed stable hash, so results
//! do not depend on worker count or task order.

pub mod covers;
pub mod families;
pub mod pyramids;

use mcov_core::matroid::Minor;
use mcov_core::{SetFamily, Subset, Verdict};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::time::Instant;

/// Every lemma id the suite can emit, in report order.
pub const LEMMAS: [&str; 22] = [
    "contract-survivors",
    "cover-bound",
    "cover-bound-contract",
    "cover-bound-minor",
    "cover-scattered",
    "density-firm",
    "density-firm-minor",
    "firm-union-thick",
    "pyramid-augment",
    "pyramid-bound",
    "pyramid-climb",
    "pyramid-project",
    "pyramid-restrict",
    "pyramid-shrink",
    "pyramid-size",
    "scattered-density",
    "skew-or-concentrate",
    "thick-implies-uniform",
    "thickness-minor",
    "trivial-min-cover-density",
    "weighted-cover-minor",
    "weighted-vs-rank-cover",
];

/// The lemma ids a run should report. Built from `--lemma` flags; empty
/// filters are rejected upstream, so this is always a nonempty set.
#[derive(Clone, Debug)]
pub struct Wanted(BTreeSet<&'static str>);

impl Wanted {
    pub fn all() -> Wanted {
        Wanted(LEMMAS.iter().copied().collect())
    }

    /// Resolve user-supplied ids against the known list.
    pub fn from_ids<'a, I: IntoIterator<Item = &'a str>>(ids: I) -> Result<Wanted, String> {
        let mut set = BTreeSet::new();
        for id in ids {
            match LEMMAS.iter().find(|l| **l == id) {
                Some(l) => {
                    set.insert(*l);
                }
                None => return Err(format!("unknown lemma id: {id}")),
            }
        }
        if set.is_empty() {
            Ok(Wanted::all())
        } else {
            Ok(Wanted(set))
        }
    }

    pub fn has(&self, lemma: &str) -> bool {
        self.0.contains(lemma)
    }

    pub fn any<'a, I: IntoIterator<Item = &'a str>>(&self, ids: I) -> bool {
        ids.into_iter().any(|l| self.has(l))
    }
}

/// Stable FNV-1a hash; the standard library hasher is not stable across
/// releases, and the report must be reproducible from the seed alone.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Deterministic generator for one (lemma group, instance) task.
pub fn task_rng(seed: u64, group: &str, instance: &str) -> ChaCha8Rng {
    let mix = seed ^ fnv1a(group.as_bytes()).rotate_left(17) ^ fnv1a(instance.as_bytes());
    ChaCha8Rng::seed_from_u64(mix)
}

/// Wall-clock timer that reads zero when timing is disabled, keeping the
/// report byte-identical across runs by default.
pub struct CellTimer {
    enabled: bool,
    start: Instant,
}

impl CellTimer {
    pub fn start(enabled: bool) -> CellTimer {
        CellTimer { enabled, start: Instant::now() }
    }

    pub fn millis(&self) -> u64 {
        if self.enabled {
            self.start.elapsed().as_millis() as u64
        } else {
            0
        }
    }
}

/// Fold per-trial outcomes into one record verdict. Failure dominates;
/// budget exhaustion outranks success; a cell with no effective trials is
/// vacuous.
pub struct Fold {
    verdict: Verdict,
    witness: Option<String>,
}

impl Fold {
    pub fn new() -> Fold {
        Fold { verdict: Verdict::Vacuous, witness: None }
    }

    pub fn pass(&mut self) {
        if self.verdict == Verdict::Vacuous {
            self.verdict = Verdict::Pass;
        }
    }

    pub fn fail(&mut self, witness: String) {
        if self.verdict != Verdict::Fail {
            self.verdict = Verdict::Fail;
            self.witness = Some(witness);
        }
    }

    pub fn budget(&mut self) {
        if matches!(self.verdict, Verdict::Vacuous | Verdict::Pass) {
            self.verdict = Verdict::BudgetExceeded;
        }
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    pub fn into_parts(self) -> (Verdict, Option<String>) {
        (self.verdict, self.witness)
    }
}

impl Default for Fold {
    fn default() -> Fold {
        Fold::new()
    }
}

/// Random subset of `pool` with exactly `size` elements.
pub fn random_subset(rng: &mut ChaCha8Rng, pool: Subset, size: usize) -> Subset {
    let mut elems = pool.to_vec();
    elems.shuffle(rng);
    elems.truncate(size.min(elems.len()));
    Subset::from_indices(elems)
}

/// Random independent set of rank exactly `a` in the view, or None when the
/// view's rank is below `a`.
pub fn random_independent(rng: &mut ChaCha8Rng, ctx: &Minor, a: usize) -> Option<Subset> {
    if ctx.rank_full() < a {
        return None;
    }
    let mut elems = ctx.live().to_vec();
    elems.shuffle(rng);
    let mut picked = Subset::EMPTY;
    for e in elems {
        if picked.card() == a {
            break;
        }
        let cand = picked.with(e);
        if ctx.rank(cand) == cand.card() {
            picked = cand;
        }
    }
    if picked.card() == a {
        Some(picked)
    } else {
        None
    }
}

/// Random family of `members` rank-`a` sets; half are closed into flats.
/// Duplicates are possible and harmless.
pub fn random_rank_a_family(
    rng: &mut ChaCha8Rng,
    ctx: &Minor,
    a: usize,
    members: usize,
) -> Option<SetFamily> {
    let mut fam = SetFamily::empty();
    for i in 0..members {
        let ind = random_independent(rng, ctx, a)?;
        if i % 2 == 0 {
            fam.push(ctx.closure(ind));
        } else {
            fam.push(ind);
        }
    }
    if fam.is_empty() {
        None
    } else {
        Some(fam)
    }
}

/// One minor step that provably preserves the covering inequalities being
/// checked: contract any element, or delete an element that is a loop or has
/// a parallel partner among the survivors. (A cover of the smaller matroid
/// lifts through the closure operator of the larger one; general deletions
/// admit counterexamples and are excluded.)
pub fn safe_minor_step(rng: &mut ChaCha8Rng, view: &Minor) -> Option<Minor> {
    let live = view.live();
    if live.card() <= 1 {
        return None;
    }
    let elems = live.to_vec();
    let e = *elems.choose(rng)?;
    if view.is_loop(e) {
        // Contracting a loop equals deleting it; either way ranks and covers
        // are unchanged.
        return view.contract(Subset::singleton(e)).ok();
    }
    let try_delete = rng.gen_bool(0.5);
    if try_delete {
        let has_partner = live.iter().any(|f| {
            f != e
                && !view.is_loop(f)
                && view.rank(Subset::singleton(e).with(f)) == 1
        });
        if has_partner {
            return view.delete(Subset::singleton(e)).ok();
        }
    }
    view.contract(Subset::singleton(e)).ok()
}

/// A chain of up to `steps` safe minor steps; may stop early when the live
/// set runs out. Returns the intermediate views, longest last.
pub fn safe_minor_chain(rng: &mut ChaCha8Rng, ctx: &Minor, steps: usize) -> Vec<Minor> {
    let mut out = Vec::new();
    let mut cur = ctx.clone();
    for _ in 0..steps {
        match safe_minor_step(rng, &cur) {
            Some(next) => {
                out.push(next.clone());
                cur = next;
            }
            None => break,
        }
    }
    out
}

/// A uniformly random minor: contract a small random set, delete another.
/// Used where the claim under test holds for arbitrary minors.
pub fn random_minor(rng: &mut ChaCha8Rng, ctx: &Minor, avoid: Subset) -> Option<Minor> {
    let pool = ctx.live().minus(avoid);
    if pool.is_empty() {
        return None;
    }
    let c_size = rng.gen_range(0..=pool.card().min(2));
    let c = random_subset(rng, pool, c_size);
    let rest = pool.minus(c);
    let d_size = rng.gen_range(0..=rest.card().min(2));
    let d = random_subset(rng, rest, d_size);
    if c.is_empty() && d.is_empty() {
        return None;
    }
    ctx.minor(c, d).ok()
}

/// Render a family for a witness file, with the context sets spelled out.
pub fn describe_family(ctx: &Minor, fam: &SetFamily) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "contract={:?} delete={:?}\n",
        ctx.contract_set(),
        ctx.delete_set()
    ));
    for m in fam.iter() {
        s.push_str(&format!("{m:?}\n"));
    }
    s
}
