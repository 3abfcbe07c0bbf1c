//! Cover-side checks: the covering-number bound over the (a, b) grid, the
//! weighted/unweighted cover comparison, minor monotonicity of weighted
//! covers, density of trivially-covered families, and scatteredness of
//! optimal covers.

use super::{
    random_rank_a_family, safe_minor_chain, task_rng, CellTimer, Fold, Wanted,
};
use crate::report::CheckRecord;
use mcov_core::cover::{
    binomial, checked_pow, cover_kd, dmin_cover_family, tau_a, tau_weighted,
    validate_element_cover, FlatCover,
};
use mcov_core::flats::enumerate_flats;
use mcov_core::io::{write_cover, write_family};
use mcov_core::matroid::Minor;
use mcov_core::structure::{is_d_scattered, is_d_thick};
use mcov_core::{Error, SetFamily, Subset, Verdict};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;

/// Outer grid: 1 <= a <= 3, a + 2 <= b <= 9.
const A_MAX: usize = 3;
const B_MAX: usize = 9;

/// Detector outcome for one (a, b) cell, shared between the grid lemmas.
#[derive(Clone)]
enum Cell {
    Present,
    Absent,
    Budget,
    Broken(String),
}

/// Uniform-minor detector with the monotone shortcut: absence of a
/// U_{a+1,b*} minor implies absence for every b >= b*, so each (instance, a)
/// pays for at most one exhaustive absence proof when scanned in ascending b.
struct Detector<'c> {
    ctx: &'c Minor,
    budget: u64,
    map: BTreeMap<(usize, usize), Cell>,
    absent_from: BTreeMap<usize, usize>,
}

impl<'c> Detector<'c> {
    fn new(ctx: &'c Minor, budget: u64) -> Detector<'c> {
        Detector { ctx, budget, map: BTreeMap::new(), absent_from: BTreeMap::new() }
    }

    fn status(&mut self, a: usize, b: usize) -> Cell {
        if let Some(&b0) = self.absent_from.get(&a) {
            if b >= b0 {
                return Cell::Absent;
            }
        }
        if let Some(c) = self.map.get(&(a, b)) {
            return c.clone();
        }
        let cell = match mcov_core::structure::has_uniform_minor(self.ctx, a, b, self.budget) {
            Ok(Some(_)) => Cell::Present,
            Ok(None) => {
                let slot = self.absent_from.entry(a).or_insert(b);
                if *slot > b {
                    *slot = b;
                }
                Cell::Absent
            }
            Err(Error::BudgetExhausted { .. }) => Cell::Budget,
            Err(e) => Cell::Broken(e.to_string()),
        };
        self.map.insert((a, b), cell.clone());
        cell
    }
}

fn cover_text(ctx: &Minor, cover: &FlatCover) -> String {
    write_cover(ctx, cover).unwrap_or_else(|e| format!("(unprintable cover: {e})"))
}

fn family_text(fam: &SetFamily) -> String {
    write_family(fam).unwrap_or_else(|e| format!("(unprintable family: {e})"))
}

/// The four grid lemmas for one instance: `cover-bound` and
/// `weighted-vs-rank-cover` over the full grid, plus the contraction and
/// minor variants of the bound on a small sub-grid with seeded trials.
pub fn cover_grid_task(
    instance: &str,
    ctx: &Minor,
    want: &Wanted,
    seed: u64,
    budget: u64,
    times: bool,
) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    if !want.any([
        "cover-bound",
        "cover-bound-contract",
        "cover-bound-minor",
        "weighted-vs-rank-cover",
    ]) {
        return out;
    }
    let r = ctx.rank_full();
    let live = ctx.live();
    let mut detector = Detector::new(ctx, budget);
    let mut tau_cache: BTreeMap<usize, Result<(u64, FlatCover), String>> = BTreeMap::new();
    let mut rng = task_rng(seed, "cover-grid", instance);

    for a in 1..=A_MAX {
        if want.has("cover-bound") {
            for b in (a + 2)..=B_MAX {
                let t = CellTimer::start(times);
                let mut rec = cover_bound_cell(
                    instance,
                    ctx,
                    r,
                    live,
                    a,
                    b,
                    &mut detector,
                    &mut tau_cache,
                );
                rec.millis = t.millis();
                out.push(rec);
            }
        }
        if want.has("weighted-vs-rank-cover") {
            for b in (a + 2)..=B_MAX {
                let t = CellTimer::start(times);
                let mut rec = weighted_vs_rank_cell(
                    instance,
                    ctx,
                    live,
                    a,
                    b,
                    &mut detector,
                    &mut tau_cache,
                );
                rec.millis = t.millis();
                out.push(rec);
            }
        }
        // The randomized variants stay on a small sub-grid: two b values per
        // a, and a <= 2, keeping trial counts modest.
        if a <= 2 {
            for b in [a + 2, a + 3] {
                if want.has("cover-bound-contract") {
                    let t = CellTimer::start(times);
                    let mut rec = cover_bound_contract_cell(
                        instance,
                        ctx,
                        r,
                        live,
                        a,
                        b,
                        &mut detector,
                        &mut tau_cache,
                        &mut rng,
                    );
                    rec.millis = t.millis();
                    out.push(rec);
                }
                if want.has("cover-bound-minor") {
                    let t = CellTimer::start(times);
                    let mut rec = cover_bound_minor_cell(
                        instance,
                        ctx,
                        r,
                        live,
                        a,
                        b,
                        &mut detector,
                        &mut tau_cache,
                        &mut rng,
                    );
                    rec.millis = t.millis();
                    out.push(rec);
                }
            }
        }
    }
    out
}

fn cached_tau(
    ctx: &Minor,
    a: usize,
    cache: &mut BTreeMap<usize, Result<(u64, FlatCover), String>>,
) -> Result<(u64, FlatCover), String> {
    cache
        .entry(a)
        .or_insert_with(|| tau_a(ctx, a).map_err(|e| e.to_string()))
        .clone()
}

/// The per-cell bound: with no U_{a+1,b} minor and rank above a, the rank-a
/// covering number is at most C(b-1, a)^(r-a), and the constructive cover
/// respects the same piece count.
#[allow(clippy::too_many_arguments)]
fn cover_bound_cell(
    instance: &str,
    ctx: &Minor,
    r: usize,
    live: Subset,
    a: usize,
    b: usize,
    detector: &mut Detector,
    tau_cache: &mut BTreeMap<usize, Result<(u64, FlatCover), String>>,
) -> CheckRecord {
    let params = format!("a={a},b={b}");
    let lemma = "cover-bound";
    if live.is_empty() || r <= a {
        return CheckRecord::new(lemma, instance, params, Verdict::Vacuous, None);
    }
    match detector.status(a, b) {
        Cell::Present => CheckRecord::new(lemma, instance, params, Verdict::Vacuous, None),
        Cell::Budget => CheckRecord::new(lemma, instance, params, Verdict::BudgetExceeded, None),
        Cell::Broken(msg) => CheckRecord::new(
            lemma,
            instance,
            params,
            Verdict::Fail,
            Some(format!("detector error on {instance} (a={a}, b={b}): {msg}\n")),
        ),
        Cell::Absent => {
            let (tau, tau_cover) = match cached_tau(ctx, a, tau_cache) {
                Ok(v) => v,
                Err(msg) => {
                    return CheckRecord::new(
                        lemma,
                        instance,
                        params,
                        Verdict::Fail,
                        Some(format!("tau_a failed on {instance}: {msg}\n")),
                    )
                }
            };
            // Overflow would mean the bound exceeds 2^62 and holds trivially.
            let bound = binomial((b - 1) as u64, a as u64)
                .and_then(|c| checked_pow(c, r - a))
                .ok();
            if let Some(bd) = bound {
                if tau > bd {
                    let witness = format!(
                        "covering bound violated on {instance}: tau_{a} = {tau} > \
                         C({},{a})^({r}-{a}) = {bd} with no U_{{{},{b}}} minor\n{}",
                        b - 1,
                        a + 1,
                        cover_text(ctx, &tau_cover)
                    );
                    return CheckRecord::new(lemma, instance, params, Verdict::Fail, Some(witness));
                }
            }
            match cover_kd(ctx, a, b) {
                Ok(cov) => {
                    let mut problems = Vec::new();
                    if !cov.covers_elements(ctx) {
                        problems.push("constructed cover misses an element".to_string());
                    }
                    if let Some(f) = cov.flats.iter().find(|f| ctx.rank(**f) > a) {
                        problems.push(format!("constructed piece {f:?} has rank above {a}"));
                    }
                    if let Some(bd) = bound {
                        if cov.flats.len() as u64 > bd {
                            problems.push(format!(
                                "constructed cover uses {} pieces, bound is {bd}",
                                cov.flats.len()
                            ));
                        }
                    }
                    if problems.is_empty() {
                        CheckRecord::new(lemma, instance, params, Verdict::Pass, None)
                    } else {
                        let witness = format!(
                            "constructive cover broken on {instance} (a={a}, b={b}): {}\n{}",
                            problems.join("; "),
                            cover_text(ctx, &cov)
                        );
                        CheckRecord::new(lemma, instance, params, Verdict::Fail, Some(witness))
                    }
                }
                Err(e) => CheckRecord::new(
                    lemma,
                    instance,
                    params,
                    Verdict::Fail,
                    Some(format!(
                        "cover_kd refused {instance} (a={a}, b={b}) although the detector \
                         found no U_{{{},{b}}} minor: {e}\n",
                        a + 1
                    )),
                ),
            }
        }
    }
}

/// Sandwich between the plain and weighted covering numbers when d = C(b, a)
/// and no U_{a+1,b} minor exists; the optimal weighted cover must also use
/// only rank-<= a pieces.
fn weighted_vs_rank_cell(
    instance: &str,
    ctx: &Minor,
    live: Subset,
    a: usize,
    b: usize,
    detector: &mut Detector,
    tau_cache: &mut BTreeMap<usize, Result<(u64, FlatCover), String>>,
) -> CheckRecord {
    let lemma = "weighted-vs-rank-cover";
    if live.is_empty() {
        let params = format!("a={a},b={b}");
        return CheckRecord::new(lemma, instance, params, Verdict::Vacuous, None);
    }
    let d = match binomial(b as u64, a as u64) {
        Ok(v) => v,
        Err(e) => {
            let params = format!("a={a},b={b}");
            return CheckRecord::new(
                lemma,
                instance,
                params,
                Verdict::Fail,
                Some(format!("binomial({b},{a}) failed: {e}\n")),
            );
        }
    };
    let params = format!("a={a},b={b},d={d}");
    match detector.status(a, b) {
        Cell::Present => CheckRecord::new(lemma, instance, params, Verdict::Vacuous, None),
        Cell::Budget => CheckRecord::new(lemma, instance, params, Verdict::BudgetExceeded, None),
        Cell::Broken(msg) => CheckRecord::new(
            lemma,
            instance,
            params,
            Verdict::Fail,
            Some(format!("detector error on {instance} (a={a}, b={b}): {msg}\n")),
        ),
        Cell::Absent => {
            let (ta, _) = match cached_tau(ctx, a, tau_cache) {
                Ok(v) => v,
                Err(msg) => {
                    return CheckRecord::new(
                        lemma,
                        instance,
                        params,
                        Verdict::Fail,
                        Some(format!("tau_a failed on {instance}: {msg}\n")),
                    )
                }
            };
            let (tw, wit) = match tau_weighted(ctx, d) {
                Ok(v) => v,
                Err(e) => {
                    return CheckRecord::new(
                        lemma,
                        instance,
                        params,
                        Verdict::Fail,
                        Some(format!("tau_weighted failed on {instance} (d={d}): {e}\n")),
                    )
                }
            };
            let mut problems = Vec::new();
            if ta > tw {
                problems.push(format!("tau_{a} = {ta} exceeds tau^{d} = {tw}"));
            }
            match checked_pow(d, a) {
                Ok(da) => {
                    if (tw as u128) > (da as u128) * (ta as u128) {
                        problems.push(format!("tau^{d} = {tw} exceeds {d}^{a} * tau_{a} = {da}*{ta}"));
                    }
                }
                Err(_) => {} // bound above 2^62, holds trivially
            }
            if let Some(f) = wit.flats.iter().find(|f| ctx.rank(**f) > a) {
                problems.push(format!(
                    "optimal weighted cover contains {f:?} of rank {} > {a}",
                    ctx.rank(*f)
                ));
            }
            if let Err(e) = validate_element_cover(ctx, &wit, tw) {
                problems.push(format!("optimal weighted cover failed validation: {e}"));
            }
            if problems.is_empty() {
                CheckRecord::new(lemma, instance, params, Verdict::Pass, None)
            } else {
                let witness = format!(
                    "weighted/rank sandwich broken on {instance} (a={a}, b={b}, d={d}): {}\n{}",
                    problems.join("; "),
                    cover_text(ctx, &wit)
                );
                CheckRecord::new(lemma, instance, params, Verdict::Fail, Some(witness))
            }
        }
    }
}

/// Contraction form of the bound: tau_a(M) <= C(b-1,a)^{r(C)} * tau_a(M/C)
/// for random contraction sets C, under the same minor-freeness hypothesis.
#[allow(clippy::too_many_arguments)]
fn cover_bound_contract_cell(
    instance: &str,
    ctx: &Minor,
    r: usize,
    live: Subset,
    a: usize,
    b: usize,
    detector: &mut Detector,
    tau_cache: &mut BTreeMap<usize, Result<(u64, FlatCover), String>>,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> CheckRecord {
    let lemma = "cover-bound-contract";
    let params = format!("a={a},b={b}");
    if live.card() < 2 || r <= a {
        return CheckRecord::new(lemma, instance, params, Verdict::Vacuous, None);
    }
    match detector.status(a, b) {
        Cell::Present => CheckRecord::new(lemma, instance, params, Verdict::Vacuous, None),
        Cell::Budget => CheckRecord::new(lemma, instance, params, Verdict::BudgetExceeded, None),
        Cell::Broken(msg) => CheckRecord::new(
            lemma,
            instance,
            params,
            Verdict::Fail,
            Some(format!("detector error: {msg}\n")),
        ),
        Cell::Absent => {
            let (ta, _) = match cached_tau(ctx, a, tau_cache) {
                Ok(v) => v,
                Err(msg) => {
                    return CheckRecord::new(
                        lemma,
                        instance,
                        params,
                        Verdict::Fail,
                        Some(format!("tau_a failed: {msg}\n")),
                    )
                }
            };
            let base = match binomial((b - 1) as u64, a as u64) {
                Ok(v) => v,
                Err(e) => {
                    return CheckRecord::new(
                        lemma,
                        instance,
                        params,
                        Verdict::Fail,
                        Some(format!("binomial failed: {e}\n")),
                    )
                }
            };
            let mut fold = Fold::new();
            for _ in 0..3 {
                if fold.failed() {
                    break;
                }
                let size = rng.gen_range(1..live.card());
                let c = super::random_subset(rng, live, size);
                let k = ctx.rank(c);
                let view = match ctx.contract(c) {
                    Ok(v) => v,
                    Err(e) => {
                        fold.fail(format!("contracting {c:?} failed: {e}\n"));
                        continue;
                    }
                };
                let (tc, _) = match tau_a(&view, a) {
                    Ok(v) => v,
                    Err(e) => {
                        fold.fail(format!("tau_a on the contraction by {c:?} failed: {e}\n"));
                        continue;
                    }
                };
                let factor = match checked_pow(base, k) {
                    Ok(v) => v,
                    Err(_) => {
                        // Bound above 2^62: trivially satisfied.
                        fold.pass();
                        continue;
                    }
                };
                if (ta as u128) <= (factor as u128) * (tc as u128) {
                    fold.pass();
                } else {
                    fold.fail(format!(
                        "contraction bound broken on {instance} (a={a}, b={b}): \
                         tau_{a}(M) = {ta} > C({},{a})^{k} * tau_{a}(M/C) = {factor}*{tc} \
                         for C = {c:?}\n",
                        b - 1
                    ));
                }
            }
            let (verdict, witness) = fold.into_parts();
            CheckRecord::new(lemma, instance, params, verdict, witness)
        }
    }
}

/// Minor form of the bound along chains of safe steps: contractions plus
/// deletions of loops or parallel-redundant elements, through which covers
/// lift. The factor is C(b-1,a)^(rank drop).
#[allow(clippy::too_many_arguments)]
fn cover_bound_minor_cell(
    instance: &str,
    ctx: &Minor,
    r: usize,
    live: Subset,
    a: usize,
    b: usize,
    detector: &mut Detector,
    tau_cache: &mut BTreeMap<usize, Result<(u64, FlatCover), String>>,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> CheckRecord {
    let lemma = "cover-bound-minor";
    let params = format!("a={a},b={b}");
    if live.card() < 2 || r <= a {
        return CheckRecord::new(lemma, instance, params, Verdict::Vacuous, None);
    }
    match detector.status(a, b) {
        Cell::Present => CheckRecord::new(lemma, instance, params, Verdict::Vacuous, None),
        Cell::Budget => CheckRecord::new(lemma, instance, params, Verdict::BudgetExceeded, None),
        Cell::Broken(msg) => CheckRecord::new(
            lemma,
            instance,
            params,
            Verdict::Fail,
            Some(format!("detector error: {msg}\n")),
        ),
        Cell::Absent => {
            let (ta, _) = match cached_tau(ctx, a, tau_cache) {
                Ok(v) => v,
                Err(msg) => {
                    return CheckRecord::new(
                        lemma,
                        instance,
                        params,
                        Verdict::Fail,
                        Some(format!("tau_a failed: {msg}\n")),
                    )
                }
            };
            let base = match binomial((b - 1) as u64, a as u64) {
                Ok(v) => v,
                Err(e) => {
                    return CheckRecord::new(
                        lemma,
                        instance,
                        params,
                        Verdict::Fail,
                        Some(format!("binomial failed: {e}\n")),
                    )
                }
            };
            let mut fold = Fold::new();
            for _ in 0..3 {
                if fold.failed() {
                    break;
                }
                let len = rng.gen_range(1..=3);
                let chain = safe_minor_chain(rng, ctx, len);
                let n = match chain.last() {
                    Some(n) => n,
                    None => continue,
                };
                let (tn, _) = match tau_a(n, a) {
                    Ok(v) => v,
                    Err(e) => {
                        fold.fail(format!("tau_a on a safe minor failed: {e}\n"));
                        continue;
                    }
                };
                let k = r - n.rank_full();
                let factor = match checked_pow(base, k) {
                    Ok(v) => v,
                    Err(_) => {
                        fold.pass();
                        continue;
                    }
                };
                if (ta as u128) <= (factor as u128) * (tn as u128) {
                    fold.pass();
                } else {
                    fold.fail(format!(
                        "minor bound broken on {instance} (a={a}, b={b}): \
                         tau_{a}(M) = {ta} > C({},{a})^{k} * tau_{a}(N) = {factor}*{tn} \
                         for the safe minor with contract={:?} delete={:?}\n",
                        b - 1,
                        n.contract_set(),
                        n.delete_set()
                    ));
                }
            }
            let (verdict, witness) = fold.into_parts();
            CheckRecord::new(lemma, instance, params, verdict, witness)
        }
    }
}

/// Weighted covers never improve by more than d per contracted rank along
/// safe minor chains: d^{r(M)-r(N)} * tau^d(N) >= tau^d(M).
pub fn weighted_minor_task(
    instance: &str,
    ctx: &Minor,
    want: &Wanted,
    seed: u64,
    times: bool,
) -> Vec<CheckRecord> {
    let lemma = "weighted-cover-minor";
    let mut out = Vec::new();
    if !want.has(lemma) {
        return out;
    }
    let mut rng = task_rng(seed, lemma, instance);
    let r = ctx.rank_full();
    for d in [2u64, 3, 4] {
        let t = CellTimer::start(times);
        let mut fold = Fold::new();
        let mut chains_run = 0u64;
        match tau_weighted(ctx, d) {
            Ok((tw_m, _)) => {
                for _ in 0..100 {
                    if fold.failed() {
                        break;
                    }
                    let chain = safe_minor_chain(&mut rng, ctx, 2);
                    if chain.is_empty() {
                        continue;
                    }
                    chains_run += 1;
                    for n in &chain {
                        let (tw_n, _) = match tau_weighted(n, d) {
                            Ok(v) => v,
                            Err(e) => {
                                fold.fail(format!(
                                    "tau_weighted failed on a safe minor of {instance}: {e}\n"
                                ));
                                break;
                            }
                        };
                        let k = r - n.rank_full();
                        let factor = match checked_pow(d, k) {
                            Ok(v) => v,
                            Err(_) => continue, // bound trivially satisfied
                        };
                        if (factor as u128) * (tw_n as u128) >= tw_m as u128 {
                            fold.pass();
                        } else {
                            fold.fail(format!(
                                "weighted cover monotonicity broken on {instance} (d={d}): \
                                 {d}^{k} * tau^{d}(N) = {factor}*{tw_n} < tau^{d}(M) = {tw_m} \
                                 for the safe minor with contract={:?} delete={:?}\n",
                                n.contract_set(),
                                n.delete_set()
                            ));
                            break;
                        }
                    }
                }
            }
            Err(e) => fold.fail(format!("tau_weighted failed on {instance} (d={d}): {e}\n")),
        }
        let (verdict, witness) = fold.into_parts();
        let mut rec = CheckRecord::new(
            lemma,
            instance,
            format!("chains={chains_run},d={d}"),
            verdict,
            witness,
        );
        rec.millis = t.millis();
        out.push(rec);
    }
    out
}

/// When the whole ground set is a d-minimal cover of a family of d-thick
/// rank-a sets, the family has at least d^(r-a) similarity classes and the
/// matroid itself is d-thick.
pub fn trivial_min_cover_task(
    instance: &str,
    ctx: &Minor,
    want: &Wanted,
    seed: u64,
    times: bool,
) -> Vec<CheckRecord> {
    let lemma = "trivial-min-cover-density";
    let mut out = Vec::new();
    if !want.has(lemma) {
        return out;
    }
    let mut rng = task_rng(seed, lemma, instance);
    let r = ctx.rank_full();
    for a in 1..=2usize {
        for d in [2u64, 3] {
            let t = CellTimer::start(times);
            let rec = trivial_min_cover_cell(instance, ctx, r, a, d, &mut rng);
            let mut rec = rec;
            rec.millis = t.millis();
            out.push(rec);
        }
    }
    out
}

fn trivial_min_cover_cell(
    instance: &str,
    ctx: &Minor,
    r: usize,
    a: usize,
    d: u64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> CheckRecord {
    let lemma = "trivial-min-cover-density";
    if r <= a {
        let params = format!("a={a},d={d},families=0");
        return CheckRecord::new(lemma, instance, params, Verdict::Vacuous, None);
    }
    let thick_flats: Vec<Subset> = match enumerate_flats(ctx, a) {
        Ok(lat) => lat
            .of_rank(a)
            .iter()
            .copied()
            .filter(|f| is_d_thick(ctx, *f, d).unwrap_or(false))
            .collect(),
        Err(e) => {
            let params = format!("a={a},d={d},families=0");
            return CheckRecord::new(
                lemma,
                instance,
                params,
                Verdict::Fail,
                Some(format!("flat enumeration failed on {instance}: {e}\n")),
            );
        }
    };
    let mut families: Vec<SetFamily> = Vec::new();
    if !thick_flats.is_empty() {
        if thick_flats.len() <= 60 {
            families.push(SetFamily::new(thick_flats.clone()));
        }
        if thick_flats.len() >= 2 {
            for _ in 0..3 {
                let size = rng.gen_range(2..=thick_flats.len().min(40));
                let mut picked = thick_flats.clone();
                picked.shuffle(rng);
                picked.truncate(size);
                families.push(SetFamily::new(picked));
            }
        }
    }
    let params = format!("a={a},d={d},families={}", families.len());
    let mut fold = Fold::new();
    let dr = match checked_pow(d, r) {
        Ok(v) => v,
        Err(_) => return CheckRecord::new(lemma, instance, params, Verdict::Vacuous, None),
    };
    let dra = checked_pow(d, r - a).unwrap_or(u64::MAX);
    for fam in &families {
        if fold.failed() {
            break;
        }
        let (opt, _) = match dmin_cover_family(ctx, fam, d, false) {
            Ok(v) => v,
            Err(e) => {
                fold.fail(format!(
                    "minimum weighted family cover failed on {instance}: {e}\n{}",
                    family_text(fam)
                ));
                continue;
            }
        };
        // Hypothesis: the trivial cover {E} is d-minimal, i.e. nothing
        // cheaper than weight d^r covers the family.
        if opt != dr {
            continue;
        }
        let eps = fam.epsilon(ctx);
        let mut problems = Vec::new();
        if eps < dra {
            problems.push(format!("epsilon = {eps} below d^(r-a) = {dra}"));
        }
        match is_d_thick(ctx, ctx.live(), d) {
            Ok(true) => {}
            Ok(false) => problems.push(format!("matroid is not {d}-thick")),
            Err(e) => problems.push(format!("thickness check failed: {e}")),
        }
        if problems.is_empty() {
            fold.pass();
        } else {
            fold.fail(format!(
                "trivial-cover density broken on {instance} (a={a}, d={d}): {}\n{}",
                problems.join("; "),
                family_text(fam)
            ));
        }
    }
    let (verdict, witness) = fold.into_parts();
    CheckRecord::new(lemma, instance, params, verdict, witness)
}

/// Every subfamily of an optimal weighted cover is d-scattered, and its
/// rank-homogeneous subfamilies obey the scattered density bound.
pub fn cover_scattered_task(
    instance: &str,
    ctx: &Minor,
    want: &Wanted,
    seed: u64,
    times: bool,
) -> Vec<CheckRecord> {
    let lemma = "cover-scattered";
    let mut out = Vec::new();
    if !want.has(lemma) {
        return out;
    }
    let mut rng = task_rng(seed, lemma, instance);
    let r = ctx.rank_full();
    for d in [2u64, 3, 4] {
        let t = CellTimer::start(times);
        let mut fold = Fold::new();
        let (cover_fam, subsets) = match tau_weighted(ctx, d) {
            Ok((_, wit)) => {
                let fam = SetFamily::new(wit.flats.clone());
                let k = fam.len();
                let mut subsets: Vec<Vec<usize>> = Vec::new();
                if k <= 10 {
                    // Exhaustive: every nonempty subfamily.
                    for mask in 1u32..(1u32 << k) {
                        subsets
                            .push((0..k).filter(|i| mask & (1 << i) != 0).collect());
                    }
                } else {
                    for i in 0..k {
                        subsets.push(vec![i]);
                    }
                    subsets.push((0..k).collect());
                    for _ in 0..150 {
                        let size = rng.gen_range(2..k);
                        let mut idx: Vec<usize> = (0..k).collect();
                        idx.shuffle(&mut rng);
                        idx.truncate(size);
                        idx.sort_unstable();
                        subsets.push(idx);
                    }
                }
                (fam, subsets)
            }
            Err(e) => {
                fold.fail(format!("tau_weighted failed on {instance} (d={d}): {e}\n"));
                (SetFamily::empty(), Vec::new())
            }
        };
        let count = subsets.len();
        for idx in &subsets {
            if fold.failed() {
                break;
            }
            let sub = cover_fam.subfamily(idx);
            match is_d_scattered(ctx, &sub, d) {
                Ok(sc) if sc.scattered => {}
                Ok(sc) => {
                    fold.fail(format!(
                        "subfamily of an optimal {d}-cover on {instance} is not scattered \
                         (closure weight {}, cover weight {}, thin member {:?})\n{}",
                        sc.closure_weight,
                        sc.cover_weight,
                        sc.thin_member,
                        family_text(&sub)
                    ));
                    continue;
                }
                Err(e) => {
                    fold.fail(format!("scatteredness check failed on {instance}: {e}\n"));
                    continue;
                }
            }
            // Rank-homogeneous subfamilies additionally satisfy the density
            // bound epsilon <= d^(r - a).
            let ranks: Vec<usize> = sub.iter().map(|m| ctx.rank(m)).collect();
            if let Some(&a) = ranks.first() {
                if a >= 1 && ranks.iter().all(|&x| x == a) {
                    let eps = sub.epsilon(ctx);
                    let bound = checked_pow(d, r - a).unwrap_or(u64::MAX);
                    if eps > bound {
                        fold.fail(format!(
                            "scattered density bound broken on {instance} (d={d}, a={a}): \
                             epsilon = {eps} > {d}^({r}-{a}) = {bound}\n{}",
                            family_text(&sub)
                        ));
                        continue;
                    }
                }
            }
            fold.pass();
        }
        let (verdict, witness) = fold.into_parts();
        let mut rec = CheckRecord::new(
            lemma,
            instance,
            format!("d={d},subsets={count}"),
            verdict,
            witness,
        );
        rec.millis = t.millis();
        out.push(rec);
    }
    out
}

/// Direct form of the density bound: any d-scattered family of rank-a sets
/// has at most d^(r-a) similarity classes.
pub fn scattered_density_task(
    instance: &str,
    ctx: &Minor,
    want: &Wanted,
    seed: u64,
    times: bool,
) -> Vec<CheckRecord> {
    let lemma = "scattered-density";
    let mut out = Vec::new();
    if !want.has(lemma) {
        return out;
    }
    let mut rng = task_rng(seed, lemma, instance);
    let r = ctx.rank_full();
    for a in 1..=2usize {
        for d in [2u64, 3] {
            let t = CellTimer::start(times);
            let mut families: Vec<SetFamily> = Vec::new();
            if r >= a {
                if let Ok(lat) = enumerate_flats(ctx, a) {
                    let flats = lat.of_rank(a).to_vec();
                    if !flats.is_empty() {
                        if flats.len() <= 60 {
                            families.push(SetFamily::new(flats.clone()));
                        }
                        if flats.len() >= 2 {
                            for _ in 0..6 {
                                let size = rng.gen_range(1..=flats.len().min(30));
                                let mut picked = flats.clone();
                                picked.shuffle(&mut rng);
                                picked.truncate(size);
                                families.push(SetFamily::new(picked));
                            }
                        }
                    }
                }
                for _ in 0..4 {
                    let members = rng.gen_range(2..=10);
                    if let Some(fam) = random_rank_a_family(&mut rng, ctx, a, members) {
                        families.push(fam);
                    }
                }
            }
            let mut fold = Fold::new();
            let bound = checked_pow(d, r.saturating_sub(a)).unwrap_or(u64::MAX);
            for fam in &families {
                if fold.failed() {
                    break;
                }
                match is_d_scattered(ctx, fam, d) {
                    Ok(sc) if sc.scattered => {
                        let eps = fam.epsilon(ctx);
                        if eps <= bound {
                            fold.pass();
                        } else {
                            fold.fail(format!(
                                "scattered density bound broken on {instance} \
                                 (a={a}, d={d}): epsilon = {eps} > {bound}\n{}",
                                family_text(fam)
                            ));
                        }
                    }
                    Ok(_) => {} // hypothesis fails; trial is vacuous
                    Err(e) => fold.fail(format!("scatteredness check failed: {e}\n")),
                }
            }
            let (verdict, witness) = fold.into_parts();
            let mut rec = CheckRecord::new(
                lemma,
                instance,
                format!("a={a},d={d},families={}", families.len()),
                verdict,
                witness,
            );
            rec.millis = t.millis();
            out.push(rec);
        }
    }
    out
}
