//! Pyramid checks: construction, size accounting, shrinking, restriction,
//! bounding, projection to minors, augmentation, and the inductive climb.
//!
//! Pyramid instances are built here rather than drawn from the catalog: the
//! projective-geometry pyramids for q in {2, 3} and heights up to 3, plus
//! the point, line, and U_{2,4} pyramids used for the constructive
//! operations.

use super::{CellTimer, Fold, Wanted};
use crate::report::CheckRecord;
use mcov_core::cover::checked_pow;
use mcov_core::flats::enumerate_flats;
use mcov_core::io::write_family;
use mcov_core::matroid::{Matroid, Minor};
use mcov_core::pyramid::{
    augment_pyramid, bound_pyramid, climb_inductive, minor_project_pyramid, pg_pyramid,
    pyramid_size_check, restrict_pyramid, shrink_pyramid, verify_pyramid, ClimbResult,
    Pyramid, PyramidParams,
};
use mcov_core::structure::is_d_firm;
use mcov_core::{SetFamily, Subset, Verdict};
use std::sync::Arc;

fn family_text(fam: &SetFamily) -> String {
    write_family(fam).unwrap_or_else(|e| format!("(unprintable family: {e})"))
}

/// A named pyramid instance; `exact_size` marks the projective-geometry
/// pyramids whose family has exactly q^h classes collapsing to one.
struct PyrInstance {
    id: String,
    pyramid: Pyramid,
    exact_size: bool,
}

fn build_error(id: &str, what: &str, e: impl std::fmt::Display) -> CheckRecord {
    CheckRecord::new(
        "pyramid-size",
        id,
        "build".to_string(),
        Verdict::Fail,
        Some(format!("failed to build {what}: {e}\n")),
    )
}

/// The point pyramid: all points of PG(3, 2) off the spine point, height 1.
fn point_pyramid() -> mcov_core::Result<Pyramid> {
    let base = Arc::new(Matroid::pg(4, 2)?);
    let ctx = Minor::of(base);
    let family = SetFamily::singletons_of(ctx.live().without(0));
    Ok(Pyramid {
        ctx,
        family,
        spine: vec![0],
        params: PyramidParams { a: 1, q: 2, h: 1, d: 2 },
    })
}

/// The line pyramid: all lines of PG(3, 2) avoiding the spine point.
fn line_pyramid() -> mcov_core::Result<Pyramid> {
    let base = Arc::new(Matroid::pg(4, 2)?);
    let ctx = Minor::of(base);
    let lines: Vec<Subset> = enumerate_flats(&ctx, 2)?
        .of_rank(2)
        .iter()
        .copied()
        .filter(|l| !l.contains(0))
        .collect();
    let family = SetFamily::new(lines);
    Ok(Pyramid {
        ctx,
        family,
        spine: vec![0],
        params: PyramidParams { a: 2, q: 2, h: 1, d: 2 },
    })
}

/// The U_{2,4} pyramid: two parallel-free points over a contracted one.
fn u24_pyramid() -> mcov_core::Result<Pyramid> {
    let base = Arc::new(Matroid::uniform(2, 4)?);
    let ctx = Minor::of(base);
    let family = SetFamily::new(vec![Subset::singleton(1), Subset::singleton(2)]);
    Ok(Pyramid {
        ctx,
        family,
        spine: vec![0],
        params: PyramidParams { a: 1, q: 2, h: 1, d: 2 },
    })
}

fn basic_instances() -> (Vec<PyrInstance>, Vec<CheckRecord>) {
    let mut instances = Vec::new();
    let mut errors = Vec::new();
    for q in [2u32, 3] {
        for h in 1..=3usize {
            let id = format!("pyr-pg-q{q}-h{h}");
            match pg_pyramid(q, h, 2) {
                Ok(p) => instances.push(PyrInstance { id, pyramid: p, exact_size: true }),
                Err(e) => errors.push(build_error(&id, "the projective pyramid", e)),
            }
        }
    }
    match point_pyramid() {
        Ok(p) => instances.push(PyrInstance {
            id: "pyr-points-pg-4-2".to_string(),
            pyramid: p,
            exact_size: false,
        }),
        Err(e) => errors.push(build_error("pyr-points-pg-4-2", "the point pyramid", e)),
    }
    match line_pyramid() {
        Ok(p) => instances.push(PyrInstance {
            id: "pyr-lines-pg-4-2".to_string(),
            pyramid: p,
            exact_size: false,
        }),
        Err(e) => errors.push(build_error("pyr-lines-pg-4-2", "the line pyramid", e)),
    }
    match u24_pyramid() {
        Ok(p) => instances.push(PyrInstance {
            id: "pyr-u24".to_string(),
            pyramid: p,
            exact_size: false,
        }),
        Err(e) => errors.push(build_error("pyr-u24", "the U_{2,4} pyramid", e)),
    }
    (instances, errors)
}

/// Size, shrink, restrict, and bound checks over every pyramid instance.
pub fn pyramid_basics_task(want: &Wanted, times: bool) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    if !want.any(["pyramid-size", "pyramid-shrink", "pyramid-restrict", "pyramid-bound"]) {
        return out;
    }
    let (instances, errors) = basic_instances();
    out.extend(errors);
    for inst in &instances {
        let p = &inst.pyramid;
        let id = inst.id.as_str();
        let PyramidParams { a, q, h, d } = p.params;
        if want.has("pyramid-size") {
            let t = CellTimer::start(times);
            let params = format!("h={h},q={q}");
            let rec = match pyramid_size_check(p) {
                Ok(chk) => {
                    let mut problems = Vec::new();
                    if !chk.ok {
                        problems.push(format!(
                            "class count {} below factor {} times bottom count {}",
                            chk.eps_top, chk.factor, chk.eps_bottom
                        ));
                    }
                    if inst.exact_size {
                        let expect = checked_pow(q as u64, h).unwrap_or(u64::MAX);
                        if chk.eps_top != expect || chk.eps_bottom != 1 {
                            problems.push(format!(
                                "projective pyramid should have exactly q^h = {expect} \
                                 classes over one: got {} over {}",
                                chk.eps_top, chk.eps_bottom
                            ));
                        }
                    }
                    if problems.is_empty() {
                        CheckRecord::new("pyramid-size", id, params, Verdict::Pass, None)
                    } else {
                        CheckRecord::new(
                            "pyramid-size",
                            id,
                            params,
                            Verdict::Fail,
                            Some(format!("size accounting broken on {id}: {}\n", problems.join("; "))),
                        )
                    }
                }
                Err(e) => CheckRecord::new(
                    "pyramid-size",
                    id,
                    params,
                    Verdict::Fail,
                    Some(format!("size check failed on {id}: {e}\n")),
                ),
            };
            let mut rec = rec;
            rec.millis = t.millis();
            out.push(rec);
        }
        if want.has("pyramid-shrink") {
            for i in 0..=h {
                for j in i..=h {
                    let t = CellTimer::start(times);
                    let params = format!("i={i},j={j}");
                    let rec = match shrink_pyramid(p, i, j) {
                        Ok(s) => {
                            let mut problems = Vec::new();
                            let expect =
                                PyramidParams { a, q, h: h - (j - i), d };
                            if s.params != expect {
                                problems.push(format!(
                                    "shrunk parameters {:?} differ from {:?}",
                                    s.params, expect
                                ));
                            }
                            if s.spine.len() != s.params.h {
                                problems.push("spine length differs from height".to_string());
                            }
                            match verify_pyramid(&s) {
                                Ok(chk) if chk.valid => {}
                                Ok(chk) => problems.push(format!(
                                    "shrunk pyramid invalid: {}",
                                    chk.reason.unwrap_or_default()
                                )),
                                Err(e) => problems.push(format!("validation failed: {e}")),
                            }
                            if problems.is_empty() {
                                CheckRecord::new("pyramid-shrink", id, params, Verdict::Pass, None)
                            } else {
                                CheckRecord::new(
                                    "pyramid-shrink",
                                    id,
                                    params,
                                    Verdict::Fail,
                                    Some(format!(
                                        "shrink broken on {id} (i={i}, j={j}): {}\n",
                                        problems.join("; ")
                                    )),
                                )
                            }
                        }
                        Err(e) => CheckRecord::new(
                            "pyramid-shrink",
                            id,
                            params,
                            Verdict::Fail,
                            Some(format!("shrink failed on {id} (i={i}, j={j}): {e}\n")),
                        ),
                    };
                    let mut rec = rec;
                    rec.millis = t.millis();
                    out.push(rec);
                }
            }
        }
        if want.has("pyramid-restrict") {
            let t = CellTimer::start(times);
            let params = "member=0".to_string();
            let first = p.family.member(0);
            let rec = match restrict_pyramid(p, first) {
                Ok(rp) => match verify_pyramid(&rp) {
                    Ok(chk) if chk.valid => {
                        CheckRecord::new("pyramid-restrict", id, params, Verdict::Pass, None)
                    }
                    Ok(chk) => CheckRecord::new(
                        "pyramid-restrict",
                        id,
                        params,
                        Verdict::Fail,
                        Some(format!(
                            "restricted pyramid invalid on {id}: {}\n",
                            chk.reason.unwrap_or_default()
                        )),
                    ),
                    Err(e) => CheckRecord::new(
                        "pyramid-restrict",
                        id,
                        params,
                        Verdict::Fail,
                        Some(format!("validation failed on {id}: {e}\n")),
                    ),
                },
                Err(e) => CheckRecord::new(
                    "pyramid-restrict",
                    id,
                    params,
                    Verdict::Fail,
                    Some(format!("restriction failed on {id}: {e}\n")),
                ),
            };
            let mut rec = rec;
            rec.millis = t.millis();
            out.push(rec);
        }
        if want.has("pyramid-bound") {
            for hp in 1..=h {
                let t = CellTimer::start(times);
                let params = format!("hp={hp}");
                let rec = match bound_pyramid(p, hp) {
                    Ok(bp) => {
                        let mut problems = Vec::new();
                        match verify_pyramid(&bp) {
                            Ok(chk) if chk.valid => {}
                            Ok(chk) => problems.push(format!(
                                "bounded pyramid invalid: {}",
                                chk.reason.unwrap_or_default()
                            )),
                            Err(e) => problems.push(format!("validation failed: {e}")),
                        }
                        if bp.ctx.rank_full() != a + hp {
                            problems.push(format!(
                                "bounded view rank {} differs from a + h' = {}",
                                bp.ctx.rank_full(),
                                a + hp
                            ));
                        }
                        let eps = bp.family.epsilon(&bp.ctx);
                        let need = checked_pow(q as u64, hp).unwrap_or(u64::MAX);
                        if eps < need {
                            problems.push(format!(
                                "bounded family has {eps} classes, below q^h' = {need}"
                            ));
                        }
                        if problems.is_empty() {
                            CheckRecord::new("pyramid-bound", id, params, Verdict::Pass, None)
                        } else {
                            CheckRecord::new(
                                "pyramid-bound",
                                id,
                                params,
                                Verdict::Fail,
                                Some(format!(
                                    "bound broken on {id} (h'={hp}): {}\n",
                                    problems.join("; ")
                                )),
                            )
                        }
                    }
                    Err(e) => CheckRecord::new(
                        "pyramid-bound",
                        id,
                        params,
                        Verdict::Fail,
                        Some(format!("bound failed on {id} (h'={hp}): {e}\n")),
                    ),
                };
                let mut rec = rec;
                rec.millis = t.millis();
                out.push(rec);
            }
        }
    }
    out
}

/// Projection of a pyramid to a minor view that contracts the spine. The
/// general statement is unproven; when pruning empties a required fiber the
/// construction refuses and the cell is vacuous rather than failed.
pub fn pyramid_project_task(want: &Wanted, times: bool) -> Vec<CheckRecord> {
    let lemma = "pyramid-project";
    let mut out = Vec::new();
    if !want.has(lemma) {
        return out;
    }
    let mut cases: Vec<(String, Pyramid, Subset, SetFamily)> = Vec::new();
    match point_pyramid() {
        Ok(p) => {
            let fam = SetFamily::new(vec![Subset::singleton(1)]);
            for (label, del) in [
                ("none", Subset::EMPTY),
                ("6", Subset::singleton(6)),
                ("6-12", Subset::singleton(6).with(12)),
            ] {
                cases.push((
                    format!("pyr-points-pg-4-2\u{0}del={label}"),
                    p.clone(),
                    del,
                    fam.clone(),
                ));
            }
        }
        Err(e) => out.push(CheckRecord::new(
            lemma,
            "pyr-points-pg-4-2",
            "del=none".to_string(),
            Verdict::Fail,
            Some(format!("failed to build the point pyramid: {e}\n")),
        )),
    }
    match pg_pyramid(3, 2, 2) {
        Ok(p) => {
            let fam = SetFamily::new(vec![p.family.member(0)]);
            cases.push(("pyr-pg-q3-h2\u{0}del=none".to_string(), p, Subset::EMPTY, fam));
        }
        Err(e) => out.push(CheckRecord::new(
            lemma,
            "pyr-pg-q3-h2",
            "del=none".to_string(),
            Verdict::Fail,
            Some(format!("failed to build the projective pyramid: {e}\n")),
        )),
    }
    for (key, p, del, fam) in cases {
        let (id, params) = key.split_once('\u{0}').unwrap();
        let t = CellTimer::start(times);
        let rec = (|| {
            let contract = p.ctx.contract_set().union(p.spine_set());
            let n = match Minor::assemble(p.ctx.base().clone(), contract, p.ctx.delete_set().union(del)) {
                Ok(n) => n,
                Err(e) => {
                    return CheckRecord::new(
                        lemma,
                        id,
                        params.to_string(),
                        Verdict::Fail,
                        Some(format!("target view construction failed: {e}\n")),
                    )
                }
            };
            match minor_project_pyramid(&p, &n, &fam) {
                Ok(proj) => {
                    let mut problems = Vec::new();
                    match verify_pyramid(&proj) {
                        Ok(chk) if chk.valid => {}
                        Ok(chk) => problems.push(format!(
                            "projected pyramid invalid: {}",
                            chk.reason.unwrap_or_default()
                        )),
                        Err(e) => problems.push(format!("validation failed: {e}")),
                    }
                    for m in fam.iter() {
                        if !proj.family.contains_member(m) {
                            problems.push(format!("required member {m:?} was pruned"));
                        }
                    }
                    if !proj.family.iter().all(|m| p.family.contains_member(m)) {
                        problems.push("projected family invents new members".to_string());
                    }
                    if problems.is_empty() {
                        CheckRecord::new(lemma, id, params.to_string(), Verdict::Pass, None)
                    } else {
                        CheckRecord::new(
                            lemma,
                            id,
                            params.to_string(),
                            Verdict::Fail,
                            Some(format!(
                                "projection broken on {id} ({params}): {}\n",
                                problems.join("; ")
                            )),
                        )
                    }
                }
                // The projected statement is unproven in general: a refusal
                // is a hypothesis failure, not a counterexample.
                Err(mcov_core::Error::Construction(_)) => {
                    CheckRecord::new(lemma, id, params.to_string(), Verdict::Vacuous, None)
                }
                Err(e) => CheckRecord::new(
                    lemma,
                    id,
                    params.to_string(),
                    Verdict::Fail,
                    Some(format!("projection failed on {id} ({params}): {e}\n")),
                ),
            }
        })();
        let mut rec = rec;
        rec.millis = t.millis();
        out.push(rec);
    }
    out
}

/// Rebuilding a two-level pyramid from its height-1 tail by splitting the
/// first spine element's parallel classes.
pub fn pyramid_augment_task(want: &Wanted, times: bool) -> Vec<CheckRecord> {
    let lemma = "pyramid-augment";
    let mut out = Vec::new();
    if !want.has(lemma) {
        return out;
    }
    for q in [2u32, 3] {
        let id = format!("pyr-pg-q{q}-h2");
        let t = CellTimer::start(times);
        let params = format!("q={q}");
        let rec = (|| {
            let p2 = match pg_pyramid(q, 2, 2) {
                Ok(p) => p,
                Err(e) => {
                    return CheckRecord::new(
                        lemma,
                        &id,
                        params.clone(),
                        Verdict::Fail,
                        Some(format!("failed to build the projective pyramid: {e}\n")),
                    )
                }
            };
            let p_small = match shrink_pyramid(&p2, 0, 1) {
                Ok(p) => p,
                Err(e) => {
                    return CheckRecord::new(
                        lemma,
                        &id,
                        params.clone(),
                        Verdict::Fail,
                        Some(format!("failed to shrink to the tail: {e}\n")),
                    )
                }
            };
            let e0 = p2.spine[0];
            let m = Minor::of(p_small.ctx.base().clone());
            let fam = SetFamily::singletons_of(m.live().without(e0));
            match augment_pyramid(&m, e0, &fam, (q - 1) as usize, &p_small) {
                Ok(built) => {
                    let mut problems = Vec::new();
                    let expect = PyramidParams { a: 1, q: q as usize, h: 2, d: 2 };
                    if built.params != expect {
                        problems.push(format!(
                            "rebuilt parameters {:?} differ from {:?}",
                            built.params, expect
                        ));
                    }
                    match verify_pyramid(&built) {
                        Ok(chk) if chk.valid => {}
                        Ok(chk) => problems.push(format!(
                            "rebuilt pyramid invalid: {}",
                            chk.reason.unwrap_or_default()
                        )),
                        Err(e) => problems.push(format!("validation failed: {e}")),
                    }
                    if q == 2 {
                        let mut got: Vec<u64> =
                            built.family.iter().map(|m| m.bits()).collect();
                        let mut expect_fam: Vec<u64> =
                            p2.family.iter().map(|m| m.bits()).collect();
                        got.sort_unstable();
                        expect_fam.sort_unstable();
                        if got != expect_fam {
                            problems.push(
                                "rebuilt family differs from the original two-level family"
                                    .to_string(),
                            );
                        }
                    } else if built.family.len() != 9 {
                        problems.push(format!(
                            "rebuilt family has {} members, expected 9",
                            built.family.len()
                        ));
                    }
                    if problems.is_empty() {
                        CheckRecord::new(lemma, &id, params.clone(), Verdict::Pass, None)
                    } else {
                        CheckRecord::new(
                            lemma,
                            &id,
                            params.clone(),
                            Verdict::Fail,
                            Some(format!(
                                "augmentation broken on {id}: {}\n",
                                problems.join("; ")
                            )),
                        )
                    }
                }
                Err(e) => CheckRecord::new(
                    lemma,
                    &id,
                    params.clone(),
                    Verdict::Fail,
                    Some(format!("augmentation failed on {id}: {e}\n")),
                ),
            }
        })();
        let mut rec = rec;
        rec.millis = t.millis();
        out.push(rec);
    }
    out
}

/// The inductive climb on height-1 pyramids: either a firm family of rank
/// a+1 straight away, or liftable families, one per split class, each firm,
/// rank a, spanning the spine element, and pairwise dissimilar.
pub fn pyramid_climb_task(want: &Wanted, budget: u64, times: bool) -> Vec<CheckRecord> {
    let lemma = "pyramid-climb";
    let mut out = Vec::new();
    if !want.has(lemma) {
        return out;
    }
    let mut cases: Vec<(String, String, Pyramid, SetFamily, u64)> = Vec::new();
    match pg_pyramid(2, 1, 2) {
        Ok(p) => {
            let fam = SetFamily::new(vec![p.family.member(0)]);
            cases.push(("pyr-pg-q2-h1".to_string(), "d=2".to_string(), p, fam, 2));
        }
        Err(e) => out.push(CheckRecord::new(
            lemma,
            "pyr-pg-q2-h1",
            "d=2".to_string(),
            Verdict::Fail,
            Some(format!("failed to build the projective pyramid: {e}\n")),
        )),
    }
    match u24_pyramid() {
        Ok(p) => {
            let fam = p.family.clone();
            cases.push(("pyr-u24".to_string(), "d=3".to_string(), p, fam, 3));
        }
        Err(e) => out.push(CheckRecord::new(
            lemma,
            "pyr-u24",
            "d=3".to_string(),
            Verdict::Fail,
            Some(format!("failed to build the U_{{2,4}} pyramid: {e}\n")),
        )),
    }
    match line_pyramid() {
        Ok(p) => {
            // Two lines from one parallel class of the contracted view.
            let level1 = p.ctx.contract(Subset::singleton(p.spine[0]));
            match level1 {
                Ok(me) => {
                    let mut pair: Option<(usize, usize)> = None;
                    'outer: for i in 0..p.family.len() {
                        for j in (i + 1)..p.family.len() {
                            if me.closure(p.family.member(i)) == me.closure(p.family.member(j))
                            {
                                pair = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    if let Some((i, j)) = pair {
                        let fam = p.family.subfamily(&[i, j]);
                        cases.push((
                            "pyr-lines-pg-4-2".to_string(),
                            "d=8".to_string(),
                            p,
                            fam,
                            8,
                        ));
                    } else {
                        out.push(CheckRecord::new(
                            lemma,
                            "pyr-lines-pg-4-2",
                            "d=8".to_string(),
                            Verdict::Fail,
                            Some("no two lines share a contracted class\n".to_string()),
                        ));
                    }
                }
                Err(e) => out.push(CheckRecord::new(
                    lemma,
                    "pyr-lines-pg-4-2",
                    "d=8".to_string(),
                    Verdict::Fail,
                    Some(format!("level view construction failed: {e}\n")),
                )),
            }
        }
        Err(e) => out.push(CheckRecord::new(
            lemma,
            "pyr-lines-pg-4-2",
            "d=8".to_string(),
            Verdict::Fail,
            Some(format!("failed to build the line pyramid: {e}\n")),
        )),
    }
    for (id, params, p, fam, d) in cases {
        let t = CellTimer::start(times);
        let a = p.params.a;
        let mut fold = Fold::new();
        match climb_inductive(&p, &fam, a, d, budget) {
            Ok(result) => {
                let problems = validate_climb(&p, &fam, a, d, &result);
                if problems.is_empty() {
                    fold.pass();
                } else {
                    fold.fail(format!(
                        "climb result broken on {id}: {}\ninput family:\n{}",
                        problems.join("; "),
                        family_text(&fam)
                    ));
                }
            }
            Err(mcov_core::Error::BudgetExhausted { .. }) => fold.budget(),
            Err(e) => fold.fail(format!("climb failed on {id}: {e}\n")),
        }
        let (verdict, witness) = fold.into_parts();
        let mut rec = CheckRecord::new(lemma, &id, params, verdict, witness);
        rec.millis = t.millis();
        out.push(rec);
    }
    out
}

fn validate_climb(
    p: &Pyramid,
    fam: &SetFamily,
    a: usize,
    d: u64,
    result: &ClimbResult,
) -> Vec<String> {
    let mut problems = Vec::new();
    let e = p.spine[0];
    match result {
        ClimbResult::FirmUp(y) => {
            if y.is_empty() {
                problems.push("firm family is empty".to_string());
            }
            if !y.iter().all(|m| p.family.contains_member(m)) {
                problems.push("firm family leaves the pyramid members".to_string());
            }
            if p.ctx.rank(y.union_all()) != a + 1 {
                problems.push(format!(
                    "firm family has rank {}, wanted {}",
                    p.ctx.rank(y.union_all()),
                    a + 1
                ));
            }
            match is_d_firm(&p.ctx, y, d) {
                Ok(fc) if fc.firm => {}
                Ok(_) => problems.push("climbed family is not firm".to_string()),
                Err(err) => problems.push(format!("firmness recheck failed: {err}")),
            }
        }
        ClimbResult::Lifted(parts) => {
            if parts.len() < 2 {
                problems.push(format!("lift produced {} families, wanted >= 2", parts.len()));
            }
            let me = match p.ctx.contract(Subset::singleton(e)) {
                Ok(v) => v,
                Err(err) => {
                    problems.push(format!("level view construction failed: {err}"));
                    return problems;
                }
            };
            let base_class = me.closure(fam.union_all().minus(Subset::singleton(e)));
            let mut spans = Vec::new();
            for (idx, part) in parts.iter().enumerate() {
                if part.is_empty() {
                    problems.push(format!("lifted family {idx} is empty"));
                    continue;
                }
                if !part.iter().all(|m| p.family.contains_member(m)) {
                    problems.push(format!("lifted family {idx} leaves the pyramid members"));
                }
                let union = part.union_all();
                if p.ctx.rank(union) != a {
                    problems.push(format!(
                        "lifted family {idx} has rank {}, wanted {a}",
                        p.ctx.rank(union)
                    ));
                }
                if p.ctx.rank(union.with(e)) != a + 1 {
                    problems.push(format!(
                        "lifted family {idx} is not skew to the spine element"
                    ));
                }
                if me.closure(union.minus(Subset::singleton(e))) != base_class {
                    problems.push(format!(
                        "lifted family {idx} drifts from the input's contracted class"
                    ));
                }
                match is_d_firm(&p.ctx, part, d) {
                    Ok(fc) if fc.firm => {}
                    Ok(_) => problems.push(format!("lifted family {idx} is not firm")),
                    Err(err) => problems.push(format!("firmness recheck failed: {err}")),
                }
                spans.push(p.ctx.closure(union));
            }
            let mut dedup = spans.clone();
            dedup.sort_by_key(|s| s.bits());
            dedup.dedup();
            if dedup.len() != spans.len() {
                problems.push("lifted families are pairwise similar".to_string());
            }
        }
    }
    problems
}
