//! Pyramid construction, validation, and the shaping operations.

use mcov_core::family::SetFamily;
use mcov_core::flats::enumerate_flats;
use mcov_core::matroid::{Matroid, Minor};
use mcov_core::pyramid::*;
use mcov_core::subset::Subset;
use std::sync::Arc;

const BUDGET: u64 = 1_000_000;

/// Height-1 point pyramid over the rank-4 binary geometry: spine is the
/// first unit point, family is every other point. Parallel pairs in the
/// contraction give splitting number 2.
fn point_pyramid() -> Pyramid {
    let base = Arc::new(Matroid::pg(4, 2).unwrap());
    let ctx = Minor::of(base);
    let family = SetFamily::singletons_of(ctx.live().without(0));
    Pyramid::new(ctx, family, vec![0], PyramidParams { a: 1, q: 2, h: 1, d: 2 })
}

/// Height-1 line pyramid over the rank-4 binary geometry: members are the
/// 28 lines avoiding the spine point. Each plane through the spine holds 4
/// of them, similar in the contraction with distinct closures.
fn line_pyramid() -> Pyramid {
    let base = Arc::new(Matroid::pg(4, 2).unwrap());
    let ctx = Minor::of(base);
    let lines: Vec<Subset> = enumerate_flats(&ctx, 2)
        .unwrap()
        .by_rank[2]
        .iter()
        .copied()
        .filter(|l| !l.contains(0))
        .collect();
    assert_eq!(lines.len(), 28);
    Pyramid::new(ctx, SetFamily::new(lines), vec![0], PyramidParams { a: 2, q: 2, h: 1, d: 2 })
}

// ---------------------------------------------------------------------------
// Validation and the geometric examples
// ---------------------------------------------------------------------------

#[test]
fn pg_pyramids_are_valid() {
    for (q, h) in [(2u32, 1usize), (2, 2), (3, 1), (3, 2), (4, 1), (5, 1), (3, 3)] {
        let p = pg_pyramid(q, h, 2).unwrap();
        assert_eq!(p.spine.len(), h);
        assert_eq!(p.family.len(), (q as usize).pow(h as u32), "q^h members");
        assert_eq!(p.params, PyramidParams { a: 1, q: q as usize, h, d: 2 });
        assert!(verify_pyramid(&p).unwrap().valid);
    }
}

#[test]
fn pg_pyramid_height_zero_is_a_point() {
    let p = pg_pyramid(2, 0, 5).unwrap();
    assert!(p.spine.is_empty());
    assert_eq!(p.family.len(), 1);
    assert!(verify_pyramid(&p).unwrap().valid);
}

#[test]
fn pg_pyramid_frozen_small_case() {
    // PG(1,2): three points; the spine is the first unit point and the
    // family is the two points with nonzero last coordinate.
    let p = pg_pyramid(2, 1, 2).unwrap();
    assert_eq!(p.spine, vec![0]);
    assert_eq!(
        p.family.members().to_vec(),
        vec![Subset::singleton(1), Subset::singleton(2)]
    );
}

#[test]
fn hand_built_pyramids_are_valid() {
    for p in [point_pyramid(), line_pyramid()] {
        let check = verify_pyramid(&p).unwrap();
        assert!(check.valid, "{:?}", check.reason);
    }
}

#[test]
fn verify_reports_first_failure() {
    let good = point_pyramid();

    let mut p = good.clone();
    p.spine = vec![0, 1];
    let r = verify_pyramid(&p).unwrap();
    assert!(!r.valid);
    assert!(r.reason.unwrap().contains("spine has 2 elements"));

    let mut p = good.clone();
    p.spine = vec![0, 0];
    p.params.h = 2;
    assert!(verify_pyramid(&p).unwrap().reason.unwrap().contains("not distinct"));

    let mut p = good.clone();
    p.family = SetFamily::empty();
    assert!(verify_pyramid(&p).unwrap().reason.unwrap().contains("family is empty"));

    let mut p = good.clone();
    p.family.push(Subset::singleton(0));
    assert!(verify_pyramid(&p).unwrap().reason.unwrap().contains("meets the spine"));

    let mut p = good.clone();
    p.family.push(Subset::from_indices([5, 6]));
    assert!(verify_pyramid(&p).unwrap().reason.unwrap().contains("does not have rank 1"));

    // Height-2 geometry pyramid with a member inside the spine's closure.
    let mut p = pg_pyramid(2, 2, 2).unwrap();
    p.family.push(Subset::singleton(2));
    assert!(verify_pyramid(&p).unwrap().reason.unwrap().contains("not skew"));

    // Remove one member of a parallel pair: its partner loses the split.
    let mut p = pg_pyramid(2, 2, 2).unwrap();
    let keep: Vec<usize> = (0..p.family.len()).filter(|&i| i != 1).collect();
    p.family = p.family.subfamily(&keep);
    assert!(verify_pyramid(&p).unwrap().reason.unwrap().contains("splits into 1"));

    // Lines of the binary geometry are 3-thick but not 4-thick.
    let mut p = line_pyramid();
    p.params.d = 4;
    assert!(verify_pyramid(&p).unwrap().reason.unwrap().contains("not 4-thick"));
}

#[test]
fn levels_contract_spine_prefixes() {
    let p = pg_pyramid(3, 2, 2).unwrap();
    assert_eq!(p.level(0).unwrap().contract_set(), Subset::EMPTY);
    assert_eq!(p.level(1).unwrap().contract_set(), Subset::singleton(p.spine[0]));
    assert_eq!(p.level(2).unwrap().contract_set(), p.spine_set());
}

// ---------------------------------------------------------------------------
// Size accounting
// ---------------------------------------------------------------------------

#[test]
fn size_check_on_geometry_pyramids() {
    for (q, h) in [(2u32, 2usize), (3, 2), (3, 3)] {
        let p = pg_pyramid(q, h, 2).unwrap();
        let c = pyramid_size_check(&p).unwrap();
        assert_eq!(c.eps_top, (q as u64).pow(h as u32));
        assert_eq!(c.eps_bottom, 1, "everything is parallel once the spine is gone");
        assert_eq!(c.factor, (q as u64).pow(h as u32));
        assert!(c.ok);
    }
}

#[test]
fn size_check_on_the_line_pyramid() {
    let c = pyramid_size_check(&line_pyramid()).unwrap();
    assert_eq!((c.eps_top, c.eps_bottom, c.factor), (28, 7, 2));
    assert!(c.ok);
}

// ---------------------------------------------------------------------------
// Shrink, restrict, bound
// ---------------------------------------------------------------------------

#[test]
fn shrink_contracts_a_spine_segment() {
    let p = pg_pyramid(2, 2, 2).unwrap();
    for (i, j, left) in [(0usize, 1usize, 1usize), (1, 2, 1), (0, 2, 0)] {
        let s = shrink_pyramid(&p, i, j).unwrap();
        assert_eq!(s.params.h, left);
        assert_eq!(s.spine.len(), left);
        assert_eq!(s.family.len(), p.family.len(), "members carry over");
        let segment = Subset::from_indices(p.spine[i..j].iter().copied());
        assert!(segment.is_subset_of(s.ctx.contract_set()));
        assert!(verify_pyramid(&s).unwrap().valid);
    }
    // Identity shrink.
    let s = shrink_pyramid(&p, 1, 1).unwrap();
    assert_eq!(s.params.h, 2);
    // Bad indices.
    assert!(matches!(
        shrink_pyramid(&p, 2, 1).unwrap_err(),
        mcov_core::Error::SpineIndices { .. }
    ));
    assert!(shrink_pyramid(&p, 0, 3).is_err());
}

#[test]
fn restrict_keeps_one_fiber() {
    // In the point pyramid the fiber of {5} is its parallel pair {5},{6}
    // in the contraction, and the span is the line through 0, 5, 6.
    let p = point_pyramid();
    let out = restrict_pyramid(&p, Subset::singleton(5)).unwrap();
    assert_eq!(out.family.len(), 2);
    assert_eq!(
        out.family.members().to_vec(),
        vec![Subset::singleton(5), Subset::singleton(6)]
    );
    assert_eq!(out.ctx.rank_full(), out.params.a + out.params.h);
    assert!(verify_pyramid(&out).unwrap().valid);

    assert!(matches!(
        restrict_pyramid(&p, Subset::singleton(0)).unwrap_err(),
        mcov_core::Error::NotAMember
    ));
}

#[test]
fn bound_shrinks_then_restricts() {
    let p = pg_pyramid(2, 2, 2).unwrap();
    let b1 = bound_pyramid(&p, 1).unwrap();
    assert_eq!(b1.params.h, 1);
    assert_eq!(b1.ctx.rank_full(), 2, "a + h' = 2");
    assert!(b1.family.epsilon(&b1.ctx) >= 2, "at least q^1 classes");
    assert!(verify_pyramid(&b1).unwrap().valid);

    let b0 = bound_pyramid(&p, 0).unwrap();
    assert_eq!(b0.params.h, 0);
    assert_eq!(b0.ctx.rank_full(), 1);

    assert!(bound_pyramid(&p, 3).is_err());
}

#[test]
fn bound_on_the_larger_geometry() {
    let p = pg_pyramid(3, 2, 2).unwrap();
    let b = bound_pyramid(&p, 1).unwrap();
    assert_eq!(b.params.h, 1);
    assert!(b.family.epsilon(&b.ctx) >= 3);
    assert!(verify_pyramid(&b).unwrap().valid);
}

// ---------------------------------------------------------------------------
// Projection onto a minor
// ---------------------------------------------------------------------------

#[test]
fn projection_prunes_to_the_survivors() {
    // Deleting point 6 from the point pyramid's world kills {6} and its
    // split partner {5}; the other twelve points survive.
    let p = point_pyramid();
    let base = p.ctx.base().clone();
    let n = Minor::assemble(base, Subset::singleton(0), Subset::singleton(6)).unwrap();
    let fam = SetFamily::new(vec![Subset::singleton(1)]);
    let out = minor_project_pyramid(&p, &n, &fam).unwrap();
    assert_eq!(out.family.len(), 12);
    assert!(!out.family.contains_member(Subset::singleton(5)));
    assert!(!out.family.contains_member(Subset::singleton(6)));
    assert_eq!(out.spine, vec![0]);
    assert!(verify_pyramid(&out).unwrap().valid);
    // The projected view un-contracts the spine: only the deletion remains.
    assert_eq!(out.ctx.contract_set(), Subset::EMPTY);
    assert_eq!(out.ctx.delete_set(), Subset::singleton(6));
}

#[test]
fn projection_rejects_a_dead_required_member() {
    let p = point_pyramid();
    let base = p.ctx.base().clone();
    let n = Minor::assemble(base, Subset::singleton(0), Subset::singleton(6)).unwrap();
    let fam = SetFamily::new(vec![Subset::singleton(5)]);
    assert!(matches!(
        minor_project_pyramid(&p, &n, &fam).unwrap_err(),
        mcov_core::Error::Construction(_)
    ));
}

#[test]
fn projection_input_checks() {
    let p = point_pyramid();
    let base = p.ctx.base().clone();
    // Target must contract the spine.
    let identity = Minor::of(base.clone());
    let fam = SetFamily::new(vec![Subset::singleton(1)]);
    assert!(minor_project_pyramid(&p, &identity, &fam).is_err());
    // Foreign base.
    let other = Minor::of(Arc::new(Matroid::pg(4, 2).unwrap()));
    assert!(minor_project_pyramid(&p, &other, &fam).is_err());
    // Required member must belong to the pyramid.
    let n = Minor::assemble(base, Subset::singleton(0), Subset::EMPTY).unwrap();
    let stranger = SetFamily::new(vec![Subset::from_indices([1, 2])]);
    assert!(matches!(
        minor_project_pyramid(&p, &n, &stranger).unwrap_err(),
        mcov_core::Error::NotAMember
    ));
}

// ---------------------------------------------------------------------------
// Augmentation
// ---------------------------------------------------------------------------

#[test]
fn augment_rebuilds_a_shrunk_geometry_pyramid() {
    // Contract the first spine point of the height-2 binary pyramid, then
    // augment it back: the full point family of the plane supplies the
    // lifts, and the rebuilt pyramid matches the original.
    let p2 = pg_pyramid(2, 2, 2).unwrap();
    let p_small = shrink_pyramid(&p2, 0, 1).unwrap();
    let e = p2.spine[0];
    let m = Minor::of(p_small.ctx.base().clone());
    let fam = SetFamily::singletons_of(m.live().without(e));
    let out = augment_pyramid(&m, e, &fam, 1, &p_small).unwrap();
    assert_eq!(out.spine, p2.spine);
    assert_eq!(out.params, PyramidParams { a: 1, q: 2, h: 2, d: 2 });
    assert_eq!(out.family.members().to_vec(), p2.family.members().to_vec());
    assert!(verify_pyramid(&out).unwrap().valid);
}

#[test]
fn augment_over_the_ternary_plane() {
    let p2 = pg_pyramid(3, 2, 2).unwrap();
    let p_small = shrink_pyramid(&p2, 0, 1).unwrap();
    let e = p2.spine[0];
    let m = Minor::of(p_small.ctx.base().clone());
    let fam = SetFamily::singletons_of(m.live().without(e));
    let out = augment_pyramid(&m, e, &fam, 2, &p_small).unwrap();
    assert_eq!(out.params.h, 2);
    assert_eq!(out.params.q, 3);
    assert_eq!(out.family.len(), 9, "three lifts for each of three touched classes");
    assert!(verify_pyramid(&out).unwrap().valid);
}

#[test]
fn augment_input_checks() {
    let p2 = pg_pyramid(2, 2, 2).unwrap();
    let p_small = shrink_pyramid(&p2, 0, 1).unwrap();
    let e = p2.spine[0];
    let m = Minor::of(p_small.ctx.base().clone());
    let fam = SetFamily::singletons_of(m.live().without(e));

    // Splitting parameter must match q + 1.
    assert!(augment_pyramid(&m, e, &fam, 2, &p_small).is_err());
    // A member containing the distinguished element.
    let bad = SetFamily::singletons_of(m.live());
    assert!(matches!(
        augment_pyramid(&m, e, &bad, 1, &p_small).unwrap_err(),
        mcov_core::Error::Precondition(_)
    ));
    // Classes too poor: one representative per parallel class.
    let poor = SetFamily::new(vec![
        Subset::singleton(3),
        Subset::singleton(5),
    ]);
    assert!(matches!(
        augment_pyramid(&m, e, &poor, 1, &p_small).unwrap_err(),
        mcov_core::Error::Precondition(_)
    ));
    // The pyramid must contract e.
    assert!(augment_pyramid(&m, e, &fam, 1, &p2).is_err());
}

// ---------------------------------------------------------------------------
// The climb step
// ---------------------------------------------------------------------------

#[test]
fn climb_firms_up_via_the_flat_scan() {
    // PG(1,2) pyramid: both members sit in the single rank-2 flat, whose
    // span they firmly fill.
    let p = pg_pyramid(2, 1, 2).unwrap();
    let fam = SetFamily::new(vec![p.family.member(0)]);
    match climb_inductive(&p, &fam, 1, 2, BUDGET).unwrap() {
        ClimbResult::FirmUp(f) => {
            assert_eq!(f.len(), 2);
            assert_eq!(p.ctx.rank(f.union_all()), 2);
        }
        other => panic!("expected a firm-up, got {other:?}"),
    }
}

#[test]
fn climb_lifts_when_no_flat_is_firm() {
    // U_{2,4} with spine {0} and two parallel-in-contraction members: at
    // d = 3 the single rank-2 flat holds only 2 members against threshold
    // 3, so the climb descends and lifts the two witnesses separately.
    let base = Arc::new(Matroid::uniform(2, 4).unwrap());
    let ctx = Minor::of(base);
    let family = SetFamily::new(vec![Subset::singleton(1), Subset::singleton(2)]);
    let p = Pyramid::new(ctx, family, vec![0], PyramidParams { a: 1, q: 2, h: 1, d: 2 });
    assert!(verify_pyramid(&p).unwrap().valid);
    let fam = SetFamily::new(vec![Subset::singleton(1)]);
    match climb_inductive(&p, &fam, 1, 3, BUDGET).unwrap() {
        ClimbResult::Lifted(out) => {
            assert_eq!(out.len(), 2, "q lifted families");
            let me = p.ctx.contract(Subset::singleton(0)).unwrap();
            let target = me.closure(fam.union_all());
            let mut spans = Vec::new();
            for xj in &out {
                let u = xj.union_all();
                assert_eq!(p.ctx.rank(u), 1);
                assert_eq!(p.ctx.rank(u.with(0)), 2, "skew to the spine element");
                assert_eq!(me.closure(u), target, "similar to the input downstairs");
                spans.push(p.ctx.closure(u));
            }
            spans.dedup();
            assert_eq!(spans.len(), 2, "pairwise dissimilar upstairs");
        }
        other => panic!("expected lifted families, got {other:?}"),
    }
}

#[test]
fn climb_lifts_rank_two_members() {
    // Line pyramid at climb firmness 8: no plane holds enough lines to be
    // 8-firm (a plane holds at most 7), so the descent lifts two dissimilar
    // classmate lines.
    let p = line_pyramid();
    let me = p.ctx.contract(Subset::singleton(0)).unwrap();
    let l1 = p.family.member(0);
    let target = me.closure(l1);
    let l2 = p
        .family
        .iter()
        .skip(1)
        .find(|&l| me.closure(l) == target)
        .expect("a classmate line exists");
    let fam = SetFamily::new(vec![l1, l2]);
    match climb_inductive(&p, &fam, 2, 8, BUDGET).unwrap() {
        ClimbResult::Lifted(out) => {
            assert_eq!(out.len(), 2);
            let mut spans = Vec::new();
            for xj in &out {
                let u = xj.union_all();
                assert_eq!(p.ctx.rank(u), 2);
                assert_eq!(me.closure(u), me.closure(fam.union_all()));
                spans.push(p.ctx.closure(u));
            }
            spans.dedup();
            assert_eq!(spans.len(), 2);
        }
        other => panic!("expected lifted families, got {other:?}"),
    }
}

#[test]
fn climb_respects_the_budget() {
    let base = Arc::new(Matroid::uniform(2, 4).unwrap());
    let ctx = Minor::of(base);
    let family = SetFamily::new(vec![Subset::singleton(1), Subset::singleton(2)]);
    let p = Pyramid::new(ctx, family, vec![0], PyramidParams { a: 1, q: 2, h: 1, d: 2 });
    let fam = SetFamily::new(vec![Subset::singleton(1)]);
    let err = climb_inductive(&p, &fam, 1, 3, 1).unwrap_err();
    assert!(matches!(err, mcov_core::Error::BudgetExhausted { .. }), "{err}");
}

#[test]
fn climb_preconditions() {
    // Height must be 1.
    let p2 = pg_pyramid(2, 2, 2).unwrap();
    let fam = SetFamily::new(vec![p2.family.member(0)]);
    assert!(climb_inductive(&p2, &fam, 1, 2, BUDGET).is_err());

    let p = pg_pyramid(2, 1, 2).unwrap();
    let fam = SetFamily::new(vec![p.family.member(0)]);
    // Member rank mismatch.
    assert!(climb_inductive(&p, &fam, 2, 2, BUDGET).is_err());
    // Firmness base too small.
    assert!(climb_inductive(&p, &fam, 1, 1, BUDGET).is_err());
    // Family must consist of pyramid members.
    let stranger = SetFamily::new(vec![Subset::singleton(0)]);
    assert!(matches!(
        climb_inductive(&p, &stranger, 1, 2, BUDGET).unwrap_err(),
        mcov_core::Error::NotAMember
    ));
    // Empty family.
    assert!(climb_inductive(&p, &SetFamily::empty(), 1, 2, BUDGET).is_err());
    // An invalid pyramid is rejected up front.
    let mut broken = pg_pyramid(2, 1, 2).unwrap();
    broken.family = SetFamily::empty();
    let f2 = SetFamily::new(vec![Subset::singleton(1)]);
    assert!(climb_inductive(&broken, &f2, 1, 2, BUDGET).is_err());
    // The family must concentrate in one contraction class: two members of
    // the point pyramid from different parallel pairs span rank 2 there.
    let pp = point_pyramid();
    let split = SetFamily::new(vec![Subset::singleton(1), Subset::singleton(3)]);
    assert!(matches!(
        climb_inductive(&pp, &split, 1, 2, BUDGET).unwrap_err(),
        mcov_core::Error::Precondition(_)
    ));
}
