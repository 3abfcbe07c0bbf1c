//! Thickness, firmness, scatteredness, and uniform-minor detection,
//! cross-checked against brute-force definitions.

use mcov_core::budget::DEFAULT_NODE_BUDGET;
use mcov_core::family::SetFamily;
use mcov_core::flats::enumerate_flats;
use mcov_core::matroid::{Matroid, Minor};
use mcov_core::structure::*;
use mcov_core::subset::{k_subsets, Subset};
use mcov_core::Verdict;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn fano() -> Minor {
    Matroid::pg(3, 2).unwrap().into_view()
}

fn instances() -> Vec<(String, Minor)> {
    let mut out: Vec<(String, Minor)> = vec![
        ("fano".into(), fano()),
        ("pg-2-3".into(), Matroid::pg(3, 3).unwrap().into_view()),
        ("u-3-6".into(), Matroid::uniform(3, 6).unwrap().into_view()),
        ("u-2-5".into(), Matroid::uniform(2, 5).unwrap().into_view()),
        (
            "k4".into(),
            Matroid::graphic(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
                .unwrap()
                .into_view(),
        ),
    ];
    let fano_base = Arc::new(Matroid::pg(3, 2).unwrap());
    out.push(("fano/0".into(), Minor::of(fano_base).contract(Subset::singleton(0)).unwrap()));
    out
}

// ---------------------------------------------------------------------------
// Thickness
// ---------------------------------------------------------------------------

#[test]
fn thickness_closed_forms() {
    // U_{r,n} with r >= 2: covering by rank-(r-1) flats, each holding r-1
    // elements, takes ceil(n / (r-1)).
    for n in 2..=8usize {
        for r in 2..=n {
            let v = Matroid::uniform(r, n).unwrap().into_view();
            let expect = (n as u64).div_ceil(r as u64 - 1);
            assert_eq!(
                thickness(&v, v.live()).unwrap(),
                Thickness::Finite(expect),
                "U_{{{r},{n}}}"
            );
        }
    }
    // Projective geometries: hyperplane covers take q + 1 flats.
    for (rank, q) in [(3usize, 2u32), (3, 3), (3, 4), (4, 2)] {
        let v = Matroid::pg(rank, q).unwrap().into_view();
        assert_eq!(thickness(&v, v.live()).unwrap(), Thickness::Finite(q as u64 + 1));
    }
}

#[test]
fn thickness_of_low_rank_sets_is_unbounded() {
    let v = fano();
    assert_eq!(thickness(&v, Subset::EMPTY).unwrap(), Thickness::Unbounded);
    assert_eq!(thickness(&v, Subset::singleton(3)).unwrap(), Thickness::Unbounded);
    assert!(Thickness::Unbounded.at_least(u64::MAX));
    assert!(Thickness::Finite(4).at_least(4));
    assert!(!Thickness::Finite(4).at_least(5));
    // A rank-1 set with parallel elements is still unbounded.
    let g = Matroid::graphic(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap().into_view();
    assert_eq!(thickness(&g, Subset::from_indices([0, 1])).unwrap(), Thickness::Unbounded);
}

#[test]
fn thickness_of_restrictions() {
    // A line of the ternary plane restricts to a 4-point rank-2 set:
    // thickness 4. A Fano line: 3.
    let pg = Matroid::pg(3, 3).unwrap().into_view();
    let line = pg.closure(Subset::from_indices([0, 1]));
    assert_eq!(thickness(&pg, line).unwrap(), Thickness::Finite(4));
    assert!(is_d_thick(&pg, line, 4).unwrap());
    assert!(!is_d_thick(&pg, line, 5).unwrap());

    let f = fano();
    let fline = f.closure(Subset::from_indices([0, 1]));
    assert_eq!(thickness(&f, fline).unwrap(), Thickness::Finite(3));
}

// ---------------------------------------------------------------------------
// Firmness
// ---------------------------------------------------------------------------

/// Brute-force firmness: enumerate every nonempty subfamily, keep those
/// whose union has rank below the family span, and compare the largest
/// against the 1/d fraction.
fn firm_oracle(ctx: &Minor, fam: &SetFamily, d: u64) -> bool {
    if fam.is_empty() {
        return true;
    }
    let span_rank = ctx.rank(fam.union_all());
    let n = fam.len();
    let mut worst = 0usize;
    for mask in 1u32..(1u32 << n) {
        let mut u = Subset::EMPTY;
        for i in 0..n {
            if mask & (1 << i) != 0 {
                u = u.union(fam.member(i));
            }
        }
        if ctx.rank(u) < span_rank {
            worst = worst.max(mask.count_ones() as usize);
        }
    }
    (worst as u64).saturating_mul(d) <= n as u64
}

#[test]
fn fano_singletons_firmness() {
    let v = fano();
    let fam = SetFamily::singletons_of(v.live());
    let two = is_d_firm(&v, &fam, 2).unwrap();
    assert!(two.firm, "3 collinear of 7 is within 1/2");
    assert!(two.witness.is_empty());
    let three = is_d_firm(&v, &fam, 3).unwrap();
    assert!(!three.firm, "3 collinear of 7 exceeds 1/3");
    assert_eq!(three.witness.len(), 3);
    // The witness is a common-hyperplane subfamily violating the fraction.
    let u = three
        .witness
        .iter()
        .fold(Subset::EMPTY, |acc, &i| acc.union(fam.member(i)));
    assert!(v.rank(u) < v.rank(fam.union_all()));
    assert!(3 * 3 > fam.len());
}

#[test]
fn firmness_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    for (id, v) in instances() {
        let live: Vec<usize> = v.live().to_vec();
        for trial in 0..6 {
            let size = rng.gen_range(3..=8usize);
            let mut fam = SetFamily::empty();
            for _ in 0..size {
                let card = rng.gen_range(1..=3usize);
                let mut m = Subset::EMPTY;
                while m.card() < card {
                    m = m.with(live[rng.gen_range(0..live.len())]);
                }
                fam.push(m);
            }
            for d in 1..=4u64 {
                let got = is_d_firm(&v, &fam, d).unwrap();
                let want = firm_oracle(&v, &fam, d);
                assert_eq!(got.firm, want, "{id} trial {trial} d={d} fam={fam:?}");
                if !got.firm {
                    // Witness: union has proper rank and the count violates.
                    let u = got
                        .witness
                        .iter()
                        .fold(Subset::EMPTY, |acc, &i| acc.union(fam.member(i)));
                    assert!(v.rank(u) < v.rank(fam.union_all()), "{id} witness rank");
                    assert!((got.witness.len() as u64) * d > fam.len() as u64);
                }
            }
        }
    }
}

#[test]
fn firmness_edge_cases() {
    let v = fano();
    assert!(is_d_firm(&v, &SetFamily::empty(), 3).unwrap().firm);
    let single = SetFamily::new(vec![Subset::from_indices([0, 1])]);
    assert!(is_d_firm(&v, &single, 1_000_000).unwrap().firm, "no proper subfamily exists");
    assert!(is_d_firm(&v, &SetFamily::empty(), 0).is_err());
    // Members outside the live set are rejected.
    let base = Arc::new(Matroid::pg(3, 2).unwrap());
    let m = Minor::of(base).delete(Subset::singleton(6)).unwrap();
    let stale = SetFamily::new(vec![Subset::singleton(6)]);
    assert!(is_d_firm(&m, &stale, 2).is_err());
}

#[test]
fn one_firm_families_are_everything() {
    // d = 1 allows every subfamily: firm iff no proper-rank subfamily has
    // more than the whole family, which never happens.
    let v = fano();
    let fam = SetFamily::singletons_of(Subset::from_indices([0, 1, 2, 3]));
    assert!(is_d_firm(&v, &fam, 1).unwrap().firm);
}

// ---------------------------------------------------------------------------
// Scatteredness
// ---------------------------------------------------------------------------

/// Independent family-cover weight: DP over member bitmasks with every flat
/// of the view as a candidate.
fn family_cover_oracle(ctx: &Minor, fam: &SetFamily, d: u64) -> u64 {
    let lattice = enumerate_flats(ctx, ctx.rank_full()).unwrap();
    let mut cands: Vec<(u64, u64)> = Vec::new();
    for (k, layer) in lattice.by_rank.iter().enumerate() {
        let w = d.pow(k as u32);
        for &f in layer {
            let mut cov = 0u64;
            for (t, m) in fam.iter().enumerate() {
                if m.is_subset_of(f) {
                    cov |= 1 << t;
                }
            }
            if cov != 0 {
                cands.push((cov, w));
            }
        }
    }
    let n = fam.len();
    let size = 1usize << n;
    let mut dp = vec![u64::MAX; size];
    dp[0] = 0;
    for mask in 0..size {
        if dp[mask] == u64::MAX || mask == size - 1 {
            continue;
        }
        let t = (!(mask as u64)).trailing_zeros();
        for &(cov, w) in &cands {
            if cov & (1u64 << t) != 0 {
                let nm = (mask as u64 | cov) & ((size - 1) as u64);
                let v = dp[mask].saturating_add(w);
                if v < dp[nm as usize] {
                    dp[nm as usize] = v;
                }
            }
        }
    }
    dp[size - 1]
}

#[test]
fn scattered_equality_case() {
    // Two disjoint lines of the rank-4 ternary geometry: closures are the
    // lines themselves (weight 4 + 4 = 8 at d=2) and no cheaper cover
    // exists, so the family is scattered with the two weights equal.
    let v = Matroid::pg(4, 3).unwrap().into_view();
    let l1 = v.closure(Subset::from_indices([0, 1]));
    let mut l2 = Subset::EMPTY;
    'outer: for e in v.live().minus(l1).iter() {
        for f in v.live().minus(l1).iter() {
            if f <= e {
                continue;
            }
            let cand = v.closure(Subset::from_indices([e, f]));
            if cand.is_disjoint(l1) {
                l2 = cand;
                break 'outer;
            }
        }
    }
    let fam = SetFamily::new(vec![l1, l2]);
    let check = is_d_scattered(&v, &fam, 2).unwrap();
    assert!(check.scattered);
    assert_eq!(check.closure_weight, 8);
    assert_eq!(check.cover_weight, 8);
    assert_eq!(check.thin_member, None);
}

#[test]
fn scattered_rejects_thin_member() {
    // {0,1} restricts to a 2-point rank-2 set: thickness 2 < 3.
    let v = Matroid::uniform(3, 6).unwrap().into_view();
    let fam = SetFamily::new(vec![Subset::from_indices([2, 3]), Subset::from_indices([0, 1])]);
    let check = is_d_scattered(&v, &fam, 3).unwrap();
    assert!(!check.scattered);
    assert_eq!(check.thin_member, Some(0), "first thin member reported");
}

#[test]
fn scattered_rejects_merged_cover() {
    // The three lines of a minimum line cover of the binary plane: each is
    // 3-thick, closures weigh 3 * 4 = 12 at d=2, but the whole plane covers
    // the family at weight 8.
    let v = fano();
    let (_, cover) = mcov_core::cover::tau_a(&v, 2).unwrap();
    assert_eq!(cover.count(), 3);
    let fam: SetFamily = cover.flats.iter().copied().collect();
    let check = is_d_scattered(&v, &fam, 2).unwrap();
    assert!(!check.scattered);
    assert_eq!(check.closure_weight, 12);
    assert_eq!(check.cover_weight, 8);
    assert_eq!(check.thin_member, None);
}

#[test]
fn scattered_cover_weight_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD15C0);
    for (id, v) in instances() {
        let live: Vec<usize> = v.live().to_vec();
        for trial in 0..4 {
            let size = rng.gen_range(2..=6usize);
            let mut fam = SetFamily::empty();
            for _ in 0..size {
                let card = rng.gen_range(2..=3usize);
                let mut m = Subset::EMPTY;
                while m.card() < card {
                    m = m.with(live[rng.gen_range(0..live.len())]);
                }
                fam.push(m);
            }
            for d in [2u64, 3] {
                let check = is_d_scattered(&v, &fam, d).unwrap();
                if check.thin_member.is_some() {
                    continue;
                }
                let want = family_cover_oracle(&v, &fam, d);
                assert_eq!(check.cover_weight, want, "{id} trial {trial} d={d}");
                assert!(check.closure_weight >= check.cover_weight, "closures are a cover");
                assert_eq!(check.scattered, check.closure_weight == check.cover_weight);
            }
        }
    }
}

#[test]
fn closure_weight_prices_the_span() {
    let v = fano();
    assert_eq!(closure_weight(&v, Subset::from_indices([0, 1]), 2).unwrap(), 4);
    assert_eq!(closure_weight(&v, v.live(), 2).unwrap(), 8);
    assert_eq!(closure_weight(&v, Subset::EMPTY, 7).unwrap(), 1);
}

// ---------------------------------------------------------------------------
// Uniform-minor search
// ---------------------------------------------------------------------------

/// Brute-force search for the arc witness: every independent contraction,
/// every b-subset of the remaining elements.
fn uniform_minor_oracle(ctx: &Minor, a: usize, b: usize) -> bool {
    let r = ctx.rank_full();
    if r < a + 1 {
        return false;
    }
    for csize in 0..=(r - a - 1) {
        for c in k_subsets(ctx.live(), csize) {
            if ctx.rank(c) != csize {
                continue;
            }
            let view = ctx.contract(c).unwrap();
            for x in k_subsets(view.live(), b) {
                if view.rank(x) != a + 1 {
                    continue;
                }
                if k_subsets(x, a + 1).iter().all(|&s| view.rank(s) == a + 1) {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn uniform_minor_matches_brute_force() {
    let cases: Vec<(String, Minor)> = vec![
        ("u-2-5".into(), Matroid::uniform(2, 5).unwrap().into_view()),
        ("u-2-4".into(), Matroid::uniform(2, 4).unwrap().into_view()),
        ("u-4-6".into(), Matroid::uniform(4, 6).unwrap().into_view()),
        ("fano".into(), fano()),
        ("pg-2-3".into(), Matroid::pg(3, 3).unwrap().into_view()),
        (
            "k4".into(),
            Matroid::graphic(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
                .unwrap()
                .into_view(),
        ),
        (
            "c5".into(),
            Matroid::graphic(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
                .unwrap()
                .into_view(),
        ),
    ];
    for (id, v) in cases {
        for (a, b) in [(1usize, 3usize), (1, 4), (2, 4)] {
            if v.rank_full() < a + 1 {
                continue;
            }
            let got = has_uniform_minor(&v, a, b, DEFAULT_NODE_BUDGET).unwrap();
            let want = uniform_minor_oracle(&v, a, b);
            assert_eq!(got.is_some(), want, "{id} (a,b)=({a},{b})");
            if let Some(w) = got {
                w.verify(&v).unwrap();
                assert_eq!((w.a, w.b), (a, b));
            }
        }
    }
}

#[test]
fn uniform_minor_known_answers() {
    // A 4-point line sits inside the ternary plane directly.
    let pg = Matroid::pg(3, 3).unwrap().into_view();
    let w = has_uniform_minor(&pg, 1, 4, DEFAULT_NODE_BUDGET).unwrap().unwrap();
    assert_eq!(w.contract, Subset::EMPTY);
    assert_eq!(w.arc.card(), 4);

    // The binary plane has only 3-point lines, even after contraction.
    assert!(has_uniform_minor(&fano(), 1, 4, DEFAULT_NODE_BUDGET).unwrap().is_none());

    // U_{4,6} needs one contraction to reach a 4-point rank-3 flat.
    let u46 = Matroid::uniform(4, 6).unwrap().into_view();
    let w = has_uniform_minor(&u46, 2, 4, DEFAULT_NODE_BUDGET).unwrap().unwrap();
    assert_eq!(w.contract.card(), 1, "smallest contraction wins");
    w.verify(&u46).unwrap();

    // Greedy order is deterministic: U_{2,5} yields the first four points.
    let u25 = Matroid::uniform(2, 5).unwrap().into_view();
    let w = has_uniform_minor(&u25, 1, 4, DEFAULT_NODE_BUDGET).unwrap().unwrap();
    assert_eq!(w.contract, Subset::EMPTY);
    assert_eq!(w.arc, Subset::from_indices([0, 1, 2, 3]));
}

#[test]
fn uniform_minor_budget_exhaustion() {
    let pg = Matroid::pg(3, 3).unwrap().into_view();
    let err = has_uniform_minor(&pg, 1, 4, 1).unwrap_err();
    assert!(matches!(err, mcov_core::Error::BudgetExhausted { budget: 1 }), "{err}");
}

#[test]
fn uniform_minor_input_validation() {
    let v = fano();
    assert!(has_uniform_minor(&v, 0, 3, 100).is_err());
    assert!(has_uniform_minor(&v, 2, 3, 100).is_err());
}

// ---------------------------------------------------------------------------
// The thick-implies-uniform check
// ---------------------------------------------------------------------------

#[test]
fn thick_implies_uniform_verdicts() {
    // Ternary plane, (a,b) = (1,4): threshold C(4,1) = 4, thickness 4, so
    // the hypothesis holds and the 4-point line is found.
    let pg = Matroid::pg(3, 3).unwrap().into_view();
    let (v1, w1) = check_thick_implies_uniform(&pg, 1, 4, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(v1, Verdict::Pass);
    w1.unwrap().verify(&pg).unwrap();

    // Binary plane: thickness 3 < 4, hypothesis fails, vacuous.
    let (v2, w2) = check_thick_implies_uniform(&fano(), 1, 4, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(v2, Verdict::Vacuous);
    assert!(w2.is_none());

    // Rank at most a: vacuous.
    let u13 = Matroid::uniform(1, 3).unwrap().into_view();
    let (v3, _) = check_thick_implies_uniform(&u13, 1, 3, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(v3, Verdict::Vacuous);

    // Exhausted budget surfaces as its own verdict, not an error.
    let (v4, w4) = check_thick_implies_uniform(&pg, 1, 4, 1).unwrap();
    assert_eq!(v4, Verdict::BudgetExceeded);
    assert!(w4.is_none());
}

#[test]
fn thick_implies_uniform_on_uniform_matroids() {
    // U_{3,8}: thickness ceil(8/2) = 4 = C(4,1); the hypothesis holds and
    // a 4-point rank-2 minor exists (contract one element, take any 4).
    let v = Matroid::uniform(3, 8).unwrap().into_view();
    let (verdict, w) = check_thick_implies_uniform(&v, 1, 4, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(verdict, Verdict::Pass);
    w.unwrap().verify(&v).unwrap();

    // U_{3,7}: thickness ceil(7/2) = 4 >= 4 still passes.
    let v7 = Matroid::uniform(3, 7).unwrap().into_view();
    let (verdict7, _) = check_thick_implies_uniform(&v7, 1, 4, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(verdict7, Verdict::Pass);

    // U_{3,6}: thickness 3 < 4, vacuous.
    let v6 = Matroid::uniform(3, 6).unwrap().into_view();
    let (verdict6, _) = check_thick_implies_uniform(&v6, 1, 4, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(verdict6, Verdict::Vacuous);
}
