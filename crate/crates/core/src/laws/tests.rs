use super::*;
use crate::group::GroupContext;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn ints(v: &[i64]) -> PointSet {
    PointSet::from_ints(v)
}

fn square() -> PointSet {
    PointSet::from_coords(2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]).unwrap()
}

fn trapezoid() -> PointSet {
    PointSet::from_coords(2, &[&[0, 0], &[1, 0], &[0, 1], &[3, 1]]).unwrap()
}

fn window(lo: i64, hi: i64, card: usize) -> SearchConfig {
    SearchConfig::default().with_box(&[(lo, hi)]).with_card(card)
}

fn assert_verified(v: &Verdict) {
    assert!(v.holds, "{}", v.to_json());
    assert_eq!(v.status, Status::Verified, "{}", v.to_json());
    assert!(v.counterexample.is_none());
    assert_eq!(&v.replay().unwrap(), v);
}

#[test]
fn quasicube_beta_examples() {
    let v = check_quasicube_beta(&square(), &square(), &window(-1, 2, 4)).unwrap();
    assert_verified(&v);
    assert_eq!(v.margin, Some(Margin::Exact(q(0, 1))));
    assert_eq!(v.evidence["witness_a"], serde_json::json!([[0, 0]]));

    let t = trapezoid();
    let v = check_quasicube_beta(&t, &t, &SearchConfig::default().with_box(&[(0, 3), (0, 1)])).unwrap();
    assert_verified(&v);
    assert_eq!(v.evidence["value_exact"], "16/1");

    let p = ints(&[5]);
    assert_verified(&check_quasicube_beta(&p, &p, &window(0, 2, 2)).unwrap());
}

#[test]
fn quasicube_beta_rejects_bad_inputs() {
    let line = ints(&[0, 1, 2]);
    assert!(matches!(
        check_quasicube_beta(&line, &line, &window(0, 3, 3)),
        Err(Error::Precondition(_))
    ));
    let hill = window(0, 3, 3).with_strategy(Strategy::HillClimb);
    assert!(check_quasicube_beta(&square(), &square(), &hill).is_err());
}

#[test]
fn prekopa_examples() {
    let edge = ints(&[0, 1]);
    let three = Exponent::new(3, 1).unwrap();
    let v = check_prekopa_discrete(&edge, &edge, &three, &window(-2, 3, 4)).unwrap();
    assert_verified(&v);
    // A = {0}, B = {0,1} gives 3 / 2^{2/3}, which is exactly 2 c_3: the
    // bound is attained.
    let c3 = 3f64.powf(1.0 / 3.0) * 1.5f64.powf(2.0 / 3.0) / 2.0;
    assert!((3.0 / 2f64.powf(2.0 / 3.0) - 2.0 * c3).abs() < 1e-15);
    match v.margin {
        Some(Margin::Float(m)) => assert!(m.abs() < 1e-12, "{m}"),
        ref m => panic!("{m:?}"),
    }
    assert_eq!(v.evidence["witness_a"], serde_json::json!([[0]]));
    assert_eq!(v.evidence["witness_b"], serde_json::json!([[0], [1]]));
    let v = check_prekopa_discrete(&square(), &square(), &Exponent::new(3, 2).unwrap(), &window(0, 2, 3)).unwrap();
    assert_verified(&v);
    let v = check_prekopa_discrete(&edge, &edge, &Exponent::TWO, &window(-2, 3, 4)).unwrap();
    assert_eq!(v.margin, Some(Margin::Exact(q(0, 1))));
}

#[test]
fn bm_examples() {
    let nine = PointSet::from_coords(2, &[&[0, 0], &[0, 1], &[0, 2], &[1, 0], &[1, 1], &[1, 2], &[2, 0], &[2, 1], &[2, 2]])
        .unwrap();
    let v = check_bm_corollary(&square(), 2, &nine, &nine).unwrap();
    assert_verified(&v);
    assert_eq!(v.evidence["sumset_size"], 36);
    let o = PointSet::from_coords(2, &[&[0, 0]]).unwrap();
    assert_verified(&check_bm_corollary(&trapezoid(), 2, &o, &o).unwrap());
    assert!(check_bm_corollary(&square(), 0, &o, &o).is_err());
    // 1-dimensional: |{0,1} + {0..3} + {0,5}| = 10 >= (2/2)(4 + 2).
    let v = check_bm_corollary(&ints(&[0, 1]), 1, &ints(&[0, 1, 2, 3]), &ints(&[0, 5])).unwrap();
    assert_verified(&v);
}

#[test]
fn bm_exact_form_matches_float_form_on_a_grid() {
    // The squared-out test for d = 2 against a direct float evaluation.
    let u = square();
    for a in 1..=6usize {
        for b in 1..=6usize {
            let aset = PointSet::from_coords(2, &(0..a as i64).map(|i| vec![i, 0]).collect::<Vec<_>>().iter().map(|v| v.as_slice()).collect::<Vec<_>>()).unwrap();
            let bset = PointSet::from_coords(2, &(0..b as i64).map(|i| vec![0, 2 * i]).collect::<Vec<_>>().iter().map(|v| v.as_slice()).collect::<Vec<_>>()).unwrap();
            let v = check_bm_corollary(&u, 2, &aset, &bset).unwrap();
            let n = sumset_many(&[&aset, &bset, &u]).unwrap().len() as f64;
            let float = n.sqrt() >= (a as f64).sqrt() + (b as f64).sqrt() - 1e-12;
            assert_eq!(v.holds, float, "{a} {b}");
        }
    }
}

#[test]
fn petridis_examples() {
    let v = check_petridis_instance(&ints(&[0]), &ints(&[0, 1]), &ints(&[0, 1])).unwrap();
    assert_verified(&v);
    assert_eq!(v.margin, Some(Margin::Exact(q(1, 1))));
    assert_verified(&check_petridis_instance(&ints(&[0]), &ints(&[0]), &ints(&[0])).unwrap());
    // {0, 10} + {0, 1} has ratio 2 but {0} alone has 2 as well; {0, 1, 10}
    // is beaten by {0, 1}.
    assert!(matches!(
        check_petridis_instance(&ints(&[0, 1, 10]), &ints(&[0, 1]), &ints(&[0])),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        check_petridis_instance(&ints(&[0, 1, 2, 3, 4, 5, 6]), &ints(&[0]), &ints(&[0])),
        Err(Error::SizeBound { .. })
    ));
}

#[test]
fn plunnecke_examples() {
    let v = check_plunnecke(&ints(&[0, 1, 2, 3, 4]), &ints(&[0, 1]), 2).unwrap();
    assert_verified(&v);
    // 36 * 5 - 7 * 25 with X' = X.
    assert_eq!(v.margin, Some(Margin::Exact(q(5, 1))));
    assert_eq!(v.evidence["x_prime"], set_json(&ints(&[0, 1, 2, 3, 4])));
    for k in 1..=4 {
        assert_verified(&check_plunnecke(&ints(&[0, 3, 7]), &ints(&[0]), k).unwrap());
    }
    assert!(check_plunnecke(&ints(&[0]), &ints(&[0]), 0).is_err());
}

#[test]
fn compression_examples() {
    let ctx = GroupContext::free(2);
    let h = Homomorphism::drop_free_coordinate(&ctx, 1).unwrap();
    let a = PointSet::from_coords(2, &[&[0, 0], &[0, 1]]).unwrap();
    let b = PointSet::from_coords(2, &[&[0, 0], &[1, 2]]).unwrap();
    assert_verified(&check_compression_shrinks(&a, &b, &h).unwrap());
    // Already compressed singleton fibers: both sides coincide.
    let a = PointSet::from_coords(2, &[&[0, 0], &[1, 0]]).unwrap();
    let v = check_compression_shrinks(&a, &a, &h).unwrap();
    assert_eq!(v.margin, Some(Margin::Exact(q(0, 1))));
}

#[test]
fn beta_is_gamma_examples() {
    let v = check_beta_is_gamma(&ints(&[0, 1]), &Exponent::TWO, &window(-2, 3, 4)).unwrap();
    assert_verified(&v);
    assert_eq!(v.evidence["beta"]["value_exact"], "4/1");
    assert_eq!(v.evidence["gamma_indicators"]["value_exact"], "4/1");
    assert_verified(&check_beta_is_gamma(&ints(&[0]), &Exponent::TWO, &window(-2, 3, 4)).unwrap());
    let v = check_beta_is_gamma(&ints(&[0, 1, 2]), &Exponent::TWO, &window(0, 4, 5)).unwrap();
    assert_verified(&v);
    assert_eq!(v.evidence["beta"]["value_exact"], v.evidence["gamma_indicators"]["value_exact"]);
}

#[test]
fn tensorization_examples() {
    let cfg = window(0, 2, 3);
    let v = check_tensorization(&ExactFunction::indicator(&square()), 1, &cfg).unwrap();
    assert!(v.holds, "{}", v.to_json());
    assert_eq!(v.status, Status::NoCounterexampleInWindow);
    // Each fiber is {0,1} with estimate 2, so the base function is 2 on {0,1}.
    assert_eq!(v.evidence["fiber_function"], serde_json::json!([[[0], "2/1"], [[1], "2/1"]]));
    assert_eq!(v.evidence["whole"]["value_exact"], "16/1");
    assert_eq!(v.evidence["reduced"]["value_exact"], "16/1");
    assert_eq!(v.evidence["multiplicative"], true);

    // One fiber: the base function is a point mass.
    let strip = PointSet::from_coords(2, &[&[0, 0], &[0, 1]]).unwrap();
    let v = check_tensorization(&ExactFunction::indicator(&strip), 1, &cfg).unwrap();
    assert!(v.holds);
    assert_eq!(v.evidence["fiber_function"].as_array().unwrap().len(), 1);

    let ctx = GroupContext::free(2);
    let f = ExactFunction::new(
        ctx.clone(),
        [
            (ctx.point(&[0, 0]).unwrap(), q(1, 1)),
            (ctx.point(&[0, 1]).unwrap(), q(1, 2)),
            (ctx.point(&[1, 0]).unwrap(), q(3, 2)),
        ],
    )
    .unwrap();
    let v = check_tensorization(&f, 1, &cfg).unwrap();
    assert!(v.holds, "{}", v.to_json());
    assert_eq!(v.evidence["multiplicative"], serde_json::Value::Null);
    assert!(check_tensorization(&f, 0, &cfg).is_err());
}

#[test]
fn trivial_bounds_examples() {
    let v = check_trivial_lower_bounds(&ints(&[0, 1]), &window(-2, 3, 4)).unwrap();
    assert_verified(&v);
    // Both bounds attained: the margin is the smaller slack, zero.
    assert_eq!(v.margin, Some(Margin::Exact(q(0, 1))));
    assert_verified(&check_trivial_lower_bounds(&ints(&[0, 3]), &window(0, 5, 4)).unwrap());

    let ctx = GroupContext::new(1, vec![2]).unwrap();
    let u = PointSet::new(ctx.clone(), [ctx.vector(vec![0], vec![0]).unwrap(), ctx.vector(vec![0], vec![1]).unwrap()])
        .unwrap();
    let v = check_trivial_lower_bounds(&u, &window(0, 1, 2)).unwrap();
    assert_verified(&v);
    assert_eq!(v.evidence["degenerate"], true);
}

#[test]
fn independence_examples() {
    let v = check_independence_beta(&ints(&[0, 1]), 2, &window(-1, 2, 3)).unwrap();
    assert_verified(&v);
    assert_eq!(v.evidence["scaled"]["value_exact"], "4/1");
    assert_verified(&check_independence_beta(&ints(&[0, 1]), 1, &window(-1, 2, 3)).unwrap());
    assert_verified(&check_independence_beta(&ints(&[0, 1, 3]), 3, &window(0, 3, 3)).unwrap());
    assert!(check_independence_beta(&square(), 2, &window(0, 2, 3)).is_err());
}

#[test]
fn chain_examples() {
    let v = check_basic_chains(&ints(&[0, 1]), &window(-2, 3, 4)).unwrap();
    assert_verified(&v);
    assert_eq!(v.margin, Some(Margin::Exact(q(0, 1))));
    let v = check_basic_chains(&ints(&[0]), &window(-2, 3, 4)).unwrap();
    assert_verified(&v);
    for quantity in ["alpha", "beta"] {
        for variant in ["unrestricted", "isometric", "isomeric"] {
            assert_eq!(v.evidence[quantity][variant]["value_exact"], "1/1");
        }
    }
    let v = check_basic_chains(&square(), &window(0, 2, 4)).unwrap();
    assert_verified(&v);
    assert_eq!(v.evidence["beta"]["unrestricted"]["value_exact"], "16/1");
}

#[test]
fn two_point_grid() {
    let grid = TwoPointGrid {
        deltas: vec![q(0, 1), q(1, 2), q(1, 1)],
        ps: vec![Exponent::TWO, Exponent::new(3, 1).unwrap()],
        max_len: 6,
        descent_starts: 2,
        seed: 5,
    };
    let v = check_two_point(&grid).unwrap();
    assert!(v.holds, "{}", v.to_json());
    let rows = v.evidence.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    // delta = 1/2 at p = 2: every family member sits exactly on 3/2.
    let row = &rows[2];
    assert_eq!(row["delta"], "1/2");
    assert!((row["c_delta"].as_f64().unwrap() - 1.5).abs() < 1e-15);
    assert_eq!(row["exact_at_p2"], true);
    assert_eq!(&v.replay().unwrap(), &v);
    let bad = TwoPointGrid { deltas: vec![q(3, 2)], ..grid };
    assert!(check_two_point(&bad).is_err());
}

#[test]
fn freiman_examples() {
    let v = check_freiman(&PointSet::from_coords(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap()).unwrap();
    assert_verified(&v);
    assert_eq!(v.margin, Some(Margin::Exact(q(0, 1))));
    let v = check_freiman(&ints(&[4])).unwrap();
    assert_eq!(v.evidence["sumset_size"], 1);
    // Arithmetic progressions are extremal in dimension 1.
    assert_eq!(check_freiman(&ints(&[0, 3, 6, 9])).unwrap().margin, Some(Margin::Exact(q(0, 1))));
}

#[test]
fn rearrangement_examples() {
    let f = ExactFunction::sequence(&[q(1, 1), q(2, 1)]).unwrap();
    let g = ExactFunction::sequence(&[q(3, 1), q(1, 1), q(2, 1)]).unwrap();
    let h = ExactFunction::sequence(&[q(1, 1)]).unwrap();
    assert_verified(&check_rearrangement(&f, &g, &h).unwrap());
    let ctx = GroupContext::free(1);
    let gappy = ExactFunction::new(ctx.clone(), [(ctx.point(&[0]).unwrap(), q(1, 1)), (ctx.point(&[2]).unwrap(), q(1, 1))])
        .unwrap();
    assert!(matches!(check_rearrangement(&f, &gappy, &h), Err(Error::Precondition(_))));
}

#[test]
fn verdict_json_shape() {
    let v = check_freiman(&ints(&[0, 1])).unwrap();
    let j = v.to_json();
    for key in ["law", "holds", "status", "margin", "inputs", "evidence", "counterexample"] {
        assert!(j.get(key).is_some(), "{key}");
    }
    assert_eq!(j["law"], "freiman");
    assert_eq!(j["status"], "verified");
    assert_eq!(j["inputs"]["a"], serde_json::json!([[0], [1]]));
}

#[test]
fn suites_are_seeded_and_pass() {
    for name in ["petridis", "compression", "freiman", "rearrangement"] {
        let a = run_suite(name, 11, 6).unwrap();
        let b = run_suite(name, 11, 6).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|v| v.holds), "{name}");
    }
    assert!(run_suite("nope", 0, 1).is_err());
}

#[test]
fn all_suite_reuses_per_suite_streams() {
    let all = run_suite("all", 2, 1).unwrap();
    let freiman = run_suite("freiman", 2, 1).unwrap();
    let inside: Vec<_> = all.iter().filter(|v| v.law == "freiman").cloned().collect();
    assert_eq!(inside, freiman);
    assert!(all.iter().all(|v| v.holds));
}
