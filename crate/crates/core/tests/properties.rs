use lydim_core::dimension::{box_count, estimate_dimension};
use lydim_core::expanding::examples;
use lydim_core::symbolic::phi_inverse_word;
use lydim_core::witness::{
    build_witness, delta_k, pr_map, verify_liyorke_geometric, verify_liyorke_symbolic,
    GeometricThresholds, WitnessSchedule,
};
use lydim_core::{
    Exact, Interval, PiecewiseExpandingMap, Scalar, Symbol, SymbolStream, SymbolWord,
    TransitionMatrix,
};
use proptest::prelude::*;

fn star_stream(m: usize, choices: &[Symbol]) -> SymbolStream {
    // every non-1 symbol is followed by a 1
    let mut out = Vec::new();
    for &c in choices {
        out.push(c);
        if c != 1 {
            out.push(1);
        }
    }
    SymbolStream::new(m, out).unwrap()
}

fn choices(m: usize, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Symbol>> {
    proptest::collection::vec(1..=m as Symbol, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witnesses_pass_the_sync_checks(
        (m, s, p) in (2usize..=5).prop_flat_map(|m| (Just(m), choices(m, 900..1000), choices(m, 900..1000)))
    ) {
        let a = TransitionMatrix::star(m, true).unwrap();
        let sched = WitnessSchedule::default();
        let s = star_stream(m, &s);
        let p = star_stream(m, &p);
        let t = build_witness(&s, &sched, &a, &p).unwrap();
        prop_assert!(t.is_admissible(&a).unwrap());
        let report = verify_liyorke_symbolic(&s, &t, &sched, 9).unwrap();
        prop_assert!(report.passed);
    }

    #[test]
    fn pr_is_injective_on_distinct_payloads(
        x in choices(3, 40..60),
        y in choices(3, 40..60),
    ) {
        let a = TransitionMatrix::star(3, true).unwrap();
        let sched = WitnessSchedule::default();
        let s = SymbolStream::constant(3, 1, 2000).unwrap();
        let (x, y) = (star_stream(3, &x), star_stream(3, &y));
        let n = x.horizon().min(y.horizon());
        let (x, y) = (x.truncated(n).unwrap(), y.truncated(n).unwrap());
        let px = pr_map(&x, &s, &sched, &a).unwrap();
        let py = pr_map(&y, &s, &sched, &a).unwrap();
        prop_assert_eq!(x == y, px == py);
    }

    #[test]
    fn delta_stays_below_its_bound(alpha in choices(2, 1..600)) {
        let w = SymbolWord::new(2, alpha).unwrap();
        let r = delta_k(&w, &WitnessSchedule::default()).unwrap();
        prop_assert!(r.delta < r.bound);
        prop_assert_eq!(r.preimage_len, phi_inverse_word(&w).len());
    }

    #[test]
    fn delta_is_nondecreasing(alpha in choices(3, 2..300)) {
        let sched = WitnessSchedule::default();
        let w = SymbolWord::new(3, alpha).unwrap();
        let deltas: Vec<usize> = (1..=w.len())
            .map(|n| delta_k(&w.prefix(n).unwrap(), &sched).unwrap().delta)
            .collect();
        prop_assert!(deltas.windows(2).all(|d| d[0] <= d[1]));
    }

    #[test]
    fn box_counts_are_monotone(
        raw in proptest::collection::vec((0.0f64..1.0, 0.0f64..0.05), 1..40),
        e in 1u32..8,
    ) {
        let domain = Interval::new(0.0, 1.0).unwrap();
        let cover: Vec<_> = raw.iter().map(|&(lo, len)| Interval::spanning(lo, (lo + len).min(1.0))).collect();
        let eps = 2f64.powi(-(e as i32));
        let coarse = box_count(&cover, eps, &domain).unwrap().count;
        let fine = box_count(&cover, eps / 2.0, &domain).unwrap().count;
        prop_assert!(fine >= coarse);
    }
}

#[test]
fn estimates_are_deterministic() {
    let f = examples::two_four::<f64>();
    let a = estimate_dimension(&f, 6..=12, 1 << 20).unwrap();
    let b = estimate_dimension(&f, 6..=12, 1 << 20).unwrap();
    assert_eq!(a, b);
    assert!((a.slope - 0.694_241_913_630_617).abs() < 0.05);
}

#[test]
fn geometric_witness_on_the_middle_thirds_map() {
    let f: PiecewiseExpandingMap<Exact> = examples::middle_thirds();
    let full = TransitionMatrix::full(2).unwrap();
    let sched = WitnessSchedule::default();
    let pattern: Vec<Symbol> = (0..300)
        .map(|k| if (k * k + k / 3) % 5 < 2 { 2 } else { 1 })
        .collect();
    let s = SymbolStream::new(2, pattern).unwrap();
    let payload = SymbolStream::constant(2, 1, 300).unwrap();
    let t = build_witness(&s, &sched, &full, &payload).unwrap();
    let x = f.code_to_point(&s.prefix(260).unwrap()).unwrap();
    let y = f.code_to_point(&t.prefix(260).unwrap()).unwrap();
    let thresholds = GeometricThresholds {
        eps_prox: 1e-2,
        eps_sep: 0.3,
        window: 20,
        tail: 100,
    };
    let report = verify_liyorke_geometric(&f, &x, &y, 200, &thresholds).unwrap();
    assert!(
        report.proximality_witnessed && report.separation_witnessed,
        "{report:?}"
    );
    assert_eq!(
        report.verdict,
        "Li-Yorke behaviour witnessed at horizon 200"
    );

    let same = verify_liyorke_geometric(&f, &x, &x, 200, &thresholds).unwrap();
    assert!(!same.separation_witnessed);
}

#[test]
fn escaping_orbits_fail_loudly() {
    let f: PiecewiseExpandingMap<Exact> = examples::middle_thirds();
    let gap_point = Exact::from_ratio(1, 2);
    let thresholds = GeometricThresholds {
        eps_prox: 1e-2,
        eps_sep: 0.3,
        window: 5,
        tail: 5,
    };
    let err = verify_liyorke_geometric(&f, &gap_point, &Exact::from_ratio(0, 1), 10, &thresholds)
        .unwrap_err();
    assert!(matches!(err, lydim_core::Error::Escape { step: 0, .. }));
}
