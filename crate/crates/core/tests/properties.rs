use proptest::prelude::*;
use zpc_core::bounds::{in_box_region, theorem2_bounds, BoxRegion};
use zpc_core::paircorr::{
    decompose_horizontal_pairs, es_pair_count, fejer_double_sum, fejer_integral_form, lower_bound_chain,
    pcc_density_integral, pcc_histogram, same_ordinate_pair_count, Window,
};
use zpc_core::store::{build_synthetic, parse_odlyzko, write_odlyzko, IngestOptions, Source, SyntheticSpec, ZeroRecord, ZeroSet};

/// Seeds over a few shared ordinates plus distinct ones; β is on the line or
/// anywhere in the open strip.
fn seeds() -> impl Strategy<Value = Vec<(f64, f64, u32)>> {
    let beta = prop_oneof![Just(0.5), 0.01f64..0.99];
    let gamma = prop_oneof![
        prop::sample::select(vec![20.0, 21.5, 30.25]),
        15.0f64..60.0,
    ];
    prop::collection::vec((beta, gamma, 1u32..=3), 1..25)
}

fn synth(seeds: &[(f64, f64, u32)]) -> ZeroSet {
    build_synthetic(&SyntheticSpec::from_tuples(seeds)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn decomposition_identity(seeds in seeds()) {
        let set = synth(&seeds);
        let d = decompose_horizontal_pairs(&set).unwrap();
        prop_assert_eq!(d.lhs_bruteforce, d.diag + d.sym_diag + d.nonsym_horiz);
        prop_assert_eq!(d.lhs_bruteforce, same_ordinate_pair_count(&set));
    }

    #[test]
    fn lower_bound_chain_holds(seeds in seeds()) {
        let chain = lower_bound_chain(&synth(&seeds));
        prop_assert!(chain.holds());
    }

    #[test]
    fn fejer_sum_properties(seeds in seeds(), t in 60.0f64..500.0) {
        let set = synth(&seeds);
        let r = fejer_double_sum(&set, t, Window::ZeroToT).unwrap();
        let diag: f64 = set.records().iter().map(|r| (r.multiplicity as f64).powi(2)).sum();
        prop_assert_eq!(r.diagonal, diag);
        prop_assert!(r.off_diagonal >= 0.0);
        prop_assert!(r.total >= r.diagonal);
        prop_assert!((r.total - (r.diagonal + r.off_diagonal)).abs() <= 1e-12 * r.total);
        let q = fejer_integral_form(&set, t, Window::ZeroToT, 64, 1e-12).unwrap();
        prop_assert!((q.value - r.total).abs() <= 1e-8 * r.total, "{} vs {}", q.value, r.total);
    }

    #[test]
    fn doubling_multiplicities_quadruples_integral_form(seeds in seeds()) {
        let doubled: Vec<_> = seeds.iter().map(|&(b, g, m)| (b, g, 2 * m)).collect();
        let a = fejer_integral_form(&synth(&seeds), 100.0, Window::ZeroToT, 64, 1e-12).unwrap().value;
        let b = fejer_integral_form(&synth(&doubled), 100.0, Window::ZeroToT, 64, 1e-12).unwrap().value;
        prop_assert!((b - 4.0 * a).abs() <= 1e-9 * b);
    }

    #[test]
    fn es_monotone_and_consistent_with_histogram(seeds in seeds(), l1 in 0.01f64..3.0, l2 in 0.01f64..3.0) {
        let set = synth(&seeds);
        let t = 100.0;
        let (lo, hi) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
        let a = es_pair_count(&set, t, lo).unwrap().count;
        let b = es_pair_count(&set, t, hi).unwrap().count;
        prop_assert!(a <= b);
        // one-sided strictly positive gaps = (all ordered pairs − equal-ordinate pairs) / 2
        let h = pcc_histogram(&set, t, hi, 8).unwrap();
        let binned: u128 = h.counts.iter().sum();
        prop_assert_eq!(2 * binned, b - same_ordinate_pair_count(&set));
    }

    #[test]
    fn pcc_density_bounded_and_monotone(a in 0.0f64..8.0, b in 0.0f64..8.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (x, y) = (pcc_density_integral(lo), pcc_density_integral(hi));
        prop_assert!(x <= y + 1e-12);
        prop_assert!(y <= hi + 1e-12);
        prop_assert!(x >= 0.0);
    }

    #[test]
    fn bounds_monotone_in_c(c in 1.0f64..2.0) {
        let one = theorem2_bounds(1.0);
        let b = theorem2_bounds(c);
        prop_assert!(b.valid);
        prop_assert_eq!(b.simple, b.critical);
        prop_assert!(one.simple >= b.simple && one.critical >= b.critical);
        if let Some(x) = b.simple_and_critical {
            prop_assert!(one.simple_and_critical.unwrap() >= x);
            prop_assert!((0.0..=1.0).contains(&x));
        }
        prop_assert_eq!(b.simple_and_critical.is_some(), c < 1.5);
    }

    #[test]
    fn box_monotone_in_b(beta in 0.3f64..0.7, gamma in 500.0f64..2500.0, b in 0.01f64..2.0, extra in 0.0f64..2.0) {
        let rec = ZeroRecord { beta, ..ZeroRecord::on_line(gamma, 0.0, Source::Synthetic) };
        let small = BoxRegion::new(b, 1000.0).unwrap();
        let large = BoxRegion::new(b + extra, 1000.0).unwrap();
        if in_box_region(&rec, &small) {
            prop_assert!(in_box_region(&rec, &large));
        }
    }

    #[test]
    fn native_round_trip(seeds in seeds()) {
        let set = synth(&seeds);
        let text = set.to_native();
        let back = ZeroSet::from_native(&text).unwrap();
        prop_assert_eq!(&back, &set);
        prop_assert_eq!(back.to_native(), text);
    }

    #[test]
    fn odlyzko_round_trip(gaps in prop::collection::vec(0.001f64..3.0, 1..200)) {
        let mut g = 14.0;
        let recs: Vec<ZeroRecord> = gaps.iter().map(|d| { g += d; ZeroRecord::on_line(g, 4e-9, Source::Ingested) }).collect();
        let set = ZeroSet::new(recs, 0.0, g, "", zpc_core::store::Completeness::IngestedComplete).unwrap();
        let parsed = parse_odlyzko(write_odlyzko(&set).as_bytes(), IngestOptions::default()).unwrap();
        prop_assert_eq!(parsed.len(), set.len());
        for (a, b) in parsed.records().iter().zip(set.records()) {
            prop_assert!((a.gamma - b.gamma).abs() <= 5e-10);
        }
    }
}
