mod common;

use common::*;
use lehmer::*;
use proptest::prelude::*;

fn sample(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..10.0, 1..max_len)
}

fn spread(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    sample(max_len).prop_filter("non-constant", |h| {
        let (min, max) = extremes(h);
        max / min > 1.01
    })
}

fn ps(h: &[f64]) -> PositiveSample {
    PositiveSample::new(h.to_vec()).unwrap()
}

proptest! {
    #[test]
    fn stays_within_extremes(h in sample(40), s in -60.0f64..60.0) {
        let (min, max) = extremes(&h);
        let v = lehmer_at(&ps(&h), s);
        prop_assert!(v >= min && v <= max);
    }

    #[test]
    fn agrees_with_direct_ratio(h in sample(40), s in -20.0f64..20.0) {
        let v = lehmer_at(&ps(&h), s);
        prop_assert!(rel_err(v, lehmer_direct(&h, s)) < 1e-12);
    }

    #[test]
    fn permutation_invariant(mut h in sample(40), s in -30.0f64..30.0, k in 0usize..40) {
        let before = lehmer_at(&ps(&h), s);
        let n = h.len();
        h.rotate_left(k % n);
        h.reverse();
        prop_assert!(rel_err(lehmer_at(&ps(&h), s), before) < 1e-14);
    }

    #[test]
    fn homogeneous_of_degree_one(h in sample(30), s in -30.0f64..30.0, c in 1e-3f64..1e3) {
        let scaled: Vec<f64> = h.iter().map(|v| c * v).collect();
        let lhs = lehmer_at(&ps(&scaled), s);
        prop_assert!(rel_err(lhs, c * lehmer_at(&ps(&h), s)) < 1e-13);
    }

    #[test]
    fn derivative_is_non_negative(h in sample(30), s in -40.0f64..40.0) {
        prop_assert!(lehmer_derivative(&ps(&h), s) >= 0.0);
    }

    #[test]
    fn derivative_matches_log_route(h in spread(30), s in -5.0f64..5.0) {
        let p = ps(&h);
        let a = lehmer_derivative(&p, s);
        let b = transform::lehmer_derivative_log_route(&p, s);
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-12), "{} vs {}", a, b);
    }

    #[test]
    fn inversion_round_trip(h in spread(20), s in -5.0f64..5.0) {
        let p = ps(&h);
        let r = invert(&p, lehmer_at(&p, s), 1e-12).unwrap();
        prop_assert!((r.moment.to_f64() - s).abs() < 1e-7);
    }

    #[test]
    fn linear_cdf_in_unit_interval(h in spread(20), s in -50.0f64..50.0) {
        let p = ps(&h);
        let c = linear_cdf_coeffs(&p).unwrap();
        let f = empirical_cdf(&p, &c, BreveMoment::Finite(s));
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!(empirical_pdf(&p, &c, s) >= 0.0);
    }

    #[test]
    fn breve_cdf_survival_complement(h in spread(12), s in -10.0f64..10.0,
                                     alpha in 0.1f64..=1.0, beta in 0.1f64..5.0) {
        let params = BreveParams::new(alpha, beta).unwrap();
        let d = Breve::from_sample(&ps(&h), params, 1e-9).unwrap();
        let m = BreveMoment::Finite(s);
        prop_assert!((d.cdf(m) + d.survival(m) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lambert_satisfies_defining_equation(x in -0.3678f64..1e4) {
        let w = lambert_w0(x).unwrap();
        prop_assert!((w * w.exp() - x).abs() <= 1e-14 * x.abs().max(1.0));
        prop_assert!(rel_err(w, lambert_reference(x.max(0.0))) < 1e-12 || x < 0.0);
    }

    #[test]
    fn csv_output_round_trips(values in prop::collection::vec(-1e300f64..1e300, 1..20)) {
        let mut table = io::Table::new(vec!["value"]);
        for v in &values {
            table.push(vec![io::Cell::Num(*v)]);
        }
        let text = table.render(io::Format::Csv).unwrap();
        let back = io::parse_series(&text, io::Format::Csv).unwrap();
        prop_assert_eq!(back.values(), &values[..]);
    }
}

#[test]
fn spectrum_rejects_unsorted_grid() {
    let p = ps(&[1.0, 2.0]);
    let grid = [BreveMoment::Finite(1.0), BreveMoment::NegInfinity];
    assert!(matches!(lehmer_spectrum(&p, &grid), Err(Error::GridNotSorted { position: 1 })));
}

#[test]
fn nth_derivative_matches_fd_of_first() {
    let h = [0.7, 1.3, 2.9, 4.0];
    let p = ps(&h);
    for s in [-3.0, 0.0, 1.5, 4.0] {
        let second = lehmer_nth_derivative(&p, s, 2).unwrap();
        let fd = derivative_fd(|x| lehmer_derivative_fd(&h, x), s, 1e-2);
        assert!(rel_err(second, fd) < 1e-5, "s={s}: {second} vs {fd}");
    }
}

#[test]
fn breve_features_landmarks() {
    let sample = Sample::new(vec![1.0, 4.0]).unwrap();
    let f = breve_features(&sample, &NormalizationPipeline::identity()).unwrap();
    let get = |label: &str| f.iter().find(|x| x.label == label).unwrap().value;
    assert_eq!(get("min"), 1.0);
    assert_eq!(get("max"), 4.0);
    assert!((get("geometric") - 2.0).abs() < 1e-15);
    assert!((get("harmonic") - 1.6).abs() < 1e-15);
    assert!((get("arithmetic") - 2.5).abs() < 1e-15);
    assert!((get("contraharmonic") - 3.4).abs() < 1e-15);
}
