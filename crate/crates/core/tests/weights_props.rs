use disklab::weights::{classify_dhat, parse_weight, rho_sequence, ClassifierOptions, DerivedOp, GapGrid, RadialWeight};
use proptest::prelude::*;

fn family() -> Vec<RadialWeight> {
    ["const:c=1", "std:gamma=1,norm=true", "std:gamma=0.5,norm=false", "exp:c=1,alpha=1,l=1", "logri:alpha=2", "const:c=1~tilt(2)"]
        .iter()
        .map(|s| parse_weight(s).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tail_is_non_increasing(i in 0usize..6, r in 0.0f64..0.999, t in 0.0f64..1.0) {
        let w = &family()[i];
        let s = r + t * (1.0 - r) * 0.999;
        prop_assert!(w.tail_integral(r) >= w.tail_integral(s) - 1e-12 * w.tail_integral(r));
    }

    #[test]
    fn moments_decrease(i in 0usize..6, x in 0.0f64..50.0, dx in 0.01f64..50.0) {
        let w = &family()[i];
        prop_assert!(w.moment(x) > w.moment(x + dx));
    }
}

#[test]
fn regularized_tail_is_comparable() {
    for gamma in [0.0, 1.0] {
        let w = RadialWeight::standard(gamma, true).unwrap();
        let reg = w.derive(DerivedOp::Regularized).unwrap();
        for i in 0..=999 {
            let r = i as f64 / 1000.0;
            let q = w.tail_integral(r) / reg.tail_integral(r);
            assert!((0.1..=10.0).contains(&q), "gamma {gamma} r {r}: {q}");
        }
    }
}

#[test]
fn rho_spacing_for_unit_weight() {
    let rho = rho_sequence(&RadialWeight::constant(1.0).unwrap(), 2.0, 40).unwrap();
    for w in rho.windows(2) {
        assert_eq!((1.0 - w[0]) / (1.0 - w[1]), 2.0);
    }
    let d = classify_dhat(&RadialWeight::constant(1.0).unwrap(), &GapGrid::classifier_default(), &ClassifierOptions::default());
    assert!(d.member);
    assert!(rho.windows(2).all(|w| 1.0 - w[0] >= 2.0 * (1.0 - w[1])));
}
