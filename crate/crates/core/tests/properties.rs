mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use versality::cli::format;
use versality::coefficients::{
    cone_completion, lambda_point_specialize, make_local_ring, ConeMonoid, LambdaPoint, LocalRing,
    SeriesElement,
};
use versality::graded::koszul_sign;
use versality::scalar::{parse_rational, rational_text};

fn plane_ring() -> Arc<LocalRing<Q>> {
    make_local_ring(&[("u", 1), ("v", 1), ("z", 1)], &["u*z - v^2"], 4).unwrap()
}

fn element(ring: &Arc<LocalRing<Q>>, coeffs: &[i64]) -> SeriesElement<Q> {
    let terms: BTreeMap<_, _> = ring
        .standard_monomials()
        .into_iter()
        .zip(coeffs)
        .filter(|(_, &c)| c != 0)
        .map(|(m, &c)| (m, q(c)))
        .collect();
    SeriesElement::from_terms(ring, terms)
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in coeffs(), b in coeffs(), c in coeffs()) {
        let r = plane_ring();
        let (x, y, z) = (element(&r, &a), element(&r, &b), element(&r, &c));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert!(x.sub(&x).is_zero());
        prop_assert_eq!(x.mul(&SeriesElement::one(&r)), x.clone());
    }

    #[test]
    fn units_invert(a in coeffs(), c in 1i64..5) {
        let r = plane_ring();
        let mut a = a;
        a[0] = c;
        let x = element(&r, &a);
        prop_assert_eq!(x.mul(&x.invert().unwrap()), SeriesElement::one(&r));
    }

    #[test]
    fn koszul_signs_compose(seed in prop::collection::vec(0usize..100, 5), degrees in prop::collection::vec(-3i32..=3, 5)) {
        let mut perm: Vec<usize> = (0..5).collect();
        perm.sort_by_key(|&i| seed[i]);
        let permuted: Vec<i32> = perm.iter().map(|&i| degrees[i]).collect();
        let mut inverse = vec![0; 5];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        let s = koszul_sign(&perm, &degrees).unwrap();
        let back = koszul_sign(&inverse, &permuted).unwrap();
        prop_assert_eq!(s * back, 1);
        let identity: Vec<usize> = (0..5).collect();
        prop_assert_eq!(koszul_sign(&identity, &degrees).unwrap(), 1);
        for k in 0..4 {
            let mut swap = identity.clone();
            swap.swap(k, k + 1);
            let want = if (degrees[k] * degrees[k + 1]) % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(koszul_sign(&swap, &degrees).unwrap(), want);
        }
    }

    #[test]
    fn specialization_is_multiplicative(a in coeffs(), b in coeffs(), w in 1i64..5) {
        let cone = ConeMonoid::new(1, vec![vec![1]]).unwrap();
        let ring = cone_completion::<Q>(&cone, 6).unwrap();
        let p = LambdaPoint::new(vec![q(w)], vec![q(0)]).unwrap();
        let (x, y) = (element(&ring, &a), element(&ring, &b));
        let cutoff = q(1000);
        let s = |e: &SeriesElement<Q>| lambda_point_specialize(e, &cone, &p, &cutoff).unwrap();
        let (lhs, rhs) = (s(&x.mul(&y)), s(&x).mul(&s(&y)));
        let c = lhs.cutoff().clone().min(rhs.cutoff().clone());
        prop_assert_eq!(lhs.truncate(&c), rhs.truncate(&c));
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
        let x = Q::new(n.into(), d.into());
        prop_assert_eq!(parse_rational(&rational_text(&x)), Some(x));
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..300)) {
        let _ = format::parse(&bytes);
    }

    #[test]
    fn json_shaped_noise_never_panics(pieces in prop::collection::vec(prop::sample::select(vec![
        "{", "}", "[", "]", ",", ":", "\"format_version\"", "\"1\"", "\"kind\"", "\"linf\"", "\"ring\"",
        "\"basis\"", "\"brackets\"", "\"variables\"", "\"truncation\"", "\"name\"", "\"degree\"", "0", "-1", "3",
        "null", "true", "\"x\"",
    ]), 0..60)) {
        let text = pieces.concat();
        if let Ok(file) = format::parse(text.as_bytes()) {
            let again = format::serialize(&file);
            prop_assert_eq!(format::parse(again.as_bytes()).unwrap(), file);
        }
    }
}
