use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::ainf::{check_functor, CurvedFunctor};
use crate::coefficients::ring::{make_local_ring, RingMap};
use crate::graded::GradedBasis;
use crate::Rational;

type Q = Rational;
type Arrow<'a> = (&'a str, i32, usize, usize);
type Entry<'a> = (&'a [&'a str], &'a [(&'a str, &'a str)]);

fn value(b: &GradedBasis, ring: &Arc<LocalRing<Q>>, terms: &[(&str, &str)]) -> Element<Q> {
    Element::from_terms(
        ring,
        terms.iter().map(|(n, c)| {
            (
                b.index_of(n).unwrap(),
                SeriesElement::parse(ring, c).unwrap(),
            )
        }),
    )
}

fn category(
    ring: &Arc<LocalRing<Q>>,
    objects: &[&str],
    arrows: &[Arrow],
    mu: &[Entry],
) -> CurvedCategory<Q> {
    let basis = GradedBasis::new(arrows.iter().map(|a| (a.0.to_string(), a.1)).collect()).unwrap();
    let ends = arrows.iter().map(|a| (a.2, a.3)).collect();
    let mut ops: BTreeMap<usize, MultilinearOperation<Q>> = BTreeMap::new();
    for (input, out) in mu {
        let s = input.len();
        let op = ops
            .entry(s)
            .or_insert_with(|| MultilinearOperation::new(s, 2 - s as i32, Symmetry::None));
        let t = input.iter().map(|n| basis.index_of(n).unwrap()).collect();
        op.insert_raw(t, value(&basis, ring, out));
    }
    CurvedCategory::new(
        ring.clone(),
        objects.iter().map(|s| s.to_string()).collect(),
        basis,
        ends,
        ops,
        BTreeMap::new(),
    )
    .unwrap()
}

fn ground() -> Arc<LocalRing<Q>> {
    LocalRing::ground()
}

fn point() -> CurvedCategory<Q> {
    category(
        &ground(),
        &["L"],
        &[("1", 0, 0, 0)],
        &[(&["1", "1"], &[("1", "1")])],
    )
}

/// `k[e]/(e^2 - square)`.
fn dual(ring: &Arc<LocalRing<Q>>, square: &str) -> CurvedCategory<Q> {
    let mut mu: Vec<Entry> = vec![
        (&["1", "1"], &[("1", "1")]),
        (&["1", "e"], &[("e", "1")]),
        (&["e", "1"], &[("e", "1")]),
    ];
    let sq = [("1", square)];
    if square != "0" {
        mu.push((&["e", "e"], &sq));
    }
    category(ring, &["L"], &[("1", 0, 0, 0), ("e", 0, 0, 0)], &mu)
}

/// Two objects and one arrow `f: A -> B`.
fn arrow() -> CurvedCategory<Q> {
    category(
        &ground(),
        &["A", "B"],
        &[("a", 0, 0, 0), ("f", 0, 0, 1), ("b", 0, 1, 1)],
        &[
            (&["a", "a"], &[("a", "1")]),
            (&["b", "b"], &[("b", "1")]),
            (&["a", "f"], &[("f", "1")]),
            (&["f", "b"], &[("f", "1")]),
        ],
    )
}

fn two_points() -> CurvedCategory<Q> {
    category(
        &ground(),
        &["P", "Q"],
        &[("p", 0, 0, 0), ("q", 0, 1, 1)],
        &[(&["p", "p"], &[("p", "1")]), (&["q", "q"], &[("q", "1")])],
    )
}

fn random_cochain(
    a0: &CurvedCategory<Q>,
    degree: i32,
    cap: usize,
    rng: &mut ChaCha8Rng,
) -> HochschildCochain<Q> {
    let s = slots(a0, degree, cap, false).unwrap();
    let v: Vec<Q> = s
        .iter()
        .map(|_| Q::from_integer(rng.gen_range(-3i64..=3).into()))
        .collect();
    from_vector(degree, &s, &v, &ground(), cap)
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

#[test]
fn structure_is_closed() {
    for a0 in [point(), dual(&ground(), "0"), arrow(), two_points()] {
        let mu = HochschildCochain::structure(&a0);
        assert!(hochschild_differential(&a0, &mu, 4).unwrap().is_zero());
    }
}

#[test]
fn differential_squares_to_zero() {
    for a0 in [point(), dual(&ground(), "0"), arrow()] {
        for degree in 0..3 {
            let (_, _, d1) = differential_matrix(&a0, degree, 4, false).unwrap();
            let (_, _, d2) = differential_matrix(&a0, degree + 1, 4, false).unwrap();
            if d1.rows() > 0 && d1.cols() > 0 && d2.rows() > 0 {
                assert!(d2.mul(&d1).is_zero(), "degree {degree}");
            }
        }
    }
}

#[test]
fn length_zero_differential_on_point() {
    // A degree-0 length-zero cochain c: d(c)(a) = mu(c, a) - mu(a, c).
    let a0 = point();
    let s = slots(&a0, 0, 3, false).unwrap();
    assert_eq!(s.len(), 1);
    let c = from_vector(0, &s, &[q(1)], &ground(), 3);
    let dc = hochschild_differential(&a0, &c, 3).unwrap();
    assert!(dc.is_zero());
    let dual0 = dual(&ground(), "0");
    let s = slots(&dual0, 0, 3, false).unwrap();
    let e = dual0.basis().index_of("e").unwrap();
    let pos = s
        .iter()
        .position(|x| x.arrows.is_empty() && x.output == e)
        .unwrap();
    let mut v = vec![q(0); s.len()];
    v[pos] = q(1);
    let c = from_vector(0, &s, &v, &ground(), 3);
    // e is central, so the inner derivation vanishes.
    assert!(hochschild_differential(&dual0, &c, 3).unwrap().is_zero());
}

#[test]
fn bracket_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a0 = dual(&ground(), "0");
    let cap = 4;
    for _ in 0..3 {
        let x = random_cochain(&a0, 1, 2, &mut rng);
        let y = random_cochain(&a0, 2, 2, &mut rng);
        let z = random_cochain(&a0, 1, 2, &mut rng);
        // Antisymmetry: [x, y] = -(-1)^(|x|'|y|') [y, x].
        let xy = gerstenhaber_bracket(&a0, &x, &y, cap).unwrap();
        let yx = gerstenhaber_bracket(&a0, &y, &x, cap).unwrap();
        assert!(xy.add(&yx).unwrap().is_zero());
        // Jacobi with x, z of reduced degree 0 and y of reduced degree 1.
        let j1 = gerstenhaber_bracket(
            &a0,
            &x,
            &gerstenhaber_bracket(&a0, &y, &z, cap).unwrap(),
            cap,
        )
        .unwrap();
        let j2 = gerstenhaber_bracket(
            &a0,
            &gerstenhaber_bracket(&a0, &x, &y, cap).unwrap(),
            &z,
            cap,
        )
        .unwrap();
        let j3 = gerstenhaber_bracket(
            &a0,
            &y,
            &gerstenhaber_bracket(&a0, &x, &z, cap).unwrap(),
            cap,
        )
        .unwrap();
        assert!(j1.add(&j2.neg()).unwrap().add(&j3.neg()).unwrap().is_zero());
        // d is a derivation.
        let d = |p: &HochschildCochain<Q>| hochschild_differential(&a0, p, cap).unwrap();
        let lhs = d(&gerstenhaber_bracket(&a0, &x, &z, cap).unwrap());
        let rhs = gerstenhaber_bracket(&a0, &d(&x), &z, cap)
            .unwrap()
            .add(&gerstenhaber_bracket(&a0, &x, &d(&z), cap).unwrap())
            .unwrap();
        assert!(lhs.add(&rhs.neg()).unwrap().is_zero());
    }
}

#[test]
fn second_cohomology() {
    for cap in [3, 4] {
        assert_eq!(hh_cohomology(&point(), 2, cap, false).unwrap().dim(), 0);
        assert_eq!(
            hh_cohomology(&two_points(), 2, cap, false).unwrap().dim(),
            0
        );
    }
    let a0 = dual(&ground(), "0");
    let hh2 = hh_cohomology(&a0, 2, 3, false).unwrap();
    assert_eq!(hh2.dim(), 1);
    let e = a0.basis().index_of("e").unwrap();
    let one = a0.basis().index_of("1").unwrap();
    let pos = hh2
        .slots
        .iter()
        .position(|s| s.arrows == [e, e] && s.output == one)
        .unwrap();
    let mut v = vec![q(0); hh2.slots.len()];
    v[pos] = q(1);
    let (_, harmonic, complement) = hh2.decompose(&v);
    assert!(complement.iter().all(|c| c.is_zero()));
    assert!(harmonic.iter().any(|c| !c.is_zero()));
}

fn deformed_dual(square: &str, var: &str, n: u32) -> DeformationFamily<Q> {
    let ring = make_local_ring(&[(var, 1)], &[], n).unwrap();
    DeformationFamily::new(dual(&ring, square), dual(&ground(), "0")).unwrap()
}

#[test]
fn dictionary() {
    let t = make_local_ring(&[("t", 1)], &[], 4).unwrap();
    let a0 = dual(&ground(), "0");
    let constant = DeformationFamily::trivial(&a0, &t).unwrap();
    assert!(deformation_to_mc(&constant).unwrap().is_zero());

    let d = deformed_dual("t", "t", 4);
    let alpha = deformation_to_mc(&d).unwrap();
    let e = a0.basis().index_of("e").unwrap();
    assert_eq!(alpha.components.len(), 1);
    assert_eq!(
        alpha.components[&2].entries()[&vec![e, e]],
        value(a0.basis(), d.base(), &[("1", "t")])
    );
    let back = mc_to_deformation(&a0, d.base(), &alpha).unwrap();
    assert_eq!(back, d);

    // A t^2 term that is not a cocycle breaks the equation at order 2.
    let one = a0.basis().index_of("1").unwrap();
    let mut bad = alpha.clone();
    bad.components
        .get_mut(&2)
        .unwrap()
        .insert_raw(vec![one, e], value(a0.basis(), d.base(), &[("e", "t^2")]));
    assert!(matches!(
        mc_to_deformation(&a0, d.base(), &bad),
        Err(Error::NotMaurerCartan(_))
    ));
}

#[test]
fn curved_dictionary() {
    let t = make_local_ring(&[("t", 1)], &[], 3).unwrap();
    let a0 = category(
        &ground(),
        &["L"],
        &[("x", 1, 0, 0), ("y", 2, 0, 0)],
        &[(&["x"], &[("y", "1")])],
    );
    let mut alpha = HochschildCochain::zero(2);
    alpha.zeroth.insert(0, value(a0.basis(), &t, &[("y", "t")]));
    let d = mc_to_deformation(&a0, &t, &alpha).unwrap();
    assert!(d.total.is_curved());
    assert_eq!(deformation_to_mc(&d).unwrap(), alpha);
}

#[test]
fn kodaira_spencer_ranks() {
    let t = make_local_ring(&[("t", 1)], &[], 3).unwrap();
    let a0 = dual(&ground(), "0");
    let ks = family_ks_map(&DeformationFamily::trivial(&a0, &t).unwrap(), 3).unwrap();
    assert_eq!(ks.rank, 0);
    assert!(!ks.surjective);
    let ks = family_ks_map(&deformed_dual("t", "t", 3), 3).unwrap();
    assert_eq!((ks.rank, ks.hh2_dim), (1, 1));
    assert!(ks.surjective && ks.injective);
}

#[test]
fn plant_and_recover() {
    let b = deformed_dual("t", "t", 6);
    let s = make_local_ring(&[("s", 1)], &[], 6).unwrap();
    let iso = CurvedFunctor::identity(&b.reduction);
    for planted in ["s", "2*s + s^2", "s^2 + s^3"] {
        let rho = RingMap::new(
            b.base(),
            &s,
            vec![SeriesElement::parse(&s, planted).unwrap()],
        )
        .unwrap();
        let a = b.total.pullback(&rho).unwrap();
        let ext = versal_extension(&b, &a, &iso, 3, 6).unwrap();
        let got = &ext.map.images()[0];
        let want = &rho.images()[0];
        assert_eq!(
            got.truncated(1),
            want.truncated(1),
            "planted {planted}, got {}",
            got.to_text()
        );
        assert!(
            ext.report.functor_check.passed(),
            "{:?}",
            ext.report.functor_check.findings
        );
        assert!(ext.report.embedding.passed());
    }
}

#[test]
fn gauge_moves_are_functors() {
    let d = deformed_dual("t", "t", 3);
    let a0 = &d.reduction;
    let e = a0.basis().index_of("e").unwrap();
    let mut gamma = HochschildCochain::zero(1);
    let mut g1 = MultilinearOperation::new(1, 0, Symmetry::None);
    g1.insert_raw(
        vec![e],
        value(a0.basis(), d.base(), &[("1", "t"), ("e", "t^2")]),
    );
    gamma.components.insert(1, g1);
    let (moved, h) = gauge_deformation(&d, &gamma, 4).unwrap();
    assert!(check_functor(&h, 4).unwrap().passed());
    assert_eq!(
        h.reduce_mod_max_ideal().components(),
        CurvedFunctor::identity(a0).components()
    );
    let alpha = deformation_to_mc(&moved).unwrap();
    assert!(!alpha.is_zero());
    assert_ne!(alpha, deformation_to_mc(&d).unwrap());
}

#[test]
fn plant_and_recover_through_gauge() {
    let b = deformed_dual("t", "t", 5);
    let s = make_local_ring(&[("s", 1)], &[], 5).unwrap();
    let iso = CurvedFunctor::identity(&b.reduction);
    let a0 = &b.reduction;
    let e = a0.basis().index_of("e").unwrap();
    for planted in ["s", "2*s + s^2", "s^2 + s^3"] {
        let rho = RingMap::new(
            b.base(),
            &s,
            vec![SeriesElement::parse(&s, planted).unwrap()],
        )
        .unwrap();
        let pb = DeformationFamily::new(b.total.pullback(&rho).unwrap(), a0.clone()).unwrap();
        let mut gamma = HochschildCochain::zero(1);
        let mut g1 = MultilinearOperation::new(1, 0, Symmetry::None);
        g1.insert_raw(vec![e], value(a0.basis(), &s, &[("1", "s"), ("e", "s^2")]));
        gamma.components.insert(1, g1);
        let (moved, _) = gauge_deformation(&pb, &gamma, 4).unwrap();
        assert_ne!(moved.total, pb.total);
        let ext = versal_extension(&b, &moved.total, &iso, 4, 5).unwrap();
        let got = &ext.map.images()[0];
        assert_eq!(
            got.truncated(1),
            rho.images()[0].truncated(1),
            "planted {planted}, got {}",
            got.to_text()
        );
        let report = &ext.report.functor_check;
        assert!(report.passed() && report.unchecked.is_empty());
    }
}
