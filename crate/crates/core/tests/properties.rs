use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use proptest::prelude::*;
use weyl_core::cohomology::{Cochain, CochainComplex};
use weyl_core::fixtures::Fixtures;
use weyl_core::grading::{grade, Grading};
use weyl_core::rational::{self, qf};
use weyl_core::weyl::{
    transform_connection, transform_rho, transform_splitting, value_transform, GradedVector, UpsilonJet,
};
use weyl_core::{build_algebra, Element, LieAlgebra};

fn borel() -> &'static CochainComplex {
    static CX: OnceLock<CochainComplex> = OnceLock::new();
    CX.get_or_init(|| {
        let g = grade(Arc::new(build_algebra('A', 2).unwrap()), &[1, 2]).unwrap();
        CochainComplex::new(Arc::new(g))
    })
}

fn contact() -> &'static Arc<Grading> {
    static G: OnceLock<Arc<Grading>> = OnceLock::new();
    G.get_or_init(|| Arc::new(grade(Arc::new(build_algebra('B', 3).unwrap()), &[2]).unwrap()))
}

fn element(g: &LieAlgebra, v: &[(i64, i64)]) -> Element {
    Element::from_coeffs(v.iter().take(g.dim()).map(|&(n, d)| qf(n, d)).collect())
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-6i64..=6, 1i64..=5), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rational_strings_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
        let x = qf(n, d);
        let s = rational::to_string(&x);
        prop_assert_eq!(rational::parse(&s).unwrap(), x);
        prop_assert!(!s.contains('.'));
    }

    #[test]
    fn bracket_is_antisymmetric_and_bilinear(a in coeffs(14), b in coeffs(14), c in coeffs(14), s in (-4i64..=4, 1i64..=3)) {
        let g = build_algebra('G', 2).unwrap();
        let (x, y, z) = (element(&g, &a), element(&g, &b), element(&g, &c));
        prop_assert_eq!(g.bracket(&x, &y), -&g.bracket(&y, &x));
        let t = qf(s.0, s.1);
        let lhs = g.bracket(&(&x.scale(&t) + &z), &y);
        prop_assert_eq!(lhs, &g.bracket(&x, &y).scale(&t) + &g.bracket(&z, &y));
        let jac = &(&g.bracket(&x, &g.bracket(&y, &z)) + &g.bracket(&y, &g.bracket(&z, &x))) + &g.bracket(&z, &g.bracket(&x, &y));
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn killing_form_is_invariant_and_symmetric(a in coeffs(15), b in coeffs(15), c in coeffs(15)) {
        let g = build_algebra('A', 3).unwrap();
        let (x, y, z) = (element(&g, &a), element(&g, &b), element(&g, &c));
        prop_assert_eq!(g.killing_form(&x, &y), g.killing_form(&y, &x));
        prop_assert_eq!(g.killing_form(&g.bracket(&x, &y), &z), g.killing_form(&x, &g.bracket(&y, &z)));
        // -B(x, theta x) is positive definite
        if !x.is_zero() {
            prop_assert!(g.theta_form(&x, &x) > rational::zero());
        }
    }

    #[test]
    fn differential_is_linear_and_squares_to_zero(seed in any::<u64>(), n in 0usize..2) {
        let cx = borel();
        let gr = cx.grading().clone();
        let mut f = Fixtures::new(seed);
        let a = f.cochain(&gr, n, |_, _| true);
        let b = f.cochain(&gr, n, |_, _| true);
        let t = f.rational();
        let lhs = cx.differential(&(&a.scale(&t) + &b)).unwrap();
        let rhs = &cx.differential(&a).unwrap().scale(&t) + &cx.differential(&b).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert!(cx.differential(&lhs).unwrap().is_zero());
    }

    #[test]
    fn hodge_parts_recombine(seed in any::<u64>(), n in 0usize..3) {
        let cx = borel();
        let gr = cx.grading().clone();
        let c = Fixtures::new(seed).cochain(&gr, n, |_, _| true);
        let h = cx.hodge_decompose(&c).unwrap();
        prop_assert_eq!(&(&(&h.exact + &h.harmonic) + &h.coexact), &c);
        prop_assert!(cx.laplacian(&h.harmonic).unwrap().is_zero());
        prop_assert!(cx.pairing(&h.exact, &h.coexact).unwrap().is_zero());
    }

    #[test]
    fn cochain_json_round_trips(seed in any::<u64>(), n in 0usize..4) {
        let cx = borel();
        let gr = cx.grading().clone();
        let c = Fixtures::new(seed).cochain(&gr, n, |_, _| true);
        let text = serde_json::to_string(&c.to_json()).unwrap();
        let back = Cochain::from_json(&gr, &serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn jet_json_round_trips(seed in any::<u64>()) {
        let gr = contact();
        let u = Fixtures::new(seed).jet(gr);
        let text = serde_json::to_string(&u.to_json()).unwrap();
        let back = UpsilonJet::from_json(gr, &serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn transforms_at_zero_upsilon_are_trivial(seed in any::<u64>()) {
        let gr = contact();
        let mut f = Fixtures::new(seed);
        let (p, xi) = (f.rho(gr), f.graded_vector(gr));
        let u = UpsilonJet::zero(gr);
        prop_assert_eq!(transform_splitting(&u, &xi), xi.clone());
        prop_assert!(transform_connection(&u, &xi).is_zero());
        prop_assert_eq!(transform_rho(&u, &p, &xi), p.eval(&xi.total()));
    }

    #[test]
    fn value_transform_is_an_automorphism(seed in any::<u64>()) {
        let gr = contact();
        let g = gr.algebra();
        let mut f = Fixtures::new(seed);
        let u = f.upsilon_only(gr);
        let x = f.element_in(gr.dim(), &(0..gr.dim()).collect::<Vec<_>>());
        let y = f.element_in(gr.dim(), &(0..gr.dim()).collect::<Vec<_>>());
        let lhs = value_transform(&u, &g.bracket(&x, &y));
        let rhs = g.bracket(&value_transform(&u, &x), &value_transform(&u, &y));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(g.killing_form(&value_transform(&u, &x), &value_transform(&u, &y)), g.killing_form(&x, &y));
    }

    #[test]
    fn splitting_transform_is_linear_and_fixes_lowest_part(seed in any::<u64>()) {
        let gr = contact();
        let mut f = Fixtures::new(seed);
        let (u, xi, eta) = (f.jet(gr), f.graded_vector(gr), f.graded_vector(gr));
        let hat = transform_splitting(&u, &xi);
        let k = gr.ki();
        prop_assert_eq!(hat.component(-k), xi.component(-k));
        let sum = GradedVector::from_element(gr, &(&xi.total() + &eta.total())).unwrap();
        let lhs = transform_splitting(&u, &sum).total();
        prop_assert_eq!(lhs, &hat.total() + &transform_splitting(&u, &eta).total());
    }
}
