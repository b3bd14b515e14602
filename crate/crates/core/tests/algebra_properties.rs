use proptest::prelude::*;
use puiseux_riccati::{ExtensionTower, FieldElement, Poly};

/// Q(a, b) with a^2 = 2 and b^2 = a, degree 4 over Q.
fn tower() -> ExtensionTower {
    let q_sqrt2 = ExtensionTower::rational()
        .adjoin(&Poly::from_ints(&[-2, 0, 1], "t"))
        .unwrap();
    let a = q_sqrt2.generator(1);
    let mp = Poly::new(vec![-a, FieldElement::zero(), FieldElement::one()], "t");
    q_sqrt2.adjoin(&mp).unwrap()
}

fn element(t: &ExtensionTower, c: &[(i64, i64)]) -> FieldElement {
    let q = |(n, d): (i64, i64)| FieldElement::from_frac(n, d);
    let lower = t.truncate(1);
    let lo = FieldElement::from_coordinates(&lower, 1, &[q(c[0]), q(c[1])]).unwrap();
    let hi = FieldElement::from_coordinates(&lower, 1, &[q(c[2]), q(c[3])]).unwrap();
    FieldElement::from_coordinates(t, 2, &[lo, hi]).unwrap()
}

fn coords() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-9i64..=9, 1i64..=5), 4)
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-6i64..=6, 1..7).prop_map(|c| Poly::from_ints(&c, "x"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tower_arithmetic_is_a_field(a in coords(), b in coords(), c in coords()) {
        let t = tower();
        let (a, b, c) = (element(&t, &a), element(&t, &b), element(&t, &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
            prop_assert!((&b * &b.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn generator_satisfies_its_minimal_polynomial(a in coords()) {
        let t = tower();
        let g = t.generator(2);
        prop_assert!(t.minpoly(2, "t").eval(&g).is_zero());
        // x -> a^2 is a ring map, so squaring commutes with evaluation.
        let x = element(&t, &a);
        let sq = Poly::from_ints(&[0, 0, 1], "t");
        prop_assert_eq!(sq.eval(&x), x.pow(2));
    }

    #[test]
    fn division_with_remainder(f in poly(), g in poly()) {
        prop_assume!(!g.is_zero());
        let (q, r) = f.div_rem(&g).unwrap();
        prop_assert_eq!(&(&q * &g) + &r, f);
        prop_assert!(r.is_zero() || r.degree() < g.degree());
    }

    #[test]
    fn gcd_divides_both_and_absorbs_common_factor(f in poly(), g in poly(), h in poly()) {
        prop_assume!(!h.is_zero() && !f.is_zero() && !g.is_zero());
        let (fh, gh) = (&f * &h, &g * &h);
        let d = fh.gcd(&gh);
        prop_assert!(fh.div_rem(&d).unwrap().1.is_zero());
        prop_assert!(gh.div_rem(&d).unwrap().1.is_zero());
        prop_assert!(d.div_rem(&h).unwrap().1.is_zero());
    }

    #[test]
    fn factorization_reconstructs(roots in prop::collection::vec(-4i64..=4, 0..4), g in poly()) {
        prop_assume!(!g.is_zero());
        let f = roots.iter().fold(g, |acc, r| &acc * &Poly::from_ints(&[-r, 1], "x"));
        let factors = f.factor().unwrap();
        let rebuilt = Poly::product(&factors, "x").scale(&f.lc());
        prop_assert_eq!(rebuilt, f.clone());
        for (p, _) in &factors {
            prop_assert!(p.lc().is_one());
            if p.degree() == Some(1) {
                continue;
            }
            // Irreducible factors of degree > 1 have no rational root in the planted range.
            for r in -4..=4 {
                prop_assert!(!p.eval(&FieldElement::from_int(r)).is_zero());
            }
        }
        for r in &roots {
            let lin = Poly::from_ints(&[-r, 1], "x");
            prop_assert!(factors.iter().any(|(p, _)| *p == lin));
        }
    }

    #[test]
    fn roots_with_adjunction_are_roots(mut c in prop::collection::vec(-6i64..=6, 1..4), lead in 1i64..=3) {
        // Splitting fields grow factorially with the degree, so stay at degree <= 3.
        c.push(lead);
        let f = Poly::from_ints(&c, "x");
        let set = f.roots_with_adjunction(&ExtensionTower::rational(), 8).unwrap();
        prop_assert!(set.is_complete());
        prop_assert_eq!(set.total_multiplicity(), f.degree().unwrap());
        for e in &set.entries {
            let lifted = Poly::new(
                f.coeffs().iter().map(|c| c.embed(&e.tower).unwrap()).collect(),
                "x",
            );
            prop_assert!(lifted.eval(&e.root).is_zero());
        }
    }
}
