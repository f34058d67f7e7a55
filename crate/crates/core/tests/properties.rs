mod common;

use common::{random_pair, random_unit_rational, rng_from_seed};
use logpair::chern::{bmy_check, bmy_limit_check, chi_d_from_components, edge_invariants, log_chern};
use logpair::classifier::{beta_decompose, classify, genus_integrality_rejects, reider_search, ClassifyError, NullCurveKind};
use logpair::positivity::{threshold_on, AlphaFamily, CurveSet, Property};
use logpair::rational::{int, ratio};
use logpair::{DivisorClass, Lattice, Rational, SurfacePair, Tri};
use num::{One, Signed, Zero};
use proptest::prelude::*;

fn l_alpha(pair: &SurfacePair, alpha: &Rational) -> DivisorClass {
    pair.canonical.add_scaled(alpha, &pair.boundary())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_identity_holds_exactly(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let pair = random_pair(&mut rng, false);
        for _ in 0..5 {
            let a = random_unit_rational(&mut rng);
            let e = edge_invariants(&pair, &a).unwrap();
            let l_sq = pair.square(&l_alpha(&pair, &a));
            prop_assert_eq!(&e.l_alpha_sq, &l_sq);
            prop_assert_eq!(int(2) * e.chi_alpha + int(3) * e.sigma_alpha, l_sq);
        }
    }

    #[test]
    fn bmy_forms_agree(seed in any::<u64>()) {
        let pair = random_pair(&mut rng_from_seed(seed), false);
        let b = bmy_check(&pair);
        let l = bmy_limit_check(&pair);
        prop_assert_eq!(b.holds, l.holds);
        // 3c₂ − c₁² = lhs − rhs
        prop_assert_eq!(&b.rhs - &b.lhs, l.lhs - l.rhs);
    }

    #[test]
    fn chi_d_by_adjunction(seed in any::<u64>()) {
        let pair = random_pair(&mut rng_from_seed(seed), false);
        prop_assert_eq!(log_chern(&pair).chi_d, chi_d_from_components(&pair));
    }

    #[test]
    fn beta_reconstructs_l_alpha(seed in any::<u64>(), p in 0i64..50, q in 1i64..50, s in 0i64..50) {
        let pair = random_pair(&mut rng_from_seed(seed), false);
        let alpha_bar = ratio(p % q, q);
        // α ∈ [ᾱ, 1)
        let alpha = &alpha_bar + (Rational::one() - &alpha_bar) * ratio(s, 50);
        let (b1, b2) = beta_decompose(&alpha, &alpha_bar).unwrap();
        prop_assert!(!b1.is_negative() && !b2.is_negative());
        prop_assert_eq!(&b1 + &b2, Rational::one());
        let rebuilt = l_alpha(&pair, &alpha_bar).scale(&b1).add(&pair.log_canonical().scale(&b2));
        prop_assert_eq!(rebuilt, l_alpha(&pair, &alpha));
    }

    /// Threshold intervals against a direct scan over the same curve set.
    #[test]
    fn thresholds_match_alpha_scan(seed in any::<u64>()) {
        let pair = random_pair(&mut rng_from_seed(seed), true);
        let set = CurveSet::for_pair(&pair);
        let fam = AlphaFamily::of_pair(&pair);
        let nef_at = |a: &Rational| {
            let l = l_alpha(&pair, a);
            set.curves.iter().all(|c| !pair.dot(&l, &c.class).is_negative())
        };
        let ample_at = |a: &Rational| {
            let l = l_alpha(&pair, a);
            set.curves.iter().all(|c| pair.dot(&l, &c.class).is_positive()) && pair.square(&l).is_positive()
        };
        for (property, holds) in [(Property::Nef, &nef_at as &dyn Fn(&Rational) -> bool), (Property::Ample, &ample_at)] {
            let Ok(t) = threshold_on(&fam, &pair, &set, property) else { continue };
            for k in 1..200 {
                let a = ratio(k, 200);
                if a > t.value {
                    prop_assert!(holds(&a), "{property} fails at {a} above threshold {}", t.value);
                } else if a < t.value && t.exact {
                    prop_assert!(!holds(&a), "{property} holds at {a} below threshold {}", t.value);
                }
            }
            if t.value.is_positive() && t.exact {
                prop_assert_eq!(t.attained, holds(&t.value));
            }
        }
    }

    /// Null curves of a nef-near-one verdict are exactly the three listed kinds.
    #[test]
    fn null_curve_tags(seed in any::<u64>()) {
        let pair = random_pair(&mut rng_from_seed(seed), true);
        let Ok(v) = classify(&pair) else { return Ok(()) };
        let l = pair.log_canonical();
        let d = pair.boundary();
        for n in &v.null_curves {
            prop_assert!(pair.dot(&l, &n.class).is_zero());
            let rest = pair.dot(&n.class, &d.sub(&n.class));
            match n.kind {
                NullCurveKind::InteriorMinus2 => {
                    prop_assert_eq!(pair.square(&n.class), int(-2));
                    prop_assert!(pair.dot(&d, &n.class).is_zero());
                }
                NullCurveKind::IsolatedElliptic => {
                    prop_assert_eq!(pair.genus(&n.class), Rational::one());
                    prop_assert!(rest.is_zero());
                }
                NullCurveKind::BoundaryRational => {
                    prop_assert_eq!(pair.square(&n.class), int(-2));
                    prop_assert_eq!(rest, int(2));
                }
            }
        }
        // 𝓛_α·C = (α − 1)D·C + 𝓛·C vanishes identically for interior curves
        for c in &v.obstructions.interior_minus2 {
            for k in 0..=4 {
                prop_assert!(pair.dot(&l_alpha(&pair, &ratio(k, 4)), &c.class).is_zero());
            }
        }
    }

    /// With a complete catalog the two routes never disagree.
    #[test]
    fn complete_catalogs_classify_consistently(seed in any::<u64>()) {
        let pair = random_pair(&mut rng_from_seed(seed), true);
        match classify(&pair) {
            Ok(v) => {
                prop_assert_ne!(v.threshold_route.nef_near_one, Tri::Unknown);
                prop_assert_eq!(v.nef_near_one, v.threshold_route.nef_near_one);
                prop_assert_eq!(v.ample_near_one, v.threshold_route.ample_near_one);
                if v.ample_near_one == Tri::Yes {
                    prop_assert_eq!(v.nef_near_one, Tri::Yes);
                }
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    /// Reider never claims base-point freeness with an obstruction present,
    /// and every accepted obstruction has integral genus.
    #[test]
    fn reider_is_conservative(seed in any::<u64>()) {
        let pair = random_pair(&mut rng_from_seed(seed), true);
        let Ok(r) = reider_search(&pair, 32) else { return Ok(()) };
        prop_assert!(r.n >= 3 && pair.square(&r.adjoint_class) > int(4));
        if !r.obstruction_curves.is_empty() {
            prop_assert_ne!(r.base_point_free, Tri::Yes);
        }
        for c in &r.obstruction_curves {
            prop_assert!(genus_integrality_rejects(&pair, &c.curve.class).is_none());
        }
    }

    /// On any form and any K, a class with K·C = 0 and C² = −1 is rejected.
    #[test]
    fn genus_integrality_on_arbitrary_k(a in -3i64..=3, b in -3i64..=3, k0 in -4i64..=4, k1 in -4i64..=4) {
        let lattice = Lattice::new(vec![vec![1, 0], vec![0, -1]]).unwrap();
        let pair = SurfacePair::new(lattice, DivisorClass::from_ints(&[k0, k1]), vec![], 0, 0, vec![]).unwrap();
        let c = DivisorClass::from_ints(&[a, b]);
        let (sq, kc) = (pair.square(&c), pair.dot(&pair.canonical, &c));
        if sq == int(-1) && kc.is_zero() {
            let reason = genus_integrality_rejects(&pair, &c).expect("must be rejected");
            prop_assert!(reason.contains("genus integrality"));
        }
        prop_assert_eq!(genus_integrality_rejects(&pair, &c).is_none(), ((sq + kc).to_integer() % 2i32).is_zero());
    }
}

#[test]
fn catalog_deletion_never_flips_silently() {
    let mut rng = rng_from_seed(7);
    for _ in 0..40 {
        let pair = random_pair(&mut rng, true);
        let base = classify(&pair).unwrap();
        for i in 0..pair.catalog.len() {
            let mut cut = pair.clone();
            cut.catalog.remove(i);
            match classify(&cut) {
                Ok(v) => {
                    for (old, new) in [(base.nef_near_one, v.nef_near_one), (base.ample_near_one, v.ample_near_one)] {
                        assert!(new == old || new == Tri::Unknown, "silent flip {old} -> {new} deleting curve {i}");
                    }
                }
                Err(ClassifyError::Inconsistency { .. } | ClassifyError::CatalogGap { .. } | ClassifyError::UnclassifiedNullCurve(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}

