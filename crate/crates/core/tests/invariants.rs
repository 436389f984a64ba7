mod common;

use common::Model;
use drycert::dry::{b_max, corollary_lower_bound_holds, dry_threshold, is_dry, omega0};
use drycert::extension::{build_polarization, c2_v, check_polarization, omega_min, required_c2e};
use drycert::picard::{neg_one_curves, parity_admissible};
use drycert::spectral::{c2_w, line_class_coeffs, spectral_valid, Validity};
use drycert::witness::{base_alpha, select_alpha, select_hb, ConfigTemplate};
use drycert::{BaseSurface, CandidateClass, DivClass, ExtensionConfig, SpectralData, Twist, Q};
use proptest::prelude::*;

const NAMES: [&str; 11] = ["P2", "F0", "F1", "dP1", "dP2", "dP3", "dP4", "dP5", "dP6", "dP7", "dP8"];

fn base_strategy() -> impl Strategy<Value = BaseSurface> {
    (0..NAMES.len()).prop_map(|i| NAMES[i].parse().unwrap())
}

fn listed_base() -> impl Strategy<Value = BaseSurface> {
    (1..NAMES.len()).prop_map(|i| NAMES[i].parse().unwrap())
}

fn class(base: &BaseSurface, lo: i128, hi: i128) -> impl Strategy<Value = DivClass> {
    proptest::collection::vec(lo..=hi, base.picard_rank()).prop_map(DivClass::from_ints)
}

fn qi(n: i128) -> Q {
    Q::from_integer(n)
}

/// `phi` near `ceil(N/2) c1 + t c1` with a small perturbation.
fn near_ray(base: &BaseSurface, n: u32, t: i128, jitter: &[i128]) -> DivClass {
    let lift = (n as i128 + 1) / 2 + t;
    let c1 = base.c1().integer_coeffs().unwrap();
    DivClass::from_ints(c1.iter().zip(jitter.iter().cycle()).map(|(c, j)| c * lift + j))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn intersection_is_symmetric((b, x, y) in base_strategy().prop_flat_map(|b| {
        let (x, y) = (class(&b, -20, 20), class(&b, -20, 20));
        (Just(b), x, y)
    })) {
        prop_assert_eq!(b.intersect(&x, &y).unwrap(), b.intersect(&y, &x).unwrap());
    }

    #[test]
    fn ample_implies_nef_and_effective((b, x) in base_strategy().prop_flat_map(|b| {
        let x = class(&b, -6, 12);
        (Just(b), x)
    })) {
        if b.is_ample(&x) {
            prop_assert!(b.is_nef(&x));
        }
        if b.is_nef(&x) {
            // nef classes lie in the effective cone on these surfaces
            prop_assert!(b.in_effective_cone(&x));
        }
        prop_assert_eq!(b.is_effective(&x), x.is_zero() || b.in_effective_cone(&x));
    }

    #[test]
    fn omega0_decreases_up_to_bmax(
        b in listed_base(),
        n in 1u32..=12,
        t in 0i128..3,
        jitter in proptest::collection::vec(-1i128..=2, 9),
        u in 1i128..1000,
        v in 1i128..1000,
    ) {
        let phi = near_ray(&b, n, t, &jitter);
        if let Ok(bm) = b_max(&phi, n, &b) {
            let (lo, hi) = (u.min(v), u.max(v));
            prop_assume!(lo < hi);
            let b1 = bm * Q::new(lo, 1000);
            let b2 = bm * Q::new(hi, 1000);
            prop_assert!(omega0(&phi, n, &b, b1).unwrap() > omega0(&phi, n, &b, b2).unwrap());
            prop_assert!(omega0(&phi, n, &b, b2).unwrap() >= omega0(&phi, n, &b, bm).unwrap());
        }
    }

    #[test]
    fn dry_is_upward_closed_and_strict(
        b in listed_base(),
        n in 1u32..=12,
        t in 0i128..3,
        jitter in proptest::collection::vec(-1i128..=2, 9),
        extra in 0i64..50,
    ) {
        let phi = near_ray(&b, n, t, &jitter);
        if let Ok(thr) = dry_threshold(&phi, n, &b) {
            let at = thr.ceil().to_integer() as i64;
            let below = CandidateClass::new(phi.clone(), at - 1, n);
            prop_assert!(!is_dry(&below, &b).0);
            let c = CandidateClass::new(phi.clone(), at + extra, n);
            let dry = is_dry(&c, &b).0;
            prop_assert_eq!(dry, qi(c.omega as i128) > thr);
            if dry {
                prop_assert!(corollary_lower_bound_holds(&c, &b).unwrap());
                prop_assert!(is_dry(&CandidateClass::new(phi.clone(), c.omega + 1, n), &b).0);
            }
        } else {
            prop_assert!(!is_dry(&CandidateClass::new(phi, 1_000_000, n), &b).0);
        }
    }

    #[test]
    fn threshold_grows_along_rays(b in listed_base(), n in 1u32..=12, t in 0i128..6, jitter in proptest::collection::vec(-1i128..=2, 9)) {
        let phi = near_ray(&b, n, 0, &jitter);
        let step = b.c1() * (t + 1);
        let further = &phi + &step;
        if let Ok(t0) = dry_threshold(&phi, n, &b) {
            prop_assert!(dry_threshold(&further, n, &b).unwrap() > t0);
        }
    }

    #[test]
    fn fiber_integrality_and_lambda_sign((b, eta) in listed_base().prop_flat_map(|b| {
        let e = class(&b, -15, 15);
        (Just(b), e)
    }), n in 1u32..=7, tl in -3i64..=3) {
        let s = SpectralData::new(n, eta.clone(), tl);
        let admissible = parity_admissible(&b, n, &eta, tl);
        prop_assert_eq!(admissible, line_class_coeffs(&s, &b).is_integral);
        if admissible {
            let (sigma, fiber) = c2_w(&s, &b).unwrap();
            prop_assert_eq!(sigma, eta.clone());
            prop_assert!(fiber.is_integer());
            let flipped = c2_w(&SpectralData::new(n, eta.clone(), -tl), &b).unwrap();
            prop_assert_eq!(flipped.1, fiber);
            if tl.abs() == 1 {
                let cubic = Q::new((n as i128).pow(3) - n as i128, 24) * b.c1_squared();
                prop_assert_eq!(fiber, -cubic);
            }
        } else {
            prop_assert!(c2_w(&s, &b).is_err());
        }
    }

    #[test]
    fn required_c2e_inverts_c2v((b, eta) in listed_base().prop_flat_map(|b| {
        let e = class(&b, -10, 20);
        (Just(b), e)
    }), omega in -200i64..200, balanced in any::<bool>(), extra_r in 0u32..4, neg in any::<bool>()) {
        let twist = if balanced { Twist::Balanced } else { Twist::Standard };
        let n = 3;
        let r = if balanced { n } else { n + extra_r };
        let alpha = base_alpha(&b, twist).unwrap();
        let alpha = if neg { -alpha } else { alpha };
        let cfg = ExtensionConfig { n, r, two_lambda: 1, alpha, twist };
        let s = cfg.spectral(eta.clone());
        let need = required_c2e(&cfg, &s, omega, &b).unwrap();
        prop_assert!(need.is_integer());
        let (sigma, fiber) = c2_v(&cfg, &s, need.to_integer() as i64, &b).unwrap();
        prop_assert_eq!(sigma, eta);
        prop_assert_eq!(fiber, qi(omega as i128));
    }

    #[test]
    fn polarization_is_sound(b in listed_base(), k in 1i128..4, neg in any::<bool>(), balanced in any::<bool>()) {
        let twist = if balanced { Twist::Balanced } else { Twist::Standard };
        let alpha = &base_alpha(&b, twist).unwrap() * k;
        let alpha = if neg { -&alpha } else { alpha };
        let hb = select_hb(&b).unwrap();
        let p = build_polarization(&alpha, &hb, &b).unwrap();
        prop_assert!(check_polarization(&p, &alpha, &b));
        // minimality of t: one less fails unless already at 1
        if p.t > 1 {
            let smaller = &(&p.h * (p.t as i128 - 1)) - b.c1();
            prop_assert!(!b.is_ample(&smaller));
        }
    }

    #[test]
    fn sign_rule_gives_valid_nonsplit_data(
        b in listed_base(),
        n_rank in 6u32..=12,
        t in 0i128..3,
        jitter in proptest::collection::vec(-1i128..=2, 9),
    ) {
        let phi = near_ray(&b, n_rank, t, &jitter);
        prop_assume!(b_max(&phi, n_rank, &b).is_ok());
        for tpl in [ConfigTemplate::balanced(3), ConfigTemplate::standard(3, n_rank - 3)] {
            let alpha = select_alpha(&b, &phi, &tpl).unwrap();
            let shifted = &phi - &(b.c1() * 3);
            prop_assert!(b.intersect(&alpha, &shifted).unwrap() <= qi(0));
            let cfg = tpl.with_alpha(alpha);
            prop_assert!(drycert::extension::nonsplit_ok(&cfg, &phi, &b).unwrap());
            let sv = spectral_valid(&cfg.spectral(phi.clone()), &b);
            prop_assert_eq!(sv.verdict, Validity::Valid);
        }
    }
}

#[test]
fn signature_and_anticanonical_degree() {
    for name in NAMES {
        let b: BaseSurface = name.parse().unwrap();
        let (pos, _, zero) = b.signature();
        assert_eq!((pos, zero), (1, 0), "{name}");
        assert!(b.is_ample(b.c1()), "{name}");
        let want = match name {
            "P2" => 9,
            "F0" | "F1" => 8,
            _ => 9 - name[2..].parse::<i128>().unwrap(),
        };
        assert_eq!(b.c1_squared(), qi(want), "{name}");
    }
}

#[test]
fn orthogonality_facts() {
    for k in 1..=8u8 {
        let b = BaseSurface::del_pezzo(k).unwrap();
        for tw in [Twist::Standard, Twist::Balanced] {
            assert_eq!(b.intersect(&base_alpha(&b, tw).unwrap(), b.c1()).unwrap(), qi(0));
        }
        let a = base_alpha(&b, Twist::Standard).unwrap();
        assert_eq!(b.intersect(&a, &a).unwrap(), qi(-(k as i128) * (9 - k as i128)));
        let a = base_alpha(&b, Twist::Balanced).unwrap();
        assert_eq!(b.intersect(&a, &a).unwrap(), qi(-8));
    }
    for g in 0..=1u8 {
        let b = BaseSurface::hirzebruch(g).unwrap();
        let a = DivClass::from_ints([-1, 1]);
        for e in 1..5 {
            let hb = DivClass::from_ints([e, e * (g as i128 + 1)]);
            assert_eq!(b.intersect(&a, &hb).unwrap(), qi(0));
        }
        assert_eq!(-b.intersect(&a, &a).unwrap(), qi(g as i128 + 2));
    }
}

#[test]
fn curves_are_exceptional() {
    for k in 1..=8u8 {
        let b = BaseSurface::del_pezzo(k).unwrap();
        for c in neg_one_curves(k).unwrap() {
            assert_eq!(b.intersect(&c, &c).unwrap(), qi(-1));
            assert_eq!(b.intersect(&c, b.c1()).unwrap(), qi(1));
        }
    }
}

#[test]
fn generators_agree_with_reference_models() {
    for (m, name) in [(Model::f(0), "F0"), (Model::f(1), "F1"), (Model::dp3(), "dP3")] {
        let b: BaseSurface = name.parse().unwrap();
        assert_eq!(b.gram(), m.gram.as_slice());
        let mut ours: Vec<Vec<i128>> =
            b.mori_generators().iter().map(|d| d.integer_coeffs().unwrap().to_vec()).collect();
        let mut theirs = m.curves.clone();
        ours.sort();
        theirs.sort();
        assert_eq!(ours, theirs, "{name}");
    }
}

/// `omega_min` against the closed forms for `n = 3`.
#[test]
fn omega_min_closed_forms() {
    for m in [6i128, 8, 10, 12, 14] {
        for g in 0..=1i128 {
            let b = BaseSurface::hirzebruch(g as u8).unwrap();
            let a = base_alpha(&b, Twist::Standard).unwrap();
            let std = ExtensionConfig { n: 3, r: m as u32 - 3, two_lambda: 1, alpha: a.clone(), twist: Twist::Standard };
            let want = Q::new(2 * (-8 + m - 1) + 3 * (m - 3) * m * (g + 2), 2);
            assert_eq!(qi(omega_min(&std, &b).unwrap() as i128), want);
            if (m / 2) % 2 == 1 {
                let bal = ExtensionConfig { n: 3, r: 3, alpha: a, twist: Twist::Balanced, ..std };
                if m == 6 {
                    assert_eq!(omega_min(&bal, &b).unwrap() as i128, m / 2 + g - 4);
                }
            }
        }
        for k in 1..=8i128 {
            let b = BaseSurface::del_pezzo(k as u8).unwrap();
            let std = ExtensionConfig {
                n: 3,
                r: m as u32 - 3,
                two_lambda: 1,
                alpha: base_alpha(&b, Twist::Standard).unwrap(),
                twist: Twist::Standard,
            };
            let want = Q::new(2 * (-(9 - k) + m - 1) + 3 * (m - 3) * m * k * (9 - k), 2);
            assert_eq!(qi(omega_min(&std, &b).unwrap() as i128), want);
            if m == 6 {
                let bal = ExtensionConfig { r: 3, alpha: base_alpha(&b, Twist::Balanced).unwrap(), twist: Twist::Balanced, ..std };
                assert_eq!(omega_min(&bal, &b).unwrap() as i128, m / 2 + k + 1);
            }
        }
    }
}
