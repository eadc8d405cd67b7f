//! Randomized invariants across the geometry kernel.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use proptest::prelude::*;
use siegel_arc::hexagon::{malefic_map, ArcCoordinates, GenericityType, OrderedHexagon};
use siegel_arc::lagrangian::{cross_ratio, is_maximal_triple, Lagrangian, SiegelPoint, SpMap};
use siegel_arc::maxrep::SParameters;
use siegel_arc::reflection::{reflection_set_for_side, KElement};
use siegel_arc::symmat::{eig_general2, eig_sym2, rot, sqrt_pd, PosDef2, Rotation2, Sym2, WeylVector};
use siegel_arc::tube::{
    bijection_f, pd_criterion, rh_vector, split_rh, unsplit_rh, weyl_distance,
};

fn pd() -> impl Strategy<Value = Sym2> {
    (-2.0f64..2.0, -2.0f64..2.0, 0.0..PI).prop_map(|(l1, l2, t)| {
        Sym2::diag(l1.exp(), l2.exp()).congruence(&rot(t))
    })
}

fn sym() -> impl Strategy<Value = Sym2> {
    (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b, c)| Sym2::new(a, b, c))
}

/// Products of the three generator types of Sp(4, ℝ).
fn symplectic() -> impl Strategy<Value = SpMap> {
    (pd(), 0.0..PI, sym(), any::<bool>()).prop_map(|(p, t, s, with_j)| {
        let m = p.to_mat() * rot(t);
        let g = SpMap::block_diag(&m).expect("invertible").compose(&SpMap::translation(&s));
        if with_j {
            g.compose(&SpMap::j())
        } else {
            g
        }
    })
}

fn weyl(lo: f64, hi: f64) -> impl Strategy<Value = WeylVector> {
    (lo..hi, lo..hi).prop_map(|(a, b)| WeylVector::sorted(a, b))
}

fn stratum_weyl(diagonal: bool) -> BoxedStrategy<WeylVector> {
    if diagonal {
        (0.05f64..3.0).prop_map(WeylVector::diagonal).boxed()
    } else {
        (0.05f64..3.0, 0.01f64..2.0)
            .prop_map(|(x2, gap)| WeylVector::new(x2 + gap, x2))
            .boxed()
    }
}

fn arc_coords() -> impl Strategy<Value = ArcCoordinates> {
    (0usize..8)
        .prop_flat_map(|k| {
            let (b, c, d) = GenericityType::ALL[k].flags();
            (stratum_weyl(b), stratum_weyl(c), stratum_weyl(d), 0.0..2.0 * PI, 0.0..2.0 * PI)
        })
        .prop_map(|(b, c, d, a1, a2)| ArcCoordinates::new(b, c, d, a1, a2).expect("valid lengths"))
}

fn sorted_spectrum(m: &Matrix2<f64>) -> (f64, f64) {
    let (a, b) = eig_general2(m).expect("real spectrum");
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}

proptest! {
    #[test]
    fn sqrt_squares_back(m in pd()) {
        let p = PosDef2::new(m).unwrap();
        let r = sqrt_pd(&p).to_mat();
        let err = (r * r - m.to_mat()).norm() / m.to_mat().norm();
        prop_assert!(err < 1e-12, "relative error {err}");
    }

    #[test]
    fn eig_sym2_diagonalizes_descending(m in sym()) {
        prop_assume!(eig_sym2(&m).is_ok());
        let e = eig_sym2(&m).unwrap();
        let s = e.s.matrix();
        let d = s * m.to_mat() * s.transpose();
        let scale = m.norm().max(1.0);
        prop_assert!(d[(0, 1)].abs() < 1e-12 * scale);
        prop_assert!(d[(0, 0)] >= d[(1, 1)]);
        // eigenvalues are roots of λ² − tr λ + det
        for l in [e.lambda1, e.lambda2] {
            prop_assert!((l * l - m.trace() * l + m.det()).abs() < 1e-12 * scale * scale);
        }
    }

    #[test]
    fn rotation_composition_adds_angles(a in 0.0..PI, b in 0.0..PI) {
        let c = Rotation2::new(a).compose(&Rotation2::new(b));
        let want = (a + b).rem_euclid(PI);
        let diff = (c.theta - want).abs();
        prop_assert!(diff.min(PI - diff) < 1e-12);
    }

    #[test]
    fn cross_ratio_spectrum_is_invariant(x in pd(), y in pd(), g in symplectic()) {
        let z = Lagrangian::zero();
        let inf = Lagrangian::infinity();
        let lx = Lagrangian::from_chart(&x);
        let ly = Lagrangian::from_chart(&x.add(&y));
        let before = sorted_spectrum(&cross_ratio(&z, &lx, &ly, &inf).unwrap());
        let gl = |l: &Lagrangian| g.act_lagrangian(l);
        let after = sorted_spectrum(&cross_ratio(&gl(&z), &gl(&lx), &gl(&ly), &gl(&inf)).unwrap());
        prop_assert!((before.0 - after.0).abs() <= 1e-9 * before.0.abs().max(1.0));
        prop_assert!((before.1 - after.1).abs() <= 1e-9 * before.1.abs().max(1.0));
    }

    #[test]
    fn maximality_is_cyclic(x in pd(), g in symplectic()) {
        let t = [Lagrangian::zero(), Lagrangian::from_chart(&x), Lagrangian::infinity()].map(|l| g.act_lagrangian(&l));
        for k in 0..3 {
            prop_assert!(is_maximal_triple(&t[k], &t[(k + 1) % 3], &t[(k + 2) % 3]).unwrap());
            prop_assert!(!is_maximal_triple(&t[k], &t[(k + 2) % 3], &t[(k + 1) % 3]).unwrap());
        }
    }

    #[test]
    fn siegel_action_preserves_positivity(x in sym(), y in pd(), g in symplectic()) {
        let z = SiegelPoint::new(x, PosDef2::new(y).unwrap());
        let w = g.act_siegel(&z).unwrap();
        let (l1, l2) = w.y.inner().eigenvalues();
        prop_assert!(l1 > 0.0 && l2 > 0.0);
    }

    #[test]
    fn weyl_distance_is_invariant(y1 in pd(), y2 in pd(), x in sym(), g in symplectic()) {
        let z1 = SiegelPoint::i_times(PosDef2::new(y1).unwrap());
        let z2 = SiegelPoint::new(x, PosDef2::new(y2).unwrap());
        let d = weyl_distance(&z1, &z2);
        let e = weyl_distance(&g.act_siegel(&z1).unwrap(), &g.act_siegel(&z2).unwrap());
        prop_assert!(d.dist(&e) < 1e-8 * d.x1.max(1.0), "{d:?} vs {e:?}");
    }

    #[test]
    fn split_rh_roundtrips(y in pd()) {
        let p = PosDef2::new(y).unwrap();
        let (level, h) = split_rh(&p);
        let back = unsplit_rh(level, &h);
        prop_assert!(back.inner().approx_eq(&y, 1e-12));
    }

    /// The (r, h) criterion on the signed log-spectrum of X⁻¹Y decides Y − X > 0.
    #[test]
    fn pd_criterion_matches_difference(x in pd(), y in pd()) {
        let s = PosDef2::new(x).unwrap().powf(-0.5).to_mat();
        let m = Sym2::from_mat(&(s * y.to_mat() * s));
        let (l1, l2) = m.eigenvalues();
        prop_assume!(l2.ln().abs() > 1e-6);
        let v = WeylVector::sorted(l1.ln(), l2.ln());
        let (d1, d2) = y.sub(&x).eigenvalues();
        prop_assert_eq!(pd_criterion(&rh_vector(&v)), d1 > 0.0 && d2 > 0.0);
    }

    #[test]
    fn f_is_an_involution_preserving_strata(v in weyl(0.05, 6.0)) {
        let w = bijection_f(&v);
        let back = bijection_f(&w);
        prop_assert!(back.dist(&v) < 1e-10 * v.x1.max(1.0));
        prop_assert!(w.x1 >= w.x2);
        prop_assert_eq!(w.in_diagonal(), v.in_diagonal());
        let d = bijection_f(&WeylVector::diagonal(v.x1));
        prop_assert!((d.x1 - d.x2).abs() < 1e-12);
    }

    #[test]
    fn hexagon_roundtrip(p in arc_coords()) {
        let h = OrderedHexagon::from_coords(&p);
        let q = h.coords().unwrap();
        prop_assert!(q.max_difference(&p) < 1e-8, "{p:?} -> {q:?}");
        prop_assert!(h.orthogonality_defects().unwrap().iter().all(|d| *d < 1e-8));
        prop_assert!(h.is_maximal());
    }

    #[test]
    fn coordinates_are_isometry_invariant(p in arc_coords(), g in symplectic()) {
        let h = OrderedHexagon::from_coords(&p).act(&g);
        let q = h.coords().unwrap();
        prop_assert!(q.max_difference(&p) < 1e-7, "{p:?} -> {q:?}");
    }

    #[test]
    fn canonical_coordinates_are_idempotent(p in arc_coords()) {
        let (a1, a2) = p.construction_angles();
        let q = ArcCoordinates::new(p.b(), p.c(), p.d(), a1, a2).unwrap();
        prop_assert!(q.max_difference(&p) < 1e-12);
        let twice = p.reversed().reversed();
        prop_assert!(twice.max_difference(&p) < 1e-12);
    }

    #[test]
    fn extended_malefic_lands_on_a_semi_axis(b in weyl(0.05, 3.0), d in weyl(0.05, 3.0), c in 0.05f64..4.0, a1 in 0.0..2.0 * PI, a2 in 0.0..2.0 * PI) {
        for cv in [WeylVector::new(c, 0.0), WeylVector::new(0.0, c)] {
            let f = malefic_map(&b, &d, a1, a2, &cv);
            prop_assert!(f.x1.abs().min(f.x2.abs()) < 1e-8, "{f:?}");
        }
    }

    #[test]
    fn malefic_swap_symmetry(b in weyl(0.05, 3.0), d in weyl(0.05, 3.0), c in weyl(0.05, 4.0), a1 in 0.0..2.0 * PI, a2 in 0.0..2.0 * PI) {
        let f = malefic_map(&b, &d, a1, a2, &c);
        let g = malefic_map(&b, &d, PI - a1, PI - a2, &WeylVector::new(c.x2, c.x1));
        prop_assert!(f.dist(&g) < 1e-8 * f.x1.abs().max(1.0), "{f:?} vs {g:?}");
    }

    #[test]
    fn enumerated_reflections_are_involutions(p in arc_coords(), side in prop::sample::select(vec![2usize, 4, 6]), t in 0.0..PI) {
        let h = OrderedHexagon::from_coords(&p);
        let desc = reflection_set_for_side(&h, side).unwrap();
        let mut ks = vec![KElement::st(), KElement::ex()];
        if !KElement::theta(t).is_two_element() && desc.enumerate(&KElement::theta(t)).is_ok() {
            ks.push(KElement::theta(t));
        }
        for k in ks {
            let r = desc.enumerate(&k).unwrap();
            prop_assert!(r.involution_residual() < 1e-9);
            prop_assert!(r.antisymplectic_residual() < 1e-10);
            let (e1, e2) = r.fixed_lagrangians().unwrap();
            prop_assert!(r.act_lagrangian(&e1).distance(&e1) < 1e-8);
            prop_assert!(r.act_lagrangian(&e2).distance(&e2) < 1e-8);
            prop_assert!(desc.identify(&r).unwrap().approx_eq(&k, 1e-7));
        }
    }

    #[test]
    fn parameter_canonicalization_is_idempotent(p in arc_coords(), ts in prop::array::uniform3(0.0..PI), ids in prop::array::uniform3(any::<bool>())) {
        let fams = siegel_arc::maxrep::side_families(&p);
        let k = |i: usize| {
            use siegel_arc::reflection::ReflectionFamily::*;
            match (fams[i], ids[i]) {
                (TwoElement, false) => KElement::st(),
                (TwoElement, true) => KElement::ex(),
                (FullK, true) => KElement::st(),
                (FullK, false) => KElement::theta(ts[i]),
            }
        };
        let s = SParameters::new(p, k(0), k(1), k(2)).unwrap();
        let c = s.canonical();
        prop_assert!(c.canonical().max_difference(&c) < 1e-12);
    }
}
