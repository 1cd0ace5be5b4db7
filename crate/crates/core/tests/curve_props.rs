use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use padtors::elliptic::{division_poly, sample_point, CurvePoint, FormalLog, WeierstrassCurve};
use padtors::tate::TateModel;
use padtors::Padic;

const P: u64 = 5;
const PREC: i64 = 40;

fn curve() -> WeierstrassCurve {
    WeierstrassCurve::from_i64(-1, 0, P, PREC).unwrap()
}

/// Equal at the precision the coordinates carry, which must reach `digits`.
fn close(a: &CurvePoint, b: &CurvePoint, digits: i64) -> bool {
    let same = |u: &Padic, v: &Padic| {
        let d = u - v;
        d.is_zero() && d.prec() >= digits
    };
    match (a, b) {
        (CurvePoint::Infinity, CurvePoint::Infinity) => true,
        (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => same(x1, x2) && same(y1, y2),
        _ => false,
    }
}

fn points(seed: u64, n: usize) -> Vec<CurvePoint> {
    let e = curve();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_point(&e, &mut rng).unwrap()).collect()
}

fn unit(seed: u64, prec: i64) -> Padic {
    // a unit congruent to 2 or 3 mod 5
    let n = (seed % 5u64.pow(12)) as i64 * 5 + 2 + (seed % 2) as i64;
    Padic::from_i64(n, P, prec)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn group_laws(seed in any::<u64>()) {
        let e = curve();
        let pts = points(seed, 3);
        let (a, b, c) = (&pts[0], &pts[1], &pts[2]);
        let ab = e.add(a, b).unwrap();
        prop_assert!(e.contains(&ab));
        prop_assert!(close(&ab, &e.add(b, a).unwrap(), 15));
        let left = e.add(&ab, c).unwrap();
        let right = e.add(a, &e.add(b, c).unwrap()).unwrap();
        prop_assert!(close(&left, &right, 15));
        prop_assert!(e.add(a, &e.neg(a)).unwrap().is_infinity());
        prop_assert!(close(&e.double(a).unwrap(), &e.add(a, a).unwrap(), 15));
        prop_assert!(close(&e.smul(3, a).unwrap(), &e.add(&e.double(a).unwrap(), a).unwrap(), 15));
        prop_assert!(close(&e.smul(-1, a).unwrap(), &e.neg(a), 15));
    }

    #[test]
    fn multiplication_matches_division_polynomials(seed in any::<u64>(), n in 2u64..=5) {
        // x(nP) = x - psi_(n-1) psi_(n+1) / psi_n^2
        let e = curve();
        let pt = points(seed, 1).remove(0);
        let x = pt.x().unwrap();
        let f2 = e.rhs(x).mul_int(4); // (2y)^2
        let psi_sq = |k: u64| {
            let f = division_poly(&e, k).x_part.eval(x);
            let s = f.square();
            if k.is_multiple_of(2) { &s * &f2 } else { s }
        };
        let fm = division_poly(&e, n - 1).x_part.eval(x);
        let fp = division_poly(&e, n + 1).x_part.eval(x);
        let prod = if n % 2 == 0 { &fm * &fp } else { &(&fm * &fp) * &f2 };
        let den = psi_sq(n);
        prop_assume!(!den.is_zero());
        let xn = x - &prod.try_div(&den).unwrap();
        match e.smul(n as i64, &pt).unwrap() {
            CurvePoint::Affine { x: x2, .. } => prop_assert!((&xn - &x2).val() >= 20, "n = {}", n),
            CurvePoint::Infinity => prop_assert!(false, "random point is torsion"),
        }
    }

    #[test]
    fn log_is_an_isometric_homomorphism(a in 1u64..5u64.pow(10), b in 1u64..5u64.pow(10)) {
        let e = curve();
        let fl = FormalLog::for_curve(&e).unwrap();
        let z1 = Padic::from_i64(5 * a as i64, P, PREC);
        let z2 = Padic::from_i64(5 * b as i64, P, PREC);
        let (p1, p2) = (fl.point_from_parameter(&z1).unwrap(), fl.point_from_parameter(&z2).unwrap());
        let (l1, l2) = (fl.log(&p1).unwrap(), fl.log(&p2).unwrap());
        if a != b {
            let dz = &z1 - &z2;
            prop_assert_eq!((&l1 - &l2).val(), dz.val());
        }
        let l12 = fl.log(&e.add(&p1, &p2).unwrap()).unwrap();
        prop_assert!((&l12 - &(&l1 + &l2)).val() >= 30);
    }

    #[test]
    fn tate_symmetry_and_round_trip(seed in any::<u64>(), vq in prop::sample::select(vec![4i64, 6])) {
        let m = TateModel::build(P, 30, 24).unwrap();
        let q = &unit(seed, 30) * &Padic::p_power(P, vq, 30 + vq);
        let e = m.curve_at(&q).unwrap().smooth().unwrap();
        let u = unit(seed / 7, 30);
        let z = &Padic::from_i64(5, P, 31) + &(&u * &Padic::p_power(P, 2, 32));
        let pt = m.unif(&q, &z).unwrap();
        prop_assert!(e.contains(&pt));
        // eta(1/z) = -eta(z)
        prop_assert!(close(&m.unif(&q, &z.inv().unwrap()).unwrap(), &e.neg(&pt), 25));
        // x determines z near p
        let back = m.solve_z(pt.x().unwrap(), &q).unwrap().root;
        prop_assert!((&back - &z).val() >= 25);
    }
}
