use heightdyn::builtins;
use heightdyn::dynamics::{canonical_height, kawaguchi_slack, Direction, DEFAULT_MAX_BITS};
use heightdyn::k3::{random_surface_through_point, wehler_iterate, K3HeightVector, ALPHA};
use heightdyn::map::integer_det;
use heightdyn::modp;
use heightdyn::parse::parse_map;
use heightdyn::poly::{reduce_mod, HomogPoly, Monomial};
use heightdyn::rational::{root_coeff_bound_holds, root_coeff_gap};
use heightdyn::{BigRat, Image, Integer, ProjPoint, RationalMap};
use malachite_base::num::arithmetic::traits::{Pow, UnsignedAbs};
use malachite_base::num::basic::traits::One;
use proptest::prelude::*;

const PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 - 1

fn map_strategy(max_n: usize, max_d: u32, coeff: i64) -> impl Strategy<Value = RationalMap> {
    (1..=max_n, 1..=max_d).prop_flat_map(move |(n, d)| {
        let monomials = Monomial::all_of_degree(n + 1, d);
        let m = monomials.len();
        prop::collection::vec(prop::collection::vec(-coeff..=coeff, m), n + 1).prop_filter_map(
            "all-zero coordinate",
            move |rows| {
                let coords: Option<Vec<HomogPoly>> = rows
                    .iter()
                    .map(|row| {
                        let terms = monomials
                            .iter()
                            .zip(row)
                            .map(|(mono, &c)| (mono.clone(), Integer::from(c)))
                            .collect();
                        HomogPoly::from_terms(n + 1, terms)
                    })
                    .collect();
                RationalMap::new(coords?).ok()
            },
        )
    })
}

fn point_strategy(len: usize, bound: i64) -> impl Strategy<Value = ProjPoint> {
    prop::collection::vec(-bound..=bound, len)
        .prop_filter_map("zero vector", |c| ProjPoint::from_i64s(&c).ok())
}

fn map_and_point(max_n: usize, max_d: u32) -> impl Strategy<Value = (RationalMap, ProjPoint)> {
    map_strategy(max_n, max_d, 20).prop_flat_map(|phi| {
        let len = phi.n() + 1;
        (Just(phi), point_strategy(len, 1_000_000))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn triangle_inequality_is_exact((phi, p) in map_and_point(3, 3)) {
        let raw = phi.evaluate_raw(&p).unwrap();
        let bound = Integer::from(phi.monomial_count())
            * Integer::from(phi.height().hmax)
            * Integer::from(p.hmax()).pow(phi.degree() as u64);
        for v in &raw {
            prop_assert!(v.unsigned_abs() <= bound);
        }
        if let Image::Point(q) = phi.evaluate(&p).unwrap() {
            prop_assert!(q.hmax() <= bound);
        }
    }

    #[test]
    fn normalization_is_idempotent_and_scale_invariant(
        coords in prop::collection::vec((-10_000i64..10_000, 1i64..500), 2..6),
        num in prop::sample::select(vec![-7i64, -3, -1, 1, 2, 5, 12]),
        den in 1i64..50,
    ) {
        let raw: Vec<BigRat> = coords.iter().map(|&(a, b)| BigRat::from_signeds(a, b)).collect();
        let Ok(p) = ProjPoint::normalize(&raw) else { return Ok(()) };
        let again: Vec<BigRat> = p.coords().iter().map(|c| BigRat::from(c.clone())).collect();
        prop_assert_eq!(&ProjPoint::normalize(&again).unwrap(), &p);
        let lambda = BigRat::from_signeds(num, den);
        let scaled: Vec<BigRat> = raw.iter().map(|r| r * &lambda).collect();
        prop_assert_eq!(&ProjPoint::normalize(&scaled).unwrap(), &p);
    }

    #[test]
    fn height_is_permutation_invariant(p in point_strategy(4, 1 << 40), rot in 0usize..4) {
        let mut c = p.coords().to_vec();
        c.rotate_left(rot);
        let q = ProjPoint::from_integers(c).unwrap();
        prop_assert_eq!(q.height(), p.height());
    }

    #[test]
    fn ratios_ignore_the_representative((phi, p) in map_and_point(2, 3), k in 2i64..1000) {
        let scaled = ProjPoint::normalize(
            &p.coords().iter().map(|c| BigRat::from(c * Integer::from(k))).collect::<Vec<_>>(),
        )
        .unwrap();
        prop_assert_eq!(phi.evaluate(&scaled).unwrap(), phi.evaluate(&p).unwrap());
    }

    #[test]
    fn planted_roots_respect_the_coefficient_bound(
        rn in -1000i64..1000,
        rd in 1i64..1000,
        cofactor in prop::collection::vec((-1000i64..1000, 1i64..100), 0..6),
    ) {
        let root = BigRat::from_signeds(rn, rd);
        // (X - root) * (X^m + c1 X^(m-1) + ... + cm)
        let g: Vec<BigRat> = cofactor.iter().map(|&(a, b)| BigRat::from_signeds(a, b)).collect();
        let mut full = vec![BigRat::ONE];
        full.extend(g.iter().cloned());
        let mut coeffs = Vec::with_capacity(full.len());
        for i in 1..=full.len() {
            let carry = if i < full.len() { full[i].clone() } else { BigRat::from(0) };
            coeffs.push(carry - &root * &full[i - 1]);
        }
        prop_assert!(root_coeff_gap(&coeffs, &root).unwrap() >= -1e-9);
        prop_assert!(root_coeff_bound_holds(&coeffs, &root).unwrap());
    }

    #[test]
    fn jacobian_determinant_commutes_with_reduction(
        (phi, p) in map_and_point(2, 3),
    ) {
        let det = phi.jacobian_det().unwrap();
        let at_p = det.eval(p.coords());
        prop_assert_eq!(&at_p, &integer_det(&phi.jacobian_at(p.coords())));
        let x: Vec<u64> = p.coords().iter().map(|c| reduce_mod(c, PRIME)).collect();
        prop_assert_eq!(reduce_mod(&at_p, PRIME), modp::det(phi.jacobian_mod(&x, PRIME), PRIME));
    }

    #[test]
    fn display_then_parse_round_trips(phi in map_strategy(3, 3, 50)) {
        prop_assert_eq!(parse_map(&phi.to_string()).unwrap(), phi);
    }

    #[test]
    fn composition_matches_iterated_evaluation(
        (phi, p) in map_and_point(2, 2),
        psi in map_strategy(2, 2, 5),
    ) {
        prop_assume!(psi.n() == phi.n());
        let composed = phi.compose(&psi).unwrap();
        let stepwise = match psi.evaluate(&p).unwrap() {
            Image::Point(q) => phi.evaluate(&q).unwrap(),
            Image::Indeterminate => Image::Indeterminate,
        };
        prop_assert_eq!(composed.evaluate(&p).unwrap(), stepwise);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn henon_canonical_height_scales_by_degree(x in -50i64..50, y in -50i64..50) {
        let a = builtins::henon(1).unwrap();
        let p = ProjPoint::from_i64s(&[1, x, y]).unwrap();
        let tol = 1e-6;
        let h0 = canonical_height(&a, &p, Direction::Plus, 20, tol, DEFAULT_MAX_BITS).unwrap();
        let q = a.step(&p, Direction::Plus, 1).unwrap();
        let h1 = canonical_height(&a, &q, Direction::Plus, 20, tol, DEFAULT_MAX_BITS).unwrap();
        prop_assert!(h0.value >= 0.0);
        prop_assert!((h1.value - 2.0 * h0.value).abs() < 10.0 * tol);
        let hm = canonical_height(&a, &p, Direction::Minus, 20, tol, DEFAULT_MAX_BITS).unwrap();
        // h <= h+ + h- + C and h+ <= h + C with one fixed C
        let h = p.height().h;
        prop_assert!(h <= h0.value + hm.value + 2.0);
        prop_assert!(h0.value <= h + 2.0);
    }

    #[test]
    fn kawaguchi_slack_is_rescaling_invariant(x in -500i64..500, y in -500i64..500, k in 2i64..40) {
        let a = builtins::henon(3).unwrap();
        let p = ProjPoint::from_i64s(&[1, x, y]).unwrap();
        let q = ProjPoint::from_i64s(&[k, k * x, k * y]).unwrap();
        prop_assert_eq!(kawaguchi_slack(&a, &p).unwrap(), kawaguchi_slack(&a, &q).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn wehler_orbits_stay_exact(
        seed in 0u64..1000,
        base in prop::collection::vec(-3i64..=3, 6),
    ) {
        let x = ProjPoint::from_i64s(&base[..3]);
        let y = ProjPoint::from_i64s(&base[3..]);
        prop_assume!(x.is_ok() && y.is_ok());
        let (x, y) = (x.unwrap(), y.unwrap());
        let Ok((v, p)) = random_surface_through_point((&x, &y), 4, seed) else {
            return Ok(());
        };
        let forward = wehler_iterate(&v, &p, 3, 1 << 22).unwrap();
        for step in &forward.steps {
            let s = &step.point;
            prop_assert!(v.contains(&s.x, &s.y));
            for idx in [1, 2] {
                let once = v.involution(s, idx).unwrap();
                prop_assert!(v.contains(&once.x, &once.y));
                prop_assert_eq!(&v.involution(&once, idx).unwrap(), s);
            }
            let hv: K3HeightVector = step.heights;
            let lhs = hv.h_eplus + hv.h_eminus;
            let rhs = (ALPHA - 1.0) * (hv.h_d1 + hv.h_d2);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
        }
        let end = forward.steps.last().unwrap().point.clone();
        let back = wehler_iterate(&v, &end, -(forward.steps.len() as i64 - 1), 1 << 22).unwrap();
        prop_assert_eq!(&back.steps.last().unwrap().point, &p);
    }
}
