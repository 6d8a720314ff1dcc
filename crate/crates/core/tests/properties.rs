use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toricstab::catalog;
use toricstab::json::{parse, to_string, PlJson, PolytopeJson, Q};
use toricstab::kahler::{EnergyContext, GridSpec, SymplecticPotential};
use toricstab::lp;
use toricstab::plconvex::{AffineFunction, PlFunction};
use toricstab::polytope::DelzantPolytope;
use toricstab::rational::{frac, int, to_f64, Rational};
use toricstab::stability::{donaldson_l, futaki_character, j_norm, l_of_affine};
use toricstab::verify::{
    random_affine, random_convex_pl, random_delzant_polygon, random_lp, random_translation, random_unimodular,
};

fn polytope(choice: u8, seed: u64) -> DelzantPolytope {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match choice % 5 {
        0 => catalog::interval(&int(1 + (seed % 3) as i64)).unwrap(),
        1 => catalog::square(&int(1)).unwrap(),
        2 => catalog::simplex2(&int(1)).unwrap(),
        3 => catalog::hirzebruch_fano(),
        _ => random_delzant_polygon(&mut rng),
    }
}

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(p, q)| frac(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn j_norm_is_affine_invariant_homogeneous_and_nonnegative(choice in 0u8..5, seed in any::<u64>(), q in 0i64..6) {
        let p = polytope(choice, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let f = random_convex_pl(&mut rng, p.dim());
        let l = random_affine(&mut rng, p.dim());
        let j = j_norm(&p, &f).unwrap();
        prop_assert!(!j.is_negative());
        prop_assert_eq!(&j, &j_norm(&p, &f.add_affine(&l)).unwrap());
        prop_assert_eq!(&j * int(q), j_norm(&p, &f.scale(&int(q)).unwrap()).unwrap());
        prop_assert!(j_norm(&p, &PlFunction::Affine(l)).unwrap().is_zero());
    }

    #[test]
    fn l_is_linear_and_kills_constants(choice in 0u8..5, seed in any::<u64>(), q in rational(), c in rational()) {
        let p = polytope(choice, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf00d);
        let f = random_convex_pl(&mut rng, p.dim());
        let l = random_affine(&mut rng, p.dim());
        let lf = donaldson_l(&p, &f).unwrap();
        prop_assert_eq!(donaldson_l(&p, &f.add_affine(&l)).unwrap(), &lf + l_of_affine(&p, &l));
        match f.to_mesh(&p).map(PlFunction::Mesh).and_then(|m| m.scale(&q)) {
            Ok(g) => prop_assert_eq!(donaldson_l(&p, &g).unwrap(), &lf * &q),
            Err(err) => prop_assert!(false, "scaling a mesh function failed: {}", err),
        }
        if q.is_negative() && matches!(f, PlFunction::MaxAffine(_)) {
            prop_assert!(f.scale(&q).is_err());
        }
        prop_assert!(l_of_affine(&p, &AffineFunction::constant(p.dim(), c)).is_zero());
    }

    #[test]
    fn l_of_coordinates_is_the_futaki_vector(choice in 0u8..5, seed in any::<u64>()) {
        let p = polytope(choice, seed);
        let fut = futaki_character(&p);
        for i in 0..p.dim() {
            prop_assert_eq!(&l_of_affine(&p, &AffineFunction::coordinate(p.dim(), i)), &fut.values[i]);
        }
        if let Some(d) = fut.destabilizer() {
            prop_assert!(l_of_affine(&p, &d).is_negative());
        }
    }

    #[test]
    fn lp_outcomes_carry_valid_certificates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let prog = random_lp(&mut rng);
        let out = lp::solve(&prog).unwrap();
        prop_assert!(lp::verify_certificate(&prog, &out).is_ok());
    }

    #[test]
    fn unimodular_transforms_preserve_exact_invariants(choice in 0u8..5, seed in any::<u64>()) {
        let p = polytope(choice, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let a = random_unimodular(&mut rng, p.dim());
        let t = random_translation(&mut rng, p.dim());
        let f = random_convex_pl(&mut rng, p.dim());
        let q = p.transform(&a, &t).unwrap();
        prop_assert_eq!(q.volume(), p.volume());
        prop_assert_eq!(q.boundary_area(), p.boundary_area());
        prop_assert_eq!(q.mean_scalar(), p.mean_scalar());
        let g = f.transform(&a, &t).unwrap();
        prop_assert_eq!(donaldson_l(&q, &g).unwrap(), donaldson_l(&p, &f).unwrap());
        prop_assert_eq!(futaki_character(&q).zero, futaki_character(&p).zero);
    }

    #[test]
    fn json_round_trips(choice in 0u8..5, seed in any::<u64>(), q in rational()) {
        let p = polytope(choice, seed);
        let text = to_string(&PolytopeJson::from_polytope(&p));
        prop_assert_eq!(&parse::<PolytopeJson>(&text).unwrap().to_polytope().unwrap(), &p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_convex_pl(&mut rng, p.dim());
        let back = parse::<PlJson>(&to_string(&PlJson::from_pl(&f))).unwrap().to_pl().unwrap();
        prop_assert_eq!(back, f);
        let back: Q = serde_json::from_str(&serde_json::to_string(&Q(q.clone())).unwrap()).unwrap();
        prop_assert_eq!(back.0, q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn k_energy_shifts_by_l_under_affine_changes(a in rational(), b in rational()) {
        let p = catalog::interval(&int(1)).unwrap();
        let ctx = EnergyContext::new(&p, &GridSpec::for_dim(1)).unwrap();
        let u = SymplecticPotential::guillemin(&p);
        let l = AffineFunction::new(vec![a], b);
        let base = ctx.energy_m(&u).unwrap().m;
        let shifted = ctx.energy_m(&u.add_affine(&l).unwrap()).unwrap().m;
        prop_assert!((shifted - base - to_f64(&l_of_affine(&p, &l))).abs() < 1e-8);
    }
}
