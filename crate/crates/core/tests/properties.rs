use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sextica::codes::{code_span, torsion_lower_bound};
use sextica::defect::{defect_eval, defect_hilbert, points_ideal};
use sextica::poly::{F2Vector, Poly, PrimeField};

fn field() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_evaluate_pointwise(seed in any::<u64>(), da in 0u32..5, db in 0u32..5, pt in prop::array::uniform4(0u64..32003)) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Poly::random(f, da, &mut rng);
        let b = Poly::random(f, db, &mut rng);
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.degree(), da + db);
        prop_assert_eq!(ab.eval(&pt), f.mul(a.eval(&pt), b.eval(&pt)));
        prop_assert_eq!(ab.div_exact(&b).unwrap(), a);
    }

    #[test]
    fn euler_identity(seed in any::<u64>(), d in 1u32..6, pt in prop::array::uniform4(0u64..32003)) {
        let f = field();
        let g = Poly::random(f, d, &mut ChaCha8Rng::seed_from_u64(seed));
        let lhs = (0..4).fold(0, |acc, i| f.add(acc, f.mul(pt[i], g.derivative(i).eval(&pt))));
        prop_assert_eq!(lhs, f.mul(d as u64 % 32003, g.eval(&pt)));
    }

    #[test]
    fn span_contains_generators(gens in prop::collection::vec(prop::collection::vec(any::<bool>(), 12), 0..8)) {
        let vs: Vec<F2Vector> = gens.iter().map(|g| F2Vector::from_bits(g)).collect();
        let code = code_span(12, &vs).unwrap();
        prop_assert!(code.dim() <= vs.len());
        for v in &vs {
            prop_assert!(code.contains(v));
        }
        prop_assert_eq!(code.elements().len(), 1usize << code.dim());
    }

    #[test]
    fn torsion_bound_is_truncated_difference(a in 0u64..1000, b in 0u64..1000) {
        let t = torsion_lower_bound(a, b);
        prop_assert_eq!(t + a.min(b), a);
    }

    #[test]
    fn defect_routes_agree(pts in prop::collection::btree_set(prop::array::uniform4(1u64..32003), 1..25)) {
        let f = field();
        let pts: Vec<[u64; 4]> = pts.into_iter().collect();
        if let Ok(b) = defect_eval(f, &pts, 2) {
            let a = defect_hilbert(&points_ideal(f, &pts).unwrap(), 2).unwrap();
            prop_assert_eq!((a.defect, a.h0_in), (b.defect, b.h0_in));
        }
    }
}
