mod common;

use common::{field, random_equation, rng};
use fedder_core::dp1::complete_square_cube;
use fedder_core::fedder::{is_fsplit_hypersurface, is_fsplit_truncated, monomial_in_frobenius_power};
use fedder_core::mpoly::{parse_poly, Alphabet, Monomial, MultiPoly};
use proptest::prelude::*;
use rand::Rng;

fn random_poly(p: u64, seed: u64) -> MultiPoly {
    let k = field(p, 1);
    let a = Alphabet::flat(&["a", "b", "c"]).unwrap();
    let mut r = rng(seed);
    let n = r.random_range(1..6);
    let terms: Vec<(Monomial, _)> = (0..n)
        .map(|_| (Monomial::new(&[r.random_range(0..4), r.random_range(0..4), r.random_range(0..4)]), k.random_nonzero(&mut r)))
        .collect();
    let f = MultiPoly::from_terms(&k, &a, terms);
    if f.is_zero() {
        MultiPoly::one(&k, &a)
    } else {
        f
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn truncated_engine_matches_full_power_on_sextics(seed: u64, pick in 0usize..4) {
        let (p, n) = [(2, 1), (3, 1), (5, 1), (2, 2)][pick];
        let k = field(p, n);
        let eq = random_equation(&k, false, &mut rng(seed));
        let f = eq.to_poly();
        prop_assert_eq!(is_fsplit_truncated(&f).unwrap(), is_fsplit_hypersurface(&f).unwrap());
    }

    #[test]
    fn truncated_engine_matches_full_power_on_generic_polys(seed: u64, pick in 0usize..3) {
        let f = random_poly([2, 3, 5][pick], seed);
        prop_assert_eq!(is_fsplit_truncated(&f).unwrap(), is_fsplit_hypersurface(&f).unwrap());
    }

    #[test]
    fn fedder_is_invariant_under_completion(seed: u64, pick in 0usize..3) {
        let k = field([3, 5, 7][pick], 1);
        let eq = random_equation(&k, false, &mut rng(seed));
        let before = is_fsplit_hypersurface(&eq.to_poly()).unwrap().f_split;
        let after = is_fsplit_hypersurface(&complete_square_cube(&eq).to_poly()).unwrap().f_split;
        prop_assert_eq!(before, after);
    }

    #[test]
    fn witness_survives_the_frobenius_power(seed: u64, pick in 0usize..3) {
        let p = [2u32, 3, 5][pick];
        let f = random_poly(p as u64, seed);
        let v = is_fsplit_hypersurface(&f).unwrap();
        if let Some((m, c)) = v.witness {
            prop_assert!(!monomial_in_frobenius_power(m.exps(), p));
            prop_assert_eq!(f.pow(p - 1).unwrap().coeff(&m), c);
        }
    }

    #[test]
    fn nonzero_scaling_keeps_the_verdict(seed: u64) {
        let k = field(5, 1);
        let mut r = rng(seed);
        let eq = random_equation(&k, false, &mut r);
        let c = k.random_nonzero(&mut r);
        let f = eq.to_poly();
        prop_assert_eq!(is_fsplit_hypersurface(&f).unwrap().f_split, is_fsplit_hypersurface(&f.scale(c)).unwrap().f_split);
    }
}

#[test]
fn smooth_quadric_and_cubic_cone() {
    // xy - zw is F-split in every characteristic; a cone over a cubic curve is not in char 2
    for p in [2, 3, 5, 7] {
        let k = field(p, 1);
        let a = Alphabet::flat(&["x", "y", "z", "w"]).unwrap();
        let q = parse_poly("x*y - z*w", &k, &a).unwrap();
        assert!(is_fsplit_hypersurface(&q).unwrap().f_split, "p = {p}");
    }
    let k = field(2, 1);
    let a = Alphabet::flat(&["x", "y", "z"]).unwrap();
    let g = parse_poly("x^3 + y^3 + z^3", &k, &a).unwrap();
    assert!(!is_fsplit_hypersurface(&g).unwrap().f_split);
}
