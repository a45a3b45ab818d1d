mod common;

use common::{field, random_form, random_span_form, rng};
use fedder_core::fields::Embedding;
use fedder_core::mpoly::BinaryForm;
use fedder_core::pgl2::*;
use fedder_core::unifactor::{roots, squarefree_decomposition, DivisorP1};
use proptest::prelude::*;

fn nonzero_form(p: u64, n: usize, d: usize, seed: u64) -> BinaryForm {
    let k = field(p, n);
    let mut r = rng(seed);
    loop {
        let g = random_form(&k, d, &mut r);
        if !g.is_zero() {
            return g;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn root_divisor_reconstructs_the_form(seed: u64, pick in 0usize..4, d in 1usize..7) {
        let (p, n) = [(2, 1), (3, 1), (5, 1), (3, 2)][pick];
        let g = nonzero_form(p, n, d, seed);
        let div = roots(&g).unwrap();
        prop_assert_eq!(div.degree() as usize, d);
        let h = div.to_form();
        let ge = g.embed(div.base_embedding());
        // equal up to the leading scalar
        let i = ge.coeffs().iter().position(|c| !c.is_zero()).unwrap();
        let k = div.field();
        let scale = k.div(ge.coeff(i), h.coeff(i)).unwrap();
        prop_assert_eq!(h.scale(scale), ge);
        let sq = squarefree_decomposition(&g).unwrap();
        let total: usize = sq.factors.iter().map(|(f, m)| f.degree() * *m as usize).sum();
        prop_assert_eq!(total, d);
    }

    #[test]
    fn roots_transform_contragrediently(seed: u64, pick in 0usize..3) {
        let p = [2u64, 3, 5][pick];
        let g = nonzero_form(p, 1, 4, seed);
        let m = GL2Matrix::random(g.field(), &mut rng(seed ^ 0x5eed));
        let d = roots(&g).unwrap();
        let moved = roots(&m.act_form(&g)).unwrap();
        // same splitting degree, possibly different base embeddings
        prop_assert_eq!(d.field(), moved.field());
        let k = d.field().clone();
        let d = d.embed_into(&k).unwrap();
        let moved = moved.embed_into(&k).unwrap();
        let mk = m.embed(&Embedding::new(g.field(), &k).unwrap());
        prop_assert_eq!(mk.inverse().act_divisor(&d), moved);
    }

    #[test]
    fn la5_normalization_is_exact(seed: u64, pick in 0usize..3) {
        let (p, n) = [(3, 1), (5, 1), (3, 2)][pick];
        let k = field(p, n);
        let mut r = rng(seed);
        let g = random_span_form(&k, &mut r);
        match la5_normalize(&g, p as u32) {
            Ok(res) => {
                let kk = res.matrix.field().clone();
                let emb = Embedding::new(&k, &kk).unwrap();
                let h = res.matrix.act_form(&g.embed(&emb));
                prop_assert_eq!(h.sub(&la5_target(&kk).scale(res.lambda.1)), BinaryForm::zero(&kk, p as usize + 1));
            }
            Err(Pgl2Error::InsufficientRoots(n)) => prop_assert!(n < 3),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn span_is_closed_under_gl2(seed: u64, pick in 0usize..3) {
        let (p, n) = [(3, 1), (5, 1), (5, 2)][pick];
        let k = field(p, n);
        let mut r = rng(seed);
        let g = random_span_form(&k, &mut r);
        let m = GL2Matrix::random(&k, &mut r);
        prop_assert!(in_la5_span(&m.act_form(&g)));
    }

    #[test]
    fn equivalence_is_an_equivalence_relation(seed: u64, pick in 0usize..3) {
        let p = [2u64, 3, 5][pick];
        let g = nonzero_form(p, 1, 5, seed);
        let d = roots(&g).unwrap();
        let k = d.field().clone();
        let mut r = rng(seed.wrapping_add(1));
        let m1 = GL2Matrix::random(&k, &mut r);
        let m2 = GL2Matrix::random(&k, &mut r);
        let d1 = m1.act_divisor(&d);
        let d2 = m2.act_divisor(&d1);
        prop_assert!(divisor_pgl2_equivalent(&d, &d).unwrap().is_some());
        let w = divisor_pgl2_equivalent(&d, &d1).unwrap().unwrap();
        prop_assert_eq!(w.act_divisor(&d), d1.clone());
        let back = divisor_pgl2_equivalent(&d1, &d).unwrap().unwrap();
        prop_assert_eq!(back.act_divisor(&d1), d.clone());
        prop_assert_eq!(w.inverse().act_divisor(&d1), d.clone());
        let w2 = divisor_pgl2_equivalent(&d1, &d2).unwrap().unwrap();
        prop_assert_eq!(w2.mul(&w).act_divisor(&d), d2.clone());
        prop_assert!(divisor_pgl2_equivalent(&d, &d2).unwrap().is_some());
    }

    #[test]
    fn delta_class_is_gl2_invariant(seed: u64, pick in 0usize..3) {
        let p = [3u64, 5, 2][pick];
        let k = field(p, 1);
        let mut r = rng(seed);
        // build discriminant-like divisors from the reference shapes and random ones
        let base = if r.random_bool(0.5) {
            let refs = reference_divisors(p as u32, if p == 2 { DeltaContext::Branch } else { DeltaContext::Anticanonical });
            refs[r.random_range(0..refs.len().max(1))].1.to_form()
        } else {
            let degree = if p == 2 { 3 } else { 12 };
            loop {
                let g = random_form(&k, degree, &mut r);
                if !g.is_zero() && fedder_core::unifactor::splitting_degree(&g).unwrap() <= 12 {
                    break g;
                }
            }
        };
        let ctx = if p == 2 { DeltaContext::Branch } else { DeltaContext::Anticanonical };
        let m = GL2Matrix::random(&k, &mut r);
        let a = delta_class(&roots(&base).unwrap(), p as u32, ctx).unwrap();
        let moved = m.act_form(&base);
        if fedder_core::unifactor::splitting_degree(&moved).unwrap() <= 12 {
            let b = delta_class(&roots(&moved).unwrap(), p as u32, ctx).unwrap();
            prop_assert_eq!(a.label, b.label);
        }
    }
}

use rand::Rng;

#[test]
fn reference_divisors_are_distinct_classes() {
    for (p, ctx) in [(3, DeltaContext::Anticanonical), (2, DeltaContext::Branch), (3, DeltaContext::Branch)] {
        let refs = reference_divisors(p, ctx);
        for (i, (_, a)) in refs.iter().enumerate() {
            for (j, (_, b)) in refs.iter().enumerate() {
                assert_eq!(divisor_pgl2_equivalent(a, b).unwrap().is_some(), i == j);
            }
        }
    }
    let d = DivisorP1::rational_points(5, 2);
    assert_eq!(d.degree(), 12);
}
