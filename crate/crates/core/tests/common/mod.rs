#![allow(dead_code)]

use fedder_core::dp1::{DP1Equation, DEGREES};
use fedder_core::fields::{make_field, Field};
use fedder_core::mpoly::BinaryForm;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn field(p: u64, n: usize) -> Field {
    make_field(p, n).unwrap()
}

pub fn random_form<R: Rng>(k: &Field, degree: usize, rng: &mut R) -> BinaryForm {
    BinaryForm::new(k, (0..=degree).map(|_| k.random(rng)).collect())
}

/// Uniform over the free coefficients; `normalized` zeroes what completing
/// squares and cubes would remove in the field's characteristic.
pub fn random_equation<R: Rng>(k: &Field, normalized: bool, rng: &mut R) -> DP1Equation {
    let p = k.characteristic();
    let forms = [0, 1, 2, 3, 4].map(|i| {
        let removed = normalized && ((p != 2 && (i == 0 || i == 2)) || (p == 5 && i == 1));
        if removed {
            BinaryForm::zero(k, DEGREES[i])
        } else {
            random_form(k, DEGREES[i], rng)
        }
    });
    DP1Equation::new(k, forms).unwrap()
}

/// A random form in the span of `s^(p+1), s^p t, s t^p, t^(p+1)`.
pub fn random_span_form<R: Rng>(k: &Field, rng: &mut R) -> BinaryForm {
    let p = k.characteristic() as usize;
    let mut c = vec![k.zero(); p + 2];
    for i in [0, 1, p, p + 1] {
        c[i] = k.random(rng);
    }
    BinaryForm::new(k, c)
}
