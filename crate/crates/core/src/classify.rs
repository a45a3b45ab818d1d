//! The three-way check per characteristic: Fedder's verdict, the closed-form
//! normal-form predicate, and the discriminant / j-invariant pattern.

use serde::Serialize;

use crate::dp1::{
    complete_square_cube, discriminant, fiber_at, is_supersingular, j_invariant, smoothness, DP1Equation, DP1Record,
    DiscriminantPath, SmoothnessReport, DEFAULT_SEARCH_BOUND,
};
use crate::fedder::{is_fsplit_hypersurface, FedderVerdict};
use crate::fields::{Embedding, FieldDesc, MAX_DEGREE};
use crate::mpoly::BinaryForm;
use crate::pgl2::{delta_class, DeltaClass, DeltaContext, DeltaLabel};
use crate::unifactor::{roots, splitting_degree, PointP1};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("characteristic {0} is not covered by the classification (only 2, 3 and 5)")]
    UnsupportedCharacteristic(u32),
}

/// Largest order of an element of `PGL_2(F_p)` for `p <= 5`; a discriminant
/// equivalent to a reference divisor splits within this degree over its base.
const REFERENCE_SPLITTING_BOUND: usize = 6;
/// Fibers over rational base points are point-counted only below this order.
const SPOT_CHECK_LIMIT: u128 = 1 << 12;
const SPOT_CHECK_FIBERS: usize = 4;

/// The closed-form condition for not being F-split, on the normalized equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaPredicate {
    pub holds: bool,
    pub description: &'static str,
}

/// Evaluates the normal-form predicate: `a4 = 0` and `a6` in the span of
/// `s^6, s^5 t, s t^5, t^6` (p = 5); `a2 = 0` and `a4` in the span of
/// `s^4, s^3 t, s t^3, t^4` (p = 3); `a1 = 0` (p = 2).
pub fn lemma_predicate(eq: &DP1Equation) -> Result<LemmaPredicate, ClassifyError> {
    let p = eq.field().characteristic();
    let norm = complete_square_cube(eq);
    Ok(match p {
        5 => LemmaPredicate {
            holds: norm.a4().is_zero() && (2..=4).all(|k| norm.a6().coeff(k).is_zero()),
            description: "a4 = 0 and a6 in span(s^6, s^5*t, s*t^5, t^6)",
        },
        3 => LemmaPredicate {
            holds: norm.a2().is_zero() && norm.a4().coeff(2).is_zero(),
            description: "a2 = 0 and a4 in span(s^4, s^3*t, s*t^3, t^4)",
        },
        2 => LemmaPredicate { holds: norm.a1().is_zero(), description: "a1 = 0" },
        _ => return Err(ClassifyError::UnsupportedCharacteristic(p)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionC {
    pub j_zero: bool,
    pub context: DeltaContext,
    /// `None` when the class could not be decided (see `note`).
    pub delta_class: Option<DeltaClass>,
    pub note: Option<String>,
}

/// Point-count check of one smooth fiber over a rational base point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberCheck {
    pub point: String,
    pub supersingular: bool,
    pub j_zero: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub p: u32,
    pub field: FieldDesc,
    pub equation: String,
    pub normalized: DP1Record,
    pub fedder: FedderSummary,
    pub lemma_predicate: LemmaPredicate,
    pub discriminant: String,
    pub condition_c: ConditionC,
    pub smoothness: SmoothnessReport,
    pub fiber_checks: Vec<FiberCheck>,
    /// Whether the non-F-split instances coincide with the condition-(c)
    /// pattern; only evaluated with evidence of smoothness.
    pub theorem_pattern: Option<bool>,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FedderSummary {
    pub f_split: bool,
    pub witness: Option<String>,
}

impl FedderSummary {
    fn new(v: &FedderVerdict, eq: &DP1Equation) -> FedderSummary {
        FedderSummary { f_split: v.f_split, witness: v.witness_string(eq.field(), &crate::mpoly::Alphabet::dp1()) }
    }
}

impl ClassificationReport {
    /// The condition-(c) pattern for non-F-split surfaces holds.
    pub fn pattern_holds(&self) -> bool {
        pattern(self.p, &self.condition_c)
    }
}

fn pattern(p: u32, c: &ConditionC) -> bool {
    let label = c.delta_class.as_ref().map(|d| d.label);
    match p {
        5 => c.j_zero && label == Some(DeltaLabel::TWO_P1_F5),
        3 => {
            c.j_zero
                && matches!(label, Some(DeltaLabel::TWELVE_O | DeltaLabel::NINE_THREE | DeltaLabel::THREE_P1_F3))
        }
        _ => c.j_zero,
    }
}

pub fn classify(eq: &DP1Equation) -> Result<ClassificationReport, ClassifyError> {
    classify_with_bound(eq, DEFAULT_SEARCH_BOUND)
}

pub fn classify_with_bound(eq: &DP1Equation, search_bound: usize) -> Result<ClassificationReport, ClassifyError> {
    let p = eq.field().characteristic();
    let predicate = lemma_predicate(eq)?;
    let verdict = is_fsplit_hypersurface(&eq.to_poly()).expect("the sextic is nonzero");
    let norm = complete_square_cube(eq);
    let j = j_invariant(&norm).expect("normalized in a supported characteristic");
    let delta = discriminant(&norm, DiscriminantPath::Paper).expect("normalized in a supported characteristic");
    let condition_c = condition_c(&norm, &delta, j.j_is_zero());
    let smooth = smoothness(eq, search_bound);
    let fiber_checks = spot_check_fibers(eq);

    let theorem_pattern = smooth.smooth_evidence().then(|| !verdict.f_split == pattern(p, &condition_c));
    let consistent = (!verdict.f_split == predicate.holds)
        && theorem_pattern != Some(false)
        && fiber_checks.iter().all(|c| c.supersingular == c.j_zero && (!j.j_is_zero() || c.supersingular));
    Ok(ClassificationReport {
        p,
        field: eq.field().desc().clone(),
        equation: eq.to_string(),
        normalized: norm.to_record(),
        fedder: FedderSummary::new(&verdict, eq),
        lemma_predicate: predicate,
        discriminant: delta.to_string(),
        condition_c,
        smoothness: smooth,
        fiber_checks,
        theorem_pattern,
        consistent,
    })
}

fn condition_c(norm: &DP1Equation, delta: &BinaryForm, j_zero: bool) -> ConditionC {
    let p = norm.field().characteristic();
    if p == 2 {
        let (delta_class, note) = if norm.a1().is_zero() && !norm.a3().is_zero() {
            let d = roots(norm.a3()).expect("cubics split within degree 3");
            (Some(delta_class(&d, 2, DeltaContext::Branch).expect("degree 3")), None)
        } else {
            let why = if norm.a1().is_zero() { "a1 = a3 = 0: no branch cubic" } else { "a1 != 0: not a double cover" };
            (Some(DeltaClass { label: DeltaLabel::OTHER, witness: None }), Some(why.to_string()))
        };
        return ConditionC { j_zero, context: DeltaContext::Branch, delta_class, note };
    }
    let context = DeltaContext::Anticanonical;
    if delta.is_zero() {
        return ConditionC { j_zero, context, delta_class: None, note: Some("discriminant vanishes identically".into()) };
    }
    let base = norm.field().degree();
    let split = splitting_degree(delta).expect("nonzero");
    if split > MAX_DEGREE {
        // equivalence to a reference divisor would force a small splitting field
        let (delta_class, note) = if split / base > REFERENCE_SPLITTING_BOUND {
            (Some(DeltaClass { label: DeltaLabel::OTHER, witness: None }), "splitting field too large for any reference class")
        } else {
            (None, "splitting field exceeds the supported degree")
        };
        return ConditionC { j_zero, context, delta_class, note: Some(note.into()) };
    }
    let d = roots(delta).expect("within the degree cap");
    ConditionC { j_zero, context, delta_class: Some(delta_class(&d, p, context).expect("degree 12")), note: None }
}

fn spot_check_fibers(eq: &DP1Equation) -> Vec<FiberCheck> {
    let k = eq.field();
    if k.order() > SPOT_CHECK_LIMIT {
        return Vec::new();
    }
    let id = Embedding::new(k, k).unwrap();
    let points = k.elements().map(PointP1::Finite).chain([PointP1::Infinity]);
    let mut out = Vec::new();
    for pt in points {
        let fb = fiber_at(eq, &id, pt);
        if let Ok(ss) = is_supersingular(&fb) {
            let point = match pt {
                PointP1::Finite(a) => format!("[{}:1]", k.format_elem(a)),
                PointP1::Infinity => "[1:0]".to_string(),
            };
            out.push(FiberCheck { point, supersingular: ss, j_zero: fb.j_is_zero() });
            if out.len() == SPOT_CHECK_FIBERS {
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;

    #[test]
    fn char5_remark_surface() {
        let f5 = make_field(5, 1).unwrap();
        let eq = DP1Equation::parse("y^2 - (x^3 + s^6 + t^6)", &f5).unwrap();
        let r = classify(&eq).unwrap();
        assert!(!r.fedder.f_split);
        assert!(r.lemma_predicate.holds);
        assert!(r.condition_c.j_zero);
        assert_eq!(r.condition_c.delta_class.as_ref().unwrap().label, DeltaLabel::TWO_P1_F5);
        assert_eq!(r.theorem_pattern, Some(true));
        assert!(r.consistent);
    }

    #[test]
    fn char3_a2_nonzero_is_split() {
        let f3 = make_field(3, 1).unwrap();
        let eq = DP1Equation::parse("y^2 - (x^3 + s^2*x^2 + (s^3*t + t^4)*x + s^5*t + t^6)", &f3).unwrap();
        let r = classify(&eq).unwrap();
        assert!(r.fedder.f_split);
        assert!(!r.lemma_predicate.holds);
        assert!(!r.condition_c.j_zero);
        assert!(r.consistent);
    }

    #[test]
    fn char2_branch_classes() {
        let f2 = make_field(2, 1).unwrap();
        for (text, label) in [
            ("y^2 + (s^2*t + s*t^2)*y - x^3", DeltaLabel::BRANCH_DISTINCT),
            ("y^2 + t^3*y - x^3", DeltaLabel::BRANCH_TRIPLE),
        ] {
            let eq = DP1Equation::parse(text, &f2).unwrap();
            let r = classify(&eq).unwrap();
            assert!(!r.fedder.f_split, "{text}");
            assert!(r.lemma_predicate.holds);
            assert_eq!(r.condition_c.delta_class.as_ref().unwrap().label, label);
            assert!(r.consistent);
        }
    }

    #[test]
    fn unsupported_characteristic() {
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(classify(&DP1Equation::zero(&f7)).unwrap_err(), ClassifyError::UnsupportedCharacteristic(7));
    }

    #[test]
    fn report_serializes() {
        let f5 = make_field(5, 1).unwrap();
        let eq = DP1Equation::parse("y^2 - (x^3 + s^5*t - s*t^5)", &f5).unwrap();
        let v = serde_json::to_value(classify(&eq).unwrap()).unwrap();
        assert_eq!(v["fedder"]["f_split"], false);
        assert_eq!(v["smoothness"]["verdict"], "smooth");
        assert_eq!(v["condition_c"]["delta_class"]["label"], "TWO_P1_F5");
    }
}
