//! Machine-readable certificates that a trace value is unattained.
//!
//! A certificate records the word, the exact field (modulus included, so
//! the result is portable), the target value, the full missing set found
//! by exhaustive evaluation, and the evaluation count. Serialized output
//! is byte-identical across runs and platforms for identical inputs.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{evaluate_image, FieldSpec, FqElement};
use crate::trace::trace_polynomial;
use crate::word::Word;

/// How the attained set was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "exhaustive-trace-evaluation")]
    ExhaustiveTraceEvaluation,
}

/// Proof record that `target` is (or is not) attained by
/// `tau(w)` over `F_q^3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// Word text in the library grammar.
    pub word: String,
    /// Power parameter when the word is `x1^2 [x1^-2, x2^-1]^k`; absent
    /// for arbitrary words.
    pub k: Option<u64>,
    pub field: FieldSpec,
    /// Little-endian coefficient vector of the probed trace value.
    pub target: FqElement,
    /// True iff `target` is not attained.
    pub missing: bool,
    /// Every unattained value, in enumeration order.
    pub full_missing_set: Vec<FqElement>,
    /// Exactly `q^3` for the exhaustive method.
    pub evaluations: u64,
    pub method: Method,
    /// Group-theoretic consequence, recorded only when `target = 0` is
    /// missing: trace-0 elements exist in `SL2(q)` for odd `q` and
    /// project to involutions of `PSL2(q)`, so the word map misses them.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub deduction: Option<String>,
}

/// Exhaustively evaluates `tau(w)` over `F_q^3` and certifies whether
/// `target` is attained.
pub fn certify_missing_trace(
    w: &Word,
    field: &FieldSpec,
    target: &FqElement,
    budget: u64,
) -> Result<Certificate> {
    let tau = trace_polynomial(w);
    let image = evaluate_image(&tau, field, budget)?;
    let target = field.element_from_coeffs(&target.coeffs)?;
    let missing = !image.contains(field.index_of(&target));
    let full_missing_set: Vec<FqElement> = image
        .missing_indices()
        .into_iter()
        .map(|i| field.element_from_index(i))
        .collect();
    let deduction = if missing && field.is_zero_el(&target) {
        Some(
            "trace 0 is unattained by word values on SL2(q); since q is odd, \
             SL2(q) contains trace-0 elements and they project to involutions \
             of PSL2(q), so the word map misses those involutions and is \
             non-surjective on PSL2(q)"
                .to_string(),
        )
    } else {
        None
    };
    Ok(Certificate {
        word: w.to_string(),
        k: None,
        field: field.clone(),
        target,
        missing,
        full_missing_set,
        evaluations: field.q().pow(3),
        method: Method::ExhaustiveTraceEvaluation,
        deduction,
    })
}

impl Certificate {
    /// Canonical pretty-printed JSON document.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, DEFAULT_BUDGET};
    use crate::word::{parse, theorem_word};

    #[test]
    fn theorem_word_certificate_at_q3() {
        let field = make_field(3, 1).unwrap();
        let w = theorem_word(2).unwrap();
        let cert =
            certify_missing_trace(&w, &field, &field.zero_element(), DEFAULT_BUDGET).unwrap();
        assert!(cert.missing);
        assert_eq!(cert.evaluations, 27);
        assert!(cert.deduction.is_some());
        assert!(cert
            .full_missing_set
            .contains(&field.zero_element()));
        // missing iff target in full_missing_set
        assert_eq!(
            cert.missing,
            cert.full_missing_set.contains(&cert.target)
        );
    }

    #[test]
    fn generator_attains_zero_at_q5() {
        let field = make_field(5, 1).unwrap();
        let w = parse("x1").unwrap();
        let cert =
            certify_missing_trace(&w, &field, &field.zero_element(), DEFAULT_BUDGET).unwrap();
        assert!(!cert.missing);
        assert!(cert.deduction.is_none());
        assert!(cert.full_missing_set.is_empty());
    }

    #[test]
    fn q27_certificate_counts_evaluations() {
        let field = make_field(3, 3).unwrap();
        let w = theorem_word(2).unwrap();
        let cert =
            certify_missing_trace(&w, &field, &field.zero_element(), DEFAULT_BUDGET).unwrap();
        assert!(cert.missing);
        assert_eq!(cert.evaluations, 19683);
    }

    #[test]
    fn serialization_round_trips_and_repeats_exactly() {
        let field = make_field(3, 1).unwrap();
        let w = theorem_word(2).unwrap();
        let a = certify_missing_trace(&w, &field, &field.zero_element(), DEFAULT_BUDGET)
            .unwrap()
            .to_json();
        let b = certify_missing_trace(&w, &field, &field.zero_element(), DEFAULT_BUDGET)
            .unwrap()
            .to_json();
        assert_eq!(a, b);
        let parsed: Certificate = serde_json::from_str(&a).unwrap();
        assert!(parsed.missing);
        assert_eq!(parsed.word, "x1^4*x2*x1^-2*x2^-1*x1^2*x2*x1^-2*x2^-1");
    }
}
