//! Trace polynomials of words in the rank-2 free group.
//!
//! For any word `w` there is a unique polynomial `tau(w)` in `Z[s,t,u]`
//! with `trace(w(x,y)) = tau(w)(trace x, trace y, trace xy)` for all
//! determinant-1 pairs `x, y` over any commutative ring. The engine
//! computes it by a confluent rewriting strategy built on three facts:
//! traces are invariant under cyclic rotation and inversion,
//! `Tr(A^2 B) = Tr(A) Tr(AB) - Tr(B)`, and the product rule
//! `Tr(UV) + Tr(UV^-1) = Tr(U) Tr(V)`.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::poly::{MPoly, Var};
use crate::ring::IntegerRing;
use crate::word::{Gen, TraceKey, Word};

/// Sparse integer polynomial in the trace coordinates `s = tr x`,
/// `t = tr y`, `u = tr xy`.
pub type TracePolynomial = MPoly<IntegerRing>;

/// One reduction move. `Split` means `tau(w) = tau(a) * tau(b) - tau(c)`.
#[derive(Debug, Clone)]
pub(crate) enum Step {
    Two,
    Base(Var),
    Split { a: Word, b: Word, c: Word },
}

/// Decomposes one reduction move for `w`, after cyclic reduction.
///
/// Case order: base words; a run with |exponent| >= 2 (rotated to the
/// front, then `Tr(A^2 B)`); a run with exponent -1 (product rule against
/// the sign-flipped word); else the word is `(gh)^j` with all exponents 1
/// and the product rule peels one period. Each move strictly decreases
/// (reduced length, negative-letter count) lexicographically, which the
/// tests check by instrumentation.
pub(crate) fn reduction_step(w: &Word) -> Step {
    let w = w.cyclically_reduce();
    let runs = w.letters();

    match runs {
        [] => return Step::Two,
        [only] if only.exp.unsigned_abs() == 1 => {
            return Step::Base(match only.gen {
                Gen::X1 => Var::S,
                Gen::X2 => Var::T,
            });
        }
        [a, b] if a.exp == 1 && b.exp == 1 => return Step::Base(Var::U),
        _ => {}
    }

    // a run with |exponent| >= 2: tau(g^e R) = tau(g) tau(g^(e-1) R) - tau(g^(e-2) R),
    // stepping e toward zero
    if let Some(i) = runs.iter().position(|l| l.exp.unsigned_abs() >= 2) {
        let rot = w.rotate_runs(i);
        let first = rot.letters()[0];
        let rest = rot.letters()[1..].to_vec();
        let step = first.exp.signum();
        let shorter = |delta: i64| {
            Word::from_letters(
                std::iter::once((first.gen, first.exp - delta * step))
                    .chain(rest.iter().map(|l| (l.gen, l.exp))),
            )
        };
        return Step::Split {
            a: Word::generator(first.gen),
            b: shorter(1),
            c: shorter(2),
        };
    }

    // all exponents are +-1; eliminate a -1: tau(g^-1 C) = tau(g) tau(C) - tau(g C)
    if let Some(i) = runs.iter().position(|l| l.exp == -1) {
        let rot = w.rotate_runs(i);
        let first = rot.letters()[0];
        let rest = rot.letters()[1..].to_vec();
        return Step::Split {
            a: Word::generator(first.gen),
            b: Word::from_letters(rest.iter().map(|l| (l.gen, l.exp))),
            c: Word::from_letters(
                std::iter::once((first.gen, 1)).chain(rest.iter().map(|l| (l.gen, l.exp))),
            ),
        };
    }

    // all exponents +1 and cyclically reduced, so the word is (gh)^j, j >= 2:
    // tau((gh)^j) = tau(gh) tau((gh)^(j-1)) - tau((gh)^(j-2))
    debug_assert!(runs.len() >= 4 && runs.len() % 2 == 0);
    let pair = Word::from_letters(runs[..2].iter().map(|l| (l.gen, l.exp)));
    Step::Split {
        a: pair,
        b: Word::from_letters(runs[2..].iter().map(|l| (l.gen, l.exp))),
        c: Word::from_letters(runs[4..].iter().map(|l| (l.gen, l.exp))),
    }
}

thread_local! {
    static MEMO: RefCell<HashMap<TraceKey, TracePolynomial>> = RefCell::new(HashMap::new());
}

/// The trace polynomial `tau(w)`.
///
/// Pure and deterministic; memoized per thread on the word's
/// rotation/inversion class, which is sound because traces are invariant
/// under both.
pub fn trace_polynomial(w: &Word) -> TracePolynomial {
    let key = w.canonical_trace_key();
    if let Some(hit) = MEMO.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let result = match reduction_step(w) {
        Step::Two => MPoly::constant_i64(2),
        Step::Base(v) => MPoly::var(v),
        Step::Split { a, b, c } => trace_polynomial(&a)
            .mul(&trace_polynomial(&b))
            .sub(&trace_polynomial(&c)),
    };
    MEMO.with(|m| m.borrow_mut().insert(key, result.clone()));
    result
}

/// `tau(x1^i)` as a univariate polynomial in `s`, by the recurrence
/// `D_0 = 2`, `D_1 = s`, `D_(i+1) = s D_i - D_(i-1)`.
pub fn dickson(i: u64) -> TracePolynomial {
    let s = MPoly::var(Var::S);
    let mut prev = MPoly::constant_i64(2);
    if i == 0 {
        return prev;
    }
    let mut curr = s.clone();
    for _ in 1..i {
        let next = s.mul(&curr).sub(&prev);
        prev = curr;
        curr = next;
    }
    curr
}

/// Trace substitution: evaluates `tau_v` at `s := a, t := b, u := c`.
///
/// With `a = tau(v1)`, `b = tau(v2)`, `c = tau(v1 v2)` this computes the
/// trace polynomial of the substituted word `v(v1, v2)`.
pub fn substitute_traces(
    tau_v: &TracePolynomial,
    a: &TracePolynomial,
    b: &TracePolynomial,
    c: &TracePolynomial,
) -> TracePolynomial {
    tau_v.substitute(a, b, c)
}

/// `tau(w^i)` computed through the substitution calculus rather than by
/// expanding the power word.
pub fn trace_of_power(tau_w: &TracePolynomial, i: u64) -> TracePolynomial {
    substitute_traces(&dickson(i), tau_w, &MPoly::constant_i64(2), tau_w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::word::{base_commutator, parse, theorem_word};
    use num_bigint::BigInt;

    fn tau(text: &str) -> TracePolynomial {
        trace_polynomial(&parse(text).unwrap())
    }

    /// The commutator quartic, frozen term by term.
    pub(crate) fn commutator_quartic() -> TracePolynomial {
        MPoly::from_terms(
            IntegerRing,
            [
                (Monomial::new(4, 0, 0), BigInt::from(1)),
                (Monomial::new(3, 1, 1), BigInt::from(-1)),
                (Monomial::new(2, 2, 0), BigInt::from(1)),
                (Monomial::new(2, 0, 2), BigInt::from(1)),
                (Monomial::new(2, 0, 0), BigInt::from(-4)),
                (Monomial::ONE, BigInt::from(2)),
            ],
        )
    }

    // --- independent matrix oracle over Z ---------------------------------

    type Mat = [[BigInt; 2]; 2];

    fn mat_identity() -> Mat {
        [
            [BigInt::from(1), BigInt::from(0)],
            [BigInt::from(0), BigInt::from(1)],
        ]
    }

    fn mat_mul(x: &Mat, y: &Mat) -> Mat {
        let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    fn mat_inv(x: &Mat) -> Mat {
        // determinant 1
        [
            [x[1][1].clone(), -&x[0][1]],
            [-&x[1][0], x[0][0].clone()],
        ]
    }

    fn mat_trace(x: &Mat) -> BigInt {
        &x[0][0] + &x[1][1]
    }

    fn word_value_z(w: &Word, x: &Mat, y: &Mat) -> Mat {
        let mut acc = mat_identity();
        for l in w.letters() {
            let base = match l.gen {
                Gen::X1 => x.clone(),
                Gen::X2 => y.clone(),
            };
            let base = if l.exp < 0 { mat_inv(&base) } else { base };
            for _ in 0..l.exp.unsigned_abs() {
                acc = mat_mul(&acc, &base);
            }
        }
        acc
    }

    /// Deterministic pseudo-random SL2(Z) matrices: products of elementary
    /// shears with small offsets.
    fn random_sl2z(seed: &mut u64) -> Mat {
        let mut next = || {
            *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((*seed >> 33) % 7) as i64 - 3
        };
        let mut m = mat_identity();
        for i in 0..4 {
            let k = BigInt::from(next());
            let shear = if i % 2 == 0 {
                [[BigInt::from(1), k], [BigInt::from(0), BigInt::from(1)]]
            } else {
                [[BigInt::from(1), BigInt::from(0)], [k, BigInt::from(1)]]
            };
            m = mat_mul(&m, &shear);
        }
        m
    }

    fn random_word(seed: &mut u64, max_len: usize) -> Word {
        let mut next = || {
            *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (*seed >> 33) as usize
        };
        let len = next() % (max_len + 1);
        Word::from_letters((0..len).map(|_| match next() % 4 {
            0 => (Gen::X1, 1),
            1 => (Gen::X1, -1),
            2 => (Gen::X2, 1),
            _ => (Gen::X2, -1),
        }))
    }

    fn assert_matrix_oracle(w: &Word, trials: usize, seed: &mut u64) {
        let p = trace_polynomial(w);
        for _ in 0..trials {
            let x = random_sl2z(seed);
            let y = random_sl2z(seed);
            let expected = mat_trace(&word_value_z(w, &x, &y));
            let got = p.evaluate_bigint(
                &mat_trace(&x),
                &mat_trace(&y),
                &mat_trace(&mat_mul(&x, &y)),
            );
            assert_eq!(got, expected, "oracle mismatch for {w}");
        }
    }

    // --- examples ----------------------------------------------------------

    #[test]
    fn base_traces() {
        assert_eq!(tau("x1").to_string(), "s");
        assert_eq!(tau("x2").to_string(), "t");
        assert_eq!(tau("x1 x2").to_string(), "u");
        assert_eq!(tau("x1 x1^-1").to_string(), "2");
        assert_eq!(tau("x1^-1").to_string(), "s");
    }

    #[test]
    fn square_of_generator() {
        assert_eq!(tau("x1^2").to_string(), "s^2 - 2");
    }

    #[test]
    fn commutator_trace_is_the_quartic() {
        assert_eq!(tau("[x1^-2, x2^-1]"), commutator_quartic());
        assert_eq!(
            tau("[x1^-2, x2^-1]").to_string(),
            "s^4 - s^3*t*u + s^2*t^2 + s^2*u^2 - 4*s^2 + 2"
        );
    }

    #[test]
    fn mixed_sign_product() {
        // from the product rule; cross-checked against the matrix oracle below
        assert_eq!(tau("x1 x2^-1").to_string(), "s*t - u");
        let mut seed = 0xfeed;
        assert_matrix_oracle(&parse("x1 x2^-1").unwrap(), 50, &mut seed);
    }

    #[test]
    fn dickson_values_and_recurrence() {
        assert_eq!(dickson(0).to_string(), "2");
        assert_eq!(dickson(1).to_string(), "s");
        assert_eq!(dickson(2).to_string(), "s^2 - 2");
        assert_eq!(dickson(3).to_string(), "s^3 - 3*s");
        for i in 0..=10u64 {
            let via_word = trace_polynomial(&Word::generator(Gen::X1).power(i as i64));
            assert_eq!(dickson(i), via_word, "dickson({i})");
        }
    }

    #[test]
    fn substitution_examples() {
        let s = MPoly::var(Var::S);
        let a = tau("x1 x2");
        let b = tau("x2^2");
        let c = tau("x1");
        assert_eq!(substitute_traces(&s, &a, &b, &c), a);

        // tau(w^i) through the calculus vs expanding the power word
        let mut seed = 0xabc1u64;
        for _ in 0..8 {
            let w = random_word(&mut seed, 6);
            let tw = trace_polynomial(&w);
            for i in 0..=5 {
                assert_eq!(
                    trace_of_power(&tw, i),
                    trace_polynomial(&w.power(i as i64)),
                    "power {i} of {w}"
                );
            }
        }

        // tau(c^2) = tau(c)^2 - 2
        let c = base_commutator();
        let tc = trace_polynomial(&c);
        let expect = tc.mul(&tc).sub(&MPoly::constant_i64(2));
        assert_eq!(trace_of_power(&tc, 2), expect);
        assert_eq!(trace_polynomial(&c.power(2)), expect);
    }

    #[test]
    fn evaluation_examples() {
        let p = tau("x1^2");
        assert_eq!(
            p.evaluate_bigint(&2.into(), &0.into(), &0.into()),
            BigInt::from(2)
        );
        let c = tau("[x1^-2, x2^-1]");
        assert_eq!(
            c.evaluate_bigint(&0.into(), &0.into(), &0.into()),
            BigInt::from(2)
        );
        let s = MPoly::var(Var::S);
        assert_eq!(
            s.evaluate_bigint(&7.into(), &1.into(), &9.into()),
            BigInt::from(7)
        );
    }

    // --- invariants ---------------------------------------------------------

    #[test]
    fn rotation_and_inversion_invariance() {
        let mut seed = 0x51u64;
        for _ in 0..40 {
            let a = random_word(&mut seed, 10);
            let b = random_word(&mut seed, 10);
            let uv = a.multiply(&b);
            let vu = b.multiply(&a);
            assert_eq!(trace_polynomial(&uv), trace_polynomial(&vu));
            assert_eq!(trace_polynomial(&a), trace_polynomial(&a.invert()));
        }
    }

    #[test]
    fn product_rule() {
        let mut seed = 0x77u64;
        for _ in 0..30 {
            let u = random_word(&mut seed, 6);
            let v = random_word(&mut seed, 6);
            let lhs = trace_polynomial(&u.multiply(&v))
                .add(&trace_polynomial(&u.multiply(&v.invert())));
            let rhs = trace_polynomial(&u).mul(&trace_polynomial(&v));
            assert_eq!(lhs, rhs, "product rule for {u}, {v}");
        }
    }

    #[test]
    fn degree_bounded_by_length() {
        let mut seed = 0x99u64;
        for _ in 0..40 {
            let w = random_word(&mut seed, 20);
            let p = trace_polynomial(&w);
            assert!(
                u64::from(p.total_degree()) <= w.reduced_len().max(1),
                "degree blow-up for {w}"
            );
        }
        for k in 1..=3 {
            let w = theorem_word(k).unwrap();
            assert!(u64::from(trace_polynomial(&w).total_degree()) <= w.reduced_len());
        }
    }

    #[test]
    fn matrix_oracle_on_panel_and_random_words() {
        let mut seed = 0x2026u64;
        for text in ["x1", "x1^2", "x1 x2", "[x1^-2, x2^-1]"] {
            assert_matrix_oracle(&parse(text).unwrap(), 30, &mut seed);
        }
        for k in 1..=3 {
            assert_matrix_oracle(&theorem_word(k).unwrap(), 20, &mut seed);
        }
        for _ in 0..15 {
            let w = random_word(&mut seed, 15);
            assert_matrix_oracle(&w, 10, &mut seed);
        }
    }

    /// Walks the reduction tree explicitly and checks that every move
    /// strictly decreases (reduced length, negative-letter count), and that
    /// recombining the moves reproduces `trace_polynomial`.
    #[test]
    fn reduction_measure_decreases() {
        fn measure(w: &Word) -> (u64, u64) {
            let w = w.cyclically_reduce();
            let neg: u64 = w
                .letters()
                .iter()
                .filter(|l| l.exp < 0)
                .map(|l| l.exp.unsigned_abs())
                .sum();
            (w.reduced_len(), neg)
        }

        fn walk(w: &Word, depth: usize) -> TracePolynomial {
            assert!(depth < 10_000, "reduction did not terminate for {w}");
            match reduction_step(w) {
                Step::Two => MPoly::constant_i64(2),
                Step::Base(v) => MPoly::var(v),
                Step::Split { a, b, c } => {
                    let m = measure(w);
                    for part in [&a, &b, &c] {
                        assert!(
                            measure(part) < m,
                            "measure not decreasing: {w} -> {part}"
                        );
                    }
                    walk(&a, depth + 1)
                        .mul(&walk(&b, depth + 1))
                        .sub(&walk(&c, depth + 1))
                }
            }
        }

        let mut seed = 0x15241u64;
        for _ in 0..25 {
            let w = random_word(&mut seed, 12);
            assert_eq!(walk(&w, 0), trace_polynomial(&w), "recombination for {w}");
        }
        let w = theorem_word(2).unwrap();
        assert_eq!(walk(&w, 0), trace_polynomial(&w));
    }
}
