//! Independent brute-force ground truth: enumerate `SL2(q)`, evaluate
//! word maps on actual matrices, realize trace triples, and cross-check
//! the symbolic pipeline.
//!
//! Everything here deliberately avoids the trace-polynomial engine except
//! where a comparison is the point, so agreement between the two routes
//! is evidence, not circularity.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{evaluate_image, AttainedSet, FieldSpec, FieldTable, FqElement};
use crate::trace::trace_polynomial;
use crate::word::{Gen, Word};

/// A 2x2 matrix over `F_q` with determinant 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: FqElement,
    pub b: FqElement,
    pub c: FqElement,
    pub d: FqElement,
}

impl Mat2 {
    pub fn identity(field: &FieldSpec) -> Mat2 {
        Mat2 {
            a: field.one_element(),
            b: field.zero_element(),
            c: field.zero_element(),
            d: field.one_element(),
        }
    }

    pub fn trace(&self, field: &FieldSpec) -> FqElement {
        field.add_el(&self.a, &self.d)
    }

    pub fn det(&self, field: &FieldSpec) -> FqElement {
        field.sub_el(
            &field.mul_el(&self.a, &self.d),
            &field.mul_el(&self.b, &self.c),
        )
    }

    pub fn mul(&self, other: &Mat2, field: &FieldSpec) -> Mat2 {
        let e = |x: &FqElement, y: &FqElement, z: &FqElement, w: &FqElement| {
            field.add_el(&field.mul_el(x, y), &field.mul_el(z, w))
        };
        Mat2 {
            a: e(&self.a, &other.a, &self.b, &other.c),
            b: e(&self.a, &other.b, &self.b, &other.d),
            c: e(&self.c, &other.a, &self.d, &other.c),
            d: e(&self.c, &other.b, &self.d, &other.d),
        }
    }

    /// Inverse of a determinant-1 matrix.
    pub fn inv(&self, field: &FieldSpec) -> Mat2 {
        Mat2 {
            a: self.d.clone(),
            b: field.neg_el(&self.b),
            c: field.neg_el(&self.c),
            d: self.a.clone(),
        }
    }

    pub fn pow(&self, e: u64, field: &FieldSpec) -> Mat2 {
        let mut result = Mat2::identity(field);
        let mut square = self.clone();
        let mut rem = e;
        while rem > 0 {
            if rem & 1 == 1 {
                result = result.mul(&square, field);
            }
            rem >>= 1;
            if rem > 0 {
                square = square.mul(&square, field);
            }
        }
        result
    }
}

/// Yields every determinant-1 matrix exactly once, in a fixed order;
/// the count is `q(q^2 - 1)`.
pub fn enumerate_sl2<'a>(
    field: &'a FieldSpec,
    limit: u64,
) -> Result<impl Iterator<Item = Mat2> + 'a> {
    let count = sl2_order(field.q());
    if count > limit as u128 {
        return Err(Error::BudgetExceeded {
            required: count,
            budget: limit,
        });
    }
    Ok(enumerate_index_mats(field)
        .into_iter()
        .map(move |m| idx_to_mat(&m, field)))
}

/// `|SL2(q)| = q(q^2 - 1)`.
pub fn sl2_order(q: u64) -> u128 {
    q as u128 * (q as u128 * q as u128 - 1)
}

/// Evaluates the word at a matrix pair, square-and-multiply per letter.
pub fn word_value(w: &Word, x: &Mat2, y: &Mat2, field: &FieldSpec) -> Mat2 {
    let mut acc = Mat2::identity(field);
    for l in w.letters() {
        let base = match l.gen {
            Gen::X1 => x,
            Gen::X2 => y,
        };
        let base = if l.exp < 0 {
            base.inv(field)
        } else {
            base.clone()
        };
        acc = acc.mul(&base.pow(l.exp.unsigned_abs(), field), field);
    }
    acc
}

// --- index-based internals for the exhaustive pair loops -----------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct IdxMat {
    a: u32,
    b: u32,
    c: u32,
    d: u32,
}

fn idx_mul(t: &FieldTable, x: &IdxMat, y: &IdxMat) -> IdxMat {
    IdxMat {
        a: t.add(t.mul(x.a, y.a), t.mul(x.b, y.c)),
        b: t.add(t.mul(x.a, y.b), t.mul(x.b, y.d)),
        c: t.add(t.mul(x.c, y.a), t.mul(x.d, y.c)),
        d: t.add(t.mul(x.c, y.b), t.mul(x.d, y.d)),
    }
}

fn idx_inv(t: &FieldTable, x: &IdxMat) -> IdxMat {
    IdxMat {
        a: x.d,
        b: t.neg(x.b),
        c: t.neg(x.c),
        d: x.a,
    }
}

fn idx_identity() -> IdxMat {
    IdxMat { a: 1, b: 0, c: 0, d: 1 }
}

fn idx_pow(t: &FieldTable, x: &IdxMat, e: u64) -> IdxMat {
    let mut result = idx_identity();
    let mut square = *x;
    let mut rem = e;
    while rem > 0 {
        if rem & 1 == 1 {
            result = idx_mul(t, &result, &square);
        }
        rem >>= 1;
        if rem > 0 {
            square = idx_mul(t, &square, &square);
        }
    }
    result
}

fn idx_to_mat(m: &IdxMat, field: &FieldSpec) -> Mat2 {
    Mat2 {
        a: field.element_from_index(m.a as u64),
        b: field.element_from_index(m.b as u64),
        c: field.element_from_index(m.c as u64),
        d: field.element_from_index(m.d as u64),
    }
}

/// All of `SL2(q)` as index matrices: for `b = 0` solve `d = a^-1` with
/// `c` free, otherwise solve `c = (ad - 1) / b`.
fn enumerate_index_mats(field: &FieldSpec) -> Vec<IdxMat> {
    let q = field.q();
    let table = FieldTable::build(field);
    let inv: Vec<u32> = (0..q)
        .map(|i| {
            if i == 0 {
                0
            } else {
                field.index_of(&field.inv_el(&field.element_from_index(i)).unwrap()) as u32
            }
        })
        .collect();
    let mut out = Vec::with_capacity(sl2_order(q) as usize);
    for a in 0..q as u32 {
        for b in 0..q as u32 {
            if b == 0 {
                if a == 0 {
                    continue;
                }
                let d = inv[a as usize];
                for c in 0..q as u32 {
                    out.push(IdxMat { a, b: 0, c, d });
                }
            } else {
                let binv = inv[b as usize];
                for d in 0..q as u32 {
                    let ad_minus_1 = table.add(table.mul(a, d), table.neg(1));
                    let c = table.mul(ad_minus_1, binv);
                    out.push(IdxMat { a, b, c, d });
                }
            }
        }
    }
    out
}

/// The word's letters with per-element powers precomputed for every group
/// element, so the pair loop is pure table lookups.
struct CompiledWord {
    /// (generator selector, index into the powers row)
    letters: Vec<(Gen, usize)>,
    /// `powers[g][j]` = group element `g` raised to the j-th letter's exponent
    powers: Vec<Vec<IdxMat>>,
}

fn compile_word(w: &Word, mats: &[IdxMat], table: &FieldTable) -> CompiledWord {
    let letters: Vec<(Gen, usize)> = w
        .letters()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.gen, i))
        .collect();
    let exps: Vec<i64> = w.letters().iter().map(|l| l.exp).collect();
    let powers: Vec<Vec<IdxMat>> = mats
        .par_iter()
        .map(|m| {
            exps.iter()
                .map(|&e| {
                    let base = if e < 0 { idx_inv(table, m) } else { *m };
                    idx_pow(table, &base, e.unsigned_abs())
                })
                .collect()
        })
        .collect();
    CompiledWord { letters, powers }
}

fn compiled_value(
    cw: &CompiledWord,
    table: &FieldTable,
    xi: usize,
    yi: usize,
) -> IdxMat {
    let mut acc = idx_identity();
    for &(gen, j) in &cw.letters {
        let part = match gen {
            Gen::X1 => &cw.powers[xi][j],
            Gen::X2 => &cw.powers[yi][j],
        };
        acc = idx_mul(table, &acc, part);
    }
    acc
}

fn check_pair_budget(q: u64, budget: u64) -> Result<()> {
    let pairs = sl2_order(q) * sl2_order(q);
    if pairs > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: pairs,
            budget,
        });
    }
    Ok(())
}

/// The exact set of traces of `w(x, y)` over all ordered pairs of
/// `SL2(q)`, by direct matrix evaluation. Ground truth for
/// [`evaluate_image`](crate::field::evaluate_image).
pub fn brute_trace_image(w: &Word, field: &FieldSpec, budget: u64) -> Result<AttainedSet> {
    check_pair_budget(field.q(), budget)?;
    let table = FieldTable::build(field);
    let mats = enumerate_index_mats(field);
    let cw = compile_word(w, &mats, &table);
    let image = (0..mats.len())
        .into_par_iter()
        .fold(
            || AttainedSet::new(field.q()),
            |mut set, xi| {
                for yi in 0..mats.len() {
                    let v = compiled_value(&cw, &table, xi, yi);
                    set.insert(table.add(v.a, v.d) as u64);
                }
                set
            },
        )
        .reduce(
            || AttainedSet::new(field.q()),
            |mut a, b| {
                a.union_with(&b);
                a
            },
        );
    Ok(image)
}

/// Outcome of the exhaustive `PSL2(q)` image computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Psl2ImageReport {
    pub word: String,
    pub q: u64,
    /// `q(q^2 - 1) / 2` for odd `q`.
    pub group_order: u64,
    pub image_size: u64,
    pub surjective: bool,
    /// Canonical representatives (lex-smaller of `M`, `-M`) of every
    /// missed element, in enumeration order.
    pub missed: Vec<Mat2>,
}

/// Computes the image of the word map on `PSL2(q)` by exhausting all
/// matrix pairs; reports the missed elements when the map is not onto.
/// Limited to `q <= 9`.
pub fn brute_psl2_image(w: &Word, field: &FieldSpec, budget: u64) -> Result<Psl2ImageReport> {
    let q = field.q();
    if q > 9 {
        return Err(Error::InvalidInput(format!(
            "PSL2 image enumeration is limited to q <= 9, got {q}"
        )));
    }
    check_pair_budget(q, budget)?;
    let table = FieldTable::build(field);
    let mats = enumerate_index_mats(field);
    let cw = compile_word(w, &mats, &table);

    let canonical = |m: &IdxMat| -> IdxMat {
        let neg = IdxMat {
            a: table.neg(m.a),
            b: table.neg(m.b),
            c: table.neg(m.c),
            d: table.neg(m.d),
        };
        if (neg.a, neg.b, neg.c, neg.d) < (m.a, m.b, m.c, m.d) {
            neg
        } else {
            *m
        }
    };

    let attained: HashSet<IdxMat> = (0..mats.len())
        .into_par_iter()
        .fold(HashSet::new, |mut set, xi| {
            for yi in 0..mats.len() {
                set.insert(canonical(&compiled_value(&cw, &table, xi, yi)));
            }
            set
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        });

    let group_order = (q * (q * q - 1) / 2) as u64;
    // distinct canonical representatives in enumeration order
    let mut seen = HashSet::new();
    let mut missed = Vec::new();
    for m in &mats {
        let cm = canonical(m);
        if seen.insert(cm) && !attained.contains(&cm) {
            missed.push(idx_to_mat(&cm, field));
        }
    }
    let image_size = attained.len() as u64;
    debug_assert_eq!(seen.len() as u64, group_order);
    Ok(Psl2ImageReport {
        word: w.to_string(),
        q,
        group_order,
        image_size,
        surjective: image_size == group_order,
        missed,
    })
}

/// Finds `x, y` in `SL2(q)` with `tr x = s`, `tr y = t`, `tr xy = u`.
///
/// Takes `x` as the companion matrix of `s`, scans `d` in enumeration
/// order, and solves `b^2 + (u - s d) b - (a d - 1) = 0` through the
/// square-root test on its discriminant. A matrix of trace `+-2` can also
/// be central, which the companion form cannot represent, so when the
/// scan fails and `s = +-2` the pair `(+-I, companion(t))` is tried
/// before reporting failure. Returns `None` if nothing is found
/// (recorded, not fatal).
pub fn realize_triple(
    s: &FqElement,
    t: &FqElement,
    u: &FqElement,
    field: &FieldSpec,
) -> Result<Option<(Mat2, Mat2)>> {
    let companion = |tr: &FqElement| Mat2 {
        a: field.zero_element(),
        b: field.one_element(),
        c: field.neg_el(&field.one_element()),
        d: tr.clone(),
    };
    let recheck = |x: &Mat2, y: &Mat2| -> Result<()> {
        let ok = x.det(field) == field.one_element()
            && y.det(field) == field.one_element()
            && x.trace(field) == *s
            && y.trace(field) == *t
            && x.mul(y, field).trace(field) == *u;
        if ok {
            Ok(())
        } else {
            Err(Error::Internal(
                "realized pair failed its post-condition recheck".into(),
            ))
        }
    };

    let x = companion(s);
    let inv2 = field.inv_el(&field.embed_u64(2))?;
    let four = field.embed_u64(4);
    for d in field.elements() {
        let a = field.sub_el(t, &d);
        let lin = field.sub_el(u, &field.mul_el(s, &d)); // u - s d
        let ad1 = field.sub_el(&field.mul_el(&a, &d), &field.one_element());
        let disc = field.add_el(
            &field.mul_el(&lin, &lin),
            &field.mul_el(&four, &ad1),
        );
        if let Some(r) = field.sqrt(&disc) {
            let b = field.mul_el(&field.sub_el(&r, &lin), &inv2);
            let c = field.add_el(&lin, &b);
            let y = Mat2 { a, b, c, d };
            recheck(&x, &y)?;
            return Ok(Some((x, y)));
        }
    }

    // central fallback: x = I forces tr(xy) = t, x = -I forces tr(xy) = -t
    let two = field.embed_u64(2);
    if *s == two && u == t {
        let x = Mat2::identity(field);
        let y = companion(t);
        recheck(&x, &y)?;
        return Ok(Some((x, y)));
    }
    if *s == field.neg_el(&two) && *u == field.neg_el(t) {
        let id = Mat2::identity(field);
        let x = Mat2 {
            a: field.neg_el(&id.a),
            b: id.b.clone(),
            c: id.c.clone(),
            d: field.neg_el(&id.d),
        };
        let y = companion(t);
        recheck(&x, &y)?;
        return Ok(Some((x, y)));
    }
    Ok(None)
}

/// Samples uniform `SL2(p)` pairs (random matrices, reject singular,
/// scale one row by the inverse determinant) and counts disagreements
/// between the matrix trace of `w(x, y)` and the evaluated trace
/// polynomial. Any nonzero count is a bug.
pub fn random_matrix_oracle(w: &Word, trials: u64, p: u64, seed: u64) -> Result<u64> {
    let field = crate::field::make_field(p, 1)?;
    let tau = trace_polynomial(w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_sl2 = |rng: &mut ChaCha8Rng| loop {
        let m = Mat2 {
            a: field.embed_u64(rng.gen_range(0..p)),
            b: field.embed_u64(rng.gen_range(0..p)),
            c: field.embed_u64(rng.gen_range(0..p)),
            d: field.embed_u64(rng.gen_range(0..p)),
        };
        let det = m.det(&field);
        if field.is_zero_el(&det) {
            continue;
        }
        let dinv = field.inv_el(&det).unwrap();
        return Mat2 {
            a: field.mul_el(&m.a, &dinv),
            b: field.mul_el(&m.b, &dinv),
            c: m.c,
            d: m.d,
        };
    };
    let mut mismatches = 0;
    for _ in 0..trials {
        let x = random_sl2(&mut rng);
        let y = random_sl2(&mut rng);
        let direct = word_value(w, &x, &y, &field).trace(&field);
        let symbolic = tau.evaluate_in(
            &field,
            &x.trace(&field),
            &y.trace(&field),
            &x.mul(&y, &field).trace(&field),
        );
        if direct != symbolic {
            mismatches += 1;
        }
    }
    Ok(mismatches)
}

/// True iff the word is `v^e` for some `e >= 2`: its cyclic reduction
/// has a proper period, checked by rotation over the divisors of the
/// letter count.
pub fn is_proper_power(w: &Word) -> bool {
    let letters = w.cyclically_reduce().expand_codes();
    let n = letters.len();
    if n < 2 {
        return false;
    }
    for d in 1..n {
        if n % d != 0 {
            continue;
        }
        if (0..n).all(|i| letters[i] == letters[(i + d) % n]) {
            return true;
        }
    }
    false
}

/// Missing values of one word over one field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMissing {
    pub q: u64,
    pub missing: Vec<FqElement>,
}

/// One flagged word-class from a search run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchEntry {
    pub word: String,
    pub length: u64,
    pub proper_power: bool,
    pub fields: Vec<FieldMissing>,
}

/// Outcome of a short-word search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub max_length: u32,
    pub qs: Vec<u64>,
    /// Rotation/inversion classes examined.
    pub classes_examined: u64,
    /// Words whose image misses at least one value over at least one
    /// field, in enumeration order (length, then lexicographic).
    pub flagged: Vec<SearchEntry>,
}

/// Enumerates reduced words up to `max_length` (deduplicated by
/// rotation/inversion class), evaluates each trace image over every
/// field, and flags words that miss a value. Proper powers are flagged
/// as such. Deterministic output ordering.
pub fn word_search(
    max_length: u32,
    fields: &[FieldSpec],
    budget: u64,
) -> Result<SearchReport> {
    if max_length > 16 {
        return Err(Error::InvalidInput(format!(
            "max_length is limited to 16, got {max_length}"
        )));
    }
    /// Visits every reduced code string of exactly `length` letters in
    /// lexicographic order (no adjacent cancelling pair).
    fn each_reduced(
        stack: &mut Vec<u8>,
        length: usize,
        visit: &mut impl FnMut(&[u8]) -> Result<()>,
    ) -> Result<()> {
        if stack.len() == length {
            return visit(stack);
        }
        for code in 0..4u8 {
            if stack.last().map_or(false, |&prev| prev ^ 1 == code) {
                continue;
            }
            stack.push(code);
            each_reduced(stack, length, visit)?;
            stack.pop();
        }
        Ok(())
    }

    let letter_of = |code: u8| -> (Gen, i64) {
        match code {
            0 => (Gen::X1, 1),
            1 => (Gen::X1, -1),
            2 => (Gen::X2, 1),
            _ => (Gen::X2, -1),
        }
    };

    let mut seen = HashSet::new();
    let mut flagged = Vec::new();
    let mut classes = 0u64;
    let mut stack = Vec::with_capacity(max_length as usize);
    for length in 1..=max_length {
        each_reduced(&mut stack, length as usize, &mut |codes| {
            let word = Word::from_letters(codes.iter().map(|&c| letter_of(c)));
            debug_assert_eq!(word.reduced_len(), length as u64);
            if !seen.insert(word.canonical_trace_key()) {
                return Ok(());
            }
            classes += 1;
            let tau = trace_polynomial(&word);
            let mut misses = Vec::new();
            for field in fields {
                let image = evaluate_image(&tau, field, budget)?;
                let missing: Vec<FqElement> = image
                    .missing_indices()
                    .into_iter()
                    .map(|i| field.element_from_index(i))
                    .collect();
                if !missing.is_empty() {
                    misses.push(FieldMissing {
                        q: field.q(),
                        missing,
                    });
                }
            }
            if !misses.is_empty() {
                flagged.push(SearchEntry {
                    word: word.to_string(),
                    length: length as u64,
                    proper_power: is_proper_power(&word),
                    fields: misses,
                });
            }
            Ok(())
        })?;
    }
    Ok(SearchReport {
        max_length,
        qs: fields.iter().map(|f| f.q()).collect(),
        classes_examined: classes,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, DEFAULT_BUDGET};
    use crate::word::{base_commutator, parse, theorem_word};

    fn field(p: u64, n: u32) -> FieldSpec {
        make_field(p, n).unwrap()
    }

    #[test]
    fn sl2_counts() {
        for (q, expected) in [(3u64, 24u64), (5, 120), (7, 336), (9, 720)] {
            let f = if q == 9 { field(3, 2) } else { field(q, 1) };
            let mats: Vec<Mat2> = enumerate_sl2(&f, DEFAULT_BUDGET).unwrap().collect();
            assert_eq!(mats.len() as u64, expected, "q = {q}");
            for m in &mats {
                assert_eq!(m.det(&f), f.one_element());
            }
            // exactly once each
            let mut distinct = HashSet::new();
            for m in &mats {
                assert!(distinct.insert((
                    f.index_of(&m.a),
                    f.index_of(&m.b),
                    f.index_of(&m.c),
                    f.index_of(&m.d)
                )));
            }
        }
    }

    #[test]
    fn word_value_basics() {
        let f = field(5, 1);
        let mats: Vec<Mat2> = enumerate_sl2(&f, DEFAULT_BUDGET).unwrap().collect();
        let x = mats[17].clone();
        let y = mats[42].clone();
        assert_eq!(
            word_value(&Word::identity(), &x, &y, &f),
            Mat2::identity(&f)
        );
        assert_eq!(word_value(&parse("x1").unwrap(), &x, &y, &f), x);
        // commutator of commuting elements is the identity
        let id = Mat2::identity(&f);
        assert_eq!(
            word_value(&base_commutator(), &id, &id, &f),
            Mat2::identity(&f)
        );
        // x * x^-1 = 1 through the evaluator
        assert_eq!(
            word_value(&parse("x1 x1^-1").unwrap(), &x, &y, &f),
            Mat2::identity(&f)
        );
    }

    #[test]
    fn word_value_is_a_homomorphism_on_samples() {
        let f = field(7, 1);
        let mats: Vec<Mat2> = enumerate_sl2(&f, DEFAULT_BUDGET).unwrap().collect();
        let words = ["x1 x2", "x1^-2 x2", "x1 x2 x1^-1 x2^2"];
        for (i, u_text) in words.iter().enumerate() {
            for (j, v_text) in words.iter().enumerate() {
                let u = parse(u_text).unwrap();
                let v = parse(v_text).unwrap();
                let x = mats[31 * (i + 1)].clone();
                let y = mats[47 * (j + 1)].clone();
                let left = word_value(&u.multiply(&v), &x, &y, &f);
                let right = word_value(&u, &x, &y, &f).mul(&word_value(&v, &x, &y, &f), &f);
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn brute_image_of_generator_covers_field() {
        let f = field(3, 1);
        let image = brute_trace_image(&parse("x1").unwrap(), &f, DEFAULT_BUDGET).unwrap();
        assert!(image.is_full());
    }

    #[test]
    fn brute_image_of_theorem_word_misses_zero_mod_3() {
        let f = field(3, 1);
        let image =
            brute_trace_image(&theorem_word(2).unwrap(), &f, DEFAULT_BUDGET).unwrap();
        assert!(!image.contains(0));
        assert_eq!(image.missing_indices(), vec![0]);
    }

    #[test]
    fn brute_image_matches_symbolic_image() {
        let panel = ["x1", "x1^2", "[x1^-2, x2^-1]"];
        for f in [field(3, 1), field(5, 1)] {
            for text in panel {
                let w = parse(text).unwrap();
                let brute = brute_trace_image(&w, &f, DEFAULT_BUDGET).unwrap();
                let symbolic =
                    evaluate_image(&trace_polynomial(&w), &f, DEFAULT_BUDGET).unwrap();
                assert_eq!(brute, symbolic, "q = {} word = {text}", f.q());
            }
        }
        // the excluded case p = 2k+1 = 5: record that both routes agree,
        // with no claim about what the set is
        let f = field(5, 1);
        let w = theorem_word(2).unwrap();
        let brute = brute_trace_image(&w, &f, DEFAULT_BUDGET).unwrap();
        let symbolic = evaluate_image(&trace_polynomial(&w), &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(brute, symbolic);
    }

    #[test]
    fn realize_specific_and_exhaustive_triples() {
        let f = field(5, 1);
        let two = f.embed_u64(2);
        let (x, y) = realize_triple(&two, &two, &two, &f).unwrap().unwrap();
        assert_eq!(x.trace(&f), two);
        assert_eq!(y.trace(&f), two);
        assert_eq!(x.mul(&y, &f).trace(&f), two);

        // every triple over F_3 and F_5 is realizable
        for f in [field(3, 1), field(5, 1)] {
            for s in f.elements() {
                for t in f.elements() {
                    for u in f.elements() {
                        let got = realize_triple(&s, &t, &u, &f).unwrap();
                        assert!(got.is_some(), "unrealizable triple over q = {}", f.q());
                    }
                }
            }
        }
    }

    #[test]
    fn random_oracle_has_no_mismatches() {
        assert_eq!(
            random_matrix_oracle(&parse("x1 x2").unwrap(), 1000, 101, 7).unwrap(),
            0
        );
        assert_eq!(
            random_matrix_oracle(&theorem_word(2).unwrap(), 500, 65521, 7).unwrap(),
            0
        );
        let long = parse("x1^3 x2^-2 x1 x2 x1^-4 x2^2").unwrap();
        assert_eq!(random_matrix_oracle(&long, 300, 101, 11).unwrap(), 0);
    }

    #[test]
    fn psl2_image_of_generator_is_everything() {
        let f = field(3, 1);
        let report = brute_psl2_image(&parse("x1").unwrap(), &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.group_order, 12);
        assert!(report.surjective);
        assert!(report.missed.is_empty());
    }

    #[test]
    fn psl2_image_of_theorem_word_misses_involutions_mod_3() {
        let f = field(3, 1);
        let report =
            brute_psl2_image(&theorem_word(2).unwrap(), &f, DEFAULT_BUDGET).unwrap();
        assert!(!report.surjective);
        assert!(!report.missed.is_empty());
        assert_eq!(
            report.image_size + report.missed.len() as u64,
            report.group_order
        );
        // every missed element's SL2 lifts have trace 0 (trace of -M is
        // -trace(M), so checking the representative suffices)
        for m in &report.missed {
            assert!(f.is_zero_el(&m.trace(&f)), "missed element has nonzero trace");
        }
    }

    #[test]
    fn psl2_image_of_ore_commutator_is_everything_mod_5() {
        let f = field(5, 1);
        let x1 = Word::generator(Gen::X1);
        let x2 = Word::generator(Gen::X2);
        let w = Word::commutator(&x1, &x2);
        let report = brute_psl2_image(&w, &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.group_order, 60);
        assert!(report.surjective);
    }

    #[test]
    fn psl2_image_rejects_large_q() {
        let f = field(11, 1);
        assert!(brute_psl2_image(&parse("x1").unwrap(), &f, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn proper_power_detection() {
        assert!(is_proper_power(&parse("x1^2").unwrap()));
        assert!(is_proper_power(&parse("(x1 x2)^3").unwrap()));
        assert!(is_proper_power(&parse("x1 x2^2 x1^-1").unwrap())); // conjugate of a square
        assert!(!is_proper_power(&parse("x1").unwrap()));
        assert!(!is_proper_power(&parse("x1 x2").unwrap()));
        assert!(!is_proper_power(&theorem_word(2).unwrap()));
        assert!(!is_proper_power(&Word::identity()));
    }

    #[test]
    fn search_flags_squares_at_length_two() {
        let f = field(3, 1);
        let report = word_search(2, &[f.clone()], DEFAULT_BUDGET).unwrap();
        assert_eq!(report.classes_examined, 6);
        let squares: Vec<&SearchEntry> = report
            .flagged
            .iter()
            .filter(|e| e.word == "x1^2" || e.word == "x2^2")
            .collect();
        assert_eq!(squares.len(), 2);
        for e in &report.flagged {
            assert!(e.proper_power);
            assert_eq!(e.fields[0].q, 3);
            assert_eq!(e.fields[0].missing, vec![f.zero_element()]);
        }
    }

    #[test]
    fn search_at_length_one_flags_nothing() {
        let report = word_search(1, &[field(3, 1), field(5, 1)], DEFAULT_BUDGET).unwrap();
        assert_eq!(report.classes_examined, 2);
        assert!(report.flagged.is_empty());
    }

    #[test]
    fn search_rejects_excessive_length() {
        assert!(word_search(17, &[field(3, 1)], DEFAULT_BUDGET).is_err());
    }
}
