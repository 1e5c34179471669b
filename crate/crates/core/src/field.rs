//! Finite fields `F_(p^n)` in polynomial basis, the exhaustive `q^3`
//! trace-evaluation kernel, and attained-value sets.
//!
//! Elements are little-endian coefficient vectors over a deterministically
//! chosen modulus (the lexicographically first monic irreducible,
//! coefficients compared low-degree first), so certificates are
//! reproducible without external polynomial tables. The kernel enumerates
//! elements by index in little-endian base-`p` order; that enumeration is
//! also the order of every serialized element list.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fppoly;
use crate::number_theory::is_prime;
use crate::poly::MPoly;
use crate::ring::{IntegerRing, Ring};

/// Default cap on `q = p^n` accepted by [`make_field`].
pub const DEFAULT_FIELD_LIMIT: u64 = 1 << 20;

/// Default budget for exhaustive loops (`q^3` kernel evaluations, or
/// ordered pairs in the brute-force oracle).
pub const DEFAULT_BUDGET: u64 = 1 << 32;

/// Hard cap on `q` for the table-driven kernel, independent of budget.
const KERNEL_MAX_Q: u64 = 4096;

/// An element of `F_(p^n)`: `n` residues mod `p`, little-endian in the
/// polynomial basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FqElement {
    pub coeffs: Vec<u64>,
}

/// A concrete finite field `F_q`, `q = p^n`, with its chosen modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    p: u64,
    n: u32,
    /// Monic irreducible of degree `n`, little-endian, length `n + 1`.
    modulus: Vec<u64>,
    q: u64,
}

/// Constructs `F_(p^n)` with the default size limit.
pub fn make_field(p: u64, n: u32) -> Result<FieldSpec> {
    make_field_with_limit(p, n, DEFAULT_FIELD_LIMIT)
}

/// Constructs `F_(p^n)`, rejecting `q > max_q`. The modulus is the
/// lexicographically smallest monic irreducible of degree `n` over `F_p`
/// (coefficients compared low-degree first), so repeated calls are
/// byte-identical.
pub fn make_field_with_limit(p: u64, n: u32, max_q: u64) -> Result<FieldSpec> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    if n < 1 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    let q = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(p)).ok_or(
        Error::BudgetExceeded {
            required: u128::MAX,
            budget: max_q,
        },
    )?;
    if q > max_q {
        return Err(Error::BudgetExceeded {
            required: q as u128,
            budget: max_q,
        });
    }
    let modulus = if n == 1 {
        vec![0, 1]
    } else {
        first_irreducible(p, n as usize)?
    };
    Ok(FieldSpec { p, n, modulus, q })
}

/// Scans monic degree-`n` polynomials in lexicographic order of
/// `(c_0, ..., c_(n-1))` and returns the first irreducible one.
fn first_irreducible(p: u64, n: usize) -> Result<Vec<u64>> {
    let mut coeffs = vec![0u64; n];
    loop {
        let mut candidate = coeffs.clone();
        candidate.push(1);
        if fppoly::is_irreducible(&candidate, p) {
            return Ok(candidate);
        }
        // odometer with the high-degree coefficient fastest, so c_0 is
        // the most significant position of the comparison
        let mut i = n;
        loop {
            if i == 0 {
                return Err(Error::Internal(format!(
                    "no irreducible of degree {n} over F_{p}"
                )));
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero_element(&self) -> FqElement {
        FqElement {
            coeffs: vec![0; self.n as usize],
        }
    }

    pub fn one_element(&self) -> FqElement {
        self.embed_u64(1)
    }

    /// Embeds a residue of `F_p` as a constant.
    pub fn embed_u64(&self, c: u64) -> FqElement {
        let mut coeffs = vec![0; self.n as usize];
        coeffs[0] = c % self.p;
        FqElement { coeffs }
    }

    pub fn embed_int(&self, c: &BigInt) -> FqElement {
        let p = BigInt::from(self.p);
        let mut r = c % &p;
        if r.is_negative() {
            r += &p;
        }
        self.embed_u64(r.to_u64().expect("residue fits u64"))
    }

    /// Validates coefficient range and length for an externally supplied
    /// element, accepting shorter vectors and zero-padding them.
    pub fn element_from_coeffs(&self, coeffs: &[u64]) -> Result<FqElement> {
        if coeffs.len() > self.n as usize {
            return Err(Error::InvalidInput(format!(
                "element has {} coefficients but the field has degree {}",
                coeffs.len(),
                self.n
            )));
        }
        if let Some(bad) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidInput(format!(
                "coefficient {bad} out of range [0, {})",
                self.p
            )));
        }
        let mut full = coeffs.to_vec();
        full.resize(self.n as usize, 0);
        Ok(FqElement { coeffs: full })
    }

    /// Index of an element in the fixed enumeration: little-endian
    /// base-`p` digits.
    pub fn index_of(&self, a: &FqElement) -> u64 {
        debug_assert_eq!(a.coeffs.len(), self.n as usize);
        a.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p + c)
    }

    pub fn element_from_index(&self, mut idx: u64) -> FqElement {
        debug_assert!(idx < self.q);
        let mut coeffs = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            coeffs.push(idx % self.p);
            idx /= self.p;
        }
        FqElement { coeffs }
    }

    /// All field elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FqElement> + '_ {
        (0..self.q).map(move |i| self.element_from_index(i))
    }

    pub fn add_el(&self, a: &FqElement, b: &FqElement) -> FqElement {
        FqElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn sub_el(&self, a: &FqElement, b: &FqElement) -> FqElement {
        FqElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        }
    }

    pub fn neg_el(&self, a: &FqElement) -> FqElement {
        FqElement {
            coeffs: a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect(),
        }
    }

    pub fn mul_el(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let n = self.n as usize;
        let p = self.p as u128;
        let mut buf = vec![0u128; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                buf[i + j] = (buf[i + j] + x as u128 * y as u128) % p;
            }
        }
        // reduce by the monic modulus: x^n = -(m_0 + ... + m_(n-1) x^(n-1))
        for i in (n..2 * n - 1).rev() {
            let c = buf[i];
            if c == 0 {
                continue;
            }
            buf[i] = 0;
            for (j, &mj) in self.modulus.iter().take(n).enumerate() {
                buf[i - n + j] = (buf[i - n + j] + (p - mj as u128) * c) % p;
            }
        }
        FqElement {
            coeffs: buf[..n].iter().map(|&c| c as u64).collect(),
        }
    }

    pub fn pow_el(&self, a: &FqElement, mut e: u64) -> FqElement {
        let mut result = self.one_element();
        let mut square = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_el(&result, &square);
            }
            e >>= 1;
            if e > 0 {
                square = self.mul_el(&square, &square);
            }
        }
        result
    }

    pub fn is_zero_el(&self, a: &FqElement) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    /// Multiplicative inverse by `a^(q-2)`.
    pub fn inv_el(&self, a: &FqElement) -> Result<FqElement> {
        if self.is_zero_el(a) {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        Ok(self.pow_el(a, self.q - 2))
    }

    /// True iff `a` is a square in `F_q`, by the `a^((q-1)/2)` test
    /// (zero counts as a square).
    pub fn is_square(&self, a: &FqElement) -> bool {
        if self.is_zero_el(a) {
            return true;
        }
        self.pow_el(a, (self.q - 1) / 2) == self.one_element()
    }

    /// Deterministic square root: the first element in enumeration order
    /// whose square is `a`, if any.
    pub fn sqrt(&self, a: &FqElement) -> Option<FqElement> {
        self.elements().find(|r| self.mul_el(r, r) == *a)
    }
}

impl Ring for FieldSpec {
    type Element = FqElement;

    fn zero(&self) -> FqElement {
        self.zero_element()
    }
    fn one(&self) -> FqElement {
        self.one_element()
    }
    fn is_zero(&self, a: &FqElement) -> bool {
        self.is_zero_el(a)
    }
    fn add(&self, a: &FqElement, b: &FqElement) -> FqElement {
        self.add_el(a, b)
    }
    fn sub(&self, a: &FqElement, b: &FqElement) -> FqElement {
        self.sub_el(a, b)
    }
    fn mul(&self, a: &FqElement, b: &FqElement) -> FqElement {
        self.mul_el(a, b)
    }
    fn neg(&self, a: &FqElement) -> FqElement {
        self.neg_el(a)
    }
    fn from_integer(&self, c: &BigInt) -> FqElement {
        self.embed_int(c)
    }
}

/// Dense bitmap over the fixed enumeration of `F_q`, recording which
/// values a polynomial attains. Merging is a bitwise OR, so parallel
/// partitions of the evaluation domain combine independently of schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttainedSet {
    size: u64,
    bits: Vec<u64>,
}

impl AttainedSet {
    pub fn new(size: u64) -> AttainedSet {
        AttainedSet {
            size,
            bits: vec![0; size.div_ceil(64) as usize],
        }
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    #[inline]
    pub fn insert(&mut self, idx: u64) {
        debug_assert!(idx < self.size);
        self.bits[(idx / 64) as usize] |= 1 << (idx % 64);
    }

    #[inline]
    pub fn contains(&self, idx: u64) -> bool {
        self.bits[(idx / 64) as usize] >> (idx % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &AttainedSet) {
        debug_assert_eq!(self.size, other.size);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn attained_count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_full(&self) -> bool {
        self.attained_count() == self.size
    }

    pub fn attained_indices(&self) -> Vec<u64> {
        (0..self.size).filter(|&i| self.contains(i)).collect()
    }

    pub fn missing_indices(&self) -> Vec<u64> {
        (0..self.size).filter(|&i| !self.contains(i)).collect()
    }
}

/// Index-based arithmetic tables for one field: the hot loops work on
/// `u32` element indices and never touch coefficient vectors.
pub(crate) struct FieldTable {
    q: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

impl FieldTable {
    pub(crate) fn build(field: &FieldSpec) -> FieldTable {
        let q = field.q as usize;
        let elements: Vec<FqElement> = field.elements().collect();
        let add = (0..q)
            .into_par_iter()
            .flat_map_iter(|i| {
                let row: Vec<u32> = (0..q)
                    .map(|j| field.index_of(&field.add_el(&elements[i], &elements[j])) as u32)
                    .collect();
                row
            })
            .collect();
        let mul = (0..q)
            .into_par_iter()
            .flat_map_iter(|i| {
                let row: Vec<u32> = (0..q)
                    .map(|j| field.index_of(&field.mul_el(&elements[i], &elements[j])) as u32)
                    .collect();
                row
            })
            .collect();
        let neg = (0..q as u64)
            .map(|i| field.index_of(&field.neg_el(&field.element_from_index(i))) as u32)
            .collect();
        FieldTable { q, add, mul, neg }
    }

    #[inline(always)]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline(always)]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline(always)]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }
}

/// The exact attained set `{ tau(s,t,u) : (s,t,u) in F_q^3 }`, by
/// exhaustive evaluation of all `q^3` triples.
///
/// The outer loop runs over `s` (optionally split across threads) with
/// powers of `s` computed once per iteration; for each `(s, t)` the
/// remaining univariate polynomial in `u` is evaluated by Horner's rule.
/// The result is independent of thread count and partitioning.
pub fn evaluate_image(
    tau: &MPoly<IntegerRing>,
    field: &FieldSpec,
    budget: u64,
) -> Result<AttainedSet> {
    let q = field.q;
    let required = (q as u128).pow(3);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded {
            required,
            budget,
        });
    }
    if q > KERNEL_MAX_Q {
        return Err(Error::InvalidInput(format!(
            "q = {q} exceeds the kernel cap {KERNEL_MAX_Q}"
        )));
    }
    let table = FieldTable::build(field);

    // group terms by (t, u) exponent pair; embed coefficients as indices
    let mut groups: Vec<((u32, u32), Vec<(u32, u32)>)> = Vec::new();
    for (mono, coeff) in tau.terms() {
        let cidx = field.index_of(&field.embed_int(coeff)) as u32;
        if cidx == 0 {
            continue;
        }
        let key = (mono.t, mono.u);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push((mono.s, cidx)),
            None => groups.push((key, vec![(mono.s, cidx)])),
        }
    }
    let max_s = groups
        .iter()
        .flat_map(|(_, v)| v.iter().map(|&(se, _)| se))
        .max()
        .unwrap_or(0) as usize;
    let max_t = groups.iter().map(|((te, _), _)| *te).max().unwrap_or(0) as usize;
    let max_u = groups.iter().map(|((_, ue), _)| *ue).max().unwrap_or(0) as usize;

    let image = (0..q as u32)
        .into_par_iter()
        .fold(
            || AttainedSet::new(q),
            |mut set, s_idx| {
                // powers of s for this outer iteration
                let mut spow = vec![1u32; max_s + 1];
                for i in 1..=max_s {
                    spow[i] = table.mul(spow[i - 1], s_idx);
                }
                let ctu: Vec<u32> = groups
                    .iter()
                    .map(|(_, terms)| {
                        terms.iter().fold(0u32, |acc, &(se, c)| {
                            table.add(acc, table.mul(c, spow[se as usize]))
                        })
                    })
                    .collect();
                let mut tpow = vec![1u32; max_t + 1];
                let mut ucoef = vec![0u32; max_u + 1];
                for t_idx in 0..q as u32 {
                    for i in 1..=max_t {
                        tpow[i] = table.mul(tpow[i - 1], t_idx);
                    }
                    ucoef.fill(0);
                    for (g, ((te, ue), _)) in groups.iter().enumerate() {
                        let contrib = table.mul(ctu[g], tpow[*te as usize]);
                        ucoef[*ue as usize] = table.add(ucoef[*ue as usize], contrib);
                    }
                    for u_idx in 0..q as u32 {
                        let mut v = ucoef[max_u];
                        for l in (0..max_u).rev() {
                            v = table.add(table.mul(v, u_idx), ucoef[l]);
                        }
                        set.insert(v as u64);
                    }
                }
                set
            },
        )
        .reduce(
            || AttainedSet::new(q),
            |mut a, b| {
                a.union_with(&b);
                a
            },
        );
    Ok(image)
}
