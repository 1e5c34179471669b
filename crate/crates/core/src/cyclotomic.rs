//! Exact arithmetic in `Z[zeta]` for `zeta` a primitive `(2k+1)`-th root
//! of unity with `2k+1` prime, real-subfield elements
//! `eta_i = zeta^i + zeta^-i`, and the symbolic factorization checks for
//! trace polynomials of `x1^2 [x1^-2, x2^-1]^k`.
//!
//! Elements are coefficient vectors on the basis `1, zeta, ..., zeta^(2k-1)`
//! of `Z[x]/Phi_l(x)` with `Phi_l = 1 + x + ... + x^(2k)`. The conductor is
//! restricted to primes, where this quotient is exactly the ring of
//! integers of `Q(zeta)`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{make_field_with_limit, FieldSpec, FqElement};
use crate::fppoly;
use crate::number_theory::is_prime;
use crate::poly::{MPoly, Var};
use crate::ring::Ring;
use crate::trace::{trace_of_power, trace_polynomial, TracePolynomial};
use crate::word::{base_commutator, theorem_word};

/// An element of `Z[zeta]`, tagged with its conductor `l = 2k+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycInt {
    l: u64,
    /// `l - 1` coefficients on `1, zeta, ..., zeta^(l-2)`.
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn conductor(&self) -> u64 {
        self.l
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// True iff the element lies in `Z` (all non-constant coordinates zero).
    pub fn is_rational_integer(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational_integer(&self) -> Option<BigInt> {
        if self.is_rational_integer() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }
}

impl std::fmt::Display for CycInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            use num_traits::One;
            if !mag.is_one() || i == 0 {
                write!(f, "{mag}")?;
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            if i == 1 {
                write!(f, "z")?;
            } else if i > 1 {
                write!(f, "z^{i}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The ring `Z[zeta]` with `zeta` a primitive `l`-th root of unity,
/// `l = 2k+1` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclotomicRing {
    l: u64,
}

impl CyclotomicRing {
    /// Requires `2k+1` prime; composite conductors are rejected.
    pub fn new(k: u64) -> Result<CyclotomicRing> {
        let l = 2 * k + 1;
        if k < 1 || !is_prime(l) {
            return Err(Error::InvalidInput(format!(
                "2k+1 = {l} must be an odd prime"
            )));
        }
        Ok(CyclotomicRing { l })
    }

    pub fn conductor(&self) -> u64 {
        self.l
    }

    pub fn k(&self) -> u64 {
        (self.l - 1) / 2
    }

    fn dim(&self) -> usize {
        (self.l - 1) as usize
    }

    /// Reduces a coefficient vector on `1, ..., zeta^(l-1)` to the basis,
    /// using `zeta^(l-1) = -(1 + zeta + ... + zeta^(l-2))`.
    fn reduce_full(&self, mut full: Vec<BigInt>) -> CycInt {
        debug_assert_eq!(full.len(), self.l as usize);
        let top = full.pop().unwrap();
        for c in full.iter_mut() {
            *c -= &top;
        }
        CycInt {
            l: self.l,
            coeffs: full,
        }
    }

    /// `zeta^i` for any integer `i` (exponents taken mod `l`).
    pub fn zeta_pow(&self, i: i64) -> CycInt {
        let e = i.rem_euclid(self.l as i64) as usize;
        let mut full = vec![BigInt::zero(); self.l as usize];
        full[e] = BigInt::from(1);
        self.reduce_full(full)
    }

    pub fn zeta(&self) -> CycInt {
        self.zeta_pow(1)
    }

    /// The real-subfield element `eta_i = zeta^i + zeta^-i`.
    pub fn eta(&self, i: u64) -> CycInt {
        let i = i as i64;
        self.add(&self.zeta_pow(i), &self.zeta_pow(-i))
    }
}

impl Ring for CyclotomicRing {
    type Element = CycInt;

    fn zero(&self) -> CycInt {
        CycInt {
            l: self.l,
            coeffs: vec![BigInt::zero(); self.dim()],
        }
    }

    fn one(&self) -> CycInt {
        self.from_integer(&BigInt::from(1))
    }

    fn is_zero(&self, a: &CycInt) -> bool {
        a.coeffs.iter().all(Zero::is_zero)
    }

    fn add(&self, a: &CycInt, b: &CycInt) -> CycInt {
        debug_assert_eq!(a.l, self.l);
        debug_assert_eq!(b.l, self.l);
        CycInt {
            l: self.l,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    fn sub(&self, a: &CycInt, b: &CycInt) -> CycInt {
        CycInt {
            l: self.l,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }

    fn mul(&self, a: &CycInt, b: &CycInt) -> CycInt {
        debug_assert_eq!(a.l, self.l);
        debug_assert_eq!(b.l, self.l);
        // convolve with exponents folded mod l (zeta^l = 1)
        let l = self.l as usize;
        let mut full = vec![BigInt::zero(); l];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                full[(i + j) % l] += x * y;
            }
        }
        self.reduce_full(full)
    }

    fn neg(&self, a: &CycInt) -> CycInt {
        CycInt {
            l: self.l,
            coeffs: a.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn from_integer(&self, n: &BigInt) -> CycInt {
        let mut coeffs = vec![BigInt::zero(); self.dim()];
        coeffs[0] = n.clone();
        CycInt { l: self.l, coeffs }
    }
}

/// Polynomials in `s, t, u` with `Z[zeta]` coefficients.
pub type PolyOverCyc = MPoly<CyclotomicRing>;

impl std::fmt::Display for PolyOverCyc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<_> = self.terms().collect();
        for (idx, (mono, coeff)) in terms.iter().rev().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({coeff})")?;
            for (name, exp) in [("s", mono.s), ("t", mono.t), ("u", mono.u)] {
                if exp == 0 {
                    continue;
                }
                write!(f, "*{name}")?;
                if exp > 1 {
                    write!(f, "^{exp}")?;
                }
            }
        }
        Ok(())
    }
}

/// `eta_i = zeta^i + zeta^-i` in `Z[zeta]` for conductor `2k+1`.
pub fn eta(k: u64, i: u64) -> Result<CycInt> {
    let ring = CyclotomicRing::new(k)?;
    if i > k {
        return Err(Error::InvalidInput(format!("need 0 <= i <= k, got i = {i}")));
    }
    Ok(ring.eta(i))
}

/// The monic degree-`k` minimal polynomial of `eta = zeta + zeta^-1`,
/// computed by expanding `prod_(i=1..k) (X - eta_i)` in `Z[zeta]`.
/// Coefficients are returned ascending. Every coefficient of the
/// expansion must land in `Z`; anything else is an arithmetic bug.
pub fn min_poly_eta(k: u64) -> Result<Vec<BigInt>> {
    let ring = CyclotomicRing::new(k)?;
    let mut coeffs: Vec<CycInt> = vec![ring.one()];
    for i in 1..=k {
        let e = ring.eta(i);
        let mut next = vec![ring.zero(); coeffs.len() + 1];
        for (d, c) in coeffs.iter().enumerate() {
            next[d + 1] = ring.add(&next[d + 1], c);
            next[d] = ring.sub(&next[d], &ring.mul(c, &e));
        }
        coeffs = next;
    }
    coeffs
        .into_iter()
        .map(|c| {
            c.to_rational_integer().ok_or_else(|| {
                Error::Internal(
                    "minimal-polynomial coefficient is not a rational integer".into(),
                )
            })
        })
        .collect()
}

/// Both sides of the telescoping identity
/// `(-1)^k + sum_(i=1..k) (-1)^(k-i) tau(w^i) = prod_(i=1..k) (tau(w) + eta_i)`,
/// as polynomials over `Z[zeta]`. The left side computes `tau(w^i)`
/// through the substitution calculus.
pub fn prefactorization_sides(
    k: u64,
    tau_w: &TracePolynomial,
) -> Result<(PolyOverCyc, PolyOverCyc)> {
    let ring = CyclotomicRing::new(k)?;
    let mut lhs = MPoly::constant_i64(if k % 2 == 0 { 1 } else { -1 });
    for i in 1..=k {
        let ti = trace_of_power(tau_w, i);
        lhs = if (k - i) % 2 == 0 {
            lhs.add(&ti)
        } else {
            lhs.sub(&ti)
        };
    }
    let lhs = lhs.embed_into(ring);

    let tau_emb = tau_w.embed_into(ring);
    let mut rhs = MPoly::constant(ring, ring.one());
    for i in 1..=k {
        let factor = tau_emb.add(&MPoly::constant(ring, ring.eta(i)));
        rhs = rhs.mul(&factor);
    }
    Ok((lhs, rhs))
}

/// Checks the telescoping identity for the trace polynomial `tau_w`.
/// This is a theorem, so `false` signals a bug or invalid input.
pub fn verify_prefactorization(k: u64, tau_w: &TracePolynomial) -> Result<bool> {
    let (lhs, rhs) = prefactorization_sides(k, tau_w)?;
    Ok(lhs == rhs)
}

/// The expanded product
/// `(s^2 - 2) prod_(i=1..k) (tau(c) + eta_i)` over `Z[zeta]`, where
/// `tau(c)` is the trace polynomial of `c = [x1^-2, x2^-1]`.
pub fn lemma2_product(k: u64) -> Result<PolyOverCyc> {
    let ring = CyclotomicRing::new(k)?;
    let tau_c = trace_polynomial(&base_commutator()).embed_into(ring);
    let s = MPoly::variable(ring, Var::S);
    let two = MPoly::constant(ring, ring.from_integer(&BigInt::from(2)));
    let mut prod = s.mul(&s).sub(&two);
    for i in 1..=k {
        let factor = tau_c.add(&MPoly::constant(ring, ring.eta(i)));
        prod = prod.mul(&factor);
    }
    Ok(prod)
}

/// Checks that the trace polynomial of `x1^2 [x1^-2, x2^-1]^k` equals the
/// expanded product of [`lemma2_product`], exactly over `Z[zeta]`.
/// This is a theorem, so `false` signals a bug.
pub fn verify_lemma2(k: u64) -> Result<bool> {
    let ring = CyclotomicRing::new(k)?;
    let product = lemma2_product(k)?;
    let direct = trace_polynomial(&theorem_word(k)?).embed_into(ring);
    Ok(product == direct)
}

/// The residue embedding of `eta` at a prime `p`: the common degree `m`
/// of the irreducible factors of its minimal polynomial mod `p`, plus a
/// root of the chosen factor inside the standard `F_(p^m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaEmbedding {
    /// Inertia degree: common degree of all irreducible factors.
    pub m: u32,
    /// The standard field `F_(p^m)` the root lives in.
    pub field: FieldSpec,
    /// Root of the lexicographically smallest irreducible factor, first
    /// in enumeration order.
    pub theta: FqElement,
}

/// Common irreducible-factor degree of `min_poly_eta(k)` mod `p`.
/// Unequal degrees contradict unramified splitting and raise an
/// internal error.
pub fn eta_factor_degree(k: u64, p: u64) -> Result<u32> {
    let minpoly = min_poly_eta(k)?;
    let f = reduce_mod_p(&minpoly, p, k)?;
    Ok(fppoly::equal_factor_degree(&f, p)? as u32)
}

/// Factors `min_poly_eta(k)` mod `p` and returns a root of the smallest
/// factor inside `F_(p^m)`, realizing `eta` as a concrete field element.
pub fn embed_eta(k: u64, p: u64) -> Result<EtaEmbedding> {
    let minpoly = min_poly_eta(k)?;
    let f = reduce_mod_p(&minpoly, p, k)?;
    let m = fppoly::equal_factor_degree(&f, p)?;
    let factors = fppoly::factor_equal_degree(&f, p, m)?;
    let g = &factors[0];
    let field = make_field_with_limit(p, m as u32, u64::MAX >> 1)?;
    let theta = field
        .elements()
        .find(|cand| field.is_zero_el(&eval_fp_poly(g, cand, &field)))
        .ok_or_else(|| {
            Error::Internal(format!(
                "no root of the degree-{m} factor found in F_{}", field.q()
            ))
        })?;
    Ok(EtaEmbedding {
        m: m as u32,
        field,
        theta,
    })
}

fn reduce_mod_p(minpoly: &[BigInt], p: u64, k: u64) -> Result<Vec<u64>> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    if p == 2 * k + 1 {
        return Err(Error::InvalidInput(format!(
            "p = 2k+1 = {p} is ramified"
        )));
    }
    let pb = BigInt::from(p);
    Ok(minpoly
        .iter()
        .map(|c| {
            let mut r = c % &pb;
            if r.is_negative() {
                r += &pb;
            }
            r.to_u64().expect("residue fits u64")
        })
        .collect())
}

/// Evaluates a polynomial with `F_p` coefficients at an element of an
/// extension field, by Horner's rule.
fn eval_fp_poly(g: &[u64], x: &FqElement, field: &FieldSpec) -> FqElement {
    let mut acc = field.zero_element();
    for &c in g.iter().rev() {
        acc = field.add_el(&field.mul_el(&acc, x), &field.embed_u64(c));
    }
    acc
}
