//! Sparse exact polynomials in the three trace coordinates `s`, `t`, `u`,
//! generic over the coefficient ring.
//!
//! Terms live in a `BTreeMap` keyed by exponent triple, ordered
//! lexicographically on `(s, t, u)`; printing walks the map in descending
//! order, which reproduces the conventional form `s^4 - s^3*t*u + ...`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::ring::{IntegerRing, Ring};

/// Exponent triple of a monomial `s^s t^t u^u`.
///
/// The derived `Ord` is lexicographic on `(s, t, u)`, the term order used
/// for storage, equality, and printing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub s: u32,
    pub t: u32,
    pub u: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { s: 0, t: 0, u: 0 };

    pub fn new(s: u32, t: u32, u: u32) -> Monomial {
        Monomial { s, t, u }
    }

    pub fn total_degree(&self) -> u32 {
        self.s + self.t + self.u
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            s: self.s + other.s,
            t: self.t + other.t,
            u: self.u + other.u,
        }
    }
}

/// One of the three trace coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    S,
    T,
    U,
}

/// A sparse polynomial in `s`, `t`, `u` over the ring `R`.
///
/// Invariant: no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly<R: Ring> {
    ring: R,
    terms: BTreeMap<Monomial, R::Element>,
}

impl<R: Ring> MPoly<R> {
    pub fn zero(ring: R) -> Self {
        MPoly {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: R, c: R::Element) -> Self {
        let mut terms = BTreeMap::new();
        if !ring.is_zero(&c) {
            terms.insert(Monomial::ONE, c);
        }
        MPoly { ring, terms }
    }

    pub fn variable(ring: R, v: Var) -> Self {
        let mono = match v {
            Var::S => Monomial::new(1, 0, 0),
            Var::T => Monomial::new(0, 1, 0),
            Var::U => Monomial::new(0, 0, 1),
        };
        let one = ring.one();
        let mut terms = BTreeMap::new();
        terms.insert(mono, one);
        MPoly { ring, terms }
    }

    pub fn from_terms<I>(ring: R, iter: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, R::Element)>,
    {
        let mut p = MPoly::zero(ring);
        for (mono, c) in iter {
            p.add_term(mono, c);
        }
        p
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R::Element)> {
        self.terms.iter()
    }

    /// Coefficient of a monomial, zero if absent.
    pub fn coeff(&self, mono: &Monomial) -> R::Element {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    fn add_term(&mut self, mono: Monomial, c: R::Element) {
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = self.ring.add(e.get(), &c);
                if self.ring.is_zero(&sum) {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(*mono, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(*mono, self.ring.neg(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        let ring = self.ring.clone();
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, ring.neg(c)))
                .collect(),
            ring,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = MPoly::zero(self.ring.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.ring.mul(ca, cb));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &R::Element) -> Self {
        let mut out = MPoly::zero(self.ring.clone());
        for (m, a) in &self.terms {
            out.add_term(*m, self.ring.mul(a, c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = MPoly::constant(self.ring.clone(), self.ring.one());
        let mut square = self.clone();
        let mut rem = e;
        while rem > 0 {
            if rem & 1 == 1 {
                result = result.mul(&square);
            }
            rem >>= 1;
            if rem > 0 {
                square = square.mul(&square);
            }
        }
        result
    }

    /// Polynomial composition: evaluates `self` at `s := a, t := b, u := c`.
    pub fn substitute(&self, a: &Self, b: &Self, c: &Self) -> Self {
        let pow_a = power_table(a, self.degree_in(Var::S));
        let pow_b = power_table(b, self.degree_in(Var::T));
        let pow_c = power_table(c, self.degree_in(Var::U));
        let mut out = MPoly::zero(self.ring.clone());
        for (mono, coeff) in &self.terms {
            let term = pow_a[mono.s as usize]
                .mul(&pow_b[mono.t as usize])
                .mul(&pow_c[mono.u as usize])
                .mul_scalar(coeff);
            out = out.add(&term);
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|m| match v {
                Var::S => m.s,
                Var::T => m.t,
                Var::U => m.u,
            })
            .max()
            .unwrap_or(0)
    }
}

fn power_table<R: Ring>(base: &MPoly<R>, max: u32) -> Vec<MPoly<R>> {
    let ring = base.ring.clone();
    let mut table = Vec::with_capacity(max as usize + 1);
    table.push(MPoly::constant(ring.clone(), ring.one()));
    for i in 1..=max as usize {
        let next = table[i - 1].mul(base);
        table.push(next);
    }
    table
}

impl MPoly<IntegerRing> {
    pub fn constant_i64(c: i64) -> Self {
        MPoly::constant(IntegerRing, BigInt::from(c))
    }

    pub fn var(v: Var) -> Self {
        MPoly::variable(IntegerRing, v)
    }

    /// Re-interprets an integer polynomial over another ring, dropping
    /// coefficients that map to zero.
    pub fn embed_into<R2: Ring>(&self, ring: R2) -> MPoly<R2> {
        let mut out = MPoly::zero(ring.clone());
        for (mono, c) in &self.terms {
            out.add_term(*mono, ring.from_integer(c));
        }
        out
    }

    /// Exact evaluation at a point of an arbitrary commutative ring, by
    /// Horner's scheme in `s` with power tables for `t` and `u`.
    pub fn evaluate_in<R2: Ring>(
        &self,
        ring: &R2,
        s0: &R2::Element,
        t0: &R2::Element,
        u0: &R2::Element,
    ) -> R2::Element {
        let tpow = element_powers(ring, t0, self.degree_in(Var::T));
        let upow = element_powers(ring, u0, self.degree_in(Var::U));

        let mut by_s: BTreeMap<u32, Vec<(&Monomial, &BigInt)>> = BTreeMap::new();
        for (mono, c) in &self.terms {
            by_s.entry(mono.s).or_default().push((mono, c));
        }

        let mut acc = ring.zero();
        let mut prev_deg: Option<u32> = None;
        for (&deg, terms) in by_s.iter().rev() {
            if let Some(pd) = prev_deg {
                acc = ring.mul(&acc, &ring.pow(s0, pd - deg));
            }
            for (mono, c) in terms {
                let coeff = ring.from_integer(c);
                let tu = ring.mul(&tpow[mono.t as usize], &upow[mono.u as usize]);
                acc = ring.add(&acc, &ring.mul(&coeff, &tu));
            }
            prev_deg = Some(deg);
        }
        if let Some(pd) = prev_deg {
            acc = ring.mul(&acc, &ring.pow(s0, pd));
        }
        acc
    }

    pub fn evaluate_bigint(&self, s0: &BigInt, t0: &BigInt, u0: &BigInt) -> BigInt {
        self.evaluate_in(&IntegerRing, s0, t0, u0)
    }
}

fn element_powers<R: Ring>(ring: &R, base: &R::Element, max: u32) -> Vec<R::Element> {
    let mut table = Vec::with_capacity(max as usize + 1);
    table.push(ring.one());
    for i in 1..=max as usize {
        let next = ring.mul(&table[i - 1], base);
        table.push(next);
    }
    table
}

impl fmt::Display for MPoly<IntegerRing> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, coeff)) in self.terms.iter().rev().enumerate() {
            let negative = coeff.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let magnitude = coeff.magnitude();
            let mut wrote_factor = false;
            if !magnitude.is_one() || *mono == Monomial::ONE {
                write!(f, "{magnitude}")?;
                wrote_factor = true;
            }
            for (name, exp) in [("s", mono.s), ("t", mono.t), ("u", mono.u)] {
                if exp == 0 {
                    continue;
                }
                if wrote_factor {
                    write!(f, "*")?;
                }
                write!(f, "{name}")?;
                if exp > 1 {
                    write!(f, "^{exp}")?;
                }
                wrote_factor = true;
            }
        }
        Ok(())
    }
}
