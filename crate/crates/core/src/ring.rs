//! Commutative-ring abstraction used for exact polynomial evaluation.
//!
//! Rings are value objects (a descriptor plus an element type), so stateful
//! rings like `F_q` or `Z[x]/Phi_l(x)` fit the same interface as `Z`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A commutative ring with exact arithmetic and an embedding of `Z`.
pub trait Ring: Clone + PartialEq {
    type Element: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Element;
    fn one(&self) -> Self::Element;
    fn is_zero(&self, a: &Self::Element) -> bool;
    fn add(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn sub(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn neg(&self, a: &Self::Element) -> Self::Element;
    fn from_integer(&self, n: &BigInt) -> Self::Element;

    fn pow(&self, a: &Self::Element, e: u32) -> Self::Element {
        let mut result = self.one();
        let mut square = a.clone();
        let mut rem = e;
        while rem > 0 {
            if rem & 1 == 1 {
                result = self.mul(&result, &square);
            }
            rem >>= 1;
            if rem > 0 {
                square = self.mul(&square, &square);
            }
        }
        result
    }
}

/// The ring of arbitrary-precision integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IntegerRing;

impl Ring for IntegerRing {
    type Element = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn from_integer(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
}
