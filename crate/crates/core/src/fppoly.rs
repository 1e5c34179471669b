//! Univariate polynomial arithmetic over prime fields `F_p`.
//!
//! Polynomials are little-endian coefficient vectors with entries in
//! `[0, p)` and no trailing zeros. Provides the irreducibility test used
//! to pick field moduli and the distinct/equal-degree factorization used
//! to embed cyclotomic residues.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::number_theory::mod_pow;

pub type FpPoly = Vec<u64>;

pub fn trim(f: &mut FpPoly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(f: &[u64]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn x_poly() -> FpPoly {
    vec![0, 1]
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    mod_pow(a % p, p - 2, p)
}

pub fn add(f: &[u64], g: &[u64], p: u64) -> FpPoly {
    let mut out = vec![0u64; f.len().max(g.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *slot = (a + b) % p;
    }
    trim(&mut out);
    out
}

pub fn sub(f: &[u64], g: &[u64], p: u64) -> FpPoly {
    let mut out = vec![0u64; f.len().max(g.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *slot = (a + p - b) % p;
    }
    trim(&mut out);
    out
}

pub fn mul(f: &[u64], g: &[u64], p: u64) -> FpPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + a as u128 * b as u128) % p as u128) as u64;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder by a nonzero divisor.
pub fn div_rem(f: &[u64], g: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let dg = degree(g).expect("division by zero polynomial");
    let lead_inv = inv_mod(g[dg], p);
    let mut rem: FpPoly = f.to_vec();
    trim(&mut rem);
    if rem.len() <= dg {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u64; rem.len() - dg];
    while let Some(dr) = degree(&rem) {
        if dr < dg {
            break;
        }
        let factor = ((rem[dr] as u128 * lead_inv as u128) % p as u128) as u64;
        let shift = dr - dg;
        quot[shift] = factor;
        for (j, &gj) in g.iter().enumerate() {
            let sub = (factor as u128 * gj as u128) % p as u128;
            rem[shift + j] =
                ((rem[shift + j] as u128 + p as u128 - sub) % p as u128) as u64;
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub fn rem(f: &[u64], g: &[u64], p: u64) -> FpPoly {
    div_rem(f, g, p).1
}

pub fn make_monic(f: &[u64], p: u64) -> FpPoly {
    match degree(f) {
        None => Vec::new(),
        Some(d) => {
            let inv = inv_mod(f[d], p);
            f.iter()
                .map(|&c| ((c as u128 * inv as u128) % p as u128) as u64)
                .collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(f: &[u64], g: &[u64], p: u64) -> FpPoly {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    make_monic(&a, p)
}

/// `base^exp mod modulus` with an arbitrary-precision exponent.
pub fn pow_mod(base: &[u64], exp: &BigUint, modulus: &[u64], p: u64) -> FpPoly {
    let mut result = vec![1u64];
    let mut square = rem(base, modulus, p);
    let bits = exp.bits();
    for i in 0..bits {
        if exp.bit(i) {
            result = rem(&mul(&result, &square, p), modulus, p);
        }
        if i + 1 < bits {
            square = rem(&mul(&square, &square, p), modulus, p);
        }
    }
    result
}

pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in f.iter().rev() {
        acc = ((acc as u128 * x as u128 + c as u128) % p as u128) as u64;
    }
    acc
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial of degree >= 1:
/// `x^(p^n) = x mod f`, and `gcd(x^(p^(n/r)) - x, f) = 1` for every prime
/// `r | n`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = match degree(f) {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    let x = x_poly();
    let pn = BigUint::from(p).pow(n as u32);
    if pow_mod(&x, &pn, f, p) != rem(&x, f, p) {
        return false;
    }
    for r in prime_divisors(n) {
        let e = BigUint::from(p).pow((n / r) as u32);
        let h = sub(&pow_mod(&x, &e, f, p), &rem(&x, f, p), p);
        if degree(&gcd(&h, f, p)).map_or(false, |d| d > 0) {
            return false;
        }
    }
    true
}

/// For squarefree monic `f` whose irreducible factors all share one
/// degree, returns that degree. Errors if the factor degrees differ or
/// `f` is not squarefree (both would contradict an unramified prime).
pub fn equal_factor_degree(f: &[u64], p: u64) -> Result<usize> {
    let n = degree(f)
        .ok_or_else(|| Error::Internal("zero polynomial in factor-degree scan".into()))?;
    let deriv = derivative(f, p);
    if degree(&gcd(f, &deriv, p)).map_or(false, |d| d > 0) {
        return Err(Error::Internal(format!(
            "polynomial not squarefree mod {p}"
        )));
    }
    let x = x_poly();
    let mut frob = rem(&x, f, p);
    for d in 1..=n {
        frob = pow_mod(&frob, &BigUint::from(p), f, p);
        let g = gcd(&sub(&frob, &x, p), f, p);
        match degree(&g) {
            Some(dg) if dg > 0 => {
                if dg != n {
                    return Err(Error::Internal(format!(
                        "unequal factor degrees mod {p}: degree-{d} part is proper"
                    )));
                }
                return Ok(d);
            }
            _ => {}
        }
    }
    Err(Error::Internal(format!("factor-degree scan failed mod {p}")))
}

fn derivative(f: &[u64], p: u64) -> FpPoly {
    let mut out: FpPoly = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| ((i as u128 * c as u128) % p as u128) as u64)
        .collect();
    trim(&mut out);
    out
}

/// Factors a squarefree monic polynomial whose irreducible factors all
/// have degree `m` into those factors, by deterministic equal-degree
/// splitting (trial elements enumerated in a fixed order). `p` must be
/// odd. Factors are returned sorted by coefficient vector.
pub fn factor_equal_degree(f: &[u64], p: u64, m: usize) -> Result<Vec<FpPoly>> {
    assert!(p % 2 == 1, "equal-degree splitting requires odd p");
    let mut stack = vec![make_monic(f, p)];
    let mut factors = Vec::new();
    let half = (BigUint::from(p).pow(m as u32) - BigUint::one()) / BigUint::from(2u32);
    while let Some(g) = stack.pop() {
        let dg = degree(&g).expect("zero polynomial on factor stack");
        if dg == m {
            factors.push(g);
            continue;
        }
        let mut split = None;
        'search: for deg_v in 1..=(2 * m).max(2) {
            let mut coeffs = vec![0u64; deg_v];
            loop {
                let mut v = coeffs.clone();
                v.push(1); // monic trial element
                let h = pow_mod(&v, &half, &g, p);
                let h_minus_1 = sub(&h, &[1], p);
                let d = gcd(&h_minus_1, &g, p);
                if let Some(dd) = degree(&d) {
                    if dd > 0 && dd < dg {
                        split = Some(d);
                        break 'search;
                    }
                }
                // odometer over coefficient vectors, low degree fastest
                let mut i = 0;
                loop {
                    if i == deg_v {
                        break;
                    }
                    coeffs[i] += 1;
                    if coeffs[i] < p {
                        break;
                    }
                    coeffs[i] = 0;
                    i += 1;
                }
                if i == deg_v {
                    break;
                }
            }
        }
        let d = split.ok_or_else(|| {
            Error::Internal(format!("equal-degree splitting stalled mod {p}"))
        })?;
        let (quot, r) = div_rem(&g, &d, p);
        debug_assert!(r.is_empty());
        stack.push(d);
        stack.push(make_monic(&quot, p));
    }
    factors.sort();
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_round_trips() {
        let p = 7;
        let f = vec![3, 0, 5, 1]; // x^3 + 5x^2 + 3
        let g = vec![2, 1]; // x + 2
        let (q, r) = div_rem(&f, &g, p);
        assert_eq!(add(&mul(&q, &g, p), &r, p), f);
        assert!(degree(&r).map_or(true, |d| d < 1));
    }

    #[test]
    fn gcd_of_known_product() {
        let p = 5;
        let a = vec![1, 1]; // x + 1
        let b = vec![2, 1]; // x + 2
        let c = vec![3, 1]; // x + 3
        let f = mul(&a, &b, p);
        let g = mul(&a, &c, p);
        assert_eq!(gcd(&f, &g, p), a);
    }

    #[test]
    fn irreducibility_small_cases() {
        // x^2 + 1 over F_3 is irreducible; over F_5 it splits
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // x^2 + x + 1 over F_2... p odd here; over F_5: roots? 0,1,2,3,4 -> 1,3,7=2,13=3,21=1 no roots
        assert!(is_irreducible(&[1, 1, 1], 5));
        // linear polynomials are irreducible
        assert!(is_irreducible(&[4, 1], 5));
        // products are not
        assert!(!is_irreducible(&mul(&[1, 1], &[2, 1], 7), 7));
    }

    #[test]
    fn irreducibility_matches_root_count_for_quadratics() {
        for p in [3u64, 5, 7, 11] {
            for c0 in 0..p {
                for c1 in 0..p {
                    let f = {
                        let mut f = vec![c0, c1, 1];
                        trim(&mut f);
                        f
                    };
                    let has_root = (0..p).any(|x| eval(&f, x, p) == 0);
                    // a monic quadratic is irreducible iff it has no root
                    assert_eq!(is_irreducible(&f, p), !has_root, "p={p} f={f:?}");
                }
            }
        }
    }

    #[test]
    fn equal_degree_detection() {
        // x^2 + x - 1 = x^2 + x + 4 mod 5-conductor cases:
        // mod 3 it is irreducible (degree 2), mod 11 it has two roots (degree 1)
        assert_eq!(equal_factor_degree(&[2, 1, 1], 3).unwrap(), 2);
        assert_eq!(equal_factor_degree(&[10, 1, 1], 11).unwrap(), 1);
        // (x+1)(x+2)(x^2+1) mod 3 has mixed degrees
        let f = mul(&mul(&[1, 1], &[2, 1], 3), &[1, 0, 1], 3);
        assert!(equal_factor_degree(&f, 3).is_err());
    }

    #[test]
    fn equal_degree_factoring() {
        let p = 11;
        // x^2 + x - 1 mod 11 = (x + 8)(x + 4)
        let factors = factor_equal_degree(&[10, 1, 1], p, 1).unwrap();
        assert_eq!(factors, vec![vec![4, 1], vec![8, 1]]);

        // product of two irreducible quadratics mod 3
        let f = mul(&[1, 0, 1], &[2, 2, 1], 3);
        let factors = factor_equal_degree(&f, 3, 2).unwrap();
        assert_eq!(factors.len(), 2);
        for g in &factors {
            assert!(is_irreducible(g, 3));
            assert_eq!(degree(g), Some(2));
        }
        assert_eq!(mul(&factors[0], &factors[1], 3), f);
    }

    #[test]
    fn pow_mod_fermat() {
        // x^p = x mod (x^2 + 1) fails over F_3 (irreducible modulus, Frobenius moves x)
        let m = vec![1, 0, 1];
        let xp = pow_mod(&x_poly(), &BigUint::from(3u32), &m, 3);
        assert_eq!(xp, vec![0, 2]); // x^3 = -x mod x^2+1
        // and x^(p^2) = x
        let xp2 = pow_mod(&x_poly(), &BigUint::from(9u32), &m, 3);
        assert_eq!(xp2, vec![0, 1]);
    }
}
