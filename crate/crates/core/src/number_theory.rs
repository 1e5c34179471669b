//! Hypothesis arithmetic for the non-surjectivity criteria: Legendre
//! symbols, multiplicative orders, inertia degrees, and applicability
//! reports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic primality by trial division. Intended for desk-scale
/// inputs; exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// `base^exp mod modulus` with 128-bit intermediates.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    assert!(modulus > 0);
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut base = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = ((result as u128 * base as u128) % modulus as u128) as u64;
        }
        exp >>= 1;
        base = ((base as u128 * base as u128) % modulus as u128) as u64;
    }
    result
}

/// Legendre symbol `(a/p)` by the Euler criterion `a^((p-1)/2) mod p`.
pub fn legendre(a: i64, p: u64) -> Result<i32> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return Ok(0);
    }
    let e = mod_pow(a, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

/// Inertia degree of `p` in the real cyclotomic field of conductor `ell`:
/// the smallest `m >= 1` with `p^m = +-1 mod ell`.
pub fn inertia_degree_real(p: u64, ell: u64) -> Result<u64> {
    check_order_inputs(p, ell)?;
    let mut power = 1u64;
    for m in 1..ell {
        power = ((power as u128 * p as u128) % ell as u128) as u64;
        if power == 1 || power == ell - 1 {
            return Ok(m);
        }
    }
    Err(Error::Internal(format!(
        "no power of {p} reached +-1 mod {ell}"
    )))
}

/// The smallest `m >= 1` with `p^(2m) = 1 mod ell`. Equals
/// [`inertia_degree_real`] on every valid input; both are exposed so the
/// identity can be tested rather than assumed.
pub fn corollary_m(p: u64, ell: u64) -> Result<u64> {
    check_order_inputs(p, ell)?;
    let p2 = ((p as u128 * p as u128) % ell as u128) as u64;
    let mut power = 1u64;
    for m in 1..ell {
        power = ((power as u128 * p2 as u128) % ell as u128) as u64;
        if power == 1 {
            return Ok(m);
        }
    }
    Err(Error::Internal(format!(
        "no power of {p}^2 reached 1 mod {ell}"
    )))
}

fn check_order_inputs(p: u64, ell: u64) -> Result<()> {
    if !is_prime(p) || !is_prime(ell) || ell == 2 {
        return Err(Error::InvalidInput(format!(
            "need primes p and odd ell, got p = {p}, ell = {ell}"
        )));
    }
    if p == ell {
        return Err(Error::InvalidInput(format!(
            "p = ell = {p} is ramified; inertia degree undefined"
        )));
    }
    Ok(())
}

/// Which statement's hypotheses a report checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Theorem,
    Corollary,
}

/// The checked hypotheses for the word `x1^2 [x1^-2, x2^-1]^k` over
/// `F_(p^n)`, with one boolean per condition and the final verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApplicabilityReport {
    pub k: u64,
    pub p: u64,
    pub n: Option<u64>,
    pub ell: u64,
    pub ell_prime: bool,
    pub p_ne_ell: bool,
    pub legendre_2_p: i32,
    /// Inertia degree of `p`; absent when `ell` is composite.
    pub m: Option<u64>,
    pub m_gt_1: bool,
    pub n_odd: Option<bool>,
    pub m_divides_n: Option<bool>,
    pub applicable: bool,
    pub route: Route,
}

/// Checks every hypothesis of the non-surjectivity criterion for
/// `(k, p, n)`: `2k+1` prime, `p != 2k+1`, `(2/p) = -1`, inertia degree
/// `m > 1`, `n` odd and not divisible by `m`.
pub fn theorem_conditions(k: u64, p: u64, n: u64) -> Result<ApplicabilityReport> {
    validate_kp(k, p)?;
    if n < 1 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    let ell = 2 * k + 1;
    let ell_prime = is_prime(ell);
    let legendre_2_p = legendre(2, p)?;
    let m = if ell_prime {
        Some(inertia_degree_real(p, ell)?)
    } else {
        None
    };
    let m_gt_1 = m.map_or(false, |m| m > 1);
    let n_odd = n % 2 == 1;
    let m_divides_n = m.map_or(false, |m| n % m == 0);
    let applicable =
        ell_prime && legendre_2_p == -1 && m_gt_1 && n_odd && !m_divides_n;
    Ok(ApplicabilityReport {
        k,
        p,
        n: Some(n),
        ell,
        ell_prime,
        p_ne_ell: true,
        legendre_2_p,
        m,
        m_gt_1,
        n_odd: Some(n_odd),
        m_divides_n: Some(m_divides_n),
        applicable,
        route: Route::Theorem,
    })
}

/// Checks the corollary form of the hypotheses: `p^2 != 1 mod 16` and
/// `p^2 != 1 mod (2k+1)`, which are equivalent to `(2/p) = -1` and
/// `m > 1`. Applicability here implies theorem applicability for every
/// odd `n` not divisible by `m`.
pub fn corollary_conditions(k: u64, p: u64) -> Result<ApplicabilityReport> {
    validate_kp(k, p)?;
    let ell = 2 * k + 1;
    let ell_prime = is_prime(ell);
    let p2 = p as u128 * p as u128;
    let cond_16 = p2 % 16 != 1;
    let cond_ell = p2 % ell as u128 != 1;
    let legendre_2_p = legendre(2, p)?;
    let m = if ell_prime {
        Some(corollary_m(p, ell)?)
    } else {
        None
    };
    let applicable = ell_prime && cond_16 && cond_ell;
    Ok(ApplicabilityReport {
        k,
        p,
        n: None,
        ell,
        ell_prime,
        p_ne_ell: true,
        legendre_2_p,
        m,
        m_gt_1: m.map_or(false, |m| m > 1),
        n_odd: None,
        m_divides_n: None,
        applicable,
        route: Route::Corollary,
    })
}

fn validate_kp(k: u64, p: u64) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("k must be >= 2, got {k}")));
    }
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    if p == 2 * k + 1 {
        return Err(Error::InvalidInput(format!(
            "p = 2k+1 = {p} is excluded (ramified)"
        )));
    }
    Ok(())
}

/// Ascending list of odd primes `p <= bound` satisfying the corollary
/// conditions for `k`.
pub fn find_primes(k: u64, bound: u64) -> Result<Vec<u64>> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("k must be >= 2, got {k}")));
    }
    const MAX_BOUND: u64 = 10_000_000;
    if bound > MAX_BOUND {
        return Err(Error::BudgetExceeded {
            required: bound as u128,
            budget: MAX_BOUND,
        });
    }
    let ell = 2 * k + 1;
    if !is_prime(ell) {
        return Err(Error::InvalidInput(format!("2k+1 = {ell} is composite")));
    }
    Ok(sieve(bound)
        .into_iter()
        .filter(|&p| {
            let p2 = p as u128 * p as u128;
            p > 2 && p != ell && p2 % 16 != 1 && p2 % ell as u128 != 1
        })
        .collect())
}

/// Primes up to `bound`, ascending, by the sieve of Eratosthenes.
fn sieve(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_basics() {
        let known = [2u64, 3, 5, 7, 11, 13, 65521];
        for p in known {
            assert!(is_prime(p), "{p}");
        }
        for n in [0u64, 1, 4, 9, 15, 65517, 10_000_000] {
            assert!(!is_prime(n), "{n}");
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(2, 3).unwrap(), -1);
        assert_eq!(legendre(2, 7).unwrap(), 1);
        assert_eq!(legendre(13, 13).unwrap(), 0);
        assert!(legendre(2, 2).is_err());
        assert!(legendre(2, 15).is_err());
    }

    #[test]
    fn legendre_agrees_with_square_enumeration() {
        for p in sieve(200).into_iter().filter(|&p| p > 2) {
            let mut squares = vec![false; p as usize];
            for b in 0..p {
                squares[(b * b % p) as usize] = true;
            }
            for a in 0..p {
                let expected = if a == 0 {
                    0
                } else if squares[a as usize] {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(a as i64, p).unwrap(), expected, "({a}/{p})");
            }
        }
    }

    #[test]
    fn inertia_degree_examples() {
        assert_eq!(inertia_degree_real(3, 5).unwrap(), 2);
        assert_eq!(inertia_degree_real(19, 5).unwrap(), 1);
        assert_eq!(inertia_degree_real(11, 5).unwrap(), 1);
        assert!(inertia_degree_real(5, 5).is_err());
    }

    #[test]
    fn corollary_m_examples_and_identity() {
        assert_eq!(corollary_m(3, 5).unwrap(), 2);
        assert_eq!(corollary_m(19, 5).unwrap(), 1);
        for p in sieve(200) {
            for ell in sieve(200).into_iter().filter(|&l| l > 2 && l != p) {
                assert_eq!(
                    corollary_m(p, ell).unwrap(),
                    inertia_degree_real(p, ell).unwrap(),
                    "p = {p}, ell = {ell}"
                );
            }
        }
    }

    #[test]
    fn legendre_two_iff_sixteen_condition() {
        // (2/p) = -1 iff p^2 != 1 mod 16, for all odd primes below 10^4
        for p in sieve(10_000).into_iter().filter(|&p| p > 2) {
            let lhs = legendre(2, p).unwrap() == -1;
            let rhs = (p as u128 * p as u128) % 16 != 1;
            assert_eq!(lhs, rhs, "p = {p}");
        }
    }

    #[test]
    fn theorem_condition_examples() {
        let r = theorem_conditions(2, 3, 1).unwrap();
        assert!(r.applicable);
        assert_eq!(r.m, Some(2));

        let r = theorem_conditions(2, 3, 2).unwrap();
        assert!(!r.applicable);
        assert_eq!(r.n_odd, Some(false));

        let r = theorem_conditions(2, 7, 1).unwrap();
        assert!(!r.applicable);
        assert_eq!(r.legendre_2_p, 1);

        assert!(theorem_conditions(2, 5, 1).is_err()); // p = 2k+1
        assert!(theorem_conditions(1, 3, 1).is_err()); // k < 2
        assert!(theorem_conditions(2, 3, 0).is_err());
        assert!(theorem_conditions(2, 2, 1).is_err());
    }

    #[test]
    fn theorem_report_invariant() {
        for k in 2..=8 {
            for p in sieve(60).into_iter().filter(|&p| p > 2 && p != 2 * k + 1) {
                for n in 1..=6 {
                    let r = theorem_conditions(k, p, n).unwrap();
                    let expected = r.ell_prime
                        && r.p_ne_ell
                        && r.legendre_2_p == -1
                        && r.m_gt_1
                        && r.n_odd.unwrap()
                        && !r.m_divides_n.unwrap();
                    assert_eq!(r.applicable, expected, "k={k} p={p} n={n}");
                }
            }
        }
    }

    #[test]
    fn corollary_condition_examples() {
        let r = corollary_conditions(2, 3).unwrap();
        assert!(r.applicable);
        assert_eq!(r.m, Some(2));

        assert!(!corollary_conditions(2, 11).unwrap().applicable);
        assert!(!corollary_conditions(2, 17).unwrap().applicable);
        assert!(corollary_conditions(2, 5).is_err()); // p = 2k+1
    }

    #[test]
    fn corollary_applicability_implies_theorem_applicability() {
        for k in 2..=6u64 {
            if !is_prime(2 * k + 1) {
                continue;
            }
            for p in sieve(100).into_iter().filter(|&p| p > 2 && p != 2 * k + 1) {
                let cor = corollary_conditions(k, p).unwrap();
                if !cor.applicable {
                    continue;
                }
                let m = cor.m.unwrap();
                for n in (1..=9u64).filter(|n| n % 2 == 1 && n % m != 0) {
                    let thm = theorem_conditions(k, p, n).unwrap();
                    assert!(thm.applicable, "k={k} p={p} n={n}");
                    assert_eq!(thm.m, cor.m);
                }
            }
        }
    }

    #[test]
    fn find_primes_small() {
        assert_eq!(find_primes(2, 10).unwrap(), vec![3]);
        assert_eq!(find_primes(3, 20).unwrap(), vec![3, 5, 11, 19]);
        assert!(find_primes(2, 20_000_000).is_err());
        assert!(find_primes(4, 100).is_err()); // 9 composite
    }

    #[test]
    fn find_primes_matches_independent_script() {
        // independent brute force: trial-division primality plus the raw
        // modular conditions, no shared code with find_primes
        let mut expected = Vec::new();
        for p in (3..=100u64).step_by(2) {
            let mut prime = true;
            for d in 2..p {
                if p % d == 0 {
                    prime = false;
                    break;
                }
            }
            if prime && p != 5 && (p * p) % 16 != 1 && (p * p) % 5 != 1 {
                expected.push(p);
            }
        }
        assert_eq!(expected, vec![3, 13, 37, 43, 53, 67, 83]);
        assert_eq!(find_primes(2, 100).unwrap(), expected);
    }

    #[test]
    fn report_serialization_is_stable() {
        let r = theorem_conditions(2, 3, 1).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: ApplicabilityReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(json.contains("\"route\":\"theorem\""));
    }
}
