//! Dense polynomials over a prime field F_p and their factorization.
//!
//! Factorization runs the classical pipeline: squarefree decomposition,
//! distinct-degree splitting, then Cantor-Zassenhaus equal-degree splitting.
//! The random choices in the last step come from a fixed-seed ChaCha stream
//! and the output is sorted, so the result is a pure function of the input.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::integer::{is_prime_u64, mul_mod, pow_mod};
use super::int_poly::write_poly;
use crate::error::{Error, Result};

const FACTOR_SEED: u64 = 0x6379_636c_6f66_6d74;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        assert!(p >= 2, "modulus must be at least 2");
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    /// Builds from signed coefficients, reducing each into `[0, p)`.
    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        let pi = p as i128;
        Self::new(
            p,
            coeffs
                .iter()
                .map(|&c| (c as i128).rem_euclid(pi) as u64)
                .collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Lift to Z with coefficients in `[0, p)`.
    pub fn lift(&self) -> super::IntPoly {
        super::IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        pow_mod(a, self.p - 2, self.p)
    }

    fn check(&self, other: &ModPoly) {
        assert_eq!(self.p, other.p, "polynomials over different prime fields");
    }

    pub fn add(&self, other: &ModPoly) -> ModPoly {
        self.check(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                ((a as u128 + b as u128) % self.p as u128) as u64
            })
            .collect();
        ModPoly::new(self.p, c)
    }

    pub fn neg(&self) -> ModPoly {
        let p = self.p;
        ModPoly::new(p, self.coeffs.iter().map(|&c| (p - c) % p).collect())
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: u64) -> ModPoly {
        let p = self.p;
        ModPoly::new(p, self.coeffs.iter().map(|&c| mul_mod(c, k % p, p)).collect())
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(self.p);
        }
        let p = self.p as u128;
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % p;
            }
        }
        ModPoly::new(self.p, out.into_iter().map(|c| c as u64).collect())
    }

    /// Scales to leading coefficient 1. The zero polynomial is returned as is.
    pub fn monic(&self) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.inv(self.leading()))
    }

    pub fn divmod(&self, divisor: &ModPoly) -> Result<(ModPoly, ModPoly)> {
        self.check(divisor);
        let dd = divisor.degree().ok_or(Error::ZeroDivisor)?;
        let p = self.p;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((ModPoly::zero(p), self.clone()));
        }
        let lead_inv = self.inv(divisor.leading());
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = mul_mod(rem[i], lead_inv, p);
            rem[i] = 0;
            if c == 0 {
                continue;
            }
            for (k, &dk) in divisor.coeffs[..dd].iter().enumerate() {
                let t = mul_mod(c, dk, p);
                rem[i - dd + k] = (rem[i - dd + k] + p - t) % p;
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        Ok((ModPoly::new(p, quot), ModPoly::new(p, rem)))
    }

    pub fn rem(&self, divisor: &ModPoly) -> Result<ModPoly> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Exact quotient; panics in debug builds if the division leaves a remainder.
    fn div_exact(&self, divisor: &ModPoly) -> ModPoly {
        let (q, r) = self.divmod(divisor).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        self.check(other);
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> ModPoly {
        let p = self.p;
        ModPoly::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
        )
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &ModPoly) -> ModPoly {
        let mut acc = ModPoly::one(self.p).rem(modulus).expect("nonzero modulus");
        let base = self.rem(modulus).expect("nonzero modulus");
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc).rem(modulus).expect("nonzero modulus");
            if exp.bit(i) {
                acc = acc.mul(&base).rem(modulus).expect("nonzero modulus");
            }
        }
        acc
    }

    /// Rabin's test: `f` of degree n is irreducible iff `x^(p^n) = x mod f`
    /// and `gcd(x^(p^(n/q)) - x, f) = 1` for every prime `q | n`.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let x = ModPoly::x(self.p);
        let pb = BigUint::from(self.p);
        let frob_iter = |k: usize| {
            let mut h = x.rem(&f).unwrap();
            for _ in 0..k {
                h = h.pow_mod(&pb, &f);
            }
            h
        };
        for q in (2..=n).filter(|&q| n % q == 0 && is_prime_u64(q as u64)) {
            let h = frob_iter(n / q);
            if !h.sub(&x).gcd(&f).is_one() {
                return false;
            }
        }
        frob_iter(n).sub(&x).rem(&f).unwrap().is_zero()
    }

    /// Inverse of the Frobenius on coefficients: requires every exponent with
    /// a nonzero coefficient to be a multiple of p.
    fn pth_root(&self) -> ModPoly {
        let p = self.p as usize;
        ModPoly::new(
            self.p,
            self.coeffs.iter().step_by(p).copied().collect(),
        )
    }
}

/// Canonical order of factors: degree, then coefficients from the constant
/// term upward.
pub fn canonical_cmp(a: &ModPoly, b: &ModPoly) -> Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.cmp(&b.coeffs))
}

/// Factors `f` into monic irreducibles with multiplicities. The product of
/// the factors equals `f` up to the scalar `f.leading()`.
pub fn factor_mod_p(f: &ModPoly) -> Result<Vec<(ModPoly, u32)>> {
    if !is_prime_u64(f.p) {
        return Err(Error::NotPrime(f.p.to_string()));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED ^ f.p ^ ((f.coeffs.len() as u64) << 48));
    let mut out: Vec<(ModPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&f.monic()) {
        for (block, k) in distinct_degree(&part) {
            for g in equal_degree(&block, k, &mut rng) {
                match out.iter_mut().find(|(h, _)| *h == g) {
                    Some((_, m)) => *m += mult,
                    None => out.push((g, mult)),
                }
            }
        }
    }
    out.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
    debug_assert!(out.iter().all(|(g, _)| g.is_irreducible()));
    Ok(out)
}

/// Squarefree decomposition of a monic polynomial over F_p, as pairwise
/// coprime squarefree parts with their multiplicities.
fn squarefree_decomposition(f: &ModPoly) -> Vec<(ModPoly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        for (g, m) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let part = w.div_exact(&y);
        if !part.is_one() {
            out.push((part, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        for (g, m) in squarefree_decomposition(&c.pth_root()) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of
/// equal degree: returns (product, common degree).
fn distinct_degree(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.p;
    let pb = BigUint::from(p);
    let x = ModPoly::x(p);
    let mut rest = f.clone();
    let mut h = x.rem(&rest).unwrap();
    let mut out = Vec::new();
    let mut i = 0;
    while rest.degree().unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = h.pow_mod(&pb, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest).unwrap();
            out.push((g, i));
        }
    }
    if let Some(d) = rest.degree() {
        if d > 0 {
            out.push((rest, d));
        }
    }
    out
}

fn equal_degree(f: &ModPoly, k: usize, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let n = f.degree().expect("nonzero");
    if n == k {
        return vec![f.clone()];
    }
    let p = f.p;
    let exponent = (BigUint::from(p).pow(k as u32) - BigUint::one()) >> 1;
    loop {
        let a = ModPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..k {
                t = t.mul(&t).rem(f).unwrap();
                s = s.add(&t);
            }
            s
        } else {
            a.pow_mod(&exponent, f).sub(&ModPoly::one(p))
        };
        let g = b.gcd(f);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut parts = equal_degree(&g, k, rng);
            parts.extend(equal_degree(&f.div_exact(&g), k, rng));
            return parts;
        }
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<BigInt> = self.coeffs.iter().map(|&c| BigInt::from(c)).collect();
        write_poly(f, coeffs, "x")?;
        write!(f, " (mod {})", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(p: u64, c: &[i64]) -> ModPoly {
        ModPoly::from_i64(p, c)
    }

    #[test]
    fn gcd_shared_root() {
        assert_eq!(mp(3, &[-1, 0, 1]).gcd(&mp(3, &[-1, 1])), mp(3, &[-1, 1]));
    }

    #[test]
    fn golden_poly_inert_at_two() {
        let f = factor_mod_p(&mp(2, &[-1, 1, 1])).unwrap();
        assert_eq!(f, vec![(mp(2, &[1, 1, 1]), 1)]);
    }

    #[test]
    fn golden_poly_ramified_at_five() {
        let f = factor_mod_p(&mp(5, &[-1, 1, 1])).unwrap();
        assert_eq!(f, vec![(mp(5, &[3, 1]), 2)]);
    }

    #[test]
    fn split_quadratic_sorted() {
        let f = factor_mod_p(&mp(3, &[-1, 0, 1])).unwrap();
        assert_eq!(f, vec![(mp(3, &[1, 1]), 1), (mp(3, &[2, 1]), 1)]);
    }

    #[test]
    fn composite_modulus_rejected() {
        let f = ModPoly::new(6, vec![1, 1]);
        assert_eq!(factor_mod_p(&f).unwrap_err(), Error::NotPrime("6".into()));
    }

    #[test]
    fn pth_power_input() {
        // (x^2 + 1)^3 over F_3 has zero derivative.
        let base = mp(3, &[1, 0, 1]);
        let f = base.mul(&base).mul(&base);
        assert_eq!(factor_mod_p(&f).unwrap(), vec![(base, 3)]);
    }

    #[test]
    fn large_prime_modulus() {
        let p = 1_000_000_007;
        let f = mp(p, &[-2, 0, 1]).mul(&mp(p, &[5, 1]));
        let fac = factor_mod_p(&f).unwrap();
        let prod = fac
            .iter()
            .fold(ModPoly::one(p), |acc, (g, m)| (0..*m).fold(acc, |a, _| a.mul(g)));
        assert_eq!(prod, f);
    }

    #[test]
    fn rabin_test() {
        assert!(mp(2, &[1, 1, 0, 0, 1]).is_irreducible());
        assert!(!mp(2, &[1, 0, 0, 0, 1]).is_irreducible());
        assert!(mp(7, &[1, 0, 1]).is_irreducible());
        assert!(!mp(7, &[3, 0, 1]).is_irreducible());
    }
}
