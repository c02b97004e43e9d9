//! Rational-integer helpers: primality, small-scale factorization, p-adic
//! valuations and multiplicative orders.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const SMALL_PRIMES: [u64; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Trial division is run up to this bound before switching to Pollard rho.
const TRIAL_LIMIT: u64 = 20_000;

/// Iteration cap for a single Pollard-Brent attempt.
const RHO_ITERATIONS: u64 = 2_000_000;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES[..12] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0u32);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL_PRIMES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin on arbitrary integers. Deterministic below 2^64 and for the
/// first twenty prime bases beyond that (no known counterexample at the
/// sizes this crate sees).
pub fn is_prime_big(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let n = n.magnitude();
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exponent of the prime `p` in `n`; `n` must be nonzero.
pub fn valuation_int(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Removes every factor of `p` from `n`, returning the exponent removed.
pub(crate) fn strip_prime(n: &mut BigInt, p: u64) -> u32 {
    let pb = BigInt::from(p);
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() || n.is_zero() {
            return v;
        }
        *n = q;
        v += 1;
    }
}

/// Order of `a` in the quotient group (Z/rZ)^* / {±1}.
pub fn order_mod_plus_minus(a: u64, r: u64) -> u64 {
    let a = a % r;
    assert!(a != 0, "a must be invertible mod r");
    let mut x = a;
    let mut k = 1;
    while x != 1 && x != r - 1 {
        x = mul_mod(x, a, r);
        k += 1;
    }
    k
}

/// Primes `p` with `lo <= p <= hi`, ascending.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime_u64(n)).collect()
}

/// Prime factorization of a nonzero integer. Anything that trial division
/// and the Pollard-Brent budget could not split is reported as
/// `unfactored` instead of being guessed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub negative: bool,
    pub factors: Vec<(BigInt, u32)>,
    pub unfactored: Vec<BigInt>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }
}

pub fn factor_integer(n: &BigInt) -> Factorization {
    assert!(!n.is_zero(), "cannot factor zero");
    let negative = n.is_negative();
    let mut rest = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut unfactored = Vec::new();

    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let e = strip_prime(&mut rest, p);
        if e > 0 {
            factors.push((pb, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }

    let mut stack = Vec::new();
    if !rest.is_one() {
        stack.push(rest);
    }
    let mut found: Vec<BigInt> = Vec::new();
    while let Some(m) = stack.pop() {
        if is_prime_big(&m) {
            found.push(m);
            continue;
        }
        match pollard_brent(&m) {
            Some(d) => {
                let other = &m / &d;
                stack.push(d);
                stack.push(other);
            }
            None => unfactored.push(m),
        }
    }
    found.sort();
    for q in found {
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    factors.sort();
    unfactored.sort();
    Factorization {
        negative,
        factors,
        unfactored,
    }
}

fn pollard_brent(n: &BigInt) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    for c in 1u64..20 {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut g = BigInt::one();
        let mut q = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut r: u64 = 1;
        let m: u64 = 64;
        let mut spent = 0u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            spent += r;
            if spent > RHO_ITERATIONS {
                break;
            }
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}
