//! Primality testing and integer factorization.
//!
//! Inputs that fit in 64 bits get a deterministic Miller-Rabin test. Larger
//! inputs run a fixed set of bases and are reported as probable primes.
//! Factorization is trial division followed by Pollard rho with Brent's
//! cycle detection for whatever cofactor is left.

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ArithError;

/// Bases that make Miller-Rabin deterministic below 2^64.
const MR_BASES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Extra bases for inputs beyond 64 bits.
const MR_BASES_BIG: [u64; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

const TRIAL_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primality {
    Composite,
    /// Proven prime (deterministic range).
    Prime,
    /// Passed every fixed base; only possible above 2^64.
    ProbablePrime,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

/// Classifies `|n|`.
pub fn primality(n: &BigInt) -> Primality {
    let n = n.abs();
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    for p in MR_BASES_BIG {
        if (&n % p).is_zero() {
            return Primality::Composite;
        }
    }
    if MR_BASES_BIG
        .iter()
        .all(|&a| miller_rabin_big(&n, &BigInt::from(a)))
    {
        Primality::ProbablePrime
    } else {
        Primality::Composite
    }
}

/// True iff `|n|` is prime (or a probable prime above 2^64).
pub fn is_prime(n: &BigInt) -> bool {
    primality(n).is_prime()
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_64 {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let (d, s) = split_pow2(n - 1);
    'witness: for &a in &MR_BASES_64 {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn split_pow2(mut d: u64) -> (u64, u32) {
    let s = d.trailing_zeros();
    d >>= s;
    (d, s)
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_big(n: &BigInt, a: &BigInt) -> bool {
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Prime factorization `sign * prod(p^e)` with primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: Sign,
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> BigInt {
        let magnitude = self
            .factors
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize));
        match self.sign {
            Sign::Minus => -magnitude,
            _ => magnitude,
        }
    }

    /// All positive divisors, unordered.
    pub fn divisors(&self) -> Vec<BigInt> {
        let mut divisors = vec![BigInt::one()];
        for (p, e) in &self.factors {
            let mut next = Vec::with_capacity(divisors.len() * (*e as usize + 1));
            for d in &divisors {
                let mut power = d.clone();
                next.push(power.clone());
                for _ in 0..*e {
                    power *= p;
                    next.push(power.clone());
                }
            }
            divisors = next;
        }
        divisors
    }
}

pub fn factorize(n: &BigInt) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroInput("factorize"));
    }
    let sign = if n.is_negative() { Sign::Minus } else { Sign::Plus };
    let mut rest = n.abs();
    let mut primes: Vec<BigInt> = Vec::new();

    let mut p = 2u64;
    let mut changed = true;
    while p <= TRIAL_LIMIT && !rest.is_one() {
        if let Some(small) = rest.to_u64() {
            let (left, found) = trial_divide_u64(small, p);
            primes.extend(found.into_iter().map(BigInt::from));
            rest = BigInt::from(left);
            break;
        }
        if changed && is_prime(&rest) {
            break;
        }
        changed = false;
        while (&rest % p).is_zero() {
            rest /= p;
            primes.push(BigInt::from(p));
            changed = true;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        split_large(rest, &mut primes);
    }

    primes.sort();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { sign, factors })
}

/// Trial division of a 64-bit value starting at `start`. Returns the
/// unfactored cofactor (1, a prime, or a product of primes above the limit).
fn trial_divide_u64(mut n: u64, start: u64) -> (u64, Vec<u64>) {
    let mut found = Vec::new();
    let mut p = start;
    let mut changed = true;
    while n > 1 && p <= TRIAL_LIMIT && p.saturating_mul(p) <= n {
        if changed && is_prime_u64(n) {
            break;
        }
        changed = false;
        while n % p == 0 {
            n /= p;
            found.push(p);
            changed = true;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 && (p.saturating_mul(p) > n || is_prime_u64(n)) {
        found.push(n);
        n = 1;
    }
    (n, found)
}

fn split_large(n: BigInt, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    if let Some(r) = exact_square_root(&n) {
        split_large(r.clone(), out);
        split_large(r, out);
        return;
    }
    let mut c = 1u64;
    loop {
        if let Some(d) = pollard_brent(&n, &BigInt::from(c)) {
            split_large(d.clone(), out);
            split_large(n / d, out);
            return;
        }
        c += 1;
    }
}

fn exact_square_root(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// One Brent run of Pollard rho with polynomial `x^2 + c`. Returns a proper
/// divisor, or `None` if this `c` degenerated.
fn pollard_brent(n: &BigInt, c: &BigInt) -> Option<BigInt> {
    let f = |x: &BigInt| (x * x + c) % n;
    let batch = 128u64;
    let mut y = BigInt::from(2u32);
    let mut r = 1u64;
    let mut q = BigInt::one();
    let mut g = BigInt::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..batch.min(r - k) {
                y = f(&y);
                q = (q * (&x - &y).abs()) % n;
            }
            g = q.gcd(n);
            k += batch;
        }
        r *= 2;
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
    (g != *n).then_some(g)
}
