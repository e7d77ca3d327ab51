//! Integer factorization: trial division up to `10^6`, then Brent's variant
//! of Pollard's rho with a fixed-seed generator so runs are reproducible.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const TRIAL_DIVISION_BOUND: u32 = 1_000_000;

const RNG_SEED: u64 = 0x7015_10a5;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let bound = TRIAL_DIVISION_BOUND as usize;
        let mut composite = vec![false; bound + 1];
        let mut out = Vec::new();
        for p in 2..=bound {
            if !composite[p] {
                out.push(p as u32);
                let mut q = p * p;
                while q <= bound {
                    composite[q] = true;
                    q += p;
                }
            }
        }
        out
    })
}

/// Complete factorization of `|x|` as sorted `(prime, multiplicity)` pairs.
/// `±1` factors as the empty product; zero is rejected.
pub fn factorize(x: &BigInt) -> Result<Vec<(BigUint, u32)>> {
    if x.is_zero() {
        return Err(Error::FactorZero);
    }
    let mut n = x.magnitude().clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for &p in small_primes() {
        if n.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > n {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = n.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    if !n.is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);
        let mut large = Vec::new();
        split_large(n, &mut rng, &mut large);
        large.sort();
        for p in large {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `n` has no prime factor below the trial-division bound.
fn split_large(n: BigUint, rng: &mut ChaCha8Rng, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    let bound = BigUint::from(TRIAL_DIVISION_BOUND);
    if n < &bound * &bound || is_probable_prime(&n, rng) {
        out.push(n);
        return;
    }
    let d = pollard_brent(&n, rng);
    let q = &n / &d;
    split_large(d, rng, out);
    split_large(q, rng, out);
}

/// Miller-Rabin with the first twelve prime bases (deterministic below
/// `3.3 · 10^24`) plus sixteen random bases above that.
pub fn is_probable_prime(n: &BigUint, rng: &mut ChaCha8Rng) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if *n == BigUint::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let witness = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if witness(&BigUint::from(p)) {
            return false;
        }
    }
    let deterministic_limit: BigUint = "3317044064679887385961981".parse().expect("literal");
    if *n >= deterministic_limit {
        for _ in 0..16 {
            let a = rng.gen_biguint_range(&two, &n_minus_1);
            if witness(&a) {
                return false;
            }
        }
    }
    true
}

/// A non-trivial divisor of the composite `n`.
fn pollard_brent(n: &BigUint, rng: &mut ChaCha8Rng) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let one = BigUint::one();
    loop {
        let c = rng.gen_biguint_range(&one, n);
        let y0 = rng.gen_biguint_range(&one, n);
        let step = |v: &BigUint| (v * v + &c) % n;
        let batch = 128u64;
        let (mut y, mut r, mut q) = (y0, 1u64, one.clone());
        let (mut x, mut ys);
        let mut g;
        loop {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            loop {
                ys = y.clone();
                for _ in 0..batch.min(r - k) {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += batch;
                if k >= r || !g.is_one() {
                    break;
                }
            }
            r *= 2;
            if !g.is_one() {
                break;
            }
        }
        if g == *n {
            // the batch overshot; redo it one step at a time
            loop {
                ys = step(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
    }
}

/// Largest prime in a factorization, if any.
pub fn max_prime(factors: &[(BigUint, u32)]) -> Option<&BigUint> {
    factors.iter().map(|(p, _)| p).max()
}

/// `p^e` list joined by `;`, e.g. `2^2;3^1`.
pub fn format_factors(factors: &[(BigUint, u32)]) -> String {
    factors
        .iter()
        .map(|(p, e)| format!("{p}^{e}"))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_factors(s: &str) -> std::result::Result<Vec<(BigUint, u32)>, String> {
    s.split(';')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (p, e) = t
                .split_once('^')
                .ok_or_else(|| format!("bad factor {t:?}"))?;
            Ok((
                p.parse().map_err(|_| format!("bad prime in {t:?}"))?,
                e.parse().map_err(|_| format!("bad exponent in {t:?}"))?,
            ))
        })
        .collect()
}

pub fn product_of(factors: &[(BigUint, u32)]) -> BigUint {
    factors
        .iter()
        .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
}

/// `u64` convenience for small inputs.
pub fn factorize_u64(x: u64) -> Result<Vec<(u64, u32)>> {
    Ok(factorize(&BigInt::from(x))?
        .into_iter()
        .map(|(p, e)| (p.to_u64().expect("factor of a u64"), e))
        .collect())
}
