//! Irreducibility certificate for univariate polynomials over Q.
//!
//! First a modular degree sieve: for several good primes the distinct-degree
//! factorization mod p bounds the possible degrees of a rational factor. If
//! the sieve leaves no proper degree, the polynomial is irreducible. Whatever
//! degrees survive are settled by Kronecker's interpolation search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::upoly;
use crate::error::{Error, Result};

const SIEVE_PRIMES: usize = 24;
const KRONECKER_LIMIT: u64 = 2_000_000;

/// Decide irreducibility over Q of a polynomial of degree >= 1.
pub fn is_irreducible(poly: &[BigRational]) -> Result<bool> {
    let ints = primitive_integer(poly);
    let deg = ints.len() - 1;
    if deg <= 1 {
        return Ok(deg == 1);
    }
    let rat: Vec<BigRational> = ints.iter().cloned().map(BigRational::from_integer).collect();
    if upoly::degree(&upoly::gcd(&rat, &upoly::derivative(&rat))).unwrap_or(0) > 0 {
        return Ok(false);
    }

    // possible[d] stays true while a factor of degree d is not ruled out
    let mut possible = vec![true; deg + 1];
    let mut used = 0;
    for p in small_primes().filter(|&p| p > 2) {
        if used == SIEVE_PRIMES {
            break;
        }
        let Some(fp) = reduce_mod(&ints, p) else { continue };
        if fp.len() != ints.len() || !squarefree_mod(&fp, p) {
            continue;
        }
        used += 1;
        let degs = distinct_degree(&fp, p);
        let sums = subset_sums(&degs, deg);
        for (d, flag) in possible.iter_mut().enumerate() {
            *flag &= sums[d];
        }
        if (1..deg).all(|d| !possible[d]) {
            return Ok(true);
        }
    }

    for d in 1..=deg / 2 {
        if possible[d] && kronecker_factor(&ints, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn primitive_integer(poly: &[BigRational]) -> Vec<BigInt> {
    let mut p = poly.to_vec();
    upoly::trim(&mut p);
    let lcm = p
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &content).collect()
}

fn small_primes() -> impl Iterator<Item = u64> {
    (2u64..2000).filter(|n| (2..*n).take_while(|d| d * d <= *n).all(|d| n % d != 0))
}

fn reduce_mod(ints: &[BigInt], p: u64) -> Option<Vec<u64>> {
    let modulus = BigInt::from(p);
    let out: Vec<u64> = ints
        .iter()
        .map(|c| c.mod_floor(&modulus).to_u64().unwrap())
        .collect();
    if *out.last().unwrap() == 0 {
        return None;
    }
    Some(out)
}

fn trim_p(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_p(a: u64, p: u64) -> u64 {
    pow_p(a, p - 2, p)
}

fn pow_p(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn rem_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    divrem_p(a, b, p).1
}

fn divrem_p(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim_p(&mut r);
    let db = b.len() - 1;
    let inv = inv_p(b[db], p);
    let mut q = vec![0u64; r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr] * inv % p;
        let shift = dr - db;
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] = (r[shift + k] + p - c * bk % p) % p;
        }
        q[shift] = c;
        trim_p(&mut r);
    }
    trim_p(&mut q);
    (q, r)
}

fn mul_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim_p(&mut out);
    out
}

fn gcd_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim_p(&mut x);
    trim_p(&mut y);
    while !y.is_empty() {
        let r = rem_p(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn squarefree_mod(f: &[u64], p: u64) -> bool {
    let mut df: Vec<u64> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| (k as u64 % p) * c % p)
        .collect();
    trim_p(&mut df);
    if df.is_empty() {
        return false;
    }
    gcd_p(f, &df, p).len() == 1
}

/// Degrees (with multiplicity) of the irreducible factors of a squarefree
/// polynomial over F_p.
fn distinct_degree(f: &[u64], p: u64) -> Vec<usize> {
    let mut f = f.to_vec();
    let mut h = vec![0u64, 1];
    let mut degs = Vec::new();
    let mut d = 0usize;
    while f.len() > 2 * (d + 1) {
        d += 1;
        // h <- h^p mod f
        let mut acc = vec![1u64];
        let mut base = rem_p(&h, &f, p);
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = rem_p(&mul_p(&acc, &base, p), &f, p);
            }
            base = rem_p(&mul_p(&base, &base, p), &f, p);
            e >>= 1;
        }
        h = acc;
        let mut hx = h.clone();
        hx.resize(hx.len().max(2), 0);
        hx[1] = (hx[1] + p - 1) % p;
        trim_p(&mut hx);
        let g = gcd_p(&f, &hx, p);
        if g.len() > 1 {
            for _ in 0..(g.len() - 1) / d {
                degs.push(d);
            }
            f = divrem_p(&f, &g, p).0;
            h = rem_p(&h, &f, p);
        }
    }
    if f.len() > 1 {
        degs.push(f.len() - 1);
    }
    degs
}

fn subset_sums(degs: &[usize], max: usize) -> Vec<bool> {
    let mut reach = vec![false; max + 1];
    reach[0] = true;
    for &d in degs {
        for s in (d..=max).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

fn eval_int(ints: &[BigInt], x: i64) -> BigInt {
    let x = BigInt::from(x);
    ints.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
}

fn positive_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut m = n
        .abs()
        .to_u128()
        .ok_or_else(|| Error::InvalidField("coefficients too large to certify irreducibility".into()))?;
    let mut primes: Vec<(u128, u32)> = Vec::new();
    let mut d = 2u128;
    while d * d <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            primes.push((d, e));
        }
        d += 1;
        if d > 10_000_000 {
            return Err(Error::InvalidField("cannot factor evaluation value".into()));
        }
    }
    if m > 1 {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for base in &divs {
            let mut pw = BigInt::one();
            for _ in 0..=e {
                next.push(base * &pw);
                pw *= BigInt::from(p);
            }
        }
        divs = next;
    }
    Ok(divs)
}

/// Search for an integer factor of exact degree `d`.
fn kronecker_factor(ints: &[BigInt], d: usize) -> Result<bool> {
    // candidate evaluation points, preferring small values
    let mut points: Vec<(i64, BigInt)> = (0..(4 * d as i64 + 8))
        .map(|k| if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 })
        .map(|x| (x, eval_int(ints, x)))
        .collect();
    if points.iter().any(|(_, v)| v.is_zero()) {
        // an integer root gives a linear factor
        return Ok(true);
    }
    points.sort_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(a.0.cmp(&b.0)));
    points.truncate(d + 1);

    let mut choices: Vec<Vec<BigInt>> = Vec::new();
    let mut total: u64 = 1;
    for (i, (_, v)) in points.iter().enumerate() {
        let pos = positive_divisors(v)?;
        let mut all: Vec<BigInt> = pos.clone();
        // fix the sign of the first value: g and -g are the same factor
        if i > 0 {
            all.extend(pos.iter().map(|x| -x));
        }
        total = total.saturating_mul(all.len() as u64);
        choices.push(all);
    }
    if total > KRONECKER_LIMIT {
        return Err(Error::InvalidField(
            "irreducibility search space too large".into(),
        ));
    }

    let xs: Vec<BigRational> = points
        .iter()
        .map(|(x, _)| BigRational::from_integer((*x).into()))
        .collect();
    let target: Vec<BigRational> = ints.iter().cloned().map(BigRational::from_integer).collect();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let ys: Vec<BigRational> = idx
            .iter()
            .zip(&choices)
            .map(|(&k, c)| BigRational::from_integer(c[k].clone()))
            .collect();
        let g = interpolate(&xs, &ys);
        if upoly::degree(&g) == Some(d) && g.iter().all(|c| c.is_integer()) {
            let (_, r) = upoly::divrem(&target, &g);
            if r.is_empty() {
                return Ok(true);
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(false);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::new();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = upoly::mul(&basis, &[-xj.clone(), BigRational::one()]);
                denom *= xi - xj;
            }
        }
        out = upoly::add(&out, &upoly::scale(&basis, &(yi / denom)));
    }
    out
}
