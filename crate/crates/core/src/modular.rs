//! Small-integer modular helpers shared by the elimination and
//! exponential-sum code. Moduli here are tiny (they divide the root order),
//! so everything is done in `u64`.

use num_integer::Integer;

/// Reduces a signed integer into `[0, m)`.
pub fn reduce(x: i64, m: u64) -> u64 {
    x.rem_euclid(m as i64) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub fn neg_mod(a: u64, m: u64) -> u64 {
    (m - a % m) % m
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i64).extended_gcd(&(m as i64));
    if e.gcd != 1 {
        return None;
    }
    Some(reduce(e.x, m))
}

/// `p`-adic valuation of `a` in `Z/p^e`; zero has valuation `e`.
pub fn valuation(a: u64, p: u64, e: u32) -> u32 {
    let mut a = a % p.pow(e);
    if a == 0 {
        return e;
    }
    let mut v = 0;
    while a.is_multiple_of(p) {
        a /= p;
        v += 1;
    }
    v
}

/// Prime factorization by trial division, as `(p, e)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// One prime-power factor `q = p^e` of a modulus `m`, together with the CRT
/// multiplier `(m/q)^{-1} mod q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrtComponent {
    pub prime: u64,
    pub exponent: u32,
    pub modulus: u64,
    pub cofactor_inverse: u64,
}

pub fn crt_components(m: u64) -> Vec<CrtComponent> {
    factorize(m)
        .into_iter()
        .map(|(p, e)| {
            let q = p.pow(e);
            let cofactor = m / q;
            CrtComponent {
                prime: p,
                exponent: e,
                modulus: q,
                cofactor_inverse: inv_mod(cofactor % q, q).expect("coprime cofactor"),
            }
        })
        .collect()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
