//! Exact arithmetic in `Z[ζ]` for `ζ` a primitive `2N`-th root of unity,
//! and scalars of the form `c · N^(-e/2)` built on top of it.
//!
//! The ambient ring is `Z[ζ_{2N}]` rather than `Z[ζ_N]` so that both
//! `ω = ζ_{2N}^{2a}` and the chosen square root `√ω = ζ_{2N}^a` live in the
//! same ring. `√N` is never represented; it is tracked by the half power.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::modular::gcd;

/// Integer polynomial, ascending coefficients.
type Poly = Vec<BigInt>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial. Returns `(quotient, remainder)`.
fn poly_divrem_monic(num: &[BigInt], den: &[BigInt]) -> (Poly, Poly) {
    let mut rem: Poly = num.to_vec();
    trim(&mut rem);
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for top in (dd..rem.len()).rev() {
        let c = rem[top].clone();
        if c.is_zero() {
            continue;
        }
        let shift = top - dd;
        quot[shift] = c.clone();
        for (j, d) in den.iter().enumerate() {
            rem[shift + j] -= &c * d;
        }
    }
    rem.truncate(dd);
    trim(&mut rem);
    (quot, rem)
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Poly>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Poly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `n`-th cyclotomic polynomial, as `x^n - 1` divided by the cyclotomic
/// polynomials of all proper divisors of `n`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num: Poly = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let (q, r) = poly_divrem_monic(&num, &cyclotomic_polynomial(d));
            debug_assert!(r.is_empty());
            num = q;
        }
    }
    cyclotomic_cache().lock().unwrap().insert(n, num.clone());
    num
}

/// The ring `Z[ζ_{2N}] = Z[x] / Φ_{2N}(x)`.
#[derive(Debug)]
pub struct CyclotomicRing {
    order: u64,
    modulus: Poly,
    /// Canonical form of `ζ^k` for `k` in `0..2N`.
    powers: Vec<Poly>,
}

fn ring_cache() -> &'static Mutex<HashMap<u64, Arc<CyclotomicRing>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicRing>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl CyclotomicRing {
    /// Shared ring for root order `N` (ambient root `ζ_{2N}`).
    pub fn for_order(order: u64) -> Arc<CyclotomicRing> {
        assert!(order >= 1, "root order must be positive");
        let mut cache = ring_cache().lock().unwrap();
        cache.entry(order).or_insert_with(|| Arc::new(CyclotomicRing::build(order))).clone()
    }

    fn build(order: u64) -> CyclotomicRing {
        let n2 = 2 * order;
        let modulus = cyclotomic_polynomial(n2);
        let degree = modulus.len() - 1;
        let powers = (0..n2 as usize)
            .map(|k| {
                let mut mono = vec![BigInt::zero(); k + 1];
                mono[k] = BigInt::one();
                let (_, mut r) = poly_divrem_monic(&mono, &modulus);
                r.resize(degree, BigInt::zero());
                r
            })
            .collect();
        CyclotomicRing { order, modulus, powers }
    }

    /// `N`; the ambient root is `ζ_{2N}`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `φ(2N)`, the length of canonical coefficient vectors.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }
}

/// A canonical element of `Z[ζ_{2N}]`.
#[derive(Clone)]
pub struct CycInt {
    ring: Arc<CyclotomicRing>,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt[N={}]({})", self.ring.order, self.poly_string())
    }
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        self.ring.order == other.ring.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycInt {}

impl CycInt {
    pub fn zero(ring: &Arc<CyclotomicRing>) -> CycInt {
        CycInt { ring: ring.clone(), coeffs: vec![BigInt::zero(); ring.degree()] }
    }

    pub fn one(ring: &Arc<CyclotomicRing>) -> CycInt {
        CycInt::from_int(ring, 1)
    }

    pub fn from_int(ring: &Arc<CyclotomicRing>, c: impl Into<BigInt>) -> CycInt {
        let mut out = CycInt::zero(ring);
        out.coeffs[0] = c.into();
        out
    }

    /// `ζ_{2N}^k` for any integer `k`.
    pub fn zeta_pow(ring: &Arc<CyclotomicRing>, k: i64) -> CycInt {
        let k = k.rem_euclid(2 * ring.order as i64) as usize;
        CycInt { ring: ring.clone(), coeffs: ring.powers[k].clone() }
    }

    /// Reduces an integer polynomial in `ζ_{2N}` to canonical form.
    /// Terms of degree `≥ 2N` are folded using `ζ^{2N} = 1` first.
    pub fn canonicalize<T>(ring: &Arc<CyclotomicRing>, raw: &[T]) -> CycInt
    where
        T: Clone + Into<BigInt>,
    {
        let n2 = 2 * ring.order as usize;
        let mut out = vec![BigInt::zero(); ring.degree()];
        for (k, c) in raw.iter().enumerate() {
            let c: BigInt = c.clone().into();
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&ring.powers[k % n2]) {
                if !p.is_zero() {
                    *o += &c * p;
                }
            }
        }
        CycInt { ring: ring.clone(), coeffs: out }
    }

    /// `Σ_k counts[k] · ζ_{2N}^{k·stride}`; the common way to turn a tally of
    /// root-of-unity exponents into a ring element.
    pub fn from_exponent_counts<T>(ring: &Arc<CyclotomicRing>, counts: &[T], stride: u64) -> CycInt
    where
        T: Clone + Into<BigInt>,
    {
        let n2 = 2 * ring.order;
        let mut raw = vec![BigInt::zero(); n2 as usize];
        for (k, c) in counts.iter().enumerate() {
            raw[((k as u64 * stride) % n2) as usize] += c.clone().into();
        }
        CycInt::canonicalize(ring, &raw)
    }

    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Some(c) when the element is the rational integer `c`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_ring(&self, other: &CycInt) {
        assert_eq!(self.ring.order, other.ring.order, "mixing elements of different cyclotomic rings");
    }

    pub fn scale(&self, c: &BigInt) -> CycInt {
        CycInt { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Exact division by a rational integer; `None` if some coefficient is
    /// not divisible.
    pub fn div_exact(&self, c: &BigInt) -> Option<CycInt> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            let (q, r) = x.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(CycInt { ring: self.ring.clone(), coeffs })
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> CycInt {
        let n2 = 2 * self.ring.order as usize;
        let mut raw = vec![BigInt::zero(); n2];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[(n2 - k) % n2] += c;
        }
        CycInt::canonicalize(&self.ring, &raw)
    }

    /// Galois action `ζ ↦ ζ^s` for `s` coprime to `2N`.
    pub fn galois(&self, s: u64) -> CycInt {
        let n2 = 2 * self.ring.order;
        assert_eq!(gcd(s % n2, n2), 1, "Galois exponent must be a unit");
        let mut raw = vec![BigInt::zero(); n2 as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[((k as u64 * s) % n2) as usize] += c;
        }
        CycInt::canonicalize(&self.ring, &raw)
    }

    pub fn pow(&self, mut e: u32) -> CycInt {
        let mut base = self.clone();
        let mut acc = CycInt::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Polynomial in `z = ζ_{2N}`, ascending degree, e.g. `1 - 2*z + z^3`.
    pub fn poly_string(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Add<&CycInt> for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.check_ring(rhs);
        CycInt { ring: self.ring.clone(), coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&CycInt> for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.check_ring(rhs);
        CycInt { ring: self.ring.clone(), coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul<&CycInt> for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.check_ring(rhs);
        let raw = poly_mul(&self.coeffs, &rhs.coeffs);
        CycInt::canonicalize(&self.ring, &raw)
    }
}

/// Which root a power is taken of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Root {
    Omega,
    SqrtOmega,
}

/// `ω = ζ_N^a` of order `N`, with the fixed square root `√ω = ζ_{2N}^a`.
///
/// `a` is kept modulo `2N`: `a` and `a + N` give the same `ω` and the two
/// different square roots.
#[derive(Clone, Debug)]
pub struct RootSpec {
    order: u64,
    power: u64,
    ring: Arc<CyclotomicRing>,
}

impl PartialEq for RootSpec {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.power == other.power
    }
}

impl Eq for RootSpec {}

impl RootSpec {
    pub fn new(order: u64, power: i64) -> Result<RootSpec> {
        if order == 0 {
            return Err(Error::InvalidRoot { order, power });
        }
        let reduced = power.rem_euclid(2 * order as i64) as u64;
        if gcd(reduced % order, order) != 1 {
            return Err(Error::InvalidRoot { order, power });
        }
        Ok(RootSpec { order, power: reduced, ring: CyclotomicRing::for_order(order) })
    }

    /// `ω = e^{2πi/N}` with `√ω = e^{πi/N}`.
    pub fn principal(order: u64) -> RootSpec {
        RootSpec::new(order, 1).expect("power 1 is always primitive")
    }

    /// Powers `a` in `1..=N` with `gcd(a, N) = 1`.
    pub fn primitive_powers(order: u64) -> Vec<u64> {
        (1..=order).filter(|&a| gcd(a, order) == 1).collect()
    }

    /// The same `ω` with the other square root.
    pub fn other_square_root(&self) -> RootSpec {
        RootSpec::new(self.order, (self.power + self.order) as i64).unwrap()
    }

    /// `ω^{-1}` (with `√ω^{-1}` as its root).
    pub fn inverse(&self) -> RootSpec {
        RootSpec::new(self.order, -(self.power as i64)).unwrap()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn power(&self) -> u64 {
        self.power
    }

    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    /// Exponent of `ζ_{2N}` representing `ω^k`.
    pub fn omega_exponent(&self, k: i64) -> i64 {
        let n2 = 2 * self.order as i64;
        (2 * self.power as i64 % n2 * k.rem_euclid(n2)).rem_euclid(n2)
    }

    pub fn root_power(&self, k: i64, which: Root) -> CycInt {
        let n2 = 2 * self.order as i64;
        let e = match which {
            Root::Omega => self.omega_exponent(k),
            Root::SqrtOmega => (self.power as i64 * k.rem_euclid(n2)).rem_euclid(n2),
        };
        CycInt::zeta_pow(&self.ring, e)
    }

    pub fn omega_pow(&self, k: i64) -> CycInt {
        self.root_power(k, Root::Omega)
    }

    fn phi_exponent(&self, k: i64) -> i64 {
        let n = self.order as i64;
        let n2 = 2 * n;
        let k = k.rem_euclid(n2);
        // k(k+N) is well defined mod 2N for k mod N
        let e = (k * (k + n)).rem_euclid(n2);
        (self.power as i64 * e).rem_euclid(n2)
    }

    /// `Φ(k) = (√ω)^{k(k+N)}`.
    pub fn phi(&self, k: i64) -> CycInt {
        CycInt::zeta_pow(&self.ring, self.phi_exponent(k))
    }

    /// `Φ̄(k) = 1/Φ(k)`.
    pub fn phi_bar(&self, k: i64) -> CycInt {
        CycInt::zeta_pow(&self.ring, -self.phi_exponent(k))
    }
}

/// A value `cyc · N^(-half_power/2)`.
#[derive(Clone, Debug)]
pub struct Scalar {
    pub cyc: CycInt,
    pub half_power: u32,
}

impl Scalar {
    pub fn new(cyc: CycInt, half_power: u32) -> Scalar {
        Scalar { cyc, half_power }
    }

    pub fn zero(ring: &Arc<CyclotomicRing>) -> Scalar {
        Scalar::new(CycInt::zero(ring), 0)
    }

    pub fn one(ring: &Arc<CyclotomicRing>) -> Scalar {
        Scalar::new(CycInt::one(ring), 0)
    }

    pub fn from_int(ring: &Arc<CyclotomicRing>, c: i64, half_power: u32) -> Scalar {
        Scalar::new(CycInt::from_int(ring, c), half_power)
    }

    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        self.cyc.ring()
    }

    pub fn order(&self) -> u64 {
        self.cyc.ring().order()
    }

    pub fn is_zero(&self) -> bool {
        self.cyc.is_zero()
    }

    fn n_pow(&self, k: u32) -> BigInt {
        num_traits::pow(BigInt::from(self.order()), k as usize)
    }

    /// Multiplies by `N^(k/2)` for any signed `k`, keeping the half power
    /// non-negative.
    pub fn times_sqrt_n_pow(&self, k: i64) -> Scalar {
        let e = self.half_power as i64 - k;
        if e >= 0 {
            Scalar::new(self.cyc.clone(), e as u32)
        } else {
            let up = (-e + 1) / 2;
            let rest = 2 * up + e;
            Scalar::new(self.cyc.scale(&self.n_pow(up as u32)), rest as u32)
        }
    }

    /// When `N = s²`, rewrites an odd half power as an even one using
    /// `N^(-1/2) = s · N^(-1)`.
    fn even_if_square(&self) -> std::borrow::Cow<'_, Scalar> {
        let n = self.order();
        let s = n.sqrt();
        if self.half_power % 2 == 1 && s * s == n {
            std::borrow::Cow::Owned(Scalar::new(self.cyc.scale(&BigInt::from(s)), self.half_power + 1))
        } else {
            std::borrow::Cow::Borrowed(self)
        }
    }

    /// Equality with half-power alignment. Values whose half powers have
    /// different parity compare unequal unless both are zero, or `N` is a
    /// perfect square (then `√N` is an integer and the powers are aligned).
    pub fn scalar_eq(&self, other: &Scalar) -> bool {
        if self.cyc.is_zero() && other.cyc.is_zero() {
            return true;
        }
        let (a, b) = (self.even_if_square(), other.even_if_square());
        let (this, other) = (a.as_ref(), b.as_ref());
        if this.half_power % 2 != other.half_power % 2 {
            return false;
        }
        let (lo, hi) = if this.half_power <= other.half_power { (this, other) } else { (other, this) };
        let lifted = lo.cyc.scale(&lo.n_pow((hi.half_power - lo.half_power) / 2));
        lifted == hi.cyc
    }

    /// Sum of two scalars whose half powers have the same parity (or where
    /// one of them is zero).
    pub fn checked_add(&self, other: &Scalar) -> Option<Scalar> {
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.is_zero() {
            return Some(other.clone());
        }
        let (a, b) = (self.even_if_square(), other.even_if_square());
        let (this, other) = (a.as_ref(), b.as_ref());
        if this.half_power % 2 != other.half_power % 2 {
            return None;
        }
        let hp = this.half_power.max(other.half_power);
        let a = this.cyc.scale(&this.n_pow((hp - this.half_power) / 2));
        let b = other.cyc.scale(&other.n_pow((hp - other.half_power) / 2));
        Some(Scalar::new(&a + &b, hp))
    }

    pub fn conj(&self) -> Scalar {
        Scalar::new(self.cyc.conj(), self.half_power)
    }

    /// Pulls factors of `N` out of the coefficients while the half power
    /// allows it. Does not change the value.
    pub fn reduced(&self) -> Scalar {
        let n = BigInt::from(self.order());
        let mut out = self.even_if_square().into_owned();
        if out.is_zero() {
            out.half_power = 0;
            return out;
        }
        if self.order() == 1 {
            out.half_power = 0;
            return out;
        }
        while out.half_power >= 2 {
            match out.cyc.div_exact(&n) {
                Some(c) => {
                    out.cyc = c;
                    out.half_power -= 2;
                }
                None => break,
            }
        }
        out
    }

    /// `Some(c)` when the value is the rational integer `c`.
    pub fn as_integer(&self) -> Option<BigInt> {
        let r = self.reduced();
        if r.half_power == 0 {
            r.cyc.as_integer().cloned()
        } else {
            None
        }
    }

    /// `Some((p, q))` with `q > 0` in lowest terms when the value is the
    /// rational number `p/q`.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        let r = self.reduced();
        if !r.half_power.is_multiple_of(2) {
            return None;
        }
        let p = r.cyc.as_integer()?.clone();
        let q = r.n_pow(r.half_power / 2);
        let g = p.gcd(&q);
        if g.is_zero() {
            return Some((p, BigInt::from(1)));
        }
        Some((&p / &g, &q / &g))
    }

    /// Short human form: `p` or `p/q` for rational values, the full exact
    /// rendering otherwise.
    pub fn short_string(&self) -> String {
        match self.as_rational() {
            Some((p, q)) if q == BigInt::from(1) => p.to_string(),
            Some((p, q)) => format!("{p}/{q}"),
            None => self.reduced().to_string(),
        }
    }

    /// Decimal approximation in the principal embedding `ζ_{2N} = e^{πi/N}`,
    /// with absolute error below `10^(-digits)`.
    pub fn to_complex(&self, digits: u32) -> ComplexApprox {
        approximate(self, digits.max(1))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.scalar_eq(other)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.cyc * &rhs.cyc, self.half_power + rhs.half_power)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.order();
        write!(f, "({})", self.cyc.poly_string())?;
        if self.half_power > 0 {
            write!(f, " * {}^(-{}/2)", n, self.half_power)?;
        }
        write!(f, ", z = zeta_{}", 2 * n)
    }
}

/// Fixed-point decimal approximation `re/10^digits + i·im/10^digits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexApprox {
    pub re: BigInt,
    pub im: BigInt,
    pub digits: u32,
}

impl ComplexApprox {
    /// Rounds to fewer digits, halves away from zero.
    pub fn rounded(&self, digits: u32) -> ComplexApprox {
        let drop = self.digits.saturating_sub(digits);
        let scale = num_traits::pow(BigInt::from(10), drop as usize);
        let round = |x: &BigInt| {
            let (q, r) = x.abs().div_rem(&scale);
            let q = if &r * 2 >= scale { q + 1 } else { q };
            if x.is_negative() {
                -q
            } else {
                q
            }
        };
        ComplexApprox { re: round(&self.re), im: round(&self.im), digits: self.digits - drop }
    }

    /// Trailing zeros trimmed, imaginary part omitted when zero.
    pub fn compact_string(&self) -> String {
        let trim = |x: &BigInt| {
            let s = format_fixed(x, self.digits);
            if s.contains('.') {
                s.trim_end_matches('0').trim_end_matches('.').to_string()
            } else {
                s
            }
        };
        let re = trim(&self.re);
        if self.im.is_zero() {
            return re;
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("{re} {sign} {}i", trim(&self.im.abs()))
    }

    pub fn re_f64(&self) -> f64 {
        fixed_to_f64(&self.re, self.digits)
    }

    pub fn im_f64(&self) -> f64 {
        fixed_to_f64(&self.im, self.digits)
    }
}

fn fixed_to_f64(x: &BigInt, digits: u32) -> f64 {
    let s = format_fixed(x, digits);
    s.parse().unwrap_or(f64::NAN)
}

fn format_fixed(x: &BigInt, digits: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let (q, r) = x.abs().div_rem(&scale);
    let sign = if x.is_negative() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{q}");
    }
    format!("{sign}{q}.{:0>width$}", r.to_string(), width = digits as usize)
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = format_fixed(&self.re, self.digits);
        let im = format_fixed(&self.im.abs(), self.digits);
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{re} {sign} {im}i")
    }
}

/// arctan(1/x) scaled by `scale`, by its alternating series.
fn atan_inv(x: u64, scale: &BigInt) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut term = scale / &x;
    let mut sum = term.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term = &term / &x2;
        let t = &term / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= &t;
        } else {
            sum += &t;
        }
        k += 1;
    }
    sum
}

/// π scaled by `scale` (Machin's formula).
fn pi_fixed(scale: &BigInt) -> BigInt {
    BigInt::from(16) * atan_inv(5, scale) - BigInt::from(4) * atan_inv(239, scale)
}

/// (cos θ, sin θ) scaled by `scale`, for `0 ≤ θ ≤ π` given scaled.
fn cos_sin_fixed(theta: &BigInt, scale: &BigInt) -> (BigInt, BigInt) {
    let mut cos = scale.clone();
    let mut sin = BigInt::zero();
    let mut term = scale.clone();
    let mut k = 1u64;
    loop {
        term = &term * theta / scale / BigInt::from(k);
        if term.is_zero() {
            break;
        }
        match k % 4 {
            1 => sin += &term,
            2 => cos -= &term,
            3 => sin -= &term,
            _ => cos += &term,
        }
        k += 1;
    }
    (cos, sin)
}

fn approximate(s: &Scalar, digits: u32) -> ComplexApprox {
    let n = s.order();
    let n2 = 2 * n;
    let coeff_digits = s.cyc.coeffs().iter().map(|c| c.abs().to_string().len() as u32).max().unwrap_or(1);
    let guard = 12 + coeff_digits + (n2 as f64).log10().ceil() as u32;
    let work = digits + guard;
    let scale = num_traits::pow(BigInt::from(10), work as usize);

    let pi = pi_fixed(&scale);
    let theta = &pi / BigInt::from(n);
    let (c1, s1) = cos_sin_fixed(&theta, &scale);

    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    let (mut zr, mut zi) = (scale.clone(), BigInt::zero());
    for c in s.cyc.coeffs() {
        if !c.is_zero() {
            re += c * &zr;
            im += c * &zi;
        }
        let nr = (&zr * &c1 - &zi * &s1) / &scale;
        let ni = (&zr * &s1 + &zi * &c1) / &scale;
        zr = nr;
        zi = ni;
    }

    let half = s.half_power;
    let whole = num_traits::pow(BigInt::from(n), (half / 2) as usize);
    re /= &whole;
    im /= &whole;
    if half % 2 == 1 {
        let sqrt_n = (BigInt::from(n) * &scale * &scale).sqrt();
        re = re * &scale / &sqrt_n;
        im = im * &scale / &sqrt_n;
    }

    let unit = num_traits::pow(BigInt::from(10), guard as usize);
    let round = |x: BigInt| -> BigInt {
        let twice = &x * BigInt::from(2) + if x.is_negative() { -&unit } else { unit.clone() };
        twice / (BigInt::from(2) * &unit)
    };
    ComplexApprox { re: round(re), im: round(im), digits }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: u64) -> Arc<CyclotomicRing> {
        CyclotomicRing::for_order(n)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn compact_approximations() {
        let a = ComplexApprox { re: BigInt::from(999_999_999i64), im: BigInt::from(-1_250_000_000i64), digits: 9 };
        assert_eq!(a.rounded(4).compact_string(), "1 - 1.25i");
        let z = ComplexApprox { re: BigInt::from(-4), im: BigInt::from(3), digits: 9 };
        assert_eq!(z.rounded(4).compact_string(), "0");
    }

    #[test]
    fn short_strings() {
        assert_eq!(Scalar::from_int(&ring(3), 1, 6).short_string(), "1/27");
        assert_eq!(Scalar::from_int(&ring(3), -9, 2).short_string(), "-3");
        assert_eq!(Scalar::from_int(&ring(4), 2, 1).short_string(), "1");
        assert_eq!(Scalar::from_int(&ring(4), 1, 3).short_string(), "1/8");
        assert_eq!(Scalar::from_int(&ring(5), 0, 3).short_string(), "0");
        assert!(Scalar::from_int(&ring(2), 1, 1).as_rational().is_none());
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(8), ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn canonicalize_examples() {
        // N=2: ζ_4^2 = -1
        let r = ring(2);
        assert_eq!(CycInt::canonicalize(&r, &[0, 0, 1, 0]).coeffs(), &ints(&[-1, 0])[..]);
        // N=1: ζ_2 = -1
        let r = ring(1);
        assert_eq!(CycInt::canonicalize(&r, &[0, 1]).coeffs(), &ints(&[-1])[..]);
        // N=3: ζ_6^2 = ζ_6 - 1
        let r = ring(3);
        assert_eq!(CycInt::canonicalize(&r, &[0, 0, 1, 0, 0, 0]).coeffs(), &ints(&[-1, 1])[..]);
    }

    #[test]
    fn arithmetic_examples() {
        let r = ring(3);
        let z = CycInt::zeta_pow(&r, 1);
        assert!((&z + &(-&z)).is_zero());
        assert_eq!(&z * &z, CycInt::canonicalize(&r, &[-1, 1]));
        let r = ring(2);
        let i = CycInt::zeta_pow(&r, 1);
        assert_eq!(&i * &i, CycInt::from_int(&r, -1));
    }

    #[test]
    fn root_powers() {
        for n in 1..=8 {
            for a in RootSpec::primitive_powers(n) {
                let spec = RootSpec::new(n, a as i64).unwrap();
                assert_eq!(spec.omega_pow(0), CycInt::one(spec.ring()));
                let s = spec.root_power(1, Root::SqrtOmega);
                assert_eq!(&s * &s, spec.omega_pow(1));
                assert_eq!(s.pow(2 * n as u32), CycInt::one(spec.ring()));
            }
        }
        let spec = RootSpec::new(2, 1).unwrap();
        assert_eq!(spec.omega_pow(1), CycInt::from_int(spec.ring(), -1));
        let spec = RootSpec::new(4, 1).unwrap();
        assert_eq!(spec.omega_pow(1), CycInt::canonicalize(spec.ring(), &[0, 0, 1]));
    }

    #[test]
    fn invalid_roots_are_rejected() {
        assert!(RootSpec::new(4, 2).is_err());
        assert!(RootSpec::new(0, 1).is_err());
        assert!(RootSpec::new(6, 3).is_err());
        assert_eq!(RootSpec::new(3, -1).unwrap().power(), 5);
    }

    #[test]
    fn phi_examples() {
        let spec = RootSpec::new(2, 1).unwrap();
        assert_eq!(spec.phi(0), CycInt::one(spec.ring()));
        let minus_i = CycInt::canonicalize(spec.ring(), &[0, -1]);
        assert_eq!(spec.phi(1), minus_i);
        assert_eq!(&spec.phi(1) * &spec.phi(1), CycInt::from_int(spec.ring(), -1));
        assert_eq!(&spec.phi(1) * &spec.phi_bar(1), CycInt::one(spec.ring()));
    }

    #[test]
    fn phi_properties() {
        for n in 1..=8u64 {
            for a in 0..2 * n {
                let Ok(spec) = RootSpec::new(n, a as i64) else { continue };
                let ni = n as i64;
                for k in 0..ni {
                    assert_eq!(&spec.phi(k) * &spec.phi(k), spec.omega_pow(k * k));
                    assert_eq!(spec.phi(-k), spec.phi(k));
                    assert_eq!(spec.phi(k + ni), spec.phi(k));
                    for l in 0..ni {
                        let rhs = &(&spec.phi(k) * &spec.phi(l)) * &spec.omega_pow(k * l);
                        assert_eq!(spec.phi(k + l), rhs, "N={n} a={a} k={k} l={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn scalar_equality() {
        let r = ring(3);
        assert!(Scalar::from_int(&r, 0, 3).scalar_eq(&Scalar::from_int(&r, 0, 0)));
        assert!(Scalar::from_int(&r, 3, 2).scalar_eq(&Scalar::from_int(&r, 1, 0)));
        assert!(!Scalar::from_int(&r, 1, 1).scalar_eq(&Scalar::from_int(&r, 1, 0)));
        assert!(!Scalar::from_int(&r, 2, 0).scalar_eq(&Scalar::from_int(&r, 1, 0)));

        // square orders: 4^(-1/2) = 1/2, and N = 1 ignores the half power
        let r4 = ring(4);
        assert!(Scalar::from_int(&r4, 1, 1).scalar_eq(&Scalar::from_int(&r4, 2, 2)));
        assert!(!Scalar::from_int(&r4, 1, 1).scalar_eq(&Scalar::from_int(&r4, 1, 2)));
        let r1 = ring(1);
        assert!(Scalar::from_int(&r1, 1, 5).scalar_eq(&Scalar::one(&r1)));
        let sum = Scalar::from_int(&r4, 1, 1).checked_add(&Scalar::from_int(&r4, 1, 0)).unwrap();
        assert!(sum.scalar_eq(&Scalar::from_int(&r4, 6, 2)));
    }

    #[test]
    fn sqrt_n_powers() {
        let r = ring(5);
        let one = Scalar::one(&r);
        let up = one.times_sqrt_n_pow(3);
        assert_eq!(up.half_power, 1);
        assert_eq!(up.cyc, CycInt::from_int(&r, 25));
        assert!(up.times_sqrt_n_pow(-3).scalar_eq(&one));
    }

    #[test]
    fn complex_approximations() {
        let r = ring(3);
        let one = Scalar::one(&r).to_complex(30);
        assert_eq!(one.re, num_traits::pow(BigInt::from(10), 30));
        assert!(one.im.is_zero());
        // (1 + 2ω)/√3 = i with ω = ζ_6^2
        let spec = RootSpec::principal(3);
        let v = &CycInt::one(&r) + &spec.omega_pow(1).scale(&BigInt::from(2));
        let a = Scalar::new(v, 1).to_complex(25);
        assert!(a.re_f64().abs() < 1e-20);
        assert!((a.im_f64() - 1.0).abs() < 1e-20);
        let m = Scalar::from_int(&ring(2), -1, 0).to_complex(10);
        assert_eq!(m.to_string(), "-1.0000000000 + 0.0000000000i");
    }

    #[test]
    fn rendering() {
        let r = ring(3);
        let v = CycInt::canonicalize(&r, &[1, -2]);
        assert_eq!(Scalar::new(v, 1).to_string(), "(1 - 2*z) * 3^(-1/2), z = zeta_6");
        assert_eq!(Scalar::zero(&r).to_string(), "(0), z = zeta_6");
        assert_eq!(Scalar::from_int(&r, 9, 4).short_string(), "1");
    }
}
