//! Quadratic exponential sums `Σ_{x ∈ (Z/m)^n} ζ_m^{Q(x)}`.
//!
//! Two backends: direct enumeration (budget-guarded) and a reduction that
//! splits `m` into prime powers and peels off blocks of one or two variables
//! by unimodular substitutions.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::quadratic::{check_substitution, AffineMap, QuadraticForm};
use crate::cyclotomic::{CycInt, CyclotomicRing};
use crate::error::{Error, Result};
use crate::modular::{add_mod, crt_components, inv_mod, mul_mod, neg_mod, valuation};

/// Default cap on the number of enumerated terms.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Random evaluation points used to check each substitution step.
const CHECK_POINTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExpSumBackend {
    Enumerate,
    #[default]
    Reduce,
}

fn stride(ring: &CyclotomicRing, m: u64) -> u64 {
    let n2 = 2 * ring.order();
    assert_eq!(n2 % m, 0, "modulus {m} does not divide 2N = {n2}");
    n2 / m
}

/// `Σ ζ_m^{Q(x)}` as an element of `Z[ζ_{2N}]`; `m` must divide `2N`.
pub fn exp_sum(
    form: &QuadraticForm,
    ring: &Arc<CyclotomicRing>,
    backend: ExpSumBackend,
    budget: u64,
) -> Result<CycInt> {
    match backend {
        ExpSumBackend::Enumerate => enumerate(form, ring, budget),
        ExpSumBackend::Reduce => reduce(form, ring),
    }
}

/// Number of terms `m^n` as a float, for budget checks.
pub fn term_estimate(m: u64, n: usize) -> f64 {
    (m as f64).powi(n as i32)
}

pub fn enumerate(form: &QuadraticForm, ring: &Arc<CyclotomicRing>, budget: u64) -> Result<CycInt> {
    let m = form.modulus();
    let n = form.num_vars();
    let estimate = term_estimate(m, n);
    if estimate > budget as f64 {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    let counts = enumerate_counts(form);
    Ok(CycInt::from_exponent_counts(ring, &counts, stride(ring, m)))
}

/// Largest table of inner-block tallies, in entries.
const INNER_TABLE: u64 = 1 << 12;

/// Tally of `Q(x)` over all `x`. The first `k` variables are summed through
/// a table indexed by their gradient; the rest run through an odometer that
/// updates `Q` and the gradients incrementally.
fn enumerate_counts(form: &QuadraticForm) -> Vec<u64> {
    let m = form.modulus();
    let n = form.num_vars();
    // building the table costs m^(2k), the odometer m^(n-k)
    let mut k = 0;
    while 3 * (k + 1) <= n + 1 && m.pow(k as u32 + 1) <= INNER_TABLE {
        k += 1;
    }
    let table = inner_table(form, k);
    let mut counts = vec![0u64; m as usize];
    let mut x = vec![0u64; n];
    // g_i = b_i + Σ_{j≠i} A_ij x_j, with the inner variables held at zero
    let mut g: Vec<u64> = (0..n).map(|i| form.linear(i)).collect();
    let mut q = form.constant();
    loop {
        let idx = g[..k].iter().rev().fold(0u64, |acc, &v| acc * m + v) as usize;
        for (r, &c) in table[idx * m as usize..(idx + 1) * m as usize].iter().enumerate() {
            counts[((q + r as u64) % m) as usize] += c;
        }
        // stepping x_i by +1 (mod m) is the same move whether or not it wraps
        let mut i = k;
        loop {
            if i == n {
                return counts;
            }
            let a = form.quad(i, i);
            let delta = add_mod(mul_mod(a, add_mod(2 * x[i] % m, 1, m), m), g[i], m);
            q = add_mod(q, delta, m);
            for (j, gj) in g.iter_mut().enumerate() {
                if j != i {
                    *gj = add_mod(*gj, form.quad(i, j), m);
                }
            }
            x[i] += 1;
            if x[i] < m {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// `table[g·m + r]` counts `y ∈ (Z/m)^k` with `Σ_{i≤j<k} A_ij y_i y_j + g·y ≡ r`,
/// where `g` is read in base `m`, least significant first.
fn inner_table(form: &QuadraticForm, k: usize) -> Vec<u64> {
    let m = form.modulus();
    let size = m.pow(k as u32) as usize;
    let mut table = vec![0u64; size * m as usize];
    let mut ys = Vec::with_capacity(size);
    let mut y = vec![0u64; k];
    for _ in 0..size {
        let mut qy = 0;
        for i in 0..k {
            for j in i..k {
                qy = add_mod(qy, mul_mod(form.quad(i, j), y[i] * y[j] % m, m), m);
            }
        }
        ys.push((y.clone(), qy));
        for v in y.iter_mut() {
            *v += 1;
            if *v < m {
                break;
            }
            *v = 0;
        }
    }
    for (gi, gv) in ys.iter().map(|(v, _)| v).enumerate() {
        for (yv, qy) in &ys {
            let lin = gv.iter().zip(yv).fold(0, |acc, (&a, &b)| add_mod(acc, a * b % m, m));
            table[gi * m as usize + add_mod(*qy, lin, m) as usize] += 1;
        }
    }
    table
}

/// Reduction backend: CRT split, then per prime power.
pub fn reduce(form: &QuadraticForm, ring: &Arc<CyclotomicRing>) -> Result<CycInt> {
    let m = form.modulus();
    let mut out = CycInt::one(ring);
    for comp in crt_components(m) {
        let part = form.scaled_mod(comp.modulus, comp.cofactor_inverse);
        out = &out * &reduce_prime_power(part, comp.prime, comp.exponent, ring)?;
        if out.is_zero() {
            break;
        }
    }
    Ok(out)
}

/// `Σ_{x ∈ (Z/p^e)^n} ζ_{p^e}^{Q(x)}`.
pub fn reduce_prime_power(mut form: QuadraticForm, p: u64, e: u32, ring: &Arc<CyclotomicRing>) -> Result<CycInt> {
    let q = p.pow(e);
    assert_eq!(form.modulus(), q);
    let st = stride(ring, q);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ q);
    let mut value = CycInt::one(ring);
    let mut free_count: u32 = 0;

    loop {
        let support = form.support();
        free_count += (form.num_vars() - support.len()) as u32;
        if support.len() < form.num_vars() {
            form = form.restrict(&support);
        }
        let n = form.num_vars();
        if n == 0 {
            break;
        }
        if form.is_quadratic_zero() {
            // every remaining variable has a nonzero linear coefficient
            return Ok(CycInt::zero(ring));
        }

        let block =
            if p == 2 { decouple_two_adic(&mut form, e, &mut rng)? } else { decouple_odd(&mut form, p, e, &mut rng)? };
        for &i in &block {
            for j in 0..n {
                if !block.contains(&j) && form.quad(i, j) != 0 {
                    return Err(Error::Internal(format!("block variable {i} still coupled to {j} mod {q}")));
                }
            }
        }
        let counts = block_counts(&form, &block);
        value = &value * &CycInt::from_exponent_counts(ring, &counts, st);
        if value.is_zero() {
            return Ok(value);
        }
        let rest: Vec<usize> = (0..n).filter(|j| !block.contains(j)).collect();
        form = form.restrict(&rest);
    }

    let constant = CycInt::zeta_pow(ring, (form.constant() * st) as i64);
    let scale = num_traits::pow(BigInt::from(q), free_count as usize);
    Ok((&value * &constant).scale(&scale))
}

fn checked_step(before: &QuadraticForm, after: &QuadraticForm, map: &AffineMap, rng: &mut ChaCha8Rng) -> Result<()> {
    if check_substitution(before, after, map, rng, CHECK_POINTS) {
        Ok(())
    } else {
        Err(Error::Internal("substitution changed the quadratic form".into()))
    }
}

fn minimal_entry(form: &QuadraticForm, p: u64, e: u32) -> (u32, Option<usize>, Option<(usize, usize)>) {
    let n = form.num_vars();
    let mut best = e;
    let mut diag = None;
    let mut off = None;
    for i in 0..n {
        for j in i..n {
            let v = valuation(form.quad(i, j), p, e);
            if v < best {
                best = v;
                diag = None;
                off = None;
            }
            if v == best && v < e {
                if i == j {
                    diag.get_or_insert(i);
                } else {
                    off.get_or_insert((i, j));
                }
            }
        }
    }
    (best, diag, off)
}

/// Odd `p`: makes one variable a pure square-plus-linear block.
fn decouple_odd(form: &mut QuadraticForm, p: u64, e: u32, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let q = p.pow(e);
    let n = form.num_vars();
    let (v, diag, off) = minimal_entry(form, p, e);
    let pivot = match diag {
        Some(j) => j,
        None => {
            // only a cross term reaches the minimum: x_i → x_i + x_j moves it
            // onto the diagonal of x_j
            let (i, j) = off.expect("nonzero quadratic part");
            let before = form.clone();
            form.substitute_add(i, j, 1);
            let mut map = AffineMap::new();
            map.set(i, 1, vec![(j, 1)], 0);
            checked_step(&before, form, &map, rng)?;
            j
        }
    };
    let pv = p.pow(v);
    let unit = form.quad(pivot, pivot) / pv;
    let inv = inv_mod(mul_mod(2, unit, q), q).expect("2u is a unit for odd p");
    let before = form.clone();
    let mut terms = Vec::new();
    for l in 0..n {
        if l == pivot {
            continue;
        }
        let c = form.quad(pivot, l);
        if c == 0 {
            continue;
        }
        let t = neg_mod(mul_mod(c / pv, inv, q), q);
        form.substitute_add(pivot, l, t);
        terms.push((l, t));
    }
    if !terms.is_empty() {
        let mut map = AffineMap::new();
        map.set(pivot, 1, terms, 0);
        checked_step(&before, form, &map, rng)?;
    }
    Ok(vec![pivot])
}

/// `p = 2`: splits off a block of one or two variables.
fn decouple_two_adic(form: &mut QuadraticForm, e: u32, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let q = 1u64 << e;
    let n = form.num_vars();
    let (v, _, off) = minimal_entry(form, 2, e);

    // a diagonal entry at the minimum whose cross terms are all one
    // valuation higher can be completed on its own
    let lone = (0..n).find(|&i| {
        valuation(form.quad(i, i), 2, e) == v && (0..n).all(|l| l == i || valuation(form.quad(i, l), 2, e) > v)
    });
    let before = form.clone();
    let mut map = AffineMap::new();
    if let Some(i) = lone {
        let unit = form.quad(i, i) >> v;
        let inv = inv_mod(unit, q).expect("odd unit");
        let mut terms = Vec::new();
        for l in 0..n {
            if l == i || form.quad(i, l) == 0 {
                continue;
            }
            let t = neg_mod(mul_mod(form.quad(i, l) >> (v + 1), inv, q), q);
            form.substitute_add(i, l, t);
            terms.push((l, t));
        }
        if !terms.is_empty() {
            map.set(i, 1, terms, 0);
            checked_step(&before, form, &map, rng)?;
        }
        return Ok(vec![i]);
    }

    let (i, j) = off.ok_or_else(|| Error::Internal("no pivot at minimal 2-adic valuation".into()))?;
    // [[2a_ii, a_ij], [a_ij, 2a_jj]] (s, t) = -(A_il, A_jl) / 2^v, odd determinant
    let aii = form.quad(i, i) >> v;
    let ajj = form.quad(j, j) >> v;
    let aij = form.quad(i, j) >> v;
    let det = (4 * aii % q * ajj % q + q - mul_mod(aij, aij, q)) % q;
    let det_inv = inv_mod(det, q).expect("odd determinant");
    let (mut si, mut tj) = (Vec::new(), Vec::new());
    for l in 0..n {
        if l == i || l == j {
            continue;
        }
        let (ci, cj) = (form.quad(i, l), form.quad(j, l));
        if ci == 0 && cj == 0 {
            continue;
        }
        let ri = neg_mod(ci >> v, q);
        let rj = neg_mod(cj >> v, q);
        // inverse of [[x, y], [y, z]] is [[z, -y], [-y, x]] / det
        let s = mul_mod(add_mod(mul_mod(2 * ajj % q, ri, q), neg_mod(mul_mod(aij, rj, q), q), q), det_inv, q);
        let t = mul_mod(add_mod(neg_mod(mul_mod(aij, ri, q), q), mul_mod(2 * aii % q, rj, q), q), det_inv, q);
        form.substitute_add(i, l, s);
        form.substitute_add(j, l, t);
        si.push((l, s));
        tj.push((l, t));
    }
    if !si.is_empty() {
        map.set(i, 1, si, 0);
        map.set(j, 1, tj, 0);
        checked_step(&before, form, &map, rng)?;
    }
    Ok(vec![i, j])
}

/// Exponent tally of a decoupled block (constant excluded).
fn block_counts(form: &QuadraticForm, block: &[usize]) -> Vec<u64> {
    let m = form.modulus();
    let mut counts = vec![0u64; m as usize];
    match *block {
        [i] => {
            let (a, b) = (form.quad(i, i), form.linear(i));
            for x in 0..m {
                let v = add_mod(mul_mod(a, mul_mod(x, x, m), m), mul_mod(b, x, m), m);
                counts[v as usize] += 1;
            }
        }
        [i, j] => {
            let (a, c, d) = (form.quad(i, i), form.quad(i, j), form.quad(j, j));
            let (bi, bj) = (form.linear(i), form.linear(j));
            for x in 0..m {
                let fx = add_mod(mul_mod(a, mul_mod(x, x, m), m), mul_mod(bi, x, m), m);
                let cx = add_mod(mul_mod(c, x, m), bj, m);
                for y in 0..m {
                    let v = add_mod(fx, add_mod(mul_mod(d, mul_mod(y, y, m), m), mul_mod(cx, y, m), m), m);
                    counts[v as usize] += 1;
                }
            }
        }
        _ => unreachable!("blocks have one or two variables"),
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(n: u64) -> Arc<CyclotomicRing> {
        CyclotomicRing::for_order(n)
    }

    #[test]
    fn documented_examples() {
        // one variable, no phase, N = 5
        let f = QuadraticForm::new(5, 1);
        for b in [ExpSumBackend::Enumerate, ExpSumBackend::Reduce] {
            assert_eq!(exp_sum(&f, &ring(5), b, DEFAULT_BUDGET).unwrap(), CycInt::from_int(&ring(5), 5));
        }
        // y² over Z/4: 1 + i + 1 + i
        let r4 = ring(4);
        let mut f = QuadraticForm::new(4, 1);
        f.add_quad(0, 0, 1);
        let i = CycInt::zeta_pow(&r4, 2);
        let expect = &CycInt::from_int(&r4, 2) + &(&CycInt::from_int(&r4, 2) * &i);
        for b in [ExpSumBackend::Enumerate, ExpSumBackend::Reduce] {
            assert_eq!(exp_sum(&f, &r4, b, DEFAULT_BUDGET).unwrap(), expect);
        }
        // no variables: ω^c
        let mut f = QuadraticForm::new(6, 0);
        f.add_constant(5);
        assert_eq!(reduce(&f, &ring(6)).unwrap(), CycInt::zeta_pow(&ring(6), 10));
    }

    #[test]
    fn budget_refusal() {
        let f = QuadraticForm::new(7, 12);
        match enumerate(&f, &ring(7), 1000) {
            Err(Error::BudgetExceeded { budget, .. }) => assert_eq!(budget, 1000),
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn quadratic_gauss_sums() {
        // |Σ ζ_p^{x²}|² = p for odd primes
        for p in [3u64, 5, 7] {
            let r = ring(p);
            let mut f = QuadraticForm::new(p, 1);
            f.add_quad(0, 0, 1);
            let g = reduce(&f, &r).unwrap();
            assert_eq!(&g * &g.conj(), CycInt::from_int(&r, p as i64));
        }
    }

    #[test]
    fn two_by_two_block_survives() {
        // x y over Z/2 cannot be diagonalised: value 2
        let r = ring(2);
        let mut f = QuadraticForm::new(2, 2);
        f.add_quad(0, 1, 1);
        assert_eq!(reduce(&f, &r).unwrap(), CycInt::from_int(&r, 2));
        assert_eq!(enumerate(&f, &r, DEFAULT_BUDGET).unwrap(), CycInt::from_int(&r, 2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn reduce_matches_enumerate(seed in any::<u64>(), m in 1u64..=8, n in 0usize..=5, sparse in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut f = QuadraticForm::random(&mut rng, m, n);
            if sparse {
                // scale by a prime factor to exercise non-unit pivots
                let p = crate::modular::factorize(m.max(2)).first().map(|x| x.0).unwrap_or(2);
                f = f.scaled_mod(m, p);
            }
            let r = ring(m);
            prop_assert_eq!(reduce(&f, &r).unwrap(), enumerate(&f, &r, DEFAULT_BUDGET).unwrap());
        }
    }
}
