//! Quadratic exponents over `Z/m` and the affine substitutions used to
//! simplify them.
//!
//! A [`QuadraticForm`] `Q(x) = Σ_{i≤j} A_ij x_i x_j + Σ b_i x_i + c` stands
//! for the exponential sum `Σ_{x ∈ (Z/m)^n} ζ_m^{Q(x)}`.

use rand::Rng;

use crate::modular::{add_mod, mul_mod, neg_mod};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    modulus: u64,
    n: usize,
    /// Dense `n × n`; only entries with `i ≤ j` are used.
    quad: Vec<u64>,
    linear: Vec<u64>,
    constant: u64,
}

impl QuadraticForm {
    pub fn new(modulus: u64, n: usize) -> QuadraticForm {
        assert!(modulus >= 1);
        QuadraticForm { modulus, n, quad: vec![0; n * n], linear: vec![0; n], constant: 0 }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        if i <= j {
            i * self.n + j
        } else {
            j * self.n + i
        }
    }

    /// Coefficient of `x_i x_j` (of `x_i²` when `i = j`).
    pub fn quad(&self, i: usize, j: usize) -> u64 {
        self.quad[self.idx(i, j)]
    }

    pub fn linear(&self, i: usize) -> u64 {
        self.linear[i]
    }

    pub fn constant(&self) -> u64 {
        self.constant
    }

    fn red(&self, c: i64) -> u64 {
        c.rem_euclid(self.modulus as i64) as u64
    }

    pub fn add_quad(&mut self, i: usize, j: usize, c: i64) {
        let k = self.idx(i, j);
        let c = self.red(c);
        self.quad[k] = add_mod(self.quad[k], c, self.modulus);
    }

    pub fn add_linear(&mut self, i: usize, c: i64) {
        let c = self.red(c);
        self.linear[i] = add_mod(self.linear[i], c, self.modulus);
    }

    pub fn add_constant(&mut self, c: i64) {
        let c = self.red(c);
        self.constant = add_mod(self.constant, c, self.modulus);
    }

    fn add_quad_u(&mut self, i: usize, j: usize, c: u64) {
        let k = self.idx(i, j);
        self.quad[k] = add_mod(self.quad[k], c, self.modulus);
    }

    fn set_quad_u(&mut self, i: usize, j: usize, c: u64) {
        let k = self.idx(i, j);
        self.quad[k] = c % self.modulus;
    }

    pub fn is_quadratic_zero(&self) -> bool {
        self.quad.iter().all(|&c| c == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.is_quadratic_zero() && self.linear.iter().all(|&c| c == 0) && self.constant == 0
    }

    /// Number of variables that occur with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.linear[i] != 0 || (0..self.n).any(|j| self.quad(i, j) != 0)).collect()
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        debug_assert_eq!(x.len(), self.n);
        let m = self.modulus as u128;
        let mut acc: u128 = self.constant as u128;
        for i in 0..self.n {
            let xi = x[i] as u128 % m;
            if xi == 0 {
                continue;
            }
            let mut row: u128 = self.linear[i] as u128;
            for j in i..self.n {
                let c = self.quad[i * self.n + j];
                if c != 0 {
                    row += c as u128 * (x[j] as u128 % m) % m;
                }
            }
            acc = (acc + row % m * xi) % m;
        }
        acc as u64
    }

    /// `x_target ← x_target + t · x_source`.
    pub fn substitute_add(&mut self, target: usize, source: usize, t: u64) {
        assert_ne!(target, source);
        let m = self.modulus;
        let t = t % m;
        if t == 0 {
            return;
        }
        let a_tt = self.quad(target, target);
        let a_ts = self.quad(target, source);
        // cross terms x_target x_j become x_target x_j + t x_source x_j
        for j in 0..self.n {
            if j == target || j == source {
                continue;
            }
            let c = self.quad(target, j);
            if c != 0 {
                self.add_quad_u(source, j, mul_mod(t, c, m));
            }
        }
        // A_tt (x_t + t x_s)^2 and A_ts (x_t + t x_s) x_s
        self.add_quad_u(target, source, mul_mod(2 % m, mul_mod(t, a_tt, m), m));
        let ss = add_mod(mul_mod(mul_mod(t, t, m), a_tt, m), mul_mod(t, a_ts, m), m);
        self.add_quad_u(source, source, ss);
        let b_t = self.linear[target];
        self.linear[source] = add_mod(self.linear[source], mul_mod(t, b_t, m), m);
    }

    /// `x_target ← scale · x_target + shift`.
    pub fn substitute_affine(&mut self, target: usize, scale: u64, shift: u64) {
        let m = self.modulus;
        let (s, h) = (scale % m, shift % m);
        let a_tt = self.quad(target, target);
        let b_t = self.linear[target];
        for j in 0..self.n {
            if j == target {
                continue;
            }
            let c = self.quad(target, j);
            if c != 0 {
                self.linear[j] = add_mod(self.linear[j], mul_mod(h, c, m), m);
                self.set_quad_u(target, j, mul_mod(s, c, m));
            }
        }
        self.constant = add_mod(self.constant, add_mod(mul_mod(a_tt, mul_mod(h, h, m), m), mul_mod(b_t, h, m), m), m);
        let two_a_s_h = mul_mod(mul_mod(2 % m, a_tt, m), mul_mod(s, h, m), m);
        self.linear[target] = add_mod(mul_mod(s, b_t, m), two_a_s_h, m);
        self.set_quad_u(target, target, mul_mod(a_tt, mul_mod(s, s, m), m));
    }

    /// Keeps only the listed variables, in the given order. Coefficients of
    /// dropped variables must already be zero.
    pub fn restrict(&self, keep: &[usize]) -> QuadraticForm {
        let mut out = QuadraticForm::new(self.modulus, keep.len());
        for (a, &i) in keep.iter().enumerate() {
            out.linear[a] = self.linear[i];
            for (b, &j) in keep.iter().enumerate().skip(a) {
                out.quad[a * out.n + b] = self.quad(i, j);
            }
        }
        out.constant = self.constant;
        out
    }

    /// The same coefficients multiplied by `factor` and reduced modulo a
    /// divisor `q` of the modulus.
    pub fn scaled_mod(&self, q: u64, factor: u64) -> QuadraticForm {
        assert_eq!(self.modulus % q, 0, "target modulus must divide the modulus");
        let f = factor % q;
        let map = |c: &u64| mul_mod(*c % q, f, q);
        QuadraticForm {
            modulus: q,
            n: self.n,
            quad: self.quad.iter().map(map).collect(),
            linear: self.linear.iter().map(map).collect(),
            constant: mul_mod(self.constant % q, f, q),
        }
    }

    /// Negated exponent (the complex conjugate sum).
    pub fn negated(&self) -> QuadraticForm {
        let m = self.modulus;
        QuadraticForm {
            modulus: m,
            n: self.n,
            quad: self.quad.iter().map(|&c| neg_mod(c, m)).collect(),
            linear: self.linear.iter().map(|&c| neg_mod(c, m)).collect(),
            constant: neg_mod(self.constant, m),
        }
    }

    /// Random form with the given shape, for tests and cross-checks.
    pub fn random(rng: &mut impl Rng, modulus: u64, n: usize) -> QuadraticForm {
        let mut f = QuadraticForm::new(modulus, n);
        for i in 0..n {
            for j in i..n {
                f.quad[i * n + j] = rng.gen_range(0..modulus);
            }
            f.linear[i] = rng.gen_range(0..modulus);
        }
        f.constant = rng.gen_range(0..modulus);
        f
    }
}

/// An affine change of variables `x = T(y)` touching a few target variables:
/// `x_t = scale · y_t + Σ c_s y_s + shift`, all other `x_j = y_j`.
#[derive(Clone, Debug, Default)]
pub struct AffineMap {
    rows: Vec<AffineRow>,
}

/// `(target, scale, terms, shift)`.
type AffineRow = (usize, u64, Vec<(usize, u64)>, u64);

impl AffineMap {
    pub fn new() -> Self {
        AffineMap::default()
    }

    pub fn set(&mut self, target: usize, scale: u64, terms: Vec<(usize, u64)>, shift: u64) {
        self.rows.push((target, scale, terms, shift));
    }

    pub fn apply(&self, y: &[u64], m: u64) -> Vec<u64> {
        let mut x = y.to_vec();
        for (t, scale, terms, shift) in &self.rows {
            let mut v = add_mod(mul_mod(*scale, y[*t], m), *shift, m);
            for &(s, c) in terms {
                v = add_mod(v, mul_mod(c, y[s], m), m);
            }
            x[*t] = v;
        }
        x
    }
}

/// Checks `before(T(y)) = after(y)` at `samples` random points.
pub fn check_substitution(
    before: &QuadraticForm,
    after: &QuadraticForm,
    map: &AffineMap,
    rng: &mut impl Rng,
    samples: usize,
) -> bool {
    let m = before.modulus;
    (0..samples).all(|_| {
        let y: Vec<u64> = (0..after.n).map(|_| rng.gen_range(0..m)).collect();
        before.eval(&map.apply(&y, m)) == after.eval(&y)
    })
}
