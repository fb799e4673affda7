//! The partition function as a constrained quadratic exponential sum, and
//! its reduction by Gaussian elimination over each prime-power factor of
//! `N`.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::expsum::{exp_sum, ExpSumBackend};
use super::quadratic::{check_substitution, AffineMap, QuadraticForm};
use super::tensor::{BoundaryTensor, SlotKind};
use super::{pentachora, EvalConfig, WeightModel};
use crate::cyclotomic::{CycInt, CyclotomicRing, RootSpec, Scalar};
use crate::delta_complex::{DeltaComplex, Slot};
use crate::error::{Error, Result};
use crate::modular::{crt_components, inv_mod, mul_mod, neg_mod, reduce, valuation};

/// `Σ c_v x_v ≡ 0 (mod N)` over variables followed by parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(usize, i64)>,
}

/// Unknowns are the internal tetrahedron classes; boundary classes are
/// parameters indexed after them.
#[derive(Clone, Debug)]
pub struct ExponentialSum {
    pub spec: RootSpec,
    /// Tetrahedron class of each variable.
    pub variables: Vec<usize>,
    /// Boundary slot of each parameter.
    pub parameters: Vec<Slot>,
    pub parameter_kinds: Vec<SlotKind>,
    pub constraints: Vec<Constraint>,
    /// Exponent of `ω`, over variables then parameters.
    pub phase: QuadraticForm,
    /// Number of `N^(-1/2)` factors (one per pentachoron).
    pub prefactor_half_power: u32,
    /// Number of `N^(-1)` factors (one per internal vertex).
    pub vertex_norm: u32,
}

/// Constraints `rows · x ≡ rhs (mod N)` and phase exponent on `n` unknowns.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub modulus: u64,
    pub rows: Vec<Vec<i64>>,
    pub rhs: Vec<i64>,
    pub phase: QuadraticForm,
}

pub fn build_exponential_sum(x: &DeltaComplex, model: &WeightModel) -> Result<ExponentialSum> {
    let data = pentachora(x)?;
    let n = model.order();
    let boundary_classes: Vec<usize> = data.boundary.iter().map(|&s| x.face_class(s)).collect();
    let mut index = vec![usize::MAX; data.tetra_count];
    let mut variables = Vec::new();
    for c in 0..data.tetra_count {
        if !boundary_classes.contains(&c) {
            index[c] = variables.len();
            variables.push(c);
        }
    }
    for (k, &c) in boundary_classes.iter().enumerate() {
        index[c] = variables.len() + k;
    }
    let total = variables.len() + boundary_classes.len();
    let mut phase = QuadraticForm::new(n, total);
    let mut constraints = Vec::with_capacity(2 * data.faces.len());
    for (f, &s) in data.faces.iter().zip(&data.signs) {
        let v = f.map(|c| index[c]);
        constraints.push(Constraint { terms: vec![(v[1], 1), (v[0], -1), (v[2], -1)] });
        constraints.push(Constraint { terms: vec![(v[3], 1), (v[2], -1), (v[4], -1)] });
        phase.add_quad(v[0], v[4], s as i64);
    }
    Ok(ExponentialSum {
        spec: model.spec.clone(),
        variables,
        parameter_kinds: data.boundary.iter().map(|s| SlotKind::of(s.face, data.signs[s.top])).collect(),
        parameters: data.boundary,
        constraints,
        phase,
        prefactor_half_power: x.top_count() as u32,
        vertex_norm: data.internal_vertices as u32,
    })
}

impl ExponentialSum {
    pub fn order(&self) -> u64 {
        self.spec.order()
    }

    /// Fixes the parameters to `values`, leaving a system in the variables.
    pub fn specialize(&self, values: &[u64]) -> LinearSystem {
        assert_eq!(values.len(), self.parameters.len());
        let nv = self.variables.len();
        let mut rows = Vec::with_capacity(self.constraints.len());
        let mut rhs = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            let mut row = vec![0i64; nv];
            let mut d = 0i64;
            for &(v, k) in &c.terms {
                if v < nv {
                    row[v] += k;
                } else {
                    d -= k * values[v - nv] as i64;
                }
            }
            rows.push(row);
            rhs.push(d);
        }
        let mut phase = self.phase.clone();
        for (k, &val) in values.iter().enumerate() {
            phase.substitute_affine(nv + k, 0, val);
        }
        let keep: Vec<usize> = (0..nv).collect();
        LinearSystem { modulus: self.order(), rows, rhs, phase: phase.restrict(&keep) }
    }
}

/// One prime-power factor `q = p^e` of the reduced sum: the value is
/// `Σ_{y ∈ (Z/q)^f} ζ_q^{form(y)} / p^multiplicity`.
#[derive(Clone, Debug)]
pub struct ReducedComponent {
    pub prime: u64,
    pub exponent: u32,
    pub modulus: u64,
    pub form: QuadraticForm,
    pub multiplicity: u32,
}

impl ReducedComponent {
    pub fn free_variables(&self) -> usize {
        self.form.num_vars()
    }
}

#[derive(Clone, Debug)]
pub struct ReducedSum {
    pub components: Vec<ReducedComponent>,
    pub consistent: bool,
}

impl ReducedSum {
    /// `Σ_{x : constraints hold} ω^{phase(x)}` as a cyclotomic integer.
    pub fn evaluate(&self, ring: &Arc<CyclotomicRing>, backend: ExpSumBackend, budget: u64) -> Result<CycInt> {
        if !self.consistent {
            return Ok(CycInt::zero(ring));
        }
        let mut value = CycInt::one(ring);
        let mut divisor = BigInt::from(1);
        for c in &self.components {
            value = &value * &exp_sum(&c.form, ring, backend, budget)?;
            divisor *= num_traits::pow(BigInt::from(c.prime), c.multiplicity as usize);
        }
        value.div_exact(&divisor).ok_or_else(|| Error::Internal(format!("reduced sum not divisible by {divisor}")))
    }
}

/// Solves the constraints over every prime-power factor of `N` and
/// substitutes the solutions into the phase. Every substitution is checked
/// at random points; a failed check is reported as an internal error.
pub fn eliminate(system: &LinearSystem, spec: &RootSpec) -> Result<ReducedSum> {
    let n = system.modulus;
    let a = spec.power() % n.max(1);
    let mut components = Vec::new();
    for comp in crt_components(n) {
        let q = comp.modulus;
        let form = system.phase.scaled_mod(q, mul_mod(a % q, comp.cofactor_inverse, q));
        let rows = system.rows.iter().map(|r| r.iter().map(|&c| reduce(c, q)).collect()).collect();
        let rhs = system.rhs.iter().map(|&d| reduce(d, q)).collect();
        match eliminate_component(rows, rhs, form, comp.prime, comp.exponent)? {
            Some(c) => components.push(c),
            None => return Ok(ReducedSum { components: Vec::new(), consistent: false }),
        }
    }
    Ok(ReducedSum { components, consistent: true })
}

/// `Ok(None)` when the constraints have no solution modulo `p^e`.
fn eliminate_component(
    mut rows: Vec<Vec<u64>>,
    mut rhs: Vec<u64>,
    mut form: QuadraticForm,
    p: u64,
    e: u32,
) -> Result<Option<ReducedComponent>> {
    let q = p.pow(e);
    let n = form.num_vars();
    let mut fixed = vec![false; n];
    let mut multiplicity = 0;
    let mut live: Vec<usize> = (0..rows.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xe11 ^ q);

    loop {
        let mut consistent = true;
        live.retain(|&r| {
            if rows[r].iter().any(|&c| c != 0) {
                return true;
            }
            consistent &= rhs[r] == 0;
            false
        });
        if !consistent {
            return Ok(None);
        }
        let Some((r, c, k)) = pivot(&rows, &live, p, e) else { break };

        let pk = p.pow(k);
        let uinv = inv_mod(rows[r][c] / pk, q).expect("unit part");
        let pivot_row = rows[r].clone();
        for &r2 in &live {
            if r2 == r || rows[r2][c] == 0 {
                continue;
            }
            let f = mul_mod(rows[r2][c] / pk, uinv, q);
            for (x, &y) in rows[r2].iter_mut().zip(&pivot_row) {
                *x = (*x + q - mul_mod(f, y, q)) % q;
            }
            rhs[r2] = (rhs[r2] + q - mul_mod(f, rhs[r], q)) % q;
        }

        // x_c → x_c - t x_l clears the rest of the pivot row; column c is
        // zero outside it, so no other row changes
        let before = form.clone();
        let mut terms = Vec::new();
        for l in 0..n {
            if l == c || rows[r][l] == 0 {
                continue;
            }
            let t = neg_mod(mul_mod(rows[r][l] / pk, uinv, q), q);
            form.substitute_add(c, l, t);
            rows[r][l] = 0;
            terms.push((l, t));
        }

        // p^k u x_c ≡ d: x_c = x_0 + p^(e-k) w with w free, each solution
        // counted p^(e-k) times
        let d = rhs[r];
        if valuation(d, p, e) < k {
            return Ok(None);
        }
        let low = p.pow(e - k);
        let x0 = mul_mod((d / pk) % low, uinv % low, low);
        let scale = if k == 0 { 0 } else { low };
        form.substitute_affine(c, scale, x0);
        if k == 0 {
            fixed[c] = true;
        } else {
            multiplicity += e - k;
        }
        let mut map = AffineMap::new();
        map.set(c, scale, terms, x0);
        if !check_substitution(&before, &form, &map, &mut rng, 16) {
            return Err(Error::Internal("elimination substitution changed the phase".into()));
        }
        rows[r][c] = 0;
        live.retain(|&x| x != r);
    }

    let free: Vec<usize> = (0..n).filter(|&v| !fixed[v]).collect();
    Ok(Some(ReducedComponent { prime: p, exponent: e, modulus: q, form: form.restrict(&free), multiplicity }))
}

/// Entry of least valuation among live rows (first in row-major order).
fn pivot(rows: &[Vec<u64>], live: &[usize], p: u64, e: u32) -> Option<(usize, usize, u32)> {
    let mut best: Option<(usize, usize, u32)> = None;
    for &r in live {
        for (c, &x) in rows[r].iter().enumerate() {
            if x == 0 {
                continue;
            }
            let v = valuation(x, p, e);
            if best.is_none_or(|b| v < b.2) {
                best = Some((r, c, v));
                if v == 0 {
                    return best;
                }
            }
        }
    }
    best
}

/// Boundary tensor through elimination, one boundary labeling at a time.
pub fn elimination_tensor(
    x: &DeltaComplex,
    model: &WeightModel,
    backend: ExpSumBackend,
    cfg: &EvalConfig,
) -> Result<BoundaryTensor> {
    let es = build_exponential_sum(x, model)?;
    let n = model.order();
    let ring = model.spec.ring();
    let np = es.parameters.len();
    let estimate = super::term_estimate(n, np);
    if estimate > cfg.budget as f64 {
        return Err(Error::BudgetExceeded { estimate, budget: cfg.budget });
    }
    let half_power = es.prefactor_half_power + 2 * es.vertex_norm;
    let mut out = BoundaryTensor::new(ring, es.parameters.clone(), es.parameter_kinds.clone());
    let mut values = vec![0u64; np];
    loop {
        let reduced = eliminate(&es.specialize(&values), &model.spec)?;
        let cyc = reduced.evaluate(ring, backend, cfg.budget)?;
        out.insert(values.iter().map(|&v| v as u32).collect(), Scalar::new(cyc, half_power));
        let mut i = 0;
        loop {
            if i == np {
                return Ok(out);
            }
            values[i] += 1;
            if values[i] < n {
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}
