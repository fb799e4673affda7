//! Direct summation over tetrahedron labelings.
//!
//! Labels are assigned along a static plan: a label is forced whenever a
//! constraint has exactly one open variable with coefficient `±1`, and
//! otherwise the open variable occurring in the most constraints is
//! branched on. Forcing only skips labelings whose weight is zero.

use std::collections::HashMap;

use super::tensor::{BoundaryTensor, SlotKind};
use super::{pentachora, EvalConfig, WeightModel};
use crate::cyclotomic::{CycInt, Scalar};
use crate::delta_complex::DeltaComplex;
use crate::error::{Error, Result};
use crate::modular::{add_mod, mul_mod, neg_mod};

/// `Σ c_v x_v ≡ 0 (mod N)` with nonzero reduced coefficients.
#[derive(Clone, Debug)]
struct Relation {
    terms: Vec<(usize, u64)>,
}

fn relation(n: u64, raw: &[(usize, i64)]) -> Relation {
    let mut terms: Vec<(usize, u64)> = Vec::new();
    for &(v, c) in raw {
        let c = c.rem_euclid(n as i64) as u64;
        match terms.iter_mut().find(|(w, _)| *w == v) {
            Some(t) => t.1 = add_mod(t.1, c, n),
            None => terms.push((v, c)),
        }
    }
    terms.retain(|t| t.1 != 0);
    Relation { terms }
}

#[derive(Clone, Debug)]
enum Step {
    Branch(usize),
    /// Variable solved from a relation in which it is the last open one.
    Force(usize, usize),
}

struct Plan {
    steps: Vec<(Step, Vec<usize>)>,
    branches: usize,
}

fn plan(n: u64, vars: usize, rels: &[Relation]) -> Plan {
    let mut assigned = vec![false; vars];
    let mut open: Vec<usize> = rels.iter().map(|r| r.terms.len()).collect();
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); vars];
    for (k, r) in rels.iter().enumerate() {
        for &(v, _) in &r.terms {
            occurs[v].push(k);
        }
    }
    let unit = |c: u64| c == 1 || c == n - 1;
    let mut steps = Vec::new();
    let mut branches = 0;
    for _ in 0..vars {
        let forced = rels.iter().enumerate().find_map(|(k, r)| {
            if open[k] != 1 {
                return None;
            }
            let &(v, c) = r.terms.iter().find(|(v, _)| !assigned[*v])?;
            unit(c).then_some((v, k))
        });
        let step = match forced {
            Some((v, k)) => Step::Force(v, k),
            None => {
                let v = (0..vars)
                    .filter(|&v| !assigned[v])
                    .max_by_key(|&v| (occurs[v].iter().filter(|&&k| open[k] > 0).count(), std::cmp::Reverse(v)))
                    .expect("an open variable remains");
                branches += 1;
                Step::Branch(v)
            }
        };
        let v = match step {
            Step::Branch(v) | Step::Force(v, _) => v,
        };
        assigned[v] = true;
        let mut closed = Vec::new();
        for &k in &occurs[v] {
            open[k] -= 1;
            if open[k] == 0 && !matches!(step, Step::Force(_, f) if f == k) {
                closed.push(k);
            }
        }
        closed.dedup();
        steps.push((step, closed));
    }
    Plan { steps, branches }
}

struct Search<'a> {
    n: u64,
    rels: &'a [Relation],
    plan: &'a Plan,
    faces: &'a [[usize; 5]],
    signs: &'a [i8],
    boundary: &'a [usize],
    labels: Vec<u64>,
    counts: HashMap<Vec<u32>, Vec<u64>>,
}

impl Search<'_> {
    fn holds(&self, k: usize) -> bool {
        let n = self.n;
        self.rels[k].terms.iter().fold(0, |acc, &(v, c)| add_mod(acc, mul_mod(c, self.labels[v], n), n)) == 0
    }

    fn run(&mut self, depth: usize) {
        let n = self.n;
        if depth == self.plan.steps.len() {
            let mut phase = 0i64;
            for (f, &s) in self.faces.iter().zip(self.signs) {
                phase += s as i64 * (self.labels[f[0]] * self.labels[f[4]] % n) as i64;
            }
            let phase = phase.rem_euclid(n as i64) as usize;
            let key: Vec<u32> = self.boundary.iter().map(|&c| self.labels[c] as u32).collect();
            self.counts.entry(key).or_insert_with(|| vec![0; n as usize])[phase] += 1;
            return;
        }
        let plan = self.plan;
        let (step, checks) = &plan.steps[depth];
        match *step {
            Step::Branch(v) => {
                for x in 0..n {
                    self.labels[v] = x;
                    if checks.iter().all(|&k| self.holds(k)) {
                        self.run(depth + 1);
                    }
                }
            }
            Step::Force(v, k) => {
                let mut rest = 0;
                let mut coeff = 1;
                for &(w, c) in &self.rels[k].terms {
                    if w == v {
                        coeff = c;
                    } else {
                        rest = add_mod(rest, mul_mod(c, self.labels[w], n), n);
                    }
                }
                // coeff is ±1, its own inverse
                self.labels[v] = mul_mod(neg_mod(rest, n), coeff, n);
                if checks.iter().all(|&k| self.holds(k)) {
                    self.run(depth + 1);
                }
            }
        }
    }
}

/// Boundary tensor of an oriented 4-complex by direct summation. For a
/// closed complex the tensor has rank 0 and its entry is `M_ω(X)`.
pub fn brute_force_evaluate(x: &DeltaComplex, model: &WeightModel, cfg: &EvalConfig) -> Result<BoundaryTensor> {
    let data = pentachora(x)?;
    let n = model.order();
    let ring = model.spec.ring();
    let rels: Vec<Relation> = data
        .faces
        .iter()
        .flat_map(|f| {
            [relation(n, &[(f[1], 1), (f[0], -1), (f[2], -1)]), relation(n, &[(f[3], 1), (f[2], -1), (f[4], -1)])]
        })
        .collect();
    let plan = plan(n, data.tetra_count, &rels);
    let estimate = super::term_estimate(n, plan.branches);
    if estimate > cfg.budget as f64 {
        return Err(Error::BudgetExceeded { estimate, budget: cfg.budget });
    }
    let boundary: Vec<usize> = data.boundary.iter().map(|&s| x.face_class(s)).collect();
    let kinds = data.boundary.iter().map(|s| SlotKind::of(s.face, data.signs[s.top])).collect();

    let mut search = Search {
        n,
        rels: &rels,
        plan: &plan,
        faces: &data.faces,
        signs: &data.signs,
        boundary: &boundary,
        labels: vec![0; data.tetra_count],
        counts: HashMap::new(),
    };
    // relations that are identically zero never get checked, which is right
    search.run(0);

    let half_power = (x.top_count() + 2 * data.internal_vertices) as u32;
    let stride = 2 * model.spec.power();
    let mut out = BoundaryTensor::new(ring, data.boundary.clone(), kinds);
    for (key, counts) in search.counts {
        let cyc = CycInt::from_exponent_counts(ring, &counts, stride);
        out.insert(key, Scalar::new(cyc, half_power));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::cyclotomic::RootSpec;
    use crate::delta_complex::Slot;

    #[test]
    fn single_pentachoron_is_the_weight_tensor() {
        for n in 1..=4 {
            let m = WeightModel::new(RootSpec::principal(n));
            for sign in [1i8, -1] {
                let p = DeltaComplex::new(4, 1, &[]).unwrap().with_signs(vec![sign]).unwrap();
                let t = brute_force_evaluate(&p, &m, &EvalConfig::default()).unwrap();
                assert_eq!(t.slots(), (0..5).map(|i| Slot::new(0, i)).collect::<Vec<_>>());
                assert_eq!(t.nonzero_count() as u64, n.pow(3));
                for (k, v) in t.entries() {
                    let labels = [0, 1, 2, 3, 4].map(|i| k[i] as u64);
                    assert_eq!(*v, m.weight_entry(sign, labels));
                }
            }
        }
    }

    #[test]
    fn two_state_pentachoron_entries() {
        // N = 2: eight entries ±2^(-1/2)
        let m = WeightModel::new(RootSpec::principal(2));
        let p = DeltaComplex::new(4, 1, &[]).unwrap().oriented().unwrap();
        let t = brute_force_evaluate(&p, &m, &EvalConfig::default()).unwrap();
        assert_eq!(t.nonzero_count(), 8);
        let ring = m.spec.ring();
        for (k, v) in t.entries() {
            let sign = if k[0] * k[4] == 1 { -1 } else { 1 };
            assert_eq!(*v, Scalar::from_int(ring, sign, 1));
        }
    }

    #[test]
    fn trivial_order_gives_one() {
        let m = WeightModel::new(RootSpec::principal(1));
        for name in ["s4", "s4_6", "s3xs1"] {
            let x = builders::builtin(name).unwrap().oriented().unwrap();
            let v = brute_force_evaluate(&x, &m, &EvalConfig::default()).unwrap().closed_value().unwrap();
            assert_eq!(v, Scalar::one(m.spec.ring()));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let m = WeightModel::new(RootSpec::principal(5));
        let x = builders::builtin("s3xs1").unwrap().oriented().unwrap();
        let r = brute_force_evaluate(&x, &m, &EvalConfig { budget: 10 });
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }
}
