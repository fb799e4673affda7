//! Closed-form values of the normalized invariant for the builtin closed
//! manifolds, and sweeps over roots of unity.

use std::collections::BTreeMap;

use crate::builders;
use crate::cyclotomic::{CycInt, RootSpec, Scalar};
use crate::error::Result;
use crate::statesum::{invariant, Backend, EvalConfig, WeightModel};

/// Builtins with a closed-form row, in display order.
pub const TABLE_ROWS: &[&str] = &["s4", "s2xs2", "cp2", "s3xs1", "s2xs1xs1"];

/// Human name of a table row.
pub fn manifold_name(builtin: &str) -> &'static str {
    match builtin {
        "s4" | "s4_6" => "S^4",
        "s2xs2" => "S^2 x S^2",
        "cp2" => "CP^2",
        "s3xs1" => "S^3 x S^1",
        "s2xs1xs1" => "S^2 x S^1 x S^1",
        "t2" => "T^2",
        _ => "?",
    }
}

/// `N^(-1/2) Σ_{k=1}^{N} ω^{k²}`.
pub fn gauss_sum(spec: &RootSpec) -> Scalar {
    let n = spec.order() as i64;
    let ring = spec.ring();
    let sum = (1..=n).fold(CycInt::zero(ring), |acc, k| &acc + &spec.omega_pow(k * k));
    Scalar::new(sum, 1)
}

/// Accepted values of `N^(3χ/2) M_ω` for a builtin. `cp2` accepts the
/// formula value or its conjugate, since the sign depends on orientation.
pub fn expected_values(builtin: &str, spec: &RootSpec) -> Option<Vec<Scalar>> {
    let ring = spec.ring();
    let parity = if spec.order().is_multiple_of(2) { 2 } else { 1 };
    Some(match builtin {
        "s4" | "s4_6" | "s3xs1" => vec![Scalar::one(ring)],
        "s2xs2" | "s2xs1xs1" => vec![Scalar::from_int(ring, parity, 0)],
        "cp2" => {
            let g = gauss_sum(spec);
            vec![g.clone(), g.conj()]
        }
        _ => return None,
    })
}

#[derive(Clone, Debug)]
pub struct TableCell {
    pub builtin: String,
    pub spec: RootSpec,
    pub computed: Scalar,
    pub expected: Vec<Scalar>,
    /// Index into `expected` of the matching value.
    pub matched: Option<usize>,
}

impl TableCell {
    pub fn pass(&self) -> bool {
        self.matched.is_some()
    }
}

pub fn table_cell(builtin: &str, spec: &RootSpec, backend: Backend, cfg: &EvalConfig) -> Result<TableCell> {
    let x = builders::builtin(builtin)?.oriented()?;
    let computed = invariant(&x, &WeightModel::new(spec.clone()), true, backend, cfg)?;
    let expected = expected_values(builtin, spec).unwrap_or_default();
    let matched = expected.iter().position(|e| *e == computed);
    Ok(TableCell { builtin: builtin.to_string(), spec: spec.clone(), computed, expected, matched })
}

#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub order: u64,
    pub power: u64,
    pub value: Scalar,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub builtin: String,
    pub entries: Vec<SweepEntry>,
    /// Distinct values, keyed by their rendering (integers exactly, other
    /// values by a 30-digit approximation, since different orders live in
    /// different rings).
    pub distinct: BTreeMap<String, Vec<(u64, u64)>>,
}

/// Key used to compare values across different root orders: the value
/// rounded to 20 decimal digits, so exact values held with different
/// parities (such as `√5 · 5^(-1/2)`) share a key.
pub fn value_key(v: &Scalar) -> String {
    v.to_complex(30).rounded(20).compact_string()
}

/// Normalized invariant for every `N ≤ max_order` and primitive power `a`.
pub fn sweep(builtin: &str, max_order: u64, backend: Backend, cfg: &EvalConfig) -> Result<SweepReport> {
    let x = builders::builtin(builtin)?.oriented()?;
    let mut entries = Vec::new();
    let mut distinct: BTreeMap<String, Vec<(u64, u64)>> = BTreeMap::new();
    for n in 1..=max_order {
        for a in RootSpec::primitive_powers(n) {
            let spec = RootSpec::new(n, a as i64)?;
            let value = invariant(&x, &WeightModel::new(spec), true, backend, cfg)?;
            distinct.entry(value_key(&value)).or_default().push((n, a));
            entries.push(SweepEntry { order: n, power: a, value });
        }
    }
    Ok(SweepReport { builtin: builtin.to_string(), entries, distinct })
}
