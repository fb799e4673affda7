//! The partition function of an oriented 4-dimensional Delta complex.
//!
//! Every tetrahedron carries a label in `Z/N`. A pentachoron with face
//! labels `x_0..x_4` and sign `ε` contributes `N^(-1/2) ω^{ε x_0 x_4}` when
//! `x_1 ≡ x_0 + x_2` and `x_3 ≡ x_2 + x_4`, and zero otherwise. Internal
//! tetrahedra are summed over (contraction is label equality) and each
//! internal vertex contributes `N^(-1)`.

mod brute;
mod eliminate;
mod expsum;
mod gluing;
mod quadratic;
mod tensor;

pub use brute::brute_force_evaluate;
pub use eliminate::{
    build_exponential_sum, eliminate, elimination_tensor, Constraint, ExponentialSum, LinearSystem, ReducedComponent,
    ReducedSum,
};
pub use expsum::{enumerate, exp_sum, reduce, term_estimate, ExpSumBackend, DEFAULT_BUDGET};
pub use gluing::glue;
pub use quadratic::{check_substitution, AffineMap, QuadraticForm};
pub use tensor::{BoundaryTensor, SlotKind};

use crate::cyclotomic::{CycInt, RootSpec, Scalar};
use crate::delta_complex::{DeltaComplex, Slot};
use crate::error::{Error, Result};

/// The root of unity together with the local weight rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightModel {
    pub spec: RootSpec,
}

impl WeightModel {
    pub fn new(spec: RootSpec) -> WeightModel {
        WeightModel { spec }
    }

    pub fn order(&self) -> u64 {
        self.spec.order()
    }

    /// Weight of a pentachoron with sign `sign` and face labels `labels`.
    pub fn weight_entry(&self, sign: i8, labels: [u64; 5]) -> Scalar {
        let n = self.order();
        let ring = self.spec.ring();
        let [x0, x1, x2, x3, x4] = labels.map(|x| x % n);
        if x1 != (x0 + x2) % n || x3 != (x2 + x4) % n {
            return Scalar::new(CycInt::zero(ring), 1);
        }
        let k = (x0 * x4 % n) as i64 * sign as i64;
        Scalar::new(self.spec.omega_pow(k), 1)
    }
}

/// How closed invariants are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Sum over all labelings (with forced-value propagation).
    Brute,
    /// Constraint elimination followed by an exponential sum.
    Eliminate(ExpSumBackend),
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Eliminate(ExpSumBackend::Reduce)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    /// Maximum number of enumerated terms.
    pub budget: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { budget: DEFAULT_BUDGET }
    }
}

/// Per-pentachoron data read off an oriented 4-complex.
#[derive(Clone, Debug)]
pub(crate) struct Pentachora {
    /// Tetrahedron class of each face.
    pub faces: Vec<[usize; 5]>,
    pub signs: Vec<i8>,
    pub tetra_count: usize,
    /// Boundary slots in slot order, one per boundary tetrahedron class.
    pub boundary: Vec<Slot>,
    pub internal_vertices: usize,
}

pub(crate) fn pentachora(x: &DeltaComplex) -> Result<Pentachora> {
    if x.dim() != 4 {
        return Err(Error::WrongDimension { expected: 4, actual: x.dim() });
    }
    let signs = x.signs().ok_or(Error::NotOriented)?.to_vec();
    let faces = (0..x.top_count()).map(|t| std::array::from_fn(|i| x.face_class(Slot::new(t, i)))).collect();
    let info = x.boundary_info();
    Ok(Pentachora {
        faces,
        signs,
        tetra_count: x.class_counts()[3],
        boundary: info.boundary_slots,
        internal_vertices: info.internal_vertex_count,
    })
}

/// `M_ω(X)` for a closed oriented 4-complex; with `normalized`, multiplied
/// by `N^(3χ/2)`.
pub fn invariant(
    x: &DeltaComplex,
    model: &WeightModel,
    normalized: bool,
    backend: Backend,
    cfg: &EvalConfig,
) -> Result<Scalar> {
    if !x.is_closed() {
        return Err(Error::NotClosed(x.boundary_slots().len()));
    }
    let raw = match backend {
        Backend::Brute => brute_force_evaluate(x, model, cfg)?.closed_value()?,
        Backend::Eliminate(b) => {
            let es = build_exponential_sum(x, model)?;
            let system = es.specialize(&[]);
            let reduced = eliminate(&system, &model.spec)?;
            let cyc = reduced.evaluate(model.spec.ring(), b, cfg.budget)?;
            Scalar::new(cyc, es.prefactor_half_power + 2 * es.vertex_norm)
        }
    };
    Ok(if normalized { raw.times_sqrt_n_pow(3 * x.euler_characteristic()) } else { raw })
}
