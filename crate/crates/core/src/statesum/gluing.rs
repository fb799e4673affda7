//! Gluing two complexes along matched boundary slots.

use crate::delta_complex::{DeltaComplex, Slot};
use crate::error::{Error, Result};

/// Disjoint union of `x` and `y` with each pair `(slot of x, slot of y)` of
/// `matching` glued. The top simplices of `y` are renumbered after those of
/// `x`. Signs survive when both inputs carry them and they stay consistent
/// across the new gluings.
pub fn glue(x: &DeltaComplex, y: &DeltaComplex, matching: &[(Slot, Slot)]) -> Result<DeltaComplex> {
    for &(a, b) in matching {
        if x.partner(a).is_some() {
            return Err(Error::SlotAlreadyGlued(a));
        }
        if y.partner(b).is_some() {
            return Err(Error::SlotAlreadyGlued(b));
        }
    }
    let union = x.disjoint_union(y)?;
    let shift = x.top_count();
    let extra: Vec<(Slot, Slot)> = matching.iter().map(|&(a, b)| (a, Slot::new(b.top + shift, b.face))).collect();
    let glued = union.with_extra_gluings(&extra)?;
    Ok(match union.signs() {
        Some(s) if glued.signs_consistent(s) => glued.with_signs(s.to_vec())?,
        _ => glued,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::cyclotomic::{RootSpec, Scalar};
    use crate::statesum::{brute_force_evaluate, invariant, Backend, EvalConfig, WeightModel};

    fn pentachoron(sign: i8) -> DeltaComplex {
        DeltaComplex::new(4, 1, &[]).unwrap().with_signs(vec![sign]).unwrap()
    }

    #[test]
    fn two_pentachora_glue_to_the_sphere() {
        let matching: Vec<_> = (0..5).map(|i| (Slot::new(0, i), Slot::new(0, i))).collect();
        let g = glue(&pentachoron(1), &pentachoron(-1), &matching).unwrap();
        assert_eq!(g.gluings(), builders::two_pentachora_sphere().gluings());
        assert_eq!(g.signs(), Some(&[1i8, -1][..]));
        for n in 1..=5 {
            let m = WeightModel::new(RootSpec::principal(n));
            let v = invariant(&g, &m, true, Backend::default(), &EvalConfig::default()).unwrap();
            assert_eq!(v, Scalar::one(m.spec.ring()));
        }
    }

    #[test]
    fn inconsistent_signs_are_dropped_and_reglue_is_refused() {
        let matching = [(Slot::new(0, 0), Slot::new(0, 0))];
        let g = glue(&pentachoron(1), &pentachoron(1), &matching).unwrap();
        assert!(g.signs().is_none());
        assert!(matches!(
            glue(&g, &pentachoron(1), &[(Slot::new(0, 0), Slot::new(0, 1))]),
            Err(Error::SlotAlreadyGlued(_))
        ));
    }

    #[test]
    fn partial_gluing_matches_direct_contraction() {
        // faces 0, 1, 2 matched i ↔ i; faces 3, 4 of each stay on the boundary
        let matching: Vec<_> = (0..3).map(|i| (Slot::new(0, i), Slot::new(0, i))).collect();
        let g = glue(&pentachoron(1), &pentachoron(-1), &matching).unwrap();
        assert_eq!(g.boundary_info().internal_vertex_count, 0);
        for n in 1..=4u64 {
            let m = WeightModel::new(RootSpec::principal(n));
            let t = brute_force_evaluate(&g, &m, &EvalConfig::default()).unwrap();
            let ring = m.spec.ring();
            for a3 in 0..n {
                for a4 in 0..n {
                    for b3 in 0..n {
                        for b4 in 0..n {
                            let mut sum = Scalar::new(crate::CycInt::zero(ring), 2);
                            for x0 in 0..n {
                                for x1 in 0..n {
                                    for x2 in 0..n {
                                        let p = m.weight_entry(1, [x0, x1, x2, a3, a4]);
                                        let q = m.weight_entry(-1, [x0, x1, x2, b3, b4]);
                                        sum = sum.checked_add(&(&p * &q)).unwrap();
                                    }
                                }
                            }
                            let key = [a3, a4, b3, b4].map(|v| v as u32);
                            assert_eq!(t.get(&key), sum, "N={n} {key:?}");
                        }
                    }
                }
            }
        }
    }
}
