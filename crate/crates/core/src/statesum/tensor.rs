//! Boundary tensors: sparse maps from boundary labelings to values.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cyclotomic::{CyclotomicRing, Scalar};
use crate::delta_complex::Slot;
use crate::error::{Error, Result};

/// Whether a boundary tetrahedron carries a vector (upper) or a dual
/// (lower) index: upper iff `(-1)^face · ε = +1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlotKind {
    Upper,
    Lower,
}

impl SlotKind {
    pub fn of(face: usize, sign: i8) -> SlotKind {
        if face.is_multiple_of(2) == (sign > 0) {
            SlotKind::Upper
        } else {
            SlotKind::Lower
        }
    }
}

#[derive(Clone)]
pub struct BoundaryTensor {
    ring: Arc<CyclotomicRing>,
    slots: Vec<Slot>,
    kinds: Vec<SlotKind>,
    entries: BTreeMap<Vec<u32>, Scalar>,
}

impl BoundaryTensor {
    pub fn new(ring: &Arc<CyclotomicRing>, slots: Vec<Slot>, kinds: Vec<SlotKind>) -> Self {
        assert_eq!(slots.len(), kinds.len());
        BoundaryTensor { ring: ring.clone(), slots, kinds, entries: BTreeMap::new() }
    }

    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    /// Boundary slots, in the order labels are listed.
    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn kinds(&self) -> &[SlotKind] {
        &self.kinds
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    /// Sets an entry; zero values are not stored.
    pub fn insert(&mut self, labels: Vec<u32>, value: Scalar) {
        assert_eq!(labels.len(), self.rank());
        if value.is_zero() {
            self.entries.remove(&labels);
        } else {
            self.entries.insert(labels, value);
        }
    }

    pub fn get(&self, labels: &[u32]) -> Scalar {
        self.entries.get(labels).cloned().unwrap_or_else(|| Scalar::zero(&self.ring))
    }

    /// Nonzero entries in lexicographic label order.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.entries.iter()
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }

    /// The single entry of a rank-0 tensor.
    pub fn closed_value(&self) -> Result<Scalar> {
        if self.rank() != 0 {
            return Err(Error::NotClosed(self.rank()));
        }
        Ok(self.get(&[]))
    }

    /// Reorders the labels: position `k` of the result is position
    /// `order[k]` of `self`, with the slot names replaced by `names`.
    pub fn permuted(&self, order: &[usize], names: Vec<Slot>) -> BoundaryTensor {
        assert_eq!(order.len(), self.rank());
        let kinds = order.iter().map(|&k| self.kinds[k]).collect();
        let mut out = BoundaryTensor::new(&self.ring, names, kinds);
        for (labels, v) in &self.entries {
            out.entries.insert(order.iter().map(|&k| labels[k]).collect(), v.clone());
        }
        out
    }

    /// Expresses `self` in the slot order of `other` through a matching of
    /// `(slot of other, slot of self)` pairs.
    pub fn relabel_to(&self, other: &BoundaryTensor, matching: &[(Slot, Slot)]) -> Option<BoundaryTensor> {
        if matching.len() != self.rank() || other.rank() != self.rank() {
            return None;
        }
        let order = other
            .slots
            .iter()
            .map(|s| {
                let (_, mine) = matching.iter().find(|(a, _)| a == s)?;
                self.slots.iter().position(|x| x == mine)
            })
            .collect::<Option<Vec<_>>>()?;
        Some(self.permuted(&order, other.slots.clone()))
    }

    /// Exact entrywise equality (slot names are not compared).
    pub fn same_values(&self, other: &BoundaryTensor) -> bool {
        self.kinds == other.kinds
            && self.entries.len() == other.entries.len()
            && self.entries.iter().all(|(k, v)| other.entries.get(k).is_some_and(|w| v == w))
    }

    /// First labeling where the two tensors differ.
    pub fn first_difference(&self, other: &BoundaryTensor) -> Option<Vec<u32>> {
        let keys: std::collections::BTreeSet<&Vec<u32>> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter().find(|k| self.get(k) != other.get(k)).cloned()
    }
}

impl PartialEq for BoundaryTensor {
    fn eq(&self, other: &Self) -> bool {
        self.slots == other.slots && self.same_values(other)
    }
}

impl fmt::Debug for BoundaryTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoundaryTensor over {:?} ({} nonzero)", self.slots, self.entries.len())?;
        for (k, v) in &self.entries {
            writeln!(f, "  {k:?} -> {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_follow_face_parity_and_sign() {
        assert_eq!(SlotKind::of(0, 1), SlotKind::Upper);
        assert_eq!(SlotKind::of(1, 1), SlotKind::Lower);
        assert_eq!(SlotKind::of(1, -1), SlotKind::Upper);
        assert_eq!(SlotKind::of(4, -1), SlotKind::Lower);
    }

    #[test]
    fn permutation_and_matching() {
        let ring = CyclotomicRing::for_order(3);
        let a = Slot::new(0, 0);
        let b = Slot::new(0, 1);
        let mut t = BoundaryTensor::new(&ring, vec![a, b], vec![SlotKind::Upper, SlotKind::Lower]);
        t.insert(vec![1, 2], Scalar::from_int(&ring, 5, 0));
        t.insert(vec![0, 0], Scalar::zero(&ring));
        assert_eq!(t.nonzero_count(), 1);

        let c = Slot::new(7, 2);
        let d = Slot::new(7, 3);
        let other = BoundaryTensor::new(&ring, vec![d, c], vec![SlotKind::Lower, SlotKind::Upper]);
        let r = t.relabel_to(&other, &[(c, a), (d, b)]).unwrap();
        assert_eq!(r.slots(), &[d, c]);
        assert_eq!(r.get(&[2, 1]), Scalar::from_int(&ring, 5, 0));
        assert!(r.first_difference(&other).is_some());
        assert!(t.closed_value().is_err());
    }
}
