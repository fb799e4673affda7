//! Delta complexes given by gluing data on top simplices.
//!
//! A complex of dimension `d` has `top_count` top simplices, each with
//! ordered vertices `0..=d`. Face `i` of a top simplex is the face opposite
//! vertex `i`. A gluing pairs two face slots `(t, i) ↔ (t', i')` and
//! identifies the two faces by the unique order-preserving vertex bijection.
//! Unpaired slots form the boundary.
//!
//! The skeleton is derived by union-find over pairs `(top, vertex subset)`:
//! every gluing identifies each subset of one face with the corresponding
//! subset of the other, and the union-find closes this transitively.

use std::collections::VecDeque;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported top dimension; subsets of a top simplex are bitmasks.
pub const MAX_DIM: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub top: usize,
    pub face: usize,
}

impl Slot {
    pub fn new(top: usize, face: usize) -> Slot {
        Slot { top, face }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.top, self.face)
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Vertices of face `face` of a top simplex of dimension `dim`, in order.
fn face_vertices(dim: usize, face: usize) -> impl Iterator<Item = usize> {
    (0..=dim).filter(move |&v| v != face)
}

#[derive(Clone, Debug)]
pub struct DeltaComplex {
    dim: usize,
    top_count: usize,
    name: Option<String>,
    partner: Vec<Option<Slot>>,
    /// Class index (within its dimension) of `(top, mask)`, stored at
    /// `top << (dim + 1) | mask`. Mask 0 is unused.
    class_of: Vec<u32>,
    class_counts: Vec<usize>,
    signs: Option<Vec<i8>>,
}

/// Summary produced by [`DeltaComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub is_pseudo_manifold: bool,
    pub is_closed: bool,
    pub orientable: bool,
    pub class_counts: Vec<usize>,
    pub boundary_slot_count: usize,
    pub euler_characteristic: i64,
}

/// Boundary bookkeeping produced by [`DeltaComplex::boundary_info`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryInfo {
    pub boundary_slots: Vec<Slot>,
    pub internal_vertex_count: usize,
    /// `(d-1)`-classes with two coface slots.
    pub internal_ridges: Vec<usize>,
}

/// On-disk triangulation format.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangulationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub top_count: usize,
    pub gluings: Vec<[[usize; 2]; 2]>,
    /// Orientation sign of each top simplex, when oriented.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<i8>>,
}

impl DeltaComplex {
    /// Builds a complex from gluing pairs and derives its skeleton.
    pub fn new(dim: usize, top_count: usize, gluings: &[(Slot, Slot)]) -> Result<DeltaComplex> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::MalformedGluing { slot: Slot::new(0, dim), reason: "unsupported dimension" });
        }
        let width = dim + 1;
        let mut partner = vec![None; top_count * width];
        for &(a, b) in gluings {
            for s in [a, b] {
                if s.top >= top_count || s.face > dim {
                    return Err(Error::MalformedGluing { slot: s, reason: "slot out of range" });
                }
            }
            if a == b {
                return Err(Error::MalformedGluing { slot: a, reason: "slot glued to itself" });
            }
            for (s, t) in [(a, b), (b, a)] {
                let cell = &mut partner[s.top * width + s.face];
                if cell.is_some() {
                    return Err(Error::MalformedGluing { slot: s, reason: "slot glued twice" });
                }
                *cell = Some(t);
            }
        }
        let mut out = DeltaComplex {
            dim,
            top_count,
            name: None,
            partner,
            class_of: Vec::new(),
            class_counts: Vec::new(),
            signs: None,
        };
        out.derive_skeleton();
        Ok(out)
    }

    fn node(&self, top: usize, mask: u32) -> u32 {
        ((top << (self.dim + 1)) as u32) | mask
    }

    fn derive_skeleton(&mut self) {
        let d = self.dim;
        let per_top = 1usize << (d + 1);
        let mut uf = UnionFind::new(self.top_count * per_top);
        for a in self.slots() {
            let Some(b) = self.partner(a) else { continue };
            if b < a {
                continue;
            }
            let va: Vec<usize> = face_vertices(d, a.face).collect();
            let vb: Vec<usize> = face_vertices(d, b.face).collect();
            for sub in 1u32..(1 << d) {
                let (mut ma, mut mb) = (0u32, 0u32);
                for pos in 0..d {
                    if sub >> pos & 1 == 1 {
                        ma |= 1 << va[pos];
                        mb |= 1 << vb[pos];
                    }
                }
                uf.union(self.node(a.top, ma), self.node(b.top, mb));
            }
        }
        let mut class_of = vec![u32::MAX; self.top_count * per_top];
        let mut root_class = vec![u32::MAX; self.top_count * per_top];
        let mut counts = vec![0usize; d + 1];
        for t in 0..self.top_count {
            for mask in 1..per_top as u32 {
                let n = self.node(t, mask);
                let r = uf.find(n) as usize;
                if root_class[r] == u32::MAX {
                    let k = mask.count_ones() as usize - 1;
                    root_class[r] = counts[k] as u32;
                    counts[k] += 1;
                }
                class_of[n as usize] = root_class[r];
            }
        }
        self.class_of = class_of;
        self.class_counts = counts;
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn top_count(&self) -> usize {
        self.top_count
    }

    /// All slots `(t, i)` in lexicographic order.
    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        let w = self.dim + 1;
        (0..self.top_count * w).map(move |k| Slot::new(k / w, k % w))
    }

    pub fn partner(&self, s: Slot) -> Option<Slot> {
        self.partner[s.top * (self.dim + 1) + s.face]
    }

    /// Gluing pairs, each listed once with the smaller slot first.
    pub fn gluings(&self) -> Vec<(Slot, Slot)> {
        self.slots().filter_map(|a| self.partner(a).filter(|&b| a < b).map(|b| (a, b))).collect()
    }

    /// Class (within dimension `popcount(mask) - 1`) of the face of `top`
    /// spanned by the vertices in `mask`.
    pub fn class_of(&self, top: usize, mask: u32) -> usize {
        debug_assert!(mask != 0 && mask < 1 << (self.dim + 1));
        self.class_of[self.node(top, mask) as usize] as usize
    }

    /// `(d-1)`-class of the face in slot `s`.
    pub fn face_class(&self, s: Slot) -> usize {
        let full = (1u32 << (self.dim + 1)) - 1;
        self.class_of(s.top, full ^ (1 << s.face))
    }

    pub fn vertex_class(&self, top: usize, vertex: usize) -> usize {
        self.class_of(top, 1 << vertex)
    }

    /// Number of classes per dimension `0..=d`.
    pub fn class_counts(&self) -> &[usize] {
        &self.class_counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.class_counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    pub fn boundary_slots(&self) -> Vec<Slot> {
        self.slots().filter(|&s| self.partner(s).is_none()).collect()
    }

    pub fn is_closed(&self) -> bool {
        self.partner.iter().all(Option::is_some)
    }

    pub fn boundary_info(&self) -> BoundaryInfo {
        let boundary_slots = self.boundary_slots();
        let mut on_boundary = vec![false; self.class_counts[0]];
        for s in &boundary_slots {
            for v in face_vertices(self.dim, s.face) {
                on_boundary[self.vertex_class(s.top, v)] = true;
            }
        }
        let mut internal_ridges: Vec<usize> =
            self.slots().filter(|&s| self.partner(s).is_some()).map(|s| self.face_class(s)).collect();
        internal_ridges.sort_unstable();
        internal_ridges.dedup();
        BoundaryInfo {
            boundary_slots,
            internal_vertex_count: on_boundary.iter().filter(|b| !**b).count(),
            internal_ridges,
        }
    }

    /// Slots belonging to each `(d-1)`-class.
    pub fn ridge_cofaces(&self) -> Vec<Vec<Slot>> {
        let mut out = vec![Vec::new(); self.class_counts[self.dim - 1]];
        for s in self.slots() {
            out[self.face_class(s)].push(s);
        }
        out
    }

    pub fn is_pseudo_manifold(&self) -> bool {
        self.ridge_cofaces().iter().all(|c| (1..=2).contains(&c.len()))
    }

    /// Consistent orientation signs by breadth-first propagation across
    /// gluings: `ε(t') = -(-1)^{i+i'} ε(t)`. The lowest-indexed top simplex
    /// of each connected component gets `+1`.
    pub fn orient(&self) -> Result<Vec<i8>> {
        let mut sign = vec![0i8; self.top_count];
        let mut parent = vec![usize::MAX; self.top_count];
        for root in 0..self.top_count {
            if sign[root] != 0 {
                continue;
            }
            sign[root] = 1;
            let mut queue = VecDeque::from([root]);
            while let Some(t) = queue.pop_front() {
                for i in 0..=self.dim {
                    let Some(p) = self.partner(Slot::new(t, i)) else { continue };
                    let parity = if (i + p.face) % 2 == 0 { 1 } else { -1 };
                    let want = -parity * sign[t];
                    if sign[p.top] == 0 {
                        sign[p.top] = want;
                        parent[p.top] = t;
                        queue.push_back(p.top);
                    } else if sign[p.top] != want {
                        return Err(Error::NonOrientable { witness: conflict_cycle(&parent, t, p.top) });
                    }
                }
            }
        }
        Ok(sign)
    }

    /// Checks `(-1)^i ε(t) = -(-1)^{i'} ε(t')` across every gluing.
    pub fn signs_consistent(&self, signs: &[i8]) -> bool {
        signs.len() == self.top_count
            && signs.iter().all(|s| *s == 1 || *s == -1)
            && self.gluings().iter().all(|(a, b)| {
                let sa = if a.face % 2 == 0 { signs[a.top] } else { -signs[a.top] };
                let sb = if b.face % 2 == 0 { signs[b.top] } else { -signs[b.top] };
                sa == -sb
            })
    }

    /// Attaches the signs found by [`orient`](Self::orient), keeping any
    /// signs already present.
    pub fn oriented(mut self) -> Result<DeltaComplex> {
        if self.signs.is_none() {
            self.signs = Some(self.orient()?);
        }
        Ok(self)
    }

    /// Attaches explicit signs after checking them.
    pub fn with_signs(mut self, signs: Vec<i8>) -> Result<DeltaComplex> {
        if signs.len() != self.top_count {
            return Err(Error::InvalidSigns(format!("{} signs for {} top simplices", signs.len(), self.top_count)));
        }
        if let Some(s) = signs.iter().find(|s| s.abs() != 1) {
            return Err(Error::InvalidSigns(format!("sign {s} is not ±1")));
        }
        if !self.signs_consistent(&signs) {
            return Err(Error::NonOrientable { witness: Vec::new() });
        }
        self.signs = Some(signs);
        Ok(self)
    }

    /// Same complex with every sign negated (the opposite orientation).
    pub fn flipped(&self) -> DeltaComplex {
        let mut out = self.clone();
        if let Some(s) = &mut out.signs {
            s.iter_mut().for_each(|x| *x = -*x);
        }
        out
    }

    pub fn signs(&self) -> Option<&[i8]> {
        self.signs.as_deref()
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport {
            is_pseudo_manifold: self.is_pseudo_manifold(),
            is_closed: self.is_closed(),
            orientable: self.orient().is_ok(),
            class_counts: self.class_counts.clone(),
            boundary_slot_count: self.boundary_slots().len(),
            euler_characteristic: self.euler_characteristic(),
        }
    }

    /// Disjoint union; the top simplices of `other` are renumbered after
    /// those of `self`. Signs are kept only if both sides carry them.
    pub fn disjoint_union(&self, other: &DeltaComplex) -> Result<DeltaComplex> {
        if self.dim != other.dim {
            return Err(Error::WrongDimension { expected: self.dim, actual: other.dim });
        }
        let shift = self.top_count;
        let mut gluings = self.gluings();
        gluings.extend(
            other
                .gluings()
                .into_iter()
                .map(|(a, b)| (Slot::new(a.top + shift, a.face), Slot::new(b.top + shift, b.face))),
        );
        let mut out = DeltaComplex::new(self.dim, self.top_count + other.top_count, &gluings)?;
        if let (Some(a), Some(b)) = (&self.signs, &other.signs) {
            out.signs = Some(a.iter().chain(b).copied().collect());
        }
        Ok(out)
    }

    /// Adds gluings between boundary slots. Existing signs are dropped.
    pub fn with_extra_gluings(&self, extra: &[(Slot, Slot)]) -> Result<DeltaComplex> {
        for &(a, b) in extra {
            for s in [a, b] {
                if s.top < self.top_count && s.face <= self.dim && self.partner(s).is_some() {
                    return Err(Error::SlotAlreadyGlued(s));
                }
            }
        }
        let mut gluings = self.gluings();
        gluings.extend_from_slice(extra);
        let mut out = DeltaComplex::new(self.dim, self.top_count, &gluings)?;
        out.name = self.name.clone();
        Ok(out)
    }

    pub fn to_file(&self) -> TriangulationFile {
        TriangulationFile {
            name: self.name.clone(),
            dim: self.dim,
            top_count: self.top_count,
            gluings: self.gluings().into_iter().map(|(a, b)| [[a.top, a.face], [b.top, b.face]]).collect(),
            signs: self.signs.clone(),
        }
    }

    pub fn from_file(file: &TriangulationFile) -> Result<DeltaComplex> {
        let gluings: Vec<(Slot, Slot)> =
            file.gluings.iter().map(|[a, b]| (Slot::new(a[0], a[1]), Slot::new(b[0], b[1]))).collect();
        let mut out = DeltaComplex::new(file.dim, file.top_count, &gluings)?;
        out.name = file.name.clone();
        match &file.signs {
            Some(s) => out.with_signs(s.clone()),
            None => Ok(out),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<DeltaComplex> {
        DeltaComplex::from_file(&serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<DeltaComplex> {
        DeltaComplex::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

/// Cycle of top simplices closed by the conflicting gluing `a — b`.
fn conflict_cycle(parent: &[usize], a: usize, b: usize) -> Vec<usize> {
    let chain = |mut t: usize| {
        let mut out = vec![t];
        while parent[t] != usize::MAX {
            t = parent[t];
            out.push(t);
        }
        out
    };
    let ca = chain(a);
    let cb = chain(b);
    let meet = ca.iter().copied().find(|t| cb.contains(t)).unwrap_or(a);
    let mut cycle: Vec<usize> = ca.iter().copied().take_while(|&t| t != meet).collect();
    cycle.push(meet);
    let tail: Vec<usize> = cb.iter().copied().take_while(|&t| t != meet).collect();
    cycle.extend(tail.into_iter().rev());
    cycle
}
