//! Exhaustive exact checks of the local identities behind the invariant:
//! branching symmetries of the weight tensors, the three Pachner
//! relations, and the Yang–Baxter and twisted pentagon matrix families.
//! Also builds the complementary Pachner balls inside `∂Δ⁵` as complexes.
//!
//! All checks take the weight as a closure returning the `ζ_{2N}`-exponent
//! of an entry (or `None` for zero), so tests can inject perturbations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::cyclotomic::{CycInt, CyclotomicRing, RootSpec, Scalar};
use crate::delta_complex::{DeltaComplex, Slot};
use crate::error::{Error, Result};
use crate::statesum::{brute_force_evaluate, EvalConfig, SlotKind, WeightModel};

/// `ζ_{2N}`-exponent of the weight entry `(sign, x_0..x_4)`, each nonzero
/// entry carrying one factor `N^(-1/2)`.
pub type Weight<'a> = &'a dyn Fn(i8, [u64; 5]) -> Option<u64>;

/// The weight rule of [`WeightModel`] in exponent form.
pub fn standard_weight(spec: &RootSpec) -> impl Fn(i8, [u64; 5]) -> Option<u64> + '_ {
    let n = spec.order();
    move |sign, x| {
        let [x0, x1, x2, x3, x4] = x.map(|v| v % n);
        if x1 != (x0 + x2) % n || x3 != (x2 + x4) % n {
            return None;
        }
        Some(spec.omega_exponent(sign as i64 * (x0 * x4) as i64) as u64)
    }
}

/// The standard weight with the positive entry at `at` multiplied by `ω`.
pub fn perturbed_weight(spec: &RootSpec, at: [u64; 5]) -> impl Fn(i8, [u64; 5]) -> Option<u64> + '_ {
    let base = standard_weight(spec);
    let n2 = 2 * spec.order();
    let bump = spec.omega_exponent(1) as u64;
    move |sign, x| {
        let e = base(sign, x)?;
        Some(if sign > 0 && x == at { (e + bump) % n2 } else { e })
    }
}

fn zeta(ring: &Arc<CyclotomicRing>, e: u64) -> CycInt {
    CycInt::zeta_pow(ring, e as i64)
}

// ---------------------------------------------------------------------------
// Branching operators

/// Dense `N × N` matrix times `N^(-half_power/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OpMatrix {
    pub half_power: u32,
    pub entries: Vec<Vec<CycInt>>,
}

impl OpMatrix {
    fn get(&self, row: usize, col: usize) -> &CycInt {
        &self.entries[row][col]
    }

    pub fn mul(&self, other: &OpMatrix) -> OpMatrix {
        let n = self.entries.len();
        let ring = self.entries[0][0].ring().clone();
        let mut out = vec![vec![CycInt::zero(&ring); n]; n];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                for x in 0..n {
                    *v = &*v + &(self.get(r, x) * other.get(x, c));
                }
            }
        }
        OpMatrix { half_power: self.half_power + other.half_power, entries: out }
    }

    pub fn is_identity(&self) -> bool {
        let n = self.entries.len();
        let ring = self.entries[0][0].ring();
        (0..n).all(|r| {
            (0..n).all(|c| {
                let v = Scalar::new(self.entries[r][c].clone(), self.half_power);
                v == Scalar::from_int(ring, (r == c) as i64, 0)
            })
        })
    }
}

/// `S`, `T` and their inverses `S̄`, `T̄` as matrices `M[row, col]`.
#[derive(Clone, Debug)]
pub struct BranchOperators {
    pub s: OpMatrix,
    pub t: OpMatrix,
    pub s_bar: OpMatrix,
    pub t_bar: OpMatrix,
}

impl BranchOperators {
    pub fn new(spec: &RootSpec) -> BranchOperators {
        let n = spec.order() as i64;
        let ring = spec.ring();
        let dense = |f: &dyn Fn(i64, i64) -> CycInt, hp| OpMatrix {
            half_power: hp,
            entries: (0..n).map(|r| (0..n).map(|c| f(r, c)).collect()).collect(),
        };
        let zero = CycInt::zero(ring);
        let is_neg = |r: i64, c: i64| (r + c).rem_euclid(n) == 0;
        BranchOperators {
            s: dense(&|l, k| spec.phi(k - l), 1),
            s_bar: dense(&|l, k| spec.phi_bar(k - l), 1),
            t: dense(&|r, k| if is_neg(r, k) { spec.phi(k) } else { zero.clone() }, 0),
            t_bar: dense(&|r, k| if is_neg(r, k) { spec.phi_bar(k) } else { zero.clone() }, 0),
        }
    }
}

// ---------------------------------------------------------------------------
// Branching symmetries

/// Dense rank-5 array, index `Σ x_s N^(4-s)` (lexicographic).
#[derive(Clone, Debug)]
struct Tensor5 {
    n: usize,
    half_power: u32,
    data: Vec<CycInt>,
}

impl Tensor5 {
    fn from_weight(ring: &Arc<CyclotomicRing>, n: usize, sign: i8, w: Weight) -> Tensor5 {
        let data = (0..n.pow(5))
            .map(|idx| match w(sign, unindex(n, idx)) {
                Some(e) => zeta(ring, e),
                None => CycInt::zero(ring),
            })
            .collect();
        Tensor5 { n, half_power: 1, data }
    }

    fn apply(&self, slot: usize, op: &OpMatrix) -> Tensor5 {
        let n = self.n;
        let stride = n.pow(4 - slot as u32);
        let ring = self.data[0].ring().clone();
        let mut data = vec![CycInt::zero(&ring); self.data.len()];
        for (idx, out) in data.iter_mut().enumerate() {
            let y = (idx / stride) % n;
            let base = idx - y * stride;
            for x in 0..n {
                let m = op.get(y, x);
                let v = &self.data[base + x * stride];
                if !m.is_zero() && !v.is_zero() {
                    *out = &*out + &(m * v);
                }
            }
        }
        Tensor5 { n, half_power: self.half_power + op.half_power, data }
    }

    /// Swaps slots `a` and `a + 1`.
    fn swap(&self, a: usize) -> Tensor5 {
        let n = self.n;
        let data = (0..self.data.len())
            .map(|idx| {
                let mut x = unindex(n, idx);
                x.swap(a, a + 1);
                self.data[index(n, x)].clone()
            })
            .collect();
        Tensor5 { n, half_power: self.half_power, data }
    }

    fn first_difference(&self, other: &Tensor5) -> Option<[u64; 5]> {
        (0..self.data.len())
            .find(|&i| {
                Scalar::new(self.data[i].clone(), self.half_power)
                    != Scalar::new(other.data[i].clone(), other.half_power)
            })
            .map(|i| unindex(self.n, i))
    }
}

fn unindex(n: usize, mut idx: usize) -> [u64; 5] {
    let mut x = [0u64; 5];
    for s in (0..5).rev() {
        x[s] = (idx % n) as u64;
        idx /= n;
    }
    x
}

fn index(n: usize, x: [u64; 5]) -> usize {
    x.iter().fold(0, |acc, &v| acc * n + v as usize)
}

/// Outcome of the four branching-symmetry equalities; `None` means the
/// equality holds, otherwise the first differing multi-index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma1Report {
    pub witnesses: [Option<[u64; 5]>; 4],
}

impl Lemma1Report {
    pub fn holds(&self) -> [bool; 4] {
        self.witnesses.each_ref().map(Option::is_none)
    }

    pub fn all_hold(&self) -> bool {
        self.witnesses.iter().all(Option::is_none)
    }
}

/// Checks `Q = (P⊗T⊗T̄⊗T)Q̄ = (T⊗P̄⊗S̄⊗S)Q̄ = (S⊗S̄⊗P⊗T)Q̄ = (T⊗T̄⊗T⊗P̄)Q̄`.
pub fn verify_lemma1(spec: &RootSpec) -> Lemma1Report {
    verify_lemma1_with(spec, &standard_weight(spec))
}

pub fn verify_lemma1_with(spec: &RootSpec, w: Weight) -> Lemma1Report {
    let n = spec.order() as usize;
    let ring = spec.ring();
    let q = Tensor5::from_weight(ring, n, 1, w);
    let qbar = Tensor5::from_weight(ring, n, -1, w);
    let ops = BranchOperators::new(spec);
    let (s, t, sb, tb) = (&ops.s, &ops.t, &ops.s_bar, &ops.t_bar);
    let sides = [
        qbar.swap(0).apply(2, t).apply(3, tb).apply(4, t),
        qbar.apply(0, t).swap(1).apply(3, sb).apply(4, s),
        qbar.apply(0, s).apply(1, sb).swap(2).apply(4, t),
        qbar.apply(0, t).apply(1, tb).apply(2, t).swap(3),
    ];
    Lemma1Report { witnesses: sides.map(|side| q.first_difference(&side)) }
}

// ---------------------------------------------------------------------------
// Pachner relations

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PachnerKind {
    ThreeThree,
    TwoFour,
    OneFive,
}

impl PachnerKind {
    pub const ALL: [PachnerKind; 3] = [PachnerKind::ThreeThree, PachnerKind::TwoFour, PachnerKind::OneFive];

    pub fn split(self) -> (usize, usize) {
        match self {
            PachnerKind::ThreeThree => (3, 3),
            PachnerKind::TwoFour => (2, 4),
            PachnerKind::OneFive => (1, 5),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PachnerKind::ThreeThree => "(3,3)",
            PachnerKind::TwoFour => "(2,4)",
            PachnerKind::OneFive => "(1,5)",
        }
    }
}

/// `Q^{up}_{down}` (sign +1) or `Q̄_{up}^{down}` (sign −1), indices named by
/// letters. Labels in slot order are `(up0, down0, up1, down1, up2)`.
#[derive(Clone, Copy, Debug)]
struct Factor {
    sign: i8,
    up: [u8; 3],
    down: [u8; 2],
}

impl Factor {
    fn new(sign: i8, up: &str, down: &str) -> Factor {
        let u = up.as_bytes();
        let d = down.as_bytes();
        Factor { sign, up: [u[0], u[1], u[2]], down: [d[0], d[1]] }
    }

    fn vars(&self) -> [u8; 5] {
        [self.up[0], self.down[0], self.up[1], self.down[1], self.up[2]]
    }
}

/// One side of a relation: `N^(-extra/2) Σ_{summed} Π factors`, as a map
/// from the free indices (in the order given) to values.
struct Contraction {
    factors: Vec<Factor>,
    free: Vec<u8>,
    extra_half_power: u32,
}

impl Contraction {
    fn evaluate(&self, spec: &RootSpec, w: Weight) -> BTreeMap<Vec<u64>, Scalar> {
        let n = spec.order();
        let ring = spec.ring();
        let mut counts: HashMap<Vec<u64>, Vec<u64>> = HashMap::new();
        let mut values: [Option<u64>; 256] = [None; 256];
        self.descend(0, 0, n, w, &mut values, &mut counts);
        let hp = self.factors.len() as u32 + self.extra_half_power;
        counts
            .into_iter()
            .map(|(k, c)| (k, Scalar::new(CycInt::from_exponent_counts(ring, &c, 1), hp)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    fn descend(
        &self,
        depth: usize,
        phase: u64,
        n: u64,
        w: Weight,
        values: &mut [Option<u64>; 256],
        counts: &mut HashMap<Vec<u64>, Vec<u64>>,
    ) {
        let n2 = 2 * n;
        if depth == self.factors.len() {
            let key = self.free.iter().map(|&v| values[v as usize].expect("free index bound")).collect();
            counts.entry(key).or_insert_with(|| vec![0; n2 as usize])[phase as usize] += 1;
            return;
        }
        let f = self.factors[depth];
        let vars = f.vars();
        // the three upper indices determine the entry; loop over the open ones
        let open: Vec<u8> = {
            let mut o: Vec<u8> = f.up.iter().copied().filter(|v| values[*v as usize].is_none()).collect();
            o.dedup();
            o
        };
        let total = n.pow(open.len() as u32);
        for code in 0..total {
            let mut c = code;
            for &v in &open {
                values[v as usize] = Some(c % n);
                c /= n;
            }
            let x0 = values[f.up[0] as usize].unwrap();
            let x2 = values[f.up[1] as usize].unwrap();
            let x4 = values[f.up[2] as usize].unwrap();
            let x = [x0, (x0 + x2) % n, x2, (x2 + x4) % n, x4];
            let mut newly = Vec::new();
            let mut ok = true;
            for (slot, &v) in vars.iter().enumerate() {
                match values[v as usize] {
                    Some(val) if val != x[slot] => ok = false,
                    Some(_) => {}
                    None => {
                        values[v as usize] = Some(x[slot]);
                        newly.push(v);
                    }
                }
            }
            if ok {
                if let Some(e) = w(f.sign, x) {
                    self.descend(depth + 1, (phase + e) % n2, n, w, values, counts);
                }
            }
            for v in newly {
                values[v as usize] = None;
            }
        }
        for &v in &open {
            values[v as usize] = None;
        }
    }
}

fn pachner_sides(kind: PachnerKind) -> (Contraction, Contraction) {
    let q = |u, d| Factor::new(1, u, d);
    let qb = |u, d| Factor::new(-1, u, d);
    match kind {
        PachnerKind::ThreeThree => (
            Contraction {
                factors: vec![q("ilm", "st"), q("sjn", "pu"), q("tuk", "qr")],
                free: b"ijklmnpqr".to_vec(),
                extra_half_power: 0,
            },
            Contraction {
                factors: vec![q("mnk", "st"), q("ljt", "ur"), q("ius", "pq")],
                free: b"ijklmnpqr".to_vec(),
                extra_half_power: 0,
            },
        ),
        PachnerKind::TwoFour => (
            Contraction {
                factors: vec![q("ilm", "vw"), q("vjn", "pu"), q("wuk", "qr"), qb("mnk", "st")],
                free: b"ijlpqrst".to_vec(),
                extra_half_power: 0,
            },
            Contraction {
                factors: vec![q("ljt", "ur"), q("ius", "pq")],
                free: b"ijlpqrst".to_vec(),
                extra_half_power: 0,
            },
        ),
        PachnerKind::OneFive => (
            Contraction {
                factors: vec![q("ilm", "vw"), q("vjn", "px"), q("wxk", "qr"), qb("mnk", "st"), qb("ljt", "ur")],
                free: b"ipqsu".to_vec(),
                // the interior vertex
                extra_half_power: 2,
            },
            Contraction { factors: vec![q("ius", "pq")], free: b"ipqsu".to_vec(), extra_half_power: 0 },
        ),
    }
}

/// Both sides of a Pachner relation, keyed by the free indices: `ijklmnpqr`
/// for (3,3), `ijlpqrst` for (2,4), `ipqsu` for (1,5). Zero entries are
/// omitted.
pub type PachnerSides = (BTreeMap<Vec<u64>, Scalar>, BTreeMap<Vec<u64>, Scalar>);

pub fn pachner_sides_with(kind: PachnerKind, spec: &RootSpec, w: Weight) -> PachnerSides {
    let (l, r) = pachner_sides(kind);
    (l.evaluate(spec, w), r.evaluate(spec, w))
}

fn maps_equal(a: &BTreeMap<Vec<u64>, Scalar>, b: &BTreeMap<Vec<u64>, Scalar>) -> bool {
    a.len() == b.len() && a.iter().all(|(k, v)| b.get(k).is_some_and(|w| v == w))
}

pub fn verify_pachner(kind: PachnerKind, spec: &RootSpec) -> bool {
    verify_pachner_with(kind, spec, &standard_weight(spec))
}

pub fn verify_pachner_with(kind: PachnerKind, spec: &RootSpec, w: Weight) -> bool {
    let (l, r) = pachner_sides_with(kind, spec, w);
    maps_equal(&l, &r)
}

// ---------------------------------------------------------------------------
// Matrix families

/// Sparse square matrix times `N^(-half_power/2)`.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    ring: Arc<CyclotomicRing>,
    dim: usize,
    half_power: u32,
    rows: Vec<BTreeMap<usize, CycInt>>,
}

impl SparseMatrix {
    fn zero(ring: &Arc<CyclotomicRing>, dim: usize, half_power: u32) -> SparseMatrix {
        SparseMatrix { ring: ring.clone(), dim, half_power, rows: vec![BTreeMap::new(); dim] }
    }

    fn add_entry(&mut self, r: usize, c: usize, v: &CycInt) {
        let slot = self.rows[r].entry(c).or_insert_with(|| CycInt::zero(&self.ring));
        *slot = &*slot + v;
        if slot.is_zero() {
            self.rows[r].remove(&c);
        }
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::zero(&self.ring, self.dim, self.half_power + other.half_power);
        for (r, row) in self.rows.iter().enumerate() {
            for (&x, a) in row {
                for (&c, b) in &other.rows[x] {
                    out.add_entry(r, c, &(a * b));
                }
            }
        }
        out
    }

    /// `coeff · N^(-extra/2) · self`.
    fn scaled(&self, coeff: &CycInt, extra: u32) -> SparseMatrix {
        let mut out = SparseMatrix::zero(&self.ring, self.dim, self.half_power + extra);
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, v) in row {
                out.add_entry(r, c, &(coeff * v));
            }
        }
        out
    }

    fn add(&mut self, other: &SparseMatrix) {
        assert_eq!(self.half_power, other.half_power);
        for (r, row) in other.rows.iter().enumerate() {
            for (&c, v) in row {
                self.add_entry(r, c, v);
            }
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        let v = self.rows[r].get(&c).cloned().unwrap_or_else(|| CycInt::zero(&self.ring));
        Scalar::new(v, self.half_power)
    }

    pub fn same_as(&self, other: &SparseMatrix) -> bool {
        self.dim == other.dim
            && (0..self.dim).all(|r| {
                let keys: BTreeSet<usize> = self.rows[r].keys().chain(other.rows[r].keys()).copied().collect();
                keys.into_iter().all(|c| self.get(r, c) == other.get(r, c))
            })
    }

    /// Embeds an `N² × N²` matrix on factors `(a, b)` of `V⊗V⊗V`.
    fn embed(&self, n: usize, a: usize, b: usize) -> SparseMatrix {
        let c = 3 - a - b;
        let mut out = SparseMatrix::zero(&self.ring, n * n * n, self.half_power);
        let pos = |x: [usize; 3]| x[0] * n * n + x[1] * n + x[2];
        for (r, row) in self.rows.iter().enumerate() {
            for (&col, v) in row {
                for z in 0..n {
                    let mut rx = [0; 3];
                    let mut cx = [0; 3];
                    rx[a] = r / n;
                    rx[b] = r % n;
                    cx[a] = col / n;
                    cx[b] = col % n;
                    rx[c] = z;
                    cx[c] = z;
                    out.add_entry(pos(rx), pos(cx), v);
                }
            }
        }
        out
    }
}

/// `L^i`, `M^j`, `R^k`: all three read `Q^{ijk}_{lm}`, with rows indexed by
/// the two remaining upper indices and columns by `(l, m)`.
#[derive(Clone, Debug)]
pub struct LmrMatrices {
    pub n: usize,
    pub l: Vec<SparseMatrix>,
    pub m: Vec<SparseMatrix>,
    pub r: Vec<SparseMatrix>,
}

impl LmrMatrices {
    pub fn new(spec: &RootSpec, w: Weight) -> LmrMatrices {
        let n = spec.order() as usize;
        let ring = spec.ring();
        let mut l = vec![SparseMatrix::zero(ring, n * n, 1); n];
        let mut m = l.clone();
        let mut r = l.clone();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for a in 0..n {
                        for b in 0..n {
                            let x = [i, a, j, b, k].map(|v| v as u64);
                            let Some(e) = w(1, x) else { continue };
                            let z = zeta(ring, e);
                            let col = a * n + b;
                            l[i].add_entry(j * n + k, col, &z);
                            m[j].add_entry(i * n + k, col, &z);
                            r[k].add_entry(i * n + j, col, &z);
                        }
                    }
                }
            }
        }
        LmrMatrices { n, l, m, r }
    }

    /// `L^i_12 M^j_13 R^{k_left}_23 = R^{k_right}_23 M^j_13 L^i_12`.
    pub fn yang_baxter_instance(&self, i: usize, j: usize, k_left: usize, k_right: usize) -> bool {
        let n = self.n;
        let li = self.l[i].embed(n, 0, 1);
        let mj = self.m[j].embed(n, 0, 2);
        let lhs = li.mul(&mj).mul(&self.r[k_left].embed(n, 1, 2));
        let rhs = self.r[k_right].embed(n, 1, 2).mul(&mj).mul(&li);
        lhs.same_as(&rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixRelation {
    YangBaxter,
    TwistedPentagonR,
    TwistedPentagonL,
}

impl MatrixRelation {
    pub const ALL: [MatrixRelation; 3] =
        [MatrixRelation::YangBaxter, MatrixRelation::TwistedPentagonR, MatrixRelation::TwistedPentagonL];

    pub fn name(self) -> &'static str {
        match self {
            MatrixRelation::YangBaxter => "Yang-Baxter",
            MatrixRelation::TwistedPentagonR => "twisted pentagon (R)",
            MatrixRelation::TwistedPentagonL => "twisted pentagon (L)",
        }
    }
}

pub fn verify_matrix_relations(kind: MatrixRelation, spec: &RootSpec) -> bool {
    verify_matrix_relations_with(kind, spec, &standard_weight(spec))
}

pub fn verify_matrix_relations_with(kind: MatrixRelation, spec: &RootSpec, w: Weight) -> bool {
    let lmr = LmrMatrices::new(spec, w);
    let n = lmr.n;
    let ring = spec.ring();
    let idx = |a: usize, b: usize| (a + b) % n;
    let triples = (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))));
    match kind {
        MatrixRelation::YangBaxter => triples.into_iter().all(|(i, j, k)| lmr.yang_baxter_instance(i, j, k, k)),
        MatrixRelation::TwistedPentagonR => {
            let r12: Vec<_> = lmr.r.iter().map(|x| x.embed(n, 0, 1)).collect();
            let r13: Vec<_> = lmr.r.iter().map(|x| x.embed(n, 0, 2)).collect();
            let r23: Vec<_> = lmr.r.iter().map(|x| x.embed(n, 1, 2)).collect();
            triples.into_iter().all(|(m, nn, k)| {
                let lhs = r12[m].mul(&r13[nn]).mul(&r23[k]);
                let mut mid = SparseMatrix::zero(ring, n * n * n, 3);
                for s in 0..n {
                    for t in 0..n {
                        if let Some(e) = w(1, [m, s, nn, t, k].map(|v| v as u64)) {
                            mid.add(&r23[t].mul(&r12[s]).scaled(&zeta(ring, e), 1));
                        }
                    }
                }
                let phase = spec.omega_pow((m * k) as i64);
                let closed = r23[idx(nn, k)].mul(&r12[idx(m, nn)]).scaled(&phase, 1);
                lhs.same_as(&mid) && mid.same_as(&closed)
            })
        }
        MatrixRelation::TwistedPentagonL => {
            let l12: Vec<_> = lmr.l.iter().map(|x| x.embed(n, 0, 1)).collect();
            let l13: Vec<_> = lmr.l.iter().map(|x| x.embed(n, 0, 2)).collect();
            let l23: Vec<_> = lmr.l.iter().map(|x| x.embed(n, 1, 2)).collect();
            triples.into_iter().all(|(i, l, m)| {
                let lhs = l23[m].mul(&l13[l]).mul(&l12[i]);
                let mut mid = SparseMatrix::zero(ring, n * n * n, 3);
                for s in 0..n {
                    for t in 0..n {
                        if let Some(e) = w(1, [i, s, l, t, m].map(|v| v as u64)) {
                            mid.add(&l12[s].mul(&l23[t]).scaled(&zeta(ring, e), 1));
                        }
                    }
                }
                let phase = spec.omega_pow((i * m) as i64);
                let closed = l12[idx(i, l)].mul(&l23[idx(l, m)]).scaled(&phase, 1);
                lhs.same_as(&mid) && mid.same_as(&closed)
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Pachner balls

/// Two complementary 4-balls in `∂Δ⁵` and the matching of their boundary
/// slots (`(slot of left, slot of right)`, through shared vertex subsets).
#[derive(Clone, Debug)]
pub struct BallPair {
    pub left: DeltaComplex,
    pub right: DeltaComplex,
    pub left_facets: Vec<usize>,
    pub right_facets: Vec<usize>,
    pub matching: Vec<(Slot, Slot)>,
}

/// The ball made of the facets `∂_i Δ⁵ = Δ⁵ ∖ {v_i}` for `i` in `facets`.
fn ball(facets: &[usize]) -> Result<DeltaComplex> {
    let mut gluings = Vec::new();
    for (a, &i) in facets.iter().enumerate() {
        for (b, &j) in facets.iter().enumerate().skip(a + 1) {
            // i < j: in ∂_i the vertex v_j sits at position j - 1
            gluings.push((Slot::new(a, j - 1), Slot::new(b, i)));
        }
    }
    DeltaComplex::new(4, facets.len(), &gluings)?.oriented()
}

/// Slot of facet `∂_i` opposite `v_j`.
fn slot_in(facets: &[usize], i: usize, j: usize) -> Slot {
    let top = facets.iter().position(|&f| f == i).expect("facet in ball");
    Slot::new(top, if j < i { j } else { j - 1 })
}

pub fn pachner_ball_pair(split: (usize, usize)) -> Result<BallPair> {
    let (small, swapped) = match split {
        (3, 3) => (vec![0, 2, 4], false),
        (2, 4) => (vec![1, 3], false),
        (4, 2) => (vec![1, 3], true),
        (1, 5) => (vec![1], false),
        (5, 1) => (vec![1], true),
        (k, l) => return Err(Error::InvalidSplit(k, l)),
    };
    let other: Vec<usize> = (0..6).filter(|i| !small.contains(i)).collect();
    let (left_facets, right_facets) = if swapped { (other, small) } else { (small, other) };
    let left = ball(&left_facets)?;
    let mut right = ball(&right_facets)?;

    let mut matching = Vec::new();
    for &i in &left_facets {
        for &j in &right_facets {
            // the tetrahedron Δ⁵ ∖ {v_i, v_j}
            matching.push((slot_in(&left_facets, i, j), slot_in(&right_facets, j, i)));
        }
    }
    matching.sort();

    let kind = |x: &DeltaComplex, s: Slot| SlotKind::of(s.face, x.signs().unwrap()[s.top]);
    let agree = matching.iter().filter(|(a, b)| kind(&left, *a) == kind(&right, *b)).count();
    if agree == 0 {
        right = right.flipped();
    } else if agree != matching.len() {
        return Err(Error::Internal("ball boundaries have mixed index types".into()));
    }
    Ok(BallPair { left, right, left_facets, right_facets, matching })
}

impl BallPair {
    /// Compares the boundary tensors of the two balls by brute force.
    pub fn tensors_agree(&self, model: &WeightModel, cfg: &EvalConfig) -> Result<bool> {
        let a = brute_force_evaluate(&self.left, model, cfg)?;
        let b = brute_force_evaluate(&self.right, model, cfg)?;
        let b = b
            .relabel_to(&a, &self.matching)
            .ok_or_else(|| Error::Internal("boundary matching does not cover both balls".into()))?;
        Ok(a.same_values(&b))
    }
}
