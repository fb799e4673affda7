//! Concrete triangulations: spheres, the circle, staircase products and
//! simplicial complexes given as facet lists (including the shipped 9-vertex
//! ℂP²).

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::delta_complex::{DeltaComplex, Slot};
use crate::error::{Error, Result};

/// The 9-vertex triangulation of ℂP² (36 pentachora).
pub const CP2_FACETS: &str = include_str!("../data/cp2_9.facets");

/// Names accepted by [`builtin`].
pub const BUILTINS: &[&str] = &["s4", "s4_6", "s2xs2", "cp2", "s3xs1", "s2xs1xs1", "t2"];

/// A simplicial complex as a list of facets with sorted vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetList {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertex_count: usize,
    pub facets: Vec<Vec<usize>>,
}

impl FacetList {
    pub fn from_json(text: &str) -> Result<FacetList> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<FacetList> {
        FacetList::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Two pentachora glued face to face: `(A, i) ↔ (B, i)`.
pub fn two_pentachora_sphere() -> DeltaComplex {
    let g: Vec<_> = (0..5).map(|i| (Slot::new(0, i), Slot::new(1, i))).collect();
    DeltaComplex::new(4, 2, &g).expect("valid gluing").with_name("s4")
}

/// `∂Δ^d`, a `(d-1)`-dimensional sphere with `d + 1` facets (`d ≥ 2`).
pub fn boundary_of_simplex(d: usize) -> DeltaComplex {
    assert!(d >= 2, "the boundary of an edge is 0-dimensional");
    let facets = (0..=d).map(|skip| (0..=d).filter(|&v| v != skip).collect()).collect();
    let fl = FacetList { name: None, vertex_count: d + 1, facets };
    from_facet_list(&fl).expect("simplex boundary is a valid facet list")
}

/// One edge with its endpoints identified.
pub fn circle() -> DeltaComplex {
    DeltaComplex::new(1, 1, &[(Slot::new(0, 0), Slot::new(0, 1))]).expect("valid gluing").with_name("circle")
}

/// Builds gluings by matching ridges (facets minus one vertex). Facets must
/// be strictly increasing tuples of equal length.
pub fn from_facet_list(fl: &FacetList) -> Result<DeltaComplex> {
    let Some(first) = fl.facets.first() else {
        return Err(Error::MalformedFacets("empty facet list".into()));
    };
    let width = first.len();
    if width < 2 {
        return Err(Error::MalformedFacets("facets need at least two vertices".into()));
    }
    let mut ridges: HashMap<Vec<usize>, Vec<Slot>> = HashMap::new();
    for (t, f) in fl.facets.iter().enumerate() {
        if f.len() != width {
            return Err(Error::MalformedFacets(format!("facet {t} has {} vertices", f.len())));
        }
        if f.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedFacets(format!("facet {t} is not strictly increasing")));
        }
        if f.iter().any(|&v| v >= fl.vertex_count) {
            return Err(Error::MalformedFacets(format!("facet {t} has a vertex out of range")));
        }
        for i in 0..width {
            let ridge: Vec<usize> = f.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
            ridges.entry(ridge).or_default().push(Slot::new(t, i));
        }
    }
    let mut sorted: Vec<_> = ridges.into_iter().collect();
    sorted.sort();
    let mut gluings = Vec::new();
    for (ridge, slots) in sorted {
        match slots.len() {
            1 => {}
            2 => gluings.push((slots[0], slots[1])),
            count => return Err(Error::OverfullRidge { ridge, count }),
        }
    }
    let out = DeltaComplex::new(width - 1, fl.facets.len(), &gluings)?;
    Ok(match &fl.name {
        Some(n) => out.with_name(n.clone()),
        None => out,
    })
}

/// The shipped 9-vertex ℂP².
pub fn cp2() -> DeltaComplex {
    let fl = FacetList::from_json(CP2_FACETS).expect("shipped asset parses");
    from_facet_list(&fl).expect("shipped asset is a valid facet list").with_name("cp2")
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All monotone staircase paths through a `p × q` grid, as step sequences
/// (`true` = step in the first factor). Lexicographic order, `false < true`.
fn shuffles(p: usize, q: usize) -> Vec<Vec<bool>> {
    fn rec(p: usize, q: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if p == 0 && q == 0 {
            out.push(cur.clone());
            return;
        }
        if q > 0 {
            cur.push(false);
            rec(p, q - 1, cur, out);
            cur.pop();
        }
        if p > 0 {
            cur.push(true);
            rec(p - 1, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(p, q, &mut Vec::new(), &mut out);
    out
}

/// Staircase triangulation of `X × Y`.
///
/// Top simplices are triples `(x, y, σ)` where `σ` is a monotone lattice
/// path from `(0, 0)` to `(p, q)`; the path points are the ordered vertices.
/// Deleting a corner point of the path gives a face shared with the path
/// whose corner is flipped; deleting a point whose column (row) appears
/// nowhere else projects onto a face of `x` (`y`) and is glued according to
/// the factor's gluing.
pub fn staircase_product(x: &DeltaComplex, y: &DeltaComplex) -> DeltaComplex {
    let (p, q) = (x.dim(), y.dim());
    let paths = shuffles(p, q);
    let index: HashMap<Vec<bool>, usize> = paths.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let n_paths = paths.len();
    let top_id = |tx: usize, ty: usize, s: usize| (tx * y.top_count() + ty) * n_paths + s;

    let mut partner: HashMap<Slot, Slot> = HashMap::new();
    for tx in 0..x.top_count() {
        for ty in 0..y.top_count() {
            for (si, steps) in paths.iter().enumerate() {
                let me = top_id(tx, ty, si);
                let len = steps.len();
                for k in 0..=len {
                    let incoming = if k > 0 { Some(steps[k - 1]) } else { None };
                    let outgoing = if k < len { Some(steps[k]) } else { None };
                    let target = match (incoming, outgoing) {
                        (Some(a), Some(b)) if a != b => {
                            let mut flipped = steps.clone();
                            flipped.swap(k - 1, k);
                            Some(Slot::new(top_id(tx, ty, index[&flipped]), k))
                        }
                        _ => {
                            let horizontal = incoming.or(outgoing).expect("path has a step");
                            let reduced = drop_point(steps, k);
                            // coordinate of the deleted point in the collapsing direction
                            let coord = steps[..k].iter().filter(|&&s| s == horizontal).count();
                            let (factor, own_top) = if horizontal { (x, tx) } else { (y, ty) };
                            factor.partner(Slot::new(own_top, coord)).map(|fp| {
                                let (lifted, kk) = insert_point(&reduced, horizontal, fp.face);
                                let (nx, ny) = if horizontal { (fp.top, ty) } else { (tx, fp.top) };
                                Slot::new(top_id(nx, ny, index[&lifted]), kk)
                            })
                        }
                    };
                    if let Some(t) = target {
                        partner.insert(Slot::new(me, k), t);
                    }
                }
            }
        }
    }
    let mut gluings: Vec<(Slot, Slot)> = partner.iter().filter(|(a, b)| a < b).map(|(&a, &b)| (a, b)).collect();
    debug_assert!(partner.iter().all(|(a, b)| partner.get(b) == Some(a)));
    gluings.sort();
    let name = match (x.name(), y.name()) {
        (Some(a), Some(b)) => Some(format!("{a} x {b}")),
        _ => None,
    };
    let out = DeltaComplex::new(p + q, x.top_count() * y.top_count() * n_paths, &gluings)
        .expect("product gluing is an involution");
    match name {
        Some(n) => out.with_name(n),
        None => out,
    }
}

/// Step sequence after deleting point `k`, whose adjacent steps both run in
/// the same direction.
fn drop_point(steps: &[bool], k: usize) -> Vec<bool> {
    let len = steps.len();
    if k == 0 {
        steps[1..].to_vec()
    } else if k == len {
        steps[..len - 1].to_vec()
    } else {
        let mut out = steps[..k - 1].to_vec();
        out.push(steps[k]);
        out.extend_from_slice(&steps[k + 1..]);
        out
    }
}

/// Re-inserts the missing coordinate `missing` in direction `horizontal`.
/// Returns the lifted path and the index of the inserted point.
fn insert_point(reduced: &[bool], horizontal: bool, missing: usize) -> (Vec<bool>, usize) {
    if missing == 0 {
        let mut out = vec![horizontal];
        out.extend_from_slice(reduced);
        return (out, 0);
    }
    // the step from coordinate missing-1 to missing in the reduced path
    let mut seen = 0;
    for (j, &s) in reduced.iter().enumerate() {
        if s == horizontal {
            seen += 1;
            if seen == missing {
                let mut out = reduced[..j].to_vec();
                out.push(horizontal);
                out.push(horizontal);
                out.extend_from_slice(&reduced[j + 1..]);
                return (out, j + 1);
            }
        }
    }
    // missing is the last coordinate
    let mut out = reduced.to_vec();
    out.push(horizontal);
    let k = out.len();
    (out, k)
}

/// Builtin complexes by name.
pub fn builtin(name: &str) -> Result<DeltaComplex> {
    let c = match name {
        "s4" => two_pentachora_sphere(),
        "s4_6" => boundary_of_simplex(5).with_name("s4_6"),
        "s2xs2" => staircase_product(&boundary_of_simplex(3), &boundary_of_simplex(3)),
        "cp2" => cp2(),
        "s3xs1" => staircase_product(&boundary_of_simplex(4), &circle()),
        "s2xs1xs1" => staircase_product(&staircase_product(&boundary_of_simplex(3), &circle()), &circle()),
        "t2" => staircase_product(&circle(), &circle()),
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    };
    Ok(c.with_name(name))
}
