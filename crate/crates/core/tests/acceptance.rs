//! Acceptance suite: one PASS/FAIL line per criterion, with the elapsed time
//! against the time limit. Exits non-zero if any gate fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rootsum_core::builders::{self, binomial};
use rootsum_core::relations::{
    pachner_ball_pair, verify_lemma1, verify_matrix_relations, verify_pachner, MatrixRelation, PachnerKind,
};
use rootsum_core::statesum::{
    brute_force_evaluate, elimination_tensor, exp_sum, invariant, Backend, EvalConfig, ExpSumBackend, QuadraticForm,
    WeightModel,
};
use rootsum_core::table::{self, gauss_sum};
use rootsum_core::{CyclotomicRing, DeltaComplex, Result, RootSpec, Scalar};

const REDUCE: Backend = Backend::Eliminate(ExpSumBackend::Reduce);
const ENUMERATE: Backend = Backend::Eliminate(ExpSumBackend::Enumerate);

/// Outcome of one criterion: `Ok(detail)` passes, `Err(detail)` fails.
type Outcome = std::result::Result<String, String>;

fn specs(max: u64) -> Vec<RootSpec> {
    (1..=max)
        .flat_map(|n| RootSpec::primitive_powers(n).into_iter().map(move |a| RootSpec::new(n, a as i64).unwrap()))
        .collect()
}

fn cfg() -> EvalConfig {
    EvalConfig::default()
}

fn closed(name: &str) -> DeltaComplex {
    builders::builtin(name).unwrap().oriented().unwrap()
}

fn normalized(x: &DeltaComplex, spec: &RootSpec, backend: Backend) -> Result<Scalar> {
    invariant(x, &WeightModel::new(spec.clone()), true, backend, &cfg())
}

fn check(ok: bool, what: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn err(e: rootsum_core::Error) -> String {
    e.to_string()
}

fn identity_suite() -> Outcome {
    let mut count = 0;
    for spec in specs(5) {
        for s in [spec.clone(), spec.other_square_root()] {
            let r = verify_lemma1(&s);
            check(r.all_hold(), || format!("branching symmetries {:?} at N={} a={}", r.holds(), s.order(), s.power()))?;
            count += 1;
        }
        for kind in PachnerKind::ALL {
            check(verify_pachner(kind, &spec), || {
                format!("Pachner {} at N={} a={}", kind.name(), spec.order(), spec.power())
            })?;
            count += 1;
        }
        for kind in MatrixRelation::ALL {
            check(verify_matrix_relations(kind, &spec), || {
                format!("{} at N={} a={}", kind.name(), spec.order(), spec.power())
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} identity checks"))
}

fn sphere() -> Outcome {
    let x = closed("s4");
    for n in 1..=7 {
        let spec = RootSpec::principal(n);
        let ring = spec.ring();
        for backend in [Backend::Brute, REDUCE, ENUMERATE] {
            let v = normalized(&x, &spec, backend).map_err(err)?;
            check(v == Scalar::one(ring), || format!("N={n} {backend:?}: {}", v.short_string()))?;
            let raw = invariant(&x, &WeightModel::new(spec.clone()), false, backend, &cfg()).map_err(err)?;
            check(raw == Scalar::from_int(ring, 1, 6), || format!("unnormalized N={n}: {}", raw.short_string()))?;
        }
    }
    Ok("normalized 1, unnormalized N^-3, three backends".into())
}

fn expect_row(name: &str, orders: &[u64], backend: Backend) -> Outcome {
    let x = closed(name);
    let mut seen = Vec::new();
    for &n in orders {
        let spec = RootSpec::principal(n);
        let v = normalized(&x, &spec, backend).map_err(err)?;
        let expected = table::expected_values(name, &spec).unwrap();
        check(expected.contains(&v), || {
            format!("N={n}: got {}, expected {}", v.short_string(), expected[0].short_string())
        })?;
        seen.push(format!("N={n}:{}", v.short_string()));
    }
    Ok(seen.join(" "))
}

fn cp2() -> Outcome {
    let x = closed("cp2");
    let mut which = Vec::new();
    for n in 1..=5 {
        let spec = RootSpec::principal(n);
        let v = normalized(&x, &spec, REDUCE).map_err(err)?;
        let g = gauss_sum(&spec);
        let tag = if v == g {
            "formula"
        } else if v == g.conj() {
            "conjugate"
        } else {
            return Err(format!("N={n}: got {}, expected {}", v.short_string(), g.short_string()));
        };
        which.push(format!("N={n}:{tag}"));
    }
    let at2 = normalized(&x, &RootSpec::principal(2), REDUCE).map_err(err)?;
    check(at2.is_zero(), || "N=2 is not zero".into())?;
    let at3 = normalized(&x, &RootSpec::principal(3), REDUCE).map_err(err)?.to_complex(30);
    check(at3.re_f64().abs() < 1e-12 && (at3.im_f64().abs() - 1.0).abs() < 1e-12, || format!("N=3 is {at3}"))?;
    Ok(format!("shipped orientation gives {}; N=3 ~ {}", which.join(" "), at3))
}

fn s2xs1xs1() -> Outcome {
    let a = expect_row("s2xs1xs1", &[2], ENUMERATE)?;
    let b = expect_row("s2xs1xs1", &[2, 3], REDUCE)?;
    Ok(format!("enumerate {a}; reduce {b}"))
}

fn single_pentachoron(sign: i8) -> DeltaComplex {
    DeltaComplex::new(4, 1, &[]).unwrap().with_signs(vec![sign]).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let balls = pachner_ball_pair((3, 3)).map_err(err)?;
    let cases: Vec<(&str, DeltaComplex)> = vec![
        ("s4", closed("s4")),
        ("boundary of the 5-simplex", closed("s4_6")),
        ("pentachoron +", single_pentachoron(1)),
        ("pentachoron -", single_pentachoron(-1)),
        ("(3,3) left ball", balls.left),
        ("(3,3) right ball", balls.right),
    ];
    let mut count = 0;
    for spec in specs(4) {
        let model = WeightModel::new(spec.clone());
        for (name, x) in &cases {
            let brute = brute_force_evaluate(x, &model, &cfg()).map_err(err)?;
            for backend in [ExpSumBackend::Reduce, ExpSumBackend::Enumerate] {
                let elim = elimination_tensor(x, &model, backend, &cfg()).map_err(err)?;
                check(elim == brute, || {
                    format!(
                        "{name} N={} a={} {backend:?}: first difference {:?}",
                        spec.order(),
                        spec.power(),
                        elim.first_difference(&brute)
                    )
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} tensor comparisons"))
}

fn backend_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..1000 {
        let n = rng.gen_range(1..=8u64);
        let divisors: Vec<u64> = (1..=2 * n).filter(|d| (2 * n) % d == 0).collect();
        let m = divisors[rng.gen_range(0..divisors.len())];
        let f = rng.gen_range(0..=6usize);
        let form = QuadraticForm::random(&mut rng, m, f);
        let ring = CyclotomicRing::for_order(n);
        let a = exp_sum(&form, &ring, ExpSumBackend::Reduce, u64::MAX).map_err(err)?;
        let b = exp_sum(&form, &ring, ExpSumBackend::Enumerate, u64::MAX).map_err(err)?;
        check(a == b, || format!("case {case}: N={n} m={m} f={f} {form:?}"))?;
    }
    Ok("1000 random forms".into())
}

fn triangulation_independence() -> Outcome {
    let (a, b) = (closed("s4"), closed("s4_6"));
    for spec in specs(5) {
        let model = WeightModel::new(spec.clone());
        for norm in [false, true] {
            let va = invariant(&a, &model, norm, REDUCE, &cfg()).map_err(err)?;
            let vb = invariant(&b, &model, norm, REDUCE, &cfg()).map_err(err)?;
            check(va == vb, || {
                format!("N={} a={}: {} vs {}", spec.order(), spec.power(), va.short_string(), vb.short_string())
            })?;
        }
    }
    Ok("two-pentachora sphere and boundary of the 5-simplex agree".into())
}

fn builder_checks() -> Outcome {
    let s1 = builders::circle();
    let d3 = builders::boundary_of_simplex(3);
    let d4 = builders::boundary_of_simplex(4);
    let t2 = builders::staircase_product(&s1, &s1);
    let d3s1 = builders::staircase_product(&d3, &s1);
    let pairs = [(&d4, &s1), (&d3, &d3), (&d3s1, &s1), (&d3, &t2), (&s1, &s1)];
    for (x, y) in pairs {
        let p = builders::staircase_product(x, y);
        let r = p.validate();
        check(r.is_closed && r.orientable && r.is_pseudo_manifold, || {
            format!("product is not a closed oriented pseudo-manifold: {r:?}")
        })?;
        check(p.euler_characteristic() == x.euler_characteristic() * y.euler_characteristic(), || {
            "euler characteristic".into()
        })?;
        let tops = x.top_count() * y.top_count() * binomial(x.dim() + y.dim(), x.dim());
        check(p.top_count() == tops, || format!("top count {} != {tops}", p.top_count()))?;
    }
    check(t2.class_counts() == [1, 3, 2], || format!("torus counts {:?}", t2.class_counts()))?;
    let c = builders::cp2();
    let r = c.validate();
    check(r.is_closed && r.orientable && r.is_pseudo_manifold, || format!("cp2 {r:?}"))?;
    check(c.class_counts() == [9, 36, 84, 90, 36], || format!("cp2 counts {:?}", c.class_counts()))?;
    check(c.euler_characteristic() == 3, || "cp2 euler characteristic".into())?;
    let tops: Vec<usize> = ["s2xs2", "s3xs1", "s2xs1xs1"].iter().map(|n| closed(n).top_count()).collect();
    check(tops == [96, 20, 48], || format!("builtin top counts {tops:?}"))?;
    Ok("products, torus and shipped cp2".into())
}

fn sweep_probe() -> Outcome {
    let s4 = table::sweep("s4", 12, REDUCE, &cfg()).map_err(err)?;
    let keys: Vec<&String> = s4.distinct.keys().collect();
    let cp2 = table::sweep("cp2", 12, REDUCE, &cfg()).map_err(err)?;
    println!("      cp2 distinct normalized values over N <= 12: {}", cp2.distinct.len());
    for (key, roots) in &cp2.distinct {
        let at: Vec<String> = roots.iter().map(|(n, a)| format!("({n},{a})")).collect();
        println!("        {key}  at {}", at.join(" "));
    }
    check(keys == ["1"], || format!("s4 values {keys:?}"))?;
    Ok(format!("s4 gives {{1}} over {} roots; cp2 gives {} distinct values", s4.entries.len(), cp2.distinct.len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "identity suite, N <= 5, all powers", limit: secs(60), run: identity_suite },
        Criterion { id: 2, name: "S^4, N <= 7, brute and elimination", limit: secs(5), run: sphere },
        Criterion {
            id: 3,
            name: "S^3 x S^1, N <= 5",
            limit: secs(60),
            run: || expect_row("s3xs1", &[1, 2, 3, 4, 5], REDUCE),
        },
        Criterion { id: 4, name: "CP^2 Gauss sum, N <= 5", limit: secs(600), run: cp2 },
        Criterion {
            id: 5,
            name: "S^2 x S^2, N in {2, 3, 5}",
            limit: secs(1800),
            run: || expect_row("s2xs2", &[2, 3, 5], REDUCE),
        },
        Criterion { id: 6, name: "S^2 x S^1 x S^1, N in {2, 3}", limit: secs(1200), run: s2xs1xs1 },
        Criterion {
            id: 7,
            name: "elimination vs brute force tensors, N <= 4",
            limit: secs(60),
            run: oracle_equivalence,
        },
        Criterion { id: 8, name: "reduce vs enumerate, 1000 random forms", limit: secs(60), run: backend_cross_check },
        Criterion {
            id: 9,
            name: "triangulation independence of S^4, N <= 5",
            limit: secs(10),
            run: triangulation_independence,
        },
        Criterion { id: 10, name: "builders", limit: secs(5), run: builder_checks },
        Criterion { id: 11, name: "sweep probe, N <= 12", limit: Duration::MAX, run: sweep_probe },
    ];
    let mut failures = 0;
    for c in criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let slow = elapsed > c.limit;
        let (ok, detail) = match outcome {
            Ok(d) if slow => (false, format!("{d}; exceeded the time limit of {:?}", c.limit)),
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        failures += usize::from(!ok);
        println!("{} [{:>2}] {} ({:.2?}): {}", if ok { "PASS" } else { "FAIL" }, c.id, c.name, elapsed, detail);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
