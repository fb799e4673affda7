//! `rootsum`: inspect triangulations, compute invariants, reproduce the
//! value table and run the identity checks.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 budget
//! exceeded.

use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rootsum_core::builders::{self, FacetList, BUILTINS};
use rootsum_core::relations::{
    pachner_ball_pair, verify_lemma1, verify_matrix_relations, verify_pachner, MatrixRelation, PachnerKind,
};
use rootsum_core::statesum::{invariant, Backend, EvalConfig, ExpSumBackend, WeightModel, DEFAULT_BUDGET};
use rootsum_core::table::{self, TABLE_ROWS};
use rootsum_core::{DeltaComplex, Error, RootSpec};

/// `println!` that exits quietly when stdout is closed (e.g. piped to `head`).
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(name = "rootsum", version, about = "Exact state sums for a root-of-unity 4d TQFT")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    /// Elimination with the reducing exponential-sum backend.
    Auto,
    /// Direct summation over all labelings.
    Brute,
    /// Elimination, reducing backend.
    Eliminate,
    /// Elimination, then enumeration of the free variables.
    Enumerate,
}

impl BackendArg {
    fn backend(self) -> Backend {
        match self {
            BackendArg::Auto | BackendArg::Eliminate => Backend::Eliminate(ExpSumBackend::Reduce),
            BackendArg::Brute => Backend::Brute,
            BackendArg::Enumerate => Backend::Eliminate(ExpSumBackend::Enumerate),
        }
    }
}

#[derive(clap::Args)]
struct EvalArgs {
    /// Evaluation backend.
    #[arg(long, value_enum, default_value = "auto")]
    backend: BackendArg,
    /// Maximum number of enumerated terms.
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
}

impl EvalArgs {
    fn config(&self) -> EvalConfig {
        EvalConfig { budget: self.budget }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Class counts, Euler characteristic, orientability and boundary.
    Info {
        /// Builtin name or triangulation / facet-list file.
        input: String,
    },
    /// Exact invariant of a closed oriented 4-complex.
    Invariant {
        input: String,
        /// Order N of the root of unity.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        order: u64,
        /// Power a with ω = exp(2πi a/N); gcd(a, N) = 1.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        power: i64,
        /// Multiply by N^(3χ/2).
        #[arg(long)]
        normalized: bool,
        /// Use the opposite orientation.
        #[arg(long)]
        flip_orientation: bool,
        /// Digits of the decimal approximation.
        #[arg(long, default_value_t = 30)]
        digits: u32,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Normalized invariants of the builtin closed manifolds against their
    /// closed forms.
    Table {
        /// Orders, as `K`, `A..B` or `A..=B`.
        #[arg(long, default_value = "1..5", value_parser = parse_orders)]
        orders: RangeInclusive<u64>,
        /// Restrict to some rows.
        #[arg(long, value_delimiter = ',')]
        rows: Vec<String>,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Branching symmetries, Pachner relations and matrix relations.
    Verify {
        #[arg(long, default_value = "1..5", value_parser = parse_orders)]
        orders: RangeInclusive<u64>,
        /// Also compare Pachner ball boundary tensors by brute force up to
        /// this order.
        #[arg(long, default_value_t = 3)]
        balls_up_to: u64,
    },
    /// Staircase product of two complexes.
    Product {
        a: String,
        b: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Normalized invariant over all roots of unity up to an order.
    Sweep {
        input: String,
        #[arg(long, default_value_t = 12)]
        max_order: u64,
        #[command(flatten)]
        eval: EvalArgs,
    },
}

fn parse_orders(s: &str) -> Result<RangeInclusive<u64>, String> {
    let bad = || format!("expected K, A..B or A..=B, got `{s}`");
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let (lo, hi) = if let Some((a, b)) = s.split_once("..=") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once("..") {
        (num(a)?, num(b)?)
    } else {
        (1, num(s)?)
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn load(input: &str) -> Result<DeltaComplex, Error> {
    if BUILTINS.contains(&input) {
        return builders::builtin(input);
    }
    let path = Path::new(input);
    if !path.exists() {
        return Err(Error::UnknownBuiltin(input.to_string()));
    }
    let text = std::fs::read_to_string(path)?;
    match FacetList::from_json(&text) {
        Ok(list) => builders::from_facet_list(&list),
        Err(_) => DeltaComplex::from_json(&text),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cmd: Command) -> Result<u8, Error> {
    match cmd {
        Command::Info { input } => info(&input),
        Command::Invariant { input, order, power, normalized, flip_orientation, digits, eval } => {
            let spec = RootSpec::new(order, power)?;
            let mut x = load(&input)?.oriented()?;
            if flip_orientation {
                x = x.flipped();
            }
            let v = invariant(&x, &WeightModel::new(spec), normalized, eval.backend.backend(), &eval.config())?;
            out!("{}", v.short_string());
            out!("{}", v.reduced());
            out!("{}", v.to_complex(digits));
            Ok(0)
        }
        Command::Table { orders, rows, eval } => table_cmd(orders, &rows, &eval),
        Command::Verify { orders, balls_up_to } => verify(orders, balls_up_to),
        Command::Product { a, b, output } => {
            let p = builders::staircase_product(&load(&a)?, &load(&b)?);
            p.write(&output)?;
            out!(
                "wrote {} ({} top simplices, dimension {}, euler characteristic {})",
                output.display(),
                p.top_count(),
                p.dim(),
                p.euler_characteristic()
            );
            Ok(0)
        }
        Command::Sweep { input, max_order, eval } => {
            let report = table::sweep(&input, max_order, eval.backend.backend(), &eval.config())?;
            for e in &report.entries {
                out!("N={:<3} a={:<3} {}", e.order, e.power, e.value.short_string());
            }
            out!("distinct values: {}", report.distinct.len());
            for (key, roots) in &report.distinct {
                let list: Vec<String> = roots.iter().map(|(n, a)| format!("({n},{a})")).collect();
                out!("  {key}  at {}", list.join(" "));
            }
            Ok(0)
        }
    }
}

fn info(input: &str) -> Result<u8, Error> {
    let x = load(input)?;
    let r = x.validate();
    let b = x.boundary_info();
    if let Some(name) = x.name() {
        out!("name: {name}");
    }
    out!("dimension: {}", x.dim());
    out!("top simplices: {}", x.top_count());
    out!("class counts: {:?}", r.class_counts);
    out!("euler characteristic: {}", r.euler_characteristic);
    out!("pseudo-manifold: {}", r.is_pseudo_manifold);
    out!("orientable: {}", r.orientable);
    out!("closed: {}", r.is_closed);
    out!("boundary slots: {}", r.boundary_slot_count);
    out!("internal vertices: {}", b.internal_vertex_count);
    Ok(0)
}

fn table_cmd(orders: RangeInclusive<u64>, rows: &[String], eval: &EvalArgs) -> Result<u8, Error> {
    let rows: Vec<&str> = if rows.is_empty() { TABLE_ROWS.to_vec() } else { rows.iter().map(String::as_str).collect() };
    let mut failed = false;
    out!("{:<16} {:>3} {:<28} {:<28} result", "manifold", "N", "computed", "expected");
    for name in rows {
        for n in orders.clone() {
            let spec = RootSpec::principal(n);
            let cell = table::table_cell(name, &spec, eval.backend.backend(), &eval.config())?;
            let expected = cell.expected.first().map(cell_text).unwrap_or_else(|| "-".into());
            let note = match cell.matched {
                Some(1) => " (conjugate)",
                _ => "",
            };
            failed |= !cell.pass();
            out!(
                "{:<16} {:>3} {:<28} {:<28} {}{}",
                table::manifold_name(name),
                n,
                cell_text(&cell.computed),
                expected,
                if cell.pass() { "PASS" } else { "FAIL" },
                note
            );
        }
    }
    Ok(failed as u8)
}

/// Integers exactly, anything else as a short decimal approximation.
fn cell_text(v: &rootsum_core::Scalar) -> String {
    match v.as_integer() {
        Some(c) => c.to_string(),
        None => format!("~ {}", v.to_complex(6)),
    }
}

fn verify(orders: RangeInclusive<u64>, balls_up_to: u64) -> Result<u8, Error> {
    let mut failed = false;
    let mut report = |what: String, ok: bool| {
        failed |= !ok;
        out!("{} {what}", if ok { "PASS" } else { "FAIL" });
    };
    for n in orders {
        for a in RootSpec::primitive_powers(n) {
            let spec = RootSpec::new(n, a as i64)?;
            for (root, s) in [("first", spec.clone()), ("second", spec.other_square_root())] {
                let r = verify_lemma1(&s);
                report(format!("N={n} a={a} branching symmetries ({root} square root): {:?}", r.holds()), r.all_hold());
            }
            for kind in PachnerKind::ALL {
                report(format!("N={n} a={a} Pachner {}", kind.name()), verify_pachner(kind, &spec));
            }
            for kind in MatrixRelation::ALL {
                report(format!("N={n} a={a} {}", kind.name()), verify_matrix_relations(kind, &spec));
            }
            if n <= balls_up_to {
                for kind in PachnerKind::ALL {
                    let pair = pachner_ball_pair(kind.split())?;
                    let ok = pair.tensors_agree(&WeightModel::new(spec.clone()), &EvalConfig::default())?;
                    report(format!("N={n} a={a} Pachner {} ball tensors", kind.name()), ok);
                }
            }
        }
    }
    Ok(failed as u8)
}
