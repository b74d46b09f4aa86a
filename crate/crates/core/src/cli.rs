//! Command-line front end: `solve`, `reproduce`, `count`, `list-scenarios`.
//!
//! Equation spec documents are JSON with complex numbers as `[re, im]`
//! pairs:
//!
//! ```json
//! {
//!   "a0": [10.0, 0.0],
//!   "terms": [
//!     { "coeff": [1.0, 0.0], "kind": "power_exp", "r": 1.0, "base": [5.0, 0.0], "q": -1.0 },
//!     { "coeff": [1.0, 0.0], "kind": "power_exp", "r": -1.0, "base": [5.0, 0.0], "q": 1.0 }
//!   ],
//!   "solve": {
//!     "term_k": 2, "primary_min": -10, "primary_max": 10,
//!     "x0": [1.0, 0.0], "eps": 1e-13, "max_iters": 8,
//!     "polish": true, "dedupe_tol": 1e-6
//!   }
//! }
//! ```
//!
//! Exit codes: 0 on success (at least one converged root; all golden rows
//! matched for `reproduce`), 2 when a run produces zero converged roots,
//! 1 on any spec/usage error.

use crate::equation_model::{Equation, Term, TermKind};
use crate::error::{SolverError, SolverResult};
use crate::iteration_engine::{enumerate_roots, Enumeration, IterConfig};
use crate::root_catalog::{dedupe, union_count, RootSet};
use crate::scenarios::{list_scenarios, run_scenario, ScenarioRun};
use crate::ComplexValue;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// On-disk equation description; field layout is the external contract.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquationSpecDocument {
    pub a0: [f64; 2],
    pub terms: Vec<TermSpec>,
    pub solve: SolveSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TermKindSpec {
    Power { r: f64 },
    ExpOfPower { base: [f64; 2], q: f64 },
    PowerExp { r: f64, base: [f64; 2], q: f64 },
    GeoExp { base: [f64; 2] },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermSpec {
    pub coeff: [f64; 2],
    #[serde(flatten)]
    pub kind: TermKindSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveSpec {
    pub term_k: usize,
    pub primary_min: i32,
    pub primary_max: i32,
    pub x0: [f64; 2],
    pub eps: f64,
    pub max_iters: u32,
    pub polish: bool,
    pub dedupe_tol: f64,
    /// Mirror every non-real root (Schwarz reflection). Only valid when the
    /// equation's data is entirely real; rejected otherwise.
    #[serde(default)]
    pub conjugate_closure: bool,
}

impl SolveSpec {
    fn validate(&self) -> SolverResult<()> {
        if self.max_iters == 0 {
            return Err(SolverError::Parse(
                "solve.max_iters must be at least 1".into(),
            ));
        }
        if self.eps.is_nan() || self.eps <= 0.0 {
            return Err(SolverError::Parse("solve.eps must be positive".into()));
        }
        if self.dedupe_tol.is_nan() || self.dedupe_tol <= 0.0 {
            return Err(SolverError::Parse(
                "solve.dedupe_tol must be positive".into(),
            ));
        }
        if self.primary_min > self.primary_max {
            return Err(SolverError::Parse(
                "solve.primary_min must not exceed primary_max".into(),
            ));
        }
        Ok(())
    }
}

fn cx(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

impl EquationSpecDocument {
    pub fn parse(text: &str) -> SolverResult<EquationSpecDocument> {
        let doc: EquationSpecDocument = serde_json::from_str(text)
            .map_err(|e| SolverError::Parse(format!("spec document: {e}")))?;
        doc.solve.validate()?;
        Ok(doc)
    }

    /// Builds the equation, reporting the 1-based index of any invalid term.
    pub fn build_equation(&self) -> SolverResult<Equation> {
        let mut terms = Vec::new();
        for (i, t) in self.terms.iter().enumerate() {
            let kind = match &t.kind {
                TermKindSpec::Power { r } => TermKind::Power { r: *r },
                TermKindSpec::ExpOfPower { base, q } => TermKind::ExpOfPower {
                    base: cx(*base),
                    q: *q,
                },
                TermKindSpec::PowerExp { r, base, q } => TermKind::PowerExp {
                    r: *r,
                    base: cx(*base),
                    q: *q,
                },
                TermKindSpec::GeoExp { base } => TermKind::GeoExp { base: cx(*base) },
            };
            let term = Term::new(cx(t.coeff), kind)
                .map_err(|e| SolverError::Parse(format!("term {}: {e}", i + 1)))?;
            terms.push(term);
        }
        Equation::new(terms, cx(self.a0))
    }

    pub fn iter_config(&self, threads: usize) -> IterConfig {
        IterConfig {
            max_iters: self.solve.max_iters,
            eps: self.solve.eps,
            x0: cx(self.solve.x0),
            polish: self.solve.polish,
            threads,
            ..IterConfig::default()
        }
    }
}

/// One row of the emitted root report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootRow {
    pub term_k: usize,
    pub variant: u8,
    pub primary: i32,
    pub secondary: i32,
    pub re: f64,
    pub im: f64,
    pub residual: f64,
    pub iterations: u32,
    pub aliases: Vec<[i32; 4]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportSummary {
    pub total_distinct: usize,
    pub per_subfield: Vec<usize>,
    pub inclusion_exclusion_total: i64,
}

/// The full machine-readable report for `solve` and `count`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootReport {
    pub roots: Vec<RootRow>,
    pub summary: ReportSummary,
}

fn report_rows(set: &RootSet) -> Vec<RootRow> {
    let mut rows: Vec<RootRow> = set
        .records
        .iter()
        .map(|r| RootRow {
            term_k: r.root.term_k,
            variant: r.root.variant_q,
            primary: r.root.primary_branch,
            secondary: r.root.secondary_branch,
            re: r.root.value.re,
            im: r.root.value.im,
            residual: r.root.residual,
            iterations: r.root.iterations,
            aliases: r
                .aliases
                .iter()
                .map(|a| {
                    [
                        a.term_k as i32,
                        a.variant_q as i32,
                        a.primary_branch,
                        a.secondary_branch,
                    ]
                })
                .collect(),
        })
        .collect();
    rows.sort_by_key(|r| (r.term_k, r.primary, r.secondary, r.variant));
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

fn render_report(report: &RootReport, format: OutputFormat, out: &mut String) {
    match format {
        OutputFormat::Json => {
            out.push_str(&serde_json::to_string(report).expect("report serialization"));
            out.push('\n');
        }
        OutputFormat::Csv => {
            out.push_str("term_k,variant,primary,secondary,re,im,residual,iterations\n");
            for r in &report.roots {
                out.push_str(&format!(
                    "{},{},{},{},{:.17e},{:.17e},{:.3e},{}\n",
                    r.term_k,
                    r.variant,
                    r.primary,
                    r.secondary,
                    r.re,
                    r.im,
                    r.residual,
                    r.iterations
                ));
            }
        }
        OutputFormat::Table => {
            out.push_str(&format!(
                "{:>6} {:>7} {:>8} {:>9} {:>24} {:>24} {:>10} {:>6}\n",
                "term_k", "variant", "primary", "secondary", "re", "im", "residual", "iters"
            ));
            for r in &report.roots {
                out.push_str(&format!(
                    "{:>6} {:>7} {:>8} {:>9} {:>24.16e} {:>24.16e} {:>10.2e} {:>6}\n",
                    r.term_k,
                    r.variant,
                    r.primary,
                    r.secondary,
                    r.re,
                    r.im,
                    r.residual,
                    r.iterations
                ));
            }
            out.push_str(&format!(
                "{} distinct roots; per-subfield sizes {:?}; inclusion-exclusion total {}\n",
                report.summary.total_distinct,
                report.summary.per_subfield,
                report.summary.inclusion_exclusion_total
            ));
        }
    }
}

/// Parsed command line.
enum Command {
    Solve {
        path: String,
        format: OutputFormat,
        dedupe_tol: Option<f64>,
        trace: bool,
    },
    Reproduce {
        id: String,
    },
    Count {
        path: String,
    },
    ListScenarios,
}

fn parse_args(args: &[String]) -> Result<Command, String> {
    let mut it = args.iter();
    let cmd = it.next().ok_or_else(usage)?;
    match cmd.as_str() {
        "solve" => {
            let path = it.next().ok_or("solve needs a spec path")?.clone();
            let mut format = OutputFormat::Table;
            let mut dedupe_tol = None;
            let mut trace = false;
            while let Some(flag) = it.next() {
                match flag.as_str() {
                    "--format" => {
                        let v = it.next().ok_or("--format needs a value")?;
                        format = match v.as_str() {
                            "table" => OutputFormat::Table,
                            "json" => OutputFormat::Json,
                            "csv" => OutputFormat::Csv,
                            other => return Err(format!("unknown format '{other}'")),
                        };
                    }
                    "--dedupe-tol" => {
                        let v = it.next().ok_or("--dedupe-tol needs a value")?;
                        dedupe_tol = Some(
                            v.parse()
                                .map_err(|e| format!("bad dedupe tolerance: {e}"))?,
                        );
                    }
                    "--trace" => trace = true,
                    other => return Err(format!("unknown flag '{other}'")),
                }
            }
            Ok(Command::Solve {
                path,
                format,
                dedupe_tol,
                trace,
            })
        }
        "reproduce" => {
            let id = it.next().ok_or("reproduce needs a scenario id or 'all'")?;
            Ok(Command::Reproduce { id: id.clone() })
        }
        "count" => {
            let path = it.next().ok_or("count needs a spec path")?.clone();
            Ok(Command::Count { path })
        }
        "list-scenarios" => Ok(Command::ListScenarios),
        other => Err(format!("unknown command '{other}'\n{}", usage())),
    }
}

fn usage() -> String {
    "usage:\n  \
     rootfield solve <spec.json> [--format table|json|csv] [--dedupe-tol X] [--trace]\n  \
     rootfield reproduce <scenario-id|all>\n  \
     rootfield count <spec.json>\n  \
     rootfield list-scenarios\n\
     RF_THREADS caps enumeration parallelism (0 = auto)."
        .to_string()
}

fn threads_from_env() -> usize {
    match std::env::var("RF_THREADS") {
        Ok(v) => v.parse().unwrap_or(1),
        Err(_) => 1,
    }
}

fn load_spec(path: &str) -> SolverResult<EquationSpecDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SolverError::Io(format!("reading {path}: {e}")))?;
    EquationSpecDocument::parse(&text)
}

fn enumeration_to_report(set: &RootSet, per_subfield: Vec<usize>, ie_total: i64) -> RootReport {
    RootReport {
        roots: report_rows(set),
        summary: ReportSummary {
            total_distinct: set.len(),
            per_subfield,
            inclusion_exclusion_total: ie_total,
        },
    }
}

fn cmd_solve(
    path: &str,
    format: OutputFormat,
    dedupe_override: Option<f64>,
    trace: bool,
    out: &mut String,
    err: &mut String,
) -> i32 {
    let spec = match load_spec(path) {
        Ok(s) => s,
        Err(e) => {
            err.push_str(&format!("{e}\n"));
            return 1;
        }
    };
    let eq = match spec.build_equation() {
        Ok(eq) => eq,
        Err(e) => {
            err.push_str(&format!("{e}\n"));
            return 1;
        }
    };
    let mut cfg = spec.iter_config(threads_from_env());
    cfg.keep_trace = trace;
    let primaries: Vec<i32> = (spec.solve.primary_min..=spec.solve.primary_max).collect();
    let enumeration = match enumerate_roots(&eq, spec.solve.term_k, &primaries, &cfg) {
        Ok(r) => r,
        Err(e) => {
            err.push_str(&format!("{e}\n"));
            return 1;
        }
    };
    if trace {
        for f in &enumeration.failures {
            err.push_str(&format!(
                "branch ({}, {}) failed: {:?}\n",
                f.branch.primary, f.branch.secondary, f.reason
            ));
        }
        dump_traces(&eq, &spec, &cfg, &primaries, err);
    }
    if enumeration.records.is_empty() {
        err.push_str("no branch converged to a root\n");
        return 2;
    }
    let mut records = enumeration.records;
    if spec.solve.conjugate_closure {
        if !equation_data_is_real(&spec) {
            err.push_str("conjugate_closure requires an equation with real data\n");
            return 1;
        }
        let mirrored: Vec<_> = records
            .iter()
            .filter(|r| r.value.im.abs() > 1e-14)
            .map(|r| {
                let mut m = r.clone();
                m.value = r.value.conj();
                m.primary_branch = -r.primary_branch;
                m
            })
            .collect();
        records.extend(mirrored);
    }
    let tol = dedupe_override.unwrap_or(spec.solve.dedupe_tol);
    let set = dedupe(&records, tol);
    let report = enumeration_to_report(&set, vec![set.len()], set.len() as i64);
    render_report(&report, format, out);
    0
}

fn equation_data_is_real(spec: &EquationSpecDocument) -> bool {
    if spec.a0[1] != 0.0 {
        return false;
    }
    spec.terms.iter().all(|t| {
        t.coeff[1] == 0.0
            && match &t.kind {
                TermKindSpec::Power { .. } => true,
                TermKindSpec::ExpOfPower { base, .. } => base[1] == 0.0,
                TermKindSpec::PowerExp { base, .. } => base[1] == 0.0,
                TermKindSpec::GeoExp { base } => base[1] == 0.0,
            }
    })
}

/// Re-runs every branch with trace retention and prints the iterate
/// sequences; used by `--trace` to debug divergent branches.
fn dump_traces(
    eq: &Equation,
    spec: &EquationSpecDocument,
    cfg: &IterConfig,
    primaries: &[i32],
    err: &mut String,
) {
    use crate::equation_model::{branch_range, BranchTuple};
    use crate::iteration_engine::iterate;
    let term = match eq.term(spec.solve.term_k) {
        Ok(t) => t,
        Err(_) => return,
    };
    let traced = IterConfig {
        keep_trace: true,
        threads: 1,
        ..*cfg
    };
    for &primary in primaries {
        for secondary in branch_range(term, None) {
            let out = iterate(
                eq,
                spec.solve.term_k,
                BranchTuple::new(primary, secondary, 0),
                &traced,
            );
            if let Some(tr) = out.trace {
                let path: Vec<String> = tr.iter().map(|x| format!("{x:.6}")).collect();
                err.push_str(&format!(
                    "trace ({primary}, {secondary}): {}\n",
                    path.join(" -> ")
                ));
            }
        }
    }
}

fn cmd_reproduce(id: &str, out: &mut String, err: &mut String) -> i32 {
    let ids: Vec<&str> = if id == "all" {
        list_scenarios()
    } else {
        vec![id]
    };
    let mut all_ok = true;
    for sid in ids {
        match run_scenario(sid, None) {
            Ok(run) => {
                render_scenario(&run, out);
                all_ok &= run.all_matched;
            }
            Err(e) => {
                err.push_str(&format!("{e}\n"));
                return 1;
            }
        }
    }
    if all_ok {
        0
    } else {
        2
    }
}

fn render_scenario(run: &ScenarioRun, out: &mut String) {
    out.push_str(&format!(
        "scenario {}: {}/{} golden rows matched, {} distinct roots\n",
        run.id,
        run.matches.iter().filter(|m| m.matched).count(),
        run.matches.len(),
        run.roots.len()
    ));
    out.push_str(&format!(
        "{:>8} {:>22} {:>22} {:>22} {:>22} {:>10} {:>9} {:>6} {:>7}\n",
        "branch",
        "expected re",
        "expected im",
        "achieved re",
        "achieved im",
        "|delta|",
        "tol",
        "match",
        "seeded"
    ));
    for m in &run.matches {
        let (are, aim) = match m.achieved {
            Some(a) => (format!("{:>22.14e}", a.re), format!("{:>22.14e}", a.im)),
            None => (format!("{:>22}", "-"), format!("{:>22}", "-")),
        };
        out.push_str(&format!(
            "{:>8} {:>22.14e} {:>22.14e} {are} {aim} {:>10.2e} {:>9.1e} {:>6} {:>7}\n",
            format!("{}/{}", m.row.primary, m.row.secondary),
            m.row.expected.re,
            m.row.expected.im,
            m.delta,
            m.row.tol,
            if m.matched { "yes" } else { "NO" },
            if m.seeded { "yes" } else { "" },
        ));
    }
}

fn cmd_count(path: &str, out: &mut String, err: &mut String) -> i32 {
    let spec = match load_spec(path) {
        Ok(s) => s,
        Err(e) => {
            err.push_str(&format!("{e}\n"));
            return 1;
        }
    };
    let eq = match spec.build_equation() {
        Ok(eq) => eq,
        Err(e) => {
            err.push_str(&format!("{e}\n"));
            return 1;
        }
    };
    let cfg = spec.iter_config(threads_from_env());
    let primaries: Vec<i32> = (spec.solve.primary_min..=spec.solve.primary_max).collect();
    let n = eq.len();

    // enumerate every subfield
    let mut per_subfield_sets: Vec<Vec<ComplexValue>> = Vec::new();
    let mut all_records = Vec::new();
    for k in 1..=n {
        let enumeration: Enumeration = match enumerate_roots(&eq, k, &primaries, &cfg) {
            Ok(r) => r,
            Err(e) => {
                err.push_str(&format!("{e}\n"));
                return 1;
            }
        };
        let sub = dedupe(&enumeration.records, spec.solve.dedupe_tol);
        per_subfield_sets.push(sub.records.iter().map(|r| r.root.value).collect());
        all_records.extend(enumeration.records);
    }
    if all_records.is_empty() {
        err.push_str("no branch converged to a root in any subfield\n");
        return 2;
    }

    // global clusters carry the subfield membership sets
    let global = dedupe(&all_records, spec.solve.dedupe_tol);
    let cluster_membership: Vec<u32> = global
        .records
        .iter()
        .map(|r| {
            let mut mask = 0u32;
            for (i, sub) in per_subfield_sets.iter().enumerate() {
                let value = r.root.value;
                if sub
                    .iter()
                    .any(|v| (v - value).norm() <= spec.solve.dedupe_tol)
                {
                    mask |= 1 << i;
                }
            }
            mask
        })
        .collect();

    // intersection table over subfield subsets
    let mut table = vec![0u64; 1 << n];
    for (mask, entry) in table.iter_mut().enumerate().skip(1) {
        *entry = cluster_membership
            .iter()
            .filter(|m| (*m & mask as u32) == mask as u32)
            .count() as u64;
    }
    let ie_total = match union_count(n, &table) {
        Ok(t) => t,
        Err(e) => {
            err.push_str(&format!("{e}\n"));
            return 1;
        }
    };

    let per_sizes: Vec<usize> = per_subfield_sets.iter().map(|s| s.len()).collect();
    out.push_str(&format!("per-subfield sizes: {per_sizes:?}\n"));
    out.push_str("intersection table (subset mask -> size):\n");
    for (mask, entry) in table.iter().enumerate().skip(1) {
        out.push_str(&format!("  {mask:#04b}: {entry}\n"));
    }
    out.push_str(&format!("inclusion-exclusion total: {ie_total}\n"));
    out.push_str(&format!("distinct roots: {}\n", global.len()));
    if ie_total != global.len() as i64 {
        err.push_str("inclusion-exclusion total disagrees with the distinct-root count\n");
        return 2;
    }
    0
}

/// Entry point used by the binary; returns the process exit code and the
/// text for stdout/stderr so it stays testable in-process.
pub fn run(args: &[String], out: &mut String, err: &mut String) -> i32 {
    match parse_args(args) {
        Ok(Command::Solve {
            path,
            format,
            dedupe_tol,
            trace,
        }) => cmd_solve(&path, format, dedupe_tol, trace, out, err),
        Ok(Command::Reproduce { id }) => cmd_reproduce(&id, out, err),
        Ok(Command::Count { path }) => cmd_count(&path, out, err),
        Ok(Command::ListScenarios) => {
            for id in list_scenarios() {
                out.push_str(id);
                out.push('\n');
            }
            0
        }
        Err(msg) => {
            err.push_str(&msg);
            err.push('\n');
            1
        }
    }
}
