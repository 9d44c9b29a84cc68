//! End-to-end runs of the reference tables with embedded expected values.

use std::fmt;
use std::time::{Duration, Instant};

use crate::builtins::builtin;
use crate::catalog::VertexRecord;
use crate::error::Result;
use crate::formulation::{build_polytope, CutMode, Kind};
use crate::gap::{build_gap, solve_gap, vertex_gap, GapOptions, GapStatus};
use crate::heuristics::{compute_gaps, max_gap, run_otc, run_phi, OtcOptions, RunOptions};
use crate::instance::ArcVector;
use crate::rank::certify_vertex;
use crate::scalar::Field;
use crate::vertices::enumerate_vertices;
use crate::Q;

#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub expected: String,
    pub got: String,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub target: String,
    pub checks: Vec<Check>,
    /// Rows not run because the budget ran out.
    pub skipped: Vec<String>,
}

impl Report {
    fn new(target: &str) -> Self {
        Report { target: target.into(), checks: Vec::new(), skipped: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, expected: impl ToString, got: impl ToString) {
        let (expected, got) = (expected.to_string(), got.to_string());
        self.checks.push(Check { label: label.into(), ok: expected == got, expected, got });
    }

    pub fn complete(&self) -> bool {
        self.skipped.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} ==", self.target)?;
        for c in &self.checks {
            let mark = if c.ok { "ok  " } else { "FAIL" };
            if c.ok {
                writeln!(f, "{mark} {}: {}", c.label, c.got)?;
            } else {
                writeln!(f, "{mark} {}: expected {}, got {}", c.label, c.expected, c.got)?;
            }
        }
        for s in &self.skipped {
            writeln!(f, "skip {s} (budget exhausted)")?;
        }
        let verdict = match (self.passed(), self.complete()) {
            (true, true) => "match",
            (true, false) => "incomplete",
            (false, _) => "MISMATCH",
        };
        write!(f, "{}: {verdict}", self.target)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ReproduceOptions {
    pub max_n: Option<usize>,
    pub jobs: usize,
    pub budget: Option<Duration>,
}

struct Clock {
    start: Instant,
    budget: Option<Duration>,
}

impl Clock {
    fn out_of_time(&self) -> bool {
        self.budget.is_some_and(|b| self.start.elapsed() > b)
    }
}

/// `count @gap×attaining`, or `count` when nothing has a gap.
fn summary<F: Field>(records: &[VertexRecord<F>]) -> String {
    match max_gap(records) {
        Some((g, k)) => format!("{} @{g}x{k}", records.len()),
        None => format!("{}", records.len()),
    }
}

/// Expected `count @gap×attaining` strings (`-` gap: no vertex).
fn expected(count: usize, gap: &str, k: usize) -> String {
    if count == 0 {
        "0".into()
    } else {
        format!("{count} @{gap}x{k}")
    }
}

fn enumerate_cm_gaps(n: usize, t: usize) -> Result<(usize, usize, Option<Q>)> {
    let sys = build_polytope::<Q>(Kind::Cm, n, t, 0, &CutMode::Full)?;
    let verts = enumerate_vertices(&sys)?;
    let mut optimal = 0;
    let mut best: Option<Q> = None;
    for v in &verts {
        let r = vertex_gap(&ArcVector { n, values: v.clone() }, Kind::Cm, t, 0)?;
        if r.status == GapStatus::Certified {
            optimal += 1;
            best = best.max(Some(r.gap));
        }
    }
    Ok((verts.len(), optimal, best))
}

pub fn table1(opts: &ReproduceOptions) -> Result<Report> {
    let clock = Clock { start: Instant::now(), budget: opts.budget };
    let mut rep = Report::new("table1");
    for (n, t, count) in [(4, 3, 4), (5, 3, 5), (5, 4, 44)] {
        if clock.out_of_time() {
            rep.skipped.push(format!("CM({n},{t})"));
            continue;
        }
        let (c, opt, best) = enumerate_cm_gaps(n, t)?;
        rep.check(format!("CM({n},{t}) feasible/optimal/gap"), format!("{count}/{count}/1"), format!("{c}/{opt}/{}", best.map_or("-".into(), |g| g.to_string())));
    }
    if clock.out_of_time() {
        rep.skipped.push("BCR(4,3)".into());
        return Ok(rep);
    }
    let sys = build_polytope::<Q>(Kind::Bcr, 4, 3, 0, &CutMode::Full)?;
    let verts = enumerate_vertices(&sys)?;
    let mut optimal = 0;
    for v in &verts {
        if vertex_gap(&ArcVector { n: 4, values: v.clone() }, Kind::Bcr, 3, 0)?.status == GapStatus::Certified {
            optimal += 1;
        }
    }
    rep.check("BCR(4,3) feasible/optimal", "256/70", format!("{}/{optimal}", verts.len()));
    Ok(rep)
}

/// `(n, t, PHI expectation, OTC expectation)`.
const TABLE2: &[(usize, usize, (usize, &str, usize), (usize, &str, usize))] = &[
    (6, 4, (1, "1", 1), (0, "-", 0)),
    (6, 5, (7, "1", 7), (0, "-", 0)),
    (7, 4, (2, "10/9", 2), (11, "10/9", 2)),
    (7, 5, (46, "1", 46), (19, "1", 19)),
    (7, 6, (71, "1", 71), (8, "1", 8)),
    (8, 4, (0, "-", 0), (19, "10/9", 2)),
    (8, 5, (89, "12/11", 15), (195, "10/9", 14)),
    (8, 6, (1070, "1", 1070), (239, "1", 239)),
    (8, 7, (758, "1", 758), (0, "-", 0)),
];

/// OTC as run for the reference table: without the `n·t − t²` edge cap for
/// `n ≤ 7`, with it from `n = 8` on.
pub fn table2_otc_options(n: usize) -> OtcOptions {
    OtcOptions { edge_bound: n >= 8, ..OtcOptions::default() }
}

/// PHI columns for `n ≤ max_n` (default 8); OTC columns for `n ≤ 7`, and for
/// `n = 8` only when `max_n ≥ 8` is given explicitly.
pub fn table2(opts: &ReproduceOptions) -> Result<Report> {
    let clock = Clock { start: Instant::now(), budget: opts.budget };
    let max_n = opts.max_n.unwrap_or(8);
    let otc_max = opts.max_n.unwrap_or(7);
    let run = RunOptions { jobs: opts.jobs, ..RunOptions::default() };
    let mut rep = Report::new("table2");
    for &(n, t, phi, otc) in TABLE2 {
        if n <= max_n {
            if clock.out_of_time() {
                rep.skipped.push(format!("PHI({n},{t})"));
            } else {
                let mut r = run_phi::<Q>(n, t, &run)?;
                compute_gaps(&mut r, opts.jobs)?;
                rep.check(format!("PHI({n},{t})"), expected(phi.0, phi.1, phi.2), summary(&r));
            }
        }
        if n <= otc_max {
            if clock.out_of_time() {
                rep.skipped.push(format!("OTC({n},{t})"));
            } else {
                let mut r = run_otc::<Q>(n, t, &table2_otc_options(n), &run)?;
                compute_gaps(&mut r, opts.jobs)?;
                rep.check(format!("OTC({n},{t})"), expected(otc.0, otc.1, otc.2), summary(&r));
            }
        }
    }
    Ok(rep)
}

const TABLE3: &[(usize, usize, usize, &str, usize)] = &[
    (9, 5, 64, "10/9", 12),
    (9, 6, 4389, "14/13", 200),
    (9, 7, 21121, "1", 21121),
    (9, 8, 8987, "1", 8987),
    (10, 5, 15, "10/9", 7),
    (10, 6, 7386, "10/9", 73),
    (10, 7, 155120, "16/15", 2653),
];

/// PHI rows with `n ≤ max_n` (default 9), in table order, while the budget
/// lasts.
pub fn table3(opts: &ReproduceOptions) -> Result<Report> {
    let clock = Clock { start: Instant::now(), budget: opts.budget };
    let max_n = opts.max_n.unwrap_or(9);
    let run = RunOptions { jobs: opts.jobs, ..RunOptions::default() };
    let mut rep = Report::new("table3");
    for &(n, t, c, g, k) in TABLE3.iter().filter(|r| r.0 <= max_n) {
        if clock.out_of_time() {
            rep.skipped.push(format!("PHI({n},{t})"));
            continue;
        }
        let mut r = run_phi::<Q>(n, t, &run)?;
        compute_gaps(&mut r, opts.jobs)?;
        rep.check(format!("PHI({n},{t})"), expected(c, g, k), summary(&r));
    }
    Ok(rep)
}

pub fn skutella() -> Result<Report> {
    let mut rep = Report::new("skutella");
    let b = builtin::<Q>("skutella")?;
    let sys = build_polytope::<Q>(Kind::Cm, b.n, b.t, 0, &CutMode::Reduced)?;
    rep.check("vertex of P_CM(15,8), reduced cuts", true, certify_vertex(&b.point.values, &sys).is_vertex());
    let r = solve_gap(&build_gap(&b.point, Kind::Cm, b.t, 0, GapOptions { reduced_cuts: true, ..GapOptions::default() })?)?;
    rep.check("gap", "8/7", r.gap);
    Ok(rep)
}
