use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use steinergap::builtins::{builtin, names, path_2t3, Builtin};
use steinergap::catalog::{catalog_path, report_csv, report_text, Catalog, Source, VertexRecord};
use steinergap::digraph::support_graph;
use steinergap::formulation::{build_polytope, CutMode, Kind};
use steinergap::gap::{build_gap, solve_gap, verify_gap_certificate, CertificateJson, GapOptions, GapStatus};
use steinergap::heuristics::{compute_gaps, max_gap, run_otc, run_phi, run_poq, OtcOptions, RunOptions};
use steinergap::instance::{metric_closure, GraphJson, InstanceJson, PointJson, SteinerInstance, WeightedGraph};
use steinergap::rank::{certify_vertex, VertexCertificate};
use steinergap::relax::{solve_mcf, solve_relaxation};
use steinergap::reproduce::{self, ReproduceOptions};
use steinergap::steiner::stp_exact;
use steinergap::vertices::enumerate_vertices;
use steinergap::{Field, Point, Zero, Q};

#[derive(Parser)]
#[command(name = "steinergap", version, about = "Exact integrality-gap lower bounds for Steiner tree LP relaxations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Phi,
    Otc,
    Poq,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Table1,
    Table2,
    Table3,
    Skutella,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate vertices and write them to catalog-N-T.ndjson.
    Enumerate {
        #[arg(value_enum)]
        method: Method,
        n: usize,
        t: usize,
        /// Polytope for `exact` (bcr, sj, cm).
        #[arg(long, default_value = "cm")]
        kind: Kind,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also solve the Gap LP for each vertex.
        #[arg(long)]
        gaps: bool,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        otc_allow_disconnected: bool,
        #[arg(long)]
        no_edge_bound: bool,
        /// Look for fractional vertices on optimal faces with integral optima.
        #[arg(long)]
        otc_phase2: bool,
    },
    /// Solve the Gap LP of a vertex (point file or builtin name).
    Gap {
        vertex: String,
        #[arg(long, default_value = "cm")]
        kind: Kind,
        #[arg(long)]
        reduced_cuts: bool,
        /// One dual per edge instead of per arc for the upper bounds.
        #[arg(long)]
        edge_y: bool,
        /// Terminal count when the point file does not carry one.
        #[arg(long)]
        t: Option<usize>,
        /// Write the certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate written by `gap`.
    Verify { certificate: PathBuf },
    /// Metric closure of a sparse graph file.
    Closure {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Steiner tree and LP relaxation values of an instance file.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "cm")]
        kind: Kind,
        /// Also solve the multi-commodity flow relaxation.
        #[arg(long)]
        mcf: bool,
    },
    /// Emit a built-in point (and its {1,2}-cost instance).
    Builtin {
        /// Name, or `list`.
        name: String,
        /// Terminal count for `path-2t3`.
        #[arg(long, default_value_t = 5)]
        t: usize,
        /// Directory for `{name}.point.json`, `{name}.instance.json`, `{name}.dot`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rerun a reference table and diff it against the expected values.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Stop starting new rows after this many seconds.
        #[arg(long)]
        budget_secs: Option<u64>,
    },
    /// Summarise catalog files (or every catalog in a directory).
    Report {
        paths: Vec<PathBuf>,
        #[arg(long)]
        csv: bool,
        /// Solve missing gaps before reporting.
        #[arg(long)]
        gaps: bool,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

fn read_json<T: serde::de::DeserializeOwned>(p: &Path) -> Result<T> {
    let s = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    serde_json::from_str(&s).with_context(|| format!("parsing {}", p.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn show(q: &Q) -> String {
    format!("{q} ({})", q.to_decimal(6))
}

/// Point from a builtin name or a point file, with its terminal count.
fn load_vertex(arg: &str, t: Option<usize>) -> Result<(Point, usize, usize)> {
    if Path::new(arg).exists() {
        let j: PointJson = read_json(Path::new(arg))?;
        let x = Point::from_json(&j)?;
        let t = j.t.or(t).context("point file has no `t`; pass --t")?;
        Ok((x, t, j.root.map_or(0, |r| r - 1)))
    } else {
        let b = lookup_builtin(arg, t.unwrap_or(5))?;
        Ok((b.point, b.t, b.root))
    }
}

fn lookup_builtin(name: &str, t: usize) -> Result<Builtin<Q>> {
    Ok(if name == "path-2t3" { path_2t3::<Q>(t)? } else { builtin::<Q>(name)? })
}

fn enumerate(
    method: Method,
    n: usize,
    t: usize,
    kind: Kind,
    out: &Path,
    gaps: bool,
    run: RunOptions,
    otc: OtcOptions,
) -> Result<()> {
    let (mut records, source) = match method {
        Method::Phi => (run_phi::<Q>(n, t, &run)?, "phi"),
        Method::Otc => (run_otc::<Q>(n, t, &otc, &run)?, "otc"),
        Method::Poq => (run_poq::<Q>(n, t, &run)?, "poq"),
        Method::Exact => {
            let sys = build_polytope::<Q>(kind, n, t, 0, &CutMode::Full)?;
            let verts = enumerate_vertices(&sys)?;
            if kind != Kind::Cm {
                let mut optimal = 0;
                for v in &verts {
                    let x = Point { n, values: v.clone() };
                    if gaps && solve_gap(&build_gap(&x, kind, t, 0, GapOptions::default())?)?.status == GapStatus::Certified {
                        optimal += 1;
                    }
                }
                let extra = if gaps { format!(", {optimal} optimal for some metric cost") } else { String::new() };
                println!("({n},{t}) exact {}: {} vertices{extra}", kind.name(), verts.len());
                return Ok(());
            }
            let recs = verts.into_iter().map(|v| VertexRecord::new(Point { n, values: v }, t, Source::Enum)).collect();
            (recs, "exact")
        }
    };
    if gaps {
        compute_gaps(&mut records, run.jobs)?;
    }
    fs::create_dir_all(out)?;
    let path = catalog_path(out, n, t);
    let mut cat = if path.exists() { Catalog::load(&path)? } else { Catalog::new() };
    let mut added = 0;
    for r in &records {
        if cat.add(r.clone()) == steinergap::catalog::AddOutcome::Inserted {
            added += 1;
        }
    }
    cat.save(&path)?;
    let best = match max_gap(&records) {
        Some((g, k)) => format!(", max gap {g} x{k}"),
        None => String::new(),
    };
    println!("({n},{t}) {source}: {} vertices ({added} new){best} -> {}", records.len(), path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Enumerate { method, n, t, kind, out, gaps, jobs, checkpoint, otc_allow_disconnected, no_edge_bound, otc_phase2 } => {
            let run = RunOptions { jobs, checkpoint, batch: 0 };
            let otc = OtcOptions { allow_disconnected: otc_allow_disconnected, edge_bound: !no_edge_bound, phase2: otc_phase2 };
            enumerate(method, n, t, kind, &out, gaps, run, otc)?;
        }
        Cmd::Gap { vertex, kind, reduced_cuts, edge_y, t, out } => {
            let (x, t, root) = load_vertex(&vertex, t)?;
            let p = build_gap(&x, kind, t, root, GapOptions { edge_y, reduced_cuts })?;
            let r = solve_gap(&p)?;
            match r.status {
                GapStatus::Certified => {
                    verify_gap_certificate(&r, &x, kind)?;
                    println!("{}", show(&r.gap));
                }
                GapStatus::Infeasible => println!("infeasible: not optimal for any metric cost"),
            }
            if let Some(o) = out {
                fs::write(&o, serde_json::to_string_pretty(&r.to_json(&x, kind, t, root))?)?;
            }
        }
        Cmd::Verify { certificate } => {
            let c: CertificateJson = read_json(&certificate)?;
            let (r, x, kind) = c.to_result::<Q>()?;
            if r.status != GapStatus::Certified {
                bail!("certificate records an infeasible Gap LP; nothing to verify");
            }
            verify_gap_certificate(&r, &x, kind)?;
            println!("certificate ok: gap {}", show(&r.gap));
        }
        Cmd::Closure { graph, out } => {
            let j: GraphJson = read_json(&graph)?;
            let g = WeightedGraph::<Q>::from_json(&j)?;
            if j.root == 0 {
                bail!("root is 1-based");
            }
            let inst = metric_closure(&g, j.t, j.root - 1)?;
            write_or_print(out.as_deref(), &serde_json::to_string_pretty(&inst.to_json())?)?;
        }
        Cmd::Solve { instance, kind, mcf } => {
            let j: InstanceJson = read_json(&instance)?;
            let inst = SteinerInstance::<Q>::from_json(&j)?;
            let tree = stp_exact(&inst)?;
            let lp = solve_relaxation(kind, &inst, &CutMode::Lazy)?;
            println!("stp: {}", show(&tree.cost));
            let arcs: Vec<String> = tree.arcs.iter().map(|(a, b)| format!("{}->{}", a + 1, b + 1)).collect();
            println!("tree: {}", arcs.join(" "));
            println!("{}: {}", kind.name(), show(&lp.value));
            if !lp.value.is_zero() {
                println!("ratio: {}", show(&(tree.cost.clone() / lp.value.clone())));
            }
            if mcf {
                println!("mcf: {}", show(&solve_mcf(&inst)?));
            }
        }
        Cmd::Builtin { name, t, out } => {
            if name == "list" {
                for n in names() {
                    println!("{n}");
                }
                println!("path-2t3 (--t)");
                return Ok(true);
            }
            let b = lookup_builtin(&name, t)?;
            let sys = build_polytope::<Q>(Kind::Cm, b.n, b.t, b.root, &CutMode::Full)?;
            let status = match certify_vertex(&b.point.values, &sys) {
                VertexCertificate::Vertex(_) => "vertex".to_string(),
                VertexCertificate::Infeasible(r) => format!("infeasible ({})", sys.rows[r].tag),
                VertexCertificate::Direction(_) => "not a vertex".to_string(),
            };
            let point = serde_json::to_string_pretty(&b.point.to_json(Some(b.t), Some(b.root)))?;
            let inst = SteinerInstance::from_fn(b.n, b.t, b.root, |i, j| {
                let used = !b.point.get(i, j).is_zero() || !b.point.get(j, i).is_zero();
                Q::from_i64(if used { 1 } else { 2 })
            });
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir)?;
                    fs::write(dir.join(format!("{}.point.json", b.name)), &point)?;
                    fs::write(dir.join(format!("{}.instance.json", b.name)), serde_json::to_string_pretty(&inst.to_json())?)?;
                    fs::write(dir.join(format!("{}.dot", b.name)), support_graph(&b.point, b.t, b.root).to_dot())?;
                    eprintln!("{} (n={}, t={}): {status}", b.name, b.n, b.t);
                }
                None => {
                    eprintln!("{} (n={}, t={}): {status}", b.name, b.n, b.t);
                    println!("{point}");
                }
            }
        }
        Cmd::Reproduce { target, max_n, jobs, budget_secs } => {
            let opts = ReproduceOptions { max_n, jobs, budget: budget_secs.map(Duration::from_secs) };
            let rep = match target {
                Target::Table1 => reproduce::table1(&opts)?,
                Target::Table2 => reproduce::table2(&opts)?,
                Target::Table3 => reproduce::table3(&opts)?,
                Target::Skutella => reproduce::skutella()?,
            };
            println!("{rep}");
            return Ok(rep.passed() && rep.complete());
        }
        Cmd::Report { paths, csv, gaps, jobs } => {
            let mut cat = Catalog::<Q>::new();
            for p in &paths {
                if p.is_dir() {
                    let mut files: Vec<PathBuf> = fs::read_dir(p)?
                        .filter_map(|e| e.ok().map(|e| e.path()))
                        .filter(|f| f.file_name().and_then(|s| s.to_str()).is_some_and(|s| s.starts_with("catalog-") && s.ends_with(".ndjson")))
                        .collect();
                    files.sort();
                    for f in files {
                        cat.load_into(&f)?;
                    }
                } else {
                    cat.load_into(p)?;
                }
            }
            if gaps {
                let mut recs = cat.records().to_vec();
                compute_gaps(&mut recs, jobs)?;
                for r in recs {
                    if let Some(g) = r.gap.clone() {
                        cat.set_gap(r.n, r.t, &r.key, g);
                    }
                }
            }
            let rows = cat.report(0..=usize::MAX, 0..=usize::MAX);
            print!("{}", if csv { report_csv(&rows) } else { report_text(&rows) });
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
