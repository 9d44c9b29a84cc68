//! Candidate-vertex searches: OTC ({1,2}-cost LP optima), PHI (pure
//! half-integral orientations) and POQ (pure one-quarter orientations).
//!
//! All three stream non-isomorphic graphs from `generate`, process them in
//! parallel batches and merge the certified vertices by canonical key.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;

use rayon::prelude::*;

use crate::canon::canonical_form;
use crate::catalog::{Catalog, Source, VertexRecord};
use crate::error::{Error, Result};
use crate::formulation::{build_polytope, CutMode, Kind};
use crate::gap::{vertex_gap, GapStatus};
use crate::generate::{gen_graphs, gen_orientations, GenSpec, Graph, OrientSpec};
use crate::guards::{self, Guards};
use crate::instance::{one_two_from_edges, ArcVector};
use crate::rank::certify_vertex;
use crate::relax::solve_relaxation;
use crate::scalar::Field;
use crate::system::ConstraintSystem;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; 0 uses rayon's default.
    pub jobs: usize,
    /// Newline-delimited keys of fully processed graphs. Listed graphs are
    /// skipped, and each finished batch is appended.
    pub checkpoint: Option<PathBuf>,
    /// Graphs per parallel batch (0 = 256).
    pub batch: usize,
}

#[derive(Debug, Clone)]
pub struct OtcOptions {
    pub allow_disconnected: bool,
    /// Cap the edge count at `n·t − t²`.
    pub edge_bound: bool,
    /// For integral optima, also look for fractional vertices on the
    /// optimal face (maximising each unused arc over it).
    pub phase2: bool,
}

impl Default for OtcOptions {
    fn default() -> Self {
        OtcOptions { allow_disconnected: false, edge_bound: true, phase2: false }
    }
}

fn graph_key(g: &Graph) -> String {
    let c = g.canon();
    let n = g.n;
    let mut s = format!("{n}:");
    let bits: Vec<u32> = c.cert[n..].to_vec();
    for chunk in bits.chunks(4) {
        let v = chunk.iter().enumerate().fold(0u32, |a, (k, &b)| a | (b & 1) << k);
        s.push(char::from_digit(v, 16).unwrap());
    }
    s
}

/// Runs `per_graph` over every graph of `spec` and merges the results.
fn drive<F, P>(spec: &GenSpec, opts: &RunOptions, per_graph: P) -> Result<Vec<VertexRecord<F>>>
where
    F: Field,
    P: Fn(&Graph) -> Result<Vec<VertexRecord<F>>> + Sync,
{
    let done: HashSet<String> = match &opts.checkpoint {
        Some(p) if p.exists() => BufReader::new(File::open(p)?).lines().collect::<std::io::Result<_>>()?,
        _ => HashSet::new(),
    };
    let mut log = match &opts.checkpoint {
        Some(p) => Some(OpenOptions::new().create(true).append(true).open(p)?),
        None => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let batch = if opts.batch == 0 { 256 } else { opts.batch };
    let mut cat = Catalog::new();
    let mut pending: Vec<(Graph, String)> = Vec::new();
    let mut failure: Option<Error> = None;

    let mut flush = |pending: &mut Vec<(Graph, String)>, cat: &mut Catalog<F>| -> Result<()> {
        let found: Vec<Result<Vec<VertexRecord<F>>>> = pool.install(|| pending.par_iter().map(|(g, _)| per_graph(g)).collect());
        for r in found {
            for rec in r? {
                cat.add(rec);
            }
        }
        if let Some(f) = log.as_mut() {
            for (_, k) in pending.iter() {
                writeln!(f, "{k}")?;
            }
            f.flush()?;
        }
        pending.clear();
        Ok(())
    };

    gen_graphs(spec, |g| {
        let key = graph_key(g);
        if done.contains(&key) {
            return true;
        }
        pending.push((g.clone(), key));
        if pending.len() >= batch {
            if let Err(e) = flush(&mut pending, &mut cat) {
                failure = Some(e);
                return false;
            }
        }
        true
    });
    if let Some(e) = failure {
        return Err(e);
    }
    flush(&mut pending, &mut cat)?;
    let mut out = cat.records().to_vec();
    out.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(out)
}

fn check_params(n: usize, t: usize) -> Result<()> {
    if t < 3 || t >= n {
        return Err(Error::Parameters(format!("need 3 <= t < n, got n={n}, t={t}")));
    }
    if n > 64 {
        return Err(Error::Parameters("n > 64".into()));
    }
    Ok(())
}

/// Relabels an orientation whose roles are given by indegree: the single
/// indegree-0 node becomes the root 0, nodes of indegree `term_deg` become
/// terminals `1..t`, the rest Steiner nodes `t..n`. Arcs get value `w`.
fn point_from_orientation<F: Field>(n: usize, t: usize, arcs: &[(usize, usize)], term_deg: usize, w: &F) -> ArcVector<F> {
    let mut indeg = vec![0usize; n];
    for &(_, b) in arcs {
        indeg[b] += 1;
    }
    let mut perm = vec![usize::MAX; n];
    let (mut nt, mut ns) = (1, t);
    for v in 0..n {
        perm[v] = if indeg[v] == 0 {
            0
        } else if indeg[v] == term_deg {
            nt += 1;
            nt - 1
        } else {
            ns += 1;
            ns - 1
        };
    }
    let weighted: Vec<(usize, usize, F)> = arcs.iter().map(|&(a, b)| (perm[a], perm[b], w.clone())).collect();
    ArcVector::from_arcs(n, &weighted)
}

fn certified<F: Field>(x: &ArcVector<F>, sys: &ConstraintSystem<F>) -> bool {
    certify_vertex(&x.values, sys).is_vertex()
}

pub fn phi_spec(n: usize, t: usize) -> GenSpec {
    GenSpec { n, min_edges: n + t - 2, max_edges: n + t - 2, min_degree: 2, connected: true, max_min_degree_nodes: Some(t) }
}

/// Pure half-integral search. Empty without generating anything when
/// `3t − n − 4 < 0`.
pub fn run_phi<F: Field>(n: usize, t: usize, opts: &RunOptions) -> Result<Vec<VertexRecord<F>>> {
    check_params(n, t)?;
    if 3 * t < n + 4 {
        return Ok(Vec::new());
    }
    let sys = build_polytope::<F>(Kind::Cm, n, t, 0, &CutMode::Full)?;
    let half = F::from_ratio(1, 2);
    let ospec = OrientSpec { max_indegree: 2, indegree_counts: Some(vec![1, n - t, t - 1]) };
    drive(&phi_spec(n, t), opts, |g| {
        Ok(gen_orientations(g, &ospec)
            .into_iter()
            .map(|arcs| point_from_orientation(n, t, &arcs, 2, &half))
            .filter(|x| certified(x, &sys))
            .map(|x| VertexRecord::new(x, t, Source::Phi))
            .collect())
    })
}

pub fn poq_spec(n: usize, t: usize) -> GenSpec {
    GenSpec { n, min_edges: n + 3 * t - 4, max_edges: n + 3 * t - 4, min_degree: 3, connected: true, max_min_degree_nodes: Some(n - t) }
}

/// Pure one-quarter search.
pub fn run_poq<F: Field>(n: usize, t: usize, opts: &RunOptions) -> Result<Vec<VertexRecord<F>>> {
    check_params(n, t)?;
    if n + 3 * t - 4 > n * (n - 1) / 2 {
        return Err(Error::Precondition(format!("{} edges do not fit in K_{n}", n + 3 * t - 4)));
    }
    let sys = build_polytope::<F>(Kind::Cm, n, t, 0, &CutMode::Full)?;
    let quarter = F::from_ratio(1, 4);
    let ospec = OrientSpec { max_indegree: 4, indegree_counts: Some(vec![1, n - t, 0, 0, t - 1]) };
    drive(&poq_spec(n, t), opts, |g| {
        Ok(gen_orientations(g, &ospec)
            .into_iter()
            .map(|arcs| point_from_orientation(n, t, &arcs, 4, &quarter))
            .filter(|x| certified(x, &sys))
            .map(|x| VertexRecord::new(x, t, Source::Poq))
            .collect())
    })
}

/// Whether `x` has the shape POQ searches for: values in {0, 1/4}, no
/// antiparallel pair, `n + 3t − 4` arcs, every degree ≥ 3 with at most
/// `n − t` nodes of degree 3, indegrees 0 (root only), 1 (Steiner), 4
/// (other terminals).
pub fn poq_shape<F: Field>(x: &ArcVector<F>, t: usize) -> bool {
    let n = x.n;
    let quarter = F::from_ratio(1, 4);
    let sup = x.support();
    if sup.iter().any(|(i, j, v)| *v != quarter || !x.get(*j, *i).is_zero()) {
        return false;
    }
    let edges: Vec<(usize, usize)> = sup.iter().map(|&(i, j, _)| (i.min(j), i.max(j))).collect();
    let g = Graph::from_edges(n, &edges);
    if edges.len() != n + 3 * t - 4 || !poq_spec(n, t).accepts(&g) {
        return false;
    }
    (0..n).all(|v| {
        let d = sup.iter().filter(|a| a.1 == v).count();
        d == if v == 0 { 0 } else if v < t { 4 } else { 1 }
    })
}

/// `{1,2}`-cost search over every role assignment of every graph.
pub fn run_otc<F: Field>(n: usize, t: usize, otc: &OtcOptions, opts: &RunOptions) -> Result<Vec<VertexRecord<F>>> {
    check_params(n, t)?;
    guards::check("otc_n", n, Guards::current().otc_n)?;
    let complete = n * (n - 1) / 2;
    let max_edges = if otc.edge_bound { (n * t).saturating_sub(t * t).min(complete) } else { complete };
    if max_edges < n {
        return Ok(Vec::new());
    }
    let spec = GenSpec {
        n,
        min_edges: n,
        max_edges,
        min_degree: if otc.allow_disconnected { 0 } else { 1 },
        connected: !otc.allow_disconnected,
        max_min_degree_nodes: None,
    };
    let sys = build_polytope::<F>(Kind::Cm, n, t, 0, &CutMode::Full)?;
    drive(&spec, opts, |g| otc_graph(g, t, otc, &sys))
}

/// Role assignments `(root, terminal set)` of `g`, one per orbit under
/// Aut(g), as permutations placing the root at 0 and terminals at `1..t`.
pub fn role_assignments(g: &Graph, t: usize) -> Vec<Vec<usize>> {
    let n = g.n;
    let mut adj = vec![0u32; n * n];
    for (a, b) in g.edges() {
        adj[a * n + b] = 1;
        adj[b * n + a] = 1;
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << n {
        if mask.count_ones() as usize != t {
            continue;
        }
        for r in (0..n).filter(|&v| mask >> v & 1 == 1) {
            let colors: Vec<u32> = (0..n).map(|v| if v == r { 0 } else if mask >> v & 1 == 1 { 1 } else { 2 }).collect();
            if !seen.insert(canonical_form(n, &colors, &adj).cert) {
                continue;
            }
            let mut perm = vec![0; n];
            let (mut nt, mut ns) = (1, t);
            for v in 0..n {
                perm[v] = if v == r {
                    0
                } else if mask >> v & 1 == 1 {
                    nt += 1;
                    nt - 1
                } else {
                    ns += 1;
                    ns - 1
                };
            }
            out.push(perm);
        }
    }
    out
}

fn otc_graph<F: Field>(g: &Graph, t: usize, otc: &OtcOptions, sys: &ConstraintSystem<F>) -> Result<Vec<VertexRecord<F>>> {
    let n = g.n;
    let mut out = Vec::new();
    for perm in role_assignments(g, t) {
        let edges: Vec<(usize, usize)> = g.edges().into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
        let inst = one_two_from_edges::<F>(n, t, 0, &edges);
        let rel = solve_relaxation(Kind::Cm, &inst, &CutMode::Lazy)?;
        if !rel.point.is_integral() {
            if !certified(&rel.point, sys) {
                return Err(Error::Internal("lazy-cut optimum is not a vertex of the full system".into()));
            }
            out.push(VertexRecord::new(rel.point, t, Source::Otc));
        } else if otc.phase2 {
            out.extend(optimal_face_vertices(&inst, &rel.value, sys)?.into_iter().map(|x| VertexRecord::new(x, t, Source::Otc)));
        }
    }
    Ok(out)
}

/// Fractional vertices of the optimal face `{x ∈ P_CM : c·x = opt}`, found by
/// maximising each arc over the face.
fn optimal_face_vertices<F: Field>(
    inst: &crate::instance::SteinerInstance<F>,
    opt: &F,
    sys: &ConstraintSystem<F>,
) -> Result<Vec<ArcVector<F>>> {
    use crate::lp::{solve_lp, LinearProgram, LpStatus};
    use crate::system::{Relation, RowTag};
    let n = inst.n;
    let cost = inst.arc_costs();
    let mut face = sys.clone();
    face.push(cost.iter().cloned().enumerate().filter(|(_, c)| !c.is_zero()).collect(), Relation::Eq, opt.clone(), RowTag::Generic("optimal face".into()));
    let mut out = Vec::new();
    for a in 0..face.vars {
        let mut objective = vec![F::zero(); face.vars];
        objective[a] = -F::one();
        let sol = solve_lp(&LinearProgram { objective, system: face.clone() });
        if sol.status != LpStatus::Optimal {
            continue;
        }
        let x = ArcVector { n, values: sol.point };
        if !x.is_integral() && certified(&x, sys) && !out.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Fills in the CM gap of every record that lacks one.
pub fn compute_gaps<F: Field>(records: &mut [VertexRecord<F>], jobs: usize) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| {
        records.par_iter_mut().filter(|r| r.gap.is_none()).try_for_each(|r| -> Result<()> {
            let g = vertex_gap(&r.point, Kind::Cm, r.t, 0)?;
            if g.status == GapStatus::Certified {
                r.gap = Some(g.gap);
            }
            Ok(())
        })
    })
}

/// `(max gap, records attaining it)` over records with a known gap.
pub fn max_gap<F: Field>(records: &[VertexRecord<F>]) -> Option<(F, usize)> {
    let m = records.iter().filter_map(|r| r.gap.clone()).max()?;
    let k = records.iter().filter(|r| r.gap.as_ref() == Some(&m)).count();
    Some((m, k))
}
