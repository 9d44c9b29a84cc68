//! The Gap LP of a vertex: over metric costs normalised so that every integer
//! solution costs at least 1, and for which the vertex stays LP-optimal,
//! minimise the vertex's cost. The optimum is `1 / gap`.
//!
//! Optimality of `x̄` is expressed by complementary slackness against the
//! rows of the polytope that are tight at `x̄`: each such row gets a dual
//! variable (sign from its relation), dual feasibility holds on every arc and
//! with equality on the support of `x̄`. The normalisation family is
//! generated lazily with the exact Steiner oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulation::{build_polytope, CutMode, Kind};
use crate::guards::{self, Guards};
use crate::instance::{arc_index, validate_metric, ArcVector, PointJson, SteinerInstance};
use crate::lp::{IncrementalLp, LinearProgram, LpStatus};
use crate::relax::solve_relaxation;
use crate::scalar::Field;
use crate::steiner::{stp_bruteforce, stp_exact};
use crate::system::{mask_string, ConstraintSystem, Relation, RowTag};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GapOptions {
    /// Use the pairing-style dual `y_e`, shared by both arcs of an edge and
    /// present when `x̄_ij + x̄_ji = 1`, instead of one dual per tight upper
    /// bound `x_ij <= 1`. Only meaningful for CM, which has no pairing rows.
    pub edge_y: bool,
    /// Take duals from the reduced cut family (see `CutMode::Reduced`).
    pub reduced_cuts: bool,
}

/// One dual variable of the Gap LP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualVar {
    pub tag: RowTag,
    pub rel: Relation,
}

#[derive(Debug, Clone)]
pub struct GapProblem<F> {
    pub x: ArcVector<F>,
    pub kind: Kind,
    pub t: usize,
    pub root: usize,
    pub duals: Vec<DualVar>,
    /// Tight cut sets of the (explicit) cut family.
    pub tight_cuts: Vec<u64>,
    /// Variables: edge costs first (`edge_index` order), then nonnegative
    /// columns for the duals (`≤` duals negated, free duals split).
    pub system: ConstraintSystem<F>,
    pub objective: Vec<F>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapStatus {
    Certified,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct GapResult<F> {
    pub status: GapStatus,
    pub lp_value: F,
    pub gap: F,
    pub cost: Option<SteinerInstance<F>>,
    pub tight_cuts: Vec<u64>,
    /// Normalisation rows generated.
    pub rounds: usize,
}

/// Index of edge `{i, j}` among the `n(n-1)/2` node pairs.
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

pub fn edge_count(n: usize) -> usize {
    n * (n - 1) / 2
}

pub fn build_gap<F: Field>(x: &ArcVector<F>, kind: Kind, t: usize, root: usize, opts: GapOptions) -> Result<GapProblem<F>> {
    if kind == Kind::Sj {
        return Err(Error::Parameters("the Gap LP is defined for bcr and cm".into()));
    }
    let n = x.n;
    let mode = if opts.reduced_cuts { CutMode::Reduced } else { CutMode::Full };
    let poly = build_polytope::<F>(kind, n, t, root, &mode)?;
    if let Some(r) = poly.first_violation(&x.values) {
        return Err(Error::Precondition(format!("point violates {}", poly.rows[r].tag)));
    }
    let ne = edge_count(n);
    let m = x.values.len();

    let mut duals: Vec<DualVar> = Vec::new();
    let mut cols: Vec<Vec<(usize, F)>> = Vec::new();
    let mut tight_cuts = Vec::new();
    for r in poly.tight_rows(&x.values) {
        let row = &poly.rows[r];
        if row.is_nonnegativity() {
            continue;
        }
        if opts.edge_y && matches!(row.tag, RowTag::Upper(_)) {
            continue;
        }
        if let RowTag::Cut(w) = row.tag {
            tight_cuts.push(w);
        }
        duals.push(DualVar { tag: row.tag.clone(), rel: row.rel });
        cols.push(row.coeffs.clone());
    }
    if opts.edge_y {
        for i in 0..n {
            for j in i + 1..n {
                let s = x.get(i, j).clone() + x.get(j, i).clone();
                if s.is_one() {
                    duals.push(DualVar { tag: RowTag::Pairing(i, j), rel: Relation::Le });
                    cols.push(vec![(arc_index(n, i, j), F::one()), (arc_index(n, j, i), F::one())]);
                }
            }
        }
    }

    // Column layout.
    let mut width = ne;
    let mut dual_cols: Vec<Vec<(usize, F)>> = Vec::new(); // (column, sign)
    for d in &duals {
        match d.rel {
            Relation::Ge => {
                dual_cols.push(vec![(width, F::one())]);
                width += 1;
            }
            Relation::Le => {
                dual_cols.push(vec![(width, -F::one())]);
                width += 1;
            }
            Relation::Eq => {
                dual_cols.push(vec![(width, F::one()), (width + 1, -F::one())]);
                width += 2;
            }
        }
    }

    let mut sys = ConstraintSystem::new(width);
    let one = F::one();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                sys.push(
                    vec![(edge_index(n, i, j), one.clone()), (edge_index(n, i, k), -one.clone()), (edge_index(n, j, k), -one.clone())],
                    Relation::Le,
                    F::zero(),
                    RowTag::Generic(format!("triangle {}-{} via {}", i + 1, j + 1, k + 1)),
                );
            }
        }
    }
    // Dual feasibility per arc: Σ λ_r a_r,arc - c_e ≤ 0, equality on the support.
    let mut per_arc: Vec<Vec<(usize, F)>> = vec![Vec::new(); m];
    for (col, sc) in cols.iter().zip(&dual_cols) {
        for (a, coef) in col {
            for (v, s) in sc {
                per_arc[*a].push((*v, coef.clone() * s.clone()));
            }
        }
    }
    for (a, mut coeffs) in per_arc.into_iter().enumerate() {
        let (i, j) = crate::instance::arc_of(n, a);
        coeffs.push((edge_index(n, i, j), -one.clone()));
        coeffs.sort_by_key(|c| c.0);
        let rel = if x.values[a].is_zero() { Relation::Le } else { Relation::Eq };
        sys.push(coeffs, rel, F::zero(), RowTag::Generic(format!("dual arc {}->{}", i + 1, j + 1)));
    }
    let mut objective = vec![F::zero(); width];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                objective[edge_index(n, i, j)].add_assign_ref(x.get(i, j));
            }
        }
    }
    Ok(GapProblem { x: x.clone(), kind, t, root, duals, tight_cuts, system: sys, objective })
}

fn cost_instance<F: Field>(n: usize, t: usize, root: usize, c: &[F]) -> SteinerInstance<F> {
    SteinerInstance::from_fn(n, t, root, |i, j| c[edge_index(n, i, j)].clone())
}

pub fn solve_gap<F: Field>(p: &GapProblem<F>) -> Result<GapResult<F>> {
    let n = p.x.n;
    let ne = edge_count(n);
    let limit = Guards::current().gap_rounds;
    let (mut lp, mut sol) = IncrementalLp::new(&LinearProgram { objective: p.objective.clone(), system: p.system.clone() });
    let mut rounds = 0;
    loop {
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => {
                return Ok(GapResult {
                    status: GapStatus::Infeasible,
                    lp_value: F::zero(),
                    gap: F::zero(),
                    cost: None,
                    tight_cuts: p.tight_cuts.clone(),
                    rounds,
                })
            }
            LpStatus::Unbounded => return Err(Error::Internal("Gap LP unbounded".into())),
        }
        let inst = cost_instance(n, p.t, p.root, &sol.point[..ne]);
        let tree = stp_exact(&inst)?;
        if tree.cost >= F::one() {
            if sol.value.is_zero() {
                return Err(Error::Internal("Gap LP value is zero".into()));
            }
            return Ok(GapResult {
                status: GapStatus::Certified,
                gap: F::one() / sol.value.clone(),
                lp_value: sol.value,
                cost: Some(inst),
                tight_cuts: p.tight_cuts.clone(),
                rounds,
            });
        }
        rounds += 1;
        guards::check("Gap LP normalisation rows", rounds, limit)?;
        let mut coeffs: Vec<(usize, F)> = tree.arcs.iter().map(|&(i, j)| (edge_index(n, i, j), F::one())).collect();
        coeffs.sort_by_key(|c| c.0);
        sol = lp.add_row(coeffs, Relation::Ge, F::one(), RowTag::Generic(format!("tree {rounds}")));
    }
}

/// `build_gap` followed by `solve_gap`.
pub fn vertex_gap<F: Field>(x: &ArcVector<F>, kind: Kind, t: usize, root: usize) -> Result<GapResult<F>> {
    solve_gap(&build_gap(x, kind, t, root, GapOptions::default())?)
}

/// Re-checks a certified result with independent code paths: the cost is
/// metric, every integer solution costs at least 1, and the LP relaxation of
/// the kind has optimum `lp_value`, attained at `x̄`.
pub fn verify_gap_certificate<F: Field>(r: &GapResult<F>, x: &ArcVector<F>, kind: Kind) -> Result<()> {
    let fail = |m: String| Err(Error::Precondition(format!("certificate rejected: {m}")));
    if r.status != GapStatus::Certified {
        return fail("not certified".into());
    }
    let Some(c) = &r.cost else { return fail("no cost".into()) };
    c.check_structure()?;
    let bad = validate_metric(c)?;
    if let Some((i, j, k)) = bad.first() {
        return fail(format!("cost is not metric at ({}, {}, {})", i + 1, j + 1, k + 1));
    }
    let stp = if c.n <= Guards::current().bruteforce_n { stp_bruteforce(c)? } else { stp_exact(c)?.cost };
    if stp < F::one() {
        return fail(format!("an integer solution costs {stp} < 1"));
    }
    let xv = x.cost(c);
    if xv != r.lp_value {
        return fail(format!("vertex cost {xv} differs from LP value {}", r.lp_value));
    }
    let opt = solve_relaxation(kind, c, &CutMode::Lazy)?.value;
    if opt != xv {
        return fail(format!("relaxation optimum {opt} is below the vertex cost {xv}"));
    }
    if r.gap.clone() * r.lp_value.clone() != F::one() {
        return fail("gap is not 1 / lp_value".into());
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub vertex: PointJson,
    pub kind: String,
    pub status: GapStatus,
    pub gap: Option<String>,
    pub lp_value: Option<String>,
    pub costs: Option<Vec<Vec<String>>>,
    /// Tight cut sets, 1-based.
    pub tight_cuts: Vec<Vec<usize>>,
}

impl<F: Field> GapResult<F> {
    pub fn to_json(&self, x: &ArcVector<F>, kind: Kind, t: usize, root: usize) -> CertificateJson {
        let certified = self.status == GapStatus::Certified;
        CertificateJson {
            vertex: x.to_json(Some(t), Some(root)),
            kind: kind.name().into(),
            status: self.status,
            gap: certified.then(|| self.gap.to_string()),
            lp_value: certified.then(|| self.lp_value.to_string()),
            costs: self.cost.as_ref().map(|c| c.cost.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect()),
            tight_cuts: self
                .tight_cuts
                .iter()
                .map(|&w| (0..64).filter(|b| w >> b & 1 == 1).map(|b| b + 1).collect())
                .collect(),
        }
    }
}

impl CertificateJson {
    /// Rebuilds the result (cost matrix, values) for re-verification.
    pub fn to_result<F: Field>(&self) -> Result<(GapResult<F>, ArcVector<F>, Kind)> {
        let kind: Kind = self.kind.parse()?;
        let x = ArcVector::<F>::from_json(&self.vertex)?;
        let parse = |s: &str| s.parse::<F>().map_err(|_| Error::Parse(format!("bad rational {s:?}")));
        let t = self.vertex.t.ok_or_else(|| Error::Parse("vertex without t".into()))?;
        let root = self.vertex.root.map_or(0, |r| r - 1);
        let cost = match &self.costs {
            Some(m) => {
                let rows: Result<Vec<Vec<F>>> = m.iter().map(|r| r.iter().map(|v| parse(v)).collect()).collect();
                Some(SteinerInstance::new(x.n, t, root, rows?)?)
            }
            None => None,
        };
        let opt = |s: &Option<String>| -> Result<F> { s.as_deref().map_or(Ok(F::zero()), parse) };
        let r = GapResult {
            status: self.status,
            lp_value: opt(&self.lp_value)?,
            gap: opt(&self.gap)?,
            cost,
            tight_cuts: self.tight_cuts.iter().map(|w| w.iter().fold(0u64, |m, v| m | 1 << (v - 1))).collect(),
            rounds: 0,
        };
        Ok((r, x, kind))
    }
}

/// Human-readable summary of the dual variables (for `--verbose` output).
pub fn describe_duals<F: Field>(p: &GapProblem<F>) -> Vec<String> {
    p.duals
        .iter()
        .map(|d| match &d.tag {
            RowTag::Cut(w) => format!("z{} ({})", mask_string(*w), d.rel),
            tag => format!("{tag} ({})", d.rel),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_indices_are_a_bijection() {
        let n = 7;
        let mut seen = vec![false; edge_count(n)];
        for i in 0..n {
            for j in i + 1..n {
                let e = edge_index(n, i, j);
                assert!(!seen[e]);
                seen[e] = true;
                assert_eq!(e, edge_index(n, j, i));
            }
        }
    }
}
