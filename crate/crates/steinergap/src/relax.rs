//! LP relaxations solved with lazily separated cut rows.

use crate::error::{Error, Result};
use crate::formulation::{build_mcf, build_polytope, cut_row, max_flow, CutMode, Kind};
use crate::instance::{ArcVector, SteinerInstance};
use crate::lp::{solve_lp, IncrementalLp, LinearProgram, LpStatus};
use crate::scalar::Field;
use crate::system::{Relation, RowTag};

#[derive(Debug, Clone)]
pub struct Relaxed<F> {
    pub value: F,
    pub point: ArcVector<F>,
    /// Cut sets that were added during separation.
    pub cuts: Vec<u64>,
}

/// Every cut set found violated by max-flow from the root (at most one per
/// terminal, duplicates removed).
pub fn violated_cuts<F: Field>(x: &ArcVector<F>, t: usize, root: usize) -> Vec<u64> {
    let n = x.n;
    let mut cap = vec![vec![F::zero(); n]; n];
    for (i, j, v) in x.support() {
        cap[i][j] = v;
    }
    let one = F::one();
    let mut out: Vec<u64> = Vec::new();
    for k in (0..t).filter(|&k| k != root) {
        let (f, src) = max_flow(&cap, root, k, Some(&one));
        if f < one {
            let w = (0..n).filter(|&v| !src[v]).fold(0u64, |w, v| w | 1 << v);
            if !out.contains(&w) {
                out.push(w);
            }
        }
    }
    out
}

/// `min c·x` over the kind's polytope. With `CutMode::Lazy` the cut rows are
/// added by separation until none is violated; the returned point is then a
/// basic optimal solution of the full polytope as well.
pub fn solve_relaxation<F: Field>(kind: Kind, inst: &SteinerInstance<F>, mode: &CutMode) -> Result<Relaxed<F>> {
    let sys = build_polytope::<F>(kind, inst.n, inst.t, inst.root, mode)?;
    let (mut lp, mut sol) = IncrementalLp::new(&LinearProgram { objective: inst.arc_costs(), system: sys });
    let mut cuts = Vec::new();
    loop {
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Err(Error::Internal(format!("{} relaxation infeasible", kind.name()))),
            LpStatus::Unbounded => return Err(Error::Internal(format!("{} relaxation unbounded", kind.name()))),
        }
        let point = ArcVector { n: inst.n, values: sol.point };
        let new = if *mode == CutMode::Lazy { violated_cuts(&point, inst.t, inst.root) } else { Vec::new() };
        if new.is_empty() {
            return Ok(Relaxed { value: sol.value, point, cuts });
        }
        // Only the last solution matters; earlier ones are superseded.
        let mut last = None;
        for w in new {
            last = Some(lp.add_row(cut_row(inst.n, w), Relation::Ge, F::one(), RowTag::Cut(w)));
            cuts.push(w);
        }
        sol = last.unwrap();
    }
}

/// Optimum of the multi-commodity flow relaxation (explicit, no separation).
pub fn solve_mcf<F: Field>(inst: &SteinerInstance<F>) -> Result<F> {
    let sys = build_mcf::<F>(inst.n, inst.t, inst.root)?;
    let mut objective = inst.arc_costs();
    objective.resize(sys.vars, F::zero());
    let sol = solve_lp(&LinearProgram { objective, system: sys });
    match sol.status {
        LpStatus::Optimal => Ok(sol.value),
        s => Err(Error::Internal(format!("MCF relaxation {s:?}"))),
    }
}

