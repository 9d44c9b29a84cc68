//! Two-phase primal simplex on a dense exact tableau, Bland's rule.
//!
//! All variables are implicitly nonnegative; bare `x_j >= 0` rows of the
//! input system are therefore dropped before the tableau is built.

use crate::scalar::Field;
use crate::system::{ConstraintSystem, Relation};

#[derive(Debug, Clone)]
pub struct LinearProgram<F> {
    pub objective: Vec<F>,
    pub system: ConstraintSystem<F>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution<F> {
    pub status: LpStatus,
    pub value: F,
    pub point: Vec<F>,
    /// Rows of the input system holding with equality at `point`.
    pub tight: Vec<usize>,
    pub pivots: usize,
}

impl<F: Field> LpSolution<F> {
    fn empty(status: LpStatus, vars: usize) -> Self {
        LpSolution { status, value: F::zero(), point: vec![F::zero(); vars], tight: Vec::new(), pivots: 0 }
    }
}

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    obj: Vec<F>,
    basis: Vec<usize>,
    width: usize,
    pivots: usize,
}

impl<F: Field> Tableau<F> {
    fn rhs(&self, i: usize) -> &F {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = v.clone() / p.clone();
                }
            }
        }
        let prow: Vec<(usize, F)> = self.rows[r]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if f.is_zero() {
                continue;
            }
            let row = &mut self.rows[i];
            for (j, v) in &prow {
                row[*j].sub_mul(&f, v);
            }
        }
        let f = self.obj[c].clone();
        if !f.is_zero() {
            for (j, v) in &prow {
                self.obj[*j].sub_mul(&f, v);
            }
        }
        self.basis[r] = c;
    }

    /// Dual simplex from a dual-feasible basis. Leaving row: least basic
    /// index among negative right-hand sides; entering column: least ratio,
    /// ties to the least index. Returns false if the rows are infeasible.
    fn dual_run(&mut self) -> bool {
        loop {
            let mut leave: Option<usize> = None;
            for i in 0..self.rows.len() {
                if self.rhs(i).is_negative() && leave.map_or(true, |l| self.basis[i] < self.basis[l]) {
                    leave = Some(i);
                }
            }
            let Some(r) = leave else { return true };
            let mut best: Option<(usize, F)> = None;
            for j in 0..self.width {
                let a = &self.rows[r][j];
                if !a.is_negative() {
                    continue;
                }
                let ratio = self.obj[j].clone() / -a.clone();
                if best.as_ref().map_or(true, |(_, b)| ratio < *b) {
                    best = Some((j, ratio));
                }
            }
            match best {
                None => return false,
                Some((c, _)) => self.pivot(r, c),
            }
        }
    }

    /// Runs Bland's rule over columns `< allowed`. Returns false if unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, F)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i).clone() / a.clone();
                let better = match &best {
                    None => true,
                    Some((b, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*b]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// An optimal simplex tableau that accepts further rows, reoptimising with
/// the dual simplex method (the old basis stays dual feasible).
pub struct IncrementalLp<F> {
    tab: Tableau<F>,
    objective: Vec<F>,
    system: ConstraintSystem<F>,
    status: LpStatus,
}

impl<F: Field> IncrementalLp<F> {
    pub fn new(lp: &LinearProgram<F>) -> (Self, LpSolution<F>) {
        let nv = lp.system.vars;
        let dead = |status: LpStatus, pivots: usize| {
            let tab = Tableau { rows: Vec::new(), obj: Vec::new(), basis: Vec::new(), width: nv, pivots };
            let mut sol = LpSolution::empty(status, nv);
            sol.pivots = pivots;
            (IncrementalLp { tab, objective: lp.objective.clone(), system: lp.system.clone(), status }, sol)
        };
        match build_optimal(lp) {
            Ok(tab) => {
                let mut me = IncrementalLp { tab, objective: lp.objective.clone(), system: lp.system.clone(), status: LpStatus::Optimal };
                let sol = me.solution();
                (me, sol)
            }
            Err((status, pivots)) => dead(status, pivots),
        }
    }

    pub fn system(&self) -> &ConstraintSystem<F> {
        &self.system
    }

    fn solution(&mut self) -> LpSolution<F> {
        let nv = self.system.vars;
        if self.status != LpStatus::Optimal {
            let mut sol = LpSolution::empty(self.status, nv);
            sol.pivots = self.tab.pivots;
            return sol;
        }
        let mut point = vec![F::zero(); nv];
        for i in 0..self.tab.rows.len() {
            if self.tab.basis[i] < nv {
                point[self.tab.basis[i]] = self.tab.rhs(i).clone();
            }
        }
        let mut value = F::zero();
        for (c, x) in self.objective.iter().zip(&point) {
            if !x.is_zero() && !c.is_zero() {
                value = value + c.clone() * x.clone();
            }
        }
        debug_assert!(self.system.contains(&point));
        LpSolution { status: LpStatus::Optimal, value, tight: self.system.tight_rows(&point), point, pivots: self.tab.pivots }
    }

    /// Adds `coeffs·x (rel) rhs` and reoptimises.
    pub fn add_row(&mut self, coeffs: Vec<(usize, F)>, rel: Relation, rhs: F, tag: crate::system::RowTag) -> LpSolution<F> {
        self.system.push(coeffs.clone(), rel, rhs.clone(), tag);
        if self.status != LpStatus::Optimal {
            return self.solution();
        }
        match rel {
            Relation::Eq => {
                self.insert(&coeffs, Relation::Le, &rhs);
                if self.status == LpStatus::Optimal {
                    self.insert(&coeffs, Relation::Ge, &rhs);
                }
            }
            r => self.insert(&coeffs, r, &rhs),
        }
        self.solution()
    }

    fn insert(&mut self, coeffs: &[(usize, F)], rel: Relation, rhs: &F) {
        let tab = &mut self.tab;
        let w = tab.width;
        // New slack column at position w (just before the rhs).
        for row in tab.rows.iter_mut() {
            row.insert(w, F::zero());
        }
        tab.obj.insert(w, F::zero());
        tab.width += 1;
        let w1 = tab.width;
        // Le: a·x + s = b.  Ge: -a·x + s = -b.
        let neg = rel == Relation::Ge;
        let mut row = vec![F::zero(); w1 + 1];
        for (j, a) in coeffs {
            row[*j].add_assign_ref(&if neg { -a.clone() } else { a.clone() });
        }
        row[w] = F::one();
        row[w1] = if neg { -rhs.clone() } else { rhs.clone() };
        for i in 0..tab.rows.len() {
            let b = tab.basis[i];
            let f = row[b].clone();
            if !f.is_zero() {
                for (x, y) in row.iter_mut().zip(&tab.rows[i]) {
                    if !y.is_zero() {
                        x.sub_mul(&f, y);
                    }
                }
            }
        }
        tab.rows.push(row);
        tab.basis.push(w);
        if !tab.dual_run() {
            self.status = LpStatus::Infeasible;
        }
    }
}

/// Runs both phases; on success the tableau is optimal and artificial-free.
fn build_optimal<F: Field>(lp: &LinearProgram<F>) -> Result<Tableau<F>, (LpStatus, usize)> {
    let nv = lp.system.vars;
    assert_eq!(lp.objective.len(), nv, "objective dimension");

    // Normalised rows: rhs >= 0.
    let mut rows: Vec<(Vec<(usize, F)>, Relation, F)> = Vec::new();
    for r in &lp.system.rows {
        if r.is_nonnegativity() {
            continue;
        }
        let coeffs: Vec<(usize, F)> = r.coeffs.iter().filter(|(_, a)| !a.is_zero()).cloned().collect();
        if coeffs.is_empty() {
            let ok = match r.rel {
                Relation::Le => !r.rhs.is_negative(),
                Relation::Eq => r.rhs.is_zero(),
                Relation::Ge => !r.rhs.is_positive(),
            };
            if !ok {
                return Err((LpStatus::Infeasible, 0));
            }
            continue;
        }
        if r.rhs.is_negative() {
            let rel = match r.rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            rows.push((coeffs.into_iter().map(|(j, a)| (j, -a)).collect(), rel, -r.rhs.clone()));
        } else {
            rows.push((coeffs, r.rel, r.rhs.clone()));
        }
    }

    let nslack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let nart = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = nv + nslack + nart;
    let art0 = nv + nslack;
    let mut tab = Tableau {
        rows: Vec::with_capacity(rows.len()),
        obj: vec![F::zero(); width + 1],
        basis: Vec::with_capacity(rows.len()),
        width,
        pivots: 0,
    };
    let (mut s, mut a) = (nv, art0);
    for (coeffs, rel, rhs) in &rows {
        let mut row = vec![F::zero(); width + 1];
        for (j, c) in coeffs {
            row[*j].add_assign_ref(c);
        }
        row[width] = rhs.clone();
        match rel {
            Relation::Le => {
                row[s] = F::one();
                tab.basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -F::one();
                s += 1;
                row[a] = F::one();
                tab.basis.push(a);
                a += 1;
            }
            Relation::Eq => {
                row[a] = F::one();
                tab.basis.push(a);
                a += 1;
            }
        }
        tab.rows.push(row);
    }

    if nart > 0 {
        // Phase 1: minimise the sum of artificials.
        for i in 0..tab.rows.len() {
            if tab.basis[i] >= art0 {
                for j in 0..=width {
                    if j < art0 || j == width {
                        let v = tab.rows[i][j].clone();
                        tab.obj[j].sub_mul(&F::one(), &v);
                    }
                }
            }
        }
        tab.run(art0);
        if tab.obj[width].is_negative() {
            return Err((LpStatus::Infeasible, tab.pivots));
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= art0 {
                if let Some(c) = (0..art0).find(|&j| !tab.rows[i][j].is_zero()) {
                    tab.pivot(i, c);
                } else {
                    tab.rows.swap_remove(i);
                    tab.basis.swap_remove(i);
                    continue;
                }
            }
            i += 1;
        }
        for row in tab.rows.iter_mut() {
            let rhs = row[width].clone();
            row.truncate(art0);
            row.push(rhs);
        }
        tab.width = art0;
    }

    // Phase 2 reduced costs.
    let w = tab.width;
    let mut obj = vec![F::zero(); w + 1];
    obj[..nv].clone_from_slice(&lp.objective);
    for i in 0..tab.rows.len() {
        let b = tab.basis[i];
        if b < nv && !lp.objective[b].is_zero() {
            let cb = lp.objective[b].clone();
            for j in 0..=w {
                let v = tab.rows[i][j].clone();
                obj[j].sub_mul(&cb, &v);
            }
        }
    }
    tab.obj = obj;
    if !tab.run(w) {
        return Err((LpStatus::Unbounded, tab.pivots));
    }
    Ok(tab)
}

/// Solves `min objective·x` over the system with `x >= 0`.
pub fn solve_lp<F: Field>(lp: &LinearProgram<F>) -> LpSolution<F> {
    IncrementalLp::new(lp).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::RowTag;
    use crate::Q;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn one_variable() {
        let mut s = ConstraintSystem::new(1);
        s.push(vec![(0, q(1, 1))], Relation::Ge, q(1, 3), RowTag::Generic("lo".into()));
        s.push(vec![(0, q(1, 1))], Relation::Le, q(1, 1), RowTag::Generic("hi".into()));
        let sol = solve_lp(&LinearProgram { objective: vec![q(1, 1)], system: s });
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.value, q(1, 3));
        assert_eq!(sol.tight, vec![0]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut s = ConstraintSystem::new(1);
        s.push(vec![(0, q(1, 1))], Relation::Ge, q(2, 1), RowTag::Generic("a".into()));
        s.push(vec![(0, q(1, 1))], Relation::Le, q(1, 1), RowTag::Generic("b".into()));
        assert_eq!(solve_lp(&LinearProgram { objective: vec![q(1, 1)], system: s }).status, LpStatus::Infeasible);
        let mut s = ConstraintSystem::new(2);
        s.push(vec![(0, q(1, 1)), (1, q(-1, 1))], Relation::Le, q(1, 1), RowTag::Generic("a".into()));
        assert_eq!(
            solve_lp(&LinearProgram { objective: vec![q(0, 1), q(-1, 1)], system: s }).status,
            LpStatus::Unbounded
        );
    }

    #[test]
    fn redundant_equalities() {
        // x + y = 1 twice, minimise x - y.
        let mut s = ConstraintSystem::new(2);
        for _ in 0..2 {
            s.push(vec![(0, q(1, 1)), (1, q(1, 1))], Relation::Eq, q(1, 1), RowTag::Generic("e".into()));
        }
        let sol = solve_lp(&LinearProgram { objective: vec![q(1, 1), q(-1, 1)], system: s });
        assert_eq!(sol.value, q(-1, 1));
        assert_eq!(sol.point, vec![q(0, 1), q(1, 1)]);
    }

    #[test]
    fn negative_rhs_rows() {
        // -x <= -1/2  <=>  x >= 1/2
        let mut s = ConstraintSystem::new(1);
        s.push(vec![(0, q(-1, 1))], Relation::Le, q(-1, 2), RowTag::Generic("a".into()));
        let sol = solve_lp(&LinearProgram { objective: vec![q(2, 1)], system: s });
        assert_eq!(sol.value, q(1, 1));
    }

    #[test]
    fn added_rows_match_fresh_solves() {
        // Deterministic pseudo-random covering LPs: min c·x, A x >= b, x <= 3.
        let mut seed = 12345u64;
        let mut rnd = |k: u64| {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % k) as i64
        };
        for _ in 0..40 {
            let nv = 4;
            let mut s = ConstraintSystem::new(nv);
            for j in 0..nv {
                s.push(vec![(j, q(1, 1))], Relation::Le, q(3, 1), RowTag::Upper(j));
            }
            let objective: Vec<Q> = (0..nv).map(|_| q(rnd(5) + 1, 1)).collect();
            let (mut inc, _) = IncrementalLp::new(&LinearProgram { objective: objective.clone(), system: s.clone() });
            for k in 0..6 {
                let coeffs: Vec<(usize, Q)> = (0..nv).map(|j| (j, q(rnd(4), 1))).filter(|(_, a)| !a.is_zero()).collect();
                let rel = if k % 3 == 2 { Relation::Le } else { Relation::Ge };
                let rhs = q(rnd(7), 2);
                s.push(coeffs.clone(), rel, rhs.clone(), RowTag::Generic("r".into()));
                let warm = inc.add_row(coeffs, rel, rhs, RowTag::Generic("r".into()));
                let cold = solve_lp(&LinearProgram { objective: objective.clone(), system: s.clone() });
                assert_eq!(warm.status, cold.status);
                if cold.status == LpStatus::Optimal {
                    assert_eq!(warm.value, cold.value);
                    assert!(s.contains(&warm.point));
                }
            }
        }
    }
}
