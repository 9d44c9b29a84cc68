use std::fmt::{self, Write as _};

use crate::instance::arc_of;
use crate::scalar::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

/// Where a row comes from. Node ids are 0-based; cut sets are bitmasks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RowTag {
    Lower(usize),
    Upper(usize),
    Pairing(usize, usize),
    Cut(u64),
    RootInflow,
    TerminalInflow(usize),
    Inflow(usize),
    InOut(usize),
    InflowCoversArc(usize, usize),
    Balance(usize),
    Flow(usize, usize),
    Capacity(usize, usize),
    Generic(String),
}

impl fmt::Display for RowTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowTag::Lower(a) => write!(f, "lower[{a}]"),
            RowTag::Upper(a) => write!(f, "upper[{a}]"),
            RowTag::Pairing(i, j) => write!(f, "pair[{},{}]", i + 1, j + 1),
            RowTag::Cut(w) => write!(f, "cut{{{}}}", mask_string(*w)),
            RowTag::RootInflow => write!(f, "root_inflow"),
            RowTag::TerminalInflow(v) => write!(f, "terminal_inflow[{}]", v + 1),
            RowTag::Inflow(v) => write!(f, "inflow[{}]", v + 1),
            RowTag::InOut(v) => write!(f, "in_le_out[{}]", v + 1),
            RowTag::InflowCoversArc(v, a) => write!(f, "inflow_covers[{},{a}]", v + 1),
            RowTag::Balance(v) => write!(f, "balance[{}]", v + 1),
            RowTag::Flow(k, v) => write!(f, "flow[{},{}]", k + 1, v + 1),
            RowTag::Capacity(k, a) => write!(f, "cap[{},{a}]", k + 1),
            RowTag::Generic(s) => f.write_str(s),
        }
    }
}

pub fn mask_string(w: u64) -> String {
    let mut s = String::new();
    for v in 0..64 {
        if w >> v & 1 == 1 {
            if !s.is_empty() {
                s.push(',');
            }
            let _ = write!(s, "{}", v + 1);
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row<F> {
    pub coeffs: Vec<(usize, F)>,
    pub rel: Relation,
    pub rhs: F,
    pub tag: RowTag,
}

impl<F: Field> Row<F> {
    pub fn new(coeffs: Vec<(usize, F)>, rel: Relation, rhs: F, tag: RowTag) -> Self {
        Row { coeffs, rel, rhs, tag }
    }

    pub fn lhs(&self, x: &[F]) -> F {
        let mut s = F::zero();
        for (j, a) in &self.coeffs {
            if !x[*j].is_zero() {
                s = s + a.clone() * x[*j].clone();
            }
        }
        s
    }

    pub fn holds(&self, x: &[F]) -> bool {
        let l = self.lhs(x);
        match self.rel {
            Relation::Le => l <= self.rhs,
            Relation::Eq => l == self.rhs,
            Relation::Ge => l >= self.rhs,
        }
    }

    pub fn is_tight(&self, x: &[F]) -> bool {
        self.lhs(x) == self.rhs
    }

    /// A bare `x_j >= 0`.
    pub fn is_nonnegativity(&self) -> bool {
        self.rel == Relation::Ge
            && self.rhs.is_zero()
            && self.coeffs.len() == 1
            && self.coeffs[0].1.is_positive()
    }
}

/// Sparse exact linear system over `vars` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem<F> {
    pub vars: usize,
    pub rows: Vec<Row<F>>,
}

impl<F: Field> ConstraintSystem<F> {
    pub fn new(vars: usize) -> Self {
        ConstraintSystem { vars, rows: Vec::new() }
    }

    pub fn push(&mut self, coeffs: Vec<(usize, F)>, rel: Relation, rhs: F, tag: RowTag) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.vars));
        self.rows.push(Row::new(coeffs, rel, rhs, tag));
    }

    /// First violated row, if any.
    pub fn first_violation(&self, x: &[F]) -> Option<usize> {
        self.rows.iter().position(|r| !r.holds(x))
    }

    pub fn contains(&self, x: &[F]) -> bool {
        self.first_violation(x).is_none()
    }

    pub fn tight_rows(&self, x: &[F]) -> Vec<usize> {
        (0..self.rows.len()).filter(|&i| self.rows[i].is_tight(x)).collect()
    }

    pub fn count_tagged(&self, pred: impl Fn(&RowTag) -> bool) -> usize {
        self.rows.iter().filter(|r| pred(&r.tag)).count()
    }

    /// Plain-text dump in an LP-file-like layout with exact `p/q` numbers.
    /// `arc_n` names variables `x_i_j` for an arc system over `arc_n` nodes.
    pub fn to_lp_text(&self, objective: Option<&[F]>, arc_n: Option<usize>) -> String {
        let name = |j: usize| match arc_n {
            Some(n) if j < n * (n - 1) => {
                let (a, b) = arc_of(n, j);
                format!("x_{}_{}", a + 1, b + 1)
            }
            _ => format!("v{j}"),
        };
        let term = |out: &mut String, first: &mut bool, c: &F, j: usize| {
            let neg = c.is_negative();
            let a = c.abs();
            if *first {
                if neg {
                    out.push_str("- ");
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            *first = false;
            if a.is_one() {
                out.push_str(&name(j));
            } else {
                let _ = write!(out, "{} {}", a, name(j));
            }
        };
        let mut s = String::from("Minimize\n obj:");
        if let Some(c) = objective {
            let mut first = true;
            s.push(' ');
            for (j, cj) in c.iter().enumerate() {
                if !cj.is_zero() {
                    term(&mut s, &mut first, cj, j);
                }
            }
            if first {
                s.push('0');
            }
        } else {
            s.push_str(" 0");
        }
        s.push_str("\nSubject To\n");
        for r in &self.rows {
            let _ = write!(s, " {}: ", r.tag);
            let mut first = true;
            for (j, a) in &r.coeffs {
                term(&mut s, &mut first, a, *j);
            }
            if first {
                s.push('0');
            }
            let _ = writeln!(s, " {} {}", r.rel, r.rhs);
        }
        s.push_str("End\n");
        s
    }
}
