use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::guards::{self, Guards};
use crate::instance::{arc_count, arc_index, arc_of, ArcVector, Role};
use crate::scalar::Field;
use crate::system::{ConstraintSystem, Relation, RowTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Bcr,
    Sj,
    Cm,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Bcr => "bcr",
            Kind::Sj => "sj",
            Kind::Cm => "cm",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bcr" => Ok(Kind::Bcr),
            "sj" => Ok(Kind::Sj),
            "cm" => Ok(Kind::Cm),
            _ => Err(Error::Parse(format!("unknown formulation {s:?}"))),
        }
    }
}

/// Node sets `W` with `r ∉ W` and `W ∩ T ≠ ∅`, as bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutFamily {
    pub n: usize,
    pub sets: Vec<u64>,
}

/// Whether the restricted cut family (Steiner part of size at most `t-2`)
/// still describes the CM polytope.
pub fn reduced_cuts_apply(n: usize, t: usize) -> bool {
    2 * t <= n + 2
}

pub fn enumerate_cuts(n: usize, t: usize, root: usize, reduced: bool) -> Result<CutFamily> {
    if t < 2 || t > n || root >= t {
        return Err(Error::Parameters(format!("bad (n, t, root) = ({n}, {t}, {})", root + 1)));
    }
    if n > 63 {
        return Err(Error::Parameters("at most 63 nodes".into()));
    }
    if reduced && !reduced_cuts_apply(n, t) {
        return Err(Error::Precondition(format!(
            "reduced cut family needs t <= n/2 + 1, got n={n} t={t}"
        )));
    }
    let terms: Vec<usize> = (0..t).filter(|&v| v != root).collect();
    let s = n - t;
    let mut sets = Vec::new();
    for w1 in 1u64..(1u64 << terms.len()) {
        let mut tmask = 0u64;
        for (k, &v) in terms.iter().enumerate() {
            if w1 >> k & 1 == 1 {
                tmask |= 1 << v;
            }
        }
        for w2 in 0u64..(1u64 << s) {
            if reduced && (w2.count_ones() as usize) > t - 2 {
                continue;
            }
            sets.push(tmask | (w2 << t));
        }
    }
    Ok(CutFamily { n, sets })
}

/// How cut rows enter a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutMode {
    /// No cut rows (they are separated lazily).
    Lazy,
    Full,
    /// Cuts whose Steiner part has at most `t − 2` nodes (CM, `t ≤ n/2 + 1`).
    /// Every integer solution satisfies the rest, but fractional points may
    /// not, so this describes a relaxation of the CM polytope.
    Reduced,
    Explicit(Vec<u64>),
}

pub fn cut_row<F: Field>(n: usize, w: u64) -> Vec<(usize, F)> {
    let mut coeffs = Vec::new();
    for i in 0..n {
        if w >> i & 1 == 1 {
            continue;
        }
        for j in 0..n {
            if w >> j & 1 == 1 {
                coeffs.push((arc_index(n, i, j), F::one()));
            }
        }
    }
    coeffs.sort_by_key(|c| c.0);
    coeffs
}

pub fn inflow_coeffs<F: Field>(n: usize, v: usize, scale: &F) -> Vec<(usize, F)> {
    (0..n).filter(|&u| u != v).map(|u| (arc_index(n, u, v), scale.clone())).collect()
}

pub fn outflow_coeffs<F: Field>(n: usize, v: usize, scale: &F) -> Vec<(usize, F)> {
    (0..n).filter(|&u| u != v).map(|u| (arc_index(n, v, u), scale.clone())).collect()
}

fn merge<F: Field>(mut a: Vec<(usize, F)>, b: Vec<(usize, F)>) -> Vec<(usize, F)> {
    a.extend(b);
    a.sort_by_key(|c| c.0);
    let mut out: Vec<(usize, F)> = Vec::with_capacity(a.len());
    for (j, c) in a {
        match out.last_mut() {
            Some((k, d)) if *k == j => *d = d.clone() + c,
            _ => out.push((j, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

fn resolve_cuts(kind: Kind, n: usize, t: usize, root: usize, mode: &CutMode) -> Result<Vec<u64>> {
    Ok(match mode {
        CutMode::Lazy => Vec::new(),
        CutMode::Full => enumerate_cuts(n, t, root, false)?.sets,
        CutMode::Reduced if kind != Kind::Cm => {
            return Err(Error::Parameters("the reduced cut family is defined for cm only".into()))
        }
        CutMode::Reduced => enumerate_cuts(n, t, root, true)?.sets,
        CutMode::Explicit(s) => s.clone(),
    })
}

/// Exact row set of the BCR, SJ or CM polytope.
pub fn build_polytope<F: Field>(kind: Kind, n: usize, t: usize, root: usize, mode: &CutMode) -> Result<ConstraintSystem<F>> {
    let cuts = resolve_cuts(kind, n, t, root, mode)?;
    let m = arc_count(n);
    let mut sys = ConstraintSystem::new(m);
    let one = F::one();
    for a in 0..m {
        sys.push(vec![(a, one.clone())], Relation::Ge, F::zero(), RowTag::Lower(a));
        sys.push(vec![(a, one.clone())], Relation::Le, one.clone(), RowTag::Upper(a));
    }
    if kind != Kind::Cm {
        for i in 0..n {
            for j in i + 1..n {
                let mut c = vec![(arc_index(n, i, j), one.clone()), (arc_index(n, j, i), one.clone())];
                c.sort_by_key(|c| c.0);
                sys.push(c, Relation::Le, one.clone(), RowTag::Pairing(i, j));
            }
        }
    }
    for &w in &cuts {
        sys.push(cut_row(n, w), Relation::Ge, one.clone(), RowTag::Cut(w));
    }
    match kind {
        Kind::Bcr => {}
        Kind::Sj => {
            sys.push(inflow_coeffs(n, root, &one), Relation::Eq, F::zero(), RowTag::RootInflow);
            for v in 0..t {
                if v != root {
                    sys.push(inflow_coeffs(n, v, &one), Relation::Eq, one.clone(), RowTag::TerminalInflow(v));
                }
            }
            for v in t..n {
                sys.push(inflow_coeffs(n, v, &one), Relation::Le, one.clone(), RowTag::Inflow(v));
            }
            for v in t..n {
                let c = merge(inflow_coeffs(n, v, &one), outflow_coeffs(n, v, &-one.clone()));
                sys.push(c, Relation::Le, F::zero(), RowTag::InOut(v));
            }
            add_inflow_covers_arc(&mut sys, n, t);
        }
        Kind::Cm => {
            sys.push(inflow_coeffs(n, root, &one), Relation::Eq, F::zero(), RowTag::RootInflow);
            for v in 0..n {
                if v != root {
                    sys.push(inflow_coeffs(n, v, &one), Relation::Le, one.clone(), RowTag::Inflow(v));
                }
            }
            for v in t..n {
                let c = merge(inflow_coeffs(n, v, &F::from_i64(2)), outflow_coeffs(n, v, &-one.clone()));
                sys.push(c, Relation::Le, F::zero(), RowTag::Balance(v));
            }
        }
    }
    Ok(sys)
}

/// Rows `x(δ⁻(v)) ≥ x_a` for every Steiner `v` and `a ∈ δ⁺(v)`.
pub fn add_inflow_covers_arc<F: Field>(sys: &mut ConstraintSystem<F>, n: usize, t: usize) {
    let one = F::one();
    for v in t..n {
        for u in 0..n {
            if u == v {
                continue;
            }
            let a = arc_index(n, v, u);
            let c = merge(inflow_coeffs(n, v, &one), vec![(a, -one.clone())]);
            sys.push(c, Relation::Ge, F::zero(), RowTag::InflowCoversArc(v, a));
        }
    }
}

/// Multi-commodity flow relaxation. Variables: the `m` arc variables, then one
/// block of `m` flow variables per terminal other than the root.
pub fn build_mcf<F: Field>(n: usize, t: usize, root: usize) -> Result<ConstraintSystem<F>> {
    if t < 2 || t > n || root >= t {
        return Err(Error::Parameters(format!("bad (n, t, root) = ({n}, {t}, {})", root + 1)));
    }
    let m = arc_count(n);
    let commodities: Vec<usize> = (0..t).filter(|&k| k != root).collect();
    let mut sys = ConstraintSystem::new(m * (1 + commodities.len()));
    let one = F::one();
    for a in 0..m {
        sys.push(vec![(a, one.clone())], Relation::Ge, F::zero(), RowTag::Lower(a));
        sys.push(vec![(a, one.clone())], Relation::Le, one.clone(), RowTag::Upper(a));
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut c = vec![(arc_index(n, i, j), one.clone()), (arc_index(n, j, i), one.clone())];
            c.sort_by_key(|c| c.0);
            sys.push(c, Relation::Le, one.clone(), RowTag::Pairing(i, j));
        }
    }
    for (b, &k) in commodities.iter().enumerate() {
        let off = m * (b + 1);
        for a in 0..m {
            sys.push(vec![(off + a, one.clone())], Relation::Ge, F::zero(), RowTag::Lower(off + a));
            sys.push(vec![(off + a, one.clone()), (a, -one.clone())], Relation::Le, F::zero(), RowTag::Capacity(k, a));
        }
        for v in 0..n {
            let mut c: Vec<(usize, F)> = Vec::new();
            for u in 0..n {
                if u != v {
                    c.push((off + arc_index(n, u, v), one.clone()));
                    c.push((off + arc_index(n, v, u), -one.clone()));
                }
            }
            c.sort_by_key(|c| c.0);
            let rhs = if v == root {
                -one.clone()
            } else if v == k {
                one.clone()
            } else {
                F::zero()
            };
            sys.push(c, Relation::Eq, rhs, RowTag::Flow(k, v));
        }
    }
    Ok(sys)
}

/// Max-flow from `s` to `k` with capacities `cap[i][j]`; returns the value
/// and the source side of a minimum cut.
pub fn max_flow<F: Field>(cap: &[Vec<F>], s: usize, k: usize, stop_at: Option<&F>) -> (F, Vec<bool>) {
    let n = cap.len();
    let mut res: Vec<Vec<F>> = cap.to_vec();
    let mut flow = F::zero();
    loop {
        if let Some(lim) = stop_at {
            if flow >= *lim {
                break;
            }
        }
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            if u == k {
                break;
            }
            for v in 0..n {
                if prev[v] == usize::MAX && res[u][v].is_positive() {
                    prev[v] = u;
                    q.push_back(v);
                }
            }
        }
        if prev[k] == usize::MAX {
            break;
        }
        let mut b = res[prev[k]][k].clone();
        let mut v = k;
        while v != s {
            let u = prev[v];
            if res[u][v] < b {
                b = res[u][v].clone();
            }
            v = u;
        }
        let mut v = k;
        while v != s {
            let u = prev[v];
            res[u][v] = res[u][v].clone() - b.clone();
            res[v][u] = res[v][u].clone() + b.clone();
            v = u;
        }
        flow = flow + b;
    }
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for v in 0..n {
            if !seen[v] && res[u][v].is_positive() {
                seen[v] = true;
                q.push_back(v);
            }
        }
    }
    (flow, seen)
}

/// A cut set `W` with `x(δ⁻(W)) < 1`, or `None` when every cut row holds.
pub fn separate_cut<F: Field>(x: &ArcVector<F>, t: usize, root: usize) -> Option<u64> {
    let n = x.n;
    let mut cap = vec![vec![F::zero(); n]; n];
    for (i, j, v) in x.support() {
        cap[i][j] = v;
    }
    let one = F::one();
    for k in 0..t {
        if k == root {
            continue;
        }
        let (f, src) = max_flow(&cap, root, k, Some(&one));
        if f < one {
            let mut w = 0u64;
            for v in 0..n {
                if !src[v] {
                    w |= 1 << v;
                }
            }
            return Some(w);
        }
    }
    None
}

pub fn cut_inflow<F: Field>(x: &ArcVector<F>, w: u64) -> F {
    let mut s = F::zero();
    for (i, j, v) in x.support() {
        if w >> i & 1 == 0 && w >> j & 1 == 1 {
            s = s + v;
        }
    }
    s
}

/// Membership test without materialising the cut family: explicit non-cut
/// rows plus exact separation. Returns the violated row's description.
pub fn check_point<F: Field>(kind: Kind, x: &ArcVector<F>, t: usize, root: usize) -> Result<Option<String>> {
    let sys = build_polytope::<F>(kind, x.n, t, root, &CutMode::Lazy)?;
    if let Some(r) = sys.first_violation(&x.values) {
        return Ok(Some(sys.rows[r].tag.to_string()));
    }
    Ok(separate_cut(x, t, root).map(|w| RowTag::Cut(w).to_string()))
}

/// Every 0/1 point of the polytope.
///
/// CM: trees on `T ∪ S` for Steiner subsets `|S| ≤ t-2` whose Steiner nodes
/// have degree at least 3, oriented away from the root. BCR: every arc set
/// obeying the pairing rows whose arcs connect the root to all terminals
/// (a `3^|E|` scan, so it is held to `n ≤ 6`).
pub fn integer_solutions<F: Field>(kind: Kind, n: usize, t: usize, root: usize) -> Result<Vec<ArcVector<F>>> {
    let g = Guards::current();
    guards::check("integer_solutions n", n, g.integer_n)?;
    if t < 2 || t > n || root >= t {
        return Err(Error::Parameters(format!("bad (n, t, root) = ({n}, {t}, {})", root + 1)));
    }
    match kind {
        Kind::Cm => Ok(cm_trees(n, t, root)),
        Kind::Bcr => {
            guards::check("integer_solutions n (BCR scan)", n, g.integer_n.min(6))?;
            Ok(bcr_points(n, t, root))
        }
        Kind::Sj => Err(Error::Parameters("integer enumeration is provided for BCR and CM".into())),
    }
}

fn cm_trees<F: Field>(n: usize, t: usize, root: usize) -> Vec<ArcVector<F>> {
    let steiner: Vec<usize> = (t..n).collect();
    let mut out = Vec::new();
    for smask in 0u64..(1u64 << steiner.len()) {
        let s = smask.count_ones() as usize;
        if s + 2 > t && s > 0 {
            continue;
        }
        let mut nodes: Vec<usize> = (0..t).collect();
        nodes.extend(steiner.iter().enumerate().filter(|(k, _)| smask >> k & 1 == 1).map(|(_, &v)| v));
        let k = nodes.len();
        for_each_labeled_tree(k, |edges, deg| {
            if (t..k).any(|p| deg[p] < 3) {
                return;
            }
            let mut adj = vec![Vec::new(); k];
            for &(a, b) in edges {
                adj[a].push(b);
                adj[b].push(a);
            }
            let mut x = ArcVector::zeros(n);
            let mut seen = vec![false; k];
            let r = nodes.iter().position(|&v| v == root).unwrap();
            seen[r] = true;
            let mut stack = vec![r];
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        x.set(nodes[u], nodes[w], F::one());
                        stack.push(w);
                    }
                }
            }
            out.push(x);
        });
    }
    out
}

/// Calls `f(edges, degrees)` for every labeled tree on `k` nodes (Prüfer).
pub fn for_each_labeled_tree(k: usize, mut f: impl FnMut(&[(usize, usize)], &[usize])) {
    if k == 1 {
        f(&[], &[0]);
        return;
    }
    if k == 2 {
        f(&[(0, 1)], &[1, 1]);
        return;
    }
    let len = k - 2;
    let mut seq = vec![0usize; len];
    let mut edges = Vec::with_capacity(k - 1);
    loop {
        let mut deg = vec![1usize; k];
        for &s in &seq {
            deg[s] += 1;
        }
        let full = deg.clone();
        edges.clear();
        let mut d = deg;
        for &s in &seq {
            let leaf = (0..k).find(|&v| d[v] == 1).unwrap();
            edges.push((leaf, s));
            d[leaf] = 0;
            d[s] -= 1;
        }
        let rest: Vec<usize> = (0..k).filter(|&v| d[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        f(&edges, &full);
        let mut p = len;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            seq[p] += 1;
            if seq[p] < k {
                break;
            }
            seq[p] = 0;
        }
    }
}

fn bcr_points<F: Field>(n: usize, t: usize, root: usize) -> Vec<ArcVector<F>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut state = vec![0u8; pairs.len()];
    loop {
        let mut adj = vec![0u64; n];
        for (p, &(i, j)) in pairs.iter().enumerate() {
            match state[p] {
                1 => adj[i] |= 1 << j,
                2 => adj[j] |= 1 << i,
                _ => {}
            }
        }
        let mut reach = 1u64 << root;
        let mut frontier = reach;
        while frontier != 0 {
            let mut next = 0u64;
            for v in 0..n {
                if frontier >> v & 1 == 1 {
                    next |= adj[v];
                }
            }
            frontier = next & !reach;
            reach |= next;
        }
        let tmask = (1u64 << t) - 1;
        if reach & tmask == tmask {
            let mut x = ArcVector::zeros(n);
            for (p, &(i, j)) in pairs.iter().enumerate() {
                match state[p] {
                    1 => x.set(i, j, F::one()),
                    2 => x.set(j, i, F::one()),
                    _ => {}
                }
            }
            out.push(x);
        }
        let mut p = 0;
        loop {
            if p == pairs.len() {
                return out;
            }
            state[p] += 1;
            if state[p] < 3 {
                break;
            }
            state[p] = 0;
            p += 1;
        }
    }
}

/// Roles of all nodes for `(t, root)`.
pub fn roles(n: usize, t: usize, root: usize) -> Vec<Role> {
    (0..n).map(|v| Role::of(v, t, root)).collect()
}

/// `(i, j)` pairs of the support in arc-index order.
pub fn arcs_of_support<F: Field>(x: &ArcVector<F>) -> Vec<(usize, usize)> {
    x.values.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(a, _)| arc_of(x.n, a)).collect()
}
