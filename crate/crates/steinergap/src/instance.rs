//! Instances, points and metric utilities.
//!
//! Nodes are 0-based internally: terminals occupy `0..t` and Steiner nodes
//! `t..n`. The JSON formats are 1-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    Root,
    Terminal,
    Steiner,
}

impl Role {
    pub fn of(v: usize, t: usize, root: usize) -> Role {
        if v == root {
            Role::Root
        } else if v < t {
            Role::Terminal
        } else {
            Role::Steiner
        }
    }
}

/// Arc variable index of `(i, j)` among the `n(n-1)` ordered pairs.
#[inline]
pub fn arc_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i != j && i < n && j < n);
    i * (n - 1) + if j < i { j } else { j - 1 }
}

#[inline]
pub fn arc_of(n: usize, a: usize) -> (usize, usize) {
    let i = a / (n - 1);
    let k = a % (n - 1);
    (i, if k < i { k } else { k + 1 })
}

pub fn arc_count(n: usize) -> usize {
    n * (n - 1)
}

/// Complete graph with symmetric costs, `t` terminals and a root among them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerInstance<F> {
    pub n: usize,
    pub t: usize,
    pub root: usize,
    pub cost: Vec<Vec<F>>,
}

impl<F: Field> SteinerInstance<F> {
    pub fn new(n: usize, t: usize, root: usize, cost: Vec<Vec<F>>) -> Result<Self> {
        let inst = SteinerInstance { n, t, root, cost };
        inst.check_structure()?;
        Ok(inst)
    }

    pub fn uniform(n: usize, t: usize, c: F) -> Self {
        let cost = (0..n)
            .map(|i| (0..n).map(|j| if i == j { F::zero() } else { c.clone() }).collect())
            .collect();
        SteinerInstance { n, t, root: 0, cost }
    }

    pub fn from_fn(n: usize, t: usize, root: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut cost = vec![vec![F::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let c = f(i, j);
                cost[i][j] = c.clone();
                cost[j][i] = c;
            }
        }
        SteinerInstance { n, t, root, cost }
    }

    pub fn role(&self, v: usize) -> Role {
        Role::of(v, self.t, self.root)
    }

    pub fn check_structure(&self) -> Result<()> {
        if self.t < 2 || self.t > self.n {
            return Err(Error::Parameters(format!("need 2 <= t <= n, got n={} t={}", self.n, self.t)));
        }
        if self.root >= self.t {
            return Err(Error::Parameters(format!("root {} is not a terminal", self.root + 1)));
        }
        if self.cost.len() != self.n || self.cost.iter().any(|r| r.len() != self.n) {
            return Err(Error::Structure("cost matrix is not n x n".into()));
        }
        for i in 0..self.n {
            if !self.cost[i][i].is_zero() {
                return Err(Error::Structure(format!("nonzero diagonal at node {}", i + 1)));
            }
            for j in 0..self.n {
                if self.cost[i][j] != self.cost[j][i] {
                    return Err(Error::Structure(format!("asymmetric cost between {} and {}", i + 1, j + 1)));
                }
                if self.cost[i][j].is_negative() {
                    return Err(Error::Structure(format!("negative cost between {} and {}", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    /// Objective vector over arc variables: both arcs of an edge cost `c_e`.
    pub fn arc_costs(&self) -> Vec<F> {
        (0..arc_count(self.n))
            .map(|a| {
                let (i, j) = arc_of(self.n, a);
                self.cost[i][j].clone()
            })
            .collect()
    }
}

/// Every triple `(i, j, k)` (0-based) with `c_ij > c_ik + c_kj`; empty iff metric.
pub fn validate_metric<F: Field>(inst: &SteinerInstance<F>) -> Result<Vec<(usize, usize, usize)>> {
    inst.check_structure()?;
    let c = &inst.cost;
    let mut bad = Vec::new();
    for i in 0..inst.n {
        for j in i + 1..inst.n {
            for k in 0..inst.n {
                if k != i && k != j && c[i][j] > c[i][k].clone() + c[k][j].clone() {
                    bad.push((i, j, k));
                }
            }
        }
    }
    Ok(bad)
}

/// Sparse undirected weighted graph, the input form of `metric_closure`.
#[derive(Debug, Clone)]
pub struct WeightedGraph<F> {
    pub n: usize,
    pub edges: Vec<(usize, usize, F)>,
}

/// Complete instance whose costs are shortest-path distances of `g`.
pub fn metric_closure<F: Field>(g: &WeightedGraph<F>, t: usize, root: usize) -> Result<SteinerInstance<F>> {
    let n = g.n;
    let mut d: Vec<Vec<Option<F>>> = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(F::zero());
    }
    for (u, v, w) in &g.edges {
        if w.is_negative() {
            return Err(Error::Structure(format!("negative weight on edge {}-{}", u + 1, v + 1)));
        }
        if *u == *v {
            continue;
        }
        let better = match &d[*u][*v] {
            Some(c) => w < c,
            None => true,
        };
        if better {
            d[*u][*v] = Some(w.clone());
            d[*v][*u] = Some(w.clone());
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k].clone() else { continue };
            for j in 0..n {
                let Some(kj) = d[k][j].clone() else { continue };
                let via = ik.clone() + kj;
                if d[i][j].as_ref().map_or(true, |c| via < *c) {
                    d[i][j] = Some(via);
                }
            }
        }
    }
    let mut cost = vec![vec![F::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            match &d[i][j] {
                Some(c) => cost[i][j] = c.clone(),
                None => return Err(Error::Disconnected(i + 1, j + 1)),
            }
        }
    }
    SteinerInstance::new(n, t, root, cost)
}

/// A point of an arc-variable relaxation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArcVector<F> {
    pub n: usize,
    pub values: Vec<F>,
}

impl<F: Field> ArcVector<F> {
    pub fn zeros(n: usize) -> Self {
        ArcVector { n, values: vec![F::zero(); arc_count(n)] }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize, F)]) -> Self {
        let mut x = Self::zeros(n);
        for (i, j, v) in arcs {
            x.set(*i, *j, v.clone());
        }
        x
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.values[arc_index(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        let a = arc_index(self.n, i, j);
        self.values[a] = v;
    }

    /// `(from, to, value)` for every arc with nonzero value, in index order.
    pub fn support(&self) -> Vec<(usize, usize, F)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(a, v)| {
                let (i, j) = arc_of(self.n, a);
                (i, j, v.clone())
            })
            .collect()
    }

    pub fn inflow(&self, v: usize) -> F {
        let mut s = F::zero();
        for u in 0..self.n {
            if u != v {
                s.add_assign_ref(self.get(u, v));
            }
        }
        s
    }

    pub fn outflow(&self, v: usize) -> F {
        let mut s = F::zero();
        for u in 0..self.n {
            if u != v {
                s.add_assign_ref(self.get(v, u));
            }
        }
        s
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    pub fn dot(&self, c: &[F]) -> F {
        let mut s = F::zero();
        for (x, c) in self.values.iter().zip(c) {
            if !x.is_zero() {
                s = s + x.clone() * c.clone();
            }
        }
        s
    }

    /// Cost of the point under an instance: `sum c_ij x_ij`.
    pub fn cost(&self, inst: &SteinerInstance<F>) -> F {
        let mut s = F::zero();
        for (i, j, v) in self.support() {
            s = s + v * inst.cost[i][j].clone();
        }
        s
    }

    /// Relabel nodes by `perm` (old node `v` becomes `perm[v]`).
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut y = Self::zeros(self.n);
        for (i, j, v) in self.support() {
            y.set(perm[i], perm[j], v);
        }
        y
    }

    /// Nodes with no incident positive arc.
    pub fn isolated_nodes(&self) -> Vec<usize> {
        let mut touched = vec![false; self.n];
        for (i, j, _) in self.support() {
            touched[i] = true;
            touched[j] = true;
        }
        (0..self.n).filter(|&v| !touched[v]).collect()
    }

    pub fn convert<G: Field>(&self) -> ArcVector<G> {
        ArcVector { n: self.n, values: self.values.iter().map(|v| G::from_big(&v.to_big())).collect() }
    }
}

/// `c_ij = 2 - (x_ij + x_ji)` for an integer point.
pub fn one_two_cost_instance<F: Field>(x: &ArcVector<F>, t: usize, root: usize) -> Result<SteinerInstance<F>> {
    if !x.is_integral() {
        return Err(Error::NotIntegral);
    }
    let two = F::from_i64(2);
    let inst = SteinerInstance::from_fn(x.n, t, root, |i, j| two.clone() - x.get(i, j).clone() - x.get(j, i).clone());
    if inst.cost.iter().flatten().any(|c| c.is_negative()) {
        return Err(Error::Structure("point uses both arcs of an edge".into()));
    }
    Ok(inst)
}

/// {1,2}-costs from an undirected edge list: 1 on listed edges, 2 elsewhere.
pub fn one_two_from_edges<F: Field>(n: usize, t: usize, root: usize, edges: &[(usize, usize)]) -> SteinerInstance<F> {
    let mut on = vec![vec![false; n]; n];
    for &(u, v) in edges {
        on[u][v] = true;
        on[v][u] = true;
    }
    SteinerInstance::from_fn(n, t, root, |i, j| F::from_i64(if on[i][j] { 1 } else { 2 }))
}

// ---- JSON ----------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceJson {
    pub n: usize,
    pub t: usize,
    pub root: usize,
    pub costs: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcJson {
    pub from: usize,
    pub to: usize,
    pub value: String,
}

/// Point file. `t` and `root` are optional extras so a point file alone
/// determines the polytope it belongs to.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
    pub arcs: Vec<ArcJson>,
}

fn parse<F: Field>(s: &str) -> Result<F> {
    s.parse::<F>().map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}

impl<F: Field> SteinerInstance<F> {
    pub fn to_json(&self) -> InstanceJson {
        InstanceJson {
            n: self.n,
            t: self.t,
            root: self.root + 1,
            costs: self.cost.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect(),
        }
    }

    /// Reads an instance; terminals must already be `1..t`.
    pub fn from_json(j: &InstanceJson) -> Result<Self> {
        if j.root == 0 {
            return Err(Error::Parse("root is 1-based".into()));
        }
        let cost = j.costs.iter().map(|r| r.iter().map(|s| parse(s)).collect::<Result<Vec<F>>>()).collect::<Result<Vec<_>>>()?;
        SteinerInstance::new(j.n, j.t, j.root - 1, cost)
    }
}

impl<F: Field> ArcVector<F> {
    pub fn to_json(&self, t: Option<usize>, root: Option<usize>) -> PointJson {
        PointJson {
            n: self.n,
            t,
            root: root.map(|r| r + 1),
            arcs: self
                .support()
                .into_iter()
                .map(|(i, j, v)| ArcJson { from: i + 1, to: j + 1, value: v.to_string() })
                .collect(),
        }
    }

    pub fn from_json(j: &PointJson) -> Result<Self> {
        let mut x = Self::zeros(j.n);
        for a in &j.arcs {
            if a.from == 0 || a.to == 0 || a.from > j.n || a.to > j.n || a.from == a.to {
                return Err(Error::Parse(format!("bad arc {} -> {}", a.from, a.to)));
            }
            x.set(a.from - 1, a.to - 1, parse(&a.value)?);
        }
        Ok(x)
    }
}

/// Sparse graph file for `metric_closure`: terminals `1..t`, 1-based ids.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub t: usize,
    pub root: usize,
    pub edges: Vec<(usize, usize, String)>,
}

impl<F: Field> WeightedGraph<F> {
    pub fn from_json(j: &GraphJson) -> Result<Self> {
        let mut edges = Vec::with_capacity(j.edges.len());
        for (u, v, w) in &j.edges {
            if *u == 0 || *v == 0 || *u > j.n || *v > j.n {
                return Err(Error::Parse(format!("bad edge {u}-{v}")));
            }
            edges.push((u - 1, v - 1, parse(w)?));
        }
        Ok(WeightedGraph { n: j.n, edges })
    }
}
