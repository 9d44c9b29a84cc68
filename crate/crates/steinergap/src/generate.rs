//! Isomorph-free generation of undirected graphs (canonical augmentation by
//! edge addition) and of their orientations.

use std::collections::HashSet;

use crate::canon::{canonical_form, group_elements, Canon};

/// Simple undirected graph on at most 64 nodes, as adjacency bitsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    pub n: usize,
    pub adj: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= 64);
        Graph { n, adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::empty(n);
        for &(a, b) in edges {
            g.add(a, b);
        }
        g
    }

    pub fn add(&mut self, a: usize, b: usize) {
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        self.adj[a] &= !(1 << b);
        self.adj[b] &= !(1 << a);
    }

    pub fn has(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            let mut m = self.adj[a] >> (a + 1);
            while m != 0 {
                let k = m.trailing_zeros() as usize;
                out.push((a, a + 1 + k));
                m &= m - 1;
            }
        }
        out
    }

    pub fn components(&self) -> usize {
        let mut seen = 0u64;
        let mut count = 0;
        for s in 0..self.n {
            if seen >> s & 1 == 1 {
                continue;
            }
            count += 1;
            let mut frontier = 1u64 << s;
            seen |= frontier;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.adj[v] & !seen;
                seen |= new;
                frontier |= new;
            }
        }
        count
    }

    pub fn canon(&self) -> Canon {
        let n = self.n;
        let mut m = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                if self.has(a, b) {
                    m[a * n + b] = 1;
                }
            }
        }
        canonical_form(n, &vec![0; n], &m)
    }
}

/// Which graphs `gen_graphs` emits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub min_edges: usize,
    pub max_edges: usize,
    pub min_degree: usize,
    pub connected: bool,
    /// At most this many nodes may have degree exactly `min_degree`.
    pub max_min_degree_nodes: Option<usize>,
}

impl GenSpec {
    pub fn accepts(&self, g: &Graph) -> bool {
        let e = g.edge_count();
        if e < self.min_edges || e > self.max_edges {
            return false;
        }
        if (0..g.n).any(|v| g.degree(v) < self.min_degree) {
            return false;
        }
        if let Some(k) = self.max_min_degree_nodes {
            if (0..g.n).filter(|&v| g.degree(v) == self.min_degree).count() > k {
                return false;
            }
        }
        !self.connected || g.components() <= 1
    }

    /// Whether some supergraph with at most `max_edges` edges can still meet
    /// the degree and connectivity requirements. Each added edge lowers the
    /// total degree deficiency by at most 2 and the component count by at
    /// most 1, so the test is inherited by every ancestor of an accepted graph.
    fn reachable(&self, g: &Graph) -> bool {
        let e = g.edge_count();
        if e > self.max_edges {
            return false;
        }
        let left = self.max_edges - e;
        let deficiency: usize = (0..g.n).map(|v| self.min_degree.saturating_sub(g.degree(v))).sum();
        if deficiency.div_ceil(2) > left {
            return false;
        }
        !self.connected || g.components() - 1 <= left
    }
}

fn orbit_of_pair(gens: &[Vec<usize>], e: (usize, usize)) -> HashSet<(usize, usize)> {
    let norm = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    let mut seen = HashSet::from([e]);
    let mut stack = vec![e];
    while let Some((a, b)) = stack.pop() {
        for g in gens {
            let img = norm(g[a], g[b]);
            if seen.insert(img) {
                stack.push(img);
            }
        }
    }
    seen
}

/// One representative per isomorphism class of graphs accepted by `spec`,
/// passed to `emit` in generation order. Returning `false` from `emit`
/// stops the generation.
pub fn gen_graphs(spec: &GenSpec, mut emit: impl FnMut(&Graph) -> bool) {
    let root = Graph::empty(spec.n);
    if !spec.reachable(&root) {
        return;
    }
    let c = root.canon();
    descend(spec, &root, &c, &mut emit);
}

fn descend(spec: &GenSpec, g: &Graph, c: &Canon, emit: &mut impl FnMut(&Graph) -> bool) -> bool {
    if spec.accepts(g) && !emit(g) {
        return false;
    }
    if g.edge_count() >= spec.max_edges {
        return true;
    }
    // Orbit representatives of non-edges under Aut(g).
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    for a in 0..g.n {
        for b in a + 1..g.n {
            if g.has(a, b) || done.contains(&(a, b)) {
                continue;
            }
            done.extend(orbit_of_pair(&c.gens, (a, b)));
            let mut h = g.clone();
            h.add(a, b);
            if !spec.reachable(&h) {
                continue;
            }
            let hc = h.canon();
            // Canonical deletion: the edge whose canonical end positions are
            // lexicographically largest.
            let pos = hc.positions();
            let last = h
                .edges()
                .into_iter()
                .max_by_key(|&(u, v)| {
                    let (p, q) = (pos[u], pos[v]);
                    (p.max(q), p.min(q))
                })
                .unwrap();
            if !orbit_of_pair(&hc.gens, last).contains(&(a, b)) {
                continue;
            }
            if !descend(spec, &h, &hc, emit) {
                return false;
            }
        }
    }
    true
}

/// Which orientations `gen_orientations` emits.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrientSpec {
    pub max_indegree: usize,
    /// If set, `indegree_counts[d]` nodes must have indegree exactly `d`
    /// (and no node may exceed the listed degrees).
    pub indegree_counts: Option<Vec<usize>>,
}

/// Automorphism groups above this size fall back to key-based dedup.
const GROUP_LIMIT: usize = 5000;

/// One orientation per digraph isomorphism class (each edge directed one
/// way), as arc lists. Two orientations of `g` are isomorphic exactly when an
/// automorphism of `g` maps one to the other.
pub fn gen_orientations(g: &Graph, spec: &OrientSpec) -> Vec<Vec<(usize, usize)>> {
    let edges = g.edges();
    let n = g.n;
    let canon = g.canon();
    let group = group_elements(n, &canon.gens, GROUP_LIMIT);
    let eidx = |a: usize, b: usize| edges.binary_search(&(a.min(b), a.max(b))).unwrap();
    // For each group element: edge permutation and whether the edge flips.
    let actions: Option<Vec<Vec<(usize, bool)>>> = group.as_ref().map(|grp| {
        grp.iter()
            .map(|p| {
                edges
                    .iter()
                    .map(|&(a, b)| {
                        let (x, y) = (p[a], p[b]);
                        (eidx(x, y), x > y)
                    })
                    .collect()
            })
            .collect()
    });
    let mut out = Vec::new();
    let mut seen_keys: HashSet<Vec<u32>> = HashSet::new();
    let mut indeg = vec![0usize; n];
    // bit k set: edge k oriented b -> a (against its sorted order)
    let mut mask: u128 = 0;
    assert!(edges.len() <= 128);
    let limit = spec.max_indegree;
    let counts = spec.indegree_counts.clone();
    let mut left = vec![0usize; n]; // undecided incident edges
    for &(a, b) in &edges {
        left[a] += 1;
        left[b] += 1;
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        edges: &[(usize, usize)],
        indeg: &mut Vec<usize>,
        left: &mut Vec<usize>,
        mask: &mut u128,
        limit: usize,
        counts: &Option<Vec<usize>>,
        found: &mut dyn FnMut(u128),
    ) {
        if let Some(c) = counts {
            // Each node's final indegree lies in [indeg, indeg + left]; the
            // number of nodes that can still end at degree d must cover c[d].
            for (d, &need) in c.iter().enumerate() {
                let can = (0..indeg.len()).filter(|&v| indeg[v] <= d && d <= indeg[v] + left[v]).count();
                let fixed = (0..indeg.len()).filter(|&v| left[v] == 0 && indeg[v] == d).count();
                if can < need || fixed > need {
                    return;
                }
            }
        }
        if k == edges.len() {
            if let Some(c) = counts {
                let mut h = vec![0usize; c.len()];
                for &d in indeg.iter() {
                    if d >= c.len() {
                        return;
                    }
                    h[d] += 1;
                }
                if h != *c {
                    return;
                }
            }
            found(*mask);
            return;
        }
        let (a, b) = edges[k];
        left[a] -= 1;
        left[b] -= 1;
        // a -> b
        if indeg[b] < limit {
            indeg[b] += 1;
            rec(k + 1, edges, indeg, left, mask, limit, counts, found);
            indeg[b] -= 1;
        }
        // b -> a
        if indeg[a] < limit {
            indeg[a] += 1;
            *mask |= 1 << k;
            rec(k + 1, edges, indeg, left, mask, limit, counts, found);
            *mask &= !(1 << k);
            indeg[a] -= 1;
        }
        left[a] += 1;
        left[b] += 1;
    }

    let arcs_of = |m: u128| -> Vec<(usize, usize)> {
        edges.iter().enumerate().map(|(k, &(a, b))| if m >> k & 1 == 1 { (b, a) } else { (a, b) }).collect()
    };
    let mut found = |m: u128| {
        let keep = match &actions {
            Some(acts) => acts.iter().all(|act| {
                let mut img: u128 = 0;
                for (k, &(e, flip)) in act.iter().enumerate() {
                    if (m >> k & 1 == 1) != flip {
                        img |= 1 << e;
                    }
                }
                img >= m
            }),
            None => {
                let mut adj = vec![0u32; n * n];
                for (a, b) in arcs_of(m) {
                    adj[a * n + b] = 1;
                }
                seen_keys.insert(canonical_form(n, &vec![0; n], &adj).cert)
            }
        };
        if keep {
            out.push(arcs_of(m));
        }
    };
    rec(0, &edges, &mut indeg, &mut left, &mut mask, limit, &counts, &mut found);
    out
}
