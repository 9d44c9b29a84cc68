//! Weighted support digraphs and their isomorphism-invariant keys.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, Canon};
use crate::instance::{ArcVector, Role};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredDigraph<F> {
    pub colors: Vec<Role>,
    /// Node ids in the point the graph was taken from.
    pub origin: Vec<usize>,
    pub arcs: Vec<(usize, usize, F)>,
}

/// Relabelling-invariant identifier of a coloured weighted digraph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalKey(pub String);

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn color_code(r: Role) -> u32 {
    match r {
        Role::Root => 0,
        Role::Terminal => 1,
        Role::Steiner => 2,
    }
}

/// Nodes touched by a positive arc, with those arcs.
pub fn support_graph<F: Field>(x: &ArcVector<F>, t: usize, root: usize) -> ColoredDigraph<F> {
    let sup = x.support();
    let mut used = vec![false; x.n];
    for (i, j, _) in &sup {
        used[*i] = true;
        used[*j] = true;
    }
    let origin: Vec<usize> = (0..x.n).filter(|&v| used[v]).collect();
    let mut index = vec![usize::MAX; x.n];
    for (k, &v) in origin.iter().enumerate() {
        index[v] = k;
    }
    ColoredDigraph {
        colors: origin.iter().map(|&v| Role::of(v, t, root)).collect(),
        arcs: sup.into_iter().map(|(i, j, w)| (index[i], index[j], w)).collect(),
        origin,
    }
}

impl<F: Field> ColoredDigraph<F> {
    pub fn node_count(&self) -> usize {
        self.colors.len()
    }

    fn weights(&self) -> Vec<F> {
        let mut w: Vec<F> = self.arcs.iter().map(|a| a.2.clone()).collect();
        w.sort();
        w.dedup();
        w
    }

    fn matrix(&self, weights: &[F]) -> Vec<u32> {
        let n = self.node_count();
        let mut adj = vec![0u32; n * n];
        for (i, j, w) in &self.arcs {
            adj[i * n + j] = weights.binary_search(w).unwrap() as u32 + 1;
        }
        adj
    }

    pub fn canon(&self) -> Canon {
        let colors: Vec<u32> = self.colors.iter().map(|&c| color_code(c)).collect();
        canonical_form(self.node_count(), &colors, &self.matrix(&self.weights()))
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        let weights = self.weights();
        assert!(weights.len() < 36, "too many distinct arc weights for a key");
        let c = self.canon();
        let n = self.node_count();
        let mut s = format!("{n}|");
        s.push_str(&weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(","));
        s.push('|');
        for &v in &c.cert[..n] {
            s.push(['r', 't', 's'][v as usize]);
        }
        s.push('|');
        for &v in &c.cert[n..] {
            s.push(char::from_digit(v, 36).unwrap());
        }
        CanonicalKey(s)
    }

    /// Weakly connected (an empty graph counts as connected).
    pub fn is_weakly_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for (i, j, _) in &self.arcs {
            adj[*i].push(*j);
            adj[*j].push(*i);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Graphviz rendering; node names are the 1-based ids of the source point.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph support {\n");
        for (k, c) in self.colors.iter().enumerate() {
            let shape = match c {
                Role::Root => "doublecircle",
                Role::Terminal => "circle",
                Role::Steiner => "box",
            };
            s.push_str(&format!("  {} [shape={shape}];\n", self.origin[k] + 1));
        }
        for (i, j, w) in &self.arcs {
            s.push_str(&format!("  {} -> {} [label=\"{w}\"];\n", self.origin[*i] + 1, self.origin[*j] + 1));
        }
        s.push_str("}\n");
        s
    }
}

/// Canonical key of a point's support graph.
pub fn point_key<F: Field>(x: &ArcVector<F>, t: usize, root: usize) -> CanonicalKey {
    support_graph(x, t, root).canonical_key()
}
