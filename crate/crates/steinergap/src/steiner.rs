//! Exact integer Steiner tree values.

use crate::error::{Error, Result};
use crate::formulation::{CutMode, Kind};
use crate::guards::{self, Guards};
use crate::instance::SteinerInstance;
use crate::relax::solve_relaxation;
use crate::scalar::Field;

/// An optimal Steiner tree, arcs oriented away from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerTree<F> {
    pub arcs: Vec<(usize, usize)>,
    pub cost: F,
}

fn shortest_paths<F: Field>(c: &[Vec<F>]) -> (Vec<Vec<F>>, Vec<Vec<usize>>) {
    let n = c.len();
    let mut d = c.to_vec();
    // next[i][j]: first hop on a shortest i -> j path
    let mut next: Vec<Vec<usize>> = (0..n).map(|_| (0..n).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k].clone() + d[k][j].clone();
                if via < d[i][j] {
                    d[i][j] = via;
                    next[i][j] = next[i][k];
                }
            }
        }
    }
    (d, next)
}

#[derive(Clone, Copy)]
enum Back {
    Leaf,
    Split(usize),
}

/// Dreyfus–Wagner over the terminal subsets (root excluded).
///
/// Ties are broken deterministically by the smallest split set and the
/// smallest intermediate node.
pub fn stp_exact<F: Field>(inst: &SteinerInstance<F>) -> Result<SteinerTree<F>> {
    let g = Guards::current();
    guards::check("Dreyfus-Wagner terminals", inst.t, g.dw_terminals)?;
    let n = inst.n;
    let (d, next) = shortest_paths(&inst.cost);
    let terms: Vec<usize> = (0..inst.t).filter(|&v| v != inst.root).collect();
    let k = terms.len();
    let full = (1usize << k) - 1;
    // split[S][v]: best tree for S ∪ {v} with v of degree >= 2 (or a leaf path)
    // best[S][v]: best tree for S ∪ {v}
    let mut split = vec![Vec::<F>::new(); full + 1];
    let mut split_back = vec![Vec::<Back>::new(); full + 1];
    let mut best = vec![Vec::<F>::new(); full + 1];
    let mut best_back = vec![Vec::<usize>::new(); full + 1];
    let mut masks: Vec<usize> = (1..=full).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for s in masks {
        let mut sv = Vec::with_capacity(n);
        let mut sb = Vec::with_capacity(n);
        if s.count_ones() == 1 {
            let tk = terms[s.trailing_zeros() as usize];
            for v in 0..n {
                sv.push(d[tk][v].clone());
                sb.push(Back::Leaf);
            }
        } else {
            let low = s & s.wrapping_neg();
            for v in 0..n {
                let mut bv: Option<F> = None;
                let mut ba = 0;
                // subsets A of S containing the lowest bit, A != S
                let rest = s ^ low;
                let mut sub = rest;
                loop {
                    let a = sub | low;
                    if a != s {
                        let val = best[a][v].clone() + best[s ^ a][v].clone();
                        if bv.as_ref().map_or(true, |b| val < *b || (val == *b && a < ba)) {
                            bv = Some(val);
                            ba = a;
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
                sv.push(bv.unwrap());
                sb.push(Back::Split(ba));
            }
        }
        let mut bv = Vec::with_capacity(n);
        let mut bb = Vec::with_capacity(n);
        for v in 0..n {
            let mut best_u = v;
            let mut val = sv[v].clone();
            for u in 0..n {
                let cand = sv[u].clone() + d[u][v].clone();
                if cand < val {
                    val = cand;
                    best_u = u;
                }
            }
            bv.push(val);
            bb.push(best_u);
        }
        split[s] = sv;
        split_back[s] = sb;
        best[s] = bv;
        best_back[s] = bb;
    }

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let path = |a: usize, b: usize, edges: &mut Vec<(usize, usize)>| {
        let mut u = a;
        while u != b {
            let w = next[u][b];
            edges.push((u.min(w), u.max(w)));
            u = w;
        }
    };
    if k > 0 {
        let mut stack = vec![(full, inst.root, true)];
        while let Some((s, v, via)) = stack.pop() {
            if via {
                let u = best_back[s][v];
                path(u, v, &mut edges);
                stack.push((s, u, false));
            } else {
                match split_back[s][v] {
                    Back::Leaf => path(terms[s.trailing_zeros() as usize], v, &mut edges),
                    Back::Split(a) => {
                        stack.push((a, v, true));
                        stack.push((s ^ a, v, true));
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let tree = orient_and_prune(n, inst.t, inst.root, &edges);
    let cost = tree.iter().fold(F::zero(), |s, &(i, j)| s + inst.cost[i][j].clone());
    let opt = if k > 0 { best[full][inst.root].clone() } else { F::zero() };
    if cost != opt {
        return Err(Error::Internal(format!("tree reconstruction cost {cost} differs from optimum {opt}")));
    }
    Ok(SteinerTree { arcs: tree, cost })
}

/// BFS spanning tree of the edge set from the root, with non-terminal leaves
/// pruned repeatedly; arcs sorted.
fn orient_and_prune(n: usize, t: usize, root: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for l in adj.iter_mut() {
        l.sort_unstable();
    }
    let mut parent = vec![usize::MAX; n];
    parent[root] = root;
    let mut order = vec![root];
    let mut q = std::collections::VecDeque::from([root]);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u] {
            if parent[w] == usize::MAX {
                parent[w] = u;
                order.push(w);
                q.push_back(w);
            }
        }
    }
    let mut children = vec![0usize; n];
    for &v in &order[1..] {
        children[parent[v]] += 1;
    }
    let mut alive = vec![false; n];
    for &v in &order {
        alive[v] = true;
    }
    for &v in order.iter().rev() {
        if v != root && v >= t && children[v] == 0 && alive[v] {
            alive[v] = false;
            children[parent[v]] -= 1;
        }
    }
    let mut arcs: Vec<(usize, usize)> =
        order[1..].iter().filter(|&&v| alive[v]).map(|&v| (parent[v], v)).collect();
    arcs.sort_unstable();
    arcs
}

/// Minimum over Steiner subsets `S` of the MST weight on `T ∪ S`.
pub fn stp_bruteforce<F: Field>(inst: &SteinerInstance<F>) -> Result<F> {
    let g = Guards::current();
    guards::check("stp_bruteforce n", inst.n, g.bruteforce_n)?;
    let s = inst.n - inst.t;
    let mut best: Option<F> = None;
    for mask in 0u64..(1u64 << s) {
        let nodes: Vec<usize> = (0..inst.t).chain((0..s).filter(|k| mask >> k & 1 == 1).map(|k| inst.t + k)).collect();
        let w = mst_weight(&inst.cost, &nodes);
        if best.as_ref().map_or(true, |b| w < *b) {
            best = Some(w);
        }
    }
    Ok(best.unwrap())
}

/// Prim's algorithm on the complete graph induced by `nodes`.
pub fn mst_weight<F: Field>(c: &[Vec<F>], nodes: &[usize]) -> F {
    let k = nodes.len();
    if k <= 1 {
        return F::zero();
    }
    let mut in_tree = vec![false; k];
    let mut key: Vec<Option<F>> = vec![None; k];
    key[0] = Some(F::zero());
    let mut total = F::zero();
    for _ in 0..k {
        let mut u = usize::MAX;
        for v in 0..k {
            if !in_tree[v] {
                if let Some(kv) = &key[v] {
                    if u == usize::MAX || *kv < *key[u].as_ref().unwrap() {
                        u = v;
                    }
                }
            }
        }
        in_tree[u] = true;
        total = total + key[u].clone().unwrap();
        for v in 0..k {
            if !in_tree[v] {
                let w = c[nodes[u]][nodes[v]].clone();
                if key[v].as_ref().map_or(true, |kv| w < *kv) {
                    key[v] = Some(w);
                }
            }
        }
    }
    total
}

/// `STP(inst) / opt_kind(inst)`.
pub fn instance_gap<F: Field>(kind: Kind, inst: &SteinerInstance<F>) -> Result<F> {
    let lp = solve_relaxation(kind, inst, &CutMode::Lazy)?.value;
    if lp.is_zero() {
        return Err(Error::Precondition("LP optimum is zero; gap undefined".into()));
    }
    Ok(stp_exact(inst)?.cost / lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn path_and_mst() {
        // t = 2 on a path-like metric: shortest path value
        let inst = SteinerInstance::from_fn(4, 2, 0, |i, j| Q::integer((j as i64 - i as i64).abs() * 3));
        let mut inst2 = inst.clone();
        inst2.cost[0][1] = Q::integer(10);
        inst2.cost[1][0] = Q::integer(10);
        assert_eq!(stp_exact(&inst).unwrap().cost, Q::integer(3));
        let unit = SteinerInstance::uniform(5, 5, Q::integer(1));
        let tr = stp_exact(&unit).unwrap();
        assert_eq!(tr.cost, Q::integer(4));
        assert_eq!(tr.arcs.len(), 4);
    }
}
