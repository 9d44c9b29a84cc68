//! Independent reference implementations used as test oracles. None of them
//! shares code with the library beyond the scalar type.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steinergap::{Field, One, Zero, Q};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Q {
    Q::from_i64(n)
}

/// Random metric on `n` points: shortest paths of random weights in `1..=hi`.
pub fn random_metric(r: &mut ChaCha8Rng, n: usize, hi: i64) -> Vec<Vec<Q>> {
    let mut c = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = q(r.gen_range(1..=hi));
            c[i][j] = w.clone();
            c[j][i] = w;
        }
    }
    floyd(&c)
}

pub fn floyd(c: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = c.len();
    let mut d = c.to_vec();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k].clone() + d[k][j].clone();
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Kruskal on the complete graph over `nodes` (union-find).
pub fn kruskal(c: &[Vec<Q>], nodes: &[usize]) -> Q {
    let mut edges: Vec<(Q, usize, usize)> = Vec::new();
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            edges.push((c[nodes[a]][nodes[b]].clone(), a, b));
        }
    }
    edges.sort();
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut total = Q::zero();
    for (w, a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            total = total + w;
        }
    }
    total
}

/// Steiner tree value of a metric instance: min over Steiner subsets of the
/// MST on terminals plus the subset (terminals are `0..t`).
pub fn stp_subset_mst(c: &[Vec<Q>], t: usize) -> Q {
    let n = c.len();
    let mut best: Option<Q> = None;
    for mask in 0u32..1 << (n - t) {
        let nodes: Vec<usize> = (0..t).chain((t..n).filter(|v| mask >> (v - t) & 1 == 1)).collect();
        let w = kruskal(c, &nodes);
        if best.as_ref().map_or(true, |b| w < *b) {
            best = Some(w);
        }
    }
    best.unwrap()
}

/// Arc index used by the library (the layout is part of its public contract).
pub fn arc(n: usize, i: usize, j: usize) -> usize {
    i * (n - 1) + if j < i { j } else { j - 1 }
}

/// Membership of a 0/1-or-fractional arc vector in the CM polytope, checked
/// from the definitions: bounds, root inflow 0, inflow ≤ 1, Steiner
/// outflow ≥ 2·inflow, and every root cut through max-flow replaced by an
/// explicit scan of all sets `W ⊆ V∖{root}` meeting `T`.
pub fn in_cm(x: &[Q], n: usize, t: usize) -> bool {
    let get = |i: usize, j: usize| x[arc(n, i, j)].clone();
    if x.iter().any(|v| *v < Q::zero() || *v > Q::one()) {
        return false;
    }
    let inflow = |v: usize| (0..n).filter(|&u| u != v).fold(Q::zero(), |s, u| s + get(u, v));
    let outflow = |v: usize| (0..n).filter(|&u| u != v).fold(Q::zero(), |s, u| s + get(v, u));
    if !inflow(0).is_zero() {
        return false;
    }
    if (1..n).any(|v| inflow(v) > Q::one()) {
        return false;
    }
    if (t..n).any(|v| q(2) * inflow(v) > outflow(v)) {
        return false;
    }
    cuts_ok(x, n, t)
}

/// `x(δ⁻(W)) ≥ 1` for all `W ⊆ V∖{0}` with `W ∩ T ≠ ∅`.
pub fn cuts_ok(x: &[Q], n: usize, t: usize) -> bool {
    for w in 1u64..1 << n {
        if w & 1 == 1 || w & ((1 << t) - 2) == 0 {
            continue;
        }
        let mut s = Q::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j && w >> i & 1 == 0 && w >> j & 1 == 1 {
                    s = s + x[arc(n, i, j)].clone();
                }
            }
        }
        if s < Q::one() {
            return false;
        }
    }
    true
}

/// BCR membership: bounds, pairing `x_ij + x_ji ≤ 1`, root cuts.
pub fn in_bcr(x: &[Q], n: usize, t: usize) -> bool {
    if x.iter().any(|v| *v < Q::zero() || *v > Q::one()) {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            if x[arc(n, i, j)].clone() + x[arc(n, j, i)].clone() > Q::one() {
                return false;
            }
        }
    }
    cuts_ok(x, n, t)
}

/// Canonical string of a vertex-coloured arc-labelled digraph by trying all
/// permutations (small `n` only).
pub fn brute_canon(n: usize, colors: &[u32], adj: &[u32]) -> Vec<u32> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u32>> = None;
    loop {
        let mut s: Vec<u32> = perm.iter().map(|&v| colors[v]).collect();
        for &a in &perm {
            for &b in &perm {
                s.push(adj[a * n + b]);
            }
        }
        if best.as_ref().map_or(true, |b| s < *b) {
            best = Some(s);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap()
}

pub fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Minimum of `c·x` over `{x ≥ 0 : rows}` by trying every basis: each choice
/// of `d` linearly independent tight constraints (rows or `x_k = 0`) gives a
/// candidate point. `None` when no candidate is feasible. Bounded problems
/// only.
pub fn lp_by_bases(c: &[Q], rows: &[(Vec<Q>, i8, Q)]) -> Option<Q> {
    let d = c.len();
    // Every constraint as (coeffs, rhs, is_equality).
    let mut cons: Vec<(Vec<Q>, Q)> = rows.iter().map(|(a, _, b)| (a.clone(), b.clone())).collect();
    for k in 0..d {
        let mut e = vec![Q::zero(); d];
        e[k] = Q::one();
        cons.push((e, Q::zero()));
    }
    let feasible = |x: &[Q]| {
        x.iter().all(|v| *v >= Q::zero())
            && rows.iter().all(|(a, rel, b)| {
                let s = a.iter().zip(x).fold(Q::zero(), |s, (p, q)| s + p.clone() * q.clone());
                match rel {
                    -1 => s <= *b,
                    0 => s == *b,
                    _ => s >= *b,
                }
            })
    };
    let m = cons.len();
    let mut best: Option<Q> = None;
    let mut pick: Vec<usize> = (0..d).collect();
    loop {
        if let Some(x) = solve_square(&pick.iter().map(|&k| cons[k].clone()).collect::<Vec<_>>()) {
            if feasible(&x) {
                let v = c.iter().zip(&x).fold(Q::zero(), |s, (p, q)| s + p.clone() * q.clone());
                if best.as_ref().map_or(true, |b| v < *b) {
                    best = Some(v);
                }
            }
        }
        // next combination
        let mut i = d;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < m - d + i {
                pick[i] += 1;
                for k in i + 1..d {
                    pick[k] = pick[k - 1] + 1;
                }
                break;
            }
        }
    }
}

fn solve_square(eqs: &[(Vec<Q>, Q)]) -> Option<Vec<Q>> {
    let d = eqs.len();
    let mut m: Vec<Vec<Q>> = eqs.iter().map(|(a, b)| a.iter().cloned().chain([b.clone()]).collect()).collect();
    for col in 0..d {
        let p = (col..d).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let inv = Q::one() / m[col][col].clone();
        for k in col..=d {
            m[col][k] = m[col][k].clone() * inv.clone();
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..=d {
                    m[r][k] = m[r][k].clone() - f.clone() * m[col][k].clone();
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[d].clone()).collect())
}
