mod common;

use common::{floyd, q, random_metric, rng, stp_subset_mst};
use rand::Rng;
use steinergap::formulation::{CutMode, Kind};
use steinergap::instance::{metric_closure, SteinerInstance, WeightedGraph};
use steinergap::relax::solve_relaxation;
use steinergap::steiner::{stp_bruteforce, stp_exact};
use steinergap::{Zero, Q};

fn tree_cost(c: &[Vec<Q>], arcs: &[(usize, usize)]) -> Q {
    arcs.iter().fold(Q::zero(), |s, &(i, j)| s + c[i][j].clone())
}

/// The arcs form an arborescence rooted at `root` spanning every terminal.
fn spans_terminals(n: usize, t: usize, root: usize, arcs: &[(usize, usize)]) -> bool {
    let mut indeg = vec![0; n];
    for &(_, j) in arcs {
        indeg[j] += 1;
    }
    if indeg[root] != 0 || indeg.iter().any(|&d| d > 1) {
        return false;
    }
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &(i, j) in arcs {
            if i == u && !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    (0..t).all(|v| seen[v]) && arcs.iter().all(|&(i, _)| seen[i])
}

#[test]
fn dreyfus_wagner_matches_subset_mst() {
    let mut r = rng(31);
    for case in 0..80 {
        let n = r.gen_range(2..=8);
        let t = r.gen_range(2..=n);
        let root = r.gen_range(0..t);
        let c = random_metric(&mut r, n, 12);
        let inst = SteinerInstance::new(n, t, root, c.clone()).unwrap();
        let tree = stp_exact(&inst).unwrap();
        let expect = stp_subset_mst(&c, t);
        assert_eq!(tree.cost, expect, "case {case}: ({n},{t})");
        assert_eq!(tree_cost(&c, &tree.arcs), expect, "case {case}: reported arcs do not add up");
        assert!(spans_terminals(n, t, root, &tree.arcs), "case {case}: {:?}", tree.arcs);
        assert_eq!(stp_bruteforce(&inst).unwrap(), expect, "case {case}");
    }
}

#[test]
fn dreyfus_wagner_on_one_two_costs() {
    // Many ties: every cost is 1 or 2.
    let mut r = rng(32);
    for case in 0..60 {
        let n = r.gen_range(3..=8);
        let t = r.gen_range(2..=n);
        let mut c = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let w = q(r.gen_range(1..=2));
                c[i][j] = w.clone();
                c[j][i] = w;
            }
        }
        let inst = SteinerInstance::new(n, t, 0, c.clone()).unwrap();
        assert_eq!(stp_exact(&inst).unwrap().cost, stp_subset_mst(&c, t), "case {case}");
    }
}

fn random_sparse(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> Vec<(usize, usize, Q)> {
    // random spanning tree plus extra edges
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((r.gen_range(0..v), v, q(r.gen_range(1..=9))));
    }
    for _ in 0..n {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        if a != b {
            edges.push((a, b, q(r.gen_range(1..=9))));
        }
    }
    edges
}

/// Dense costs of a sparse graph: absent edges cost more than any path.
fn dense(n: usize, edges: &[(usize, usize, Q)]) -> Vec<Vec<Q>> {
    let mut c = vec![vec![q(1000); n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = Q::zero();
    }
    for (a, b, w) in edges {
        if *w < c[*a][*b] {
            c[*a][*b] = w.clone();
            c[*b][*a] = w.clone();
        }
    }
    c
}

/// STP and opt_BCR of a sparse graph equal those of its metric closure.
#[test]
fn closure_preserves_stp_and_bcr() {
    let mut r = rng(33);
    let mut changed = 0;
    for case in 0..60 {
        let n = r.gen_range(3..=7);
        let t = r.gen_range(2..=n);
        let edges = random_sparse(&mut r, n);
        let raw = SteinerInstance::new(n, t, 0, dense(n, &edges)).unwrap();
        let closed = metric_closure(&WeightedGraph { n, edges }, t, 0).unwrap();
        if closed.cost != raw.cost {
            changed += 1;
        }
        assert_eq!(stp_exact(&raw).unwrap().cost, stp_exact(&closed).unwrap().cost, "case {case}");
        let va = solve_relaxation(Kind::Bcr, &raw, &CutMode::Lazy).unwrap().value;
        let vb = solve_relaxation(Kind::Bcr, &closed, &CutMode::Lazy).unwrap().value;
        assert_eq!(va, vb, "case {case}");
    }
    assert!(changed >= 50);
}

#[test]
fn metric_closure_of_sparse_graph() {
    let mut r = rng(34);
    for case in 0..50 {
        let n = r.gen_range(3..=7);
        let edges = random_sparse(&mut r, n);
        let want = floyd(&dense(n, &edges));
        let inst = metric_closure(&WeightedGraph { n, edges }, 2, 0).unwrap();
        assert_eq!(inst.cost, want, "case {case}");
        assert!(steinergap::instance::validate_metric(&inst).unwrap().is_empty());
    }
}

#[test]
fn disconnected_graph_has_no_closure() {
    let g = WeightedGraph { n: 4, edges: vec![(0, 1, q(1)), (2, 3, q(1))] };
    assert!(metric_closure(&g, 2, 0).is_err());
}
