mod common;

use std::collections::HashSet;

use common::{brute_canon, rng};
use rand::seq::SliceRandom;
use rand::Rng;
use steinergap::canon::canonical_form;
use steinergap::generate::{gen_graphs, gen_orientations, GenSpec, Graph, OrientSpec};

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn adj_of(n: usize, arcs: &[(usize, usize)], both: bool) -> Vec<u32> {
    let mut m = vec![0u32; n * n];
    for &(a, b) in arcs {
        m[a * n + b] = 1;
        if both {
            m[b * n + a] = 1;
        }
    }
    m
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == u && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Isomorphism classes of graphs on `n` nodes accepted by `keep`, by brute
/// force over every edge subset and every permutation.
fn brute_classes(n: usize, keep: impl Fn(&[(usize, usize)]) -> bool) -> usize {
    let all = pairs(n);
    let mut classes = HashSet::new();
    for mask in 0u32..1 << all.len() {
        let edges: Vec<(usize, usize)> = all.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
        if keep(&edges) {
            classes.insert(brute_canon(n, &vec![0; n], &adj_of(n, &edges, true)));
        }
    }
    classes.len()
}

fn count(spec: &GenSpec) -> usize {
    let mut k = 0;
    let mut seen = HashSet::new();
    gen_graphs(spec, |g| {
        assert!(spec.accepts(g));
        assert!(seen.insert(g.canon().cert), "duplicate class emitted");
        k += 1;
        true
    });
    k
}

fn spec(n: usize, lo: usize, hi: usize, min_degree: usize, connected: bool) -> GenSpec {
    GenSpec { n, min_edges: lo, max_edges: hi, min_degree, connected, max_min_degree_nodes: None }
}

#[test]
fn graph_counts_match_brute_force() {
    for n in 1..=5 {
        let m = n * (n - 1) / 2;
        assert_eq!(count(&spec(n, 0, m, 0, false)), brute_classes(n, |_| true), "all graphs on {n}");
        assert_eq!(count(&spec(n, 0, m, 0, true)), brute_classes(n, |e| connected(n, e)), "connected on {n}");
    }
}

#[test]
fn known_counts_on_six_nodes() {
    assert_eq!(count(&spec(6, 0, 15, 0, false)), 156);
    assert_eq!(count(&spec(6, 0, 15, 0, true)), 112);
    assert_eq!(count(&spec(7, 0, 21, 0, true)), 853);
}

#[test]
fn filtered_generation_matches_brute_force() {
    let n = 6;
    let deg = |e: &[(usize, usize)], v: usize| e.iter().filter(|&&(a, b)| a == v || b == v).count();
    for (lo, hi, d, k) in [(6, 9, 2, Some(3)), (7, 8, 2, None), (9, 12, 3, Some(2)), (5, 7, 1, Some(4))] {
        let s = GenSpec { n, min_edges: lo, max_edges: hi, min_degree: d, connected: true, max_min_degree_nodes: k };
        let expect = brute_classes(n, |e| {
            (lo..=hi).contains(&e.len())
                && (0..n).all(|v| deg(e, v) >= d)
                && k.map_or(true, |k| (0..n).filter(|&v| deg(e, v) == d).count() <= k)
                && connected(n, e)
        });
        assert_eq!(count(&s), expect, "{s:?}");
    }
}

/// Orientation classes of `g` with bounded indegree, by brute force.
fn brute_orientations(g: &Graph, max_in: usize, counts: Option<&[usize]>) -> usize {
    let n = g.n;
    let edges = g.edges();
    let mut classes = HashSet::new();
    for mask in 0u32..1 << edges.len() {
        let arcs: Vec<(usize, usize)> = edges.iter().enumerate().map(|(k, &(a, b))| if mask >> k & 1 == 1 { (b, a) } else { (a, b) }).collect();
        let mut indeg = vec![0usize; n];
        for &(_, b) in &arcs {
            indeg[b] += 1;
        }
        if indeg.iter().any(|&d| d > max_in) {
            continue;
        }
        if let Some(c) = counts {
            let mut h = vec![0usize; c.len()];
            if indeg.iter().any(|&d| d >= c.len()) {
                continue;
            }
            for &d in &indeg {
                h[d] += 1;
            }
            if h != c {
                continue;
            }
        }
        classes.insert(brute_canon(n, &vec![0; n], &adj_of(n, &arcs, false)));
    }
    classes.len()
}

#[test]
fn orientations_match_brute_force() {
    let mut r = rng(41);
    let mut cases = 0;
    while cases < 60 {
        let n = r.gen_range(3..=6);
        let mut all = pairs(n);
        all.shuffle(&mut r);
        let m = r.gen_range(n - 1..=all.len().min(11));
        let g = Graph::from_edges(n, &all[..m]);
        let max_in = r.gen_range(1..=3);
        let got = gen_orientations(&g, &OrientSpec { max_indegree: max_in, indegree_counts: None });
        assert_eq!(got.len(), brute_orientations(&g, max_in, None), "{:?} max_in {max_in}", g.edges());
        cases += 1;
    }
}

#[test]
fn orientations_with_degree_profile() {
    // the PHI profile on 7 nodes with 4 terminals: one source, three Steiner
    // nodes of indegree 1, three terminals of indegree 2
    let wheel = Graph::from_edges(7, &[(0, 4), (0, 5), (0, 6), (4, 1), (4, 2), (5, 2), (5, 3), (6, 3), (6, 1)]);
    let profile = [1, 3, 3];
    let got = gen_orientations(&wheel, &OrientSpec { max_indegree: 2, indegree_counts: Some(profile.to_vec()) });
    assert_eq!(got.len(), brute_orientations(&wheel, 2, Some(&profile)));
    assert!(!got.is_empty());
    let mut r = rng(42);
    for _ in 0..30 {
        let n = 6;
        let mut all = pairs(n);
        all.shuffle(&mut r);
        let g = Graph::from_edges(n, &all[..r.gen_range(6..=9)]);
        let profile = [1, 2, 3];
        let got = gen_orientations(&g, &OrientSpec { max_indegree: 2, indegree_counts: Some(profile.to_vec()) });
        assert_eq!(got.len(), brute_orientations(&g, 2, Some(&profile)), "{:?}", g.edges());
    }
}

fn random_colored_digraph(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> (Vec<u32>, Vec<u32>) {
    let colors: Vec<u32> = (0..n).map(|_| r.gen_range(0..3)).collect();
    let mut adj = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            if a != b && r.gen_bool(0.35) {
                adj[a * n + b] = r.gen_range(1..=2);
            }
        }
    }
    (colors, adj)
}

fn permute(n: usize, p: &[usize], colors: &[u32], adj: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut c2 = vec![0; n];
    let mut a2 = vec![0; n * n];
    for v in 0..n {
        c2[p[v]] = colors[v];
        for u in 0..n {
            a2[p[v] * n + p[u]] = adj[v * n + u];
        }
    }
    (c2, a2)
}

#[test]
fn canonical_form_is_invariant_under_relabelling() {
    let mut r = rng(43);
    for case in 0..80 {
        let n = r.gen_range(1..=9);
        let (colors, adj) = random_colored_digraph(&mut r, n);
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut r);
        let (c2, a2) = permute(n, &p, &colors, &adj);
        let x = canonical_form(n, &colors, &adj);
        let y = canonical_form(n, &c2, &a2);
        assert_eq!(x.cert, y.cert, "case {case}");
        for g in &x.gens {
            assert_eq!(permute(n, g, &colors, &adj), (colors.clone(), adj.clone()), "case {case}: generator is not an automorphism");
        }
    }
}

/// Two digraphs get the same certificate exactly when brute force says they
/// are isomorphic.
#[test]
fn canonical_form_separates_classes() {
    let mut r = rng(44);
    let mut equal = 0;
    for case in 0..200 {
        let n = r.gen_range(2..=6);
        let colors = vec![0; n];
        let mut adj = vec![0u32; n * n];
        let mut adj2 = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    adj[a * n + b] = r.gen_bool(0.3) as u32;
                    adj2[a * n + b] = r.gen_bool(0.3) as u32;
                }
            }
        }
        // half of the time compare with a relabelled copy
        if case % 2 == 0 {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(&mut r);
            adj2 = permute(n, &p, &colors, &adj).1;
        }
        let same = brute_canon(n, &colors, &adj) == brute_canon(n, &colors, &adj2);
        equal += same as usize;
        assert_eq!(canonical_form(n, &colors, &adj).cert == canonical_form(n, &colors, &adj2).cert, same, "case {case}");
    }
    assert!(equal >= 50);
}

#[test]
fn highly_symmetric_graphs() {
    // complete graphs, cycles and the Petersen graph have large automorphism groups
    for n in 2..=8 {
        let k = Graph::from_edges(n, &pairs(n));
        let c = k.canon();
        let group = steinergap::canon::group_elements(n, &c.gens, 50_000).unwrap();
        let mut fact = 1;
        for i in 2..=n {
            fact *= i;
        }
        assert_eq!(group.len(), fact, "K{n}");
    }
    let petersen = Graph::from_edges(
        10,
        &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9), (5, 7), (7, 9), (9, 6), (6, 8), (8, 5)],
    );
    let c = petersen.canon();
    assert_eq!(steinergap::canon::group_elements(10, &c.gens, 1000).unwrap().len(), 120);
    let mut p: Vec<usize> = (0..10).collect();
    let mut r = rng(45);
    p.shuffle(&mut r);
    let relabelled = Graph::from_edges(10, &petersen.edges().iter().map(|&(a, b)| (p[a], p[b])).collect::<Vec<_>>());
    assert_eq!(relabelled.canon().cert, c.cert);
}
