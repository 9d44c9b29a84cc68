//! Canonical labelling of small vertex-coloured, arc-labelled digraphs.
//!
//! Individualisation–refinement: equitable colour refinement, then a
//! depth-first search over individualisations of the first non-singleton
//! cell. The canonical form is the least leaf certificate; leaves with equal
//! certificates yield automorphisms, which prune siblings that lie in the same
//! orbit of the (known) pointwise stabiliser of the current prefix.

/// Result of a canonical labelling.
#[derive(Debug, Clone)]
pub struct Canon {
    /// `lab[p]` is the vertex placed at canonical position `p`.
    pub lab: Vec<usize>,
    /// Generators of the automorphism group, as vertex permutations.
    pub gens: Vec<Vec<usize>>,
    /// Colour sequence followed by the relabelled matrix.
    pub cert: Vec<u32>,
}

impl Canon {
    /// `pos[v]`: canonical position of vertex `v`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.lab.len()];
        for (p, &v) in self.lab.iter().enumerate() {
            pos[v] = p;
        }
        pos
    }
}

struct Search<'a> {
    n: usize,
    colors: &'a [u32],
    adj: &'a [u32],
    first: Option<(Vec<usize>, Vec<u32>)>,
    best: Option<(Vec<usize>, Vec<u32>)>,
    gens: Vec<Vec<usize>>,
}

fn refine(n: usize, adj: &[u32], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut cell_of = vec![0usize; n];
    loop {
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = c;
            }
        }
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(n);
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut sigs: Vec<(Vec<(usize, u32, u32)>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut s: Vec<(usize, u32, u32)> = (0..n)
                        .filter_map(|u| {
                            let (o, i) = (adj[v * n + u], adj[u * n + v]);
                            (o != 0 || i != 0).then_some((cell_of[u], o, i))
                        })
                        .collect();
                    s.sort_unstable();
                    (s, v)
                })
                .collect();
            sigs.sort();
            let mut start = 0;
            for k in 1..=sigs.len() {
                if k == sigs.len() || sigs[k].0 != sigs[start].0 {
                    next.push(sigs[start..k].iter().map(|s| s.1).collect());
                    start = k;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn orbit_roots(n: usize, gens: &[Vec<usize>]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for g in gens {
        for v in 0..n {
            let (a, b) = (find(&mut parent, v), find(&mut parent, g[v]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

impl Search<'_> {
    fn cert(&self, lab: &[usize]) -> Vec<u32> {
        let n = self.n;
        let mut c = Vec::with_capacity(n + n * n);
        c.extend(lab.iter().map(|&v| self.colors[v]));
        for &u in lab {
            for &v in lab {
                c.push(self.adj[u * n + v]);
            }
        }
        c
    }

    fn leaf(&mut self, lab: Vec<usize>) {
        let cert = self.cert(&lab);
        let Some((flab, fcert)) = &self.first else {
            self.first = Some((lab.clone(), cert.clone()));
            self.best = Some((lab, cert));
            return;
        };
        if *fcert == cert {
            let mut g = vec![0; self.n];
            for (a, b) in flab.iter().zip(&lab) {
                g[*a] = *b;
            }
            if g.iter().enumerate().any(|(i, &x)| i != x) {
                self.gens.push(g);
            }
            return;
        }
        let (blab, bcert) = self.best.as_ref().unwrap();
        match cert.cmp(bcert) {
            std::cmp::Ordering::Equal => {
                let mut g = vec![0; self.n];
                for (a, b) in blab.iter().zip(&lab) {
                    g[*a] = *b;
                }
                if g.iter().enumerate().any(|(i, &x)| i != x) {
                    self.gens.push(g);
                }
            }
            std::cmp::Ordering::Less => self.best = Some((lab, cert)),
            std::cmp::Ordering::Greater => {}
        }
    }

    fn go(&mut self, cells: Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
        let cells = refine(self.n, self.adj, cells);
        let Some(idx) = cells.iter().position(|c| c.len() > 1) else {
            self.leaf(cells.into_iter().map(|c| c[0]).collect());
            return;
        };
        let target = cells[idx].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &target {
            if !explored.is_empty() {
                let stab: Vec<Vec<usize>> =
                    self.gens.iter().filter(|g| prefix.iter().all(|&p| g[p] == p)).cloned().collect();
                if !stab.is_empty() {
                    let roots = orbit_roots(self.n, &stab);
                    if explored.iter().any(|&u| roots[u] == roots[v]) {
                        continue;
                    }
                }
            }
            explored.push(v);
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..idx]);
            next.push(vec![v]);
            next.push(target.iter().copied().filter(|&u| u != v).collect());
            next.extend_from_slice(&cells[idx + 1..]);
            prefix.push(v);
            self.go(next, prefix);
            prefix.pop();
        }
    }
}

/// Canonical labelling of the digraph on `n` vertices with vertex colours
/// `colors` and arc labels `adj[u * n + v]` (0 = no arc).
pub fn canonical_form(n: usize, colors: &[u32], adj: &[u32]) -> Canon {
    assert_eq!(colors.len(), n);
    assert_eq!(adj.len(), n * n);
    if n == 0 {
        return Canon { lab: vec![], gens: vec![], cert: vec![] };
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (colors[v], v));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for v in order {
        match cells.last_mut() {
            Some(c) if colors[c[0]] == colors[v] => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut s = Search { n, colors, adj, first: None, best: None, gens: Vec::new() };
    s.go(cells, &mut Vec::new());
    let (lab, cert) = s.best.unwrap();
    Canon { lab, gens: s.gens, cert }
}

/// All elements of the group generated by `gens` (identity included).
/// Returns `None` once more than `limit` elements have been produced.
pub fn group_elements(n: usize, gens: &[Vec<usize>], limit: usize) -> Option<Vec<Vec<usize>>> {
    let id: Vec<usize> = (0..n).collect();
    let mut seen = std::collections::HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![id];
    let mut k = 0;
    while k < out.len() {
        let g = out[k].clone();
        for h in gens {
            let gh: Vec<usize> = (0..n).map(|v| h[g[v]]).collect();
            if seen.insert(gh.clone()) {
                out.push(gh);
                if out.len() > limit {
                    return None;
                }
            }
        }
        k += 1;
    }
    Some(out)
}

/// Orbit representatives (least element per orbit) for every vertex.
pub fn vertex_orbits(n: usize, gens: &[Vec<usize>]) -> Vec<usize> {
    orbit_roots(n, gens)
}
