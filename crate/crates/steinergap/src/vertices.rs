//! Vertex enumeration of small bounded polytopes by the double description
//! method on the homogenised cone `{(λ, x) : bλ - Ax >= 0, λ >= 0}`.
//!
//! Rows are inserted one at a time; adjacency of a positive and a negative
//! ray is decided combinatorially (no third ray is tight on every row the
//! pair shares).

use crate::error::{Error, Result};
use crate::guards::{self, Guards};
use crate::scalar::Field;
use crate::system::{ConstraintSystem, Relation};

#[derive(Clone)]
struct Ray<F> {
    v: Vec<F>,
    zero: Vec<u64>,
}

fn set_bit(z: &mut [u64], k: usize) {
    z[k / 64] |= 1 << (k % 64);
}

fn contains(sup: &[u64], sub: &[u64]) -> bool {
    sup.iter().zip(sub).all(|(a, b)| a & b == *b)
}

fn popcount(z: &[u64]) -> usize {
    z.iter().map(|w| w.count_ones() as usize).sum()
}

fn dot<F: Field>(h: &[F], v: &[F]) -> F {
    let mut s = F::zero();
    for (a, b) in h.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            s = s + a.clone() * b.clone();
        }
    }
    s
}

fn normalise<F: Field>(v: &mut [F]) {
    if let Some(p) = v.iter().find(|x| !x.is_zero()) {
        let s = p.abs();
        if !s.is_one() {
            for x in v.iter_mut() {
                if !x.is_zero() {
                    *x = x.clone() / s.clone();
                }
            }
        }
    }
}

/// Inverse of a square matrix over `F`, or `None` if singular.
fn inverse<F: Field>(a: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let d = a.len();
    let mut m: Vec<Vec<F>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..d).map(|j| if i == j { F::one() } else { F::zero() }));
            row
        })
        .collect();
    for c in 0..d {
        let p = (c..d).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = F::one() / m[c][c].clone();
        for x in m[c].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..d {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let src = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(&src) {
                    x.sub_mul(&f, y);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[d..].to_vec()).collect())
}

/// All vertices of the bounded polytope `sys`, sorted lexicographically.
pub fn enumerate_vertices<F: Field>(sys: &ConstraintSystem<F>) -> Result<Vec<Vec<F>>> {
    let g = Guards::current();
    guards::check("enumerate_vertices variables", sys.vars, g.vertex_vars)?;
    guards::check("enumerate_vertices rows", sys.rows.len(), g.vertex_rows)?;
    let m = sys.vars;
    let d = m + 1;

    // Homogenised constraints h·(λ, x) >= 0 (or = 0); index 0 is λ >= 0.
    let mut hs: Vec<(Vec<F>, bool)> = Vec::with_capacity(sys.rows.len() + 1);
    let mut lam = vec![F::zero(); d];
    lam[0] = F::one();
    hs.push((lam, false));
    for r in &sys.rows {
        let mut h = vec![F::zero(); d];
        let sign = if r.rel == Relation::Le { -F::one() } else { F::one() };
        h[0] = -(sign.clone() * r.rhs.clone());
        for (j, a) in &r.coeffs {
            h[j + 1].add_assign_ref(&(sign.clone() * a.clone()));
        }
        hs.push((h, r.rel == Relation::Eq));
    }
    let words = hs.len().div_ceil(64);

    // Initial simplicial cone from d independent inequalities.
    let mut chosen: Vec<usize> = Vec::new();
    let mut mat: Vec<Vec<F>> = Vec::new();
    {
        let mut ech: Vec<(Vec<F>, usize)> = Vec::new();
        for (k, (h, eq)) in hs.iter().enumerate() {
            if *eq || chosen.len() == d {
                continue;
            }
            let mut row = h.clone();
            for (v, p) in &ech {
                if !row[*p].is_zero() {
                    let f = row[*p].clone() / v[*p].clone();
                    for (x, y) in row.iter_mut().zip(v) {
                        x.sub_mul(&f, y);
                    }
                }
            }
            if let Some(p) = row.iter().position(|x| !x.is_zero()) {
                ech.push((row, p));
                chosen.push(k);
                mat.push(h.clone());
            }
        }
    }
    if chosen.len() < d {
        return Err(Error::Precondition("polytope is not pointed (too few independent inequalities)".into()));
    }
    let inv = inverse(&mat).ok_or_else(|| Error::Internal("singular initial basis".into()))?;
    let mut rays: Vec<Ray<F>> = (0..d)
        .map(|k| {
            let mut v: Vec<F> = (0..d).map(|i| inv[i][k].clone()).collect();
            normalise(&mut v);
            let mut zero = vec![0u64; words];
            for (i, &c) in chosen.iter().enumerate() {
                if i != k {
                    set_bit(&mut zero, c);
                }
            }
            Ray { v, zero }
        })
        .collect();
    let mut done = vec![false; hs.len()];
    for &c in &chosen {
        done[c] = true;
    }

    // Equalities first, then general rows, then single-variable bounds:
    // bounds processed early build up a cube-like cone with exponentially
    // many rays, most of which the general rows later cut away.
    let class = |k: usize| -> usize {
        if hs[k].1 {
            0
        } else if hs[k].0[1..].iter().filter(|x| !x.is_zero()).count() <= 1 {
            2
        } else {
            1
        }
    };
    let mut pending: Vec<usize> = (0..hs.len()).filter(|&k| !done[k]).collect();
    pending.sort_by_key(|&k| (class(k), k));
    for k in pending {
        let vals: Vec<F> = rays.iter().map(|r| dot(&hs[k].0, &r.v)).collect();
        let eq = hs[k].1;
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut zer = Vec::new();
        for (i, v) in vals.iter().enumerate() {
            if v.is_positive() {
                pos.push(i);
            } else if v.is_negative() {
                neg.push(i);
            } else {
                zer.push(i);
            }
        }
        if neg.is_empty() && (!eq || pos.is_empty()) {
            for i in zer {
                set_bit(&mut rays[i].zero, k);
            }
            continue;
        }
        let need = d.saturating_sub(2);
        let mut fresh: Vec<Ray<F>> = Vec::new();
        let mut common = vec![0u64; words];
        for &p in &pos {
            for &n in &neg {
                for w in 0..words {
                    common[w] = rays[p].zero[w] & rays[n].zero[w];
                }
                if popcount(&common) < need {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|o| o == p || o == n || !contains(&rays[o].zero, &common));
                if !adjacent {
                    continue;
                }
                let mut v: Vec<F> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(a, b)| vals[p].clone() * a.clone() - vals[n].clone() * b.clone())
                    .collect();
                normalise(&mut v);
                let mut zero = common.clone();
                set_bit(&mut zero, k);
                fresh.push(Ray { v, zero });
            }
        }
        let keep: Vec<usize> = if eq { zer.clone() } else { pos.iter().chain(&zer).copied().collect() };
        let mut next: Vec<Ray<F>> = Vec::with_capacity(keep.len() + fresh.len());
        for i in keep {
            let mut r = rays[i].clone();
            if !vals[i].is_positive() {
                set_bit(&mut r.zero, k);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        if !r.v[0].is_positive() {
            return Err(Error::Precondition("polytope is unbounded".into()));
        }
        let l = r.v[0].clone();
        out.push(r.v[1..].iter().map(|x| x.clone() / l.clone()).collect::<Vec<F>>());
    }
    out.sort();
    out.dedup();
    Ok(out)
}
