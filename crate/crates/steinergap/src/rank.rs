use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Field;
use crate::system::ConstraintSystem;

/// Exact rank by fraction-free (Bareiss) elimination on integer-scaled rows.
pub fn rational_rank<F: Field>(rows: &[Vec<F>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let big: Vec<_> = r.iter().map(|v| v.to_big()).collect();
            let l = big.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            big.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            for j in c + 1..cols {
                let v = (&m[rank][c] * &m[i][j] - &m[i][c] * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Incremental row echelon basis over `F`.
struct Echelon<F> {
    vecs: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    fn new() -> Self {
        Echelon { vecs: Vec::new(), pivots: Vec::new() }
    }

    /// Adds `row` if independent of the current span; returns whether it was.
    fn insert(&mut self, mut row: Vec<F>) -> bool {
        for (v, &p) in self.vecs.iter().zip(&self.pivots) {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(v) {
                x.sub_mul(&f, y);
            }
        }
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { return false };
        let inv = F::one() / row[p].clone();
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        self.vecs.push(row);
        self.pivots.push(p);
        true
    }

    /// A nonzero vector orthogonal to every inserted row, if the span is not full.
    fn null_vector(&self, cols: usize) -> Option<Vec<F>> {
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let free = (0..cols).find(|&j| !is_pivot[j])?;
        // Back-substitute to reduced echelon form.
        let mut vecs = self.vecs.clone();
        for k in (0..vecs.len()).rev() {
            let p = self.pivots[k];
            for i in 0..k {
                if vecs[i][p].is_zero() {
                    continue;
                }
                let f = vecs[i][p].clone();
                let src = vecs[k].clone();
                for (x, y) in vecs[i].iter_mut().zip(&src) {
                    x.sub_mul(&f, y);
                }
            }
        }
        let mut d = vec![F::zero(); cols];
        d[free] = F::one();
        for (v, &p) in vecs.iter().zip(&self.pivots) {
            d[p] = -v[free].clone();
        }
        Some(d)
    }
}

/// Outcome of a vertex test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexCertificate<F> {
    /// `m` linearly independent tight rows.
    Vertex(Vec<usize>),
    /// A row the point violates.
    Infeasible(usize),
    /// A nonzero direction annihilated by every tight row.
    Direction(Vec<F>),
}

impl<F> VertexCertificate<F> {
    pub fn is_vertex(&self) -> bool {
        matches!(self, VertexCertificate::Vertex(_))
    }
}

/// Tests whether `x` is a vertex of the polytope given by the full explicit
/// row set `sys`.
///
/// Tight single-variable rows (bounds) fix their coordinate outright, so the
/// rank test only runs on the remaining tight rows restricted to the free
/// coordinates.
pub fn certify_vertex<F: Field>(x: &[F], sys: &ConstraintSystem<F>) -> VertexCertificate<F> {
    if let Some(r) = sys.first_violation(x) {
        return VertexCertificate::Infeasible(r);
    }
    let m = sys.vars;
    let tight = sys.tight_rows(x);
    let mut fixed_by: Vec<Option<usize>> = vec![None; m];
    let mut others = Vec::new();
    for &r in &tight {
        let row = &sys.rows[r];
        let nz: Vec<&(usize, F)> = row.coeffs.iter().filter(|(_, a)| !a.is_zero()).collect();
        if nz.len() == 1 {
            let j = nz[0].0;
            if fixed_by[j].is_none() {
                fixed_by[j] = Some(r);
            }
        } else if !nz.is_empty() {
            others.push(r);
        }
    }
    let free: Vec<usize> = (0..m).filter(|&j| fixed_by[j].is_none()).collect();
    let mut col = vec![usize::MAX; m];
    for (k, &j) in free.iter().enumerate() {
        col[j] = k;
    }
    let mut basis = fixed_by.iter().flatten().copied().collect::<Vec<_>>();
    let mut ech = Echelon::new();
    for &r in &others {
        if ech.vecs.len() == free.len() {
            break;
        }
        let mut v = vec![F::zero(); free.len()];
        for (j, a) in &sys.rows[r].coeffs {
            if col[*j] != usize::MAX {
                v[col[*j]].add_assign_ref(a);
            }
        }
        if ech.insert(v) {
            basis.push(r);
        }
    }
    if ech.vecs.len() == free.len() {
        basis.sort_unstable();
        VertexCertificate::Vertex(basis)
    } else {
        let dfree = ech.null_vector(free.len()).expect("rank deficient");
        let mut d = vec![F::zero(); m];
        for (k, &j) in free.iter().enumerate() {
            d[j] = dfree[k].clone();
        }
        VertexCertificate::Direction(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn identity_and_duplicates() {
        let id: Vec<Vec<Q>> = (0..4).map(|i| (0..4).map(|j| Q::integer((i == j) as i64)).collect()).collect();
        assert_eq!(rational_rank(&id), 4);
        let mut dup = id.clone();
        dup.push(id[2].clone());
        assert_eq!(rational_rank(&dup), 4);
        assert_eq!(rational_rank::<Q>(&[]), 0);
    }

    #[test]
    fn null_vector_is_orthogonal() {
        let mut e = Echelon::<Q>::new();
        e.insert(vec![Q::integer(1), Q::integer(2), Q::integer(3)]);
        e.insert(vec![Q::integer(0), Q::integer(1), Q::new(1, 2)]);
        let d = e.null_vector(3).unwrap();
        let dot = |r: [Q; 3]| r.iter().zip(&d).fold(Q::integer(0), |s, (a, b)| s + a.clone() * b.clone());
        assert_eq!(dot([Q::integer(1), Q::integer(2), Q::integer(3)]), Q::integer(0));
        assert_eq!(dot([Q::integer(0), Q::integer(1), Q::new(1, 2)]), Q::integer(0));
    }
}
