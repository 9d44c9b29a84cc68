//! Named points: the odd-wheel family, its one-lifts, the larger half-integral
//! vertices with gaps above 10/9, Skutella's quarter-integral point and the
//! path construction attaining the arc bound `2t - 3`.

use crate::error::{Error, Result};
use crate::instance::ArcVector;
use crate::scalar::Field;

#[derive(Debug, Clone)]
pub struct Builtin<F> {
    pub name: String,
    pub n: usize,
    pub t: usize,
    pub root: usize,
    pub point: ArcVector<F>,
}

type Raw = (&'static str, usize, usize, &'static [(usize, usize, &'static str)]);

// 1-based arcs; root is node 1, terminals 1..t.
const TABLE: &[Raw] = &[
    ("skutella", 15, 8, &[(1, 9, "1/4"), (1, 10, "1/4"), (1, 11, "1/4"), (1, 12, "1/4"), (1, 13, "1/4"), (1, 14, "1/4"), (1, 15, "1/4"), (9, 2, "1/4"), (9, 3, "1/4"), (9, 4, "1/4"), (9, 5, "1/4"), (10, 2, "1/4"), (10, 3, "1/4"), (10, 6, "1/4"), (10, 7, "1/4"), (11, 2, "1/4"), (11, 4, "1/4"), (11, 6, "1/4"), (11, 8, "1/4"), (12, 2, "1/4"), (12, 5, "1/4"), (12, 7, "1/4"), (12, 8, "1/4"), (13, 4, "1/4"), (13, 5, "1/4"), (13, 6, "1/4"), (13, 7, "1/4"), (14, 3, "1/4"), (14, 4, "1/4"), (14, 7, "1/4"), (14, 8, "1/4"), (15, 3, "1/4"), (15, 5, "1/4"), (15, 6, "1/4"), (15, 8, "1/4")]),
    ("oddwheel-7-4-a", 7, 4, &[(1, 5, "1/2"), (1, 6, "1/2"), (1, 7, "1/2"), (5, 3, "1/2"), (5, 2, "1/2"), (6, 2, "1/2"), (6, 4, "1/2"), (7, 4, "1/2"), (7, 3, "1/2")]),
    ("oddwheel-7-4-b", 7, 4, &[(5, 3, "1/2"), (6, 3, "1/2"), (3, 7, "1/2"), (5, 2, "1/2"), (1, 5, "1/2"), (1, 6, "1/2"), (6, 4, "1/2"), (7, 4, "1/2"), (7, 2, "1/2")]),
    ("oddwheel-7-4-c", 7, 4, &[(5, 3, "1/2"), (3, 6, "1/2"), (7, 3, "1/2"), (1, 5, "1/2"), (5, 2, "1/2"), (6, 2, "1/2"), (6, 4, "1/2"), (7, 4, "1/2"), (1, 7, "1/2")]),
    ("oddwheel-7-4-d", 7, 4, &[(4, 5, "1/2"), (6, 4, "1/2"), (7, 4, "1/2"), (5, 3, "1/2"), (5, 2, "1/2"), (6, 2, "1/2"), (1, 6, "1/2"), (1, 7, "1/2"), (7, 3, "1/2")]),
    ("fig3-a", 8, 5, &[(1, 6, "1/2"), (1, 7, "1/2"), (1, 8, "1/2"), (6, 3, "1/2"), (6, 2, "1/2"), (7, 2, "1/2"), (7, 5, "1/2"), (8, 5, "1/2"), (8, 3, "1/2"), (3, 4, "1")]),
    ("fig3-b", 8, 5, &[(6, 4, "1/2"), (7, 4, "1/2"), (4, 8, "1/2"), (6, 2, "1/2"), (1, 6, "1/2"), (1, 7, "1/2"), (7, 5, "1/2"), (8, 5, "1/2"), (8, 2, "1/2"), (4, 3, "1")]),
    ("fig3-c", 8, 5, &[(6, 3, "1/2"), (7, 3, "1/2"), (4, 8, "1/2"), (6, 2, "1/2"), (1, 6, "1/2"), (1, 7, "1/2"), (7, 5, "1/2"), (8, 5, "1/2"), (8, 2, "1/2"), (3, 4, "1")]),
    ("fig3-d", 8, 5, &[(4, 6, "1/2"), (4, 7, "1/2"), (4, 8, "1/2"), (6, 3, "1/2"), (6, 2, "1/2"), (7, 2, "1/2"), (7, 5, "1/2"), (8, 5, "1/2"), (8, 3, "1/2"), (1, 4, "1")]),
    ("fig4-a", 8, 5, &[(1, 8, "1/2"), (1, 7, "1/2"), (8, 2, "1/2"), (8, 5, "1/2"), (7, 3, "1/2"), (7, 4, "1/2"), (4, 5, "1/2"), (5, 6, "1/2"), (6, 4, "1/2"), (6, 3, "1/2"), (6, 2, "1/2")]),
    ("fig4-b", 9, 5, &[(6, 3, "1/2"), (8, 7, "1/2"), (3, 9, "1/2"), (3, 4, "1/2"), (7, 4, "1/2"), (7, 3, "1/2"), (6, 2, "1/2"), (1, 6, "1/2"), (1, 8, "1/2"), (8, 5, "1/2"), (9, 5, "1/2"), (9, 2, "1/2")]),
    ("fig4-c", 9, 6, &[(1, 9, "1/2"), (1, 8, "1/2"), (8, 3, "1/2"), (8, 2, "1/2"), (8, 5, "1/2"), (8, 6, "1/2"), (9, 3, "1/2"), (9, 4, "1/2"), (9, 5, "1/2"), (9, 6, "1/2"), (3, 7, "1/2"), (7, 4, "1/2"), (7, 2, "1/2")]),
    ("fig4-d", 8, 5, &[(2, 8, "1/2"), (8, 4, "1/2"), (8, 5, "1/2"), (1, 4, "1/2"), (1, 6, "1/2"), (6, 5, "1/2"), (6, 2, "1/2"), (6, 3, "1/2"), (4, 7, "1/2"), (7, 2, "1/2"), (7, 3, "1/2")]),
    ("fig4-e", 8, 5, &[(1, 2, "1/2"), (1, 4, "1/2"), (1, 8, "1/2"), (2, 6, "1/2"), (4, 7, "1/2"), (8, 3, "1/2"), (8, 5, "1/2"), (6, 3, "1/2"), (7, 5, "1/2"), (6, 4, "1/2"), (7, 2, "1/2")]),
    ("fig4-f", 9, 6, &[(1, 9, "1/2"), (1, 8, "1/2"), (9, 5, "1/2"), (9, 2, "1/2"), (9, 6, "1/2"), (8, 3, "1/2"), (8, 4, "1/2"), (7, 6, "1/2"), (7, 4, "1/2"), (2, 3, "1/2"), (8, 2, "1/2"), (2, 7, "1/2"), (4, 5, "1/2")]),
    ("fig4-g", 9, 6, &[(1, 2, "1/2"), (1, 4, "1/2"), (1, 5, "1/2"), (1, 7, "1/2"), (7, 2, "1/2"), (7, 3, "1/2"), (7, 6, "1/2"), (9, 5, "1/2"), (8, 3, "1/2"), (8, 4, "1/2"), (5, 8, "1/2"), (9, 6, "1/2"), (4, 9, "1/2")]),
    ("fig4-h", 9, 6, &[(7, 2, "1/2"), (8, 2, "1/2"), (7, 4, "1/2"), (1, 9, "1/2"), (1, 8, "1/2"), (9, 4, "1/2"), (9, 3, "1/2"), (3, 7, "1/2"), (3, 5, "1/2"), (6, 3, "1/2"), (5, 6, "1/2"), (4, 6, "1/2"), (8, 5, "1/2")]),
    ("fig4-i", 9, 6, &[(1, 9, "1/2"), (1, 7, "1/2"), (7, 5, "1/2"), (7, 2, "1/2"), (7, 4, "1/2"), (4, 8, "1/2"), (3, 4, "1/2"), (8, 2, "1/2"), (2, 3, "1/2"), (8, 6, "1/2"), (9, 3, "1/2"), (9, 6, "1/2"), (6, 5, "1/2")]),
];

/// Every fixed name (aliases excluded); `path-2t3` is parametrised by `t`.
pub fn names() -> Vec<&'static str> {
    TABLE.iter().map(|r| r.0).collect()
}

fn canonical_name(name: &str) -> String {
    if let Some(s) = name.strip_prefix("fig2-") {
        format!("oddwheel-7-4-{s}")
    } else if let Some(s) = name.strip_prefix("fig5-") {
        format!("fig4-{s}")
    } else {
        name.to_string()
    }
}

pub fn builtin<F: Field>(name: &str) -> Result<Builtin<F>> {
    let key = canonical_name(name);
    let (_, n, t, arcs) = TABLE
        .iter()
        .find(|r| r.0 == key)
        .ok_or_else(|| Error::Parameters(format!("unknown builtin {name:?}")))?;
    let arcs: Vec<(usize, usize, F)> = arcs
        .iter()
        .map(|&(i, j, v)| (i - 1, j - 1, v.parse::<F>().map_err(|_| Error::Internal(v.into())).unwrap()))
        .collect();
    Ok(Builtin { name: key, n: *n, t: *t, root: 0, point: ArcVector::from_arcs(*n, &arcs) })
}

/// Integer CM point on `n = 2t - 2` nodes with `2t - 3` arcs: a path
/// alternating between Steiner nodes and terminals, hanging off the root.
pub fn path_2t3<F: Field>(t: usize) -> Result<Builtin<F>> {
    if t < 3 {
        return Err(Error::Parameters("path-2t3 needs t >= 3".into()));
    }
    let n = 2 * t - 2;
    // 1-based construction
    let mut arcs = vec![(1, t + 1), (2 * t - 2, t)];
    for i in 1..=t - 3 {
        arcs.push((t + i, t + i + 1));
    }
    for i in 1..=t - 2 {
        arcs.push((t + i, i + 1));
    }
    let arcs: Vec<(usize, usize, F)> = arcs.into_iter().map(|(i, j)| (i - 1, j - 1, F::one())).collect();
    Ok(Builtin { name: format!("path-2t3-{t}"), n, t, root: 0, point: ArcVector::from_arcs(n, &arcs) })
}
