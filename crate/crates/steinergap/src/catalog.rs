//! Vertex catalog: isomorphism-deduplicated records in append-only NDJSON
//! files, the zero/one lifts between adjacent parameters, and reports.

use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::digraph::{point_key, CanonicalKey};
use crate::error::{Error, Result};
use crate::formulation::{build_polytope, CutMode, Kind};
use crate::instance::{ArcVector, PointJson};
use crate::rank::{certify_vertex, VertexCertificate};
use crate::scalar::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Phi,
    Otc,
    Poq,
    Enum,
    Lift,
    Builtin,
}

/// A certified vertex of `P_CM(n, t)` (root 0).
#[derive(Debug, Clone, PartialEq)]
pub struct VertexRecord<F> {
    pub n: usize,
    pub t: usize,
    pub point: ArcVector<F>,
    pub key: CanonicalKey,
    pub sources: Vec<Source>,
    pub gap: Option<F>,
    pub spanning: bool,
}

impl<F: Field> VertexRecord<F> {
    /// Record for a point already known to be a vertex.
    pub fn new(point: ArcVector<F>, t: usize, source: Source) -> Self {
        VertexRecord {
            n: point.n,
            t,
            key: point_key(&point, t, 0),
            spanning: point.isolated_nodes().is_empty(),
            point,
            sources: vec![source],
            gap: None,
        }
    }

    /// Record after certification against the explicit CM row set.
    pub fn certified(point: ArcVector<F>, t: usize, source: Source) -> Result<Self> {
        certify_cm(&point, t)?;
        Ok(Self::new(point, t, source))
    }
}

/// Certifies `x` as a vertex of `P_CM(n, t)` (root 0), naming the failure.
pub fn certify_cm<F: Field>(x: &ArcVector<F>, t: usize) -> Result<()> {
    let sys = build_polytope::<F>(Kind::Cm, x.n, t, 0, &CutMode::Full)?;
    match certify_vertex(&x.values, &sys) {
        VertexCertificate::Vertex(_) => Ok(()),
        VertexCertificate::Infeasible(r) => Err(Error::Precondition(format!("point violates {}", sys.rows[r].tag))),
        VertexCertificate::Direction(_) => Err(Error::Precondition("point is not a vertex (tight rows are rank deficient)".into())),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordJson {
    pub n: usize,
    pub t: usize,
    pub key: CanonicalKey,
    pub sources: Vec<Source>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<String>,
    pub spanning: bool,
    pub point: PointJson,
}

impl<F: Field> VertexRecord<F> {
    pub fn to_json(&self) -> RecordJson {
        RecordJson {
            n: self.n,
            t: self.t,
            key: self.key.clone(),
            sources: self.sources.clone(),
            gap: self.gap.as_ref().map(|g| g.to_string()),
            spanning: self.spanning,
            point: self.point.to_json(Some(self.t), Some(0)),
        }
    }

    pub fn from_json(j: &RecordJson) -> Result<Self> {
        let point = ArcVector::from_json(&j.point)?;
        let gap = match &j.gap {
            Some(g) => Some(g.parse::<F>().map_err(|_| Error::Parse(format!("bad gap {g:?}")))?),
            None => None,
        };
        Ok(VertexRecord { n: j.n, t: j.t, point, key: j.key.clone(), sources: j.sources.clone(), gap, spanning: j.spanning })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddOutcome {
    Inserted,
    Duplicate,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog<F> {
    records: Vec<VertexRecord<F>>,
    index: HashMap<(usize, usize, CanonicalKey), usize>,
}

impl<F: Field> Catalog<F> {
    pub fn new() -> Self {
        Catalog { records: Vec::new(), index: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[VertexRecord<F>] {
        &self.records
    }

    pub fn get(&self, n: usize, t: usize, key: &CanonicalKey) -> Option<&VertexRecord<F>> {
        self.index.get(&(n, t, key.clone())).map(|&i| &self.records[i])
    }

    /// Inserts by `(n, t, key)`. A duplicate contributes its sources (and a
    /// gap, if the stored record has none) to the stored record.
    pub fn add(&mut self, r: VertexRecord<F>) -> AddOutcome {
        let k = (r.n, r.t, r.key.clone());
        if let Some(&i) = self.index.get(&k) {
            let stored = &mut self.records[i];
            for s in r.sources {
                if !stored.sources.contains(&s) {
                    stored.sources.push(s);
                    stored.sources.sort();
                }
            }
            if stored.gap.is_none() {
                stored.gap = r.gap;
            }
            return AddOutcome::Duplicate;
        }
        self.index.insert(k, self.records.len());
        self.records.push(r);
        AddOutcome::Inserted
    }

    /// `add` after certifying the point; uncertified records are rejected.
    pub fn add_checked(&mut self, r: VertexRecord<F>) -> Result<AddOutcome> {
        certify_cm(&r.point, r.t)?;
        if point_key(&r.point, r.t, 0) != r.key {
            return Err(Error::Precondition("record key does not match its point".into()));
        }
        Ok(self.add(r))
    }

    pub fn set_gap(&mut self, n: usize, t: usize, key: &CanonicalKey, gap: F) {
        if let Some(&i) = self.index.get(&(n, t, key.clone())) {
            self.records[i].gap = Some(gap);
        }
    }

    /// Loads every record of an NDJSON file (rebuilding the index).
    pub fn load(path: &Path) -> Result<Self> {
        let mut c = Catalog::new();
        c.load_into(path)?;
        Ok(c)
    }

    pub fn load_into(&mut self, path: &Path) -> Result<()> {
        let f = File::open(path)?;
        for (k, line) in BufReader::new(f).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let j: RecordJson =
                serde_json::from_str(&line).map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), k + 1)))?;
            self.add(VertexRecord::from_json(&j)?);
        }
        Ok(())
    }

    /// Writes all records, sorted by `(n, t, key)`, replacing the file.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = File::create(path)?;
        let mut order: Vec<&VertexRecord<F>> = self.records.iter().collect();
        order.sort_by(|a, b| (a.n, a.t, &a.key).cmp(&(b.n, b.t, &b.key)));
        for r in order {
            writeln!(f, "{}", serde_json::to_string(&r.to_json()).unwrap())?;
        }
        Ok(())
    }

    /// Per `(n, t)` statistics restricted to the given ranges.
    pub fn report(&self, ns: std::ops::RangeInclusive<usize>, ts: std::ops::RangeInclusive<usize>) -> Vec<ReportRow<F>> {
        let mut by: BTreeMap<(usize, usize), Vec<&VertexRecord<F>>> = BTreeMap::new();
        for r in &self.records {
            if ns.contains(&r.n) && ts.contains(&r.t) {
                by.entry((r.n, r.t)).or_default().push(r);
            }
        }
        by.into_iter()
            .map(|((n, t), rs)| {
                let max_gap = rs.iter().filter_map(|r| r.gap.clone()).max();
                let attaining = max_gap.as_ref().map_or(0, |m| rs.iter().filter(|r| r.gap.as_ref() == Some(m)).count());
                ReportRow { n, t, vertices: rs.len(), gaps_known: rs.iter().filter(|r| r.gap.is_some()).count(), max_gap, attaining }
            })
            .collect()
    }
}

/// `catalog-{n}-{t}.ndjson` in `dir`.
pub fn catalog_path(dir: &Path, n: usize, t: usize) -> PathBuf {
    dir.join(format!("catalog-{n}-{t}.ndjson"))
}

/// Appends one record to an NDJSON file.
pub fn append_record<F: Field>(path: &Path, r: &VertexRecord<F>) -> Result<()> {
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    writeln!(f, "{}", serde_json::to_string(&r.to_json()).unwrap())?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow<F> {
    pub n: usize,
    pub t: usize,
    pub vertices: usize,
    pub gaps_known: usize,
    pub max_gap: Option<F>,
    pub attaining: usize,
}

pub fn report_text<F: Field>(rows: &[ReportRow<F>]) -> String {
    let mut s = format!("{:>3} {:>3} {:>9} {:>9} {:>8} {:>5}\n", "n", "t", "vertices", "max gap", "decimal", "#max");
    for r in rows {
        let (g, d) = match &r.max_gap {
            Some(g) => (g.to_string(), g.to_decimal(4)),
            None => ("-".into(), "-".into()),
        };
        s.push_str(&format!("{:>3} {:>3} {:>9} {:>9} {:>8} {:>5}\n", r.n, r.t, r.vertices, g, d, r.attaining));
    }
    s
}

pub fn report_csv<F: Field>(rows: &[ReportRow<F>]) -> String {
    let mut s = String::from("n,t,vertices,gaps_known,max_gap,attaining\n");
    for r in rows {
        let g = r.max_gap.as_ref().map_or(String::new(), |g| g.to_string());
        s.push_str(&format!("{},{},{},{},{},{}\n", r.n, r.t, r.vertices, r.gaps_known, g, r.attaining));
    }
    s
}

// ---- lifts -----------------------------------------------------------------

/// Appends an isolated Steiner node: a vertex of `P_CM(n+1, t)`.
pub fn lift_add_zero<F: Field>(x: &ArcVector<F>, t: usize) -> Result<ArcVector<F>> {
    let n = x.n;
    let y = ArcVector::from_arcs(n + 1, &x.support());
    certify_cm(&y, t).map_err(|e| Error::Internal(format!("zero lift of a vertex failed to certify: {e}")))?;
    Ok(y)
}

/// Removes the isolated Steiner node `k`: a vertex of `P_CM(n-1, t)`.
pub fn project_remove_zero<F: Field>(y: &ArcVector<F>, t: usize, k: usize) -> Result<ArcVector<F>> {
    if k < t || k >= y.n {
        return Err(Error::Precondition(format!("node {} is not a Steiner node", k + 1)));
    }
    if !y.isolated_nodes().contains(&k) {
        return Err(Error::Precondition(format!("node {} is not isolated", k + 1)));
    }
    let arcs: Vec<(usize, usize, F)> = y
        .support()
        .into_iter()
        .map(|(i, j, v)| (if i > k { i - 1 } else { i }, if j > k { j - 1 } else { j }, v))
        .collect();
    let x = ArcVector::from_arcs(y.n - 1, &arcs);
    certify_cm(&x, t)?;
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneLift {
    /// New terminal hangs off `v` by an arc of value 1.
    A,
    /// As `A`, and the new terminal takes over `v`'s outgoing arcs.
    B,
    /// New root above the old one, which becomes a terminal.
    C,
}

impl std::str::FromStr for OneLift {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(OneLift::A),
            "b" => Ok(OneLift::B),
            "c" => Ok(OneLift::C),
            _ => Err(Error::Parse(format!("unknown lift variant {s:?}"))),
        }
    }
}

/// Adds one node joined by an arc of value 1, giving a vertex of
/// `P_CM(n+1, t+1)`. For `A`/`B` the new terminal gets index `t` and Steiner
/// nodes shift up by one; for `C` the new node is the root (index 0) and the
/// old root becomes terminal `t`.
pub fn lift_add_one<F: Field>(x: &ArcVector<F>, t: usize, variant: OneLift, v: usize) -> Result<ArcVector<F>> {
    let n = x.n;
    let one = F::one();
    let shift = |u: usize| if u >= t { u + 1 } else { u };
    let arcs: Vec<(usize, usize, F)> = match variant {
        OneLift::A | OneLift::B => {
            if v >= n || x.inflow(v) != one {
                return Err(Error::Precondition(format!("node {} must have inflow 1", v + 1)));
            }
            let new = t;
            let mut arcs = Vec::new();
            for (i, j, w) in x.support() {
                if variant == OneLift::B && i == v {
                    arcs.push((new, shift(j), w));
                } else {
                    arcs.push((shift(i), shift(j), w));
                }
            }
            arcs.push((shift(v), new, one));
            arcs
        }
        OneLift::C => {
            let map = |u: usize| if u == 0 { t } else { shift(u) };
            let mut arcs: Vec<(usize, usize, F)> = x.support().into_iter().map(|(i, j, w)| (map(i), map(j), w)).collect();
            arcs.push((0, t, one));
            arcs
        }
    };
    let y = ArcVector::from_arcs(n + 1, &arcs);
    certify_cm(&y, t + 1)?;
    Ok(y)
}
