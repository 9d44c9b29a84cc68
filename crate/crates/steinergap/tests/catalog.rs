mod common;

use common::{in_cm, q, rng};
use rand::seq::SliceRandom;
use steinergap::builtins::builtin;
use steinergap::catalog::{lift_add_one, lift_add_zero, project_remove_zero, report_csv, report_text, AddOutcome, Catalog, OneLift, Source, VertexRecord};
use steinergap::digraph::point_key;
use steinergap::formulation::{build_polytope, CutMode, Kind};
use steinergap::gap::vertex_gap;
use steinergap::instance::ArcVector;
use steinergap::vertices::enumerate_vertices;
use steinergap::{Error, Q};

fn vertices(n: usize, t: usize) -> Vec<ArcVector<Q>> {
    let sys = build_polytope::<Q>(Kind::Cm, n, t, 0, &CutMode::Full).unwrap();
    enumerate_vertices(&sys).unwrap().into_iter().map(|values| ArcVector { n, values }).collect()
}

/// Relabels the Steiner nodes of `x` (terminals and root stay put).
fn shuffle_steiner(x: &ArcVector<Q>, t: usize, r: &mut rand_chacha::ChaCha8Rng) -> ArcVector<Q> {
    let mut steiner: Vec<usize> = (t..x.n).collect();
    steiner.shuffle(r);
    let perm: Vec<usize> = (0..t).chain(steiner).collect();
    x.relabel(&perm)
}

#[test]
fn zero_lift_and_projection_round_trip() {
    let mut cases = 0;
    for (n, t) in [(4, 3), (5, 3), (5, 4), (4, 4)] {
        for x in vertices(n, t) {
            let y = lift_add_zero(&x, t).unwrap();
            assert_eq!(y.n, n + 1);
            assert!(in_cm(&y.values, n + 1, t));
            assert_eq!(project_remove_zero(&y, t, n).unwrap(), x);
            cases += 1;
        }
    }
    for name in ["fig2-a", "fig2-b"] {
        let x = builtin::<Q>(name).unwrap().point;
        let y = lift_add_zero(&x, 4).unwrap();
        assert_eq!(vertex_gap(&y, Kind::Cm, 4, 0).unwrap().gap, q(10) / q(9));
        assert_eq!(project_remove_zero(&y, 4, 7).unwrap(), x);
        cases += 1;
    }
    assert!(cases >= 50, "{cases}");
}

#[test]
fn projection_needs_an_isolated_steiner_node() {
    let x = builtin::<Q>("fig2-a").unwrap().point;
    assert!(matches!(project_remove_zero(&x, 4, 5), Err(Error::Precondition(_))));
    let y = lift_add_zero(&x, 4).unwrap();
    assert!(matches!(project_remove_zero(&y, 4, 2), Err(Error::Precondition(_))));
}

/// Every successful one-lift of a small vertex is among the enumerated
/// vertices one size up. Moving the outflow of a Steiner node to the new
/// terminal breaks that node's balance row, so variant B never applies at
/// Steiner nodes with outflow.
#[test]
fn one_lifts_of_small_vertices() {
    let mut lifted = 0;
    for (n, t) in [(4, 3), (5, 3), (5, 4)] {
        let targets = vertices(n + 1, t + 1);
        for x in vertices(n, t) {
            for v in 1..n {
                for variant in [OneLift::A, OneLift::B] {
                    match lift_add_one(&x, t, variant, v) {
                        Ok(y) => {
                            assert!(x.inflow(v) == q(1));
                            assert!(targets.contains(&y), "({n},{t}) {variant:?} at {v}");
                            lifted += 1;
                        }
                        Err(_) => assert!(x.inflow(v) != q(1) || !x.is_integral() || (variant == OneLift::B && v >= t)),
                    }
                }
            }
            let y = lift_add_one(&x, t, OneLift::C, 0).unwrap();
            assert!(targets.contains(&y), "({n},{t}) C");
            lifted += 1;
        }
    }
    assert!(lifted >= 50, "{lifted}");
}

/// Adding a pendant terminal below a Steiner node of a fractional vertex can
/// leave a non-vertex: the result lies in P_CM(6,5) but is not enumerated.
#[test]
fn pendant_lift_of_a_fractional_vertex_is_not_a_vertex() {
    let third = q(1) / q(3);
    let two = q(2) / q(3);
    let x = ArcVector::from_arcs(
        5,
        &[(0, 3, third.clone()), (0, 4, two.clone()), (1, 4, third.clone()), (2, 1, third.clone()), (3, 2, third.clone()), (4, 1, two.clone()), (4, 2, two.clone()), (4, 3, two.clone())],
    );
    assert!(vertices(5, 4).contains(&x));
    assert!(lift_add_one(&x, 4, OneLift::A, 4).is_err());
    // the same construction by hand: terminal 4 hangs off old node 4 (now 5)
    let y = ArcVector::from_arcs(
        6,
        &[(0, 3, third.clone()), (0, 5, two.clone()), (1, 5, third.clone()), (2, 1, third.clone()), (3, 2, third), (5, 1, two.clone()), (5, 2, two.clone()), (5, 3, two), (5, 4, q(1))],
    );
    assert!(in_cm(&y.values, 6, 5));
    assert!(!vertices(6, 5).contains(&y));
}

/// The odd wheels lift to the (8,5) figure vertices, keeping gap 10/9.
#[test]
fn odd_wheel_lifts_reproduce_the_next_figure() {
    let key = |name: &str| {
        let b = builtin::<Q>(name).unwrap();
        point_key(&b.point, b.t, 0)
    };
    let reach = |src: &str, variant: OneLift| -> Vec<ArcVector<Q>> {
        let x = builtin::<Q>(src).unwrap().point;
        (0..7).filter_map(|v| lift_add_one(&x, 4, variant, v).ok()).collect()
    };
    for (src, variant, target) in [("fig2-a", OneLift::A, "fig3-a"), ("fig2-b", OneLift::B, "fig3-c"), ("fig2-a", OneLift::C, "fig3-d")] {
        let want = key(target);
        let hit: Vec<ArcVector<Q>> = reach(src, variant).into_iter().filter(|y| point_key(y, 5, 0) == want).collect();
        assert!(!hit.is_empty(), "{src} {variant:?} does not reach {target}");
        for y in hit {
            assert_eq!(vertex_gap(&y, Kind::Cm, 5, 0).unwrap().gap, q(10) / q(9), "{target}");
        }
    }
}

/// The 44 vertices of P_CM(5,4) split into the spanning ones and the
/// zero-lifts of the vertices of P_CM(4,4).
#[test]
fn vertices_split_into_spanning_and_zero_lifts() {
    let all = vertices(5, 4);
    assert_eq!(all.len(), 44);
    let spanning: Vec<&ArcVector<Q>> = all.iter().filter(|x| x.isolated_nodes().is_empty()).collect();
    let lifts: Vec<ArcVector<Q>> = vertices(4, 4).iter().map(|x| lift_add_zero(x, 4).unwrap()).collect();
    assert_eq!(spanning.len() + lifts.len(), all.len());
    for y in &lifts {
        assert!(all.contains(y));
        assert!(!y.isolated_nodes().is_empty());
    }
}

#[test]
fn catalog_dedups_isomorphic_points() {
    let mut r = rng(61);
    let mut cat = Catalog::<Q>::new();
    let a = builtin::<Q>("fig2-a").unwrap().point;
    let b = builtin::<Q>("fig2-b").unwrap().point;
    assert_eq!(cat.add_checked(VertexRecord::certified(a.clone(), 4, Source::Builtin).unwrap()).unwrap(), AddOutcome::Inserted);
    assert_eq!(cat.add(VertexRecord::new(b.clone(), 4, Source::Builtin)), AddOutcome::Inserted);
    for _ in 0..20 {
        let a2 = shuffle_steiner(&a, 4, &mut r);
        assert_eq!(cat.add(VertexRecord::new(a2, 4, Source::Phi)), AddOutcome::Duplicate);
    }
    for name in ["fig2-c", "fig2-d"] {
        let p = builtin::<Q>(name).unwrap().point;
        assert_eq!(cat.add(VertexRecord::new(p, 4, Source::Otc)), AddOutcome::Duplicate);
    }
    assert_eq!(cat.len(), 2);
    let rec = cat.get(7, 4, &point_key(&a, 4, 0)).unwrap();
    assert_eq!(rec.sources, vec![Source::Phi, Source::Builtin]);
}

#[test]
fn certification_rejects_non_vertices() {
    let mut x = builtin::<Q>("fig2-a").unwrap().point;
    x.set(0, 4, q(1));
    assert!(VertexRecord::certified(x, 4, Source::Phi).is_err());
}

#[test]
fn ndjson_round_trip_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.ndjson");
    let mut cat = Catalog::<Q>::new();
    for name in ["fig2-a", "fig2-b", "fig3-a", "fig4-a"] {
        let b = builtin::<Q>(name).unwrap();
        let mut rec = VertexRecord::new(b.point.clone(), b.t, Source::Builtin);
        rec.gap = Some(vertex_gap(&b.point, Kind::Cm, b.t, 0).unwrap().gap);
        cat.add(rec);
    }
    cat.save(&path).unwrap();
    let back = Catalog::<Q>::load(&path).unwrap();
    assert_eq!(back.len(), 4);
    for rec in cat.records() {
        assert_eq!(back.get(rec.n, rec.t, &rec.key), Some(rec));
    }
    let rows = back.report(7..=8, 4..=5);
    let row74 = rows.iter().find(|r| (r.n, r.t) == (7, 4)).unwrap();
    assert_eq!((row74.vertices, row74.gaps_known, row74.attaining), (2, 2, 2));
    assert_eq!(row74.max_gap, Some(q(10) / q(9)));
    // 10/9 > 12/11
    let row85 = rows.iter().find(|r| (r.n, r.t) == (8, 5)).unwrap();
    assert_eq!((row85.vertices, row85.max_gap.clone(), row85.attaining), (2, Some(q(10) / q(9)), 1));
    assert!(report_text(&rows).contains("10/9"));
    assert!(report_csv(&rows).lines().count() > 2);
}

#[test]
fn empty_report() {
    let cat = Catalog::<Q>::new();
    assert!(cat.is_empty());
    assert!(cat.report(6..=7, 4..=5).is_empty());
    let dir = tempfile::tempdir().unwrap();
    assert!(Catalog::<Q>::load(&dir.path().join("missing.ndjson")).is_err());
}
