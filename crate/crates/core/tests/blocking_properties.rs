use std::collections::BTreeSet;

use hyperfocus_core::arcs::{secants, translation_arc_at_origin, Arc, AdditiveSubgroup, hyperfocused_lines};
use hyperfocus_core::blocking::*;
use hyperfocus_core::gf2::{FieldElement as Fe, FieldSpec};
use hyperfocus_core::onefact::{fixtures, isomorphic, OneFactorization};
use hyperfocus_core::projplane::{Plane, ProjLine, ProjPoint};

fn plane(r: u32) -> Plane {
    Plane::new(FieldSpec::with_degree(r).unwrap())
}

/// All k-arcs of `pl` whose points are listed in index order, optionally
/// forced to start with `prefix`.
fn arcs_of_size(pl: &Plane, k: usize, prefix: &[ProjPoint]) -> Vec<Arc> {
    fn go(pl: &Plane, k: usize, from: usize, cur: &mut Vec<ProjPoint>, out: &mut Vec<Vec<ProjPoint>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..pl.size() {
            let p = pl.point_at(i);
            if cur.contains(&p) {
                continue;
            }
            let ok = (0..cur.len()).all(|a| (a + 1..cur.len()).all(|b| !pl.collinear(&cur[a], &cur[b], &p)));
            if ok {
                cur.push(p);
                go(pl, k, i + 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = prefix.to_vec();
    go(pl, k, 0, &mut cur, &mut out);
    let mut set: BTreeSet<Vec<ProjPoint>> = BTreeSet::new();
    for mut pts in out {
        pts.sort();
        set.insert(pts);
    }
    set.into_iter().map(|pts| Arc::new(*pl, pts).unwrap()).collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn brute_force_min(k: &Arc) -> Vec<Vec<ProjPoint>> {
    let pl = *k.plane();
    let external: Vec<ProjPoint> = pl.points().filter(|p| !k.contains(p)).collect();
    let secs = secants(k);
    let mut out = Vec::new();
    for idx in subsets(external.len(), k.len() - 1) {
        let mut b: Vec<ProjPoint> = idx.iter().map(|&i| external[i]).collect();
        b.sort();
        if secs.lines().iter().all(|s| b.iter().any(|p| pl.incident(p, s))) {
            out.push(b);
        }
    }
    out.sort();
    out
}

fn check_counting(b: &BlockingSet) {
    let k = b.arc();
    let pl = *k.plane();
    let secs = secants(k);
    for s in secs.lines() {
        assert_eq!(b.points().iter().filter(|p| pl.incident(p, s)).count(), 1);
    }
    for p in b.points() {
        assert_eq!(secs.lines().iter().filter(|s| pl.incident(p, s)).count(), k.len() / 2);
    }
}

#[test]
fn minimum_sets_match_brute_force_in_pg_2_4() {
    let pl = plane(2);
    let mut totals = [0usize; 2];
    for (slot, size) in [4usize, 6].into_iter().enumerate() {
        let arcs = arcs_of_size(&pl, size, &[]);
        assert_eq!(arcs.len(), if size == 4 { 2520 } else { 168 });
        for k in &arcs {
            let got: Vec<Vec<ProjPoint>> = min_blocking_sets(k).iter().map(|b| b.points().to_vec()).collect();
            let want = brute_force_min(k);
            assert_eq!(got, want, "arc {:?}", k.points());
            totals[slot] += got.len();
        }
    }
    assert!(totals[0] > 0 && totals[1] > 0);
}

fn frame(pl: &Plane) -> Vec<ProjPoint> {
    [[0, 0, 1], [0, 1, 1], [1, 0, 1], [1, 1, 1]]
        .map(|c| pl.normalize(c.map(Fe::from_raw)).unwrap())
        .to_vec()
}

/// Every arc of size 4, 6 or 8 is projectively equivalent to one through the
/// standard frame, so these cover all (K, B) pairs up to equivalence.
#[test]
fn triangles_are_collinear_for_every_search_result() {
    for (r, sizes) in [(2u32, vec![4usize, 6]), (3, vec![4, 6, 8])] {
        let pl = plane(r);
        let mut pairs = 0;
        for size in sizes {
            for k in arcs_of_size(&pl, size, &frame(&pl)) {
                for b in min_blocking_sets(&k) {
                    check_counting(&b);
                    let t = triangle_collinearity(&b).unwrap();
                    assert!(t.holds(), "q={} k={size} {:?}", pl.order(), t.violation);
                    pairs += 1;
                }
            }
        }
        assert!(pairs > 0);
    }
}

#[test]
fn hyperfocused_lines_give_linear_minimum_sets() {
    for r in 2..=3 {
        let pl = plane(r);
        for k in arcs_of_size(&pl, 6, &frame(&pl)) {
            let found: Vec<BlockingSet> = min_blocking_sets(&k);
            for l in hyperfocused_lines(&k) {
                let secs = secants(&k);
                let mut cut: Vec<ProjPoint> = secs.lines().iter().map(|s| pl.meet(s, &l).unwrap()).collect();
                cut.sort();
                cut.dedup();
                assert!(found.iter().any(|b| b.points() == cut.as_slice() && b.is_linear()));
            }
        }
    }
}

fn pair(a: u16, b: u16) -> (Fe, Fe) {
    (Fe::from_raw(a), Fe::from_raw(b))
}

#[test]
fn ghf_blocking_sets_are_never_linear() {
    let f = FieldSpec::with_degree(4).unwrap();
    let pl = Plane::new(f);
    let groups = [
        unit_square_group(f),
        AdditiveSubgroup::new(f, vec![pair(1, 1), pair(2, 4)]).unwrap(),
        AdditiveSubgroup::new(f, vec![pair(1, 1), pair(2, 4), pair(4, 3)]).unwrap(),
    ];
    let mut built = 0;
    for g in &groups {
        let Ok(k) = translation_arc_at_origin(g) else { continue };
        for lambda in f.elements().skip(2) {
            for (a1, a2) in [pair(3, 5), pair(7, 9), pair(6, 11), pair(13, 2)] {
                let phi = pl.homology(lambda, a1, a2).unwrap();
                let Ok((arc, b)) = ghf_construct(g, &phi) else { continue };
                built += 1;
                assert_eq!(arc.len(), 2 * k.len());
                assert_eq!(b.len(), 2 * k.len() - 1);
                assert!(!b.is_linear());
                check_counting(&b);
                // Secants inside either half are blocked on the line at infinity.
                let img: Vec<ProjPoint> = k.points().iter().map(|p| pl.apply(&phi, p)).collect();
                for half in [k.points().to_vec(), img] {
                    for i in 0..half.len() {
                        for j in i + 1..half.len() {
                            let s = pl.line_through(&half[i], &half[j]).unwrap();
                            let blk: Vec<_> = b.points().iter().filter(|p| pl.incident(p, &s)).collect();
                            assert!(blk[0].is_at_infinity());
                        }
                    }
                }
            }
        }
    }
    assert!(built > 0);
}

#[test]
fn octagon_at_sixteen() {
    let f = FieldSpec::with_degree(4).unwrap();
    let pl = Plane::new(f);
    let params = octagon_parameters(&f);
    assert_eq!(params.len(), 1344);
    let canon: BTreeSet<Vec<ProjPoint>> = params
        .iter()
        .map(|&(l, a1, a2)| {
            let (arc, b) = example_otto(f, l, a1, a2).unwrap();
            assert!(is_fano_subplane(&pl, b.points()));
            assert!(triangle_collinearity(&b).unwrap().holds());
            let phi = pl.homology(l, a1, a2).unwrap();
            assert_eq!(ghf_construct(&unit_square_group(f), &phi).unwrap(), (arc.clone(), b.clone()));
            projective_canonical_form(&pl, arc.points())
        })
        .collect();
    assert_eq!(canon.len(), 1);
    let (l, a1, a2) = params[0];
    let (_, b) = example_otto(f, l, a1, a2).unwrap();
    assert!(isomorphic(&factorization_of(&b).unwrap(), &fixtures::k8_homology_class()));
    assert_eq!(min_blocking_sets(b.arc()).iter().filter(|m| m.points() == b.points()).count(), 1);
}

#[test]
fn example_data_does_not_fit_orders_four_and_eight() {
    for r in [2, 3] {
        let f = FieldSpec::with_degree(r).unwrap();
        assert!(octagon_parameters(&f).is_empty());
        for l in f.elements().skip(2) {
            for a1 in f.elements() {
                for a2 in f.elements() {
                    assert!(example_otto(f, l, a1, a2).is_err());
                }
            }
        }
    }
}

#[test]
fn quadrangle_factorization() {
    let pl = plane(2);
    let k = Arc::new(pl, frame(&pl)).unwrap();
    let sets = min_blocking_sets(&k);
    assert_eq!(sets.len(), 1);
    let mut diagonal: Vec<ProjPoint> =
        [[1, 0, 0], [0, 1, 0], [1, 1, 0]].iter().map(|c| pl.normalize(c.map(Fe::from_raw)).unwrap()).collect();
    diagonal.sort();
    assert_eq!(sets[0].points(), diagonal.as_slice());
    let f = factorization_of(&sets[0]).unwrap();
    let k4 = OneFactorization::from_one_based(4, &[&[(1, 2), (3, 4)], &[(1, 3), (2, 4)], &[(1, 4), (2, 3)]]).unwrap();
    assert!(isomorphic(&f, &k4));
    assert!(triangle_collinearity(&sets[0]).unwrap().holds());
}

#[test]
fn non_minimum_sets_are_rejected() {
    let pl = plane(2);
    let k = Arc::new(pl, frame(&pl)).unwrap();
    let line = pl.points_on(&ProjLine::INFINITY);
    let b = BlockingSet::new(k.clone(), line).unwrap();
    assert!(b.is_linear() && !b.is_minimum());
    assert!(triangle_collinearity(&b).is_err());
    assert!(factorization_of(&b).is_err());
    assert!(!is_blocking(&k, &[]).unwrap());
}
