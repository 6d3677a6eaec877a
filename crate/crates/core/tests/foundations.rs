use lrb::constructions::{
    dist_chain_lrb, free_lrb, free_lrb_bar, free_to_bar, matroid_lrb, ordered_partitions,
    q_free_lrb, q_free_to_bar, DistributiveLattice, Field, Guards, Matroid, MatroidKind,
    MatroidSpec,
};
use lrb::semigroup::{ElementId, Semigroup};
use lrb::support::{derive_support, sub_semigroup, ViewKind};

fn k4() -> Matroid {
    let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    Matroid::build(&MatroidSpec::Graph { edges }).unwrap()
}

fn corpus() -> Vec<Semigroup> {
    let g = Guards::default();
    let mut v = Vec::new();
    for n in 1..=4 {
        v.push(free_lrb(n, &g).unwrap());
        v.push(ordered_partitions(n, &g).unwrap());
    }
    for n in 1..=5 {
        v.push(free_lrb_bar(n, &g).unwrap());
    }
    v.push(q_free_lrb(2, 2, false, &g).unwrap());
    v.push(q_free_lrb(3, 2, false, &g).unwrap());
    v.push(q_free_lrb(2, 3, false, &g).unwrap());
    v.push(q_free_lrb(2, 2, true, &g).unwrap());
    v.push(q_free_lrb(3, 2, true, &g).unwrap());
    v.push(q_free_lrb(2, 3, true, &g).unwrap());
    v.push(q_free_lrb(2, 4, true, &g).unwrap());
    v.push(matroid_lrb(&k4(), MatroidKind::OrderedBases, &g).unwrap());
    v.push(matroid_lrb(&k4(), MatroidKind::FlagChains, &g).unwrap());
    let u24 = Matroid::build(&MatroidSpec::Uniform { k: 2, m: 4 }).unwrap();
    v.push(matroid_lrb(&u24, MatroidKind::OrderedBases, &g).unwrap());
    v.push(matroid_lrb(&u24, MatroidKind::FlagChains, &g).unwrap());
    v.push(dist_chain_lrb(&DistributiveLattice::grid(2, 2), &g).unwrap());
    v.push(dist_chain_lrb(&DistributiveLattice::grid(1, 3), &g).unwrap());
    v.push(dist_chain_lrb(&DistributiveLattice::boolean(3), &g).unwrap());
    v
}

#[test]
fn every_construction_is_an_lrb_with_its_named_lattice() {
    for s in corpus() {
        let report = s.verify_lrb();
        assert!(report.passed(), "{}: {:?}", s.label(), report);
        let l = derive_support(&s).unwrap();
        l.check_invariants(&s)
            .unwrap_or_else(|e| panic!("{}: {e}", s.label()));
        l.check_natural(&s)
            .unwrap_or_else(|e| panic!("{}: {e}", s.label()));
    }
}

#[test]
fn lattice_sizes() {
    let g = Guards::default();
    let size = |s: &Semigroup| derive_support(s).unwrap().len();
    assert_eq!(size(&free_lrb(4, &g).unwrap()), 16);
    assert_eq!(size(&ordered_partitions(3, &g).unwrap()), 5);
    assert_eq!(size(&ordered_partitions(4, &g).unwrap()), 15);
    // subsets of [4] of size other than 3
    assert_eq!(size(&free_lrb_bar(4, &g).unwrap()), 16 - 4);
    // 1 + 7 + 7 + 1 subspaces of F_2^3
    assert_eq!(size(&q_free_lrb(3, 2, false, &g).unwrap()), 16);
    // dimension other than 2: 1 + 7 + 1
    assert_eq!(size(&q_free_lrb(3, 2, true, &g).unwrap()), 9);
    // flats of K4: 1 + 6 + (4 triangles + 3 matchings) + 1
    assert_eq!(
        size(&matroid_lrb(&k4(), MatroidKind::OrderedBases, &g).unwrap()),
        15
    );
    assert_eq!(
        size(&matroid_lrb(&k4(), MatroidKind::FlagChains, &g).unwrap()),
        8
    );
}

#[test]
fn f2_support_is_boolean() {
    let s = free_lrb(2, &Guards::default()).unwrap();
    let l = derive_support(&s).unwrap();
    assert_eq!(l.len(), 4);
    let mut chambers: Vec<&str> = l.chambers().iter().map(|&c| s.key(c)).collect();
    chambers.sort();
    assert_eq!(chambers, ["(1 2)", "(2 1)"]);
    assert_eq!(l.atoms().len(), 2);
    assert_eq!(l.moebius(l.bottom(), l.top()).unwrap(), 1);
}

#[test]
fn moebius_values() {
    let g = Guards::default();
    let l = derive_support(&free_lrb(3, &g).unwrap()).unwrap();
    assert_eq!(l.moebius(l.bottom(), l.top()).unwrap(), -1);
    let p3 = derive_support(&ordered_partitions(3, &g).unwrap()).unwrap();
    assert_eq!(p3.moebius(p3.bottom(), p3.top()).unwrap(), 2);
    assert_eq!(p3.chambers().len(), 6);
    assert!(p3.moebius(p3.top(), p3.bottom()).is_err());
}

fn check_homomorphism(a: &Semigroup, b: &Semigroup, f: &[ElementId]) {
    for x in 0..a.len() {
        for y in 0..a.len() {
            assert_eq!(
                f[a.mul(x, y)],
                b.mul(f[x], f[y]),
                "{} · {}",
                a.key(x),
                a.key(y)
            );
        }
    }
    let mut image = f.to_vec();
    image.sort();
    image.dedup();
    assert_eq!(image.len(), b.len(), "not surjective");
}

#[test]
fn quotient_maps_are_surjective_homomorphisms() {
    let g = Guards::default();
    for n in 1..=4 {
        let (a, b) = (free_lrb(n, &g).unwrap(), free_lrb_bar(n, &g).unwrap());
        check_homomorphism(&a, &b, &free_to_bar(&a, &b, n).unwrap());
    }
    for (n, q) in [(2, 2), (3, 2), (2, 3)] {
        let (a, b) = (
            q_free_lrb(n, q, false, &g).unwrap(),
            q_free_lrb(n, q, true, &g).unwrap(),
        );
        check_homomorphism(&a, &b, &q_free_to_bar(&a, &b, n, q).unwrap());
    }
}

fn check_isomorphism(a: &Semigroup, b: &Semigroup, key_map: impl Fn(&str) -> String) {
    assert_eq!(a.len(), b.len());
    let f: Vec<ElementId> = a
        .keys()
        .iter()
        .map(|k| b.id_of(&key_map(k)).unwrap())
        .collect();
    check_homomorphism(a, b, &f);
}

#[test]
fn free_matroid_gives_free_lrb() {
    let g = Guards::default();
    for n in 1..=4 {
        let m = Matroid::build(&MatroidSpec::Free { n }).unwrap();
        let s = matroid_lrb(&m, MatroidKind::OrderedBases, &g).unwrap();
        check_isomorphism(&s, &free_lrb(n, &g).unwrap(), |k| k.to_string());
        let t = matroid_lrb(&m, MatroidKind::FlagChains, &g).unwrap();
        assert_eq!(t.len(), free_lrb_bar(n, &g).unwrap().len());
    }
}

#[test]
fn all_vectors_matroid_gives_q_free_lrb() {
    let g = Guards::default();
    for (n, q) in [(2, 2), (3, 2), (2, 3)] {
        let columns = Field::new(q).unwrap().nonzero_vectors(n);
        let m = Matroid::build(&MatroidSpec::Vectors {
            q,
            columns,
            labels: None,
        })
        .unwrap();
        let s = matroid_lrb(&m, MatroidKind::OrderedBases, &g).unwrap();
        check_isomorphism(&s, &q_free_lrb(n, q, false, &g).unwrap(), |k| k.to_string());
    }
}

/// Chain of subsets `{1}<{1,3}<...` in key form to the ordered partition of differences.
fn chain_to_partition(key: &str, n: usize) -> String {
    let sets: Vec<Vec<usize>> = key
        .split('<')
        .map(|s| {
            let inner = &s[1..s.len() - 1];
            inner
                .split(',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().unwrap())
                .collect()
        })
        .collect();
    let mut blocks = Vec::new();
    for w in sets.windows(2) {
        let block: Vec<String> = (1..=n)
            .filter(|i| w[1].contains(i) && !w[0].contains(i))
            .map(|i| i.to_string())
            .collect();
        blocks.push(block.join(","));
    }
    format!("({})", blocks.join("|"))
}

#[test]
fn boolean_chains_are_ordered_partitions() {
    let g = Guards::default();
    for n in 1..=4 {
        let a = dist_chain_lrb(&DistributiveLattice::boolean(n), &g).unwrap();
        let b = ordered_partitions(n, &g).unwrap();
        check_isomorphism(&a, &b, |k| chain_to_partition(k, n));
    }
}

fn forests(edges: &[(usize, usize)], vertices: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for mask in 0u64..1 << edges.len() {
        let mut parent: Vec<usize> = (0..vertices).collect();
        let mut ok = true;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (mut a, mut b) = (u, v);
                while parent[a] != a {
                    a = parent[a];
                }
                while parent[b] != b {
                    b = parent[b];
                }
                if a == b {
                    ok = false;
                    break;
                }
                parent[a] = b;
            }
        }
        if ok {
            out.push(mask);
        }
    }
    out
}

#[test]
fn graphic_chambers_are_ordered_spanning_forests() {
    let g = Guards::default();
    let graphs: Vec<Vec<(usize, usize)>> = vec![
        vec![(0, 1), (1, 2), (0, 2)],
        vec![(0, 1), (1, 2), (2, 3), (0, 3)],
        vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        vec![(0, 1), (2, 3), (3, 4)],
    ];
    for edges in graphs {
        let vertices = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap();
        let f = forests(&edges, vertices);
        let maxsize = f.iter().map(|m| m.count_ones()).max().unwrap();
        let spanning = f.iter().filter(|m| m.count_ones() == maxsize).count();
        let factorial: usize = (1..=maxsize as usize).product();
        let m = Matroid::build(&MatroidSpec::Graph { edges }).unwrap();
        let s = matroid_lrb(&m, MatroidKind::OrderedBases, &g).unwrap();
        let l = derive_support(&s).unwrap();
        assert_eq!(l.chambers().len(), spanning * factorial);
    }
}

#[test]
fn views() {
    let g = Guards::default();
    let s = free_lrb(3, &g).unwrap();
    let l = derive_support(&s).unwrap();
    let c = l.chambers()[0];
    let v = sub_semigroup(&s, &l, ViewKind::AtLeast(c)).unwrap();
    assert_eq!(v.members, vec![c]);
    let x = s.id_of("(1)").unwrap();
    let v = sub_semigroup(&s, &l, ViewKind::AtLeast(x)).unwrap();
    let vl = derive_support(&v.semigroup).unwrap();
    assert_eq!(vl.chambers().len(), 2);
    assert_eq!(vl.len(), 4);
    assert!(v.members.iter().all(|&y| s.key(y).starts_with("(1")));
    let v = sub_semigroup(&s, &l, ViewKind::AtMost(l.bottom())).unwrap();
    assert_eq!(v.members, vec![s.identity()]);
    let v = sub_semigroup(&s, &l, ViewKind::AtMost(l.supp(s.id_of("(1 2)").unwrap()))).unwrap();
    assert_eq!(v.members.len(), 5);
    assert!(sub_semigroup(&s, &l, ViewKind::AtMost(99)).is_err());
}
