use lrb::constructions::Guards;
use lrb::descent::{
    beta_and_h, descent_pair, descent_walk, phi, phi_check, top_to_random_idempotents,
    top_to_random_weights, CoxeterComplexSn, GroupAlgebraElement, InvariantElement, SymmetricGroup,
};
use lrb::exact::{ratio, Rational};
use lrb::semigroup::ElementId;
use lrb::spectral::WeightVector;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in perms(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n);
            out.push(q);
        }
    }
    out
}

fn des(w: &[usize]) -> Vec<usize> {
    (1..w.len()).filter(|&i| w[i - 1] > w[i]).collect()
}

fn des_mask(w: &[usize]) -> usize {
    des(w).iter().fold(0, |m, i| m | 1 << (i - 1))
}

fn compose(u: &[usize], v: &[usize]) -> Vec<usize> {
    v.iter().map(|&i| u[i - 1]).collect()
}

fn inverse(w: &[usize]) -> Vec<usize> {
    let mut out = vec![0; w.len()];
    for (i, &x) in w.iter().enumerate() {
        out[x - 1] = i + 1;
    }
    out
}

fn complex(n: usize) -> CoxeterComplexSn {
    CoxeterComplexSn::new(n, &Guards::default()).unwrap()
}

/// The unique minimal face `F ≤ C′` with `FC = C′`, by brute force over the
/// face order `F ≤ G ⇔ FG = G`.
fn minimal_face(cx: &CoxeterComplexSn, c: ElementId, c2: ElementId) -> ElementId {
    let s = cx.semigroup();
    let faces: Vec<ElementId> = (0..s.len())
        .filter(|&f| s.mul(f, c2) == c2 && s.mul(f, c) == c2)
        .collect();
    let minimal: Vec<ElementId> = faces
        .iter()
        .copied()
        .filter(|&f| faces.iter().all(|&g| g == f || s.mul(g, f) != f))
        .collect();
    assert_eq!(minimal.len(), 1);
    minimal[0]
}

/// Partial sums of block sizes, excluding `n`.
fn type_of(cx: &CoxeterComplexSn, x: ElementId) -> Vec<usize> {
    let b = cx.blocks(x);
    let mut acc = 0;
    b[..b.len() - 1]
        .iter()
        .map(|blk| {
            acc += blk.count_ones() as usize;
            acc
        })
        .collect()
}

#[test]
fn descent_pairs_by_brute_force() {
    let cx = complex(3);
    for u in perms(3) {
        for v in perms(3) {
            let (cu, cv) = (cx.chamber(&u).unwrap(), cx.chamber(&v).unwrap());
            let got = descent_pair(&cx, cu, cv).unwrap();
            assert_eq!(got, type_of(&cx, minimal_face(&cx, cu, cv)));
            assert_eq!(got, des(&compose(&inverse(&u), &v)), "u={u:?} v={v:?}");
        }
    }
}

/// Gallery distances from `c`, where chambers sharing a panel are adjacent.
fn gallery_distances(cx: &CoxeterComplexSn, chambers: &[ElementId], c: ElementId) -> Vec<usize> {
    let n = cx.n();
    let full = (1usize << (n - 1)) - 1;
    let mut dist = vec![usize::MAX; chambers.len()];
    let start = chambers.iter().position(|&x| x == c).unwrap();
    dist[start] = 0;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        for i in 0..n - 1 {
            let panel = cx.face_of_type(chambers[a], full & !(1 << i));
            for (b, &cb) in chambers.iter().enumerate() {
                if dist[b] == usize::MAX && cx.face_of_type(cb, full & !(1 << i)) == panel {
                    dist[b] = dist[a] + 1;
                    queue.push_back(b);
                }
            }
        }
    }
    dist
}

#[test]
fn descent_pairs_by_gallery_distance() {
    for n in 2..=4 {
        let cx = complex(n);
        let full = (1usize << (n - 1)) - 1;
        let chambers: Vec<ElementId> = perms(n).iter().map(|w| cx.chamber(w).unwrap()).collect();
        for &c in &chambers {
            let dist = gallery_distances(&cx, &chambers, c);
            for (b, &c2) in chambers.iter().enumerate() {
                let expected: Vec<usize> = (1..n)
                    .filter(|&i| {
                        let panel = cx.face_of_type(c2, full & !(1 << (i - 1)));
                        chambers.iter().enumerate().any(|(k, &other)| {
                            other != c2
                                && cx.face_of_type(other, full & !(1 << (i - 1))) == panel
                                && dist[k] < dist[b]
                        })
                    })
                    .collect();
                assert_eq!(descent_pair(&cx, c, c2).unwrap(), expected, "n={n}");
            }
        }
    }
}

#[test]
fn descent_pair_from_the_fundamental_chamber() {
    for n in 1..=5 {
        let cx = complex(n);
        for w in perms(n) {
            assert_eq!(
                descent_pair(&cx, cx.fundamental(), cx.chamber(&w).unwrap()).unwrap(),
                des(&w)
            );
        }
    }
    let cx = complex(4);
    assert_eq!(
        descent_pair(&cx, cx.fundamental(), cx.chamber(&[2, 4, 3, 1]).unwrap()).unwrap(),
        vec![2, 3]
    );
}

#[test]
fn descent_counts_are_the_h_vector() {
    for n in 1..=6 {
        let cx = complex(n);
        let mut beta = vec![0u64; 1 << (n - 1)];
        for w in perms(n) {
            beta[des_mask(&w)] += 1;
        }
        for (j, row) in beta_and_h(&cx).iter().enumerate() {
            assert_eq!(row.beta, beta[j], "n={n}");
            assert_eq!(row.h, beta[j] as i64, "n={n}");
        }
    }
}

#[test]
fn sigma_and_tau_map_to_descent_class_sums() {
    for n in 1..=5 {
        let cx = complex(n);
        let g = SymmetricGroup::new(n).unwrap();
        for j in 0..1usize << (n - 1) {
            let u = phi(&cx, &g, &InvariantElement::sigma(n, j)).unwrap();
            let z = phi(&cx, &g, &InvariantElement::tau(n, j)).unwrap();
            for i in 0..g.order() {
                let d = des_mask(g.perm(i));
                assert_eq!(
                    u.get(i),
                    &Rational::from_integer(((d & !j == 0) as i64).into()),
                    "n={n} J={j:b}"
                );
                assert_eq!(
                    z.get(i),
                    &Rational::from_integer(((d == j) as i64).into()),
                    "n={n} J={j:b}"
                );
            }
        }
    }
}

#[test]
fn phi_reports_pass() {
    for n in 1..=5 {
        let cx = complex(n);
        let g = SymmetricGroup::new(n).unwrap();
        let r = phi_check(&cx, &g).unwrap();
        assert!(r.passed(n), "n={n}: {r:?}");
        assert_eq!(r.pairs, 1 << (2 * (n - 1)));
    }
}

#[test]
fn top_to_random_walk_matches_its_group_measure() {
    for n in 2..=4 {
        let cx = complex(n);
        let g = SymmetricGroup::new(n).unwrap();
        let w = top_to_random_weights(&cx).unwrap();
        let walk = descent_walk(&cx, &g, &w).unwrap();
        assert!(walk.passed());
        let mut expected = GroupAlgebraElement::zero(&g);
        for i in 1..=n {
            let mut p = vec![i];
            p.extend((1..=n).filter(|&k| k != i));
            expected.add_term(g.index_of(&p).unwrap(), &ratio(1, n as i64));
        }
        assert_eq!(walk.mu, expected, "n={n}");
    }
}

#[test]
fn identity_face_gives_the_point_mass() {
    let cx = complex(3);
    let g = SymmetricGroup::new(3).unwrap();
    let s = cx.semigroup();
    let w = WeightVector::uniform(s, &[s.identity()]).unwrap();
    let walk = descent_walk(&cx, &g, &w).unwrap();
    assert!(walk.passed());
    assert_eq!(walk.mu, GroupAlgebraElement::identity(&g));
}

#[test]
fn non_invariant_weights_are_rejected() {
    let cx = complex(3);
    let g = SymmetricGroup::new(3).unwrap();
    let s = cx.semigroup();
    let v = cx.elements_of_type(1);
    let w = WeightVector::uniform(s, &v[..1]).unwrap();
    assert!(descent_walk(&cx, &g, &w).is_err());
}

#[test]
fn top_to_random_idempotents_decompose() {
    for n in 2..=6 {
        let g = SymmetricGroup::new(n).unwrap();
        let t = top_to_random_idempotents(&g);
        assert!(t.verify(&g).passed(), "n={n}");
        assert!(t.e[n - 1].is_zero(), "n={n}");
        let trace: Rational =
            t.e.iter()
                .filter(|e| !e.is_zero())
                .map(|e| e.get(0).clone())
                .sum();
        assert_eq!(trace, Rational::one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn invariant_weights_give_left_invariant_walks(raw in proptest::collection::vec(0u32..5, 8)) {
        let n = 4;
        let cx = complex(n);
        let g = SymmetricGroup::new(n).unwrap();
        let s = cx.semigroup();
        let mut entries = Vec::new();
        for (j, &r) in raw.iter().enumerate() {
            for x in cx.elements_of_type(j) {
                entries.push((x, Rational::from_integer(r.into())));
            }
        }
        let total: Rational = entries.iter().map(|e| e.1.clone()).sum();
        prop_assume!(!total.is_zero());
        let w = WeightVector::new(s, entries.into_iter().map(|(x, c)| (x, c / &total))).unwrap();
        let walk = descent_walk(&cx, &g, &w).unwrap();
        prop_assert!(walk.passed());
        let mass: Rational = walk.mu.coeffs().iter().sum();
        prop_assert_eq!(mass, Rational::one());
    }
}
