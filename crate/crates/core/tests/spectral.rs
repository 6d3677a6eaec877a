use lrb::constructions::{
    dist_chain_lrb, free_lrb, free_lrb_bar, matroid_lrb, ordered_partitions, q_free_lrb,
    DistributiveLattice, Guards, Matroid, MatroidKind, MatroidSpec,
};
use lrb::derangement::upper_derangements;
use lrb::exact::{int, ratio, Rational};
use lrb::linalg::Matrix;
use lrb::poset::FinitePoset;
use lrb::semigroup::Semigroup;
use lrb::spectral::{
    generators, lazy_removed, spectrum, transition_matrix, verify_diagonalizable,
    verify_eigenvalues, WeightVector,
};
use lrb::support::derive_support;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// `det(M)` by plain fraction Gaussian elimination.
fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

/// `det(tI − P) = ∏ (t − λ)^m` at enough sample points to pin a polynomial of
/// degree `|C|`.
fn charpoly_oracle(p: &Matrix, spec: &[(Rational, usize)]) -> bool {
    let n = p.rows();
    (0..=n as i64).all(|k| {
        let t = ratio(2 * k + 1, 3);
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            &t - &p[(i, j)]
                        } else {
                            -p[(i, j)].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        let rhs = spec.iter().fold(Rational::one(), |acc, (l, m)| {
            (0..*m).fold(acc, |a, _| a * (&t - l))
        });
        det(rows) == rhs
    })
}

fn certify(s: &Semigroup, w: &WeightVector) {
    let l = derive_support(s).unwrap();
    let spec = spectrum(s, &l, w).unwrap();
    spec.check_identities(&l).unwrap();
    let p = transition_matrix(s, &l, w).unwrap();
    verify_diagonalizable(&p, &spec)
        .into_result()
        .unwrap_or_else(|e| panic!("{}: {e}", s.label()));
    assert!(
        charpoly_oracle(&p.matrix, &spec.multiset()),
        "{}",
        s.label()
    );
}

fn grid() -> Semigroup {
    dist_chain_lrb(&DistributiveLattice::grid(2, 2), &Guards::default()).unwrap()
}

/// Tries all simultaneous row/column permutations.
fn equal_up_to_relabeling(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if (0..n).all(|i| (0..n).all(|j| a[perm[i]][perm[j]] == b[i][j])) {
            return true;
        }
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return false;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

#[test]
fn lattice_path_walk_matrix_and_eigenvalues() {
    let s = grid();
    let l = derive_support(&s).unwrap();
    let w = WeightVector::canonical(&s).unwrap();
    assert_eq!(w.support().len(), 7);
    let p = transition_matrix(&s, &l, &w).unwrap();
    let printed = [
        [3, 1, 1, 1, 0, 1],
        [1, 3, 1, 1, 0, 1],
        [1, 1, 3, 0, 1, 1],
        [1, 1, 0, 3, 1, 1],
        [1, 0, 1, 1, 3, 1],
        [1, 0, 1, 1, 1, 3],
    ];
    let printed: Vec<Vec<Rational>> = printed
        .iter()
        .map(|r| r.iter().map(|&x| ratio(x, 7)).collect())
        .collect();
    assert!(equal_up_to_relabeling(&printed, &p.matrix.to_rows()));
    let spec = spectrum(&s, &l, &w).unwrap();
    let expected = vec![
        (int(1), 1),
        (ratio(3, 7), 2),
        (ratio(2, 7), 2),
        (ratio(1, 7), 1),
    ];
    assert_eq!(spec.multiset(), expected);
    assert!(verify_diagonalizable(&p, &spec).passed());
}

/// Kids walk on 0/1 words with `p` ones: a kid and an empty place are chosen
/// independently and the kid pushes everyone in between toward the place.
fn kids_matrix(states: &[Vec<u8>]) -> Vec<Vec<Rational>> {
    let mut m = vec![vec![Rational::zero(); states.len()]; states.len()];
    for (i, s) in states.iter().enumerate() {
        let kids: Vec<usize> = (0..s.len()).filter(|&k| s[k] == 1).collect();
        let holes: Vec<usize> = (0..s.len()).filter(|&k| s[k] == 0).collect();
        let prob = ratio(1, (kids.len() * holes.len()) as i64);
        for &a in &kids {
            for &b in &holes {
                let (lo, hi) = (a.min(b), a.max(b));
                let count = (lo..=hi).filter(|&k| s[k] == 1).count();
                let mut t = s.clone();
                for k in lo..=hi {
                    t[k] = 0;
                }
                let range: Vec<usize> = if a < b {
                    (hi + 1 - count..=hi).collect()
                } else {
                    (lo..lo + count).collect()
                };
                for k in range {
                    t[k] = 1;
                }
                let j = states.iter().position(|x| *x == t).unwrap();
                m[i][j] += &prob;
            }
        }
    }
    m
}

#[test]
fn kids_walk_is_the_lattice_path_walk_without_holding() {
    let s = grid();
    let l = derive_support(&s).unwrap();
    let w = WeightVector::canonical(&s).unwrap();
    let p = transition_matrix(&s, &l, &w).unwrap();
    let alpha = ratio(3, 7);
    let p1 = lazy_removed(&p.matrix, &alpha).unwrap();
    // right steps are 1s
    let words: Vec<Vec<u8>> = p
        .chambers
        .iter()
        .map(|&c| {
            let pts: Vec<(u8, u8)> = s
                .key(c)
                .split('<')
                .map(|pt| {
                    let (i, j) = pt.split_once(',').unwrap();
                    (i.parse().unwrap(), j.parse().unwrap())
                })
                .collect();
            pts.windows(2).map(|w| (w[1].0 > w[0].0) as u8).collect()
        })
        .collect();
    assert_eq!(p1.to_rows(), kids_matrix(&words));
    let spec = spectrum(&s, &l, &w).unwrap();
    let moved: Vec<(Rational, usize)> = spec
        .multiset()
        .into_iter()
        .map(|(lam, m)| ((lam - &alpha) / (Rational::one() - &alpha), m))
        .collect();
    assert_eq!(
        moved,
        vec![
            (int(1), 1),
            (int(0), 2),
            (ratio(-1, 4), 2),
            (ratio(-1, 2), 1)
        ]
    );
    assert!(verify_eigenvalues(&p1, &moved).passed());
}

/// `d_n = n d_{n−1} + (−1)^n`.
fn derangement_oracle(n: usize) -> Vec<i128> {
    let mut d = vec![1i128];
    for k in 1..=n {
        d.push(k as i128 * d[k - 1] + if k % 2 == 0 { 1 } else { -1 });
    }
    d
}

/// `d_n(q) = Σ_i (−1)^i [n choose i]_q [n−i]_q! q^{i(i−1)/2}` at an integer `q`.
fn q_derangement_oracle(n: usize, q: i128) -> i128 {
    let qint = |k: usize| (0..k).map(|e| q.pow(e as u32)).sum::<i128>();
    let qfact = |k: usize| (1..=k).map(qint).product::<i128>();
    (0..=n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            sign * qfact(n) / (qfact(i) * qfact(n - i))
                * qfact(n - i)
                * q.pow((i * i.saturating_sub(1) / 2) as u32)
        })
        .sum()
}

#[test]
fn tsetlin_multiplicities_are_derangement_numbers() {
    let g = Guards::default();
    for n in 1..=5 {
        let s = free_lrb(n, &g).unwrap();
        let l = derive_support(&s).unwrap();
        let spec = spectrum(&s, &l, &WeightVector::canonical(&s).unwrap()).unwrap();
        let d = derangement_oracle(n);
        for r in &spec.records {
            let size = l
                .flat_key(r.flat)
                .matches(|c: char| c.is_ascii_digit())
                .count();
            assert_eq!(r.m as i128, d[n - size], "n={n} X={}", l.flat_key(r.flat));
        }
    }
}

#[test]
fn q_tsetlin_multiplicities_are_q_derangement_numbers() {
    let g = Guards::default();
    for (n, q) in [(2usize, 2usize), (3, 2), (2, 3)] {
        let s = q_free_lrb(n, q, true, &g).unwrap();
        let l = derive_support(&s).unwrap();
        let spec = spectrum(&s, &l, &WeightVector::canonical(&s).unwrap()).unwrap();
        for r in &spec.records {
            let key = l.flat_key(r.flat);
            let dim = if key == "<>" {
                0
            } else {
                key.matches(';').count() + 1
            };
            assert_eq!(
                r.m as i128,
                q_derangement_oracle(n - dim, q as i128),
                "n={n} q={q} X={key}"
            );
        }
    }
}

#[test]
fn flag_walk_multiplicities_are_interval_derangements() {
    let g = Guards::default();
    let k4 = Matroid::build(&MatroidSpec::Graph {
        edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    })
    .unwrap();
    let u24 = Matroid::build(&MatroidSpec::Uniform { k: 2, m: 4 }).unwrap();
    for m in [k4, u24] {
        let s = matroid_lrb(&m, MatroidKind::FlagChains, &g).unwrap();
        let l = derive_support(&s).unwrap();
        let spec = spectrum(&s, &l, &WeightVector::canonical(&s).unwrap()).unwrap();
        // intervals are taken in the full lattice of flats
        let full = FinitePoset::matroid_flats(&m);
        let d = upper_derangements(&full);
        for r in &spec.records {
            let x = full.index_of(l.flat_key(r.flat)).unwrap();
            assert_eq!(r.m as i128, d[x], "X={}", l.flat_key(r.flat));
        }
    }
}

#[test]
fn certificates_across_constructions() {
    let g = Guards::default();
    let k4 = Matroid::build(&MatroidSpec::Graph {
        edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    })
    .unwrap();
    let corpus = vec![
        free_lrb(3, &g).unwrap(),
        free_lrb_bar(4, &g).unwrap(),
        ordered_partitions(3, &g).unwrap(),
        q_free_lrb(2, 2, false, &g).unwrap(),
        q_free_lrb(3, 2, true, &g).unwrap(),
        matroid_lrb(&k4, MatroidKind::FlagChains, &g).unwrap(),
        grid(),
    ];
    for s in &corpus {
        certify(s, &WeightVector::canonical(s).unwrap());
        certify(
            s,
            &WeightVector::random(s, &generators(s).unwrap(), 11).unwrap(),
        );
    }
}

#[test]
fn weights_on_the_identity_only() {
    let s = free_lrb(3, &Guards::default()).unwrap();
    let w = WeightVector::uniform(&s, &[s.identity()]).unwrap();
    let l = derive_support(&s).unwrap();
    let spec = spectrum(&s, &l, &w).unwrap();
    assert_eq!(spec.multiset(), vec![(int(1), 6)]);
    certify(&s, &w);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_weights_on_f3_certify(raw in proptest::collection::vec(0u32..12, 16)) {
        let s = free_lrb(3, &Guards::default()).unwrap();
        prop_assume!(raw.iter().any(|&r| r > 0));
        let total: u32 = raw.iter().sum();
        let w = WeightVector::new(&s, raw.iter().enumerate().map(|(x, &r)| (x, ratio(r as i64, total as i64)))).unwrap();
        let l = derive_support(&s).unwrap();
        let spec = spectrum(&s, &l, &w).unwrap();
        prop_assert!(spec.check_identities(&l).is_ok());
        let p = transition_matrix(&s, &l, &w).unwrap();
        prop_assert!(verify_diagonalizable(&p, &spec).passed());
        let rows_sum_to_one = (0..p.size()).all(|i| p.matrix.row(i).iter().sum::<Rational>() == Rational::one());
        prop_assert!(rows_sum_to_one);
    }
}
