use lrb::derangement::{
    derangement_number, derangement_routes, desarrangement_polynomial, flag_vectors,
    inversion_h_vector, lower_derangements, mahajan_profile, q_derangements, stanley_check,
    top_h_matches_moebius, upper_derangements,
};
use lrb::poset::{maximal_chain_count, FinitePoset};
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

fn descents(w: &[usize]) -> usize {
    (1..w.len())
        .filter(|&i| w[i - 1] > w[i])
        .fold(0, |m, i| m | 1 << (i - 1))
}

fn inv(w: &[usize]) -> u32 {
    let mut c = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            c += (w[i] > w[j]) as u32;
        }
    }
    c
}

fn initial_descending_run(w: &[usize]) -> usize {
    if w.is_empty() {
        return 0;
    }
    let mut l = 1;
    while l < w.len() && w[l - 1] > w[l] {
        l += 1;
    }
    l
}

/// Möbius function straight from the order relation.
fn mu(p: &FinitePoset, x: usize, y: usize) -> i128 {
    if x == y {
        return 1;
    }
    if !p.leq(x, y) {
        return 0;
    }
    -(0..p.len())
        .filter(|&z| z != y && p.leq(x, z) && p.leq(z, y))
        .map(|z| mu(p, x, z))
        .sum::<i128>()
}

/// `d(L) = μ(0̂,1̂) + Σ_{X ∈ M} d([0̂,X])` over the coatoms `M`.
fn d_oracle(p: &FinitePoset) -> i128 {
    let (b, t) = (p.bottom(), p.top());
    if b == t {
        return 1;
    }
    let coatoms = (0..p.len()).filter(|&x| {
        x != t
            && p.leq(x, t)
            && (0..p.len()).all(|z| z == x || z == t || !(p.leq(x, z) && p.leq(z, t)))
    });
    let mut d = mu(p, b, t);
    for x in coatoms {
        d += d_oracle(&p.interval(b, x).unwrap().0);
    }
    d
}

fn atom_count(p: &FinitePoset) -> usize {
    p.atoms().len()
}

fn connected(vertices: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; vertices];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn connected_graphs(max_vertices: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut out = Vec::new();
    for v in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
            .collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            if connected(v, &edges) {
                out.push((v, edges));
            }
        }
    }
    out
}

fn corpus() -> Vec<(String, FinitePoset)> {
    let mut v = Vec::new();
    for n in 0..=6 {
        v.push((format!("B{n}"), FinitePoset::boolean(n)));
    }
    for n in 1..=3 {
        for q in [2, 3] {
            v.push((format!("V({n},{q})"), FinitePoset::subspace(n, q).unwrap()));
        }
    }
    for n in 1..=5 {
        v.push((format!("Pi{n}"), FinitePoset::partition_lattice(n)));
    }
    for (k, (vs, es)) in connected_graphs(4).into_iter().enumerate() {
        v.push((
            format!("graph{k}"),
            FinitePoset::contraction_lattice(vs, &es).unwrap(),
        ));
    }
    for (a, b) in [(1, 1), (1, 2), (2, 3), (3, 3)] {
        v.push((
            format!("C{a}xC{b}"),
            FinitePoset::product(&FinitePoset::chain(a), &FinitePoset::chain(b)),
        ));
    }
    v.push((
        "B2xC2".into(),
        FinitePoset::product(&FinitePoset::boolean(2), &FinitePoset::chain(2)),
    ));
    v
}

#[test]
fn three_routes_agree_with_the_coatom_recurrence() {
    for (name, p) in corpus() {
        let r = derangement_routes(&p);
        assert!(r.agree(), "{name}: {r:?}");
        assert_eq!(r.recurrence, d_oracle(&p), "{name}");
        assert!(r.recurrence >= 0, "{name}");
        assert_eq!(r.recurrence == 0, atom_count(&p) == 1, "{name}");
    }
}

#[test]
fn boolean_lattices_give_the_derangement_numbers() {
    let got: Vec<i128> = (0..=5)
        .map(|n| derangement_number(&FinitePoset::boolean(n)).unwrap())
        .collect();
    assert_eq!(got, vec![1, 0, 1, 2, 9, 44]);
}

#[test]
fn subspace_lattices_give_q_derangement_numbers() {
    for n in 0..=3 {
        for q in [2i128, 3] {
            let p = FinitePoset::subspace(n, q as usize).unwrap();
            let wachs: i128 = perms(n)
                .iter()
                .filter(|w| initial_descending_run(w).is_multiple_of(2))
                .map(|w| q.pow(inv(w)))
                .sum();
            assert_eq!(derangement_number(&p).unwrap(), wachs, "n={n} q={q}");
        }
    }
}

#[test]
fn interval_derangements_match_whole_intervals() {
    for (name, p) in corpus().into_iter().filter(|(_, p)| p.len() <= 20) {
        let up = upper_derangements(&p);
        let down = lower_derangements(&p);
        for x in 0..p.len() {
            assert_eq!(
                up[x],
                d_oracle(&p.interval(x, p.top()).unwrap().0),
                "{name} up {x}"
            );
            assert_eq!(
                down[x],
                d_oracle(&p.interval(p.bottom(), x).unwrap().0),
                "{name} down {x}"
            );
        }
    }
}

#[test]
fn q_derangements_are_desarrangement_generating_functions() {
    let d = q_derangements(6);
    for (n, dn) in d.iter().enumerate() {
        let mut coeffs = vec![0i128; n * n / 2 + 1];
        for w in perms(n)
            .iter()
            .filter(|w| initial_descending_run(w).is_multiple_of(2))
        {
            coeffs[inv(w) as usize] += 1;
        }
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let trimmed: &[i128] = if coeffs == [0] { &[] } else { &coeffs };
        assert_eq!(dn.coeffs(), trimmed, "n={n}");
        assert_eq!(&desarrangement_polynomial(n), dn, "n={n}");
    }
}

#[test]
fn boolean_flag_h_vector_counts_descent_classes() {
    for n in 1..=6 {
        let fv = flag_vectors(&FinitePoset::boolean(n)).unwrap();
        let mut beta = vec![0i128; 1 << (n - 1)];
        for w in perms(n) {
            beta[descents(&w)] += 1;
        }
        assert_eq!(fv.h, beta, "n={n}");
        assert!(fv.consistent());
    }
}

#[test]
fn subspace_flag_h_vector_counts_inversions_by_descent_class() {
    for n in 1..=3 {
        for q in [2i128, 3] {
            let fv = flag_vectors(&FinitePoset::subspace(n, q as usize).unwrap()).unwrap();
            let mut expected = vec![0i128; 1 << (n - 1)];
            for w in perms(n) {
                expected[descents(&w)] += q.pow(inv(&w));
            }
            assert_eq!(fv.h, expected, "n={n} q={q}");
            let lib: Vec<i128> = inversion_h_vector(n).iter().map(|p| p.eval(q)).collect();
            assert_eq!(lib, expected);
        }
    }
}

#[test]
fn boolean_three_flags() {
    let fv = flag_vectors(&FinitePoset::boolean(3)).unwrap();
    assert_eq!(fv.f(&[1, 2]), 6);
    assert_eq!(fv.f(&[]), 1);
    assert_eq!(maximal_chain_count(&FinitePoset::boolean(3)).unwrap(), 6);
}

#[test]
fn stanley_sum_over_the_even_first_gap_family() {
    for (name, p) in corpus() {
        let c = stanley_check(&p).unwrap();
        assert!(c.passed(), "{name}: {c:?}");
    }
    let c = stanley_check(&FinitePoset::subspace(3, 2).unwrap()).unwrap();
    assert_eq!((c.d, c.h_sum), (6, 6));
}

#[test]
fn mahajan_profiles_balance() {
    for (name, p) in corpus() {
        let prof = mahajan_profile(&p).unwrap();
        assert!(prof.passed(), "{name}: {prof:?}");
    }
    let prof = mahajan_profile(&FinitePoset::boolean(4)).unwrap();
    assert_eq!(prof.rows[1].d_sum, 8);
    assert_eq!(prof.rows[1].h_sum, 8);
}

#[test]
fn top_flag_h_is_signed_moebius() {
    for (name, p) in corpus() {
        assert!(top_h_matches_moebius(&p).unwrap(), "{name}");
    }
}

#[test]
fn non_graded_posets_are_rejected_by_flag_statistics() {
    let pentagon = FinitePoset::from_covers(
        (0..5).map(|i| i.to_string()).collect(),
        &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)],
    )
    .unwrap();
    assert!(flag_vectors(&pentagon).is_err());
    assert_eq!(derangement_number(&pentagon).unwrap(), d_oracle(&pentagon));
}

/// A random bounded poset: a random order on `k` middle elements that
/// refines the index order, with a bottom and top added.
fn random_poset(k: usize, bits: &[bool]) -> FinitePoset {
    let n = k + 2;
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        rel[i][i] = true;
        rel[0][i] = true;
        rel[i][n - 1] = true;
    }
    let mut b = bits.iter();
    for i in 1..=k {
        for j in i + 1..=k {
            rel[i][j] = *b.next().unwrap_or(&false);
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][m] && rel[m][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    FinitePoset::from_relation((0..n).map(|i| i.to_string()).collect(), |a, b| rel[a][b]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn random_bounded_posets(k in 0usize..7, bits in proptest::collection::vec(any::<bool>(), 21)) {
        let p = random_poset(k, &bits);
        let r = derangement_routes(&p);
        prop_assert!(r.agree());
        prop_assert_eq!(r.recurrence, d_oracle(&p));
        prop_assert!(r.recurrence >= 0);
        prop_assert_eq!(r.recurrence == 0, atom_count(&p) == 1);
        if p.is_graded() {
            prop_assert!(stanley_check(&p).unwrap().passed());
            prop_assert!(top_h_matches_moebius(&p).unwrap());
        }
    }
}
