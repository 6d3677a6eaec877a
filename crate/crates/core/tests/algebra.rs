use lrb::algebra::{
    alg_power, power_formula, primitive_idempotents, tsetlin_nu_family, verify_radical_nilpotent,
    AlgebraElement, DEFAULT_WORD_GUARD,
};
use lrb::constructions::{
    dist_chain_lrb, free_lrb, free_lrb_bar, ordered_partitions, q_free_lrb, DistributiveLattice,
    Guards,
};
use lrb::exact::{int, ratio, Rational};
use lrb::semigroup::{ElementId, Semigroup};
use lrb::spectral::{eigenvalues, generators, transition_matrix, WeightVector};
use lrb::support::derive_support;
use lrb::walks::stationary_exact;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Convolution straight from the multiplication table.
fn convolve(s: &Semigroup, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); s.len()];
    for (x, cx) in a.iter().enumerate() {
        if cx.is_zero() {
            continue;
        }
        for (y, cy) in b.iter().enumerate() {
            if !cy.is_zero() {
                out[s.mul(x, y)] += cx * cy;
            }
        }
    }
    out
}

fn dense_weights(s: &Semigroup, w: &WeightVector) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); s.len()];
    for (x, c) in w.iter() {
        v[x] = c.clone();
    }
    v
}

fn unit(s: &Semigroup) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); s.len()];
    v[s.identity()] = Rational::one();
    v
}

fn check_family(s: &Semigroup, w: &WeightVector) {
    let l = derive_support(s).unwrap();
    let fam = primitive_idempotents(s, &l, w, false, DEFAULT_WORD_GUARD).unwrap();
    let lambdas = eigenvalues(&l, w);
    let wd = dense_weights(s, w);
    let es: Vec<Vec<Rational>> = fam.elements.iter().map(|e| e.dense(s)).collect();
    let mut total = vec![Rational::zero(); s.len()];
    for (i, e) in es.iter().enumerate() {
        for (j, f) in es.iter().enumerate() {
            let ef = convolve(s, e, f);
            if i == j {
                assert_eq!(&ef, e, "{}: e_X not idempotent", s.label());
            } else {
                assert!(ef.iter().all(Zero::is_zero), "{}: e_X e_Y ≠ 0", s.label());
            }
        }
        let lam = &lambdas[fam.flats[i]];
        let we = convolve(s, &wd, e);
        let scaled: Vec<Rational> = e.iter().map(|c| c * lam).collect();
        assert_eq!(we, scaled, "{}: w e_X ≠ λ_X e_X", s.label());
        for (t, c) in total.iter_mut().zip(e) {
            *t += c;
        }
    }
    assert_eq!(total, unit(s), "{}: Σ e_X ≠ 1", s.label());
    assert_eq!(fam.flats.len(), l.len());
}

#[test]
fn idempotents_for_generic_weights() {
    let g = Guards::default();
    let cases = [
        free_lrb(2, &g).unwrap(),
        free_lrb(3, &g).unwrap(),
        ordered_partitions(3, &g).unwrap(),
        free_lrb_bar(4, &g).unwrap(),
        q_free_lrb(2, 2, true, &g).unwrap(),
        dist_chain_lrb(&DistributiveLattice::grid(2, 2), &g).unwrap(),
    ];
    for (k, s) in cases.iter().enumerate() {
        let gens = generators(s).unwrap();
        let w = WeightVector::random(s, &gens, 100 + k as u64).unwrap();
        check_family(s, &w);
    }
}

#[test]
fn idempotents_for_canonical_weights() {
    let g = Guards::default();
    for s in [
        free_lrb(3, &g).unwrap(),
        ordered_partitions(3, &g).unwrap(),
        free_lrb_bar(3, &g).unwrap(),
    ] {
        check_family(&s, &WeightVector::canonical(&s).unwrap());
    }
}

#[test]
fn ungenerated_weights_need_restriction() {
    let g = Guards::default();
    let s = free_lrb(3, &g).unwrap();
    let l = derive_support(&s).unwrap();
    let w = WeightVector::from_keys(&s, [("(1)", ratio(1, 2)), ("(2)", ratio(1, 2))]).unwrap();
    assert!(primitive_idempotents(&s, &l, &w, false, DEFAULT_WORD_GUARD).is_err());
    let fam = primitive_idempotents(&s, &l, &w, true, DEFAULT_WORD_GUARD).unwrap();
    assert!(fam.restricted);
}

#[test]
fn power_formula_matches_repeated_products() {
    let g = Guards::default();
    let cases = [
        free_lrb(3, &g).unwrap(),
        ordered_partitions(3, &g).unwrap(),
        free_lrb_bar(4, &g).unwrap(),
    ];
    for (k, s) in cases.iter().enumerate() {
        let l = derive_support(s).unwrap();
        let gens = generators(s).unwrap();
        let w = WeightVector::random(s, &gens, 7 + k as u64).unwrap();
        let wd = dense_weights(s, &w);
        let mut acc = unit(s);
        for m in 0..=6 {
            let formula = power_formula(s, &l, &w, m, DEFAULT_WORD_GUARD).unwrap();
            assert_eq!(formula.dense(s), acc, "{} m={m}", s.label());
            assert_eq!(alg_power(s, &w.to_algebra(s), m).unwrap().dense(s), acc);
            acc = convolve(s, &acc, &wd);
        }
    }
}

#[test]
fn top_idempotent_is_the_stationary_law() {
    let g = Guards::default();
    for (k, s) in [
        free_lrb(3, &g).unwrap(),
        ordered_partitions(3, &g).unwrap(),
        free_lrb_bar(4, &g).unwrap(),
    ]
    .iter()
    .enumerate()
    {
        let l = derive_support(s).unwrap();
        let gens = generators(s).unwrap();
        let w = WeightVector::random(s, &gens, 40 + k as u64).unwrap();
        let fam = primitive_idempotents(s, &l, &w, false, DEFAULT_WORD_GUARD).unwrap();
        let top = fam.element(l.top()).unwrap().dense(s);
        let p = transition_matrix(s, &l, &w).unwrap();
        let pi = stationary_exact(&p).unwrap();
        for (x, c) in top.iter().enumerate() {
            match p.position(x) {
                Some(i) => assert_eq!(c, &pi[i]),
                None => assert!(c.is_zero()),
            }
        }
    }
}

#[test]
fn free_lrb_idempotents_from_signed_measures() {
    let g = Guards::default();
    let s = free_lrb(3, &g).unwrap();
    let l = derive_support(&s).unwrap();
    let w = WeightVector::from_keys(
        &s,
        [
            ("(1)", ratio(4, 7)),
            ("(2)", ratio(2, 7)),
            ("(3)", ratio(1, 7)),
        ],
    )
    .unwrap();
    let fam = primitive_idempotents(&s, &l, &w, false, DEFAULT_WORD_GUARD).unwrap();
    let nu = tsetlin_nu_family(&s, 3, &w).unwrap();
    for mask in 0u32..8 {
        let items: Vec<String> = (0..3)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (i + 1).to_string())
            .collect();
        let flat = l.flat_of_key(&format!("{{{}}}", items.join(","))).unwrap();
        assert_eq!(
            &nu.reconstruct(&s, mask).unwrap(),
            fam.element(flat).unwrap(),
            "X = {mask:03b}"
        );
    }
}

/// Sum of the elements of `F̄_n` that are images of words of length `l`.
fn sigma_bar(s: &Semigroup, n: usize, l: usize) -> Vec<Rational> {
    let grade = l.min(n - 1) as u32;
    (0..s.len())
        .map(|x| {
            if s.grade(x) == Some(grade) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

#[test]
fn quotient_free_lrb_uniform_idempotents_closed_form() {
    let g = Guards::default();
    for n in 2..=5 {
        let s = free_lrb_bar(n, &g).unwrap();
        let l = derive_support(&s).unwrap();
        let letters: Vec<ElementId> = (0..s.len()).filter(|&x| s.grade(x) == Some(1)).collect();
        let w = WeightVector::uniform(&s, &letters).unwrap();
        let fam = primitive_idempotents(&s, &l, &w, false, DEFAULT_WORD_GUARD).unwrap();
        let sigmas: Vec<Vec<Rational>> = (0..=n).map(|k| sigma_bar(&s, n, k)).collect();
        let factorial = |k: usize| (1..=k as i64).product::<i64>();
        for i in 0..=n {
            let mut e = vec![Rational::zero(); s.len()];
            for (k, sig) in sigmas.iter().enumerate().skip(i) {
                let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                let c = ratio(sign * binomial(k, i), factorial(k));
                for (a, b) in e.iter_mut().zip(sig) {
                    *a += &c * b;
                }
            }
            let lambda = ratio(i as i64, n as i64);
            match fam.groups.iter().find(|gr| gr.lambda == lambda) {
                Some(gr) => assert_eq!(gr.element.dense(&s), e, "n={n} i={i}"),
                None => {
                    assert_eq!(i, n - 1);
                    assert!(e.iter().all(Zero::is_zero));
                }
            }
        }
        assert!(fam
            .groups
            .iter()
            .all(|gr| gr.lambda != ratio(n as i64 - 1, n as i64)));
    }
}

#[test]
fn radical_is_nilpotent() {
    let g = Guards::default();
    let cases = [
        free_lrb(3, &g).unwrap(),
        ordered_partitions(3, &g).unwrap(),
        free_lrb_bar(4, &g).unwrap(),
        q_free_lrb(2, 2, false, &g).unwrap(),
        dist_chain_lrb(&DistributiveLattice::grid(2, 2), &g).unwrap(),
    ];
    for s in &cases {
        let l = derive_support(s).unwrap();
        let cert = verify_radical_nilpotent(s, &l).unwrap();
        assert!(cert.passed(), "{}", s.label());
        assert_eq!(cert.dims[0], s.len() - l.len());
    }
}

#[test]
fn algebra_element_arithmetic() {
    let g = Guards::default();
    let s = free_lrb(2, &g).unwrap();
    let a = AlgebraElement::basis(&s, s.id_of("(1)").unwrap());
    let b = AlgebraElement::basis(&s, s.id_of("(2)").unwrap());
    let sum = a.add(&b).unwrap();
    assert_eq!(sum.total(), int(2));
    assert!(sum.sub(&sum).unwrap().is_zero());
    assert_eq!(sum.scale(&ratio(1, 2)).total(), int(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn random_weights_on_partitions_give_idempotents(seed in 0u64..10_000) {
        let s = ordered_partitions(3, &Guards::default()).unwrap();
        let gens = generators(&s).unwrap();
        let w = WeightVector::random(&s, &gens, seed).unwrap();
        check_family(&s, &w);
    }
}
