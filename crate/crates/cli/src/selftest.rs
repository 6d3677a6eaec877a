//! The acceptance criteria, each a function returning a pass/fail line.

use std::time::{Duration, Instant};

use lrb::algebra::{power_formula, primitive_idempotents, tsetlin_nu_family, DEFAULT_WORD_GUARD};
use lrb::constructions::{
    dist_chain_lrb, free_lrb, free_lrb_bar, matroid_lrb, ordered_partitions, q_free_lrb,
    DistributiveLattice, Guards, Matroid, MatroidKind, MatroidSpec,
};
use lrb::derangement::{
    derangement_number, derangement_routes, flag_vectors, mahajan_profile, q_derangements,
    stanley_check, upper_derangements,
};
use lrb::descent::{
    beta_and_h, descent_walk, phi_check, top_to_random_idempotents, top_to_random_weights,
    CoxeterComplexSn, SymmetricGroup,
};
use lrb::exact::{int, ratio, render, to_f64};
use lrb::poset::FinitePoset;
use lrb::semigroup::{ElementId, Semigroup};
use lrb::spectral::{
    generators, lazy_removed, sorted_chambers, spectrum, transition_matrix, verify_diagonalizable,
    verify_eigenvalues, WeightVector,
};
use lrb::support::{derive_support, SupportStructure};
use lrb::walks::{convergence_report, stationary_exact, DEFAULT_DRAW_CAP};
use lrb::{LrbError, Rational};
use num_traits::{One, Zero};

use crate::error::CliError;
use crate::output::{float, Outcome};
use crate::sampling::sample_parallel;

type Check = Result<String, String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn lift<T>(r: Result<T, LrbError>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let timing = if self.elapsed <= self.budget {
            ""
        } else {
            " (over the time budget)"
        };
        format!(
            "criterion {} {verdict}: {} [{:.2}s of {}s{timing}] {}",
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub budget_secs: u64,
    pub run: fn(usize) -> Check,
}

pub const CRITERIA: [Criterion; 8] = [
    Criterion {
        id: 1,
        name: "diagonalizability certificates",
        budget_secs: 60,
        run: criterion_1,
    },
    Criterion {
        id: 2,
        name: "lattice-path walk regression",
        budget_secs: 1,
        run: criterion_2,
    },
    Criterion {
        id: 3,
        name: "multiplicities are derangement numbers",
        budget_secs: 30,
        run: criterion_3,
    },
    Criterion {
        id: 4,
        name: "primitive idempotents",
        budget_secs: 120,
        run: criterion_4,
    },
    Criterion {
        id: 5,
        name: "convergence bound",
        budget_secs: 120,
        run: criterion_5,
    },
    Criterion {
        id: 6,
        name: "derangement numbers of posets",
        budget_secs: 60,
        run: criterion_6,
    },
    Criterion {
        id: 7,
        name: "descent algebra",
        budget_secs: 120,
        run: criterion_7,
    },
    Criterion {
        id: 8,
        name: "foundations",
        budget_secs: 30,
        run: criterion_8,
    },
];

pub fn run_criterion(c: &Criterion, threads: usize) -> CriterionResult {
    let start = Instant::now();
    let outcome = (c.run)(threads);
    let elapsed = start.elapsed();
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult {
        id: c.id,
        name: c.name,
        passed,
        detail,
        elapsed,
        budget: Duration::from_secs(c.budget_secs),
    }
}

/// Runs the chosen criteria (all when `ids` is empty) and fails with exit
/// status 3 if any of them fails.
pub fn run(ids: &[u8], threads: usize) -> Result<Outcome, CliError> {
    let results: Vec<CriterionResult> = CRITERIA
        .iter()
        .filter(|c| ids.is_empty() || ids.contains(&c.id))
        .map(|c| run_criterion(c, threads))
        .collect();
    let text: String = results.iter().map(|r| r.line() + "\n").collect();
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if failed.is_empty() {
        Ok(Outcome::new(text))
    } else {
        Err(CliError::Falsified {
            message: format!("criteria {failed:?} failed"),
            report: Some(text),
        })
    }
}

fn k4() -> Matroid {
    Matroid::build(&MatroidSpec::Graph {
        edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    })
    .expect("K4 is a graph")
}

fn grid() -> Result<Semigroup, LrbError> {
    dist_chain_lrb(&DistributiveLattice::grid(2, 2), &Guards::default())
}

/// The semigroups whose walks are certified.
pub fn certified_walks() -> Result<Vec<Semigroup>, LrbError> {
    let g = Guards::default();
    let mut v = Vec::new();
    for n in 1..=4 {
        v.push(free_lrb(n, &g)?);
    }
    for n in 2..=5 {
        v.push(free_lrb_bar(n, &g)?);
    }
    for n in 2..=4 {
        v.push(ordered_partitions(n, &g)?);
    }
    v.push(q_free_lrb(2, 2, false, &g)?);
    v.push(q_free_lrb(3, 2, false, &g)?);
    v.push(q_free_lrb(3, 2, true, &g)?);
    v.push(matroid_lrb(&k4(), MatroidKind::OrderedBases, &g)?);
    v.push(matroid_lrb(&k4(), MatroidKind::FlagChains, &g)?);
    v.push(grid()?);
    Ok(v)
}

pub const RANDOM_SEEDS: [u64; 3] = [1, 2, 3];

/// Canonical weights followed by the seeded random ones.
pub fn weight_family(s: &Semigroup) -> Result<Vec<(String, WeightVector)>, LrbError> {
    let gens = generators(s)?;
    let mut v = vec![("canonical".to_string(), WeightVector::canonical(s)?)];
    for seed in RANDOM_SEEDS {
        v.push((
            format!("random seed {seed}"),
            WeightVector::random(s, &gens, seed)?,
        ));
    }
    Ok(v)
}

fn criterion_1(_threads: usize) -> Check {
    let mut walks = 0;
    for s in lift(certified_walks())? {
        let l = lift(derive_support(&s))?;
        for (name, w) in lift(weight_family(&s))? {
            let spec = lift(spectrum(&s, &l, &w))?;
            lift(spec.check_identities(&l))?;
            let p = lift(transition_matrix(&s, &l, &w))?;
            let cert = verify_diagonalizable(&p, &spec);
            if !cert.passed() || cert.total_observed() != p.size() {
                return fail(format!("{} with {name}: {cert:?}", s.label()));
            }
            walks += 1;
        }
    }
    Ok(format!("{walks} walks certified exactly"))
}

/// Whether `b` is `a` after some simultaneous permutation of rows and columns.
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

/// The kids walk on 0/1 words: a kid and an empty place are chosen uniformly
/// and the kid pushes everyone in between toward the place.
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
                let j = states
                    .iter()
                    .position(|x| *x == t)
                    .expect("pushing keeps the count");
                m[i][j] += &prob;
            }
        }
    }
    m
}

fn criterion_2(_threads: usize) -> Check {
    let s = lift(grid())?;
    let l = lift(derive_support(&s))?;
    let w = lift(WeightVector::canonical(&s))?;
    if w.support().len() != 7 || w.iter().any(|(_, c)| *c != ratio(1, 7)) {
        return fail("canonical weights are not 1/7 on seven chains");
    }
    let p = lift(transition_matrix(&s, &l, &w))?;
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
    if !equal_up_to_relabeling(&printed, &p.matrix.to_rows()) {
        return fail("transition matrix differs from the printed one");
    }
    let spec = lift(spectrum(&s, &l, &w))?;
    let expected = vec![
        (int(1), 1),
        (ratio(3, 7), 2),
        (ratio(2, 7), 2),
        (ratio(1, 7), 1),
    ];
    if spec.multiset() != expected || !verify_diagonalizable(&p, &spec).passed() {
        return fail(format!("eigenvalues {:?}", spec.multiset()));
    }
    let alpha = ratio(3, 7);
    let p1 = lift(lazy_removed(&p.matrix, &alpha))?;
    let words: Vec<Vec<u8>> = p
        .chambers
        .iter()
        .map(|&c| {
            let pts: Vec<(u8, u8)> = s
                .key(c)
                .split('<')
                .filter_map(|pt| {
                    let (i, j) = pt.split_once(',')?;
                    Some((i.parse().ok()?, j.parse().ok()?))
                })
                .collect();
            pts.windows(2).map(|w| (w[1].0 > w[0].0) as u8).collect()
        })
        .collect();
    if p1.to_rows() != kids_matrix(&words) {
        return fail("holding-removed walk is not the kids walk");
    }
    let moved: Vec<(Rational, usize)> = spec
        .multiset()
        .into_iter()
        .map(|(lam, m)| ((lam - &alpha) / (Rational::one() - &alpha), m))
        .collect();
    let kids_expected = vec![
        (int(1), 1),
        (int(0), 2),
        (ratio(-1, 4), 2),
        (ratio(-1, 2), 1),
    ];
    if moved != kids_expected || !verify_eigenvalues(&p1, &moved).passed() {
        return fail(format!("kids walk eigenvalues {moved:?}"));
    }
    Ok("matrix, eigenvalues {1, 3/7 x2, 2/7 x2, 1/7} and kids spectrum {1, 0 x2, -1/4 x2, -1/2} exact".into())
}

/// `d_n = n d_{n−1} + (−1)^n`.
fn derangement_oracle(n: usize) -> Vec<i128> {
    let mut d = vec![1i128];
    for k in 1..=n {
        d.push(k as i128 * d[k - 1] + if k % 2 == 0 { 1 } else { -1 });
    }
    d
}

/// `d_n(q) = Σ_i (−1)^i [n]_q! / [i]_q! · q^{i(i−1)/2}` at an integer `q`.
fn q_derangement_oracle(n: usize, q: i128) -> i128 {
    let qint = |k: usize| (0..k).map(|e| q.pow(e as u32)).sum::<i128>();
    let qfact = |k: usize| (1..=k).map(qint).product::<i128>();
    (0..=n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            sign * qfact(n) / qfact(i) * q.pow((i * i.saturating_sub(1) / 2) as u32)
        })
        .sum()
}

fn criterion_3(_threads: usize) -> Check {
    let g = Guards::default();
    let mut checked = 0;
    for n in 1..=5 {
        let s = lift(free_lrb(n, &g))?;
        let l = lift(derive_support(&s))?;
        let spec = lift(spectrum(&s, &l, &lift(WeightVector::canonical(&s))?))?;
        let d = derangement_oracle(n);
        for r in &spec.records {
            let size = l
                .flat_key(r.flat)
                .matches(|c: char| c.is_ascii_digit())
                .count();
            if r.m as i128 != d[n - size] {
                return fail(format!("F_{n}: m at {} is {}", l.flat_key(r.flat), r.m));
            }
            checked += 1;
        }
    }
    for (n, q) in [(2usize, 2usize), (3, 2), (2, 3)] {
        let s = lift(q_free_lrb(n, q, true, &g))?;
        let l = lift(derive_support(&s))?;
        let spec = lift(spectrum(&s, &l, &lift(WeightVector::canonical(&s))?))?;
        for r in &spec.records {
            let key = l.flat_key(r.flat);
            let dim = if key == "<>" {
                0
            } else {
                key.matches(';').count() + 1
            };
            if r.m as i128 != q_derangement_oracle(n - dim, q as i128) {
                return fail(format!("q-free ({n},{q}): m at {key} is {}", r.m));
            }
            checked += 1;
        }
    }
    let u24 = lift(Matroid::build(&MatroidSpec::Uniform { k: 2, m: 4 }))?;
    for (name, m) in [("K4", k4()), ("U24", u24)] {
        let s = lift(matroid_lrb(&m, MatroidKind::FlagChains, &g))?;
        let l = lift(derive_support(&s))?;
        let spec = lift(spectrum(&s, &l, &lift(WeightVector::canonical(&s))?))?;
        let full = FinitePoset::matroid_flats(&m);
        let d = upper_derangements(&full);
        for r in &spec.records {
            let x = full
                .index_of(l.flat_key(r.flat))
                .ok_or("flat missing from the lattice of flats")?;
            if r.m as i128 != d[x] {
                return fail(format!(
                    "{name} flags: m at {} is {}, d is {}",
                    l.flat_key(r.flat),
                    r.m,
                    d[x]
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} multiplicities match"))
}

fn convolve(s: &Semigroup, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); s.len()];
    let bs: Vec<(usize, &Rational)> = b.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    for (x, cx) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for &(y, cy) in &bs {
            out[s.mul(x, y)] += cx * cy;
        }
    }
    out
}

fn criterion_4(_threads: usize) -> Check {
    let mut walks = 0;
    for s in lift(certified_walks())? {
        let l = lift(derive_support(&s))?;
        let w = lift(WeightVector::random(
            &s,
            &lift(generators(&s))?,
            RANDOM_SEEDS[0],
        ))?;
        // orthogonality, completeness and w = Σ λ e are checked on construction
        let fam = lift(primitive_idempotents(&s, &l, &w, false, DEFAULT_WORD_GUARD))?;
        let p = lift(transition_matrix(&s, &l, &w))?;
        let pi = lift(stationary_exact(&p))?;
        let top = fam.element(l.top()).ok_or("no top idempotent")?;
        for (x, c) in top.dense(&s).iter().enumerate() {
            let want = p
                .position(x)
                .map(|i| pi[i].clone())
                .unwrap_or_else(Rational::zero);
            if *c != want {
                return fail(format!(
                    "{}: top idempotent differs from π at {}",
                    s.label(),
                    s.key(x)
                ));
            }
        }
        let mut wd = vec![Rational::zero(); s.len()];
        for (x, c) in w.iter() {
            wd[x] = c.clone();
        }
        let mut acc = vec![Rational::zero(); s.len()];
        acc[s.identity()] = Rational::one();
        for m in 0..=6 {
            if lift(power_formula(&s, &l, &w, m, DEFAULT_WORD_GUARD))?.dense(&s) != acc {
                return fail(format!("{}: power formula wrong at m = {m}", s.label()));
            }
            acc = convolve(&s, &acc, &wd);
        }
        walks += 1;
    }
    let g = Guards::default();
    let s = lift(free_lrb(3, &g))?;
    let l = lift(derive_support(&s))?;
    let w = lift(WeightVector::from_keys(
        &s,
        [
            ("(1)", ratio(4, 7)),
            ("(2)", ratio(2, 7)),
            ("(3)", ratio(1, 7)),
        ],
    ))?;
    let fam = lift(primitive_idempotents(&s, &l, &w, false, DEFAULT_WORD_GUARD))?;
    let nu = lift(tsetlin_nu_family(&s, 3, &w))?;
    for mask in 0u32..8 {
        let items: Vec<String> = (0..3)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (i + 1).to_string())
            .collect();
        let flat = l
            .flat_of_key(&format!("{{{}}}", items.join(",")))
            .ok_or("missing flat")?;
        if Some(&lift(nu.reconstruct(&s, mask))?) != fam.element(flat) {
            return fail(format!("signed measures disagree at X = {mask:03b}"));
        }
    }
    for n in 2..=5 {
        check_quotient_closed_form(n)?;
    }
    Ok(format!(
        "{walks} walks; signed measures on F_3; closed form on the quotients n <= 5"
    ))
}

/// Uniform letter weights on `F̄_n`: the group for `λ = i/n` is
/// `Σ_{l≥i} (−1)^{l−i} C(l,i) σ̄_l / l!`, and nothing sits at `(n−1)/n`.
fn check_quotient_closed_form(n: usize) -> Result<(), String> {
    let s = lift(free_lrb_bar(n, &Guards::default()))?;
    let l = lift(derive_support(&s))?;
    let letters: Vec<ElementId> = (0..s.len()).filter(|&x| s.grade(x) == Some(1)).collect();
    let w = lift(WeightVector::uniform(&s, &letters))?;
    let fam = lift(primitive_idempotents(&s, &l, &w, false, DEFAULT_WORD_GUARD))?;
    let sigma = |k: usize| -> Vec<Rational> {
        let grade = k.min(n - 1) as u32;
        (0..s.len())
            .map(|x| {
                if s.grade(x) == Some(grade) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect()
    };
    let binom =
        |a: usize, b: usize| (0..b).fold(1i64, |acc, i| acc * (a - i) as i64 / (i + 1) as i64);
    let fact = |k: usize| (1..=k as i64).product::<i64>();
    for i in 0..=n {
        let mut e = vec![Rational::zero(); s.len()];
        for k in i..=n {
            let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
            let c = ratio(sign * binom(k, i), fact(k));
            for (a, b) in e.iter_mut().zip(sigma(k)) {
                *a += &c * b;
            }
        }
        let lambda = ratio(i as i64, n as i64);
        match fam.groups.iter().find(|g| g.lambda == lambda) {
            Some(g) if g.element.dense(&s) == e => {}
            Some(_) => return fail(format!("quotient n = {n}: idempotent for {i}/{n} differs")),
            None if i + 1 == n && e.iter().all(Zero::is_zero) => {}
            None => return fail(format!("quotient n = {n}: no idempotent for {i}/{n}")),
        }
    }
    Ok(())
}

pub const TAIL_SAMPLES: u64 = 100_000;

/// `Pr{T > m}` from the law `w^m` of a product of `m` draws.
fn exact_tails(
    s: &Semigroup,
    l: &SupportStructure,
    w: &WeightVector,
    mmax: usize,
) -> Vec<Rational> {
    let mut wd = vec![Rational::zero(); s.len()];
    for (x, c) in w.iter() {
        wd[x] = c.clone();
    }
    let mut acc = vec![Rational::zero(); s.len()];
    acc[s.identity()] = Rational::one();
    let mut out = Vec::with_capacity(mmax + 1);
    for _ in 0..=mmax {
        out.push(
            acc.iter()
                .enumerate()
                .filter(|&(x, _)| l.supp(x) != l.top())
                .map(|(_, c)| c.clone())
                .sum(),
        );
        acc = convolve(s, &acc, &wd);
    }
    out
}

fn criterion_5(threads: usize) -> Check {
    let mut walks = 0;
    let mut excursions = Vec::new();
    let mut comparisons = 0u64;
    for s in lift(certified_walks())? {
        let l = lift(derive_support(&s))?;
        let c0 = sorted_chambers(&s, &l)[0];
        for (k, (name, w)) in lift(weight_family(&s))?.into_iter().enumerate() {
            let report = lift(convergence_report(&s, &l, &w, c0, 30))?;
            let tails = exact_tails(&s, &l, &w, 30);
            for r in &report.rows {
                if r.tv > tails[r.m] || tails[r.m] > r.bound {
                    return fail(format!(
                        "{} with {name}, m = {}: TV <= Pr{{T > m}} <= bound fails",
                        s.label(),
                        r.m
                    ));
                }
            }
            let est = lift(sample_parallel(
                &s,
                &l,
                &w,
                7000 + k as u64,
                TAIL_SAMPLES,
                DEFAULT_DRAW_CAP,
                threads,
            ))?;
            for r in &report.rows {
                let tail = est.tail(r.m);
                let se = (tail * (1.0 - tail) / TAIL_SAMPLES as f64)
                    .sqrt()
                    .max(1.0 / TAIL_SAMPLES as f64);
                let (tv, bound) = (to_f64(&r.tv), to_f64(&r.bound));
                let z = ((tv - tail) / se).max((tail - bound) / se);
                comparisons += 1;
                if z > HARD_Z {
                    return fail(format!(
                        "{} with {name}, m = {}: tail {} is {} standard errors outside",
                        s.label(),
                        r.m,
                        float(tail),
                        float(z)
                    ));
                }
                if z > 3.0 {
                    excursions.push(format!("{} with {name} at m = {}", s.label(), r.m));
                }
            }
            walks += 1;
        }
    }
    let allowed = chance_excursions(comparisons as f64 * THREE_SE_TAIL);
    if excursions.len() > allowed {
        return fail(format!("{} of {comparisons} sampled tails beyond 3 standard errors, at most {allowed} expected: {excursions:?}", excursions.len()));
    }
    Ok(format!(
        "{walks} walks, m <= 30; {} of {comparisons} sampled tails beyond 3 standard errors (chance allows {allowed}){}",
        excursions.len(),
        if excursions.is_empty() { String::new() } else { format!(": {}", excursions.join("; ")) }
    ))
}

/// One-sided normal tail beyond 3.
const THREE_SE_TAIL: f64 = 0.001_349_898;
const HARD_Z: f64 = 5.0;

/// Smallest `c` with `Pr{Poisson(λ) > c} < 0.001`.
fn chance_excursions(lambda: f64) -> usize {
    let mut term = (-lambda).exp();
    let mut cdf = term;
    let mut c = 0;
    while 1.0 - cdf >= 0.001 {
        c += 1;
        term *= lambda / c as f64;
        cdf += term;
    }
    c
}

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

fn descent_mask(w: &[usize]) -> usize {
    (1..w.len())
        .filter(|&i| w[i - 1] > w[i])
        .fold(0, |m, i| m | 1 << (i - 1))
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

/// The lattices on which derangement numbers are checked.
pub fn poset_corpus() -> Result<Vec<(String, FinitePoset)>, LrbError> {
    let mut v = Vec::new();
    for n in 0..=6 {
        v.push((format!("boolean({n})"), FinitePoset::boolean(n)));
    }
    for n in 1..=3 {
        for q in [2, 3] {
            v.push((format!("subspace({n},{q})"), FinitePoset::subspace(n, q)?));
        }
    }
    for n in 1..=5 {
        v.push((
            format!("partitions({n})"),
            FinitePoset::partition_lattice(n),
        ));
    }
    for vertices in 1..=4 {
        let pairs: Vec<(usize, usize)> = (0..vertices)
            .flat_map(|a| (a + 1..vertices).map(move |b| (a, b)))
            .collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            if connected(vertices, &edges) {
                v.push((
                    format!("graph {edges:?}"),
                    FinitePoset::contraction_lattice(vertices, &edges)?,
                ));
            }
        }
    }
    Ok(v)
}

fn criterion_6(_threads: usize) -> Check {
    let corpus = lift(poset_corpus())?;
    for (name, p) in &corpus {
        let r = derangement_routes(p);
        if !r.agree() {
            return fail(format!("{name}: routes disagree {r:?}"));
        }
        let st = lift(stanley_check(p))?;
        if !st.passed() {
            return fail(format!("{name}: Stanley sum {st:?}"));
        }
        let mh = lift(mahajan_profile(p))?;
        if !mh.passed() {
            return fail(format!("{name}: Mahajan rows {mh:?}"));
        }
    }
    let d: Vec<i128> = (0..=5)
        .map(|n| derangement_number(&FinitePoset::boolean(n)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    if d != derangement_oracle(5) || d != [1, 0, 1, 2, 9, 44] {
        return fail(format!("Boolean derangement numbers {d:?}"));
    }
    for n in 1..=6 {
        let fv = lift(flag_vectors(&FinitePoset::boolean(n)))?;
        let mut beta = vec![0i128; 1 << (n - 1)];
        for w in perms(n) {
            beta[descent_mask(&w)] += 1;
        }
        if fv.h != beta {
            return fail(format!("Boolean({n}) h-vector is not the descent count"));
        }
    }
    let dq = q_derangements(5);
    for (n, poly) in dq.iter().enumerate() {
        let mut coeffs = vec![0i128; n * n / 2 + 1];
        for w in perms(n) {
            let run = if w.is_empty() {
                0
            } else {
                1 + w.windows(2).take_while(|p| p[0] > p[1]).count()
            };
            if run % 2 == 0 {
                let inv = (0..n)
                    .map(|i| (i + 1..n).filter(|&j| w[i] > w[j]).count())
                    .sum::<usize>();
                coeffs[inv] += 1;
            }
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if poly.coeffs() != coeffs.as_slice() {
            return fail(format!(
                "q-derangement polynomial {n} is not the desarrangement inversion count"
            ));
        }
    }
    Ok(format!(
        "{} posets; Boolean values 1,0,1,2,9,44; polynomial identity n <= 5",
        corpus.len()
    ))
}

fn criterion_7(_threads: usize) -> Check {
    let g = Guards::default();
    for n in 1..=6 {
        let cx = lift(CoxeterComplexSn::new(n, &g))?;
        let mut beta = vec![0u64; 1 << (n - 1)];
        for w in perms(n) {
            beta[descent_mask(&w)] += 1;
        }
        for (j, row) in beta_and_h(&cx).iter().enumerate() {
            if row.beta != beta[j] || row.h != beta[j] as i64 {
                return fail(format!("n = {n}: beta and h differ at {:?}", row.set));
            }
        }
        let sg = lift(SymmetricGroup::new(n))?;
        if n <= 5 {
            let r = lift(phi_check(&cx, &sg))?;
            if !r.passed(n) {
                return fail(format!("n = {n}: {r:?}"));
            }
        }
        if n >= 2 {
            let t = top_to_random_idempotents(&sg);
            let rep = t.verify(&sg);
            if !rep.passed() || !t.e[n - 1].is_zero() {
                return fail(format!("n = {n}: {rep:?}"));
            }
        }
        if (2..=4).contains(&n) {
            let w = lift(top_to_random_weights(&cx))?;
            let walk = lift(descent_walk(&cx, &sg, &w))?;
            if !walk.passed() {
                return fail(format!("n = {n}: {} walk entries differ", walk.mismatches));
            }
            for i in 0..sg.order() {
                let p = sg.perm(i);
                let moves_one_to_front = (1..=n).any(|k| {
                    let mut q = vec![k];
                    q.extend((1..=n).filter(|&x| x != k));
                    q == p
                });
                let want = if moves_one_to_front {
                    ratio(1, n as i64)
                } else {
                    Rational::zero()
                };
                if *walk.mu.get(i) != want {
                    return fail(format!(
                        "n = {n}: measure at {p:?} is {}",
                        render(walk.mu.get(i))
                    ));
                }
            }
        }
    }
    Ok("beta = h to n = 6, anti-homomorphism to n = 5, E_i to n = 6, walks to n = 4".into())
}

/// `μ` from inverting the zeta matrix in a linear extension.
fn moebius_by_inversion(k: usize, leq: impl Fn(usize, usize) -> bool) -> Vec<Vec<i64>> {
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&x| (0..k).filter(|&y| leq(y, x)).count());
    let z: Vec<Vec<i64>> = order
        .iter()
        .map(|&a| order.iter().map(|&b| leq(a, b) as i64).collect())
        .collect();
    let mut inv = vec![vec![0i64; k]; k];
    for j in 0..k {
        inv[j][j] = 1;
        for i in (0..j).rev() {
            inv[i][j] = -(i + 1..=j).map(|m| z[i][m] * inv[m][j]).sum::<i64>();
        }
    }
    let mut out = vec![vec![0i64; k]; k];
    for (i, &a) in order.iter().enumerate() {
        for (j, &b) in order.iter().enumerate() {
            out[a][b] = inv[i][j];
        }
    }
    out
}

fn criterion_8(_threads: usize) -> Check {
    let g = Guards::default();
    let u24 = lift(Matroid::build(&MatroidSpec::Uniform { k: 2, m: 4 }))?;
    let mut corpus = lift(certified_walks())?;
    corpus.push(lift(q_free_lrb(2, 3, false, &g))?);
    corpus.push(lift(q_free_lrb(2, 3, true, &g))?);
    corpus.push(lift(matroid_lrb(&u24, MatroidKind::OrderedBases, &g))?);
    corpus.push(lift(matroid_lrb(&u24, MatroidKind::FlagChains, &g))?);
    corpus.push(lift(dist_chain_lrb(&DistributiveLattice::boolean(3), &g))?);
    for s in &corpus {
        let report = s.verify_lrb();
        if !report.passed() {
            return fail(format!("{}: {report:?}", s.label()));
        }
        let l = lift(derive_support(s))?;
        lift(l.check_invariants(s)).map_err(|e| format!("{}: {e}", s.label()))?;
        lift(l.check_natural(s)).map_err(|e| format!("{}: {e}", s.label()))?;
        let direct: Vec<ElementId> = (0..s.len())
            .filter(|&x| (0..s.len()).all(|y| s.mul(x, y) == x))
            .collect();
        let mut chambers = l.chambers().to_vec();
        chambers.sort_unstable();
        if direct != chambers {
            return fail(format!(
                "{}: chambers differ from absorbing elements",
                s.label()
            ));
        }
        if l.len() <= 64 {
            let mu = moebius_by_inversion(l.len(), |a, b| l.leq(a, b));
            for a in l.flats() {
                for b in l.flats() {
                    if lift(l.moebius(a, b)).unwrap_or(0) != mu[a][b] {
                        return fail(format!(
                            "{}: Möbius differs at {}, {}",
                            s.label(),
                            l.flat_key(a),
                            l.flat_key(b)
                        ));
                    }
                }
            }
        }
    }
    Ok(format!("{} constructions", corpus.len()))
}
