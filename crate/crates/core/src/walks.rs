//! Simulation and exact analysis of chamber walks.
//!
//! Two products appear side by side. The walk itself multiplies on the left:
//! a step from `c` goes to `x·c`. The stationary law is the law of the
//! infinite product `x_1 x_2 x_3 ⋯`, built by multiplying new draws on the
//! right until the product is a chamber.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::exact::{pow, to_f64, Rational};
use crate::linalg::{null_space, Matrix};
use crate::semigroup::{ElementId, Semigroup};
use crate::spectral::{
    eigenvalues, sorted_chambers, transition_matrix, TransitionMatrix, WeightVector,
};
use crate::support::SupportStructure;
use crate::LrbError;

/// Draws elements with probability proportional to their weight, by
/// inversion of the cumulative weights in element order.
#[derive(Debug, Clone)]
pub struct Sampler {
    elements: Vec<ElementId>,
    cumulative: Vec<f64>,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(w: &WeightVector, seed: u64) -> Result<Self, LrbError> {
        if !w.is_probability() {
            return Err(LrbError::Precondition(
                "sampling needs probability weights".into(),
            ));
        }
        let mut acc = 0.0;
        let (elements, cumulative) = w
            .iter()
            .map(|(x, c)| {
                acc += to_f64(c);
                (x, acc)
            })
            .unzip();
        Ok(Self {
            elements,
            cumulative,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn draw(&mut self) -> ElementId {
        let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let target = u * self.cumulative.last().copied().unwrap_or(1.0);
        let i = self.cumulative.partition_point(|&c| c <= target);
        self.elements[i.min(self.elements.len() - 1)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub index: usize,
    pub element: ElementId,
    pub chamber: ElementId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTrajectory {
    pub start: ElementId,
    pub seed: u64,
    pub steps: Vec<Step>,
    /// First `m` with `x_m ⋯ x_1` a chamber, using the same draws.
    pub hitting_time: Option<usize>,
}

pub fn simulate(
    s: &Semigroup,
    l: &SupportStructure,
    w: &WeightVector,
    c0: ElementId,
    steps: usize,
    seed: u64,
) -> Result<WalkTrajectory, LrbError> {
    w.check_owner(s)?;
    s.check_id(c0)?;
    if l.supp(c0) != l.top() {
        return Err(LrbError::Domain(format!("{} is not a chamber", s.key(c0))));
    }
    let mut sampler = Sampler::new(w, seed)?;
    let mut chamber = c0;
    let mut left_product = s.identity();
    let mut hitting_time = (l.supp(left_product) == l.top()).then_some(0);
    let mut out = Vec::with_capacity(steps);
    for index in 1..=steps {
        let x = sampler.draw();
        chamber = s.mul(x, chamber);
        left_product = s.mul(x, left_product);
        if hitting_time.is_none() && l.supp(left_product) == l.top() {
            hitting_time = Some(index);
        }
        out.push(Step {
            index,
            element: x,
            chamber,
        });
    }
    Ok(WalkTrajectory {
        start: c0,
        seed,
        steps: out,
        hitting_time,
    })
}

/// Empirical stationary law from right-accumulated products.
#[derive(Debug, Clone, PartialEq)]
pub struct StationarySample {
    /// Chambers sorted by key.
    pub chambers: Vec<ElementId>,
    pub counts: Vec<u64>,
    /// `stopping[m]` = number of samples that became a chamber after `m` draws.
    pub stopping: Vec<u64>,
    pub samples: u64,
}

impl StationarySample {
    pub fn probabilities(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.samples as f64)
            .collect()
    }

    /// Empirical `Pr{T > m}`.
    pub fn tail(&self, m: usize) -> f64 {
        let above: u64 = self.stopping.iter().skip(m + 1).sum();
        above as f64 / self.samples as f64
    }
}

/// Default number of draws after which a sample that has not reached a
/// chamber is declared stuck.
pub const DEFAULT_DRAW_CAP: usize = 100_000;

pub fn sample_stationary(
    s: &Semigroup,
    l: &SupportStructure,
    w: &WeightVector,
    seed: u64,
    samples: u64,
    draw_cap: usize,
) -> Result<StationarySample, LrbError> {
    w.check_owner(s)?;
    let chambers = sorted_chambers(s, l);
    let mut slot = vec![usize::MAX; s.len()];
    for (i, &c) in chambers.iter().enumerate() {
        slot[c] = i;
    }
    let mut sampler = Sampler::new(w, seed)?;
    let mut counts = vec![0u64; chambers.len()];
    let mut stopping = Vec::new();
    for _ in 0..samples {
        let mut p = s.identity();
        let mut draws = 0usize;
        while l.supp(p) != l.top() {
            if draws == draw_cap {
                return Err(LrbError::Precondition(format!(
                    "no chamber reached after {draw_cap} draws; the weighted elements do not generate"
                )));
            }
            p = s.mul(p, sampler.draw());
            draws += 1;
        }
        counts[slot[p]] += 1;
        if stopping.len() <= draws {
            stopping.resize(draws + 1, 0);
        }
        stopping[draws] += 1;
    }
    Ok(StationarySample {
        chambers,
        counts,
        stopping,
        samples,
    })
}

/// Row `c0` of `P^m`.
pub fn exact_power_distribution(
    p: &TransitionMatrix,
    c0: ElementId,
    m: usize,
) -> Result<Vec<Rational>, LrbError> {
    let i = p
        .position(c0)
        .ok_or_else(|| LrbError::Domain("start is not a chamber of this matrix".into()))?;
    let mut row = vec![Rational::zero(); p.size()];
    row[i] = Rational::one();
    for _ in 0..m {
        row = p.matrix.left_apply(&row);
    }
    Ok(row)
}

/// The unique `π` with `πP = π` and `Σπ = 1`.
pub fn stationary_exact(p: &TransitionMatrix) -> Result<Vec<Rational>, LrbError> {
    let a = p.matrix.minus_scalar(&Rational::one()).transpose();
    let ns = null_space(&a);
    if ns.len() != 1 {
        return Err(LrbError::Precondition(format!(
            "stationary distributions form a space of dimension {}",
            ns.len()
        )));
    }
    let v = ns.into_iter().next().unwrap();
    let total: Rational = v.iter().sum();
    if total.is_zero() {
        return Err(LrbError::Precondition(
            "stationary vector sums to zero".into(),
        ));
    }
    Ok(v.into_iter().map(|x| x / &total).collect())
}

/// `(1/2) Σ |a − b|`.
pub fn total_variation(a: &[Rational], b: &[Rational]) -> Rational {
    let s: Rational = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    s / Rational::from_integer(2.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub m: usize,
    pub tv: Rational,
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub start: ElementId,
    pub stationary: Vec<Rational>,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.tv <= r.bound)
    }
}

/// `Σ_H λ_H^m` over the coatoms `H` of the support lattice.
pub fn coatom_bound(l: &SupportStructure, w: &WeightVector, m: usize) -> Rational {
    let lambdas = eigenvalues(l, w);
    l.coatoms().iter().map(|&h| pow(&lambdas[h], m)).sum()
}

/// Exact total variation from `π` after `m` steps against the coatom bound,
/// for `m = 0..=m_max`.
pub fn convergence_report(
    s: &Semigroup,
    l: &SupportStructure,
    w: &WeightVector,
    c0: ElementId,
    m_max: usize,
) -> Result<ConvergenceReport, LrbError> {
    if !w.is_probability() {
        return Err(LrbError::Precondition(
            "convergence bounds need probability weights".into(),
        ));
    }
    let p = transition_matrix(s, l, w)?;
    let pi = stationary_exact(&p)?;
    let i = p
        .position(c0)
        .ok_or_else(|| LrbError::Domain(format!("{} is not a chamber", s.key(c0))))?;
    let lambdas = eigenvalues(l, w);
    let coatoms = l.coatoms();
    let mut row = vec![Rational::zero(); p.size()];
    row[i] = Rational::one();
    let mut powers: Vec<Rational> = coatoms.iter().map(|_| Rational::one()).collect();
    let mut rows = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        if m > 0 {
            row = p.matrix.left_apply(&row);
            for (pw, &h) in powers.iter_mut().zip(&coatoms) {
                *pw *= &lambdas[h];
            }
        }
        rows.push(ConvergenceRow {
            m,
            tv: total_variation(&row, &pi),
            bound: powers.iter().sum(),
        });
    }
    Ok(ConvergenceReport {
        start: c0,
        stationary: pi,
        rows,
    })
}

/// `P^m` as a matrix, for callers that need every starting chamber.
pub fn matrix_power(p: &Matrix, m: usize) -> Matrix {
    let mut acc = Matrix::identity(p.rows());
    for _ in 0..m {
        acc = acc.mul(p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{free_lrb, Guards};
    use crate::exact::ratio;
    use crate::support::derive_support;

    #[test]
    fn identity_weight_is_constant_and_not_unique() {
        let s = free_lrb(3, &Guards::default()).unwrap();
        let l = derive_support(&s).unwrap();
        let w = WeightVector::uniform(&s, &[s.identity()]).unwrap();
        let c0 = l.chambers()[0];
        let t = simulate(&s, &l, &w, c0, 20, 1).unwrap();
        assert!(t.steps.iter().all(|st| st.chamber == c0));
        assert_eq!(t.hitting_time, None);
        let p = transition_matrix(&s, &l, &w).unwrap();
        assert!(stationary_exact(&p).is_err());
        assert!(sample_stationary(&s, &l, &w, 1, 1, 50).is_err());
    }

    #[test]
    fn two_letter_weighted_tsetlin() {
        let s = free_lrb(2, &Guards::default()).unwrap();
        let l = derive_support(&s).unwrap();
        let w = WeightVector::from_keys(&s, [("(1)", ratio(2, 3)), ("(2)", ratio(1, 3))]).unwrap();
        let p = transition_matrix(&s, &l, &w).unwrap();
        let pi = stationary_exact(&p).unwrap();
        assert_eq!(pi, vec![ratio(2, 3), ratio(1, 3)]);
    }

    #[test]
    fn power_zero_and_one() {
        let s = free_lrb(3, &Guards::default()).unwrap();
        let l = derive_support(&s).unwrap();
        let w = WeightVector::canonical(&s).unwrap();
        let p = transition_matrix(&s, &l, &w).unwrap();
        let c0 = p.chambers[2];
        let r0 = exact_power_distribution(&p, c0, 0).unwrap();
        assert_eq!(r0.iter().filter(|x| x.is_one()).count(), 1);
        assert_eq!(
            exact_power_distribution(&p, c0, 1).unwrap(),
            p.matrix.row(2).to_vec()
        );
    }

    #[test]
    fn same_seed_same_trajectory() {
        let s = free_lrb(3, &Guards::default()).unwrap();
        let l = derive_support(&s).unwrap();
        let w = WeightVector::canonical(&s).unwrap();
        let c0 = l.chambers()[0];
        assert_eq!(
            simulate(&s, &l, &w, c0, 100, 7).unwrap(),
            simulate(&s, &l, &w, c0, 100, 7).unwrap()
        );
        assert!(simulate(&s, &l, &w, s.identity(), 1, 7).is_err());
    }
}
