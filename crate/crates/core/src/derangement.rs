//! Generalized derangement numbers of posets with `0̂` and `1̂`, flag vectors,
//! and the q-analogues for subspace lattices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::descent::{descent_mask, permutations};
use crate::poset::FinitePoset;
use crate::LrbError;

/// `d(L)` by the three independent routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerangementRoutes {
    /// `d(L) = f(L) − Σ_{X>0̂} d([X,1̂])`.
    pub recurrence: i128,
    /// `Σ_X μ(0̂,X) f([X,1̂])`.
    pub moebius: i128,
    /// `Σ_{X<1̂} (c(X) − 1) d([0̂,X])`.
    pub covers: i128,
}

impl DerangementRoutes {
    pub fn agree(&self) -> bool {
        self.recurrence == self.moebius && self.moebius == self.covers
    }
}

/// `d([X,1̂])` for every `X`.
pub fn upper_derangements(p: &FinitePoset) -> Vec<i128> {
    let f = p.upper_chain_counts();
    let mut d = vec![0i128; p.len()];
    for x in p.linear_extension().into_iter().rev() {
        let above: i128 = (0..p.len())
            .filter(|&y| y != x && p.leq(x, y))
            .map(|y| d[y])
            .sum();
        d[x] = f[x] - above;
    }
    d
}

/// `d([0̂,X])` for every `X`, by the cover-count recurrence.
pub fn lower_derangements(p: &FinitePoset) -> Vec<i128> {
    let mut d = vec![0i128; p.len()];
    for x in p.linear_extension() {
        if x == p.bottom() {
            d[x] = 1;
            continue;
        }
        d[x] = (0..p.len())
            .filter(|&y| y != x && p.leq(y, x))
            .map(|y| {
                let c = p.upper_covers(y).iter().filter(|&&z| p.leq(z, x)).count() as i128;
                (c - 1) * d[y]
            })
            .sum();
    }
    d
}

pub fn derangement_routes(p: &FinitePoset) -> DerangementRoutes {
    let f = p.upper_chain_counts();
    let mu = p.moebius();
    let (b, n) = (p.bottom(), p.len());
    DerangementRoutes {
        recurrence: upper_derangements(p)[b],
        moebius: (0..n).map(|x| mu[b * n + x] as i128 * f[x]).sum(),
        covers: lower_derangements(p)[p.top()],
    }
}

/// `d(L)`, refusing to answer if the three routes disagree.
pub fn derangement_number(p: &FinitePoset) -> Result<i128, LrbError> {
    let r = derangement_routes(p);
    if !r.agree() {
        return Err(LrbError::Falsified(format!(
            "derangement routes disagree: recurrence {}, Möbius {}, covers {}",
            r.recurrence, r.moebius, r.covers
        )));
    }
    Ok(r.recurrence)
}

/// Flag f- and h-vectors of a graded poset of rank `n`, indexed by bitmask:
/// bit `i − 1` stands for rank `i ∈ [n−1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagVectors {
    pub rank: usize,
    pub f: Vec<i128>,
    pub h: Vec<i128>,
}

impl FlagVectors {
    pub fn f(&self, j: &[usize]) -> i128 {
        self.f[mask_of(j)]
    }

    pub fn h(&self, j: &[usize]) -> i128 {
        self.h[mask_of(j)]
    }

    /// `f_J = Σ_{K⊆J} h_K` for every `J`.
    pub fn consistent(&self) -> bool {
        (0..self.f.len()).all(|j| submasks(j).map(|k| self.h[k]).sum::<i128>() == self.f[j])
    }
}

pub fn mask_of(j: &[usize]) -> usize {
    j.iter().fold(0, |m, &i| m | 1 << (i - 1))
}

pub fn subset_of(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

fn submasks(j: usize) -> impl Iterator<Item = usize> {
    let mut k = Some(j);
    core::iter::from_fn(move || {
        let cur = k?;
        k = if cur == 0 { None } else { Some((cur - 1) & j) };
        Some(cur)
    })
}

fn graded_ranks(p: &FinitePoset) -> Result<Vec<usize>, LrbError> {
    p.ranks()
        .ok_or_else(|| LrbError::Invalid("poset is not graded".into()))
}

pub fn flag_vectors(p: &FinitePoset) -> Result<FlagVectors, LrbError> {
    let ranks = graded_ranks(p)?;
    let n = ranks[p.top()];
    let size = 1usize << n.saturating_sub(1);
    let mut f = vec![0i128; size];
    for (j, fj) in f.iter_mut().enumerate() {
        let mut ways: Vec<i128> = (0..p.len()).map(|x| (x == p.bottom()) as i128).collect();
        for r in subset_of(j) {
            let prev = ways.clone();
            for x in 0..p.len() {
                ways[x] = if ranks[x] == r {
                    (0..p.len())
                        .filter(|&y| prev[y] != 0 && y != x && p.leq(y, x))
                        .map(|y| prev[y])
                        .sum()
                } else {
                    0
                };
            }
        }
        *fj = ways.iter().sum();
    }
    let h = (0..size)
        .map(|j| {
            submasks(j)
                .map(|k| {
                    let sign = if (j & !k).count_ones() % 2 == 0 {
                        1
                    } else {
                        -1
                    };
                    sign * f[k]
                })
                .sum()
        })
        .collect();
    Ok(FlagVectors { rank: n, f, h })
}

/// Whether the first integer `l ≥ 1` missing from `J` is even.
pub fn in_stanley_family(mask: usize) -> bool {
    (mask.trailing_ones() + 1).is_multiple_of(2)
}

/// `γ(J)` from the initial run `i, i+1, …, i+l−1` of `J`.
pub fn gamma(mask: usize, n: usize) -> usize {
    if mask == 0 {
        return n;
    }
    let i = mask.trailing_zeros() as usize + 1;
    let l = (mask >> (i - 1)).trailing_ones() as usize;
    if l.is_multiple_of(2) {
        i
    } else {
        i - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StanleyCheck {
    pub d: i128,
    pub h_sum: i128,
}

impl StanleyCheck {
    pub fn passed(&self) -> bool {
        self.d == self.h_sum
    }
}

/// `d(L)` against `Σ h_J` over the sets whose first missing integer is even.
pub fn stanley_check(p: &FinitePoset) -> Result<StanleyCheck, LrbError> {
    let d = derangement_number(p)?;
    let fv = flag_vectors(p)?;
    let h_sum = if fv.rank == 0 {
        1
    } else {
        (0..fv.h.len())
            .filter(|&j| in_stanley_family(j))
            .map(|j| fv.h[j])
            .sum()
    };
    Ok(StanleyCheck { d, h_sum })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MahajanRow {
    pub r: usize,
    /// `D_{n−r} = Σ_{rank X = r} d([X,1̂])`.
    pub d_sum: i128,
    /// `Σ_{γ(J)=r} h_J`.
    pub h_sum: i128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MahajanProfile {
    pub rank: usize,
    pub rows: Vec<MahajanRow>,
}

impl MahajanProfile {
    /// Every row balances, `D_0 = 1`, and `D_1 = 0` when the rank is positive.
    pub fn passed(&self) -> bool {
        let n = self.rank;
        self.rows.iter().all(|r| r.d_sum == r.h_sum)
            && self.rows[n].d_sum == 1
            && (n == 0 || self.rows[n - 1].d_sum == 0)
    }
}

pub fn mahajan_profile(p: &FinitePoset) -> Result<MahajanProfile, LrbError> {
    let ranks = graded_ranks(p)?;
    let fv = flag_vectors(p)?;
    let n = fv.rank;
    let d = upper_derangements(p);
    let rows = (0..=n)
        .map(|r| MahajanRow {
            r,
            d_sum: (0..p.len()).filter(|&x| ranks[x] == r).map(|x| d[x]).sum(),
            h_sum: (0..fv.h.len())
                .filter(|&j| gamma(j, n) == r)
                .map(|j| fv.h[j])
                .sum(),
        })
        .collect();
    Ok(MahajanProfile { rank: n, rows })
}

/// `h_{[n−1]} = (−1)^n μ(0̂,1̂)`.
pub fn top_h_matches_moebius(p: &FinitePoset) -> Result<bool, LrbError> {
    let fv = flag_vectors(p)?;
    let n = fv.rank;
    if n == 0 {
        return Ok(true);
    }
    let mu = p.moebius()[p.bottom() * p.len() + p.top()] as i128;
    let sign = if n % 2 == 0 { 1 } else { -1 };
    Ok(fv.h[fv.h.len() - 1] == sign * mu)
}

/// Dense polynomial with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly(Vec<i128>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn constant(c: i128) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: i128, degree: usize) -> Self {
        let mut v = vec![0; degree + 1];
        v[degree] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut v = vec![0; self.0.len().max(other.0.len())];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            v[i] += c;
        }
        Self::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i128) -> Self {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return Self::default();
        }
        let mut v = vec![0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    pub fn eval(&self, q: i128) -> i128 {
        self.0.iter().rev().fold(0, |acc, c| acc * q + c)
    }
}

/// `[k] = 1 + q + ⋯ + q^{k−1}`.
pub fn q_integer(k: usize) -> IntPoly {
    IntPoly::new(vec![1; k])
}

pub fn q_factorial(n: usize) -> IntPoly {
    (1..=n).fold(IntPoly::constant(1), |acc, k| acc.mul(&q_integer(k)))
}

/// Gaussian binomial by the q-Pascal rule.
pub fn q_binomial(n: usize, k: usize) -> IntPoly {
    let mut row = vec![IntPoly::constant(1)];
    for m in 1..=n {
        let mut next = vec![IntPoly::constant(1); m + 1];
        for j in 1..m {
            next[j] = row[j - 1].add(&IntPoly::monomial(1, j).mul(&row[j]));
        }
        row = next;
    }
    row.get(k).cloned().unwrap_or_default()
}

/// `d_0(q), …, d_n(q)` from `Σ_i [n choose i]_q d_i(q) = [n]!`.
pub fn q_derangements(n: usize) -> Vec<IntPoly> {
    let mut d: Vec<IntPoly> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let rest = (0..m).fold(IntPoly::default(), |acc, i| {
            acc.add(&q_binomial(m, i).mul(&d[i]))
        });
        d.push(q_factorial(m).sub(&rest));
    }
    d
}

/// Ordinary derangement numbers `d_0, …, d_n` from `Σ_i C(n,i) d_i = n!`.
pub fn derangements(n: usize) -> Vec<i128> {
    q_derangements(n).iter().map(|p| p.eval(1)).collect()
}

pub fn inversions(w: &[usize]) -> usize {
    (0..w.len())
        .map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count())
        .sum()
}

/// The maximal initial descending run `w(1) > ⋯ > w(l)` has even length.
pub fn is_desarrangement(w: &[usize]) -> bool {
    let l = if w.is_empty() {
        0
    } else {
        1 + w.windows(2).take_while(|p| p[0] > p[1]).count()
    };
    l % 2 == 0
}

/// `Σ_{π ∈ E_n} q^{inv π}`.
pub fn desarrangement_polynomial(n: usize) -> IntPoly {
    permutations(n)
        .iter()
        .filter(|w| is_desarrangement(w))
        .fold(IntPoly::default(), |acc, w| {
            acc.add(&IntPoly::monomial(1, inversions(w)))
        })
}

/// `Σ_{des π = J} q^{inv π}` for every `J`, indexed by mask.
pub fn inversion_h_vector(n: usize) -> Vec<IntPoly> {
    let mut out = vec![IntPoly::default(); 1usize << n.saturating_sub(1)];
    for w in permutations(n) {
        let j = descent_mask(&w);
        out[j] = out[j].add(&IntPoly::monomial(1, inversions(&w)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_element_chain_and_point() {
        assert_eq!(derangement_number(&FinitePoset::chain(0)).unwrap(), 1);
        assert_eq!(derangement_number(&FinitePoset::chain(1)).unwrap(), 0);
        assert_eq!(derangement_number(&FinitePoset::chain(4)).unwrap(), 0);
    }

    #[test]
    fn small_q_derangements() {
        let d = q_derangements(3);
        assert_eq!(d[1], IntPoly::default());
        assert_eq!(d[2], IntPoly::monomial(1, 1));
        assert_eq!(d[3].eval(2), 6);
        assert_eq!(q_binomial(4, 2).coeffs(), &[1, 1, 2, 1, 1]);
    }

    #[test]
    fn gamma_rule() {
        let n = 4;
        assert_eq!(gamma(0, n), 4);
        assert_eq!(gamma(mask_of(&[1]), n), 0);
        assert_eq!(gamma(mask_of(&[1, 2]), n), 1);
        assert_eq!(gamma(mask_of(&[2, 3]), n), 2);
        assert_eq!(gamma(mask_of(&[3]), n), 2);
        assert_eq!(gamma(mask_of(&[1, 3]), n), 0);
        assert!(!(0..1 << (n - 1)).any(|j| gamma(j, n) == n - 1));
    }

    #[test]
    fn desarrangements() {
        assert!(is_desarrangement(&[]));
        assert!(!is_desarrangement(&[1]));
        assert!(is_desarrangement(&[2, 1]));
        assert!(!is_desarrangement(&[3, 2, 1]));
        assert!(is_desarrangement(&[2, 1, 3]));
    }
}
