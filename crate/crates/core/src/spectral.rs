//! Transition matrices of chamber walks and their eigenvalue bookkeeping.
//!
//! For weights `w`, the walk `c ↦ x·c` has eigenvalues
//! `λ_X = Σ_{supp y ≤ X} w_y` with multiplicities `m_X` obtained by Möbius
//! inversion of the chamber counts `c_X`. The certificate below checks those
//! multiplicities against exact nullities of `P − λI`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::algebra::AlgebraElement;
use crate::exact::{render, Rational};
use crate::linalg::{charpoly, poly_from_roots, Matrix};
use crate::semigroup::{ElementId, Semigroup};
use crate::support::{FlatId, SupportStructure};
use crate::LrbError;

/// Rational weights on the elements of a semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    coeffs: BTreeMap<ElementId, Rational>,
    fingerprint: u64,
}

impl WeightVector {
    pub fn new(
        s: &Semigroup,
        entries: impl IntoIterator<Item = (ElementId, Rational)>,
    ) -> Result<Self, LrbError> {
        let mut coeffs = BTreeMap::new();
        for (x, w) in entries {
            s.check_id(x)?;
            let slot = coeffs.entry(x).or_insert_with(Rational::zero);
            *slot += w;
        }
        coeffs.retain(|_, v: &mut Rational| !v.is_zero());
        Ok(Self {
            coeffs,
            fingerprint: s.fingerprint(),
        })
    }

    /// Weights given by element keys.
    pub fn from_keys<'a>(
        s: &Semigroup,
        entries: impl IntoIterator<Item = (&'a str, Rational)>,
    ) -> Result<Self, LrbError> {
        let ids = entries
            .into_iter()
            .map(|(k, w)| Ok((s.id_of(k)?, w)))
            .collect::<Result<Vec<_>, LrbError>>()?;
        Self::new(s, ids)
    }

    pub fn uniform(s: &Semigroup, ids: &[ElementId]) -> Result<Self, LrbError> {
        if ids.is_empty() {
            return Err(LrbError::Invalid("uniform weights on an empty set".into()));
        }
        let w = Rational::new(BigInt::one(), BigInt::from(ids.len()));
        Self::new(s, ids.iter().map(|&x| (x, w.clone())))
    }

    /// Uniform weights on the elements of grade 1 (the generators of every
    /// construction in this crate).
    pub fn canonical(s: &Semigroup) -> Result<Self, LrbError> {
        Self::uniform(s, &generators(s)?)
    }

    /// Random positive rational probability weights on `ids`, seeded.
    pub fn random(s: &Semigroup, ids: &[ElementId], seed: u64) -> Result<Self, LrbError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<u64> = ids.iter().map(|_| 1 + rng.next_u64() % 29).collect();
        let total: u64 = raw.iter().sum();
        Self::new(
            s,
            ids.iter()
                .zip(raw)
                .map(|(&x, r)| (x, Rational::new(BigInt::from(r), BigInt::from(total)))),
        )
    }

    pub fn get(&self, x: ElementId) -> Rational {
        self.coeffs.get(&x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElementId, &Rational)> {
        self.coeffs.iter().map(|(&x, w)| (x, w))
    }

    pub fn support(&self) -> Vec<ElementId> {
        self.coeffs.keys().copied().collect()
    }

    pub fn total(&self) -> Rational {
        self.coeffs.values().sum()
    }

    pub fn is_probability(&self) -> bool {
        self.coeffs.values().all(|w| !w.is_negative()) && self.total().is_one()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn check_owner(&self, s: &Semigroup) -> Result<(), LrbError> {
        if self.fingerprint == s.fingerprint() {
            Ok(())
        } else {
            Err(LrbError::Domain(
                "weights belong to another semigroup".into(),
            ))
        }
    }

    pub fn to_algebra(&self, s: &Semigroup) -> AlgebraElement {
        AlgebraElement::from_pairs(s, self.iter().map(|(x, w)| (x, w.clone())))
    }
}

/// Elements of grade 1.
pub fn generators(s: &Semigroup) -> Result<Vec<ElementId>, LrbError> {
    let g = s.grades().ok_or_else(|| {
        LrbError::Domain(format!(
            "{} carries no grading; give weights explicitly",
            s.label()
        ))
    })?;
    let ids: Vec<ElementId> = (0..s.len()).filter(|&x| g[x] == 1).collect();
    if ids.is_empty() {
        return Err(LrbError::Domain(format!(
            "{} has no elements of grade 1",
            s.label()
        )));
    }
    Ok(ids)
}

/// The chamber walk matrix, rows and columns indexed by chambers sorted by key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub chambers: Vec<ElementId>,
    pub matrix: Matrix,
}

impl TransitionMatrix {
    pub fn size(&self) -> usize {
        self.chambers.len()
    }

    pub fn position(&self, c: ElementId) -> Option<usize> {
        self.chambers.iter().position(|&d| d == c)
    }
}

pub fn sorted_chambers(s: &Semigroup, l: &SupportStructure) -> Vec<ElementId> {
    let mut ch = l.chambers().to_vec();
    ch.sort_by(|&a, &b| s.key(a).cmp(s.key(b)));
    ch
}

/// `P(c, d) = Σ_{x·c = d} w_x`.
pub fn transition_matrix(
    s: &Semigroup,
    l: &SupportStructure,
    w: &WeightVector,
) -> Result<TransitionMatrix, LrbError> {
    w.check_owner(s)?;
    let chambers = sorted_chambers(s, l);
    if chambers.is_empty() {
        return Err(LrbError::Domain("no chambers".into()));
    }
    let pos: BTreeMap<ElementId, usize> =
        chambers.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut matrix = Matrix::zeros(chambers.len(), chambers.len());
    for (i, &c) in chambers.iter().enumerate() {
        for (x, wx) in w.iter() {
            matrix[(i, pos[&s.mul(x, c)])] += wx;
        }
    }
    Ok(TransitionMatrix { chambers, matrix })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatRecord {
    pub flat: FlatId,
    pub lambda: Rational,
    pub c: u64,
    pub m: i64,
}

/// One distinct eigenvalue and the flats that produce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenGroup {
    pub lambda: Rational,
    pub flats: Vec<FlatId>,
    pub multiplicity: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub records: Vec<FlatRecord>,
    /// Distinct eigenvalues in decreasing order.
    pub groups: Vec<EigenGroup>,
}

/// Eigenvalues `λ_X` for every flat.
pub fn eigenvalues(l: &SupportStructure, w: &WeightVector) -> Vec<Rational> {
    let mut by_flat = vec![Rational::zero(); l.len()];
    for (y, wy) in w.iter() {
        by_flat[l.supp(y)] += wy;
    }
    l.flats()
        .map(|x| {
            l.flats()
                .filter(|&y| l.leq(y, x))
                .map(|y| by_flat[y].clone())
                .sum()
        })
        .collect()
}

/// `c_X`: chambers `c` with `x·c = c`, for the representative `x` of `X`.
pub fn chamber_counts(s: &Semigroup, l: &SupportStructure) -> Vec<u64> {
    l.flats()
        .map(|x| {
            let r = l.representative(x);
            l.chambers().iter().filter(|&&c| s.mul(r, c) == c).count() as u64
        })
        .collect()
}

/// Checks that `c_X` does not depend on which element of support `X` is used.
pub fn check_anchor_independence(s: &Semigroup, l: &SupportStructure) -> Result<(), LrbError> {
    let counts = chamber_counts(s, l);
    for x in 0..s.len() {
        let c = l.chambers().iter().filter(|&&c| s.mul(x, c) == c).count() as u64;
        if c != counts[l.supp(x)] {
            return Err(LrbError::Falsified(format!(
                "chambers above {} number {c}, but {} for the flat representative",
                s.key(x),
                counts[l.supp(x)]
            )));
        }
    }
    Ok(())
}

pub fn spectrum(
    s: &Semigroup,
    l: &SupportStructure,
    w: &WeightVector,
) -> Result<Spectrum, LrbError> {
    w.check_owner(s)?;
    let lambdas = eigenvalues(l, w);
    let counts = chamber_counts(s, l);
    let records: Vec<FlatRecord> = l
        .flats()
        .map(|x| {
            let m = l
                .flats()
                .filter(|&y| l.leq(x, y))
                .map(|y| l.mu(x, y) * counts[y] as i64)
                .sum();
            FlatRecord {
                flat: x,
                lambda: lambdas[x].clone(),
                c: counts[x],
                m,
            }
        })
        .collect();
    let mut grouped: BTreeMap<Rational, Vec<FlatId>> = BTreeMap::new();
    for r in &records {
        grouped.entry(r.lambda.clone()).or_default().push(r.flat);
    }
    let groups = grouped
        .into_iter()
        .rev()
        .map(|(lambda, flats)| {
            let multiplicity = flats.iter().map(|&f| records[f].m).sum();
            EigenGroup {
                lambda,
                flats,
                multiplicity,
            }
        })
        .collect();
    Ok(Spectrum { records, groups })
}

impl Spectrum {
    /// All `λ_X` distinct.
    pub fn is_generic(&self) -> bool {
        self.groups.len() == self.records.len()
    }

    pub fn lambda(&self, x: FlatId) -> &Rational {
        &self.records[x].lambda
    }

    /// Checks `Σ_{Y ≥ X} m_Y = c_X` for all `X` and `m_X ≥ 0`.
    pub fn check_identities(&self, l: &SupportStructure) -> Result<(), LrbError> {
        for r in &self.records {
            if r.m < 0 {
                return Err(LrbError::Falsified(format!(
                    "negative multiplicity {} at {}",
                    r.m,
                    l.flat_key(r.flat)
                )));
            }
            let s: i64 = self
                .records
                .iter()
                .filter(|q| l.leq(r.flat, q.flat))
                .map(|q| q.m)
                .sum();
            if s != r.c as i64 {
                return Err(LrbError::Falsified(format!(
                    "multiplicities above {} sum to {s}, chamber count is {}",
                    l.flat_key(r.flat),
                    r.c
                )));
            }
        }
        Ok(())
    }

    /// Eigenvalues with their total multiplicities, zero-multiplicity groups dropped.
    pub fn multiset(&self) -> Vec<(Rational, usize)> {
        self.groups
            .iter()
            .filter(|g| g.multiplicity > 0)
            .map(|g| (g.lambda.clone(), g.multiplicity as usize))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateEntry {
    pub lambda: Rational,
    pub expected: usize,
    pub observed: usize,
}

/// Exact nullities of `P − λI` against predicted multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub size: usize,
    pub entries: Vec<CertificateEntry>,
}

impl Certificate {
    pub fn total_observed(&self) -> usize {
        self.entries.iter().map(|e| e.observed).sum()
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.expected == e.observed) && self.total_observed() == self.size
    }

    pub fn into_result(self) -> Result<Self, LrbError> {
        if self.passed() {
            return Ok(self);
        }
        let mut msg = String::from("nullity mismatch:");
        for e in &self.entries {
            if e.expected != e.observed {
                msg += &format!(
                    " λ={} expected {} observed {};",
                    render(&e.lambda),
                    e.expected,
                    e.observed
                );
            }
        }
        msg += &format!(" total {} of {}", self.total_observed(), self.size);
        Err(LrbError::Falsified(msg))
    }
}

/// Certifies that `P` is diagonalizable with the given eigenvalue multiset:
/// nullity of `P − λI` equals the predicted multiplicity for each `λ`, and
/// the nullities add up to the dimension.
pub fn verify_eigenvalues(p: &Matrix, expected: &[(Rational, usize)]) -> Certificate {
    let entries = expected
        .iter()
        .map(|(lambda, m)| CertificateEntry {
            lambda: lambda.clone(),
            expected: *m,
            observed: p.minus_scalar(lambda).nullity(),
        })
        .collect();
    Certificate {
        size: p.rows(),
        entries,
    }
}

pub fn verify_diagonalizable(p: &TransitionMatrix, spec: &Spectrum) -> Certificate {
    let expected: Vec<(Rational, usize)> = spec
        .groups
        .iter()
        .map(|g| (g.lambda.clone(), g.multiplicity.max(0) as usize))
        .collect();
    verify_eigenvalues(&p.matrix, &expected)
}

/// Compares `det(tI − P)` with `∏ (t − λ)^m`.
pub fn charpoly_matches(p: &Matrix, expected: &[(Rational, usize)]) -> bool {
    charpoly(p) == poly_from_roots(expected.iter().map(|(l, m)| (l, *m)))
}

/// `χ_X(a) = Σ_y a_y [supp y ≤ X]`.
pub fn character(l: &SupportStructure, x: FlatId, a: &AlgebraElement) -> Rational {
    a.iter()
        .filter(|&(y, _)| l.leq(l.supp(y), x))
        .map(|(_, c)| c.clone())
        .sum()
}

/// `(P − αI)/(1 − α)`, the walk that forbids staying put when `P` holds
/// with probability `α` everywhere.
pub fn lazy_removed(p: &Matrix, alpha: &Rational) -> Result<Matrix, LrbError> {
    let denom = Rational::one() - alpha;
    if denom.is_zero() {
        return Err(LrbError::Domain("holding probability 1".into()));
    }
    Ok(p.minus_scalar(alpha).scale(&denom.recip()))
}
