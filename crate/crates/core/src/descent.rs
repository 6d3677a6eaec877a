//! The ordered-partition Coxeter complex of `S_n`, descent sets, the
//! invariant subalgebra and its image in the group algebra.
//!
//! Permutations are one-line words over `1..=n`. Products compose as maps:
//! `(uv)(i) = u(v(i))`. The chamber of `w` is `(w(1)|w(2)|…|w(n))`, so the
//! fundamental chamber is `(1|2|…|n)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::AlgebraElement;
use crate::constructions::{ordered_partitions, Guards};
use crate::exact::Rational;
use crate::linalg::Matrix;
use crate::semigroup::{ElementId, Semigroup};
use crate::spectral::{transition_matrix, WeightVector};
use crate::support::derive_support;
use crate::LrbError;

/// All permutations of `[n]` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut w: Vec<usize> = (1..=n).collect();
    loop {
        out.push(w.clone());
        let Some(i) = (1..w.len()).rev().find(|&i| w[i - 1] < w[i]) else {
            return out;
        };
        let j = (i..w.len()).rev().find(|&j| w[j] > w[i - 1]).unwrap();
        w.swap(i - 1, j);
        w[i..].reverse();
    }
}

pub fn check_permutation(w: &[usize]) -> Result<(), LrbError> {
    let mut seen = vec![false; w.len()];
    for &x in w {
        if x == 0 || x > w.len() || seen[x - 1] {
            return Err(LrbError::Malformed(format!(
                "{w:?} is not a permutation of 1..={}",
                w.len()
            )));
        }
        seen[x - 1] = true;
    }
    Ok(())
}

/// `{i : w(i) > w(i+1)}`.
pub fn descent_set(w: &[usize]) -> Result<Vec<usize>, LrbError> {
    check_permutation(w)?;
    Ok((1..w.len()).filter(|&i| w[i - 1] > w[i]).collect())
}

/// Descent set as a bitmask, bit `i − 1` for descent `i`.
pub fn descent_mask(w: &[usize]) -> usize {
    (1..w.len())
        .filter(|&i| w[i - 1] > w[i])
        .fold(0, |m, i| m | 1 << (i - 1))
}

pub fn compose(u: &[usize], v: &[usize]) -> Vec<usize> {
    v.iter().map(|&i| u[i - 1]).collect()
}

pub fn inverse(w: &[usize]) -> Vec<usize> {
    let mut out = vec![0; w.len()];
    for (i, &x) in w.iter().enumerate() {
        out[x - 1] = i + 1;
    }
    out
}

pub fn mask_to_set(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

pub fn set_to_mask(j: &[usize], n: usize) -> Result<usize, LrbError> {
    j.iter().try_fold(0, |m, &i| {
        if i == 0 || i >= n {
            Err(LrbError::Domain(format!(
                "{i} is not in [{}]",
                n.saturating_sub(1)
            )))
        } else {
            Ok(m | 1 << (i - 1))
        }
    })
}

/// Largest `n` for which group-algebra computations are allowed.
pub const MAX_GROUP_N: usize = 6;

/// `S_n` with a multiplication table on lexicographic indices.
#[derive(Debug, Clone)]
pub struct SymmetricGroup {
    n: usize,
    perms: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    table: Vec<u32>,
    inverses: Vec<usize>,
}

impl SymmetricGroup {
    pub fn new(n: usize) -> Result<Self, LrbError> {
        if n == 0 || n > MAX_GROUP_N {
            return Err(LrbError::SizeGuard {
                what: "symmetric group degree",
                needed: n,
                limit: MAX_GROUP_N,
            });
        }
        let perms = permutations(n);
        let index: BTreeMap<Vec<usize>, usize> = perms
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let table = perms
            .iter()
            .flat_map(|u| perms.iter().map(|v| index[&compose(u, v)] as u32))
            .collect();
        let inverses = perms.iter().map(|w| index[&inverse(w)]).collect();
        Ok(Self {
            n,
            perms,
            index,
            table,
            inverses,
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn perm(&self, i: usize) -> &[usize] {
        &self.perms[i]
    }

    pub fn index_of(&self, w: &[usize]) -> Result<usize, LrbError> {
        self.index
            .get(w)
            .copied()
            .ok_or_else(|| LrbError::Malformed(format!("{w:?} is not in S_{}", self.n)))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }
}

/// Element of the rational group algebra, dense over lexicographic indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    n: usize,
    coeffs: Vec<Rational>,
}

impl GroupAlgebraElement {
    pub fn zero(g: &SymmetricGroup) -> Self {
        Self {
            n: g.n,
            coeffs: vec![Rational::zero(); g.order()],
        }
    }

    pub fn identity(g: &SymmetricGroup) -> Self {
        Self::basis(g, 0)
    }

    pub fn basis(g: &SymmetricGroup, i: usize) -> Self {
        let mut e = Self::zero(g);
        e.coeffs[i] = Rational::one();
        e
    }

    /// Sum of the permutations accepted by `keep`.
    pub fn indicator(g: &SymmetricGroup, keep: impl Fn(&[usize]) -> bool) -> Self {
        let coeffs = g
            .perms
            .iter()
            .map(|w| {
                if keep(w) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Self { n: g.n, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn add_term(&mut self, i: usize, c: &Rational) {
        self.coeffs[i] += c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self { n: self.n, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Self { n: self.n, coeffs }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    /// Convolution, with denominators cleared so the inner loop is integral.
    pub fn mul(&self, g: &SymmetricGroup, other: &Self) -> Self {
        let (da, a) = integral(&self.coeffs);
        let (db, b) = integral(&other.coeffs);
        let mut acc = vec![BigInt::zero(); g.order()];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                acc[g.mul(i, j)] += x * y;
            }
        }
        let den = da * db;
        Self {
            n: self.n,
            coeffs: acc
                .into_iter()
                .map(|c| Rational::new(c, den.clone()))
                .collect(),
        }
    }
}

fn integral(v: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let den = v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints = v.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    (den, ints)
}

/// Sum of the permutations with descent set inside `J`.
pub fn u_element(g: &SymmetricGroup, mask: usize) -> GroupAlgebraElement {
    GroupAlgebraElement::indicator(g, |w| descent_mask(w) & !mask == 0)
}

/// Sum of the permutations with descent set exactly `J`.
pub fn z_element(g: &SymmetricGroup, mask: usize) -> GroupAlgebraElement {
    GroupAlgebraElement::indicator(g, |w| descent_mask(w) == mask)
}

/// Coefficients in the `z_J` basis if `x` is constant on descent classes.
pub fn descent_coordinates(g: &SymmetricGroup, x: &GroupAlgebraElement) -> Option<Vec<Rational>> {
    let mut coords: Vec<Option<Rational>> = vec![None; 1 << (g.n - 1)];
    for (i, w) in g.perms.iter().enumerate() {
        let slot = &mut coords[descent_mask(w)];
        match slot {
            None => *slot = Some(x.coeffs[i].clone()),
            Some(c) if *c != x.coeffs[i] => return None,
            _ => {}
        }
    }
    Some(coords.into_iter().map(|c| c.unwrap_or_default()).collect())
}

/// The complex of ordered partitions of `[n]` with types and the `S_n` action.
#[derive(Debug, Clone)]
pub struct CoxeterComplexSn {
    n: usize,
    semigroup: Semigroup,
    blocks: Vec<Vec<u32>>,
    by_blocks: BTreeMap<Vec<u32>, ElementId>,
    types: Vec<usize>,
}

fn parse_blocks(key: &str) -> Vec<u32> {
    key.trim_start_matches('(')
        .trim_end_matches(')')
        .split('|')
        .map(|b| {
            b.split(',')
                .map(|i| 1u32 << (i.parse::<u32>().unwrap() - 1))
                .fold(0, |m, x| m | x)
        })
        .collect()
}

impl CoxeterComplexSn {
    pub fn new(n: usize, guards: &Guards) -> Result<Self, LrbError> {
        let semigroup = ordered_partitions(n, guards)?;
        let blocks: Vec<Vec<u32>> = semigroup.keys().iter().map(|k| parse_blocks(k)).collect();
        let by_blocks = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect();
        let types = blocks
            .iter()
            .map(|b| {
                let mut size = 0;
                b[..b.len() - 1].iter().fold(0, |m, x| {
                    size += x.count_ones() as usize;
                    m | 1 << (size - 1)
                })
            })
            .collect();
        Ok(Self {
            n,
            semigroup,
            blocks,
            by_blocks,
            types,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn semigroup(&self) -> &Semigroup {
        &self.semigroup
    }

    /// Number of type classes, `2^{n−1}`.
    pub fn type_count(&self) -> usize {
        1 << (self.n - 1)
    }

    pub fn type_mask(&self, x: ElementId) -> usize {
        self.types[x]
    }

    pub fn blocks(&self, x: ElementId) -> &[u32] {
        &self.blocks[x]
    }

    fn id(&self, blocks: &[u32]) -> ElementId {
        self.by_blocks[blocks]
    }

    /// Relabels every block of `x` by `w`.
    pub fn act(&self, w: &[usize], x: ElementId) -> ElementId {
        let moved: Vec<u32> = self.blocks[x]
            .iter()
            .map(|&b| {
                (0..self.n)
                    .filter(|i| b >> i & 1 == 1)
                    .fold(0, |m, i| m | 1 << (w[i] - 1))
            })
            .collect();
        self.id(&moved)
    }

    pub fn chamber(&self, w: &[usize]) -> Result<ElementId, LrbError> {
        check_permutation(w)?;
        if w.len() != self.n {
            return Err(LrbError::Domain(format!("{w:?} is not in S_{}", self.n)));
        }
        Ok(self.id(&w.iter().map(|&i| 1u32 << (i - 1)).collect::<Vec<_>>()))
    }

    pub fn fundamental(&self) -> ElementId {
        self.id(&(0..self.n).map(|i| 1u32 << i).collect::<Vec<_>>())
    }

    /// The permutation whose chamber is `c`.
    pub fn permutation(&self, c: ElementId) -> Option<Vec<usize>> {
        let b = &self.blocks[c];
        (b.len() == self.n).then(|| b.iter().map(|x| x.trailing_zeros() as usize + 1).collect())
    }

    /// The face of chamber `c` of type `J`: consecutive blocks merged between
    /// the positions in `J`.
    pub fn face_of_type(&self, c: ElementId, mask: usize) -> ElementId {
        let b = &self.blocks[c];
        let mut out = Vec::new();
        let mut cur = 0u32;
        for (i, &x) in b.iter().enumerate() {
            cur |= x;
            if i + 1 == b.len() || mask >> i & 1 == 1 {
                out.push(cur);
                cur = 0;
            }
        }
        self.id(&out)
    }

    pub fn elements_of_type(&self, mask: usize) -> Vec<ElementId> {
        (0..self.blocks.len())
            .filter(|&x| self.types[x] == mask)
            .collect()
    }

    /// Invariance under every adjacent transposition, element by element.
    pub fn is_invariant(&self, coeff: impl Fn(ElementId) -> Rational) -> bool {
        (1..self.n).all(|i| {
            let mut s: Vec<usize> = (1..=self.n).collect();
            s.swap(i - 1, i);
            (0..self.blocks.len()).all(|x| coeff(x) == coeff(self.act(&s, x)))
        })
    }
}

/// `des(C, C′)`: the type of the smallest face `F` of `C′` with `FC = C′`.
pub fn descent_pair(
    cx: &CoxeterComplexSn,
    c: ElementId,
    c2: ElementId,
) -> Result<Vec<usize>, LrbError> {
    let s = &cx.semigroup;
    for x in [c, c2] {
        s.check_id(x)?;
        if cx.blocks[x].len() != cx.n {
            return Err(LrbError::Domain(format!("{} is not a chamber", s.key(x))));
        }
    }
    let mut masks: Vec<usize> = (0..cx.type_count()).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    let found = masks
        .into_iter()
        .find(|&m| s.mul(cx.face_of_type(c2, m), c) == c2)
        .expect("the chamber itself works");
    Ok(mask_to_set(found))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaRow {
    pub set: Vec<usize>,
    pub beta: u64,
    pub f: i64,
    pub h: i64,
}

/// Descent counts against the h-vector of the complex.
pub fn beta_and_h(cx: &CoxeterComplexSn) -> Vec<BetaRow> {
    let k = cx.type_count();
    let mut beta = vec![0u64; k];
    for w in permutations(cx.n) {
        beta[descent_mask(&w)] += 1;
    }
    let mut f = vec![0i64; k];
    for &t in &cx.types {
        f[t] += 1;
    }
    (0..k)
        .map(|j| {
            let h = (0..k)
                .filter(|&m| m & !j == 0)
                .map(|m| {
                    if (j & !m).count_ones() % 2 == 0 {
                        f[m]
                    } else {
                        -f[m]
                    }
                })
                .sum();
            BetaRow {
                set: mask_to_set(j),
                beta: beta[j],
                f: f[j],
                h,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantBasis {
    Sigma,
    Tau,
}

/// Element of the invariant subalgebra in the `σ_J` or `τ_J` basis, indexed
/// by type mask, with `σ_J = Σ_{K⊆J} τ_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantElement {
    pub n: usize,
    pub basis: InvariantBasis,
    pub coeffs: Vec<Rational>,
}

impl InvariantElement {
    pub fn zero(n: usize, basis: InvariantBasis) -> Self {
        Self {
            n,
            basis,
            coeffs: vec![Rational::zero(); 1 << n.saturating_sub(1)],
        }
    }

    pub fn sigma(n: usize, mask: usize) -> Self {
        let mut e = Self::zero(n, InvariantBasis::Sigma);
        e.coeffs[mask] = Rational::one();
        e
    }

    pub fn tau(n: usize, mask: usize) -> Self {
        let mut e = Self::zero(n, InvariantBasis::Tau);
        e.coeffs[mask] = Rational::one();
        e
    }

    pub fn to_sigma(&self) -> Self {
        match self.basis {
            InvariantBasis::Sigma => self.clone(),
            // τ_K = Σ_{J⊆K} (−1)^{|K−J|} σ_J
            InvariantBasis::Tau => self.transform(InvariantBasis::Sigma, true),
        }
    }

    pub fn to_tau(&self) -> Self {
        match self.basis {
            InvariantBasis::Tau => self.clone(),
            // σ_K = Σ_{J⊆K} τ_J
            InvariantBasis::Sigma => self.transform(InvariantBasis::Tau, false),
        }
    }

    fn transform(&self, target: InvariantBasis, signed: bool) -> Self {
        let k = self.coeffs.len();
        let mut out = vec![Rational::zero(); k];
        for (big, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (small, slot) in out.iter_mut().enumerate() {
                if small & !big == 0 {
                    if signed && (big & !small).count_ones() % 2 == 1 {
                        *slot -= c;
                    } else {
                        *slot += c;
                    }
                }
            }
        }
        Self {
            n: self.n,
            basis: target,
            coeffs: out,
        }
    }

    /// `Σ_J a_J σ_J` as an element of the semigroup algebra.
    pub fn to_algebra(&self, cx: &CoxeterComplexSn) -> AlgebraElement {
        let a = self.to_sigma();
        let pairs = (0..cx.blocks.len()).map(|x| (x, a.coeffs[cx.types[x]].clone()));
        AlgebraElement::from_pairs(&cx.semigroup, pairs)
    }

    /// Reads off type coefficients after checking invariance.
    pub fn from_algebra(cx: &CoxeterComplexSn, a: &AlgebraElement) -> Result<Self, LrbError> {
        if !cx.is_invariant(|x| a.get(x)) {
            return Err(LrbError::Domain(
                "element is not invariant under the symmetric group".into(),
            ));
        }
        let mut e = Self::zero(cx.n, InvariantBasis::Sigma);
        for x in 0..cx.blocks.len() {
            e.coeffs[cx.types[x]] = a.get(x);
        }
        Ok(e)
    }
}

/// `φ(a)`, determined by `φ(a)C = aC` at the fundamental chamber.
pub fn phi(
    cx: &CoxeterComplexSn,
    g: &SymmetricGroup,
    a: &InvariantElement,
) -> Result<GroupAlgebraElement, LrbError> {
    if a.n != cx.n || g.n != cx.n {
        return Err(LrbError::Domain("degree mismatch".into()));
    }
    let a = a.to_sigma();
    let c = cx.fundamental();
    let mut out = GroupAlgebraElement::zero(g);
    for x in 0..cx.blocks.len() {
        let coeff = &a.coeffs[cx.types[x]];
        if !coeff.is_zero() {
            let w = cx
                .permutation(cx.semigroup.mul(x, c))
                .expect("FC is a chamber");
            out.add_term(g.index_of(&w)?, coeff);
        }
    }
    Ok(out)
}

/// `φ(p)` for an invariant element of the semigroup algebra.
pub fn phi_of_algebra(
    cx: &CoxeterComplexSn,
    g: &SymmetricGroup,
    p: &AlgebraElement,
) -> Result<GroupAlgebraElement, LrbError> {
    phi(cx, g, &InvariantElement::from_algebra(cx, p)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiReport {
    /// `φ(σ_J) = u_J` and `φ(τ_J) = z_J` for every `J`.
    pub bases: bool,
    /// `φ(σ_J σ_K) = φ(σ_K) φ(σ_J)` for every pair.
    pub anti_homomorphism: bool,
    /// Every product `u_J u_K` is constant on descent classes.
    pub closed: bool,
    /// Rank of `{z_J}`.
    pub rank: usize,
    pub pairs: usize,
}

impl PhiReport {
    pub fn passed(&self, n: usize) -> bool {
        self.bases && self.anti_homomorphism && self.closed && self.rank == 1 << (n - 1)
    }
}

pub fn phi_check(cx: &CoxeterComplexSn, g: &SymmetricGroup) -> Result<PhiReport, LrbError> {
    let k = cx.type_count();
    let s = &cx.semigroup;
    let c = cx.fundamental();
    let mut images = Vec::with_capacity(k);
    let mut bases = true;
    for j in 0..k {
        let img = phi(cx, g, &InvariantElement::sigma(cx.n, j))?;
        bases &= img == u_element(g, j);
        bases &= phi(cx, g, &InvariantElement::tau(cx.n, j))? == z_element(g, j);
        images.push(img);
    }
    let by_type: Vec<Vec<ElementId>> = (0..k).map(|j| cx.elements_of_type(j)).collect();
    let perm_index: Vec<usize> = (0..cx.blocks.len())
        .map(|x| {
            cx.permutation(x)
                .map(|w| g.index_of(&w).unwrap())
                .unwrap_or(usize::MAX)
        })
        .collect();
    let mut anti = true;
    let mut closed = true;
    for j in 0..k {
        for l in 0..k {
            // φ(σ_J σ_L) straight from the semigroup: Σ_{F,G} (FGC as a permutation).
            let mut lhs = vec![0i64; g.order()];
            for &f in &by_type[j] {
                for &h in &by_type[l] {
                    lhs[perm_index[s.mul(s.mul(f, h), c)]] += 1;
                }
            }
            let rhs = images[l].mul(g, &images[j]);
            anti &= lhs
                .iter()
                .zip(rhs.coeffs())
                .all(|(a, b)| Rational::from_integer((*a).into()) == *b);
            closed &= descent_coordinates(g, &images[j].mul(g, &images[l])).is_some();
        }
    }
    let rows: Vec<Vec<Rational>> = (0..k).map(|j| z_element(g, j).coeffs).collect();
    let rank = Matrix::from_rows(rows).rank();
    Ok(PhiReport {
        bases,
        anti_homomorphism: anti,
        closed,
        rank,
        pairs: k * k,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentWalk {
    pub mu: GroupAlgebraElement,
    /// Entries where `P(uC, vC) ≠ μ(u^{-1}v)`.
    pub mismatches: usize,
}

impl DescentWalk {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// The chamber walk of an invariant probability `p` against the right walk
/// on `S_n` driven by `μ = φ(p)`.
pub fn descent_walk(
    cx: &CoxeterComplexSn,
    g: &SymmetricGroup,
    p: &WeightVector,
) -> Result<DescentWalk, LrbError> {
    let s = &cx.semigroup;
    if !p.is_probability() {
        return Err(LrbError::Precondition(
            "walk weights must be a probability vector".into(),
        ));
    }
    let mu = phi_of_algebra(cx, g, &p.to_algebra(s))?;
    let l = derive_support(s)?;
    let tm = transition_matrix(s, &l, p)?;
    let mut mismatches = 0;
    for (a, &ca) in tm.chambers.iter().enumerate() {
        let u = g.index_of(&cx.permutation(ca).unwrap())?;
        for (b, &cb) in tm.chambers.iter().enumerate() {
            let v = g.index_of(&cx.permutation(cb).unwrap())?;
            if tm.matrix[(a, b)] != *mu.get(g.mul(g.inverse(u), v)) {
                mismatches += 1;
            }
        }
    }
    Ok(DescentWalk { mu, mismatches })
}

/// `p` uniform on the vertices of type `{1}`.
pub fn top_to_random_weights(cx: &CoxeterComplexSn) -> Result<WeightVector, LrbError> {
    WeightVector::uniform(&cx.semigroup, &cx.elements_of_type(1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopToRandom {
    /// `v_0, …, v_n`.
    pub v: Vec<GroupAlgebraElement>,
    /// `E_0, …, E_n`.
    pub e: Vec<GroupAlgebraElement>,
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

pub fn top_to_random_idempotents(g: &SymmetricGroup) -> TopToRandom {
    let n = g.n;
    let mut v: Vec<GroupAlgebraElement> = (0..n).map(|l| u_element(g, (1 << l) - 1)).collect();
    v.push(v[n - 1].clone());
    let e = (0..=n)
        .map(|i| {
            (i..=n).fold(GroupAlgebraElement::zero(g), |acc, l| {
                let fact: u64 = (1..=l as u64).product();
                let sign: i64 = if (l - i) % 2 == 0 { 1 } else { -1 };
                let c = Rational::new((sign * binomial(l, i) as i64).into(), fact.into());
                acc.add(&v[l].scale(&c))
            })
        })
        .collect();
    TopToRandom { v, e }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopToRandomReport {
    pub vanishing: bool,
    pub idempotent: bool,
    pub orthogonal: bool,
    pub complete: bool,
    /// `μ = Σ_i (i/n) E_i` for the uniform top-to-random `μ`.
    pub decomposes: bool,
}

impl TopToRandomReport {
    pub fn passed(&self) -> bool {
        self.vanishing && self.idempotent && self.orthogonal && self.complete && self.decomposes
    }
}

impl TopToRandom {
    pub fn verify(&self, g: &SymmetricGroup) -> TopToRandomReport {
        let n = g.n;
        let live: Vec<usize> = (0..=n).filter(|&i| i + 1 != n).collect();
        let mut idempotent = true;
        let mut orthogonal = true;
        for &i in &live {
            for &j in &live {
                let prod = self.e[i].mul(g, &self.e[j]);
                if i == j {
                    idempotent &= prod == self.e[i];
                } else {
                    orthogonal &= prod.is_zero();
                }
            }
        }
        let total = live
            .iter()
            .fold(GroupAlgebraElement::zero(g), |acc, &i| acc.add(&self.e[i]));
        let mu = u_element(g, 1).scale(&Rational::new(1.into(), (n as i64).into()));
        let combo = live.iter().fold(GroupAlgebraElement::zero(g), |acc, &i| {
            acc.add(&self.e[i].scale(&Rational::new((i as i64).into(), (n as i64).into())))
        });
        TopToRandomReport {
            vanishing: n < 2 || self.e[n - 1].is_zero(),
            idempotent,
            orthogonal,
            complete: total == GroupAlgebraElement::identity(g),
            decomposes: combo == mu,
        }
    }
}
