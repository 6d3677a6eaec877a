//! The rational semigroup algebra `QS`: convolution, powers of the weight
//! element via reduced words, the primitive idempotents of `Q[w]`, and the
//! nilpotent kernel of the support map.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::exact::Rational;
use crate::linalg::rref;
use crate::semigroup::{ElementId, Semigroup};
use crate::spectral::{eigenvalues, WeightVector};
use crate::support::{FlatId, SupportStructure};
use crate::LrbError;

/// Default cap on the number of reduced words visited.
pub const DEFAULT_WORD_GUARD: u128 = 10_000_000;

/// Sparse element of `QS`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    coeffs: BTreeMap<ElementId, Rational>,
    fingerprint: u64,
}

impl AlgebraElement {
    pub fn zero(s: &Semigroup) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            fingerprint: s.fingerprint(),
        }
    }

    /// The identity of the algebra.
    pub fn one(s: &Semigroup) -> Self {
        Self::basis(s, s.identity())
    }

    pub fn basis(s: &Semigroup, x: ElementId) -> Self {
        Self::from_pairs(s, [(x, Rational::one())])
    }

    pub fn from_pairs(
        s: &Semigroup,
        pairs: impl IntoIterator<Item = (ElementId, Rational)>,
    ) -> Self {
        let mut a = Self::zero(s);
        for (x, c) in pairs {
            assert!(x < s.len(), "element id out of range");
            a.add_term(x, &c);
        }
        a
    }

    fn from_dense(dense: Vec<Rational>, fingerprint: u64) -> Self {
        let coeffs = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self {
            coeffs,
            fingerprint,
        }
    }

    pub fn add_term(&mut self, x: ElementId, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(x).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&x);
        }
    }

    pub fn get(&self, x: ElementId) -> Rational {
        self.coeffs.get(&x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElementId, &Rational)> {
        self.coeffs.iter().map(|(&x, c)| (x, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn total(&self) -> Rational {
        self.coeffs.values().sum()
    }

    fn same_owner(&self, other: &Self) -> Result<(), LrbError> {
        if self.fingerprint == other.fingerprint {
            Ok(())
        } else {
            Err(LrbError::Domain(
                "algebra elements over different semigroups".into(),
            ))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LrbError> {
        self.same_owner(other)?;
        let mut out = self.clone();
        for (x, c) in other.iter() {
            out.add_term(x, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LrbError> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self {
                coeffs: BTreeMap::new(),
                fingerprint: self.fingerprint,
            };
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&x, c)| (x, c * k)).collect(),
            fingerprint: self.fingerprint,
        }
    }

    /// Coefficient vector over all elements.
    pub fn dense(&self, s: &Semigroup) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); s.len()];
        for (x, c) in self.iter() {
            v[x] = c.clone();
        }
        v
    }
}

/// Convolution product `(Σ a_x x)(Σ b_y y) = Σ a_x b_y (xy)`.
pub fn alg_multiply(
    s: &Semigroup,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<AlgebraElement, LrbError> {
    a.same_owner(b)?;
    if a.fingerprint != s.fingerprint() {
        return Err(LrbError::Domain(
            "algebra element belongs to another semigroup".into(),
        ));
    }
    let mut out = vec![Rational::zero(); s.len()];
    for (x, ax) in a.iter() {
        for (y, by) in b.iter() {
            out[s.mul(x, y)] += ax * by;
        }
    }
    Ok(AlgebraElement::from_dense(out, a.fingerprint))
}

/// `w^m` by repeated convolution.
pub fn alg_power(s: &Semigroup, w: &AlgebraElement, m: usize) -> Result<AlgebraElement, LrbError> {
    let mut acc = AlgebraElement::one(s);
    for _ in 0..m {
        acc = alg_multiply(s, &acc, w)?;
    }
    Ok(acc)
}

/// Element of the lattice algebra `QL` (product = join), integer coefficients.
pub type LatticeElement = BTreeMap<FlatId, i64>;

pub fn lattice_multiply(
    l: &SupportStructure,
    a: &LatticeElement,
    b: &LatticeElement,
) -> LatticeElement {
    let mut out = LatticeElement::new();
    for (&x, &ax) in a {
        for (&y, &by) in b {
            *out.entry(l.join(x, y)).or_insert(0) += ax * by;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `e_X = Σ_{Y ≥ X} μ(X, Y) Y`, one per flat.
pub fn lattice_idempotents(l: &SupportStructure) -> Vec<LatticeElement> {
    l.flats()
        .map(|x| {
            l.flats()
                .filter(|&y| l.leq(x, y) && l.mu(x, y) != 0)
                .map(|y| (y, l.mu(x, y)))
                .collect()
        })
        .collect()
}

/// Value of the character `χ_Z` on a lattice element: `Σ_{Y ≤ Z} a_Y`.
pub fn lattice_character(l: &SupportStructure, a: &LatticeElement, z: FlatId) -> i64 {
    a.iter()
        .filter(|&(&y, _)| l.leq(y, z))
        .map(|(_, &c)| c)
        .sum()
}

/// Letters with nonzero weight, excluding the identity (which never
/// lengthens a reduced word).
fn alphabet(s: &Semigroup, w: &WeightVector) -> Vec<(ElementId, Rational)> {
    w.iter()
        .filter(|&(x, _)| x != s.identity())
        .map(|(x, c)| (x, c.clone()))
        .collect()
}

/// Number of reduced words over the support of `w`, saturating.
pub fn reduced_word_count(s: &Semigroup, l: &SupportStructure, w: &WeightVector) -> u128 {
    fn count(
        p: ElementId,
        s: &Semigroup,
        l: &SupportStructure,
        letters: &[(ElementId, Rational)],
        memo: &mut BTreeMap<ElementId, u128>,
    ) -> u128 {
        if let Some(&c) = memo.get(&p) {
            return c;
        }
        let fp = l.supp(p);
        let mut total: u128 = 1;
        for &(x, _) in letters {
            if !l.leq(l.supp(x), fp) {
                total = total.saturating_add(count(s.mul(p, x), s, l, letters, memo));
            }
        }
        memo.insert(p, total);
        total
    }
    count(s.identity(), s, l, &alphabet(s, w), &mut BTreeMap::new())
}

fn guard_words(
    s: &Semigroup,
    l: &SupportStructure,
    w: &WeightVector,
    guard: u128,
) -> Result<(), LrbError> {
    let n = reduced_word_count(s, l, w);
    if n > guard {
        let clamp = |v: u128| v.min(usize::MAX as u128) as usize;
        return Err(LrbError::SizeGuard {
            what: "reduced words",
            needed: clamp(n),
            limit: clamp(guard),
        });
    }
    Ok(())
}

/// Depth-first walk over reduced words; `visit` sees the word's product,
/// its chain of flats and the product of its letter weights.
fn for_each_reduced_word(
    s: &Semigroup,
    l: &SupportStructure,
    letters: &[(ElementId, Rational)],
    max_len: usize,
    visit: &mut dyn FnMut(ElementId, &[FlatId], &Rational) -> Result<(), LrbError>,
) -> Result<(), LrbError> {
    fn go(
        p: ElementId,
        chain: &mut Vec<FlatId>,
        weight: &Rational,
        s: &Semigroup,
        l: &SupportStructure,
        letters: &[(ElementId, Rational)],
        max_len: usize,
        visit: &mut dyn FnMut(ElementId, &[FlatId], &Rational) -> Result<(), LrbError>,
    ) -> Result<(), LrbError> {
        visit(p, chain, weight)?;
        if chain.len() > max_len {
            return Ok(());
        }
        let top = *chain.last().unwrap();
        for (x, wx) in letters {
            if !l.leq(l.supp(*x), top) {
                let q = s.mul(p, *x);
                chain.push(l.supp(q));
                go(q, chain, &(weight * wx), s, l, letters, max_len, visit)?;
                chain.pop();
            }
        }
        Ok(())
    }
    let mut chain = vec![l.supp(s.identity())];
    go(
        s.identity(),
        &mut chain,
        &Rational::one(),
        s,
        l,
        letters,
        max_len,
        visit,
    )
}

/// `w^m = Σ_x h_{m−l(x)}(λ_0, …, λ_l) w_x x̄` over reduced words of length ≤ m.
pub fn power_formula(
    s: &Semigroup,
    l: &SupportStructure,
    w: &WeightVector,
    m: usize,
    guard: u128,
) -> Result<AlgebraElement, LrbError> {
    w.check_owner(s)?;
    guard_words(s, l, w, guard)?;
    let lambdas = eigenvalues(l, w);
    let letters = alphabet(s, w);
    let mut out = vec![Rational::zero(); s.len()];
    // h[d][k] = h_k over the first d+1 eigenvalues of the current chain.
    let mut h: Vec<Vec<Rational>> = Vec::new();
    for_each_reduced_word(s, l, &letters, m, &mut |p, chain, weight| {
        let depth = chain.len() - 1;
        h.truncate(depth);
        let lambda = &lambdas[*chain.last().unwrap()];
        let mut row = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let prev = if depth == 0 {
                if k == 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            } else {
                h[depth - 1][k].clone()
            };
            let v = if k == 0 {
                prev
            } else {
                prev + lambda * &row[k - 1]
            };
            row.push(v);
        }
        if depth <= m {
            out[p] += &row[m - depth] * weight;
        }
        h.push(row);
        Ok(())
    })?;
    Ok(AlgebraElement::from_dense(out, s.fingerprint()))
}

/// Elements reachable from the identity by right multiplication with letters.
pub fn generated_by(s: &Semigroup, letters: &[ElementId]) -> Vec<bool> {
    let mut seen = vec![false; s.len()];
    seen[s.identity()] = true;
    let mut stack = vec![s.identity()];
    while let Some(p) = stack.pop() {
        for &x in letters {
            let q = s.mul(p, x);
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentGroup {
    pub lambda: Rational,
    pub flats: Vec<FlatId>,
    pub element: AlgebraElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentFamily {
    /// Feasible flats, increasing.
    pub flats: Vec<FlatId>,
    pub lambdas: Vec<Rational>,
    pub elements: Vec<AlgebraElement>,
    /// Sums of the `e_X` with equal eigenvalue, decreasing eigenvalue.
    pub groups: Vec<IdempotentGroup>,
    /// Set when `w` does not generate `S` and only the generated part was used.
    pub restricted: bool,
}

impl IdempotentFamily {
    pub fn element(&self, x: FlatId) -> Option<&AlgebraElement> {
        self.flats
            .iter()
            .position(|&f| f == x)
            .map(|i| &self.elements[i])
    }

    /// Checks `e_X e_Y = δ_{XY} e_X`, `Σ e_X = 1` and `w = Σ λ_X e_X`.
    pub fn verify(&self, s: &Semigroup, w: &WeightVector) -> Result<(), LrbError> {
        let fail = |msg: String| Err(LrbError::Falsified(msg));
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                let ab = alg_multiply(s, a, b)?;
                let ok = if i == j { ab == *a } else { ab.is_zero() };
                if !ok {
                    return fail(format!(
                        "idempotents for flats {} and {} are not orthogonal",
                        self.flats[i], self.flats[j]
                    ));
                }
            }
        }
        let mut sum = AlgebraElement::zero(s);
        let mut decomposition = AlgebraElement::zero(s);
        for (e, lambda) in self.elements.iter().zip(&self.lambdas) {
            sum = sum.add(e)?;
            decomposition = decomposition.add(&e.scale(lambda))?;
        }
        if sum != AlgebraElement::one(s) {
            return fail("idempotents do not sum to the identity".into());
        }
        if decomposition != w.to_algebra(s) {
            return fail("w differs from Σ λ_X e_X".into());
        }
        Ok(())
    }
}

/// The idempotents `e_X = Σ R_{X,x} w_x x̄` over reduced words whose chain
/// passes through `X`, with `R` the residue of the resolvent at `λ_X`.
///
/// When the letters of `w` do not generate `S`, fails unless `restrict` is
/// set, in which case only the generated sub-LRB is used.
pub fn primitive_idempotents(
    s: &Semigroup,
    l: &SupportStructure,
    w: &WeightVector,
    restrict: bool,
    guard: u128,
) -> Result<IdempotentFamily, LrbError> {
    w.check_owner(s)?;
    let letters = alphabet(s, w);
    let generated = generated_by(s, &letters.iter().map(|p| p.0).collect::<Vec<_>>());
    let restricted = generated.iter().any(|g| !g);
    if restricted && !restrict {
        return Err(LrbError::Precondition(format!(
            "the weighted elements generate only {} of {} elements",
            generated.iter().filter(|&&g| g).count(),
            s.len()
        )));
    }
    guard_words(s, l, w, guard)?;
    let lambdas = eigenvalues(l, w);
    let mut dense: BTreeMap<FlatId, Vec<Rational>> = BTreeMap::new();
    for_each_reduced_word(s, l, &letters, usize::MAX, &mut |p, chain, weight| {
        let len = chain.len() - 1;
        for i in 0..=len {
            let lx = &lambdas[chain[i]];
            let mut denom = Rational::one();
            for (j, &f) in chain.iter().enumerate() {
                if j < i {
                    denom *= lx - &lambdas[f];
                } else if j > i {
                    denom *= &lambdas[f] - lx;
                }
            }
            if denom.is_zero() {
                return Err(LrbError::Precondition(format!(
                    "equal eigenvalues along the chain of flats {chain:?}"
                )));
            }
            let mut r = weight / denom;
            if (len - i) % 2 == 1 {
                r = -r;
            }
            dense
                .entry(chain[i])
                .or_insert_with(|| vec![Rational::zero(); s.len()])[p] += r;
        }
        Ok(())
    })?;
    let flats: Vec<FlatId> = dense.keys().copied().collect();
    let elements: Vec<AlgebraElement> = dense
        .into_values()
        .map(|d| AlgebraElement::from_dense(d, s.fingerprint()))
        .collect();
    let lambdas: Vec<Rational> = flats.iter().map(|&f| lambdas[f].clone()).collect();
    let mut grouped: BTreeMap<Rational, (Vec<FlatId>, AlgebraElement)> = BTreeMap::new();
    for ((&f, e), lambda) in flats.iter().zip(&elements).zip(&lambdas) {
        let slot = grouped
            .entry(lambda.clone())
            .or_insert_with(|| (Vec::new(), AlgebraElement::zero(s)));
        slot.0.push(f);
        slot.1 = slot.1.add(e)?;
    }
    let groups = grouped
        .into_iter()
        .rev()
        .map(|(lambda, (flats, element))| IdempotentGroup {
            lambda,
            flats,
            element,
        })
        .collect();
    let family = IdempotentFamily {
        flats,
        lambdas,
        elements,
        groups,
        restricted,
    };
    family.verify(s, w)?;
    Ok(family)
}

/// Letters of `F_n` as `(letter, element id)`, read from the `(i)` keys.
fn free_letters(s: &Semigroup, n: usize) -> Result<Vec<ElementId>, LrbError> {
    (1..=n).map(|i| s.id_of(&format!("({i})"))).collect()
}

/// All orderings of `items` with their sampling-without-replacement probability.
fn orderings(items: &[usize], weights: &[Rational]) -> Vec<(Vec<usize>, Rational)> {
    let total: Rational = items.iter().map(|&i| weights[i].clone()).sum();
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), Rational::one(), total)];
    while let Some((prefix, prob, left)) = stack.pop() {
        if prefix.len() == items.len() {
            out.push((prefix, prob));
            continue;
        }
        for &i in items {
            if !prefix.contains(&i) {
                let mut next = prefix.clone();
                next.push(i);
                let p = &prob * &weights[i] / &left;
                stack.push((next, p, &left - &weights[i]));
            }
        }
    }
    out
}

/// Signed measures `ν_{X,Y}` for the free LRB with letter weights, keyed by
/// `(X, Y)` as subsets of `[n]` in bit-mask form.
#[derive(Debug, Clone)]
pub struct NuFamily {
    pub n: usize,
    pub measures: BTreeMap<(u32, u32), AlgebraElement>,
}

impl NuFamily {
    /// `Σ_{Y ⊇ X} ν_{X,Y}`.
    pub fn reconstruct(&self, s: &Semigroup, x: u32) -> Result<AlgebraElement, LrbError> {
        let mut acc = AlgebraElement::zero(s);
        for (&(a, _), nu) in &self.measures {
            if a == x {
                acc = acc.add(nu)?;
            }
        }
        Ok(acc)
    }
}

/// `ν_{X,Y} = (−1)^{|Y−X|}` times the law of `(x_1, …, x_i, y_j, …, y_1)`,
/// where `X` and `Y − X` are each ordered by sampling without replacement.
pub fn tsetlin_nu_family(s: &Semigroup, n: usize, w: &WeightVector) -> Result<NuFamily, LrbError> {
    w.check_owner(s)?;
    let letters = free_letters(s, n)?;
    let weights: Vec<Rational> = letters.iter().map(|&x| w.get(x)).collect();
    if weights.iter().any(|c| c <= &Rational::zero()) {
        return Err(LrbError::Precondition(
            "every letter needs positive weight".into(),
        ));
    }
    let mut measures = BTreeMap::new();
    let full = (1u32 << n) - 1;
    for y in 0..=full {
        let mut x = y;
        loop {
            let xs: Vec<usize> = (0..n).filter(|i| x >> i & 1 == 1).collect();
            let rest: Vec<usize> = (0..n).filter(|i| (y & !x) >> i & 1 == 1).collect();
            let sign = if rest.len().is_multiple_of(2) {
                Rational::one()
            } else {
                -Rational::one()
            };
            let mut nu = AlgebraElement::zero(s);
            for (ox, px) in orderings(&xs, &weights) {
                for (oy, py) in orderings(&rest, &weights) {
                    let mut word: Vec<ElementId> = ox.iter().map(|&i| letters[i]).collect();
                    word.extend(oy.iter().rev().map(|&i| letters[i]));
                    nu.add_term(s.mul_word(&word), &(&sign * &px * &py));
                }
            }
            measures.insert((x, y), nu);
            if x == 0 {
                break;
            }
            x = (x - 1) & y;
        }
    }
    Ok(NuFamily { n, measures })
}

/// Dimensions of the powers of the radical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalCertificate {
    /// `dims[k-1] = dim J^k`, ending with the first zero power.
    pub dims: Vec<usize>,
    /// `1 +` the length of a longest chain in `L`.
    pub bound: usize,
}

impl RadicalCertificate {
    pub fn nilpotency_index(&self) -> usize {
        self.dims.len()
    }

    pub fn passed(&self) -> bool {
        self.dims.last() == Some(&0) && self.dims.len() <= self.bound
    }
}

/// Largest semigroup for which the radical is computed.
pub const RADICAL_GUARD: usize = 400;

/// Spans `J = ker(supp)` by `x − x_0` (with `x_0` the representative of
/// `supp x`) and multiplies until the power vanishes.
pub fn verify_radical_nilpotent(
    s: &Semigroup,
    l: &SupportStructure,
) -> Result<RadicalCertificate, LrbError> {
    if s.len() > RADICAL_GUARD {
        return Err(LrbError::SizeGuard {
            what: "radical computation",
            needed: s.len(),
            limit: RADICAL_GUARD,
        });
    }
    let n = s.len();
    let gens: Vec<(ElementId, ElementId)> = (0..n)
        .filter(|&x| l.representative(l.supp(x)) != x)
        .map(|x| (x, l.representative(l.supp(x))))
        .collect();
    let bound = l.longest_chain() + 1;
    let mut power: Vec<Vec<Rational>> = gens
        .iter()
        .map(|&(x, r)| {
            let mut v = vec![Rational::zero(); n];
            v[x] = Rational::one();
            v[r] = -Rational::one();
            v
        })
        .collect();
    power = rref(power).0;
    let mut dims = vec![power.len()];
    while !power.is_empty() {
        if dims.len() > bound {
            return Err(LrbError::Falsified(format!(
                "radical not nilpotent within {bound} steps"
            )));
        }
        let mut products = Vec::with_capacity(power.len() * gens.len());
        for row in &power {
            for &(x, r) in &gens {
                let mut v = vec![Rational::zero(); n];
                for (a, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        v[s.mul(a, x)] += c;
                        v[s.mul(a, r)] -= c;
                    }
                }
                if v.iter().any(|c| !c.is_zero()) {
                    products.push(v);
                }
            }
        }
        power = rref(products).0;
        dims.push(power.len());
    }
    Ok(RadicalCertificate { dims, bound })
}
