//! The support lattice of an LRB, recovered from the product alone.
//!
//! `y ⪯ x` iff `x·y = x`. This is a preorder whose classes are the flats;
//! the induced order makes them a lattice with `supp(x·y) = supp x ∨ supp y`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::semigroup::{ElementId, Semigroup};
use crate::LrbError;

pub type FlatId = usize;

#[derive(Debug, Clone)]
pub struct SupportStructure {
    n_elements: usize,
    fingerprint: u64,
    reps: Vec<ElementId>,
    keys: Vec<String>,
    supp: Vec<FlatId>,
    leq: Vec<bool>,
    join: Vec<u32>,
    moebius: Vec<i64>,
    bottom: FlatId,
    top: FlatId,
    chambers: Vec<ElementId>,
}

/// Derives flats, order, join, chambers and the Möbius function.
///
/// The axioms are checked first; a non-LRB is rejected with its witness.
pub fn derive_support(s: &Semigroup) -> Result<SupportStructure, LrbError> {
    s.verify_lrb().into_result()?;
    let n = s.len();
    let words = n.div_ceil(64);
    let mut class_of: BTreeMap<Vec<u64>, FlatId> = BTreeMap::new();
    let mut supp = vec![0; n];
    let mut reps = Vec::new();
    let mut down = vec![0u64; words];
    for x in 0..n {
        down.iter_mut().for_each(|w| *w = 0);
        for y in 0..n {
            if s.mul(x, y) == x {
                down[y / 64] |= 1 << (y % 64);
            }
        }
        let next = reps.len();
        let id = *class_of.entry(down.clone()).or_insert(next);
        if id == next {
            reps.push(x);
        }
        supp[x] = id;
    }
    let k = reps.len();
    let mut leq = vec![false; k * k];
    let mut join = vec![0u32; k * k];
    for a in 0..k {
        for b in 0..k {
            leq[a * k + b] = s.mul(reps[b], reps[a]) == reps[b];
            join[a * k + b] = supp[s.mul(reps[a], reps[b])] as u32;
        }
    }
    let bottom = supp[s.identity()];
    let top = (0..k).fold(bottom, |acc, f| join[acc * k + f] as usize);
    let chambers = (0..n).filter(|&x| supp[x] == top).collect();
    let keys = match s.natural_support() {
        Some(nat) => reps.iter().map(|&r| (nat.label)(r)).collect(),
        None => reps.iter().map(|&r| String::from(s.key(r))).collect(),
    };
    let moebius = moebius_table(k, |a, b| leq[a * k + b]);
    Ok(SupportStructure {
        n_elements: n,
        fingerprint: s.fingerprint(),
        reps,
        keys,
        supp,
        leq,
        join,
        moebius,
        bottom,
        top,
        chambers,
    })
}

/// Möbius function of a finite poset on `0..k`, as a dense table.
pub fn moebius_table(k: usize, leq: impl Fn(usize, usize) -> bool) -> Vec<i64> {
    // Sort by the size of the principal down-set: a linear extension.
    let mut order: Vec<usize> = (0..k).collect();
    let below: Vec<usize> = (0..k)
        .map(|y| (0..k).filter(|&x| leq(x, y)).count())
        .collect();
    order.sort_by_key(|&y| below[y]);
    let mut mu = vec![0i64; k * k];
    for x in 0..k {
        mu[x * k + x] = 1;
        for &y in &order {
            if y == x || !leq(x, y) {
                continue;
            }
            let s: i64 = (0..k)
                .filter(|&z| z != y && leq(x, z) && leq(z, y))
                .map(|z| mu[x * k + z])
                .sum();
            mu[x * k + y] = -s;
        }
    }
    mu
}

impl SupportStructure {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn flats(&self) -> core::ops::Range<FlatId> {
        0..self.reps.len()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Smallest element id with the given support; flats are ordered by it.
    pub fn representative(&self, x: FlatId) -> ElementId {
        self.reps[x]
    }

    pub fn flat_key(&self, x: FlatId) -> &str {
        &self.keys[x]
    }

    pub fn flat_of_key(&self, key: &str) -> Option<FlatId> {
        self.keys.iter().position(|k| k == key)
    }

    pub fn supp(&self, x: ElementId) -> FlatId {
        self.supp[x]
    }

    pub fn supp_map(&self) -> &[FlatId] {
        &self.supp
    }

    #[inline]
    pub fn leq(&self, x: FlatId, y: FlatId) -> bool {
        self.leq[x * self.len() + y]
    }

    #[inline]
    pub fn join(&self, x: FlatId, y: FlatId) -> FlatId {
        self.join[x * self.len() + y] as usize
    }

    pub fn bottom(&self) -> FlatId {
        self.bottom
    }

    pub fn top(&self) -> FlatId {
        self.top
    }

    pub fn chambers(&self) -> &[ElementId] {
        &self.chambers
    }

    pub fn check_flat(&self, x: FlatId) -> Result<(), LrbError> {
        if x < self.len() {
            Ok(())
        } else {
            Err(LrbError::Domain(format!(
                "flat {x} out of range 0..{}",
                self.len()
            )))
        }
    }

    pub fn moebius(&self, x: FlatId, y: FlatId) -> Result<i64, LrbError> {
        self.check_flat(x)?;
        self.check_flat(y)?;
        if !self.leq(x, y) {
            return Err(LrbError::Domain(format!(
                "moebius({}, {}) requires the first flat below the second",
                self.keys[x], self.keys[y]
            )));
        }
        Ok(self.moebius[x * self.len() + y])
    }

    /// `μ(x, y)`, zero when `x ≰ y`.
    #[inline]
    pub fn mu(&self, x: FlatId, y: FlatId) -> i64 {
        self.moebius[x * self.len() + y]
    }

    /// Flats covering `x`.
    pub fn upper_covers(&self, x: FlatId) -> Vec<FlatId> {
        self.flats()
            .filter(|&y| y != x && self.leq(x, y))
            .filter(|&y| {
                !self
                    .flats()
                    .any(|z| z != x && z != y && self.leq(x, z) && self.leq(z, y))
            })
            .collect()
    }

    pub fn atoms(&self) -> Vec<FlatId> {
        self.upper_covers(self.bottom)
    }

    /// Maximal flats other than the top.
    pub fn coatoms(&self) -> Vec<FlatId> {
        self.flats()
            .filter(|&h| h != self.top && self.upper_covers(h) == [self.top])
            .collect()
    }

    /// Number of edges in a longest chain from the bottom to the top.
    pub fn longest_chain(&self) -> usize {
        let mut order: Vec<FlatId> = self.flats().collect();
        let below: Vec<usize> = self
            .flats()
            .map(|y| self.flats().filter(|&x| self.leq(x, y)).count())
            .collect();
        order.sort_by_key(|&y| below[y]);
        let mut len = vec![0usize; self.len()];
        for &y in &order {
            len[y] = self
                .flats()
                .filter(|&x| x != y && self.leq(x, y))
                .map(|x| len[x] + 1)
                .max()
                .unwrap_or(0);
        }
        len[self.top]
    }

    /// Exhaustively checks the lattice axioms and the defining relations
    /// between the product and the support map.
    pub fn check_invariants(&self, s: &Semigroup) -> Result<(), LrbError> {
        if s.fingerprint() != self.fingerprint || s.len() != self.n_elements {
            return Err(LrbError::Domain(
                "support structure belongs to another semigroup".into(),
            ));
        }
        let fail = |msg: String| Err(LrbError::Falsified(msg));
        let k = self.len();
        for a in 0..k {
            if !self.leq(a, a) || !self.leq(self.bottom, a) || !self.leq(a, self.top) {
                return fail(format!("order axioms fail at flat {}", self.keys[a]));
            }
            for b in 0..k {
                if a != b && self.leq(a, b) && self.leq(b, a) {
                    return fail(format!(
                        "antisymmetry fails at {}, {}",
                        self.keys[a], self.keys[b]
                    ));
                }
                let j = self.join(a, b);
                if !self.leq(a, j) || !self.leq(b, j) {
                    return fail(format!(
                        "join of {}, {} is not an upper bound",
                        self.keys[a], self.keys[b]
                    ));
                }
                for c in 0..k {
                    if self.leq(a, b) && self.leq(b, c) && !self.leq(a, c) {
                        return fail(format!("transitivity fails at {}, {}, {}", a, b, c));
                    }
                    if self.leq(a, c) && self.leq(b, c) && !self.leq(j, c) {
                        return fail(format!(
                            "join of {}, {} is not least",
                            self.keys[a], self.keys[b]
                        ));
                    }
                }
            }
        }
        let n = s.len();
        for x in 0..n {
            let mut absorbs_all = true;
            for y in 0..n {
                let xy = s.mul(x, y);
                if self.supp[xy] != self.join(self.supp[x], self.supp[y]) {
                    return fail(format!(
                        "supp(xy) != supp x ∨ supp y at ({}, {})",
                        s.key(x),
                        s.key(y)
                    ));
                }
                if (xy == x) != self.leq(self.supp[y], self.supp[x]) {
                    return fail(format!(
                        "xy = x disagrees with supp y ≤ supp x at ({}, {})",
                        s.key(x),
                        s.key(y)
                    ));
                }
                if xy == y && s.mul(y, x) == x && x != y {
                    return fail(format!(
                        "x ≤ y ≤ x with x != y at ({}, {})",
                        s.key(x),
                        s.key(y)
                    ));
                }
                absorbs_all &= xy == x;
            }
            if absorbs_all != (self.supp[x] == self.top) {
                return fail(format!("chamber criterion fails at {}", s.key(x)));
            }
        }
        Ok(())
    }

    /// Checks that the derived lattice is the one the construction names:
    /// equal natural labels exactly on support classes, with the same order.
    pub fn check_natural(&self, s: &Semigroup) -> Result<(), LrbError> {
        let Some(nat) = s.natural_support() else {
            return Err(LrbError::Domain(format!(
                "{} has no closed-form support",
                s.label()
            )));
        };
        let mut seen: BTreeMap<String, FlatId> = BTreeMap::new();
        for x in 0..s.len() {
            let label = (nat.label)(x);
            let f = self.supp[x];
            if let Some(&g) = seen.get(&label) {
                if g != f {
                    return Err(LrbError::Falsified(format!(
                        "{}: label {label} spans two flats",
                        nat.name
                    )));
                }
            } else if self.keys[f] != label {
                return Err(LrbError::Falsified(format!(
                    "{}: element {} labelled {label} lies in flat {}",
                    nat.name,
                    s.key(x),
                    self.keys[f]
                )));
            } else {
                seen.insert(label, f);
            }
        }
        if seen.len() != self.len() {
            return Err(LrbError::Falsified(format!(
                "{}: flat and label counts differ",
                nat.name
            )));
        }
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.leq(a, b) != (nat.leq)(self.reps[a], self.reps[b]) {
                    return Err(LrbError::Falsified(format!(
                        "{}: order differs at {}, {}",
                        nat.name, self.keys[a], self.keys[b]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dense `leq` matrix for export.
    pub fn leq_matrix(&self) -> Vec<Vec<bool>> {
        self.flats()
            .map(|a| self.flats().map(|b| self.leq(a, b)).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViewKind {
    /// `S_{≥x} = {y : x·y = y}`.
    AtLeast(ElementId),
    /// `S_{≤X} = {y : supp y ≤ X}`.
    AtMost(FlatId),
}

/// A sub-LRB of a parent semigroup, re-indexed as a semigroup of its own.
#[derive(Debug, Clone)]
pub struct SubSemigroupView {
    pub kind: ViewKind,
    /// Parent ids of the members, increasing.
    pub members: Vec<ElementId>,
    pub semigroup: Semigroup,
}

pub fn sub_semigroup(
    s: &Semigroup,
    l: &SupportStructure,
    kind: ViewKind,
) -> Result<SubSemigroupView, LrbError> {
    let (members, identity): (Vec<ElementId>, ElementId) = match kind {
        ViewKind::AtLeast(x) => {
            s.check_id(x)
                .map_err(|_| LrbError::Domain(format!("anchor element {x} out of range")))?;
            ((0..s.len()).filter(|&y| s.mul(x, y) == y).collect(), x)
        }
        ViewKind::AtMost(f) => {
            l.check_flat(f)?;
            (
                (0..s.len()).filter(|&y| l.leq(l.supp(y), f)).collect(),
                s.identity(),
            )
        }
    };
    let pos: BTreeMap<ElementId, usize> =
        members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut table = Vec::with_capacity(members.len());
    for &a in &members {
        let mut row = Vec::with_capacity(members.len());
        for &b in &members {
            let ab = s.mul(a, b);
            let &p = pos.get(&ab).ok_or_else(|| {
                LrbError::Falsified(format!(
                    "view not closed: {}·{} = {}",
                    s.key(a),
                    s.key(b),
                    s.key(ab)
                ))
            })?;
            row.push(p);
        }
        table.push(row);
    }
    let keys = members.iter().map(|&m| String::from(s.key(m))).collect();
    let label = match kind {
        ViewKind::AtLeast(x) => format!("{}≥{}", s.label(), s.key(x)),
        ViewKind::AtMost(f) => format!("{}≤{}", s.label(), l.flat_key(f)),
    };
    let semigroup = Semigroup::from_table(label, keys, pos[&identity], &table)?;
    Ok(SubSemigroupView {
        kind,
        members,
        semigroup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn one_element_semigroup() {
        let s = Semigroup::from_table("e", vec!["e".into()], 0, &[vec![0]]).unwrap();
        let l = derive_support(&s).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.bottom(), l.top());
        assert_eq!(l.chambers(), &[0]);
        assert_eq!(l.moebius(0, 0).unwrap(), 1);
        l.check_invariants(&s).unwrap();
    }

    #[test]
    fn non_lrb_is_rejected() {
        let t = vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 2, 2]];
        let keys = (0..3).map(|i| i.to_string()).collect();
        let s = Semigroup::from_table("bad", keys, 0, &t).unwrap();
        assert!(matches!(
            derive_support(&s),
            Err(LrbError::AxiomViolation { .. })
        ));
    }

    #[test]
    fn moebius_of_a_three_chain() {
        let mu = moebius_table(3, |a, b| a <= b);
        assert_eq!(mu, vec![1, -1, 0, 0, 1, -1, 0, 0, 1]);
    }
}
