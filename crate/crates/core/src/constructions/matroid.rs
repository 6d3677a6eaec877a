//! Matroids on at most 64 elements and their two LRBs: ordered independent
//! tuples, and chains of flats.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{assemble, mask_label, Field, Guards, Parts, Subspace};
use crate::semigroup::Semigroup;
use crate::LrbError;

/// Largest ground set on which the exchange axiom is checked exhaustively.
pub const EXCHANGE_CHECK_CAP: usize = 12;

/// How a matroid is specified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatroidSpec {
    /// Ground set labels and the full list of independent sets.
    Sets {
        ground: Vec<String>,
        independent: Vec<Vec<String>>,
    },
    /// Column vectors over `F_q`; labels default to the vector digits.
    Vectors {
        q: usize,
        columns: Vec<Vec<u8>>,
        labels: Option<Vec<String>>,
    },
    /// Edges of a simple graph; independent sets are forests. Labels `u-v`.
    Graph { edges: Vec<(usize, usize)> },
    /// `U_{k,m}`: every set of size at most `k`. Labels `1..m`.
    Uniform { k: usize, m: usize },
    /// Every subset of `[n]` independent. Labels `1..n`.
    Free { n: usize },
}

#[derive(Debug, Clone)]
enum Oracle {
    Explicit(BTreeSet<u64>),
    Vectors {
        field: Field,
        columns: Vec<Vec<u8>>,
    },
    Graph {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Uniform(usize),
}

#[derive(Debug, Clone)]
pub struct Matroid {
    labels: Vec<String>,
    oracle: Oracle,
    rank: usize,
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

impl Matroid {
    pub fn build(spec: &MatroidSpec) -> Result<Self, LrbError> {
        let (labels, oracle) = match spec {
            MatroidSpec::Sets {
                ground,
                independent,
            } => {
                let pos: BTreeMap<&str, usize> = ground
                    .iter()
                    .enumerate()
                    .map(|(i, g)| (g.as_str(), i))
                    .collect();
                if pos.len() != ground.len() {
                    return Err(LrbError::Invalid("duplicate ground labels".into()));
                }
                let mut sets = BTreeSet::new();
                for set in independent {
                    let mut m = 0u64;
                    for e in set {
                        let &i = pos.get(e.as_str()).ok_or_else(|| {
                            LrbError::Invalid(format!("`{e}` is not in the ground set"))
                        })?;
                        m |= 1 << i;
                    }
                    sets.insert(m);
                }
                (ground.clone(), Oracle::Explicit(sets))
            }
            MatroidSpec::Vectors { q, columns, labels } => {
                let field = Field::new(*q)?;
                let dim = columns.first().map_or(0, Vec::len);
                if columns
                    .iter()
                    .any(|c| c.len() != dim || c.iter().any(|&x| x as usize >= *q))
                {
                    return Err(LrbError::Invalid(
                        "columns must have equal length and entries below q".into(),
                    ));
                }
                let labels = match labels {
                    Some(l) if l.len() == columns.len() => l.clone(),
                    Some(_) => {
                        return Err(LrbError::Invalid(
                            "label count differs from column count".into(),
                        ))
                    }
                    None => columns.iter().map(|c| field.vector_key(c)).collect(),
                };
                (
                    labels,
                    Oracle::Vectors {
                        field,
                        columns: columns.clone(),
                    },
                )
            }
            MatroidSpec::Graph { edges } => {
                let mut seen = BTreeSet::new();
                for &(u, v) in edges {
                    if u == v || !seen.insert((u.min(v), u.max(v))) {
                        return Err(LrbError::Invalid(format!(
                            "graph is not simple at edge {u}-{v}"
                        )));
                    }
                }
                let vertices = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
                let labels = edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
                (
                    labels,
                    Oracle::Graph {
                        vertices,
                        edges: edges.clone(),
                    },
                )
            }
            MatroidSpec::Uniform { k, m } => (
                (1..=*m).map(|i| i.to_string()).collect(),
                Oracle::Uniform(*k),
            ),
            MatroidSpec::Free { n } => (
                (1..=*n).map(|i| i.to_string()).collect(),
                Oracle::Uniform(*n),
            ),
        };
        if labels.len() > 64 {
            return Err(LrbError::SizeGuard {
                what: "matroid ground set",
                needed: labels.len(),
                limit: 64,
            });
        }
        let mut m = Self {
            labels,
            oracle,
            rank: 0,
        };
        m.rank = m.rank_of(m.full());
        if let Oracle::Explicit(sets) = &m.oracle {
            m.check_explicit(sets)?;
        }
        Ok(m)
    }

    fn check_explicit(&self, sets: &BTreeSet<u64>) -> Result<(), LrbError> {
        let bad = |msg: String| Err(LrbError::Invalid(format!("not a matroid: {msg}")));
        if !sets.contains(&0) {
            return bad("the empty set is not independent".into());
        }
        for &s in sets {
            for i in bits(s) {
                if !sets.contains(&(s & !(1 << i))) {
                    return bad(format!(
                        "{} has a dependent subset",
                        mask_label(s, &self.labels)
                    ));
                }
            }
        }
        if self.len() <= EXCHANGE_CHECK_CAP {
            for &a in sets {
                for &b in sets {
                    if a.count_ones() < b.count_ones()
                        && !bits(b & !a).any(|x| sets.contains(&(a | 1 << x)))
                    {
                        return bad(format!(
                            "exchange fails for {} and {}",
                            mask_label(a, &self.labels),
                            mask_label(b, &self.labels)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn full(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// Rank of the matroid.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_independent(&self, mask: u64) -> bool {
        match &self.oracle {
            Oracle::Explicit(sets) => sets.contains(&mask),
            Oracle::Uniform(k) => mask.count_ones() as usize <= *k,
            Oracle::Vectors { field, columns } => {
                let vs: Vec<Vec<u8>> = bits(mask).map(|i| columns[i].clone()).collect();
                Subspace::span(field, &vs).dim() == vs.len()
            }
            Oracle::Graph { vertices, edges } => {
                let mut parent: Vec<usize> = (0..*vertices).collect();
                fn find(p: &mut [usize], mut x: usize) -> usize {
                    while p[x] != x {
                        p[x] = p[p[x]];
                        x = p[x];
                    }
                    x
                }
                for i in bits(mask) {
                    let (u, v) = edges[i];
                    let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                    if a == b {
                        return false;
                    }
                    parent[a] = b;
                }
                true
            }
        }
    }

    /// Greedy rank: the size of any maximal independent subset.
    pub fn rank_of(&self, mask: u64) -> usize {
        let mut basis = 0u64;
        for i in bits(mask) {
            if self.is_independent(basis | 1 << i) {
                basis |= 1 << i;
            }
        }
        basis.count_ones() as usize
    }

    pub fn closure(&self, mask: u64) -> u64 {
        let r = self.rank_of(mask);
        (0..self.len()).fold(mask, |acc, i| {
            if acc >> i & 1 == 0 && self.rank_of(mask | 1 << i) == r {
                acc | 1 << i
            } else {
                acc
            }
        })
    }

    /// All flats, sorted by rank and then by mask.
    pub fn flats(&self) -> Vec<u64> {
        let mut found = BTreeSet::new();
        let mut stack = vec![self.closure(0)];
        while let Some(f) = stack.pop() {
            if !found.insert(f) {
                continue;
            }
            for i in 0..self.len() {
                if f >> i & 1 == 0 {
                    stack.push(self.closure(f | 1 << i));
                }
            }
        }
        let mut v: Vec<u64> = found.into_iter().collect();
        v.sort_by_key(|&f| (self.rank_of(f), f));
        v
    }

    pub fn flat_label(&self, mask: u64) -> String {
        mask_label(mask, &self.labels)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatroidKind {
    /// Ordered independent tuples; chambers are ordered bases.
    OrderedBases,
    /// Chains of flats with ranks `1, 2, …` below the top; chambers are complete flags.
    FlagChains,
}

/// The LRB of a matroid.
pub fn matroid_lrb(m: &Matroid, kind: MatroidKind, guards: &Guards) -> Result<Semigroup, LrbError> {
    let m = Arc::new(m.clone());
    let r = m.rank();
    match kind {
        MatroidKind::OrderedBases => {
            let mut elements = Vec::new();
            let mut stack: Vec<(Vec<u8>, u64)> = vec![(Vec::new(), 0)];
            while let Some((t, mask)) = stack.pop() {
                for i in 0..m.len() {
                    if mask >> i & 1 == 0 && m.is_independent(mask | 1 << i) {
                        let mut t2 = t.clone();
                        t2.push(i as u8);
                        stack.push((t2, mask | 1 << i));
                    }
                }
                elements.push(t);
                guards.admit("ordered independent sets", elements.len() + stack.len())?;
            }
            let (m1, m2, m3, m4) = (m.clone(), m.clone(), m.clone(), m);
            let mask_of = |t: &[u8]| t.iter().fold(0u64, |acc, &i| acc | 1 << i);
            assemble(
                Parts {
                    label: String::from("matroid ordered bases"),
                    elements,
                    identity: Vec::new(),
                    mul: move |x: &Vec<u8>, y: &Vec<u8>| {
                        let mut out = x.clone();
                        let mut mask = mask_of(x);
                        for &i in y {
                            if out.len() == r {
                                break;
                            }
                            if mask >> i & 1 == 0 && m1.is_independent(mask | 1 << i) {
                                out.push(i);
                                mask |= 1 << i;
                            }
                        }
                        out
                    },
                    key: move |t: &Vec<u8>| {
                        let parts: Vec<&str> =
                            t.iter().map(|&i| m2.labels[i as usize].as_str()).collect();
                        format!("({})", parts.join(" "))
                    },
                    grade: |t: &Vec<u8>| t.len() as u32,
                    support_name: String::from("flats of the matroid"),
                    support_label: move |t: &Vec<u8>| m3.flat_label(m3.closure(mask_of(t))),
                    support_leq: move |x: &Vec<u8>, y: &Vec<u8>| {
                        m4.closure(mask_of(x)) & !m4.closure(mask_of(y)) == 0
                    },
                },
                guards,
            )
        }
        MatroidKind::FlagChains => {
            let top = m.full();
            let bottom = m.closure(0);
            let mut elements = Vec::new();
            let mut stack: Vec<Vec<u64>> = vec![Vec::new()];
            while let Some(chain) = stack.pop() {
                if chain.len() + 1 < r {
                    let last = chain.last().copied().unwrap_or(bottom);
                    let children: BTreeSet<u64> = (0..m.len())
                        .filter(|&i| last >> i & 1 == 0)
                        .map(|i| m.closure(last | 1 << i))
                        .collect();
                    for c in children {
                        let mut next = chain.clone();
                        next.push(c);
                        stack.push(next);
                    }
                }
                elements.push(chain);
                guards.admit("flag chains", elements.len() + stack.len())?;
            }
            let support = move |c: &[u64]| -> u64 {
                if c.len() + 1 < r {
                    c.last().copied().unwrap_or(bottom)
                } else {
                    top
                }
            };
            let (m1, m2, m3) = (m.clone(), m.clone(), m);
            assemble(
                Parts {
                    label: String::from("matroid flag chains"),
                    elements,
                    identity: Vec::new(),
                    mul: move |x: &Vec<u64>, y: &Vec<u64>| {
                        let base = x.last().copied().unwrap_or(bottom);
                        let mut out = x.clone();
                        let mut last = base;
                        for &yj in y {
                            let z = m1.closure(base | yj);
                            if z != top && z != last {
                                out.push(z);
                                last = z;
                            }
                        }
                        out
                    },
                    key: move |c: &Vec<u64>| {
                        let parts: Vec<String> = c.iter().map(|&f| m2.flat_label(f)).collect();
                        format!("({})", parts.join(" "))
                    },
                    grade: |c: &Vec<u64>| c.len() as u32,
                    support_name: String::from("flats of rank other than r-1"),
                    support_label: move |c: &Vec<u64>| m3.flat_label(support(c)),
                    support_leq: move |x: &Vec<u64>, y: &Vec<u64>| support(x) & !support(y) == 0,
                },
                guards,
            )
        }
    }
}
