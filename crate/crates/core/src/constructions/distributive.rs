//! Finite distributive lattices and the LRB of their chains `0̂ < x_1 < … < 1̂`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{assemble, Guards, Parts};
use crate::semigroup::Semigroup;
use crate::LrbError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributiveLattice {
    labels: Vec<String>,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl DistributiveLattice {
    /// Builds a lattice from its covering relation and checks distributivity
    /// on all triples.
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self, LrbError> {
        let n = labels.len();
        if n == 0 {
            return Err(LrbError::Invalid(
                "a lattice needs at least one element".into(),
            ));
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(LrbError::Invalid(format!("cover ({a},{b}) out of range")));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(LrbError::Invalid("covering relation has a cycle".into()));
                }
            }
        }
        Self::from_order(labels, leq)
    }

    fn from_order(labels: Vec<String>, leq: Vec<bool>) -> Result<Self, LrbError> {
        let n = labels.len();
        let le = |a: usize, b: usize| leq[a * n + b];
        let bound = |a: usize, b: usize, upper: bool| -> Result<usize, LrbError> {
            let cands: Vec<usize> = (0..n)
                .filter(|&z| {
                    if upper {
                        le(a, z) && le(b, z)
                    } else {
                        le(z, a) && le(z, b)
                    }
                })
                .collect();
            cands
                .iter()
                .copied()
                .find(|&z| {
                    cands
                        .iter()
                        .all(|&w| if upper { le(z, w) } else { le(w, z) })
                })
                .ok_or_else(|| {
                    LrbError::Invalid(format!(
                        "{} and {} have no {}",
                        labels[a],
                        labels[b],
                        if upper { "join" } else { "meet" }
                    ))
                })
        };
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = bound(a, b, false)?;
                join[a * n + b] = bound(a, b, true)?;
            }
        }
        let bottom = (0..n).find(|&z| (0..n).all(|w| le(z, w))).unwrap();
        let top = (0..n).find(|&z| (0..n).all(|w| le(w, z))).unwrap();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if meet[a * n + join[b * n + c]] != join[meet[a * n + b] * n + meet[a * n + c]]
                    {
                        return Err(LrbError::Invalid(format!(
                            "not distributive at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        Ok(Self {
            labels,
            leq,
            meet,
            join,
            bottom,
            top,
        })
    }

    /// The chain `0 < 1 < … < n`.
    pub fn chain(n: usize) -> Self {
        let labels = (0..=n).map(|i| i.to_string()).collect();
        let leq = (0..=n).flat_map(|a| (0..=n).map(move |b| a <= b)).collect();
        Self::from_order(labels, leq).expect("chains are distributive")
    }

    /// The product of chains `{0..p} × {0..q}`, labels `i,j`.
    pub fn grid(p: usize, q: usize) -> Self {
        let elems: Vec<(usize, usize)> =
            (0..=p).flat_map(|i| (0..=q).map(move |j| (i, j))).collect();
        let labels = elems.iter().map(|(i, j)| format!("{i},{j}")).collect();
        let leq = elems
            .iter()
            .flat_map(|a| elems.iter().map(move |b| a.0 <= b.0 && a.1 <= b.1))
            .collect();
        Self::from_order(labels, leq).expect("products of chains are distributive")
    }

    /// Subsets of `[n]`, labels `{1,2}`.
    pub fn boolean(n: usize) -> Self {
        let size = 1usize << n;
        let labels = (0..size)
            .map(|m| {
                let items: Vec<String> = (0..n)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| (i + 1).to_string())
                    .collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        let leq = (0..size)
            .flat_map(|a| (0..size).map(move |b| a & !b == 0))
            .collect();
        Self::from_order(labels, leq).expect("Boolean lattices are distributive")
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

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Join-irreducible elements: those with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| {
                let below: Vec<usize> = (0..self.len())
                    .filter(|&y| y != x && self.leq(y, x))
                    .collect();
                let covers = below
                    .iter()
                    .filter(|&&y| !below.iter().any(|&z| z != y && self.leq(y, z)))
                    .count();
                covers == 1
            })
            .collect()
    }
}

/// Refines the chain `e` by `f`: the sequence `e_{i−1} ∨ (f_j ∧ e_i)` with
/// repetitions deleted.
fn refine(d: &DistributiveLattice, e: &[usize], f: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(e.len() * f.len());
    out.push(e[0]);
    for i in 1..e.len() {
        for &fj in f {
            let g = d.join(e[i - 1], d.meet(fj, e[i]));
            if out.last() != Some(&g) {
                out.push(g);
            }
        }
    }
    out
}

/// The LRB of strict chains from `0̂` to `1̂` in a distributive lattice.
pub fn dist_chain_lrb(d: &DistributiveLattice, guards: &Guards) -> Result<Semigroup, LrbError> {
    let d = Arc::new(d.clone());
    let (bot, top) = (d.bottom(), d.top());
    let mut elements = Vec::new();
    let mut stack = vec![vec![bot]];
    while let Some(chain) = stack.pop() {
        let last = *chain.last().unwrap();
        if last == top {
            elements.push(chain);
            guards.admit("lattice chains", elements.len() + stack.len())?;
            continue;
        }
        for y in 0..d.len() {
            if y != last && d.leq(last, y) {
                let mut next = chain.clone();
                next.push(y);
                stack.push(next);
            }
        }
    }
    let identity = if bot == top {
        vec![bot]
    } else {
        vec![bot, top]
    };
    // Support of a chain: the set partition of the join-irreducibles cut
    // out by its successive differences.
    let ji = Arc::new(d.join_irreducibles());
    let blocks = {
        let (d, ji) = (d.clone(), ji.clone());
        move |c: &[usize]| -> BTreeSet<u64> {
            c.windows(2)
                .map(|w| {
                    ji.iter()
                        .enumerate()
                        .filter(|&(_, &j)| d.leq(j, w[1]) && !d.leq(j, w[0]))
                        .fold(0u64, |m, (k, _)| m | 1 << k)
                })
                .collect()
        }
    };
    let (d1, d2, d3) = (d.clone(), d.clone(), d);
    let b1 = blocks.clone();
    assemble(
        Parts {
            label: String::from("lattice chains"),
            elements,
            identity,
            mul: move |x: &Vec<usize>, y: &Vec<usize>| refine(&d1, x, y),
            key: move |c: &Vec<usize>| {
                let parts: Vec<&str> = c.iter().map(|&i| d2.labels[i].as_str()).collect();
                parts.join("<")
            },
            grade: |c: &Vec<usize>| c.len().saturating_sub(2) as u32,
            support_name: String::from(
                "partitions of the join-irreducibles into chain differences",
            ),
            support_label: move |c: &Vec<usize>| {
                let parts: Vec<String> = b1(c)
                    .iter()
                    .map(|&m| {
                        let items: Vec<&str> = (0..ji.len())
                            .filter(|k| m >> k & 1 == 1)
                            .map(|k| d3.labels[ji[k]].as_str())
                            .collect();
                        items.join(",")
                    })
                    .collect();
                format!("{{{}}}", parts.join("|"))
            },
            support_leq: move |x: &Vec<usize>, y: &Vec<usize>| {
                let (bx, by) = (blocks(x), blocks(y));
                by.iter().all(|&f| bx.iter().any(|&c| f & !c == 0))
            },
        },
        guards,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_six_maximal_chains() {
        let d = DistributiveLattice::grid(2, 2);
        let s = dist_chain_lrb(&d, &Guards::default()).unwrap();
        let maximal = s
            .keys()
            .iter()
            .filter(|k| k.matches('<').count() == 4)
            .count();
        assert_eq!(maximal, 6);
        assert_eq!(s.key(s.identity()), "0,0<2,2");
    }

    #[test]
    fn chain_lattice_has_one_maximal_chain() {
        let d = DistributiveLattice::chain(3);
        let s = dist_chain_lrb(&d, &Guards::default()).unwrap();
        assert_eq!(
            s.keys()
                .iter()
                .filter(|k| k.matches('<').count() == 3)
                .count(),
            1
        );
    }

    #[test]
    fn pentagon_is_rejected() {
        // 0 < a < b < 1, 0 < c < 1
        let labels = ["0", "a", "b", "c", "1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let covers = [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)];
        assert!(DistributiveLattice::from_covers(labels, &covers).is_err());
    }

    #[test]
    fn trivial_lattice() {
        let d = DistributiveLattice::chain(0);
        let s = dist_chain_lrb(&d, &Guards::default()).unwrap();
        assert_eq!(s.len(), 1);
    }
}
