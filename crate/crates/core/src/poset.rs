//! Finite posets with `0̂` and `1̂`, with the builders used for derangement numbers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::constructions::{Field, Matroid, Subspace};
use crate::support::{moebius_table, SupportStructure};
use crate::LrbError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<bool>,
    covers: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

impl FinitePoset {
    /// From a full order relation; checks reflexivity, antisymmetry,
    /// transitivity and the existence of `0̂` and `1̂`.
    pub fn from_relation(
        labels: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, LrbError> {
        let n = labels.len();
        if n == 0 {
            return Err(LrbError::Invalid(
                "a poset needs at least one element".into(),
            ));
        }
        let rel: Vec<bool> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| leq(a, b))
            .collect();
        let le = |a: usize, b: usize| rel[a * n + b];
        for a in 0..n {
            if !le(a, a) {
                return Err(LrbError::Invalid(format!("{} is not ≤ itself", labels[a])));
            }
            for b in 0..n {
                if a != b && le(a, b) && le(b, a) {
                    return Err(LrbError::Invalid(format!(
                        "{} and {} are equivalent",
                        labels[a], labels[b]
                    )));
                }
                if le(a, b) {
                    for c in 0..n {
                        if le(b, c) && !le(a, c) {
                            return Err(LrbError::Invalid(format!(
                                "not transitive at {}, {}, {}",
                                labels[a], labels[b], labels[c]
                            )));
                        }
                    }
                }
            }
        }
        let bottom = (0..n)
            .find(|&z| (0..n).all(|w| le(z, w)))
            .ok_or_else(|| LrbError::Invalid("no least element".into()))?;
        let top = (0..n)
            .find(|&z| (0..n).all(|w| le(w, z)))
            .ok_or_else(|| LrbError::Invalid("no greatest element".into()))?;
        let covers = (0..n)
            .map(|x| {
                (0..n)
                    .filter(|&y| {
                        y != x
                            && le(x, y)
                            && !(0..n).any(|z| z != x && z != y && le(x, z) && le(z, y))
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            labels,
            leq: rel,
            covers,
            bottom,
            top,
        })
    }

    /// From a covering relation, closed transitively.
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self, LrbError> {
        let n = labels.len();
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(LrbError::Invalid(format!("cover ({a},{b}) out of range")));
            }
            rel[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i * n + k] {
                    for j in 0..n {
                        if rel[k * n + j] {
                            rel[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_relation(labels, |a, b| rel[a * n + b])
    }

    /// Subsets of `[n]`.
    pub fn boolean(n: usize) -> Self {
        let labels = (0..1usize << n).map(|m| set_label(m as u64, 1)).collect();
        Self::from_relation(labels, |a, b| a & !b == 0).expect("Boolean lattice")
    }

    /// The chain `0 < 1 < … < n`.
    pub fn chain(n: usize) -> Self {
        Self::from_relation((0..=n).map(|i| i.to_string()).collect(), |a, b| a <= b).expect("chain")
    }

    /// Subspaces of `F_q^n` under inclusion.
    pub fn subspace(n: usize, q: usize) -> Result<Self, LrbError> {
        let field = Field::new(q)?;
        let vectors = field.nonzero_vectors(n);
        let mut found: BTreeMap<String, Subspace> = BTreeMap::new();
        let mut frontier = vec![Subspace::zero()];
        found.insert(Subspace::zero().key(&field), Subspace::zero());
        while let Some(u) = frontier.pop() {
            for v in &vectors {
                if !u.contains(&field, v) {
                    let w = u.with_vector(&field, v);
                    let key = w.key(&field);
                    if let alloc::collections::btree_map::Entry::Vacant(e) = found.entry(key) {
                        e.insert(w.clone());
                        frontier.push(w);
                    }
                }
            }
        }
        let mut spaces: Vec<(String, Subspace)> = found.into_iter().collect();
        spaces.sort_by_key(|(k, s)| (s.dim(), k.clone()));
        let labels = spaces.iter().map(|(k, _)| k.clone()).collect();
        Self::from_relation(labels, |a, b| {
            spaces[b].1.contains_subspace(&field, &spaces[a].1)
        })
    }

    /// Partitions of `[n]` ordered by refinement.
    pub fn partition_lattice(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        contraction(n, &edges, 1).expect("partition lattice")
    }

    /// Partitions of the vertices `0..vertices` into blocks that induce
    /// connected subgraphs, ordered by refinement.
    pub fn contraction_lattice(
        vertices: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self, LrbError> {
        contraction(vertices, edges, 0)
    }

    /// Componentwise order on pairs.
    pub fn product(a: &Self, b: &Self) -> Self {
        let (na, nb) = (a.len(), b.len());
        let labels = (0..na * nb)
            .map(|i| format!("{},{}", a.labels[i / nb], b.labels[i % nb]))
            .collect();
        Self::from_relation(labels, |x, y| {
            a.leq(x / nb, y / nb) && b.leq(x % nb, y % nb)
        })
        .expect("product of posets")
    }

    /// All flats of a matroid under inclusion.
    pub fn matroid_flats(m: &Matroid) -> Self {
        let flats = m.flats();
        let labels = flats.iter().map(|&f| m.flat_label(f)).collect();
        Self::from_relation(labels, |a, b| flats[a] & !flats[b] == 0).expect("lattice of flats")
    }

    /// The lattice of flats of a derived support structure.
    pub fn from_support(l: &SupportStructure) -> Self {
        let labels = l.flats().map(|x| l.flat_key(x).to_string()).collect();
        Self::from_relation(labels, |a, b| l.leq(a, b)).expect("support lattices are lattices")
    }

    /// The interval `[x, y]` as a poset in its own right, with the map back.
    pub fn interval(&self, x: usize, y: usize) -> Result<(Self, Vec<usize>), LrbError> {
        if x >= self.len() || y >= self.len() || !self.leq(x, y) {
            return Err(LrbError::Domain(format!("[{x}, {y}] is not an interval")));
        }
        let members: Vec<usize> = (0..self.len())
            .filter(|&z| self.leq(x, z) && self.leq(z, y))
            .collect();
        let labels = members.iter().map(|&z| self.labels[z].clone()).collect();
        let p = Self::from_relation(labels, |a, b| self.leq(members[a], members[b]))?;
        Ok((p, members))
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

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.covers[x]
    }

    pub fn atoms(&self) -> &[usize] {
        &self.covers[self.bottom]
    }

    /// Elements in an order-compatible sequence.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        let below: Vec<usize> = order
            .iter()
            .map(|&x| (0..self.len()).filter(|&y| self.leq(y, x)).count())
            .collect();
        order.sort_by_key(|&x| (below[x], x));
        order
    }

    /// `μ(x, y)` for all pairs, row-major.
    pub fn moebius(&self) -> Vec<i64> {
        moebius_table(self.len(), |a, b| self.leq(a, b))
    }

    /// Rank of each element, if every maximal chain of every interval
    /// `[0̂, x]` has the same length.
    pub fn ranks(&self) -> Option<Vec<usize>> {
        let mut rank = vec![0usize; self.len()];
        for x in self.linear_extension() {
            for &y in &self.covers[x] {
                rank[y] = rank[y].max(rank[x] + 1);
            }
        }
        let graded =
            (0..self.len()).all(|x| self.covers[x].iter().all(|&y| rank[y] == rank[x] + 1));
        graded.then_some(rank)
    }

    pub fn is_graded(&self) -> bool {
        self.ranks().is_some()
    }

    /// Number of maximal chains in `[x, 1̂]` for every `x`.
    pub(crate) fn upper_chain_counts(&self) -> Vec<i128> {
        let mut count = vec![0i128; self.len()];
        for x in self.linear_extension().into_iter().rev() {
            count[x] = if x == self.top {
                1
            } else {
                self.covers[x].iter().map(|&y| count[y]).sum()
            };
        }
        count
    }
}

/// Number of maximal chains of a graded poset.
pub fn maximal_chain_count(p: &FinitePoset) -> Result<i128, LrbError> {
    if !p.is_graded() {
        return Err(LrbError::Invalid("poset is not graded".into()));
    }
    Ok(p.upper_chain_counts()[p.bottom()])
}

fn set_label(mask: u64, offset: usize) -> String {
    let items: Vec<String> = (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + offset).to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

fn partition_label(blocks: &[u64], offset: usize) -> String {
    let parts: Vec<String> = blocks
        .iter()
        .map(|&b| {
            let items: Vec<String> = (0..64)
                .filter(|i| b >> i & 1 == 1)
                .map(|i| (i + offset).to_string())
                .collect();
            items.join(",")
        })
        .collect();
    format!("{{{}}}", parts.join("|"))
}

fn set_partitions(n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut blocks: Vec<u64> = Vec::new();
    fn go(i: usize, n: usize, blocks: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << i;
            go(i + 1, n, blocks, out);
            blocks[b] &= !(1 << i);
        }
        blocks.push(1 << i);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    go(0, n, &mut blocks, &mut out);
    out
}

fn connected(block: u64, adj: &[u64]) -> bool {
    let start = block.trailing_zeros() as usize;
    let mut seen = 1u64 << start;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        let mut next = adj[v] & block & !seen;
        while next != 0 {
            let w = next.trailing_zeros() as usize;
            next &= next - 1;
            seen |= 1 << w;
            stack.push(w);
        }
    }
    seen == block
}

const MAX_VERTICES: usize = 10;

fn contraction(
    vertices: usize,
    edges: &[(usize, usize)],
    offset: usize,
) -> Result<FinitePoset, LrbError> {
    if vertices > MAX_VERTICES {
        return Err(LrbError::SizeGuard {
            what: "graph vertices",
            needed: vertices,
            limit: MAX_VERTICES,
        });
    }
    let mut adj = vec![0u64; vertices];
    let mut seen = BTreeSet::new();
    for &(u, v) in edges {
        if u >= vertices || v >= vertices || u == v {
            return Err(LrbError::Invalid(format!(
                "edge {u}-{v} is not a simple edge on {vertices} vertices"
            )));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(LrbError::Invalid(format!("edge {u}-{v} repeated")));
        }
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut parts: Vec<Vec<u64>> = set_partitions(vertices)
        .into_iter()
        .filter(|p| p.iter().all(|&b| connected(b, &adj)))
        .collect();
    parts.sort_by_key(|p| core::cmp::Reverse(p.len()));
    let labels = parts.iter().map(|p| partition_label(p, offset)).collect();
    FinitePoset::from_relation(labels, |a, b| {
        parts[a]
            .iter()
            .all(|&x| parts[b].iter().any(|&y| x & !y == 0))
    })
}
