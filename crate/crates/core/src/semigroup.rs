//! Finite semigroups with identity, given by an element list and a product.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::LrbError;

pub type ElementId = usize;

/// Products are tabulated up to this many elements by default.
pub const DEFAULT_TABLE_CAP: usize = 2048;
/// Associativity is checked on all triples up to this size.
pub const EXHAUSTIVE_ASSOCIATIVITY_CAP: usize = 300;
/// Number of random triples checked above the exhaustive cap.
pub const SAMPLED_TRIPLES: usize = 100_000;
/// Idempotence and deletion are checked on all pairs up to this size.
pub const EXHAUSTIVE_PAIR_CAP: usize = 2000;

type Rule = Arc<dyn Fn(ElementId, ElementId) -> ElementId + Send + Sync>;
type Labeler = Arc<dyn Fn(ElementId) -> String + Send + Sync>;
type Comparator = Arc<dyn Fn(ElementId, ElementId) -> bool + Send + Sync>;

#[derive(Clone)]
enum Product {
    Table(Arc<Vec<u32>>),
    Rule(Rule),
}

/// The support map a construction knows in closed form: a label for the
/// support of each element and the order between supports.
#[derive(Clone)]
pub struct NaturalSupport {
    pub name: String,
    pub label: Labeler,
    /// `leq(x, y)` iff the support of `x` lies below the support of `y`.
    pub leq: Comparator,
}

/// A finite semigroup with identity.
#[derive(Clone)]
pub struct Semigroup {
    label: String,
    keys: Arc<Vec<String>>,
    index: Arc<BTreeMap<String, ElementId>>,
    identity: ElementId,
    product: Product,
    grades: Option<Arc<Vec<u32>>>,
    natural: Option<NaturalSupport>,
    fingerprint: u64,
}

impl fmt::Debug for Semigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Semigroup")
            .field("label", &self.label)
            .field("size", &self.len())
            .field("tabulated", &self.is_tabulated())
            .finish()
    }
}

fn fingerprint(label: &str, keys: &[String]) -> u64 {
    // FNV-1a over the label and keys; only used to detect mixing of handles.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label
        .bytes()
        .chain(keys.iter().flat_map(|k| k.bytes().chain([0u8])))
    {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn build_index(keys: &[String]) -> Result<BTreeMap<String, ElementId>, LrbError> {
    let mut index = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        if index.insert(k.clone(), i).is_some() {
            return Err(LrbError::Malformed(format!("duplicate element key `{k}`")));
        }
    }
    Ok(index)
}

impl Semigroup {
    /// A semigroup from a dense multiplication table, `table[x][y] = x·y`.
    pub fn from_table(
        label: impl Into<String>,
        keys: Vec<String>,
        identity: ElementId,
        table: &[Vec<usize>],
    ) -> Result<Self, LrbError> {
        let n = keys.len();
        if n == 0 {
            return Err(LrbError::Malformed("no elements".into()));
        }
        if identity >= n {
            return Err(LrbError::Malformed(format!(
                "identity {identity} out of range 0..{n}"
            )));
        }
        if table.len() != n {
            return Err(LrbError::Malformed(format!(
                "table has {} rows, expected {n}",
                table.len()
            )));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(LrbError::Malformed(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(LrbError::Malformed(format!(
                        "entry ({i},{j}) = {v} out of range"
                    )));
                }
                flat.push(v as u32);
            }
        }
        let label = label.into();
        let index = build_index(&keys)?;
        Ok(Self {
            fingerprint: fingerprint(&label, &keys),
            label,
            keys: Arc::new(keys),
            index: Arc::new(index),
            identity,
            product: Product::Table(Arc::new(flat)),
            grades: None,
            natural: None,
        })
    }

    /// A semigroup whose product is evaluated by `rule`; tabulated when the
    /// element count is at most `table_cap`.
    pub fn from_rule(
        label: impl Into<String>,
        keys: Vec<String>,
        identity: ElementId,
        rule: impl Fn(ElementId, ElementId) -> ElementId + Send + Sync + 'static,
        table_cap: usize,
    ) -> Result<Self, LrbError> {
        let n = keys.len();
        if n == 0 || identity >= n {
            return Err(LrbError::Malformed(
                "empty semigroup or identity out of range".into(),
            ));
        }
        let label = label.into();
        let index = build_index(&keys)?;
        let product = if n <= table_cap {
            let mut flat = Vec::with_capacity(n * n);
            for x in 0..n {
                for y in 0..n {
                    let v = rule(x, y);
                    if v >= n {
                        return Err(LrbError::Malformed(format!("rule maps ({x},{y}) to {v}")));
                    }
                    flat.push(v as u32);
                }
            }
            Product::Table(Arc::new(flat))
        } else {
            Product::Rule(Arc::new(rule))
        };
        Ok(Self {
            fingerprint: fingerprint(&label, &keys),
            label,
            keys: Arc::new(keys),
            index: Arc::new(index),
            identity,
            product,
            grades: None,
            natural: None,
        })
    }

    /// Attaches a grading (for example word length) used to select canonical weights.
    pub fn with_grades(mut self, grades: Vec<u32>) -> Self {
        assert_eq!(grades.len(), self.len());
        self.grades = Some(Arc::new(grades));
        self
    }

    pub fn with_natural_support(mut self, natural: NaturalSupport) -> Self {
        self.natural = Some(natural);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn identity(&self) -> ElementId {
        self.identity
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn key(&self, x: ElementId) -> &str {
        &self.keys[x]
    }

    pub fn id_of(&self, key: &str) -> Result<ElementId, LrbError> {
        self.index
            .get(key)
            .copied()
            .ok_or_else(|| LrbError::UnknownKey(key.into()))
    }

    pub fn grade(&self, x: ElementId) -> Option<u32> {
        self.grades.as_ref().map(|g| g[x])
    }

    pub fn grades(&self) -> Option<&[u32]> {
        self.grades.as_deref().map(Vec::as_slice)
    }

    pub fn natural_support(&self) -> Option<&NaturalSupport> {
        self.natural.as_ref()
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.product, Product::Table(_))
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    #[inline]
    pub fn mul(&self, x: ElementId, y: ElementId) -> ElementId {
        match &self.product {
            Product::Table(t) => t[x * self.keys.len() + y] as usize,
            Product::Rule(r) => r(x, y),
        }
    }

    /// Product of a word, left to right; the empty word gives the identity.
    pub fn mul_word(&self, word: &[ElementId]) -> ElementId {
        word.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
    }

    pub fn check_id(&self, x: ElementId) -> Result<(), LrbError> {
        if x < self.len() {
            Ok(())
        } else {
            Err(LrbError::Malformed(format!(
                "element id {x} out of range 0..{}",
                self.len()
            )))
        }
    }

    /// The dense table, materialized if necessary.
    pub fn table(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        (0..n)
            .map(|x| (0..n).map(|y| self.mul(x, y)).collect())
            .collect()
    }

    /// Checks the identity law, associativity, idempotence and `xyx = xy`.
    pub fn verify_lrb(&self) -> AxiomReport {
        let n = self.len();
        let mut checks = Vec::new();

        let mut witness = None;
        for x in 0..n {
            if self.mul(self.identity, x) != x || self.mul(x, self.identity) != x {
                witness = Some(vec![self.identity, x]);
                break;
            }
        }
        checks.push(AxiomCheck {
            axiom: Axiom::Identity,
            level: Level::Exhaustive,
            witness,
        });

        let mut witness = None;
        let level = if n <= EXHAUSTIVE_ASSOCIATIVITY_CAP {
            'outer: for x in 0..n {
                for y in 0..n {
                    let xy = self.mul(x, y);
                    for z in 0..n {
                        if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                            witness = Some(vec![x, y, z]);
                            break 'outer;
                        }
                    }
                }
            }
            Level::Exhaustive
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
            for _ in 0..SAMPLED_TRIPLES {
                let [x, y, z] = [0; 3].map(|_| (rng.next_u64() % n as u64) as usize);
                if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                    witness = Some(vec![x, y, z]);
                    break;
                }
            }
            Level::Sampled(SAMPLED_TRIPLES)
        };
        checks.push(AxiomCheck {
            axiom: Axiom::Associativity,
            level,
            witness,
        });

        let witness = (0..n).find(|&x| self.mul(x, x) != x).map(|x| vec![x]);
        checks.push(AxiomCheck {
            axiom: Axiom::Idempotence,
            level: Level::Exhaustive,
            witness,
        });

        let mut witness = None;
        let deletion_fails = |x: usize, y: usize| {
            let xy = self.mul(x, y);
            self.mul(xy, x) != xy
        };
        let level = if n <= EXHAUSTIVE_PAIR_CAP {
            'outer2: for x in 0..n {
                for y in 0..n {
                    if deletion_fails(x, y) {
                        witness = Some(vec![x, y]);
                        break 'outer2;
                    }
                }
            }
            Level::Exhaustive
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
            for _ in 0..SAMPLED_TRIPLES {
                let x = (rng.next_u64() % n as u64) as usize;
                let y = (rng.next_u64() % n as u64) as usize;
                if deletion_fails(x, y) {
                    witness = Some(vec![x, y]);
                    break;
                }
            }
            Level::Sampled(SAMPLED_TRIPLES)
        };
        checks.push(AxiomCheck {
            axiom: Axiom::Deletion,
            level,
            witness,
        });

        AxiomReport { checks }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Identity,
    Associativity,
    Idempotence,
    Deletion,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Identity => "identity",
            Axiom::Associativity => "associativity",
            Axiom::Idempotence => "idempotence",
            Axiom::Deletion => "xyx=xy",
        }
    }
}

/// How thoroughly an axiom was checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Exhaustive,
    Sampled(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub level: Level,
    /// The failing tuple, if any.
    pub witness: Option<Vec<ElementId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.witness.is_none())
    }

    /// The first failure as an error.
    pub fn into_result(self) -> Result<(), LrbError> {
        match self.checks.into_iter().find(|c| c.witness.is_some()) {
            None => Ok(()),
            Some(c) => Err(LrbError::AxiomViolation {
                axiom: c.axiom.name(),
                witness: c.witness.unwrap(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn keys(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn one_element_semigroup_passes() {
        let s = Semigroup::from_table("trivial", keys(1), 0, &[vec![0]]).unwrap();
        assert!(s.verify_lrb().passed());
    }

    #[test]
    fn left_zero_without_idempotence_fails() {
        // e, a, b with a·b = a, b·a = b, but a·a = b.
        let t = vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 2, 2]];
        let s = Semigroup::from_table("bad", keys(3), 0, &t).unwrap();
        let report = s.verify_lrb();
        assert!(!report.passed());
        let idem = report
            .checks
            .iter()
            .find(|c| c.axiom == Axiom::Idempotence)
            .unwrap();
        assert_eq!(idem.witness, Some(vec![1]));
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(matches!(
            Semigroup::from_table("x", keys(2), 0, &[vec![0, 1], vec![1, 5]]),
            Err(LrbError::Malformed(_))
        ));
        assert!(Semigroup::from_table("x", keys(2), 3, &[vec![0, 1], vec![1, 1]]).is_err());
        assert!(Semigroup::from_table(
            "x",
            vec!["a".into(), "a".into()],
            0,
            &[vec![0, 1], vec![1, 1]]
        )
        .is_err());
    }

    #[test]
    fn non_associative_table_gives_witness() {
        // x·y = y·x = z, z absorbing except identity, x·x = x: fails associativity or deletion.
        let t = vec![
            vec![0, 1, 2, 3],
            vec![1, 1, 3, 3],
            vec![2, 3, 2, 1],
            vec![3, 3, 3, 3],
        ];
        let s = Semigroup::from_table("nonassoc", keys(4), 0, &t).unwrap();
        let r = s.verify_lrb();
        assert!(!r.passed());
        assert!(r.into_result().is_err());
    }
}
