//! The named LRBs: free LRBs and their quotients, ordered set partitions,
//! `q`-analogues over finite fields, matroid semigroups, and chain semigroups
//! of distributive lattices.
//!
//! Every construction orders its elements by grade (word length, number of
//! blocks minus one, or number of intermediate chain members) and then by
//! its internal encoding, so the identity always has id 0.

mod distributive;
mod field;
mod free;
mod matroid;
mod qfree;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

pub use distributive::{dist_chain_lrb, DistributiveLattice};
pub use field::{Field, Subspace};
pub use free::{free_lrb, free_lrb_bar, free_to_bar, ordered_partitions};
pub use matroid::{matroid_lrb, Matroid, MatroidKind, MatroidSpec};
pub use qfree::{q_free_lrb, q_free_to_bar};

use crate::semigroup::{NaturalSupport, Semigroup, DEFAULT_TABLE_CAP};
use crate::LrbError;

/// Size limits applied while building.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Largest semigroup that will be enumerated.
    pub max_elements: usize,
    /// Largest semigroup whose product is tabulated.
    pub table_cap: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Self {
            max_elements: 20_000,
            table_cap: DEFAULT_TABLE_CAP,
        }
    }
}

impl Guards {
    pub(crate) fn admit(&self, what: &'static str, needed: usize) -> Result<(), LrbError> {
        if needed > self.max_elements {
            Err(LrbError::SizeGuard {
                what,
                needed,
                limit: self.max_elements,
            })
        } else {
            Ok(())
        }
    }
}

/// Closed-form description of a construction, used to assemble a [`Semigroup`].
pub(crate) struct Parts<T, M, K, G, SL, SO> {
    pub label: String,
    pub elements: Vec<T>,
    pub identity: T,
    pub mul: M,
    pub key: K,
    pub grade: G,
    pub support_name: String,
    pub support_label: SL,
    pub support_leq: SO,
}

pub(crate) fn assemble<T, M, K, G, SL, SO>(
    parts: Parts<T, M, K, G, SL, SO>,
    guards: &Guards,
) -> Result<Semigroup, LrbError>
where
    T: Ord + Clone + Send + Sync + 'static,
    M: Fn(&T, &T) -> T + Send + Sync + 'static,
    K: Fn(&T) -> String,
    G: Fn(&T) -> u32,
    SL: Fn(&T) -> String + Send + Sync + 'static,
    SO: Fn(&T, &T) -> bool + Send + Sync + 'static,
{
    let Parts {
        label,
        mut elements,
        identity,
        mul,
        key,
        grade,
        support_name,
        support_label,
        support_leq,
    } = parts;
    guards.admit("semigroup elements", elements.len())?;
    elements.sort_by(|a, b| grade(a).cmp(&grade(b)).then_with(|| a.cmp(b)));
    elements.dedup();
    let index: BTreeMap<T, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    let id = *index.get(&identity).ok_or_else(|| {
        LrbError::Malformed(String::from("identity missing from the element list"))
    })?;
    let keys = elements.iter().map(&key).collect();
    let grades = elements.iter().map(&grade).collect();
    let elements = Arc::new(elements);
    let index = Arc::new(index);
    let (e, ix) = (elements.clone(), index.clone());
    let rule = move |x: usize, y: usize| ix.get(&mul(&e[x], &e[y])).copied().unwrap_or(usize::MAX);
    let (e1, e2) = (elements.clone(), elements);
    let natural = NaturalSupport {
        name: support_name,
        label: Arc::new(move |x| support_label(&e1[x])),
        leq: Arc::new(move |x, y| support_leq(&e2[x], &e2[y])),
    };
    Ok(
        Semigroup::from_rule(label, keys, id, rule, guards.table_cap)?
            .with_grades(grades)
            .with_natural_support(natural),
    )
}

/// Renders a bit mask over `labels` as `{a,b}`.
pub(crate) fn mask_label(mask: u64, labels: &[String]) -> String {
    let mut s = String::from("{");
    let mut first = true;
    for (i, l) in labels.iter().enumerate() {
        if mask >> i & 1 == 1 {
            if !first {
                s.push(',');
            }
            s.push_str(l);
            first = false;
        }
    }
    s.push('}');
    s
}
