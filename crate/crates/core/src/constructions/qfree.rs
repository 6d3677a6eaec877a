//! The `q`-analogues: ordered independent tuples in `F_q^n`, and partial
//! flags ending at the whole space.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{assemble, Field, Guards, Parts, Subspace};
use crate::semigroup::{ElementId, Semigroup};
use crate::LrbError;

fn saturating_count(n: usize, q: usize, reduced: bool) -> usize {
    let qn = (q as u128).saturating_pow(n as u32);
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    let levels = if reduced { n } else { n + 1 };
    for l in 0..levels {
        total = total.saturating_add(term);
        let qi = (q as u128).saturating_pow(l as u32);
        term = term.saturating_mul(qn - qi);
        if reduced {
            // Each flag of length l+1 arises from (q^{l+1} − q^l) tuples.
            term /= (q as u128).saturating_pow(l as u32 + 1) - qi;
        }
    }
    total.min(usize::MAX as u128) as usize
}

fn tuple_key(f: &Field, t: &[Vec<u8>]) -> String {
    let parts: Vec<String> = t.iter().map(|v| f.vector_key(v)).collect();
    format!("({})", parts.join(" "))
}

fn flag_key(f: &Field, chain: &[Subspace]) -> String {
    let parts: Vec<String> = chain.iter().map(|x| x.key(f)).collect();
    format!("({})", parts.join(" "))
}

fn flag_support(chain: &[Subspace], n: usize) -> Subspace {
    if chain.len() + 1 < n {
        chain.last().cloned().unwrap_or_else(Subspace::zero)
    } else {
        Subspace::whole(n)
    }
}

/// `F_{n,q}` (`reduced = false`): ordered linearly independent tuples of
/// vectors, multiplied by appending and deleting dependent vectors.
/// `F̄_{n,q}` (`reduced = true`): chains `0 < X_1 < … < X_k < V` with
/// `dim X_i = i`, stored without `0` and `V`.
pub fn q_free_lrb(
    n: usize,
    q: usize,
    reduced: bool,
    guards: &Guards,
) -> Result<Semigroup, LrbError> {
    if n == 0 {
        return Err(LrbError::Invalid("dimension must be at least 1".into()));
    }
    let field = Field::new(q)?;
    guards.admit("q-analogue elements", saturating_count(n, q, reduced))?;
    let vectors = field.nonzero_vectors(n);
    if !reduced {
        let mut elements = Vec::new();
        let mut stack: Vec<(Vec<Vec<u8>>, Subspace)> = vec![(Vec::new(), Subspace::zero())];
        while let Some((t, span)) = stack.pop() {
            if t.len() < n {
                for v in &vectors {
                    if !span.contains(&field, v) {
                        let mut t2 = t.clone();
                        t2.push(v.clone());
                        stack.push((t2, span.with_vector(&field, v)));
                    }
                }
            }
            elements.push(t);
        }
        let (f1, f2, f3, f4) = (field.clone(), field.clone(), field.clone(), field);
        return assemble(
            Parts {
                label: format!("F_{{{n},{q}}}"),
                elements,
                identity: Vec::new(),
                mul: move |x: &Vec<Vec<u8>>, y: &Vec<Vec<u8>>| {
                    let mut out = x.clone();
                    let mut span = Subspace::span(&f1, x);
                    for v in y {
                        if out.len() == n {
                            break;
                        }
                        if !span.contains(&f1, v) {
                            span = span.with_vector(&f1, v);
                            out.push(v.clone());
                        }
                    }
                    out
                },
                key: move |t: &Vec<Vec<u8>>| tuple_key(&f2, t),
                grade: |t: &Vec<Vec<u8>>| t.len() as u32,
                support_name: String::from("subspaces of F_q^n"),
                support_label: move |t: &Vec<Vec<u8>>| Subspace::span(&f3, t).key(&f3),
                support_leq: move |x: &Vec<Vec<u8>>, y: &Vec<Vec<u8>>| {
                    let sy = Subspace::span(&f4, y);
                    x.iter().all(|v| sy.contains(&f4, v))
                },
            },
            guards,
        );
    }

    let mut elements = Vec::new();
    let mut stack: Vec<Vec<Subspace>> = vec![Vec::new()];
    while let Some(chain) = stack.pop() {
        if chain.len() + 1 < n {
            let last = chain.last().cloned().unwrap_or_else(Subspace::zero);
            let children: BTreeSet<Subspace> = vectors
                .iter()
                .filter(|v| !last.contains(&field, v))
                .map(|v| last.with_vector(&field, v))
                .collect();
            for c in children {
                let mut next = chain.clone();
                next.push(c);
                stack.push(next);
            }
        }
        elements.push(chain);
    }
    let (f1, f2, f3, f4) = (field.clone(), field.clone(), field.clone(), field);
    assemble(
        Parts {
            label: format!("Fbar_{{{n},{q}}}"),
            elements,
            identity: Vec::new(),
            mul: move |x: &Vec<Subspace>, y: &Vec<Subspace>| {
                let whole = Subspace::whole(n);
                let base = x.last().cloned().unwrap_or_else(Subspace::zero);
                let mut out = x.clone();
                for yj in y {
                    let z = base.sum(&f1, yj);
                    if z != whole && out.last() != Some(&z) && z.dim() > base.dim() {
                        out.push(z);
                    }
                }
                out
            },
            key: move |c: &Vec<Subspace>| flag_key(&f2, c),
            grade: |c: &Vec<Subspace>| c.len() as u32,
            support_name: String::from("subspaces of F_q^n of dimension other than n-1"),
            support_label: move |c: &Vec<Subspace>| flag_support(c, n).key(&f3),
            support_leq: move |x: &Vec<Subspace>, y: &Vec<Subspace>| {
                flag_support(y, n).contains_subspace(&f4, &flag_support(x, n))
            },
        },
        guards,
    )
}

fn parse_vector(f: &Field, s: &str, n: usize) -> Option<Vec<u8>> {
    let v: Option<Vec<u8>> = if f.q() <= 10 {
        s.bytes()
            .map(|b| b.checked_sub(b'0').filter(|&d| (d as usize) < f.q()))
            .collect()
    } else {
        s.split(',')
            .map(|t| t.parse::<u8>().ok().filter(|&d| (d as usize) < f.q()))
            .collect()
    };
    v.filter(|v| v.len() == n)
}

/// The quotient map `F_{n,q} → F̄_{n,q}` (prefix spans) as a table of ids.
pub fn q_free_to_bar(
    free: &Semigroup,
    bar: &Semigroup,
    n: usize,
    q: usize,
) -> Result<Vec<ElementId>, LrbError> {
    let f = Field::new(q)?;
    free.keys()
        .iter()
        .map(|k| {
            let inner = k
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| LrbError::UnknownKey(k.clone()))?;
            let vectors: Vec<Vec<u8>> = inner
                .split_whitespace()
                .map(|t| parse_vector(&f, t, n).ok_or_else(|| LrbError::UnknownKey(k.clone())))
                .collect::<Result<_, _>>()?;
            let whole = Subspace::whole(n);
            let mut chain = Vec::new();
            for i in 1..=vectors.len() {
                let s = Subspace::span(&f, &vectors[..i]);
                if s != whole {
                    chain.push(s);
                }
            }
            bar.id_of(&flag_key(&f, &chain))
        })
        .collect()
}
