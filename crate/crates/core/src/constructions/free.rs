//! Free LRBs, their quotient by identifying full-length words, and ordered
//! set partitions.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{assemble, Guards, Parts};
use crate::semigroup::{ElementId, Semigroup};
use crate::LrbError;

const MAX_FREE_N: usize = 8;
const MAX_PARTITION_N: usize = 7;

fn set_label(mask: u32, n: usize) -> String {
    let items: Vec<String> = (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

fn word_key(w: &[u8]) -> String {
    let items: Vec<String> = w.iter().map(|&a| (a + 1).to_string()).collect();
    format!("({})", items.join(" "))
}

fn word_mask(w: &[u8]) -> u32 {
    w.iter().fold(0, |m, &a| m | 1 << a)
}

fn count_injective_words(n: usize) -> usize {
    let mut total = 0usize;
    let mut falling = 1usize;
    for l in 0..=n {
        total += falling;
        falling *= n - l;
    }
    total
}

/// `F_n`: injective words over `[n]`, multiplied by concatenating and
/// deleting repeated letters.
pub fn free_lrb(n: usize, guards: &Guards) -> Result<Semigroup, LrbError> {
    if n == 0 || n > MAX_FREE_N {
        return Err(LrbError::SizeGuard {
            what: "free LRB rank",
            needed: n,
            limit: MAX_FREE_N,
        });
    }
    guards.admit("free LRB elements", count_injective_words(n))?;
    let mut elements: Vec<Vec<u8>> = vec![Vec::new()];
    let mut frontier = elements.clone();
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &frontier {
            let used = word_mask(w);
            for a in 0..n as u8 {
                if used >> a & 1 == 0 {
                    let mut v = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
        }
        elements.extend(next.iter().cloned());
        frontier = next;
    }
    assemble(
        Parts {
            label: format!("F_{n}"),
            elements,
            identity: Vec::new(),
            mul: |x: &Vec<u8>, y: &Vec<u8>| {
                let mut out = x.clone();
                let mut used = word_mask(x);
                for &a in y {
                    if used >> a & 1 == 0 {
                        out.push(a);
                        used |= 1 << a;
                    }
                }
                out
            },
            key: |w: &Vec<u8>| word_key(w),
            grade: |w: &Vec<u8>| w.len() as u32,
            support_name: String::from("subsets of [n]"),
            support_label: move |w: &Vec<u8>| set_label(word_mask(w), n),
            support_leq: |x: &Vec<u8>, y: &Vec<u8>| word_mask(x) & !word_mask(y) == 0,
        },
        guards,
    )
}

fn partition_key(blocks: &[u32], n: usize) -> String {
    let parts: Vec<String> = blocks
        .iter()
        .map(|&b| {
            let items: Vec<String> = (0..n)
                .filter(|i| b >> i & 1 == 1)
                .map(|i| (i + 1).to_string())
                .collect();
            items.join(",")
        })
        .collect();
    format!("({})", parts.join("|"))
}

/// Underlying set partition, blocks sorted by their smallest element.
fn set_partition_label(blocks: &[u32], n: usize) -> String {
    let mut b = blocks.to_vec();
    b.sort_by_key(|m| m.trailing_zeros());
    let s = partition_key(&b, n);
    format!("{{{}}}", &s[1..s.len() - 1])
}

fn intersect_blocks(x: &[u32], y: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for &a in x {
        for &b in y {
            if a & b != 0 {
                out.push(a & b);
            }
        }
    }
    out
}

/// Every block of `fine` lies inside a block of `coarse`.
fn refines(fine: &[u32], coarse: &[u32]) -> bool {
    fine.iter().all(|&f| coarse.iter().any(|&c| f & !c == 0))
}

fn enumerate_ordered_partitions(rest: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if rest == 0 {
        out.push(prefix.clone());
        return;
    }
    // Iterate over nonempty submasks of `rest`.
    let mut sub = rest;
    while sub != 0 {
        prefix.push(sub);
        enumerate_ordered_partitions(rest & !sub, prefix, out);
        prefix.pop();
        sub = (sub - 1) & rest;
    }
}

fn fubini(n: usize) -> usize {
    // a(n) = Σ_k C(n,k) a(n−k)
    let mut a = vec![1usize; n + 1];
    for m in 1..=n {
        let mut binom = 1usize;
        let mut s = 0usize;
        for k in 1..=m {
            binom = binom * (m - k + 1) / k;
            s += binom * a[m - k];
        }
        a[m] = s;
    }
    a[n]
}

/// Ordered set partitions of `[n]`, multiplied by intersecting blocks in
/// lexicographic order and deleting empty intersections.
pub fn ordered_partitions(n: usize, guards: &Guards) -> Result<Semigroup, LrbError> {
    if n == 0 || n > MAX_PARTITION_N {
        return Err(LrbError::SizeGuard {
            what: "ordered partition size",
            needed: n,
            limit: MAX_PARTITION_N,
        });
    }
    guards.admit("ordered partitions", fubini(n))?;
    let full = (1u32 << n) - 1;
    let mut elements = Vec::new();
    enumerate_ordered_partitions(full, &mut Vec::new(), &mut elements);
    assemble(
        Parts {
            label: format!("Sigma_{n}"),
            elements,
            identity: vec![full],
            mul: |x: &Vec<u32>, y: &Vec<u32>| intersect_blocks(x, y),
            key: move |b: &Vec<u32>| partition_key(b, n),
            grade: |b: &Vec<u32>| b.len() as u32 - 1,
            support_name: String::from("set partitions of [n], finer above"),
            support_label: move |b: &Vec<u32>| set_partition_label(b, n),
            support_leq: |x: &Vec<u32>, y: &Vec<u32>| refines(y, x),
        },
        guards,
    )
}

/// Image of an injective word in `F̄_n`: singleton blocks, then the rest.
fn bar_of_word(w: &[u8], n: usize) -> Vec<u32> {
    let mut blocks: Vec<u32> = w.iter().map(|&a| 1 << a).collect();
    let rest = ((1u32 << n) - 1) & !word_mask(w);
    if rest != 0 {
        blocks.push(rest);
    }
    blocks
}

/// Support of an element of `F̄_n`: the singleton letters, or all of `[n]`
/// for a chamber.
fn bar_support(blocks: &[u32], n: usize) -> u32 {
    if blocks.len() == n {
        (1 << n) - 1
    } else {
        blocks[..blocks.len() - 1].iter().fold(0, |m, b| m | b)
    }
}

/// `F̄_n`: ordered partitions whose blocks are singletons except possibly the
/// last, a quotient of `F_n` and a sub-LRB of the ordered partitions.
pub fn free_lrb_bar(n: usize, guards: &Guards) -> Result<Semigroup, LrbError> {
    if n == 0 || n > MAX_FREE_N {
        return Err(LrbError::SizeGuard {
            what: "free LRB rank",
            needed: n,
            limit: MAX_FREE_N,
        });
    }
    let factorial: usize = (1..=n).product();
    guards.admit(
        "quotient free LRB elements",
        count_injective_words(n) - factorial,
    )?;
    let mut elements = vec![bar_of_word(&[], n)];
    let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..n.saturating_sub(1) {
        let mut next = Vec::new();
        for w in &frontier {
            let used = word_mask(w);
            for a in 0..n as u8 {
                if used >> a & 1 == 0 {
                    let mut v = w.clone();
                    v.push(a);
                    elements.push(bar_of_word(&v, n));
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    assemble(
        Parts {
            label: format!("Fbar_{n}"),
            elements,
            identity: bar_of_word(&[], n),
            mul: |x: &Vec<u32>, y: &Vec<u32>| intersect_blocks(x, y),
            key: move |b: &Vec<u32>| partition_key(b, n),
            grade: |b: &Vec<u32>| b.len() as u32 - 1,
            support_name: String::from("subsets of [n] of size other than n-1"),
            support_label: move |b: &Vec<u32>| set_label(bar_support(b, n), n),
            support_leq: move |x: &Vec<u32>, y: &Vec<u32>| {
                bar_support(x, n) & !bar_support(y, n) == 0
            },
        },
        guards,
    )
}

fn parse_word(key: &str) -> Result<Vec<u8>, LrbError> {
    let inner = key
        .strip_prefix('(')
        .and_then(|k| k.strip_suffix(')'))
        .ok_or_else(|| LrbError::UnknownKey(key.into()))?;
    inner
        .split_whitespace()
        .map(|t| {
            t.parse::<u8>()
                .ok()
                .filter(|&a| a >= 1)
                .map(|a| a - 1)
                .ok_or_else(|| LrbError::UnknownKey(key.into()))
        })
        .collect()
}

/// The quotient map `F_n → F̄_n` as a table of ids.
pub fn free_to_bar(
    free: &Semigroup,
    bar: &Semigroup,
    n: usize,
) -> Result<Vec<ElementId>, LrbError> {
    free.keys()
        .iter()
        .map(|k| {
            let w = parse_word(k)?;
            bar.id_of(&partition_key(&bar_of_word(&w, n), n))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let g = Guards::default();
        assert_eq!(free_lrb(3, &g).unwrap().len(), 16);
        assert_eq!(free_lrb_bar(3, &g).unwrap().len(), 16 - 6);
        assert_eq!(ordered_partitions(3, &g).unwrap().len(), 13);
        assert_eq!(ordered_partitions(4, &g).unwrap().len(), 75);
        assert_eq!(fubini(5), 541);
    }

    #[test]
    fn free_product_deletes_repeats() {
        let s = free_lrb(6, &Guards::default()).unwrap();
        let x = s.id_of("(2 1)").unwrap();
        let y = s.id_of("(3 5 4 1 6)").unwrap();
        assert_eq!(s.key(s.mul(x, y)), "(2 1 3 5 4 6)");
        assert_eq!(s.mul(s.identity(), y), y);
        assert_eq!(s.key(s.identity()), "()");
    }

    #[test]
    fn ordered_partition_product() {
        let s = ordered_partitions(4, &Guards::default()).unwrap();
        let x = s.id_of("(1,3|2,4)").unwrap();
        let y = s.id_of("(1,2|3,4)").unwrap();
        assert_eq!(s.key(s.mul(x, y)), "(1|3|2|4)");
        assert_eq!(s.key(s.identity()), "(1,2,3,4)");
    }

    #[test]
    fn bar_identifies_full_length_words() {
        let n = 4;
        let g = Guards::default();
        let f = free_lrb(n, &g).unwrap();
        let b = free_lrb_bar(n, &g).unwrap();
        let q = free_to_bar(&f, &b, n).unwrap();
        assert_eq!(
            q[f.id_of("(1 2 3)").unwrap()],
            q[f.id_of("(1 2 3 4)").unwrap()]
        );
        assert_eq!(b.key(q[f.identity()]), "(1,2,3,4)");
    }

    #[test]
    fn guard_refuses_large_n() {
        assert!(matches!(
            free_lrb(9, &Guards::default()),
            Err(LrbError::SizeGuard { .. })
        ));
        assert!(matches!(
            ordered_partitions(7, &Guards::default()),
            Err(LrbError::SizeGuard { .. })
        ));
    }
}
