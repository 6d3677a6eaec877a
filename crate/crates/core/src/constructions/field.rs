//! Small finite fields and subspaces of `F_q^n` in reduced row echelon form.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::LrbError;

/// A finite field with elements `0..q`, given by addition and multiplication
/// tables. `0` and `1` are the additive and multiplicative identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

fn is_prime(p: usize) -> bool {
    p >= 2
        && (2..p)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

impl Field {
    /// `F_q` for a prime `q < 256`, or `q ∈ {4, 8, 9}` from built-in
    /// irreducible polynomials.
    pub fn new(q: usize) -> Result<Self, LrbError> {
        if is_prime(q) && q < 256 {
            let add = (0..q * q).map(|i| ((i / q + i % q) % q) as u8).collect();
            let mul = (0..q * q).map(|i| ((i / q) * (i % q) % q) as u8).collect();
            return Self::from_tables(q, add, mul);
        }
        // Elements are coefficient vectors in base p, lowest degree first;
        // `modulus` lists the low coefficients of the monic irreducible.
        let (p, k, modulus): (usize, usize, &[usize]) = match q {
            4 => (2, 2, &[1, 1]),
            8 => (2, 3, &[1, 1, 0]),
            9 => (3, 2, &[1, 0]),
            _ => {
                return Err(LrbError::Invalid(format!(
                    "unsupported field order q = {q}"
                )))
            }
        };
        let digits = |mut x: usize| -> Vec<usize> {
            (0..k)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let undigits = |d: &[usize]| d.iter().rev().fold(0, |acc, &c| acc * p + c);
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&sum) as u8;
                let mut prod = vec![0usize; 2 * k - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // Reduce using t^k = −(modulus).
                for deg in (k..prod.len()).rev() {
                    let c = prod[deg];
                    prod[deg] = 0;
                    for (i, m) in modulus.iter().enumerate() {
                        prod[deg - k + i] = (prod[deg - k + i] + (p - m % p) * c) % p;
                    }
                }
                mul[a * q + b] = undigits(&prod[..k]) as u8;
            }
        }
        Self::from_tables(q, add, mul)
    }

    /// A field from explicit tables; all field axioms are checked.
    pub fn from_tables(q: usize, add: Vec<u8>, mul: Vec<u8>) -> Result<Self, LrbError> {
        if !(2..=256).contains(&q) || add.len() != q * q || mul.len() != q * q {
            return Err(LrbError::Invalid(format!(
                "field tables for q = {q} have the wrong shape"
            )));
        }
        if add.iter().chain(&mul).any(|&v| v as usize >= q) {
            return Err(LrbError::Invalid("field table entry out of range".into()));
        }
        let a = |x: usize, y: usize| add[x * q + y] as usize;
        let m = |x: usize, y: usize| mul[x * q + y] as usize;
        let bad = |what: &str| Err(LrbError::Invalid(format!("field axiom fails: {what}")));
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for x in 0..q {
            if a(0, x) != x || m(1, x) != x {
                return bad("identities");
            }
            match (0..q).find(|&y| a(x, y) == 0) {
                Some(y) => neg[x] = y as u8,
                None => return bad("additive inverse"),
            }
            if x != 0 {
                match (0..q).find(|&y| m(x, y) == 1) {
                    Some(y) => inv[x] = y as u8,
                    None => return bad("multiplicative inverse"),
                }
            }
            for y in 0..q {
                if a(x, y) != a(y, x) || m(x, y) != m(y, x) {
                    return bad("commutativity");
                }
                for z in 0..q {
                    if a(a(x, y), z) != a(x, a(y, z)) || m(m(x, y), z) != m(x, m(y, z)) {
                        return bad("associativity");
                    }
                    if m(x, a(y, z)) != a(m(x, y), m(x, z)) {
                        return bad("distributivity");
                    }
                }
            }
        }
        Ok(Self {
            q,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    /// All nonzero vectors of `F_q^n` in lexicographic order.
    pub fn nonzero_vectors(&self, n: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut v = vec![0u8; n];
        loop {
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                v[i] += 1;
                if (v[i] as usize) < self.q {
                    break;
                }
                v[i] = 0;
            }
            out.push(v.clone());
        }
    }

    pub fn vector_key(&self, v: &[u8]) -> String {
        if self.q <= 10 {
            v.iter().map(|d| char::from(b'0' + d)).collect()
        } else {
            let parts: Vec<String> = v.iter().map(|d| d.to_string()).collect();
            parts.join(",")
        }
    }
}

/// A subspace of `F_q^n`, stored as its reduced row echelon basis with rows
/// ordered by pivot column; equal subspaces have equal encodings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    rows: Vec<Vec<u8>>,
}

impl Subspace {
    pub fn zero() -> Self {
        Self { rows: Vec::new() }
    }

    pub fn whole(n: usize) -> Self {
        Self {
            rows: (0..n)
                .map(|i| {
                    let mut r = vec![0u8; n];
                    r[i] = 1;
                    r
                })
                .collect(),
        }
    }

    pub fn span(field: &Field, vectors: &[Vec<u8>]) -> Self {
        Self {
            rows: rref(field, vectors.to_vec()),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn sum(&self, field: &Field, other: &Self) -> Self {
        let mut all = self.rows.clone();
        all.extend(other.rows.iter().cloned());
        Self {
            rows: rref(field, all),
        }
    }

    pub fn with_vector(&self, field: &Field, v: &[u8]) -> Self {
        let mut all = self.rows.clone();
        all.push(v.to_vec());
        Self {
            rows: rref(field, all),
        }
    }

    pub fn contains(&self, field: &Field, v: &[u8]) -> bool {
        self.with_vector(field, v).dim() == self.dim()
    }

    pub fn contains_subspace(&self, field: &Field, other: &Self) -> bool {
        other.rows.iter().all(|r| self.contains(field, r))
    }

    pub fn key(&self, field: &Field) -> String {
        let rows: Vec<String> = self.rows.iter().map(|r| field.vector_key(r)).collect();
        format!("<{}>", rows.join(";"))
    }
}

fn rref(f: &Field, mut m: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = f.neg(row[c]);
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = f.add(*x, f.mul(factor, y));
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}
