//! Table-driven arithmetic in GF(p^k) for fields of order at most 256.
//!
//! Elements are stored as their index `Σ c_i p^i`, where `c_i` are the
//! coefficients of the representing polynomial over F_p. Index 0 is zero and
//! index 1 is one in every field built here.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("NotPrime: {0} is not a prime characteristic")]
    NotPrime(u32),
    #[error("OrderTooLarge: {p}^{k} exceeds {MAX_ORDER}")]
    OrderTooLarge { p: u32, k: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("element index {idx} is outside a field of order {q}")]
    OutOfRange { idx: usize, q: usize },
    #[error("operation {0:?} needs a second operand")]
    MissingOperand(ArithOp),
}

/// A field element, identified by its index in the owning [`FieldTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Felt(u8);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Felt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

/// Precomputed addition, multiplication, negation and inversion tables.
///
/// Immutable once built, so a single table can be shared by reference across
/// threads.
#[derive(Clone)]
pub struct FieldTable {
    p: u32,
    k: u32,
    q: usize,
    modulus: Option<Vec<u32>>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for FieldTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTable")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish_non_exhaustive()
    }
}

/// Tables are a function of (p, k), so those identify the field.
impl PartialEq for FieldTable {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}

impl Eq for FieldTable {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Every `(p, k)` with `p^k` a prime power in `2..=256`, ordered by `q`.
pub fn supported_orders() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for p in 2..=MAX_ORDER {
        if !is_prime(p) {
            continue;
        }
        let mut q = p;
        let mut k = 1;
        while q <= MAX_ORDER {
            out.push((p, k));
            q *= p;
            k += 1;
        }
    }
    out.sort_by_key(|&(p, k)| p.pow(k));
    out
}

impl FieldTable {
    /// Builds GF(p^k). For `k > 1` the modulus is the lexicographically
    /// smallest monic irreducible polynomial of degree `k`, comparing the
    /// non-leading coefficients from the constant term upwards.
    pub fn new(p: u32, k: u32) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if k < 1 {
            return Err(GfError::ZeroDegree);
        }
        let q = match p.checked_pow(k) {
            Some(q) if q <= MAX_ORDER => q as usize,
            _ => return Err(GfError::OrderTooLarge { p, k }),
        };

        let modulus = (k > 1).then(|| smallest_irreducible(p, k as usize));
        let digits = |i: usize| -> Vec<u32> {
            let mut v = vec![0; k as usize];
            let mut r = i as u32;
            for c in v.iter_mut() {
                *c = r % p;
                r /= p;
            }
            v
        };
        let undigits = |c: &[u32]| -> usize {
            c.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize)
        };
        let elems: Vec<Vec<u32>> = (0..q).map(digits).collect();

        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let sum: Vec<u32> = elems[a]
                    .iter()
                    .zip(&elems[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * q + b] = undigits(&sum) as u8;
                let prod = match &modulus {
                    None => vec![(elems[a][0] * elems[b][0]) % p],
                    Some(m) => poly_mulmod(&elems[a], &elems[b], m, p),
                };
                mul[a * q + b] = undigits(&prod) as u8;
            }
        }

        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).expect("additive inverse") as u8;
            if a != 0 {
                inv[a] = (1..q)
                    .find(|&b| mul[a * q + b] == 1)
                    .expect("nonzero element has an inverse") as u8;
            }
        }

        Ok(Self {
            p,
            k,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn prime(p: u32) -> Result<Self, GfError> {
        Self::new(p, 1)
    }

    /// Field of order `q`, if `q` is a supported prime power.
    pub fn with_order(q: u32) -> Result<Self, GfError> {
        let (p, k) = supported_orders()
            .into_iter()
            .find(|&(p, k)| p.pow(k) == q)
            .ok_or(if q > MAX_ORDER {
                GfError::OrderTooLarge { p: q, k: 1 }
            } else {
                GfError::NotPrime(q)
            })?;
        Self::new(p, k)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    /// Coefficients of the modulus, constant term first and including the
    /// leading 1. `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn elem(&self, idx: usize) -> Result<Felt, GfError> {
        if idx < self.q {
            Ok(Felt(idx as u8))
        } else {
            Err(GfError::OutOfRange { idx, q: self.q })
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> + Clone {
        (0..self.q).map(|i| Felt(i as u8))
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        Felt(self.add[a.idx() * self.q + b.idx()])
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        Felt(self.mul[a.idx() * self.q + b.idx()])
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        Felt(self.neg[a.idx()])
    }

    pub fn inv(&self, a: Felt) -> Result<Felt, GfError> {
        if a == Felt::ZERO {
            return Err(GfError::DivisionByZero);
        }
        Ok(Felt(self.inv[a.idx()]))
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Dispatches a single arithmetic operation. Unary operations ignore `b`.
    pub fn arith(&self, op: ArithOp, a: Felt, b: Option<Felt>) -> Result<Felt, GfError> {
        for x in std::iter::once(a).chain(b) {
            if x.idx() >= self.q {
                return Err(GfError::OutOfRange { idx: x.idx(), q: self.q });
            }
        }
        let rhs = || b.ok_or(GfError::MissingOperand(op));
        match op {
            ArithOp::Add => Ok(self.add(a, rhs()?)),
            ArithOp::Sub => Ok(self.sub(a, rhs()?)),
            ArithOp::Mul => Ok(self.mul(a, rhs()?)),
            ArithOp::Div => self.div(a, rhs()?),
            ArithOp::Neg => Ok(self.neg(a)),
            ArithOp::Inv => self.inv(a),
        }
    }

    /// Product of all q-1 nonzero elements: `-1` for odd q, `1` for even q.
    pub fn nonzero_product(&self) -> Felt {
        self.elements()
            .skip(1)
            .fold(Felt::ONE, |acc, x| self.mul(acc, x))
    }

    /// Brute-force check of the field axioms over all pairs and triples.
    /// Cubic in q; intended for q ≤ 16 or one-off verification runs.
    pub fn check_axioms(&self) -> bool {
        let els: Vec<Felt> = self.elements().collect();
        for &a in &els {
            if self.add(a, Felt::ZERO) != a || self.mul(a, Felt::ONE) != a {
                return false;
            }
            if self.add(a, self.neg(a)) != Felt::ZERO {
                return false;
            }
            if a != Felt::ZERO && self.mul(a, Felt(self.inv[a.idx()])) != Felt::ONE {
                return false;
            }
            for &b in &els {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
                for &c in &els {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                        || self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `a · a⁻¹ = 1` for every nonzero a. Linear in q.
    pub fn check_inverses(&self) -> bool {
        self.elements()
            .skip(1)
            .all(|a| self.inv(a).map(|b| self.mul(a, b)) == Ok(Felt::ONE))
    }
}

/// Multiplies two polynomials of degree < k and reduces by the monic modulus.
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * k - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        // subtract c·x^(d-k)·modulus
        for (i, &m) in modulus.iter().enumerate() {
            let slot = d - k + i;
            prod[slot] = (prod[slot] + p * p - (c * m) % p) % p;
        }
    }
    prod.truncate(k);
    prod
}

fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead_inv = (1..p).find(|&x| (x * den[dd]) % p == 1).unwrap_or(1);
    while r.len() > dd {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = (top * lead_inv) % p;
            let shift = r.len() - 1 - dd;
            for (i, &d) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - (c * d) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let k = poly.len() - 1;
    // trial division by every monic polynomial of degree 1..=k/2
    for deg in 1..=k / 2 {
        let count = (p as usize).pow(deg as u32);
        for code in 0..count {
            let mut div = vec![0u32; deg + 1];
            let mut r = code;
            for c in div.iter_mut().take(deg) {
                *c = (r % p as usize) as u32;
                r /= p as usize;
            }
            div[deg] = 1;
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    let count = (p as usize).pow(k as u32);
    // lexicographic order with the constant term most significant
    for code in 0..count {
        let mut poly = vec![0u32; k + 1];
        let mut r = code;
        for c in poly[..k].iter_mut().rev() {
            *c = (r % p as usize) as u32;
            r /= p as usize;
        }
        poly[k] = 1;
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}
