//! Exact arithmetic in prime fields `F_p` and small extension fields `F_{p^k}`.
//!
//! Elements are stored as their polynomial-basis coefficient vector packed
//! into a single integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. The packing is
//! a bijection with the canonical coefficient vectors, so comparing packed
//! values is field equality.
//!
//! Extension moduli come from a fixed table so that element encodings are
//! reproducible:
//!
//! | q  | modulus            |
//! |----|--------------------|
//! | 4  | t^2 + t + 1        |
//! | 8  | t^3 + t + 1        |
//! | 9  | t^2 + 2t + 2       |
//! | 16 | t^4 + t + 1        |
//! | 25 | t^2 + 4t + 2       |
//! | 49 | t^2 + 6t + 3       |
//!
//! Prime fields use the modulus `t`.

use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

type Coeffs = SmallVec<[u32; 8]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u32),
    #[error("field order {p}^{k} exceeds the cap of 2^16")]
    TooLarge { p: u32, k: u32 },
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("no modulus is tabulated for F_{{{p}^{k}}}")]
    NoModulus { p: u32, k: u32 },
    #[error("tabulated modulus for F_{{{p}^{k}}} is reducible")]
    ReducibleModulus { p: u32, k: u32 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("F_{{{q}}} has no index-2 subfield")]
    NoQuadraticSubfield { q: u32 },
    #[error("invalid field element encoding {0:?}")]
    Parse(String),
}

/// Context for `F_q`, `q = p^k`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, little-endian, length `k + 1`.
    modulus: Vec<u32>,
}

/// A field element in packed polynomial-basis form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldElem(u32);

impl FieldElem {
    /// Packed index in `0..q`.
    pub fn index(self) -> u32 {
        self.0
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn tabulated_modulus(p: u32, k: u32) -> Option<Vec<u32>> {
    let m = match (p, k) {
        (_, 1) => vec![0, 1],
        (2, 2) => vec![1, 1, 1],
        (2, 3) => vec![1, 1, 0, 1],
        (2, 4) => vec![1, 1, 0, 0, 1],
        (3, 2) => vec![2, 2, 1],
        (5, 2) => vec![2, 4, 1],
        (7, 2) => vec![3, 6, 1],
        _ => return None,
    };
    Some(m)
}

/// Remainder of `a` modulo the monic polynomial `m`, coefficients mod `p`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * mc) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=deg/2`.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// Builds `F_{p^k}` with the tabulated modulus.
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(FieldError::CompositeCharacteristic(p));
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= MAX_FIELD_ORDER as u64)
            .ok_or(FieldError::TooLarge { p, k })? as u32;
        let modulus = tabulated_modulus(p, k).ok_or(FieldError::NoModulus { p, k })?;
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::ReducibleModulus { p, k });
        }
        Ok(Self { p, k, q, modulus })
    }

    /// Builds the field of order `q`, factoring `q` as a prime power.
    pub fn with_order(q: u32) -> Result<Self, FieldError> {
        if q < 2 {
            return Err(FieldError::CompositeCharacteristic(q));
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
        let mut k = 0;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            k += 1;
        }
        if r != 1 {
            return Err(FieldError::CompositeCharacteristic(q));
        }
        Self::new(p, k)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus, little-endian coefficients.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// Image of the integer `n` in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Element with packed index `i`; `None` if `i >= q`.
    pub fn elem(&self, i: u32) -> Option<FieldElem> {
        (i < self.q).then_some(FieldElem(i))
    }

    /// All elements in packed-index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.q).map(FieldElem)
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        self.unpack(a).to_vec()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<FieldElem, FieldError> {
        if c.len() != self.k as usize || c.iter().any(|&x| x >= self.p) {
            return Err(FieldError::Parse(format!("{c:?}")));
        }
        Ok(self.pack(c))
    }

    fn unpack(&self, a: FieldElem) -> Coeffs {
        let mut out = Coeffs::new();
        let mut v = a.0;
        for _ in 0..self.k {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    fn pack(&self, c: &[u32]) -> FieldElem {
        FieldElem(c.iter().rev().fold(0u32, |acc, &x| acc * self.p + x))
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.k == 1 {
            return FieldElem((a.0 + b.0) % self.p);
        }
        let (x, y) = (self.unpack(a), self.unpack(b));
        let s: Coeffs = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.pack(&s)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.k == 1 {
            return FieldElem((self.p - a.0) % self.p);
        }
        let s: Coeffs = self.unpack(a).iter().map(|u| (self.p - u) % self.p).collect();
        self.pack(&s)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.p as u64;
        if self.k == 1 {
            return FieldElem(((a.0 as u64 * b.0 as u64) % p) as u32);
        }
        let (x, y) = (self.unpack(a), self.unpack(b));
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &u) in x.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u as u64 * v as u64) % p;
            }
        }
        // Reduce with the monic modulus from the top down.
        for d in (k..prod.len()).rev() {
            let lead = prod[d];
            if lead == 0 {
                continue;
            }
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = d - k + i;
                prod[idx] = (prod[idx] + (p - lead) * m as u64) % p;
            }
            prod[d] = 0;
        }
        let c: Coeffs = prod[..k].iter().map(|&v| v as u32).collect();
        self.pack(&c)
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    /// The involution `a -> a^{sqrt(q)}` of `F_q` over its index-2 subfield.
    pub fn frobenius(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if !self.k.is_multiple_of(2) {
            return Err(FieldError::NoQuadraticSubfield { q: self.q });
        }
        Ok(self.pow(a, (self.p as u64).pow(self.k / 2)))
    }

    /// Order of the index-2 subfield, if there is one.
    pub fn quadratic_subfield_order(&self) -> Option<u32> {
        self.k.is_multiple_of(2).then(|| self.p.pow(self.k / 2))
    }

    /// Absolute trace `a + a^p + ... + a^{p^{k-1}}`, an element of `F_p`.
    pub fn trace_to_prime(&self, a: FieldElem) -> FieldElem {
        let mut acc = self.zero();
        let mut cur = a;
        for _ in 0..self.k {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        acc
    }

    /// Whether `a` is a square, decided by squaring every element.
    pub fn is_square(&self, a: FieldElem) -> bool {
        self.elements().any(|b| self.mul(b, b) == a)
    }

    /// Smallest non-square by packed index, if any.
    pub fn smallest_non_square(&self) -> Option<FieldElem> {
        let mut squares = vec![false; self.q as usize];
        for b in self.elements() {
            squares[self.mul(b, b).0 as usize] = true;
        }
        self.elements().find(|a| !squares[a.0 as usize])
    }

    /// Textual encoding `c0,c1,...,c_{k-1}`.
    pub fn format(&self, a: FieldElem) -> String {
        let c = self.unpack(a);
        c.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn parse(&self, s: &str) -> Result<FieldElem, FieldError> {
        let parts: Result<Vec<u32>, _> = s.split(',').map(|t| t.trim().parse::<u32>()).collect();
        let parts = parts.map_err(|_| FieldError::Parse(s.to_string()))?;
        self.from_coeffs(&parts)
            .map_err(|_| FieldError::Parse(s.to_string()))
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_tabulated() -> Vec<FieldCtx> {
        [2u32, 3, 4, 5, 7, 8, 9, 16, 25, 49]
            .iter()
            .map(|&q| FieldCtx::with_order(q).unwrap())
            .collect()
    }

    #[test]
    fn construction_and_errors() {
        let f16 = FieldCtx::new(2, 4).unwrap();
        assert_eq!(f16.modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(f16.order(), 16);
        assert_eq!(FieldCtx::new(3, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(FieldCtx::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldCtx::new(4, 1), Err(FieldError::CompositeCharacteristic(4)));
        assert_eq!(FieldCtx::new(2, 17), Err(FieldError::TooLarge { p: 2, k: 17 }));
        assert_eq!(FieldCtx::new(11, 2), Err(FieldError::NoModulus { p: 11, k: 2 }));
        // Large primes need no table entry.
        assert_eq!(FieldCtx::new(65521, 1).unwrap().order(), 65521);
        for f in all_tabulated() {
            assert!(is_irreducible(f.modulus(), f.characteristic()));
        }
    }

    #[test]
    fn small_identities() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let t = f4.from_coeffs(&[0, 1]).unwrap();
        let t_plus_1 = f4.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f4.mul(t, t), t_plus_1);
        assert_eq!(f4.frobenius(t).unwrap(), t_plus_1);

        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(f3.inv(f3.from_int(2)).unwrap(), f3.from_int(2));
        assert_eq!(f3.inv(f3.zero()), Err(FieldError::ZeroInverse));
        assert!(!f3.is_square(f3.from_int(2)));
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert!(f5.is_square(f5.from_int(4)));
        for f in all_tabulated() {
            assert!(f.is_square(f.one()));
            for a in f.elements() {
                assert_eq!(f.add(a, f.zero()), a);
            }
        }
        assert!(f3.frobenius(f3.one()).is_err());
    }

    #[test]
    fn trace_of_f16() {
        let f = FieldCtx::new(2, 4).unwrap();
        assert_eq!(f.trace_to_prime(f.zero()), f.zero());
        assert_eq!(f.trace_to_prime(f.one()), f.zero());
        let zeros = f.elements().filter(|&a| f.trace_to_prime(a) == f.zero()).count();
        assert_eq!(zeros, 8);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for f in all_tabulated().into_iter().filter(|f| f.order() <= 16) {
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if a != f.zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn field_axioms_random_large() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for f in all_tabulated().into_iter().filter(|f| f.order() > 16) {
            for _ in 0..10_000 {
                let q = f.order();
                let a = f.elem(rng.gen_range(0..q)).unwrap();
                let b = f.elem(rng.gen_range(0..q)).unwrap();
                let c = f.elem(rng.gen_range(0..q)).unwrap();
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                if a != f.zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
            }
        }
    }

    #[test]
    fn frobenius_is_involutive_automorphism() {
        for f in all_tabulated().into_iter().filter(|f| f.degree() % 2 == 0) {
            let sub = f.quadratic_subfield_order().unwrap();
            let mut fixed = 0;
            for a in f.elements() {
                let fa = f.frobenius(a).unwrap();
                assert_eq!(f.frobenius(fa).unwrap(), a);
                if fa == a {
                    fixed += 1;
                }
                for b in f.elements() {
                    assert_eq!(f.frobenius(f.mul(a, b)).unwrap(), f.mul(fa, f.frobenius(b).unwrap()));
                    assert_eq!(f.frobenius(f.add(a, b)).unwrap(), f.add(fa, f.frobenius(b).unwrap()));
                }
            }
            assert_eq!(fixed, sub);
            // The prime subfield is fixed.
            for n in 0..f.characteristic() as i64 {
                let a = f.from_int(n);
                assert_eq!(f.frobenius(a).unwrap(), a);
            }
        }
    }

    #[test]
    fn trace_fibers_are_uniform() {
        for f in all_tabulated() {
            let p = f.characteristic();
            let mut fibers = vec![0u32; p as usize];
            for a in f.elements() {
                let t = f.trace_to_prime(a);
                assert!(t.index() < p);
                fibers[t.index() as usize] += 1;
                // F_p-linearity.
                for c in 0..p as i64 {
                    let ca = f.mul(f.from_int(c), a);
                    assert_eq!(f.trace_to_prime(ca), f.mul(f.from_int(c), t));
                }
            }
            assert!(fibers.iter().all(|&n| n == f.order() / p));
        }
    }

    #[test]
    fn text_round_trip() {
        let f = FieldCtx::new(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        }
        assert!(f.parse("1").is_err());
        assert!(f.parse("3,0").is_err());
    }
}
