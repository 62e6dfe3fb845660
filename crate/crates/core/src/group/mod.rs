//! Exact finite groups with canonical element encodings.
//!
//! Every group element is a short vector of `u32` words in a family-specific
//! canonical form:
//!
//! * cyclic `C_n`: `[r]`, the residue mod `n`
//! * dihedral `D_m`: `[b, e]` for `y^b x^e`, where `x^m = y^2 = 1`, `yxy = x^{-1}`
//! * symmetric `S_n`: the image tuple `[pi(0), ..., pi(n-1)]`
//! * `SL_2(F_q)`: `[a, b, c, d]` packed field indices of `(a b; c d)`
//! * direct product: concatenated component words
//! * semidirect `H ⋉ A`: `H` words followed by `A` words
//! * wreath `A ≀ S_n`: the permutation image tuple followed by `n` components of `A`
//! * bilinear-form group: `[x_1..x_n, y_1..y_n, alpha]` as packed field indices
//!
//! Each group also has a codec ranking its elements `0..|G|` (see
//! [`FiniteGroup::rank`]). Enumeration follows codec order.
//!
//! Permutations compose as functions: `(st)(i) = s(t(i))`. The wreath product
//! uses the right action `(s u)_i = u_{s(i)}` together with this composition,
//! which makes `(p, u)(p', v) = (pp', p'u + v)` associative.

mod descriptor;
mod table;

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use smallvec::SmallVec;
use thiserror::Error;

use crate::field::{FieldCtx, FieldElem, FieldError};

pub use descriptor::{bilinear_form, parse_descriptor};
pub use table::{conjugacy_classes, GroupTable};

/// Groups with more elements than this are never enumerated.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// Dense multiplication tables are only built up to this order.
pub const TABLE_CAP: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what} needs |G| <= {cap}, but |G| = {order}")]
    TooLarge { what: &'static str, order: u64, cap: u64 },
    #[error("group order overflows u64")]
    OrderOverflow,
    #[error("element {elem} does not belong to {group}")]
    ElementMismatch { elem: String, group: String },
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("action is not compatible with the semidirect product rule: {0}")]
    InvalidAction(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A group element in canonical word form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(SmallVec<[u32; 12]>);

impl Element {
    pub fn from_words(words: &[u32]) -> Self {
        Element(SmallVec::from_slice(words))
    }

    pub fn words(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl FromIterator<u32> for Element {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        Element(iter.into_iter().collect())
    }
}

type ActionFn = dyn Fn(&[u32], &[u32]) -> Element + Send + Sync;

/// A right action of `H` on an abelian group `A` by automorphisms, written
/// `act(h, a)`.
#[derive(Clone)]
pub struct Action {
    name: String,
    f: Arc<ActionFn>,
}

impl Action {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&[u32], &[u32]) -> Element + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), f: Arc::new(f) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, h: &[u32], a: &[u32]) -> Element {
        (self.f)(h, a)
    }
}

#[derive(Clone)]
enum Kind {
    Cyclic(u32),
    Dihedral(u32),
    Symmetric(usize),
    Sl2(FieldCtx),
    FieldAdditive(FieldCtx),
    FieldUnits { field: FieldCtx, elems: Vec<FieldElem> },
    Product(Vec<FiniteGroup>),
    Semidirect { top: FiniteGroup, base: FiniteGroup, action: Action },
    Wreath { base: FiniteGroup, n: usize },
    Bilinear { field: FieldCtx, n: usize, form: Vec<FieldElem> },
}

struct Inner {
    kind: Kind,
    order: u64,
    width: usize,
    abelian: bool,
    desc: String,
}

/// An immutable finite group with rule-based multiplication.
#[derive(Clone)]
pub struct FiniteGroup(Arc<Inner>);

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({})", self.0.desc)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.0.desc == other.0.desc
    }
}

fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

impl FiniteGroup {
    fn build(kind: Kind, order: u64, width: usize, abelian: bool, desc: String) -> Self {
        FiniteGroup(Arc::new(Inner { kind, order, width, abelian, desc }))
    }

    pub fn cyclic(n: u32) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidParameter("cyclic order must be >= 1".into()));
        }
        Ok(Self::build(Kind::Cyclic(n), n as u64, 1, true, format!("cyclic:{n}")))
    }

    /// `D_m` of order `2m`.
    pub fn dihedral(m: u32) -> Result<Self, GroupError> {
        if m == 0 {
            return Err(GroupError::InvalidParameter("dihedral m must be >= 1".into()));
        }
        let order = 2 * m as u64;
        Ok(Self::build(Kind::Dihedral(m), order, 2, m <= 2, format!("dihedral:{m}")))
    }

    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidParameter("symmetric degree must be >= 1".into()));
        }
        let order = factorial(n).ok_or(GroupError::OrderOverflow)?;
        Ok(Self::build(Kind::Symmetric(n), order, n, n <= 2, format!("sym:{n}")))
    }

    /// `SL_2(F_q)`, of order `q^3 - q`.
    pub fn sl2(field: &FieldCtx) -> Result<Self, GroupError> {
        let q = field.order() as u64;
        let order = q * q * q - q;
        if order > ENUMERATION_CAP {
            return Err(GroupError::TooLarge { what: "SL_2", order, cap: ENUMERATION_CAP });
        }
        let desc = format!("sl2:{q}");
        Ok(Self::build(Kind::Sl2(field.clone()), order, 4, false, desc))
    }

    /// The additive group of a field.
    pub fn field_additive(field: &FieldCtx) -> Self {
        let q = field.order();
        Self::build(Kind::FieldAdditive(field.clone()), q as u64, 1, true, format!("add:{q}"))
    }

    /// The unique subgroup of `F_q^×` of the given order, found by enumeration.
    pub fn field_units(field: &FieldCtx, order: u32) -> Result<Self, GroupError> {
        let q = field.order();
        if order == 0 || !(q - 1).is_multiple_of(order) {
            return Err(GroupError::InvalidParameter(format!(
                "{order} does not divide |F_{q}^x| = {}",
                q - 1
            )));
        }
        let elems: Vec<FieldElem> = field
            .elements()
            .filter(|&a| a != field.zero() && field.pow(a, order as u64) == field.one())
            .collect();
        debug_assert_eq!(elems.len(), order as usize);
        let desc = format!("units:{q}:{order}");
        Ok(Self::build(Kind::FieldUnits { field: field.clone(), elems }, order as u64, 1, true, desc))
    }

    pub fn direct_product(factors: &[FiniteGroup]) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Self::cyclic(1);
        }
        let order = factors
            .iter()
            .try_fold(1u64, |acc, g| acc.checked_mul(g.order()))
            .ok_or(GroupError::OrderOverflow)?;
        let width = factors.iter().map(FiniteGroup::width).sum();
        let abelian = factors.iter().all(FiniteGroup::is_abelian);
        let desc = format!(
            "prod({})",
            factors.iter().map(|g| g.descriptor().to_string()).collect::<Vec<_>>().join(",")
        );
        Ok(Self::build(Kind::Product(factors.to_vec()), order, width, abelian, desc))
    }

    /// `G^k`, with descriptor `power(G,k)`.
    pub fn power(g: &FiniteGroup, k: usize) -> Result<Self, GroupError> {
        if k == 0 {
            return Err(GroupError::InvalidParameter("power exponent must be >= 1".into()));
        }
        let mut p = Self::direct_product(&vec![g.clone(); k])?;
        Arc::get_mut(&mut p.0).unwrap().desc = format!("power({},{k})", g.descriptor());
        Ok(p)
    }

    /// `H ⋉ A` with `(h, a)(h', a') = (hh', act(h', a) + a')`.
    ///
    /// `A` must be abelian. The action is checked on random triples for
    /// associativity and additivity before the group is returned.
    pub fn semidirect(
        top: &FiniteGroup,
        base: &FiniteGroup,
        action: Action,
        seed: u64,
    ) -> Result<Self, GroupError> {
        if !base.is_abelian() {
            return Err(GroupError::InvalidParameter("semidirect base must be abelian".into()));
        }
        let order = top.order().checked_mul(base.order()).ok_or(GroupError::OrderOverflow)?;
        let desc = format!("semidirect({},{},{})", top.descriptor(), base.descriptor(), action.name());
        let trivial_action = top.order().saturating_mul(base.order()) <= 1 << 16
            && top.elements().into_iter().flatten().all(|h| {
                base.elements().into_iter().flatten().all(|a| action.apply(h.words(), a.words()) == a)
            });
        let abelian = top.is_abelian() && trivial_action;
        let g = Self::build(
            Kind::Semidirect { top: top.clone(), base: base.clone(), action },
            order,
            top.width() + base.width(),
            abelian,
            desc,
        );
        g.check_action(seed)?;
        Ok(g)
    }

    fn check_action(&self, seed: u64) -> Result<(), GroupError> {
        use rand::SeedableRng;
        let Kind::Semidirect { top, base, action } = &self.0.kind else {
            return Ok(());
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..256 {
            let h = top.random_element(&mut rng);
            let (a, b) = (base.random_element(&mut rng), base.random_element(&mut rng));
            let lhs = action.apply(h.words(), base.mul(&a, &b).words());
            let rhs = base.mul(&action.apply(h.words(), a.words()), &action.apply(h.words(), b.words()));
            if lhs != rhs {
                return Err(GroupError::InvalidAction(format!(
                    "act({}, a+b) != act(h,a) + act(h,b)",
                    top.format_elem(&h)
                )));
            }
            let (x, y, z) = (
                self.random_element(&mut rng),
                self.random_element(&mut rng),
                self.random_element(&mut rng),
            );
            if self.mul(&self.mul(&x, &y), &z) != self.mul(&x, &self.mul(&y, &z)) {
                return Err(GroupError::InvalidAction(format!(
                    "associativity fails at ({}, {}, {})",
                    self.format_elem(&x),
                    self.format_elem(&y),
                    self.format_elem(&z)
                )));
            }
        }
        Ok(())
    }

    /// `A ≀ S_n = S_n ⋉ A^n`.
    pub fn wreath(base: &FiniteGroup, n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidParameter("wreath degree must be >= 1".into()));
        }
        let order = factorial(n)
            .and_then(|f| base.order().checked_pow(n as u32).and_then(|p| p.checked_mul(f)))
            .ok_or(GroupError::OrderOverflow)?;
        let desc = match &base.0.kind {
            Kind::Cyclic(a) => format!("wreath:c{a}:{n}"),
            _ => format!("wreath({},{n})", base.descriptor()),
        };
        let abelian = base.is_abelian() && n == 1;
        Ok(Self::build(Kind::Wreath { base: base.clone(), n }, order, n + n * base.width(), abelian, desc))
    }

    /// Group on `F^n × F^n × F` with `(x,y,a)(u,v,b) = (x+u, y+v, a+b+2<u,y>)`
    /// for a symmetric form given row-major as an `n×n` matrix.
    pub fn bilinear(field: &FieldCtx, n: usize, form: &[FieldElem]) -> Result<Self, GroupError> {
        if n == 0 || form.len() != n * n {
            return Err(GroupError::InvalidParameter("form must be n×n with n >= 1".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if form[i * n + j] != form[j * n + i] {
                    return Err(GroupError::InvalidParameter("form must be symmetric".into()));
                }
            }
        }
        let q = field.order() as u64;
        let order = q.checked_pow(2 * n as u32 + 1).ok_or(GroupError::OrderOverflow)?;
        let abelian = field.characteristic() == 2 || form.iter().all(|&f| f == field.zero());
        let desc = descriptor::bilinear_descriptor(field, n, form);
        let kind = Kind::Bilinear { field: field.clone(), n, form: form.to_vec() };
        Ok(Self::build(kind, order, 2 * n + 1, abelian, desc))
    }

    /// `C_5 ⋉ F_16` with `C_5 ⊂ F_16^×` acting by multiplication.
    pub fn frobenius80() -> Result<Self, GroupError> {
        let f16 = FieldCtx::new(2, 4)?;
        let top = Self::field_units(&f16, 5)?;
        let base = Self::field_additive(&f16);
        let fc = f16.clone();
        let action = Action::new("mul", move |h, a| {
            let prod = fc.mul(fc.elem(h[0]).unwrap(), fc.elem(a[0]).unwrap());
            Element::from_words(&[prod.index()])
        });
        let mut g = Self::semidirect(&top, &base, action, 0)?;
        Arc::get_mut(&mut g.0).unwrap().desc = "frob80".into();
        Ok(g)
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// Number of words in each element.
    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn is_abelian(&self) -> bool {
        self.0.abelian
    }

    pub fn descriptor(&self) -> &str {
        &self.0.desc
    }

    /// Components of a semidirect product, if this is one.
    pub fn semidirect_parts(&self) -> Option<(&FiniteGroup, &FiniteGroup, &Action)> {
        match &self.0.kind {
            Kind::Semidirect { top, base, action } => Some((top, base, action)),
            _ => None,
        }
    }

    pub fn product_factors(&self) -> Option<&[FiniteGroup]> {
        match &self.0.kind {
            Kind::Product(f) => Some(f),
            _ => None,
        }
    }

    /// Field and form of a bilinear-form group.
    pub fn bilinear_parts(&self) -> Option<(&FieldCtx, usize, &[FieldElem])> {
        match &self.0.kind {
            Kind::Bilinear { field, n, form } => Some((field, *n, form)),
            _ => None,
        }
    }

    pub fn field(&self) -> Option<&FieldCtx> {
        match &self.0.kind {
            Kind::Sl2(f) | Kind::FieldAdditive(f) | Kind::FieldUnits { field: f, .. } => Some(f),
            Kind::Bilinear { field, .. } => Some(field),
            _ => None,
        }
    }

    /// `(base order, n)` for a wreath product of a cyclic group.
    pub fn wreath_parts(&self) -> Option<(&FiniteGroup, usize)> {
        match &self.0.kind {
            Kind::Wreath { base, n } => Some((base, *n)),
            _ => None,
        }
    }

    pub fn family(&self) -> Family {
        match &self.0.kind {
            Kind::Cyclic(n) => Family::Cyclic(*n),
            Kind::Dihedral(m) => Family::Dihedral(*m),
            Kind::Symmetric(n) => Family::Symmetric(*n),
            Kind::Sl2(f) => Family::Sl2(f.order()),
            Kind::FieldAdditive(f) => Family::FieldAdditive(f.order()),
            Kind::FieldUnits { field, elems } => Family::FieldUnits(field.order(), elems.len() as u32),
            Kind::Product(_) => Family::Product,
            Kind::Semidirect { .. } => Family::Semidirect,
            Kind::Wreath { n, .. } => Family::Wreath(*n),
            Kind::Bilinear { field, n, .. } => Family::Bilinear(field.order(), *n),
        }
    }

    pub fn identity(&self) -> Element {
        match &self.0.kind {
            Kind::Cyclic(_) | Kind::FieldAdditive(_) => Element::from_words(&[0]),
            Kind::Dihedral(_) => Element::from_words(&[0, 0]),
            Kind::Symmetric(n) => (0..*n as u32).collect(),
            Kind::Sl2(_) => Element::from_words(&[1, 0, 0, 1]),
            Kind::FieldUnits { .. } => Element::from_words(&[1]),
            Kind::Product(fs) => fs.iter().flat_map(|g| g.identity().0).collect(),
            Kind::Semidirect { top, base, .. } => {
                top.identity().0.into_iter().chain(base.identity().0).collect()
            }
            Kind::Wreath { base, n } => {
                let id = base.identity();
                (0..*n as u32).chain((0..*n).flat_map(|_| id.0.clone())).collect()
            }
            Kind::Bilinear { n, .. } => Element(SmallVec::from_elem(0, 2 * n + 1)),
        }
    }

    pub fn is_identity(&self, a: &Element) -> bool {
        *a == self.identity()
    }

    /// Group multiplication. Both arguments must be elements of this group.
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.mul_words(a.words(), b.words())
    }

    fn mul_words(&self, a: &[u32], b: &[u32]) -> Element {
        debug_assert_eq!(a.len(), self.width());
        debug_assert_eq!(b.len(), self.width());
        match &self.0.kind {
            Kind::Cyclic(n) => Element::from_words(&[((a[0] as u64 + b[0] as u64) % *n as u64) as u32]),
            Kind::Dihedral(m) => {
                let e = if b[0] == 1 { (m - a[1]) % m } else { a[1] };
                Element::from_words(&[a[0] ^ b[0], (e + b[1]) % m])
            }
            Kind::Symmetric(_) => b.iter().map(|&i| a[i as usize]).collect(),
            Kind::Sl2(f) => {
                let e = |i: usize, x: &[u32]| f.elem(x[i]).unwrap();
                let dot = |p: FieldElem, q: FieldElem, r: FieldElem, s: FieldElem| {
                    f.add(f.mul(p, q), f.mul(r, s)).index()
                };
                Element::from_words(&[
                    dot(e(0, a), e(0, b), e(1, a), e(2, b)),
                    dot(e(0, a), e(1, b), e(1, a), e(3, b)),
                    dot(e(2, a), e(0, b), e(3, a), e(2, b)),
                    dot(e(2, a), e(1, b), e(3, a), e(3, b)),
                ])
            }
            Kind::FieldAdditive(f) => {
                Element::from_words(&[f.add(f.elem(a[0]).unwrap(), f.elem(b[0]).unwrap()).index()])
            }
            Kind::FieldUnits { field: f, .. } => {
                Element::from_words(&[f.mul(f.elem(a[0]).unwrap(), f.elem(b[0]).unwrap()).index()])
            }
            Kind::Product(fs) => {
                let mut out = Element(SmallVec::new());
                let mut off = 0;
                for g in fs {
                    let w = g.width();
                    out.0.extend(g.mul_words(&a[off..off + w], &b[off..off + w]).0);
                    off += w;
                }
                out
            }
            Kind::Semidirect { top, base, action } => {
                let tw = top.width();
                let (h1, a1) = a.split_at(tw);
                let (h2, a2) = b.split_at(tw);
                let acted = action.apply(h2, a1);
                let mut out = top.mul_words(h1, h2);
                out.0.extend(base.mul_words(acted.words(), a2).0);
                out
            }
            Kind::Wreath { base, n } => {
                let n = *n;
                let bw = base.width();
                let (p1, u) = a.split_at(n);
                let (p2, v) = b.split_at(n);
                let mut out: Element = p2.iter().map(|&i| p1[i as usize]).collect();
                for i in 0..n {
                    let j = p2[i] as usize;
                    let prod = base.mul_words(&u[j * bw..(j + 1) * bw], &v[i * bw..(i + 1) * bw]);
                    out.0.extend(prod.0);
                }
                out
            }
            Kind::Bilinear { field: f, n, form } => {
                let n = *n;
                let fe = |x: u32| f.elem(x).unwrap();
                let mut out = Element(SmallVec::with_capacity(2 * n + 1));
                for i in 0..2 * n {
                    out.0.push(f.add(fe(a[i]), fe(b[i])).index());
                }
                // 2<u, y> with u from b and y from a.
                let pairing = bilinear_pairing(f, n, form, &b[..n], &a[n..2 * n]);
                let two = f.from_int(2);
                let c = f.add(f.add(fe(a[2 * n]), fe(b[2 * n])), f.mul(two, pairing));
                out.0.push(c.index());
                out
            }
        }
    }

    pub fn inv(&self, a: &Element) -> Element {
        self.inv_words(a.words())
    }

    fn inv_words(&self, a: &[u32]) -> Element {
        match &self.0.kind {
            Kind::Cyclic(n) => Element::from_words(&[(n - a[0]) % n]),
            Kind::Dihedral(m) => {
                if a[0] == 1 {
                    Element::from_words(a)
                } else {
                    Element::from_words(&[0, (m - a[1]) % m])
                }
            }
            Kind::Symmetric(n) => {
                let mut out = vec![0u32; *n];
                for (i, &j) in a.iter().enumerate() {
                    out[j as usize] = i as u32;
                }
                Element::from_words(&out)
            }
            Kind::Sl2(f) => {
                let e = |i: usize| f.elem(a[i]).unwrap();
                Element::from_words(&[
                    a[3],
                    f.neg(e(1)).index(),
                    f.neg(e(2)).index(),
                    a[0],
                ])
            }
            Kind::FieldAdditive(f) => Element::from_words(&[f.neg(f.elem(a[0]).unwrap()).index()]),
            Kind::FieldUnits { field: f, .. } => {
                Element::from_words(&[f.inv(f.elem(a[0]).unwrap()).unwrap().index()])
            }
            Kind::Product(fs) => {
                let mut out = Element(SmallVec::new());
                let mut off = 0;
                for g in fs {
                    let w = g.width();
                    out.0.extend(g.inv_words(&a[off..off + w]).0);
                    off += w;
                }
                out
            }
            Kind::Semidirect { top, base, action } => {
                let (h, x) = a.split_at(top.width());
                let hinv = top.inv_words(h);
                let acted = action.apply(hinv.words(), x);
                let mut out = hinv;
                out.0.extend(base.inv_words(acted.words()).0);
                out
            }
            Kind::Wreath { base, n } => {
                let n = *n;
                let bw = base.width();
                let (p, u) = a.split_at(n);
                let mut pinv = vec![0u32; n];
                for (i, &j) in p.iter().enumerate() {
                    pinv[j as usize] = i as u32;
                }
                // (p^{-1}, w) with w_i = (u_{p^{-1}(i)})^{-1}.
                let mut out = Element::from_words(&pinv);
                for &j in &pinv {
                    let j = j as usize;
                    out.0.extend(base.inv_words(&u[j * bw..(j + 1) * bw]).0);
                }
                out
            }
            Kind::Bilinear { field: f, n, form } => {
                let n = *n;
                let mut out: Element = a[..2 * n].iter().map(|&x| f.neg(f.elem(x).unwrap()).index()).collect();
                let pairing = bilinear_pairing(f, n, form, &a[..n], &a[n..2 * n]);
                let c = f.add(f.neg(f.elem(a[2 * n]).unwrap()), f.mul(f.from_int(2), pairing));
                out.0.push(c.index());
                out
            }
        }
    }

    /// Whether the words form a valid canonical element of this group.
    pub fn contains(&self, a: &Element) -> bool {
        a.words().len() == self.width() && self.contains_words(a.words())
    }

    fn contains_words(&self, a: &[u32]) -> bool {
        match &self.0.kind {
            Kind::Cyclic(n) => a[0] < *n,
            Kind::Dihedral(m) => a[0] <= 1 && a[1] < *m,
            Kind::Symmetric(n) => {
                let mut seen = vec![false; *n];
                a.iter().all(|&i| {
                    (i as usize) < *n && !std::mem::replace(&mut seen[i as usize], true)
                })
            }
            Kind::Sl2(f) => {
                if a.iter().any(|&x| x >= f.order()) {
                    return false;
                }
                let e = |i: usize| f.elem(a[i]).unwrap();
                f.sub(f.mul(e(0), e(3)), f.mul(e(1), e(2))) == f.one()
            }
            Kind::FieldAdditive(f) => a[0] < f.order(),
            Kind::FieldUnits { elems, .. } => elems.iter().any(|e| e.index() == a[0]),
            Kind::Product(fs) => {
                let mut off = 0;
                fs.iter().all(|g| {
                    let w = g.width();
                    let ok = g.contains_words(&a[off..off + w]);
                    off += w;
                    ok
                })
            }
            Kind::Semidirect { top, base, .. } => {
                let (h, x) = a.split_at(top.width());
                top.contains_words(h) && base.contains_words(x)
            }
            Kind::Wreath { base, n } => {
                let bw = base.width();
                let (p, u) = a.split_at(*n);
                let perm_ok = {
                    let mut seen = vec![false; *n];
                    p.iter().all(|&i| {
                        (i as usize) < *n && !std::mem::replace(&mut seen[i as usize], true)
                    })
                };
                perm_ok && u.chunks(bw).all(|c| base.contains_words(c))
            }
            Kind::Bilinear { field, .. } => a.iter().all(|&x| x < field.order()),
        }
    }

    /// Multiplication that first checks membership of both operands.
    pub fn try_mul(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        for x in [a, b] {
            if !self.contains(x) {
                return Err(self.mismatch(x));
            }
        }
        Ok(self.mul(a, b))
    }

    pub fn try_inv(&self, a: &Element) -> Result<Element, GroupError> {
        if !self.contains(a) {
            return Err(self.mismatch(a));
        }
        Ok(self.inv(a))
    }

    fn mismatch(&self, a: &Element) -> GroupError {
        GroupError::ElementMismatch { elem: format!("{a:?}"), group: self.0.desc.clone() }
    }

    /// Position of `a` in codec order.
    pub fn rank(&self, a: &Element) -> u64 {
        self.rank_words(a.words())
    }

    fn rank_words(&self, a: &[u32]) -> u64 {
        match &self.0.kind {
            Kind::Cyclic(_) | Kind::FieldAdditive(_) => a[0] as u64,
            Kind::Dihedral(m) => a[0] as u64 * *m as u64 + a[1] as u64,
            Kind::Symmetric(n) => perm_rank(&a[..*n]),
            Kind::Sl2(f) => {
                let q = f.order() as u64;
                if a[0] == 0 {
                    (a[1] as u64 - 1) * q + a[3] as u64
                } else {
                    q * (q - 1) + (a[0] as u64 - 1) * q * q + a[1] as u64 * q + a[2] as u64
                }
            }
            Kind::FieldUnits { elems, .. } => {
                elems.binary_search_by_key(&a[0], |e| e.index()).unwrap() as u64
            }
            Kind::Product(fs) => {
                let mut off = 0;
                fs.iter().fold(0u64, |acc, g| {
                    let w = g.width();
                    let r = g.rank_words(&a[off..off + w]);
                    off += w;
                    acc * g.order() + r
                })
            }
            Kind::Semidirect { top, base, .. } => {
                let (h, x) = a.split_at(top.width());
                top.rank_words(h) * base.order() + base.rank_words(x)
            }
            Kind::Wreath { base, n } => {
                let (p, u) = a.split_at(*n);
                u.chunks(base.width())
                    .fold(perm_rank(p), |acc, c| acc * base.order() + base.rank_words(c))
            }
            Kind::Bilinear { field, .. } => {
                a.iter().fold(0u64, |acc, &x| acc * field.order() as u64 + x as u64)
            }
        }
    }

    /// The element at position `r` in codec order.
    pub fn unrank(&self, r: u64) -> Element {
        debug_assert!(r < self.order());
        match &self.0.kind {
            Kind::Cyclic(_) | Kind::FieldAdditive(_) => Element::from_words(&[r as u32]),
            Kind::Dihedral(m) => Element::from_words(&[(r / *m as u64) as u32, (r % *m as u64) as u32]),
            Kind::Symmetric(n) => perm_unrank(*n, r),
            Kind::Sl2(f) => {
                let q = f.order() as u64;
                if r < q * (q - 1) {
                    let b = f.elem((1 + r / q) as u32).unwrap();
                    let c = f.neg(f.inv(b).unwrap());
                    Element::from_words(&[0, b.index(), c.index(), (r % q) as u32])
                } else {
                    let s = r - q * (q - 1);
                    let a = f.elem((1 + s / (q * q)) as u32).unwrap();
                    let b = f.elem(((s / q) % q) as u32).unwrap();
                    let c = f.elem((s % q) as u32).unwrap();
                    let d = f.mul(f.add(f.one(), f.mul(b, c)), f.inv(a).unwrap());
                    Element::from_words(&[a.index(), b.index(), c.index(), d.index()])
                }
            }
            Kind::FieldUnits { elems, .. } => Element::from_words(&[elems[r as usize].index()]),
            Kind::Product(fs) => {
                let mut parts = Vec::with_capacity(fs.len());
                let mut rest = r;
                for g in fs.iter().rev() {
                    parts.push(g.unrank(rest % g.order()));
                    rest /= g.order();
                }
                parts.into_iter().rev().flat_map(|e| e.0).collect()
            }
            Kind::Semidirect { top, base, .. } => {
                let mut out = top.unrank(r / base.order());
                out.0.extend(base.unrank(r % base.order()).0);
                out
            }
            Kind::Wreath { base, n } => {
                let mut parts = Vec::with_capacity(*n);
                let mut rest = r;
                for _ in 0..*n {
                    parts.push(base.unrank(rest % base.order()));
                    rest /= base.order();
                }
                let mut out = perm_unrank(*n, rest);
                out.0.extend(parts.into_iter().rev().flat_map(|e| e.0));
                out
            }
            Kind::Bilinear { field, n, .. } => {
                let q = field.order() as u64;
                let mut w = vec![0u32; 2 * n + 1];
                let mut rest = r;
                for slot in w.iter_mut().rev() {
                    *slot = (rest % q) as u32;
                    rest /= q;
                }
                Element::from_words(&w)
            }
        }
    }

    /// Every element exactly once, in codec order.
    pub fn elements(&self) -> Result<impl Iterator<Item = Element> + '_, GroupError> {
        if self.order() > ENUMERATION_CAP {
            return Err(GroupError::TooLarge {
                what: "enumeration",
                order: self.order(),
                cap: ENUMERATION_CAP,
            });
        }
        Ok((0..self.order()).map(move |r| self.unrank(r)))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        match &self.0.kind {
            Kind::Symmetric(n) => {
                let mut p: Vec<u32> = (0..*n as u32).collect();
                p.shuffle(rng);
                Element::from_words(&p)
            }
            Kind::Product(fs) => fs.iter().flat_map(|g| g.random_element(rng).0).collect(),
            Kind::Semidirect { top, base, .. } => {
                let mut out = top.random_element(rng);
                out.0.extend(base.random_element(rng).0);
                out
            }
            Kind::Wreath { base, n } => {
                let mut p: Vec<u32> = (0..*n as u32).collect();
                p.shuffle(rng);
                let mut out = Element::from_words(&p);
                for _ in 0..*n {
                    out.0.extend(base.random_element(rng).0);
                }
                out
            }
            Kind::Bilinear { field, n, .. } => {
                (0..2 * n + 1).map(|_| rng.gen_range(0..field.order())).collect()
            }
            _ => self.unrank(rng.gen_range(0..self.order())),
        }
    }

    /// Canonical text form of an element.
    pub fn format_elem(&self, a: &Element) -> String {
        self.format_words(a.words())
    }

    fn format_words(&self, a: &[u32]) -> String {
        match &self.0.kind {
            Kind::Cyclic(_) => a[0].to_string(),
            Kind::Dihedral(_) => match (a[0], a[1]) {
                (0, 0) => "1".into(),
                (1, 0) => "y".into(),
                (0, e) => format!("x^{e}"),
                (_, e) => format!("yx^{e}"),
            },
            Kind::Symmetric(_) => format_perm(a),
            Kind::Sl2(f) | Kind::FieldAdditive(f) | Kind::FieldUnits { field: f, .. } => {
                let parts: Vec<String> = a.iter().map(|&x| f.format(f.elem(x).unwrap())).collect();
                if a.len() == 1 {
                    parts[0].clone()
                } else {
                    format!("[{}]", parts.join(";"))
                }
            }
            Kind::Product(fs) => {
                let mut off = 0;
                let parts: Vec<String> = fs
                    .iter()
                    .map(|g| {
                        let w = g.width();
                        let s = g.format_words(&a[off..off + w]);
                        off += w;
                        s
                    })
                    .collect();
                format!("({})", parts.join(","))
            }
            Kind::Semidirect { top, base, .. } => {
                let (h, x) = a.split_at(top.width());
                format!("[{};{}]", top.format_words(h), base.format_words(x))
            }
            Kind::Wreath { base, n } => {
                let (p, u) = a.split_at(*n);
                let comps: Vec<String> = u.chunks(base.width()).map(|c| base.format_words(c)).collect();
                format!("[{};({})]", format_perm(p), comps.join(","))
            }
            Kind::Bilinear { field: f, n, .. } => {
                let fmt_vec = |xs: &[u32]| {
                    xs.iter().map(|&x| f.format(f.elem(x).unwrap())).collect::<Vec<_>>().join(" ")
                };
                format!(
                    "[{};{};{}]",
                    fmt_vec(&a[..*n]),
                    fmt_vec(&a[*n..2 * n]),
                    f.format(f.elem(a[2 * n]).unwrap())
                )
            }
        }
    }

    /// Parses the canonical text form, rejecting non-members.
    pub fn parse_elem(&self, s: &str) -> Result<Element, GroupError> {
        let err = || GroupError::Parse(s.to_string());
        let s = s.trim();
        let words: Element = match &self.0.kind {
            Kind::Cyclic(_) => Element::from_words(&[s.parse().map_err(|_| err())?]),
            Kind::Dihedral(_) => {
                let (b, rest) = match s.strip_prefix('y') {
                    Some(r) => (1, r),
                    None => (0, s),
                };
                let e = match rest {
                    "" if b == 1 => 0,
                    "1" if b == 0 => 0,
                    "x" => 1,
                    r => r.strip_prefix("x^").and_then(|t| t.parse().ok()).ok_or_else(err)?,
                };
                Element::from_words(&[b, e])
            }
            Kind::Symmetric(_) => parse_perm(s).ok_or_else(err)?,
            Kind::Sl2(f) => {
                let inner = strip_brackets(s, '[', ']').ok_or_else(err)?;
                let parts = split_top(inner, ';');
                if parts.len() != 4 {
                    return Err(err());
                }
                parts
                    .iter()
                    .map(|p| f.parse(p).map(FieldElem::index))
                    .collect::<Result<Element, _>>()
                    .map_err(|_| err())?
            }
            Kind::FieldAdditive(f) | Kind::FieldUnits { field: f, .. } => {
                Element::from_words(&[f.parse(s).map_err(|_| err())?.index()])
            }
            Kind::Product(fs) => {
                let inner = strip_brackets(s, '(', ')').ok_or_else(err)?;
                let parts = split_top(inner, ',');
                if parts.len() != fs.len() {
                    return Err(err());
                }
                let mut out = Element(SmallVec::new());
                for (g, p) in fs.iter().zip(parts) {
                    out.0.extend(g.parse_elem(p)?.0);
                }
                out
            }
            Kind::Semidirect { top, base, .. } => {
                let inner = strip_brackets(s, '[', ']').ok_or_else(err)?;
                let parts = split_top(inner, ';');
                if parts.len() != 2 {
                    return Err(err());
                }
                let mut out = top.parse_elem(parts[0])?;
                out.0.extend(base.parse_elem(parts[1])?.0);
                out
            }
            Kind::Wreath { base, n } => {
                let inner = strip_brackets(s, '[', ']').ok_or_else(err)?;
                let parts = split_top(inner, ';');
                if parts.len() != 2 {
                    return Err(err());
                }
                let mut out = parse_perm(parts[0]).ok_or_else(err)?;
                let comps = strip_brackets(parts[1].trim(), '(', ')').ok_or_else(err)?;
                let comps = split_top(comps, ',');
                if comps.len() != *n {
                    return Err(err());
                }
                for c in comps {
                    out.0.extend(base.parse_elem(c)?.0);
                }
                out
            }
            Kind::Bilinear { field: f, n, .. } => {
                let inner = strip_brackets(s, '[', ']').ok_or_else(err)?;
                let parts = split_top(inner, ';');
                if parts.len() != 3 {
                    return Err(err());
                }
                let mut out = Element(SmallVec::new());
                for (i, p) in parts.iter().enumerate() {
                    let toks: Vec<&str> = p.split_whitespace().collect();
                    let want = if i < 2 { *n } else { 1 };
                    if toks.len() != want {
                        return Err(err());
                    }
                    for t in toks {
                        out.0.push(f.parse(t).map_err(|_| err())?.index());
                    }
                }
                out
            }
        };
        if !self.contains(&words) {
            return Err(self.mismatch(&words));
        }
        Ok(words)
    }
}

/// Coarse family classification, used to pick character-degree formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cyclic(u32),
    Dihedral(u32),
    Symmetric(usize),
    Sl2(u32),
    FieldAdditive(u32),
    FieldUnits(u32, u32),
    Product,
    Semidirect,
    Wreath(usize),
    Bilinear(u32, usize),
}

/// `sum_ij u_i F_ij y_j`.
pub(crate) fn bilinear_pairing(f: &FieldCtx, n: usize, form: &[FieldElem], u: &[u32], y: &[u32]) -> FieldElem {
    let mut acc = f.zero();
    for i in 0..n {
        let ui = f.elem(u[i]).unwrap();
        if ui == f.zero() {
            continue;
        }
        for j in 0..n {
            let fij = form[i * n + j];
            if fij != f.zero() {
                acc = f.add(acc, f.mul(ui, f.mul(fij, f.elem(y[j]).unwrap())));
            }
        }
    }
    acc
}

fn perm_rank(p: &[u32]) -> u64 {
    let n = p.len();
    let mut rank = 0u64;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count() as u64;
        rank = rank * (n - i) as u64 + smaller;
    }
    rank
}

fn perm_unrank(n: usize, mut r: u64) -> Element {
    let mut digits = vec![0usize; n];
    for i in (0..n).rev() {
        let base = (n - i) as u64;
        digits[i] = (r % base) as usize;
        r /= base;
    }
    let mut pool: Vec<u32> = (0..n as u32).collect();
    digits.into_iter().map(|d| pool.remove(d)).collect()
}

fn format_perm(p: &[u32]) -> String {
    format!("[{}]", p.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
}

fn parse_perm(s: &str) -> Option<Element> {
    let inner = strip_brackets(s.trim(), '[', ']')?;
    inner.split(',').map(|t| t.trim().parse::<u32>().ok()).collect::<Option<Element>>()
}

fn strip_brackets(s: &str, open: char, close: char) -> Option<&str> {
    s.trim().strip_prefix(open)?.strip_suffix(close)
}

/// Splits at `sep` occurring outside of any `()` or `[]` nesting.
pub(crate) fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(s[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

#[cfg(test)]
mod tests;
