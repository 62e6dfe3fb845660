//! Explicit realizations. Every constructor builds its subsets, runs the
//! triple product property check, and returns the verified certificate.

use std::collections::HashSet;

use thiserror::Error;

use crate::field::{FieldCtx, FieldElem, FieldError};
use crate::group::{bilinear_form, Element, FiniteGroup, GroupError};
use crate::tpp::{verify_tpp_with, Certificate, TppError, TppOutcome, VerifyOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("unknown construction family {0:?}")]
    UnknownFamily(String),
    #[error("form is isotropic: <z,z> = 0 at z = ({})", .0.join(", "))]
    Isotropic(Vec<String>),
    #[error("cocycle identity fails at g = {0}, h = {1}")]
    CocycleFails(String, String),
    #[error("theta({0}) lies in B although {0} is not the identity")]
    HypothesisFails(String),
    #[error("{0} is not a subgroup")]
    NotSubgroup(String),
    #[error("triple product property fails: q1 = {}, q2 = {}, q3 = {}", .0[0], .0[1], .0[2])]
    NotVerified([String; 3]),
    #[error("expected shape {expected:?}, built {got:?}")]
    ShapeMismatch { expected: [usize; 3], got: [usize; 3] },
    #[error("vectors {0:?} and {1:?} differ by a 0/1 vector")]
    DifferenceProperty(Vec<u32>, Vec<u32>),
    #[error("at least {0} vector pairs, over the cap of 10^7")]
    PairCap(u64),
    #[error(transparent)]
    Tpp(#[from] TppError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

type Result<T> = std::result::Result<T, ConstructionError>;

fn finish(
    g: &FiniteGroup,
    subsets: [Vec<Element>; 3],
    subgroups: [bool; 3],
    expected: [usize; 3],
    name: String,
) -> Result<Certificate> {
    let got = [subsets[0].len(), subsets[1].len(), subsets[2].len()];
    if got != expected {
        return Err(ConstructionError::ShapeMismatch { expected, got });
    }
    let opts = VerifyOptions { assume_subgroup: subgroups, ..Default::default() };
    match verify_tpp_with(g, &subsets, opts)? {
        TppOutcome::Verified(c) => Ok(c.with_construction(name)),
        TppOutcome::Counterexample(w) => Err(ConstructionError::NotVerified(w.map(|e| g.format_elem(&e)))),
    }
}

/// Distinct rearrangements of a sorted vector in lexicographic order,
/// stopping once `limit` have been listed.
fn arrangements(mut cur: Vec<u32>, limit: usize) -> Vec<Vec<u32>> {
    let n = cur.len();
    let mut out = vec![cur.clone()];
    while out.len() < limit {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<u32>> {
    arrangements((0..n as u32).collect(), usize::MAX)
}

/// Axis subgroups of `C_n × C_m × C_p`.
pub fn cyclic_axes(n: u32, m: u32, p: u32) -> Result<Certificate> {
    let g = FiniteGroup::direct_product(&[FiniteGroup::cyclic(n)?, FiniteGroup::cyclic(m)?, FiniteGroup::cyclic(p)?])?;
    let axis = |k: usize, len: u32| -> Vec<Element> {
        (0..len)
            .map(|r| {
                let mut w = [0u32; 3];
                w[k] = r;
                Element::from_words(&w)
            })
            .collect()
    };
    let subsets = [axis(0, n), axis(1, m), axis(2, p)];
    let dims = [n as usize, m as usize, p as usize];
    finish(&g, subsets, [true; 3], dims, format!("cyclic axes {n}x{m}x{p}"))
}

/// `1! 2! ... n!`.
pub fn superfactorial(n: usize) -> usize {
    (1..=n).map(|k| (1..=k).product::<usize>()).product()
}

/// Realization in `S_N`, `N = n(n+1)/2`, acting on the points `(a, b, c)`
/// with `a + b + c = n - 1`. Subset `i` is the stabilizer of coordinate `i`:
/// the product of the symmetric groups on its level sets.
pub fn triangle(n: usize) -> Result<Certificate> {
    if !(2..=5).contains(&n) {
        return Err(ConstructionError::OutOfRange(format!("triangle needs 2 <= n <= 5, got {n}")));
    }
    let mut points = Vec::new();
    for a in 0..n {
        for b in 0..n - a {
            points.push([a, b, n - 1 - a - b]);
        }
    }
    let big_n = points.len();
    let g = FiniteGroup::symmetric(big_n)?;
    let subsets: [Vec<Element>; 3] = std::array::from_fn(|coord| {
        let levels: Vec<Vec<u32>> = (0..n)
            .map(|v| (0..big_n as u32).filter(|&p| points[p as usize][coord] == v).collect())
            .collect();
        let mut elems: Vec<Vec<u32>> = vec![(0..big_n as u32).collect()];
        for level in &levels {
            let perms = permutations(level.len());
            let mut next = Vec::with_capacity(elems.len() * perms.len());
            for e in &elems {
                for p in &perms {
                    let mut img = e.clone();
                    for (pos, &pt) in level.iter().enumerate() {
                        img[pt as usize] = level[p[pos] as usize];
                    }
                    next.push(img);
                }
            }
            elems = next;
        }
        elems.iter().map(|w| Element::from_words(w)).collect()
    });
    let h = superfactorial(n);
    finish(&g, subsets, [true; 3], [h; 3], format!("triangle n={n}"))
}

fn matrix(a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Element {
    Element::from_words(&[a.index(), b.index(), c.index(), d.index()])
}

fn unipotents(f: &FieldCtx) -> (Vec<Element>, Vec<Element>) {
    let (zero, one) = (f.zero(), f.one());
    let upper = f.elements().map(|x| matrix(one, x, zero, one)).collect();
    let lower = f.elements().map(|x| matrix(one, zero, x, one)).collect();
    (upper, lower)
}

/// Upper and lower unipotents with `{(1+z, z; -z, 1-z)}` in `SL_2(F_q)`.
pub fn sl2_parabolic(q: u32) -> Result<Certificate> {
    if ![2, 3, 4, 5, 7, 8, 9].contains(&q) {
        return Err(ConstructionError::OutOfRange(format!("parabolic triple needs q in {{2,3,4,5,7,8,9}}, got {q}")));
    }
    let f = FieldCtx::with_order(q)?;
    let g = FiniteGroup::sl2(&f)?;
    let (upper, lower) = unipotents(&f);
    let one = f.one();
    let third = f.elements().map(|z| matrix(f.add(one, z), z, f.neg(z), f.sub(one, z))).collect();
    let q = q as usize;
    finish(&g, [upper, lower, third], [true; 3], [q, q, q], format!("SL2 parabolic q={q}"))
}

/// `SU_2(F_q) = {(a, b; -b̄, ā) : aā + bb̄ = 1}` inside `SL_2(F_{q^2})`.
pub fn special_unitary(f: &FieldCtx) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for a in f.elements() {
        for b in f.elements() {
            let (abar, bbar) = (f.frobenius(a)?, f.frobenius(b)?);
            if f.add(f.mul(a, abar), f.mul(b, bbar)) == f.one() {
                out.push(matrix(a, b, f.neg(bbar), abar));
            }
        }
    }
    Ok(out)
}

/// Unipotents over `F_{q^2}` with `SU_2(F_q)`, realizing `<q^2, q^2, q^3 - q>`.
pub fn sl2_unitary(q: u32) -> Result<Certificate> {
    if ![2, 3].contains(&q) {
        return Err(ConstructionError::OutOfRange(format!("unitary triple needs q in {{2,3}}, got {q}")));
    }
    let f = FieldCtx::with_order(q * q)?;
    let g = FiniteGroup::sl2(&f)?;
    let (upper, lower) = unipotents(&f);
    let su = special_unitary(&f)?;
    let q = q as usize;
    finish(&g, [upper, lower, su], [true; 3], [q * q, q * q, q * q * q - q], format!("SL2 unitary q={q}"))
}

/// First nonzero `z` with `<z, z> = 0`, scanning `F^n` in index order.
pub fn isotropic_vector(f: &FieldCtx, n: usize, form: &[FieldElem]) -> Option<Vec<FieldElem>> {
    let q = f.order() as u64;
    (1..q.pow(n as u32)).find_map(|mut r| {
        let mut z = vec![f.zero(); n];
        for slot in z.iter_mut().rev() {
            *slot = f.elem((r % q) as u32).unwrap();
            r /= q;
        }
        let mut acc = f.zero();
        for i in 0..n {
            for j in 0..n {
                acc = f.add(acc, f.mul(z[i], f.mul(form[i * n + j], z[j])));
            }
        }
        (acc == f.zero()).then_some(z)
    })
}

/// `{(x,0,0)}`, `{(0,y,0)}`, `{(z,z,<z,z>)}` in the bilinear-form group.
///
/// For `n = 2` the form is `diag(1, -w)` (default `w` the smallest
/// non-square); otherwise the identity form. The form must be anisotropic.
pub fn bilinear(q: u32, n: usize, w: Option<u32>) -> Result<Certificate> {
    let f = FieldCtx::with_order(q)?;
    if f.characteristic() == 2 {
        return Err(ConstructionError::OutOfRange("bilinear construction needs odd q".into()));
    }
    let w = w.map(|i| f.elem(i).ok_or_else(|| ConstructionError::OutOfRange(format!("w = {i} not in F_{q}"))));
    let form = bilinear_form(&f, n, w.transpose()?)?;
    if let Some(z) = isotropic_vector(&f, n, &form) {
        return Err(ConstructionError::Isotropic(z.iter().map(|&x| f.format(x)).collect()));
    }
    let g = FiniteGroup::bilinear(&f, n, &form)?;
    let size = (q as usize).pow(n as u32);
    let vectors: Vec<Element> = (0..size as u64).map(|r| {
        let e = g.unrank(r);
        Element::from_words(&e.words()[n + 1..])
    }).collect();
    let zeros = vec![0u32; n];
    let mut s1 = Vec::with_capacity(size);
    let mut s2 = Vec::with_capacity(size);
    let mut s3 = Vec::with_capacity(size);
    for v in &vectors {
        let x = &v.words()[..n];
        s1.push(x.iter().chain(&zeros).chain(&[0]).copied().collect());
        s2.push(zeros.iter().chain(x).chain(&[0]).copied().collect());
        let zz = crate::group::bilinear_pairing(&f, n, &form, x, x);
        s3.push(x.iter().chain(x).chain(&[zz.index()]).copied().collect());
    }
    finish(&g, [s1, s2, s3], [true; 3], [size; 3], format!("bilinear q={q} n={n}"))
}

fn frob_parts() -> Result<(FiniteGroup, FieldCtx, Vec<Element>)> {
    let g = FiniteGroup::frobenius80()?;
    let f = g.semidirect_parts().unwrap().1.field().unwrap().clone();
    let top: Vec<Element> = g.semidirect_parts().unwrap().0.elements()?.collect();
    Ok((g, f, top))
}

/// `{(α,0)}`, `{(α, α-1)}`, `{(1,x) : Tr x = 0}` in `C_5 ⋉ F_16`.
pub fn frobenius80() -> Result<Certificate> {
    let (g, f, top) = frob_parts()?;
    let pair = |h: u32, a: FieldElem| Element::from_words(&[h, a.index()]);
    let s1 = top.iter().map(|h| pair(h.words()[0], f.zero())).collect();
    let s2 = top
        .iter()
        .map(|h| pair(h.words()[0], f.sub(f.elem(h.words()[0]).unwrap(), f.one())))
        .collect();
    let s3 = f.elements().filter(|&x| f.trace_to_prime(x) == f.zero()).map(|x| pair(f.one().index(), x)).collect();
    finish(&g, [s1, s2, s3], [true; 3], [5, 5, 8], "Frobenius group of order 80".into())
}

/// Realization in `H ⋉ A` from a 1-cocycle `θ : H → A` and a subgroup `B ⊆ A`
/// with `θ(g) ∈ B` only for `g = 1`: subsets `H × {0}`, `{(g, θ(g))}`, `{1} × B`.
pub fn cocycle(g: &FiniteGroup, theta: impl Fn(&Element) -> Element, b: &[Element], name: &str) -> Result<Certificate> {
    let (top, base, action) = g
        .semidirect_parts()
        .ok_or_else(|| ConstructionError::OutOfRange(format!("{} is not a semidirect product", g.descriptor())))?;
    let hs: Vec<Element> = top.elements()?.collect();
    let thetas: Vec<Element> = hs.iter().map(&theta).collect();
    for (x, tx) in hs.iter().zip(&thetas) {
        if !base.contains(tx) {
            return Err(ConstructionError::OutOfRange(format!("theta({}) is not in the base", top.format_elem(x))));
        }
    }
    for (x, tx) in hs.iter().zip(&thetas) {
        for (y, ty) in hs.iter().zip(&thetas) {
            let lhs = theta(&top.mul(x, y));
            let rhs = base.mul(&action.apply(y.words(), tx.words()), ty);
            if lhs != rhs {
                return Err(ConstructionError::CocycleFails(top.format_elem(x), top.format_elem(y)));
            }
        }
    }
    if !crate::tpp::is_subgroup(base, b) {
        return Err(ConstructionError::NotSubgroup("B".into()));
    }
    let bset: HashSet<&Element> = b.iter().collect();
    for (x, tx) in hs.iter().zip(&thetas) {
        if !top.is_identity(x) && bset.contains(tx) {
            return Err(ConstructionError::HypothesisFails(top.format_elem(x)));
        }
    }
    let join = |h: &Element, a: &Element| -> Element { h.words().iter().chain(a.words()).copied().collect() };
    let zero = base.identity();
    let s1 = hs.iter().map(|h| join(h, &zero)).collect();
    let s2 = hs.iter().zip(&thetas).map(|(h, t)| join(h, t)).collect();
    let s3 = b.iter().map(|a| join(&top.identity(), a)).collect();
    let n = hs.len();
    finish(g, [s1, s2, s3], [true; 3], [n, n, b.len()], name.to_string())
}

/// The order-80 realization rebuilt from the coboundary `θ(α) = α - 1` and
/// `B` the trace-zero hyperplane.
pub fn frobenius80_cocycle() -> Result<Certificate> {
    let (g, f, _) = frob_parts()?;
    let fc = f.clone();
    let theta = move |h: &Element| Element::from_words(&[fc.sub(fc.elem(h.words()[0]).unwrap(), fc.one()).index()]);
    let b: Vec<Element> = f
        .elements()
        .filter(|&x| f.trace_to_prime(x) == f.zero())
        .map(|x| Element::from_words(&[x.index()]))
        .collect();
    cocycle(&g, theta, &b, "Frobenius group of order 80 via coboundary")
}

/// `log(n! (2n)^n) / log n!`, the value `γ` of `C_{2n} ≀ S_n` and the
/// pseudo-exponent bound its realization gives.
pub fn wreath_alpha_formula(n: u64) -> f64 {
    let log_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    (log_fact + n as f64 * (2.0 * n as f64).ln()) / log_fact
}

/// `{(π,0)}`, `{(π, πu-u)}`, `{(π, πv-v)}` in `C_{2n} ≀ S_n` with
/// `u = (1, ..., n)` and `v = (n, ..., 1)`.
pub fn wreath(n: usize) -> Result<Certificate> {
    if !(2..=6).contains(&n) {
        return Err(ConstructionError::OutOfRange(format!("wreath verification needs 2 <= n <= 6, got {n}")));
    }
    let m = 2 * n as u32;
    let g = FiniteGroup::wreath(&FiniteGroup::cyclic(m)?, n)?;
    let perms = permutations(n);
    let build = |shift: &dyn Fn(&[u32], usize) -> u32| -> Vec<Element> {
        perms.iter().map(|p| p.iter().copied().chain((0..n).map(|i| shift(p, i))).collect()).collect()
    };
    let s1 = build(&|_, _| 0);
    // (πu - u)_i = u_{π(i)} - u_i = π(i) - i, and the reverse for v.
    let s2 = build(&|p, i| (p[i] + m - i as u32) % m);
    let s3 = build(&|p, i| (i as u32 + m - p[i]) % m);
    let f = perms.len();
    finish(&g, [s1, s2, s3], [true; 3], [f, f, f], format!("wreath n={n}"))
}

fn dihedral_elems(g: &FiniteGroup, xs: &[&str]) -> Result<Vec<Element>> {
    xs.iter().map(|x| g.parse_elem(x).map_err(Into::into)).collect()
}

/// `{1, y}`, `{1, yx^2}`, `{x^{3k}, yx^{3k+1} : 0 <= k < (m-2)/3}` in `D_m`.
pub fn dihedral(m: u32) -> Result<Certificate> {
    if m < 3 {
        return Err(ConstructionError::OutOfRange(format!("dihedral needs m >= 3, got {m}")));
    }
    let g = FiniteGroup::dihedral(m)?;
    let s1 = dihedral_elems(&g, &["1", "y"])?;
    let s2 = dihedral_elems(&g, &["1", "yx^2"])?;
    let mut s3 = Vec::new();
    for k in (0..).take_while(|k| 3 * k + 2 < m) {
        s3.push(Element::from_words(&[0, 3 * k]));
        s3.push(Element::from_words(&[1, 3 * k + 1]));
    }
    let third = 2 * (m / 3) as usize;
    finish(&g, [s1, s2, s3], [true, true, m.is_multiple_of(3) || m < 6], [2, 2, third], format!("dihedral m={m}"))
}

/// `{1, y}`, `{1, yx}`, `{1, x^2, yx^4}` in `D_5`.
pub fn dihedral5() -> Result<Certificate> {
    let g = FiniteGroup::dihedral(5)?;
    let s1 = dihedral_elems(&g, &["1", "y"])?;
    let s2 = dihedral_elems(&g, &["1", "yx^1"])?;
    let s3 = dihedral_elems(&g, &["1", "x^2", "yx^4"])?;
    finish(&g, [s1, s2, s3], [true, true, false], [2, 2, 3], "dihedral m=5 special".into())
}

/// Number of vectors in `(Z/m)^k` using each of `0..m-1` exactly `k/(m-1)` times.
pub fn sperner_size(m: u32, k: u32) -> u64 {
    let r = (k / (m - 1)) as u64;
    let fact = |n: u64| (1..=n).product::<u64>();
    fact(k as u64) / fact(r).pow(m - 1)
}

/// Vectors in `(Z/m)^k` containing each of `0, ..., m-2` exactly
/// `k/(m-1)` times, in lexicographic order. No two differ by a 0/1 vector;
/// this is checked over all ordered pairs.
pub fn sperner_set(m: u32, k: u32) -> Result<Vec<Vec<u32>>> {
    if m < 2 || k == 0 || !k.is_multiple_of(m - 1) {
        return Err(ConstructionError::OutOfRange(format!("need m >= 2 and (m-1) | k, got m={m}, k={k}")));
    }
    let r = k / (m - 1);
    let start: Vec<u32> = (0..m - 1).flat_map(|v| std::iter::repeat_n(v, r as usize)).collect();
    // 3163^2 is the first square above the pair cap.
    let out = arrangements(start, 3163);
    let pairs = (out.len() as u64).pow(2);
    if pairs > 10_000_000 {
        return Err(ConstructionError::PairCap(pairs));
    }
    for a in &out {
        for b in &out {
            if a != b && a.iter().zip(b).all(|(&x, &y)| (x + m - y) % m <= 1) {
                return Err(ConstructionError::DifferenceProperty(a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

/// `<y>^k`, `<yx>^k` and the Sperner set embedded in `<x>^k`, inside `D_m^k`.
pub fn sperner_power(m: u32, k: u32) -> Result<Certificate> {
    let vectors = sperner_set(m, k)?;
    let d = FiniteGroup::dihedral(m)?;
    let g = FiniteGroup::power(&d, k as usize)?;
    let k = k as usize;
    let cube = |gen: [u32; 2]| -> Vec<Element> {
        (0..1u32 << k)
            .map(|bits| {
                (0..k)
                    .flat_map(|i| if bits >> (k - 1 - i) & 1 == 1 { gen } else { [0, 0] })
                    .collect()
            })
            .collect()
    };
    let s3: Vec<Element> = vectors.iter().map(|v| v.iter().flat_map(|&e| [0, e]).collect()).collect();
    let shape = [1 << k, 1 << k, vectors.len()];
    finish(&g, [cube([1, 0]), cube([1, 1]), s3], [true, true, false], shape, format!("Sperner power m={m} k={k}"))
}

/// A named construction with parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub family: &'static str,
    pub params: Vec<u32>,
}

impl CatalogEntry {
    fn new(family: &'static str, params: &[u32]) -> Self {
        Self { family, params: params.to_vec() }
    }

    pub fn label(&self) -> String {
        if self.params.is_empty() {
            self.family.to_string()
        } else {
            let p: Vec<String> = self.params.iter().map(u32::to_string).collect();
            format!("{}({})", self.family, p.join(","))
        }
    }

    pub fn build(&self) -> Result<Certificate> {
        construct(self.family, &self.params)
    }
}

/// Family names accepted by [`construct`].
pub const FAMILIES: &[&str] = &[
    "cyclic-axes",
    "s3",
    "triangle",
    "sl2-parabolic",
    "sl2-unitary",
    "bilinear",
    "frob80",
    "frob80-cocycle",
    "wreath",
    "dihedral",
    "d5",
    "sperner",
];

/// Builds a construction by family name.
pub fn construct(family: &str, params: &[u32]) -> Result<Certificate> {
    let arity = |lo: usize, hi: usize| -> Result<()> {
        if (lo..=hi).contains(&params.len()) {
            Ok(())
        } else {
            Err(ConstructionError::OutOfRange(format!(
                "{family} takes {lo}..={hi} parameters, got {}",
                params.len()
            )))
        }
    };
    match family {
        "cyclic-axes" => {
            arity(3, 3)?;
            cyclic_axes(params[0], params[1], params[2])
        }
        "s3" => {
            arity(0, 0)?;
            triangle(2)
        }
        "triangle" => {
            arity(1, 1)?;
            triangle(params[0] as usize)
        }
        "sl2-parabolic" => {
            arity(1, 1)?;
            sl2_parabolic(params[0])
        }
        "sl2-unitary" => {
            arity(1, 1)?;
            sl2_unitary(params[0])
        }
        "bilinear" => {
            arity(1, 3)?;
            bilinear(params[0], params.get(1).map_or(2, |&n| n as usize), params.get(2).copied())
        }
        "frob80" => {
            arity(0, 0)?;
            frobenius80()
        }
        "frob80-cocycle" => {
            arity(0, 0)?;
            frobenius80_cocycle()
        }
        "wreath" => {
            arity(1, 1)?;
            wreath(params[0] as usize)
        }
        "dihedral" => {
            arity(1, 1)?;
            dihedral(params[0])
        }
        "d5" => {
            arity(0, 0)?;
            dihedral5()
        }
        "sperner" => {
            arity(2, 2)?;
            sperner_power(params[0], params[1])
        }
        other => Err(ConstructionError::UnknownFamily(other.to_string())),
    }
}

/// Every construction run by the catalog, in report order.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = vec![
        CatalogEntry::new("cyclic-axes", &[2, 3, 5]),
        CatalogEntry::new("cyclic-axes", &[2, 2, 2]),
        CatalogEntry::new("s3", &[]),
    ];
    out.extend((2..=4).map(|n| CatalogEntry::new("triangle", &[n])));
    out.extend([2, 3, 4, 5, 7, 8, 9].map(|q| CatalogEntry::new("sl2-parabolic", &[q])));
    out.extend([2, 3].map(|q| CatalogEntry::new("sl2-unitary", &[q])));
    out.extend([3, 5].map(|q| CatalogEntry::new("bilinear", &[q])));
    out.push(CatalogEntry::new("frob80", &[]));
    out.push(CatalogEntry::new("frob80-cocycle", &[]));
    out.extend((2..=6).map(|n| CatalogEntry::new("wreath", &[n])));
    out.extend((3..=30).map(|m| CatalogEntry::new("dihedral", &[m])));
    out.push(CatalogEntry::new("d5", &[]));
    out.extend([[4, 3], [4, 6]].map(|p| CatalogEntry::new("sperner", &p)));
    out
}
