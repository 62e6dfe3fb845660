//! Matrix multiplication through the group algebra.
//!
//! For a realization `(S, T, U)` of `<n, m, p>`, the matrices `A` (`|S|×|T|`)
//! and `B` (`|T|×|U|`) become `Ā = Σ A_st s^{-1}t` and `B̄ = Σ B_tu t^{-1}u`.
//! The coefficient of `s^{-1}u` in `Ā B̄` is then `(AB)_su`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::{Element, FiniteGroup};
use crate::tpp::Certificate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operands belong to different groups ({0} vs {1})")]
    GroupMismatch(String, String),
    #[error("basis products collide at {0}; the subsets do not satisfy the triple product property")]
    Collision(String),
    #[error("certificate is not verified")]
    Unverified,
}

/// Coefficient ring for exact computation.
pub trait Coeff: Clone + PartialEq + Zero + One + Add<Output = Self> + Mul<Output = Self> {}

impl<T: Clone + PartialEq + Zero + One + Add<Output = T> + Mul<Output = T>> Coeff for T {}

/// Dense row-major matrix with exact entries.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix<T = i64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for ExactMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.cols.max(1))).finish()
    }
}

impl<T: Coeff> ExactMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, EmbedError> {
        if data.len() != rows * cols {
            return Err(EmbedError::Dimension(format!(
                "{} entries for a {rows}×{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, EmbedError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(EmbedError::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).map(<[T]>::to_vec).collect()
    }
}

/// Textbook triple loop.
pub fn naive_matmul<T: Coeff>(a: &ExactMatrix<T>, b: &ExactMatrix<T>) -> Result<ExactMatrix<T>, EmbedError> {
    if a.cols != b.rows {
        return Err(EmbedError::Dimension(format!(
            "{}×{} times {}×{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = ExactMatrix::<T>::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let v = out.get(i, j).clone() + aik.clone() * b.get(k, j).clone();
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

/// Sparse element of `C[G]` with exact coefficients, keyed by canonical
/// element encoding. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct GroupAlgebraElement<T = i64> {
    group: FiniteGroup,
    coeffs: BTreeMap<Element, T>,
}

impl<T: fmt::Debug> fmt::Debug for GroupAlgebraElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.coeffs.iter().map(|(k, v)| (self.group.format_elem(k), v)))
            .finish()
    }
}

impl<T: Coeff> GroupAlgebraElement<T> {
    pub fn zero(group: &FiniteGroup) -> Self {
        Self { group: group.clone(), coeffs: BTreeMap::new() }
    }

    /// `c · g`.
    pub fn term(group: &FiniteGroup, g: Element, c: T) -> Self {
        let mut out = Self::zero(group);
        out.add_term(g, c);
        out
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn add_term(&mut self, g: Element, c: T) {
        debug_assert!(self.group.contains(&g));
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&g) {
            Some(old) => {
                let v = old + c;
                if !v.is_zero() {
                    self.coeffs.insert(g, v);
                }
            }
            None => {
                self.coeffs.insert(g, c);
            }
        }
    }

    pub fn coeff(&self, g: &Element) -> T {
        self.coeffs.get(g).cloned().unwrap_or_else(T::zero)
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Terms in ascending element order.
    pub fn terms(&self) -> impl Iterator<Item = (&Element, &T)> {
        self.coeffs.iter()
    }
}

/// Convolution `Σ_{gh = f} a_g b_h`.
pub fn ga_multiply<T: Coeff>(
    a: &GroupAlgebraElement<T>,
    b: &GroupAlgebraElement<T>,
) -> Result<GroupAlgebraElement<T>, EmbedError> {
    if a.group != b.group {
        return Err(EmbedError::GroupMismatch(
            a.group.descriptor().into(),
            b.group.descriptor().into(),
        ));
    }
    let g = &a.group;
    let mut acc: HashMap<Element, T> = HashMap::with_capacity(a.support_len() * b.support_len());
    for (x, cx) in a.terms() {
        for (y, cy) in b.terms() {
            let prod = cx.clone() * cy.clone();
            let slot = acc.entry(g.mul(x, y)).or_insert_with(T::zero);
            *slot = slot.clone() + prod;
        }
    }
    let coeffs = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    Ok(GroupAlgebraElement { group: g.clone(), coeffs })
}

fn check_dims<T: Coeff>(cert: &Certificate, a: &ExactMatrix<T>, b: &ExactMatrix<T>) -> Result<(), EmbedError> {
    let [n, m, p] = cert.shape();
    if (a.rows, a.cols, b.rows, b.cols) != (n, m, m, p) {
        return Err(EmbedError::Dimension(format!(
            "need {n}×{m} and {m}×{p}, got {}×{} and {}×{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(())
}

/// `Σ M_ij x_i^{-1} y_j`, optionally refusing colliding basis products.
fn embed_one<T: Coeff>(
    g: &FiniteGroup,
    xs: &[Element],
    ys: &[Element],
    m: &ExactMatrix<T>,
    strict: bool,
) -> Result<GroupAlgebraElement<T>, EmbedError> {
    let mut out = GroupAlgebraElement::zero(g);
    let mut seen = std::collections::HashSet::with_capacity(xs.len() * ys.len());
    for (i, x) in xs.iter().enumerate() {
        let xi = g.inv(x);
        for (j, y) in ys.iter().enumerate() {
            let e = g.mul(&xi, y);
            if strict && !seen.insert(e.clone()) {
                return Err(EmbedError::Collision(g.format_elem(&e)));
            }
            out.add_term(e, m.get(i, j).clone());
        }
    }
    Ok(out)
}

/// `Ā = Σ A_st s^{-1}t` and `B̄ = Σ B_tu t^{-1}u`.
///
/// Fails if two basis products coincide, which cannot happen for a triple
/// with the triple product property.
pub fn embed_matrices<T: Coeff>(
    cert: &Certificate,
    a: &ExactMatrix<T>,
    b: &ExactMatrix<T>,
) -> Result<(GroupAlgebraElement<T>, GroupAlgebraElement<T>), EmbedError> {
    check_dims(cert, a, b)?;
    let [s, t, u] = &cert.subsets;
    Ok((embed_one(&cert.group, s, t, a, true)?, embed_one(&cert.group, t, u, b, true)?))
}

/// Reads `(AB)_su` off the coefficient of `s^{-1}u` in `Ā B̄`.
pub fn matmul_via_group<T: Coeff>(
    cert: &Certificate,
    a: &ExactMatrix<T>,
    b: &ExactMatrix<T>,
) -> Result<ExactMatrix<T>, EmbedError> {
    if !cert.verified {
        return Err(EmbedError::Unverified);
    }
    let (abar, bbar) = embed_matrices(cert, a, b)?;
    read_off(cert, &ga_multiply(&abar, &bbar)?)
}

/// The same computation with no verification or collision checks. For
/// subsets without the triple product property the result is generally wrong.
pub fn matmul_via_group_unchecked<T: Coeff>(
    cert: &Certificate,
    a: &ExactMatrix<T>,
    b: &ExactMatrix<T>,
) -> Result<ExactMatrix<T>, EmbedError> {
    check_dims(cert, a, b)?;
    let [s, t, u] = &cert.subsets;
    let abar = embed_one(&cert.group, s, t, a, false)?;
    let bbar = embed_one(&cert.group, t, u, b, false)?;
    read_off(cert, &ga_multiply(&abar, &bbar)?)
}

/// Matrix with entries drawn uniformly from `[-bound, bound]`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> ExactMatrix {
    ExactMatrix { rows, cols, data: (0..rows * cols).map(|_| rng.gen_range(-bound..=bound)).collect() }
}

/// Outcome of comparing group-algebra products with naive ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub trials: usize,
    pub mismatches: usize,
}

impl OracleReport {
    pub fn all_match(&self) -> bool {
        self.mismatches == 0
    }
}

/// Multiplies `trials` seeded random pairs with entries in `[-100, 100]`
/// both ways. `checked = false` skips verification and collision checks.
pub fn oracle_trials(cert: &Certificate, trials: usize, seed: u64, checked: bool) -> Result<OracleReport, EmbedError> {
    let [n, m, p] = cert.shape();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = 0;
    for _ in 0..trials {
        let a = random_matrix(&mut rng, n, m, 100);
        let b = random_matrix(&mut rng, m, p, 100);
        let via = if checked { matmul_via_group(cert, &a, &b)? } else { matmul_via_group_unchecked(cert, &a, &b)? };
        if via != naive_matmul(&a, &b)? {
            mismatches += 1;
        }
    }
    Ok(OracleReport { trials, mismatches })
}

fn read_off<T: Coeff>(cert: &Certificate, prod: &GroupAlgebraElement<T>) -> Result<ExactMatrix<T>, EmbedError> {
    let g = &cert.group;
    let [s, _, u] = &cert.subsets;
    let mut out = ExactMatrix::zeros(s.len(), u.len());
    for (i, x) in s.iter().enumerate() {
        let xi = g.inv(x);
        for (j, y) in u.iter().enumerate() {
            out.set(i, j, prod.coeff(&g.mul(&xi, y)));
        }
    }
    Ok(out)
}
