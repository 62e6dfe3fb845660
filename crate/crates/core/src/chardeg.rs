//! Character degrees: closed forms for the supported families and a numeric
//! method for any group small enough to tabulate.
//!
//! The numeric method works in the center of `C[G]`, spanned by the class
//! sums `K_C`. A random central element `z = Σ c_C K_C` acts on the center
//! with one eigenvalue per irreducible character `χ`, and the matching
//! eigenvector is proportional to `(conj χ(g_C))_C`. The degree follows from
//! `χ(1)^2 = |G| |v_1|^2 / Σ_C |C| |v_C|^2`.

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::FieldCtx;
use crate::group::{conjugacy_classes, Family, FiniteGroup, GroupError, GroupTable};

/// Largest group handled by [`degrees_numeric`].
pub const NUMERIC_CAP: u64 = 2000;

const MAX_ATTEMPTS: u64 = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharDegError {
    #[error("no closed form for {0}")]
    UnknownFamily(String),
    #[error("numeric degrees need |G| <= {NUMERIC_CAP}, got {0}")]
    TooLarge(u64),
    #[error("numeric degrees failed validation after {attempts} attempts: {reason}")]
    ValidationFailed { attempts: u64, reason: String },
    #[error("only the largest degree is known for {0}")]
    Incomplete(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeSource {
    Formula,
    Numeric { seed: u64 },
}

/// A multiset of character degrees, stored as `(degree, multiplicity)` pairs
/// in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterDegrees {
    counts: Vec<(u64, u64)>,
    order: u64,
    source: DegreeSource,
    complete: bool,
}

impl CharacterDegrees {
    /// Builds a complete multiset and checks `Σ d^2 = |G|` and that the
    /// trivial degree is present.
    pub fn from_counts(order: u64, counts: impl IntoIterator<Item = (u64, u64)>, source: DegreeSource) -> Self {
        let d = Self::normalized(order, counts, source, true);
        assert_eq!(d.sum_squares(), order as u128, "degrees {:?} do not fit |G| = {order}", d.counts);
        assert!(d.counts.first().is_some_and(|&(deg, _)| deg == 1), "no trivial character");
        d
    }

    /// Only the largest degree is known.
    pub fn max_only(order: u64, d_max: u64) -> Self {
        Self::normalized(order, [(d_max, 1)], DegreeSource::Formula, false)
    }

    fn normalized(order: u64, counts: impl IntoIterator<Item = (u64, u64)>, source: DegreeSource, complete: bool) -> Self {
        let mut v: Vec<(u64, u64)> = counts.into_iter().filter(|&(_, m)| m > 0).collect();
        v.sort_unstable();
        let mut merged: Vec<(u64, u64)> = Vec::with_capacity(v.len());
        for (d, m) in v {
            match merged.last_mut() {
                Some((ld, lm)) if *ld == d => *lm += m,
                _ => merged.push((d, m)),
            }
        }
        Self { counts: merged, order, source, complete }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn source(&self) -> DegreeSource {
        self.source
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn counts(&self) -> &[(u64, u64)] {
        &self.counts
    }

    /// Number of irreducible characters.
    pub fn len(&self) -> u64 {
        self.counts.iter().map(|&(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// The sorted multiset, one entry per character.
    pub fn expanded(&self) -> Vec<u64> {
        self.counts.iter().flat_map(|&(d, m)| std::iter::repeat_n(d, m as usize)).collect()
    }

    pub fn max_degree(&self) -> u64 {
        self.counts.last().map_or(1, |&(d, _)| d)
    }

    pub fn sum_squares(&self) -> u128 {
        self.counts.iter().map(|&(d, m)| (d as u128) * (d as u128) * m as u128).sum()
    }

    /// `γ = log|G| / log d_max`, infinite when every degree is 1.
    pub fn gamma(&self) -> f64 {
        let d = self.max_degree();
        if d <= 1 {
            f64::INFINITY
        } else {
            (self.order as f64).ln() / (d as f64).ln()
        }
    }

    /// `log Σ d^k`, accumulated as a log-sum-exp over distinct degrees.
    pub fn log_power_sum(&self, k: f64) -> Result<f64, CharDegError> {
        if !self.complete {
            return Err(CharDegError::Incomplete(format!("group of order {}", self.order)));
        }
        let logs: Vec<f64> = self.counts.iter().map(|&(d, m)| (m as f64).ln() + k * (d as f64).ln()).collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for l in &logs {
            // Kahan summation of the scaled terms.
            let y = (l - top).exp() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        Ok(top + sum.ln())
    }

    /// `Σ d^k`.
    pub fn power_sum(&self, k: f64) -> Result<f64, CharDegError> {
        Ok(self.log_power_sum(k)?.exp())
    }

    /// Exact `Σ d^3`, if it fits.
    pub fn sum_cubes(&self) -> Result<u128, CharDegError> {
        if !self.complete {
            return Err(CharDegError::Incomplete(format!("group of order {}", self.order)));
        }
        Ok(self.counts.iter().map(|&(d, m)| (d as u128).pow(3) * m as u128).sum())
    }

    /// Same multiset, ignoring how it was obtained.
    pub fn same_multiset(&self, other: &Self) -> bool {
        self.counts == other.counts && self.complete == other.complete
    }
}

/// Degrees of an abelian group: all ones.
pub fn abelian_degrees(order: u64) -> CharacterDegrees {
    CharacterDegrees::from_counts(order, [(1, order)], DegreeSource::Formula)
}

/// Degrees of `SL_2(F_q)`.
pub fn sl2_degrees(q: u64) -> CharacterDegrees {
    let order = q * q * q - q;
    let counts = if q % 2 == 1 {
        vec![
            (1, 1),
            (q, 1),
            (q + 1, (q - 3) / 2),
            (q - 1, (q - 1) / 2),
            (q.div_ceil(2), 2),
            ((q - 1) / 2, 2),
        ]
    } else {
        vec![(1, 1), (q, 1), (q + 1, (q - 2) / 2), (q - 1, q / 2)]
    };
    CharacterDegrees::from_counts(order, counts, DegreeSource::Formula)
}

/// Degrees of the dihedral group of order `2m`.
pub fn dihedral_degrees(m: u64) -> CharacterDegrees {
    let counts = if m.is_multiple_of(2) { [(1, 4), (2, m / 2 - 1)] } else { [(1, 2), (2, (m - 1) / 2)] };
    CharacterDegrees::from_counts(2 * m, counts, DegreeSource::Formula)
}

fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            cur.push(part);
            go(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Degrees of `S_n` by the hook length formula.
pub fn symmetric_degrees(n: usize) -> CharacterDegrees {
    let fact: u128 = (1..=n as u128).product();
    let counts = partitions(n).into_iter().map(|shape| {
        let mut hooks: u128 = 1;
        for (i, &row) in shape.iter().enumerate() {
            for j in 0..row {
                let below = shape[i + 1..].iter().filter(|&&r| r > j).count();
                hooks *= (row - j + below) as u128;
            }
        }
        ((fact / hooks) as u64, 1)
    });
    CharacterDegrees::from_counts(fact as u64, counts.collect::<Vec<_>>(), DegreeSource::Formula)
}

/// Degrees of a direct product: all products of factor degrees.
pub fn product_degrees(factors: &[CharacterDegrees]) -> CharacterDegrees {
    let mut counts: Vec<(u64, u64)> = vec![(1, 1)];
    let mut order = 1u64;
    for f in factors {
        order *= f.order;
        let mut next = Vec::with_capacity(counts.len() * f.counts.len());
        for &(d, m) in &counts {
            for &(e, n) in &f.counts {
                next.push((d * e, m * n));
            }
        }
        counts = CharacterDegrees::normalized(order, next, DegreeSource::Formula, true).counts;
    }
    CharacterDegrees::from_counts(order, counts, DegreeSource::Formula)
}

fn form_rank(f: &FieldCtx, n: usize, form: &[crate::field::FieldElem]) -> usize {
    let mut rows: Vec<Vec<_>> = form.chunks(n).map(<[_]>::to_vec).collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| rows[r][col] != f.zero()) else { continue };
        rows.swap(rank, p);
        let inv = f.inv(rows[rank][col]).unwrap();
        for r in 0..n {
            if r != rank && rows[r][col] != f.zero() {
                let factor = f.mul(rows[r][col], inv);
                for c in 0..n {
                    let v = f.sub(rows[r][c], f.mul(factor, rows[rank][c]));
                    rows[r][c] = v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Closed-form degrees where the family has one.
///
/// Covers abelian groups, `SL_2(F_q)`, dihedral and symmetric groups, the
/// bilinear-form group with a nondegenerate form over an odd field, direct
/// products of these, and (largest degree only) `C_a ≀ S_n` with `a >= n`.
pub fn degrees_formula(g: &FiniteGroup) -> Result<CharacterDegrees, CharDegError> {
    if g.is_abelian() {
        return Ok(abelian_degrees(g.order()));
    }
    let unknown = || CharDegError::UnknownFamily(g.descriptor().to_string());
    match g.family() {
        Family::Sl2(q) => Ok(sl2_degrees(q as u64)),
        Family::Dihedral(m) => Ok(dihedral_degrees(m as u64)),
        Family::Symmetric(n) => Ok(symmetric_degrees(n)),
        Family::Bilinear(q, n) => {
            let (f, _, form) = g.bilinear_parts().unwrap();
            if f.characteristic() == 2 || form_rank(f, n, form) != n {
                return Err(unknown());
            }
            let (q, n) = (q as u64, n as u32);
            Ok(CharacterDegrees::from_counts(
                g.order(),
                [(1, q.pow(2 * n)), (q.pow(n), q - 1)],
                DegreeSource::Formula,
            ))
        }
        Family::Product => {
            let factors = g.product_factors().unwrap();
            let degs = factors.iter().map(degrees_formula).collect::<Result<Vec<_>, _>>()?;
            if degs.iter().any(|d| !d.complete) {
                return Err(unknown());
            }
            Ok(product_degrees(&degs))
        }
        Family::Wreath(n) => {
            let (base, _) = g.wreath_parts().unwrap();
            match base.family() {
                Family::Cyclic(a) if a as usize >= n => {
                    let fact: u64 = (1..=n as u64).product();
                    Ok(CharacterDegrees::max_only(g.order(), fact))
                }
                _ => Err(unknown()),
            }
        }
        _ => Err(unknown()),
    }
}

/// Degrees computed from the spectrum of a random central element.
pub fn degrees_numeric(g: &FiniteGroup, seed: u64) -> Result<CharacterDegrees, CharDegError> {
    if g.order() > NUMERIC_CAP {
        return Err(CharDegError::TooLarge(g.order()));
    }
    let table = GroupTable::new(g)?;
    let classes = conjugacy_classes(&table);
    let mut class_of = vec![0usize; table.len()];
    for (c, members) in classes.iter().enumerate() {
        for &x in members {
            class_of[x as usize] = c;
        }
    }
    let mut reason = String::new();
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
        match numeric_attempt(&table, &classes, &class_of, &mut rng) {
            Ok(counts) => {
                return Ok(CharacterDegrees::normalized(g.order(), counts, DegreeSource::Numeric { seed }, true));
            }
            Err(r) => reason = r,
        }
    }
    Err(CharDegError::ValidationFailed { attempts: MAX_ATTEMPTS, reason })
}

fn numeric_attempt(
    table: &GroupTable,
    classes: &[Vec<u32>],
    class_of: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(u64, u64)>, String> {
    let k = classes.len();
    let order = table.len() as f64;
    let coef: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
    // Column j: z * K_j in the class-sum basis, read at class representatives.
    let m = DMatrix::from_fn(k, k, |l, j| {
        let rep = classes[l][0];
        classes[j].iter().map(|&y| coef[class_of[table.mul(rep, table.inv(y)) as usize]]).sum::<f64>()
    });
    let eig = m.complex_eigenvalues();
    let scale = eig.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for i in 0..k {
        for j in i + 1..k {
            if (eig[i] - eig[j]).norm() <= 1e-6 * scale {
                return Err("central element has a repeated eigenvalue".into());
            }
        }
    }
    let mc: DMatrix<Complex<f64>> = m.map(|x| Complex::new(x, 0.0));
    let sizes: Vec<f64> = classes.iter().map(|c| c.len() as f64).collect();
    let mut counts = Vec::with_capacity(k);
    for &lambda in eig.iter() {
        let v = eigenvector(&mc, lambda, scale, rng).ok_or("singular inverse iteration")?;
        let weighted: f64 = v.iter().zip(&sizes).map(|(x, s)| s * x.norm_sqr()).sum();
        let d2 = order * v[0].norm_sqr() / weighted;
        let d = d2.sqrt().round();
        if d < 1.0 || (d2 - d * d).abs() > 1e-6 * d2.max(1.0) {
            return Err(format!("non-square degree estimate {d2}"));
        }
        counts.push((d as u64, 1));
    }
    let total: u128 = counts.iter().map(|&(d, _)| (d as u128) * (d as u128)).sum();
    if total != table.len() as u128 {
        return Err(format!("sum of squares {total} != |G| = {}", table.len()));
    }
    if !counts.iter().any(|&(d, _)| d == 1) {
        return Err("no linear character found".into());
    }
    Ok(counts)
}

/// Inverse iteration for the eigenvector of `m` nearest `lambda`.
fn eigenvector(
    m: &DMatrix<Complex<f64>>,
    lambda: Complex<f64>,
    scale: f64,
    rng: &mut ChaCha8Rng,
) -> Option<DVector<Complex<f64>>> {
    let k = m.nrows();
    let shift = lambda + Complex::new(scale * 1e-10, scale * 1e-10);
    let shifted = m - DMatrix::from_diagonal_element(k, k, shift);
    let lu = shifted.lu();
    let mut v = DVector::from_fn(k, |_, _| Complex::new(rng.gen_range(0.5..1.5), rng.gen_range(-0.5..0.5)));
    for _ in 0..4 {
        v = lu.solve(&v)?;
        let n = v.norm();
        if !n.is_finite() || n == 0.0 {
            return None;
        }
        v /= Complex::new(n, 0.0);
    }
    Some(v)
}
