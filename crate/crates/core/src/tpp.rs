//! Quotient sets and the triple product property.
//!
//! Subsets `S1, S2, S3` of `G` satisfy the triple product property when
//! `q1 q2 q3 = 1` with `qi ∈ Q(Si)` forces `q1 = q2 = q3 = 1`, where
//! `Q(S) = { s t^{-1} : s, t ∈ S }`. Such a triple realizes the matrix
//! multiplication shape `<|S1|, |S2|, |S3|>` inside `C[G]`.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::group::{Element, FiniteGroup, GroupError};

/// Default limit on `|Q(S1)| * |Q(S2)|`.
pub const DEFAULT_WORK_CAP: u128 = 10_000_000_000;

/// Subsets up to this squared size get an exact closure test.
const CLOSURE_TEST_CAP: usize = 1_000_000;

/// Groups up to this order use a rank bitmap for membership.
const BITMAP_CAP: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TppError {
    #[error("subset {0} is empty")]
    EmptySubset(usize),
    #[error("subset {subset} contains {elem}, which is not in the group")]
    NotMember { subset: usize, elem: String },
    #[error("subset {subset} lists {elem} twice")]
    Duplicate { subset: usize, elem: String },
    #[error("{pairs} quotient pairs exceed the work cap of {cap}")]
    WorkCap { pairs: u128, cap: u128 },
    #[error("subset {0} was declared a subgroup but is not closed")]
    NotASubgroup(usize),
    #[error("certificate is not verified")]
    Unverified,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Membership structure for a set of group elements.
#[derive(Clone, Debug)]
pub struct ElementSet {
    group: FiniteGroup,
    sorted: Vec<Element>,
    lookup: Lookup,
}

#[derive(Clone, Debug)]
enum Lookup {
    Bits(Vec<u64>),
    Hash(HashSet<Element>),
}

impl ElementSet {
    pub fn new(group: &FiniteGroup, elems: impl IntoIterator<Item = Element>) -> Self {
        let mut sorted: Vec<Element> = elems.into_iter().collect();
        sorted.sort_unstable();
        sorted.dedup();
        let lookup = if group.order() <= BITMAP_CAP {
            let mut bits = vec![0u64; (group.order() as usize).div_ceil(64)];
            for e in &sorted {
                let r = group.rank(e) as usize;
                bits[r / 64] |= 1 << (r % 64);
            }
            Lookup::Bits(bits)
        } else {
            Lookup::Hash(sorted.iter().cloned().collect())
        };
        Self { group: group.clone(), sorted, lookup }
    }

    #[inline]
    pub fn contains(&self, e: &Element) -> bool {
        match &self.lookup {
            Lookup::Bits(bits) => {
                let r = self.group.rank(e) as usize;
                bits[r / 64] >> (r % 64) & 1 == 1
            }
            Lookup::Hash(h) => h.contains(e),
        }
    }

    /// Elements in ascending canonical order.
    pub fn elements(&self) -> &[Element] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }
}

/// `Q(S) = { s t^{-1} }`.
pub fn quotient_set(g: &FiniteGroup, s: &[Element]) -> ElementSet {
    let invs: Vec<Element> = s.iter().map(|t| g.inv(t)).collect();
    let mut out = HashSet::with_capacity(s.len() * s.len());
    for a in s {
        for b in &invs {
            out.insert(g.mul(a, b));
        }
    }
    ElementSet::new(g, out)
}

/// Exact closure test: `1 ∈ S` and `a b^{-1} ∈ S` for all `a, b ∈ S`.
pub fn is_subgroup(g: &FiniteGroup, s: &[Element]) -> bool {
    let set = ElementSet::new(g, s.iter().cloned());
    set.contains(&g.identity())
        && s.iter().all(|a| s.iter().all(|b| set.contains(&g.mul(a, &g.inv(b)))))
}

/// Randomized closure test, for subsets too large for [`is_subgroup`].
fn probably_subgroup(g: &FiniteGroup, s: &[Element], set: &ElementSet) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(s.len() as u64);
    set.contains(&g.identity())
        && (0..4096).all(|_| {
            let a = &s[rng.gen_range(0..s.len())];
            let b = &s[rng.gen_range(0..s.len())];
            set.contains(&g.mul(a, &g.inv(b)))
        })
}

/// A group with three subsets and the shape they realize.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub group: FiniteGroup,
    pub subsets: [Vec<Element>; 3],
    pub subgroup: [bool; 3],
    pub verified: bool,
    /// Human-readable name of the construction that produced it.
    pub construction: String,
}

impl Certificate {
    pub fn shape(&self) -> [usize; 3] {
        [self.subsets[0].len(), self.subsets[1].len(), self.subsets[2].len()]
    }

    pub fn nmp(&self) -> u128 {
        self.shape().iter().map(|&x| x as u128).product()
    }

    /// `3 log|G| / log(nmp)`, an upper bound on the pseudo-exponent.
    pub fn alpha_upper(&self) -> Option<f64> {
        alpha_upper(self.group.order(), self.shape())
    }

    pub fn with_construction(mut self, name: impl Into<String>) -> Self {
        self.construction = name.into();
        self
    }
}

/// `3 log|G| / log(nmp)`, or `None` when `nmp = 1`.
pub fn alpha_upper(order: u64, shape: [usize; 3]) -> Option<f64> {
    let log_nmp: f64 = shape.iter().map(|&x| (x as f64).ln()).sum();
    (log_nmp > 0.0).then(|| 3.0 * (order as f64).ln() / log_nmp)
}

/// Necessary size conditions for a realized shape: `|G| >= ni nj` for each
/// pair, and `|G| >= nmp` when `G` is abelian. Returns the violated condition.
pub fn size_bound_violation(order: u64, shape: [usize; 3], abelian: bool) -> Option<String> {
    let o = order as u128;
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        if (shape[i] as u128) * (shape[j] as u128) > o {
            return Some(format!("|G| = {order} < n{} n{} = {}", i + 1, j + 1, shape[i] * shape[j]));
        }
    }
    let nmp: u128 = shape.iter().map(|&x| x as u128).product();
    (abelian && nmp > o).then(|| format!("abelian |G| = {order} < nmp = {nmp}"))
}

#[derive(Clone, Debug)]
pub enum TppOutcome {
    Verified(Certificate),
    /// `q1 q2 q3 = 1` with `qi ∈ Q(Si)`, not all trivial.
    Counterexample([Element; 3]),
}

impl TppOutcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, TppOutcome::Verified(_))
    }

    pub fn certificate(self) -> Option<Certificate> {
        match self {
            TppOutcome::Verified(c) => Some(c),
            TppOutcome::Counterexample(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Subsets the caller declares to be subgroups. Large declared subgroups
    /// are spot-checked rather than proven closed.
    pub assume_subgroup: [bool; 3],
    pub work_cap: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { assume_subgroup: [false; 3], work_cap: DEFAULT_WORK_CAP }
    }
}

fn validate_subsets(g: &FiniteGroup, subsets: &[Vec<Element>; 3]) -> Result<(), TppError> {
    for (i, s) in subsets.iter().enumerate() {
        if s.is_empty() {
            return Err(TppError::EmptySubset(i + 1));
        }
        let mut seen = HashSet::with_capacity(s.len());
        for e in s {
            if !g.contains(e) {
                return Err(TppError::NotMember { subset: i + 1, elem: format!("{e:?}") });
            }
            if !seen.insert(e) {
                return Err(TppError::Duplicate { subset: i + 1, elem: g.format_elem(e) });
            }
        }
    }
    Ok(())
}

pub fn verify_tpp(g: &FiniteGroup, subsets: &[Vec<Element>; 3]) -> Result<TppOutcome, TppError> {
    verify_tpp_with(g, subsets, VerifyOptions::default())
}

/// Checks the triple product property.
///
/// Scans `q1 ∈ Q(S1) \ {1}` and `q2 ∈ Q(S2) \ {1}` in ascending order and
/// looks up `(q1 q2)^{-1}` in `Q(S3)`; then checks the cases `q1 = 1` and
/// `q2 = 1`. The first witness in that order is returned, independent of
/// thread count.
pub fn verify_tpp_with(
    g: &FiniteGroup,
    subsets: &[Vec<Element>; 3],
    opts: VerifyOptions,
) -> Result<TppOutcome, TppError> {
    validate_subsets(g, subsets)?;
    let mut subgroup = [false; 3];
    let mut qs = Vec::with_capacity(3);
    for (i, s) in subsets.iter().enumerate() {
        if opts.assume_subgroup[i] || s.len().saturating_mul(s.len()) <= CLOSURE_TEST_CAP {
            let set = ElementSet::new(g, s.iter().cloned());
            let closed = if s.len().saturating_mul(s.len()) <= CLOSURE_TEST_CAP {
                is_subgroup(g, s)
            } else {
                probably_subgroup(g, s, &set)
            };
            if opts.assume_subgroup[i] && !closed {
                return Err(TppError::NotASubgroup(i + 1));
            }
            if closed {
                subgroup[i] = true;
                qs.push(set);
                continue;
            }
        }
        qs.push(quotient_set(g, s));
    }
    let pairs = qs[0].len() as u128 * qs[1].len() as u128;
    if pairs > opts.work_cap {
        return Err(TppError::WorkCap { pairs, cap: opts.work_cap });
    }
    let id = g.identity();
    let (q1, q2, q3) = (&qs[0], &qs[1], &qs[2]);
    let rest2: Vec<&Element> = q2.elements().iter().filter(|e| **e != id).collect();
    let witness = q1
        .elements()
        .par_iter()
        .filter(|a| **a != id)
        .find_map_first(|a| {
            rest2.iter().find_map(|b| {
                let c = g.inv(&g.mul(a, b));
                q3.contains(&c).then(|| [a.clone(), (*b).clone(), c])
            })
        })
        .or_else(|| {
            rest2.iter().find_map(|b| {
                let c = g.inv(b);
                q3.contains(&c).then(|| [id.clone(), (*b).clone(), c])
            })
        })
        .or_else(|| {
            q1.elements().iter().filter(|a| **a != id).find_map(|a| {
                let c = g.inv(a);
                q3.contains(&c).then(|| [a.clone(), id.clone(), c])
            })
        });
    Ok(match witness {
        Some(w) => TppOutcome::Counterexample(w),
        None => TppOutcome::Verified(Certificate {
            group: g.clone(),
            subsets: subsets.clone(),
            subgroup,
            verified: true,
            construction: String::new(),
        }),
    })
}

/// Re-runs verification on a certificate and returns it with `verified` set
/// from the result.
pub fn reverify(cert: &Certificate) -> Result<TppOutcome, TppError> {
    let opts = VerifyOptions { assume_subgroup: cert.subgroup, ..Default::default() };
    let out = verify_tpp_with(&cert.group, &cert.subsets, opts)?;
    Ok(match out {
        TppOutcome::Verified(mut c) => {
            c.construction = cert.construction.clone();
            TppOutcome::Verified(c)
        }
        w => w,
    })
}

/// The six orderings of three items, identity first.
pub const ORDERINGS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Verifies all six orderings of the subsets; true iff the verdicts agree.
pub fn check_permutation_invariance(g: &FiniteGroup, subsets: &[Vec<Element>; 3]) -> Result<bool, TppError> {
    let mut verdicts = Vec::with_capacity(6);
    for p in ORDERINGS {
        let permuted = [subsets[p[0]].clone(), subsets[p[1]].clone(), subsets[p[2]].clone()];
        verdicts.push(verify_tpp(g, &permuted)?.is_verified());
    }
    Ok(verdicts.iter().all(|&v| v == verdicts[0]))
}

/// Realization in `G1 × G2` from realizations in each factor; subsets are
/// componentwise pairs and shapes multiply.
pub fn lift_direct_product(a: &Certificate, b: &Certificate) -> Result<Certificate, TppError> {
    if !a.verified || !b.verified {
        return Err(TppError::Unverified);
    }
    let g = FiniteGroup::direct_product(&[a.group.clone(), b.group.clone()])?;
    let subsets: [Vec<Element>; 3] = std::array::from_fn(|i| {
        let mut out = Vec::with_capacity(a.subsets[i].len() * b.subsets[i].len());
        for x in &a.subsets[i] {
            for y in &b.subsets[i] {
                out.push(x.words().iter().chain(y.words()).copied().collect());
            }
        }
        out
    });
    let opts = VerifyOptions {
        assume_subgroup: std::array::from_fn(|i| a.subgroup[i] && b.subgroup[i]),
        ..Default::default()
    };
    match verify_tpp_with(&g, &subsets, opts)? {
        TppOutcome::Verified(c) => {
            Ok(c.with_construction(format!("product of ({}) and ({})", a.construction, b.construction)))
        }
        TppOutcome::Counterexample(_) => Err(TppError::Unverified),
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::group::parse_descriptor;

    fn grp(d: &str) -> FiniteGroup {
        parse_descriptor(d).unwrap()
    }

    fn set(g: &FiniteGroup, xs: &[&str]) -> Vec<Element> {
        xs.iter().map(|x| g.parse_elem(x).unwrap()).collect()
    }

    fn s3_triple() -> (FiniteGroup, [Vec<Element>; 3]) {
        let g = grp("sym:3");
        let t = [
            set(&g, &["[0,1,2]", "[1,0,2]"]),
            set(&g, &["[0,1,2]", "[0,2,1]"]),
            set(&g, &["[0,1,2]", "[2,1,0]"]),
        ];
        (g, t)
    }

    #[test]
    fn quotient_set_examples() {
        let d5 = grp("dihedral:5");
        let q = quotient_set(&d5, &set(&d5, &["1", "x^2", "yx^4"]));
        let want = ElementSet::new(&d5, set(&d5, &["1", "x^2", "x^3", "yx^2", "yx^4"]));
        assert_eq!(q.elements(), want.elements());
        let one = quotient_set(&d5, &[d5.identity()]);
        assert_eq!(one.elements(), &[d5.identity()]);
        let h = set(&d5, &["1", "x^1", "x^2", "x^3", "x^4"]);
        assert!(is_subgroup(&d5, &h));
        assert_eq!(quotient_set(&d5, &h).len(), 5);
        assert!(!is_subgroup(&d5, &set(&d5, &["1", "x^1"])));
    }

    #[test]
    fn s3_order_two_subgroups() {
        let (g, t) = s3_triple();
        let cert = verify_tpp(&g, &t).unwrap().certificate().unwrap();
        assert_eq!(cert.shape(), [2, 2, 2]);
        assert_eq!(cert.subgroup, [true; 3]);
        assert!((cert.alpha_upper().unwrap() - 6f64.log2()).abs() < 1e-12);
        assert!(check_permutation_invariance(&g, &t).unwrap());
    }

    #[test]
    fn trivial_realization() {
        let g = grp("sl2:3");
        let all: Vec<Element> = g.elements().unwrap().collect();
        let t = [vec![g.identity()], vec![g.identity()], all];
        let cert = verify_tpp(&g, &t).unwrap().certificate().unwrap();
        assert_eq!(cert.shape(), [1, 1, 24]);
        assert!((cert.alpha_upper().unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(alpha_upper(24, [1, 1, 1]), None);
    }

    #[test]
    fn cyclic_wraparound_witness() {
        let g = grp("cyclic:4");
        let s = set(&g, &["0", "1"]);
        let out = verify_tpp(&g, &[s.clone(), s.clone(), s.clone()]).unwrap();
        let TppOutcome::Counterexample(w) = out else { panic!("expected failure") };
        let w: Vec<String> = w.iter().map(|e| g.format_elem(e)).collect();
        assert_eq!(w, ["1", "3", "0"]);
        assert!(check_permutation_invariance(&g, &[s.clone(), s.clone(), s]).unwrap());
    }

    #[test]
    fn degenerate_witnesses() {
        let g = grp("cyclic:6");
        let t = [
            set(&g, &["0"]),
            set(&g, &["0", "3"]),
            set(&g, &["0", "3"]),
        ];
        let TppOutcome::Counterexample(w) = verify_tpp(&g, &t).unwrap() else { panic!() };
        assert_eq!(w, [g.identity(), set(&g, &["3"])[0].clone(), set(&g, &["3"])[0].clone()]);
        let t = [set(&g, &["0", "2"]), set(&g, &["0"]), set(&g, &["0", "2"])];
        let TppOutcome::Counterexample(w) = verify_tpp(&g, &t).unwrap() else { panic!() };
        assert_eq!(g.format_elem(&w[0]), "2");
        assert_eq!(g.format_elem(&w[2]), "4");
    }

    #[test]
    fn d5_special_subsets_all_orderings() {
        let g = grp("dihedral:5");
        let t = [set(&g, &["1", "y"]), set(&g, &["1", "yx^1"]), set(&g, &["1", "x^2", "yx^4"])];
        assert!(verify_tpp(&g, &t).unwrap().is_verified());
        for p in ORDERINGS {
            let permuted = [t[p[0]].clone(), t[p[1]].clone(), t[p[2]].clone()];
            assert!(verify_tpp(&g, &permuted).unwrap().is_verified(), "{p:?}");
        }
    }

    #[test]
    fn invalid_inputs() {
        let g = grp("cyclic:5");
        let ok = set(&g, &["0"]);
        assert_eq!(verify_tpp(&g, &[vec![], ok.clone(), ok.clone()]).unwrap_err(), TppError::EmptySubset(1));
        let dup = set(&g, &["1", "1"]);
        assert!(matches!(verify_tpp(&g, &[ok.clone(), dup, ok.clone()]), Err(TppError::Duplicate { subset: 2, .. })));
        let bad = vec![Element::from_words(&[7])];
        assert!(matches!(verify_tpp(&g, &[ok.clone(), ok.clone(), bad]), Err(TppError::NotMember { subset: 3, .. })));
        let all: Vec<Element> = g.elements().unwrap().collect();
        let opts = VerifyOptions { work_cap: 10, ..Default::default() };
        assert!(matches!(
            verify_tpp_with(&g, &[all.clone(), all, ok.clone()], opts),
            Err(TppError::WorkCap { pairs: 25, cap: 10 })
        ));
        let opts = VerifyOptions { assume_subgroup: [true, false, false], ..Default::default() };
        assert_eq!(
            verify_tpp_with(&g, &[set(&g, &["0", "1"]), ok.clone(), ok], opts).unwrap_err(),
            TppError::NotASubgroup(1)
        );
    }

    #[test]
    fn lifting_products() {
        let (g, t) = s3_triple();
        let c = verify_tpp(&g, &t).unwrap().certificate().unwrap();
        let sq = lift_direct_product(&c, &c).unwrap();
        assert_eq!(sq.shape(), [4, 4, 4]);
        assert_eq!(sq.group.order(), 36);
        assert!(sq.alpha_upper().unwrap() <= c.alpha_upper().unwrap() + 1e-12);
        let triv_g = grp("cyclic:1");
        let one = vec![triv_g.identity()];
        let triv = verify_tpp(&triv_g, &[one.clone(), one.clone(), one]).unwrap().certificate().unwrap();
        assert_eq!(lift_direct_product(&c, &triv).unwrap().shape(), [2, 2, 2]);
        let mut bad = c.clone();
        bad.verified = false;
        assert_eq!(lift_direct_product(&bad, &c).unwrap_err(), TppError::Unverified);
    }

    #[test]
    fn size_bounds() {
        assert!(size_bound_violation(6, [2, 2, 2], false).is_none());
        assert!(size_bound_violation(6, [2, 2, 2], true).is_some());
        assert!(size_bound_violation(8, [3, 3, 1], false).is_some());
        assert!(size_bound_violation(80, [5, 5, 8], false).is_none());
    }

    fn random_subset(g: &FiniteGroup, mask: u128) -> Vec<Element> {
        let n = g.order().min(100);
        let mut out: Vec<Element> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| g.unrank(i)).collect();
        if out.is_empty() {
            out.push(g.identity());
        }
        out
    }

    const PROP_GROUPS: &[&str] = &["cyclic:12", "dihedral:6", "sym:4", "sl2:3", "frob80", "bilinear:3:1", "wreath:c4:2"];

    proptest! {
        #[test]
        fn quotient_set_invariants(gi in 0..PROP_GROUPS.len(), mask in any::<u128>()) {
            let g = grp(PROP_GROUPS[gi]);
            let s = random_subset(&g, mask);
            let q = quotient_set(&g, &s);
            prop_assert!(q.contains(&g.identity()));
            prop_assert!(q.len() <= s.len() * s.len());
            for e in q.elements() {
                prop_assert!(q.contains(&g.inv(e)));
            }
            // Right translation leaves Q(S) unchanged.
            let t = g.unrank(mask as u64 % g.order());
            let shifted: Vec<Element> = s.iter().map(|x| g.mul(x, &t)).collect();
            let q2 = quotient_set(&g, &shifted);
            prop_assert_eq!(q2.elements(), q.elements());
        }

        #[test]
        fn orderings_agree(gi in 0..PROP_GROUPS.len(), m1 in any::<u128>(), m2 in any::<u128>(), m3 in any::<u128>()) {
            let g = grp(PROP_GROUPS[gi]);
            let sparse = |m: u128| m & (m >> 7) & (m >> 13);
            let t = [random_subset(&g, sparse(m1)), random_subset(&g, sparse(m2)), random_subset(&g, sparse(m3))];
            prop_assert!(check_permutation_invariance(&g, &t).unwrap());
            if let TppOutcome::Verified(c) = verify_tpp(&g, &t).unwrap() {
                prop_assert!(size_bound_violation(g.order(), c.shape(), g.is_abelian()).is_none());
                if let Some(a) = c.alpha_upper() {
                    prop_assert!(a > 2.0);
                }
            }
        }

        #[test]
        fn abelian_product_map_injective(m1 in any::<u16>(), m2 in any::<u16>(), m3 in any::<u16>()) {
            let g = grp("prod(cyclic:4,cyclic:6)");
            let t = [random_subset(&g, m1 as u128), random_subset(&g, m2 as u128), random_subset(&g, (m3 as u128) << 8)];
            if verify_tpp(&g, &t).unwrap().is_verified() {
                let mut seen = HashSet::new();
                for a in &t[0] {
                    for b in &t[1] {
                        for c in &t[2] {
                            prop_assert!(seen.insert(g.mul(&g.mul(a, b), c)));
                        }
                    }
                }
                prop_assert!(seen.len() as u64 <= g.order());
            }
        }
    }
}
