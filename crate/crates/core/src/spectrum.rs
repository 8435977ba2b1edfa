//! Eigenvalue spectra of the twist automorphism on tangent spaces.
//!
//! A connected component of the fixed locus is labelled by one ordering of
//! the `r` eigenline summands at each parabolic point: the flag is built by
//! adding the summands in that order. The tangent space of the full flag
//! variety at such a flag is `⊕_{u<v} Hom(ℓ_u, ℓ_v)`, and the twist acts on the
//! summand indexed by Galois power `j` as `λ^j`, so `Hom(ℓ_u, ℓ_v)` carries
//! the eigenvalue `λ^{τ(v) − τ(u)}`.
//!
//! Spectra are multisets over `μ_r`, stored as a multiplicity per exponent.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{residue, ArithError, UnityExponent};
use crate::geometry::{factorial, GeometryParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpectrumError {
    /// The twist generator must be a nontrivial root of unity.
    TrivialGenerator,
    /// Objects of different orders were combined.
    OrderMismatch { expected: u32, found: u32 },
    /// A base exponent outside `1..r`.
    BaseOutOfRange { l: u32, r: u32 },
    /// A component with the wrong number of points.
    PointCountMismatch { expected: u32, found: usize },
    /// A string that is not a permutation in one-line notation.
    BadPermutation(String),
    Arith(ArithError),
}

impl fmt::Display for SpectrumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumError::TrivialGenerator => f.write_str("the twist generator must be nontrivial"),
            SpectrumError::OrderMismatch { expected, found } => {
                write!(f, "order mismatch: expected {expected}, found {found}")
            }
            SpectrumError::BaseOutOfRange { l, r } => {
                write!(f, "base exponent {l} is outside 1..{}", r.saturating_sub(1))
            }
            SpectrumError::PointCountMismatch { expected, found } => {
                write!(f, "component has {found} points, expected {expected}")
            }
            SpectrumError::BadPermutation(s) => write!(f, "{s:?} is not a permutation"),
            SpectrumError::Arith(e) => write!(f, "{e}"),
        }
    }
}

impl From<ArithError> for SpectrumError {
    fn from(e: ArithError) -> Self {
        SpectrumError::Arith(e)
    }
}

/// The flag spectrum is not of the shape `{[l·c]_r ↦ r − c}` for any `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotCanonical;

impl fmt::Display for NotCanonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("spectrum is not canonical for any base exponent")
    }
}

/// A permutation of `{0, …, r−1}` in one-line notation: `u ↦ images[u]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self, SpectrumError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            match seen.get_mut(x as usize) {
                Some(s) if !*s => *s = true,
                _ => {
                    let text = images.iter().map(|i| alloc::format!("{i}")).collect();
                    return Err(SpectrumError::BadPermutation(text));
                }
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(r: u32) -> Self {
        Permutation((0..r).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// Parses one-line notation such as `"021"`; digits beyond 9 use `a`–`z`.
    pub fn parse(s: &str) -> Result<Self, SpectrumError> {
        let images = s
            .trim()
            .chars()
            .map(|c| c.to_digit(36))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| SpectrumError::BadPermutation(s.into()))?;
        Permutation::new(images).map_err(|_| SpectrumError::BadPermutation(s.into()))
    }

    /// Lexicographic successor, or `None` at the last permutation.
    pub fn next_lexicographic(&self) -> Option<Self> {
        let mut v = self.0.clone();
        let i = (1..v.len()).rev().find(|&i| v[i - 1] < v[i])?;
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1])?;
        v.swap(i - 1, j);
        v[i..].reverse();
        Some(Permutation(v))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.0 {
            let c = char::from_digit(x, 36).ok_or(fmt::Error)?;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// All `r!` permutations of `{0, …, r−1}` in lexicographic order.
pub fn all_permutations(r: u32) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur = Some(Permutation::identity(r));
    while let Some(p) = cur {
        cur = p.next_lexicographic();
        out.push(p);
    }
    out
}

/// A multiset over `μ_r`: multiplicity per exponent `0..r`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spectrum {
    order: u32,
    mult: Vec<u64>,
}

impl Spectrum {
    pub fn zero(order: u32) -> Self {
        Spectrum { order, mult: vec![0; order as usize] }
    }

    /// From `(exponent, multiplicity)` pairs; exponents are reduced mod `order`.
    pub fn from_pairs(order: u32, pairs: &[(i64, u64)]) -> Result<Self, SpectrumError> {
        let mut s = Spectrum::zero(order);
        for &(e, k) in pairs {
            s.add_to(UnityExponent::new(e, order)?, k);
        }
        Ok(s)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn multiplicity(&self, exponent: u32) -> u64 {
        self.mult.get(exponent as usize).copied().unwrap_or(0)
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.mult
    }

    pub fn add_to(&mut self, eigenvalue: UnityExponent, k: u64) {
        assert_eq!(eigenvalue.order(), self.order, "eigenvalue of the wrong order");
        self.mult[eigenvalue.exponent() as usize] += k;
    }

    pub fn total(&self) -> u64 {
        self.mult.iter().sum()
    }

    /// Total multiplicity of eigenvalues other than 1.
    pub fn nontrivial_total(&self) -> u64 {
        self.mult.iter().skip(1).sum()
    }

    /// `(exponent, multiplicity)` for every exponent with nonzero multiplicity, ascending.
    pub fn support(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(e, &k)| (e as u32, k))
    }

    /// Pointwise multiset union.
    pub fn union(&self, other: &Spectrum) -> Result<Spectrum, SpectrumError> {
        if self.order != other.order {
            return Err(SpectrumError::OrderMismatch { expected: self.order, found: other.order });
        }
        let mult = self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect();
        Ok(Spectrum { order: self.order, mult })
    }

    /// Image under `x ↦ x^a`.
    pub fn power(&self, a: i64) -> Spectrum {
        let mut out = Spectrum::zero(self.order);
        for (e, k) in self.support() {
            out.add_to(UnityExponent::new(e as i64 * a, self.order).expect("order > 0"), k);
        }
        out
    }
}

impl fmt::Debug for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (e, k)) in self.support().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "t^{e}: {k}")?;
        }
        write!(f, "}} (mod {})", self.order)
    }
}

/// Spectrum of the twist on the tangent space of the flag variety at the
/// flag built from summand order `tau`, with `λ = t^a`.
pub fn flag_tangent_spectrum(
    tau: &Permutation,
    a: UnityExponent,
) -> Result<Spectrum, SpectrumError> {
    let r = tau.len() as u32;
    if a.order() != r {
        return Err(SpectrumError::OrderMismatch { expected: r, found: a.order() });
    }
    if a.is_identity() {
        return Err(SpectrumError::TrivialGenerator);
    }
    let img = tau.images();
    let mut s = Spectrum::zero(r);
    for u in 0..img.len() {
        for v in u + 1..img.len() {
            let diff = img[v] as i64 - img[u] as i64;
            s.add_to(a.pow(diff), 1);
        }
    }
    Ok(s)
}

fn check_base(l: u32, r: u32) -> Result<(), SpectrumError> {
    if l == 0 || l >= r {
        return Err(SpectrumError::BaseOutOfRange { l, r });
    }
    Ok(())
}

/// `{[l·c]_r ↦ r − c : c = 1, …, r−1}`.
pub fn canonical_spectrum(l: u32, r: u32) -> Result<Spectrum, SpectrumError> {
    check_base(l, r)?;
    let mut s = Spectrum::zero(r);
    for c in 1..r {
        let e = residue(l as i64 * c as i64, r as i64)?;
        s.add_to(UnityExponent::new(e, r)?, (r - c) as u64);
    }
    Ok(s)
}

/// The `l` with `canonical_spectrum(l, r) == s`, if one exists.
pub fn extract_base(s: &Spectrum) -> Result<u32, NotCanonical> {
    let r = s.order();
    if r < 2 {
        return Err(NotCanonical);
    }
    // In a canonical spectrum the exponent with multiplicity r − 1 is l itself (c = 1).
    let l = (1..r).find(|&e| s.multiplicity(e) == (r - 1) as u64).ok_or(NotCanonical)?;
    match canonical_spectrum(l, r) {
        Ok(c) if &c == s => Ok(l),
        _ => Err(NotCanonical),
    }
}

/// Eigenvalues on the deformation space of the underlying bundle:
/// exponent 0 with multiplicity `(r−1)(g−1)`, every other exponent `r(g−1)`.
pub fn bundle_spectrum(p: &GeometryParams) -> Spectrum {
    let (r, g) = (p.r(), p.g() as u64);
    let mut s = Spectrum::zero(r);
    s.mult[0] = (r as u64 - 1) * (g - 1);
    for e in 1..r as usize {
        s.mult[e] = r as u64 * (g - 1);
    }
    s
}

/// A connected component of the fixed locus: one summand ordering per point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SectorComponent {
    perms: Vec<Permutation>,
    reduced: Option<Vec<u32>>,
}

impl SectorComponent {
    /// Builds a component and derives its base exponents with `λ = t`.
    pub fn new(perms: Vec<Permutation>) -> Result<Self, SpectrumError> {
        let mut reduced = Some(Vec::with_capacity(perms.len()));
        for tau in &perms {
            let r = tau.len() as u32;
            let spec = flag_tangent_spectrum(tau, UnityExponent::new(1, r)?)?;
            match (&mut reduced, extract_base(&spec)) {
                (Some(ls), Ok(l)) => ls.push(l),
                _ => reduced = None,
            }
        }
        Ok(SectorComponent { perms, reduced })
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    /// The base exponents `l⃗`, or `NotCanonical` if some point's flag
    /// spectrum has no base exponent.
    pub fn reduced(&self) -> Result<&[u32], NotCanonical> {
        self.reduced.as_deref().ok_or(NotCanonical)
    }
}

impl fmt::Display for SectorComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.perms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

/// Union of the bundle spectrum and the flag spectra (with `λ = t`) of the component.
pub fn combined_spectrum(
    c: &SectorComponent,
    p: &GeometryParams,
) -> Result<Spectrum, SpectrumError> {
    if c.perms.len() != p.m() as usize {
        return Err(SpectrumError::PointCountMismatch { expected: p.m(), found: c.perms.len() });
    }
    let r = p.r();
    let t = UnityExponent::new(1, r)?;
    let mut total = bundle_spectrum(p);
    for tau in &c.perms {
        if tau.len() as u32 != r {
            return Err(SpectrumError::OrderMismatch { expected: r, found: tau.len() as u32 });
        }
        total = total.union(&flag_tangent_spectrum(tau, t)?)?;
    }
    Ok(total)
}

/// Iterator over all `(r!)^m` components, odometer-ordered with the last point fastest.
#[derive(Debug, Clone)]
pub struct Components {
    sym: Vec<Permutation>,
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for Components {
    type Item = SectorComponent;

    fn next(&mut self) -> Option<SectorComponent> {
        if self.done {
            return None;
        }
        let perms = self.idx.iter().map(|&i| self.sym[i].clone()).collect();
        let item = SectorComponent::new(perms).expect("permutations of a common order");
        // advance
        self.done = true;
        for slot in self.idx.iter_mut().rev() {
            *slot += 1;
            if *slot < self.sym.len() {
                self.done = false;
                break;
            }
            *slot = 0;
        }
        Some(item)
    }
}

pub fn enumerate_components(r: u32, m: u32) -> Components {
    Components { sym: all_permutations(r), idx: vec![0; m as usize], done: false }
}

/// Permutations of `Sym_r` grouped by their flag spectrum (with `λ = t`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagClass {
    pub spectrum: Spectrum,
    pub base: Option<u32>,
    pub count: u128,
    /// Lexicographically first permutation in the class.
    pub representative: Permutation,
}

/// Partition of `Sym_r` by flag spectrum, sorted by spectrum.
///
/// Components whose orderings have the same flag spectrum at every point
/// have the same combined spectrum, so products of classes stand in for the
/// full `(r!)^m` enumeration.
pub fn flag_classes(r: u32) -> Vec<FlagClass> {
    let t = UnityExponent::new(1, r).expect("r > 0");
    let mut classes: BTreeMap<Spectrum, FlagClass> = BTreeMap::new();
    for tau in all_permutations(r) {
        let spectrum = flag_tangent_spectrum(&tau, t).expect("nontrivial generator");
        classes
            .entry(spectrum.clone())
            .and_modify(|c| c.count += 1)
            .or_insert_with(|| FlagClass {
                base: extract_base(&spectrum).ok(),
                spectrum,
                count: 1,
                representative: tau,
            });
    }
    classes.into_values().collect()
}

/// Counts of components by base exponent at each point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionReport {
    pub r: u32,
    pub m: u32,
    /// Per point: base exponent `l ↦` number of components with `l_i = l`.
    pub per_point: Vec<BTreeMap<u32, u128>>,
    /// Per point: number of components whose flag spectrum there is not canonical.
    pub non_canonical: Vec<u128>,
    /// `(r!)^m / (r − 1)`.
    pub expected: u128,
}

impl DistributionReport {
    pub fn passes(&self) -> bool {
        self.non_canonical.iter().all(|&k| k == 0)
            && self.per_point.iter().all(|counts| {
                (1..self.r).all(|l| counts.get(&l).copied().unwrap_or(0) == self.expected)
            })
    }
}

/// Tallies the base exponents of all `(r!)^m` components point by point.
///
/// The tally at one point is the `Sym_r` tally scaled by `(r!)^{m−1}`, so
/// only one copy of `Sym_r` is walked.
pub fn distribution_check(r: u32, m: u32) -> DistributionReport {
    let fact = factorial(r).expect("small r");
    let others = fact.pow(m.saturating_sub(1));
    let mut counts: BTreeMap<u32, u128> = BTreeMap::new();
    let mut bad = 0u128;
    for class in flag_classes(r) {
        match class.base {
            Some(l) => *counts.entry(l).or_default() += class.count,
            None => bad += class.count,
        }
    }
    let scaled: BTreeMap<u32, u128> = counts.into_iter().map(|(l, k)| (l, k * others)).collect();
    DistributionReport {
        r,
        m,
        per_point: vec![scaled; m as usize],
        non_canonical: vec![bad * others; m as usize],
        expected: fact.pow(m) / (r as u128 - 1).max(1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    fn spec(r: u32, pairs: &[(i64, u64)]) -> Spectrum {
        Spectrum::from_pairs(r, pairs).unwrap()
    }

    fn t(r: u32) -> UnityExponent {
        UnityExponent::new(1, r).unwrap()
    }

    #[test]
    fn permutation_parsing() {
        assert_eq!(perm("021").images(), &[0, 2, 1]);
        assert_eq!(perm("021").to_string(), "021");
        assert!(Permutation::parse("011").is_err());
        assert!(Permutation::parse("13").is_err());
        assert!(Permutation::parse("0-1").is_err());
        assert_eq!(perm("a0123456789").len(), 11);
    }

    #[test]
    fn lexicographic_enumeration() {
        let all = all_permutations(3);
        let text: Vec<String> = all.iter().map(|p| alloc::format!("{p}")).collect();
        assert_eq!(text, ["012", "021", "102", "120", "201", "210"]);
        assert_eq!(all_permutations(5).len(), 120);
        assert_eq!(all_permutations(1).len(), 1);
    }

    #[test]
    fn flag_spectrum_examples() {
        assert_eq!(flag_tangent_spectrum(&perm("012"), t(3)).unwrap(), spec(3, &[(1, 2), (2, 1)]));
        assert_eq!(flag_tangent_spectrum(&perm("021"), t(3)).unwrap(), spec(3, &[(2, 2), (1, 1)]));
        assert_eq!(flag_tangent_spectrum(&perm("01"), t(2)).unwrap(), spec(2, &[(1, 1)]));
        let trivial = UnityExponent::new(3, 3).unwrap();
        assert_eq!(
            flag_tangent_spectrum(&perm("012"), trivial),
            Err(SpectrumError::TrivialGenerator)
        );
        assert!(flag_tangent_spectrum(&perm("012"), t(5)).is_err());
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_spectrum(1, 3).unwrap(), spec(3, &[(1, 2), (2, 1)]));
        assert_eq!(
            canonical_spectrum(2, 5).unwrap(),
            spec(5, &[(2, 4), (4, 3), (1, 2), (3, 1)])
        );
        assert_eq!(canonical_spectrum(1, 2).unwrap(), spec(2, &[(1, 1)]));
        assert!(canonical_spectrum(0, 3).is_err());
        assert!(canonical_spectrum(3, 3).is_err());
    }

    #[test]
    fn extract_base_examples() {
        assert_eq!(extract_base(&spec(3, &[(1, 2), (2, 1)])), Ok(1));
        assert_eq!(extract_base(&spec(3, &[(2, 2), (1, 1)])), Ok(2));
        assert_eq!(extract_base(&spec(3, &[(1, 1), (2, 1)])), Err(NotCanonical));
        assert_eq!(extract_base(&spec(3, &[(0, 1), (1, 2), (2, 1)])), Err(NotCanonical));
        for r in [2, 3, 5, 7] {
            for l in 1..r {
                assert_eq!(extract_base(&canonical_spectrum(l, r).unwrap()), Ok(l));
            }
        }
    }

    #[test]
    fn non_affine_orderings_are_not_canonical() {
        // Swapping two middle summands at r = 5 gives multiplicities {3, 3, 2, 2}.
        let s = flag_tangent_spectrum(&perm("02134"), t(5)).unwrap();
        assert_eq!(s, spec(5, &[(1, 3), (2, 3), (3, 2), (4, 2)]));
        assert_eq!(extract_base(&s), Err(NotCanonical));
    }

    #[test]
    fn bundle_spectrum_examples() {
        let p = GeometryParams::new(3, 2, 0, 1).unwrap();
        assert_eq!(bundle_spectrum(&p), spec(3, &[(0, 2), (1, 3), (2, 3)]));
        let p = GeometryParams::new(2, 2, 0, 1).unwrap();
        assert_eq!(bundle_spectrum(&p), spec(2, &[(0, 1), (1, 2)]));
        let p = GeometryParams::new(5, 3, 0, 1).unwrap();
        assert_eq!(bundle_spectrum(&p), spec(5, &[(0, 8), (1, 10), (2, 10), (3, 10), (4, 10)]));
    }

    #[test]
    fn combined_spectrum_examples() {
        let p = GeometryParams::new(3, 2, 1, 1).unwrap();
        let c = SectorComponent::new(vec![perm("012")]).unwrap();
        assert_eq!(c.reduced(), Ok(&[1u32][..]));
        let s = combined_spectrum(&c, &p).unwrap();
        assert_eq!(s, spec(3, &[(0, 2), (1, 5), (2, 4)]));
        assert_eq!(s.total(), 11);

        let p = GeometryParams::new(2, 2, 1, 1).unwrap();
        let c = SectorComponent::new(vec![perm("01")]).unwrap();
        assert_eq!(combined_spectrum(&c, &p).unwrap(), spec(2, &[(0, 1), (1, 3)]));

        let p2 = GeometryParams::new(2, 2, 2, 1).unwrap();
        assert!(matches!(
            combined_spectrum(&c, &p2),
            Err(SpectrumError::PointCountMismatch { .. })
        ));
        let p3 = GeometryParams::new(3, 2, 1, 1).unwrap();
        assert!(matches!(combined_spectrum(&c, &p3), Err(SpectrumError::OrderMismatch { .. })));
    }

    #[test]
    fn component_enumeration() {
        assert_eq!(enumerate_components(3, 1).count(), 6);
        assert_eq!(enumerate_components(2, 2).count(), 4);
        let only: Vec<_> = enumerate_components(3, 0).collect();
        assert_eq!(only.len(), 1);
        assert_eq!(only[0].reduced(), Ok(&[][..]));
        let first: Vec<String> =
            enumerate_components(2, 2).map(|c| alloc::format!("{c}")).collect();
        assert_eq!(first, ["[01,01]", "[01,10]", "[10,01]", "[10,10]"]);
    }

    #[test]
    fn distribution_examples() {
        let rep = distribution_check(3, 1);
        assert!(rep.passes());
        assert_eq!(rep.per_point[0], BTreeMap::from([(1, 3), (2, 3)]));
        let rep = distribution_check(2, 1);
        assert!(rep.passes());
        assert_eq!(rep.per_point[0], BTreeMap::from([(1, 2)]));
        let rep = distribution_check(3, 2);
        assert!(rep.passes());
        assert_eq!(rep.per_point, vec![BTreeMap::from([(1, 18), (2, 18)]); 2]);
    }

    #[test]
    fn distribution_matches_brute_force_tally() {
        for (r, m) in [(3, 2), (2, 3), (5, 1)] {
            let rep = distribution_check(r, m);
            for i in 0..m as usize {
                let mut tally: BTreeMap<u32, u128> = BTreeMap::new();
                let mut bad = 0u128;
                for c in enumerate_components(r, m) {
                    let spec = flag_tangent_spectrum(&c.perms()[i], t(r)).unwrap();
                    match extract_base(&spec) {
                        Ok(l) => *tally.entry(l).or_default() += 1,
                        Err(_) => bad += 1,
                    }
                }
                assert_eq!(rep.per_point[i], tally);
                assert_eq!(rep.non_canonical[i], bad);
            }
        }
    }

    #[test]
    fn flag_classes_partition_sym() {
        for r in [2, 3, 5] {
            let classes = flag_classes(r);
            let total: u128 = classes.iter().map(|c| c.count).sum();
            assert_eq!(total, factorial(r).unwrap());
        }
        assert_eq!(flag_classes(3).len(), 2);
    }
}
