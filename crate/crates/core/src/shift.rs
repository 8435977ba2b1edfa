//! Degree shifts (ages) of the twisted sectors.
//!
//! Two routes are kept side by side: [`shift_from_spectrum`] sums
//! `m_j · b_j` over an explicit eigenvalue multiset, while
//! [`shift_closed_form`] evaluates the closed expression in the base
//! exponents `l⃗` of a component. They must agree on every component whose
//! flag spectra are canonical.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{mod_inverse, residue, ArithError, Rational};
use crate::geometry::{factorial, GeometryParams};
use crate::spectrum::{bundle_spectrum, flag_classes, Spectrum};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftError {
    LengthMismatch { expected: u32, found: usize },
    BaseOutOfRange { l: u32, r: u32 },
    ChoiceOutOfRange { c: u32, r: u32 },
    /// `[l_i c_i]_r` differs between points, so `c⃗` does not describe one root of unity.
    InconsistentChoice,
    Arith(ArithError),
}

impl fmt::Display for ShiftError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftError::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            ShiftError::BaseOutOfRange { l, r } => {
                write!(f, "base exponent {l} is outside 1..{}", r - 1)
            }
            ShiftError::ChoiceOutOfRange { c, r } => {
                write!(f, "choice exponent {c} is outside 1..{}", r - 1)
            }
            ShiftError::InconsistentChoice => {
                f.write_str("choice exponents do not give the same root of unity at every point")
            }
            ShiftError::Arith(e) => write!(f, "{e}"),
        }
    }
}

impl From<ArithError> for ShiftError {
    fn from(e: ArithError) -> Self {
        ShiftError::Arith(e)
    }
}

/// `Σ_e mult(e) · e / r`.
pub fn shift_from_spectrum(s: &Spectrum) -> Rational {
    let r = s.order() as i128;
    let weighted: i128 = s.support().map(|(e, k)| e as i128 * k as i128).sum();
    Rational::new(weighted, r).expect("order is positive")
}

fn check_bases(l: &[u32], p: &GeometryParams) -> Result<(), ShiftError> {
    if l.len() != p.m() as usize {
        return Err(ShiftError::LengthMismatch { expected: p.m(), found: l.len() });
    }
    let r = p.r();
    if let Some(&bad) = l.iter().find(|&&li| li == 0 || li >= r) {
        return Err(ShiftError::BaseOutOfRange { l: bad, r });
    }
    Ok(())
}

/// The canonical choice `c_i = l_i^{-1} mod r`, i.e. the root `s = t`.
pub fn canonical_choice(l: &[u32], r: u32) -> Result<Vec<u32>, ShiftError> {
    l.iter()
        .map(|&li| Ok(mod_inverse(li as i64, r as i64)? as u32))
        .collect()
}

/// Every valid `c⃗` for `l⃗`: one per primitive root `s = t^k`, `c_i = k·l_i^{-1}`.
pub fn valid_choices(l: &[u32], r: u32) -> Result<Vec<Vec<u32>>, ShiftError> {
    let base = canonical_choice(l, r)?;
    (1..r)
        .map(|k| {
            base.iter()
                .map(|&c| Ok(residue(c as i64 * k as i64, r as i64)? as u32))
                .collect()
        })
        .collect()
}

/// Closed-form shift of the component with base exponents `l⃗`:
///
/// ```text
/// π = (1/r) Σ_i Σ_{k=1}^{r−1} (r − [k c_i]_r) [k l_i c_i]_r  +  r(r−1)(g−1)/2
/// ```
///
/// With `c = None` the canonical choice `c_i = l_i^{-1}` is used.
pub fn shift_closed_form(
    l: &[u32],
    p: &GeometryParams,
    c: Option<&[u32]>,
) -> Result<Rational, ShiftError> {
    check_bases(l, p)?;
    let r = p.r();
    let choice = match c {
        None => canonical_choice(l, r)?,
        Some(c) => {
            if c.len() != l.len() {
                return Err(ShiftError::LengthMismatch { expected: p.m(), found: c.len() });
            }
            if let Some(&bad) = c.iter().find(|&&ci| ci == 0 || ci >= r) {
                return Err(ShiftError::ChoiceOutOfRange { c: bad, r });
            }
            let mut roots = l
                .iter()
                .zip(c)
                .map(|(&li, &ci)| residue(li as i64 * ci as i64, r as i64));
            if let Some(first) = roots.next() {
                let first = first?;
                for other in roots {
                    if other? != first {
                        return Err(ShiftError::InconsistentChoice);
                    }
                }
            }
            c.to_vec()
        }
    };

    let (ri, g) = (r as i64, p.g() as i128);
    let mut flag_sum: i128 = 0;
    for (&li, &ci) in l.iter().zip(&choice) {
        for k in 1..ri {
            let mult = ri - residue(k * ci as i64, ri)?;
            let b = residue(k * li as i64 * ci as i64, ri)?;
            flag_sum += (mult * b) as i128;
        }
    }
    let r = r as i128;
    let flags = Rational::new(flag_sum, r)?;
    let bundle = Rational::new(r * (r - 1) * (g - 1), 2)?;
    Ok(flags.checked_add(bundle)?)
}

/// Lexicographic iterator over `{1, …, r−1}^m`.
pub fn base_tuples(r: u32, m: u32) -> impl Iterator<Item = Vec<u32>> {
    let mut cur = if r >= 2 { Some(vec![1u32; m as usize]) } else { None };
    core::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut advanced = false;
        for slot in next.iter_mut().rev() {
            if *slot + 1 < r {
                *slot += 1;
                advanced = true;
                break;
            }
            *slot = 1;
        }
        cur = advanced.then_some(next);
        Some(out)
    })
}

/// The componentwise complement `r − l⃗`, i.e. the sector of the dual twist.
pub fn complement(l: &[u32], r: u32) -> Vec<u32> {
    l.iter().map(|&li| r - li).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftEntry {
    pub l: Vec<u32>,
    pub shift: Rational,
    /// Number of components carrying these base exponents.
    pub multiplicity: u128,
}

/// Shift and component multiplicity for every `l⃗`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftTable {
    pub params: GeometryParams,
    pub entries: Vec<ShiftEntry>,
}

impl ShiftTable {
    pub fn total_multiplicity(&self) -> u128 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn get(&self, l: &[u32]) -> Option<&ShiftEntry> {
        self.entries.iter().find(|e| e.l == l)
    }

    /// Component counts aggregated by shift value.
    pub fn by_shift(&self) -> BTreeMap<Rational, u128> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            *out.entry(e.shift).or_default() += e.multiplicity;
        }
        out
    }
}

/// Builds the table with multiplicity `(r!/(r−1))^m` per `l⃗`.
///
/// For `m = 0` the single sector's shift comes from the bundle spectrum.
pub fn shift_table(p: &GeometryParams) -> ShiftTable {
    let (r, m) = (p.r(), p.m());
    if m == 0 {
        return ShiftTable {
            params: *p,
            entries: vec![ShiftEntry {
                l: Vec::new(),
                shift: shift_from_spectrum(&bundle_spectrum(p)),
                multiplicity: 1,
            }],
        };
    }
    let per_point = factorial(r).expect("validated") / (r as u128 - 1);
    let multiplicity = per_point.pow(m);
    let entries = base_tuples(r, m)
        .map(|l| {
            let shift = shift_closed_form(&l, p, None).expect("bases in range");
            ShiftEntry { l, shift, multiplicity }
        })
        .collect();
    ShiftTable { params: *p, entries }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementarityViolation {
    pub l: Vec<u32>,
    pub sum: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementarityReport {
    /// `codim_fixed` as a rational.
    pub target: Rational,
    pub checked: usize,
    pub violations: Vec<ComplementarityViolation>,
}

impl ComplementarityReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `π(l⃗) + π(r − l⃗) = codim` for every `l⃗`.
pub fn complementarity_check(p: &GeometryParams) -> ComplementarityReport {
    let table = shift_table(p);
    let target = Rational::from_integer(p.codim_fixed() as i128);
    let mut violations = Vec::new();
    for e in &table.entries {
        let partner = complement(&e.l, p.r());
        let other = table.get(&partner).expect("complement is in the table").shift;
        let sum = e.shift + other;
        if sum != target {
            violations.push(ComplementarityViolation { l: e.l.clone(), sum });
        }
    }
    ComplementarityReport { target, checked: table.entries.len(), violations }
}

/// Distribution of spectrum-derived shifts over all `(r!)^m` components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftCensus {
    /// Shift value ↦ number of components.
    pub counts: BTreeMap<Rational, u128>,
    /// Components with at least one non-canonical flag spectrum.
    pub non_canonical: u128,
}

/// Shift of every component computed from its eigenvalues, tallied by value.
///
/// Shifts are additive over points, so the tally is the bundle shift plus
/// an `m`-fold convolution of the `Sym_r` flag-shift tally.
pub fn shift_census(p: &GeometryParams) -> ShiftCensus {
    let r = p.r();
    let classes = flag_classes(r);
    // per-point flag shift ↦ (canonical count, non-canonical count)
    let mut point: BTreeMap<Rational, (u128, u128)> = BTreeMap::new();
    for c in &classes {
        let s = shift_from_spectrum(&c.spectrum);
        let slot = point.entry(s).or_default();
        if c.base.is_some() {
            slot.0 += c.count;
        } else {
            slot.1 += c.count;
        }
    }
    let bundle = shift_from_spectrum(&bundle_spectrum(p));
    // (shift, all canonical so far) ↦ count
    let mut acc: BTreeMap<(Rational, bool), u128> = BTreeMap::from([((bundle, true), 1)]);
    for _ in 0..p.m() {
        let mut next: BTreeMap<(Rational, bool), u128> = BTreeMap::new();
        for (&(s, canon), &k) in &acc {
            for (&fs, &(good, bad)) in &point {
                if good > 0 {
                    *next.entry((s + fs, canon)).or_default() += k * good;
                }
                if bad > 0 {
                    *next.entry((s + fs, false)).or_default() += k * bad;
                }
            }
        }
        acc = next;
    }
    let mut counts = BTreeMap::new();
    let mut non_canonical = 0;
    for ((s, canon), k) in acc {
        *counts.entry(s).or_default() += k;
        if !canon {
            non_canonical += k;
        }
    }
    ShiftCensus { counts, non_canonical }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{combined_spectrum, enumerate_components};

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn params(r: u32, g: u32, m: u32) -> GeometryParams {
        GeometryParams::new(r, g, m, 1).unwrap()
    }

    #[test]
    fn spectrum_shift_examples() {
        let s = Spectrum::from_pairs(3, &[(0, 2), (1, 5), (2, 4)]).unwrap();
        assert_eq!(shift_from_spectrum(&s), q(13, 3));
        let s = Spectrum::from_pairs(5, &[(0, 7)]).unwrap();
        assert_eq!(shift_from_spectrum(&s), Rational::ZERO);
        let s = Spectrum::from_pairs(2, &[(1, 3)]).unwrap();
        assert_eq!(shift_from_spectrum(&s), q(3, 2));
    }

    #[test]
    fn closed_form_examples() {
        let p = params(3, 2, 1);
        assert_eq!(shift_closed_form(&[1], &p, None), Ok(q(13, 3)));
        assert_eq!(shift_closed_form(&[1], &p, None), Ok(q(4, 3) + q(3, 1)));
        assert_eq!(shift_closed_form(&[2], &p, None), Ok(q(14, 3)));
        assert_eq!(shift_closed_form(&[2], &p, None), Ok(q(5, 3) + q(3, 1)));
        assert_eq!(shift_closed_form(&[1], &params(5, 2, 1), None), Ok(q(14, 1)));
    }

    #[test]
    fn closed_form_rejects_bad_input() {
        let p = params(3, 2, 2);
        assert!(matches!(shift_closed_form(&[1], &p, None), Err(ShiftError::LengthMismatch { .. })));
        assert!(matches!(shift_closed_form(&[1, 3], &p, None), Err(ShiftError::BaseOutOfRange { .. })));
        // [1·1]_3 = 1 but [2·1]_3 = 2
        assert_eq!(shift_closed_form(&[1, 2], &p, Some(&[1, 1])), Err(ShiftError::InconsistentChoice));
        assert!(matches!(
            shift_closed_form(&[1, 2], &p, Some(&[0, 0])),
            Err(ShiftError::ChoiceOutOfRange { .. })
        ));
        assert_eq!(shift_closed_form(&[1, 2], &p, Some(&[2, 1])), shift_closed_form(&[1, 2], &p, None));
    }

    #[test]
    fn choices_are_consistent_roots() {
        for r in [3u32, 5, 7] {
            for l in base_tuples(r, 2) {
                let choices = valid_choices(&l, r).unwrap();
                assert_eq!(choices.len(), r as usize - 1);
                for c in choices {
                    let s0 = (l[0] * c[0]) % r;
                    assert_eq!((l[1] * c[1]) % r, s0);
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_spectrum_route_small() {
        for (r, g, m) in [(2, 2, 1), (3, 2, 1), (3, 3, 2), (2, 4, 3)] {
            let p = params(r, g, m);
            for c in enumerate_components(r, m) {
                let l = c.reduced().unwrap();
                let oracle = shift_from_spectrum(&combined_spectrum(&c, &p).unwrap());
                assert_eq!(shift_closed_form(l, &p, None).unwrap(), oracle, "{c}");
            }
        }
    }

    #[test]
    fn table_examples() {
        let t = shift_table(&params(3, 2, 1));
        assert_eq!(t.entries.len(), 2);
        assert_eq!((t.entries[0].l.as_slice(), t.entries[0].shift, t.entries[0].multiplicity), (&[1u32][..], q(13, 3), 3));
        assert_eq!((t.entries[1].l.as_slice(), t.entries[1].shift, t.entries[1].multiplicity), (&[2u32][..], q(14, 3), 3));

        let t = shift_table(&params(2, 2, 1));
        assert_eq!(t.entries.len(), 1);
        assert_eq!((t.entries[0].shift, t.entries[0].multiplicity), (q(3, 2), 2));

        let t = shift_table(&params(3, 3, 1));
        assert_eq!(t.entries[0].shift, q(4, 3) + q(6, 1));
        assert_eq!(t.entries[1].shift, q(5, 3) + q(6, 1));

        let t = shift_table(&params(3, 2, 0));
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.entries[0].shift, q(3, 1));
        assert_eq!(t.total_multiplicity(), 1);

        let t = shift_table(&params(5, 2, 2));
        assert_eq!(t.entries.len(), 16);
        assert_eq!(t.total_multiplicity(), 120 * 120);
    }

    #[test]
    fn complementarity_examples() {
        let rep = complementarity_check(&params(3, 2, 1));
        assert!(rep.passes());
        assert_eq!(rep.target, q(9, 1));
        let rep = complementarity_check(&params(2, 2, 1));
        assert!(rep.passes());
        assert_eq!(rep.target, q(3, 1));
        let rep = complementarity_check(&params(3, 2, 0));
        assert!(rep.passes());
        assert_eq!(rep.target, q(6, 1));
    }

    #[test]
    fn base_tuple_order() {
        let all: Vec<Vec<u32>> = base_tuples(3, 2).collect();
        assert_eq!(all, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
        assert_eq!(base_tuples(5, 0).collect::<Vec<_>>(), vec![Vec::<u32>::new()]);
        assert_eq!(base_tuples(7, 3).count(), 216);
    }

    #[test]
    fn census_matches_brute_force() {
        for (r, g, m) in [(3, 2, 1), (3, 2, 2), (5, 2, 1), (2, 3, 2)] {
            let p = params(r, g, m);
            let census = shift_census(&p);
            let mut counts: BTreeMap<Rational, u128> = BTreeMap::new();
            let mut bad = 0;
            for c in enumerate_components(r, m) {
                let s = shift_from_spectrum(&combined_spectrum(&c, &p).unwrap());
                *counts.entry(s).or_default() += 1;
                if c.reduced().is_err() {
                    bad += 1;
                }
            }
            assert_eq!(census.counts, counts);
            assert_eq!(census.non_canonical, bad);
        }
    }

    #[test]
    fn census_agrees_with_table_for_small_rank() {
        for (r, g, m) in [(2, 2, 1), (3, 2, 1), (3, 4, 2), (2, 2, 0)] {
            let p = params(r, g, m);
            assert_eq!(shift_census(&p).counts, shift_table(&p).by_shift());
        }
    }
}
