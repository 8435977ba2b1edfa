//! Additive Chen-Ruan Poincaré tables, pairing bookkeeping and obstruction ranks.
//!
//! Degrees are real cohomological degrees and may be rational: a twisted
//! sector with shift `π` contributes its classes in degree `q + 2π`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{ArithError, Rational};
use crate::geometry::GeometryParams;
use crate::shift::{complement, shift_closed_form, shift_table, ShiftError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    /// A degree lies outside `[0, span]`.
    DegreeOutOfSpan { degree: Rational, span: Rational },
    /// A table was supplied against the wrong span.
    SpanMismatch { expected: Rational, found: Rational },
    /// The rank of the obstruction bundle came out fractional.
    InvalidComponentCombination(Rational),
    /// The rank of the obstruction bundle came out negative.
    NegativeRank(Rational),
    /// A dimension count overflowed.
    Overflow,
    Shift(ShiftError),
    Arith(ArithError),
}

impl fmt::Display for CohomologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomologyError::DegreeOutOfSpan { degree, span } => {
                write!(f, "degree {degree} lies outside [0, {span}]")
            }
            CohomologyError::SpanMismatch { expected, found } => {
                write!(f, "table span is {found}, expected {expected}")
            }
            CohomologyError::InvalidComponentCombination(v) => {
                write!(f, "obstruction rank {v} is not an integer; the sector components are incompatible")
            }
            CohomologyError::NegativeRank(v) => write!(f, "obstruction rank {v} is negative"),
            CohomologyError::Overflow => f.write_str("dimension count overflows 128 bits"),
            CohomologyError::Shift(e) => write!(f, "{e}"),
            CohomologyError::Arith(e) => write!(f, "{e}"),
        }
    }
}

impl From<ShiftError> for CohomologyError {
    fn from(e: ShiftError) -> Self {
        CohomologyError::Shift(e)
    }
}

impl From<ArithError> for CohomologyError {
    fn from(e: ArithError) -> Self {
        CohomologyError::Arith(e)
    }
}

/// Degree ↦ dimension, living against a real-dimension span.
///
/// Zero dimensions are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedDims {
    span: Rational,
    dims: BTreeMap<Rational, u128>,
}

impl GradedDims {
    pub fn new(span: Rational) -> Self {
        GradedDims { span, dims: BTreeMap::new() }
    }

    /// Sums repeated degrees; rejects degrees outside `[0, span]`.
    pub fn from_pairs<I>(span: Rational, pairs: I) -> Result<Self, CohomologyError>
    where
        I: IntoIterator<Item = (Rational, u128)>,
    {
        let mut t = GradedDims::new(span);
        for (q, k) in pairs {
            t.add(q, k)?;
        }
        Ok(t)
    }

    pub fn span(&self) -> Rational {
        self.span
    }

    pub fn add(&mut self, degree: Rational, dim: u128) -> Result<(), CohomologyError> {
        if degree.is_negative() || degree > self.span {
            return Err(CohomologyError::DegreeOutOfSpan { degree, span: self.span });
        }
        if dim > 0 {
            let slot = self.dims.entry(degree).or_default();
            *slot = slot.checked_add(dim).ok_or(CohomologyError::Overflow)?;
        }
        Ok(())
    }

    pub fn get(&self, degree: Rational) -> u128 {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rational, u128)> + '_ {
        self.dims.iter().map(|(&q, &k)| (q, k))
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> u128 {
        self.dims.values().sum()
    }

    /// Adds `scale · other(q − offset)` into `self(q)`.
    pub fn add_shifted(
        &mut self,
        other: &GradedDims,
        offset: Rational,
        scale: u128,
    ) -> Result<(), CohomologyError> {
        for (q, k) in other.iter() {
            let dim = k.checked_mul(scale).ok_or(CohomologyError::Overflow)?;
            self.add(q.checked_add(offset)?, dim)?;
        }
        Ok(())
    }

    /// Pointwise sum of two tables over the same span.
    pub fn sum(&self, other: &GradedDims) -> Result<GradedDims, CohomologyError> {
        if self.span != other.span {
            return Err(CohomologyError::SpanMismatch { expected: self.span, found: other.span });
        }
        let mut out = self.clone();
        out.add_shifted(other, Rational::ZERO, 1)?;
        Ok(out)
    }

    /// `t(q) = t(span − q)` for every `q`.
    pub fn is_palindromic(&self) -> bool {
        self.iter().all(|(q, k)| self.get(self.span - q) == k)
    }
}

/// Poincaré tables of the untwisted sector and of one copy of the twisted
/// fixed-locus quotient, both supplied from outside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorInput {
    pub untwisted: GradedDims,
    pub prym_quotient: GradedDims,
}

/// Real dimension of each fixed-locus component, `2(r−1)(g−1)`.
pub fn prym_span(p: &GeometryParams) -> Rational {
    Rational::from_integer(2 * p.complex_dim_fixed() as i128)
}

/// Real dimension of the moduli space, `2d`.
pub fn moduli_span(p: &GeometryParams) -> Rational {
    Rational::from_integer(2 * p.complex_dim_moduli() as i128)
}

impl SectorInput {
    /// Builds both tables with spans taken from the parameters.
    pub fn new<U, P>(p: &GeometryParams, untwisted: U, prym_quotient: P) -> Result<Self, CohomologyError>
    where
        U: IntoIterator<Item = (Rational, u128)>,
        P: IntoIterator<Item = (Rational, u128)>,
    {
        Ok(SectorInput {
            untwisted: GradedDims::from_pairs(moduli_span(p), untwisted)?,
            prym_quotient: GradedDims::from_pairs(prym_span(p), prym_quotient)?,
        })
    }

    /// Palindromic stand-ins `{0 ↦ 1, top ↦ 1}` for both tables.
    pub fn placeholder(p: &GeometryParams) -> Self {
        let top = moduli_span(p);
        let fixed = prym_span(p);
        SectorInput::new(p, [(Rational::ZERO, 1), (top, 1)], [(Rational::ZERO, 1), (fixed, 1)])
            .expect("degrees within span")
    }

    fn validate(&self, p: &GeometryParams) -> Result<(), CohomologyError> {
        for (table, expected) in [(&self.untwisted, moduli_span(p)), (&self.prym_quotient, prym_span(p))] {
            if table.span() != expected {
                return Err(CohomologyError::SpanMismatch { expected, found: table.span() });
            }
        }
        Ok(())
    }
}

/// `H*_CR(q) = H*(q) + (r^{2g} − 1) Σ_{l⃗} mult(l⃗) · H*(S(L)/Γ)(q − 2π(l⃗))`.
pub fn assemble(p: &GeometryParams, input: &SectorInput) -> Result<GradedDims, CohomologyError> {
    input.validate(p)?;
    let mut out = input.untwisted.clone();
    let twists = p.nontrivial_twists();
    for entry in shift_table(p).entries {
        let scale = twists.checked_mul(entry.multiplicity).ok_or(CohomologyError::Overflow)?;
        let offset = entry.shift.checked_mul_int(2)?;
        out.add_shifted(&input.prym_quotient, offset, scale)?;
    }
    Ok(out)
}

/// A degree whose dimension differs from that of its mirror degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityViolation {
    pub degree: Rational,
    pub dim: u128,
    pub mirror_dim: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub span: Rational,
    pub violations: Vec<DualityViolation>,
}

impl DualityReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every `q` with `t(q) ≠ t(span − q)`, ascending.
pub fn duality_check(t: &GradedDims) -> DualityReport {
    let span = t.span();
    let degrees: BTreeSet<Rational> = t.iter().flat_map(|(q, _)| [q, span - q]).collect();
    let violations = degrees
        .into_iter()
        .filter_map(|q| {
            let (dim, mirror_dim) = (t.get(q), t.get(span - q));
            (dim != mirror_dim).then_some(DualityViolation { degree: q, dim, mirror_dim })
        })
        .collect();
    DualityReport { span, violations }
}

/// A sector of the inertia orbifold, up to the choice of nontrivial twist.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    Untwisted,
    /// Twisted sector component with base exponents `l⃗`.
    Twisted(Vec<u32>),
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sector::Untwisted => f.write_str("untwisted"),
            Sector::Twisted(l) => {
                f.write_str("(")?;
                for (i, x) in l.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Which sector a class is paired against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingConvention {
    /// Sector `l⃗` pairs with the dual sector `r − l⃗`.
    Complementary,
    /// Sector `l⃗` pairs with itself.
    SameSector,
}

/// Degree shift of a sector; zero for the untwisted sector.
pub fn sector_shift(s: &Sector, p: &GeometryParams) -> Result<Rational, CohomologyError> {
    match s {
        Sector::Untwisted => Ok(Rational::ZERO),
        Sector::Twisted(l) => Ok(shift_closed_form(l, p, None)?),
    }
}

fn check_internal(s: &Sector, q: Rational, p: &GeometryParams) -> Result<(), CohomologyError> {
    let shift2 = sector_shift(s, p)?.checked_mul_int(2)?;
    let span = match s {
        Sector::Untwisted => moduli_span(p),
        Sector::Twisted(_) => prym_span(p),
    };
    let internal = q.checked_sub(shift2)?;
    if internal.is_negative() || internal > span {
        return Err(CohomologyError::DegreeOutOfSpan { degree: internal, span });
    }
    Ok(())
}

/// The partner `(sector, degree)` of a class of degree `q` under `convention`.
pub fn pairing_partner_with(
    convention: PairingConvention,
    s: &Sector,
    q: Rational,
    p: &GeometryParams,
) -> Result<(Sector, Rational), CohomologyError> {
    check_internal(s, q, p)?;
    let partner = match (convention, s) {
        (_, Sector::Untwisted) => Sector::Untwisted,
        (PairingConvention::SameSector, Sector::Twisted(l)) => Sector::Twisted(l.clone()),
        (PairingConvention::Complementary, Sector::Twisted(l)) => {
            Sector::Twisted(complement(l, p.r()))
        }
    };
    Ok((partner, moduli_span(p).checked_sub(q)?))
}

/// Complementary-convention partner: `l⃗ ↦ r − l⃗`, `q ↦ 2d − q`.
pub fn pairing_partner(
    s: &Sector,
    q: Rational,
    p: &GeometryParams,
) -> Result<(Sector, Rational), CohomologyError> {
    pairing_partner_with(PairingConvention::Complementary, s, q, p)
}

/// A sector where the internal degrees of a paired class and its partner
/// do not add up to the real dimension of the fixed locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingDefect {
    pub l: Vec<u32>,
    pub internal_sum: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingConventionReport {
    pub fixed_span: Rational,
    pub complementary: Vec<PairingDefect>,
    pub same_sector: Vec<PairingDefect>,
}

impl PairingConventionReport {
    pub fn complementary_closes(&self) -> bool {
        self.complementary.is_empty()
    }

    pub fn same_sector_closes(&self) -> bool {
        self.same_sector.is_empty()
    }
}

/// For each twisted component, checks whether `(q − 2π) + (2d − q − 2π′)`
/// equals `2(r−1)(g−1)` under both pairing conventions.
pub fn pairing_convention_report(p: &GeometryParams) -> PairingConventionReport {
    let table = shift_table(p);
    let fixed_span = prym_span(p);
    let top = moduli_span(p);
    let mut complementary = Vec::new();
    let mut same_sector = Vec::new();
    for e in &table.entries {
        let dual = table.get(&complement(&e.l, p.r())).expect("complement present").shift;
        let comp_sum = top - (e.shift + dual) * Rational::from_integer(2);
        let same_sum = top - e.shift * Rational::from_integer(4);
        if comp_sum != fixed_span {
            complementary.push(PairingDefect { l: e.l.clone(), internal_sum: comp_sum });
        }
        if same_sum != fixed_span {
            same_sector.push(PairingDefect { l: e.l.clone(), internal_sum: same_sum });
        }
    }
    PairingConventionReport { fixed_span, complementary, same_sector }
}

/// `rank = dim_C T − dim_C PM + π(L_1) + π(L_2) + π(L_3)`, in complex dimensions.
pub fn obstruction_rank(
    dim_t_complex: i64,
    p: &GeometryParams,
    shifts: [Rational; 3],
) -> Result<Rational, CohomologyError> {
    let mut v = Rational::from(dim_t_complex)
        .checked_sub(Rational::from_integer(p.complex_dim_moduli() as i128))?;
    for s in shifts {
        v = v.checked_add(s)?;
    }
    if !v.is_integer() {
        return Err(CohomologyError::InvalidComponentCombination(v));
    }
    if v.is_negative() {
        return Err(CohomologyError::NegativeRank(v));
    }
    Ok(v)
}

/// Triples of twists whose common fixed locus has a known default dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistPair {
    /// `L_1 = L_2 = O`: the intersection is the whole moduli space.
    BothTrivial,
    /// Exactly one of `L_1, L_2` is trivial: the fixed locus of the other.
    OneTrivial,
    /// `L_1 = L_2` nontrivial: again a single fixed locus.
    Equal,
}

/// Complex dimension of the intersection locus for the built-in cases.
pub fn default_intersection_dim(p: &GeometryParams, pair: TwistPair) -> i64 {
    match pair {
        TwistPair::BothTrivial => p.complex_dim_moduli() as i64,
        TwistPair::OneTrivial | TwistPair::Equal => p.complex_dim_fixed() as i64,
    }
}

/// `value / |Γ|`.
pub fn orbifold_scale(value: Rational, p: &GeometryParams) -> Result<Rational, ArithError> {
    let order = p.gamma_order().ok_or(ArithError::Overflow)?;
    let order = i128::try_from(order).map_err(|_| ArithError::Overflow)?;
    value.checked_div(Rational::from_integer(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn z(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    fn params(r: u32, g: u32, m: u32) -> GeometryParams {
        GeometryParams::new(r, g, m, 1).unwrap()
    }

    #[test]
    fn empty_prym_table_leaves_untwisted() {
        let p = params(3, 2, 1);
        let input = SectorInput::new(&p, [(z(0), 1), (z(2), 3), (z(22), 1)], []).unwrap();
        assert_eq!(assemble(&p, &input).unwrap(), input.untwisted);
    }

    #[test]
    fn single_class_example() {
        let p = params(3, 2, 1);
        let input = SectorInput::new(&p, [(z(0), 1), (z(22), 1)], [(z(0), 1)]).unwrap();
        let out = assemble(&p, &input).unwrap();
        assert_eq!(out.get(q(26, 3)), 240);
        assert_eq!(out.get(q(28, 3)), 240);
        assert_eq!(out.get(z(0)), 1);
        assert_eq!(out.total(), 2 + 80 * 6);
    }

    #[test]
    fn total_dimension_identity() {
        let p = params(5, 2, 1);
        let input =
            SectorInput::new(&p, [(z(0), 1), (z(4), 7)], [(z(0), 1), (z(3), 2), (z(8), 1)]).unwrap();
        let out = assemble(&p, &input).unwrap();
        let expected = input.untwisted.total()
            + p.nontrivial_twists() * p.component_count().unwrap() * input.prym_quotient.total();
        assert_eq!(out.total(), expected);
    }

    #[test]
    fn span_validation() {
        let p = params(3, 2, 1);
        assert!(matches!(
            SectorInput::new(&p, [(z(23), 1)], []),
            Err(CohomologyError::DegreeOutOfSpan { .. })
        ));
        assert!(SectorInput::new(&p, [], [(z(5), 1)]).is_err());
        assert!(SectorInput::new(&p, [], [(z(-1), 1)]).is_err());
        let other = params(3, 3, 1);
        let input = SectorInput::placeholder(&other);
        assert!(matches!(assemble(&p, &input), Err(CohomologyError::SpanMismatch { .. })));
    }

    #[test]
    fn duality_examples() {
        let p = params(3, 2, 1);
        let untwisted = [(z(0), 1), (z(2), 2), (z(20), 2), (z(22), 1)];
        let input = SectorInput::new(&p, untwisted, []).unwrap();
        assert!(duality_check(&assemble(&p, &input).unwrap()).passes());

        let input = SectorInput::new(&p, untwisted, [(z(0), 1), (z(4), 1)]).unwrap();
        let out = assemble(&p, &input).unwrap();
        assert!(duality_check(&out).passes());
        assert_eq!(out.get(q(26, 3)), 240);
        assert_eq!(out.get(q(40, 3)), 240);

        let input = SectorInput::new(&p, untwisted, [(z(0), 1), (z(2), 1)]).unwrap();
        let rep = duality_check(&assemble(&p, &input).unwrap());
        assert!(!rep.passes());
        let bad: Vec<Rational> = rep.violations.iter().map(|v| v.degree).collect();
        // classes at 26/3 and 28/3 have empty mirrors; 32/3 and 34/3 mirror each other
        assert_eq!(bad, vec![q(26, 3), q(28, 3), q(38, 3), q(40, 3)]);
    }

    #[test]
    fn pairing_examples() {
        let p = params(3, 2, 1);
        let (partner, deg) = pairing_partner(&Sector::Twisted(vec![1]), q(26, 3), &p).unwrap();
        assert_eq!(partner, Sector::Twisted(vec![2]));
        assert_eq!(deg, q(40, 3));
        // internal degrees 26/3 − 2·13/3 and 40/3 − 2·14/3
        assert_eq!((q(26, 3) - q(26, 3)) + (deg - q(28, 3)), z(4));

        assert_eq!(pairing_partner(&Sector::Untwisted, z(5), &p).unwrap(), (Sector::Untwisted, z(17)));

        let p2 = params(2, 2, 1);
        let (partner, _) = pairing_partner(&Sector::Twisted(vec![1]), z(3), &p2).unwrap();
        assert_eq!(partner, Sector::Twisted(vec![1]));

        assert!(pairing_partner(&Sector::Twisted(vec![1]), z(8), &p).is_err());
        assert!(pairing_partner(&Sector::Twisted(vec![1]), z(14), &p).is_err());
    }

    #[test]
    fn pairing_is_involution() {
        let p = params(5, 3, 2);
        for e in shift_table(&p).entries {
            let s = Sector::Twisted(e.l.clone());
            let q0 = e.shift * z(2) + z(3);
            let (s1, q1) = pairing_partner(&s, q0, &p).unwrap();
            assert_eq!(pairing_partner(&s1, q1, &p).unwrap(), (s, q0));
        }
    }

    #[test]
    fn same_sector_convention_does_not_close() {
        let rep = pairing_convention_report(&params(3, 2, 1));
        assert!(rep.complementary_closes());
        assert!(!rep.same_sector_closes());
        // 22 − 4·13/3 = 14/3
        assert_eq!(rep.same_sector[0].internal_sum, q(14, 3));
    }

    #[test]
    fn obstruction_examples() {
        let p = params(3, 2, 1);
        let d = p.complex_dim_moduli() as i64;
        assert_eq!(obstruction_rank(d, &p, [z(0); 3]), Ok(z(0)));
        assert_eq!(obstruction_rank(2, &p, [q(13, 3), z(0), q(14, 3)]), Ok(z(0)));
        assert_eq!(obstruction_rank(2, &p, [q(13, 3); 3]), Ok(z(4)));
        assert!(matches!(
            obstruction_rank(2, &p, [q(13, 3), q(13, 3), q(14, 3)]),
            Err(CohomologyError::InvalidComponentCombination(_))
        ));
        assert!(matches!(obstruction_rank(0, &p, [z(0); 3]), Err(CohomologyError::NegativeRank(_))));
        assert_eq!(default_intersection_dim(&p, TwistPair::OneTrivial), 2);
        assert_eq!(default_intersection_dim(&p, TwistPair::BothTrivial), 11);
    }

    #[test]
    fn orbifold_scale_examples() {
        assert_eq!(orbifold_scale(z(81), &params(3, 2, 1)), Ok(z(1)));
        assert_eq!(orbifold_scale(z(1), &params(2, 2, 1)), Ok(q(1, 16)));
        assert_eq!(orbifold_scale(z(0), &params(7, 4, 2)), Ok(z(0)));
    }
}
