//! Parabolic bookkeeping: weighted flags, parabolic degree and slope.

use alloc::vec::Vec;
use core::fmt;

use crate::arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParabolicError {
    /// Weights at a point are not strictly increasing inside `[0, 1)`.
    BadWeights { point: usize },
    /// Weight and multiplicity lists have different lengths, or a multiplicity is zero.
    BadFlagType { point: usize },
    /// Flag multiplicities at a point do not add up to the rank.
    RankMismatch { point: usize, sum: u64, rank: u64 },
    /// The operation needs a full flag at every point.
    NotFullFlag { point: usize },
    /// Number of parabolic points differs from the expected `m`.
    PointCount { expected: usize, found: usize },
    ZeroRank,
}

impl fmt::Display for ParabolicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParabolicError::BadWeights { point } => write!(
                f,
                "weights at point {point} must be strictly increasing and lie in [0, 1)"
            ),
            ParabolicError::BadFlagType { point } => {
                write!(f, "flag type at point {point} does not match its weights")
            }
            ParabolicError::RankMismatch { point, sum, rank } => write!(
                f,
                "flag multiplicities at point {point} sum to {sum}, expected rank {rank}"
            ),
            ParabolicError::NotFullFlag { point } => {
                write!(f, "point {point} does not carry a full flag")
            }
            ParabolicError::PointCount { expected, found } => {
                write!(f, "expected {expected} parabolic points, found {found}")
            }
            ParabolicError::ZeroRank => f.write_str("rank must be positive"),
        }
    }
}

/// Weights `α_1 < … < α_k` in `[0, 1)` and flag type `(m_1, …, m_k)` at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointWeights {
    weights: Vec<Rational>,
    multiplicities: Vec<u64>,
}

impl PointWeights {
    pub fn new(weights: Vec<Rational>, multiplicities: Vec<u64>) -> Result<Self, ParabolicError> {
        let pw = PointWeights { weights, multiplicities };
        pw.check(0)?;
        Ok(pw)
    }

    /// A full flag: every multiplicity is one.
    pub fn full_flag(weights: Vec<Rational>) -> Result<Self, ParabolicError> {
        let n = weights.len();
        Self::new(weights, alloc::vec![1; n])
    }

    fn check(&self, point: usize) -> Result<(), ParabolicError> {
        if self.weights.len() != self.multiplicities.len()
            || self.multiplicities.iter().any(|&m| m == 0)
        {
            return Err(ParabolicError::BadFlagType { point });
        }
        let in_range = self
            .weights
            .iter()
            .all(|w| !w.is_negative() && *w < Rational::ONE);
        let increasing = self.weights.windows(2).all(|p| p[0] < p[1]);
        if !in_range || !increasing {
            return Err(ParabolicError::BadWeights { point });
        }
        Ok(())
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    pub fn flag_rank(&self) -> u64 {
        self.multiplicities.iter().sum()
    }

    pub fn is_full_flag(&self, rank: u64) -> bool {
        self.multiplicities.iter().all(|&m| m == 1) && self.weights.len() as u64 == rank
    }

    /// `α_k − α_1`, zero for an empty or one-step flag.
    pub fn spread(&self) -> Rational {
        match (self.weights.first(), self.weights.last()) {
            (Some(lo), Some(hi)) => *hi - *lo,
            _ => Rational::ZERO,
        }
    }

    fn weighted_sum(&self) -> Rational {
        self.weights
            .iter()
            .zip(&self.multiplicities)
            .map(|(w, &m)| *w * Rational::from_integer(m as i128))
            .sum()
    }
}

/// Weight data for every parabolic point.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightSystem {
    points: Vec<PointWeights>,
}

impl WeightSystem {
    pub fn new(points: Vec<PointWeights>) -> Result<Self, ParabolicError> {
        for (i, p) in points.iter().enumerate() {
            p.check(i)?;
        }
        Ok(WeightSystem { points })
    }

    /// Full flags at every point from plain weight lists.
    pub fn full_flags(weights: Vec<Vec<Rational>>) -> Result<Self, ParabolicError> {
        let points = weights
            .into_iter()
            .enumerate()
            .map(|(i, w)| {
                PointWeights::full_flag(w).map_err(|e| match e {
                    ParabolicError::BadWeights { .. } => ParabolicError::BadWeights { point: i },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WeightSystem { points })
    }

    pub fn points(&self) -> &[PointWeights] {
        &self.points
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }
}

/// Underlying bundle data plus its weight system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicData {
    rank: u64,
    degree: i64,
    weights: WeightSystem,
}

impl ParabolicData {
    pub fn new(rank: u64, degree: i64, weights: WeightSystem) -> Result<Self, ParabolicError> {
        if rank == 0 {
            return Err(ParabolicError::ZeroRank);
        }
        for (i, p) in weights.points().iter().enumerate() {
            let sum = p.flag_rank();
            if sum != rank {
                return Err(ParabolicError::RankMismatch { point: i, sum, rank });
            }
        }
        Ok(ParabolicData { rank, degree, weights })
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }
}

/// `pdeg(E_*) = deg(E) + Σ_x Σ_j m^x_j α^x_j`.
pub fn par_degree(p: &ParabolicData) -> Rational {
    let flags: Rational = p.weights.points.iter().map(PointWeights::weighted_sum).sum();
    Rational::from(p.degree) + flags
}

/// `pμ(E_*) = pdeg(E_*) / rank(E)`.
pub fn par_slope(p: &ParabolicData) -> Rational {
    par_degree(p) / Rational::from_integer(p.rank as i128)
}

/// Where a subobject's slope sits relative to the ambient slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeComparison {
    /// Strictly smaller slope.
    StableDirection,
    /// Equal slope.
    SemistableBoundary,
    /// Strictly larger slope; violates semistability.
    Destabilizing,
}

pub fn semistable_compare(sub_slope: Rational, total_slope: Rational) -> SlopeComparison {
    match sub_slope.cmp(&total_slope) {
        core::cmp::Ordering::Less => SlopeComparison::StableDirection,
        core::cmp::Ordering::Equal => SlopeComparison::SemistableBoundary,
        core::cmp::Ordering::Greater => SlopeComparison::Destabilizing,
    }
}

/// Concentration test: `α^x_r − α^x_1 < 4/(m r²)` at every point.
///
/// Requires a full flag of the given rank at each of the `m` points.
pub fn is_concentrated(w: &WeightSystem, rank: u64, m: usize) -> Result<bool, ParabolicError> {
    if w.point_count() != m {
        return Err(ParabolicError::PointCount { expected: m, found: w.point_count() });
    }
    if let Some(point) = w.points.iter().position(|p| !p.is_full_flag(rank)) {
        return Err(ParabolicError::NotFullFlag { point });
    }
    if m == 0 {
        return Ok(true);
    }
    let bound = Rational::new(4, m as i128 * (rank as i128) * (rank as i128))
        .map_err(|_| ParabolicError::ZeroRank)?;
    Ok(w.points.iter().all(|p| p.spread() < bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn degree_and_slope_examples() {
        let w = WeightSystem::full_flags(vec![vec![q(1, 4), q(1, 2)]]).unwrap();
        let p = ParabolicData::new(2, 1, w).unwrap();
        assert_eq!(par_degree(&p), q(7, 4));
        assert_eq!(par_slope(&p), q(7, 8));

        let p = ParabolicData::new(4, 5, WeightSystem::default()).unwrap();
        assert_eq!(par_degree(&p), q(5, 1));
        assert_eq!(par_slope(&p), q(5, 4));

        let pt = vec![q(0, 1), q(1, 9), q(2, 9)];
        let w = WeightSystem::full_flags(vec![pt.clone(), pt]).unwrap();
        let p = ParabolicData::new(3, 0, w).unwrap();
        assert_eq!(par_degree(&p), q(2, 3));
        assert_eq!(par_slope(&p), q(2, 9));
    }

    #[test]
    fn non_full_flag_degree() {
        let pw = PointWeights::new(vec![q(1, 3), q(1, 2)], vec![2, 1]).unwrap();
        let p = ParabolicData::new(3, -1, WeightSystem::new(vec![pw]).unwrap()).unwrap();
        // -1 + 2/3 + 1/2
        assert_eq!(par_degree(&p), q(1, 6));
    }

    #[test]
    fn slope_comparison() {
        assert_eq!(semistable_compare(q(7, 8), Rational::ONE), SlopeComparison::StableDirection);
        assert_eq!(semistable_compare(Rational::ONE, Rational::ONE), SlopeComparison::SemistableBoundary);
        assert_eq!(semistable_compare(q(9, 8), Rational::ONE), SlopeComparison::Destabilizing);
    }

    #[test]
    fn concentration() {
        let w = WeightSystem::full_flags(vec![vec![q(0, 1), q(1, 10), q(1, 5)]]).unwrap();
        assert_eq!(is_concentrated(&w, 3, 1), Ok(true));
        let w = WeightSystem::full_flags(vec![vec![q(0, 1), q(3, 10), q(1, 2)]]).unwrap();
        assert_eq!(is_concentrated(&w, 3, 1), Ok(false));
        let w = WeightSystem::full_flags(vec![vec![q(0, 1)]]).unwrap();
        assert_eq!(is_concentrated(&w, 1, 1), Ok(true));
        // boundary: spread exactly 4/9 is not concentrated
        let w = WeightSystem::full_flags(vec![vec![q(0, 1), q(1, 9), q(4, 9)]]).unwrap();
        assert_eq!(is_concentrated(&w, 3, 1), Ok(false));
    }

    #[test]
    fn concentration_rejects_partial_flags() {
        let pw = PointWeights::new(vec![q(0, 1), q(1, 10)], vec![2, 1]).unwrap();
        let w = WeightSystem::new(vec![pw]).unwrap();
        assert_eq!(is_concentrated(&w, 3, 1), Err(ParabolicError::NotFullFlag { point: 0 }));
        let w = WeightSystem::full_flags(vec![vec![q(0, 1), q(1, 10)]]).unwrap();
        assert!(matches!(is_concentrated(&w, 2, 2), Err(ParabolicError::PointCount { .. })));
    }

    #[test]
    fn invalid_weight_systems() {
        assert_eq!(
            WeightSystem::full_flags(vec![vec![q(0, 1)], vec![q(1, 2), q(1, 3)]]),
            Err(ParabolicError::BadWeights { point: 1 })
        );
        assert!(PointWeights::full_flag(vec![Rational::ONE]).is_err());
        assert!(PointWeights::full_flag(vec![q(-1, 2)]).is_err());
        assert!(PointWeights::new(vec![q(0, 1)], vec![0]).is_err());
        let w = WeightSystem::full_flags(vec![vec![q(0, 1), q(1, 2)]]).unwrap();
        assert_eq!(
            ParabolicData::new(3, 1, w),
            Err(ParabolicError::RankMismatch { point: 0, sum: 2, rank: 3 })
        );
    }
}
