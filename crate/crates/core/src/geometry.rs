//! Numerical invariants of the moduli space, the torsion group and the fixed loci.

use alloc::vec::Vec;
use core::fmt;

/// One reason a parameter tuple was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamViolation {
    RankNotPrime(u32),
    GenusTooSmall(u32),
    DegreeNotCoprime { d: i64, r: u32 },
    /// A derived count does not fit in 128 bits.
    Overflow(&'static str),
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamViolation::RankNotPrime(r) => write!(f, "r = {r} is not prime"),
            ParamViolation::GenusTooSmall(g) => write!(f, "g = {g} must be at least 2"),
            ParamViolation::DegreeNotCoprime { d, r } => {
                write!(f, "d = {d} is not coprime to r = {r}")
            }
            ParamViolation::Overflow(what) => write!(f, "{what} overflows 128-bit integers"),
        }
    }
}

/// All violations found while validating a parameter tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError(pub Vec<ParamViolation>);

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid parameters: ")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Trial division; `r` is always small here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `r!` for small `r`.
pub fn factorial(r: u32) -> Option<u128> {
    (1..=r as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

/// Rank `r` (prime), genus `g ≥ 2`, number of parabolic points `m`, degree `d` coprime to `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeometryParams {
    r: u32,
    g: u32,
    m: u32,
    d: i64,
}

impl GeometryParams {
    pub fn new(r: u32, g: u32, m: u32, d: i64) -> Result<Self, ValidationError> {
        let mut bad = Vec::new();
        if !is_prime(r as u64) {
            bad.push(ParamViolation::RankNotPrime(r));
        }
        if g < 2 {
            bad.push(ParamViolation::GenusTooSmall(g));
        }
        if r > 0 && gcd(d.unsigned_abs(), r as u64) != 1 {
            bad.push(ParamViolation::DegreeNotCoprime { d, r });
        }
        if bad.is_empty() {
            let p = GeometryParams { r, g, m, d };
            if p.gamma_order().is_none() {
                bad.push(ParamViolation::Overflow("|Γ| = r^(2g)"));
            }
            if p.component_count().is_none() {
                bad.push(ParamViolation::Overflow("(r!)^m"));
            }
            if bad.is_empty() {
                return Ok(p);
            }
        }
        Err(ValidationError(bad))
    }

    pub const fn r(&self) -> u32 {
        self.r
    }

    pub const fn g(&self) -> u32 {
        self.g
    }

    pub const fn m(&self) -> u32 {
        self.m
    }

    pub const fn d(&self) -> i64 {
        self.d
    }

    /// `(r² − 1)(g − 1) + m·r(r − 1)/2`.
    pub fn complex_dim_moduli(&self) -> u64 {
        let (r, g, m) = (self.r as u64, self.g as u64, self.m as u64);
        (r * r - 1) * (g - 1) + m * r * (r - 1) / 2
    }

    /// `(r − 1)(g − 1)`: complex dimension of each component of the fixed locus.
    pub fn complex_dim_fixed(&self) -> u64 {
        (self.r as u64 - 1) * (self.g as u64 - 1)
    }

    /// `r(r − 1)(g − 1) + m·r(r − 1)/2`.
    pub fn codim_fixed(&self) -> u64 {
        self.complex_dim_moduli() - self.complex_dim_fixed()
    }

    /// `|Γ| = r^{2g}`.
    pub fn gamma_order(&self) -> Option<u128> {
        (self.r as u128).checked_pow(2 * self.g)
    }

    /// `(r!)^m`, the number of connected components of each fixed locus.
    pub fn component_count(&self) -> Option<u128> {
        factorial(self.r)?.checked_pow(self.m)
    }

    /// Number of nontrivial twisting line bundles, `r^{2g} − 1`.
    pub fn nontrivial_twists(&self) -> u128 {
        self.gamma_order().expect("validated at construction") - 1
    }
}

/// Dimensions and counts derived from [`GeometryParams`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantReport {
    pub complex_dim_moduli: u64,
    pub real_dim_moduli: u64,
    pub complex_dim_fixed: u64,
    pub codim_fixed: u64,
    pub gamma_order: u128,
    pub component_count: u128,
}

pub fn invariants(p: &GeometryParams) -> InvariantReport {
    let complex_dim_moduli = p.complex_dim_moduli();
    InvariantReport {
        complex_dim_moduli,
        real_dim_moduli: 2 * complex_dim_moduli,
        complex_dim_fixed: p.complex_dim_fixed(),
        codim_fixed: p.codim_fixed(),
        gamma_order: p.gamma_order().expect("validated at construction"),
        component_count: p.component_count().expect("validated at construction"),
    }
}
