//! Exact combinatorics of the Chen-Ruan cohomology of moduli of parabolic
//! bundles under the action of the `r`-torsion of the Jacobian.
//!
//! The crate is `no_std` (with `alloc`). It covers:
//!
//! - [`arith`]: exact rationals, residue brackets and root-of-unity exponents;
//! - [`parabolic`]: parabolic degree, slope and weight concentration;
//! - [`geometry`]: dimensions of the moduli space, the torsion group and fixed loci;
//! - [`spectrum`]: summand orderings of fixed components and the eigenvalue
//!   spectra of the twist on tangent spaces;
//! - [`shift`]: degree shifts, by eigenvalue sums and by closed form;
//! - [`cohomology`]: additive Poincaré tables, pairing bookkeeping and
//!   obstruction ranks;
//! - [`verify`]: the invariant suite run over a parameter grid.
#![no_std]

extern crate alloc;

pub mod arith;
pub mod cohomology;
pub mod geometry;
pub mod parabolic;
pub mod shift;
pub mod spectrum;
pub mod verify;

pub use arith::{residue, ArithError, Rational, UnityExponent};
pub use cohomology::{
    assemble, duality_check, obstruction_rank, orbifold_scale, pairing_partner, GradedDims,
    Sector, SectorInput,
};
pub use geometry::{invariants, GeometryParams, InvariantReport, ValidationError};
pub use shift::{
    complementarity_check, shift_closed_form, shift_from_spectrum, shift_table, ShiftTable,
};
pub use spectrum::{
    bundle_spectrum, canonical_spectrum, combined_spectrum, enumerate_components,
    extract_base, flag_tangent_spectrum, Permutation, SectorComponent, Spectrum,
};
