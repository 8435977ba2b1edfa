//! Independent brute-force oracles for the closed forms.
//!
//! The oracle here lists every tangent eigenvalue of a component
//! explicitly, one entry per direction, without going through `Spectrum`.

use crcoh_core::arith::Rational;
use crcoh_core::geometry::GeometryParams;
use crcoh_core::shift::{shift_closed_form, shift_table};
use crcoh_core::spectrum::{all_permutations, enumerate_components, Permutation};

/// Every eigenvalue exponent on the tangent space at a point of the component.
fn eigenvalue_list(perms: &[Permutation], r: u32, g: u32) -> Vec<u32> {
    let mut out = Vec::new();
    // bundle directions: (r-1)(g-1) invariant, r(g-1) for each nontrivial exponent
    out.extend(std::iter::repeat(0).take(((r - 1) * (g - 1)) as usize));
    for e in 1..r {
        out.extend(std::iter::repeat(e).take((r * (g - 1)) as usize));
    }
    for tau in perms {
        let img = tau.images();
        for u in 0..img.len() {
            for v in u + 1..img.len() {
                out.push(((img[v] + r - img[u]) % r) as u32);
            }
        }
    }
    out
}

fn age(eigs: &[u32], r: u32) -> Rational {
    let sum: i128 = eigs.iter().map(|&e| e as i128).sum();
    Rational::new(sum, r as i128).unwrap()
}

/// Affine orderings `u ↦ a·u + b` are exactly those with a base exponent.
fn is_affine(tau: &Permutation, r: u32) -> bool {
    let img = tau.images();
    let step = (img[1] + r - img[0]) % r;
    (0..r as usize).all(|u| img[u] == (img[0] + step * u as u32) % r)
}

#[test]
fn frozen_shift_values() {
    let p = |r, g, m| GeometryParams::new(r, g, m, 1).unwrap();
    let id3 = Permutation::identity(3);
    assert_eq!(age(&eigenvalue_list(&[id3.clone()], 3, 2), 3), Rational::new(13, 3).unwrap());
    assert_eq!(age(&eigenvalue_list(&[Permutation::identity(5)], 5, 2), 5), Rational::from_integer(14));
    assert_eq!(age(&eigenvalue_list(&[Permutation::identity(2)], 2, 2), 2), Rational::new(3, 2).unwrap());
    assert_eq!(shift_closed_form(&[1], &p(5, 2, 1), None).unwrap(), Rational::from_integer(14));
    // m = 0 reduces to r(r-1)(g-1)/2
    assert_eq!(age(&eigenvalue_list(&[], 3, 2), 3), Rational::from_integer(3));
    assert_eq!(shift_table(&p(3, 2, 0)).entries[0].shift, Rational::from_integer(3));
}

#[test]
fn closed_form_matches_eigenvalue_list_on_affine_components() {
    for (r, g, m) in [(2, 2, 2), (3, 3, 2), (5, 2, 1), (5, 4, 2), (7, 3, 1)] {
        let p = GeometryParams::new(r, g, m, 1).unwrap();
        let mut affine = 0;
        for c in enumerate_components(r, m) {
            let oracle = age(&eigenvalue_list(c.perms(), r, g), r);
            let all_affine = c.perms().iter().all(|t| is_affine(t, r));
            assert_eq!(c.reduced().is_ok(), all_affine, "{c}");
            if let Ok(l) = c.reduced() {
                affine += 1;
                assert_eq!(shift_closed_form(l, &p, None).unwrap(), oracle, "{c}");
            }
        }
        assert_eq!(affine, (r * (r - 1)).pow(m) as usize);
    }
}

#[test]
fn affine_orderings_are_all_orderings_only_up_to_rank_three() {
    for (r, affine) in [(2u32, 2usize), (3, 6), (5, 20), (7, 42)] {
        let n = all_permutations(r).iter().filter(|t| is_affine(t, r)).count();
        assert_eq!(n, affine);
    }
}
