//! The invariant suite: every structural property checked over a parameter grid.
//!
//! Components are visited through products of [`flag_classes`]: all
//! orderings with the same flag spectrum give the same combined spectrum,
//! so each class product stands for `Π count` components and the full
//! `(r!)^m` space is covered without materialising it.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{residue, Rational, UnityExponent};
use crate::cohomology::{
    assemble, duality_check, obstruction_rank, pairing_convention_report, pairing_partner,
    prym_span, GradedDims, Sector, SectorInput,
};
use crate::geometry::GeometryParams;
use crate::shift::{
    complementarity_check, shift_census, shift_closed_form, shift_from_spectrum, shift_table,
    valid_choices,
};
use crate::spectrum::{
    all_permutations, combined_spectrum, distribution_check, enumerate_components, extract_base,
    flag_classes, flag_tangent_spectrum, FlagClass, SectorComponent,
};

const MAX_COUNTEREXAMPLES: usize = 5;
const MAX_EXPLICIT_COMPONENTS: u128 = 100_000;

/// Ranks, genera and point counts to sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub ranks: Vec<u32>,
    pub genera: Vec<u32>,
    pub points: Vec<u32>,
}

impl Grid {
    pub fn full() -> Self {
        Grid { ranks: vec![2, 3, 5, 7], genera: vec![2, 3, 4], points: vec![0, 1, 2] }
    }

    pub fn quick() -> Self {
        Grid { ranks: vec![2, 3], genera: vec![2, 3], points: vec![0, 1, 2] }
    }

    fn params(&self) -> impl Iterator<Item = GeometryParams> + '_ {
        self.ranks.iter().flat_map(move |&r| {
            self.genera.iter().flat_map(move |&g| {
                self.points
                    .iter()
                    .map(move |&m| GeometryParams::new(r, g, m, 1).expect("grid values are valid"))
            })
        })
    }
}

/// Outcome of one property over the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub checked: u128,
    pub violations: u128,
    /// The first few failing cases, rendered for humans.
    pub counterexamples: Vec<String>,
}

impl PropertyResult {
    fn new(name: &'static str) -> Self {
        PropertyResult { name, checked: 0, violations: 0, counterexamples: Vec::new() }
    }

    pub fn passes(&self) -> bool {
        self.violations == 0
    }

    fn record(&mut self, weight: u128, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += weight;
        if !ok {
            self.violations += weight;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(describe());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub results: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn passes(&self) -> bool {
        self.results.iter().all(PropertyResult::passes)
    }
}

/// Runs every property over `grid`.
pub fn run(grid: &Grid) -> VerifyReport {
    let checks: [fn(&Grid) -> PropertyResult; 18] = [
        residue_bracket,
        rank_two_dimension,
        flag_spectrum_shape,
        canonical_flag_spectrum,
        generator_rescaling,
        base_distribution,
        component_count,
        dimension_accounting,
        oracle_equivalence,
        choice_independence,
        complementarity,
        shift_denominator_and_sign,
        table_multiplicity,
        table_matches_census,
        assembly_duality,
        pairing_involution,
        pairing_convention,
        obstruction_sanity,
    ];
    VerifyReport { results: checks.iter().map(|check| check(grid)).collect() }
}

/// Class products: `(representative component, number of components it stands for)`.
fn class_components(classes: &[FlagClass], m: u32) -> Vec<(SectorComponent, u128)> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; m as usize];
    loop {
        let perms = idx.iter().map(|&i| classes[i].representative.clone()).collect();
        let weight = idx.iter().map(|&i| classes[i].count).product();
        out.push((SectorComponent::new(perms).expect("common order"), weight));
        let mut advanced = false;
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < classes.len() {
                advanced = true;
                break;
            }
            *slot = 0;
        }
        if !advanced {
            return out;
        }
    }
}

fn fmt_l(l: &[u32]) -> String {
    let parts: Vec<String> = l.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(","))
}

fn residue_bracket(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("residue-bracket");
    for &r in &grid.ranks {
        for b in -3 * r as i64..=3 * r as i64 {
            let v = residue(b, r as i64).expect("r > 0");
            let ok = (0..r as i64).contains(&v) && (b - v) % r as i64 == 0;
            res.record(1, ok, || format!("[{b}]_{r} = {v}"));
        }
    }
    res
}

fn rank_two_dimension(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("rank-two-dimension");
    for p in grid.params().filter(|p| p.r() == 2) {
        let expected = 3 * p.g() as u64 - 3 + p.m() as u64;
        let got = p.complex_dim_moduli();
        res.record(1, got == expected, || format!("g={} m={}: {got} != {expected}", p.g(), p.m()));
    }
    res
}

fn flag_spectrum_shape(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("flag-spectrum-shape");
    for &r in &grid.ranks {
        for tau in all_permutations(r) {
            for a in 1..r {
                let s = flag_tangent_spectrum(&tau, UnityExponent::new(a as i64, r).unwrap())
                    .expect("nontrivial generator");
                let ok = s.multiplicity(0) == 0 && s.total() == (r * (r - 1) / 2) as u64;
                res.record(1, ok, || format!("r={r} tau={tau} a={a}: {s:?}"));
            }
        }
    }
    res
}

fn canonical_flag_spectrum(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("canonical-flag-spectrum");
    for &r in &grid.ranks {
        for tau in all_permutations(r) {
            for a in 1..r {
                let s = flag_tangent_spectrum(&tau, UnityExponent::new(a as i64, r).unwrap())
                    .expect("nontrivial generator");
                let ok = extract_base(&s).is_ok();
                res.record(1, ok, || format!("r={r} tau={tau} a={a}: {s:?} has no base exponent"));
            }
        }
    }
    res
}

fn generator_rescaling(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("generator-rescaling");
    for &r in &grid.ranks {
        let t = UnityExponent::new(1, r).unwrap();
        for tau in all_permutations(r) {
            let base = extract_base(&flag_tangent_spectrum(&tau, t).unwrap());
            for a in 1..r {
                let got = extract_base(
                    &flag_tangent_spectrum(&tau, UnityExponent::new(a as i64, r).unwrap()).unwrap(),
                );
                let expected = base.map(|l| (l * a) % r);
                res.record(1, got == expected, || {
                    format!("r={r} tau={tau} a={a}: {got:?} != {expected:?}")
                });
            }
        }
    }
    res
}

fn base_distribution(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("base-distribution");
    for &r in &grid.ranks {
        for &m in grid.points.iter().filter(|&&m| m > 0) {
            let rep = distribution_check(r, m);
            res.record(1, rep.passes(), || {
                format!(
                    "r={r} m={m}: point 0 counts {:?}, {} non-canonical, expected {} each",
                    rep.per_point[0], rep.non_canonical[0], rep.expected
                )
            });
        }
    }
    res
}

fn component_count(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("component-count");
    for &r in &grid.ranks {
        for &m in &grid.points {
            let p = GeometryParams::new(r, 2, m, 1).unwrap();
            let expected = p.component_count().unwrap();
            let counted: u128 = if expected <= MAX_EXPLICIT_COMPONENTS {
                enumerate_components(r, m).count() as u128
            } else {
                class_components(&flag_classes(r), m).iter().map(|(_, w)| w).sum()
            };
            res.record(1, counted == expected, || format!("r={r} m={m}: {counted} != {expected}"));
        }
    }
    res
}

fn dimension_accounting(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("dimension-accounting");
    for &r in &grid.ranks {
        let classes = flag_classes(r);
        for &m in &grid.points {
            let comps = class_components(&classes, m);
            for &g in &grid.genera {
                let p = GeometryParams::new(r, g, m, 1).unwrap();
                for (c, w) in &comps {
                    let s = combined_spectrum(c, &p).expect("consistent component");
                    let ok = s.total() == p.complex_dim_moduli()
                        && s.multiplicity(0) == p.complex_dim_fixed()
                        && s.nontrivial_total() == p.codim_fixed();
                    res.record(*w, ok, || format!("r={r} g={g} m={m} {c}: {s:?}"));
                }
            }
        }
    }
    res
}

fn oracle_equivalence(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("oracle-equivalence");
    for &r in &grid.ranks {
        let classes = flag_classes(r);
        for &m in &grid.points {
            let comps = class_components(&classes, m);
            for &g in &grid.genera {
                let p = GeometryParams::new(r, g, m, 1).unwrap();
                for (c, w) in &comps {
                    let oracle = shift_from_spectrum(&combined_spectrum(c, &p).unwrap());
                    let closed = c.reduced().ok().map(|l| shift_closed_form(l, &p, None).unwrap());
                    res.record(*w, closed == Some(oracle), || match closed {
                        Some(v) => format!("r={r} g={g} m={m} {c}: closed form {v}, eigenvalue sum {oracle}"),
                        None => format!("r={r} g={g} m={m} {c}: no base exponents, eigenvalue sum {oracle}"),
                    });
                }
            }
        }
    }
    res
}

fn choice_independence(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("choice-independence");
    for p in grid.params().filter(|p| p.m() > 0) {
        for e in shift_table(&p).entries {
            for c in valid_choices(&e.l, p.r()).unwrap() {
                let v = shift_closed_form(&e.l, &p, Some(&c)).unwrap();
                res.record(1, v == e.shift, || {
                    format!("{p:?} l={} c={}: {v} != {}", fmt_l(&e.l), fmt_l(&c), e.shift)
                });
            }
        }
    }
    res
}

fn complementarity(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("complementarity");
    for p in grid.params() {
        let rep = complementarity_check(&p);
        res.checked += (rep.checked - rep.violations.len()) as u128;
        for v in &rep.violations {
            res.record(1, false, || format!("{p:?} l={}: sum {} != {}", fmt_l(&v.l), v.sum, rep.target));
        }
    }
    res
}

fn shift_denominator_and_sign(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("shift-denominator-and-sign");
    for p in grid.params() {
        let r = Rational::from_integer(p.r() as i128);
        for e in shift_table(&p).entries {
            let ok = (e.shift * r).is_integer() && e.shift > Rational::ZERO;
            res.record(1, ok, || format!("{p:?} l={}: shift {}", fmt_l(&e.l), e.shift));
        }
    }
    res
}

fn table_multiplicity(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("table-multiplicity");
    for p in grid.params() {
        let total = shift_table(&p).total_multiplicity();
        let expected = p.component_count().unwrap();
        res.record(1, total == expected, || format!("{p:?}: {total} != {expected}"));
    }
    res
}

fn table_matches_census(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("table-matches-census");
    for p in grid.params() {
        let census = shift_census(&p);
        let table = shift_table(&p).by_shift();
        let ok = census.non_canonical == 0 && census.counts == table;
        res.record(1, ok, || {
            format!(
                "{p:?}: {} distinct component shifts ({} components without base exponents) vs {} table values",
                census.counts.len(),
                census.non_canonical,
                table.len()
            )
        });
    }
    res
}

fn assembly_duality(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("assembly-duality");
    for p in grid.params() {
        let input = SectorInput::placeholder(&p);
        let rep = duality_check(&assemble(&p, &input).unwrap());
        res.record(1, rep.passes(), || format!("{p:?}: palindromic input fails at {:?}", rep.violations));

        if p.complex_dim_fixed() > 0 {
            let skewed = SectorInput {
                untwisted: input.untwisted.clone(),
                prym_quotient: GradedDims::from_pairs(prym_span(&p), [(Rational::ZERO, 1)]).unwrap(),
            };
            let rep = duality_check(&assemble(&p, &skewed).unwrap());
            res.record(1, !rep.passes(), || format!("{p:?}: asymmetric input not detected"));
        }
    }
    res
}

fn pairing_involution(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("pairing-involution");
    for p in grid.params() {
        for e in shift_table(&p).entries {
            let s = Sector::Twisted(e.l.clone());
            let q = e.shift * Rational::from_integer(2);
            let back = pairing_partner(&s, q, &p)
                .and_then(|(s1, q1)| pairing_partner(&s1, q1, &p));
            res.record(1, back.as_ref() == Ok(&(s.clone(), q)), || {
                format!("{p:?} {s} at {q}: {back:?}")
            });
        }
    }
    res
}

fn pairing_convention(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("pairing-convention");
    for p in grid.params() {
        let rep = pairing_convention_report(&p);
        res.record(1, rep.complementary_closes(), || {
            format!("{p:?}: complementary pairing defects {:?}", rep.complementary)
        });
    }
    res
}

fn obstruction_sanity(grid: &Grid) -> PropertyResult {
    let mut res = PropertyResult::new("obstruction-sanity");
    for p in grid.params() {
        let table = shift_table(&p);
        for e in &table.entries {
            let dual = table.get(&crate::shift::complement(&e.l, p.r())).unwrap().shift;
            let rank = obstruction_rank(
                p.complex_dim_fixed() as i64,
                &p,
                [e.shift, Rational::ZERO, dual],
            );
            res.record(1, rank == Ok(Rational::ZERO), || {
                format!("{p:?} l={}: {rank:?}", fmt_l(&e.l))
            });
        }
    }
    res
}
