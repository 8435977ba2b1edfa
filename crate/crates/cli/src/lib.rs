//! Command-line front end for `crcoh-core`.
//!
//! Subcommands: `invariants`, `spectrum`, `shifts`, `assemble`, `verify`.
//! Exit codes: 0 ok, 2 usage, 3 validation, 4 property violation, 5 I/O.

pub mod error;
pub mod formats;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crcoh_core::cohomology::{
    assemble, duality_check, pairing_convention_report, SectorInput,
};
use crcoh_core::geometry::{invariants, GeometryParams};
use crcoh_core::parabolic::{is_concentrated, par_degree, par_slope, ParabolicData};
use crcoh_core::shift::{complementarity_check, shift_closed_form, shift_from_spectrum, shift_table};
use crcoh_core::spectrum::{
    bundle_spectrum, combined_spectrum, enumerate_components, flag_tangent_spectrum, Permutation,
    SectorComponent,
};
use crcoh_core::verify::{self, Grid};
use crcoh_core::UnityExponent;
use serde_json::{json, Value};

pub use error::{CliError, EXIT_IO, EXIT_OK, EXIT_PROPERTY, EXIT_USAGE, EXIT_VALIDATION};
use formats::*;

/// Largest component enumeration `spectrum --all` will print.
pub const MAX_LISTED_COMPONENTS: u128 = 100_000;

#[derive(Debug, Parser)]
#[command(name = "crcoh", version, about = "Exact Chen-Ruan bookkeeping for parabolic moduli under torsion twisting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimensions, group order and component count.
    Invariants {
        #[command(flatten)]
        params: ParamArgs,
        /// JSON weight file; adds parabolic degree, slope and concentration.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Tangent eigenvalue spectra of one component or of all of them.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        /// One ordering per point in one-line notation, comma separated, e.g. "012,021".
        #[arg(long, conflicts_with = "all")]
        perm: Option<String>,
        /// Every component.
        #[arg(long)]
        all: bool,
    },
    /// Degree shift table.
    Shifts {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Additive Chen-Ruan Poincaré table.
    Assemble {
        #[command(flatten)]
        params: ParamArgs,
        /// JSON sectors file with untwisted and prym_quotient tables.
        #[arg(long)]
        sectors: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the invariant suite over the parameter grid.
    Verify {
        /// Small grid (r in {2,3}, g in {2,3}).
        #[arg(long)]
        quick: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub g: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A document to print and the exit status to return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub document: String,
    pub code: i32,
}

impl Outcome {
    fn ok(document: String) -> Self {
        Outcome { document, code: EXIT_OK }
    }
}

impl ParamArgs {
    /// Validated parameters; `d` defaults to 1.
    pub fn resolve(&self) -> Result<GeometryParams, CliError> {
        let need = |v: Option<u32>, name: &str| {
            v.ok_or_else(|| CliError::Usage(format!("--{name} is required")))
        };
        let (r, g, m) = (need(self.r, "r")?, need(self.g, "g")?, need(self.m, "m")?);
        GeometryParams::new(r, g, m, self.d.unwrap_or(1))
            .map_err(|e| CliError::Validation(e.to_string()))
    }

    /// Fills unset flags from a file's params; set flags must agree with it.
    fn merge(&self, file: Option<(u32, u32, u32, i64)>) -> Result<ParamArgs, CliError> {
        let Some((r, g, m, d)) = file else {
            return Ok(self.clone());
        };
        let pick = |flag: Option<i64>, from_file: i64, name: &str| match flag {
            Some(v) if v != from_file => Err(CliError::Validation(format!(
                "--{name} {v} disagrees with the sectors file ({from_file})"
            ))),
            _ => Ok(from_file),
        };
        Ok(ParamArgs {
            r: Some(pick(self.r.map(i64::from), r as i64, "r")? as u32),
            g: Some(pick(self.g.map(i64::from), g as i64, "g")? as u32),
            m: Some(pick(self.m.map(i64::from), m as i64, "m")? as u32),
            d: Some(pick(self.d, d, "d")?),
        })
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Dispatches one parsed command.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Invariants { params, weights, format } => cmd_invariants(params, weights.as_deref(), *format),
        Command::Spectrum { params, perm, all } => cmd_spectrum(params, perm.as_deref(), *all),
        Command::Shifts { params, format } => cmd_shifts(params, *format),
        Command::Assemble { params, sectors, format } => cmd_assemble(params, sectors.as_deref(), *format),
        Command::Verify { quick, format } => cmd_verify(*quick, *format),
    }
}

/// Parses `args` (including the program name) and runs them, mapping every
/// failure to its exit code. Returns `(code, stdout, stderr)`.
pub fn run_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { (code, text, String::new()) } else { (code, String::new(), text) };
        }
    };
    match run(&cli) {
        Ok(out) => (out.code, out.document, String::new()),
        Err(e) => (e.exit_code(), String::new(), format!("crcoh: {e}\n")),
    }
}

fn cmd_invariants(
    args: &ParamArgs,
    weights: Option<&std::path::Path>,
    format: Format,
) -> Result<Outcome, CliError> {
    let p = args.resolve()?;
    let rep = invariants(&p);
    let mut fields: Vec<(&str, Value)> = vec![
        ("r", json!(p.r())),
        ("g", json!(p.g())),
        ("m", json!(p.m())),
        ("d", json!(p.d())),
        ("complex_dim_moduli", json!(rep.complex_dim_moduli)),
        ("real_dim_moduli", json!(rep.real_dim_moduli)),
        ("complex_dim_fixed", json!(rep.complex_dim_fixed)),
        ("codim_fixed", json!(rep.codim_fixed)),
        ("gamma_order", count_json(rep.gamma_order)),
        ("component_count", count_json(rep.component_count)),
    ];
    if let Some(path) = weights {
        let w = parse_weights(&read_json(path)?)?;
        let concentrated = is_concentrated(&w, p.r() as u64, p.m() as usize)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let data = ParabolicData::new(p.r() as u64, p.d(), w)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        fields.push(("par_degree", rational_json(par_degree(&data))));
        fields.push(("par_slope", rational_json(par_slope(&data))));
        fields.push(("concentrated", json!(concentrated)));
    }
    let doc = match format {
        Format::Json => pretty(&Value::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())),
        Format::Csv => {
            let rows: Vec<Vec<String>> = fields
                .into_iter()
                .map(|(k, v)| vec![k.to_string(), v.as_str().map_or_else(|| v.to_string(), str::to_string)])
                .collect();
            csv_document(&["key", "value"], &rows)?
        }
    };
    Ok(Outcome::ok(doc))
}

fn component_json(c: &SectorComponent, p: &GeometryParams) -> Result<Value, CliError> {
    let t = UnityExponent::new(1, p.r()).expect("r > 0");
    let flags = c
        .perms()
        .iter()
        .map(|tau| flag_tangent_spectrum(tau, t).map(|s| spectrum_json(&s)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let combined = combined_spectrum(c, p).map_err(|e| CliError::Validation(e.to_string()))?;
    let (l, closed) = match c.reduced() {
        Ok(l) => (
            json!(l),
            rational_json(shift_closed_form(l, p, None).map_err(|e| CliError::Validation(e.to_string()))?),
        ),
        Err(_) => (Value::Null, Value::Null),
    };
    Ok(json!({
        "perms": c.perms().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "l": l,
        "flags": flags,
        "combined": spectrum_json(&combined),
        "shift": rational_json(shift_from_spectrum(&combined)),
        "closed_form_shift": closed,
    }))
}

fn cmd_spectrum(args: &ParamArgs, perm: Option<&str>, all: bool) -> Result<Outcome, CliError> {
    let p = args.resolve()?;
    let components: Vec<SectorComponent> = match (perm, all) {
        (Some(text), false) => {
            let perms = if text.trim().is_empty() {
                Vec::new()
            } else {
                text.split(',')
                    .map(Permutation::parse)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| CliError::Validation(e.to_string()))?
            };
            if perms.len() != p.m() as usize {
                return Err(CliError::Validation(format!(
                    "{} orderings given for m = {}",
                    perms.len(),
                    p.m()
                )));
            }
            if let Some(bad) = perms.iter().find(|t| t.len() != p.r() as usize) {
                return Err(CliError::Validation(format!("ordering {bad} is not a permutation of 0..{}", p.r())));
            }
            vec![SectorComponent::new(perms).map_err(|e| CliError::Validation(e.to_string()))?]
        }
        (None, true) => {
            let count = p.component_count().expect("validated");
            if count > MAX_LISTED_COMPONENTS {
                return Err(CliError::Validation(format!(
                    "{count} components exceed the listing limit of {MAX_LISTED_COMPONENTS}"
                )));
            }
            enumerate_components(p.r(), p.m()).collect()
        }
        _ => return Err(CliError::Usage("spectrum needs exactly one of --perm or --all".into())),
    };
    let listed = components
        .iter()
        .map(|c| component_json(c, &p))
        .collect::<Result<Vec<_>, _>>()?;
    let doc = json!({
        "params": params_json(&p),
        "bundle": spectrum_json(&bundle_spectrum(&p)),
        "components": listed,
    });
    Ok(Outcome::ok(pretty(&doc)))
}

fn cmd_shifts(args: &ParamArgs, format: Format) -> Result<Outcome, CliError> {
    let p = args.resolve()?;
    let table = shift_table(&p);
    let doc = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = table
                .entries
                .iter()
                .map(|e| vec![l_label(&e.l), e.shift.to_string(), e.multiplicity.to_string()])
                .collect();
            csv_document(&["l", "shift", "components"], &rows)?
        }
        Format::Json => {
            let comp = complementarity_check(&p);
            let rows: Vec<Value> = table
                .entries
                .iter()
                .map(|e| json!({ "l": e.l, "shift": rational_json(e.shift), "components": count_json(e.multiplicity) }))
                .collect();
            pretty(&json!({
                "params": params_json(&p),
                "rows": rows,
                "complementarity": {
                    "target": rational_json(comp.target),
                    "pass": comp.passes(),
                    "violations": comp.violations.iter().map(|v| l_label(&v.l)).collect::<Vec<_>>(),
                },
            }))
        }
    };
    Ok(Outcome::ok(doc))
}

fn cmd_assemble(
    args: &ParamArgs,
    sectors: Option<&std::path::Path>,
    format: Format,
) -> Result<Outcome, CliError> {
    let file = sectors.map(read_json).transpose()?;
    let file_params = file.as_ref().map(parse_params).transpose()?.flatten();
    let p = args.merge(file_params)?.resolve()?;
    let (input, structural_only) = match &file {
        Some(v) => (parse_sectors(v, &p)?, false),
        None => (SectorInput::placeholder(&p), true),
    };
    let table = assemble(&p, &input).map_err(|e| CliError::Validation(e.to_string()))?;
    let doc = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                table.iter().map(|(q, k)| vec![q.to_string(), k.to_string()]).collect();
            csv_document(&["degree", "dim"], &rows)?
        }
        Format::Json => {
            let duality = duality_check(&table);
            let pairing = pairing_convention_report(&p);
            let expected_total = input
                .prym_quotient
                .total()
                .checked_mul(p.nontrivial_twists())
                .and_then(|k| k.checked_mul(p.component_count().expect("validated")))
                .and_then(|k| k.checked_add(input.untwisted.total()));
            let mut obj = serde_json::Map::new();
            obj.insert("params".into(), params_json(&p));
            if structural_only {
                obj.insert("label".into(), json!("structural only"));
            }
            obj.insert("table".into(), table_json(&table));
            obj.insert(
                "checks".into(),
                json!({
                    "duality": {
                        "pass": duality.passes(),
                        "violations": duality.violations.iter().map(|v| json!({
                            "degree": rational_json(v.degree),
                            "dim": count_json(v.dim),
                            "mirror_dim": count_json(v.mirror_dim),
                        })).collect::<Vec<_>>(),
                    },
                    "total": count_json(table.total()),
                    "expected_total": expected_total.map_or(Value::Null, count_json),
                    "pairing": {
                        "complementary_closes": pairing.complementary_closes(),
                        "same_sector_closes": pairing.same_sector_closes(),
                    },
                }),
            );
            pretty(&Value::Object(obj))
        }
    };
    Ok(Outcome::ok(doc))
}

fn cmd_verify(quick: bool, format: Format) -> Result<Outcome, CliError> {
    let grid = if quick { Grid::quick() } else { Grid::full() };
    let report = verify::run(&grid);
    let code = if report.passes() { EXIT_OK } else { EXIT_PROPERTY };
    let doc = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .results
                .iter()
                .map(|r| {
                    vec![
                        r.name.to_string(),
                        if r.passes() { "pass" } else { "fail" }.to_string(),
                        r.checked.to_string(),
                        r.violations.to_string(),
                    ]
                })
                .collect();
            csv_document(&["property", "status", "checked", "violations"], &rows)?
        }
        Format::Json => pretty(&json!({
            "grid": { "r": grid.ranks, "g": grid.genera, "m": grid.points },
            "pass": report.passes(),
            "properties": report.results.iter().map(|r| json!({
                "name": r.name,
                "pass": r.passes(),
                "checked": count_json(r.checked),
                "violations": count_json(r.violations),
                "counterexamples": r.counterexamples,
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome { document: doc, code })
}
