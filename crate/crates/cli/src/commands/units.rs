use clap::Args;
use semwave::units::{check_equation_terms, parse_expression, parse_identity, Identity, QuantityCatalog};
use semwave::Dimension;
use serde::Serialize;

use crate::failure::Failure;
use crate::output::OutDir;
use crate::Global;

const DEFAULT_IDENTITIES: [&str; 6] =
    ["E = m*x^2/t^2", "hbar = m*x^2/t", "q = (m*x)^(1/2)/t", "A = 1/(q*x)", "A = t/(x*sqrt(m*x))", "q^2 = E/x"];

/// Terms of `iħ∂ₜψ = −(ħ²/2m)∂ₓₓψ + Vψ` with dimensionless ψ.
const SCHRODINGER_TERMS: [&str; 3] = ["hbar/t", "hbar^2/(m*x^2)", "E"];

/// Exact dimensional checks over the base units m, x, t.
#[derive(Debug, Args)]
pub struct UnitsArgs {
    /// Identities such as "q^2 = E/x"; the built-in set when none are given.
    identities: Vec<String>,
    /// Additive terms of one equation that must share a dimension, comma separated.
    #[arg(long, value_delimiter = ',')]
    terms: Vec<String>,
}

#[derive(Serialize)]
struct Homogeneity {
    terms: Vec<String>,
    dimensions: Vec<Dimension>,
    holds: bool,
}

#[derive(Serialize)]
struct UnitsReport {
    catalog: Vec<(String, Dimension)>,
    aliases: Vec<(String, String)>,
    identities: Vec<Identity>,
    homogeneity: Homogeneity,
    all_hold: bool,
}

pub fn run(args: &UnitsArgs, global: &Global) -> Result<(), Failure> {
    let catalog = QuantityCatalog::standard();
    let identities: Vec<String> = if args.identities.is_empty() {
        DEFAULT_IDENTITIES.iter().map(|s| s.to_string()).collect()
    } else {
        args.identities.clone()
    };
    let terms: Vec<String> = if args.terms.is_empty() {
        SCHRODINGER_TERMS.iter().map(|s| s.to_string()).collect()
    } else {
        args.terms.iter().map(|s| s.trim().to_string()).collect()
    };

    let parsed = identities
        .iter()
        .map(|text| parse_identity(text, &catalog).map_err(|e| Failure::from(e).context(&format!("identity {text:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let dimensions = terms
        .iter()
        .map(|text| parse_expression(text, &catalog).map_err(|e| Failure::from(e).context(&format!("term {text:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let homogeneity = Homogeneity { holds: check_equation_terms(&dimensions)?, terms, dimensions };

    println!("catalog:");
    for (name, dim) in catalog.iter() {
        println!("  {name:<12} {dim}");
    }
    for id in &parsed {
        let verdict = if id.report.holds { "PASS" } else { "FAIL" };
        println!("{verdict}  {}  [lhs {} | rhs {} | delta {}]", id.text, id.report.lhs, id.report.rhs, id.report.delta);
    }
    let verdict = if homogeneity.holds { "PASS" } else { "FAIL" };
    let shown: Vec<String> =
        homogeneity.terms.iter().zip(&homogeneity.dimensions).map(|(t, d)| format!("{t} ~ {d}")).collect();
    println!("{verdict}  homogeneity  [{}]", shown.join(", "));

    let all_hold = homogeneity.holds && parsed.iter().all(|id| id.report.holds);
    let report = UnitsReport {
        catalog: catalog.iter().map(|(n, d)| (n.to_string(), d)).collect(),
        aliases: QuantityCatalog::aliases().iter().map(|(a, c)| (a.to_string(), c.to_string())).collect(),
        identities: parsed,
        homogeneity,
        all_hold,
    };
    let mut out = OutDir::create(&global.out)?;
    out.write_json("units_report.json", &report)?;
    out.finish(
        "units",
        global.seed,
        global.format.ext(),
        &serde_json::json!({ "identities": identities, "terms": report.homogeneity.terms }),
    )?;
    if all_hold {
        Ok(())
    } else {
        Err(Failure::check("at least one dimensional check failed"))
    }
}
