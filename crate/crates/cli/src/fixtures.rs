//! Golden fixtures: one operation applied to stored inputs, with the result
//! worked out independently of the engine.

use std::fs;
use std::path::Path;

use mfs_core::json::series_from_value;
use mfs_core::ops::Op;
use mfs_core::suites::{Fixture, Suite};
use serde_json::Value;

use crate::CliError;

const EMBEDDED: &[(&str, &str)] = &[
    (
        "catalan_moments_to_cumulants.json",
        include_str!("../fixtures/catalan_moments_to_cumulants.json"),
    ),
    (
        "comp_inverse_z_plus_z2.json",
        include_str!("../fixtures/comp_inverse_z_plus_z2.json"),
    ),
    (
        "geometric_compose.json",
        include_str!("../fixtures/geometric_compose.json"),
    ),
    ("h1_with_unit.json", include_str!("../fixtures/h1_with_unit.json")),
    (
        "matrix_units_mul.json",
        include_str!("../fixtures/matrix_units_mul.json"),
    ),
    ("post_l_identity.json", include_str!("../fixtures/post_l_identity.json")),
    (
        "pre_lie_monomials.json",
        include_str!("../fixtures/pre_lie_monomials.json"),
    ),
    ("s_l_one_plus_z.json", include_str!("../fixtures/s_l_one_plus_z.json")),
    ("s_l_zeta_mat2.json", include_str!("../fixtures/s_l_zeta_mat2.json")),
    (
        "s_transform_unit_cumulants.json",
        include_str!("../fixtures/s_transform_unit_cumulants.json"),
    ),
    (
        "unit_cumulants_to_moments.json",
        include_str!("../fixtures/unit_cumulants_to_moments.json"),
    ),
    (
        "zeta_boxcon_zeta.json",
        include_str!("../fixtures/zeta_boxcon_zeta.json"),
    ),
    (
        "zeta_moments_mat2.json",
        include_str!("../fixtures/zeta_moments_mat2.json"),
    ),
];

pub fn embedded() -> Result<Vec<Fixture>, CliError> {
    EMBEDDED.iter().map(|(file, text)| parse(file, text)).collect()
}

/// Every `*.json` file in `dir`, in file-name order.
pub fn from_dir(dir: &Path) -> Result<Vec<Fixture>, CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io)?;
    paths.retain(|p| p.extension().is_some_and(|x| x == "json"));
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            parse(&p.display().to_string(), &text)
        })
        .collect()
}

fn parse(file: &str, text: &str) -> Result<Fixture, CliError> {
    let bad = |what: String| CliError::Config(format!("fixture {file}: {what}"));
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let field = |k: &str| v.get(k).ok_or_else(|| bad(format!("missing field {k:?}")));
    let string = |k: &str| -> Result<String, CliError> {
        field(k)?
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| bad(format!("field {k:?} is not a string")))
    };
    let series = |k: &str| series_from_value(field(k)?).map_err(|e| bad(format!("{k}: {e}")));
    let op: Op = string("op")?.parse().map_err(|e| bad(format!("{e}")))?;
    let rhs = match v.get("rhs") {
        Some(_) => Some(series("rhs")?),
        None => None,
    };
    if op.arity() == 2 && rhs.is_none() {
        return Err(bad(format!("operation {op} needs \"rhs\"")));
    }
    Ok(Fixture {
        name: string("name")?,
        suite: string("suite")?.parse::<Suite>().map_err(|e| bad(e.to_string()))?,
        op,
        lhs: series("lhs")?,
        rhs,
        expected: series("expected")?,
    })
}
