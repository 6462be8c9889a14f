//! On-disk formats for wavefunctions.
//!
//! JSON: `{"grid": {"n", "x_min", "x_max", "boundary"}, "re": [...], "im": [...]}`.
//!
//! CSV: one comment line with the grid metadata, a `re,im` header, then one
//! row per node:
//!
//! ```text
//! # n=256 x_min=-10 x_max=10 boundary=periodic
//! re,im
//! 0.0012,0
//! ```
//!
//! Floats are written with Rust's shortest round-trip formatting, so both
//! formats reload bit-exactly.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{SpatialGrid, WaveFunction};

#[derive(Debug, Serialize, Deserialize)]
struct WaveFunctionFile {
    grid: SpatialGrid,
    re: Vec<f64>,
    im: Vec<f64>,
}

pub fn to_json(psi: &WaveFunction) -> String {
    let file = WaveFunctionFile {
        grid: *psi.grid(),
        re: psi.amplitudes().iter().map(|z| z.re).collect(),
        im: psi.amplitudes().iter().map(|z| z.im).collect(),
    };
    serde_json::to_string(&file).expect("wavefunction serializes")
}

pub fn from_json(text: &str) -> Result<WaveFunction> {
    let file: WaveFunctionFile = serde_json::from_str(text)?;
    if file.re.len() != file.grid.n_points() || file.im.len() != file.grid.n_points() {
        return Err(Error::Parse(format!(
            "grid has {} points but re/im have {}/{} entries",
            file.grid.n_points(),
            file.re.len(),
            file.im.len()
        )));
    }
    WaveFunction::from_parts(file.grid, &file.re, &file.im)
}

pub fn to_csv(psi: &WaveFunction) -> String {
    let g = psi.grid();
    let mut out =
        format!("# n={} x_min={} x_max={} boundary={}\nre,im\n", g.n_points(), g.x_min(), g.x_max(), g.boundary());
    for z in psi.amplitudes() {
        let _ = writeln!(out, "{},{}", z.re, z.im);
    }
    out
}

pub fn from_csv(text: &str) -> Result<WaveFunction> {
    let mut lines = text.lines();
    let meta = lines
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .ok_or_else(|| Error::Parse("missing `#` grid metadata line".into()))?;
    let (mut n, mut x_min, mut x_max, mut boundary) = (None, None, None, None);
    for field in meta.split_whitespace() {
        let (key, value) =
            field.split_once('=').ok_or_else(|| Error::Parse(format!("malformed metadata field `{field}`")))?;
        let bad = |_| Error::Parse(format!("bad value for `{key}`: `{value}`"));
        match key {
            "n" => n = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "x_min" => x_min = Some(value.parse::<f64>().map_err(|e| bad(e.to_string()))?),
            "x_max" => x_max = Some(value.parse::<f64>().map_err(|e| bad(e.to_string()))?),
            "boundary" => boundary = Some(value.parse()?),
            _ => return Err(Error::Parse(format!("unknown metadata key `{key}`"))),
        }
    }
    let missing = |k: &str| Error::Parse(format!("metadata is missing `{k}`"));
    let grid = SpatialGrid::new(
        n.ok_or_else(|| missing("n"))?,
        x_min.ok_or_else(|| missing("x_min"))?,
        x_max.ok_or_else(|| missing("x_max"))?,
        boundary.ok_or_else(|| missing("boundary"))?,
    )?;
    match lines.next().map(str::trim) {
        Some("re,im") => {}
        other => return Err(Error::Parse(format!("expected `re,im` header, found {other:?}"))),
    }
    let (mut re, mut im) = (Vec::new(), Vec::new());
    for (row, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let (a, b) = line.split_once(',').ok_or_else(|| Error::Parse(format!("row {row}: expected two columns")))?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("row {row}: {e}")));
        re.push(parse(a)?);
        im.push(parse(b)?);
    }
    if re.len() != grid.n_points() {
        return Err(Error::Parse(format!("expected {} rows, found {}", grid.n_points(), re.len())));
    }
    WaveFunction::from_parts(grid, &re, &im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{make_gaussian, Boundary};
    use proptest::prelude::*;

    #[test]
    fn json_shape() {
        let g = SpatialGrid::reflecting(8, -1.0, 1.0).unwrap();
        let psi = make_gaussian(g, 0.0, 0.5, 0.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&psi)).unwrap();
        assert_eq!(v["grid"]["n"], 8);
        assert_eq!(v["grid"]["boundary"], "reflecting");
        assert_eq!(v["re"].as_array().unwrap().len(), 8);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(from_json("{\"grid\": 3}"), Err(Error::Parse(_))));
        assert!(from_json(r#"{"grid":{"n":8,"x_min":0,"x_max":1,"boundary":"periodic"},"re":[1],"im":[0]}"#).is_err());
        assert!(from_csv("re,im\n1,0\n").is_err());
        assert!(from_csv("# n=8 x_min=0 x_max=1 boundary=periodic\nre,im\n1,0\n").is_err());
    }

    proptest! {
        #[test]
        fn formats_round_trip_exactly(
            n in 8usize..40,
            center in -0.9f64..0.9,
            width in 0.05f64..2.0,
            k in -5.0f64..5.0,
            periodic in any::<bool>(),
        ) {
            let b = if periodic { Boundary::Periodic } else { Boundary::Reflecting };
            let g = SpatialGrid::new(n, -1.0, 1.0, b).unwrap();
            let psi = make_gaussian(g, center, width, k).unwrap();
            prop_assert_eq!(from_json(&to_json(&psi)).unwrap(), psi.clone());
            prop_assert_eq!(from_csv(&to_csv(&psi)).unwrap(), psi);
        }
    }
}
