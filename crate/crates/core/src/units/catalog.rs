use std::collections::BTreeMap;

use num_rational::Rational64;

use super::{Dimension, SpatialDimension};
use crate::error::{Error, Result};

pub const CATALOG_NAMES: [&str; 11] = [
    "mass",
    "length",
    "time",
    "velocity",
    "energy",
    "hbar",
    "charge",
    "gauge_field",
    "momentum",
    "action",
    "frequency",
];

const ALIASES: [(&str, &str); 10] = [
    ("m", "mass"),
    ("x", "length"),
    ("t", "time"),
    ("v", "velocity"),
    ("E", "energy"),
    ("q", "charge"),
    ("A", "gauge_field"),
    ("p", "momentum"),
    ("S", "action"),
    ("omega", "frequency"),
];

/// Named dimensions of the semantic unit system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantityCatalog {
    entries: BTreeMap<String, Dimension>,
}

fn half(n: i64) -> Rational64 {
    Rational64::new(n, 2)
}

impl QuantityCatalog {
    /// Stored table. [`derive_catalog`] reproduces it from the base units.
    pub fn standard() -> Self {
        let table = [
            ("mass", Dimension::integer(1, 0, 0)),
            ("length", Dimension::integer(0, 1, 0)),
            ("time", Dimension::integer(0, 0, 1)),
            ("velocity", Dimension::integer(0, 1, -1)),
            ("energy", Dimension::integer(1, 2, -2)),
            ("hbar", Dimension::integer(1, 2, -1)),
            ("charge", Dimension::new(half(1), half(1), half(-2))),
            ("gauge_field", Dimension::new(half(-1), half(-3), half(2))),
            ("momentum", Dimension::integer(1, 1, -1)),
            ("action", Dimension::integer(1, 2, -1)),
            ("frequency", Dimension::integer(0, 0, -1)),
        ];
        QuantityCatalog { entries: table.into_iter().map(|(k, v)| (k.to_string(), v)).collect() }
    }

    pub fn from_entries(entries: BTreeMap<String, Dimension>) -> Self {
        QuantityCatalog { entries }
    }

    /// Looks up a catalog name or one of its short aliases (`E`, `q`, `A`, ...).
    pub fn get(&self, name: &str) -> Result<Dimension> {
        let canonical = ALIASES.iter().find(|(a, _)| *a == name).map_or(name, |(_, c)| c);
        self.entries.get(canonical).copied().ok_or_else(|| Error::UnknownQuantity(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Dimension)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn aliases() -> &'static [(&'static str, &'static str)] {
        &ALIASES
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Default for QuantityCatalog {
    fn default() -> Self {
        Self::standard()
    }
}

/// Dimension of a catalog quantity in the standard table.
pub fn dimension_of(name: &str) -> Result<Dimension> {
    QuantityCatalog::standard().get(name)
}

/// Rebuilds every catalog entry from `m`, `x`, `t` with the dimension
/// algebra alone: kinetic energy `m·v²`, `ħ = E·t`, the charge from
/// `[q]/[x] = √(E/x³)` and the gauge field from `[q][A] = 1/[x]`.
pub fn derive_catalog() -> QuantityCatalog {
    let (m, x, t) = (Dimension::mass(), Dimension::length(), Dimension::time());
    let velocity = x / t;
    let energy = m * velocity.powi(2);
    let frequency = t.recip();
    let hbar = energy / frequency;
    let three_d = SpatialDimension(3);
    let charge = x * (energy / x.powi(3)).sqrt();
    debug_assert_eq!(charge, three_d.charge());
    let gauge_field = (charge * x).recip();
    let entries = [
        ("mass", m),
        ("length", x),
        ("time", t),
        ("velocity", velocity),
        ("energy", energy),
        ("hbar", hbar),
        ("charge", charge),
        ("gauge_field", gauge_field),
        ("momentum", m * velocity),
        ("action", energy * t),
        ("frequency", frequency),
    ];
    QuantityCatalog::from_entries(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}
