//! Dimensional analysis over the base units mass `m`, semantic distance `x`
//! and semantic time `t`, with exact rational exponents.

mod catalog;
mod parse;

use std::fmt;
use std::ops::{Div, Mul};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use catalog::{derive_catalog, dimension_of, QuantityCatalog, CATALOG_NAMES};
pub use parse::{parse_expression, parse_identity, Identity};

/// Exponents `(m, x, t)`. Rationals are kept in lowest terms, so equality is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "DimensionRepr", try_from = "DimensionRepr")]
pub struct Dimension {
    pub mass: Rational64,
    pub length: Rational64,
    pub time: Rational64,
}

#[derive(Serialize, Deserialize)]
struct DimensionRepr {
    m: String,
    x: String,
    t: String,
}

impl From<Dimension> for DimensionRepr {
    fn from(d: Dimension) -> Self {
        DimensionRepr { m: d.mass.to_string(), x: d.length.to_string(), t: d.time.to_string() }
    }
}

impl TryFrom<DimensionRepr> for Dimension {
    type Error = Error;

    fn try_from(r: DimensionRepr) -> Result<Self> {
        let parse = |s: &str| s.parse::<Rational64>().map_err(|e| Error::Parse(format!("bad exponent {s:?}: {e}")));
        Ok(Dimension::new(parse(&r.m)?, parse(&r.x)?, parse(&r.t)?))
    }
}

fn r(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

impl Dimension {
    pub const DIMENSIONLESS: Dimension = Dimension {
        mass: Rational64::new_raw(0, 1),
        length: Rational64::new_raw(0, 1),
        time: Rational64::new_raw(0, 1),
    };

    pub fn new(mass: Rational64, length: Rational64, time: Rational64) -> Self {
        Dimension { mass, length, time }
    }

    /// Integer exponents.
    pub fn integer(mass: i64, length: i64, time: i64) -> Self {
        Dimension::new(r(mass), r(length), r(time))
    }

    pub fn mass() -> Self {
        Dimension::integer(1, 0, 0)
    }

    pub fn length() -> Self {
        Dimension::integer(0, 1, 0)
    }

    pub fn time() -> Self {
        Dimension::integer(0, 0, 1)
    }

    pub fn pow(self, p: Rational64) -> Self {
        Dimension::new(self.mass * p, self.length * p, self.time * p)
    }

    pub fn powi(self, p: i64) -> Self {
        self.pow(r(p))
    }

    pub fn sqrt(self) -> Self {
        self.pow(Rational64::new(1, 2))
    }

    pub fn recip(self) -> Self {
        self.powi(-1)
    }

    pub fn is_dimensionless(&self) -> bool {
        *self == Self::DIMENSIONLESS
    }

    pub fn exponents(&self) -> [Rational64; 3] {
        [self.mass, self.length, self.time]
    }
}

impl Default for Dimension {
    fn default() -> Self {
        Self::DIMENSIONLESS
    }
}

impl Mul for Dimension {
    type Output = Dimension;

    fn mul(self, o: Dimension) -> Dimension {
        Dimension::new(self.mass + o.mass, self.length + o.length, self.time + o.time)
    }
}

impl Div for Dimension {
    type Output = Dimension;

    fn div(self, o: Dimension) -> Dimension {
        Dimension::new(self.mass - o.mass, self.length - o.length, self.time - o.time)
    }
}

pub fn dim_mul(a: Dimension, b: Dimension) -> Dimension {
    a * b
}

pub fn dim_div(a: Dimension, b: Dimension) -> Dimension {
    a / b
}

pub fn dim_pow(a: Dimension, p: Rational64) -> Dimension {
    a.pow(p)
}

impl fmt::Display for Dimension {
    /// `m^(1/2) x^(1/2) t^-1`; `1` when dimensionless.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (sym, e) in [("m", self.mass), ("x", self.length), ("t", self.time)] {
            if e == r(0) {
                continue;
            }
            if e == r(1) {
                parts.push(sym.to_string());
            } else if e.is_integer() {
                parts.push(format!("{sym}^{e}"));
            } else {
                parts.push(format!("{sym}^({e})"));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Outcome of comparing two dimensions; `delta = lhs / rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub holds: bool,
    pub lhs: Dimension,
    pub rhs: Dimension,
    pub delta: Dimension,
}

pub fn check_identity(lhs: Dimension, rhs: Dimension) -> IdentityReport {
    let delta = lhs / rhs;
    IdentityReport { holds: delta.is_dimensionless(), lhs, rhs, delta }
}

/// True when every additive term reduces to one dimension.
pub fn check_equation_terms(terms: &[Dimension]) -> Result<bool> {
    if terms.len() < 2 {
        return Err(Error::invalid(format!("need at least two terms, got {}", terms.len())));
    }
    Ok(terms.iter().all(|t| *t == terms[0]))
}

/// Dimensions that depend on the number `n` of embedding-space dimensions.
///
/// The matter Lagrangian density is an energy density `E/xⁿ`; requiring
/// `|Dψ|²` (with dimensionless `ψ`) to carry it fixes `[D] = √(E/xⁿ)`, and
/// `[q]/[x] = [D]` gives `[q]² = E·x^(2−n)`. With `n = 3` this is the
/// catalog's `E/x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpatialDimension(pub i64);

impl SpatialDimension {
    fn energy() -> Dimension {
        Dimension::integer(1, 2, -2)
    }

    pub fn energy_density(self) -> Dimension {
        Self::energy() / Dimension::length().powi(self.0)
    }

    pub fn covariant_derivative(self) -> Dimension {
        self.energy_density().sqrt()
    }

    pub fn charge(self) -> Dimension {
        self.covariant_derivative() * Dimension::length()
    }

    /// `[A] = 1/([q][x])`.
    pub fn gauge_field(self) -> Dimension {
        (self.charge() * Dimension::length()).recip()
    }

    /// Spatial part of `F₀₁`: `∂ₓA₀`.
    pub fn field_strength_spatial(self) -> Dimension {
        self.gauge_field() / Dimension::length()
    }

    /// Temporal part of `F₀₁`: `∂ₜA₁`.
    pub fn field_strength_temporal(self) -> Dimension {
        self.gauge_field() / Dimension::time()
    }

    /// `F₀₁²/q²` built from the spatial part.
    pub fn field_term(self) -> Dimension {
        self.field_strength_spatial().powi(2) / self.charge().powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn arithmetic_examples() {
        let x = Dimension::length();
        assert_eq!(dim_mul(x, x), Dimension::integer(0, 2, 0));
        let mx = Dimension::mass() * x;
        assert_eq!(dim_pow(mx, q(1, 2)), Dimension::new(q(1, 2), q(1, 2), r(0)));
        let e = Dimension::integer(1, 2, -2);
        assert_eq!(dim_div(e, x), Dimension::integer(1, 1, -2));
    }

    #[test]
    fn rationals_are_reduced() {
        let d = Dimension::new(q(2, 4), q(-6, 3), q(0, 5));
        assert_eq!(d, Dimension::new(q(1, 2), r(-2), r(0)));
        assert_eq!(*d.mass.denom(), 2);
    }

    #[test]
    fn display_and_json() {
        let d = Dimension::new(q(1, 2), q(1, 2), r(-1));
        assert_eq!(d.to_string(), "m^(1/2) x^(1/2) t^-1");
        assert_eq!(Dimension::DIMENSIONLESS.to_string(), "1");
        assert_eq!(Dimension::integer(1, 2, -2).to_string(), "m x^2 t^-2");
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"m":"1/2","x":"1/2","t":"-1"}"#);
        assert_eq!(serde_json::from_str::<Dimension>(&json).unwrap(), d);
        assert!(serde_json::from_str::<Dimension>(r#"{"m":"1/0","x":"0","t":"0"}"#).is_err());
    }

    #[test]
    fn mismatch_delta() {
        let hbar = Dimension::integer(1, 2, -1);
        let e = Dimension::integer(1, 2, -2);
        let rep = check_identity(hbar, e);
        assert!(!rep.holds);
        assert_eq!(rep.delta, Dimension::integer(0, 0, 1));
    }

    #[test]
    fn equation_terms() {
        let e = Dimension::integer(1, 2, -2);
        let charge = Dimension::new(q(1, 2), q(1, 2), r(-1));
        assert!(!check_equation_terms(&[e, charge]).unwrap());
        assert!(check_equation_terms(&[e, e, e]).unwrap());
        assert!(check_equation_terms(&[e]).is_err());
        assert!(check_equation_terms(&[]).is_err());
    }

    #[test]
    fn n_general_charge() {
        assert_eq!(SpatialDimension(3).charge(), Dimension::new(q(1, 2), q(1, 2), r(-1)));
        // q² = E·x^(2−n)
        for n in 0..6 {
            let expected = Dimension::integer(1, 2, -2) * Dimension::length().powi(2 - n);
            assert_eq!(SpatialDimension(n).charge().powi(2), expected);
        }
    }

    fn arb_dim() -> impl Strategy<Value = Dimension> {
        let rat = (-12i64..12, 1i64..7).prop_map(|(n, d)| Rational64::new(n, d));
        (rat.clone(), rat.clone(), rat).prop_map(|(a, b, c)| Dimension::new(a, b, c))
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_dim(), b in arb_dim(), c in arb_dim(), p in (-6i64..6, 1i64..5)) {
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * b, b * a);
            prop_assert!(a.pow(r(0)).is_dimensionless());
            prop_assert!((a * a.recip()).is_dimensionless());
            prop_assert_eq!((a * b) / b, a);
            let p = Rational64::new(p.0, p.1);
            prop_assert_eq!((a * b).pow(p), a.pow(p) * b.pow(p));
        }
    }
}
