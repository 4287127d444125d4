//! Built-in example maps, each paired with the open set on which its
//! height expansion is measured.

use std::fmt;
use std::str::FromStr;

use crate::dynamics::{AffineAutomorphism, ExclusionSet};
use crate::error::{Error, Result};
use crate::map::RationalMap;
use crate::parse::{parse_forms, parse_map};

/// `[X0^2, X1^2, X0*X2]`, fixing every `[a, a, b]`.
pub fn intro_xyz() -> RationalMap {
    parse_map("X0^2; X1^2; X0*X2").expect("valid built-in")
}

/// Coordinatewise inversion `[1/X0, ..., 1/Xn]`, cleared of denominators:
/// coordinate `i` is the product of all variables except `Xi`.
pub fn inversion(n: usize) -> RationalMap {
    let coords: Vec<String> = (0..=n)
        .map(|i| {
            (0..=n)
                .filter(|&j| j != i)
                .map(|j| format!("X{j}"))
                .collect::<Vec<_>>()
                .join("*")
        })
        .collect();
    parse_map(&coords.join("; ")).expect("valid built-in")
}

/// `[X0^d, ..., Xn^d]`.
pub fn power(n: usize, d: u32) -> RationalMap {
    let coords: Vec<String> = (0..=n).map(|i| format!("X{i}^{d}")).collect();
    parse_map(&coords.join("; ")).expect("valid built-in")
}

/// Hénon map `(x, y) -> (y, y^2 + c - x)` on the chart `X0 = 1` of `P^2`,
/// with inverse `(x, y) -> (x^2 + c - y, x)`. Both indeterminacy loci are
/// single points at infinity, so the declared dimensions are `(0, 0)`.
pub fn henon(c: i64) -> Result<AffineAutomorphism> {
    let fwd = parse_map(&format!("X0^2; X0*X2; X2^2 + {c}*X0^2 - X0*X1").replace("+ -", "- "))?;
    let inv = parse_map(&format!("X0^2; X1^2 + {c}*X0^2 - X0*X2; X0*X1").replace("+ -", "- "))?;
    AffineAutomorphism::new(fwd, inv, Some((0, 0)), 0)
}

/// Names accepted by `--builtin`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    IntroXyz,
    InversionN2,
    InversionN3,
    HenonC1,
    HenonC3,
    PowerD2,
}

impl Builtin {
    pub const ALL: [Builtin; 6] = [
        Builtin::IntroXyz,
        Builtin::InversionN2,
        Builtin::InversionN3,
        Builtin::HenonC1,
        Builtin::HenonC3,
        Builtin::PowerD2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::IntroXyz => "intro-xyz",
            Builtin::InversionN2 => "inversion-n2",
            Builtin::InversionN3 => "inversion-n3",
            Builtin::HenonC1 => "henon-c1",
            Builtin::HenonC3 => "henon-c3",
            Builtin::PowerD2 => "power-d2",
        }
    }

    /// The forward map.
    pub fn map(self) -> RationalMap {
        match self {
            Builtin::IntroXyz => intro_xyz(),
            Builtin::InversionN2 => inversion(2),
            Builtin::InversionN3 => inversion(3),
            Builtin::HenonC1 => henon(1).expect("valid built-in").fwd().clone(),
            Builtin::HenonC3 => henon(3).expect("valid built-in").fwd().clone(),
            Builtin::PowerD2 => power(2, 2),
        }
    }

    pub fn automorphism(self) -> Option<AffineAutomorphism> {
        match self {
            Builtin::HenonC1 => henon(1).ok(),
            Builtin::HenonC3 => henon(3).ok(),
            _ => None,
        }
    }

    /// The open set shipped with each example.
    pub fn exclusion(self) -> ExclusionSet {
        let forms = match self {
            Builtin::IntroXyz => "X0",
            Builtin::InversionN2 => "X0*X1*X2",
            Builtin::InversionN3 => "X0*X1*X2*X3",
            Builtin::HenonC1 | Builtin::HenonC3 => "X0",
            Builtin::PowerD2 => "",
        };
        let nvars = self.map().n() + 1;
        ExclusionSet::new(parse_forms(forms, nvars).expect("valid built-in"))
            .expect("valid built-in")
    }

    /// Known value of `mu` on the shipped open set, as `(value, exact)`.
    /// For the intro map only the lower bound `mu >= 1` is known in closed
    /// form, so it is reported with `exact = false`.
    pub fn expected_mu(self) -> (f64, bool) {
        match self {
            Builtin::IntroXyz => (1.0, false),
            Builtin::InversionN2 => (0.5, true),
            Builtin::InversionN3 => (1.0 / 3.0, true),
            Builtin::HenonC1 | Builtin::HenonC3 => (0.5, true),
            Builtin::PowerD2 => (2.0, true),
        }
    }

    pub fn is_inversion(self) -> bool {
        matches!(self, Builtin::InversionN2 | Builtin::InversionN3)
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Builtin::ALL.iter().map(|b| b.name()).collect();
                Error::InvalidInput(format!(
                    "unknown builtin '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_maps() {
        assert_eq!(inversion(2).to_string(), "X1*X2; X0*X2; X0*X1");
        assert_eq!(inversion(3).degree(), 3);
    }

    #[test]
    fn henon_maps() {
        let a = henon(1).unwrap();
        assert_eq!(a.fwd().to_string(), "X0^2; X0*X2; X0^2 - X0*X1 + X2^2");
        assert_eq!(a.inv().to_string(), "X0^2; X0^2 - X0*X2 + X1^2; X0*X1");
        let a = henon(-2).unwrap();
        assert_eq!(a.fwd().to_string(), "X0^2; X0*X2; -2*X0^2 - X0*X1 + X2^2");
    }

    #[test]
    fn names_round_trip() {
        for b in Builtin::ALL {
            assert_eq!(b.name().parse::<Builtin>().unwrap(), b);
            assert!(b.exclusion().polys().iter().all(|p| p.nvars() == b.map().n() + 1));
        }
        assert!("nope".parse::<Builtin>().is_err());
    }
}
