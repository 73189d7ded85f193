//! Drude metal, constant-permittivity surroundings and the dimensionless
//! unit system (frequencies in ω_p, wavevectors in ω_p/c).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrudeParams {
    pub eps_inf: f64,
    /// ħω_p in eV.
    pub omega_p_ev: f64,
    /// Relaxation time in units of 1/ω_p; `None` means lossless.
    #[serde(default)]
    pub tau: Option<f64>,
}

impl DrudeParams {
    pub fn silver() -> Self {
        Self { eps_inf: 9.6, omega_p_ev: 3.76, tau: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_inf > 0.0) {
            return Err(Error::InvalidInput("eps_inf must be positive".into()));
        }
        if !(self.omega_p_ev > 0.0) {
            return Err(Error::InvalidInput("omega_p must be positive".into()));
        }
        if let Some(t) = self.tau {
            if !(t > 0.0) {
                return Err(Error::InvalidInput("tau must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn is_lossless(&self) -> bool {
        self.tau.is_none_or(|t| t.is_infinite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuterMedium {
    pub eps_o: f64,
}

impl OuterMedium {
    pub fn gallium_nitride() -> Self {
        Self { eps_o: 5.3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireGeometry {
    /// Radius in units of c/ω_p.
    pub radius: f64,
}

impl WireGeometry {
    pub fn radius_nm(&self, units: &UnitSystem) -> f64 {
        self.radius * units.unit_length_nm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitSystem {
    /// ħω_p in eV.
    pub hbar_omega_p_ev: f64,
    /// Length of c/ω_p in nm.
    pub unit_length_nm: f64,
    /// Free-space exciton decay rate β in units of ω_p.
    pub beta_over_omega_p: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self { hbar_omega_p_ev: 3.76, unit_length_nm: 53.8, beta_over_omega_p: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    ElectronVolt,
    PlasmaFrequency,
    Nanometre,
    PlasmaLength,
    Beta,
}

impl std::str::FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "eV" => Unit::ElectronVolt,
            "ω_p" | "omega_p" | "wp" => Unit::PlasmaFrequency,
            "nm" => Unit::Nanometre,
            "c/ω_p" | "c/omega_p" | "c/wp" => Unit::PlasmaLength,
            "β" | "beta" => Unit::Beta,
            other => return Err(Error::UnknownUnit(other.to_string())),
        })
    }
}

impl Unit {
    fn frequency_in_omega_p(self, u: &UnitSystem) -> Option<f64> {
        match self {
            Unit::ElectronVolt => Some(1.0 / u.hbar_omega_p_ev),
            Unit::PlasmaFrequency => Some(1.0),
            Unit::Beta => Some(u.beta_over_omega_p),
            _ => None,
        }
    }

    fn length_in_nm(self, u: &UnitSystem) -> Option<f64> {
        match self {
            Unit::Nanometre => Some(1.0),
            Unit::PlasmaLength => Some(u.unit_length_nm),
            _ => None,
        }
    }
}

/// Linear rescaling between units of the same dimension.
pub fn convert_units(value: f64, from: Unit, to: Unit, units: &UnitSystem) -> Result<f64> {
    if let (Some(a), Some(b)) = (from.frequency_in_omega_p(units), to.frequency_in_omega_p(units)) {
        return Ok(value * a / b);
    }
    if let (Some(a), Some(b)) = (from.length_in_nm(units), to.length_in_nm(units)) {
        return Ok(value * a / b);
    }
    Err(Error::Domain(format!("cannot convert {from:?} to {to:?}")))
}

/// Drude permittivity at `omega` given in units of ω_p.
pub fn drude_epsilon(params: &DrudeParams, omega: Complex64) -> Result<Complex64> {
    if omega == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("Drude permittivity diverges at zero frequency".into()));
    }
    let damping = match params.tau {
        Some(t) if t.is_finite() => Complex64::new(0.0, 1.0 / t),
        _ => Complex64::new(0.0, 0.0),
    };
    Ok(params.eps_inf * (1.0 - 1.0 / (omega * (omega + damping))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn drude_zero_at_plasma_frequency() {
        let e = drude_epsilon(&DrudeParams::silver(), c(1.0, 0.0)).unwrap();
        assert!(e.norm() < 1e-15);
    }

    #[test]
    fn drude_high_frequency_limit() {
        let e = drude_epsilon(&DrudeParams::silver(), c(1e9, 0.0)).unwrap();
        assert!((e.re - 9.6).abs() < 1e-12);
    }

    #[test]
    fn drude_at_surface_plasmon_point() {
        let e = drude_epsilon(&DrudeParams::silver(), c(std::f64::consts::FRAC_1_SQRT_2, 0.0)).unwrap();
        assert!((e.re + 9.6).abs() < 1e-12);
    }

    #[test]
    fn drude_rejects_zero() {
        assert!(drude_epsilon(&DrudeParams::silver(), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn unit_examples() {
        let u = UnitSystem::default();
        let ev = convert_units(1.0, Unit::PlasmaFrequency, Unit::ElectronVolt, &u).unwrap();
        assert!((ev - 3.76).abs() < 1e-14);
        let a = convert_units(0.1, Unit::PlasmaLength, Unit::Nanometre, &u).unwrap();
        assert!((a - 5.38).abs() < 1e-12);
        assert!((WireGeometry { radius: 0.1 }.radius_nm(&u) - 5.38).abs() < 1e-12);
        let sat = convert_units(std::f64::consts::FRAC_1_SQRT_2, Unit::PlasmaFrequency, Unit::ElectronVolt, &u).unwrap();
        assert!((sat - 2.66).abs() < 0.005);
    }

    #[test]
    fn unit_tags() {
        assert_eq!("eV".parse::<Unit>().unwrap(), Unit::ElectronVolt);
        assert!(matches!("furlong".parse::<Unit>(), Err(Error::UnknownUnit(_))));
        let u = UnitSystem::default();
        assert!(convert_units(1.0, Unit::Nanometre, Unit::Beta, &u).is_err());
    }

    fn unit() -> impl Strategy<Value = Unit> {
        prop_oneof![
            Just(Unit::ElectronVolt),
            Just(Unit::PlasmaFrequency),
            Just(Unit::Beta),
            Just(Unit::Nanometre),
            Just(Unit::PlasmaLength),
        ]
    }

    proptest! {
        #[test]
        fn conversion_round_trip(x in -1e6f64..1e6, a in unit(), b in unit()) {
            let u = UnitSystem::default();
            if let Ok(y) = convert_units(x, a, b, &u) {
                let back = convert_units(y, b, a, &u).unwrap();
                prop_assert!((back - x).abs() <= 1e-14 * x.abs().max(1e-300));
            }
        }

        #[test]
        fn drude_reality(re in 0.05f64..3.0, im in -0.5f64..0.5, tau in 0.5f64..100.0) {
            let p = DrudeParams { tau: Some(tau), ..DrudeParams::silver() };
            let w = c(re, im);
            let lhs = drude_epsilon(&p, -w.conj()).unwrap();
            let rhs = drude_epsilon(&p, w).unwrap().conj();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        }
    }
}
