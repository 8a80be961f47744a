//! Unit conversions between user-facing units and internal atomic units.
//!
//! Everything inside the engine is expressed in Hartree atomic units
//! (ħ = mₑ = 4πε₀ = 1). Conversions happen only at I/O boundaries.
//!
//! Constants are pinned to CODATA 2014:
//!
//! | constant           | value                      |
//! |--------------------|----------------------------|
//! | 1 hartree          | 27.21138602 eV             |
//! | 1 bohr             | 0.52917721067 Å            |
//! | 1 a.u. of time     | 0.02418884326509 fs        |

use crate::error::{Error, Result};

/// 1 hartree in electron volts (CODATA 2014).
pub const HARTREE_EV: f64 = 27.211_386_02;
/// 1 bohr in ångström (CODATA 2014).
pub const BOHR_ANGSTROM: f64 = 0.529_177_210_67;
/// 1 atomic unit of time in femtoseconds (CODATA 2014).
pub const AU_TIME_FS: f64 = 0.024_188_843_265_09;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Hartree,
    ElectronVolt,
    MilliElectronVolt,
    Bohr,
    Angstrom,
    AuTime,
    Femtosecond,
    Picosecond,
    AuDipole,
    AuMass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Energy,
    Length,
    Time,
    Dipole,
    Mass,
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        use Unit::*;
        match self {
            Hartree | ElectronVolt | MilliElectronVolt => Dimension::Energy,
            Bohr | Angstrom => Dimension::Length,
            AuTime | Femtosecond | Picosecond => Dimension::Time,
            AuDipole => Dimension::Dipole,
            AuMass => Dimension::Mass,
        }
    }

    pub fn name(self) -> &'static str {
        use Unit::*;
        match self {
            Hartree => "hartree",
            ElectronVolt => "eV",
            MilliElectronVolt => "meV",
            Bohr => "bohr",
            Angstrom => "angstrom",
            AuTime => "au_time",
            Femtosecond => "fs",
            Picosecond => "ps",
            AuDipole => "au_dipole",
            AuMass => "au_mass",
        }
    }

    /// Multiplying a value in this unit by the factor yields atomic units.
    fn to_atomic_factor(self) -> f64 {
        use Unit::*;
        match self {
            Hartree => 1.0,
            ElectronVolt => 1.0 / HARTREE_EV,
            MilliElectronVolt => 1.0e-3 / HARTREE_EV,
            Bohr => 1.0,
            Angstrom => 1.0 / BOHR_ANGSTROM,
            AuTime => 1.0,
            Femtosecond => 1.0 / AU_TIME_FS,
            Picosecond => 1.0e3 / AU_TIME_FS,
            AuDipole => 1.0,
            AuMass => 1.0,
        }
    }
}

/// Convert `value` from one unit to a dimensionally compatible one.
pub fn convert(value: f64, from: Unit, to: Unit) -> Result<f64> {
    if from.dimension() != to.dimension() {
        return Err(Error::IncompatibleUnits {
            from: from.name(),
            to: to.name(),
        });
    }
    if from == to {
        return Ok(value);
    }
    Ok(value * from.to_atomic_factor() / to.to_atomic_factor())
}

/// A value tagged with its unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Quantity { value, unit }
    }

    pub fn to(self, unit: Unit) -> Result<Quantity> {
        Ok(Quantity::new(convert(self.value, self.unit, unit)?, unit))
    }

    /// The value expressed in atomic units.
    pub fn atomic(self) -> f64 {
        self.value * self.unit.to_atomic_factor()
    }
}

// Shorthands used throughout the crate; all return atomic units.

pub fn ev(x: f64) -> f64 {
    x / HARTREE_EV
}

pub fn mev(x: f64) -> f64 {
    x * 1.0e-3 / HARTREE_EV
}

pub fn angstrom(x: f64) -> f64 {
    x / BOHR_ANGSTROM
}

pub fn fs(x: f64) -> f64 {
    x / AU_TIME_FS
}

pub fn to_ev(x: f64) -> f64 {
    x * HARTREE_EV
}

pub fn to_angstrom(x: f64) -> f64 {
    x * BOHR_ANGSTROM
}

pub fn to_fs(x: f64) -> f64 {
    x * AU_TIME_FS
}

/// Inverse length: Å⁻¹ to bohr⁻¹.
pub fn per_angstrom(x: f64) -> f64 {
    x * BOHR_ANGSTROM
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [Unit; 10] = [
        Unit::Hartree,
        Unit::ElectronVolt,
        Unit::MilliElectronVolt,
        Unit::Bohr,
        Unit::Angstrom,
        Unit::AuTime,
        Unit::Femtosecond,
        Unit::Picosecond,
        Unit::AuDipole,
        Unit::AuMass,
    ];

    #[test]
    fn identity_conversion() {
        assert_eq!(convert(1.0, Unit::ElectronVolt, Unit::ElectronVolt).unwrap(), 1.0);
    }

    #[test]
    fn hartree_to_ev_codata() {
        let x = convert(1.0, Unit::Hartree, Unit::ElectronVolt).unwrap();
        assert!((x - 27.21138602).abs() < 1e-12);
    }

    #[test]
    fn au_time_codata() {
        // 0.024188843 fs is the CODATA atomic time unit rounded to 8 digits,
        // so the conversion lands on 1.0 to ~1e-8.
        let x = convert(0.024188843, Unit::Femtosecond, Unit::AuTime).unwrap();
        assert!((x - 1.0).abs() < 2e-8, "got {x}");
    }

    #[test]
    fn round_trip_all_pairs() {
        for &a in &ALL {
            for &b in &ALL {
                if a.dimension() != b.dimension() {
                    continue;
                }
                let x = 1.234567890123;
                let y = convert(convert(x, a, b).unwrap(), b, a).unwrap();
                assert!(
                    (y - x).abs() <= 1e-14 * x.abs(),
                    "round trip {} -> {} failed: {y} vs {x}",
                    a.name(),
                    b.name()
                );
            }
        }
    }

    #[test]
    fn composition_within_dimension() {
        use Unit::*;
        let triples = [
            (Hartree, ElectronVolt, MilliElectronVolt),
            (Bohr, Angstrom, Bohr),
            (AuTime, Femtosecond, Picosecond),
        ];
        for &(a, b, c) in &triples {
            let x = 0.7891011;
            let direct = convert(x, a, c).unwrap();
            let via = convert(convert(x, a, b).unwrap(), b, c).unwrap();
            assert!((direct - via).abs() <= 1e-14 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn incompatible_dimensions_error() {
        assert!(convert(1.0, Unit::ElectronVolt, Unit::Angstrom).is_err());
        assert!(convert(1.0, Unit::Femtosecond, Unit::Hartree).is_err());
        assert!(convert(1.0, Unit::AuMass, Unit::AuDipole).is_err());
    }

    #[test]
    fn quantity_api() {
        let e = Quantity::new(54.0, Unit::MilliElectronVolt);
        assert!((e.atomic() - 0.054 / HARTREE_EV).abs() < 1e-18);
        let in_ev = e.to(Unit::ElectronVolt).unwrap();
        assert!((in_ev.value - 0.054).abs() < 1e-15);
    }
}
