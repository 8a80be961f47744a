//! Bare-state potential curves and transition dipole functions.
//!
//! Analytic forms: Morse potentials V(q) = D[1 − exp(−a(q−q₀))]² + V₀ and a
//! sigmoid transition dipole μ(q) = A / (1 + exp(s(q−c))). Tabulated curves
//! are loaded from whitespace-separated text files and represented by
//! natural cubic splines; evaluation outside the tabulated range is an
//! error rather than an extrapolation.
//!
//! All stored parameters and all evaluation arguments are atomic units.

use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::units;

/// Morse potential parameters (atomic units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseParams {
    /// Dissociation depth.
    pub d: f64,
    /// Inverse-length steepness.
    pub a: f64,
    /// Minimum position.
    pub q0: f64,
    /// Energy offset.
    pub v0: f64,
}

impl MorseParams {
    pub fn new(d: f64, a: f64, q0: f64, v0: f64) -> Self {
        assert!(d > 0.0 && a > 0.0, "Morse parameters require D > 0 and a > 0");
        MorseParams { d, a, q0, v0 }
    }

    /// Construct from the table units used in the model definitions
    /// (eV, Å⁻¹, Å, eV).
    pub fn from_ev_angstrom(d_ev: f64, a_per_angstrom: f64, q0_angstrom: f64, v0_ev: f64) -> Self {
        MorseParams::new(
            units::ev(d_ev),
            units::per_angstrom(a_per_angstrom),
            units::angstrom(q0_angstrom),
            units::ev(v0_ev),
        )
    }

    pub fn eval(&self, q: f64) -> f64 {
        let u = 1.0 - (-self.a * (q - self.q0)).exp();
        self.d * u * u + self.v0
    }

    pub fn eval_deriv(&self, q: f64) -> f64 {
        let e = (-self.a * (q - self.q0)).exp();
        2.0 * self.d * self.a * (1.0 - e) * e
    }

    /// Harmonic frequency ω = a·sqrt(2D/m).
    pub fn frequency(&self, mass: f64) -> f64 {
        self.a * (2.0 * self.d / mass).sqrt()
    }

    /// Number of bound vibrational levels: n + ½ < sqrt(2mD)/a.
    pub fn bound_state_count(&self, mass: f64) -> usize {
        let lambda = (2.0 * mass * self.d).sqrt() / self.a;
        if lambda <= 0.5 {
            0
        } else {
            (lambda - 0.5).floor() as usize + 1
        }
    }

    /// Analytic Morse level Eₙ = ω(n+½) − [ω(n+½)]²/(4D) + V₀.
    pub fn eigenvalue(&self, mass: f64, n: usize) -> Result<f64> {
        if n >= self.bound_state_count(mass) {
            return Err(Error::InvalidParameter(format!(
                "Morse level n = {n} above the highest bound level {}",
                self.bound_state_count(mass).saturating_sub(1)
            )));
        }
        let omega = self.frequency(mass);
        let x = omega * (n as f64 + 0.5);
        Ok(x - x * x / (4.0 * self.d) + self.v0)
    }
}

/// Sigmoid transition dipole parameters (atomic units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmoidDipoleParams {
    pub amplitude: f64,
    pub steepness: f64,
    pub center: f64,
}

impl SigmoidDipoleParams {
    pub fn new(amplitude: f64, steepness: f64, center: f64) -> Self {
        assert!(amplitude.is_finite() && steepness > 0.0);
        SigmoidDipoleParams { amplitude, steepness, center }
    }

    pub fn from_au_angstrom(amplitude_au: f64, steepness_per_angstrom: f64, center_angstrom: f64) -> Self {
        SigmoidDipoleParams::new(
            amplitude_au,
            units::per_angstrom(steepness_per_angstrom),
            units::angstrom(center_angstrom),
        )
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.amplitude / (1.0 + (self.steepness * (q - self.center)).exp())
    }

    pub fn eval_deriv(&self, q: f64) -> f64 {
        let e = (self.steepness * (q - self.center)).exp();
        -self.amplitude * self.steepness * e / ((1.0 + e) * (1.0 + e))
    }
}

/// Natural cubic spline (zero second derivative at both ends) through
/// strictly increasing abscissae.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    y2: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(x: Vec<f64>, y: Vec<f64>) -> Result<CubicSpline> {
        if x.len() != y.len() || x.len() < 4 {
            return Err(Error::InvalidParameter(
                "spline needs at least 4 matching samples".into(),
            ));
        }
        for w in x.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParameter(format!(
                    "spline abscissae must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        let n = x.len();
        // Tridiagonal solve for the second derivatives, natural boundary.
        let mut y2 = vec![0.0; n];
        let mut u = vec![0.0; n];
        for i in 1..n - 1 {
            let sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
            let p = sig * y2[i - 1] + 2.0;
            y2[i] = (sig - 1.0) / p;
            let d = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) - (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
            u[i] = (6.0 * d / (x[i + 1] - x[i - 1]) - sig * u[i - 1]) / p;
        }
        y2[n - 1] = 0.0;
        for i in (0..n - 1).rev() {
            y2[i] = y2[i] * y2[i + 1] + u[i];
        }
        Ok(CubicSpline { x, y, y2 })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    pub fn eval(&self, q: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if q < lo || q > hi {
            return Err(Error::OutOfRange { q, min: lo, max: hi });
        }
        let mut k = match self.x.binary_search_by(|v| v.partial_cmp(&q).unwrap()) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        if k >= self.x.len() - 1 {
            k = self.x.len() - 2;
        }
        let h = self.x[k + 1] - self.x[k];
        let a = (self.x[k + 1] - q) / h;
        let b = (q - self.x[k]) / h;
        Ok(a * self.y[k]
            + b * self.y[k + 1]
            + ((a * a * a - a) * self.y2[k] + (b * b * b - b) * self.y2[k + 1]) * h * h / 6.0)
    }
}

/// A one-dimensional curve: analytic, constant, or tabulated.
#[derive(Debug, Clone)]
pub enum Curve {
    Zero,
    Constant(f64),
    Morse(MorseParams),
    Sigmoid(SigmoidDipoleParams),
    Tabulated(CubicSpline),
}

impl Curve {
    pub fn eval(&self, q: f64) -> Result<f64> {
        match self {
            Curve::Zero => Ok(0.0),
            Curve::Constant(c) => Ok(*c),
            Curve::Morse(p) => Ok(p.eval(q)),
            Curve::Sigmoid(p) => Ok(p.eval(q)),
            Curve::Tabulated(s) => s.eval(q),
        }
    }

    pub fn sample(&self, qs: &[f64]) -> Result<Vec<f64>> {
        qs.iter().map(|&q| self.eval(q)).collect()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Curve::Zero)
    }
}

/// Bare two-state molecular system: potentials, dipole functions, and the
/// intrinsic derivative coupling, plus the reduced mass.
#[derive(Debug, Clone)]
pub struct BareSystem {
    pub vg: Curve,
    pub ve: Curve,
    pub mu_eg: Curve,
    /// Permanent dipole of the lower state; zero unless tabulated input
    /// provides it.
    pub mu_gg: Curve,
    /// Permanent dipole of the upper state; zero unless provided.
    pub mu_ee: Curve,
    /// Bare-state derivative coupling; zero for the built-in models where
    /// the bare states are well separated.
    pub f_ge: Curve,
    /// Reduced mass in a.u.
    pub mass: f64,
}

impl BareSystem {
    pub fn new(vg: Curve, ve: Curve, mu_eg: Curve, mass: f64) -> Self {
        assert!(mass > 0.0);
        BareSystem {
            vg,
            ve,
            mu_eg,
            mu_gg: Curve::Zero,
            mu_ee: Curve::Zero,
            f_ge: Curve::Zero,
            mass,
        }
    }

    /// Load a tabulated system. Format: comment lines start with `#`; the
    /// first two must declare the columns and their units,
    ///
    /// ```text
    /// # q Vg Ve [mu_eg] [mu_gg] [mu_ee] [f_ge]
    /// # units: angstrom eV au
    /// ```
    ///
    /// followed by whitespace-separated numeric rows with a strictly
    /// increasing first column. Missing optional columns default to zero.
    pub fn load_tabulated<P: AsRef<Path>>(path: P, mass: f64) -> Result<BareSystem> {
        let path_str = path.as_ref().display().to_string();
        let file = std::fs::File::open(path.as_ref())?;
        let reader = std::io::BufReader::new(file);

        let parse_err = |line: usize, msg: String| Error::Parse {
            path: path_str.clone(),
            line,
            msg,
        };

        let mut length_to_au = units::angstrom(1.0);
        let mut energy_to_au = units::ev(1.0);
        let mut units_seen = false;
        let mut columns: Vec<Vec<f64>> = Vec::new();
        let mut n_cols = 0usize;

        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(spec) = rest.strip_prefix("units:") {
                    let toks: Vec<&str> = spec.split_whitespace().collect();
                    if toks.len() < 3 {
                        return Err(parse_err(
                            lineno,
                            "units line needs three tokens: <length> <energy> <dipole>".into(),
                        ));
                    }
                    length_to_au = match toks[0] {
                        "angstrom" => units::angstrom(1.0),
                        "bohr" => 1.0,
                        other => {
                            return Err(parse_err(lineno, format!("unknown length unit '{other}'")))
                        }
                    };
                    energy_to_au = match toks[1] {
                        "eV" | "ev" => units::ev(1.0),
                        "meV" | "mev" => units::mev(1.0),
                        "hartree" => 1.0,
                        other => {
                            return Err(parse_err(lineno, format!("unknown energy unit '{other}'")))
                        }
                    };
                    if toks[2] != "au" {
                        return Err(parse_err(
                            lineno,
                            format!("dipole/coupling unit must be 'au', got '{}'", toks[2]),
                        ));
                    }
                    units_seen = true;
                }
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if n_cols == 0 {
                n_cols = fields.len();
                if !(3..=7).contains(&n_cols) {
                    return Err(parse_err(
                        lineno,
                        format!("expected 3 to 7 columns (q Vg Ve [mu_eg] [mu_gg] [mu_ee] [f_ge]), got {n_cols}"),
                    ));
                }
                columns = vec![Vec::new(); n_cols];
            } else if fields.len() != n_cols {
                return Err(parse_err(
                    lineno,
                    format!("row has {} fields, expected {n_cols}", fields.len()),
                ));
            }
            for (c, tok) in fields.iter().enumerate() {
                let v: f64 = tok.parse().map_err(|_| {
                    parse_err(lineno, format!("non-numeric field '{tok}' in column {}", c + 1))
                })?;
                columns[c].push(v);
            }
            let qcol = &columns[0];
            if qcol.len() >= 2 {
                let last = qcol[qcol.len() - 1];
                let prev = qcol[qcol.len() - 2];
                if last == prev {
                    return Err(parse_err(lineno, format!("duplicate grid value q = {last}")));
                }
                if last < prev {
                    return Err(parse_err(
                        lineno,
                        format!("grid column must be monotonically increasing ({prev} then {last})"),
                    ));
                }
            }
        }

        if !units_seen {
            return Err(parse_err(1, "missing '# units: <length> <energy> au' header".into()));
        }
        if columns.is_empty() || columns[0].len() < 4 {
            return Err(parse_err(1, "need at least 4 data rows".into()));
        }

        let q: Vec<f64> = columns[0].iter().map(|&v| v * length_to_au).collect();
        let energy = |col: &Vec<f64>| -> Vec<f64> { col.iter().map(|&v| v * energy_to_au).collect() };

        let spline = |ys: Vec<f64>| CubicSpline::natural(q.clone(), ys).map(Curve::Tabulated);
        let vg = spline(energy(&columns[1]))?;
        let ve = spline(energy(&columns[2]))?;
        let opt = |i: usize| -> Result<Curve> {
            if n_cols > i {
                // Dipoles and couplings are already atomic units; the
                // coupling carries 1/length which follows the length unit.
                let scale = if i == 6 { 1.0 / length_to_au } else { 1.0 };
                spline(columns[i].iter().map(|&v| v * scale).collect())
            } else {
                Ok(Curve::Zero)
            }
        };
        Ok(BareSystem {
            vg,
            ve,
            mu_eg: opt(3)?,
            mu_gg: opt(4)?,
            mu_ee: opt(5)?,
            f_ge: opt(6)?,
            mass,
        })
    }
}

/// Reduced mass used by all diatomic model systems (a.u.).
pub const MODEL_MASS: f64 = 3650.0;

/// S0 Morse parameters of the diatomic models: D = 3 eV, a = 1 Å⁻¹,
/// q₀ = 2 Å, V₀ = 0.
pub fn morse_s0() -> MorseParams {
    MorseParams::from_ev_angstrom(3.0, 1.0, 2.0, 0.0)
}

/// S1 Morse parameters: D = 0.01 eV, a = 2.43 Å⁻¹, q₀ = 2.5 Å, V₀ = 3 eV.
pub fn morse_s1() -> MorseParams {
    MorseParams::from_ev_angstrom(0.01, 2.43, 2.5, 3.0)
}

/// S2 Morse parameters: D = 3 eV, a = 1 Å⁻¹, q₀ = 2.3 Å, V₀ = 4.5 eV.
pub fn morse_s2() -> MorseParams {
    MorseParams::from_ev_angstrom(3.0, 1.0, 2.3, 4.5)
}

/// Shared transition dipole μ(q) = 4 / (1 + exp[2.4575 (q − 4.232)]),
/// q in Å.
pub fn model_dipole() -> SigmoidDipoleParams {
    SigmoidDipoleParams::from_au_angstrom(4.0, 2.4575, 4.232)
}

/// Photonic-catalyst bare pair: |g⟩ ≡ S1 (flat, dissociative), |e⟩ ≡ S2
/// (bound), coupled by the sigmoid dipole. S0 only enters through the
/// doorway preparation.
pub fn catalyst_system() -> BareSystem {
    BareSystem::new(
        Curve::Morse(morse_s1()),
        Curve::Morse(morse_s2()),
        Curve::Sigmoid(model_dipole()),
        MODEL_MASS,
    )
}

/// Photonic-bound-state bare pair: |g⟩ ≡ S0 (bound), |e⟩ ≡ S1
/// (dissociative).
pub fn bound_system() -> BareSystem {
    BareSystem::new(
        Curve::Morse(morse_s0()),
        Curve::Morse(morse_s1()),
        Curve::Sigmoid(model_dipole()),
        MODEL_MASS,
    )
}

/// Synthetic two-mode surfaces reproducing the photoinduced conical
/// intersection mechanism: an electronic gap that is resonant at the
/// symmetric configuration and a transition dipole that is odd in both
/// modes, so coupling and detuning vanish together at the origin.
///
/// Coordinates are dimensionless symmetry-breaking displacements; energies
/// are stored in atomic units.
#[derive(Debug, Clone, Copy)]
pub struct TwoModeCoInModel {
    /// Ground-state curvature.
    pub k_g: f64,
    /// Vertical gap at the origin.
    pub delta_e: f64,
    /// Quartic coefficient of the excited double minimum along q1.
    pub alpha: f64,
    /// Negative quadratic coefficient along q1.
    pub beta: f64,
    /// Excited-state curvature along q2.
    pub k_e: f64,
    /// Dipole slope along q1 (a.u. per unit displacement).
    pub c1: f64,
    /// Dipole slope along q2.
    pub c2: f64,
}

impl Default for TwoModeCoInModel {
    fn default() -> Self {
        TwoModeCoInModel {
            k_g: units::ev(1.0),
            delta_e: units::ev(4.0),
            alpha: units::ev(0.5),
            beta: units::ev(0.5),
            k_e: units::ev(1.2),
            c1: 1.0,
            c2: 1.0,
        }
    }
}

impl TwoModeCoInModel {
    pub fn vg(&self, q1: f64, q2: f64) -> f64 {
        0.5 * self.k_g * (q1 * q1 + q2 * q2)
    }

    pub fn ve(&self, q1: f64, q2: f64) -> f64 {
        self.delta_e + self.alpha * q1.powi(4) - self.beta * q1 * q1 + 0.5 * self.k_e * q2 * q2
    }

    /// Transition dipole, odd under q1 → −q1 and q2 → −q2; vanishes at the
    /// symmetric configuration.
    pub fn mu(&self, q1: f64, q2: f64) -> f64 {
        self.c1 * q1 + self.c2 * q2
    }

    /// Resonant cavity frequency for the origin gap.
    pub fn resonant_omega_c(&self) -> f64 {
        self.delta_e
    }
}
