//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible units: cannot convert {from} to {to}")]
    IncompatibleUnits { from: &'static str, to: &'static str },

    #[error("curve evaluation outside tabulated range: q = {q} not in [{min}, {max}]")]
    OutOfRange { q: f64, min: f64, max: f64 },

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular coupling at {count} grid point(s), first at q = {first_q} bohr")]
    Singular { count: usize, first_q: f64 },

    #[error("Krylov subspace reached dimension {dim} without converging to {tol:e}; reduce the time step")]
    KrylovStall { dim: usize, tol: f64 },

    #[error("ground-state relaxation: grid diagonalization and imaginary-time propagation disagree ({fgh} vs {itp} hartree)")]
    RelaxationMismatch { fgh: f64, itp: f64 },

    #[error("fit did not converge: {0}")]
    Fit(String),

    #[error("probe window [{t_min:.1}, {t_max:.1}] fs exceeds propagated horizon {horizon:.1} fs")]
    ProbeWindow { t_min: f64, t_max: f64, horizon: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("validation: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
