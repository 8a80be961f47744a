//! Non-adiabatic coupling fields between the dressed channels.
//!
//! With the eigenvector convention of [`crate::dressing`]
//! (|+⟩ = cosθ|e,0⟩ + sinθ|g,1⟩, |−⟩ = −sinθ|e,0⟩ + cosθ|g,1⟩, θ = ½·atan2(2g, δc)),
//! the polariton derivative coupling is f₋₊ = ⟨−|∂q|+⟩ = dθ/dq:
//!
//! ```text
//! f₋₊ = (δc·∂q g − g·ΔG) / Ω²
//!     = −ΔG/(4g)·(1 − δc²/Ω²) + δc/Ω²·∂q g,      ΔG = ∂q(Ve − Vg)
//! ```
//!
//! i.e. the gradient-difference term plus the dipole-gradient term, with an
//! overall sign opposite to the form usually printed next to the swapped
//! mixing angle. The two conventions differ by the phase of |−⟩ only; all
//! couplings, dipoles and doorway weights here share one convention.
//!
//! Ground-to-polariton couplings carry only the bare derivative coupling:
//! f_g+ = f_ge cosθ, f_g− = −f_ge sinθ.
//!
//! Second-order couplings are handled through h_kl = ∂q f_kl − F_kl with
//! F_kl = ⟨∂q φ_k|∂q φ_l⟩:
//!
//! ```text
//! F₊₊ = F_gg sin²θ + F_ee cos²θ + Λ²/4 + δc²Λ²/(16g²)
//! F₋₋ = F_gg cos²θ + F_ee sin²θ + Λ²/4 + δc²Λ²/(16g²)
//! F₋₊ = sinθ cosθ (F_gg − F_ee)
//! F_g+ = F_ge cosθ + Λ f_ge/(4cosθ)
//! F_g− = −F_ge sinθ + Λ f_ge/(4sinθ)
//! Λ   = δc/Ω³·(4g ∂q g + δc ΔG) − ΔG/Ω
//! ```
//!
//! The bare scalar fields F_gg, F_ee, F_ge default to zero for the model
//! systems. Λ and f₋₊ diverge where coupling and detuning vanish together
//! (the light-induced intersection); such points are flagged, never
//! silently interpolated.

use crate::dressing::DressedSurfaces;
use crate::grid::Grid;

/// Optional bare-state second-order couplings (sampled on the grid).
#[derive(Debug, Clone, Default)]
pub struct BareScalarCouplings {
    pub f_gg: Option<Vec<f64>>,
    pub f_ee: Option<Vec<f64>>,
    pub f_ge: Option<Vec<f64>>,
}

/// All sampled coupling fields for one nuclear mode.
#[derive(Debug, Clone)]
pub struct CouplingFields {
    /// Polariton derivative coupling f₋₊ (1/length).
    pub f_mp: Vec<f64>,
    /// Ground-to-upper coupling f_g+.
    pub f_gp: Vec<f64>,
    /// Ground-to-lower coupling f_g−.
    pub f_gm: Vec<f64>,
    pub lambda: Vec<f64>,
    pub cap_f_pp: Vec<f64>,
    pub cap_f_mm: Vec<f64>,
    pub cap_f_mp: Vec<f64>,
    pub cap_f_gp: Vec<f64>,
    pub cap_f_gm: Vec<f64>,
    /// Scalar couplings h_kl = ∂q f_kl − F_kl per channel pair.
    pub h_mp: Vec<f64>,
    pub h_gp: Vec<f64>,
    pub h_gm: Vec<f64>,
    /// Gradient difference ΔG = ∂q(Ve − Vg).
    pub dgap: Vec<f64>,
    /// Coupling gradient ∂q g.
    pub dg_dq: Vec<f64>,
    /// Indices where a coupling expression is singular (Ω = 0, or a
    /// vanishing mixing factor against a nonzero numerator).
    pub singular: Vec<usize>,
}

/// Pointwise f₋₊ from detuning, coupling and their gradients. Returns None
/// at an exact degeneracy.
pub fn f_minus_plus_point(delta: f64, g: f64, dgap: f64, dg_dq: f64) -> Option<f64> {
    let om2 = 4.0 * g * g + delta * delta;
    if om2 == 0.0 {
        return None;
    }
    Some((delta * dg_dq - g * dgap) / om2)
}

/// Pointwise Λ. Returns None at Ω = 0.
pub fn lambda_point(delta: f64, g: f64, omega: f64, dgap: f64, dg_dq: f64) -> Option<f64> {
    if omega == 0.0 {
        return None;
    }
    let om3 = omega * omega * omega;
    Some(delta / om3 * (4.0 * g * dg_dq + delta * dgap) - dgap / omega)
}

/// Derivative coupling between the polariton channels on the grid.
pub fn derivative_coupling_pm(ds: &DressedSurfaces, dgap: &[f64], dg_dq: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut f = Vec::with_capacity(ds.len());
    let mut singular = Vec::new();
    for j in 0..ds.len() {
        match f_minus_plus_point(ds.delta_c[j], ds.g[j], dgap[j], dg_dq[j]) {
            Some(v) => f.push(v),
            None => {
                singular.push(j);
                f.push(f64::NAN);
            }
        }
    }
    (f, singular)
}

/// Ground-to-polariton couplings, proportional to the bare f_ge.
pub fn ground_couplings(f_ge: &[f64], ds: &DressedSurfaces) -> (Vec<f64>, Vec<f64>) {
    let f_gp = f_ge.iter().zip(&ds.cos_theta).map(|(&f, &c)| f * c).collect();
    let f_gm = f_ge.iter().zip(&ds.sin_theta).map(|(&f, &s)| -f * s).collect();
    (f_gp, f_gm)
}

/// Λ field on the grid.
pub fn lambda_field(ds: &DressedSurfaces, dgap: &[f64], dg_dq: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut lam = Vec::with_capacity(ds.len());
    let mut singular = Vec::new();
    for j in 0..ds.len() {
        match lambda_point(ds.delta_c[j], ds.g[j], ds.omega[j], dgap[j], dg_dq[j]) {
            Some(v) => lam.push(v),
            None => {
                singular.push(j);
                lam.push(f64::NAN);
            }
        }
    }
    (lam, singular)
}

/// The five scalar F fields.
#[allow(clippy::too_many_arguments)]
pub fn scalar_f_fields(
    ds: &DressedSurfaces,
    lambda: &[f64],
    f_ge: &[f64],
    bare: &BareScalarCouplings,
) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>, Vec<usize>) {
    let n = ds.len();
    let zero = vec![0.0; n];
    let f_gg = bare.f_gg.as_deref().unwrap_or(&zero);
    let f_ee = bare.f_ee.as_deref().unwrap_or(&zero);
    let f_ge_bare = bare.f_ge.as_deref().unwrap_or(&zero);

    let mut pp = Vec::with_capacity(n);
    let mut mm = Vec::with_capacity(n);
    let mut mp = Vec::with_capacity(n);
    let mut gp = Vec::with_capacity(n);
    let mut gm = Vec::with_capacity(n);
    let mut singular = Vec::new();

    for j in 0..n {
        let (c, s) = (ds.cos_theta[j], ds.sin_theta[j]);
        let lam = lambda[j];
        let g = ds.g[j];
        let delta = ds.delta_c[j];
        // Cavity-induced diagonal part Λ²/4 + δ²Λ²/(16g²).
        let diag = if g != 0.0 {
            0.25 * lam * lam + delta * delta * lam * lam / (16.0 * g * g)
        } else if lam.is_nan() {
            singular.push(j);
            f64::NAN
        } else {
            // g = 0 forces Λ = 0 (bare basis, no mixing-angle rotation);
            // the δ²/(16g²) factor is a removable 0/0 there.
            0.25 * lam * lam
        };
        pp.push(f_gg[j] * s * s + f_ee[j] * c * c + diag);
        mm.push(f_gg[j] * c * c + f_ee[j] * s * s + diag);
        mp.push(s * c * (f_gg[j] - f_ee[j]));
        let (vgp, vgm);
        if f_ge_bare[j] == 0.0 && f_ge[j] == 0.0 {
            vgp = 0.0;
            vgm = 0.0;
        } else {
            let ok_c = c.abs() > 1e-300;
            let ok_s = s.abs() > 1e-300;
            if !ok_c || !ok_s {
                singular.push(j);
            }
            vgp = f_ge_bare[j] * c + if ok_c { lam * f_ge[j] / (4.0 * c) } else { f64::NAN };
            vgm = -f_ge_bare[j] * s + if ok_s { lam * f_ge[j] / (4.0 * s) } else { f64::NAN };
        }
        gp.push(vgp);
        gm.push(vgm);
    }
    (pp, mm, mp, gp, gm, singular)
}

/// h_kl = ∂q f_kl − F_kl.
pub fn scalar_couplings_h(grid: &Grid, f: &[f64], cap_f: &[f64]) -> Vec<f64> {
    let df = grid.gradient(f);
    df.iter().zip(cap_f).map(|(&d, &ff)| d - ff).collect()
}

/// Compute every coupling field for one nuclear mode from the dressed
/// surfaces. Gradients of the sampled fields use the grid's high-order
/// finite differences.
pub fn coupling_fields(grid: &Grid, ds: &DressedSurfaces, bare: &BareScalarCouplings) -> CouplingFields {
    // ΔG = ∂q(Ve − Vg) = ∂q δc (ωc is constant).
    let dgap = grid.gradient(&ds.delta_c);
    let dg_dq = grid.gradient(&ds.g);

    let (f_mp, mut singular) = derivative_coupling_pm(ds, &dgap, &dg_dq);
    let (f_gp, f_gm) = ground_couplings(&ds.f_ge, ds);
    let (lambda, sing_lam) = lambda_field(ds, &dgap, &dg_dq);
    singular.extend(sing_lam);
    let (cap_f_pp, cap_f_mm, cap_f_mp, cap_f_gp, cap_f_gm, sing_f) =
        scalar_f_fields(ds, &lambda, &ds.f_ge, bare);
    singular.extend(sing_f);
    singular.sort_unstable();
    singular.dedup();

    let h_mp = scalar_couplings_h(grid, &f_mp, &cap_f_mp);
    let h_gp = scalar_couplings_h(grid, &f_gp, &cap_f_gp);
    let h_gm = scalar_couplings_h(grid, &f_gm, &cap_f_gm);

    CouplingFields {
        f_mp,
        f_gp,
        f_gm,
        lambda,
        cap_f_pp,
        cap_f_mm,
        cap_f_mp,
        cap_f_gp,
        cap_f_gm,
        h_mp,
        h_gp,
        h_gm,
        dgap,
        dg_dq,
        singular,
    }
}

impl CouplingFields {
    pub fn write_csv<W: std::io::Write>(&self, q: &[f64], mut w: W, header_extra: &str) -> std::io::Result<()> {
        use crate::units::to_angstrom;
        writeln!(w, "# coupling fields (atomic units){header_extra}")?;
        writeln!(w, "q,f_mp,f_gp,f_gm,Lambda,F_pp,F_mm,F_mp,F_gp,F_gm,h_mp")?;
        for j in 0..self.f_mp.len() {
            writeln!(
                w,
                "{:.9},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}",
                to_angstrom(q[j]),
                self.f_mp[j],
                self.f_gp[j],
                self.f_gm[j],
                self.lambda[j],
                self.cap_f_pp[j],
                self.cap_f_mm[j],
                self.cap_f_mp[j],
                self.cap_f_gp[j],
                self.cap_f_gm[j],
                self.h_mp[j]
            )?;
        }
        Ok(())
    }
}
