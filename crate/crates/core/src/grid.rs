//! Spatial discretization: uniform grids, spectral kinetic energy, field
//! gradients, and the perfectly matched layer.
//!
//! The kinetic operator acts in wavenumber space, T̂ψ = F⁻¹{k²/2m F{ψ}},
//! which is exact for band-limited states and exactly Hermitian in the
//! discrete ℓ² inner product. Wave packets are absorbed by the PML well
//! before they reach the domain edge, so the implied periodicity is
//! harmless.
//!
//! Gradients of *coefficient fields* (potential differences, dipole-derived
//! couplings) are a different matter: those fields are not periodic on the
//! box, so they use 8th-order centered finite differences with one-sided
//! stencils at the edges instead of the FFT.
//!
//! The PML is implemented as complex coordinate stretching of the kinetic
//! operator only: T̂ → −(1/2m) s ∂q (s ∂q ·) with s(q) = 1/(1 + iσ(q)) and
//! σ a monomial ramp inside the absorbing layer.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Lower domain edge (bohr).
    pub q_min: f64,
    /// Upper domain edge (bohr).
    pub q_max: f64,
    pub n_points: usize,
    /// Reduced mass (a.u.).
    pub mass: f64,
    /// Offset all points by half a spacing (used to keep exact degeneracies
    /// off the mesh).
    pub stagger: bool,
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if !(self.q_max > self.q_min) {
            return Err(Error::Grid(format!(
                "q_max ({}) must exceed q_min ({})",
                self.q_max, self.q_min
            )));
        }
        if self.n_points < 64 {
            return Err(Error::Grid(format!(
                "n_points = {} below minimum of 64",
                self.n_points
            )));
        }
        if !(self.mass > 0.0) {
            return Err(Error::Grid(format!("mass must be positive, got {}", self.mass)));
        }
        Ok(())
    }
}

/// Uniform spatial grid with cached FFT plans and wavenumber tables.
pub struct Grid {
    pub spec: GridSpec,
    points: Vec<f64>,
    spacing: f64,
    /// FFT-ordered wavenumbers 2π/L · {0, 1, …, N/2−1, −N/2, …, −1}.
    wavenumbers: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid")
            .field("spec", &self.spec)
            .field("spacing", &self.spacing)
            .finish()
    }
}

impl Grid {
    pub fn new(spec: GridSpec) -> Result<Grid> {
        spec.validate()?;
        let n = spec.n_points;
        let length = spec.q_max - spec.q_min;
        let spacing = length / n as f64;
        let offset = if spec.stagger { 0.5 } else { 0.0 };
        let points: Vec<f64> = (0..n)
            .map(|j| spec.q_min + (j as f64 + offset) * spacing)
            .collect();
        let dk = 2.0 * std::f64::consts::PI / length;
        let wavenumbers: Vec<f64> = (0..n)
            .map(|j| {
                let m = if j <= n / 2 - 1 { j as isize } else { j as isize - n as isize };
                m as f64 * dk
            })
            .collect();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        Ok(Grid { spec, points, spacing, wavenumbers, fwd, inv })
    }

    pub fn n(&self) -> usize {
        self.spec.n_points
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn mass(&self) -> f64 {
        self.spec.mass
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Sample a scalar function onto the grid.
    pub fn sample<F: FnMut(f64) -> f64>(&self, mut f: F) -> Vec<f64> {
        self.points.iter().map(|&q| f(q)).collect()
    }

    fn fft_forward(&self, buf: &mut [C64]) {
        self.fwd.process(buf);
    }

    fn fft_inverse(&self, buf: &mut [C64]) {
        self.inv.process(buf);
        let scale = 1.0 / self.n() as f64;
        for z in buf.iter_mut() {
            *z *= scale;
        }
    }

    /// −(1/2m) ∂²ψ/∂q² by multiplication with k²/2m in wavenumber space.
    pub fn apply_kinetic(&self, psi: &[C64], out: &mut Vec<C64>) {
        assert_eq!(psi.len(), self.n());
        out.clear();
        out.extend_from_slice(psi);
        self.fft_forward(out);
        let half_inv_mass = 0.5 / self.spec.mass;
        for (z, &k) in out.iter_mut().zip(&self.wavenumbers) {
            *z *= k * k * half_inv_mass;
        }
        self.fft_inverse(out);
    }

    /// Spectral first derivative ∂ψ/∂q (multiplication by ik). Intended for
    /// wave functions; exactly anti-Hermitian on the plain grid.
    pub fn spectral_derivative(&self, psi: &[C64], out: &mut Vec<C64>) {
        assert_eq!(psi.len(), self.n());
        out.clear();
        out.extend_from_slice(psi);
        self.fft_forward(out);
        for (z, &k) in out.iter_mut().zip(&self.wavenumbers) {
            *z *= C64::new(0.0, k);
        }
        self.fft_inverse(out);
    }

    /// First derivative of a real coefficient field: 8th-order centered
    /// differences in the interior, 8th-order one-sided stencils at the
    /// edges. Exact for polynomials up to degree 8.
    pub fn gradient(&self, field: &[f64]) -> Vec<f64> {
        assert_eq!(field.len(), self.n());
        fd8_derivative(field, self.spacing)
    }

    /// Trapezoidal quadrature of a sampled real integrand.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.n());
        let inner: f64 = values[1..values.len() - 1].iter().sum();
        (inner + 0.5 * (values[0] + values[values.len() - 1])) * self.spacing
    }

    /// ⟨a|b⟩ = Δq Σ a*·b (uniform-grid inner product).
    pub fn inner(&self, a: &[C64], b: &[C64]) -> C64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>() * self.spacing
    }

    /// ∫|ψ|² dq on this grid.
    pub fn norm_sq(&self, a: &[C64]) -> f64 {
        a.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.spacing
    }

    /// Complex stretching factors s(q) = 1/(1 + iσ(q)) for a PML, 1 outside
    /// the layer.
    pub fn make_pml(&self, p: &PmlParams) -> Result<PmlStretch> {
        p.validate(self)?;
        let mut sigma = vec![0.0; self.n()];
        for (j, &q) in self.points.iter().enumerate() {
            let mut s = 0.0;
            if p.left {
                let inner_edge = self.spec.q_min + p.width;
                if q < inner_edge {
                    s += p.strength * ((inner_edge - q) / p.width).powi(p.order as i32);
                }
            }
            if p.right {
                let inner_edge = self.spec.q_max - p.width;
                if q > inner_edge {
                    s += p.strength * ((q - inner_edge) / p.width).powi(p.order as i32);
                }
            }
            sigma[j] = s;
        }
        let stretch = sigma
            .iter()
            .map(|&s| C64::new(1.0, 0.0) / C64::new(1.0, s))
            .collect();
        Ok(PmlStretch { stretch })
    }

    /// Kinetic operator with complex coordinate stretching:
    /// −(1/2m) s ∂q (s ∂q ψ).
    pub fn apply_kinetic_pml(
        &self,
        pml: &PmlStretch,
        psi: &[C64],
        out: &mut Vec<C64>,
        scratch: &mut Vec<C64>,
    ) {
        self.spectral_derivative(psi, scratch);
        for (z, &s) in scratch.iter_mut().zip(&pml.stretch) {
            *z *= s;
        }
        self.spectral_derivative(scratch, out);
        let half_inv_mass = 0.5 / self.spec.mass;
        for (z, &s) in out.iter_mut().zip(&pml.stretch) {
            *z *= -half_inv_mass * s;
        }
    }
}

/// Absorbing-layer parameters. `width` is per enabled edge, in bohr.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmlParams {
    pub width: f64,
    pub strength: f64,
    pub order: u32,
    pub left: bool,
    pub right: bool,
}

impl PmlParams {
    fn validate(&self, grid: &Grid) -> Result<()> {
        let span = grid.spec.q_max - grid.spec.q_min;
        if !(self.width > 0.0) || self.width >= span / 4.0 {
            return Err(Error::Grid(format!(
                "PML width {} must lie in (0, domain/4 = {})",
                self.width,
                span / 4.0
            )));
        }
        if !(self.strength > 0.0) {
            return Err(Error::Grid("PML strength must be positive".into()));
        }
        if self.order < 2 {
            return Err(Error::Grid("PML order must be at least 2".into()));
        }
        Ok(())
    }
}

/// Precomputed 1/(1 + iσ(q)) factors.
#[derive(Debug, Clone)]
pub struct PmlStretch {
    pub stretch: Vec<C64>,
}

/// 8th-order finite-difference first derivative with one-sided edge stencils.
fn fd8_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 9);
    let mut out = vec![0.0; n];
    // Centered 8th-order coefficients for offsets ±1..±4.
    const C1: f64 = 4.0 / 5.0;
    const C2: f64 = -1.0 / 5.0;
    const C3: f64 = 4.0 / 105.0;
    const C4: f64 = -1.0 / 280.0;
    for j in 4..n - 4 {
        out[j] = (C1 * (f[j + 1] - f[j - 1])
            + C2 * (f[j + 2] - f[j - 2])
            + C3 * (f[j + 3] - f[j - 3])
            + C4 * (f[j + 4] - f[j - 4]))
            / h;
    }
    // One-sided 8th-order stencils (Fornberg weights) for the first and last
    // four points, offsets 0..8 relative to the edge.
    const EDGE: [[f64; 9]; 4] = [
        [
            -761.0 / 280.0,
            8.0,
            -14.0,
            56.0 / 3.0,
            -35.0 / 2.0,
            56.0 / 5.0,
            -14.0 / 3.0,
            8.0 / 7.0,
            -1.0 / 8.0,
        ],
        [
            -1.0 / 8.0,
            -223.0 / 140.0,
            7.0 / 2.0,
            -7.0 / 2.0,
            35.0 / 12.0,
            -7.0 / 4.0,
            7.0 / 10.0,
            -1.0 / 6.0,
            1.0 / 56.0,
        ],
        [
            1.0 / 56.0,
            -2.0 / 7.0,
            -19.0 / 20.0,
            2.0,
            -5.0 / 4.0,
            2.0 / 3.0,
            -1.0 / 4.0,
            2.0 / 35.0,
            -1.0 / 168.0,
        ],
        [
            -1.0 / 168.0,
            1.0 / 14.0,
            -1.0 / 2.0,
            -9.0 / 20.0,
            5.0 / 4.0,
            -1.0 / 2.0,
            1.0 / 6.0,
            -1.0 / 28.0,
            1.0 / 280.0,
        ],
    ];
    for (row, coeffs) in EDGE.iter().enumerate() {
        let mut left = 0.0;
        let mut right = 0.0;
        for (off, &c) in coeffs.iter().enumerate() {
            left += c * f[off];
            right += c * f[n - 1 - off];
        }
        out[row] = left / h;
        // Mirrored stencil: x → −x negates first-derivative weights.
        out[n - 1 - row] = -right / h;
    }
    out
}

/// Two-dimensional rectangular grid used for surface and coupling maps
/// (no propagation).
#[derive(Debug, Clone)]
pub struct Grid2 {
    pub q1: Vec<f64>,
    pub q2: Vec<f64>,
    pub spacing1: f64,
    pub spacing2: f64,
}

impl Grid2 {
    /// Build a staggered or plain 2-D mesh. Staggering offsets both axes by
    /// half a spacing so that coordinate zeros are never sampled exactly.
    pub fn new(
        range1: (f64, f64),
        n1: usize,
        range2: (f64, f64),
        n2: usize,
        stagger: bool,
    ) -> Result<Grid2> {
        if !(range1.1 > range1.0) || !(range2.1 > range2.0) {
            return Err(Error::Grid("2-D ranges must be increasing".into()));
        }
        if n1 < 8 || n2 < 8 {
            return Err(Error::Grid("2-D map needs at least 8 points per axis".into()));
        }
        let offset = if stagger { 0.5 } else { 0.0 };
        let spacing1 = (range1.1 - range1.0) / n1 as f64;
        let spacing2 = (range2.1 - range2.0) / n2 as f64;
        let q1 = (0..n1).map(|j| range1.0 + (j as f64 + offset) * spacing1).collect();
        let q2 = (0..n2).map(|j| range2.0 + (j as f64 + offset) * spacing2).collect();
        Ok(Grid2 { q1, q2, spacing1, spacing2 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn plain_grid(q_min: f64, q_max: f64, n: usize) -> Grid {
        Grid::new(GridSpec { q_min, q_max, n_points: n, mass: 3650.0, stagger: false }).unwrap()
    }

    #[test]
    fn make_grid_points() {
        let g = Grid::new(GridSpec { q_min: 0.0, q_max: 1.0, n_points: 64, mass: 1.0, stagger: false })
            .unwrap();
        assert!((g.points()[0] - 0.0).abs() < 1e-15);
        assert!((g.points()[16] - 0.25).abs() < 1e-15);
        assert!((g.spacing() - 1.0 / 64.0).abs() < 1e-16);
        let s = Grid::new(GridSpec { q_min: 0.0, q_max: 1.0, n_points: 64, mass: 1.0, stagger: true })
            .unwrap();
        assert!((s.points()[0] - 0.5 / 64.0).abs() < 1e-15);
        for &q in s.points() {
            assert!(q != 0.0);
        }
    }

    #[test]
    fn grid_invariants_rejected() {
        assert!(Grid::new(GridSpec { q_min: 1.0, q_max: 0.0, n_points: 64, mass: 1.0, stagger: false }).is_err());
        assert!(Grid::new(GridSpec { q_min: 0.0, q_max: 1.0, n_points: 32, mass: 1.0, stagger: false }).is_err());
    }

    #[test]
    fn kinetic_plane_wave_eigenfunction() {
        let g = plain_grid(0.0, 10.0, 256);
        let k = g.wavenumbers()[5]; // commensurate mode
        let psi: Vec<C64> = g.points().iter().map(|&q| C64::new(0.0, k * q).exp()).collect();
        let mut out = Vec::new();
        g.apply_kinetic(&psi, &mut out);
        let expect = k * k / (2.0 * g.mass());
        for (t, p) in out.iter().zip(&psi) {
            assert!((t - p * expect).norm() < 1e-12 * expect.max(1e-30));
        }
    }

    #[test]
    fn kinetic_constant_is_zero() {
        let g = plain_grid(0.0, 4.0, 128);
        let psi = vec![C64::new(0.7, -0.2); 128];
        let mut out = Vec::new();
        g.apply_kinetic(&psi, &mut out);
        for t in &out {
            assert!(t.norm() < 1e-14);
        }
    }

    #[test]
    fn kinetic_gaussian_expectation() {
        // ⟨T⟩ for ψ ∝ exp(−(q−q0)²/(4σ²) + ik0 q) is (k0² + 1/(4σ²))/(2m).
        let g = plain_grid(0.0, 20.0, 1024);
        let (q0, sigma, k0) = (10.0, 0.8, 3.0);
        let mut psi: Vec<C64> = g
            .points()
            .iter()
            .map(|&q| {
                let a = -((q - q0) * (q - q0)) / (4.0 * sigma * sigma);
                C64::new(a, k0 * q).exp()
            })
            .collect();
        let n = g.norm_sq(&psi).sqrt();
        psi.iter_mut().for_each(|z| *z /= n);
        let mut tpsi = Vec::new();
        g.apply_kinetic(&psi, &mut tpsi);
        let t = g.inner(&psi, &tpsi).re;
        let expect = (k0 * k0 + 1.0 / (4.0 * sigma * sigma)) / (2.0 * g.mass());
        assert!(
            (t - expect).abs() < 1e-10 * expect,
            "kinetic expectation {t} vs {expect}"
        );
    }

    #[test]
    fn kinetic_is_hermitian() {
        let g = plain_grid(-3.0, 7.0, 256);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let rand_field = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<C64> {
            (0..256).map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect()
        };
        for _ in 0..5 {
            let phi = rand_field(&mut rng);
            let psi = rand_field(&mut rng);
            let mut tpsi = Vec::new();
            let mut tphi = Vec::new();
            g.apply_kinetic(&psi, &mut tpsi);
            g.apply_kinetic(&phi, &mut tphi);
            let lhs = g.inner(&phi, &tpsi);
            let rhs = g.inner(&tphi, &psi);
            let scale = g.norm_sq(&phi).sqrt() * g.norm_sq(&psi).sqrt();
            assert!((lhs - rhs).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn spectral_derivative_antihermitian() {
        let g = plain_grid(-3.0, 7.0, 128);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let rand_field = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<C64> {
            (0..128).map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect()
        };
        for _ in 0..5 {
            let phi = rand_field(&mut rng);
            let psi = rand_field(&mut rng);
            let mut dpsi = Vec::new();
            let mut dphi = Vec::new();
            g.spectral_derivative(&psi, &mut dpsi);
            g.spectral_derivative(&phi, &mut dphi);
            let lhs = g.inner(&phi, &dpsi);
            let rhs = g.inner(&dphi, &psi);
            let scale = g.norm_sq(&phi).sqrt() * g.norm_sq(&psi).sqrt();
            assert!((lhs + rhs).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn gradient_linear_ramp() {
        let g = plain_grid(0.0, 5.0, 128);
        let field: Vec<f64> = g.points().iter().map(|&q| 3.5 * q - 1.0).collect();
        let d = g.gradient(&field);
        for &v in &d {
            assert!((v - 3.5).abs() < 1e-8, "slope {v}");
        }
    }

    #[test]
    fn gradient_commensurate_sine() {
        let g = plain_grid(0.0, 1.0, 2048);
        let k = 3.0 * 2.0 * std::f64::consts::PI;
        let field: Vec<f64> = g.points().iter().map(|&q| (k * q).sin()).collect();
        let d = g.gradient(&field);
        let mut max_err: f64 = 0.0;
        for (j, &q) in g.points().iter().enumerate() {
            max_err = max_err.max((d[j] - k * (k * q).cos()).abs());
        }
        assert!(max_err < 1e-10, "max err {max_err}");
    }

    #[test]
    fn gradient_morse_analytic() {
        use crate::surfaces::MorseParams;
        let g = plain_grid(crate::units::angstrom(1.0), crate::units::angstrom(12.0), 2048);
        let p = MorseParams::from_ev_angstrom(3.0, 1.0, 2.0, 0.0);
        let field: Vec<f64> = g.points().iter().map(|&q| p.eval(q)).collect();
        let d = g.gradient(&field);
        // Interior: skip 8 points at each edge where the one-sided stencils live.
        for j in 8..g.n() - 8 {
            let exact = p.eval_deriv(g.points()[j]);
            assert!(
                (d[j] - exact).abs() <= 1e-8 * exact.abs().max(1e-6),
                "at q={}: {} vs {}",
                g.points()[j],
                d[j],
                exact
            );
        }
    }

    #[test]
    fn pml_zero_sigma_matches_plain() {
        let g = plain_grid(0.0, 10.0, 256);
        let pml = PmlStretch { stretch: vec![C64::new(1.0, 0.0); 256] };
        let psi: Vec<C64> = g
            .points()
            .iter()
            .map(|&q| C64::new(-((q - 5.0) * (q - 5.0)), 2.0 * q).exp())
            .collect();
        let mut plain = Vec::new();
        let mut stretched = Vec::new();
        let mut scratch = Vec::new();
        g.apply_kinetic(&psi, &mut plain);
        g.apply_kinetic_pml(&pml, &psi, &mut stretched, &mut scratch);
        for (a, b) in plain.iter().zip(&stretched) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn pml_params_validated() {
        let g = plain_grid(0.0, 10.0, 256);
        assert!(g
            .make_pml(&PmlParams { width: 3.0, strength: 1.0, order: 3, left: false, right: true })
            .is_err());
        assert!(g
            .make_pml(&PmlParams { width: 1.0, strength: 1.0, order: 1, left: false, right: true })
            .is_err());
        assert!(g
            .make_pml(&PmlParams { width: 1.0, strength: 2.0, order: 3, left: true, right: true })
            .is_ok());
    }

    #[test]
    fn grid2_stagger_excludes_zero() {
        let m = Grid2::new((-1.0, 1.0), 64, (-1.0, 1.0), 64, true).unwrap();
        for &x in m.q1.iter().chain(m.q2.iter()) {
            assert!(x.abs() > 1e-12);
        }
    }
}
