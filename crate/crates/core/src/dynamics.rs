//! Coupled-channel Hamiltonian action, Krylov short-time exponential
//! propagation, and initial-state preparation.
//!
//! The channel set is fixed at {g0, −, +}. The Hamiltonian action per
//! channel is
//!
//! ```text
//! (Hψ)_k = T̂ψ_k + V_k ψ_k + Σ_{l≠k} (1/2m)[ f_kl ∂q ψ_l + ∂q(f_kl ψ_l) ]   (simplified)
//! ```
//!
//! The symmetrized operator form f∂ + ∂∘f equals 2f∂ + (∂q f) in the
//! continuum and, because the spectral derivative is exactly
//! anti-Hermitian on the grid and f_kl = −f_lk, it keeps the discrete
//! Hamiltonian exactly Hermitian for arbitrary (even noise-like) states.
//! In `Full` mode the scalar terms of the complete second-order expansion
//! are added through h_kl = ∂q f_kl − F_kl, which amounts to the Hermitian
//! corrections −F_kl/2m on and off the diagonal.
//!
//! Time stepping uses an Arnoldi projection of exp(−iH dt) with an
//! adaptively grown subspace; the same machinery evaluates exp(−βH) for
//! imaginary-time relaxation cross-checks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::couplings::CouplingFields;
use crate::dressing::DressedSurfaces;
use crate::error::{Error, Result};
use crate::grid::{Grid, PmlParams, PmlStretch};

pub const N_CHANNELS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    G0 = 0,
    Minus = 1,
    Plus = 2,
}

/// Complex channel amplitudes on the grid with the current time stamp.
#[derive(Debug, Clone)]
pub struct WavePacket {
    pub channels: [Vec<C64>; N_CHANNELS],
    /// Time in a.u.
    pub time: f64,
}

impl WavePacket {
    pub fn zeros(n: usize) -> Self {
        WavePacket {
            channels: [vec![C64::ZERO; n], vec![C64::ZERO; n], vec![C64::ZERO; n]],
            time: 0.0,
        }
    }

    pub fn n_points(&self) -> usize {
        self.channels[0].len()
    }

    pub fn total_norm_sq(&self, grid: &Grid) -> f64 {
        self.channels.iter().map(|c| grid.norm_sq(c)).sum()
    }

    pub fn flatten(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(N_CHANNELS * self.n_points());
        for c in &self.channels {
            out.extend_from_slice(c);
        }
        out
    }

    pub fn unflatten(&mut self, flat: &[C64]) {
        let n = self.n_points();
        for (k, c) in self.channels.iter_mut().enumerate() {
            c.copy_from_slice(&flat[k * n..(k + 1) * n]);
        }
    }

    /// Plain-text checkpoint: one row per grid point with the real and
    /// imaginary parts of every channel.
    pub fn write_checkpoint<W: std::io::Write>(
        &self,
        grid: &Grid,
        mut w: W,
        scenario_hash: &str,
    ) -> std::io::Result<()> {
        writeln!(
            w,
            "# wavepacket checkpoint t_au={:.12} q_min={:.12} q_max={:.12} n={} mass={} stagger={} hash={}",
            self.time,
            grid.spec.q_min,
            grid.spec.q_max,
            grid.n(),
            grid.mass(),
            grid.spec.stagger,
            scenario_hash
        )?;
        writeln!(w, "# q re_g0 im_g0 re_minus im_minus re_plus im_plus")?;
        for j in 0..self.n_points() {
            writeln!(
                w,
                "{:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e}",
                grid.points()[j],
                self.channels[0][j].re,
                self.channels[0][j].im,
                self.channels[1][j].re,
                self.channels[1][j].im,
                self.channels[2][j].re,
                self.channels[2][j].im,
            )?;
        }
        Ok(())
    }
}

/// Anything that acts linearly on a flattened state vector.
pub trait LinearAction: Sync {
    fn len(&self) -> usize;
    fn apply(&self, x: &[C64], y: &mut [C64]);

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingMode {
    /// First-derivative couplings only (the working Hamiltonian).
    Simplified,
    /// Adds the scalar F corrections on and off the diagonal.
    Full,
}

/// One off-diagonal coupling block between a channel pair.
struct CouplingBlock {
    a: usize,
    b: usize,
    /// f_ab sampled on the grid (f_ba = −f_ab).
    f: Vec<f64>,
    /// −F_ab/2m correction, present in `Full` mode.
    scalar: Option<Vec<f64>>,
}

/// Multi-channel grid Hamiltonian with diagonal potentials, shared spectral
/// kinetic energy (optionally PML-stretched), and antisymmetric
/// first-derivative couplings.
pub struct MultiChannelHamiltonian<'g> {
    grid: &'g Grid,
    potentials: Vec<Vec<f64>>,
    blocks: Vec<CouplingBlock>,
    pml: Option<PmlStretch>,
    inv_two_mass: f64,
}

impl<'g> MultiChannelHamiltonian<'g> {
    pub fn new(grid: &'g Grid, potentials: Vec<Vec<f64>>) -> Self {
        for v in &potentials {
            assert_eq!(v.len(), grid.n());
        }
        let inv_two_mass = 0.5 / grid.mass();
        MultiChannelHamiltonian { grid, potentials, blocks: Vec::new(), pml: None, inv_two_mass }
    }

    pub fn with_pml(mut self, pml: &PmlParams) -> Result<Self> {
        self.pml = Some(self.grid.make_pml(pml)?);
        Ok(self)
    }

    pub fn add_coupling(&mut self, a: usize, b: usize, f: Vec<f64>, scalar: Option<Vec<f64>>) {
        assert!(a < self.potentials.len() && b < self.potentials.len() && a != b);
        assert_eq!(f.len(), self.grid.n());
        self.blocks.push(CouplingBlock { a, b, f, scalar });
    }

    pub fn n_channels(&self) -> usize {
        self.potentials.len()
    }

    pub fn grid(&self) -> &Grid {
        self.grid
    }

    pub fn potential(&self, k: usize) -> &[f64] {
        &self.potentials[k]
    }

    /// Assemble the three-channel {g0, −, +} Hamiltonian of a dressed
    /// scenario. Any coupling field with flagged singular points inside the
    /// grid is rejected.
    pub fn dressed(
        grid: &'g Grid,
        ds: &DressedSurfaces,
        cf: &CouplingFields,
        mode: CouplingMode,
        pml: Option<&PmlParams>,
    ) -> Result<Self> {
        if !cf.singular.is_empty() {
            let first = cf.singular[0];
            return Err(Error::Singular { count: cf.singular.len(), first_q: ds.q[first] });
        }
        let mut pots = vec![ds.v_g0.clone(), ds.v_minus.clone(), ds.v_plus.clone()];
        if mode == CouplingMode::Full {
            let inv_two_mass = 0.5 / grid.mass();
            // Diagonal scalar corrections h_kk/2m = −F_kk/2m; F_g0,g0 is
            // the bare F_gg, zero for the built-in models.
            for j in 0..grid.n() {
                pots[1][j] -= inv_two_mass * cf.cap_f_mm[j];
                pots[2][j] -= inv_two_mass * cf.cap_f_pp[j];
            }
        }
        let mut h = MultiChannelHamiltonian::new(grid, pots);
        if let Some(p) = pml {
            h = h.with_pml(p)?;
        }
        let scalar = |cap: &[f64]| -> Option<Vec<f64>> {
            match mode {
                CouplingMode::Simplified => None,
                CouplingMode::Full => Some(cap.to_vec()),
            }
        };
        // f_kl labels ⟨k|∂q|l⟩ with the first index the row channel:
        // the (minus, plus) block carries f₋₊.
        h.add_coupling(Channel::Minus as usize, Channel::Plus as usize, cf.f_mp.clone(), scalar(&cf.cap_f_mp));
        if cf.f_gp.iter().any(|&x| x != 0.0) || mode == CouplingMode::Full {
            h.add_coupling(Channel::G0 as usize, Channel::Plus as usize, cf.f_gp.clone(), scalar(&cf.cap_f_gp));
        }
        if cf.f_gm.iter().any(|&x| x != 0.0) || mode == CouplingMode::Full {
            h.add_coupling(Channel::G0 as usize, Channel::Minus as usize, cf.f_gm.clone(), scalar(&cf.cap_f_gm));
        }
        Ok(h)
    }

    pub fn apply_packet(&self, psi: &WavePacket) -> WavePacket {
        assert_eq!(self.n_channels(), N_CHANNELS);
        let flat = psi.flatten();
        let mut out_flat = vec![C64::ZERO; flat.len()];
        self.apply(&flat, &mut out_flat);
        let mut out = psi.clone();
        out.unflatten(&out_flat);
        out
    }

    /// ⟨x|H|x⟩ / ⟨x|x⟩ on the flattened state.
    pub fn rayleigh_quotient(&self, x: &[C64]) -> C64 {
        let mut y = vec![C64::ZERO; x.len()];
        self.apply(x, &mut y);
        let num: C64 = x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum();
        let den: f64 = x.iter().map(|a| a.norm_sqr()).sum();
        num / den
    }
}

impl LinearAction for MultiChannelHamiltonian<'_> {
    fn len(&self) -> usize {
        self.n_channels() * self.grid.n()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let n = self.grid.n();
        let nch = self.n_channels();
        assert_eq!(x.len(), nch * n);
        y.iter_mut().for_each(|z| *z = C64::ZERO);

        let mut buf = Vec::with_capacity(n);
        let mut scratch = Vec::with_capacity(n);

        // Kinetic + potential per channel.
        for k in 0..nch {
            let xk = &x[k * n..(k + 1) * n];
            match &self.pml {
                Some(p) => self.grid.apply_kinetic_pml(p, xk, &mut buf, &mut scratch),
                None => self.grid.apply_kinetic(xk, &mut buf),
            }
            let yk = &mut y[k * n..(k + 1) * n];
            for j in 0..n {
                yk[j] = buf[j] + self.potentials[k][j] * xk[j];
            }
        }

        // Couplings: y_a += (1/2m)[f ∂q x_b + ∂q(f x_b)], and the
        // antisymmetric counterpart into y_b, plus optional −F/2m scalars.
        let mut prod = vec![C64::ZERO; n];
        for blk in &self.blocks {
            let (a, b) = (blk.a, blk.b);
            for (src, dst, sign) in [(b, a, 1.0), (a, b, -1.0)] {
                let xs = &x[src * n..(src + 1) * n];
                self.grid.spectral_derivative(xs, &mut buf);
                for j in 0..n {
                    prod[j] = blk.f[j] * xs[j];
                }
                self.grid.spectral_derivative(&prod, &mut scratch);
                let yd = &mut y[dst * n..(dst + 1) * n];
                for j in 0..n {
                    yd[j] += sign * self.inv_two_mass * (blk.f[j] * buf[j] + scratch[j]);
                }
                if let Some(cap) = &blk.scalar {
                    // −F/2m acts symmetrically (F_ab = F_ba).
                    for j in 0..n {
                        yd[j] -= self.inv_two_mass * cap[j] * xs[j];
                    }
                }
            }
        }
    }
}

/// Single decoupled channel (probe daughters and bare references).
pub struct ChannelHamiltonian<'g> {
    grid: &'g Grid,
    potential: Vec<f64>,
    pml: Option<PmlStretch>,
}

impl<'g> ChannelHamiltonian<'g> {
    pub fn new(grid: &'g Grid, potential: Vec<f64>) -> Self {
        assert_eq!(potential.len(), grid.n());
        ChannelHamiltonian { grid, potential, pml: None }
    }

    pub fn with_pml(mut self, pml: &PmlParams) -> Result<Self> {
        self.pml = Some(self.grid.make_pml(pml)?);
        Ok(self)
    }
}

impl LinearAction for ChannelHamiltonian<'_> {
    fn len(&self) -> usize {
        self.grid.n()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let mut buf = Vec::new();
        let mut scratch = Vec::new();
        match &self.pml {
            Some(p) => self.grid.apply_kinetic_pml(p, x, &mut buf, &mut scratch),
            None => self.grid.apply_kinetic(x, &mut buf),
        }
        for j in 0..x.len() {
            y[j] = buf[j] + self.potential[j] * x[j];
        }
    }
}

/// Dense matrix exponential by scaling and squaring with a Taylor kernel;
/// adequate for the small (≤ 64²) Krylov projections used here.
fn expm_dense(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let norm: f64 = a
        .row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = C64::new(1.0 / 2f64.powi(squarings as i32), 0.0);
    let b = a * scale;
    let mut term = DMatrix::<C64>::identity(n, n);
    let mut sum = DMatrix::<C64>::identity(n, n);
    for k in 1..=24 {
        term = &term * &b / C64::new(k as f64, 0.0);
        sum += &term;
        if term.iter().map(|z| z.norm()).fold(0.0f64, f64::max) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

#[derive(Debug, Clone, Copy)]
pub struct StepInfo {
    /// Krylov dimension used.
    pub dim: usize,
    /// Local error estimate.
    pub error: f64,
}

/// Arnoldi evaluation of exp(z·H)·x with adaptive subspace dimension.
pub struct ArnoldiPropagator {
    pub tol: f64,
    pub min_dim: usize,
    pub max_dim: usize,
}

impl Default for ArnoldiPropagator {
    fn default() -> Self {
        ArnoldiPropagator { tol: 1e-9, min_dim: 8, max_dim: 64 }
    }
}

impl ArnoldiPropagator {
    pub fn new(tol: f64) -> Self {
        ArnoldiPropagator { tol, ..Default::default() }
    }

    /// x ← exp(z·H)·x. Real-time propagation uses z = −i·dt; imaginary-time
    /// relaxation uses z = −β.
    pub fn expm_action(&self, h: &dyn LinearAction, x: &mut [C64], z: C64) -> Result<StepInfo> {
        let n = x.len();
        let beta = (x.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt();
        if beta == 0.0 {
            return Ok(StepInfo { dim: 0, error: 0.0 });
        }
        let mut basis: Vec<DVector<C64>> = Vec::with_capacity(self.max_dim + 1);
        basis.push(DVector::from_iterator(n, x.iter().map(|&v| v / beta)));
        let mut hess = DMatrix::<C64>::zeros(self.max_dim + 1, self.max_dim);
        let mut y = vec![C64::ZERO; n];

        let mut result: Option<(DVector<C64>, usize)> = None;
        let mut error = 0.0;
        let mut m = 0;
        let mut happy = false;
        while m < self.max_dim {
            h.apply(basis[m].as_slice(), &mut y);
            let mut w = DVector::from_iterator(n, y.iter().copied());
            // Modified Gram-Schmidt with one reorthogonalization pass.
            for _ in 0..2 {
                for (i, v) in basis.iter().enumerate() {
                    let c = v.dotc(&w);
                    hess[(i, m)] += c;
                    w.axpy(-c, v, C64::new(1.0, 0.0));
                }
            }
            let h_next = w.norm();
            hess[(m + 1, m)] = C64::new(h_next, 0.0);
            m += 1;
            if h_next < 1e-14 {
                happy = true; // invariant subspace found
            } else {
                basis.push(w / C64::new(h_next, 0.0));
            }

            if happy || m >= self.min_dim || m == self.max_dim {
                let hm = hess.view((0, 0), (m, m)).clone_owned() * z;
                let em = expm_dense(&hm);
                let small = em.column(0).clone_owned();
                // A posteriori estimate: β·|h_{m+1,m}|·|z|·|[exp]_{m,1}|.
                let err =
                    if happy { 0.0 } else { beta * h_next * z.norm() * small[m - 1].norm() };
                if happy || err < self.tol {
                    result = Some((small, m));
                    error = err;
                    break;
                }
            }
            if happy {
                break;
            }
        }

        let (small, dim) =
            result.ok_or(Error::KrylovStall { dim: self.max_dim, tol: self.tol })?;
        for v in x.iter_mut() {
            *v = C64::ZERO;
        }
        for (i, coeff) in small.iter().enumerate().take(dim) {
            let c = coeff * beta;
            for (xv, bv) in x.iter_mut().zip(basis[i].iter()) {
                *xv += c * bv;
            }
        }
        Ok(StepInfo { dim, error })
    }

    /// Advance a wave packet by one real-time step dt.
    pub fn step_packet(
        &self,
        h: &MultiChannelHamiltonian,
        psi: &mut WavePacket,
        dt: f64,
    ) -> Result<StepInfo> {
        assert!(dt > 0.0);
        let mut flat = psi.flatten();
        let info = self.expm_action(h, &mut flat, C64::new(0.0, -dt))?;
        psi.unflatten(&flat);
        psi.time += dt;
        Ok(info)
    }
}

/// Lowest eigenpair of T + V by diagonalizing the sinc-DVR (Fourier-grid)
/// Hamiltonian on an energy-selected window of the grid; the eigenvector is
/// embedded back into the full grid. Returns (wavefunction, energy).
pub fn relax_ground_state(grid: &Grid, v: &[f64]) -> Result<(Vec<f64>, f64)> {
    assert_eq!(v.len(), grid.n());
    let n = grid.n();
    let vmin = v.iter().cloned().fold(f64::INFINITY, f64::min);
    if !vmin.is_finite() {
        return Err(Error::InvalidParameter("potential must be bounded below".into()));
    }
    let jmin = (0..n).min_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap()).unwrap();

    // Window: points with V below the minimum plus a generous margin,
    // grown outward from the minimum and padded. The ground state decays
    // exponentially outside, so the truncation is far below the target
    // accuracy; the cap keeps the dense solve cheap.
    let mass = grid.mass();
    let margin = {
        let h = grid.spacing();
        let jm = jmin.clamp(1, n - 2);
        let curv = ((v[jm + 1] - 2.0 * v[jm] + v[jm - 1]) / (h * h)).max(1e-12);
        let omega = (curv / mass).sqrt();
        let vmax = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (20.0 * omega).max(0.2 * (vmax - vmin))
    };
    let threshold = vmin + margin;
    let mut lo = jmin;
    let mut hi = jmin;
    while lo > 0 && v[lo - 1] <= threshold {
        lo -= 1;
    }
    while hi + 1 < n && v[hi + 1] <= threshold {
        hi += 1;
    }
    let pad = 16;
    lo = lo.saturating_sub(pad);
    hi = (hi + pad).min(n - 1);
    const MAX_WINDOW: usize = 700;
    if hi - lo + 1 > MAX_WINDOW {
        let half = MAX_WINDOW / 2;
        lo = jmin.saturating_sub(half);
        hi = (lo + MAX_WINDOW - 1).min(n - 1);
        lo = hi + 1 - MAX_WINDOW;
    }
    let m = hi - lo + 1;

    // Colbert-Miller infinite-grid DVR kinetic matrix.
    let h = grid.spacing();
    let t0 = 1.0 / (2.0 * mass * h * h);
    let mut ham = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let t = if i == j {
                t0 * std::f64::consts::PI * std::f64::consts::PI / 3.0
            } else {
                let d = i as isize - j as isize;
                let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
                t0 * 2.0 * sign / ((d * d) as f64)
            };
            ham[(i, j)] = t;
        }
        ham[(i, i)] += v[lo + i];
    }
    let eig = nalgebra::SymmetricEigen::new(ham);
    let k = (0..m)
        .min_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap())
        .unwrap();
    let energy = eig.eigenvalues[k];

    let mut psi = vec![0.0; n];
    for i in 0..m {
        psi[lo + i] = eig.eigenvectors[(i, k)];
    }
    let norm = (psi.iter().map(|x| x * x).sum::<f64>() * h).sqrt();
    let sign = if psi[jmin] < 0.0 { -1.0 } else { 1.0 };
    psi.iter_mut().for_each(|x| *x *= sign / norm);
    Ok((psi, energy))
}

/// Ground state by imaginary-time propagation with the Krylov kernel;
/// independent of the grid-diagonalization path.
pub fn relax_imaginary_time(grid: &Grid, v: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = grid.n();
    let h = ChannelHamiltonian::new(grid, v.to_vec());
    let prop = ArnoldiPropagator { tol: 1e-12, min_dim: 8, max_dim: 64 };
    let jmin = (0..n).min_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap()).unwrap();
    let q0 = grid.points()[jmin];
    let width = 40.0 * grid.spacing();
    let mut psi: Vec<C64> = grid
        .points()
        .iter()
        .map(|&q| C64::new((-((q - q0) / width).powi(2)).exp(), 0.0))
        .collect();
    let renorm = |p: &mut Vec<C64>| {
        let s = (p.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.spacing()).sqrt();
        p.iter_mut().for_each(|z| *z /= s);
    };
    renorm(&mut psi);
    // Substep the decay so each exp(−βH) stays within the Krylov budget.
    let beta_sub = 2.0;
    let subs_per_sweep = 12;
    let mut energy_prev = f64::INFINITY;
    let mut hpsi = vec![C64::ZERO; n];
    for _ in 0..600 {
        for _ in 0..subs_per_sweep {
            prop.expm_action(&h, &mut psi, C64::new(-beta_sub, 0.0))?;
            renorm(&mut psi);
        }
        h.apply(&psi, &mut hpsi);
        let energy = grid.inner(&psi, &hpsi).re;
        let done = (energy_prev - energy).abs() < 1e-13 * energy.abs().max(1e-6);
        energy_prev = energy;
        if done {
            break;
        }
    }
    let mut psi_real: Vec<f64> = psi.iter().map(|z| z.re).collect();
    let norm = (psi_real.iter().map(|x| x * x).sum::<f64>() * grid.spacing()).sqrt();
    let sign = if psi_real[jmin] < 0.0 { -1.0 } else { 1.0 };
    psi_real.iter_mut().for_each(|x| *x *= sign / norm);
    Ok((psi_real, energy_prev))
}

/// Grid diagonalization cross-checked against imaginary-time propagation;
/// errors out if the two energies disagree beyond 1e-8 relative.
pub fn relax_ground_state_checked(grid: &Grid, v: &[f64]) -> Result<(Vec<f64>, f64)> {
    let (psi, e_fgh) = relax_ground_state(grid, v)?;
    let (_, e_itp) = relax_imaginary_time(grid, v)?;
    if (e_fgh - e_itp).abs() > 1e-8 * e_fgh.abs().max(1e-8) {
        return Err(Error::RelaxationMismatch { fgh: e_fgh, itp: e_itp });
    }
    Ok((psi, e_fgh))
}

/// Doorway weights actually applied to the two polariton channels.
#[derive(Debug, Clone, Copy)]
pub struct DoorwayInfo {
    /// Initial population of the upper channel after renormalization.
    pub p_plus: f64,
    pub p_minus: f64,
    /// Norm of (μ̂_{g+} + μ̂_{g−})χ₀ before renormalization.
    pub raw_norm: f64,
}

/// Impulsive excitation from the vibrational ground state χ₀:
/// ψ₊ = cosθ·μ·χ₀, ψ₋ = −sinθ·μ·χ₀, renormalized. `mu0` selects a constant
/// transition dipole (catalyst-style excitation from a third state);
/// otherwise the dressed μ_g± fields built from μ_eg are used.
pub fn prepare_doorway(
    grid: &Grid,
    chi0: &[f64],
    ds: &DressedSurfaces,
    mu0: Option<f64>,
) -> Result<(WavePacket, DoorwayInfo)> {
    assert_eq!(chi0.len(), grid.n());
    let n = grid.n();
    let mut psi = WavePacket::zeros(n);
    for j in 0..n {
        let (w_plus, w_minus) = match mu0 {
            Some(mu) => (ds.cos_theta[j] * mu, -ds.sin_theta[j] * mu),
            None => (ds.mu_g_plus[j], ds.mu_g_minus[j]),
        };
        psi.channels[Channel::Plus as usize][j] = C64::new(w_plus * chi0[j], 0.0);
        psi.channels[Channel::Minus as usize][j] = C64::new(w_minus * chi0[j], 0.0);
    }
    let raw = psi.total_norm_sq(grid);
    if raw <= 0.0 {
        return Err(Error::InvalidParameter(
            "doorway state has zero weight (vanishing transition dipole on the packet support)"
                .into(),
        ));
    }
    let scale = 1.0 / raw.sqrt();
    for c in psi.channels.iter_mut() {
        c.iter_mut().for_each(|z| *z *= scale);
    }
    let info = DoorwayInfo {
        p_plus: grid.norm_sq(&psi.channels[Channel::Plus as usize]),
        p_minus: grid.norm_sq(&psi.channels[Channel::Minus as usize]),
        raw_norm: raw.sqrt(),
    };
    Ok((psi, info))
}
