//! Exact steady state of a single driven Kerr cavity.
//!
//! For one lossy Kerr-nonlinear cavity under coherent drive the stationary
//! density matrix is known in closed form. With
//!
//! ```text
//! c = 2(−Δω − iγ/2)/U,      𝔉(c, d, z) = Σ_k z^k / (k! (c)_k (d)_k),
//! ```
//!
//! the normally-ordered moments, the coherence and the matrix elements are
//!
//! ```text
//! ⟨b†ʲbʲ⟩ = |2F/U|^{2j} / [(c)_j (c*)_j] · 𝔉(c+j, c*+j, 8|F/U|²) / 𝔉(c, c*, 8|F/U|²)
//! ⟨b⟩     = F/(Δω + iγ/2) · 𝔉(1+c, c*, 8|F/U|²) / 𝔉(c, c*, 8|F/U|²)
//! ρ_{n,m} = (−2F/U)ⁿ(−2F*/U)ᵐ/√(n!m!) / [(c)_n (c*)_m]
//!             · 𝔉(c+n, c*+m, 4|F/U|²) / 𝔉(c, c*, 8|F/U|²)
//! ```
//!
//! The matrix-element numerator takes argument 4|F/U|² while every trace
//! runs at 8|F/U|²: the convolution identity
//! Σ_{k+l=M} M!/(k!l!) /[(c)_M (c*)_M] collapses the double sum over matrix
//! elements into a single series at the doubled argument, so this pair of
//! arguments is exactly what makes Tr ρ = 1 and reproduces the moment
//! formula. The Lindblad cross-checks in the test suite confirm the same
//! normalization numerically.
//!
//! The tunneling `J` never enters here; lattice effects arrive only through
//! the effective drive substituted by the mean-field layer. The linear
//! cavity U = 0 is special-cased to the coherent-state solution rather than
//! evaluated as a series limit.

use crate::error::{Error, Result};
use crate::fock::{coherent_rho, DensityMatrix, Observables, G2_DENSITY_FLOOR};
use crate::numerics::{hyper_series, pochhammer, SeriesConfig};
use crate::params::SystemParams;
use crate::C64;

fn series_arguments(p: &SystemParams) -> (C64, f64, f64) {
    let c = p.hypergeometric_c();
    let ratio = (p.f / p.u).norm_sqr();
    (c, 4.0 * ratio, 8.0 * ratio)
}

/// Normally-ordered moment ⟨(b†)ʲ bʲ⟩ of the steady state.
///
/// `j_order = 1` is the mean photon density (real up to roundoff);
/// `j_order = 2` feeds g²(0).
pub fn correlation(j_order: u32, p: &SystemParams, cfg: &SeriesConfig) -> Result<C64> {
    if j_order == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    if p.u == 0.0 {
        let n = p.linear_coherence().norm_sqr();
        return Ok(C64::new(n.powi(j_order as i32), 0.0));
    }
    let (c, x4, x8) = series_arguments(p);
    let denom = hyper_series(c, c.conj(), x8, cfg)?;
    let numer = hyper_series(c + j_order as f64, c.conj() + j_order as f64, x8, cfg)?;
    let poch = pochhammer(c, j_order) * pochhammer(c.conj(), j_order);
    let value = x4.powi(j_order as i32) / poch * numer / denom;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonFinite("correlation"));
    }
    Ok(value)
}

/// Steady-state field coherence ⟨b⟩.
pub fn coherence(p: &SystemParams, cfg: &SeriesConfig) -> Result<C64> {
    if p.u == 0.0 {
        return Ok(p.linear_coherence());
    }
    let (c, _, x8) = series_arguments(p);
    let denom = hyper_series(c, c.conj(), x8, cfg)?;
    let numer = hyper_series(c + 1.0, c.conj(), x8, cfg)?;
    let value = p.f / C64::new(p.delta_omega, p.gamma / 2.0) * numer / denom;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonFinite("coherence"));
    }
    Ok(value)
}

/// Full steady-state density matrix on |0⟩..|n_max⟩, trace-renormalized
/// after truncation.
///
/// Fails with `TruncationTooSmall` unless the top-level population is
/// below 1e−10.
pub fn density_matrix(p: &SystemParams, n_max: usize, cfg: &SeriesConfig) -> Result<DensityMatrix> {
    if p.u == 0.0 {
        return coherent_rho(p.linear_coherence(), n_max);
    }
    let d = n_max + 1;
    let (c, x4, x8) = series_arguments(p);
    let denom = hyper_series(c, c.conj(), x8, cfg)?;

    // row prefactor (−2F/U)^n / √(n!) / (c)_n, built iteratively; the m
    // factor is its conjugate
    let g = -2.0 * p.f / p.u;
    let mut pref = vec![C64::new(1.0, 0.0); d];
    for n in 1..d {
        let prev = c + (n - 1) as f64;
        if prev == C64::new(0.0, 0.0) {
            return Err(Error::PoleHit { term: n });
        }
        pref[n] = pref[n - 1] * g / (n as f64).sqrt() / prev;
    }

    let mut mat = ndarray::Array2::<C64>::zeros((d, d));
    for n in 0..d {
        for m in 0..=n {
            let numer = hyper_series(c + n as f64, c.conj() + m as f64, x4, cfg)?;
            let value = pref[n] * pref[m].conj() * numer / denom;
            mat[[n, m]] = value;
            mat[[m, n]] = value.conj();
        }
    }

    let top = mat[[n_max, n_max]].re;
    if !(top.abs() < 1e-10) {
        return Err(Error::TruncationTooSmall(format!(
            "top-level population {top:.3e} at n_max = {n_max}"
        )));
    }
    let (rho, _) = DensityMatrix::from_matrix_repaired(mat)?;
    Ok(rho)
}

/// Density, g²(0) and coherence evaluated through the closed forms.
pub fn observables(p: &SystemParams, cfg: &SeriesConfig) -> Result<Observables> {
    let c1 = correlation(1, p, cfg)?;
    let n_mean = c1.re;
    if c1.norm() > 0.0 && c1.im.abs() > 1e-8 * c1.norm().max(1e-30) {
        return Err(Error::NonFinite("correlation(1) acquired an imaginary part"));
    }
    let g2 = if n_mean >= G2_DENSITY_FLOOR {
        let c2 = correlation(2, p, cfg)?;
        Some(c2.re / (n_mean * n_mean))
    } else {
        None
    };
    Ok(Observables {
        n_mean,
        g2,
        coherence: coherence(p, cfg)?,
    })
}
