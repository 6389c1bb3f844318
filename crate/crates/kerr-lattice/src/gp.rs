//! Semiclassical sector: the coherent-field steady state and its
//! fluctuations.
//!
//! When correlations factorize, the lattice mean field β = ⟨b⟩ obeys the
//! single-mode equation
//!
//! ```text
//! i ∂_t β = (−Δω − J − iγ/2 + U|β|²) β + F,
//! ```
//!
//! whose stationary density n = |β|² solves the cubic
//! n((Δω + J − nU)² + γ²/4) = |F|². Three distinct positive roots signal
//! optical bistability; the expansion of the discriminant boundaries in
//! the drive gives the closed-form critical interactions, and linearizing
//! around a root yields the two-branch excitation spectrum
//! ω±(k) = ±√((−Δω − t_k + 2Un)² − U²n²) − iγ/2.

use crate::error::{Error, Result};
use crate::lattice::{tunneling_dispersion, Kpoint, TkNorm};
use crate::numerics::{solve_cubic, CubicRoot};
use crate::params::SystemParams;
use crate::C64;

/// Coherent-field steady state candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GPState {
    pub beta: C64,
    /// Photon density |β|².
    pub n: f64,
}

impl GPState {
    fn from_beta(beta: C64) -> Self {
        Self {
            beta,
            n: beta.norm_sqr(),
        }
    }
}

/// Bistability verdict of a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Monostable,
    Bistable,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Monostable => "monostable",
            Self::Bistable => "bistable",
        }
    }
}

/// Coefficients (a3, a2, a1, a0) of the steady-state density cubic.
pub fn density_cubic_coefficients(p: &SystemParams) -> (f64, f64, f64, f64) {
    let shifted = p.shifted_detuning();
    (
        p.u * p.u,
        -2.0 * p.u * shifted,
        shifted * shifted + p.gamma * p.gamma / 4.0,
        -p.f.norm_sqr(),
    )
}

/// Physical (real, non-negative) roots of the density cubic, ascending in
/// density, with β recovered from β = F/(Δω + J − Un + iγ/2).
pub fn density_roots(p: &SystemParams) -> Result<Vec<GPState>> {
    if p.u == 0.0 {
        let beta = p.f / C64::new(p.shifted_detuning(), p.gamma / 2.0);
        return Ok(vec![GPState::from_beta(beta)]);
    }
    let (a3, a2, a1, a0) = density_cubic_coefficients(p);
    let roots = solve_cubic(a3, a2, a1, a0)?;
    Ok(roots
        .iter()
        .filter(|r| r.value >= 0.0)
        .map(|r| {
            let beta = p.f / C64::new(p.shifted_detuning() - p.u * r.value, p.gamma / 2.0);
            GPState::from_beta(beta)
        })
        .collect())
}

/// Multiplicity-annotated roots, for boundary diagnostics.
pub fn density_cubic_roots(p: &SystemParams) -> Result<Vec<CubicRoot>> {
    let (a3, a2, a1, a0) = density_cubic_coefficients(p);
    solve_cubic(a3, a2, a1, a0)
}

/// Bistable iff the density cubic has three distinct positive roots.
pub fn classify(p: &SystemParams) -> Classification {
    if p.u == 0.0 {
        return Classification::Monostable;
    }
    match density_cubic_roots(p) {
        Ok(roots) => {
            let distinct_positive = roots
                .iter()
                .filter(|r| r.value > 0.0 && r.multiplicity == 1)
                .count();
            if distinct_positive == 3 {
                Classification::Bistable
            } else {
                Classification::Monostable
            }
        }
        Err(_) => Classification::Monostable,
    }
}

pub fn is_bistable(p: &SystemParams) -> bool {
    classify(p) == Classification::Bistable
}

/// Order of the closed-form boundary expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionOrder {
    Leading,
    NextOrder,
}

/// Closed-form expansions of the two bistability boundaries in U, in the
/// same units as `p.u`:
///
/// ```text
/// U_c1/Δω = (γ²/4F²)(1 + J/Δω) − γ⁴/(64 Δω² F² (1 + J/Δω))
/// U_c2/Δω = (4Δω²/27F²)(1 + J/Δω)³ + (γ²/12F²)(1 + J/Δω)
/// ```
///
/// (second terms only at `NextOrder`).
pub fn critical_u(p: &SystemParams, order: ExpansionOrder) -> (f64, f64) {
    let jr = 1.0 + p.j / p.delta_omega;
    let fr = p.f.norm() / p.delta_omega;
    let gr = p.gamma / p.delta_omega;
    let mut uc1 = gr * gr / (4.0 * fr * fr) * jr;
    let mut uc2 = 4.0 * jr.powi(3) / (27.0 * fr * fr);
    if order == ExpansionOrder::NextOrder {
        uc1 -= gr.powi(4) / (64.0 * fr * fr * jr);
        uc2 += gr * gr / (12.0 * fr * fr) * jr;
    }
    (uc1 * p.delta_omega, uc2 * p.delta_omega)
}

/// Two-branch dispersion of fluctuations around `state`, evaluated on a
/// k-path. The radicand is real; a negative value contributes a purely
/// imaginary part through the principal square root, and the branches
/// always satisfy ω₊ + ω₋ = −iγ.
pub fn spectrum(
    p: &SystemParams,
    state: &GPState,
    k_path: &[Kpoint],
    norm: TkNorm,
) -> Vec<(Kpoint, [C64; 2])> {
    k_path
        .iter()
        .map(|&k| {
            let t_k = tunneling_dispersion(p.j, p.z, k, norm);
            let diag = -p.delta_omega - t_k + 2.0 * p.u * state.n;
            let radicand = diag * diag - (p.u * state.n).powi(2);
            let root = C64::new(radicand, 0.0).sqrt();
            let damping = C64::new(0.0, -p.gamma / 2.0);
            (k, [root + damping, -root + damping])
        })
        .collect()
}

/// Fixed-step 4th-order integration of the semiclassical field equation,
/// used to identify basins of attraction rather than for performance.
pub fn evolve(p: &SystemParams, beta0: C64, t_end: f64, dt: f64) -> Result<GPState> {
    let scale = p
        .gamma
        .max(p.shifted_detuning().abs())
        .max(p.u * beta0.norm_sqr());
    let max_dt = 0.1 / scale.max(1e-12);
    if dt > max_dt {
        return Err(Error::StepTooLarge { dt, max_dt });
    }
    let rhs = |beta: C64| -> C64 {
        let coefficient = C64::new(
            -p.shifted_detuning() + p.u * beta.norm_sqr(),
            -p.gamma / 2.0,
        );
        -C64::new(0.0, 1.0) * (coefficient * beta + p.f)
    };
    let mut beta = beta0;
    let mut t = 0.0;
    while t < t_end {
        let h = dt.min(t_end - t);
        let k1 = rhs(beta);
        let k2 = rhs(beta + 0.5 * h * k1);
        let k3 = rhs(beta + 0.5 * h * k2);
        let k4 = rhs(beta + h * k3);
        beta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !beta.re.is_finite() || !beta.im.is_finite() {
            return Err(Error::NonFinite("gp::evolve"));
        }
        t += h;
    }
    Ok(GPState::from_beta(beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn linear_limit_is_a_shifted_lorentzian() {
        let p = SystemParams::from_ratios(0.0, 0.3, 0.2, 1.5).unwrap();
        let roots = density_roots(&p).unwrap();
        assert_eq!(roots.len(), 1);
        let expect = 0.09 / (2.5 * 2.5 + 0.01);
        assert_relative_eq!(roots[0].n, expect, max_relative = 1e-12);
    }

    #[test]
    fn strong_tunneling_density_asymptote() {
        // F, γ → 0 with J large: n → (Δω+J)/U → J/U
        let p = SystemParams::from_ratios(2.0, 1e-4, 1e-5, 200.0).unwrap();
        let top = density_roots(&p)
            .unwrap()
            .into_iter()
            .map(|s| s.n)
            .fold(0.0_f64, f64::max);
        assert!((top * 2.0 / 201.0 - 1.0).abs() < 1e-6);
        assert!((top * 2.0 / 200.0 - 1.0).abs() < 2e-2, "n = {top}");
    }

    #[test]
    fn bistable_point_has_three_roots() {
        // upper panel of the dispersion figure: U = 0.5, J = 3, F = 0.4, γ = 0.2
        let p = SystemParams::from_ratios(0.5, 0.4, 0.2, 3.0).unwrap();
        let roots = density_roots(&p).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots[0].n < 0.1);
        assert!(roots[2].n > 7.0);
        assert_eq!(classify(&p), Classification::Bistable);
        // each root reinserted gives a tiny residual
        let (a3, a2, a1, a0) = density_cubic_coefficients(&p);
        let max_coeff = a3.abs().max(a2.abs()).max(a1.abs()).max(a0.abs());
        for r in &roots {
            let res = ((a3 * r.n + a2) * r.n + a1) * r.n + a0;
            assert!(res.abs() <= 1e-10 * max_coeff, "residual {res}");
        }
    }

    #[test]
    fn beta_phase_is_consistent_with_density() {
        let p = SystemParams::from_ratios(0.5, 0.4, 0.2, 3.0).unwrap();
        for s in density_roots(&p).unwrap() {
            assert!((s.beta.norm_sqr() - s.n).abs() <= 1e-12 * s.n.max(1.0));
        }
    }

    #[test]
    fn classification_depends_only_on_ratios() {
        let base = SystemParams::from_ratios(2.0, 0.4, 0.2, 3.0).unwrap();
        let class = classify(&base);
        for s in [0.137, 7.3, 420.0] {
            let scaled = SystemParams::new(
                s,
                base.u * s,
                base.f * s,
                base.gamma * s,
                base.j * s,
            )
            .unwrap();
            assert_eq!(classify(&scaled), class, "scale {s}");
        }
    }

    #[test]
    fn tunneling_is_a_pure_detuning_shift() {
        let with_j = SystemParams::from_ratios(1.3, 0.35, 0.15, 2.4).unwrap();
        let shifted = SystemParams::new(
            with_j.delta_omega + with_j.j,
            with_j.u,
            with_j.f,
            with_j.gamma,
            0.0,
        )
        .unwrap();
        let (a, b) = (
            density_roots(&with_j).unwrap(),
            density_roots(&shifted).unwrap(),
        );
        assert_eq!(a.len(), b.len());
        for (ra, rb) in a.iter().zip(&b) {
            assert_eq!(ra.n, rb.n);
        }
    }

    #[test]
    fn critical_u_values() {
        // leading term ∝ γ², so U_c1 → 0 with the losses
        let p = SystemParams::from_ratios(1.0, 0.4, 1e-9, 0.0).unwrap();
        let (uc1, _) = critical_u(&p, ExpansionOrder::Leading);
        assert!(uc1 < 1e-17);

        // J = 0, F/Δω = 0.4, γ/Δω = 0.2
        let p = SystemParams::from_ratios(1.0, 0.4, 0.2, 0.0).unwrap();
        let (lead, _) = critical_u(&p, ExpansionOrder::Leading);
        assert_relative_eq!(lead, 0.0625, max_relative = 1e-12);
        let (next, _) = critical_u(&p, ExpansionOrder::NextOrder);
        // correction −γ⁴/(64 Δω² F²) = −0.2⁴/(64·0.16) = −1.5625e−4
        assert_relative_eq!(lead - next, 1.5625e-4, max_relative = 1e-12);
    }

    #[test]
    fn critical_u_expansion_approaches_numeric_boundary() {
        // ratio (numeric boundary)/(next-order expansion) → 1 as F/Δω → 0
        // at fixed γ/F
        let gamma_over_f = 0.4;
        let mut previous_gap = f64::INFINITY;
        for f in [0.2, 0.05] {
            let p = SystemParams::from_ratios(1.0, f, gamma_over_f * f, 0.0).unwrap();
            let (uc1_expn, _) = critical_u(&p, ExpansionOrder::NextOrder);
            // bisect the classification flip around the expansion value
            let (mut lo, mut hi) = (0.2 * uc1_expn, 5.0 * uc1_expn);
            assert!(!is_bistable(&p.with_u(lo)));
            assert!(is_bistable(&p.with_u(hi)));
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if is_bistable(&p.with_u(mid)) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let numeric = 0.5 * (lo + hi);
            let gap = (numeric / uc1_expn - 1.0).abs();
            assert!(gap < previous_gap, "gap {gap} at F = {f}");
            previous_gap = gap;
        }
        assert!(previous_gap < 0.02);
    }

    #[test]
    fn spectrum_branch_sum_and_linear_limit() {
        let p = SystemParams::from_ratios(0.0, 0.3, 0.2, 2.0).unwrap();
        let state = density_roots(&p).unwrap()[0];
        let path = crate::lattice::gamma_x_m_gamma_path(7);
        for (k, [wp, wm]) in spectrum(&p, &state, &path, TkNorm::Corrected) {
            // branch sum is −iγ at every k
            let sum = wp + wm;
            assert!((sum - C64::new(0.0, -p.gamma)).norm() < 1e-12);
            // U = 0: ω± = ±|Δω + t_k| − iγ/2
            let t_k = tunneling_dispersion(p.j, p.z, k, TkNorm::Corrected);
            assert_relative_eq!(wp.re, (1.0 + t_k).abs(), max_relative = 1e-12);
            assert_relative_eq!(wp.im, -0.1, max_relative = 1e-12);
        }
    }

    #[test]
    fn evolve_decays_without_drive() {
        let p = SystemParams::from_ratios(1.0, 0.0, 0.4, 0.0).unwrap();
        let beta0 = C64::new(0.8, -0.3);
        let t_end = 6.0;
        let end = evolve(&p, beta0, t_end, 0.02).unwrap();
        let expect = beta0.norm() * (-p.gamma * t_end / 2.0).exp();
        assert_relative_eq!(end.beta.norm(), expect, max_relative = 1e-5);
    }

    #[test]
    fn evolve_rejects_coarse_steps() {
        let p = SystemParams::from_ratios(1.0, 0.0, 0.4, 9.0).unwrap();
        assert!(matches!(
            evolve(&p, C64::new(1.0, 0.0), 1.0, 0.5),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn evolve_lands_on_the_unique_root() {
        let p = SystemParams::from_ratios(0.4, 0.3, 0.5, 0.0).unwrap();
        assert_eq!(classify(&p), Classification::Monostable);
        let target = density_roots(&p)
            .unwrap()
            .into_iter()
            .map(|s| s.n)
            .fold(0.0_f64, f64::max);
        for seed in [C64::new(0.0, 0.0), C64::new(1.5, 1.0)] {
            let end = evolve(&p, seed, 400.0, 0.05).unwrap();
            assert!(
                (end.n - target).abs() < 1e-6 * target.max(1.0),
                "endpoint {} target {target}",
                end.n
            );
        }
    }

    #[test]
    fn evolve_separates_bistable_basins() {
        let p = SystemParams::from_ratios(0.5, 0.4, 0.2, 3.0).unwrap();
        let roots = density_roots(&p).unwrap();
        let low = evolve(&p, C64::new(0.0, 0.0), 600.0, 0.01).unwrap();
        let high = evolve(&p, roots[2].beta, 600.0, 0.01).unwrap();
        assert!((low.n - roots[0].n).abs() < 1e-5 * roots[0].n.max(1e-3));
        assert!((high.n - roots[2].n).abs() < 1e-5 * roots[2].n);
        assert!(high.n / low.n > 100.0);
    }
}
