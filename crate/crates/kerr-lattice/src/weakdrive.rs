//! Closed-form weak-pumping / weak-dissipation limits.
//!
//! At an n-photon resonance (U/Δω = 2/(n−1)) and drive-dominated damping
//! the steady state is a binomial mixture of the lowest n+1 Fock states;
//! off resonance the state stays perturbatively close to vacuum. Both
//! regimes, their observables, and the mean-field coherences they imply
//! are available here in closed form.

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, Observables};
use crate::params::SystemParams;
use crate::C64;

/// Guard radius around the u = 1 and u = 2 resonances inside which the
/// perturbative density matrix is refused.
pub const RESONANCE_GUARD: f64 = 0.1;
/// Ratios above this trigger a validity warning (the limits are asymptotic).
pub const VALIDITY_LIMIT: f64 = 0.1;

/// Dimensionless weak-drive parameters ε = F/Δω, η = γ/Δω, u = U/Δω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakDriveParams {
    pub epsilon: f64,
    pub eta: f64,
    pub u: f64,
}

impl WeakDriveParams {
    pub fn new(epsilon: f64, eta: f64, u: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !(eta > 0.0) || !u.is_finite() {
            return Err(Error::InvalidParams(format!(
                "weak-drive parameters epsilon = {epsilon}, eta = {eta}, u = {u}"
            )));
        }
        Ok(Self { epsilon, eta, u })
    }

    pub fn from_params(p: &SystemParams) -> Result<Self> {
        Self::new(
            p.f.norm() / p.delta_omega,
            p.gamma / p.delta_omega,
            p.u / p.delta_omega,
        )
    }

    /// The expansion is asymptotic; report rather than refuse when ε or η
    /// leave the weak regime.
    pub fn validity_warning(&self) -> Option<String> {
        (self.epsilon > VALIDITY_LIMIT || self.eta > VALIDITY_LIMIT).then(|| {
            format!(
                "weak-drive expansion stretched: epsilon = {:.3}, eta = {:.3} (soft limit {})",
                self.epsilon, self.eta, VALIDITY_LIMIT
            )
        })
    }
}

/// Detuning ratio U/Δω = 2/(n−1) at which n pump photons match n
/// interacting cavity photons.
pub fn resonance_detuning(n: u32) -> f64 {
    assert!(n >= 2, "multiphoton resonance needs n >= 2");
    2.0 / (n as f64 - 1.0)
}

/// Interpolation parameter ξ = 1/(1 + 8ε⁴/η²) of the two-photon resonance:
/// ξ → 1 is dissipation-dominated, ξ → 0 drive-dominated.
pub fn xi(epsilon: f64, eta: f64) -> f64 {
    1.0 / (1.0 + 8.0 * epsilon.powi(4) / (eta * eta))
}

/// Damping ratio η reproducing a given ξ at fixed ε.
pub fn eta_for_xi(epsilon: f64, xi: f64) -> f64 {
    epsilon * epsilon * (8.0 * xi / (1.0 - xi)).sqrt()
}

/// Two-photon-resonance observables ⟨b†b⟩ = 1−ξ, g²(0) = 1/(2(1−ξ)), with
/// the coherence from [`two_photon_coherence`].
pub fn two_photon_observables(xi: f64, p: &SystemParams) -> Result<Observables> {
    if !(0.0..1.0).contains(&xi) {
        return Err(Error::XiOutOfRange { xi });
    }
    Ok(Observables {
        n_mean: 1.0 - xi,
        g2: Some(1.0 / (2.0 * (1.0 - xi))),
        coherence: two_photon_coherence(p, xi),
    })
}

/// Two-photon-resonance coherence ⟨b⟩ = (F/Δω)(2ξ−1) + i(γ/2F)(ξ−1).
pub fn two_photon_coherence(p: &SystemParams, xi: f64) -> C64 {
    let f = p.f.norm();
    C64::new(
        f / p.delta_omega * (2.0 * xi - 1.0),
        p.gamma / (2.0 * f) * (xi - 1.0),
    )
}

/// Drive-dominated n-photon mixture ρ⁽ⁿ⁾ = 2⁻ⁿ Σ_k C(n,k)|k⟩⟨k|, with
/// ⟨b†b⟩ = n/2 and g²(0) = 1 − 1/n.
pub fn binomial_mixture(n: u32) -> DensityMatrix {
    assert!(n >= 1);
    let mut pops = Vec::with_capacity(n as usize + 1);
    let mut binom = 1.0_f64;
    let norm = 0.5_f64.powi(n as i32);
    for k in 0..=n {
        pops.push(binom * norm);
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    DensityMatrix::from_populations(&pops).expect("binomial mixture is a valid state")
}

/// Perturbative 3×3 stationary density matrix away from the two- and
/// three-photon resonances, trace-renormalized.
///
/// Leading observables: ⟨b†b⟩ = ε², g²(0) = 4/(2−u)². Within the guard
/// radius of u = 1 or u = 2 the expansion breaks down and `NearResonance`
/// is returned.
pub fn offres_density_matrix(w: &WeakDriveParams) -> Result<DensityMatrix> {
    let (eps, eta, u) = (w.epsilon, w.eta, w.u);
    for resonance in [1.0, 2.0] {
        if (u - resonance).abs() < RESONANCE_GUARD {
            return Err(Error::NearResonance {
                u,
                guard: RESONANCE_GUARD,
            });
        }
    }
    let s2 = 2.0_f64.sqrt();
    let i = C64::new(0.0, 1.0);
    let r01 = eps * (1.0 + i * eta / 2.0);
    let r02 = s2 * eps * eps / (2.0 - u) * (1.0 + i * eta / 2.0 * (4.0 - u) / (2.0 - u));
    let r12 = s2 * eps.powi(3) / (2.0 - u) * (1.0 + i * eta / (2.0 - u));
    let mut mat = ndarray::Array2::<C64>::zeros((3, 3));
    mat[[0, 0]] = C64::new(1.0, 0.0);
    mat[[1, 1]] = C64::new(eps * eps, 0.0);
    mat[[2, 2]] = C64::new(2.0 * eps.powi(4) / (2.0 - u).powi(2), 0.0);
    mat[[0, 1]] = r01;
    mat[[1, 0]] = r01.conj();
    mat[[0, 2]] = r02;
    mat[[2, 0]] = r02.conj();
    mat[[1, 2]] = r12;
    mat[[2, 1]] = r12.conj();
    let (rho, _) = DensityMatrix::from_matrix_repaired(mat)?;
    Ok(rho)
}

/// Mean-field coherence on an n-photon resonance together with the critical
/// coupling J_c = Δω/(n−1) at which it diverges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantCoherence {
    pub b: C64,
    pub j_critical: f64,
}

/// Resonant branch: ⟨b⟩ = −(n−1)(F/Δω)/(1 − (n−1)J/Δω).
pub fn resonant_mf_coherence(n: u32, p: &SystemParams) -> Result<ResonantCoherence> {
    assert!(n >= 2);
    let order = n as f64 - 1.0;
    let j_critical = p.delta_omega / order;
    let denominator = 1.0 - order * p.j / p.delta_omega;
    if denominator.abs() < 1e-12 {
        return Err(Error::AtCriticalCoupling { j_critical });
    }
    Ok(ResonantCoherence {
        b: -order * p.f / p.delta_omega / denominator,
        j_critical,
    })
}

/// Off-resonant branch: ⟨b⟩ = (F/Δω)/(1 + J/Δω); the effective pump only
/// weakens with J, so no crossover occurs.
pub fn offresonant_mf_coherence(p: &SystemParams) -> C64 {
    p.f / p.delta_omega / (1.0 + p.j / p.delta_omega)
}
