//! Brute-force steady state of the single-site master equation on a
//! truncated Fock space — the ground truth every closed-form result is
//! validated against.
//!
//! The master equation in the rotating frame is
//!
//! ```text
//! ∂_t ρ = −i[H, ρ] + (γ/2)(2 b ρ b† − b†b ρ − ρ b†b),
//! H = −Δω b†b + (U/2) b†b†bb + F′ b† + F′* b,
//! ```
//!
//! with the effective drive F′ = F − J⟨b⟩ supplied by the caller. States
//! are vectorized row-major, vec(ρ)[i·d + j] = ρ_{ij}, so a superoperator
//! sandwich A·ρ·B maps to kron(A, Bᵀ).

use ndarray::linalg::kron;
use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Solve};

use crate::error::{Error, Result};
use crate::fock::{annihilation, creation, identity, number_operator, DensityMatrix, RepairReport};
use crate::params::SystemParams;
use crate::C64;

/// Largest Fock cutoff the adaptive solver will try.
pub const DEFAULT_TRUNCATION_CEILING: usize = 60;
/// Two null directions closer than this flag a degenerate kernel.
pub const KERNEL_DEGENERACY_TOL: f64 = 1e-8;

/// Generator of ∂_t ρ on the vectorized truncated space.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    /// Fock dimension d (= n_max + 1); the matrix is d²×d².
    pub fock_dim: usize,
    pub matrix: Array2<C64>,
}

/// Single-site mean-field Hamiltonian at effective drive `f_eff`.
pub fn hamiltonian(p: &SystemParams, f_eff: C64, n_max: usize) -> Array2<C64> {
    let d = n_max + 1;
    let mut h = Array2::zeros((d, d));
    for k in 0..d {
        let k_f = k as f64;
        h[[k, k]] = C64::new(
            -p.delta_omega * k_f + 0.5 * p.u * k_f * (k_f - 1.0),
            0.0,
        );
    }
    for k in 1..d {
        let s = (k as f64).sqrt();
        h[[k, k - 1]] += f_eff * s;
        h[[k - 1, k]] += f_eff.conj() * s;
    }
    h
}

pub fn build_liouvillian(p: &SystemParams, f_eff: C64, n_max: usize) -> Liouvillian {
    assert!(n_max >= 2, "Liouvillian needs n_max >= 2");
    let d = n_max + 1;
    let h = hamiltonian(p, f_eff, n_max);
    let b = annihilation(n_max);
    let bdag = creation(n_max);
    let n = number_operator(n_max);
    let id = identity(d);

    let ht = h.t().to_owned();
    let bdag_t = bdag.t().to_owned();
    let i = C64::new(0.0, 1.0);
    let mut l = (kron(&h, &id) - kron(&id, &ht)).mapv(|v| -i * v);
    let hop = kron(&b, &bdag_t);
    let decay = kron(&n, &id) + kron(&id, &n);
    l = l + (hop.mapv(|v| v * 2.0) - decay).mapv(|v| v * (p.gamma / 2.0));
    Liouvillian {
        fock_dim: d,
        matrix: l,
    }
}

fn vectorize(rho: &Array2<C64>) -> Array1<C64> {
    Array1::from_iter(rho.iter().cloned())
}

fn unvectorize(v: &Array1<C64>, d: usize) -> Array2<C64> {
    Array2::from_shape_vec((d, d), v.to_vec()).expect("length d^2")
}

/// Row vector representing Tr on the vectorized space.
pub fn trace_functional(d: usize) -> Array1<C64> {
    let mut t = Array1::zeros(d * d);
    for k in 0..d {
        t[k * d + k] = C64::new(1.0, 0.0);
    }
    t
}

fn residual_norm(l: &Liouvillian, rho: &DensityMatrix) -> f64 {
    let r = l.matrix.dot(&vectorize(rho.matrix()));
    r.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn residual_tolerance(l: &Liouvillian) -> f64 {
    let scale = l
        .matrix
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.norm()))
        .max(1.0);
    1e-10 * scale
}

/// Steady state by a linear solve with the ρ₀₀ row replaced by the trace
/// constraint, followed by hermitization and trace rescaling.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    steady_state_with_report(l).map(|(rho, _)| rho)
}

/// Same as [`steady_state`] but also reports the pre-repair hermiticity and
/// trace deviations of the raw solver output.
pub fn steady_state_with_report(l: &Liouvillian) -> Result<(DensityMatrix, RepairReport)> {
    let d = l.fock_dim;
    let n2 = d * d;
    let mut a = l.matrix.clone();
    for col in 0..n2 {
        a[[0, col]] = C64::new(0.0, 0.0);
    }
    for k in 0..d {
        a[[0, k * d + k]] = C64::new(1.0, 0.0);
    }
    let mut rhs = Array1::zeros(n2);
    rhs[0] = C64::new(1.0, 0.0);
    let x = a
        .solve_into(rhs)
        .map_err(|e| Error::Linalg(format!("steady-state solve: {e}")))?;
    let raw = unvectorize(&x, d);
    let (rho, report) = DensityMatrix::from_matrix_repaired(raw)?;
    let residual = residual_norm(l, &rho);
    let tol = residual_tolerance(l);
    if residual > tol {
        return Err(Error::SteadyStateResidual { residual, tol });
    }
    Ok((rho, report))
}

/// Eigensolver route to the steady state: extracts the kernel of L and
/// verifies it is one-dimensional. Retained as a cross-check for the
/// linear-solve path; prefer [`steady_state`] in production sweeps.
pub fn steady_state_eig(l: &Liouvillian) -> Result<DensityMatrix> {
    let (values, vectors) = l
        .matrix
        .eig()
        .map_err(|e| Error::EigenFailure(format!("Liouvillian eig: {e}")))?;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].norm().partial_cmp(&values[b].norm()).unwrap());
    let kernel = order[0];
    let second = values[order[1]].norm();
    if second < KERNEL_DEGENERACY_TOL {
        return Err(Error::DegenerateKernel { second });
    }
    let v = vectors.column(kernel).to_owned();
    let raw = unvectorize(&v, l.fock_dim);
    let (rho, _) = DensityMatrix::from_matrix_repaired(raw)?;
    let residual = residual_norm(l, &rho);
    let tol = residual_tolerance(l);
    if residual > tol {
        return Err(Error::SteadyStateResidual { residual, tol });
    }
    Ok(rho)
}

/// Steady state at the smallest truncation whose top-level population is
/// below `leak_tol` (the chosen n_max is `result.n_max()`).
///
/// Grows the cutoff geometrically to bracket the target, then bisects the
/// bracket; fails with `TruncationCeiling` if even `ceiling` leaks.
pub fn adaptive_steady_state(
    p: &SystemParams,
    f_eff: C64,
    leak_tol: f64,
    ceiling: usize,
) -> Result<DensityMatrix> {
    assert!(leak_tol > 0.0);
    let solve = |n_max: usize| -> Result<DensityMatrix> {
        steady_state(&build_liouvillian(p, f_eff, n_max))
    };
    let leak_ok = |rho: &DensityMatrix| rho.population(rho.n_max()) < leak_tol;

    let mut n_max = 4.min(ceiling).max(2);
    let mut rho = solve(n_max)?;
    if leak_ok(&rho) {
        // shrink toward the smallest admissible cutoff
        while n_max > 2 {
            let candidate = solve(n_max - 1)?;
            if leak_ok(&candidate) {
                n_max -= 1;
                rho = candidate;
            } else {
                break;
            }
        }
        return Ok(rho);
    }

    // geometric growth to bracket, then bisect (leak is monotone in n_max)
    let mut lo = n_max; // leaks
    loop {
        if lo >= ceiling {
            return Err(Error::TruncationCeiling { ceiling });
        }
        let hi = (lo + (lo / 2).max(2)).min(ceiling);
        let candidate = solve(hi)?;
        if leak_ok(&candidate) {
            let mut lo_leaks = lo;
            let mut hi_ok = hi;
            rho = candidate;
            while hi_ok - lo_leaks > 1 {
                let mid = (lo_leaks + hi_ok) / 2;
                let m = solve(mid)?;
                if leak_ok(&m) {
                    hi_ok = mid;
                    rho = m;
                } else {
                    lo_leaks = mid;
                }
            }
            return Ok(rho);
        }
        lo = hi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::observables_from;
    use approx::assert_relative_eq;

    #[test]
    fn trace_functional_annihilates_the_generator() {
        let p = SystemParams::from_ratios(2.0, 0.4, 0.2, 0.0).unwrap();
        let l = build_liouvillian(&p, p.f, 6);
        let t = trace_functional(l.fock_dim);
        let row = t.dot(&l.matrix);
        let max = row.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        assert!(max < 1e-10, "trace row norm {max}");
    }

    #[test]
    fn closed_system_spectrum_is_imaginary() {
        let p = SystemParams::from_ratios(1.5, 0.0, 0.0, 0.0).unwrap();
        let l = build_liouvillian(&p, C64::new(0.0, 0.0), 4);
        let (values, _) = l.matrix.eig().unwrap();
        for v in values.iter() {
            assert!(v.re.abs() < 1e-10, "eigenvalue {v} has a real part");
        }
    }

    #[test]
    fn vacuum_is_steady_without_drive() {
        let p = SystemParams::from_ratios(2.0, 0.0, 0.2, 0.0).unwrap();
        let l = build_liouvillian(&p, C64::new(0.0, 0.0), 5);
        let vacuum = DensityMatrix::vacuum(6);
        let r = l.matrix.dot(&Array1::from_iter(vacuum.matrix().iter().cloned()));
        let max = r.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        assert!(max < 1e-12);
    }

    #[test]
    fn linear_cavity_steady_state_is_coherent() {
        let p = SystemParams::from_ratios(0.0, 0.3, 0.2, 0.0).unwrap();
        let rho = steady_state(&build_liouvillian(&p, p.f, 14)).unwrap();
        let obs = observables_from(&rho);
        let beta = p.linear_coherence();
        assert!((obs.coherence - beta).norm() < 1e-9);
        assert_relative_eq!(obs.n_mean, beta.norm_sqr(), max_relative = 1e-9);
        assert!((obs.g2.unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn resonant_weak_drive_mixture() {
        let p = SystemParams::from_ratios(2.0, 1e-2, 1e-5, 0.0).unwrap();
        let rho = steady_state(&build_liouvillian(&p, p.f, 8)).unwrap();
        assert!((rho.population(0) - 0.25).abs() < 0.01);
        assert!((rho.population(1) - 0.5).abs() < 0.01);
        assert!((rho.population(2) - 0.25).abs() < 0.01);
    }

    #[test]
    fn eig_route_agrees_with_linear_solve() {
        let p = SystemParams::from_ratios(1.3, 0.35, 0.25, 0.0).unwrap();
        let l = build_liouvillian(&p, p.f, 9);
        let a = steady_state(&l).unwrap();
        let b = steady_state_eig(&l).unwrap();
        let diff = (a.matrix() - b.matrix())
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.norm()));
        assert!(diff < 1e-9, "routes differ by {diff}");
    }

    #[test]
    fn steady_state_is_truncation_converged() {
        let p = SystemParams::from_ratios(2.0, 0.4, 0.2, 0.0).unwrap();
        let rho = adaptive_steady_state(&p, p.f, 1e-12, DEFAULT_TRUNCATION_CEILING).unwrap();
        let n_max = rho.n_max();
        let bigger = steady_state(&build_liouvillian(&p, p.f, n_max + 5)).unwrap();
        let (n1, n2) = (
            observables_from(&rho).n_mean,
            observables_from(&bigger).n_mean,
        );
        assert!((n1 - n2).abs() <= 1e-8 * n2.max(1e-30), "{n1} vs {n2}");
    }

    #[test]
    fn adaptive_truncation_is_monotone_in_leak_tol() {
        let p = SystemParams::from_ratios(2.0, 0.4, 0.2, 0.0).unwrap();
        let loose = adaptive_steady_state(&p, p.f, 1e-8, 60).unwrap();
        let tight = adaptive_steady_state(&p, p.f, 0.5e-8, 60).unwrap();
        assert!(tight.n_max() >= loose.n_max());
    }

    #[test]
    fn adaptive_vacuum_uses_minimal_cutoff() {
        let p = SystemParams::from_ratios(2.0, 0.0, 0.2, 0.0).unwrap();
        let rho = adaptive_steady_state(&p, C64::new(0.0, 0.0), 1e-10, 60).unwrap();
        assert_eq!(rho.n_max(), 2);
        assert!((rho.population(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_ceiling_is_reported() {
        let p = SystemParams::from_ratios(0.01, 1.0, 0.05, 0.0).unwrap();
        // huge drive into a weak nonlinearity wants n ≫ ceiling
        assert!(matches!(
            adaptive_steady_state(&p, C64::new(3.0, 0.0), 1e-12, 16),
            Err(Error::TruncationCeiling { ceiling: 16 })
        ));
    }

    #[test]
    fn repair_deviation_is_small() {
        let p = SystemParams::from_ratios(1.8, 0.3, 0.15, 0.0).unwrap();
        let (_, report) = steady_state_with_report(&build_liouvillian(&p, p.f, 12)).unwrap();
        assert!(report.hermiticity_defect < 1e-9);
        assert!(report.trace_defect < 1e-9);
    }
}
