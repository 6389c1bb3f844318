//! Dense operators and states on a truncated Fock space.

use ndarray::Array2;
use ndarray_linalg::{EigValsh, UPLO};

use crate::error::{Error, Result};
use crate::C64;

/// Hermiticity tolerance accepted by [`DensityMatrix`].
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Trace-one tolerance accepted by [`DensityMatrix`].
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue tolerated (truncation leak allowance).
pub const POSITIVITY_FLOOR: f64 = -1e-8;
/// Mean density below which g²(0) is reported as undefined.
pub const G2_DENSITY_FLOOR: f64 = 1e-12;

/// Annihilation operator b on the space |0⟩..|n_max⟩: entries[k−1, k] = √k.
pub fn annihilation(n_max: usize) -> Array2<C64> {
    assert!(n_max >= 1, "annihilation needs n_max >= 1");
    let d = n_max + 1;
    let mut b = Array2::zeros((d, d));
    for k in 1..d {
        b[[k - 1, k]] = C64::new((k as f64).sqrt(), 0.0);
    }
    b
}

/// Creation operator b† (transpose of the real annihilation matrix).
pub fn creation(n_max: usize) -> Array2<C64> {
    annihilation(n_max).t().to_owned()
}

/// Number operator b†b = diag(0, 1, …, n_max).
pub fn number_operator(n_max: usize) -> Array2<C64> {
    let d = n_max + 1;
    Array2::from_diag(&ndarray::Array1::from_iter(
        (0..d).map(|k| C64::new(k as f64, 0.0)),
    ))
}

pub fn identity(dim: usize) -> Array2<C64> {
    Array2::eye(dim)
}

/// Deviation removed by hermitization and trace rescaling when a raw
/// matrix is repaired into a [`DensityMatrix`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepairReport {
    /// max |ρ − ρ†| before symmetrization.
    pub hermiticity_defect: f64,
    /// |Tr ρ − 1| before rescaling.
    pub trace_defect: f64,
}

/// Hermitian, trace-one state on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: Array2<C64>,
}

impl DensityMatrix {
    /// Validates hermiticity and trace at 1e−10 and positivity down to
    /// −1e−8 (eigenvalues slightly below zero are truncation leakage, not
    /// corruption).
    pub fn from_matrix(mat: Array2<C64>) -> Result<Self> {
        let d = mat.nrows();
        if d < 2 || mat.ncols() != d {
            return Err(Error::InvalidState(format!(
                "density matrix must be square with dim >= 2, got {}x{}",
                d,
                mat.ncols()
            )));
        }
        let mut herm = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                let v = mat[[i, j]];
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::InvalidState("non-finite entry".into()));
                }
                herm = herm.max((v - mat[[j, i]].conj()).norm());
            }
        }
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "hermiticity defect {herm:.3e} exceeds {HERMITICITY_TOL:.1e}"
            )));
        }
        let trace: C64 = (0..d).map(|k| mat[[k, k]]).sum();
        if (trace - 1.0).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace defect {:.3e} exceeds {TRACE_TOL:.1e}",
                (trace - 1.0).norm()
            )));
        }
        let eigs = mat.eigvalsh(UPLO::Lower)?;
        if let Some(min) = eigs.iter().cloned().reduce(f64::min) {
            if min < POSITIVITY_FLOOR {
                return Err(Error::InvalidState(format!(
                    "smallest eigenvalue {min:.3e} below {POSITIVITY_FLOOR:.1e}"
                )));
            }
        }
        Ok(Self { mat })
    }

    /// Symmetrizes ρ ← (ρ + ρ†)/2, rescales the trace to one, then
    /// validates. The report carries the pre-repair deviations.
    pub fn from_matrix_repaired(mat: Array2<C64>) -> Result<(Self, RepairReport)> {
        let d = mat.nrows();
        if d < 2 || mat.ncols() != d {
            return Err(Error::InvalidState(format!(
                "density matrix must be square with dim >= 2, got {}x{}",
                d,
                mat.ncols()
            )));
        }
        let mut herm = 0.0_f64;
        let mut sym = Array2::<C64>::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                herm = herm.max((mat[[i, j]] - mat[[j, i]].conj()).norm());
                sym[[i, j]] = 0.5 * (mat[[i, j]] + mat[[j, i]].conj());
            }
        }
        let trace: C64 = (0..d).map(|k| sym[[k, k]]).sum();
        if trace.norm() < 1e-300 {
            return Err(Error::InvalidState("zero trace, cannot normalize".into()));
        }
        let report = RepairReport {
            hermiticity_defect: herm,
            trace_defect: (trace - 1.0).norm(),
        };
        let sym = sym.mapv(|v| v / trace.re);
        Ok((Self::from_matrix(sym)?, report))
    }

    pub fn vacuum(dim: usize) -> Self {
        let mut mat = Array2::zeros((dim, dim));
        mat[[0, 0]] = C64::new(1.0, 0.0);
        Self { mat }
    }

    pub fn from_populations(populations: &[f64]) -> Result<Self> {
        let mat = Array2::from_diag(&ndarray::Array1::from_iter(
            populations.iter().map(|&p| C64::new(p, 0.0)),
        ));
        Self::from_matrix(mat)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Largest Fock index, dim − 1.
    pub fn n_max(&self) -> usize {
        self.dim() - 1
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn population(&self, k: usize) -> f64 {
        self.mat[[k, k]].re
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.population(k)).collect()
    }

    /// Tr(op · ρ).
    pub fn expectation(&self, op: &Array2<C64>) -> C64 {
        let prod = op.dot(&self.mat);
        (0..self.dim()).map(|k| prod[[k, k]]).sum()
    }

    /// JSON form `{dim, re[][], im[][]}` used by the CLI.
    pub fn to_json(&self) -> serde_json::Value {
        let d = self.dim();
        let re: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|j| self.mat[[i, j]].re).collect())
            .collect();
        let im: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|j| self.mat[[i, j]].im).collect())
            .collect();
        serde_json::json!({ "dim": d, "re": re, "im": im })
    }
}

/// Steady-state observables of one site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    /// Mean photon density ⟨b†b⟩.
    pub n_mean: f64,
    /// Zero-delay autocorrelation g²(0); `None` below the density floor.
    pub g2: Option<f64>,
    /// Field coherence ⟨b⟩.
    pub coherence: C64,
}

impl Observables {
    pub fn g2_required(&self) -> Result<f64> {
        self.g2.ok_or(Error::G2Undefined {
            n_mean: self.n_mean,
        })
    }
}

/// Extracts ⟨b†b⟩, g²(0) = ⟨b†b†bb⟩/⟨b†b⟩², and ⟨b⟩ from a state.
pub fn observables_from(rho: &DensityMatrix) -> Observables {
    let d = rho.dim();
    let mut n_mean = 0.0;
    let mut pair = 0.0;
    for k in 0..d {
        let p = rho.population(k);
        n_mean += k as f64 * p;
        pair += (k * k.saturating_sub(1)) as f64 * p;
    }
    let coherence: C64 = (0..d - 1)
        .map(|k| ((k + 1) as f64).sqrt() * rho.matrix()[[k + 1, k]])
        .sum();
    let g2 = (n_mean >= G2_DENSITY_FLOOR).then(|| pair / (n_mean * n_mean));
    Observables {
        n_mean,
        g2,
        coherence,
    }
}

/// Truncated coherent state |α⟩⟨α|, renormalized on the truncated space.
///
/// Requires |α|² ≤ n_max/4 so the Poisson tail fits inside the truncation.
pub fn coherent_rho(alpha: C64, n_max: usize) -> Result<DensityMatrix> {
    if alpha.norm_sqr() > n_max as f64 / 4.0 {
        return Err(Error::TruncationTooSmall(format!(
            "|alpha|^2 = {:.3e} exceeds n_max/4 = {:.3e}",
            alpha.norm_sqr(),
            n_max as f64 / 4.0
        )));
    }
    let d = n_max + 1;
    let mut amp = vec![C64::new(1.0, 0.0); d];
    for k in 1..d {
        amp[k] = amp[k - 1] * alpha / (k as f64).sqrt();
    }
    let norm: f64 = amp.iter().map(|a| a.norm_sqr()).sum();
    let norm = norm.sqrt();
    let mut mat = Array2::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            mat[[i, j]] = amp[i] * amp[j].conj() / (norm * norm);
        }
    }
    DensityMatrix::from_matrix(mat)
}
