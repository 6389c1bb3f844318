//! Physical parameters of the driven lattice.

use crate::error::{Error, Result};
use crate::C64;

/// Parameter set of the driven-dissipative lattice, all rates in the same
/// frequency units.
///
/// `delta_omega` is the pump-cavity detuning ω_p − ω_c, `u` the on-site
/// Kerr repulsion, `f` the coherent drive amplitude, `gamma` the photon
/// loss rate, `j` the tunneling amplitude and `z` the lattice coordination
/// number. The CLI normalizes everything to Δω = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub delta_omega: f64,
    pub u: f64,
    pub f: C64,
    pub gamma: f64,
    pub j: f64,
    pub z: usize,
}

impl SystemParams {
    pub const DEFAULT_COORDINATION: usize = 4;

    pub fn new(delta_omega: f64, u: f64, f: C64, gamma: f64, j: f64) -> Result<Self> {
        let p = Self {
            delta_omega,
            u,
            f,
            gamma,
            j,
            z: Self::DEFAULT_COORDINATION,
        };
        p.validate()?;
        Ok(p)
    }

    /// All rates as ratios of the detuning, with Δω = 1 and a real drive.
    pub fn from_ratios(u: f64, f: f64, gamma: f64, j: f64) -> Result<Self> {
        Self::new(1.0, u, C64::new(f, 0.0), gamma, j)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.delta_omega.is_finite()
            || !self.u.is_finite()
            || !self.gamma.is_finite()
            || !self.j.is_finite()
            || !self.f.re.is_finite()
            || !self.f.im.is_finite()
        {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidParams(format!("gamma = {} < 0", self.gamma)));
        }
        if self.u < 0.0 {
            return Err(Error::InvalidParams(format!("u = {} < 0", self.u)));
        }
        if self.j < 0.0 {
            return Err(Error::InvalidParams(format!("j = {} < 0", self.j)));
        }
        if self.z == 0 {
            return Err(Error::InvalidParams("coordination number z = 0".into()));
        }
        Ok(())
    }

    pub fn with_drive(&self, f: C64) -> Self {
        Self { f, ..*self }
    }

    pub fn with_u(&self, u: f64) -> Self {
        Self { u, ..*self }
    }

    pub fn with_j(&self, j: f64) -> Self {
        Self { j, ..*self }
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self { gamma, ..*self }
    }

    /// Series parameter c = 2(−Δω − iγ/2)/U of the closed-form solution.
    pub fn hypergeometric_c(&self) -> C64 {
        2.0 * C64::new(-self.delta_omega, -self.gamma / 2.0) / self.u
    }

    /// Effective drive after the mean-field decoupling, F − J⟨b⟩.
    pub fn effective_drive(&self, b: C64) -> C64 {
        self.f - self.j * b
    }

    /// Detuning including the lattice shift, Δω + J.
    pub fn shifted_detuning(&self) -> f64 {
        self.delta_omega + self.j
    }

    /// Steady-state coherence of the linear (U = 0) cavity, F/(Δω + iγ/2).
    pub fn linear_coherence(&self) -> C64 {
        self.f / C64::new(self.delta_omega, self.gamma / 2.0)
    }
}
