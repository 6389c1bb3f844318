//! Square-lattice tunneling dispersion and Brillouin-zone paths.
//!
//! The dispersion normalization is shared by the semiclassical and the
//! full linearized spectra (single source of truth). With coordination
//! z = 4 the corrected form gives t_{k=0} = J, matching the frequency
//! shift Δω → Δω + J of the semiclassical steady state; the `AsPrinted`
//! variant (t_k = J/z·(cos kx + cos ky), i.e. t_0 = J/2 at z = 4) is kept
//! as a switch for comparison.

use std::f64::consts::PI;

/// Normalization of the tunneling dispersion t_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TkNorm {
    /// t_k = (2J/z)(cos kx·a + cos ky·a), so t_0 = J at z = 4.
    #[default]
    Corrected,
    /// t_k = (J/z)(cos kx·a + cos ky·a), so t_0 = J/2 at z = 4.
    AsPrinted,
}

impl TkNorm {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "corrected" => Some(Self::Corrected),
            "as-printed" | "printed" => Some(Self::AsPrinted),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Corrected => "corrected",
            Self::AsPrinted => "as-printed",
        }
    }
}

/// A point of the square-lattice Brillouin zone, in units of 1/a (a ≡ 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kpoint {
    pub x: f64,
    pub y: f64,
}

impl Kpoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn negated(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
        }
    }
}

/// Tunneling dispersion t_k on the square lattice.
pub fn tunneling_dispersion(j: f64, z: usize, k: Kpoint, norm: TkNorm) -> f64 {
    let prefactor = match norm {
        TkNorm::Corrected => 2.0 * j / z as f64,
        TkNorm::AsPrinted => j / z as f64,
    };
    prefactor * (k.x.cos() + k.y.cos())
}

/// High-symmetry path Γ(0,0) → X(π,0) → M(π,π) → Γ with `per_segment`
/// points per leg (the closing Γ is included once).
pub fn gamma_x_m_gamma_path(per_segment: usize) -> Vec<Kpoint> {
    assert!(per_segment >= 1);
    let corners = [
        Kpoint::new(0.0, 0.0),
        Kpoint::new(PI, 0.0),
        Kpoint::new(PI, PI),
        Kpoint::new(0.0, 0.0),
    ];
    let mut path = Vec::with_capacity(3 * per_segment + 1);
    for seg in 0..3 {
        let (a, b) = (corners[seg], corners[seg + 1]);
        for i in 0..per_segment {
            let t = i as f64 / per_segment as f64;
            path.push(Kpoint::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        }
    }
    path.push(corners[3]);
    path
}

/// Cumulative arc-length parameter along a k-path, for plotting.
pub fn path_parameter(path: &[Kpoint]) -> Vec<f64> {
    let mut s = Vec::with_capacity(path.len());
    let mut acc = 0.0;
    for (i, k) in path.iter().enumerate() {
        if i > 0 {
            let p = path[i - 1];
            acc += ((k.x - p.x).powi(2) + (k.y - p.y).powi(2)).sqrt();
        }
        s.push(acc);
    }
    s
}

/// Uniform nk×nk grid over [0, π]² (t_k is even and 2π-periodic in each
/// component, so this quadrant samples every dispersion value).
pub fn bz_grid(nk: usize) -> Vec<Kpoint> {
    assert!(nk >= 2);
    let mut pts = Vec::with_capacity(nk * nk);
    for ix in 0..nk {
        for iy in 0..nk {
            pts.push(Kpoint::new(
                PI * ix as f64 / (nk - 1) as f64,
                PI * iy as f64 / (nk - 1) as f64,
            ));
        }
    }
    pts
}
