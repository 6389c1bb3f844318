//! Scalar and series primitives shared by every solver.
//!
//! Everything here is a pure function of its inputs: Pochhammer products,
//! the two-denominator hypergeometric-type series evaluated by term
//! recursion, real cubic roots, and a damped-iteration fixed-point finder
//! on the complex plane. Gamma functions never appear; every gamma ratio
//! in the closed forms reduces to a finite Pochhammer product, which stays
//! exact arbitrarily close to the series poles.

use crate::error::{Error, Result};
use crate::C64;

/// Stopping rule for series summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Relative size below which a term counts as converged.
    pub rel_tol: f64,
    /// Hard cap on the number of summed terms.
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_terms: 10_000,
        }
    }
}

impl SeriesConfig {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || max_terms == 0 {
            return Err(Error::InvalidParams(format!(
                "series config rel_tol = {rel_tol}, max_terms = {max_terms}"
            )));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

/// Rising factorial c(c+1)⋯(c+j−1); the empty product (j = 0) is one.
pub fn pochhammer(c: C64, j: u32) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    for k in 0..j {
        acc *= c + f64::from(k);
    }
    acc
}

/// The series 𝔉(c, d, z) = Σ_k z^k / (k! (c)_k (d)_k), summed by the term
/// recursion term_{k+1} = term_k · z / ((c+k)(d+k)(k+1)).
///
/// Near a multiphoton resonance one of the denominators passes close to
/// zero, so the term sequence spikes before it decays; terms are therefore
/// accumulated strictly in index order and convergence is declared only
/// after two consecutive terms fall below `rel_tol` relative to the
/// partial sum.
pub fn hyper_series(c: C64, d: C64, z: f64, cfg: &SeriesConfig) -> Result<C64> {
    let zero = C64::new(0.0, 0.0);
    let mut sum = C64::new(1.0, 0.0);
    let mut term = C64::new(1.0, 0.0);
    let mut small_run = 0usize;
    for k in 0..cfg.max_terms {
        let kf = k as f64;
        let denom = (c + kf) * (d + kf) * (kf + 1.0);
        if denom == zero {
            return Err(Error::PoleHit { term: k + 1 });
        }
        term = term * z / denom;
        sum += term;
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(Error::NonFinite("hyper_series"));
        }
        if term.norm() <= cfg.rel_tol * sum.norm() {
            small_run += 1;
            if small_run >= 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NoConvergence {
        max_terms: cfg.max_terms,
        last_ratio: term.norm() / sum.norm(),
    })
}

/// A real cubic root with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoot {
    pub value: f64,
    pub multiplicity: u8,
}

/// All real roots of a3·x³ + a2·x² + a1·x + a0, sorted ascending, with
/// multiplicities. Roots are Newton-polished so that the residual stays
/// below 1e−10 × max|coefficient| for well-scaled inputs.
pub fn solve_cubic(a3: f64, a2: f64, a1: f64, a0: f64) -> Result<Vec<CubicRoot>> {
    if a3 == 0.0 {
        return Err(Error::DegenerateCubic);
    }
    let p = a2 / a3;
    let q = a1 / a3;
    let r = a0 / a3;
    // depressed form t³ + a·t + b, with x = t − p/3
    let a = q - p * p / 3.0;
    let b = 2.0 * p.powi(3) / 27.0 - p * q / 3.0 + r;
    let shift = -p / 3.0;
    let disc = -4.0 * a * a * a - 27.0 * b * b;

    let ts: Vec<f64> = if a == 0.0 && b == 0.0 {
        vec![0.0, 0.0, 0.0]
    } else if disc > 0.0 {
        // three distinct real roots (a < 0 here)
        let m = 2.0 * (-a / 3.0).sqrt();
        let phi = (3.0 * b / (a * m)).clamp(-1.0, 1.0).acos();
        (0..3)
            .map(|k| m * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos())
            .collect()
    } else if disc == 0.0 {
        // one double root and one simple root
        let s = -3.0 * b / (2.0 * a);
        vec![s, s, 3.0 * b / a]
    } else {
        // single real root; pick the larger-magnitude cube-root argument to
        // avoid cancellation
        let d = (b * b / 4.0 + a * a * a / 27.0).sqrt();
        let s = if b >= 0.0 { -b / 2.0 - d } else { -b / 2.0 + d };
        let u = s.cbrt();
        vec![if u == 0.0 { 0.0 } else { u - a / (3.0 * u) }]
    };

    let eval = |x: f64| ((a3 * x + a2) * x + a1) * x + a0;
    let deriv = |x: f64| (3.0 * a3 * x + 2.0 * a2) * x + a1;

    let mut xs: Vec<f64> = ts
        .into_iter()
        .map(|t| {
            let mut x = t + shift;
            for _ in 0..4 {
                let d = deriv(x);
                if d.abs() < 1e-300 {
                    break;
                }
                let step = eval(x) / d;
                if !step.is_finite() {
                    break;
                }
                x -= step;
            }
            x
        })
        .collect();
    xs.sort_by(|l, r| l.partial_cmp(r).unwrap());

    let scale = xs.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let merge_tol = 1e-7 * scale;
    let mut roots: Vec<CubicRoot> = Vec::new();
    for x in xs {
        match roots.last_mut() {
            Some(last) if (x - last.value).abs() <= merge_tol => last.multiplicity += 1,
            _ => roots.push(CubicRoot {
                value: x,
                multiplicity: 1,
            }),
        }
    }
    Ok(roots)
}

/// A fixed point of a complex map together with how it was reached.
#[derive(Debug, Clone, Copy)]
pub struct FixedPoint {
    pub value: C64,
    /// The point was reached by damped iteration of the map itself (and is
    /// therefore attracting for the iteration), not only by Newton search.
    pub attracting: bool,
    /// |map(x) − x| at the returned point.
    pub residual: f64,
}

const DAMPINGS: [f64; 4] = [1.0, 0.5, 0.2, 0.05];
const MAX_ITER: usize = 500;
const NEWTON_MAX_ITER: usize = 50;
const DIVERGENCE_RADIUS: f64 = 1e8;

/// Distinct fixed points of `map` reachable from `seeds`, deduplicated at
/// distance 10·tol.
///
/// Each seed is first driven by damped iteration x ← (1−α)x + α·map(x)
/// over a ladder of dampings; the result (or the raw seed, when iteration
/// diverges — repelling fixed points are still of interest) is refined by
/// a Newton search on the two-real-dimensional system map(x) − x = 0.
/// Map evaluation errors inside a basin abandon that attempt rather than
/// aborting the search.
pub fn find_fixed_points_detailed<M>(map: M, seeds: &[C64], tol: f64) -> Result<Vec<FixedPoint>>
where
    M: Fn(C64) -> Result<C64>,
{
    let eval = |x: C64| -> Option<C64> {
        let fx = map(x).ok()?;
        (fx.re.is_finite() && fx.im.is_finite()).then_some(fx)
    };

    let mut found: Vec<FixedPoint> = Vec::new();
    for &seed in seeds {
        let mut iterate: Option<C64> = None;
        'damping: for &alpha in &DAMPINGS {
            let mut x = seed;
            for _ in 0..MAX_ITER {
                let Some(fx) = eval(x) else { continue 'damping };
                let g = fx - x;
                if g.norm() <= 0.5 * tol {
                    iterate = Some(x);
                    break 'damping;
                }
                x = (1.0 - alpha) * x + alpha * fx;
                if x.norm() > DIVERGENCE_RADIUS {
                    continue 'damping;
                }
            }
        }
        let attracting = iterate.is_some();
        let start = iterate.unwrap_or(seed);
        if let Some(value) = newton_fixed_point(&eval, start, tol) {
            let residual = eval(value).map_or(f64::INFINITY, |fx| (fx - value).norm());
            if residual <= tol {
                found.push(FixedPoint {
                    value,
                    attracting,
                    residual,
                });
            }
        } else if let Some(x) = iterate {
            let residual = eval(x).map_or(f64::INFINITY, |fx| (fx - x).norm());
            if residual <= tol {
                found.push(FixedPoint {
                    value: x,
                    attracting,
                    residual,
                });
            }
        }
    }

    // deduplicate; keep the smaller residual, remember if any route was
    // attracting
    let mut distinct: Vec<FixedPoint> = Vec::new();
    for fp in found {
        match distinct
            .iter_mut()
            .find(|d| (d.value - fp.value).norm() <= 10.0 * tol)
        {
            Some(d) => {
                d.attracting |= fp.attracting;
                if fp.residual < d.residual {
                    d.value = fp.value;
                    d.residual = fp.residual;
                }
            }
            None => distinct.push(fp),
        }
    }
    distinct.sort_by(|l, r| {
        (l.value.norm(), l.value.re, l.value.im)
            .partial_cmp(&(r.value.norm(), r.value.re, r.value.im))
            .unwrap()
    });
    if distinct.is_empty() {
        return Err(Error::NoneFound);
    }
    Ok(distinct)
}

/// Convenience wrapper returning only the fixed-point locations.
pub fn find_fixed_points<M>(map: M, seeds: &[C64], tol: f64) -> Result<Vec<C64>>
where
    M: Fn(C64) -> Result<C64>,
{
    Ok(find_fixed_points_detailed(map, seeds, tol)?
        .into_iter()
        .map(|fp| fp.value)
        .collect())
}

/// Newton search for g(x) = map(x) − x = 0 treated as a system in
/// (Re x, Im x); the map need not be holomorphic (the self-consistent map
/// depends on |x| through the series argument), so a full 2×2 Jacobian is
/// estimated by finite differences.
fn newton_fixed_point<E>(eval: &E, start: C64, tol: f64) -> Option<C64>
where
    E: Fn(C64) -> Option<C64>,
{
    let g_at = |x: C64| eval(x).map(|fx| fx - x);
    let mut x = start;
    for _ in 0..NEWTON_MAX_ITER {
        let g = g_at(x)?;
        if g.norm() <= tol {
            return Some(x);
        }
        let h = 1e-7 * x.norm().max(1.0);
        let gx = (g_at(x + C64::new(h, 0.0))? - g) / h;
        let gy = (g_at(x + C64::new(0.0, h))? - g) / h;
        let det = gx.re * gy.im - gy.re * gx.im;
        if det.abs() < 1e-300 {
            return None;
        }
        let dx = (-g.re * gy.im + g.im * gy.re) / det;
        let dy = (g.re * gx.im - g.im * gx.re) / det;
        x += C64::new(dx, dy);
        if !x.re.is_finite() || !x.im.is_finite() || x.norm() > DIVERGENCE_RADIUS {
            return None;
        }
    }
    g_at(x).filter(|g| g.norm() <= tol).map(|_| x)
}
