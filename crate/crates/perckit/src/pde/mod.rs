//! Finite-difference residual checks of the differential identities the
//! closed-form densities satisfy, plus the radial evolution equation and
//! the eigenpair defect check. The discretized spectral problem lives in
//! [`spectral`].
//!
//! Operators implemented (all verified to annihilate the corresponding
//! closed forms):
//!
//! * the three-point operator
//!   `(2/(u₁−u₂))∂u₁ + (2/(u₃−u₂))∂u₃ + 3∂²u₂ − (2/3)/(u₃−u₂)²` on C;
//! * the five-point operator Λ_F (with the drift 6(∂u₂C/C)∂u₂) on F;
//! * the product operator Λ on C·F, where the zeroth-order coefficient is
//!   −(2/3)/(u₃−u₂)² — the square is required by dimensional analysis and
//!   by the reduction of Λ(CF) to the three-point identity;
//! * the radial evolution `∂ₛh = (3∂θθ + cot(θ/2)∂θ)h`.
//!
//! Complex derivatives follow the global convention
//! ∂_w = (∂_{Re w} − i∂_{Im w})/2.

pub mod spectral;

use num_complex::Complex64;

use crate::conformal::{BoundaryConfig, U3};
use crate::error::{domain, Result};
use crate::formulas::{five_point_f_with_bracket_exponent, three_point_c};

/// Finite-difference scheme order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Centered2,
    Centered4,
}

/// Step and scheme for the residual stencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilSpec {
    pub step: f64,
    pub scheme: Scheme,
}

impl StencilSpec {
    pub fn new(step: f64, scheme: Scheme) -> Result<Self> {
        if !(step > 0.0) {
            return domain("stencil step must be positive");
        }
        Ok(StencilSpec { step, scheme })
    }
}

impl Default for StencilSpec {
    fn default() -> Self {
        StencilSpec {
            step: 1e-4,
            scheme: Scheme::Centered4,
        }
    }
}

/// A normalized residual, with a flag raised when the stencil step is
/// large relative to the configuration's separations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub step_warning: bool,
}

fn d1<F: Fn(f64) -> Result<f64>>(f: F, x: f64, spec: &StencilSpec) -> Result<f64> {
    let h = spec.step;
    Ok(match spec.scheme {
        Scheme::Centered2 => (f(x + h)? - f(x - h)?) / (2.0 * h),
        Scheme::Centered4 => {
            (-f(x + 2.0 * h)? + 8.0 * f(x + h)? - 8.0 * f(x - h)? + f(x - 2.0 * h)?) / (12.0 * h)
        }
    })
}

fn d2<F: Fn(f64) -> Result<f64>>(f: F, x: f64, spec: &StencilSpec) -> Result<f64> {
    let h = spec.step;
    Ok(match spec.scheme {
        Scheme::Centered2 => (f(x + h)? - 2.0 * f(x)? + f(x - h)?) / (h * h),
        Scheme::Centered4 => {
            (-f(x + 2.0 * h)? + 16.0 * f(x + h)? - 30.0 * f(x)? + 16.0 * f(x - h)?
                - f(x - 2.0 * h)?)
                / (12.0 * h * h)
        }
    })
}

/// Variables of a five-point configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    U1,
    U2,
    U3,
    WRe,
    WIm,
}

fn shifted(cfg: &BoundaryConfig, var: Var, delta: f64) -> Result<BoundaryConfig> {
    let mut out = *cfg;
    match var {
        Var::U1 => out.u1 += delta,
        Var::U2 => out.u2 += delta,
        Var::U3 => match out.u3 {
            U3::Finite(x) => out.u3 = U3::Finite(x + delta),
            U3::Infinity => return domain("cannot difference u3 at infinity"),
        },
        Var::WRe => out.w += delta,
        Var::WIm => out.w += Complex64::new(0.0, delta),
    }
    Ok(out)
}

fn partial<F: Fn(&BoundaryConfig) -> Result<f64>>(
    f: &F,
    cfg: &BoundaryConfig,
    var: Var,
    spec: &StencilSpec,
) -> Result<f64> {
    d1(|t| f(&shifted(cfg, var, t)?), 0.0, spec)
}

fn partial2<F: Fn(&BoundaryConfig) -> Result<f64>>(
    f: &F,
    cfg: &BoundaryConfig,
    var: Var,
    spec: &StencilSpec,
) -> Result<f64> {
    d2(|t| f(&shifted(cfg, var, t)?), 0.0, spec)
}

/// The three-point operator applied to an arbitrary function of
/// (u₁, u₂, u₃); not normalized.
pub fn cardy_operator<F: Fn(f64, f64, f64) -> Result<f64>>(
    f: &F,
    point: (f64, f64, f64),
    spec: &StencilSpec,
) -> Result<f64> {
    let (u1, u2, u3) = point;
    let du1 = d1(|t| f(t, u2, u3), u1, spec)?;
    let du3 = d1(|t| f(u1, u2, t), u3, spec)?;
    let d2u2 = d2(|t| f(u1, t, u3), u2, spec)?;
    let value = f(u1, u2, u3)?;
    Ok(2.0 / (u1 - u2) * du1 + 2.0 / (u3 - u2) * du3 + 3.0 * d2u2
        - 2.0 / (3.0 * (u3 - u2) * (u3 - u2)) * value)
}

/// Normalized residual of the three-point identity on the closed form C.
pub fn cardy_pde_residual(point: (f64, f64, f64), spec: &StencilSpec) -> Result<Residual> {
    let (u1, u2, u3) = point;
    if !(u1 < u2 && u2 < u3) {
        return domain("cardy_pde_residual: points not ordered");
    }
    let value = three_point_c(u1, u2, u3)?;
    let op = cardy_operator(&|a, b, c| three_point_c(a, b, c), point, spec)?;
    let min_sep = (u2 - u1).min(u3 - u2);
    Ok(Residual {
        value: op / value,
        step_warning: spec.step > 0.01 * min_sep,
    })
}

fn min_separation(cfg: &BoundaryConfig) -> f64 {
    let u3 = match cfg.u3 {
        U3::Finite(x) => x,
        U3::Infinity => f64::INFINITY,
    };
    let boundary = (cfg.u2 - cfg.u1).min(u3 - cfg.u2);
    let w_clearance = cfg
        .w
        .im
        .min((cfg.w - cfg.u1).norm())
        .min((cfg.w - cfg.u2).norm())
        .min((cfg.w - u3).norm());
    boundary.min(w_clearance)
}

/// Closed-form drift ratio ∂u₂C / C = (1/3)(1/(u₂−u₁) + 1/(u₃−u₂)).
pub fn drift_ratio(u1: f64, u2: f64, u3: f64) -> f64 {
    (1.0 / (u2 - u1) + 1.0 / (u3 - u2)) / 3.0
}

/// The product operator Λ applied to an arbitrary real function of the
/// configuration; not normalized. ∂_w, ∂_w̄ are realized through real
/// coordinates of w, and the conjugate pair collapses to twice a real part.
pub fn fc_operator<F: Fn(&BoundaryConfig) -> Result<f64>>(
    f: &F,
    cfg: &BoundaryConfig,
    spec: &StencilSpec,
) -> Result<f64> {
    let u3 = cfg
        .u3
        .finite()
        .ok_or_else(|| crate::Error::Domain("fc_operator needs finite u3".into()))?;
    let (u1, u2) = (cfg.u1, cfg.u2);
    let w = cfg.w;
    let value = f(cfg)?;
    let du1 = partial(f, cfg, Var::U1, spec)?;
    let du3 = partial(f, cfg, Var::U3, spec)?;
    let d2u2 = partial2(f, cfg, Var::U2, spec)?;
    let dx = partial(f, cfg, Var::WRe, spec)?;
    let dy = partial(f, cfg, Var::WIm, spec)?;
    // ∂_w f = (∂x − i∂y)/2; the w̄ term is the conjugate, so the pair sums
    // to 2·Re[(2/(w−u₂))·∂_w f]
    let dw = Complex64::new(dx, -dy) * 0.5;
    let w_term = 2.0 * (2.0 / (w - u2) * dw).re;
    let scalar = -5.0 / 48.0 * 2.0 * (1.0 / ((w - u2) * (w - u2))).re
        - 2.0 / (3.0 * (u3 - u2) * (u3 - u2));
    Ok(scalar * value + 2.0 / (u1 - u2) * du1 + 2.0 / (u3 - u2) * du3 + 3.0 * d2u2 + w_term)
}

/// The five-point operator Λ_F (drift included, in closed form) applied to
/// an arbitrary real function; not normalized.
pub fn f_operator<F: Fn(&BoundaryConfig) -> Result<f64>>(
    f: &F,
    cfg: &BoundaryConfig,
    spec: &StencilSpec,
) -> Result<f64> {
    let u3 = cfg
        .u3
        .finite()
        .ok_or_else(|| crate::Error::Domain("f_operator needs finite u3".into()))?;
    let (u1, u2) = (cfg.u1, cfg.u2);
    let w = cfg.w;
    let value = f(cfg)?;
    let du1 = partial(f, cfg, Var::U1, spec)?;
    let du2 = partial(f, cfg, Var::U2, spec)?;
    let du3 = partial(f, cfg, Var::U3, spec)?;
    let d2u2 = partial2(f, cfg, Var::U2, spec)?;
    let dx = partial(f, cfg, Var::WRe, spec)?;
    let dy = partial(f, cfg, Var::WIm, spec)?;
    let dw = Complex64::new(dx, -dy) * 0.5;
    let w_term = 2.0 * (2.0 / (w - u2) * dw).re;
    let scalar = -5.0 / 48.0 * 2.0 * (1.0 / ((w - u2) * (w - u2))).re;
    Ok(scalar * value
        + 2.0 / (u1 - u2) * du1
        + 2.0 / (u3 - u2) * du3
        + 3.0 * d2u2
        + 6.0 * drift_ratio(u1, u2, u3) * du2
        + w_term)
}

/// Normalized residual of Λ applied to the product C·F at a configuration.
pub fn fc_pde_residual(cfg: &BoundaryConfig, spec: &StencilSpec) -> Result<Residual> {
    fc_pde_residual_with_bracket_exponent(cfg, spec, 11.0 / 96.0)
}

/// Λ(C·F) residual with the G-bracket exponent exposed (negative controls).
pub fn fc_pde_residual_with_bracket_exponent(
    cfg: &BoundaryConfig,
    spec: &StencilSpec,
    bracket_exponent: f64,
) -> Result<Residual> {
    let product = |c: &BoundaryConfig| -> Result<f64> {
        let u3 = c
            .u3
            .finite()
            .ok_or_else(|| crate::Error::Domain("finite u3 required".into()))?;
        Ok(three_point_c(c.u1, c.u2, u3)?
            * five_point_f_with_bracket_exponent(c, bracket_exponent)?)
    };
    let value = product(cfg)?;
    let op = fc_operator(&product, cfg, spec)?;
    Ok(Residual {
        value: op / value,
        step_warning: spec.step > 0.01 * min_separation(cfg),
    })
}

/// Normalized residual of Λ_F applied to the five-point F.
pub fn f_pde_residual(cfg: &BoundaryConfig, spec: &StencilSpec) -> Result<Residual> {
    let f = |c: &BoundaryConfig| five_point_f_with_bracket_exponent(c, 11.0 / 96.0);
    let value = f(cfg)?;
    let op = f_operator(&f, cfg, spec)?;
    Ok(Residual {
        value: op / value,
        step_warning: spec.step > 0.01 * min_separation(cfg),
    })
}

/// Radial potential V(θ) = 1/12 + (1/18)·cot²(θ/2).
pub fn potential(theta: f64) -> f64 {
    let c = (theta / 2.0).cos() / (theta / 2.0).sin();
    1.0 / 12.0 + c * c / 18.0
}

/// Positive eigenfunction ψ₀(θ) = (sin(θ/2) sin(θ/4))^{1/3}.
pub fn psi0(theta: f64) -> f64 {
    ((theta / 2.0).sin() * (theta / 4.0).sin()).cbrt()
}

/// Leading mode of the radial evolution: h(θ,s) = e^{−5s/48} (sin θ/4)^{1/3}.
pub fn leading_mode(theta: f64, s: f64) -> f64 {
    (-5.0 * s / 48.0).exp() * (theta / 4.0).sin().cbrt()
}

/// A function sampled on a rectangular (θ, s) grid, row-major in s.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub thetas: Vec<f64>,
    pub times: Vec<f64>,
    /// values[j * thetas.len() + i] = h(θ_i, s_j)
    pub values: Vec<f64>,
}

impl RadialGrid {
    /// Sample an arbitrary h(θ,s) on uniform grids.
    pub fn sample<H: Fn(f64, f64) -> f64>(
        h: H,
        theta_range: (f64, f64),
        n_theta: usize,
        s_range: (f64, f64),
        n_s: usize,
    ) -> Result<Self> {
        if n_theta < 5 || n_s < 5 {
            return domain("radial grid needs at least 5 points per axis");
        }
        let thetas: Vec<f64> = (0..n_theta)
            .map(|i| {
                theta_range.0
                    + (theta_range.1 - theta_range.0) * i as f64 / (n_theta - 1) as f64
            })
            .collect();
        let times: Vec<f64> = (0..n_s)
            .map(|j| s_range.0 + (s_range.1 - s_range.0) * j as f64 / (n_s - 1) as f64)
            .collect();
        let mut values = Vec::with_capacity(n_theta * n_s);
        for &s in &times {
            for &t in &thetas {
                values.push(h(t, s));
            }
        }
        Ok(RadialGrid {
            thetas,
            times,
            values,
        })
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.thetas.len() + i]
    }
}

/// Max-norm residual of ∂ₛh − (3∂θθ + cot(θ/2)∂θ)h over the grid interior,
/// normalized by the max of |h|.
pub fn radial_pde_residual(grid: &RadialGrid, spec: &StencilSpec) -> Result<Residual> {
    let n_t = grid.thetas.len();
    let n_s = grid.times.len();
    if n_t < 5 || n_s < 5 {
        return domain("radial grid too small");
    }
    let dt = grid.thetas[1] - grid.thetas[0];
    let ds = grid.times[1] - grid.times[0];
    let margin = match spec.scheme {
        Scheme::Centered2 => 1,
        Scheme::Centered4 => 2,
    };
    let hmax = grid.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if hmax == 0.0 {
        return Ok(Residual {
            value: 0.0,
            step_warning: false,
        });
    }
    let mut worst = 0.0f64;
    for j in margin..n_s - margin {
        for i in margin..n_t - margin {
            let theta = grid.thetas[i];
            let (d_s, d_theta, d2_theta) = match spec.scheme {
                Scheme::Centered2 => (
                    (grid.at(i, j + 1) - grid.at(i, j - 1)) / (2.0 * ds),
                    (grid.at(i + 1, j) - grid.at(i - 1, j)) / (2.0 * dt),
                    (grid.at(i + 1, j) - 2.0 * grid.at(i, j) + grid.at(i - 1, j)) / (dt * dt),
                ),
                Scheme::Centered4 => (
                    (-grid.at(i, j + 2) + 8.0 * grid.at(i, j + 1) - 8.0 * grid.at(i, j - 1)
                        + grid.at(i, j - 2))
                        / (12.0 * ds),
                    (-grid.at(i + 2, j) + 8.0 * grid.at(i + 1, j) - 8.0 * grid.at(i - 1, j)
                        + grid.at(i - 2, j))
                        / (12.0 * dt),
                    (-grid.at(i + 2, j) + 16.0 * grid.at(i + 1, j) - 30.0 * grid.at(i, j)
                        + 16.0 * grid.at(i - 1, j)
                        - grid.at(i - 2, j))
                        / (12.0 * dt * dt),
                ),
            };
            let cot = (theta / 2.0).cos() / (theta / 2.0).sin();
            let r = d_s - 3.0 * d2_theta - cot * d_theta;
            worst = worst.max(r.abs());
        }
    }
    Ok(Residual {
        value: worst / hmax,
        step_warning: dt > 0.05 || ds > 0.05,
    })
}

/// Max pointwise defect |(∂θθ + V)ψ₀ + (5/144)ψ₀| over the grid points in
/// [0.1, 2π − 0.1], with a 4th-order stencil of the given step.
pub fn eigen_check(theta_grid: &[f64], step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return domain("eigen_check: step must be positive");
    }
    let margin = 0.1;
    let spec = StencilSpec::new(step, Scheme::Centered4)?;
    let mut worst: f64 = 0.0;
    let mut tested = 0;
    for &theta in theta_grid {
        if theta < margin || theta > 2.0 * std::f64::consts::PI - margin {
            continue;
        }
        tested += 1;
        let second = d2(|t| Ok(psi0(t)), theta, &spec)?;
        let defect = second + potential(theta) * psi0(theta) + 5.0 / 144.0 * psi0(theta);
        worst = worst.max(defect.abs());
    }
    if tested == 0 {
        return domain("eigen_check: no grid points away from the endpoints");
    }
    Ok(worst)
}
