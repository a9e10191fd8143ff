//! Geometry of the upper half-plane ℍ: Möbius normalization of marked
//! boundary points, the map onto the semi-infinite strip
//! S = {0 < Re z < ∞, 0 < Im z < 1}, harmonic measure, conformal radius,
//! and derivative moduli.
//!
//! The strip map ψ is the composition ψ₁∘ψ₂ where ψ₂ is the Möbius map
//! sending (u₁,u₂,u₃) to (0,1,∞), and ψ₁⁻¹(z) = (cosh(πz)+1)/2 sends
//! {S, i, 0, ∞} back to {ℍ, 0, 1, ∞}. The arccosh branch is the principal
//! one (Im in (0,π) on ℍ), which is pinned down by the round-trip tests.

use num_complex::Complex64;

use crate::error::{domain, Result};

/// Third marked boundary point: finite coordinate or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum U3 {
    Finite(f64),
    Infinity,
}

impl U3 {
    pub fn finite(self) -> Option<f64> {
        match self {
            U3::Finite(x) => Some(x),
            U3::Infinity => None,
        }
    }
}

/// Three ordered marked points u₁ < u₂ < u₃ on ∂ℍ = ℝ plus a bulk point w.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryConfig {
    pub u1: f64,
    pub u2: f64,
    pub u3: U3,
    pub w: Complex64,
}

impl BoundaryConfig {
    pub fn new(u1: f64, u2: f64, u3: f64, w: Complex64) -> Result<Self> {
        if !(u1 < u2 && u2 < u3) {
            return domain(format!("marked points not ordered: {u1}, {u2}, {u3}"));
        }
        if !(w.im > 0.0) {
            return domain("bulk point must lie in the open upper half-plane");
        }
        Ok(BoundaryConfig {
            u1,
            u2,
            u3: U3::Finite(u3),
            w,
        })
    }

    /// Configuration with u₃ = ∞.
    pub fn with_infinite_u3(u1: f64, u2: f64, w: Complex64) -> Result<Self> {
        if !(u1 < u2) {
            return domain(format!("marked points not ordered: {u1}, {u2}"));
        }
        if !(w.im > 0.0) {
            return domain("bulk point must lie in the open upper half-plane");
        }
        Ok(BoundaryConfig {
            u1,
            u2,
            u3: U3::Infinity,
            w,
        })
    }

    /// Rescaled configuration λ·cfg (λ > 0).
    pub fn scaled(&self, lambda: f64) -> Self {
        BoundaryConfig {
            u1: lambda * self.u1,
            u2: lambda * self.u2,
            u3: match self.u3 {
                U3::Finite(x) => U3::Finite(lambda * x),
                U3::Infinity => U3::Infinity,
            },
            w: self.w * lambda,
        }
    }

    /// Translated configuration cfg + c.
    pub fn translated(&self, c: f64) -> Self {
        BoundaryConfig {
            u1: self.u1 + c,
            u2: self.u2 + c,
            u3: match self.u3 {
                U3::Finite(x) => U3::Finite(x + c),
                U3::Infinity => U3::Infinity,
            },
            w: self.w + c,
        }
    }
}

/// Real Möbius map z ↦ (az+b)/(cz+d).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MobiusMap {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if a * d - b * c == 0.0 {
            return domain("degenerate Möbius map (ad - bc = 0)");
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn apply_real(&self, x: f64) -> f64 {
        (self.a * x + self.b) / (self.c * x + self.d)
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        self.det() / (den * den)
    }

    pub fn deriv_real(&self, x: f64) -> f64 {
        let den = self.c * x + self.d;
        self.det() / (den * den)
    }
}

/// Image of the bulk point in the strip, with the map-derivative modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripPoint {
    /// Re ψ(w) ∈ (0, ∞).
    pub x: f64,
    /// Im ψ(w) ∈ (0, 1).
    pub y: f64,
    /// |ψ'(w)|.
    pub deriv_mod: f64,
}

/// Möbius map sending (u₁,u₂,u₃) to (0,1,∞).
pub fn mobius_to_normalized(cfg: &BoundaryConfig) -> Result<MobiusMap> {
    match cfg.u3 {
        U3::Finite(u3) => {
            let (u1, u2) = (cfg.u1, cfg.u2);
            if u1 == u2 || u2 == u3 || u1 == u3 {
                return domain("coincident marked points");
            }
            // (z - u1)(u2 - u3) / ((z - u3)(u2 - u1))
            MobiusMap::new(
                u2 - u3,
                -u1 * (u2 - u3),
                u2 - u1,
                -u3 * (u2 - u1),
            )
        }
        U3::Infinity => MobiusMap::new(1.0, -cfg.u1, 0.0, cfg.u2 - cfg.u1),
    }
}

/// ψ₁: (ℍ, 0, 1, ∞) → (S, i, 0, ∞); inverse is (cosh(πz)+1)/2.
fn psi1(zeta: Complex64) -> Complex64 {
    (2.0 * zeta - 1.0).acosh() / std::f64::consts::PI
}

/// |ψ₁'(ζ)| = 1 / (π √(|ζ| |ζ−1|)).
fn psi1_deriv_mod(zeta: Complex64) -> f64 {
    1.0 / (std::f64::consts::PI * (zeta.norm() * (zeta - 1.0).norm()).sqrt())
}

/// Image of cfg.w under the conformal map (ℍ, u₁,u₂,u₃) → (S, i, 0, ∞).
pub fn strip_map(cfg: &BoundaryConfig) -> Result<StripPoint> {
    if !(cfg.w.im > 0.0) {
        return domain("bulk point on the real line");
    }
    let m = mobius_to_normalized(cfg)?;
    let zeta = m.apply(cfg.w);
    let z = psi1(zeta);
    let deriv_mod = m.deriv(cfg.w).norm() * psi1_deriv_mod(zeta);
    Ok(StripPoint {
        x: z.re,
        y: z.im,
        deriv_mod,
    })
}

/// Explicit inverse of the normalized strip map: ψ₁⁻¹(z) = (cosh(πz)+1)/2.
pub fn strip_inverse_normalized(z: Complex64) -> Complex64 {
    ((std::f64::consts::PI * z).cosh() + 1.0) / 2.0
}

/// Harmonic measure of the boundary interval (a,b) seen from w:
/// (arg(w−b) − arg(w−a)) / π with both angles in (0,π).
pub fn harmonic_measure(w: Complex64, a: f64, b: f64) -> Result<f64> {
    if !(w.im > 0.0) {
        return domain("harmonic measure: w must be in the open upper half-plane");
    }
    if !(a < b) {
        return domain("harmonic measure: interval endpoints must satisfy a < b");
    }
    Ok(((w - b).arg() - (w - a).arg()) / std::f64::consts::PI)
}

/// Conformal radius of ℍ seen from w: 2·Im w.
pub fn conformal_radius_halfplane(w: Complex64) -> Result<f64> {
    if !(w.im > 0.0) {
        return domain("conformal radius: w must be in the open upper half-plane");
    }
    Ok(2.0 * w.im)
}

/// |φ'(w)| for the disc map φ: ℍ → 𝔻 with φ(w) = 0, i.e. 1/(2·Im w).
pub fn disc_map_derivative(w: Complex64) -> Result<f64> {
    if !(w.im > 0.0) {
        return domain("disc map derivative: w must be in the open upper half-plane");
    }
    Ok(1.0 / (2.0 * w.im))
}
