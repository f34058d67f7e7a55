//! Volume and Lelong numbers of the model edge form
//! ω₀ = (i/2)(|z₁|^{−2α} dz₁∧dz̄₁ + dz₂∧dz̄₂) on ℂ², singular along z₁ = 0.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("α = {0} must lie in (0, 1)")]
    AlphaOutOfRange(f64),
    #[error("radius {0} must lie in (0, 1]")]
    RadiusOutOfRange(f64),
    #[error("need at least 3 radii, got {0}")]
    TooFewRadii(usize),
    #[error("radii must be strictly decreasing in (0, 1)")]
    RadiiNotDecreasing,
    #[error("base point at distance {delta} must lie outside every ball (largest radius {r_max})")]
    PointTooClose { delta: f64, r_max: f64 },
    #[error("quadrature_points must be positive")]
    NoQuadraturePoints,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelMetricSpec {
    pub alpha: f64,
    /// Complex dimension; only the surface case 2 is modelled.
    pub dimension: u32,
    pub quadrature_points: usize,
}

impl ModelMetricSpec {
    pub fn new(alpha: f64) -> Self {
        ModelMetricSpec { alpha, dimension: 2, quadrature_points: 64 }
    }

    fn check(&self) -> Result<GaussLegendre, NumericsError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(NumericsError::AlphaOutOfRange(self.alpha));
        }
        let n = NonZeroUsize::new(self.quadrature_points).ok_or(NumericsError::NoQuadraturePoints)?;
        Ok(GaussLegendre::new(n))
    }
}

/// ∫ ω₀²/2 over the bidisc of radius r; closed form π² r^{2(1−α)} r² / (1 − α).
///
/// In t = ρ^{1−α} the radial factor ρ^{1−2α} dρ becomes t dt/(1−α).
pub fn model_volume(spec: &ModelMetricSpec, r: f64) -> Result<f64, NumericsError> {
    let quad = spec.check()?;
    if !(r > 0.0 && r <= 1.0) {
        return Err(NumericsError::RadiusOutOfRange(r));
    }
    let beta = 1.0 - spec.alpha;
    let singular = 2.0 * PI * quad.integrate(0.0, r.powf(beta), |t| t / beta);
    let flat = 2.0 * PI * quad.integrate(0.0, r, |rho| rho);
    Ok(singular * flat)
}

pub fn model_volume_closed_form(alpha: f64, r: f64) -> f64 {
    PI * PI * r.powf(2.0 * (1.0 - alpha)) * r * r / (1.0 - alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LelongPoint {
    /// A point of the smooth divisor locus.
    OnDivisor,
    /// The point (δ, 0), at distance δ from the divisor.
    OffDivisor { distance: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LelongEstimate {
    pub alpha: f64,
    pub point: LelongPoint,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// Least-squares slope of log ν against log r.
    pub fitted_exponent: f64,
    /// 2(1 − α) on the divisor, 2 off it.
    pub expected_exponent: f64,
}

/// ν(r) = (πr²)⁻¹ ∫_{B(x,r)} ω₀ ∧ ω_euc at a point of the divisor.
pub fn lelong_estimate(spec: &ModelMetricSpec, radii: &[f64]) -> Result<LelongEstimate, NumericsError> {
    lelong_estimate_at(spec, radii, LelongPoint::OnDivisor)
}

pub fn lelong_estimate_at(
    spec: &ModelMetricSpec,
    radii: &[f64],
    point: LelongPoint,
) -> Result<LelongEstimate, NumericsError> {
    let quad = spec.check()?;
    if radii.len() < 3 {
        return Err(NumericsError::TooFewRadii(radii.len()));
    }
    if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(NumericsError::RadiiNotDecreasing);
    }
    if let LelongPoint::OffDivisor { distance } = point {
        if !(distance > radii[0]) {
            return Err(NumericsError::PointTooClose { delta: distance, r_max: radii[0] });
        }
    }
    let values: Vec<f64> = radii
        .iter()
        .map(|&r| {
            let mass = match point {
                LelongPoint::OnDivisor => ball_mass_on_divisor(&quad, spec.alpha, r),
                LelongPoint::OffDivisor { distance } => ball_mass_off_divisor(&quad, spec.alpha, r, distance),
            };
            mass / (PI * r * r)
        })
        .collect();
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let expected_exponent = match point {
        LelongPoint::OnDivisor => 2.0 * (1.0 - spec.alpha),
        LelongPoint::OffDivisor { .. } => 2.0,
    };
    Ok(LelongEstimate {
        alpha: spec.alpha,
        point,
        radii: radii.to_vec(),
        values,
        fitted_exponent: least_squares_slope(&xs, &ys),
        expected_exponent,
    })
}

/// ∫_{B(0,r)} (|z₁|^{−2α} + 1) dV. The |z₂|-integral over the fibre disc of
/// radius √(r² − ρ₁²) is done by a second Gauss rule (product quadrature).
fn ball_mass_on_divisor(quad: &GaussLegendre, alpha: f64, r: f64) -> f64 {
    let beta = 1.0 - alpha;
    let fibre = |rho1: f64| {
        let s = (r * r - rho1 * rho1).max(0.0).sqrt();
        2.0 * PI * quad.integrate(0.0, s, |rho2| rho2)
    };
    // ρ₁ = t^{1/β}: ρ₁^{1−2α} dρ₁ = t dt / β
    let singular = 2.0 * PI * quad.integrate(0.0, r.powf(beta), |t| t / beta * fibre(t.powf(1.0 / beta)));
    singular + PI * PI * r.powi(4) / 2.0
}

/// Same mass about (δ, 0): polar coordinates w = s·e^{iθ} around z₁ = δ.
fn ball_mass_off_divisor(quad: &GaussLegendre, alpha: f64, r: f64, delta: f64) -> f64 {
    let density = |s: f64, theta: f64| {
        let z1_sq = delta * delta + s * s + 2.0 * delta * s * theta.cos();
        z1_sq.powf(-alpha) + 1.0
    };
    quad.integrate(0.0, r, |s| {
        let fibre = PI * (r * r - s * s);
        s * fibre * quad.integrate(0.0, 2.0 * PI, |theta| density(s, theta))
    })
}

/// Exact ν(r) on the divisor: π[r^{2(1−α)}/((1−α)(2−α)) + r²/2].
pub fn lelong_closed_form(alpha: f64, r: f64) -> f64 {
    PI * (r.powf(2.0 * (1.0 - alpha)) / ((1.0 - alpha) * (2.0 - alpha)) + r * r / 2.0)
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Seven log-spaced radii from 10⁻¹ down to 10⁻⁴.
pub fn default_radii() -> Vec<f64> {
    (0..7).map(|k| 10f64.powf(-1.0 - 0.5 * k as f64)).collect()
}
