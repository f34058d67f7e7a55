//! Radial curvature −1 metric with a cone point of angle 2π(1 − α).
//!
//! Write the metric as ρ^{−2α} e^{2φ} |dz|² and substitute t = ρ^β,
//! β = 1 − α. Then K = −β² e^{−2φ}(φ_tt + φ_t/t), so K ≡ −1 is the regular
//! radial Liouville problem
//!
//! ```text
//! φ_tt + φ_t/t = e^{2φ}/β²,   φ_t(0) = 0,   φ(T) = φ*(T),   T = R^β,
//! ```
//!
//! whose solution is φ*(t) = ln(2β) − ln(1 − t²), i.e. the hyperbolic cone
//! metric 4β² ρ^{−2α} (1 − ρ^{2β})^{−2} |dz|². The problem is discretized by
//! second-order differences on a uniform t-grid (graded in ρ), solved by
//! damped Newton, and Richardson-extrapolated against the doubled grid.

use std::f64::consts::PI;

use serde::Serialize;

pub const NEWTON_CAP: usize = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConeError {
    #[error("α = {0} must lie strictly inside (0, 1)")]
    AlphaOutOfRange(f64),
    #[error("R = {0} must lie in (0, 1)")]
    RadiusOutOfRange(f64),
    #[error("grid_n = {0} is below the minimum of 100")]
    GridTooSmall(usize),
    #[error("tolerance {0} must be positive")]
    BadTolerance(f64),
    #[error("Newton did not converge in {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("curvature residual {:e} exceeds tolerance {tol:e}; grid too coarse", .result.curvature_residual)]
    ResidualAboveTolerance { result: Box<ConeSolveResult>, tol: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeSolveResult {
    pub alpha: f64,
    pub radius: f64,
    pub grid_n: usize,
    /// ρ_j ∈ (0, R]; the cone point itself is `phi_center`.
    pub grid: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_center: f64,
    /// Gaussian curvature at each grid point (independent 4th-order stencil).
    pub curvature: Vec<f64>,
    /// max |K + 1| over grid points with ρ ≥ `residual_floor`.
    pub curvature_residual: f64,
    pub residual_floor: f64,
    pub cone_angle_estimate: f64,
    pub oracle_sup_error: f64,
    /// min and max of the metric density over 4β²ρ^{−2α}.
    pub quasi_isometry_band: (f64, f64),
    pub newton_iterations: usize,
}

impl ConeSolveResult {
    fn beta(&self) -> f64 {
        1.0 - self.alpha
    }

    fn t_grid(&self) -> Vec<f64> {
        let beta = self.beta();
        self.grid.iter().map(|rho| rho.powf(beta)).collect()
    }

    /// `rho,phi,K` rows, centre first (its curvature is reported as −1 by
    /// symmetry only when the solve is a cone solve).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rho,phi,K\n");
        for ((rho, phi), k) in self.grid.iter().zip(&self.phi).zip(&self.curvature) {
            out.push_str(&format!("{rho:.12e},{phi:.15e},{k:.15e}\n"));
        }
        out
    }
}

/// Closed-form potential φ*(t) = ln(2β) − ln(1 − t²).
pub fn oracle_phi(beta: f64, t: f64) -> f64 {
    (2.0 * beta).ln() - (1.0 - t * t).ln()
}

fn check(alpha: f64, radius: f64, grid_n: usize, tol: f64) -> Result<(), ConeError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(ConeError::AlphaOutOfRange(alpha));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(ConeError::RadiusOutOfRange(radius));
    }
    if grid_n < 100 {
        return Err(ConeError::GridTooSmall(grid_n));
    }
    if !(tol > 0.0) {
        return Err(ConeError::BadTolerance(tol));
    }
    Ok(())
}

/// Residual of the discrete problem on t_j = jh, j = 0..n (φ_n fixed).
fn residual(phi: &[f64], h: f64, inv_beta_sq: f64) -> Vec<f64> {
    let n = phi.len() - 1;
    let mut f = vec![0.0; n];
    // at t = 0, φ_tt + φ_t/t → 2φ_tt and φ_{−1} = φ_1
    f[0] = 4.0 * (phi[1] - phi[0]) / (h * h) - inv_beta_sq * (2.0 * phi[0]).exp();
    for j in 1..n {
        let t = j as f64 * h;
        f[j] = (phi[j + 1] - 2.0 * phi[j] + phi[j - 1]) / (h * h) + (phi[j + 1] - phi[j - 1]) / (2.0 * h * t)
            - inv_beta_sq * (2.0 * phi[j]).exp();
    }
    f
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Thomas algorithm for a tridiagonal system; `lower[0]` and `upper[n-1]` unused.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = if i + 1 < n { upper[i] / m } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Second-order solution on t_j = j·T/n, j = 0..n, with Newton iteration count.
pub fn solve_second_order(alpha: f64, t_max: f64, n: usize) -> Result<(Vec<f64>, usize), ConeError> {
    let beta = 1.0 - alpha;
    let k = 1.0 / (beta * beta);
    let h = t_max / n as f64;
    let boundary = oracle_phi(beta, t_max);
    // a constant is a supersolution; Newton from above is monotone for convex e^{2φ}
    let mut phi = vec![boundary; n + 1];
    let mut f = residual(&phi, h, k);
    let mut norm = sup(&f);
    for iteration in 1..=NEWTON_CAP {
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        diag[0] = -4.0 / (h * h) - 2.0 * k * (2.0 * phi[0]).exp();
        upper[0] = 4.0 / (h * h);
        for j in 1..n {
            let t = j as f64 * h;
            lower[j] = 1.0 / (h * h) - 1.0 / (2.0 * h * t);
            diag[j] = -2.0 / (h * h) - 2.0 * k * (2.0 * phi[j]).exp();
            upper[j] = 1.0 / (h * h) + 1.0 / (2.0 * h * t);
        }
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let step = solve_tridiagonal(&lower, &diag, &upper, &rhs);
        let mut scale = 1.0;
        let (candidate, cand_f, cand_norm) = loop {
            let trial: Vec<f64> = phi
                .iter()
                .enumerate()
                .map(|(j, p)| if j < n { p + scale * step[j] } else { *p })
                .collect();
            let tf = residual(&trial, h, k);
            let tn = sup(&tf);
            if tn < norm || scale < 1e-6 {
                break (trial, tf, tn);
            }
            scale /= 2.0;
        };
        let step_norm = scale * sup(&step);
        let stalled = cand_norm >= norm;
        phi = candidate;
        f = cand_f;
        norm = cand_norm;
        if step_norm < 1e-14 * (1.0 + sup(&phi)) || (stalled && step_norm < 1e-10) {
            return Ok((phi, iteration));
        }
    }
    Err(ConeError::NotConverged { iterations: NEWTON_CAP, residual: norm })
}

/// Radial solve on the disc of radius R with `grid_n` intervals in t.
pub fn solve_radial_cone(alpha: f64, radius: f64, grid_n: usize, tol: f64) -> Result<ConeSolveResult, ConeError> {
    check(alpha, radius, grid_n, tol)?;
    let beta = 1.0 - alpha;
    let t_max = radius.powf(beta);
    let (coarse, it_coarse) = solve_second_order(alpha, t_max, grid_n)?;
    let (fine, it_fine) = solve_second_order(alpha, t_max, 2 * grid_n)?;
    let phi: Vec<f64> = coarse.iter().enumerate().map(|(j, c)| (4.0 * fine[2 * j] - c) / 3.0).collect();
    let h = t_max / grid_n as f64;
    let ts: Vec<f64> = (0..=grid_n).map(|j| j as f64 * h).collect();

    let oracle_sup_error = ts.iter().zip(&phi).fold(0.0f64, |m, (t, p)| m.max((p - oracle_phi(beta, *t)).abs()));
    let (phi_t, phi_tt) = derivatives(&phi, h);
    let curvature: Vec<f64> = (0..=grid_n)
        .map(|j| {
            let lap = if j == 0 { 2.0 * phi_tt[0] } else { phi_tt[j] + phi_t[j] / ts[j] };
            -beta * beta * (-2.0 * phi[j]).exp() * lap
        })
        .collect();
    let residual_floor = 1e-3f64.min(radius);
    let t_floor = residual_floor.powf(beta);
    let curvature_residual = ts
        .iter()
        .zip(&curvature)
        .filter(|(t, _)| **t >= t_floor * (1.0 - 1e-12))
        .fold(0.0f64, |m, (_, k)| m.max((k + 1.0).abs()));

    let ratios: Vec<f64> = phi.iter().map(|p| (2.0 * p).exp() / (4.0 * beta * beta)).collect();
    let band = ratios.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(*r), hi.max(*r)));

    let result = ConeSolveResult {
        alpha,
        radius,
        grid_n,
        grid: ts[1..].iter().map(|t| t.powf(1.0 / beta)).collect(),
        phi: phi[1..].to_vec(),
        phi_center: phi[0],
        curvature: curvature[1..].to_vec(),
        curvature_residual,
        residual_floor,
        cone_angle_estimate: cone_angle(&phi, h, beta),
        oracle_sup_error,
        quasi_isometry_band: band,
        newton_iterations: it_coarse.max(it_fine),
    };
    if !(result.curvature_residual <= tol) {
        return Err(ConeError::ResidualAboveTolerance { result: Box::new(result), tol });
    }
    Ok(result)
}

/// Fourth-order first and second derivatives on a uniform grid (even
/// reflection at t = 0, one-sided six-point stencils at the outer end).
fn derivatives(f: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let n = f.len() - 1;
    let at = |j: isize| f[j.unsigned_abs()];
    let mut d1 = vec![0.0; n + 1];
    let mut d2 = vec![0.0; n + 1];
    for j in 0..=n {
        let i = j as isize;
        if j + 2 <= n {
            d1[j] = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h);
            d2[j] = (-at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) + 16.0 * at(i + 1) - at(i + 2)) / (12.0 * h * h);
        } else if j + 1 == n {
            d1[j] = (3.0 * f[n] + 10.0 * f[n - 1] - 18.0 * f[n - 2] + 6.0 * f[n - 3] - f[n - 4]) / (12.0 * h);
            d2[j] = (10.0 * f[n] - 15.0 * f[n - 1] - 4.0 * f[n - 2] + 14.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5])
                / (12.0 * h * h);
        } else {
            d1[j] = (25.0 * f[n] - 48.0 * f[n - 1] + 36.0 * f[n - 2] - 16.0 * f[n - 3] + 3.0 * f[n - 4]) / (12.0 * h);
            d2[j] = (45.0 * f[n] - 154.0 * f[n - 1] + 214.0 * f[n - 2] - 156.0 * f[n - 3] + 61.0 * f[n - 4]
                - 10.0 * f[n - 5])
                / (12.0 * h * h);
        }
    }
    (d1, d2)
}

/// Circumference over geodesic radius, 2πβ t e^φ / ∫₀ᵗ e^φ, extrapolated
/// to t → 0 in t² from two small radii.
fn cone_angle(phi: &[f64], h: f64, beta: f64) -> f64 {
    let ratio = |j: usize| {
        let t = j as f64 * h;
        let g: Vec<f64> = phi[..=j].iter().map(|p| p.exp()).collect();
        let simpson = (1..j).map(|i| if i % 2 == 1 { 4.0 * g[i] } else { 2.0 * g[i] }).sum::<f64>() + g[0] + g[j];
        2.0 * PI * beta * t * g[j] / (simpson * h / 3.0)
    };
    let (j1, j2) = (8, 16);
    let (t1, t2) = ((j1 as f64 * h).powi(2), (j2 as f64 * h).powi(2));
    let (r1, r2) = (ratio(j1), ratio(j2));
    (r1 * t2 - r2 * t1) / (t2 - t1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussBonnet {
    /// Inner radius actually used (nearest grid point at or above the request).
    pub epsilon: f64,
    pub curvature_integral: f64,
    pub outer_turning: f64,
    pub inner_turning: f64,
    /// (1/2π)(∫K dA + outer − inner); χ(annulus) = 0.
    pub defect: f64,
}

/// Gauss–Bonnet on the annulus ε < ρ < R of a solved (or flat) profile.
pub fn gauss_bonnet_defect(result: &ConeSolveResult, epsilon: f64) -> GaussBonnet {
    let beta = result.beta();
    let mut ts = vec![0.0];
    ts.extend(result.t_grid());
    let mut phi = vec![result.phi_center];
    phi.extend(&result.phi);
    let n = ts.len() - 1;
    let h = ts[n] / n as f64;
    let (phi_t, _) = derivatives(&phi, h);
    let mut curvature = vec![-1.0];
    curvature.extend(&result.curvature);

    let t_eps = epsilon.powf(beta);
    let mut j0 = ((t_eps / h).ceil() as usize).clamp(1, n - 2);
    if (n - j0) % 2 == 1 {
        j0 -= 1;
    }
    let j0 = j0.max(1);
    // dA = ρ^{1−2α} e^{2φ} dρ dθ = (t/β) e^{2φ} dt dθ
    let integrand: Vec<f64> = (0..=n).map(|j| curvature[j] * (2.0 * phi[j]).exp() * ts[j] / beta).collect();
    let m = n - j0;
    let simpson = if m % 2 == 0 {
        (1..m)
            .map(|i| if i % 2 == 1 { 4.0 } else { 2.0 } * integrand[j0 + i])
            .sum::<f64>()
            + integrand[j0]
            + integrand[n]
    } else {
        // odd interval count: trapezoid on the first, Simpson on the rest
        let mut s = 3.0 / 2.0 * (integrand[j0] + integrand[j0 + 1]);
        s += (1..m - 1)
            .map(|i| if i % 2 == 1 { 4.0 } else { 2.0 } * integrand[j0 + 1 + i])
            .sum::<f64>()
            + integrand[j0 + 1]
            + integrand[n];
        s
    };
    let curvature_integral = 2.0 * PI * simpson * h / 3.0;
    // ∮ k_g ds = 2π(1 + ρ u_ρ) with u = φ − α ln ρ, ρ u_ρ = β t φ_t − α
    let turning = |j: usize| 2.0 * PI * (beta + beta * ts[j] * phi_t[j]);
    let outer_turning = turning(n);
    let inner_turning = turning(j0);
    GaussBonnet {
        epsilon: ts[j0].powf(1.0 / beta),
        curvature_integral,
        outer_turning,
        inner_turning,
        defect: (curvature_integral + outer_turning - inner_turning) / (2.0 * PI),
    }
}

/// The flat unit-density disc of radius R as a profile (α = 0, φ = 0, K = 0).
pub fn flat_disc(radius: f64, grid_n: usize) -> ConeSolveResult {
    let h = radius / grid_n as f64;
    let grid: Vec<f64> = (1..=grid_n).map(|j| j as f64 * h).collect();
    ConeSolveResult {
        alpha: 0.0,
        radius,
        grid_n,
        phi: vec![0.0; grid_n],
        phi_center: 0.0,
        curvature: vec![0.0; grid_n],
        grid,
        curvature_residual: 1.0,
        residual_floor: 0.0,
        cone_angle_estimate: 2.0 * PI,
        oracle_sup_error: 0.0,
        quasi_isometry_band: (1.0, 1.0),
        newton_iterations: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_are_exact_on_quartics() {
        let h = 0.01;
        let f: Vec<f64> = (0..=50).map(|j| (j as f64 * h).powi(4) + 2.0 * (j as f64 * h).powi(2)).collect();
        let (d1, d2) = derivatives(&f, h);
        for j in [0usize, 7, 48, 49, 50] {
            let t = j as f64 * h;
            assert!((d1[j] - (4.0 * t.powi(3) + 4.0 * t)).abs() < 1e-9, "d1 at {j}");
            assert!((d2[j] - (12.0 * t * t + 4.0)).abs() < 1e-7, "d2 at {j}");
        }
    }

    #[test]
    fn tridiagonal_solve() {
        let x = solve_tridiagonal(&[0.0, 1.0, 1.0], &[2.0, 2.0, 2.0], &[1.0, 1.0, 0.0], &[3.0, 4.0, 3.0]);
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn half_angle_solve() {
        let r = solve_radial_cone(0.5, 0.5, 2000, 1e-6).unwrap();
        assert!(r.oracle_sup_error < 1e-6, "{}", r.oracle_sup_error);
        assert!(r.curvature_residual < 1e-6, "{}", r.curvature_residual);
        assert!((r.cone_angle_estimate - PI).abs() < 1e-4);
        assert!(gauss_bonnet_defect(&r, 1e-3).defect.abs() < 1e-3);
    }

    #[test]
    fn second_order_convergence() {
        let err = |n: usize| {
            let (phi, _) = solve_second_order(0.5, 0.5f64.sqrt(), n).unwrap();
            let h = 0.5f64.sqrt() / n as f64;
            phi.iter().enumerate().fold(0.0f64, |m, (j, p)| m.max((p - oracle_phi(0.5, j as f64 * h)).abs()))
        };
        assert!(err(200) / err(400) >= 3.0);
    }

    #[test]
    fn flat_disc_has_no_defect() {
        let g = gauss_bonnet_defect(&flat_disc(0.5, 200), 1e-2);
        assert_eq!(g.defect, 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(solve_radial_cone(0.0, 0.5, 200, 1e-6), Err(ConeError::AlphaOutOfRange(_))));
        assert!(matches!(solve_radial_cone(0.5, 1.0, 200, 1e-6), Err(ConeError::RadiusOutOfRange(_))));
        assert!(matches!(solve_radial_cone(0.5, 0.5, 50, 1e-6), Err(ConeError::GridTooSmall(50))));
        assert!(matches!(
            solve_radial_cone(0.5, 0.5, 100, 1e-14),
            Err(ConeError::ResidualAboveTolerance { .. })
        ));
    }
}
