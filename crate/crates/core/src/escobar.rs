//! The hemisphere compactification of hyperbolic space and the Escobar
//! constants of the round hemisphere.

use serde::{Deserialize, Serialize};

use crate::compactify::{build_compactification, mean_curvature_weighted, CompactKind, Compactification};
use crate::dd::DD;
use crate::error::{Error, Result};
use crate::geometry::{cumulative, WarpedMetric};
use crate::quad;
use crate::scattering::{extract_fg, solve_radial_mode, FitOptions, SolveOptions};
use crate::specfun::sphere_volume;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscobarReport {
    pub n: usize,
    pub ya_hemisphere: f64,
    /// `4n/(n−1)`.
    pub yb_conversion: f64,
    /// `max |R̃ − n(n+1)|` on the grid.
    pub rtilde_max_dev: f64,
    /// `max |K − 1|` over radial and tangential sectional curvatures.
    pub sectional_max_dev: f64,
    /// `|H̃|` at the largest radius.
    pub equator_h: f64,
    /// Extrapolated limit of `H̃`.
    pub equator_h_limit: f64,
    pub ratio_limit: f64,
    pub ball_ratio_monotone: bool,
    pub ball_ratio_max_dev: f64,
    /// `V(X̄, g̃)` by quadrature.
    pub hemisphere_volume: f64,
    pub hemisphere_volume_expected: f64,
    /// `max |v/cosh t − 1|` for the scattering solution at `s = n+1`.
    pub cosh_max_dev: f64,
    /// `x²`-coefficient of `v·x`.
    pub cosh_x2_coeff: f64,
}

/// `n(n+1)(|S^{n+1}|/2)^{2/(n+1)}`.
pub fn ya_hemisphere(n: usize) -> f64 {
    let nf = n as f64;
    nf * (nf + 1.0) * (0.5 * sphere_volume(n + 1)).powf(2.0 / (nf + 1.0))
}

pub fn yb_factor(n: usize) -> f64 {
    4.0 * n as f64 / (n as f64 - 1.0)
}

/// `Y_b = (4n/(n−1)) Y₁`.
pub fn yb_value(n: usize, y1: f64) -> f64 {
    yb_factor(n) * y1
}

/// Scalar curvature of `g̃ = ρ²g₊` from `t̃ = −ln(ρ/2)`.
pub fn scalar_curvature(c: &Compactification, t: f64) -> Result<f64> {
    let rj = c.rho_jet(t)?;
    let wj = c.metric.jet(t);
    let n = DD::new(c.n as f64);
    let lap = -rj.b() - n * wj.d1() * rj.a;
    let v = -n * (n + 1.0) + DD::new(2.0) * n * lap - n * (n - 1.0) * rj.a.sqr();
    Ok(v.to_f64() * (-2.0 * rj.ln_rho).exp())
}

/// Radial and tangential sectional curvatures of `g̃ = ds² + Ψ²g_S`, `Ψ = ρφ`.
pub fn sectional_curvatures(c: &Compactification, t: f64) -> Result<(f64, f64)> {
    let rj = c.rho_jet(t)?;
    let wj = c.metric.jet(t);
    let d1 = wj.d1();
    let big_a = rj.a + d1;
    // φ″/φ − (φ′/φ)² with the unit parts cancelled.
    let dd1 = DD::new(wj.d2m1) - DD::new(2.0) * wj.d1m1 - DD::new(wj.d1m1).sqr();
    let psi_tt = rj.b() + dd1 + big_a.sqr();
    let inv_rho2 = (-2.0 * rj.ln_rho).exp();
    let k_rad = -(psi_tt - rj.a * big_a).to_f64() * inv_rho2;
    let psi = (rj.ln_rho + wj.phi.ln()).exp();
    let k_tan = 1.0 / (psi * psi) - big_a.sqr().to_f64() * inv_rho2;
    Ok((k_rad, k_tan))
}

/// Round-sphere ball volume of geodesic radius `s`.
fn round_ball(n: usize, s: f64) -> Result<f64> {
    let v = quad::integrate(|r: f64| r.sin().powi(n as i32), 0.0, s, 1e-15)?.value;
    Ok(sphere_volume(n) * v)
}

/// Everything on the hemisphere compactification of `Hⁿ⁺¹` over `grid`.
pub fn hemisphere_check(n: usize, grid: &[f64]) -> Result<EscobarReport> {
    if grid.len() < 3 {
        return Err(Error::Domain {
            what: "hemisphere_check grid",
            value: grid.len() as f64,
            range: "at least three radii",
        });
    }
    let metric = WarpedMetric::hyperbolic(n);
    let c = build_compactification(CompactKind::Hemisphere, &metric, SolveOptions::default())?;
    let target = (n * (n + 1)) as f64;
    let mut rtilde_max_dev = 0.0f64;
    let mut sectional_max_dev = 0.0f64;
    for &t in grid {
        rtilde_max_dev = rtilde_max_dev.max((scalar_curvature(&c, t)? - target).abs());
        let (kr, kt) = sectional_curvatures(&c, t)?;
        sectional_max_dev = sectional_max_dev.max((kr - 1.0).abs()).max((kt - 1.0).abs());
    }
    let vol = sphere_volume(n);
    let density = |t: f64| {
        let rj = c.rho_jet(t).expect("hemisphere jet");
        vol * ((n as f64 + 1.0) * rj.ln_rho + n as f64 * metric.phi(t)[0].ln()).exp()
    };
    let balls = cumulative(density, grid, 1e-13)?;
    let mut ratios = Vec::with_capacity(grid.len());
    for (&t, b) in grid.iter().zip(&balls) {
        // g̃-distance from the pole is the Gudermannian of t.
        let s = 2.0 * (0.5 * t).tanh().atan();
        ratios.push(b / round_ball(n, s)?);
    }
    let ball_ratio_monotone = ratios.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let ball_ratio_max_dev = ratios.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    let hemisphere_volume = quad::integrate(density, 0.0, 40.0, 1e-14)?.value;
    let hemisphere_volume_expected = 0.5 * sphere_volume(n + 1);

    let h = mean_curvature_weighted(&c, grid)?;

    let sol = solve_radial_mode(&metric, n as f64 + 1.0, 0, SolveOptions::default())?;
    let mut cosh_max_dev = 0.0f64;
    for &t in grid {
        cosh_max_dev = cosh_max_dev.max((sol.u(t)?[0] / t.cosh() - 1.0).abs());
    }
    let fit = extract_fg(&sol, &FitOptions::asymptotic())?;

    Ok(EscobarReport {
        n,
        ya_hemisphere: ya_hemisphere(n),
        yb_conversion: yb_factor(n),
        rtilde_max_dev,
        sectional_max_dev,
        equator_h: h.values.last().copied().unwrap_or(f64::NAN).abs(),
        equator_h_limit: h.limit,
        ratio_limit: hemisphere_volume / hemisphere_volume_expected,
        ball_ratio_monotone,
        ball_ratio_max_dev,
        hemisphere_volume,
        hemisphere_volume_expected,
        cosh_max_dev,
        cosh_x2_coeff: fit.f1.unwrap_or(f64::NAN),
    })
}
