//! Radial Poisson problem `−Δ₊u − s(n−s)u = 0` per spherical-harmonic mode.
//!
//! The solver integrates `w = u·e^{λt}/2^λ`, `λ = n − s`, so that with
//! `x = 2e^{−t}` one has `u = x^λ w` and `w = F + x^{2γ}G` stays O(1).
//! In terms of `d = φ′/φ` and `κ = k(k+n−1)` the equation reads
//!
//! `w″ = (2λ − n d) w′ + (nλ(d − 1) + κ/φ²) w`.
//!
//! Branch coefficients `F₀, G₀` come from matching the numerical solution
//! against the exact boundary Frobenius series of the hyperbolic operator,
//! with a least-squares asymptotic fit as an independent route.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::WarpedMetric;
use crate::ode::{OdeOptions, Stepper};
use crate::specfun::{d_gamma, sphere_multiplier};

const PHI_SERIES_LEN: usize = 40;
const BOUNDARY_TERMS_MAX: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub t_max: f64,
    pub rel_tol: f64,
    /// Radius where the pole series hands over to the integrator.
    pub t0: f64,
    /// `u(t₀) ≈ amplitude`.
    pub amplitude: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            t_max: 30.0,
            rel_tol: 1e-12,
            t0: 1e-3,
            amplitude: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    /// Solve for `(F₀, G₀)` against the boundary series at several radii.
    SeriesMatch,
    /// Least-squares fit of `w` over a window on the leading asymptotic basis.
    Asymptotic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub method: FitMethod,
    /// Matching radii for [`FitMethod::SeriesMatch`]; at least three.
    pub radii: Vec<f64>,
    /// Sampling window for [`FitMethod::Asymptotic`].
    pub window: (f64, f64),
    pub samples: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            method: FitMethod::SeriesMatch,
            radii: vec![2.0, 2.5, 3.0, 3.5, 4.0],
            window: (4.0, 10.0),
            samples: 61,
        }
    }
}

impl FitOptions {
    pub fn asymptotic() -> Self {
        FitOptions {
            method: FitMethod::Asymptotic,
            ..FitOptions::default()
        }
    }
}

/// Leading coefficients of `w = F + x^{2γ}G`, with error estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branches {
    pub f0: f64,
    pub g0: f64,
    pub e_f: f64,
    pub e_g: f64,
    /// Coefficient of `x²` in `F/F₀` (asymptotic route only).
    pub f1: Option<f64>,
    pub method: FitMethod,
}

/// Regular solution of one radial mode.
#[derive(Debug, Clone, Serialize)]
pub struct RadialSolution {
    pub n: usize,
    pub s: f64,
    pub k: usize,
    /// Rescaling exponent `n − s`.
    pub lambda: f64,
    #[serde(skip)]
    pub metric: WarpedMetric,
    pub opts: SolveOptions,
    /// Pole series `u = Σ bₘ t^{k+m}`.
    pub series: Vec<f64>,
    /// Accepted integrator nodes `(t, [w, w′])`, starting at `t₀`.
    pub nodes: Vec<(f64, [f64; 2])>,
    pub branches: Option<Branches>,
}

fn kappa(n: usize, k: usize) -> f64 {
    (k * (k + n - 1)) as f64
}

/// Coefficients of the regular pole series `Σ bₘ t^{k+m}` with `b₀ = 1`.
pub fn pole_series(metric: &WarpedMetric, s: f64, k: usize, terms: usize) -> Vec<f64> {
    let n = metric.n as f64;
    let sigma = s * (n - s);
    let kap = kappa(metric.n, k);
    let phi = metric.phi_series(PHI_SERIES_LEN);
    let phi_t = phi.shift_down();
    let dphi = phi.derivative();
    let p = phi_t.mul(&phi_t);
    let q = phi_t.mul(&dphi);
    let len = terms.min(p.len());
    let kf = k as f64;
    let mut b = vec![0.0; len];
    b[0] = 1.0;
    for m in 1..len {
        let mut rhs = 0.0;
        for i in 1..=m {
            let e = kf + (m - i) as f64;
            rhs -= (p.0[i] * e * (e - 1.0) + n * q.0[i] * e) * b[m - i];
        }
        if m >= 2 {
            for i in 0..=(m - 2) {
                rhs -= sigma * p.0[i] * b[m - 2 - i];
            }
        }
        let e = kf + m as f64;
        b[m] = rhs / (e * (e + n - 1.0) - kap);
    }
    b
}

/// Root-test estimate of the radius of convergence from the tail of `b`.
fn series_radius(b: &[f64]) -> f64 {
    let b0 = b[0].abs();
    b.iter()
        .enumerate()
        .skip(b.len().saturating_sub(8))
        .filter(|(m, c)| *m > 0 && **c != 0.0)
        .map(|(m, c)| (b0 / c.abs()).powf(1.0 / m as f64))
        .fold(f64::INFINITY, f64::min)
}

/// Boundary Frobenius series `u = Σ cⱼ x^{a+2j}` (`c₀ = 1`) of the hyperbolic
/// mode equation, for `a ∈ {n − s, s}`. Returns coefficients out to
/// convergence at `x_max`.
pub fn boundary_series(n: usize, s: f64, k: usize, a: f64, x_max: f64) -> Result<Vec<f64>> {
    let nf = n as f64;
    let lambda = nf - s;
    let sigma = s * lambda;
    let kap = kappa(n, k);
    let ca = [1.0, -0.5, 1.0 / 16.0];
    let cb = [1.0 - nf, -0.5, (1.0 + nf) / 16.0];
    let cc = [sigma, -(0.5 * sigma + kap), sigma / 16.0];
    let mut c = vec![1.0];
    let x2 = x_max * x_max;
    let mut small_run = 0;
    for m in 1..BOUNDARY_TERMS_MAX {
        let mut num = 0.0;
        let mut scale = 0.0;
        for i in 1..=2.min(m) {
            let e = a + 2.0 * (m - i) as f64;
            let term = (ca[i] * e * (e - 1.0) + cb[i] * e + cc[i]) * c[m - i];
            num -= term;
            scale += term.abs();
        }
        let e = a + 2.0 * m as f64;
        let ind = (e - lambda) * (e - s);
        let cm = if ind.abs() < 1e-12 * (1.0 + e * e) {
            // Resonant exponent: the log term must be absent.
            if num.abs() > 1e-10 * scale.max(1e-300) {
                return Err(Error::Unsupported(format!(
                    "logarithmic boundary term at exponent {e} (n = {n}, s = {s})"
                )));
            }
            0.0
        } else {
            num / ind
        };
        c.push(cm);
        let total: f64 = c.iter().map(|v| v.abs()).sum();
        if (cm * x2.powi(m as i32)).abs() < 1e-20 * total {
            small_run += 1;
            if small_run >= 3 {
                return Ok(c);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Unsupported(format!("boundary series did not converge at x = {x_max}")))
}

/// `(Σ cⱼ x^{e+2j}, d/dt of the same)` with `x = 2e^{−t}`.
fn eval_boundary(c: &[f64], e: f64, x: f64) -> [f64; 2] {
    let x2 = x * x;
    let mut v = 0.0;
    let mut dv = 0.0;
    let mut p = x.powf(e);
    for (j, cj) in c.iter().enumerate() {
        v += cj * p;
        dv -= (e + 2.0 * j as f64) * cj * p;
        p *= x2;
    }
    [v, dv]
}

impl RadialSolution {
    fn rhs(&self) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + '_ {
        let n = self.n as f64;
        let lambda = self.lambda;
        let kap = kappa(self.n, self.k);
        move |t, y| {
            let j = self.metric.jet(t);
            let d = j.dphi / j.phi;
            [
                y[1],
                (2.0 * lambda - n * d) * y[1] + (n * lambda * j.d1m1 + kap / (j.phi * j.phi)) * y[0],
            ]
        }
    }

    /// `w″` from the equation, given `(w, w′)` at `t`.
    pub fn wpp(&self, t: f64, y: [f64; 2]) -> f64 {
        self.rhs()(t, &y)[1]
    }

    fn ode_options(&self) -> OdeOptions {
        OdeOptions {
            rtol: self.opts.rel_tol,
            h0: 1e-2,
            ..OdeOptions::default()
        }
    }

    fn series_state(&self, t: f64) -> [f64; 2] {
        let k = self.k as i32;
        let mut u = 0.0;
        let mut du = 0.0;
        for (m, b) in self.series.iter().enumerate().rev() {
            let e = k + m as i32;
            u += b * t.powi(e);
            if e > 0 {
                du += b * e as f64 * t.powi(e - 1);
            }
        }
        let sc = (self.lambda * t).exp() / 2f64.powf(self.lambda);
        [u * sc, (du + self.lambda * u) * sc]
    }

    /// `(w, w′)` at any `t ∈ (0, t_max]`.
    pub fn state(&self, t: f64) -> Result<[f64; 2]> {
        if !(t > 0.0 && t <= self.opts.t_max * (1.0 + 1e-12)) {
            return Err(Error::Domain {
                what: "RadialSolution::state",
                value: t,
                range: "(0, t_max]",
            });
        }
        if t <= self.opts.t0 {
            return Ok(self.series_state(t));
        }
        let i = self.nodes.partition_point(|(tn, _)| *tn <= t) - 1;
        let (tn, yn) = self.nodes[i];
        if tn == t {
            return Ok(yn);
        }
        let mut st = Stepper::new(self.rhs(), tn, yn, self.ode_options());
        st.advance(t, None)
    }

    /// `(u, u′)`.
    pub fn u(&self, t: f64) -> Result<[f64; 2]> {
        let [w, dw] = self.state(t)?;
        let sc = 2f64.powf(self.lambda) * (-self.lambda * t).exp();
        Ok([w * sc, (dw - self.lambda * w) * sc])
    }

    /// `(u, u′, u″)`.
    pub fn u_jet(&self, t: f64) -> Result<[f64; 3]> {
        let y = self.state(t)?;
        let ddw = self.wpp(t, y);
        let l = self.lambda;
        let sc = 2f64.powf(l) * (-l * t).exp();
        Ok([y[0] * sc, (y[1] - l * y[0]) * sc, (ddw - 2.0 * l * y[1] + l * l * y[0]) * sc])
    }

    pub fn grid(&self) -> Vec<f64> {
        self.nodes.iter().map(|(t, _)| *t).collect()
    }

    /// CSV of the rescaled variable at the integrator nodes.
    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "# w = u*exp(lambda*t)/2^lambda, lambda = {:.16e}; n = {}, s = {:.16e}, k = {}\nt,u,uprime\n",
            self.lambda, self.n, self.s, self.k
        );
        for (t, [w, dw]) in &self.nodes {
            s.push_str(&format!("{t:.16e},{w:.16e},{dw:.16e}\n"));
        }
        s
    }
}

/// Integrate the regular mode-`k` solution out to `t_max`.
pub fn solve_radial_mode(metric: &WarpedMetric, s: f64, k: usize, opts: SolveOptions) -> Result<RadialSolution> {
    let n = metric.n as f64;
    if !(s.is_finite() && opts.t0 > 0.0 && opts.t_max > opts.t0 && opts.amplitude > 0.0) {
        return Err(Error::Domain {
            what: "solve_radial_mode",
            value: s,
            range: "finite s, 0 < t0 < t_max, positive amplitude",
        });
    }
    let mut series = pole_series(metric, s, k, PHI_SERIES_LEN - 2);
    let radius = series_radius(&series);
    if opts.t0 > 0.5 * radius {
        return Err(Error::SeriesStart { t0: opts.t0, radius });
    }
    let scale = opts.amplitude / opts.t0.powi(k as i32);
    series.iter_mut().for_each(|b| *b *= scale);
    let mut sol = RadialSolution {
        n: metric.n,
        s,
        k,
        lambda: n - s,
        metric: *metric,
        opts,
        series,
        nodes: Vec::new(),
        branches: None,
    };
    let y0 = sol.series_state(opts.t0);
    let mut nodes = vec![(opts.t0, y0)];
    {
        let mut st = Stepper::new(sol.rhs(), opts.t0, y0, sol.ode_options());
        st.advance(opts.t_max, Some(&mut nodes))?;
    }
    sol.nodes = nodes;
    let gamma = s - 0.5 * n;
    let fits = metric.is_hyperbolic() && ((2.0 * gamma - (n + 2.0)).abs() < 1e-12 || (0.1..=1.9).contains(&(2.0 * gamma)));
    if fits && opts.t_max >= 4.0 {
        sol.branches = Some(extract_fg(&sol, &FitOptions::default())?);
    }
    Ok(sol)
}

fn check_fit_gamma(sol: &RadialSolution) -> Result<f64> {
    let two_gamma = sol.s - sol.lambda;
    let top = (two_gamma - (sol.n as f64 + 2.0)).abs() < 1e-12;
    if !top && !(0.1..=1.9).contains(&two_gamma) {
        return Err(Error::IllConditioned(format!("2γ = {two_gamma} outside [0.1, 1.9]")));
    }
    Ok(two_gamma)
}

/// Extract `(F₀, G₀)` from a solution.
pub fn extract_fg(sol: &RadialSolution, opts: &FitOptions) -> Result<Branches> {
    let two_gamma = check_fit_gamma(sol)?;
    match opts.method {
        FitMethod::SeriesMatch => series_match(sol, &opts.radii, two_gamma),
        FitMethod::Asymptotic => asymptotic_fit(sol, opts, two_gamma),
    }
}

fn series_match(sol: &RadialSolution, radii: &[f64], two_gamma: f64) -> Result<Branches> {
    if !sol.metric.is_hyperbolic() {
        return Err(Error::Unsupported("series matching needs the hyperbolic boundary series".into()));
    }
    if radii.len() < 3 {
        return Err(Error::IllConditioned("series matching needs at least three radii".into()));
    }
    let x_max = radii.iter().map(|t| 2.0 * (-t).exp()).fold(0.0, f64::max);
    let cf = boundary_series(sol.n, sol.s, sol.k, sol.lambda, x_max)?;
    let cg = boundary_series(sol.n, sol.s, sol.k, sol.s, x_max)?;
    let mut fs = Vec::with_capacity(radii.len());
    let mut gs = Vec::with_capacity(radii.len());
    for &t in radii {
        let x = 2.0 * (-t).exp();
        // Strip x^λ: w-branches are x^{−λ} times the u-branches.
        let [f, df] = eval_boundary(&cf, 0.0, x);
        let [g, dg] = eval_boundary(&cg, two_gamma, x);
        let [w, dw] = sol.state(t)?;
        let det = f * dg - g * df;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::IllConditioned(format!("singular matching system at t = {t}")));
        }
        fs.push((w * dg - g * dw) / det);
        gs.push((f * dw - w * df) / det);
    }
    let mid = radii.len() / 2;
    // Integration error enters w at the level rel_tol; G₀ sees it through x^{−2γ}.
    let x_mid = 2.0 * (-radii[mid]).exp();
    let floor_f = sol.opts.rel_tol * fs[mid].abs();
    let floor_g = floor_f * x_mid.powf(-two_gamma);
    let spread = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    let f0 = fs[mid];
    let g0 = gs[mid];
    Ok(Branches {
        f0,
        g0,
        e_f: spread(&fs).max(floor_f),
        e_g: spread(&gs).max(floor_g),
        f1: None,
        method: FitMethod::SeriesMatch,
    })
}

/// Column exponents `(power, is_g_branch)` for the asymptotic basis.
fn asymptotic_basis(sol: &RadialSolution, two_gamma: f64) -> Vec<(f64, bool)> {
    let n = sol.n as f64;
    if (two_gamma - (n + 2.0)).abs() < 1e-12 {
        let top = 3.max((sol.n + 2) / 2);
        let mut b: Vec<(f64, bool)> = (0..=top).map(|j| (2.0 * j as f64, false)).collect();
        if sol.n % 2 == 1 {
            b.push((n + 2.0, true));
        } else {
            b[(sol.n + 2) / 2].1 = true;
        }
        b
    } else {
        vec![
            (0.0, false),
            (two_gamma, true),
            (2.0, false),
            (2.0 + two_gamma, true),
            (4.0, false),
            (4.0 + two_gamma, true),
        ]
    }
}

fn lsq(cols: &[(f64, bool)], xs: &[f64], ws: &[f64]) -> Result<(Vec<f64>, f64)> {
    let mut a = DMatrix::from_fn(xs.len(), cols.len(), |i, j| xs[i].powf(cols[j].0));
    let scales: Vec<f64> = (0..cols.len()).map(|j| a.column(j).amax()).collect();
    for (j, sc) in scales.iter().enumerate() {
        a.column_mut(j).scale_mut(1.0 / sc);
    }
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = smax / smin;
    let b = DVector::from_column_slice(ws);
    let c = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::IllConditioned(e.to_string()))?;
    Ok((c.iter().zip(&scales).map(|(v, s)| v / s).collect(), cond))
}

fn asymptotic_fit(sol: &RadialSolution, opts: &FitOptions, two_gamma: f64) -> Result<Branches> {
    let (lo, hi) = opts.window;
    if !(lo > 0.0 && hi > lo && hi <= sol.opts.t_max) || opts.samples < 8 {
        return Err(Error::IllConditioned(format!("bad fit window [{lo}, {hi}]")));
    }
    let ts = crate::geometry::linspace(lo, hi, opts.samples);
    let xs: Vec<f64> = ts.iter().map(|t| 2.0 * (-t).exp()).collect();
    let ws = ts.iter().map(|&t| sol.state(t).map(|y| y[0])).collect::<Result<Vec<f64>>>()?;
    let cols = asymptotic_basis(sol, two_gamma);
    let (c, cond) = lsq(&cols, &xs, &ws)?;
    if !(cond <= 1e8) {
        return Err(Error::IllConditioned(format!("fit condition number {cond:e} exceeds 1e8")));
    }
    // One column fewer gives the truncation sensitivity.
    let (c2, _) = lsq(&cols[..cols.len() - 1], &xs, &ws)?;
    let gi = cols.iter().position(|c| c.1).unwrap_or(1);
    let g2 = if gi < c2.len() { c2[gi] } else { 0.0 };
    let f0 = c[0];
    Ok(Branches {
        f0,
        g0: c[gi],
        e_f: (c[0] - c2[0]).abs().max(4.0 * f64::EPSILON * f0.abs()),
        e_g: (c[gi] - g2).abs().max(4.0 * f64::EPSILON * c[gi].abs()),
        f1: cols.iter().position(|c| c.0 == 2.0 && !c.1).map(|i| c[i] / f0),
        method: FitMethod::Asymptotic,
    })
}

fn check_gamma_range(gamma: f64) -> Result<()> {
    if (0.05..=0.95).contains(&gamma) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "gamma",
            value: gamma,
            range: "[0.05, 0.95]",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierResult {
    pub n: usize,
    pub gamma: f64,
    pub k: usize,
    pub value: f64,
    pub error: f64,
    pub closed_form: f64,
}

/// `d_γ·G₀/F₀` for mode `k` on hyperbolic space.
pub fn scattering_multiplier(n: usize, gamma: f64, k: usize) -> Result<MultiplierResult> {
    scattering_multiplier_with(n, gamma, k, SolveOptions::default())
}

pub fn scattering_multiplier_with(n: usize, gamma: f64, k: usize, opts: SolveOptions) -> Result<MultiplierResult> {
    check_gamma_range(gamma)?;
    let m = WarpedMetric::hyperbolic(n);
    let opts = SolveOptions {
        t_max: opts.t_max.max(4.0),
        ..opts
    };
    let sol = solve_radial_mode(&m, 0.5 * n as f64 + gamma, k, opts)?;
    let b = match sol.branches {
        Some(b) => b,
        None => extract_fg(&sol, &FitOptions::default())?,
    };
    let d = d_gamma(gamma)?;
    let ratio = b.g0 / b.f0;
    Ok(MultiplierResult {
        n,
        gamma,
        k,
        value: d * ratio,
        error: d.abs() * (b.e_g / b.f0.abs() + ratio.abs() * b.e_f / b.f0.abs()),
        closed_form: sphere_multiplier(n, gamma, k)?,
    })
}

/// The adapted profile `Φ = v`: the `k = 0` solution with `F₀ = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct AdaptedProfile {
    pub n: usize,
    pub gamma: f64,
    pub solution: RadialSolution,
    /// Normalization divided out of `u`.
    pub f0: f64,
    /// `G₀/F₀`.
    pub g0: f64,
    pub g0_error: f64,
    /// `((n − 2γ)/(2d_γ))·Q` of the round sphere.
    pub g0_expected: f64,
    /// `x²`-coefficient of `F/F₀` from the asymptotic fit.
    pub f1: f64,
    /// `((n − 2γ)/(8(1 − γ)))·(n/2)`.
    pub f1_expected: f64,
    /// `Φ′ < 0` on the scan grid.
    pub monotone: bool,
}

impl AdaptedProfile {
    /// `(Φ, Φ′, Φ″)`.
    pub fn phi(&self, t: f64) -> Result<[f64; 3]> {
        let [u, du, ddu] = self.solution.u_jet(t)?;
        Ok([u / self.f0, du / self.f0, ddu / self.f0])
    }

    /// `(ln(w/F₀), w′/w)`; `ln Φ = λ ln x + ln(w/F₀)`.
    pub fn log_state(&self, t: f64) -> Result<(f64, f64)> {
        let [w, dw] = self.solution.state(t)?;
        Ok(((w / self.f0).ln(), dw / w))
    }
}

pub fn adapted_profile(n: usize, gamma: f64, opts: SolveOptions) -> Result<AdaptedProfile> {
    check_gamma_range(gamma)?;
    let m = WarpedMetric::hyperbolic(n);
    let sol = solve_radial_mode(&m, 0.5 * n as f64 + gamma, 0, opts)?;
    let b = match sol.branches {
        Some(b) => b,
        None => extract_fg(&sol, &FitOptions::default())?,
    };
    let asym = extract_fg(&sol, &FitOptions::asymptotic())?;
    let nf = n as f64;
    let d = d_gamma(gamma)?;
    let q = 2.0 / (nf - 2.0 * gamma) * sphere_multiplier(n, gamma, 0)?;
    let scan = crate::geometry::linspace(0.01, opts.t_max, 300);
    let mut monotone = true;
    for &t in &scan {
        if !(sol.u(t)?[1] / b.f0 < 0.0) {
            monotone = false;
        }
    }
    Ok(AdaptedProfile {
        n,
        gamma,
        f0: b.f0,
        g0: b.g0 / b.f0,
        g0_error: b.e_g / b.f0.abs() + (b.g0 / b.f0).abs() * b.e_f / b.f0.abs(),
        g0_expected: (nf - 2.0 * gamma) / (2.0 * d) * q,
        f1: asym.f1.unwrap_or(f64::NAN),
        f1_expected: (nf - 2.0 * gamma) / (8.0 * (1.0 - gamma)) * (0.5 * nf),
        monotone,
        solution: sol,
    })
}

/// Relative variation of the `φⁿ`-weighted Wronskian of the regular solution
/// and a second solution started at `t = 1` from `(w, w′) = (0, 1)`.
pub fn wronskian_variation(metric: &WarpedMetric, s: f64, k: usize, opts: SolveOptions, grid: &[f64]) -> Result<f64> {
    let sol = solve_radial_mode(metric, s, k, opts)?;
    let second = RadialSolution {
        nodes: vec![(1.0, [0.0, 1.0])],
        ..sol.clone()
    };
    let mut st = Stepper::new(second.rhs(), 1.0, [0.0, 1.0], second.ode_options());
    let n = metric.n as i32;
    let l = sol.lambda;
    let mut ws = Vec::with_capacity(grid.len());
    for &t in grid {
        if t < 1.0 {
            return Err(Error::Domain {
                what: "wronskian grid",
                value: t,
                range: "t >= 1",
            });
        }
        let a = sol.state(t)?;
        let b = st.advance(t, None)?;
        let phi = metric.phi(t)[0];
        // u₁u₂′ − u₁′u₂ = 4^λ e^{−2λt} (w₁w₂′ − w₁′w₂).
        let wr = (a[0] * b[1] - a[1] * b[0]) * (2.0 * l * 2f64.ln() - 2.0 * l * t).exp();
        ws.push(phi.powi(n) * wr);
    }
    let w0 = ws[0];
    Ok(ws.iter().map(|w| ((w - w0) / w0).abs()).fold(0.0, f64::max))
}
