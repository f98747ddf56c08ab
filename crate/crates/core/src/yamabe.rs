//! Rayleigh quotient of the sphere's `P_{2γ}` over zonal trial functions,
//! its minimization, and the volume-ratio chain on warped metrics.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{volume_data, WarpSpec, WarpedMetric};
use crate::specfun::{sphere_constants, sphere_multiplier, sphere_volume};

pub const MAX_KMAX: usize = 32;

/// Gauss rule in `x = cos θ` for the measure `dV` of `Sⁿ` restricted to zonal
/// functions, with the orthonormal zonal basis tabulated at the nodes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZonalQuadrature {
    pub n: usize,
    pub nodes: Vec<f64>,
    /// Includes the factor `|Sⁿ⁻¹|`; sums to `|Sⁿ|`.
    pub weights: Vec<f64>,
    /// `basis[i][k] = Y_k(x_i)` for `k < nodes.len()`.
    pub basis: Vec<Vec<f64>>,
}

/// Off-diagonal of the Jacobi matrix for the Gegenbauer weight
/// `(1 − x²)^{(n−2)/2}`.
fn jacobi_b(n: usize, k: usize) -> f64 {
    let (k, n) = (k as f64, n as f64);
    (k * (k + n - 2.0) / ((2.0 * k + n - 1.0) * (2.0 * k + n - 3.0))).sqrt()
}

/// Orthonormal values `Y_0..Y_{len−1}` at `x`, and `Y_len` with its derivative.
fn orthonormal(n: usize, x: f64, len: usize, mass: f64) -> (Vec<f64>, f64, f64) {
    let mut vals = Vec::with_capacity(len);
    let (mut p0, mut p1) = (0.0, mass.sqrt().recip());
    let (mut d0, mut d1) = (0.0, 0.0);
    for k in 0..len {
        vals.push(p1);
        let bk = if k == 0 { 0.0 } else { jacobi_b(n, k) };
        let bn = jacobi_b(n, k + 1);
        let p2 = (x * p1 - bk * p0) / bn;
        let d2 = (p1 + x * d1 - bk * d0) / bn;
        (p0, p1, d0, d1) = (p1, p2, d1, d2);
    }
    (vals, p1, d1)
}

impl ZonalQuadrature {
    /// `count`-point rule for `Sⁿ`.
    pub fn new(n: usize, count: usize) -> Result<Self> {
        if n < 2 || count < 2 {
            return Err(Error::Domain {
                what: "zonal quadrature",
                value: n.min(count) as f64,
                range: "n >= 2 and count >= 2",
            });
        }
        let mass = sphere_volume(n);
        let jm = DMatrix::from_fn(count, count, |i, j| {
            if i + 1 == j || j + 1 == i {
                jacobi_b(n, i.max(j))
            } else {
                0.0
            }
        });
        let mut nodes: Vec<f64> = SymmetricEigen::new(jm).eigenvalues.iter().copied().collect();
        nodes.sort_by(f64::total_cmp);
        let mut weights = Vec::with_capacity(count);
        let mut basis = Vec::with_capacity(count);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (_, p, dp) = orthonormal(n, *x, count, mass);
                *x -= p / dp;
            }
            let (vals, _, _) = orthonormal(n, *x, count, mass);
            // Christoffel weight.
            weights.push(1.0 / vals.iter().map(|v| v * v).sum::<f64>());
            basis.push(vals);
        }
        Ok(ZonalQuadrature { n, nodes, weights, basis })
    }

    /// Node count used for trials of degree `kmax`.
    pub fn default_count(kmax: usize) -> usize {
        4 * kmax + 32
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Discrete coefficients `c_k = Σ wᵢ f(xᵢ) Y_k(xᵢ)`.
    pub fn project(&self, values: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; self.len()];
        for (i, (w, f)) in self.weights.iter().zip(values).enumerate() {
            for (ck, y) in c.iter_mut().zip(&self.basis[i]) {
                *ck += w * f * y;
            }
        }
        c
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZonalTrial {
    pub n: usize,
    pub kmax: usize,
    /// Coefficients in the orthonormal zonal basis.
    pub coeffs: Vec<f64>,
    #[serde(skip)]
    pub quadrature: Arc<ZonalQuadrature>,
}

impl ZonalTrial {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        let kmax = coeffs.len().saturating_sub(1);
        let quadrature = Arc::new(ZonalQuadrature::new(n, ZonalQuadrature::default_count(kmax))?);
        Self::with_quadrature(coeffs, quadrature)
    }

    pub fn with_quadrature(coeffs: Vec<f64>, quadrature: Arc<ZonalQuadrature>) -> Result<Self> {
        if coeffs.is_empty() || quadrature.len() < 2 * (coeffs.len() - 1) + 16 {
            return Err(Error::Domain {
                what: "zonal trial",
                value: coeffs.len() as f64,
                range: "at least one coefficient and 2*kmax+16 quadrature nodes",
            });
        }
        Ok(ZonalTrial {
            n: quadrature.n,
            kmax: coeffs.len() - 1,
            coeffs,
            quadrature,
        })
    }

    /// Constant trial of unit `L²` norm.
    pub fn constant(n: usize, kmax: usize) -> Result<Self> {
        let mut c = vec![0.0; kmax + 1];
        c[0] = 1.0;
        Self::new(n, c)
    }

    /// Values at the quadrature nodes.
    pub fn values(&self) -> Vec<f64> {
        self.quadrature
            .basis
            .iter()
            .map(|row| row.iter().zip(&self.coeffs).map(|(y, c)| y * c).sum())
            .collect()
    }

    pub fn check_admissible(&self) -> Result<Vec<f64>> {
        let v = self.values();
        if let Some((node, &value)) = v.iter().enumerate().find(|(_, f)| !(**f > 0.0)) {
            return Err(Error::Inadmissible { node, value });
        }
        Ok(v)
    }
}

fn multipliers(n: usize, gamma: f64, len: usize) -> Result<Vec<f64>> {
    (0..len).map(|k| sphere_multiplier(n, gamma, k)).collect()
}

/// `∫ f P f / (∫ f^q)^{2/q}` with `q = 2n/(n−2γ)`.
fn quotient(quad: &ZonalQuadrature, mult: &[f64], coeffs: &[f64], values: &[f64], q: f64) -> f64 {
    let num: f64 = coeffs.iter().zip(mult).map(|(c, p)| c * c * p).sum();
    let den: f64 = quad.weights.iter().zip(values).map(|(w, f)| w * f.powf(q)).sum();
    num / den.powf(2.0 / q)
}

fn exponent(n: usize, gamma: f64) -> f64 {
    2.0 * n as f64 / (n as f64 - 2.0 * gamma)
}

pub fn rayleigh_quotient(n: usize, gamma: f64, trial: &ZonalTrial) -> Result<f64> {
    if trial.n != n {
        return Err(Error::Domain {
            what: "rayleigh_quotient (trial dimension)",
            value: trial.n as f64,
            range: "trial.n == n",
        });
    }
    let values = trial.check_admissible()?;
    let mult = multipliers(n, gamma, trial.coeffs.len())?;
    Ok(quotient(&trial.quadrature, &mult, &trial.coeffs, &values, exponent(n, gamma)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MinimizeOptions {
    pub kmax: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Initial trial step of the backtracking line search.
    pub step: f64,
    /// Sufficient-decrease constant.
    pub armijo: f64,
    pub shrink: f64,
    /// Stop when the gradient norm falls below `grad_tol · value`.
    pub grad_tol: f64,
    /// Amplitude of random initial log-coefficients.
    pub spread: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            kmax: 16,
            restarts: 8,
            max_iters: 400,
            seed: 0,
            step: 1.0,
            armijo: 1e-4,
            shrink: 0.5,
            grad_tol: 1e-9,
            spread: 0.3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimizeResult {
    pub min: f64,
    /// Expansion of the minimizing `f` in the zonal basis.
    pub argmin: ZonalTrial,
    /// Coefficients of `g = ln f`, degree `kmax`.
    pub log_coeffs: Vec<f64>,
    pub iters: usize,
    pub restart: usize,
    pub converged: bool,
}

struct Objective<'a> {
    quad: &'a ZonalQuadrature,
    mult: Vec<f64>,
    q: f64,
    dim: usize,
}

impl Objective<'_> {
    fn f_values(&self, a: &[f64]) -> Vec<f64> {
        self.quad
            .basis
            .iter()
            .map(|row| row[..self.dim].iter().zip(a).map(|(y, c)| y * c).sum::<f64>().exp())
            .collect()
    }

    /// Quotient of `f = exp(g)` and the gradient of its logarithm.
    fn eval(&self, a: &[f64]) -> (f64, Vec<f64>) {
        let f = self.f_values(a);
        let c = self.quad.project(&f);
        let value = quotient(self.quad, &self.mult, &c, &f, self.q);
        let num: f64 = c.iter().zip(&self.mult).map(|(c, p)| c * c * p).sum();
        let den: f64 = self.quad.weights.iter().zip(&f).map(|(w, f)| w * f.powf(self.q)).sum();
        let mut grad = vec![0.0; self.dim];
        for (i, row) in self.quad.basis.iter().enumerate() {
            let pf: f64 = row.iter().zip(&c).zip(&self.mult).map(|((y, c), p)| y * c * p).sum();
            let wf = self.quad.weights[i] * f[i];
            let s = 2.0 * wf * pf / num - 2.0 * wf * f[i].powf(self.q - 1.0) / den;
            for (g, y) in grad.iter_mut().zip(&row[..self.dim]) {
                *g += s * y;
            }
        }
        (value, grad)
    }
}

struct Run {
    value: f64,
    a: Vec<f64>,
    iters: usize,
    converged: bool,
}

fn descend(obj: &Objective, mut a: Vec<f64>, opts: &MinimizeOptions) -> Run {
    let (mut value, mut grad) = obj.eval(&a);
    for it in 0..opts.max_iters {
        let gn2: f64 = grad.iter().map(|g| g * g).sum();
        if gn2.sqrt() <= opts.grad_tol {
            return Run { value, a, iters: it, converged: true };
        }
        let mut step = opts.step;
        loop {
            let trial: Vec<f64> = a.iter().zip(&grad).map(|(x, g)| x - step * value * g).collect();
            let (tv, tg) = obj.eval(&trial);
            if tv <= value * (1.0 - opts.armijo * step * gn2) {
                // Flat directions: a relative gain below roundoff ends the run.
                let stalled = value - tv <= 4.0 * f64::EPSILON * value;
                (a, value, grad) = (trial, tv, tg);
                if stalled {
                    return Run { value, a, iters: it + 1, converged: true };
                }
                break;
            }
            step *= opts.shrink;
            if step < 1e-14 {
                return Run { value, a, iters: it, converged: true };
            }
        }
    }
    Run { value, a, iters: opts.max_iters, converged: false }
}

fn random_start(kmax: usize, seed: u64, spread: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = vec![0.0; kmax + 1];
    for (k, x) in a.iter_mut().enumerate().skip(1) {
        *x = spread * rng.random_range(-1.0..1.0) / k as f64;
    }
    a
}

/// Minimize from explicit initial log-coefficient vectors.
pub fn minimize_from(n: usize, gamma: f64, starts: &[Vec<f64>], opts: &MinimizeOptions) -> Result<MinimizeResult> {
    if opts.kmax > MAX_KMAX || starts.is_empty() {
        return Err(Error::Domain {
            what: "minimize_rayleigh",
            value: opts.kmax as f64,
            range: "kmax <= 32 and at least one restart",
        });
    }
    let quad = ZonalQuadrature::new(n, ZonalQuadrature::default_count(opts.kmax))?;
    let obj = Objective {
        quad: &quad,
        mult: multipliers(n, gamma, quad.len())?,
        q: exponent(n, gamma),
        dim: opts.kmax + 1,
    };
    let runs: Vec<Run> = starts
        .par_iter()
        .map(|s| {
            let mut a = s.clone();
            a.resize(obj.dim, 0.0);
            descend(&obj, a, opts)
        })
        .collect();
    let (restart, best) = runs
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.value.total_cmp(&y.1.value).then(x.0.cmp(&y.0)))
        .expect("nonempty");
    if !best.value.is_finite() {
        return Err(Error::NonConvergence {
            iters: best.iters,
            value: best.value,
        });
    }
    if !runs.iter().any(|r| r.converged) {
        return Err(Error::NonConvergence {
            iters: best.iters,
            value: best.value,
        });
    }
    let f = obj.f_values(&best.a);
    let coeffs = quad.project(&f);
    let out_quad = Arc::new(ZonalQuadrature::new(n, 2 * (coeffs.len() - 1) + 16)?);
    Ok(MinimizeResult {
        min: best.value,
        argmin: ZonalTrial::with_quadrature(coeffs, out_quad)?,
        log_coeffs: best.a.clone(),
        iters: best.iters,
        restart,
        converged: best.converged,
    })
}

/// Restart 0 starts from the constant; the others from seeded random
/// log-coefficients.
pub fn minimize_rayleigh(n: usize, gamma: f64, opts: &MinimizeOptions) -> Result<MinimizeResult> {
    let starts: Vec<Vec<f64>> = (0..opts.restarts.max(1))
        .map(|r| {
            if r == 0 {
                vec![0.0; opts.kmax + 1]
            } else {
                random_start(opts.kmax, opts.seed.wrapping_add(r as u64), opts.spread)
            }
        })
        .collect();
    minimize_from(n, gamma, &starts, opts)
}

/// Positive random trial `f = c₀Y₀ + Σ cₖYₖ` with `c₀` large enough to dominate.
pub fn random_admissible_trial(n: usize, kmax: usize, rng: &mut impl Rng) -> Result<ZonalTrial> {
    loop {
        let mut c: Vec<f64> = (0..=kmax).map(|k| rng.random_range(-1.0..1.0) / (1 + k) as f64).collect();
        c[0] = 1.0 + 4.0 * rng.random::<f64>();
        let t = ZonalTrial::new(n, c)?;
        if t.check_admissible().is_ok() {
            return Ok(t);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainInputs {
    pub n: usize,
    pub gamma: f64,
    pub warp: WarpSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaSample {
    pub t: f64,
    pub area_ratio: f64,
    pub ball_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub inputs: ChainInputs,
    pub lower_bound: f64,
    pub eta: Vec<EtaSample>,
    pub bg_monotone: bool,
    /// `None` when the metric is not the model and the chain is report-only.
    pub pass: Option<bool>,
    pub diagnostics: Vec<String>,
}

pub const CHAIN_TOL: f64 = 1e-8;

impl ChainReport {
    /// CSV `t,area_ratio,ball_ratio`.
    pub fn eta_csv(&self) -> String {
        let mut s = String::from("t,area_ratio,ball_ratio\n");
        for e in &self.eta {
            s.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", e.t, e.area_ratio, e.ball_ratio));
        }
        s
    }
}

/// Lower bound `(Y(M)/Y(Sⁿ))^{n/2γ}` against the volume ratios of `metric`.
pub fn theorem_chain_report(n: usize, gamma: f64, metric: &WarpedMetric, grid: &[f64]) -> Result<ChainReport> {
    if metric.n != n {
        return Err(Error::Domain {
            what: "theorem_chain_report (metric dimension)",
            value: metric.n as f64,
            range: "metric.n == n",
        });
    }
    let y_sphere = sphere_constants(n, gamma)?.yamabe;
    // The conformal infinity is the round sphere in every implemented case.
    let y_boundary = y_sphere;
    let lower_bound = (y_boundary / y_sphere).powf(n as f64 / (2.0 * gamma));
    let v = volume_data(metric, grid)?;
    let eta: Vec<EtaSample> = grid
        .iter()
        .enumerate()
        .map(|(i, &t)| EtaSample {
            t,
            area_ratio: v.area_ratio[i],
            ball_ratio: v.ball_ratio[i],
        })
        .collect();
    let mut diagnostics = Vec::new();
    let pass = if metric.is_hyperbolic() {
        let min_area = eta.iter().map(|e| e.area_ratio).fold(f64::INFINITY, f64::min);
        let bound_ok = lower_bound <= min_area + CHAIN_TOL;
        let order_ok = eta.iter().all(|e| e.area_ratio <= e.ball_ratio + CHAIN_TOL);
        let cap_ok = eta.iter().all(|e| e.ball_ratio <= 1.0 + CHAIN_TOL);
        if !bound_ok {
            diagnostics.push(format!("lower bound {lower_bound} exceeds min area ratio {min_area}"));
        }
        if !order_ok {
            diagnostics.push("area ratio exceeds ball ratio".into());
        }
        if !cap_ok {
            diagnostics.push("ball ratio exceeds 1".into());
        }
        Some(bound_ok && order_ok && cap_ok)
    } else {
        diagnostics.push("metric is not Poincaré–Einstein; chain reported without a verdict".into());
        None
    };
    if !v.monotone {
        diagnostics.push("ball ratio is not nonincreasing".into());
    }
    Ok(ChainReport {
        inputs: ChainInputs {
            n,
            gamma,
            warp: metric.warp,
        },
        lower_bound,
        eta,
        bg_monotone: v.monotone,
        pass,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{linspace, make_warped_metric};
    use proptest::prelude::*;

    #[test]
    fn basis_is_orthonormal() {
        for n in [2, 3, 5] {
            let q = ZonalQuadrature::new(n, 48).unwrap();
            let k = 20;
            for a in 0..=k {
                for b in 0..=k {
                    let g: f64 = (0..q.len()).map(|i| q.weights[i] * q.basis[i][a] * q.basis[i][b]).sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((g - want).abs() < 1e-10, "n={n} ({a},{b}) {g}");
                }
            }
            assert!((q.weights.iter().sum::<f64>() - sphere_volume(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn legendre_nodes_for_two_sphere() {
        let q = ZonalQuadrature::new(2, 3).unwrap();
        assert!((q.nodes[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert!(q.nodes[1].abs() < 1e-15);
        // 2π · 5/9
        assert!((q.weights[0] - 2.0 * std::f64::consts::PI * 5.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn constant_gives_sphere_constant() {
        for (n, g) in [(3, 0.5), (4, 0.25), (2, 0.75)] {
            let y = sphere_constants(n, g).unwrap().yamabe;
            let v = rayleigh_quotient(n, g, &ZonalTrial::constant(n, 4).unwrap()).unwrap();
            assert!((v - y).abs() < 1e-13 * y, "{v} {y}");
        }
    }

    #[test]
    fn degree_two_bump_is_above() {
        let mut c = vec![1.0, 0.0, 0.1];
        c.resize(3, 0.0);
        let t = ZonalTrial::new(3, c).unwrap();
        assert!(rayleigh_quotient(3, 0.5, &t).unwrap() > sphere_constants(3, 0.5).unwrap().yamabe);
    }

    #[test]
    fn inadmissible_trial_rejected() {
        let t = ZonalTrial::new(3, vec![0.1, 1.0]).unwrap();
        assert!(matches!(rayleigh_quotient(3, 0.5, &t), Err(Error::Inadmissible { .. })));
    }

    #[test]
    fn constant_start_needs_no_iterations() {
        let opts = MinimizeOptions { restarts: 1, kmax: 8, ..Default::default() };
        let r = minimize_rayleigh(3, 0.5, &opts).unwrap();
        assert_eq!(r.iters, 0);
        assert!((r.min - sphere_constants(3, 0.5).unwrap().yamabe).abs() < 1e-12);
    }

    #[test]
    fn minimizer_is_sphere_constant() {
        let opts = MinimizeOptions { kmax: 8, restarts: 4, ..Default::default() };
        let r = minimize_rayleigh(2, 0.25, &opts).unwrap();
        let y = sphere_constants(2, 0.25).unwrap().yamabe;
        assert!(r.min >= y - 1e-6);
        assert!((r.min - y).abs() < 1e-6);
        let back = rayleigh_quotient(2, 0.25, &r.argmin).unwrap();
        assert!((back - r.min).abs() < 1e-9 * y, "{back} {}", r.min);
    }

    #[test]
    fn random_descent_does_not_undershoot() {
        let opts = MinimizeOptions { kmax: 6, ..Default::default() };
        let starts = vec![random_start(6, 11, 0.5)];
        let r = minimize_from(3, 0.75, &starts, &opts).unwrap();
        let y = sphere_constants(3, 0.75).unwrap().yamabe;
        assert!(r.min >= y - 1e-9 && r.min < y * 1.01, "{} {y}", r.min);
    }

    #[test]
    fn restart_order_does_not_matter() {
        let opts = MinimizeOptions { kmax: 6, ..Default::default() };
        let mut starts: Vec<Vec<f64>> = (1..5).map(|s| random_start(6, s, 0.4)).collect();
        let a = minimize_from(3, 0.5, &starts, &opts).unwrap().min;
        starts.reverse();
        let b = minimize_from(3, 0.5, &starts, &opts).unwrap().min;
        assert!((a - b).abs() <= 1e-8);
    }

    #[test]
    fn chain_on_model_and_deficit() {
        let grid = linspace(0.1, 20.0, 50);
        let r = theorem_chain_report(3, 0.5, &WarpedMetric::hyperbolic(3), &grid).unwrap();
        assert_eq!(r.pass, Some(true));
        assert_eq!(r.lower_bound, 1.0);
        let m = make_warped_metric(3, WarpSpec::Deficit { delta: 0.3 }).unwrap();
        let r = theorem_chain_report(3, 0.5, &m, &grid).unwrap();
        assert_eq!(r.pass, None);
        assert!(r.bg_monotone);
        assert!(r.eta_csv().starts_with("t,area_ratio,ball_ratio\n"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn quotient_is_scale_invariant(seed in 0u64..1000, scale in 0.01f64..100.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_admissible_trial(3, 6, &mut rng).unwrap();
            let s = ZonalTrial::with_quadrature(t.coeffs.iter().map(|c| c * scale).collect(), t.quadrature.clone()).unwrap();
            let a = rayleigh_quotient(3, 0.5, &t).unwrap();
            let b = rayleigh_quotient(3, 0.5, &s).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a);
        }

        #[test]
        fn quotient_bounded_below(seed in 0u64..1000, gi in 0usize..3) {
            let g = [0.25, 0.5, 0.75][gi];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_admissible_trial(4, 8, &mut rng).unwrap();
            prop_assert!(rayleigh_quotient(4, g, &t).unwrap() >= sphere_constants(4, g).unwrap().yamabe - 1e-6);
        }

        #[test]
        fn quadrature_refinement_is_stable(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_admissible_trial(3, 16, &mut rng).unwrap();
            let count = t.quadrature.len();
            let fine = ZonalTrial::with_quadrature(t.coeffs.clone(), Arc::new(ZonalQuadrature::new(3, 2 * count).unwrap())).unwrap();
            prop_assume!(fine.check_admissible().is_ok());
            let a = rayleigh_quotient(3, 0.25, &t).unwrap();
            let b = rayleigh_quotient(3, 0.25, &fine).unwrap();
            prop_assert!((a - b).abs() < 1e-9, "{} {}", a, b);
        }
    }
}
