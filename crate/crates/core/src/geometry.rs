//! Rotationally symmetric metrics `g₊ = dt² + φ(t)² g_S` on the ball.
//!
//! Warps are closed-form evaluators with analytic derivatives. Besides plain
//! `(φ, φ′, φ″)`, every warp exposes a [`WarpJet`] that carries the small
//! deviations `φ′/φ − 1`, `φ″/φ − 1` and `(1 − φ′²)/φ² + 1` computed without
//! cancellation, which downstream code needs once `e^{2t}` amplification
//! enters.

use serde::{Deserialize, Serialize};

use crate::dd::DD;
use crate::error::{Error, Result};
use crate::quad;
use crate::series::Series;
use crate::specfun::sphere_volume;

/// Below this radius `φ` and its derivatives come from the Taylor series.
const SERIES_RADIUS: f64 = 1e-3;
const SERIES_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WarpSpec {
    /// `φ = sinh t`.
    Hyperbolic,
    /// `φ = sinh t · (1 + ε e^{−at} s(t))` with `s` the quintic smoothstep on
    /// `[0, 1]`, extended by 1.
    Perturbed { epsilon: f64, a: f64 },
    /// `φ = sinh t · (1 − δ tanh⁴ t)`. Satisfies `φ″ ≤ φ`, hence `Ric ≥ −n`.
    Deficit { delta: f64 },
    /// `φ = t`; Euclidean space, not asymptotically hyperbolic.
    Flat,
}

/// Warp data at one radius, with the cancellation-prone parts split off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpJet {
    pub phi: f64,
    pub dphi: f64,
    pub ddphi: f64,
    /// `φ′/φ − 1`.
    pub d1m1: f64,
    /// `φ″/φ − 1`.
    pub d2m1: f64,
    /// `(1 − φ′²)/φ² + 1`.
    pub ktan_p1: f64,
}

impl WarpJet {
    pub fn d1(&self) -> DD {
        DD::ONE + self.d1m1
    }
    pub fn d2(&self) -> DD {
        DD::ONE + self.d2m1
    }
    pub fn ktan(&self) -> DD {
        self.ktan_p1 - DD::ONE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpedMetric {
    pub n: usize,
    pub warp: WarpSpec,
}

/// `coth t − 1`.
fn coth_m1(t: f64) -> f64 {
    2.0 / (2.0 * t).exp_m1()
}

fn smoothstep(t: f64) -> [f64; 3] {
    if t >= 1.0 {
        return [1.0, 0.0, 0.0];
    }
    let t2 = t * t;
    [
        t2 * t * (10.0 - 15.0 * t + 6.0 * t2),
        30.0 * t2 * (1.0 - 2.0 * t + t2),
        60.0 * t * (1.0 - 3.0 * t + 2.0 * t2),
    ]
}

impl WarpedMetric {
    pub fn hyperbolic(n: usize) -> Self {
        WarpedMetric {
            n,
            warp: WarpSpec::Hyperbolic,
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        match self.warp {
            WarpSpec::Hyperbolic => true,
            WarpSpec::Perturbed { epsilon, .. } => epsilon == 0.0,
            WarpSpec::Deficit { delta } => delta == 0.0,
            WarpSpec::Flat => false,
        }
    }

    /// `η` with `φ = sinh t · (1 + η)`, and two derivatives.
    pub fn eta(&self, t: f64) -> [f64; 3] {
        match self.warp {
            WarpSpec::Hyperbolic | WarpSpec::Flat => [0.0, 0.0, 0.0],
            WarpSpec::Perturbed { epsilon, a } => {
                let [s, s1, s2] = smoothstep(t);
                let e = epsilon * (-a * t).exp();
                [e * s, e * (s1 - a * s), e * (s2 - 2.0 * a * s1 + a * a * s)]
            }
            WarpSpec::Deficit { delta } => {
                let th = t.tanh();
                let sech2 = 1.0 - th * th;
                let th2 = th * th;
                [
                    -delta * th2 * th2,
                    -4.0 * delta * th2 * th * sech2,
                    -4.0 * delta * th2 * sech2 * (3.0 * sech2 - 2.0 * th2),
                ]
            }
        }
    }

    /// Taylor coefficients of `φ` about the pole.
    pub fn phi_series(&self, len: usize) -> Series {
        let sinh = Series::sinh(len);
        match self.warp {
            WarpSpec::Hyperbolic => sinh,
            WarpSpec::Flat => Series::identity(len),
            WarpSpec::Perturbed { epsilon, a } => {
                // Exact on [0, 1), where the smoothstep is a polynomial.
                let bump = Series::from_poly(&[0.0, 0.0, 0.0, 10.0, -15.0, 6.0], len);
                let eta = Series::exp_linear(-a, len).mul(&bump).scale(epsilon);
                sinh.mul(&Series::constant(1.0, len).add(&eta))
            }
            WarpSpec::Deficit { delta } => {
                let tanh = sinh.div(&Series::cosh(len));
                let t2 = tanh.mul(&tanh);
                let eta = t2.mul(&t2).scale(-delta);
                sinh.mul(&Series::constant(1.0, len).add(&eta))
            }
        }
    }

    /// `(φ, φ′, φ″)`.
    pub fn phi(&self, t: f64) -> [f64; 3] {
        let j = self.jet(t);
        [j.phi, j.dphi, j.ddphi]
    }

    pub fn jet(&self, t: f64) -> WarpJet {
        if self.warp == WarpSpec::Flat {
            return WarpJet {
                phi: t,
                dphi: 1.0,
                ddphi: 0.0,
                d1m1: 1.0 / t - 1.0,
                d2m1: -1.0,
                ktan_p1: 1.0,
            };
        }
        if t < SERIES_RADIUS {
            let [p, dp, ddp] = self.phi_series(SERIES_LEN).eval_jet(t);
            return WarpJet {
                phi: p,
                dphi: dp,
                ddphi: ddp,
                d1m1: dp / p - 1.0,
                d2m1: ddp / p - 1.0,
                ktan_p1: (1.0 - dp * dp) / (p * p) + 1.0,
            };
        }
        let (sh, ch) = (t.sinh(), t.cosh());
        let cm1 = coth_m1(t);
        let coth = 1.0 + cm1;
        let [e, e1, e2] = self.eta(t);
        let q = 1.0 + e;
        WarpJet {
            phi: sh * q,
            dphi: ch * q + sh * e1,
            ddphi: sh * q + 2.0 * ch * e1 + sh * e2,
            d1m1: cm1 + e1 / q,
            d2m1: (2.0 * coth * e1 + e2) / q,
            ktan_p1: (-(2.0 * e + e * e) / (sh * sh) - 2.0 * coth * e1 * q - e1 * e1) / (q * q),
        }
    }
}

/// Validate a warp description and return the metric.
pub fn make_warped_metric(n: usize, warp: WarpSpec) -> Result<WarpedMetric> {
    if n < 2 {
        return Err(Error::InvalidWarp(format!("boundary dimension n = {n} must be at least 2")));
    }
    match warp {
        WarpSpec::Perturbed { epsilon, a } => {
            if !(epsilon.is_finite() && a.is_finite()) {
                return Err(Error::InvalidWarp("non-finite perturbation parameters".into()));
            }
            if a < 2.0 {
                return Err(Error::InvalidWarp(format!("decay rate a = {a} must be at least 2")));
            }
            if epsilon <= -1.0 {
                return Err(Error::InvalidWarp(format!("amplitude ε = {epsilon} makes φ vanish")));
            }
        }
        WarpSpec::Deficit { delta } => {
            if !(0.0..1.0).contains(&delta) {
                return Err(Error::InvalidWarp(format!("deficit δ = {delta} must lie in [0, 1)")));
            }
        }
        WarpSpec::Hyperbolic | WarpSpec::Flat => {}
    }
    let m = WarpedMetric { n, warp };
    let s = m.phi_series(4);
    if s.0[0] != 0.0 || (s.0[1] - 1.0).abs() > 1e-14 {
        return Err(Error::InvalidWarp("φ is not t + O(t²) at the pole".into()));
    }
    for i in 1..=4000 {
        let t = i as f64 * 0.01;
        let [p, dp, _] = m.phi(t);
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidWarp(format!("φ({t}) = {p} is not positive")));
        }
        if !(dp > 0.0) {
            return Err(Error::InvalidWarp(format!("φ′({t}) = {dp} is not positive")));
        }
    }
    if warp != WarpSpec::Flat {
        let eta = m.eta(40.0)[0];
        if !(eta > -1.0 && eta.is_finite()) {
            return Err(Error::InvalidWarp("warp is not asymptotically hyperbolic".into()));
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub grid: Vec<f64>,
    pub k_rad: Vec<f64>,
    pub k_tan: Vec<f64>,
    /// `max(−n − smallest Ricci eigenvalue)`; positive means `Ric ≥ −n` fails.
    pub ricci_defect: f64,
    /// `max |Ric + n g|`.
    pub einstein_defect: f64,
}

pub fn curvature_report(metric: &WarpedMetric, grid: &[f64]) -> Result<CurvatureReport> {
    let n = metric.n as f64;
    let mut rep = CurvatureReport {
        grid: grid.to_vec(),
        k_rad: Vec::with_capacity(grid.len()),
        k_tan: Vec::with_capacity(grid.len()),
        ricci_defect: f64::NEG_INFINITY,
        einstein_defect: 0.0,
    };
    for &t in grid {
        if !(t > 0.0) {
            return Err(Error::Domain {
                what: "curvature_report grid",
                value: t,
                range: "t > 0",
            });
        }
        let j = metric.jet(t);
        rep.k_rad.push(-j.d2().to_f64());
        rep.k_tan.push(j.ktan().to_f64());
        // Ric + n in the radial and tangential directions.
        let rad = -n * j.d2m1;
        let tan = -j.d2m1 + (n - 1.0) * j.ktan_p1;
        rep.ricci_defect = rep.ricci_defect.max(-rad).max(-tan);
        rep.einstein_defect = rep.einstein_defect.max(rad.abs()).max(tan.abs());
    }
    if grid.is_empty() {
        rep.ricci_defect = 0.0;
    }
    Ok(rep)
}

/// `Δ₊u = u″ + n (φ′/φ) u′` for a radial profile.
pub fn radial_laplacian<'a, F>(metric: &'a WarpedMetric, profile: F) -> impl Fn(f64) -> f64 + 'a
where
    F: Fn(f64) -> [f64; 3] + 'a,
{
    move |t| {
        let [_, du, ddu] = profile(t);
        let j = metric.jet(t);
        ddu + metric.n as f64 * (j.dphi / j.phi) * du
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeCurve {
    pub n: usize,
    pub grid: Vec<f64>,
    pub area: Vec<f64>,
    pub ball: Vec<f64>,
    pub area_ratio: Vec<f64>,
    pub ball_ratio: Vec<f64>,
    pub monotone: bool,
}

impl VolumeCurve {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,area,ball,area_ratio,ball_ratio\n");
        for i in 0..self.grid.len() {
            s.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                self.grid[i], self.area[i], self.ball[i], self.area_ratio[i], self.ball_ratio[i]
            ));
        }
        s
    }
}

/// Cumulative integrals of `f` from 0 through each grid point.
pub(crate) fn cumulative<F: Fn(f64) -> f64>(f: F, grid: &[f64], rel_tol: f64) -> Result<Vec<f64>> {
    let last = *grid.last().unwrap_or(&0.0);
    let rough = quad::integrate(&f, 0.0, last, 1e-3 * f(last).abs().max(1e-300))?.value.abs();
    let tol = rel_tol * rough.max(f64::MIN_POSITIVE) / grid.len().max(1) as f64;
    let mut acc = 0.0;
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(grid.len());
    for &t in grid {
        acc += quad::integrate(&f, prev, t, tol)?.value;
        out.push(acc);
        prev = t;
    }
    Ok(out)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for &t in grid {
        if !(t > prev) {
            return Err(Error::Domain {
                what: "volume grid",
                value: t,
                range: "strictly increasing positive radii",
            });
        }
        prev = t;
    }
    Ok(())
}

/// Geodesic-sphere areas, ball volumes, and their ratios against hyperbolic
/// space of the same dimension.
pub fn volume_data(metric: &WarpedMetric, grid: &[f64]) -> Result<VolumeCurve> {
    check_grid(grid)?;
    let n = metric.n;
    let vol = sphere_volume(n);
    let area_of = |m: WarpedMetric| move |t: f64| vol * m.phi(t)[0].powi(n as i32);
    let area: Vec<f64> = grid.iter().map(|&t| area_of(*metric)(t)).collect();
    let ball = cumulative(area_of(*metric), grid, 1e-12)?;
    let (area_ratio, ball_ratio) = if metric.warp == WarpSpec::Hyperbolic {
        (vec![1.0; grid.len()], vec![1.0; grid.len()])
    } else {
        let h = WarpedMetric::hyperbolic(n);
        let hb = cumulative(area_of(h), grid, 1e-12)?;
        (
            grid.iter().zip(&area).map(|(&t, a)| a / area_of(h)(t)).collect(),
            ball.iter().zip(&hb).map(|(b, r)| b / r).collect(),
        )
    };
    let monotone = ball_ratio.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    Ok(VolumeCurve {
        n,
        grid: grid.to_vec(),
        area,
        ball,
        area_ratio,
        ball_ratio,
        monotone,
    })
}

/// `count` equally spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![a];
    }
    (0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perturbed(epsilon: f64, a: f64) -> WarpedMetric {
        make_warped_metric(3, WarpSpec::Perturbed { epsilon, a }).unwrap()
    }

    #[test]
    fn hyperbolic_warp_values() {
        let m = make_warped_metric(3, WarpSpec::Hyperbolic).unwrap();
        assert!((m.phi(1.0)[0] - 1.175_201_193_643_801_4).abs() < 1e-15);
        let j = m.jet(20.0);
        assert!((j.d1m1 - 2.0 / (40f64.exp() - 1.0)).abs() < 1e-30);
    }

    #[test]
    fn zero_perturbation_is_hyperbolic() {
        let h = WarpedMetric::hyperbolic(3);
        let p = perturbed(0.0, 3.0);
        for t in [1e-4, 0.3, 0.9, 1.0, 2.5, 17.0] {
            assert_eq!(p.phi(t), h.phi(t));
        }
    }

    #[test]
    fn perturbed_eta_at_two() {
        let p = perturbed(0.01, 3.0);
        let r = p.phi(2.0)[0] / 2f64.sinh() - 1.0;
        assert!((r - 2.478_752_176_666_358_5e-5).abs() < 1e-15);
    }

    #[test]
    fn warp_derivatives_match_differences() {
        for spec in [
            WarpSpec::Perturbed { epsilon: 0.2, a: 2.5 },
            WarpSpec::Deficit { delta: 0.3 },
        ] {
            let m = make_warped_metric(4, spec).unwrap();
            for t in [0.2, 0.7, 1.5, 3.0] {
                let h = 1e-5;
                let [_, d, dd] = m.phi(t);
                let fd = (m.phi(t + h)[0] - m.phi(t - h)[0]) / (2.0 * h);
                let fdd = (m.phi(t + h)[1] - m.phi(t - h)[1]) / (2.0 * h);
                assert!((d - fd).abs() < 1e-8 * d.abs().max(1.0), "{spec:?} t={t}");
                assert!((dd - fdd).abs() < 1e-8 * dd.abs().max(1.0), "{spec:?} t={t}");
            }
        }
    }

    #[test]
    fn series_and_closed_form_meet() {
        for spec in [
            WarpSpec::Hyperbolic,
            WarpSpec::Perturbed { epsilon: 0.3, a: 3.0 },
            WarpSpec::Deficit { delta: 0.5 },
        ] {
            let m = make_warped_metric(3, spec).unwrap();
            let t = SERIES_RADIUS;
            let s = m.phi_series(SERIES_LEN).eval_jet(t);
            let c = m.phi(t * (1.0 + 1e-15));
            for i in 0..3 {
                assert!((s[i] - c[i]).abs() < 1e-12, "{spec:?} {i}: {} vs {}", s[i], c[i]);
            }
        }
    }

    #[test]
    fn invalid_warps_rejected() {
        assert!(make_warped_metric(3, WarpSpec::Perturbed { epsilon: 0.1, a: 1.0 }).is_err());
        assert!(make_warped_metric(3, WarpSpec::Perturbed { epsilon: -2.0, a: 3.0 }).is_err());
        assert!(make_warped_metric(3, WarpSpec::Deficit { delta: 1.5 }).is_err());
        assert!(make_warped_metric(1, WarpSpec::Hyperbolic).is_err());
        // A deep deficit drives φ′ below zero near t = 1.3.
        assert!(matches!(
            make_warped_metric(3, WarpSpec::Deficit { delta: 0.95 }),
            Err(Error::InvalidWarp(_))
        ));
    }

    #[test]
    fn hyperbolic_curvature_is_constant() {
        let m = WarpedMetric::hyperbolic(3);
        let grid = linspace(0.1, 30.0, 300);
        let r = curvature_report(&m, &grid).unwrap();
        assert!(r.einstein_defect <= 1e-12);
        assert!(r.k_rad.iter().chain(&r.k_tan).all(|k| (k + 1.0).abs() < 1e-12));
    }

    #[test]
    fn flat_curvature_vanishes() {
        let m = make_warped_metric(3, WarpSpec::Flat).unwrap();
        let r = curvature_report(&m, &linspace(0.1, 10.0, 50)).unwrap();
        assert!(r.k_rad.iter().chain(&r.k_tan).all(|k| k.abs() < 1e-15));
    }

    #[test]
    fn perturbation_breaks_einstein() {
        let r = curvature_report(&perturbed(0.01, 3.0), &linspace(0.05, 10.0, 400)).unwrap();
        assert!(r.einstein_defect > 0.0);
        assert!(r.ricci_defect.is_finite());
    }

    #[test]
    fn deficit_satisfies_ricci_bound() {
        for delta in [0.05, 0.3, 0.6] {
            let m = make_warped_metric(5, WarpSpec::Deficit { delta }).unwrap();
            let r = curvature_report(&m, &linspace(0.01, 30.0, 1000)).unwrap();
            assert!(r.ricci_defect <= 0.0, "δ={delta}: {}", r.ricci_defect);
            assert!(r.einstein_defect > 0.0);
        }
    }

    #[test]
    fn laplacian_examples() {
        let m = WarpedMetric::hyperbolic(3);
        let lt = radial_laplacian(&m, |_| [0.0, 1.0, 0.0]);
        for t in [0.5, 2.0, 9.0] {
            assert!((lt(t) - 3.0 / t.tanh()).abs() < 1e-13);
        }
        let lc = radial_laplacian(&m, |t: f64| [t.cosh(), t.sinh(), t.cosh()]);
        for t in [0.5, 2.0, 9.0] {
            assert!((lc(t) - 4.0 * t.cosh()).abs() < 1e-12 * t.cosh());
        }
        let p = perturbed(0.2, 2.0);
        let lk = radial_laplacian(&p, |_| [5.0, 0.0, 0.0]);
        assert_eq!(lk(1.3), 0.0);
    }

    #[test]
    fn hyperbolic_volume_at_one() {
        let m = WarpedMetric::hyperbolic(3);
        let v = volume_data(&m, &[0.5, 1.0]).unwrap();
        assert!((v.area[1] - 32.038_074_927_135_257_73).abs() < 1e-12);
        assert!((v.ball[1] - 6.875_719_588_241_426_69).abs() < 1e-10);
        assert!(v.monotone);
        assert!(v.area_ratio.iter().chain(&v.ball_ratio).all(|r| *r == 1.0));
    }

    #[test]
    fn zero_perturbation_ratios_are_one() {
        let v = volume_data(&perturbed(0.0, 3.0), &linspace(0.1, 20.0, 100)).unwrap();
        assert!(v.area_ratio.iter().chain(&v.ball_ratio).all(|r| (r - 1.0).abs() < 1e-12));
    }

    #[test]
    fn deficit_ball_ratio_is_monotone() {
        let m = make_warped_metric(3, WarpSpec::Deficit { delta: 0.2 }).unwrap();
        let v = volume_data(&m, &linspace(0.1, 20.0, 200)).unwrap();
        assert!(v.monotone);
        for i in 0..v.grid.len() {
            assert!(v.area_ratio[i] <= v.ball_ratio[i] + 1e-12);
        }
    }

    #[test]
    fn csv_header() {
        let v = volume_data(&WarpedMetric::hyperbolic(2), &[1.0]).unwrap();
        let csv = v.to_csv();
        assert!(csv.starts_with("t,area,ball,area_ratio,ball_ratio\n1.0000000000000000e0,"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ball_increments_match_area_integral(t1 in 0.1f64..5.0, dt in 0.1f64..5.0, n in 2usize..6) {
            let m = WarpedMetric::hyperbolic(n);
            let v = volume_data(&m, &[t1, t1 + dt]).unwrap();
            let direct = quad::integrate(|t| v.area[0] / m.phi(t1)[0].powi(n as i32) * m.phi(t)[0].powi(n as i32), t1, t1 + dt, 1e-12 * v.ball[1]).unwrap();
            prop_assert!((v.ball[1] - v.ball[0] - direct.value).abs() <= 1e-10 * v.ball[1]);
            prop_assert!(v.ball[1] > v.ball[0]);
        }

        #[test]
        fn deficit_area_ratio_dominates_ball_ratio(delta in 0.0f64..0.6, n in 2usize..6) {
            let m = make_warped_metric(n, WarpSpec::Deficit { delta }).unwrap();
            let v = volume_data(&m, &linspace(0.2, 12.0, 40)).unwrap();
            prop_assert!(v.monotone);
            for i in 0..v.grid.len() {
                prop_assert!(v.area_ratio[i] <= v.ball_ratio[i] + 1e-12);
            }
        }
    }
}
