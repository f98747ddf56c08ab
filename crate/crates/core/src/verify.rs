//! The acceptance suite: ten numbered criteria, each reduced to a list of
//! checks against stated tolerances.

use std::f64::consts::PI;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compactify::{
    apply_weighted_laplacian_log, boundary_volume, build_compactification, conformal_factor, energy,
    mean_curvature_weighted, poisson_density, weighted_j, Bump, CompactKind, LogProfile,
};
use crate::dd::DD;
use crate::error::Result;
use crate::escobar::{hemisphere_check, ya_hemisphere};
use crate::geometry::{curvature_report, linspace, make_warped_metric, WarpSpec, WarpedMetric};
use crate::scattering::{adapted_profile, scattering_multiplier, SolveOptions};
use crate::specfun::{sphere_constants, sphere_volume};
use crate::yamabe::{minimize_rayleigh, random_admissible_trial, rayleigh_quotient, theorem_chain_report, MinimizeOptions};

pub const SCHEMA_VERSION: u32 = 1;

pub const SWEEP_N: [usize; 3] = [3, 4, 5];
pub const SWEEP_GAMMA: [f64; 3] = [0.25, 0.5, 0.75];

/// One comparison `value ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn le(label: impl Into<String>, value: f64, tolerance: f64) -> Check {
        Check {
            label: label.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    /// A boolean certificate, recorded as `0 ≤ 0` or `1 ≤ 0`.
    fn holds(label: impl Into<String>, ok: bool) -> Check {
        Check::le(label, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    /// A failed computation.
    fn failed(label: impl Into<String>, err: impl std::fmt::Display) -> Check {
        Check {
            label: format!("{}: {err}", label.into()),
            value: f64::NAN,
            tolerance: 0.0,
            pass: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    /// The binding check: largest `value/tolerance`, or the first failure.
    pub measured: f64,
    pub tolerance: f64,
    pub binding: String,
    pub pass: bool,
    pub wall_seconds: f64,
    pub checks: Vec<Check>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<34} {}  measured {:.3e} (tol {:.1e}, {}) [{:.2} s]",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.measured,
            self.tolerance,
            self.binding,
            self.wall_seconds
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub criteria: Vec<CriterionResult>,
    pub pass: bool,
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "multiplier identity"),
    (2, "closed-form adapted profile"),
    (3, "adapted weighted curvature"),
    (4, "weighted-Laplacian equivalence"),
    (5, "mean-curvature limit"),
    (6, "energy invariance and limit"),
    (7, "Yamabe infimum"),
    (8, "volume-ratio chain on the model"),
    (9, "boundary volume limit"),
    (10, "hemisphere suite"),
];

fn summarize(id: u8, checks: Vec<Check>, wall: f64) -> CriterionResult {
    let name = CRITERIA[(id - 1) as usize].1.to_string();
    let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
    let ratio = |c: &Check| {
        if !c.pass {
            f64::INFINITY
        } else if c.tolerance > 0.0 {
            c.value / c.tolerance
        } else {
            0.0
        }
    };
    let bind = checks
        .iter()
        .enumerate()
        .max_by(|a, b| ratio(a.1).total_cmp(&ratio(b.1)).then(b.0.cmp(&a.0)))
        .map(|(_, c)| c.clone());
    let (measured, tolerance, binding) = match bind {
        Some(c) => (c.value, c.tolerance, c.label),
        None => (f64::NAN, 0.0, "no checks".into()),
    };
    CriterionResult {
        id,
        name,
        measured,
        tolerance,
        binding,
        pass,
        wall_seconds: wall,
        checks,
    }
}

fn sweep() -> Vec<(usize, f64)> {
    SWEEP_N.iter().flat_map(|&n| SWEEP_GAMMA.iter().map(move |&g| (n, g))).collect()
}

fn c1() -> Vec<Check> {
    let jobs: Vec<(usize, f64, usize)> = sweep()
        .into_iter()
        .flat_map(|(n, g)| (0..=8).map(move |k| (n, g, k)))
        .collect();
    let errs: Vec<std::result::Result<f64, String>> = jobs
        .par_iter()
        .map(|&(n, g, k)| {
            scattering_multiplier(n, g, k)
                .map(|r| (r.value - r.closed_form).abs() / r.closed_form.abs())
                .map_err(|e| format!("n={n} γ={g} k={k}: {e}"))
        })
        .collect();
    let mut worst = (0.0f64, String::new());
    let mut checks = Vec::new();
    for (e, &(n, g, k)) in errs.iter().zip(&jobs) {
        match e {
            Ok(v) if *v >= worst.0 => worst = (*v, format!("relative error n={n} γ={g} k={k}")),
            Ok(v) if !v.is_finite() => checks.push(Check::le(format!("n={n} γ={g} k={k}"), *v, 1e-6)),
            Ok(_) => {}
            Err(msg) => checks.push(Check::failed("multiplier", msg)),
        }
    }
    checks.push(Check::le(worst.1, worst.0, 1e-6));
    checks
}

fn c2() -> Vec<Check> {
    let mut checks = Vec::new();
    match adapted_profile(3, 0.5, SolveOptions::default()) {
        Ok(p) => {
            let mut dev = 0.0f64;
            for t in linspace(0.01, 20.0, 2000) {
                match p.phi(t) {
                    Ok(v) => dev = dev.max((v[0] - 0.5 / (0.5 * t).cosh().powi(2)).abs()),
                    Err(e) => {
                        checks.push(Check::failed("Φ evaluation", e));
                        break;
                    }
                }
            }
            checks.push(Check::le("max |Φ − sech²(t/2)/2|", dev, 1e-8));
            checks.push(Check::le("|G0 + 1|", (p.g0 + 1.0).abs(), 1e-6));
            checks.push(Check::le("|x² coefficient − 3/4|", (p.f1 - 0.75).abs(), 1e-5));
        }
        Err(e) => checks.push(Check::failed("adapted profile n=3 γ=0.5", e)),
    }
    let mono: Vec<Check> = sweep()
        .par_iter()
        .map(|&(n, g)| match adapted_profile(n, g, SolveOptions::default()) {
            Ok(p) => Check::holds(format!("Φ′ < 0 for n={n} γ={g}"), p.monotone),
            Err(e) => Check::failed(format!("adapted profile n={n} γ={g}"), e),
        })
        .collect();
    checks.extend(mono);
    checks
}

fn model_type_one(n: usize, g: f64) -> Result<crate::compactify::Compactification> {
    build_compactification(CompactKind::TypeI { gamma: g }, &WarpedMetric::hyperbolic(n), SolveOptions::default())
}

fn c3() -> Vec<Check> {
    let grid = linspace(0.5, 20.0, 80);
    sweep()
        .par_iter()
        .flat_map_iter(|&(n, g)| {
            let r = model_type_one(n, g).and_then(|c| weighted_j(&c, &grid));
            match r {
                Ok(j) => {
                    let worst = j.lemma.iter().map(|v| v.abs()).fold(0.0, f64::max);
                    vec![
                        Check::le(format!("max |J| n={n} γ={g}"), worst, 1e-8),
                        Check::le(format!("J cross-formula n={n} γ={g}"), j.max_discrepancy, 1e-7),
                    ]
                }
                Err(e) => vec![Check::failed(format!("weighted J n={n} γ={g}"), e)],
            }
        })
        .collect()
}

fn c4() -> Vec<Check> {
    let grid = linspace(0.5, 15.0, 60);
    sweep()
        .par_iter()
        .map(|&(n, g)| {
            let label = format!("max |L(ρ^(s−n) u)| n={n} γ={g}");
            let r = model_type_one(n, g).and_then(|c| {
                let f0 = c.profile().map_or(1.0, |p| p.f0);
                let u = poisson_density(&c)?;
                // U normalized to its boundary value.
                let scaled = move |t: f64| -> Result<(f64, DD, DD)> {
                    let (v, a, b) = u(t)?;
                    Ok((v / f0, a, b))
                };
                apply_weighted_laplacian_log(&c, LogProfile(scaled), &grid)
            });
            match r {
                Ok(v) => Check::le(label, v.iter().map(|x| x.abs()).fold(0.0, f64::max), 1e-7),
                Err(e) => Check::failed(label, e),
            }
        })
        .collect()
}

fn c5() -> Vec<Check> {
    let grid = linspace(2.0, 20.0, 19);
    let mut jobs: Vec<(usize, f64, bool)> = vec![(3, 0.5, true)];
    jobs.extend(sweep().into_iter().map(|(n, g)| (n, g, false)));
    jobs.par_iter()
        .flat_map_iter(|&(n, g, type_two)| {
            let kind = if type_two {
                CompactKind::TypeII { gamma: g }
            } else {
                CompactKind::TypeI { gamma: g }
            };
            let tag = format!("{} n={n} γ={g}", if type_two { "Type II" } else { "Type I" });
            let r = build_compactification(kind, &WarpedMetric::hyperbolic(n), SolveOptions::default())
                .and_then(|c| mean_curvature_weighted(&c, &grid))
                .and_then(|h| Ok((h, sphere_constants(n, g)?)));
            match r {
                Ok((h, sc)) => {
                    let want = -2.0 * n as f64 * g * sc.q_curv / sc.d_gamma;
                    let mut v = vec![Check::le(format!("H limit {tag}"), (h.limit - want).abs(), 1e-4)];
                    // Below γ = 1/2 the x^{2γ} term dominates the decay.
                    if g >= 0.5 {
                        v.push(Check::le(format!("H rate − (2γ−2) {tag}"), (h.rate - (2.0 * g - 2.0)).abs(), 0.1));
                    }
                    v
                }
                Err(e) => vec![Check::failed(format!("mean curvature {tag}"), e)],
            }
        })
        .collect()
}

fn c6() -> Vec<Check> {
    let mut checks = Vec::new();
    let psi = Bump { amplitude: 0.3, width: 1.0 };
    let pairs: Vec<Check> = [(3usize, 0.5f64), (3, 0.25), (4, 0.75)]
        .par_iter()
        .map(|&(n, g)| {
            let label = format!("|E(ḡ; ψ) − E(ψ^p ḡ; 1)| n={n} γ={g}");
            let r = model_type_one(n, g).and_then(|c| {
                let e1 = energy(&c, |t| {
                    let v = psi.eval(t);
                    [v[0], v[1]]
                }, 10.0)?;
                let e2 = energy(&c.rescaled(psi)?, |_| [1.0, 0.0], 10.0)?;
                Ok((e1.value - e2.value).abs())
            });
            match r {
                Ok(d) => Check::le(label, d, 1e-8),
                Err(e) => Check::failed(label, e),
            }
        })
        .collect();
    checks.extend(pairs);
    let model_pair = (|| -> Result<f64> {
        let a = model_type_one(3, 0.5)?;
        let b = build_compactification(CompactKind::TypeII { gamma: 0.5 }, &WarpedMetric::hyperbolic(3), SolveOptions::default())?;
        let w = conformal_factor(&a, &b, &linspace(0.1, 10.0, 50))?;
        let e1 = energy(&a, |_| [1.0, 0.0], 10.0)?;
        let e2 = energy(&b, |_| [1.0, 0.0], 10.0)?;
        Ok((e1.value - e2.value).abs().max(w.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max)))
    })();
    match model_pair {
        Ok(d) => checks.push(Check::le("Type I / Type II energies and factor at r=10", d, 1e-8)),
        Err(e) => checks.push(Check::failed("model pair", e)),
    }
    match model_type_one(3, 0.5).and_then(|c| energy(&c, |_| [1.0, 0.0], 30.0)) {
        Ok(e) => checks.push(Check::le("|E(r=30) − 2π²| n=3 γ=0.5", (e.value - 2.0 * PI * PI).abs(), 1e-6)),
        Err(e) => checks.push(Check::failed("energy limit", e)),
    }
    checks
}

fn c7() -> Vec<Check> {
    let start = Instant::now();
    let opts = MinimizeOptions {
        kmax: 16,
        restarts: 8,
        ..Default::default()
    };
    let mut checks: Vec<Check> = [3usize, 4]
        .iter()
        .flat_map(|&n| SWEEP_GAMMA.iter().map(move |&g| (n, g)))
        .flat_map(|(n, g)| {
            let tag = format!("n={n} γ={g}");
            let r = (|| -> Result<Vec<Check>> {
                let y = sphere_constants(n, g)?.yamabe;
                let m = minimize_rayleigh(n, g, &opts)?;
                let mut rng = ChaCha8Rng::seed_from_u64(1000 + n as u64);
                let mut lowest = f64::INFINITY;
                for _ in 0..100 {
                    let t = random_admissible_trial(n, 8, &mut rng)?;
                    lowest = lowest.min(rayleigh_quotient(n, g, &t)?);
                }
                Ok(vec![
                    Check::le(format!("|min − Y| {tag}"), (m.min - y).abs(), 1e-6),
                    Check::le(format!("Y − min over 100 random trials {tag}"), y - lowest, 1e-6),
                ])
            })();
            r.unwrap_or_else(|e| vec![Check::failed(format!("Yamabe {tag}"), e)])
        })
        .collect();
    checks.push(Check::le("runtime (s)", start.elapsed().as_secs_f64(), 120.0));
    checks
}

fn c8() -> Vec<Check> {
    let grid = linspace(0.1, 20.0, 200);
    let mut checks = Vec::new();
    for (n, g) in [(3usize, 0.5f64), (4, 0.25)] {
        match theorem_chain_report(n, g, &WarpedMetric::hyperbolic(n), &grid) {
            Ok(r) => {
                let dev = r
                    .eta
                    .iter()
                    .map(|e| (e.area_ratio - 1.0).abs().max((e.ball_ratio - 1.0).abs()))
                    .fold((r.lower_bound - 1.0).abs(), f64::max);
                checks.push(Check::le(format!("max |ratio − 1| n={n} γ={g}"), dev, 1e-8));
                checks.push(Check::holds(format!("chain pass n={n} γ={g}"), r.pass == Some(true)));
            }
            Err(e) => checks.push(Check::failed(format!("chain n={n}"), e)),
        }
    }
    let warps = [
        WarpSpec::Perturbed { epsilon: 0.0, a: 3.0 },
        WarpSpec::Deficit { delta: 0.1 },
        WarpSpec::Deficit { delta: 0.3 },
        WarpSpec::Deficit { delta: 0.6 },
    ];
    for n in [3usize, 4] {
        for w in warps {
            let label = format!("Bishop–Gromov monotone n={n} {w:?}");
            let r = (|| -> Result<Option<bool>> {
                let m = make_warped_metric(n, w)?;
                if curvature_report(&m, &grid)?.ricci_defect > 1e-10 {
                    return Ok(None);
                }
                Ok(Some(theorem_chain_report(n, 0.5, &m, &grid)?.bg_monotone))
            })();
            match r {
                Ok(Some(ok)) => checks.push(Check::holds(label, ok)),
                Ok(None) => checks.push(Check::failed(label, "warp fails the Ric ≥ −n gate")),
                Err(e) => checks.push(Check::failed(label, e)),
            }
        }
    }
    checks
}

fn c9() -> Vec<Check> {
    let grid = linspace(2.0, 20.0, 19);
    sweep()
        .par_iter()
        .flat_map_iter(|&(n, g)| {
            let tag = format!("n={n} γ={g}");
            let r = build_compactification(CompactKind::TypeII { gamma: g }, &WarpedMetric::hyperbolic(n), SolveOptions::default())
                .and_then(|c| boundary_volume(&c, &grid));
            match r {
                Ok(v) => {
                    let s = sphere_volume(n);
                    vec![
                        Check::le(format!("|V limit/|Sⁿ| − 1| {tag}"), (v.limit / s - 1.0).abs(), 1e-6),
                        Check::le(format!("|decay rate − 2γ| {tag}"), (-v.rate - 2.0 * g).abs(), 0.1),
                    ]
                }
                Err(e) => vec![Check::failed(format!("boundary volume {tag}"), e)],
            }
        })
        .collect()
}

fn c10() -> Vec<Check> {
    let grid = linspace(0.1, 20.0, 200);
    let mut checks = Vec::new();
    for n in [2usize, 3, 4, 5] {
        match hemisphere_check(n, &grid) {
            Ok(r) => {
                checks.push(Check::le(format!("max |v/cosh − 1| n={n}"), r.cosh_max_dev, 1e-10));
                checks.push(Check::le(format!("max |R̃ − n(n+1)| n={n}"), r.rtilde_max_dev, 1e-8));
                checks.push(Check::le(format!("max |K − 1| n={n}"), r.sectional_max_dev, 1e-8));
                let nf = n as f64;
                let ya = nf * (nf + 1.0) * (0.5 * sphere_volume(n + 1)).powf(2.0 / (nf + 1.0));
                checks.push(Check::le(format!("Y_a formula n={n}"), (r.ya_hemisphere - ya).abs(), 0.0));
                checks.push(Check::holds(format!("ball ratio nonincreasing n={n}"), r.ball_ratio_monotone));
                checks.push(Check::le(format!("|volume ratio limit − 1| n={n}"), (r.ratio_limit - 1.0).abs(), 1e-8));
            }
            Err(e) => checks.push(Check::failed(format!("hemisphere n={n}"), e)),
        }
    }
    checks.push(Check::le("|Y_a(3) − 43.53118474162123|", (ya_hemisphere(3) - 43.531_184_741_621_23).abs(), 1e-12));
    checks
}

/// Run one criterion by number.
pub fn run_criterion(id: u8) -> CriterionResult {
    let start = Instant::now();
    let checks = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        _ => vec![Check::failed("criterion", format!("unknown id {id}"))],
    };
    let id = id.clamp(1, 10);
    summarize(id, checks, start.elapsed().as_secs_f64())
}

pub fn verify_all() -> VerifyReport {
    let criteria: Vec<CriterionResult> = CRITERIA.iter().map(|(id, _)| run_criterion(*id)).collect();
    let pass = criteria.iter().all(|c| c.pass);
    VerifyReport {
        schema_version: SCHEMA_VERSION,
        criteria,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_picks_binding_check() {
        let r = summarize(
            1,
            vec![Check::le("a", 1e-9, 1e-6), Check::le("b", 5e-7, 1e-6), Check::holds("c", true)],
            0.0,
        );
        assert!(r.pass);
        assert_eq!(r.binding, "b");
        let r = summarize(2, vec![Check::le("a", 1e-9, 1e-6), Check::holds("c", false)], 0.0);
        assert!(!r.pass);
        assert_eq!(r.binding, "c");
        assert!(!summarize(3, vec![], 0.0).pass);
    }

    #[test]
    fn nan_fails() {
        assert!(!Check::le("x", f64::NAN, 1.0).pass);
    }
}
