//! Compactifications `ḡ = ρ² g₊` of a warped metric and the weighted
//! curvature quantities of the smooth metric measure space `(ḡ, ρᵐ dV̄)`.
//!
//! Every quantity is reduced to the log-jet of `ρ`: `a = ρ′/ρ` and `ρ″/ρ`,
//! held in double-double so that brackets like `ρ²J` keep their cancellation
//! when multiplied back by `ρ⁻² ~ e^{2t}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dd::DD;
use crate::error::{Error, Result};
use crate::geometry::{WarpJet, WarpSpec, WarpedMetric};
use crate::geometry::linspace;
use crate::quad;
use crate::scattering::{adapted_profile, AdaptedProfile, SolveOptions};
use crate::specfun::{d_gamma, sphere_volume};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompactKind {
    /// `ρ̄ = v^{2/(n−2γ)}` from the adapted solution on the metric itself.
    TypeI { gamma: f64 },
    /// `ρ̃ = Φ(t)^{2/(n−2γ)}` with `Φ` the hyperbolic adapted profile.
    TypeII { gamma: f64 },
    /// `ρ̃ = sech t`, unweighted.
    Hemisphere,
}

/// Radial conformal factor `ψ = 1 + A e^{−(t/σ)²}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub amplitude: f64,
    pub width: f64,
}

impl Bump {
    /// `(ψ, ψ′, ψ″)`.
    pub fn eval(&self, t: f64) -> [f64; 3] {
        let z = t / self.width;
        let e = self.amplitude * (-z * z).exp();
        let s2 = self.width * self.width;
        [1.0 + e, -2.0 * t / s2 * e, (4.0 * t * t / (s2 * s2) - 2.0 / s2) * e]
    }
}

#[derive(Clone)]
pub struct Compactification {
    pub kind: CompactKind,
    pub n: usize,
    pub metric: WarpedMetric,
    /// Weight exponent `m = 1 − 2γ` (0 for the hemisphere).
    pub m: f64,
    profile: Option<Arc<AdaptedProfile>>,
    /// Optional extra factor: `ρ ↦ ρ·ψ^{2/(n−2γ)}`.
    pub rescale: Option<Bump>,
}

/// `ln ρ`, `a = ρ′/ρ` and `ρ″/ρ` at one radius.
#[derive(Debug, Clone, Copy)]
pub struct RhoJet {
    pub ln_rho: f64,
    pub a: DD,
    pub rpp: DD,
}

impl RhoJet {
    /// `(ln ρ)″ = ρ″/ρ − a²`.
    pub fn b(&self) -> DD {
        self.rpp - self.a.sqr()
    }
}

fn gamma_of(kind: CompactKind) -> Option<f64> {
    match kind {
        CompactKind::TypeI { gamma } | CompactKind::TypeII { gamma } => Some(gamma),
        CompactKind::Hemisphere => None,
    }
}

/// Build a compactification of `metric`.
pub fn build_compactification(kind: CompactKind, metric: &WarpedMetric, opts: SolveOptions) -> Result<Compactification> {
    let n = metric.n;
    let profile = match kind {
        CompactKind::TypeI { gamma } => {
            if !metric.is_hyperbolic() {
                return Err(Error::Unsupported("Type I compactification needs the hyperbolic metric".into()));
            }
            Some(Arc::new(adapted_profile(n, gamma, opts)?))
        }
        CompactKind::TypeII { gamma } => {
            if metric.warp == WarpSpec::Flat {
                return Err(Error::Unsupported("Type II compactification needs an asymptotically hyperbolic metric".into()));
            }
            Some(Arc::new(adapted_profile(n, gamma, opts)?))
        }
        CompactKind::Hemisphere => {
            if !metric.is_hyperbolic() {
                return Err(Error::Unsupported("hemisphere compactification needs the hyperbolic metric".into()));
            }
            None
        }
    };
    Ok(Compactification {
        kind,
        n,
        metric: *metric,
        m: gamma_of(kind).map_or(0.0, |g| 1.0 - 2.0 * g),
        profile,
        rescale: None,
    })
}

impl Compactification {
    pub fn gamma(&self) -> Option<f64> {
        gamma_of(self.kind)
    }

    pub fn profile(&self) -> Option<&AdaptedProfile> {
        self.profile.as_deref()
    }

    /// The same compactification multiplied by `ψ^{2/(n−2γ)}`.
    pub fn rescaled(&self, psi: Bump) -> Result<Compactification> {
        if self.gamma().is_none() {
            return Err(Error::Unsupported("rescaling is defined for the weighted compactifications".into()));
        }
        Ok(Compactification {
            rescale: Some(psi),
            ..self.clone()
        })
    }

    /// `p = 2/(n − 2γ)` in double-double.
    fn p(&self) -> DD {
        let g = self.gamma().unwrap_or(0.5);
        DD::new(2.0) / (DD::new(self.n as f64) - DD::new(2.0) * g)
    }

    fn m_dd(&self) -> DD {
        match self.gamma() {
            Some(g) => DD::ONE - DD::new(2.0) * g,
            None => DD::ZERO,
        }
    }

    pub fn rho_jet(&self, t: f64) -> Result<RhoJet> {
        let base = match &self.profile {
            None => {
                // ρ = sech t: a = −tanh t, ρ″/ρ = 1 − 2 sech² t.
                let e = (-2.0 * t).exp();
                let sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
                RhoJet {
                    ln_rho: std::f64::consts::LN_2 - t - e.ln_1p(),
                    a: DD::new(2.0 * e / (1.0 + e)) - DD::ONE,
                    rpp: DD::ONE - DD::new(2.0 * sech2),
                }
            }
            Some(prof) => {
                let sol = &prof.solution;
                let (ln_w, r) = prof.log_state(t)?;
                let p = self.p();
                let n = DD::new(self.n as f64);
                let lam = DD::new(self.n as f64) * 0.5 - DD::new(prof.gamma);
                // Φ satisfies the hyperbolic equation, whatever the metric.
                let hj = sol.metric.jet(t);
                let dh = hj.d1();
                let r = DD::new(r);
                let wpp_w = (DD::new(2.0) * lam - n * dh) * r + n * lam * hj.d1m1;
                let a = p * r - DD::ONE;
                let da = p * (wpp_w - r.sqr());
                RhoJet {
                    ln_rho: std::f64::consts::LN_2 - t + p.to_f64() * ln_w,
                    a,
                    rpp: da + a.sqr(),
                }
            }
        };
        Ok(match self.rescale {
            None => base,
            Some(psi) => {
                let [s, ds, dds] = psi.eval(t);
                let p = self.p();
                let q = DD::ratio(ds, s);
                let a = base.a + p * q;
                let da = base.b() + p * (DD::ratio(dds, s) - q.sqr());
                RhoJet {
                    ln_rho: base.ln_rho + p.to_f64() * s.ln(),
                    a,
                    rpp: da + a.sqr(),
                }
            }
        })
    }

    /// `ρ²J` by the conformal-change formula for `t̃ = −ln(ρ/2)`.
    fn bracket_lemma(&self, rj: &RhoJet, wj: &WarpJet) -> DD {
        let n = DD::new(self.n as f64);
        let m = self.m_dd();
        let a = rj.a;
        -rj.b() - n * wj.d1() * a - (n + m - 1.0) * 0.5 * a.sqr() - (n + 1.0 - m) * 0.5
    }

    /// `ρ²J` from the scalar curvature of `ḡ` and the weight.
    fn bracket_direct(&self, rj: &RhoJet, wj: &WarpJet) -> DD {
        let n = DD::new(self.n as f64);
        let m = self.m_dd();
        let a = rj.a;
        let d1 = wj.d1();
        let r_plus = DD::new(-2.0) * n * wj.d2() + n * (n - 1.0) * wj.ktan();
        let lap_log = rj.b() + n * d1 * a;
        let num = r_plus - DD::new(2.0) * n * lap_log - n * (n - 1.0) * a.sqr()
            - DD::new(2.0) * m * (rj.rpp + n * d1 * a + (n - 1.0) * a.sqr())
            + m * (m - 1.0) * (DD::ONE - a.sqr());
        num / (DD::new(2.0) * (m + n))
    }

    /// `ρ⁻²·ρ²J`, both routes.
    pub fn j_pair(&self, t: f64) -> Result<(f64, f64)> {
        let rj = self.rho_jet(t)?;
        let wj = self.metric.jet(t);
        let inv = (-2.0 * rj.ln_rho).exp();
        Ok((
            self.bracket_lemma(&rj, &wj).to_f64() * inv,
            self.bracket_direct(&rj, &wj).to_f64() * inv,
        ))
    }

    /// `t̃ = −ln(ρ/2)`.
    pub fn t_tilde(&self, t: f64) -> Result<f64> {
        Ok(std::f64::consts::LN_2 - self.rho_jet(t)?.ln_rho)
    }

    /// `H̄ρᵐ` on the level set `Σ_t`; for the hemisphere, `H̃`.
    pub fn h_weighted(&self, t: f64) -> Result<f64> {
        let rj = self.rho_jet(t)?;
        let wj = self.metric.jet(t);
        let s = (wj.d1() + rj.a).to_f64();
        Ok(self.n as f64 * s * ((self.m - 1.0) * rj.ln_rho).exp())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedJ {
    pub grid: Vec<f64>,
    pub lemma: Vec<f64>,
    pub direct: Vec<f64>,
    pub max_discrepancy: f64,
    /// True when the metric is Einstein on the grid, where both routes must
    /// agree and a mismatch is an error.
    pub cross_checked: bool,
}

pub const J_CROSS_TOL: f64 = 1e-7;

/// Weighted scalar curvature on `grid` by two formulas.
pub fn weighted_j(c: &Compactification, grid: &[f64]) -> Result<WeightedJ> {
    let mut lemma = Vec::with_capacity(grid.len());
    let mut direct = Vec::with_capacity(grid.len());
    let mut worst = 0.0f64;
    let mut einstein = true;
    for &t in grid {
        check_t(t)?;
        let (l, d) = c.j_pair(t)?;
        let wj = c.metric.jet(t);
        einstein &= wj.d2m1.abs() <= 1e-13 && wj.ktan_p1.abs() <= 1e-13;
        worst = worst.max((l - d).abs() / l.abs().max(1.0));
        lemma.push(l);
        direct.push(d);
    }
    if einstein && worst > J_CROSS_TOL {
        return Err(Error::CrossCheck {
            max_discrepancy: worst,
            tolerance: J_CROSS_TOL,
            lemma,
            direct,
        });
    }
    Ok(WeightedJ {
        grid: grid.to_vec(),
        lemma,
        direct,
        max_discrepancy: worst,
        cross_checked: einstein,
    })
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "compactification grid",
            value: t,
            range: "t > 0",
        })
    }
}

/// Radial test function with `U′/U` and `U″/U` given in double-double.
pub struct LogProfile<F: Fn(f64) -> Result<(f64, DD, DD)>>(pub F);

/// `L̄U = −Δ̄_ψU + ((m+n−1)/2) J̄ U` on `grid`, for `U` given as
/// `t ↦ (U, U′/U, U″/U)`.
pub fn apply_weighted_laplacian_log<F>(c: &Compactification, u: LogProfile<F>, grid: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<(f64, DD, DD)>,
{
    let n = DD::new(c.n as f64);
    let m = c.m_dd();
    grid.iter()
        .map(|&t| {
            check_t(t)?;
            let rj = c.rho_jet(t)?;
            let wj = c.metric.jet(t);
            let (uu, l1, l2) = (u.0)(t)?;
            let bracket = c.bracket_lemma(&rj, &wj);
            let inner = -l2 - (n * wj.d1() + (n - 1.0 + m) * rj.a) * l1 + (m + n - 1.0) * 0.5 * bracket;
            Ok(inner.to_f64() * uu * (-2.0 * rj.ln_rho).exp())
        })
        .collect()
}

/// [`apply_weighted_laplacian_log`] for a plain `(U, U′, U″)` evaluator.
pub fn apply_weighted_laplacian<F>(c: &Compactification, u: F, grid: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64) -> [f64; 3],
{
    let n = DD::new(c.n as f64);
    let m = c.m_dd();
    grid.iter()
        .map(|&t| {
            check_t(t)?;
            let rj = c.rho_jet(t)?;
            let wj = c.metric.jet(t);
            let [uu, du, ddu] = u(t);
            let bracket = c.bracket_lemma(&rj, &wj);
            let inner = -DD::new(ddu) - (n * wj.d1() + (n - 1.0 + m) * rj.a) * du + (m + n - 1.0) * 0.5 * bracket * uu;
            Ok(inner.to_f64() * (-2.0 * rj.ln_rho).exp())
        })
        .collect()
}

/// `U = ρ̄^{s−n}u` for the adapted solution, as `(U, U′/U, U″/U)`.
pub fn poisson_density(c: &Compactification) -> Result<impl Fn(f64) -> Result<(f64, DD, DD)> + '_> {
    let prof = c
        .profile()
        .ok_or_else(|| Error::Unsupported("poisson density needs an adapted compactification".into()))?;
    if c.rescale.is_some() {
        return Err(Error::Unsupported("poisson density of a rescaled compactification".into()));
    }
    let sol = &prof.solution;
    let n = DD::new(c.n as f64);
    let lam = n * 0.5 - DD::new(prof.gamma);
    Ok(move |t: f64| {
        let rj = c.rho_jet(t)?;
        let [w, dw] = sol.state(t)?;
        let r = DD::new(dw / w);
        // ln U = −λ ln ρ + ln u, with u′/u = r − λ.
        let l1 = -lam * rj.a + r - lam;
        let hj = sol.metric.jet(t);
        let wpp_w = (DD::new(2.0) * lam - n * hj.d1()) * r + n * lam * hj.d1m1;
        let dl1 = -lam * (rj.rpp - rj.a.sqr()) + wpp_w - r.sqr();
        let ln_u = (sol.lambda) * (std::f64::consts::LN_2 - t) + w.ln();
        let uu = (-lam.to_f64() * rj.ln_rho + ln_u).exp();
        Ok((uu, l1, dl1 + l1.sqr()))
    })
}

/// Three-point Aitken extrapolation for `v ≈ L + C e^{κt}` at equally spaced
/// radii. Returns `(L, κ)`.
pub fn aitken(v: [f64; 3], h: f64) -> Result<(f64, f64)> {
    let d1 = v[1] - v[0];
    let d2 = v[2] - v[1];
    let den = d2 - d1;
    if d1 == 0.0 && d2 == 0.0 {
        return Ok((v[2], f64::NEG_INFINITY));
    }
    if !(d2 / d1 > 0.0) || den == 0.0 || !(d2 / d1 < 1.0) {
        return Err(Error::Extrapolation(format!(
            "differences {d1:e}, {d2:e} are not geometrically decaying"
        )));
    }
    Ok((v[2] - d2 * d2 / den, (d2 / d1).ln() / h))
}

fn last_three(grid: &[f64], values: &[f64]) -> Result<([f64; 3], f64)> {
    let k = grid.len();
    if k < 3 {
        return Err(Error::Extrapolation("need at least three radii".into()));
    }
    let h1 = grid[k - 2] - grid[k - 3];
    let h2 = grid[k - 1] - grid[k - 2];
    if (h1 - h2).abs() > 1e-9 * h1.abs() {
        return Err(Error::Extrapolation("last three radii are not equally spaced".into()));
    }
    Ok(([values[k - 3], values[k - 2], values[k - 1]], h2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extrapolated {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub limit: f64,
    /// Exponent `κ` in `values − limit ≈ C e^{κt}`.
    pub rate: f64,
}

/// `H̄ρᵐ` on the level sets, with its extrapolated limit.
pub fn mean_curvature_weighted(c: &Compactification, grid: &[f64]) -> Result<Extrapolated> {
    let values = grid
        .iter()
        .map(|&t| {
            check_t(t)?;
            c.h_weighted(t)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (v, h) = last_three(grid, &values)?;
    let (limit, rate) = aitken(v, h)?;
    Ok(Extrapolated {
        grid: grid.to_vec(),
        values,
        limit,
        rate,
    })
}

/// `V(Γ_t, g̃_t) = (ρφ)ⁿ|Sⁿ|` with its extrapolated limit.
pub fn boundary_volume(c: &Compactification, grid: &[f64]) -> Result<Extrapolated> {
    let n = c.n as f64;
    let vol = sphere_volume(c.n);
    let values = grid
        .iter()
        .map(|&t| {
            check_t(t)?;
            let rj = c.rho_jet(t)?;
            Ok(vol * (n * (rj.ln_rho + c.metric.phi(t)[0].ln())).exp())
        })
        .collect::<Result<Vec<f64>>>()?;
    let (v, h) = last_three(grid, &values)?;
    let (limit, rate) = aitken(v, h)?;
    Ok(Extrapolated {
        grid: grid.to_vec(),
        values,
        limit,
        rate,
    })
}

/// `e^{(n−2γ)(r̄ − t̃)/2}` between two compactifications, `r̄ = −ln(ρ₁/2)`,
/// `t̃ = −ln(ρ₂/2)`.
pub fn conformal_factor(c1: &Compactification, c2: &Compactification, grid: &[f64]) -> Result<Vec<f64>> {
    let g = c1.gamma().unwrap_or(0.5);
    grid.iter()
        .map(|&t| {
            let w = c1.t_tilde(t)? - c2.t_tilde(t)?;
            Ok((0.5 * (c1.n as f64 - 2.0 * g) * w).exp())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    pub value: f64,
    pub bulk: f64,
    pub boundary: f64,
    /// Estimated contribution of the bulk integral beyond `r_max`.
    pub tail: f64,
}

/// `E(X̄_r, ḡ; ψ)` for radial `ψ` given as `t ↦ (ψ, ψ′)`.
pub fn energy<F>(c: &Compactification, psi: F, r_max: f64) -> Result<EnergyResult>
where
    F: Fn(f64) -> [f64; 2],
{
    let gamma = c
        .gamma()
        .ok_or_else(|| Error::Unsupported("the energy functional needs a weighted compactification".into()))?;
    if !(r_max > 0.0) {
        return Err(Error::Domain {
            what: "energy r_max",
            value: r_max,
            range: "r_max > 0",
        });
    }
    let n = c.n as f64;
    let m = c.m;
    let cj = 0.5 * (m + n - 1.0);
    // (integrand, magnitude of its terms)
    let terms = |t: f64| -> (f64, f64) {
        let (rj, wj) = match c.rho_jet(t) {
            Ok(rj) => (rj, c.metric.jet(t)),
            Err(_) => return (f64::NAN, f64::NAN),
        };
        let [v, dv] = psi(t);
        let b = c.bracket_lemma(&rj, &wj).to_f64();
        let weight = ((m - 1.0 + n) * rj.ln_rho + n * wj.phi.ln()).exp();
        ((dv * dv + cj * b * v * v) * weight, (dv * dv + v * v) * weight)
    };
    let integrand = |t: f64| terms(t).0;
    let scale = linspace(0.05 * r_max, r_max, 8)
        .into_iter()
        .map(|t| terms(t).1)
        .fold(f64::MIN_POSITIVE, f64::max);
    let bulk = quad::integrate(integrand, 0.0, r_max, 1e-13 * scale * r_max.max(1.0))?.value;
    let rj = c.rho_jet(r_max)?;
    let [v, _] = psi(r_max);
    let surface = ((m + n) * rj.ln_rho + n * c.metric.phi(r_max)[0].ln()).exp();
    let h = c.h_weighted(r_max)? * (-m * rj.ln_rho).exp();
    let boundary = (n - 2.0 * gamma) / (2.0 * n) * h * v * v * surface;
    let pref = -d_gamma(gamma)? / (2.0 * gamma) * sphere_volume(c.n);
    let tail = integrand(r_max).abs() / (2.0 - 2.0 * gamma);
    Ok(EnergyResult {
        value: pref * (bulk + boundary),
        bulk: pref * bulk,
        boundary: pref * boundary,
        tail: pref.abs() * tail,
    })
}

/// CSV `t,rho,J_weighted,H_weighted`.
pub fn profile_csv(c: &Compactification, grid: &[f64]) -> Result<String> {
    let mut s = String::from("t,rho,J_weighted,H_weighted\n");
    for &t in grid {
        check_t(t)?;
        let rj = c.rho_jet(t)?;
        let (j, _) = c.j_pair(t)?;
        s.push_str(&format!("{t:.16e},{:.16e},{j:.16e},{:.16e}\n", rj.ln_rho.exp(), c.h_weighted(t)?));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_warped_metric;

    fn model(n: usize, kind: CompactKind) -> Compactification {
        build_compactification(kind, &WarpedMetric::hyperbolic(n), SolveOptions::default()).unwrap()
    }

    #[test]
    fn type_two_closed_form() {
        let c = model(3, CompactKind::TypeII { gamma: 0.5 });
        assert!((c.t_tilde(1e-6).unwrap() - 4f64.ln()).abs() < 1e-9);
        for t in [0.3f64, 2.0, 9.0] {
            let want = t + 2.0 * (-t).exp().ln_1p();
            assert!((c.t_tilde(t).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn hemisphere_closed_form() {
        let c = model(3, CompactKind::Hemisphere);
        for t in [0.0001f64, 0.5, 4.0, 25.0] {
            let rj = c.rho_jet(t).unwrap();
            assert!((rj.ln_rho.exp() * t.cosh() - 1.0).abs() < 1e-14);
            assert!(((c.t_tilde(t).unwrap()).exp() / 2.0 / t.cosh() - 1.0).abs() < 1e-14);
        }
        assert!(c.rho_jet(1e-12).unwrap().ln_rho.abs() < 1e-15);
    }

    #[test]
    fn types_coincide_on_model() {
        let a = model(3, CompactKind::TypeI { gamma: 0.5 });
        let b = model(3, CompactKind::TypeII { gamma: 0.5 });
        for t in linspace(0.1, 20.0, 60) {
            let ra = a.rho_jet(t).unwrap().ln_rho.exp();
            let rb = b.rho_jet(t).unwrap().ln_rho.exp();
            assert!((ra - rb).abs() <= 1e-9);
        }
        let phi = conformal_factor(&a, &b, &linspace(0.1, 20.0, 30)).unwrap();
        assert!(phi.iter().all(|f| (f - 1.0).abs() < 1e-9));
    }

    #[test]
    fn adapted_j_vanishes() {
        for (n, g) in [(3, 0.25), (3, 0.5), (5, 0.75)] {
            let c = model(n, CompactKind::TypeI { gamma: g });
            let j = weighted_j(&c, &linspace(0.5, 20.0, 40)).unwrap();
            assert!(j.cross_checked);
            let worst = j.lemma.iter().map(|v| v.abs()).fold(0.0, f64::max);
            assert!(worst <= 1e-8, "n={n} γ={g}: {worst:e}");
            assert!(j.max_discrepancy <= 1e-7);
        }
    }

    #[test]
    fn hemisphere_j_is_constant() {
        let c = model(3, CompactKind::Hemisphere);
        let j = weighted_j(&c, &linspace(0.5, 25.0, 30)).unwrap();
        assert!(j.lemma.iter().chain(&j.direct).all(|v| (v - 2.0).abs() < 1e-8));
    }

    #[test]
    fn type_two_on_deficit_has_nonpositive_j() {
        let m = make_warped_metric(3, WarpSpec::Deficit { delta: 0.1 }).unwrap();
        let c = build_compactification(CompactKind::TypeII { gamma: 0.5 }, &m, SolveOptions::default()).unwrap();
        let j = weighted_j(&c, &linspace(0.5, 20.0, 40)).unwrap();
        assert!(!j.cross_checked);
        assert!(j.lemma.iter().all(|v| *v <= 1e-8));
        assert!(j.lemma.iter().any(|v| *v < -1e-3));
    }

    #[test]
    fn type_one_rejects_non_model() {
        let m = make_warped_metric(3, WarpSpec::Deficit { delta: 0.1 }).unwrap();
        assert!(build_compactification(CompactKind::TypeI { gamma: 0.5 }, &m, SolveOptions::default()).is_err());
        assert!(build_compactification(CompactKind::Hemisphere, &m, SolveOptions::default()).is_err());
    }

    #[test]
    fn laplacian_of_constant_and_density() {
        let c = model(3, CompactKind::TypeI { gamma: 0.25 });
        let grid = linspace(0.5, 15.0, 30);
        let one = apply_weighted_laplacian(&c, |_| [1.0, 0.0, 0.0], &grid).unwrap();
        assert!(one.iter().all(|v| v.abs() < 1e-8));
        let u = poisson_density(&c).unwrap();
        let lu = apply_weighted_laplacian_log(&c, LogProfile(u), &grid).unwrap();
        assert!(lu.iter().all(|v| v.abs() < 1e-7), "{lu:?}");
    }

    #[test]
    fn mean_curvature_limit_gamma_half() {
        let c = model(3, CompactKind::TypeI { gamma: 0.5 });
        let h = mean_curvature_weighted(&c, &linspace(2.0, 20.0, 19)).unwrap();
        assert!((h.limit - 3.0).abs() < 1e-4, "{}", h.limit);
        assert!((h.rate + 1.0).abs() < 0.1, "{}", h.rate);
    }

    #[test]
    fn hemisphere_equator_is_minimal() {
        let c = model(3, CompactKind::Hemisphere);
        for t in [1.0f64, 5.0, 20.0] {
            assert!((c.h_weighted(t).unwrap() - 3.0 / t.sinh()).abs() < 1e-12 * (3.0 / t.sinh()).max(1e-300) + 1e-15);
        }
        let h = mean_curvature_weighted(&c, &linspace(10.0, 20.0, 11)).unwrap();
        assert!(h.limit.abs() < 1e-8);
    }

    #[test]
    fn energy_limit_and_zero() {
        let c = model(3, CompactKind::TypeI { gamma: 0.5 });
        let e = energy(&c, |_| [1.0, 0.0], 30.0).unwrap();
        let want = 2.0 * std::f64::consts::PI.powi(2);
        assert!((e.value - want).abs() < 1e-6, "{e:?}");
        let z = energy(&c, |_| [0.0, 0.0], 10.0).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn energy_is_conformally_invariant() {
        for (n, g) in [(3, 0.5), (4, 0.25)] {
            let c = model(n, CompactKind::TypeI { gamma: g });
            let psi = Bump { amplitude: 0.3, width: 1.0 };
            let e1 = energy(&c, |t| { let v = psi.eval(t); [v[0], v[1]] }, 10.0).unwrap();
            let e2 = energy(&c.rescaled(psi).unwrap(), |_| [1.0, 0.0], 10.0).unwrap();
            assert!((e1.value - e2.value).abs() < 1e-8, "{e1:?} {e2:?}");
        }
    }

    #[test]
    fn boundary_volume_limit() {
        let c = model(3, CompactKind::TypeI { gamma: 0.5 });
        let v = boundary_volume(&c, &linspace(10.0, 20.0, 11)).unwrap();
        assert!((v.limit - sphere_volume(3)).abs() < 1e-8);
        assert!((v.rate + 1.0).abs() < 0.1);
    }

    #[test]
    fn aitken_recovers_exponential() {
        let f = |t: f64| 2.0 + 3.0 * (-0.7 * t).exp();
        let (l, r) = aitken([f(5.0), f(6.0), f(7.0)], 1.0).unwrap();
        assert!((l - 2.0).abs() < 1e-12 && (r + 0.7).abs() < 1e-12);
        assert!(aitken([1.0, 2.0, 4.0], 1.0).is_err());
    }

    #[test]
    fn csv_layout() {
        let c = model(3, CompactKind::TypeI { gamma: 0.5 });
        let s = profile_csv(&c, &[1.0, 2.0]).unwrap();
        assert!(s.starts_with("t,rho,J_weighted,H_weighted\n"));
        assert_eq!(s.lines().count(), 3);
    }
}
