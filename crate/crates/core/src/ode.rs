//! Adaptive Bulirsch–Stoer integration of small first-order systems.
//!
//! Gragg's modified midpoint rule with polynomial extrapolation in `h²`.
//! The local error test is componentwise relative, which makes the accepted
//! step sequence invariant under scaling of the initial data by a power of 2.

use crate::error::{Error, Result};

const STEP_COUNTS: [usize; 8] = [2, 4, 6, 8, 10, 12, 14, 16];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    /// Initial step size; the sign is taken from the integration direction.
    pub h0: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-12,
            h0: 1e-3,
            max_steps: 200_000,
        }
    }
}

fn midpoint<F, const N: usize>(f: &F, t: f64, y: &[f64; N], dy: &[f64; N], h: f64, steps: usize) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let hs = h / steps as f64;
    let mut z0 = *y;
    let mut z1 = [0.0; N];
    for i in 0..N {
        z1[i] = y[i] + hs * dy[i];
    }
    for m in 1..steps {
        let d = f(t + m as f64 * hs, &z1);
        for i in 0..N {
            let z2 = z0[i] + 2.0 * hs * d[i];
            z0[i] = z1[i];
            z1[i] = z2;
        }
    }
    let d = f(t + h, &z1);
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = 0.5 * (z0[i] + z1[i] + hs * d[i]);
    }
    out
}

/// One extrapolated step of size `h`. Returns the new state and the column
/// at which it converged, or `None` if no column met the tolerance.
fn bs_step<F, const N: usize>(f: &F, t: f64, y: &[f64; N], h: f64, rtol: f64) -> Option<([f64; N], usize)>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let dy = f(t, y);
    let ynorm = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut prev: Vec<[f64; N]> = Vec::with_capacity(STEP_COUNTS.len());
    for (k, &nk) in STEP_COUNTS.iter().enumerate() {
        let mut row = Vec::with_capacity(k + 1);
        row.push(midpoint(f, t, y, &dy, h, nk));
        for j in 1..=k {
            let ratio = nk as f64 / STEP_COUNTS[k - j] as f64;
            let fac = 1.0 / (ratio * ratio - 1.0);
            let (a, b) = (row[j - 1], prev[j - 1]);
            let mut next = [0.0; N];
            for i in 0..N {
                next[i] = a[i] + (a[i] - b[i]) * fac;
            }
            row.push(next);
        }
        if k >= 2 {
            let (cur, lower) = (row[k], row[k - 1]);
            let mut err = 0.0f64;
            for i in 0..N {
                let sc = rtol * cur[i].abs().max(y[i].abs()).max(1e-20 * ynorm);
                let e = if sc > 0.0 { (cur[i] - lower[i]).abs() / sc } else { 0.0 };
                err = err.max(e);
            }
            if !err.is_finite() {
                return None;
            }
            if err <= 1.0 {
                return Some((cur, k));
            }
        }
        prev = row;
    }
    None
}

/// Integrator state that can be advanced through a sequence of output points.
pub struct Stepper<F, const N: usize> {
    f: F,
    pub t: f64,
    pub y: [f64; N],
    h: f64,
    opts: OdeOptions,
    steps: usize,
}

impl<F, const N: usize> Stepper<F, N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    pub fn new(f: F, t0: f64, y0: [f64; N], opts: OdeOptions) -> Self {
        Stepper {
            f,
            t: t0,
            y: y0,
            h: opts.h0.abs(),
            opts,
            steps: 0,
        }
    }

    /// Advance to exactly `t_end`, optionally recording every accepted node.
    pub fn advance(&mut self, t_end: f64, mut record: Option<&mut Vec<(f64, [f64; N])>>) -> Result<[f64; N]> {
        let dir = if t_end >= self.t { 1.0 } else { -1.0 };
        let span = (t_end - self.t).abs();
        let tiny = 1e-14 * self.t.abs().max(t_end.abs()).max(1.0);
        while (t_end - self.t) * dir > tiny {
            if self.steps >= self.opts.max_steps {
                return Err(Error::TooManySteps(self.steps));
            }
            let remaining = (t_end - self.t).abs();
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            match bs_step(&self.f, self.t, &self.y, dir * h, self.opts.rtol) {
                Some((ynew, k)) => {
                    self.steps += 1;
                    self.t = if last { t_end } else { self.t + dir * h };
                    self.y = ynew;
                    if let Some(rec) = record.as_deref_mut() {
                        rec.push((self.t, self.y));
                    }
                    // A clipped final step says nothing about the natural size.
                    if !last || k >= 6 {
                        self.h = if k <= 3 {
                            2.0 * h
                        } else if k >= 6 {
                            0.7 * h
                        } else {
                            h
                        };
                    }
                }
                None => {
                    self.h = 0.3 * h;
                    if self.h < 1e-15 * self.t.abs().max(span).max(1.0) {
                        return Err(Error::StepCollapse { t: self.t, h: self.h });
                    }
                }
            }
        }
        self.t = t_end;
        Ok(self.y)
    }
}

/// Integrate from `t0` through each of `outputs` (monotone in the direction
/// of integration) and return the state at every output.
pub fn integrate_to<F, const N: usize>(f: F, t0: f64, y0: [f64; N], outputs: &[f64], opts: OdeOptions) -> Result<Vec<[f64; N]>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut st = Stepper::new(f, t0, y0, opts);
    outputs.iter().map(|&t| st.advance(t, None)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let out = integrate_to(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], &[1.0, 5.0], OdeOptions::default()).unwrap();
        assert!((out[0][0] - 1f64.exp()).abs() < 1e-11 * 1f64.exp());
        assert!((out[1][0] - 5f64.exp()).abs() < 1e-10 * 5f64.exp());
    }

    #[test]
    fn harmonic_oscillator_forward_and_back() {
        let f = |_: f64, y: &[f64; 2]| [y[1], -y[0]];
        let out = integrate_to(f, 0.0, [0.0, 1.0], &[10.0, 0.0], OdeOptions::default()).unwrap();
        assert!((out[0][0] - 10f64.sin()).abs() < 1e-10);
        assert!((out[0][1] - 10f64.cos()).abs() < 1e-10);
        assert!(out[1][0].abs() < 1e-10);
        assert!((out[1][1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn power_of_two_scaling_is_exact() {
        let f = |t: f64, y: &[f64; 2]| [y[1], -y[0] / (1.0 + t)];
        let a = integrate_to(f, 0.0, [1.0, 0.5], &[3.0], OdeOptions::default()).unwrap();
        let b = integrate_to(f, 0.0, [1024.0, 512.0], &[3.0], OdeOptions::default()).unwrap();
        assert_eq!(a[0][0] * 1024.0, b[0][0]);
        assert_eq!(a[0][1] * 1024.0, b[0][1]);
    }

    #[test]
    fn too_many_steps_is_reported() {
        let opts = OdeOptions {
            max_steps: 3,
            ..OdeOptions::default()
        };
        let r = integrate_to(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], &[100.0], opts);
        assert!(matches!(r, Err(Error::TooManySteps(_))));
    }

    #[test]
    fn singular_rhs_collapses() {
        let r = integrate_to(|t: f64, _: &[f64; 1]| [1.0 / (1.0 - t).powi(3)], 0.0, [0.0], &[2.0], OdeOptions::default());
        assert!(r.is_err());
    }
}
