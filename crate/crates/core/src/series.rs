//! Truncated power series `Σ aᵢ tⁱ` about the origin.

/// Coefficients `a₀, a₁, …`; all operations truncate to the shorter length.
#[derive(Debug, Clone, PartialEq)]
pub struct Series(pub Vec<f64>);

impl Series {
    pub fn zeros(len: usize) -> Self {
        Series(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn constant(c: f64, len: usize) -> Self {
        let mut s = Series::zeros(len);
        if len > 0 {
            s.0[0] = c;
        }
        s
    }

    /// `t ↦ t` truncated to `len` terms.
    pub fn identity(len: usize) -> Self {
        let mut s = Series::zeros(len);
        if len > 1 {
            s.0[1] = 1.0;
        }
        s
    }

    pub fn sinh(len: usize) -> Self {
        Series((0..len).map(|i| if i % 2 == 1 { 1.0 / factorial(i) } else { 0.0 }).collect())
    }

    pub fn cosh(len: usize) -> Self {
        Series((0..len).map(|i| if i % 2 == 0 { 1.0 / factorial(i) } else { 0.0 }).collect())
    }

    /// `e^{ct}`.
    pub fn exp_linear(c: f64, len: usize) -> Self {
        Series((0..len).map(|i| c.powi(i as i32) / factorial(i)).collect())
    }

    pub fn from_poly(coeffs: &[f64], len: usize) -> Self {
        let mut s = Series::zeros(len);
        for (i, c) in coeffs.iter().enumerate().take(len) {
            s.0[i] = *c;
        }
        s
    }

    pub fn add(&self, o: &Series) -> Series {
        let len = self.len().min(o.len());
        Series((0..len).map(|i| self.0[i] + o.0[i]).collect())
    }

    pub fn scale(&self, c: f64) -> Series {
        Series(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Series) -> Series {
        let len = self.len().min(o.len());
        Series((0..len).map(|i| (0..=i).map(|j| self.0[j] * o.0[i - j]).sum()).collect())
    }

    /// Quotient by a series with nonzero constant term.
    pub fn div(&self, o: &Series) -> Series {
        let len = self.len().min(o.len());
        assert!(o.0[0] != 0.0, "series division by a series vanishing at 0");
        let mut out = vec![0.0; len];
        for i in 0..len {
            let mut acc = self.0[i];
            for j in 1..=i {
                acc -= o.0[j] * out[i - j];
            }
            out[i] = acc / o.0[0];
        }
        Series(out)
    }

    pub fn derivative(&self) -> Series {
        Series((1..self.len()).map(|i| i as f64 * self.0[i]).collect())
    }

    /// Division by `t`; the constant term must vanish.
    pub fn shift_down(&self) -> Series {
        debug_assert!(self.0.first().is_none_or(|a| *a == 0.0));
        Series(self.0.iter().skip(1).copied().collect())
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, a| acc * t + a)
    }

    /// Value and first two derivatives.
    pub fn eval_jet(&self, t: f64) -> [f64; 3] {
        let mut v = [0.0; 3];
        for a in self.0.iter().rev() {
            v[2] = v[2] * t + 2.0 * v[1];
            v[1] = v[1] * t + v[0];
            v[0] = v[0] * t + a;
        }
        v
    }
}

pub fn factorial(i: usize) -> f64 {
    (1..=i).fold(1.0, |a, k| a * k as f64)
}
