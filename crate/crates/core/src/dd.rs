//! Double-double arithmetic.
//!
//! Curvature quantities of a compactified metric are `ρ⁻²` times a bracket
//! of O(1) terms that cancel to O(ρ²). In plain `f64` the roundoff in the
//! bracket is amplified by `e^{2t}`, which swamps the result past t ≈ 10.
//! Evaluating the bracket in ~106-bit arithmetic pushes that floor below
//! 1e-15 out to t = 30.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn new(x: f64) -> Self {
        DD { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn sqr(self) -> DD {
        self * self
    }

    #[inline]
    pub fn abs(self) -> DD {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Exact quotient `a / b` of two doubles, rounded to double-double.
    #[inline]
    pub fn ratio(a: f64, b: f64) -> DD {
        DD::new(a) / DD::new(b)
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

impl From<f64> for DD {
    fn from(x: f64) -> Self {
        DD::new(x)
    }
}

impl fmt::Debug for DD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DD({:e} + {:e})", self.hi, self.lo)
    }
}

impl Neg for DD {
    type Output = DD;
    #[inline]
    fn neg(self) -> DD {
        DD {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DD {
    type Output = DD;
    #[inline]
    fn add(self, b: DD) -> DD {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DD { hi, lo }
    }
}

impl Sub for DD {
    type Output = DD;
    #[inline]
    fn sub(self, b: DD) -> DD {
        self + (-b)
    }
}

impl Mul for DD {
    type Output = DD;
    #[inline]
    fn mul(self, b: DD) -> DD {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DD { hi, lo }
    }
}

impl Div for DD {
    type Output = DD;
    #[inline]
    fn div(self, b: DD) -> DD {
        let q1 = self.hi / b.hi;
        let r = self - b * DD::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * DD::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DD { hi, lo } + DD::new(q3)
    }
}

macro_rules! mixed_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for DD {
            type Output = DD;
            #[inline]
            fn $m(self, b: f64) -> DD { $tr::$m(self, DD::new(b)) }
        }
        impl $tr<DD> for f64 {
            type Output = DD;
            #[inline]
            fn $m(self, b: DD) -> DD { $tr::$m(DD::new(self), b) }
        }
    )*};
}
mixed_ops!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_bits_lost_in_f64() {
        let a = DD::new(1.0) + DD::new(1e-20);
        assert_eq!(a.hi, 1.0);
        assert_eq!(a.lo, 1e-20);
        let back = a - DD::ONE;
        assert_eq!(back.to_f64(), 1e-20);
    }

    #[test]
    fn division_is_accurate_to_double_double() {
        let third = DD::ONE / DD::new(3.0);
        let r = third * 3.0 - DD::ONE;
        assert!(r.to_f64().abs() < 1e-31);
        let q = DD::ratio(2.0, 7.0) * 7.0 - 2.0;
        assert!(q.to_f64().abs() < 1e-31);
    }

    #[test]
    fn product_keeps_low_word() {
        let x = 1.0 + f64::EPSILON;
        let p = DD::new(x) * DD::new(x);
        // (1+e)^2 = 1 + 2e + e^2; the e^2 term lives in the low word.
        let rest = p - DD::new(1.0 + 2.0 * f64::EPSILON);
        assert_eq!(rest.to_f64(), f64::EPSILON * f64::EPSILON);
    }
}
