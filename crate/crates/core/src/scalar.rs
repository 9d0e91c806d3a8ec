//! Real and complex coefficient scalars.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

/// Field of coefficients for tensors, forms and witness vectors.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + AddAssign
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const IS_COMPLEX: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn modulus(self) -> f64;
    fn conj(self) -> Self;
    fn scale(self, x: f64) -> Self;

    /// `conj(self) / |self|`, with the phase of zero taken as 1.
    fn phase_conj(self) -> Self {
        let r = self.modulus();
        if r == 0.0 {
            Self::one()
        } else {
            self.conj().scale(1.0 / r)
        }
    }

    fn is_finite(self) -> bool;
    fn re(self) -> f64;
    fn im(self) -> f64;
    fn from_parts(re: f64, im: f64) -> Self;
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn conj(self) -> Self {
        self
    }
    fn scale(self, x: f64) -> Self {
        self * x
    }
    fn phase_conj(self) -> Self {
        // sign of zero is +1
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }
}

impl Scalar for Complex64 {
    const IS_COMPLEX: bool = true;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn scale(self, x: f64) -> Self {
        self * x
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
}
