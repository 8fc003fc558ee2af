use num_complex::Complex64;
use num_traits::NumAssign;
use std::fmt::Debug;
use std::ops::Neg;

/// Field scalar shared by the real (diffusion) and complex (Schrödinger-type) paths.
pub trait Scalar:
    NumAssign + Neg<Output = Self> + Copy + Debug + PartialEq + Send + Sync + 'static
{
    const IS_COMPLEX: bool;

    fn from_re(x: f64) -> Self;
    /// The imaginary unit, if the field has one.
    fn imaginary_unit() -> Option<Self>;
    fn re(self) -> f64;
    fn im(self) -> f64;
    fn conj(self) -> Self;
    fn modulus(self) -> f64;
    fn modulus_sqr(self) -> f64;
    fn to_complex(self) -> Complex64;
    /// Converts back from a complex number, dropping the imaginary part for real fields.
    fn from_complex(z: Complex64) -> Self;

    fn scale(self, k: f64) -> Self {
        self * Self::from_re(k)
    }

    fn is_finite(self) -> bool {
        self.re().is_finite() && self.im().is_finite()
    }
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;

    fn from_re(x: f64) -> Self {
        x
    }
    fn imaginary_unit() -> Option<Self> {
        None
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn conj(self) -> Self {
        self
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn modulus_sqr(self) -> f64 {
        self * self
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn from_complex(z: Complex64) -> Self {
        z.re
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
}

impl Scalar for Complex64 {
    const IS_COMPLEX: bool = true;

    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn imaginary_unit() -> Option<Self> {
        Some(Complex64::i())
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn modulus_sqr(self) -> f64 {
        self.norm_sqr()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
    fn from_complex(z: Complex64) -> Self {
        z
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
}
