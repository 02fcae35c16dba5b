//! Scalar abstraction for the numeric core.
//!
//! Every law and sampler is generic over [`Real`], so the same code runs in
//! f32 and f64. Special functions and primitive random draws route through
//! the trait: no generic implementation matches libm-quality accuracy, and
//! hanging the draws off the scalar keeps all generic signatures free of
//! distribution trait bounds. f32 delegates special functions to f64.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Open01, StandardNormal};

/// Floating-point scalar usable throughout the crate: an IEEE float with
/// log-gamma and digamma, plus the primitive random draws the samplers need.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    /// Natural log of the gamma function, accurate to ~1e-13 on (0, 200).
    fn ln_gamma(self) -> Self;
    /// Logarithmic derivative of the gamma function.
    fn digamma(self) -> Self;
    /// Lower regularized incomplete gamma P(a, x).
    fn gamma_lower_reg(a: Self, x: Self) -> Self;
    /// Uniform draw on the open interval (0, 1).
    fn open01<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// Standard normal draw.
    fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// Unit-rate exponential draw.
    fn exp1<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// Gamma(shape, 1) draw; shape must be positive.
    fn gamma<R: Rng + ?Sized>(rng: &mut R, shape: Self) -> Self;
}

impl Real for f64 {
    fn ln_gamma(self) -> f64 {
        statrs::function::gamma::ln_gamma(self)
    }
    fn digamma(self) -> f64 {
        statrs::function::gamma::digamma(self)
    }
    fn gamma_lower_reg(a: f64, x: f64) -> f64 {
        statrs::function::gamma::gamma_lr(a, x)
    }
    fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
        Open01.sample(rng)
    }
    fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
        StandardNormal.sample(rng)
    }
    fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
        Exp1.sample(rng)
    }
    fn gamma<R: Rng + ?Sized>(rng: &mut R, shape: f64) -> f64 {
        Gamma::new(shape, 1.0)
            .expect("positive gamma shape")
            .sample(rng)
    }
}

impl Real for f32 {
    fn ln_gamma(self) -> f32 {
        statrs::function::gamma::ln_gamma(self as f64) as f32
    }
    fn digamma(self) -> f32 {
        statrs::function::gamma::digamma(self as f64) as f32
    }
    fn gamma_lower_reg(a: f32, x: f32) -> f32 {
        statrs::function::gamma::gamma_lr(a as f64, x as f64) as f32
    }
    fn open01<R: Rng + ?Sized>(rng: &mut R) -> f32 {
        Open01.sample(rng)
    }
    fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> f32 {
        StandardNormal.sample(rng)
    }
    fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f32 {
        Exp1.sample(rng)
    }
    fn gamma<R: Rng + ?Sized>(rng: &mut R, shape: f32) -> f32 {
        Gamma::new(shape, 1.0f32)
            .expect("positive gamma shape")
            .sample(rng)
    }
}

/// Converts an f64 constant into the working scalar.
pub(crate) fn c<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("f64 constant representable")
}
