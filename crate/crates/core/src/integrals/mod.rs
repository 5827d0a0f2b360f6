//! Quadrature for the integrals `𝓘_{b,k,nu}(n)` of the exact formula, the
//! Mordell integral `I_{k,nu}(z)` and its principal-part truncation.
//!
//! Two independent schemes are available everywhere: adaptive
//! Gauss–Legendre and tanh-sinh.

mod mordell;
mod quadrature;

pub use mordell::{
    fit_error_constant, grid_points, j_full, j_full_rotated, j_star, j_tail_rotated, mordell_i,
    mordell_i_with, GridPoint, MordellFit, MordellGrid, Route,
};
pub use quadrature::{
    adaptive_quadrature, adaptive_quadrature_with, gauss_legendre_rule, integrate, tanh_sinh,
    GaussRule, QuadOptions, QuadratureResult, Scheme, DEFAULT_EVAL_CAP,
};

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::numerics::{bessel_i, complex_cosh, BesselOrder, Complex, PrecisionContext, Real};

/// Parameters of one `𝓘_{b,k,nu}(n)`. `nu` is normally in `[1, k]`; other
/// representatives are accepted by the integration routines so that the
/// `nu -> nu + k` symmetry can be exercised.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralSpec {
    pub b: Rational,
    pub k: i64,
    pub nu: i64,
    pub n: i64,
}

impl IntegralSpec {
    pub fn new(b: Rational, k: i64, nu: i64, n: i64) -> Result<Self> {
        if k < 1 || n < 1 {
            return Err(Error::Domain(format!("need k, n >= 1, got k={k}, n={n}")));
        }
        if !(1..=k).contains(&nu) {
            return Err(Error::Domain(format!("nu must lie in [1, {k}], got {nu}")));
        }
        if b <= 0 {
            return Err(Error::Domain(format!("b must be positive, got {b}")));
        }
        Ok(Self { b, k, nu, n })
    }
}

/// `(pi/k)(nu - 1/6)`.
pub(crate) fn beta(k: i64, nu: i64, ctx: &PrecisionContext) -> Real {
    let mut b = Float::with_val(ctx.bits(), 6 * nu - 1);
    b *= ctx.pi();
    b /= 6 * k;
    b
}

/// Quantities shared by every `nu` at fixed `(b, k, n)`.
struct Shape {
    /// `(2 pi/k) sqrt(2 b n)`: the Bessel argument is `c sqrt(1 - x^2)`.
    c: Real,
    /// `(pi/k) sqrt(b/3)`.
    alpha: Real,
}

impl Shape {
    fn new(b: &Rational, k: i64, n: i64, ctx: &PrecisionContext) -> Result<Self> {
        if *b <= 0 {
            return Err(Error::Domain(format!("b must be positive, got {b}")));
        }
        if k < 1 || n < 1 {
            return Err(Error::Domain(format!("need k, n >= 1, got k={k}, n={n}")));
        }
        let p = ctx.bits();
        let bf = Float::with_val(p, b);
        let mut c = Float::with_val(p, &bf * (2 * n) as u32).sqrt();
        c *= ctx.pi();
        c *= 2u32;
        c /= k;
        let mut alpha = Float::with_val(p, &bf / 3u32).sqrt();
        alpha *= ctx.pi();
        alpha /= k;
        Ok(Self { c, alpha })
    }

    /// `sqrt(1 - x^2) I_1(c sqrt(1 - x^2))`, an entire function of `x`.
    fn numerator(&self, x: &Real, ctx: &PrecisionContext) -> Real {
        let p = ctx.bits();
        let t = Float::with_val(p, 1u32 - x.clone()) * Float::with_val(p, 1u32 + x.clone());
        if t <= 0 {
            return ctx.zero();
        }
        let s = t.sqrt();
        let arg = Float::with_val(p, &self.c * &s);
        s * bessel_i(BesselOrder::One, &arg, ctx).expect("argument is non-negative")
    }
}

/// `𝓘_{b,k,nu}(n)` by adaptive Gauss–Legendre on the complex integrand.
pub fn script_i(spec: &IntegralSpec, ctx: &PrecisionContext, tol: &Real) -> Result<QuadratureResult> {
    script_i_with(spec, ctx, tol, Scheme::GaussLegendre)
}

/// `𝓘_{b,k,nu}(n) = int_{-1}^{1} sqrt(1-x^2) I_1((2 pi/k) sqrt(2 b n (1-x^2)))
/// / cosh(i beta - alpha x) dx` with the chosen scheme.
pub fn script_i_with(spec: &IntegralSpec, ctx: &PrecisionContext, tol: &Real, scheme: Scheme) -> Result<QuadratureResult> {
    let shape = Shape::new(&spec.b, spec.k, spec.n, ctx)?;
    let beta = beta(spec.k, spec.nu, ctx);
    let f = |x: &Real| {
        let num = shape.numerator(x, ctx);
        let w = Complex::new(-Float::with_val(ctx.bits(), &shape.alpha * x), beta.clone());
        complex_cosh(&w, ctx).recip().scale(&num)
    };
    integrate(scheme, f, &ctx.real(-1), &ctx.real(1), ctx, tol, QuadOptions::default())
}

/// Real values of `𝓘_{b,k,nu}(n)` for several `nu` at once.
#[derive(Clone, Debug)]
pub struct ScriptIBatch {
    pub values: Vec<Real>,
    pub error_estimate: Real,
    pub evaluations: usize,
    pub nodes: usize,
}

const BATCH_START: usize = 32;
const BATCH_MAX: usize = 1024;

/// `𝓘_{b,k,nu}(n)` for `nu = 1..=k`.
pub fn script_i_batch(b: &Rational, k: i64, n: i64, ctx: &PrecisionContext, tol: &Real) -> Result<ScriptIBatch> {
    let nus: Vec<i64> = (1..=k).collect();
    script_i_real(b, k, n, &nus, ctx, tol)
}

/// `𝓘_{b,k,nu}(n)` for each `nu` in `nus`, using that the integral is real.
///
/// Pairing `x` with `-x` cancels the odd imaginary part and leaves
/// `int N(x) cosh(alpha x) cos(beta) / (sinh^2(alpha x) + cos^2(beta)) dx`.
/// The numerator and the hyperbolic functions are shared across `nu`; the
/// Gauss–Legendre order doubles until two orders agree within `tol` for
/// every `nu`.
pub fn script_i_real(b: &Rational, k: i64, n: i64, nus: &[i64], ctx: &PrecisionContext, tol: &Real) -> Result<ScriptIBatch> {
    let shape = Shape::new(b, k, n, ctx)?;
    let p = ctx.bits();
    let trig: Vec<(Real, Real)> = nus
        .iter()
        .map(|&nu| {
            let mut s = beta(k, nu, ctx);
            let mut c = Float::new(p);
            s.sin_cos_mut(&mut c);
            let c2 = Float::with_val(p, c.square_ref());
            (c, c2)
        })
        .collect();
    let mut evaluations = 0;
    let mut prev: Option<Vec<Real>> = None;
    let mut m = BATCH_START;
    loop {
        let rule = gauss_legendre_rule(m, p);
        // Positive nodes with doubled weights.
        let mut a_j = Vec::with_capacity(m / 2);
        let mut s_j = Vec::with_capacity(m / 2);
        for (x, w) in rule.nodes[m / 2..].iter().zip(&rule.weights[m / 2..]) {
            let num = shape.numerator(x, ctx);
            let mut sh = Float::with_val(p, &shape.alpha * x);
            let mut ch = Float::new(p);
            sh.sinh_cosh_mut(&mut ch);
            let mut a = num * ch;
            a *= w;
            a *= 2u32;
            a_j.push(a);
            s_j.push(sh.square());
        }
        evaluations += m / 2;
        let values: Vec<Real> = trig
            .iter()
            .map(|(c, c2)| {
                let mut acc = Float::new(p);
                for (a, s) in a_j.iter().zip(&s_j) {
                    acc += Float::with_val(p, a / Float::with_val(p, s + c2));
                }
                acc * c
            })
            .collect();
        if let Some(prev) = prev {
            let mut worst = ctx.zero();
            for (u, v) in values.iter().zip(&prev) {
                let d = Float::with_val(p, u - v).abs();
                if d > worst {
                    worst = d;
                }
            }
            if worst <= *tol {
                return Ok(ScriptIBatch {
                    values,
                    error_estimate: worst,
                    evaluations,
                    nodes: m,
                });
            }
            if 2 * m > BATCH_MAX {
                return Err(Error::RefinementCap {
                    evaluations,
                    estimate: worst.to_f64(),
                    tol: tol.to_f64(),
                });
            }
        }
        prev = Some(values);
        m *= 2;
    }
}
