use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{Complex, PrecisionContext, Real};

/// Default ceiling on integrand evaluations for one integral.
pub const DEFAULT_EVAL_CAP: usize = 1 << 20;

#[derive(Clone, Debug)]
pub struct QuadratureResult {
    pub value: Complex,
    /// Absolute difference between the last two refinement levels, summed
    /// over panels.
    pub error_estimate: Real,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    GaussLegendre,
    TanhSinh,
}

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub eval_cap: usize,
    /// Equal-width panels the interval is cut into before refinement.
    pub initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            eval_cap: DEFAULT_EVAL_CAP,
            initial_panels: 1,
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
#[derive(Debug)]
pub struct GaussRule {
    pub nodes: Vec<Real>,
    pub weights: Vec<Real>,
}

type RuleCache = Mutex<HashMap<(usize, u32), Arc<GaussRule>>>;

fn rule_cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `m`-point rule at `bits` precision, computed once per process.
pub fn gauss_legendre_rule(m: usize, bits: u32) -> Arc<GaussRule> {
    assert!(m >= 1);
    if let Some(r) = rule_cache().lock().unwrap().get(&(m, bits)) {
        return r.clone();
    }
    let rule = Arc::new(compute_rule(m, bits));
    rule_cache().lock().unwrap().insert((m, bits), rule.clone());
    rule
}

fn compute_rule(m: usize, bits: u32) -> GaussRule {
    let p = bits + 32;
    let mut tol = Float::with_val(p, 1);
    tol >>= bits + 16;
    let half = m.div_ceil(2);
    let mut pos_nodes = Vec::with_capacity(half);
    let mut pos_weights = Vec::with_capacity(half);
    for i in 0..half {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut x = Float::with_val(p, guess);
        let mut deriv = Float::new(p);
        for _ in 0..100 {
            let (pm, pm1) = legendre_pair(m, &x, p);
            // P'_m = m (x P_m - P_{m-1}) / (x^2 - 1)
            let mut d = Float::with_val(p, &x * &pm);
            d -= &pm1;
            d *= m as u32;
            d /= Float::with_val(p, x.square_ref()) - 1u32;
            let step = Float::with_val(p, &pm / &d);
            x -= &step;
            deriv = d;
            if step.abs() < tol {
                break;
            }
        }
        let (pm, pm1) = legendre_pair(m, &x, p);
        let mut d = Float::with_val(p, &x * &pm);
        d -= &pm1;
        d *= m as u32;
        d /= Float::with_val(p, x.square_ref()) - 1u32;
        if d.is_finite() {
            deriv = d;
        }
        let one_minus = Float::with_val(p, 1u32 - Float::with_val(p, x.square_ref()));
        let w = Float::with_val(p, 2u32 / (one_minus * Float::with_val(p, deriv.square_ref())));
        if m % 2 == 1 && i == half - 1 {
            x = Float::new(p);
        }
        pos_nodes.push(Float::with_val(bits, &x));
        pos_weights.push(Float::with_val(bits, &w));
    }
    // Guesses run from the largest root down; mirror into ascending order.
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for i in 0..m / 2 {
        nodes.push(Float::with_val(bits, -&pos_nodes[i]));
        weights.push(pos_weights[i].clone());
    }
    for i in (0..half).rev() {
        nodes.push(pos_nodes[i].clone());
        weights.push(pos_weights[i].clone());
    }
    GaussRule { nodes, weights }
}

/// `(P_m(x), P_{m-1}(x))` by the three-term recurrence.
fn legendre_pair(m: usize, x: &Float, p: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(p, 1);
    let mut p1 = x.clone();
    if m == 0 {
        return (p0, Float::new(p));
    }
    for j in 1..m {
        let mut next = Float::with_val(p, x * &p1);
        next *= (2 * j + 1) as u32;
        next -= Float::with_val(p, &p0 * j as u32);
        next /= (j + 1) as u32;
        p0 = std::mem::replace(&mut p1, next);
    }
    (p1, p0)
}

fn gl_panel<F: Fn(&Real) -> Complex>(f: &F, lo: &Real, hi: &Real, m: usize, ctx: &PrecisionContext) -> Complex {
    let rule = gauss_legendre_rule(m, ctx.bits());
    let p = ctx.bits();
    let half = Float::with_val(p, hi - lo) / 2u32;
    let mid = Float::with_val(p, hi + lo) / 2u32;
    let mut acc = Complex::zero(ctx);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let t = Float::with_val(p, &half * x) + &mid;
        acc += &f(&t).scale(w);
    }
    acc.scale(&half)
}

const GL_START: usize = 16;
const GL_MAX: usize = 64;

/// Adaptive Gauss–Legendre: each panel doubles its node count from 16 up
/// to 64 until two successive levels agree within the panel's share of
/// `tol`, and is bisected otherwise.
pub fn adaptive_quadrature<F>(f: F, a: &Real, b: &Real, ctx: &PrecisionContext, tol: &Real) -> Result<QuadratureResult>
where
    F: Fn(&Real) -> Complex,
{
    adaptive_quadrature_with(f, a, b, ctx, tol, QuadOptions::default())
}

pub fn adaptive_quadrature_with<F>(
    f: F,
    a: &Real,
    b: &Real,
    ctx: &PrecisionContext,
    tol: &Real,
    opts: QuadOptions,
) -> Result<QuadratureResult>
where
    F: Fn(&Real) -> Complex,
{
    let p = ctx.bits();
    let width = Float::with_val(p, b - a);
    let mut total = Complex::zero(ctx);
    let mut estimate = ctx.zero();
    let mut evaluations = 0usize;
    // Depth-first over panels, left to right, for a fixed summation order.
    let mut stack = initial_panels(a, b, opts.initial_panels.max(1), ctx);
    stack.reverse();
    while let Some((lo, hi)) = stack.pop() {
        let share = Float::with_val(p, tol * Float::with_val(p, &hi - &lo)) / &width;
        let mut m = GL_START;
        let mut prev = gl_panel(&f, &lo, &hi, m, ctx);
        evaluations += m;
        loop {
            let cur = gl_panel(&f, &lo, &hi, 2 * m, ctx);
            evaluations += 2 * m;
            let diff = (&cur - &prev).abs();
            if diff <= share {
                total += &cur;
                estimate += &diff;
                break;
            }
            if evaluations > opts.eval_cap {
                return Err(Error::RefinementCap {
                    evaluations,
                    estimate: diff.to_f64(),
                    tol: tol.to_f64(),
                });
            }
            m *= 2;
            if m >= GL_MAX {
                let mid = Float::with_val(p, &lo + &hi) / 2u32;
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
                break;
            }
            prev = cur;
        }
    }
    Ok(QuadratureResult {
        value: total,
        error_estimate: estimate,
        evaluations,
    })
}

fn initial_panels(a: &Real, b: &Real, count: usize, ctx: &PrecisionContext) -> Vec<(Real, Real)> {
    let p = ctx.bits();
    let step = Float::with_val(p, b - a) / count as u32;
    (0..count)
        .map(|i| {
            let lo = Float::with_val(p, &step * i as u32) + a;
            let hi = if i + 1 == count {
                b.clone()
            } else {
                Float::with_val(p, &step * (i + 1) as u32) + a
            };
            (lo, hi)
        })
        .collect()
}

/// Double-exponential quadrature on each panel, halving the step until two
/// levels agree within the panel's share of `tol`.
pub fn tanh_sinh<F>(f: F, a: &Real, b: &Real, ctx: &PrecisionContext, tol: &Real, opts: QuadOptions) -> Result<QuadratureResult>
where
    F: Fn(&Real) -> Complex,
{
    let p = ctx.bits();
    let width = Float::with_val(p, b - a);
    let mut total = Complex::zero(ctx);
    let mut estimate = ctx.zero();
    let mut evaluations = 0usize;
    // Beyond t_max the mapped abscissa is within 2^-bits of the endpoint.
    let t_max = ((p as f64) * std::f64::consts::LN_2 / std::f64::consts::PI).asinh() + 1.0;
    let half_pi = Float::with_val(p, ctx.pi() / 2u32);
    for (lo, hi) in initial_panels(a, b, opts.initial_panels.max(1), ctx) {
        let share = Float::with_val(p, tol * Float::with_val(p, &hi - &lo)) / &width;
        let half = Float::with_val(p, &hi - &lo) / 2u32;
        let mid = Float::with_val(p, &hi + &lo) / 2u32;
        let node = |t: f64| -> (Real, Real) {
            let t = Float::with_val(p, t);
            let mut sh = t.clone();
            let mut ch = Float::new(p);
            sh.sinh_cosh_mut(&mut ch);
            let u = Float::with_val(p, &half_pi * &sh);
            let cu = Float::with_val(p, u.cosh_ref());
            let x = Float::with_val(p, u.tanh_ref());
            let mut w = Float::with_val(p, &half_pi * &ch);
            w /= Float::with_val(p, cu.square_ref());
            (x, w)
        };
        let mut sum = Complex::zero(ctx);
        let mut prev: Option<Complex> = None;
        let mut h = 1.0f64;
        let mut level = 0;
        loop {
            // Level 0 takes every integer multiple of h, later levels the odd ones.
            let jmax = (t_max / h).ceil() as i64;
            let mut j = -jmax;
            while j <= jmax {
                if level == 0 || j.rem_euclid(2) == 1 {
                    let (x, w) = node(j as f64 * h);
                    let t = Float::with_val(p, &half * &x) + &mid;
                    sum += &f(&t).scale(&w);
                    evaluations += 1;
                }
                j += 1;
            }
            let hh = Float::with_val(p, h) * &half;
            let cur = sum.scale(&hh);
            if let Some(prev) = prev {
                let diff = (&cur - &prev).abs();
                if diff <= share && level >= 3 {
                    total += &cur;
                    estimate += &diff;
                    break;
                }
                if evaluations > opts.eval_cap || level >= 14 {
                    return Err(Error::RefinementCap {
                        evaluations,
                        estimate: diff.to_f64(),
                        tol: tol.to_f64(),
                    });
                }
            }
            prev = Some(cur);
            h /= 2.0;
            level += 1;
        }
    }
    Ok(QuadratureResult {
        value: total,
        error_estimate: estimate,
        evaluations,
    })
}

pub fn integrate<F>(scheme: Scheme, f: F, a: &Real, b: &Real, ctx: &PrecisionContext, tol: &Real, opts: QuadOptions) -> Result<QuadratureResult>
where
    F: Fn(&Real) -> Complex,
{
    match scheme {
        Scheme::GaussLegendre => adaptive_quadrature_with(f, a, b, ctx, tol, opts),
        Scheme::TanhSinh => tanh_sinh(f, a, b, ctx, tol, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    use crate::numerics::{complex_cosh, make_context};

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = gauss_legendre_rule(12, 128);
        assert_eq!(rule.nodes.len(), 12);
        for deg in 0..24u32 {
            let mut s = Float::with_val(128, 0);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                s += Float::with_val(128, x.pow(deg)) * w;
            }
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg + 1) as f64 };
            assert!((s.to_f64() - exact).abs() < 1e-30, "deg {deg}");
        }
        let odd = gauss_legendre_rule(7, 128);
        assert!(odd.nodes[3].is_zero());
        assert!(odd.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    fn real(f: impl Fn(&Real) -> Real) -> impl Fn(&Real) -> Complex {
        move |x| Complex::from_real(f(x))
    }

    #[test]
    fn constant_is_exact_at_first_level() {
        let ctx = make_context(128).unwrap();
        let r = adaptive_quadrature(real(|_| ctx.real(1)), &ctx.zero(), &ctx.real(1), &ctx, &ctx.real(1e-30)).unwrap();
        assert!(Float::with_val(128, &r.value.re - 1u32).abs() < 1e-36);
        assert!(r.error_estimate < 1e-36);
        assert_eq!(r.evaluations, 16 + 32);
    }

    #[test]
    fn semicircle_area() {
        let ctx = make_context(128).unwrap();
        let tol = ctx.real(1e-12);
        let f = real(|x: &Real| {
            let one_m = Float::with_val(128, 1u32 - Float::with_val(128, x.square_ref()));
            one_m.max(&Float::new(128)).sqrt()
        });
        let half_pi = Float::with_val(128, ctx.pi() / 2u32);
        let a = ctx.real(-1);
        let b = ctx.real(1);
        let gl = adaptive_quadrature(&f, &a, &b, &ctx, &tol).unwrap();
        assert!(Float::with_val(128, &gl.value.re - &half_pi).abs() < 1e-12);
        let ts = tanh_sinh(&f, &a, &b, &ctx, &ctx.real(1e-30), QuadOptions::default()).unwrap();
        assert!(Float::with_val(128, &ts.value.re - &half_pi).abs() < 1e-30);
    }

    #[test]
    fn cosh_denominator_dual_schemes() {
        let ctx = make_context(160).unwrap();
        let beta = Float::with_val(160, ctx.pi() * 5u32) / 6u32;
        let f = |x: &Real| {
            let w = Complex::new(Float::with_val(160, -x) / 10u32, beta.clone());
            complex_cosh(&w, &ctx).recip()
        };
        let tol = ctx.real(1e-35);
        let a = ctx.real(-1);
        let b = ctx.real(1);
        let gl = adaptive_quadrature(&f, &a, &b, &ctx, &tol).unwrap();
        let ts = tanh_sinh(&f, &a, &b, &ctx, &tol, QuadOptions::default()).unwrap();
        assert!((&gl.value - &ts.value).abs() < 1e-34);
    }

    #[test]
    fn cap_is_reported() {
        let ctx = make_context(64).unwrap();
        // Discontinuous integrand never settles to 1e-18 within 500 evaluations.
        let f = real(|x: &Real| if *x < 0.3 { ctx.real(0) } else { ctx.real(1) });
        let opts = QuadOptions {
            eval_cap: 500,
            initial_panels: 1,
        };
        let r = adaptive_quadrature_with(f, &ctx.zero(), &ctx.real(1), &ctx, &ctx.real(1e-18), opts);
        assert!(matches!(r, Err(Error::RefinementCap { .. })));
    }
}
