use rug::{Float, Rational};

use super::quadrature::{integrate, QuadOptions, QuadratureResult, Scheme};
use super::beta;
use crate::error::{Error, Result};
use crate::numerics::{complex_cosh, Complex, PrecisionContext, Real};

fn check_z(z: &Complex) -> Result<()> {
    if z.re <= 0 {
        return Err(Error::Domain(format!("need Re(z) > 0, got z = {z}")));
    }
    Ok(())
}

fn check_nu(k: i64, nu: i64) -> Result<()> {
    if k < 1 || !(1..=k).contains(&nu) {
        return Err(Error::Domain(format!("need 1 <= nu <= k, got k={k}, nu={nu}")));
    }
    Ok(())
}

/// `(bits + 16) ln 2`: Gaussian factors below `e^{-this}` are dropped.
fn cutoff_exponent(ctx: &PrecisionContext) -> Real {
    Float::with_val(ctx.bits(), ctx.ln2() * (ctx.bits() + 16))
}

/// Panels for an integrand `exp(-a x^2)` on `[-x_max, x_max]`, one per
/// half turn of the phase `Im(a) x^2`.
fn panel_count(a: &Complex, x_max: &Real) -> usize {
    let phase = (a.im.to_f64() * x_max.to_f64().powi(2)).abs();
    ((phase / std::f64::consts::PI).ceil() as usize).clamp(4, 4096)
}

/// `I_{k,nu}(z) = int_R exp(-3 pi z x^2 / k) / cosh(i beta - pi z x / k) dx`,
/// with the line cut where the Gaussian factor drops below
/// `2^{-bits-16}` of its peak.
pub fn mordell_i(k: i64, nu: i64, z: &Complex, ctx: &PrecisionContext, tol: &Real) -> Result<QuadratureResult> {
    mordell_i_with(k, nu, z, ctx, tol, Scheme::GaussLegendre)
}

pub fn mordell_i_with(k: i64, nu: i64, z: &Complex, ctx: &PrecisionContext, tol: &Real, scheme: Scheme) -> Result<QuadratureResult> {
    check_z(z)?;
    check_nu(k, nu)?;
    let p = ctx.bits();
    let pi_k = Float::with_val(p, ctx.pi() / k);
    // exp(-a x^2) with a = 3 pi z / k
    let a = z.scale(&Float::with_val(p, &pi_k * 3u32));
    let x_max = Float::with_val(p, cutoff_exponent(ctx) / &a.re).sqrt();
    let pz = z.scale(&pi_k);
    let beta = beta(k, nu, ctx);
    let f = |x: &Real| {
        let x2 = Float::with_val(p, x.square_ref());
        let g = (-a.scale(&x2)).exp();
        let mut w = pz.scale(x);
        w = Complex::new(-w.re, Float::with_val(p, &beta - &w.im));
        g.div(&complex_cosh(&w, ctx))
    };
    let opts = QuadOptions {
        initial_panels: panel_count(&a, &x_max),
        ..QuadOptions::default()
    };
    integrate(scheme, f, &Float::with_val(p, -&x_max), &x_max, ctx, tol, opts)
}

/// `e^{pi b / (k z)}` and `z e^{pi b / (k z)}`.
fn principal_factor(b: &Rational, k: i64, z: &Complex, ctx: &PrecisionContext) -> Complex {
    let p = ctx.bits();
    let scale = Float::with_val(p, ctx.pi() * Float::with_val(p, b)) / k;
    z.recip().scale(&scale).exp()
}

/// `𝒥_{b,k,nu}(z) = z e^{pi b/(k z)} I_{k,nu}(z)`. `tol` is absolute on 𝒥.
pub fn j_full(b: &Rational, k: i64, nu: i64, z: &Complex, ctx: &PrecisionContext, tol: &Real) -> Result<Complex> {
    check_z(z)?;
    let pref = &principal_factor(b, k, z, ctx) * z;
    let i_tol = Float::with_val(ctx.bits(), tol / pref.abs());
    let i = mordell_i(k, nu, z, ctx, &i_tol)?;
    Ok(&pref * &i.value)
}

/// `𝒥*_{b,k,nu}(z) = sqrt(b/3) int_{-1}^{1} e^{(pi b/(k z))(1 - x^2)}
/// / cosh(i beta - (pi/k) sqrt(b/3) x) dx`, for `b >= 0`.
pub fn j_star(b: &Rational, k: i64, nu: i64, z: &Complex, ctx: &PrecisionContext, tol: &Real) -> Result<Complex> {
    check_z(z)?;
    check_nu(k, nu)?;
    if *b < 0 {
        return Err(Error::Domain(format!("principal part needs b >= 0, got {b}")));
    }
    if *b == 0 {
        return Ok(Complex::zero(ctx));
    }
    let p = ctx.bits();
    let s = Float::with_val(p, Float::with_val(p, b) / 3u32).sqrt();
    let coef = z.recip().scale(&(Float::with_val(p, ctx.pi() * Float::with_val(p, b)) / k));
    let alpha = Float::with_val(p, ctx.pi() * &s) / k;
    let beta = beta(k, nu, ctx);
    let f = |x: &Real| {
        let one_m = Float::with_val(p, 1u32 - Float::with_val(p, x.square_ref()));
        let g = coef.scale(&one_m).exp();
        let w = Complex::new(-Float::with_val(p, &alpha * x), beta.clone());
        g.div(&complex_cosh(&w, ctx))
    };
    let opts = QuadOptions {
        initial_panels: panel_count(&coef, &ctx.real(1)),
        ..QuadOptions::default()
    };
    let r = integrate(Scheme::GaussLegendre, f, &ctx.real(-1), &ctx.real(1), ctx, &Float::with_val(p, tol / &s), opts)?;
    Ok(r.value.scale(&s))
}

/// Integrand of 𝒥 after the substitution `u = z x`, which moves the
/// `z`-dependence into the Gaussian: `exp((pi/(k z))(b - 3u^2)) / cosh(i beta - pi u/k)`.
fn rotated_integrand<'a>(
    b: &'a Rational,
    k: i64,
    nu: i64,
    z: &'a Complex,
    ctx: &'a PrecisionContext,
) -> (impl Fn(&Real) -> Complex + 'a, Complex) {
    let p = ctx.bits();
    let coef = z.recip().scale(&(Float::with_val(p, ctx.pi()) / k));
    let bf = Float::with_val(p, b);
    let pi_k = Float::with_val(p, ctx.pi() / k);
    let beta = beta(k, nu, ctx);
    let c2 = coef.clone();
    let f = move |u: &Real| {
        let mut e = Float::with_val(p, u.square_ref());
        e *= 3u32;
        let e = Float::with_val(p, &bf - &e);
        let g = c2.scale(&e).exp();
        let w = Complex::new(-Float::with_val(p, &pi_k * u), beta.clone());
        g.div(&complex_cosh(&w, ctx))
    };
    (f, coef)
}

/// `u` beyond which `|exp((pi/(k z))(b - 3u^2))| < 2^{-bits-16}`.
fn rotated_cutoff(b: &Rational, coef: &Complex, ctx: &PrecisionContext) -> Real {
    let p = ctx.bits();
    let mut u2 = Float::with_val(p, cutoff_exponent(ctx) / &coef.re);
    u2 += Float::with_val(p, b).max(&Float::new(p));
    u2 /= 3u32;
    u2.sqrt()
}

/// 𝒥 from the rotated integral over the whole line. Independent of
/// [`mordell_i`]; used to cross-check [`j_full`].
pub fn j_full_rotated(b: &Rational, k: i64, nu: i64, z: &Complex, ctx: &PrecisionContext, tol: &Real) -> Result<Complex> {
    check_z(z)?;
    check_nu(k, nu)?;
    let (f, coef) = rotated_integrand(b, k, nu, z, ctx);
    let u_max = rotated_cutoff(b, &coef, ctx);
    let a = coef.scale(&ctx.real(3));
    let opts = QuadOptions {
        initial_panels: panel_count(&a, &u_max),
        ..QuadOptions::default()
    };
    let p = ctx.bits();
    Ok(integrate(Scheme::GaussLegendre, f, &Float::with_val(p, -&u_max), &u_max, ctx, tol, opts)?.value)
}

/// `𝒥 - 𝒥*` as the rotated integral over `|u| > sqrt(b/3)`, for `b > 0`.
/// No cancellation between large quantities occurs on this route.
pub fn j_tail_rotated(b: &Rational, k: i64, nu: i64, z: &Complex, ctx: &PrecisionContext, tol: &Real) -> Result<Complex> {
    check_z(z)?;
    check_nu(k, nu)?;
    if *b <= 0 {
        return Err(Error::Domain(format!("tail route needs b > 0, got {b}")));
    }
    let p = ctx.bits();
    let (f, coef) = rotated_integrand(b, k, nu, z, ctx);
    let u_max = rotated_cutoff(b, &coef, ctx);
    let s = Float::with_val(p, Float::with_val(p, b) / 3u32).sqrt();
    let a = coef.scale(&ctx.real(3));
    let opts = QuadOptions {
        initial_panels: panel_count(&a, &u_max),
        ..QuadOptions::default()
    };
    let half_tol = Float::with_val(p, tol / 2u32);
    let right = integrate(Scheme::GaussLegendre, &f, &s, &u_max, ctx, &half_tol, opts)?;
    let left = integrate(
        Scheme::GaussLegendre,
        &f,
        &Float::with_val(p, -&u_max),
        &Float::with_val(p, -&s),
        ctx,
        &half_tol,
        opts,
    )?;
    Ok(&right.value + &left.value)
}

/// Sample grid `k <= k_max`, `1 <= nu <= k`, `N = m k` for each `m` in
/// `n_factors`, and `z = k (1/N^2 - i Phi)` with `phi_count` equally spaced
/// `Phi` in `[-1/(k N), 1/(k N)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MordellGrid {
    pub k_max: i64,
    pub n_factors: Vec<i64>,
    pub phi_count: usize,
}

impl MordellGrid {
    pub fn base() -> Self {
        Self {
            k_max: 12,
            n_factors: vec![2, 4],
            phi_count: 5,
        }
    }

    pub fn refined() -> Self {
        Self {
            k_max: 12,
            n_factors: vec![2, 4, 8],
            phi_count: 9,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GridPoint {
    pub k: i64,
    pub nu: i64,
    pub big_n: i64,
    pub z: Complex,
}

pub fn grid_points(grid: &MordellGrid, ctx: &PrecisionContext) -> Vec<GridPoint> {
    let p = ctx.bits();
    let mut out = Vec::new();
    for k in 1..=grid.k_max {
        for &m in &grid.n_factors {
            let big_n = m * k;
            for i in 0..grid.phi_count {
                // Phi = (2i/(count-1) - 1) / (k N)
                let phi = if grid.phi_count == 1 {
                    Float::new(p)
                } else {
                    Float::with_val(p, 2 * i as i64 - (grid.phi_count as i64 - 1))
                        / ((grid.phi_count as i64 - 1) * k * big_n)
                };
                let re = Float::with_val(p, k) / (big_n * big_n);
                let im = -Float::with_val(p, &phi * k);
                let z = Complex::new(re, im);
                for nu in 1..=k {
                    out.push(GridPoint {
                        k,
                        nu,
                        big_n,
                        z: z.clone(),
                    });
                }
            }
        }
    }
    out
}

/// How `𝒥 - 𝒥*` (or `𝒥` for `b <= 0`) is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// [`j_full`] minus [`j_star`].
    Direct,
    /// [`j_tail_rotated`] (or [`j_full_rotated`] for `b <= 0`).
    Rotated,
}

#[derive(Clone, Debug)]
pub struct MordellFit {
    /// `max |E| |pi/2 - beta|` over the grid.
    pub c: f64,
    pub samples: usize,
    pub argmax: (i64, i64, i64),
}

/// Fits the single constant `C` in `|E| <= C / |pi/2 - (pi/k)(nu - 1/6)|`,
/// where `E = 𝒥 - 𝒥*` for `b > 0` and `E = 𝒥` for `b <= 0`.
pub fn fit_error_constant(
    b: &Rational,
    grid: &MordellGrid,
    route: Route,
    ctx: &PrecisionContext,
    tol: &Real,
) -> Result<MordellFit> {
    let p = ctx.bits();
    let half_pi = Float::with_val(p, ctx.pi() / 2u32);
    let mut best = MordellFit {
        c: 0.0,
        samples: 0,
        argmax: (0, 0, 0),
    };
    for pt in grid_points(grid, ctx) {
        let e = match (route, *b > 0) {
            (Route::Direct, true) => {
                &j_full(b, pt.k, pt.nu, &pt.z, ctx, tol)? - &j_star(b, pt.k, pt.nu, &pt.z, ctx, tol)?
            }
            (Route::Direct, false) => j_full(b, pt.k, pt.nu, &pt.z, ctx, tol)?,
            (Route::Rotated, true) => j_tail_rotated(b, pt.k, pt.nu, &pt.z, ctx, tol)?,
            (Route::Rotated, false) => j_full_rotated(b, pt.k, pt.nu, &pt.z, ctx, tol)?,
        };
        let gap = Float::with_val(p, &half_pi - beta(pt.k, pt.nu, ctx)).abs();
        let c = (e.abs() * gap).to_f64();
        best.samples += 1;
        if c > best.c {
            best.c = c;
            best.argmax = (pt.k, pt.nu, pt.big_n);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_context;

    #[test]
    fn rejects_bad_arguments() {
        let ctx = make_context(64).unwrap();
        let tol = ctx.real(1e-10);
        let z = Complex::from_f64(&ctx, -1.0, 0.0);
        assert!(mordell_i(1, 1, &z, &ctx, &tol).is_err());
        let z = Complex::from_f64(&ctx, 1.0, 0.0);
        assert!(mordell_i(3, 4, &z, &ctx, &tol).is_err());
        assert!(j_star(&Rational::from((-1, 12)), 1, 1, &z, &ctx, &tol).is_err());
    }

    #[test]
    fn dual_schemes_at_unit_z() {
        let ctx = make_context(128).unwrap();
        let tol = ctx.real(1e-25);
        let z = Complex::from_f64(&ctx, 1.0, 0.0);
        let gl = mordell_i(1, 1, &z, &ctx, &tol).unwrap();
        let ts = mordell_i_with(1, 1, &z, &ctx, &tol, Scheme::TanhSinh).unwrap();
        assert!((&gl.value - &ts.value).abs() < 1e-20);
    }

    #[test]
    fn large_z_decay() {
        // With u = z x, z I(z) -> int_R du / cosh(i beta - pi u), which is -1
        // for beta = 5 pi/6 by antiperiodicity of cosh.
        let ctx = make_context(96).unwrap();
        let tol = ctx.real(1e-20);
        let scaled = |re: f64| {
            let z = Complex::from_f64(&ctx, re, 0.0);
            let v = mordell_i(1, 1, &z, &ctx, &tol).unwrap().value;
            (&v * &z).to_f64_pair()
        };
        let (a, b, c) = (scaled(100.0), scaled(400.0), scaled(1600.0));
        for v in [a, b, c] {
            assert!(v.1.abs() < 1e-20);
        }
        assert!((a.0 + 1.0).abs() > (b.0 + 1.0).abs());
        assert!((b.0 + 1.0).abs() > (c.0 + 1.0).abs());
        assert!((c.0 + 1.0).abs() < 0.005);
        let ratio = 4.0 * a.0 / b.0;
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn symmetrised_integrand_gives_same_value() {
        let ctx = make_context(96).unwrap();
        let tol = ctx.real(1e-22);
        let z = Complex::from_f64(&ctx, 0.7, -0.2);
        let direct = mordell_i(5, 2, &z, &ctx, &tol).unwrap();
        // Average f(x) and f(-x): the odd part integrates to zero.
        let p = ctx.bits();
        let pi_k = Float::with_val(p, ctx.pi() / 5u32);
        let a = z.scale(&Float::with_val(p, &pi_k * 3u32));
        let pz = z.scale(&pi_k);
        let beta = beta(5, 2, &ctx);
        let f = |x: &Real| {
            let x2 = Float::with_val(p, x.square_ref());
            let g = (-a.scale(&x2)).exp();
            let w = pz.scale(x);
            let w = Complex::new(-w.re, Float::with_val(p, &beta - &w.im));
            g.div(&complex_cosh(&w, &ctx))
        };
        let even = |x: &Real| {
            let s = &f(x) + &f(&Float::with_val(p, -x));
            s.scale(&ctx.real(0.5))
        };
        let x_max = Float::with_val(p, cutoff_exponent(&ctx) / &a.re).sqrt();
        let r = integrate(
            Scheme::GaussLegendre,
            even,
            &Float::with_val(p, -&x_max),
            &x_max,
            &ctx,
            &tol,
            QuadOptions::default(),
        )
        .unwrap();
        assert!((&r.value - &direct.value).abs() < 1e-20);
    }

    #[test]
    fn principal_part_vanishes_at_b_zero() {
        let ctx = make_context(64).unwrap();
        let z = Complex::from_f64(&ctx, 0.1, 0.05);
        let v = j_star(&Rational::new(), 4, 2, &z, &ctx, &ctx.real(1e-10)).unwrap();
        assert!(v.abs() == 0);
    }

    #[test]
    fn routes_agree_on_sample_points() {
        let ctx = make_context(128).unwrap();
        let tol = ctx.real(1e-14);
        let grid = MordellGrid {
            k_max: 4,
            n_factors: vec![2, 4],
            phi_count: 3,
        };
        for b in [Rational::from((5, 36)), Rational::from((1, 18))] {
            for pt in grid_points(&grid, &ctx).into_iter().step_by(5) {
                let full = j_full(&b, pt.k, pt.nu, &pt.z, &ctx, &tol).unwrap();
                let rot = j_full_rotated(&b, pt.k, pt.nu, &pt.z, &ctx, &tol).unwrap();
                assert!((&full - &rot).abs() < 1e-12);
                let direct = &full - &j_star(&b, pt.k, pt.nu, &pt.z, &ctx, &tol).unwrap();
                let tail = j_tail_rotated(&b, pt.k, pt.nu, &pt.z, &ctx, &tol).unwrap();
                assert!((&direct - &tail).abs() < 1e-10, "{pt:?}");
            }
        }
    }
}
