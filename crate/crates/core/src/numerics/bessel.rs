use rug::Float;

use super::context::{PrecisionContext, Real};
use crate::error::{Error, Result};

/// Orders of the modified Bessel function this crate needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselOrder {
    One,
    ThreeHalves,
}

impl BesselOrder {
    pub fn from_f64(ell: f64) -> Result<Self> {
        if ell == 1.0 {
            Ok(Self::One)
        } else if ell == 1.5 {
            Ok(Self::ThreeHalves)
        } else {
            Err(Error::UnsupportedOrder(ell.to_string()))
        }
    }
}

const GUARD: u32 = 16;

/// `I_ell(x)` for `x >= 0`.
///
/// Order 1 always uses the power series. Order 3/2 uses
/// `sqrt(2/(pi x)) (cosh x - sinh x / x)` above `x = 1/4` and the series
/// below, where the closed form loses digits to cancellation.
pub fn bessel_i(order: BesselOrder, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    check_nonnegative(x)?;
    match order {
        BesselOrder::One => bessel_i_series(order, x, ctx),
        BesselOrder::ThreeHalves if *x > 0.25 => Ok(i_three_halves_closed(x, ctx)),
        BesselOrder::ThreeHalves => bessel_i_series(order, x, ctx),
    }
}

/// `sum_{m>=0} (x/2)^(2m+ell) / (m! Gamma(m+ell+1))`, stopped once a term
/// drops below `2^(-bits-8)` of the partial sum.
pub fn bessel_i_series(order: BesselOrder, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    check_nonnegative(x)?;
    if x.is_zero() {
        return Ok(ctx.zero());
    }
    let w = ctx.widened(GUARD);
    let p = w.bits();
    let half = Float::with_val(p, x / 2u32);
    let h2 = Float::with_val(p, half.square_ref());
    // term_{m+1} = term_m * (x/2)^2 / ((m+1)(m+1+ell)); for ell = 3/2 the
    // denominator is (m+1)(2m+5)/2.
    let mut term = match order {
        BesselOrder::One => half.clone(),
        BesselOrder::ThreeHalves => {
            // (x/2)^{3/2} / Gamma(5/2), Gamma(5/2) = 3 sqrt(pi) / 4.
            let mut t = Float::with_val(p, half.sqrt_ref());
            t *= &half;
            t *= 4u32;
            t /= 3u32;
            t /= Float::with_val(p, w.pi().sqrt_ref());
            t
        }
    };
    let mut sum = term.clone();
    let mut rel = Float::with_val(p, 1);
    rel >>= ctx.bits() + 8;
    let mut m: u64 = 0;
    loop {
        term *= &h2;
        match order {
            BesselOrder::One => {
                term /= Float::with_val(p, (m + 1) * (m + 2));
            }
            BesselOrder::ThreeHalves => {
                term *= 2u32;
                term /= Float::with_val(p, (m + 1) * (2 * m + 5));
            }
        }
        sum += &term;
        m += 1;
        // Once the term ratio is below 1/2 the tail is at most one more term.
        if (m * m) as f64 > 2.0 * h2.to_f64() && term <= Float::with_val(p, &sum * &rel) {
            break;
        }
    }
    Ok(ctx.round(&sum))
}

fn i_three_halves_closed(x: &Real, ctx: &PrecisionContext) -> Real {
    let w = ctx.widened(GUARD);
    let p = w.bits();
    let mut sh = Float::with_val(p, x);
    let mut ch = Float::new(p);
    sh.sinh_cosh_mut(&mut ch);
    sh /= x;
    ch -= &sh;
    let mut pref = Float::with_val(p, w.pi() * x);
    pref = pref.recip();
    pref *= 2u32;
    ch *= pref.sqrt();
    ctx.round(&ch)
}

fn check_nonnegative(x: &Real) -> Result<()> {
    if x.is_nan() || *x < 0 {
        return Err(Error::Domain(format!("Bessel argument must be >= 0, got {x}")));
    }
    Ok(())
}

/// `L_k(n, y) = (1/k) sqrt(y/n) I_1(4 pi sqrt(n y) / k)`, the residue at
/// `w = 0` of `exp(2 pi n w + 2 pi y / (k^2 w))`.
pub fn kernel_l(k: u64, n: u64, y: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if k == 0 || n == 0 {
        return Err(Error::Domain(format!("kernel_l needs k, n >= 1, got k={k}, n={n}")));
    }
    if y.is_nan() || *y <= 0 {
        return Err(Error::Domain(format!("kernel_l needs y > 0, got {y}")));
    }
    let w = ctx.widened(GUARD);
    let p = w.bits();
    let ny = Float::with_val(p, y * n);
    let mut arg = ny.sqrt();
    arg *= w.pi();
    arg *= 4u32;
    arg /= k;
    let i1 = bessel_i(BesselOrder::One, &arg, &w)?;
    let mut r = Float::with_val(p, y / n);
    r = r.sqrt();
    r *= i1;
    r /= k;
    Ok(ctx.round(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{make_context, Complex};

    fn rel_diff(a: &Real, b: &Real) -> f64 {
        let d = Float::with_val(a.prec(), a - b).abs();
        (d / b.clone().abs()).to_f64()
    }

    #[test]
    fn order_parsing() {
        assert_eq!(BesselOrder::from_f64(1.0).unwrap(), BesselOrder::One);
        assert_eq!(BesselOrder::from_f64(1.5).unwrap(), BesselOrder::ThreeHalves);
        assert!(matches!(BesselOrder::from_f64(0.5), Err(Error::UnsupportedOrder(_))));
    }

    #[test]
    fn i1_at_zero_and_negative() {
        let ctx = make_context(128).unwrap();
        assert!(bessel_i(BesselOrder::One, &ctx.zero(), &ctx).unwrap().is_zero());
        assert!(bessel_i(BesselOrder::One, &ctx.real(-1), &ctx).is_err());
    }

    #[test]
    fn i1_at_two_matches_direct_partial_sum() {
        // sum 1/(m!(m+1)!) with exact rationals, evaluated at 3x precision.
        let ctx = make_context(128).unwrap();
        let hi = 384;
        let mut sum = rug::Rational::new();
        let mut fact = rug::Integer::from(1);
        for m in 0u32..60 {
            let next = rug::Integer::from(&fact * (m + 1));
            sum += rug::Rational::from((1, rug::Integer::from(&fact * &next)));
            fact = next;
        }
        let oracle = Float::with_val(hi, &sum);
        let got = bessel_i(BesselOrder::One, &ctx.real(2), &ctx).unwrap();
        assert!(rel_diff(&got, &oracle) < 1e-36);
        assert!((got.to_f64() - 1.590636854637329).abs() < 1e-14);
    }

    #[test]
    fn i_three_halves_at_one() {
        let ctx = make_context(128).unwrap();
        let hi = make_context(384).unwrap();
        let one = hi.real(1);
        let mut sh = one.clone();
        let mut ch = hi.zero();
        sh.sinh_cosh_mut(&mut ch);
        let mut oracle = Float::with_val(384, &ch - &sh);
        oracle *= Float::with_val(384, 2u32 / hi.pi().clone()).sqrt();
        let got = bessel_i(BesselOrder::ThreeHalves, &ctx.real(1), &ctx).unwrap();
        assert!(rel_diff(&got, &oracle) < 1e-36);
        assert!((got.to_f64() - 0.293525326347480).abs() < 1e-12);
    }

    #[test]
    fn i_three_halves_paths_agree() {
        let ctx = make_context(160).unwrap();
        for x in [0.3, 0.9, 2.5, 11.0, 40.0] {
            let x = ctx.real(x);
            let a = bessel_i_series(BesselOrder::ThreeHalves, &x, &ctx).unwrap();
            let b = i_three_halves_closed(&x, &ctx);
            assert!(rel_diff(&a, &b) < 1e-44, "x = {x}");
        }
    }

    #[test]
    fn precision_doubling() {
        for bits in [64u32, 128, 200] {
            let lo = make_context(bits).unwrap();
            let hi = make_context(2 * bits).unwrap();
            let bound = 2f64.powi(-(bits as i32 - 8));
            for x in [0.1, 1.0, 7.5, 30.0] {
                for order in [BesselOrder::One, BesselOrder::ThreeHalves] {
                    let a = bessel_i(order, &lo.real(x), &lo).unwrap();
                    let b = bessel_i(order, &hi.real(x), &hi).unwrap();
                    assert!(rel_diff(&a, &b) <= bound, "bits={bits} x={x}");
                }
            }
        }
    }

    /// Residue of `exp(2 pi n w + 2 pi y/(k^2 w))` at 0 by the trapezoid
    /// rule on the circle through the saddle point.
    fn contour_oracle(k: u64, n: u64, y: f64, ctx: &PrecisionContext) -> Real {
        let p = ctx.bits();
        let pi = ctx.pi();
        let a = Float::with_val(p, 2u32 * pi.clone() * n);
        let b = Float::with_val(p, 2u32 * pi.clone() * y) / (k * k);
        let r = Float::with_val(p, &b / &a).sqrt();
        let m = 256u32;
        let mut acc = Complex::zero(ctx);
        for j in 0..m {
            let theta = Float::with_val(p, 2u32 * pi.clone() * j) / m;
            let e = Complex::cis(&theta);
            let w = e.scale(&r);
            let mut expo = w.scale(&a);
            expo += &w.recip().scale(&b);
            // dw / (2 pi i) = w dtheta / (2 pi)
            acc += &(&expo.exp() * &w);
        }
        Float::with_val(p, &acc.re / m)
    }

    #[test]
    fn kernel_matches_contour_integral() {
        let ctx = make_context(128).unwrap();
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..20 {
            let k = 1 + next() % 10;
            let n = 1 + next() % 20;
            let y = 2.0 * ((next() % 10_000) as f64 + 1.0) / 10_000.0;
            let got = kernel_l(k, n, &ctx.real(y), &ctx).unwrap();
            let oracle = contour_oracle(k, n, y, &ctx);
            assert!(rel_diff(&got, &oracle) < 1e-10, "k={k} n={n} y={y}");
        }
    }

    #[test]
    fn kernel_examples() {
        let ctx = make_context(128).unwrap();
        let four_pi = Float::with_val(128, ctx.pi() * 4u32);
        let direct = bessel_i(BesselOrder::One, &four_pi, &ctx).unwrap();
        let got = kernel_l(1, 1, &ctx.real(1), &ctx).unwrap();
        assert!(rel_diff(&got, &direct) < 1e-36);

        // 4 pi sqrt(4 * 1) / 2 = 4 pi
        let quarter = Float::with_val(128, &direct / 4u32);
        let got = kernel_l(2, 4, &ctx.real(1), &ctx).unwrap();
        assert!(rel_diff(&got, &quarter) < 1e-36);

        let tiny = kernel_l(3, 5, &ctx.real(1e-30), &ctx).unwrap();
        assert!(tiny < 1e-29);
        assert!(kernel_l(1, 1, &ctx.zero(), &ctx).is_err());
    }
}
