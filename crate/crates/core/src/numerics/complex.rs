use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::Float;

use super::context::{PrecisionContext, Real};

/// Complex number with MPFR real and imaginary parts.
///
/// Both parts carry the same precision. Arithmetic results take the
/// precision of the left operand.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self::new(ctx.zero(), ctx.zero())
    }

    pub fn one(ctx: &PrecisionContext) -> Self {
        Self::new(ctx.real(1), ctx.zero())
    }

    pub fn from_real(re: Real) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    pub fn from_f64(ctx: &PrecisionContext, re: f64, im: f64) -> Self {
        Self::new(ctx.real(re), ctx.real(im))
    }

    /// `cos(theta) + i sin(theta)`.
    pub fn cis(theta: &Real) -> Self {
        let prec = theta.prec();
        let mut s = theta.clone();
        let mut c = Float::new(prec);
        s.sin_cos_mut(&mut c);
        Self { re: c, im: s }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Float::with_val(self.prec(), -&self.im))
    }

    pub fn norm_sqr(&self) -> Real {
        let p = self.prec();
        let mut a = Float::with_val(p, self.re.square_ref());
        a += Float::with_val(p, self.im.square_ref());
        a
    }

    pub fn abs(&self) -> Real {
        self.re.clone().hypot(&self.im)
    }

    pub fn scale(&self, s: &Real) -> Self {
        let p = self.prec();
        Self::new(Float::with_val(p, &self.re * s), Float::with_val(p, &self.im * s))
    }

    pub fn mul_i(&self) -> Self {
        Self::new(Float::with_val(self.prec(), -&self.im), self.re.clone())
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        let p = self.prec();
        Self::new(
            Float::with_val(p, &self.re / &d),
            Float::with_val(p, -Float::with_val(p, &self.im / &d)),
        )
    }

    pub fn div(&self, other: &Self) -> Self {
        self * &other.recip()
    }

    pub fn exp(&self) -> Self {
        let m = self.re.clone().exp();
        Self::cis(&self.im).scale(&m)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        let r = self.abs();
        if r.is_zero() {
            return Self::new(Float::new(p), Float::new(p));
        }
        let mut re = Float::with_val(p, &r + &self.re);
        re /= 2u32;
        let re = re.sqrt();
        let mut im = Float::with_val(p, &r - &self.re);
        im /= 2u32;
        let mut im = im.sqrt();
        if self.im.is_sign_negative() {
            im = -im;
        }
        Self::new(re, im)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        write!(f, "{} {} {}i", self.re, sign, self.im.clone().abs())
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re + &o.re), Float::with_val(p, &self.im + &o.im))
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re - &o.re), Float::with_val(p, &self.im - &o.im))
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        let p = self.prec();
        let mut re = Float::with_val(p, &self.re * &o.re);
        re -= Float::with_val(p, &self.im * &o.im);
        let mut im = Float::with_val(p, &self.re * &o.im);
        im += Float::with_val(p, &self.im * &o.re);
        Complex::new(re, im)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, o: &Complex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&Complex> for Complex {
    fn sub_assign(&mut self, o: &Complex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&Complex> for Complex {
    fn mul_assign(&mut self, o: &Complex) {
        *self = &*self * o;
    }
}

/// `cosh(a + ib) = cosh a cos b + i sinh a sin b`.
pub fn complex_cosh(z: &Complex, ctx: &PrecisionContext) -> Complex {
    let p = ctx.bits();
    let mut sh = Float::with_val(p, &z.re);
    let mut ch = Float::new(p);
    sh.sinh_cosh_mut(&mut ch);
    let mut s = Float::with_val(p, &z.im);
    let mut c = Float::new(p);
    s.sin_cos_mut(&mut c);
    Complex::new(ch * c, sh * s)
}
