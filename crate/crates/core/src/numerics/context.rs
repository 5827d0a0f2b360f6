use rug::float::Constant;
use rug::{Assign, Float};

use crate::error::{Error, Result};

/// Binary floating value with a per-value mantissa precision.
pub type Real = Float;

/// Working precision shared by a computation, with constants cached at
/// that precision.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    bits: u32,
    pi: Real,
    ln2: Real,
}

impl PrecisionContext {
    pub const MIN_BITS: u32 = 64;

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::PrecisionTooLow {
                bits,
                min: Self::MIN_BITS,
            });
        }
        Ok(Self {
            bits,
            pi: Float::with_val(bits, Constant::Pi),
            ln2: Float::with_val(bits, Constant::Log2),
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn pi(&self) -> &Real {
        &self.pi
    }

    pub fn ln2(&self) -> &Real {
        &self.ln2
    }

    /// A context with `extra` more bits, for internal guard digits.
    pub fn widened(&self, extra: u32) -> Self {
        Self::new(self.bits + extra).expect("widening keeps bits above the floor")
    }

    pub fn real<T>(&self, value: T) -> Real
    where
        Real: Assign<T>,
    {
        Float::with_val(self.bits, value)
    }

    pub fn zero(&self) -> Real {
        Float::new(self.bits)
    }

    /// `2^-bits`, the unit roundoff scale of this context.
    pub fn epsilon(&self) -> Real {
        let mut e = self.real(1);
        e >>= self.bits;
        e
    }

    /// `value` rounded to this context's precision.
    pub fn round(&self, value: &Real) -> Real {
        Float::with_val(self.bits, value)
    }
}

pub fn make_context(bits: u32) -> Result<PrecisionContext> {
    PrecisionContext::new(bits)
}

/// Default precision for evaluating the exact formula at size `n`.
///
/// The result has magnitude about `2^(3.03 sqrt n)`; 96 guard bits absorb
/// quadrature and summation error.
pub fn auto_bits(n: u64) -> u32 {
    (3.1 * (n as f64).sqrt()).ceil() as u32 + 96
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimum_precision_is_accepted() {
        assert_eq!(make_context(64).unwrap().bits(), 64);
        assert_eq!(make_context(256).unwrap().bits(), 256);
    }

    #[test]
    fn below_floor_is_rejected() {
        assert_eq!(
            make_context(63).unwrap_err(),
            Error::PrecisionTooLow { bits: 63, min: 64 }
        );
    }

    #[test]
    fn constants_are_cached_at_context_precision() {
        let ctx = make_context(200).unwrap();
        assert_eq!(ctx.pi().prec(), 200);
        let diff = Float::with_val(200, ctx.pi() - 3.141592653589793_f64).abs();
        assert!(diff < 1e-15);
        let ln2 = Float::with_val(200, ctx.ln2().clone().exp());
        assert!(Float::with_val(200, ln2 - 2u32).abs() < ctx.epsilon() * 4u32);
    }

    #[test]
    fn auto_bits_policy() {
        assert_eq!(auto_bits(1), 100);
        assert_eq!(auto_bits(100), 127);
    }
}
