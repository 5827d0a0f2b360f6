//! The exact formula for `p₂(n)`, the classical exact formula for `p(n)`,
//! truncation certificates, the leading asymptotic term and the
//! log-concavity scan.
//!
//! Every `k`-summand is computed independently (in parallel when a rayon
//! pool is available) and the partial sums are then reduced in ascending
//! `k` with a fixed class order, so results do not depend on the thread
//! count.

use rayon::prelude::*;
use rug::{Float, Integer, Rational};
use serde::Serialize;
use serde_json::{json, Number, Value};

use crate::error::{Error, Result};
use crate::integrals::script_i_real;
use crate::kloosterman::{rademacher_a, Family, FamilyTable, K8Phase, KloostermanValue, RootTable, ScriptKTable};
use crate::multiplier::gcd;
use crate::numerics::{bessel_i, BesselOrder, Complex, PrecisionContext, Real};
use crate::qseries::p2_counts;

/// Width of the stabilization window.
pub const WINDOW: usize = 8;
/// Maximum spread of the partial sums inside the window.
pub const WINDOW_SPREAD: f64 = 0.05;
/// Maximum distance of the final value from the nearest integer.
pub const INTEGER_SLACK: f64 = 0.25;

/// The four summands of the formula, in summation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TermClass {
    Gcd2,
    Gcd3,
    Gcd1Modular,
    Gcd1Mock,
}

impl TermClass {
    pub const ORDER: [TermClass; 4] = [Self::Gcd2, Self::Gcd3, Self::Gcd1Modular, Self::Gcd1Mock];

    pub fn accepts(self, k: i64) -> bool {
        if k < 1 {
            return false;
        }
        let g = gcd(k, 6);
        match self {
            Self::Gcd2 => g == 2,
            Self::Gcd3 => g == 3,
            Self::Gcd1Modular | Self::Gcd1Mock => g == 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Gcd2 => "gcd2",
            Self::Gcd3 => "gcd3",
            Self::Gcd1Modular => "gcd1_modular",
            Self::Gcd1Mock => "gcd1_mock",
        }
    }

    /// `(family, b, c, s)` of a mock class, whose prefactor is
    /// `c π / sqrt(s n)`.
    fn mock_data(self) -> Option<(u8, Rational, Rational, u32)> {
        match self {
            Self::Gcd2 => Some((4, Rational::from((5, 36)), Rational::from((5, 36)), 6)),
            Self::Gcd3 => Some((6, Rational::from((1, 6)), Rational::from((1, 6)), 6)),
            Self::Gcd1Mock => Some((8, Rational::from((1, 18)), Rational::from((1, 18)), 6)),
            Self::Gcd1Modular => None,
        }
    }
}

/// Power of `k` dividing the modular summand.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModularWeight {
    /// `𝒦_k(n)/k`, the weight that makes the series converge to `p₂(n)`.
    #[default]
    InverseK,
    /// `𝒦_k(n)/k²`.
    InverseKSquared,
}

/// Sign and phase conventions of the formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FormulaConfig {
    /// Multiplies `𝒦_1(n)`.
    pub k1_sign: i64,
    pub k8_phase: K8Phase,
    pub modular_weight: ModularWeight,
}

impl Default for FormulaConfig {
    fn default() -> Self {
        Self {
            k1_sign: 1,
            k8_phase: K8Phase::Plus,
            modular_weight: ModularWeight::InverseK,
        }
    }
}

impl FormulaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k1_sign != 1 && self.k1_sign != -1 {
            return Err(Error::Domain(format!("k1 sign must be +1 or -1, got {}", self.k1_sign)));
        }
        Ok(())
    }
}

/// One summand of the formula before the imaginary part is discarded.
#[derive(Clone, Debug)]
pub struct TermValue {
    pub class: TermClass,
    pub k: i64,
    pub value: Complex,
    /// Bound on the quadrature and rounding error of `value`.
    pub budget: Real,
}

/// Quadrature tolerance used when none is given.
pub fn default_tol(ctx: &PrecisionContext) -> Real {
    let mut t = ctx.real(1);
    t >>= ctx.bits() / 2;
    t
}

/// `c π / sqrt(s n)`.
fn prefactor(c: &Rational, s: u32, n: i64, ctx: &PrecisionContext) -> Real {
    let mut r = Float::with_val(ctx.bits(), s as u64 * n as u64).sqrt();
    r = Float::with_val(ctx.bits(), ctx.pi() / r);
    r * c
}

/// The `k`-th summand of one class with the default configuration.
pub fn theorem_term(class: TermClass, k: i64, n: i64, ctx: &PrecisionContext, tol: &Real) -> Result<Complex> {
    Ok(theorem_term_with(class, k, n, ctx, tol, &FormulaConfig::default())?.value)
}

/// The `k`-th summand of one class, including its share of the global
/// prefactor.
pub fn theorem_term_with(
    class: TermClass,
    k: i64,
    n: i64,
    ctx: &PrecisionContext,
    tol: &Real,
    config: &FormulaConfig,
) -> Result<TermValue> {
    config.validate()?;
    if n < 1 {
        return Err(Error::Domain(format!("n must be positive, got {n}")));
    }
    if !class.accepts(k) {
        return Err(Error::ClassMismatch {
            k,
            what: class.name().to_string(),
        });
    }
    match class.mock_data() {
        None => modular_term(k, n, ctx, config),
        Some((fam, b, c, s)) => {
            let family = Family::new(fam)?;
            let table = FamilyTable::new(family.case(), k)?;
            let ks = table.values_all_nu(family, n, 0, config.k8_phase)?;
            let nus: Vec<i64> = (1..=k).collect();
            let ints = script_i_real(&b, k, n, &nus, ctx, tol)?;
            let (sum, mass) = signed_root_sum(&ks, &ints.values, table.common_den(), ctx);
            let mut pre = prefactor(&c, s, n, ctx);
            pre /= k * k;
            let value = sum.scale(&pre);
            // |K(nu)| <= phi(k) <= k for each of the k values of nu.
            let mut budget = Float::with_val(ctx.bits(), &ints.error_estimate * (k * k));
            budget += mass * ctx.epsilon() * (64 * k);
            budget *= &pre;
            Ok(TermValue { class, k, value, budget })
        }
    }
}

/// `sum_nu (-1)^nu K(nu) w_nu`, grouping roots by residue modulo `den`
/// before embedding. Also returns `sum_nu |w_nu| · #terms` for the
/// rounding budget.
fn signed_root_sum(ks: &[KloostermanValue], weights: &[Real], den: i64, ctx: &PrecisionContext) -> (Complex, Real) {
    let p = ctx.bits();
    let mut acc: Vec<Option<Real>> = vec![None; den as usize];
    let table = RootTable::new(den, ctx);
    let mut mass = ctx.zero();
    for (i, (kv, w)) in ks.iter().zip(weights).enumerate() {
        let nu = i + 1;
        let neg = nu % 2 == 1;
        mass += Float::with_val(p, w.abs_ref()) * kv.len() as u32;
        for t in kv.terms() {
            let j = table.index(*t) as usize;
            let slot = acc[j].get_or_insert_with(|| Float::new(p));
            if neg {
                *slot -= w;
            } else {
                *slot += w;
            }
        }
    }
    let mut out = Complex::zero(ctx);
    for (j, w) in acc.iter().enumerate() {
        if let Some(w) = w {
            out += &table.get(j as i64).scale(w);
        }
    }
    (out, mass)
}

fn modular_term(k: i64, n: i64, ctx: &PrecisionContext, config: &FormulaConfig) -> Result<TermValue> {
    let p = ctx.bits();
    let mut kv = ScriptKTable::new(k)?.value(n)?.embed(ctx);
    if k == 1 && config.k1_sign == -1 {
        kv = -kv;
    }
    let mut pre = prefactor(&Rational::from((1, 6)), 1, n, ctx);
    pre /= match config.modular_weight {
        ModularWeight::InverseK => k,
        ModularWeight::InverseKSquared => k * k,
    };
    let mut arg = Float::with_val(p, n).sqrt();
    arg *= ctx.pi();
    arg *= 2u32;
    arg /= 3 * k;
    pre *= bessel_i(BesselOrder::One, &arg, ctx)?;
    let value = kv.scale(&pre);
    let mut budget = Float::with_val(p, pre.abs_ref()) * ctx.epsilon();
    budget *= 64 * k;
    Ok(TermValue {
        class: TermClass::Gcd1Modular,
        k,
        value,
        budget,
    })
}

/// All summands with a given `k`, in class order.
pub fn terms_for_k(k: i64, n: i64, ctx: &PrecisionContext, tol: &Real, config: &FormulaConfig) -> Result<Vec<TermValue>> {
    TermClass::ORDER
        .iter()
        .filter(|c| c.accepts(k))
        .map(|&c| theorem_term_with(c, k, n, ctx, tol, config))
        .collect()
}

/// Record of a truncated evaluation of an exact formula.
#[derive(Clone, Debug)]
pub struct ConvergenceCertificate {
    pub n: i64,
    /// Real part of the partial sum after each `k = 1..=k_used`.
    pub partial_sums: Vec<Real>,
    pub final_value: Real,
    pub rounded: Integer,
    pub stabilized: bool,
    pub k_used: i64,
    pub quadrature_budget: Real,
    /// Imaginary part of the full sum, discarded from `final_value`.
    pub im_residue: Real,
    pub terms: Vec<TermValue>,
    pub config: FormulaConfig,
}

impl ConvergenceCertificate {
    fn from_terms(n: i64, k_max: i64, terms: Vec<TermValue>, config: FormulaConfig, ctx: &PrecisionContext) -> Self {
        let mut total = Complex::zero(ctx);
        let mut budget = ctx.zero();
        let mut partial_sums = Vec::with_capacity(k_max as usize);
        let mut it = terms.iter().peekable();
        for k in 1..=k_max {
            while let Some(t) = it.next_if(|t| t.k == k) {
                total += &t.value;
                budget += &t.budget;
            }
            partial_sums.push(total.re.clone());
        }
        let final_value = total.re.clone();
        let rounded = final_value
            .to_integer()
            .expect("partial sums are finite");
        let stabilized = is_stabilized(&partial_sums, &rounded, ctx);
        Self {
            n,
            partial_sums,
            final_value,
            rounded,
            stabilized,
            k_used: k_max,
            quadrature_budget: budget,
            im_residue: total.im,
            terms,
            config,
        }
    }

    /// `|final_value - rounded|`.
    pub fn residual(&self) -> f64 {
        Float::with_val(self.final_value.prec(), &self.final_value - &self.rounded)
            .abs()
            .to_f64()
    }

    /// Spread of the last `WINDOW` partial sums.
    pub fn window_spread(&self) -> f64 {
        window_spread(&self.partial_sums).unwrap_or(f64::INFINITY)
    }

    /// Whether the discarded imaginary part lies within the error budget.
    pub fn is_real(&self) -> bool {
        Float::with_val(self.im_residue.prec(), self.im_residue.abs_ref()) <= self.quadrature_budget
    }

    /// JSON export, schema version "1".
    pub fn to_json(&self) -> Value {
        let partial: Vec<Value> = self.partial_sums.iter().map(|s| decimal_number(s, 20)).collect();
        json!({
            "schema": "1",
            "n": self.n,
            "rounded": integer_number(&self.rounded),
            "stabilized": self.stabilized,
            "k_used": self.k_used,
            "final_value": decimal_number(&self.final_value, 30),
            "residual": self.residual(),
            "partial_sums": partial,
            "im_residue": self.im_residue.to_f64(),
            "quadrature_budget": self.quadrature_budget.to_f64(),
            "config": {
                "k1_sign": self.config.k1_sign,
                "k8_phase": self.config.k8_phase.sign(),
                "modular_weight": self.config.modular_weight,
            },
        })
    }
}

/// A big integer as a JSON number in full decimal.
pub fn integer_number(z: &Integer) -> Value {
    Value::Number(z.to_string().parse::<Number>().expect("decimal integer"))
}

fn decimal_number(x: &Real, digits: usize) -> Value {
    let s = x.to_string_radix(10, Some(digits));
    match s.parse::<Number>() {
        Ok(v) => Value::Number(v),
        Err(_) => Value::Number(Number::from_f64(x.to_f64()).unwrap_or_else(|| 0.into())),
    }
}

fn window_spread(sums: &[Real]) -> Option<f64> {
    if sums.len() < WINDOW {
        return None;
    }
    let w = &sums[sums.len() - WINDOW..];
    let mut lo = w[0].clone();
    let mut hi = w[0].clone();
    for s in w {
        if *s < lo {
            lo = s.clone();
        }
        if *s > hi {
            hi = s.clone();
        }
    }
    Some((hi - lo).to_f64())
}

fn is_stabilized(sums: &[Real], rounded: &Integer, ctx: &PrecisionContext) -> bool {
    let Some(spread) = window_spread(sums) else {
        return false;
    };
    let last = sums.last().expect("window is non-empty");
    let resid = Float::with_val(ctx.bits(), last - rounded).abs().to_f64();
    spread <= WINDOW_SPREAD && resid < INTEGER_SLACK
}

/// Default truncation point `max(60, ceil(4 n^{5/8}))`.
pub fn default_k_max(n: i64) -> i64 {
    60.max((4.0 * (n as f64).powf(0.625)).ceil() as i64)
}

/// `p₂(n)` from the exact formula truncated at `k_max`, default conventions.
pub fn p2_exact(n: i64, k_max: i64, ctx: &PrecisionContext) -> Result<ConvergenceCertificate> {
    p2_exact_with(n, k_max, ctx, &default_tol(ctx), &FormulaConfig::default())
}

pub fn p2_exact_with(
    n: i64,
    k_max: i64,
    ctx: &PrecisionContext,
    tol: &Real,
    config: &FormulaConfig,
) -> Result<ConvergenceCertificate> {
    if n < 1 {
        return Err(Error::Domain(format!("n must be positive, got {n}")));
    }
    if k_max < 1 {
        return Err(Error::Domain(format!("k_max must be positive, got {k_max}")));
    }
    config.validate()?;
    let per_k: Vec<Vec<TermValue>> = (1..=k_max)
        .into_par_iter()
        .map(|k| terms_for_k(k, n, ctx, tol, config))
        .collect::<Result<_>>()?;
    let terms = per_k.into_iter().flatten().collect();
    Ok(ConvergenceCertificate::from_terms(n, k_max, terms, *config, ctx))
}

/// Truncation point used for `p(n)`: `ceil(3 sqrt n) + 20`.
pub fn rademacher_k_max(n: i64) -> i64 {
    (3.0 * (n as f64).sqrt()).ceil() as i64 + 20
}

/// `p(n) = 2π (24n-1)^{-3/4} sum_k A_k(n)/k · I_{3/2}(π sqrt(24n-1)/(6k))`
/// truncated at `k_max`.
pub fn rademacher_p(n: i64, k_max: i64, ctx: &PrecisionContext) -> Result<ConvergenceCertificate> {
    if n < 1 {
        return Err(Error::Domain(format!("n must be positive, got {n}")));
    }
    if k_max < 1 {
        return Err(Error::Domain(format!("k_max must be positive, got {k_max}")));
    }
    let p = ctx.bits();
    let m = Float::with_val(p, 24 * n - 1);
    let sq = Float::with_val(p, m.sqrt_ref());
    let mut pre = Float::with_val(p, ctx.pi() * 2u32);
    pre /= Float::with_val(p, sq.sqrt_ref()) * &sq;
    let terms: Vec<TermValue> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let a = rademacher_a(k, n)?.embed(ctx);
            let mut arg = Float::with_val(p, ctx.pi() * &sq);
            arg /= 6 * k;
            let mut w = bessel_i(BesselOrder::ThreeHalves, &arg, ctx)?;
            w *= &pre;
            w /= k;
            let mut budget = Float::with_val(p, w.abs_ref()) * ctx.epsilon();
            budget *= 64 * k;
            Ok(TermValue {
                class: TermClass::Gcd1Modular,
                k,
                value: a.scale(&w),
                budget,
            })
        })
        .collect::<Result<_>>()?;
    let mut cert = ConvergenceCertificate::from_terms(n, k_max, terms, FormulaConfig::default(), ctx);
    if k_max < WINDOW as i64 {
        cert.stabilized = cert.residual() < INTEGER_SLACK;
    }
    Ok(cert)
}

/// The `k = 1` modular summand `(π/(6√n)) I₁(2π√n/3)`.
pub fn leading_term(n: i64, ctx: &PrecisionContext) -> Result<Real> {
    let t = theorem_term_with(
        TermClass::Gcd1Modular,
        1,
        n,
        ctx,
        &default_tol(ctx),
        &FormulaConfig::default(),
    )?;
    Ok(t.value.re)
}

/// All `n` in `[n_lo, n_hi]` with `p₂(n)² < p₂(n-1) p₂(n+1)`.
pub fn logconcavity_scan(n_lo: u64, n_hi: u64) -> Result<Vec<u64>> {
    if n_lo < 1 || n_lo > n_hi || n_hi > 2000 {
        return Err(Error::Domain(format!(
            "need 1 <= n_lo <= n_hi <= 2000, got [{n_lo}, {n_hi}]"
        )));
    }
    let c = p2_counts(n_hi as usize + 2);
    Ok((n_lo..=n_hi)
        .filter(|&n| {
            let n = n as usize;
            let sq = Integer::from(c[n].square_ref());
            sq < Integer::from(&c[n - 1] * &c[n + 1])
        })
        .collect())
}
