//! Exact Kloosterman-type sums: the classical `K_k(n, m)`, the partition
//! sums `A_k(n)`, the modular sum `𝒦_k(n)` and the eight multiplier-twisted
//! families, each stored as the list of its root-of-unity terms.

use std::collections::HashMap;
use std::io::{self, Write};

use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiplier::{
    gcd, make_cusp_pair, mod_inverse, omega, ratio_from_omega, script_k_multiplier, CuspPair,
    RatioCase, RootOfUnity,
};
use crate::numerics::{Complex, PrecisionContext};

/// A finite sum of roots of unity, one term per unit `h` modulo `k`, kept in
/// ascending-`h` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KloostermanValue {
    terms: Vec<RootOfUnity>,
}

impl KloostermanValue {
    pub fn from_terms(terms: Vec<RootOfUnity>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[RootOfUnity] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies every term by `c`.
    pub fn scaled(&self, c: RootOfUnity) -> Self {
        Self {
            terms: self.terms.iter().map(|t| t.mul(c)).collect(),
        }
    }

    /// Equality of the term multisets. Implies equality of values.
    pub fn same_terms(&self, other: &Self) -> bool {
        let mut a = self.terms.clone();
        let mut b = other.terms.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    /// Least common denominator of the terms.
    pub fn common_den(&self) -> i64 {
        self.terms
            .iter()
            .fold(1, |acc, t| acc / gcd(acc, t.den()) * t.den())
    }

    /// The complex value at the context's precision.
    pub fn embed(&self, ctx: &PrecisionContext) -> Complex {
        if self.terms.len() <= 8 {
            let mut acc = Complex::zero(ctx);
            for t in &self.terms {
                acc += &t.embed(ctx);
            }
            return acc;
        }
        let table = RootTable::new(self.common_den(), ctx);
        self.embed_with(&table, ctx)
    }

    /// The complex value, looking roots up in `table`, whose denominator
    /// must be a multiple of every term's denominator.
    pub fn embed_with(&self, table: &RootTable, ctx: &PrecisionContext) -> Complex {
        let mut counts: HashMap<i64, i64> = HashMap::new();
        for t in &self.terms {
            *counts.entry(table.index(*t)).or_default() += 1;
        }
        let mut keys: Vec<_> = counts.into_iter().filter(|&(_, c)| c != 0).collect();
        keys.sort_unstable();
        let mut acc = Complex::zero(ctx);
        for (j, c) in keys {
            let z = table.get(j);
            if c == 1 {
                acc += &z;
            } else {
                acc += &z.scale(&ctx.real(c));
            }
        }
        acc
    }

    /// Double-precision value, for diagnostics.
    pub fn embed_f64(&self) -> (f64, f64) {
        self.terms.iter().fold((0.0, 0.0), |(re, im), t| {
            let theta = std::f64::consts::TAU * t.num() as f64 / t.den() as f64;
            (re + theta.cos(), im + theta.sin())
        })
    }

    pub fn abs_f64(&self) -> f64 {
        let (re, im) = self.embed_f64();
        re.hypot(im)
    }
}

/// `e^{2 pi i j / den}` for all `j`, from `O(sqrt den)` stored powers.
#[derive(Clone, Debug)]
pub struct RootTable {
    den: i64,
    step: i64,
    baby: Vec<Complex>,
    giant: Vec<Complex>,
}

impl RootTable {
    pub fn new(den: i64, ctx: &PrecisionContext) -> Self {
        assert!(den >= 1);
        let step = ((den as f64).sqrt().ceil() as i64).max(1);
        let baby = (0..step).map(|j| RootOfUnity::new(j as i128, den as i128).embed(ctx)).collect();
        let giant = (0..=den / step)
            .map(|j| RootOfUnity::new((j * step) as i128, den as i128).embed(ctx))
            .collect();
        Self {
            den,
            step,
            baby,
            giant,
        }
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    /// Index of `r` in this table. Panics if the table cannot represent `r`.
    pub fn index(&self, r: RootOfUnity) -> i64 {
        assert!(self.den % r.den() == 0, "table denominator {} cannot hold {r}", self.den);
        r.num() * (self.den / r.den())
    }

    pub fn get(&self, j: i64) -> Complex {
        let j = j.rem_euclid(self.den);
        let b = &self.baby[(j % self.step) as usize];
        if j < self.step {
            return b.clone();
        }
        b * &self.giant[(j / self.step) as usize]
    }
}

fn units(k: i64) -> impl Iterator<Item = i64> {
    (0..k).filter(move |&h| gcd(h, k) == 1)
}

fn e_frac(num: i128, den: i128) -> RootOfUnity {
    RootOfUnity::new(num, den)
}

/// `K_k(n, m) = sum_h e^{(2 pi i/k)(-n h + m h')}` with `h h' = -1 (mod k)`.
pub fn classical_k(k: i64, n: i64, m: i64) -> Result<KloostermanValue> {
    check_k(k)?;
    let mut terms = Vec::new();
    for h in units(k) {
        let hp = (-mod_inverse(h, k)?).rem_euclid(k);
        terms.push(e_frac(-(n as i128) * h as i128 + m as i128 * hp as i128, k as i128));
    }
    Ok(KloostermanValue::from_terms(terms))
}

/// `A_k(n) = sum_h omega_{h,k} e^{-2 pi i n h / k}`.
pub fn rademacher_a(k: i64, n: i64) -> Result<KloostermanValue> {
    check_k(k)?;
    let mut terms = Vec::new();
    for h in units(k) {
        terms.push(omega(h, k)?.mul(e_frac(-(n as i128) * h as i128, k as i128)));
    }
    Ok(KloostermanValue::from_terms(terms))
}

/// `𝒦_k(n) = sum_h omega_{h,k} omega_{2h,k} omega_{6h,k} / omega_{3h,k}^3 e^{-2 pi i n h/k}`.
pub fn script_k(k: i64, n: i64) -> Result<KloostermanValue> {
    ScriptKTable::new(k)?.value(n)
}

/// Per-`k` multipliers of the modular sum, reusable across `n`.
#[derive(Clone, Debug)]
pub struct ScriptKTable {
    k: i64,
    rows: Vec<(i64, RootOfUnity)>,
}

impl ScriptKTable {
    pub fn new(k: i64) -> Result<Self> {
        check_k(k)?;
        let rows = units(k)
            .map(|h| script_k_multiplier(h, k).map(|w| (h, w)))
            .collect::<Result<_>>()?;
        Ok(Self { k, rows })
    }

    pub fn value(&self, n: i64) -> Result<KloostermanValue> {
        Ok(KloostermanValue::from_terms(
            self.rows
                .iter()
                .map(|&(h, w)| w.mul(e_frac(-(n as i128) * h as i128, self.k as i128)))
                .collect(),
        ))
    }
}

fn check_k(k: i64) -> Result<()> {
    if k < 1 {
        return Err(Error::Domain(format!("k must be positive, got {k}")));
    }
    Ok(())
}

/// Sign of the linear `nu` term in the phase of family 8.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum K8Phase {
    /// `e^{(pi i/k)(-3 nu^2 + nu) h'}`, as in the sibling families.
    #[default]
    Plus,
    /// `e^{(pi i/k)(-3 nu^2 - nu) h'}`.
    Minus,
}

impl K8Phase {
    pub fn sign(self) -> i64 {
        match self {
            Self::Plus => 1,
            Self::Minus => -1,
        }
    }

    pub fn from_sign(s: i64) -> Result<Self> {
        match s {
            1 => Ok(Self::Plus),
            -1 => Ok(Self::Minus),
            _ => Err(Error::Domain(format!("k8 phase must be +1 or -1, got {s}"))),
        }
    }
}

/// One of the eight twisted families. Odd families carry a fixed phase,
/// even families a phase depending on `nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Family(u8);

impl Family {
    pub fn new(i: u8) -> Result<Self> {
        if (1..=8).contains(&i) {
            Ok(Self(i))
        } else {
            Err(Error::Domain(format!("family must be in 1..=8, got {i}")))
        }
    }

    pub fn all() -> impl Iterator<Item = Family> {
        (1..=8).map(Family)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn case(self) -> RatioCase {
        match self.0 {
            1 | 2 => RatioCase::Div6,
            3 | 4 => RatioCase::Gcd2,
            5 | 6 => RatioCase::Gcd3,
            _ => RatioCase::Gcd1,
        }
    }

    pub fn has_nu(self) -> bool {
        self.0 % 2 == 0
    }

    /// `m h'` enters the phase as `m h' / divisor`.
    fn m_divisor(self) -> i128 {
        match self.case() {
            RatioCase::Div6 => 1,
            RatioCase::Gcd2 => 3,
            RatioCase::Gcd3 => 2,
            RatioCase::Gcd1 => 6,
        }
    }
}

/// The cusp pairs and multiplier ratios of one `k`, shared by every family
/// of its class.
#[derive(Clone, Debug)]
pub struct FamilyTable {
    case: RatioCase,
    k: i64,
    rows: Vec<(CuspPair, RootOfUnity)>,
}

impl FamilyTable {
    pub fn new(case: RatioCase, k: i64) -> Result<Self> {
        check_k(k)?;
        if !case.accepts(k) {
            return Err(Error::ClassMismatch {
                k,
                what: format!("ratio case {}", case.name()),
            });
        }
        let rows = units(k)
            .map(|h| {
                let pair = make_cusp_pair(h, k, case.divisibility())?;
                Ok((pair, ratio_from_omega(case, &pair)?))
            })
            .collect::<Result<_>>()?;
        Ok(Self { case, k, rows })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn case(&self) -> RatioCase {
        self.case
    }

    /// Denominator that every term of every family at this `k` divides.
    pub fn common_den(&self) -> i64 {
        72 * self.k
    }

    pub fn value(
        &self,
        family: Family,
        nu: Option<i64>,
        n: i64,
        m: i64,
        k8: K8Phase,
    ) -> Result<KloostermanValue> {
        if family.case() != self.case {
            return Err(Error::ClassMismatch {
                k: self.k,
                what: format!("family {}", family.index()),
            });
        }
        let k = self.k as i128;
        let nu = match (family.has_nu(), nu) {
            (true, Some(nu)) => Some(nu as i128),
            (false, None) => None,
            (true, None) => {
                return Err(Error::Domain(format!("family {} needs nu", family.index())))
            }
            (false, Some(_)) => {
                return Err(Error::Domain(format!("family {} takes no nu", family.index())))
            }
        };
        let div = family.m_divisor();
        let mut terms = Vec::with_capacity(self.rows.len());
        for (pair, ratio) in &self.rows {
            let (h, hp) = (pair.h as i128, pair.hprime as i128);
            debug_assert_eq!(hp % div, 0);
            let phase = match (family.index(), nu) {
                // (1 - 3k/2) h'/4
                (1 | 3, _) => e_frac((2 - 3 * k) * hp, 8),
                // 3 h'/(8k)
                (5 | 7, _) => e_frac(3 * hp, 8 * k),
                (8, Some(nu)) => e_frac((-3 * nu * nu + k8.sign() as i128 * nu) * hp, 2 * k),
                (_, Some(nu)) => e_frac((-3 * nu * nu + nu) * hp, 2 * k),
                _ => unreachable!("checked above"),
            };
            let main = e_frac(-(n as i128) * h + m as i128 * (hp / div), k);
            terms.push(ratio.mul(phase).mul(main));
        }
        Ok(KloostermanValue::from_terms(terms))
    }

    /// Family values for every `nu` in `1..=k`.
    pub fn values_all_nu(&self, family: Family, n: i64, m: i64, k8: K8Phase) -> Result<Vec<KloostermanValue>> {
        (1..=self.k).map(|nu| self.value(family, Some(nu), n, m, k8)).collect()
    }
}

/// `K^[family]_k(nu; n, m)`, with the default family-8 phase.
pub fn family_k(family: Family, k: i64, nu: Option<i64>, n: i64, m: i64) -> Result<KloostermanValue> {
    FamilyTable::new(family.case(), k)?.value(family, nu, n, m, K8Phase::Plus)
}

/// Shifted arguments with `K^[family](n, m) = prefactor * K_k(n', m')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub n_prime: i64,
    pub m_prime: i64,
    pub prefactor: RootOfUnity,
}

fn exact_int(num: i128, den: i128, what: &str) -> Result<i64> {
    if num % den != 0 {
        return Err(Error::NonIntegralShift(format!("{what} = {num}/{den}")));
    }
    Ok((num / den) as i64)
}

/// Rewrites families 1, 3 and 7 as classical sums.
pub fn reduce_to_classical(family: Family, k: i64, n: i64, m: i64) -> Result<Reduction> {
    check_k(k)?;
    if !family.case().accepts(k) {
        return Err(Error::ClassMismatch {
            k,
            what: format!("family {}", family.index()),
        });
    }
    let (kk, n128, m128) = (k as i128, n as i128, m as i128);
    match family.index() {
        1 => Ok(Reduction {
            // n - (5k+18)k/72, m + (k/4)(1 - 3k/2)
            n_prime: exact_int(72 * n128 - (5 * kk + 18) * kk, 72, "n'")?,
            m_prime: exact_int(8 * m128 + kk * (2 - 3 * kk), 8, "m'")?,
            prefactor: RootOfUnity::MINUS_ONE,
        }),
        3 => {
            // [3]_k (n - k(k+2)/8), m - (k^2+2)/6 + (3k/4)(1 - 3k/2)
            let shift = exact_int(8 * n128 - kk * (kk + 2), 8, "n - k(k+2)/8")?;
            let inv3 = mod_inverse(3, k)? as i128;
            Ok(Reduction {
                n_prime: (inv3 * shift as i128).rem_euclid(kk) as i64,
                m_prime: exact_int(24 * m128 - 4 * (kk * kk + 2) + 9 * kk * (2 - 3 * kk), 24, "m'")?,
                prefactor: RootOfUnity::ONE,
            })
        }
        7 => {
            // (-1)^{(k-1)/2}; n [24]_k, (5k^2 + 22)/3 + 4m
            let inv24 = mod_inverse(24, k)? as i128;
            Ok(Reduction {
                n_prime: (n128 * inv24).rem_euclid(kk) as i64,
                m_prime: exact_int(5 * kk * kk + 22 + 12 * m128, 3, "m'")?,
                prefactor: if (k - 1) / 2 % 2 == 0 {
                    RootOfUnity::ONE
                } else {
                    RootOfUnity::MINUS_ONE
                },
            })
        }
        i => Err(Error::Domain(format!("family {i} has no classical reduction"))),
    }
}

/// One row of the bound diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub family: u8,
    pub k: i64,
    pub n: i64,
    pub nu: Option<i64>,
    pub abs_value: f64,
    pub ratio: f64,
}

/// `|K| / (n^{1/3} k^{2/3 + epsilon})` for `k <= k_max` in the family's
/// class, `1 <= n <= n_max`, every `nu`, and `m = 0`.
pub fn bound_report(family: Family, k_max: i64, n_max: i64, epsilon: f64) -> Result<Vec<BoundRow>> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let mut rows = Vec::new();
    for k in (1..=k_max).filter(|&k| family.case().accepts(k)) {
        let table = FamilyTable::new(family.case(), k)?;
        let nus: Vec<Option<i64>> = if family.has_nu() {
            (1..=k).map(Some).collect()
        } else {
            vec![None]
        };
        for n in 1..=n_max {
            let scale = (n as f64).cbrt() * (k as f64).powf(2.0 / 3.0 + epsilon);
            for &nu in &nus {
                let abs_value = table.value(family, nu, n, 0, K8Phase::Plus)?.abs_f64();
                rows.push(BoundRow {
                    family: family.index(),
                    k,
                    n,
                    nu,
                    abs_value,
                    ratio: abs_value / scale,
                });
            }
        }
    }
    Ok(rows)
}

pub fn max_ratio(rows: &[BoundRow]) -> f64 {
    rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
}

pub fn write_bound_csv<W: Write>(rows: &[BoundRow], mut out: W) -> io::Result<()> {
    writeln!(out, "family,k,n,nu,abs_value,ratio")?;
    for r in rows {
        let nu = r.nu.map(|v| v.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{},{},{:.12e},{:.12e}", r.family, r.k, r.n, nu, r.abs_value, r.ratio)?;
    }
    Ok(())
}

/// Complex difference of two embedded sums, as an `f64`.
pub fn embedded_distance(a: &KloostermanValue, b: &KloostermanValue, ctx: &PrecisionContext) -> Float {
    (&a.embed(ctx) - &b.embed(ctx)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_context;

    fn phi(k: i64) -> usize {
        units(k).count()
    }

    #[test]
    fn classical_examples() {
        let ctx = make_context(128).unwrap();
        assert_eq!(classical_k(1, 5, 7).unwrap().terms(), &[RootOfUnity::ONE]);
        let v = classical_k(2, 1, 1).unwrap().embed(&ctx);
        assert!((&v - &Complex::one(&ctx)).abs() < 1e-36);
        let v = classical_k(6, 0, 0).unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.terms().iter().all(|t| t.is_one()));
    }

    #[test]
    fn classical_invariants() {
        for k in 1..=30 {
            for n in -3..6 {
                for m in -3..6 {
                    let v = classical_k(k, n, m).unwrap();
                    assert_eq!(v.len(), phi(k));
                    assert!(v.abs_f64() <= phi(k) as f64 + 1e-9);
                    assert!(v.same_terms(&classical_k(k, n + k, m).unwrap()));
                    assert!(v.same_terms(&classical_k(k, n, m + k).unwrap()));
                }
            }
        }
    }

    #[test]
    fn rademacher_a_examples() {
        for n in 1..10 {
            assert_eq!(rademacher_a(1, n).unwrap().terms(), &[RootOfUnity::ONE]);
        }
        let a = rademacher_a(2, 1).unwrap();
        assert_eq!(a.terms(), &[omega(1, 2).unwrap().mul(RootOfUnity::MINUS_ONE)]);
    }

    #[test]
    fn script_k_examples() {
        assert_eq!(script_k(1, 3).unwrap().terms(), &[RootOfUnity::ONE]);
        assert!(script_k(4, 1).is_err());
        let lo = make_context(128).unwrap();
        let hi = make_context(256).unwrap();
        let v = script_k(5, 1).unwrap();
        let mut direct = Complex::zero(&hi);
        for h in 1..5 {
            let w = script_k_multiplier(h, 5).unwrap();
            direct += &w.embed(&hi).div(&RootOfUnity::new(h as i128, 5).embed(&hi));
        }
        let d = (&v.embed(&lo) - &direct).abs();
        assert!(d < 1e-35);
        assert!(v.abs_f64() <= 4.0 + 1e-12);
    }

    #[test]
    fn root_table_matches_direct_embedding() {
        let ctx = make_context(160).unwrap();
        let table = RootTable::new(72 * 35, &ctx);
        for j in [0, 1, 49, 50, 51, 1000, 2519] {
            let direct = RootOfUnity::new(j as i128, 2520).embed(&ctx);
            assert!((&table.get(j) - &direct).abs() < 1e-45);
        }
        let v = family_k(Family::new(8).unwrap(), 35, Some(4), 7, 0).unwrap();
        let mut direct = Complex::zero(&ctx);
        for t in v.terms() {
            direct += &t.embed(&ctx);
        }
        assert!((&v.embed(&ctx) - &direct).abs() < 1e-44);
    }

    #[test]
    fn family_examples() {
        let f8 = Family::new(8).unwrap();
        let v = family_k(f8, 1, Some(1), 5, 0).unwrap();
        assert_eq!(v.len(), 1);
        assert!((v.abs_f64() - 1.0).abs() < 1e-15);

        // Family 4, k=2, nu=1, n=1: h=1, h'=3, ratio * e(-2*3/4) * e(-1/2).
        let f4 = Family::new(4).unwrap();
        let v = family_k(f4, 2, Some(1), 1, 0).unwrap();
        let pair = make_cusp_pair(1, 2, 3).unwrap();
        let ratio = ratio_from_omega(RatioCase::Gcd2, &pair).unwrap();
        let expect = ratio.mul(RootOfUnity::new(-2 * 3, 4)).mul(RootOfUnity::new(-1, 2));
        assert_eq!(v.terms(), &[expect]);

        assert!(family_k(f4, 3, Some(1), 1, 0).is_err());
        assert!(family_k(f4, 2, None, 1, 0).is_err());
        assert!(family_k(Family::new(3).unwrap(), 2, Some(1), 1, 0).is_err());
        assert!(Family::new(9).is_err());
    }

    #[test]
    fn family_values_ignore_h_prime_lift() {
        // Shifting h' by 2 d k leaves every phase unchanged.
        for fam in Family::all() {
            let case = fam.case();
            for k in (1..=24).filter(|&k| case.accepts(k)) {
                let table = FamilyTable::new(case, k).unwrap();
                let mut shifted = table.clone();
                for (pair, _) in &mut shifted.rows {
                    pair.hprime += 2 * pair.d * k;
                }
                let nu = fam.has_nu().then_some(k / 2 + 1);
                let a = table.value(fam, nu, 3, 2, K8Phase::Plus).unwrap();
                let b = shifted.value(fam, nu, 3, 2, K8Phase::Plus).unwrap();
                assert_eq!(a, b, "family {} k {k}", fam.index());
            }
        }
    }

    #[test]
    fn reductions_match_direct_sums() {
        let ctx = make_context(128).unwrap();
        for f in [1u8, 3, 7] {
            let fam = Family::new(f).unwrap();
            for k in (1..=50).filter(|&k| fam.case().accepts(k)) {
                let table = FamilyTable::new(fam.case(), k).unwrap();
                for n in 0..=10 {
                    for m in 0..=10 {
                        let red = reduce_to_classical(fam, k, n, m).unwrap();
                        let lhs = table.value(fam, None, n, m, K8Phase::Plus).unwrap();
                        let rhs = classical_k(k, red.n_prime, red.m_prime).unwrap().scaled(red.prefactor);
                        let d = embedded_distance(&lhs, &rhs, &ctx);
                        assert!(d < 1e-30 * phi(k) as f64, "family {f} k {k} n {n} m {m}: {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn reduction_examples() {
        let r = reduce_to_classical(Family::new(1).unwrap(), 6, 0, 0).unwrap();
        assert_eq!((r.n_prime, r.m_prime), (-4, -12));
        assert!(reduce_to_classical(Family::new(2).unwrap(), 6, 0, 0).is_err());
        assert!(reduce_to_classical(Family::new(7).unwrap(), 6, 0, 0).is_err());
    }

    #[test]
    fn bound_report_shape() {
        let f4 = Family::new(4).unwrap();
        let rows = bound_report(f4, 20, 20, 0.01).unwrap();
        let worst = max_ratio(&rows);
        assert!(worst.is_finite() && worst <= 100.0);
        let looser = max_ratio(&bound_report(f4, 20, 20, 0.2).unwrap());
        assert!(looser <= worst);
        for fam in Family::all() {
            for r in bound_report(fam, 1, 5, 0.01).unwrap() {
                assert!(r.ratio <= 1.0 + 1e-12);
            }
        }
        let mut buf = Vec::new();
        write_bound_csv(&rows[..2], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("family,k,n,nu,abs_value,ratio\n4,2,1,1,"));
        assert!(bound_report(f4, 5, 5, 0.0).is_err());
    }
}
