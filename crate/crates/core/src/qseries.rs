//! Truncated power series with exact integer coefficients, and the
//! generating functions built from them.
//!
//! Everything here is exact. Rational prefactors such as the `1/4` in
//! `g1` are carried next to an integral series instead of being folded
//! into the coefficients.

use std::io::{self, Write};

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Upper limit for [`p2_enumerate`].
pub const ENUMERATION_CAP: u64 = 200;

/// Largest truncation the oracle tables accept.
pub const ORACLE_CAP: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSeries {
    coeffs: Vec<Integer>,
}

impl IntegerSeries {
    pub fn zero(trunc: usize) -> Self {
        Self {
            coeffs: vec![Integer::new(); trunc + 1],
        }
    }

    pub fn one(trunc: usize) -> Self {
        Self::monomial(0, 1, trunc)
    }

    /// `c q^e`, truncated at `trunc`.
    pub fn monomial(e: usize, c: i64, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if e <= trunc {
            s.coeffs[e] = Integer::from(c);
        }
        s
    }

    /// Panics if `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<Integer>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        Self { coeffs }
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &Integer {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Integer> {
        self.coeffs
    }

    pub fn truncate(&self, trunc: usize) -> Self {
        Self {
            coeffs: self.coeffs[..=trunc.min(self.trunc())].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.trunc().min(other.trunc());
        Self {
            coeffs: (0..=t)
                .map(|i| Integer::from(&self.coeffs[i] + &other.coeffs[i]))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let t = self.trunc().min(other.trunc());
        Self {
            coeffs: (0..=t)
                .map(|i| Integer::from(&self.coeffs[i] - &other.coeffs[i]))
                .collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| Integer::from(a * c)).collect(),
        }
    }

    /// Schoolbook product; zero coefficients of `self` are skipped, which
    /// makes products with sparse series cheap.
    pub fn mul(&self, other: &Self) -> Self {
        let t = self.trunc().min(other.trunc());
        let mut out = Self::zero(t);
        for (i, a) in self.coeffs[..=t].iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs[..=t - i].iter().enumerate() {
                if *b != 0 {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    /// Multiplicative inverse, for series with constant term `±1`.
    ///
    /// Uses `c'_0 = 1/c_0`, `c'_n = -(1/c_0) sum_{j=1}^{n} c_j c'_{n-j}`,
    /// iterating only over nonzero `c_j`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        let unit: i64 = if *c0 == 1 {
            1
        } else if *c0 == -1 {
            -1
        } else {
            return Err(Error::SeriesNotInvertible(c0.to_string()));
        };
        let support: Vec<usize> = (1..=self.trunc()).filter(|&j| self.coeffs[j] != 0).collect();
        let mut inv = Self::zero(self.trunc());
        inv.coeffs[0] = Integer::from(unit);
        for n in 1..=self.trunc() {
            let mut acc = Integer::new();
            for &j in support.iter().take_while(|&&j| j <= n) {
                acc += &self.coeffs[j] * &inv.coeffs[n - j];
            }
            inv.coeffs[n] = -acc * unit;
        }
        Ok(inv)
    }

    /// In-place multiplication by `1 + s q^e`, `s = ±1`.
    pub fn mul_binomial(&mut self, e: usize, s: i32) {
        assert!(e >= 1);
        for i in (e..=self.trunc()).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            if s > 0 {
                hi[0] += &lo[i - e];
            } else {
                hi[0] -= &lo[i - e];
            }
        }
    }

    /// In-place division by `1 + s q^e`, `s = ±1`.
    pub fn div_binomial(&mut self, e: usize, s: i32) {
        assert!(e >= 1);
        for i in e..=self.trunc() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            if s > 0 {
                hi[0] -= &lo[i - e];
            } else {
                hi[0] += &lo[i - e];
            }
        }
    }
}

/// A series with an exact rational prefactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledSeries {
    pub scale: Rational,
    pub series: IntegerSeries,
}

impl ScaledSeries {
    pub fn coeff(&self, i: usize) -> Rational {
        Rational::from(&self.scale * self.series.coeff(i))
    }
}

fn check_sign(sign: i32) -> Result<i32> {
    match sign {
        1 | -1 => Ok(sign),
        _ => Err(Error::Domain(format!("sign must be +1 or -1, got {sign}"))),
    }
}

/// Exponents `shift, shift + step, ...` up to `trunc`.
fn factor_exponents(shift: usize, step: usize, trunc: usize) -> impl Iterator<Item = usize> {
    (0..).map(move |j| shift + j * step).take_while(move |&e| e <= trunc)
}

/// `(sign q^shift; q^step)_inf = prod_{j>=0} (1 - sign q^{shift + j step})`.
pub fn pochhammer_inf(shift: usize, step: usize, sign: i32, trunc: usize) -> Result<IntegerSeries> {
    let sign = check_sign(sign)?;
    if shift == 0 || step == 0 {
        return Err(Error::Domain(format!(
            "infinite product needs shift, step >= 1, got shift={shift}, step={step}"
        )));
    }
    let mut s = IntegerSeries::one(trunc);
    for e in factor_exponents(shift, step, trunc) {
        s.mul_binomial(e, -sign);
    }
    Ok(s)
}

/// Divides `s` in place by `(sign q^shift; q^step)_inf`.
fn div_pochhammer_inf(s: &mut IntegerSeries, shift: usize, step: usize, sign: i32) {
    for e in factor_exponents(shift, step, s.trunc()) {
        s.div_binomial(e, -sign);
    }
}

fn mul_pochhammer_inf(s: &mut IntegerSeries, shift: usize, step: usize, sign: i32) {
    for e in factor_exponents(shift, step, s.trunc()) {
        s.mul_binomial(e, -sign);
    }
}

/// `p(0), ..., p(trunc)` as the coefficients of `1 / (q;q)_inf`.
pub fn partition_counts(trunc: usize) -> Vec<Integer> {
    pochhammer_inf(1, 1, 1, trunc)
        .and_then(|s| s.inverse())
        .expect("(q;q)_inf has constant term 1")
        .into_coeffs()
}

/// `chi(q) = sum_{n>=0} (-q;q)_n q^{n^2} / (-q^3;q^3)_n`.
pub fn chi_series(trunc: usize) -> IntegerSeries {
    let mut total = IntegerSeries::zero(trunc);
    for n in (0..).take_while(|n| n * n <= trunc) {
        let mut t = IntegerSeries::monomial(n * n, 1, trunc);
        for j in 1..=n {
            t.mul_binomial(j, 1);
            if 3 * j <= trunc {
                t.div_binomial(3 * j, 1);
            }
        }
        total = total.add(&t);
    }
    total
}

/// `f(q) = 1 + sum_{n>=1} q^{n^2} / (-q;q)_n^2`; coefficients `alpha(n)`.
pub fn f_series(trunc: usize) -> IntegerSeries {
    let mut total = IntegerSeries::one(trunc);
    for n in (1..).take_while(|n| n * n <= trunc) {
        let mut t = IntegerSeries::monomial(n * n, 1, trunc);
        for j in 1..=n.min(trunc) {
            t.div_binomial(j, 1);
            t.div_binomial(j, 1);
        }
        total = total.add(&t);
    }
    total
}

/// `omega(q) = sum_{n>=0} q^{2n(n+1)} / (q;q^2)_{n+1}^2`.
pub fn omega_mock_series(trunc: usize) -> IntegerSeries {
    let mut total = IntegerSeries::zero(trunc);
    for n in (0..).take_while(|n| 2 * n * (n + 1) <= trunc) {
        let mut t = IntegerSeries::monomial(2 * n * (n + 1), 1, trunc);
        for j in 0..=n {
            let e = 2 * j + 1;
            if e <= trunc {
                t.div_binomial(e, -1);
                t.div_binomial(e, -1);
            }
        }
        total = total.add(&t);
    }
    total
}

/// `G2(q) = (-q^3;q^3)_inf / (q^2;q^2)_inf * chi(q)`.
pub fn g2_full_series(trunc: usize) -> IntegerSeries {
    let mut s = chi_series(trunc);
    mul_pochhammer_inf(&mut s, 3, 3, -1);
    div_pochhammer_inf(&mut s, 2, 2, 1);
    s
}

/// `p2(0), ..., p2(trunc)`.
pub fn p2_counts(trunc: usize) -> Vec<Integer> {
    g2_full_series(trunc).into_coeffs()
}

/// Counts partitions of `n` whose set of parts contains no two consecutive
/// integers, by recursion on the largest admissible part.
pub fn p2_enumerate(n: u64) -> Result<Integer> {
    if n > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    let n = n as usize;
    // table[j][m]: partitions of m with parts <= j and no consecutive parts.
    let mut table: Vec<Vec<Integer>> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut row = vec![Integer::new(); n + 1];
        row[0] = Integer::from(1);
        for m in 1..=n {
            if j == 0 {
                continue;
            }
            let mut acc = table[j - 1][m].clone();
            let mut used = j;
            while used <= m {
                acc += if j >= 2 {
                    &table[j - 2][m - used]
                } else if m == used {
                    &row[0]
                } else {
                    &table[0][m - used]
                };
                used += j;
            }
            row[m] = acc;
        }
        table.push(row);
    }
    Ok(table[n][n].clone())
}

/// `xi(q) = (-q^3;q^3)_inf / (q^2;q^2)_inf`; coefficients `r(n)`.
pub fn xi_series(trunc: usize) -> IntegerSeries {
    let mut s = pochhammer_inf(3, 3, -1, trunc).expect("valid product");
    div_pochhammer_inf(&mut s, 2, 2, 1);
    s
}

/// `g1 = (1/4) f(q) (q^6;q^6)_inf / ((q^2;q^2)_inf (q^3;q^3)_inf)`.
pub fn g1_series(trunc: usize) -> ScaledSeries {
    let mut s = f_series(trunc);
    mul_pochhammer_inf(&mut s, 6, 6, 1);
    div_pochhammer_inf(&mut s, 2, 2, 1);
    div_pochhammer_inf(&mut s, 3, 3, 1);
    ScaledSeries {
        scale: Rational::from((1, 4)),
        series: s,
    }
}

/// `g2 = (3/4) (q^3;q^3)_inf^3 / ((q;q)_inf (q^2;q^2)_inf (q^6;q^6)_inf)`.
pub fn g2_series(trunc: usize) -> ScaledSeries {
    let mut s = pochhammer_inf(3, 3, 1, trunc).expect("valid product");
    mul_pochhammer_inf(&mut s, 3, 3, 1);
    mul_pochhammer_inf(&mut s, 3, 3, 1);
    div_pochhammer_inf(&mut s, 1, 1, 1);
    div_pochhammer_inf(&mut s, 2, 2, 1);
    div_pochhammer_inf(&mut s, 6, 6, 1);
    ScaledSeries {
        scale: Rational::from((3, 4)),
        series: s,
    }
}

/// True iff `G2 = g1 + g2` coefficientwise through `q^trunc`.
pub fn decomposition_check(trunc: usize) -> bool {
    decomposition_mismatches(trunc).is_empty()
}

/// Exponents at which `G2` and `g1 + g2` differ.
pub fn decomposition_mismatches(trunc: usize) -> Vec<usize> {
    let g = g2_full_series(trunc);
    let a = g1_series(trunc);
    let b = g2_series(trunc);
    // Compare 4 G2 with 4 g1 + 3 * (4/3) g2, all integral.
    let lhs = g.scale(4);
    let rhs = a.series.add(&b.series.scale(3));
    (0..=trunc).filter(|&i| lhs.coeff(i) != rhs.coeff(i)).collect()
}

/// One row of the oracle table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRow {
    pub n: usize,
    pub p: Integer,
    pub p2: Integer,
    /// `4 a(n)`, where `a(n)` are the coefficients of `g1`.
    pub a4: Integer,
    pub r: Integer,
}

pub fn oracle_table(trunc: usize) -> Result<Vec<OracleRow>> {
    if trunc > ORACLE_CAP {
        return Err(Error::CapExceeded {
            n: trunc as u64,
            cap: ORACLE_CAP as u64,
        });
    }
    let p = partition_counts(trunc);
    let p2 = p2_counts(trunc);
    let a4 = g1_series(trunc).series.into_coeffs();
    let r = xi_series(trunc).into_coeffs();
    Ok((0..=trunc)
        .map(|n| OracleRow {
            n,
            p: p[n].clone(),
            p2: p2[n].clone(),
            a4: a4[n].clone(),
            r: r[n].clone(),
        })
        .collect())
}

pub fn write_oracle_csv<W: Write>(rows: &[OracleRow], mut out: W) -> io::Result<()> {
    writeln!(out, "n,p(n),p2(n),a4(n),r(n)")?;
    for row in rows {
        writeln!(out, "{},{},{},{},{}", row.n, row.p, row.p2, row.a4, row.r)?;
    }
    Ok(())
}
