//! Truncated power series in `t` over the coefficient ring, and the shifted
//! Sheffer identities.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::coeffring::{parse_rational, rat, MultiPoly, Rational, RingError, Var};
use crate::partitions::enumerate_partitions;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series has no invertible constant term")]
    NotInvertible,
    #[error("exp needs a series with zero constant term")]
    ExpConstantTerm,
    #[error("log needs a series with constant term 1")]
    LogConstantTerm,
    #[error("inner series of a composition must have zero constant term")]
    ComposeConstantTerm,
    #[error("reversion needs zero constant term and an invertible rational linear coefficient")]
    NotReversible,
    #[error("cannot parse series literal: {0}")]
    Parse(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `c₀ + c₁t + … + c_N t^N`; coefficients beyond `N` are unknown, not zero.
#[derive(Clone, Debug)]
pub struct TruncSeries {
    coeffs: Vec<MultiPoly>,
}

impl TruncSeries {
    /// Coefficients `c₀…c_N` of a series of order `N`; missing entries are zero
    /// and extra entries are dropped.
    pub fn new(mut coeffs: Vec<MultiPoly>, order: usize) -> Self {
        coeffs.resize(order + 1, MultiPoly::zero());
        TruncSeries { coeffs }
    }

    pub fn from_rationals(coeffs: &[Rational], order: usize) -> Self {
        Self::new(coeffs.iter().cloned().map(MultiPoly::constant).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn constant(c: MultiPoly, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(MultiPoly::one(), order)
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        Self::new(vec![MultiPoly::zero(), MultiPoly::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &MultiPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(
            self.coeffs[..=order.min(self.order())].to_vec(),
            order.min(self.order()),
        )
    }

    /// Coefficient-wise equality through `t^order`; both series must reach that order.
    pub fn agrees_to(&self, other: &TruncSeries, order: usize) -> bool {
        order <= self.order() && order <= other.order() && (0..=order).all(|k| self.coeffs[k] == other.coeffs[k])
    }

    /// First `k ≤ order` where the coefficients differ.
    pub fn first_mismatch(&self, other: &TruncSeries, order: usize) -> Option<usize> {
        let order = order.min(self.order()).min(other.order());
        (0..=order).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    pub fn add(&self, other: &TruncSeries) -> Self {
        let n = self.order().min(other.order());
        Self::new((0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(), n)
    }

    pub fn sub(&self, other: &TruncSeries) -> Self {
        let n = self.order().min(other.order());
        Self::new((0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(), n)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect(), self.order())
    }

    pub fn mul(&self, other: &TruncSeries) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![MultiPoly::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if !other.coeffs[j].is_zero() {
                    out[i + j] += &(&self.coeffs[i] * &other.coeffs[j]);
                }
            }
        }
        Self::new(out, n)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.scale(c)).collect(), self.order())
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * p).collect(), self.order())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.order());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Multiplicative inverse; the constant term must be a nonzero rational.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.coeffs[0].as_constant().ok_or(SeriesError::NotInvertible)?;
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv0 = Rational::one() / c0;
        let n = self.order();
        let mut out: Vec<MultiPoly> = vec![MultiPoly::constant(inv0.clone())];
        for k in 1..=n {
            let mut acc = MultiPoly::zero();
            for j in 1..=k {
                acc += &(&self.coeffs[j] * &out[k - j]);
            }
            out.push(acc.scale(&-inv0.clone()));
        }
        Ok(Self::new(out, n))
    }

    pub fn div(&self, other: &TruncSeries) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `d/dt`; the order drops by one (stays 0 for order 0).
    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        Self::new((1..=n).map(|k| self.coeffs[k].scale(&rat(k as i64))).collect(), n - 1)
    }

    /// Antiderivative with zero constant term; the order rises by one.
    pub fn integral(&self) -> Self {
        let n = self.order();
        let mut out = vec![MultiPoly::zero()];
        for k in 0..=n {
            out.push(self.coeffs[k].scale(&(Rational::one() / rat(k as i64 + 1))));
        }
        Self::new(out, n + 1)
    }

    /// `exp` via `n·Eₙ = Σ k·Sₖ·E_{n−k}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpConstantTerm);
        }
        let n = self.order();
        let mut e: Vec<MultiPoly> = vec![MultiPoly::one()];
        for m in 1..=n {
            let mut acc = MultiPoly::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc += &(&self.coeffs[k] * &e[m - k]).scale(&rat(k as i64));
                }
            }
            e.push(acc.scale(&(Rational::one() / rat(m as i64))));
        }
        Ok(Self::new(e, n))
    }

    /// `exp(Σ aᵢtⁱ) = Σ_λ a_λ/λ!·t^{‖λ‖}`, summed over partitions explicitly.
    pub fn exp_by_partitions(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpConstantTerm);
        }
        let n = self.order();
        let mut out = vec![MultiPoly::zero(); n + 1];
        for (k, slot) in out.iter_mut().enumerate() {
            for lambda in enumerate_partitions(k as u32) {
                let mut term = MultiPoly::one();
                for (i, m) in lambda.multiplicities() {
                    term = &term * &self.coeffs[i as usize].pow(m);
                }
                let w = Rational::one() / Rational::from_integer(lambda.factorial());
                *slot += &term.scale(&w);
            }
        }
        Ok(Self::new(out, n))
    }

    /// `log S = ∫ S′/S`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != MultiPoly::one() {
            return Err(SeriesError::LogConstantTerm);
        }
        let n = self.order();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        let q = self.derivative().div(&self.truncate(n - 1))?;
        Ok(q.integral())
    }

    /// `outer(inner(t))` by Horner's rule.
    pub fn compose(&self, inner: &TruncSeries) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::ComposeConstantTerm);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse by Newton iteration, doubling the precision each step.
    pub fn reversion(&self) -> Result<Self, SeriesError> {
        let n = self.order();
        if !self.coeffs[0].is_zero() || n == 0 {
            return Err(SeriesError::NotReversible);
        }
        let c1 = self.coeffs[1].as_constant().ok_or(SeriesError::NotReversible)?;
        if c1.is_zero() {
            return Err(SeriesError::NotReversible);
        }
        let deriv = self.derivative();
        // r ≡ t/c₁ is correct through order 1.
        let mut r = Self::t(n).scale(&(Rational::one() / c1));
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            let r_p = r.truncate(prec);
            let residual = self.truncate(prec).compose(&r_p)?.sub(&Self::t(prec));
            // f′ is only known through order n−1; the residual has valuation ≥ 2,
            // so the missing top coefficient never reaches the correction.
            let df_r = Self::new(deriv.compose(&r)?.coeffs, n).truncate(prec);
            let correction = residual.mul(&df_r.inverse()?);
            r = Self::new(r_p.sub(&correction).coeffs, n);
        }
        Ok(Self::new(r.coeffs, n))
    }

    /// Parses `c0 + c1*t + c2*t^2 + …` with rational coefficients.
    pub fn parse(s: &str, order: usize) -> Result<Self, SeriesError> {
        let err = || SeriesError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut coeffs = vec![Rational::zero(); order + 1];
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && !cur.is_empty() {
                terms.push((negative, std::mem::take(&mut cur)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                negative = ch == '-';
            } else if ch == '+' || ch == '-' {
                return Err(err());
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err());
        }
        terms.push((negative, cur));
        for (negative, term) in terms {
            let (coef, power) = match term.find('t') {
                None => (parse_rational(&term).ok_or_else(err)?, 0usize),
                Some(pos) => {
                    let head = term[..pos].trim_end_matches('*');
                    let tail = &term[pos + 1..];
                    let c = if head.is_empty() {
                        Rational::one()
                    } else {
                        parse_rational(head).ok_or_else(err)?
                    };
                    let p = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(err)?
                    };
                    (c, p)
                }
            };
            if power <= order {
                coeffs[power] += if negative { -coef } else { coef };
            }
        }
        Ok(Self::from_rationals(&coeffs, order))
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = match (c.len(), c.as_constant()) {
                (_, Some(r)) => r.to_string(),
                (1, None) => c.to_string(),
                _ => format!("({c})"),
            };
            let (neg, body) = match body.strip_prefix('-') {
                Some(rest) if c.as_constant().is_some() || c.len() == 1 => (true, rest.to_string()),
                _ => (false, body),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{body}")?,
                _ => {
                    if body != "1" {
                        write!(f, "{body}*")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

fn factorial_rat(k: usize) -> Rational {
    (1..=k).fold(Rational::one(), |acc, i| acc * rat(i as i64))
}

/// `pₖ(x)` and `sₖ(x)` for `k = 0…N`, as polynomials in [`Var::X`].
#[derive(Clone, Debug)]
pub struct ShefferTable {
    pub pk: Vec<MultiPoly>,
    pub sk: Vec<MultiPoly>,
}

fn check_sheffer_input(a: &TruncSeries, b: &TruncSeries) -> Result<(), SeriesError> {
    if !b.coeff(0).is_zero() {
        return Err(SeriesError::ExpConstantTerm);
    }
    if a.coeff(0).is_zero() {
        return Err(SeriesError::NotInvertible);
    }
    Ok(())
}

/// `Σ pₖ tᵏ/k! = exp(xB)` and `Σ sₖ tᵏ/k! = A·exp(xB)`.
pub fn sheffer_build(a: &TruncSeries, b: &TruncSeries, n: usize) -> Result<ShefferTable, SeriesError> {
    check_sheffer_input(a, b)?;
    let n = n.min(a.order()).min(b.order());
    let x = MultiPoly::var(Var::X);
    let e = b.truncate(n).mul_poly(&x).exp()?;
    let s = a.truncate(n).mul(&e);
    let pk = (0..=n).map(|k| e.coeff(k).scale(&factorial_rat(k))).collect();
    let sk = (0..=n).map(|k| s.coeff(k).scale(&factorial_rat(k))).collect();
    Ok(ShefferTable { pk, sk })
}

/// Outcome of checking both shifted Sheffer identities.
#[derive(Clone, Debug)]
pub struct ShefferReport {
    pub order: usize,
    pub p_identity_holds: bool,
    pub s_identity_holds: bool,
    pub first_mismatch: Option<String>,
}

impl ShefferReport {
    pub fn holds(&self) -> bool {
        self.p_identity_holds && self.s_identity_holds
    }
}

/// `W_B`, the compositional inverse of `t·exp(B(t))`.
pub fn lambert_w(b: &TruncSeries) -> Result<TruncSeries, SeriesError> {
    let n = b.order();
    TruncSeries::t(n).mul(&b.exp()?).reversion()
}

/// `Σ x·pₖ(x−k)/(x−k)·tᵏ/k!` and `Σ sₖ(x−k)·tᵏ/k!`.
pub fn shifted_sums(table: &ShefferTable) -> Result<(TruncSeries, TruncSeries), SeriesError> {
    let x = MultiPoly::var(Var::X);
    let n = table.pk.len() - 1;
    let mut p_side = Vec::new();
    let mut s_side = Vec::new();
    for k in 0..=n {
        let shift = &x - &MultiPoly::from_int(k as i64);
        let inv_fact = Rational::one() / factorial_rat(k);
        let pk_shift = table.pk[k].substitute(&Var::X, &shift);
        let quotient = (&x * &pk_shift).div_by_linear(&Var::X, &rat(k as i64))?;
        p_side.push(quotient.scale(&inv_fact));
        s_side.push(table.sk[k].substitute(&Var::X, &shift).scale(&inv_fact));
    }
    Ok((TruncSeries::new(p_side, n), TruncSeries::new(s_side, n)))
}

/// Computes both sides of the shifted identities and compares them coefficient-wise.
pub fn sheffer_shift_check(a: &TruncSeries, b: &TruncSeries, n: usize) -> Result<ShefferReport, SeriesError> {
    let table = sheffer_build(a, b, n)?;
    let n = table.pk.len() - 1;
    let (a, b) = (a.truncate(n), b.truncate(n));
    let (p_lhs, s_lhs) = shifted_sums(&table)?;

    let w = lambert_w(&b)?;
    let x = MultiPoly::var(Var::X);
    let bw = b.compose(&w)?;
    let p_rhs = bw.mul_poly(&x).exp()?;
    // W·B′(W) is (t·B′)∘W; t·B′ keeps the full order.
    let t_db = TruncSeries::new((0..=n).map(|k| b.coeff(k).scale(&rat(k as i64))).collect(), n);
    let denom = TruncSeries::one(n).add(&t_db.compose(&w)?);
    let s_rhs = a.compose(&w)?.div(&denom)?.mul(&p_rhs);

    let p_bad = p_lhs.first_mismatch(&p_rhs, n);
    let s_bad = s_lhs.first_mismatch(&s_rhs, n);
    let first_mismatch = match (p_bad, s_bad) {
        (Some(k), _) => Some(format!(
            "p identity differs at t^{k}: lhs {} vs rhs {}",
            p_lhs.coeff(k),
            p_rhs.coeff(k)
        )),
        (None, Some(k)) => Some(format!(
            "s identity differs at t^{k}: lhs {} vs rhs {}",
            s_lhs.coeff(k),
            s_rhs.coeff(k)
        )),
        _ => None,
    };
    Ok(ShefferReport {
        order: n,
        p_identity_holds: p_bad.is_none(),
        s_identity_holds: s_bad.is_none(),
        first_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::ratio;

    fn ser(s: &str, n: usize) -> TruncSeries {
        TruncSeries::parse(s, n).unwrap()
    }

    #[test]
    fn arithmetic() {
        let p = ser("1 + t", 4).mul(&ser("1 - t", 4));
        assert!(p.agrees_to(&ser("1 - t^2", 4), 4));
        let g = TruncSeries::one(5).div(&ser("1 - t", 5)).unwrap();
        assert!(g.agrees_to(&ser("1 + t + t^2 + t^3 + t^4 + t^5", 5), 5));
        let s = ser("2 + 3*t - 1/2*t^3", 5);
        assert!(s.div(&s).unwrap().agrees_to(&TruncSeries::one(5), 5));
        assert_eq!(ser("t^2", 3).div(&ser("t", 3)).unwrap_err(), SeriesError::NotInvertible);
    }

    #[test]
    fn order_is_minimum() {
        assert_eq!(ser("1 + t", 3).add(&ser("t", 5)).order(), 3);
        assert_eq!(ser("1 + t", 7).mul(&ser("t", 2)).order(), 2);
    }

    #[test]
    fn exp_and_log() {
        let e = TruncSeries::t(3).exp().unwrap();
        assert!(e.agrees_to(&ser("1 + t + 1/2*t^2 + 1/6*t^3", 3), 3));
        let l = ser("1 + t", 3).log().unwrap();
        assert!(l.agrees_to(&ser("t - 1/2*t^2 + 1/3*t^3", 3), 3));
        let s = ser("2*t - 3/7*t^2 + 5*t^4", 6);
        assert!(s.exp().unwrap().log().unwrap().agrees_to(&s, 6));
        assert!(s.exp().unwrap().agrees_to(&s.exp_by_partitions().unwrap(), 6));
        assert!(ser("1 + t", 3).exp().is_err());
        assert!(ser("2 + t", 3).log().is_err());
    }

    #[test]
    fn composition() {
        let c = ser("t^2", 5).compose(&ser("t + t^2", 5)).unwrap();
        assert!(c.agrees_to(&ser("t^2 + 2*t^3 + t^4", 5), 5));
        let s = ser("1 - t + 4*t^3", 5);
        assert!(s.compose(&TruncSeries::t(5)).unwrap().agrees_to(&s, 5));
        let s0 = ser("3*t + t^2", 5);
        assert!(TruncSeries::t(5).compose(&s0).unwrap().agrees_to(&s0, 5));
        assert_eq!(s.compose(&s).unwrap_err(), SeriesError::ComposeConstantTerm);
    }

    #[test]
    fn reversion_of_t_exp_t() {
        let f = TruncSeries::t(4).mul(&TruncSeries::t(4).exp().unwrap());
        let r = f.reversion().unwrap();
        assert!(r.agrees_to(&ser("t - t^2 + 3/2*t^3 - 8/3*t^4", 4), 4));
        assert!(f.compose(&r).unwrap().agrees_to(&TruncSeries::t(4), 4));
        assert!(TruncSeries::t(6).reversion().unwrap().agrees_to(&TruncSeries::t(6), 6));
        assert!(ser("1 + t", 3).reversion().is_err());
        assert!(ser("t^2", 3).reversion().is_err());
    }

    #[test]
    fn sheffer_tables() {
        let n = 5;
        let x = MultiPoly::var(Var::X);
        let t = TruncSeries::t(n);
        let tab = sheffer_build(&TruncSeries::one(n), &t, n).unwrap();
        for k in 0..=n {
            assert_eq!(tab.pk[k], x.pow(k as u32));
            assert_eq!(tab.sk[k], tab.pk[k]);
        }
        let tab = sheffer_build(&ser("1 + t", n), &t, n).unwrap();
        for k in 1..=n {
            let expect = &x.pow(k as u32) + &x.pow(k as u32 - 1).scale(&rat(k as i64));
            assert_eq!(tab.sk[k], expect);
        }
    }

    #[test]
    fn shifted_identities() {
        let rep = sheffer_shift_check(&TruncSeries::one(6), &TruncSeries::t(6), 6).unwrap();
        assert!(rep.holds(), "{:?}", rep.first_mismatch);
        let rep = sheffer_shift_check(&ser("1 + t", 6), &ser("t + 1/2*t^2", 6), 6).unwrap();
        assert!(rep.holds(), "{:?}", rep.first_mismatch);
    }

    #[test]
    fn display() {
        assert_eq!(ser("1 - 1/2*t + t^3", 3).to_string(), "1 - 1/2*t + t^3 + O(t^4)");
        let s = TruncSeries::from_rationals(&[rat(0), ratio(3, 2)], 1);
        assert_eq!(s.to_string(), "3/2*t + O(t^2)");
    }
}
