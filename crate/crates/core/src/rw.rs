//! Rozansky–Witten numbers of connected polywheels on Hilbert schemes of K3
//! surfaces and generalised Kummer varieties, and the series `A(t)`, `D(t)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::coeffring::{factorial, parse_rational, rat, MultiPoly, Rational, RingError, Var};
use crate::partitions::{enumerate_partitions, enumerate_set_partitions, Partition};
use crate::polywheels::{monomial_degree, to_connected, PWPolynomial, PwSymbol};
use crate::series::{sheffer_build, shifted_sums, SeriesError, TruncSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Series {
    /// `Hilb^n X` of a K3 surface; half-dimension `n`.
    Hilb,
    /// `K_n A` of an abelian surface; half-dimension `n − 1`.
    Kummer,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Series::Hilb => "hilb",
            Series::Kummer => "kummer",
        })
    }
}

impl FromStr for Series {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hilb" => Ok(Series::Hilb),
            "kummer" => Ok(Series::Kummer),
            _ => Err(format!("unknown series `{s}` (expected hilb or kummer)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RwError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: duplicate entry {series},{k},{partition}")]
    Duplicate {
        line: usize,
        series: Series,
        k: u32,
        partition: String,
    },
    #[error("line {line}: partition {partition} has weight {weight}, not k = {k}")]
    WeightMismatch {
        line: usize,
        k: u32,
        partition: String,
        weight: u32,
    },
    #[error("missing Chern number {series},{k},{partition}")]
    MissingChern { series: Series, k: u32, partition: String },
    #[error("no record for k[{0}]")]
    MissingRecord(String),
    #[error("{series} with n = {n} is outside the valid range for degree 2·{k}: {rule}")]
    OutOfRange {
        series: Series,
        n: u32,
        k: u32,
        rule: &'static str,
    },
    #[error("expression is not homogeneous (half-degrees {0:?})")]
    NotHomogeneous(Vec<u32>),
    #[error("forward check failed: {0}")]
    RoundTrip(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Chern numbers `s_{2λ}` keyed by series, half-dimension `k` and `λ ⊢ k`.
/// The kummer row `k` holds `K_{k+1}A`, which has dimension `2k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChernTable {
    entries: BTreeMap<(Series, u32, Partition), Rational>,
}

pub const BUNDLED_CHERN: &str = include_str!("../data/chern_numbers.csv");

impl ChernTable {
    /// Parses `series,k,partition,value` lines; `#` comments and blank lines are skipped.
    pub fn parse(text: &str) -> Result<ChernTable, RwError> {
        let mut t = ChernTable::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap().trim();
            if body.is_empty() {
                continue;
            }
            let syntax = |msg: String| RwError::Syntax { line, msg };
            let fields: Vec<&str> = body.split(',').map(str::trim).collect();
            let [series, k, partition, value] = fields.as_slice() else {
                return Err(syntax(format!(
                    "expected 4 comma-separated fields, found {}",
                    fields.len()
                )));
            };
            let series: Series = series.parse().map_err(syntax)?;
            let k: u32 = k.parse().map_err(|_| syntax(format!("bad degree `{k}`")))?;
            let lambda = Partition::parse(partition).map_err(|e| syntax(e.to_string()))?;
            let value = parse_rational(value).ok_or_else(|| syntax(format!("bad rational `{value}`")))?;
            if lambda.weight() != k {
                return Err(RwError::WeightMismatch {
                    line,
                    k,
                    partition: lambda.encode("+"),
                    weight: lambda.weight(),
                });
            }
            if t.entries.insert((series, k, lambda.clone()), value).is_some() {
                return Err(RwError::Duplicate {
                    line,
                    series,
                    k,
                    partition: lambda.encode("+"),
                });
            }
        }
        Ok(t)
    }

    pub fn bundled() -> ChernTable {
        Self::parse(BUNDLED_CHERN).expect("bundled Chern table is well formed")
    }

    pub fn get(&self, series: Series, lambda: &Partition) -> Result<&Rational, RwError> {
        let k = lambda.weight();
        self.entries
            .get(&(series, k, lambda.clone()))
            .ok_or_else(|| RwError::MissingChern {
                series,
                k,
                partition: lambda.encode("+"),
            })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `β` of the closed polywheel `⟨w̃_{2λ}⟩` on the instance of half-dimension
/// `k = ‖λ‖`: `s_{2λ}[Hilb^k]`, or `s_{2λ}[K_{k+1}]/(k+1)`.
pub fn beta_closed_base(lambda: &Partition, series: Series, table: &ChernTable) -> Result<Rational, RwError> {
    let s = table.get(series, lambda)?.clone();
    Ok(match series {
        Series::Hilb => s,
        Series::Kummer => s / rat(lambda.weight() as i64 + 1),
    })
}

/// `β` values and affine coefficients of `⟨⟨w̃_{2λ}⟩⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaRecord {
    pub lambda: Partition,
    /// On `Hilb^k`, `k = ‖λ‖`.
    pub beta_hilb: Rational,
    /// On `K_{k+1}`.
    pub beta_kummer: Rational,
    pub a: Rational,
    pub c: Rational,
}

impl BetaRecord {
    pub fn value(&self, series: Series, n: u32) -> Rational {
        let n = rat(n as i64);
        match series {
            Series::Hilb => &self.a * &n + &self.c,
            Series::Kummer => &self.a * &n,
        }
    }
}

/// Records indexed by partition.
pub type Records = BTreeMap<Partition, BetaRecord>;

/// Ascends `k = 1…K`: the top closed polywheel comes from the Chern table and
/// every proper set partition of the wheel factors is evaluated with the
/// affine values already established for lower degree.
pub fn compute_beta_table(max_k: u32, table: &ChernTable) -> Result<Vec<BetaRecord>, RwError> {
    let mut recs: Records = BTreeMap::new();
    let mut out = Vec::new();
    for k in 1..=max_k {
        for lambda in enumerate_partitions(k) {
            let mut beta = [Series::Hilb, Series::Kummer].map(|_| Rational::zero());
            for (slot, series) in [Series::Hilb, Series::Kummer].into_iter().enumerate() {
                let n = match series {
                    Series::Hilb => k,
                    Series::Kummer => k + 1,
                };
                let mut lower = Rational::zero();
                for sp in enumerate_set_partitions(lambda.length()) {
                    if sp.len() == 1 {
                        continue;
                    }
                    let mut prod = Rational::one();
                    for block in &sp {
                        let mu = lambda.select(block);
                        let r = recs.get(&mu).ok_or_else(|| RwError::MissingRecord(mu.to_string()))?;
                        prod *= r.value(series, n);
                    }
                    lower += prod;
                }
                beta[slot] = beta_closed_base(&lambda, series, table)? - lower;
            }
            let [beta_hilb, beta_kummer] = beta;
            let a = &beta_kummer / rat(k as i64 + 1);
            let c = &beta_hilb - &a * rat(k as i64);
            let rec = BetaRecord {
                lambda: lambda.clone(),
                beta_hilb,
                beta_kummer,
                a,
                c,
            };
            debug_assert_eq!(rec.value(Series::Hilb, k), rec.beta_hilb);
            debug_assert_eq!(rec.value(Series::Kummer, k + 1), rec.beta_kummer);
            recs.insert(lambda, rec.clone());
            out.push(rec);
        }
    }
    Ok(out)
}

pub fn index_records(recs: &[BetaRecord]) -> Records {
    recs.iter().map(|r| (r.lambda.clone(), r.clone())).collect()
}

/// A manifold of the two families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Manifold {
    pub series: Series,
    pub n: u32,
}

impl Manifold {
    pub fn half_dimension(&self) -> Option<u32> {
        match self.series {
            Series::Hilb => Some(self.n),
            Series::Kummer => self.n.checked_sub(1),
        }
    }

    fn check(&self, k: u32) -> Result<(), RwError> {
        let ok = match self.series {
            Series::Hilb => self.n >= k,
            Series::Kummer => self.n >= 1 && self.n > k,
        };
        if ok {
            Ok(())
        } else {
            Err(RwError::OutOfRange {
                series: self.series,
                n: self.n,
                k,
                rule: match self.series {
                    Series::Hilb => "the affine formula a*n + c holds on Hilb^n for n >= k",
                    Series::Kummer => "the formula a*n holds on K_n for n > k",
                },
            })
        }
    }
}

/// `β` of a polywheel expression on `m`. Closed symbols are first expanded
/// into connected ones; each `k[λ]` then contributes `a·n + c` (hilb) or
/// `a·n` (kummer), multiplicatively.
pub fn beta_eval(expr: &PWPolynomial, m: Manifold, recs: &Records) -> Result<Rational, RwError> {
    let p = to_connected(expr);
    if m.series == Series::Kummer && m.n == 0 {
        return Err(RwError::OutOfRange {
            series: m.series,
            n: 0,
            k: 0,
            rule: "K_n needs n >= 1",
        });
    }
    let mut total = Rational::zero();
    for (mono, c) in p.terms() {
        m.check(monomial_degree(mono) / 2)?;
        let mut v = c.clone();
        for (s, e) in mono.factors() {
            let PwSymbol::Connected(l) = s else {
                unreachable!("closed symbols were expanded")
            };
            let r = recs.get(l).ok_or_else(|| RwError::MissingRecord(l.to_string()))?;
            let x = r.value(m.series, m.n);
            for _ in 0..*e {
                v *= &x;
            }
        }
        total += v;
    }
    Ok(total)
}

/// Half-degree `k` of a homogeneous expression (0 for the zero polynomial).
pub fn homogeneous_half_degree(expr: &PWPolynomial) -> Result<u32, RwError> {
    let mut ks: Vec<u32> = expr.terms().map(|(m, _)| monomial_degree(m) / 2).collect();
    ks.sort_unstable();
    ks.dedup();
    match ks.len() {
        0 => Ok(0),
        1 => Ok(ks[0]),
        _ => Err(RwError::NotHomogeneous(ks)),
    }
}

/// The integrated invariant `b_γ`: `β/(n−k)!` on `Hilb^n`, `β·n/(n−1−k)!` on `K_n`.
pub fn rw_invariant_b(expr: &PWPolynomial, m: Manifold, recs: &Records) -> Result<Rational, RwError> {
    let k = homogeneous_half_degree(expr)?;
    let beta = beta_eval(expr, m, recs)?;
    m.check(k)?;
    let fact = |x: u32| Rational::from_integer(factorial(x));
    Ok(match m.series {
        Series::Hilb => beta / fact(m.n - k),
        Series::Kummer => beta * rat(m.n as i64) / fact(m.n - 1 - k),
    })
}

/// `A(t)` and `D(t)` over `ℚ[a₂, a₄, …]`.
#[derive(Clone, Debug)]
pub struct ADSeries {
    pub a: TruncSeries,
    pub d: TruncSeries,
}

impl ADSeries {
    /// Both series with every `a`-generator set to zero.
    pub fn at_a_zero(&self) -> (TruncSeries, TruncSeries) {
        let f = |s: &TruncSeries| TruncSeries::new(s.coeffs().iter().map(MultiPoly::at_a_zero).collect(), s.order());
        (f(&self.a), f(&self.d))
    }
}

/// `Σ_{‖λ‖ ≤ K} v(λ)·a_{2λ}/λ!·t^{‖λ‖}`.
fn generating_series(recs: &Records, max_k: u32, v: impl Fn(&BetaRecord) -> &Rational) -> Result<TruncSeries, RwError> {
    let mut coeffs = vec![MultiPoly::zero(); max_k as usize + 1];
    for k in 1..=max_k {
        for lambda in enumerate_partitions(k) {
            let r = recs
                .get(&lambda)
                .ok_or_else(|| RwError::MissingRecord(lambda.to_string()))?;
            let w = v(r) / Rational::from_integer(lambda.factorial());
            coeffs[k as usize] += &MultiPoly::a_monomial(&lambda).scale(&w);
        }
    }
    Ok(TruncSeries::new(coeffs, max_k as usize))
}

/// `Ṽ` and `log Ũ` built from the records.
pub fn v_tilde_and_log_u_tilde(recs: &Records, max_k: u32) -> Result<(TruncSeries, TruncSeries), RwError> {
    Ok((
        generating_series(recs, max_k, |r| &r.a)?,
        generating_series(recs, max_k, |r| &r.c)?,
    ))
}

/// Recovers `A` and `D` from the affine records up to degree `K`.
///
/// With `T = t·exp(−Ṽ)`, `V = Ṽ∘T⁻¹` and `A = exp V`. Since
/// `Ũ = U₂₄(T)/(1 + T·V′(T))`, `U₂₄ = (Ũ∘T⁻¹)·(1 + t·V′)` and `D = log(U₂₄)/24`.
pub fn recover_ad(recs: &Records, max_k: u32) -> Result<ADSeries, RwError> {
    let n = max_k as usize;
    let (vt, log_ut) = v_tilde_and_log_u_tilde(recs, max_k)?;
    let t = TruncSeries::t(n);
    let big_t = t.mul(&vt.neg().exp()?);
    let t_inv = big_t.reversion()?;
    let v = vt.compose(&t_inv)?;
    let a = v.exp()?;
    let t_dv = TruncSeries::new((0..=n).map(|k| v.coeff(k).scale(&rat(k as i64))).collect(), n);
    let u24 = log_ut.exp()?.compose(&t_inv)?.mul(&TruncSeries::one(n).add(&t_dv));
    let d = u24.log()?.scale(&(Rational::one() / rat(24)));
    Ok(ADSeries { a, d })
}

/// `(λ, a, c)` recovered by the forward route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePair {
    pub lambda: Partition,
    pub a: Rational,
    pub c: Rational,
}

/// Forward route from `A`, `D`: take `U = exp(24D)`, `V = log A`, build the
/// Sheffer sequence `sₖ` of `(U, V)` and form `S = Σ sₖ(x−k)·tᵏ/k!`. Then
/// `log S = x·Ṽ + log Ũ`, from which `a_λ`, `c_λ` are read off by `∂_λ`.
/// The `pₖ` side must give `exp(x·Ṽ)`.
pub fn forward_affine(ad: &ADSeries, max_k: u32) -> Result<Vec<AffinePair>, RwError> {
    let n = max_k as usize;
    let u = ad.d.scale(&rat(24)).exp()?;
    let v = ad.a.log()?;
    let table = sheffer_build(&u, &v, n)?;
    let (p_side, s_side) = shifted_sums(&table)?;
    let log_s = s_side.log()?;
    let log_p = p_side.log()?;
    let mut out = Vec::new();
    for k in 1..=n {
        let parts = log_s.coeff(k).as_univariate(&Var::X);
        if parts.len() > 2 {
            return Err(RwError::RoundTrip(format!(
                "log of the shifted s-series has x^{} at t^{k}",
                parts.len() - 1
            )));
        }
        let c_part = parts[0].clone();
        let a_part = parts.get(1).cloned().unwrap_or_else(MultiPoly::zero);
        let p_expect = a_part.clone() * MultiPoly::var(Var::X);
        if log_p.coeff(k) != &p_expect {
            return Err(RwError::RoundTrip(format!(
                "shifted p-series disagrees with x*V~ at t^{k}"
            )));
        }
        for lambda in enumerate_partitions(k as u32) {
            out.push(AffinePair {
                a: a_part.extract_partial_rational(&lambda)?,
                c: c_part.extract_partial_rational(&lambda)?,
                lambda,
            });
        }
    }
    Ok(out)
}
