//! Exact rationals and sparse commutative polynomials.
//!
//! [`Poly`] is generic over its variable type so the same arithmetic serves
//! the coefficient ring `ℚ[a₂, a₄, …][◯]` ([`MultiPoly`]) and the polywheel
//! symbol algebra. Terms are kept in a `BTreeMap` keyed by [`Monomial`],
//! whose ordering is graded lexicographic, so iteration and rendering are
//! deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::partitions::Partition;

/// Exact rational number; always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Builds `n` as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds `p/q` as a rational. Panics when `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("no value assigned to generator `{0}`")]
    MissingAssignment(String),
    #[error("generator O (the circle) has no derivative rule in partial extraction")]
    CircleInExtraction,
    #[error("division by ({var} - {root}) leaves nonzero remainder {remainder}")]
    InexactDivision {
        var: String,
        root: String,
        remainder: String,
    },
}

/// Generators of the coefficient ring.
///
/// `A(2i)` is the formal parameter `a_{2i}`, indexed by its even subscript.
/// `Circle` is the extended-space generator `◯` (rendered `O`). `Aux(i)` are
/// free auxiliary symbols (the Sheffer variable `x` is `Aux(0)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    A(u32),
    Circle,
    Aux(u32),
}

impl Var {
    /// The Sheffer/umbral variable `x`.
    pub const X: Var = Var::Aux(0);

    /// `a_{2i}` for a part `i` of a partition.
    pub fn a_for_part(i: u32) -> Var {
        Var::A(2 * i)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::A(i) => write!(f, "a{i}"),
            Var::Circle => write!(f, "O"),
            Var::Aux(0) => write!(f, "x"),
            Var::Aux(i) => write!(f, "x{i}"),
        }
    }
}

/// Monomial as a sorted list of `(variable, exponent)` with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial<V> {
    factors: Vec<(V, u32)>,
}

impl<V: Ord + Clone> Monomial<V> {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn var(v: V) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    pub fn from_factors(iter: impl IntoIterator<Item = (V, u32)>) -> Self {
        let mut map: BTreeMap<V, u32> = BTreeMap::new();
        for (v, e) in iter {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial {
            factors: map.into_iter().collect(),
        }
    }

    pub fn factors(&self) -> &[(V, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &V) -> u32 {
        self.factors.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e)
    }

    /// The monomial with `v` removed.
    pub fn without(&self, v: &V) -> Self {
        Monomial {
            factors: self.factors.iter().filter(|(w, _)| w != v).cloned().collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, b) = (&self.factors[i], &other.factors[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0.clone(), a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }
}

impl<V: Ord> PartialOrd for Monomial<V> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

// Graded lexicographic: total degree first, then the factor lists.
impl<V: Ord> Ord for Monomial<V> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let da: u32 = self.factors.iter().map(|(_, e)| e).sum();
        let db: u32 = other.factors.iter().map(|(_, e)| e).sum();
        da.cmp(&db).then_with(|| self.factors.cmp(&other.factors))
    }
}

impl<V: fmt::Display> fmt::Display for Monomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with rational coefficients; never stores a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<V: Ord> {
    terms: BTreeMap<Monomial<V>, Rational>,
}

/// The universal coefficient ring `ℚ[a₂, a₄, …][◯]` plus auxiliary symbols.
pub type MultiPoly = Poly<Var>;

impl<V: Ord + Clone> Default for Poly<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Ord + Clone> Poly<V> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn var(v: V) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial<V>) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial<V>) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial<V>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: &V) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<V> {
        let mut vs: Vec<V> = self
            .terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|(v, _)| v.clone()))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn contains_var(&self, v: &V) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    /// Exact substitution of every generator by a rational.
    pub fn evaluate(&self, assignment: &BTreeMap<V, Rational>) -> Result<Rational, RingError>
    where
        V: fmt::Display,
    {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut val = c.clone();
            for (v, e) in &m.factors {
                let x = assignment
                    .get(v)
                    .ok_or_else(|| RingError::MissingAssignment(v.to_string()))?;
                val *= pow_rational(x, *e);
            }
            total += val;
        }
        Ok(total)
    }

    /// Replaces the generator `v` by the polynomial `value`.
    pub fn substitute(&self, v: &V, value: &Self) -> Self {
        let mut powers: Vec<Self> = vec![Self::one()];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let rest = Self::term(c.clone(), m.without(v));
            out += &(&rest * &powers[e]);
        }
        out
    }

    /// Coefficients of `v⁰, v¹, …` with the remaining generators kept symbolic.
    pub fn as_univariate(&self, v: &V) -> Vec<Self> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(); deg + 1];
        for (m, c) in &self.terms {
            out[m.exponent(v) as usize].add_term(m.without(v), c.clone());
        }
        out
    }

    pub fn from_univariate(v: &V, coeffs: &[Self]) -> Self {
        let mut out = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let vk = Self::term(Rational::one(), Monomial::from_factors([(v.clone(), k as u32)]));
            out += &(c * &vk);
        }
        out
    }

    /// Exact division by `(v - root)`; fails unless the remainder vanishes.
    pub fn div_by_linear(&self, v: &V, root: &Rational) -> Result<Self, RingError>
    where
        V: fmt::Display,
    {
        let coeffs = self.as_univariate(v);
        let n = coeffs.len();
        if n == 1 {
            if coeffs[0].is_zero() {
                return Ok(Self::zero());
            }
            return Err(RingError::InexactDivision {
                var: v.to_string(),
                root: root.to_string(),
                remainder: coeffs[0].to_string(),
            });
        }
        // Synthetic division from the top coefficient down.
        let mut quotient = vec![Self::zero(); n - 1];
        let mut carry = Self::zero();
        for k in (1..n).rev() {
            carry = &coeffs[k] + &carry.scale(root);
            quotient[k - 1] = carry.clone();
        }
        let remainder = &coeffs[0] + &carry.scale(root);
        if !remainder.is_zero() {
            return Err(RingError::InexactDivision {
                var: v.to_string(),
                root: root.to_string(),
                remainder: remainder.to_string(),
            });
        }
        Ok(Self::from_univariate(v, &quotient))
    }

    pub fn map_vars<W: Ord + Clone>(&self, f: impl Fn(&V) -> W) -> Poly<W> {
        let mut out = Poly::<W>::zero();
        for (m, c) in &self.terms {
            let mm = Monomial::from_factors(m.factors.iter().map(|(v, e)| (f(v), *e)));
            out.add_term(mm, c.clone());
        }
        out
    }
}

pub(crate) fn pow_rational(x: &Rational, e: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e {
        out *= x;
    }
    out
}

impl MultiPoly {
    /// `∂_λ`: differentiate `λ_i` times in `a_{2i}` for every part `i`, then set
    /// every `a`-generator to zero. Equals `λ!` times the coefficient of
    /// `∏ a_{2i}^{λ_i}`; non-`a` auxiliary symbols survive in the result.
    pub fn extract_partial(&self, lambda: &Partition) -> Result<MultiPoly, RingError> {
        if self.contains_var(&Var::Circle) {
            return Err(RingError::CircleInExtraction);
        }
        let target = Monomial::from_factors(lambda.multiplicities().map(|(i, m)| (Var::a_for_part(i), m)));
        let weight = Rational::from_integer(lambda.factorial());
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let a_part = Monomial::from_factors(m.factors.iter().filter(|(v, _)| matches!(v, Var::A(_))).cloned());
            if a_part == target {
                let rest = Monomial::from_factors(m.factors.iter().filter(|(v, _)| !matches!(v, Var::A(_))).cloned());
                out.add_term(rest, c * &weight);
            }
        }
        Ok(out)
    }

    /// [`Self::extract_partial`] for inputs free of auxiliary symbols.
    pub fn extract_partial_rational(&self, lambda: &Partition) -> Result<Rational, RingError> {
        let p = self.extract_partial(lambda)?;
        match p.as_constant() {
            Some(c) => Ok(c),
            None => Err(RingError::MissingAssignment(
                p.variables().first().map(|v| v.to_string()).unwrap_or_default(),
            )),
        }
    }

    /// `∏ a_{2i}^{λ_i}`.
    pub fn a_monomial(lambda: &Partition) -> MultiPoly {
        MultiPoly::term(
            Rational::one(),
            Monomial::from_factors(lambda.multiplicities().map(|(i, m)| (Var::a_for_part(i), m))),
        )
    }

    /// Sets every `a`-generator to zero.
    pub fn at_a_zero(&self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            if m.factors.iter().all(|(v, _)| !matches!(v, Var::A(_))) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }
}

impl<V: Ord + Clone> From<Rational> for Poly<V> {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl<V: Ord + Clone> AddAssign<&Poly<V>> for Poly<V> {
    fn add_assign(&mut self, rhs: &Poly<V>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<V: Ord + Clone> SubAssign<&Poly<V>> for Poly<V> {
    fn sub_assign(&mut self, rhs: &Poly<V>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<V: Ord + Clone> Add for &Poly<V> {
    type Output = Poly<V>;
    fn add(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<V: Ord + Clone> Sub for &Poly<V> {
    type Output = Poly<V>;
    fn sub(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<V: Ord + Clone> Mul for &Poly<V> {
    type Output = Poly<V>;
    fn mul(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl<V: Ord + Clone> Neg for &Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl<V: Ord + Clone> $tr for Poly<V> {
            type Output = Poly<V>;
            fn $f(self, rhs: Poly<V>) -> Poly<V> {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned_ops!(Add add, Sub sub, Mul mul);

impl<V: Ord + Clone> Neg for Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        -&self
    }
}

impl<V: Ord + fmt::Display> fmt::Display for Poly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Small integer view of a rational, used by renderers and tests.
pub fn to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}
