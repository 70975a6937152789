//! Closed and connected polywheels as formal symbols, and the moment–cumulant
//! transforms relating them.
//!
//! `C[λ]` stands for `⟨w̃_{2λ}⟩` and `K[λ]` for `⟨⟨w̃_{2λ}⟩⟩`. The transforms
//! themselves never see the sign `w̃ = −w`; it enters only when a symbol is
//! turned into an actual diagram vector.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::coeffring::{parse_rational, rat, Monomial, Poly, Rational};
use crate::diagrams::library::wheel_product;
use crate::diagrams::{DiagramError, GraphVector};
use crate::partitions::{enumerate_set_partitions, Partition};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PwSymbol {
    /// `⟨w̃_{2λ}⟩`.
    Closed(Partition),
    /// `⟨⟨w̃_{2λ}⟩⟩`.
    Connected(Partition),
}

impl PwSymbol {
    pub fn partition(&self) -> &Partition {
        match self {
            PwSymbol::Closed(l) | PwSymbol::Connected(l) => l,
        }
    }
}

impl fmt::Display for PwSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PwSymbol::Closed(l) => write!(f, "c[{l}]"),
            PwSymbol::Connected(l) => write!(f, "k[{l}]"),
        }
    }
}

/// Polynomial in the `c[·]` and `k[·]` symbols.
pub type PWPolynomial = Poly<PwSymbol>;

pub fn closed(l: &Partition) -> PWPolynomial {
    PWPolynomial::var(PwSymbol::Closed(l.clone()))
}

pub fn connected(l: &Partition) -> PWPolynomial {
    PWPolynomial::var(PwSymbol::Connected(l.clone()))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolywheelError {
    #[error("cannot parse polywheel expression at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("diagram degree {degree} exceeds the bound {bound}")]
    BoundExceeded { degree: u32, bound: u32 },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Sum over set partitions of the labelled factors of `λ` of `∏ f(block)`;
/// `skip_trivial` leaves out the one-block partition.
fn set_partition_sum(
    lambda: &Partition,
    skip_trivial: bool,
    mut f: impl FnMut(&Partition) -> PWPolynomial,
) -> PWPolynomial {
    let mut out = PWPolynomial::zero();
    for sp in enumerate_set_partitions(lambda.length()) {
        if skip_trivial && sp.len() == 1 {
            continue;
        }
        let mut term = PWPolynomial::one();
        for block in &sp {
            term = &term * &f(&lambda.select(block));
        }
        out += &term;
    }
    out
}

/// `C[λ] = Σ_𝔍 ∏_{I∈𝔍} K[λ_I]` over set partitions of the labelled wheel factors.
pub fn moment_expand(lambda: &Partition) -> PWPolynomial {
    set_partition_sum(lambda, false, connected)
}

/// `K[λ] = C[λ] − Σ_{𝔍 ≠ one block} ∏ K[λ_I]`, the form in which only lower
/// connected symbols appear on the right.
pub fn mixed_form(lambda: &Partition) -> PWPolynomial {
    &closed(lambda) - &set_partition_sum(lambda, true, connected)
}

/// Memoized inversion of [`moment_expand`].
#[derive(Default)]
pub struct Cumulants {
    memo: BTreeMap<Partition, PWPolynomial>,
}

impl Cumulants {
    pub fn new() -> Self {
        Self::default()
    }

    /// `K[λ]` as a polynomial in closed symbols only.
    pub fn connected_to_closed(&mut self, lambda: &Partition) -> PWPolynomial {
        if let Some(p) = self.memo.get(lambda) {
            return p.clone();
        }
        let mut rest = PWPolynomial::zero();
        for sp in enumerate_set_partitions(lambda.length()) {
            if sp.len() == 1 {
                continue;
            }
            let mut term = PWPolynomial::one();
            for block in &sp {
                term = &term * &self.connected_to_closed(&lambda.select(block));
            }
            rest += &term;
        }
        let p = &closed(lambda) - &rest;
        self.memo.insert(lambda.clone(), p.clone());
        p
    }

    /// Rewrites every `k[·]` in closed symbols.
    pub fn to_closed(&mut self, p: &PWPolynomial) -> PWPolynomial {
        substitute_symbols(p, |s| match s {
            PwSymbol::Connected(l) => self.connected_to_closed(l),
            PwSymbol::Closed(_) => PWPolynomial::var(s.clone()),
        })
    }
}

/// `K[λ]` in closed symbols.
pub fn connected_to_closed(lambda: &Partition) -> PWPolynomial {
    Cumulants::new().connected_to_closed(lambda)
}

/// Rewrites every `c[·]` in connected symbols.
pub fn to_connected(p: &PWPolynomial) -> PWPolynomial {
    substitute_symbols(p, |s| match s {
        PwSymbol::Closed(l) => moment_expand(l),
        PwSymbol::Connected(_) => PWPolynomial::var(s.clone()),
    })
}

/// Replaces each symbol `s` by `f(s)`.
pub fn substitute_symbols(p: &PWPolynomial, mut f: impl FnMut(&PwSymbol) -> PWPolynomial) -> PWPolynomial {
    let mut out = PWPolynomial::zero();
    for (m, c) in p.terms() {
        let mut term = PWPolynomial::constant(c.clone());
        for (s, e) in m.factors() {
            term = &term * &f(s).pow(*e);
        }
        out += &term;
    }
    out
}

/// Degree of a term: `Σ 2‖λ‖` over its symbols with multiplicity.
pub fn monomial_degree(m: &Monomial<PwSymbol>) -> u32 {
    m.factors().iter().map(|(s, e)| 2 * s.partition().weight() * e).sum()
}

/// Distinct term degrees present in `p`.
pub fn degrees(p: &PWPolynomial) -> Vec<u32> {
    let mut ds: Vec<u32> = p.terms().map(|(m, _)| monomial_degree(m)).collect();
    ds.sort_unstable();
    ds.dedup();
    ds
}

/// Evaluates a polynomial in symbols to a diagram vector via `f`.
pub fn evaluate_in_diagrams(
    p: &PWPolynomial,
    mut f: impl FnMut(&PwSymbol) -> Result<GraphVector, DiagramError>,
) -> Result<GraphVector, DiagramError> {
    let mut out = GraphVector::zero();
    for (m, c) in p.terms() {
        let mut term = GraphVector::one().scale(c);
        for (s, e) in m.factors() {
            term = term.product(&f(s)?.pow(*e));
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// `w̃_{2λ}` as a diagram vector: the wheel product with sign `(−1)^{|λ|}`.
pub fn wheel_tilde(lambda: &Partition) -> GraphVector {
    let sign = if lambda.length().is_multiple_of(2) { 1 } else { -1 };
    wheel_product(lambda).scale(&rat(sign))
}

/// Diagram value of a symbol.
pub fn symbol_to_diagrams(s: &PwSymbol) -> Result<GraphVector, DiagramError> {
    match s {
        PwSymbol::Closed(l) => wheel_tilde(l).closure(),
        PwSymbol::Connected(l) => wheel_tilde(l).connected_closure(),
    }
}

/// Outcome of comparing the symbolic transforms with direct diagram closures.
#[derive(Clone, Debug)]
pub struct CrossValidation {
    pub lambda: Partition,
    /// `⟨⟨w̃_{2λ}⟩⟩` computed directly.
    pub connected_direct: GraphVector,
    /// [`connected_to_closed`] evaluated at diagram closures.
    pub connected_via_symbols: GraphVector,
    /// `⟨w̃_{2λ}⟩` computed directly.
    pub closed_direct: GraphVector,
    /// [`moment_expand`] evaluated at diagram connected closures.
    pub closed_via_symbols: GraphVector,
}

impl CrossValidation {
    pub fn passed(&self) -> bool {
        self.connected_direct == self.connected_via_symbols && self.closed_direct == self.closed_via_symbols
    }
}

/// Checks both transforms for `λ` against the diagram engine; `bound` caps
/// the diagram degree `2‖λ‖`.
pub fn cross_validate(lambda: &Partition, bound: u32) -> Result<CrossValidation, PolywheelError> {
    let degree = 2 * lambda.weight();
    if degree > bound {
        return Err(PolywheelError::BoundExceeded { degree, bound });
    }
    let w = wheel_tilde(lambda);
    let closed_direct = w.closure()?;
    let connected_direct = closed_direct.connected_part();
    let mut closures: BTreeMap<PwSymbol, GraphVector> = BTreeMap::new();
    let mut lookup = |s: &PwSymbol| -> Result<GraphVector, DiagramError> {
        if let Some(v) = closures.get(s) {
            return Ok(v.clone());
        }
        let v = symbol_to_diagrams(s)?;
        closures.insert(s.clone(), v.clone());
        Ok(v)
    };
    let connected_via_symbols = evaluate_in_diagrams(&connected_to_closed(lambda), &mut lookup)?;
    let closed_via_symbols = evaluate_in_diagrams(&moment_expand(lambda), &mut lookup)?;
    Ok(CrossValidation {
        lambda: lambda.clone(),
        connected_direct,
        connected_via_symbols,
        closed_direct,
        closed_via_symbols,
    })
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, PolywheelError> {
        Err(PolywheelError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<PWPolynomial, PolywheelError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<PWPolynomial, PolywheelError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<PWPolynomial, PolywheelError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
            let Ok(e) = digits.parse::<u32>() else {
                return self.err("expected a non-negative integer exponent");
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<PWPolynomial, PolywheelError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c @ (b'c' | b'k')) => {
                self.pos += 1;
                if self.peek() != Some(b'[') {
                    return self.err("expected `[` after symbol name");
                }
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos] != b']' {
                    self.pos += 1;
                }
                if self.pos == self.s.len() {
                    return self.err("unterminated `[`");
                }
                let inner = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                if inner.contains('+') {
                    return self.err("partitions inside symbols are comma separated");
                }
                let lambda = match Partition::parse(inner) {
                    Ok(l) if !l.is_empty() => l,
                    Ok(_) => return self.err("empty partition in symbol"),
                    Err(e) => return self.err(&e.to_string()),
                };
                self.pos += 1;
                Ok(if c == b'c' { closed(&lambda) } else { connected(&lambda) })
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'/') {
                    self.pos += 1;
                }
                let lit = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                match parse_rational(lit) {
                    Some(r) => Ok(PWPolynomial::constant(r)),
                    None => self.err("bad rational literal"),
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `c[4,2]`, `k[2,2]`, rationals, `+ - * ^` and parentheses.
pub fn parse_expression(text: &str) -> Result<PWPolynomial, PolywheelError> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Small integer coefficient view used when printing expansion lists.
pub fn coefficient_i64(p: &PWPolynomial, m: &Monomial<PwSymbol>) -> Option<i64> {
    let c: Rational = p.coefficient(m);
    if c.is_zero() {
        return Some(0);
    }
    if c.denom().is_one() {
        c.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    fn expr(s: &str) -> PWPolynomial {
        parse_expression(s).unwrap()
    }

    #[test]
    fn small_expansions() {
        assert_eq!(connected_to_closed(&part("2")), expr("c[2]"));
        assert_eq!(connected_to_closed(&part("2,2")), expr("c[2,2] - c[2]^2"));
        assert_eq!(
            connected_to_closed(&part("2,2,2")),
            expr("c[2,2,2] - 3*c[2]*c[2,2] + 2*c[2]^3")
        );
        assert_eq!(moment_expand(&part("4")), expr("k[4]"));
        assert_eq!(moment_expand(&part("2,2")), expr("k[2,2] + k[2]^2"));
        assert_eq!(moment_expand(&part("4,2")), expr("k[4,2] + k[2]*k[4]"));
    }

    /// Möbius inversion on the set-partition lattice, written out directly.
    fn mobius_oracle(lambda: &Partition) -> PWPolynomial {
        let mut out = PWPolynomial::zero();
        for sp in enumerate_set_partitions(lambda.length()) {
            let b = sp.len() as i64;
            let fact: i64 = (1..b).product();
            let sign = if b % 2 == 1 { 1 } else { -1 };
            let mut term = PWPolynomial::from_int(sign * fact);
            for block in &sp {
                term = &term * &closed(&lambda.select(block));
            }
            out += &term;
        }
        out
    }

    #[test]
    fn inversion_matches_mobius_formula() {
        for n in 1..=5 {
            for lambda in crate::partitions::enumerate_partitions(n) {
                assert_eq!(connected_to_closed(&lambda), mobius_oracle(&lambda), "{lambda}");
            }
        }
    }

    #[test]
    fn parser() {
        let p = expr("2*k[2]^2 - 1/3*(c[4,2] + k[2,2])");
        let q = &connected(&part("2")).pow(2).scale(&rat(2))
            - &(&closed(&part("4,2")) + &connected(&part("2,2"))).scale(&crate::coeffring::ratio(1, 3));
        assert_eq!(p, q);
        assert_eq!(p.to_string(), "-1/3*c[4,2] - 1/3*k[2,2] + 2*k[2]^2");
        assert!(parse_expression("k[]").is_err());
        assert!(parse_expression("k[3]").is_err());
        assert!(parse_expression("k[2").is_err());
        assert!(parse_expression("k[2] +").is_err());
        assert!(parse_expression("x").is_err());
    }

    #[test]
    fn cross_validation_small() {
        for s in ["2", "2,2", "4"] {
            let r = cross_validate(&part(s), 8).unwrap();
            assert!(r.passed(), "{s}");
        }
        let r = cross_validate(&part("2"), 8).unwrap();
        assert_eq!(r.connected_direct, crate::diagrams::library::theta().scale(&rat(-1)));
        let r = cross_validate(&part("2,2"), 8).unwrap();
        assert_eq!(r.connected_direct, crate::diagrams::library::theta2().scale(&rat(2)));
        assert!(matches!(
            cross_validate(&part("6,4"), 8),
            Err(PolywheelError::BoundExceeded { degree: 10, bound: 8 })
        ));
    }
}
