//! Linear combinations of canonical diagrams and the gluing operators.

use std::collections::BTreeMap;
use std::fmt;

use super::graph::FlagGraph;
use super::{canonicalize, Diagram, DiagramError};
use crate::coeffring::{rat, ratio, MultiPoly, Rational, Var};
use crate::partitions::enumerate_pair_partitions;

/// Finite sum `Σ c·D` with `c ∈ ℚ[a₂, a₄, …][◯]`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphVector {
    terms: BTreeMap<Diagram, MultiPoly>,
}

type Result<T> = std::result::Result<T, DiagramError>;

fn circle_power(k: u32) -> MultiPoly {
    MultiPoly::var(Var::Circle).pow(k)
}

/// All injective maps `0..k → 0..n`, as image lists.
fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                rec(k, n, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(k, n, &mut Vec::new(), &mut vec![false; n], &mut out);
    }
    out
}

impl GraphVector {
    pub fn zero() -> Self {
        GraphVector { terms: BTreeMap::new() }
    }

    /// The empty diagram with coefficient 1.
    pub fn one() -> Self {
        Self::from_diagram(Diagram::empty())
    }

    pub fn from_diagram(d: Diagram) -> Self {
        Self::term(d, MultiPoly::one())
    }

    pub fn term(d: Diagram, c: MultiPoly) -> Self {
        let mut v = Self::zero();
        v.add_term(d, c);
        v
    }

    /// Canonicalizes a graph; the result is `±◯^k·D` or zero.
    pub fn from_graph(g: &FlagGraph) -> Result<Self> {
        let mut v = Self::zero();
        v.add_graph(g, &MultiPoly::one())?;
        Ok(v)
    }

    /// Adds `c·[g]`.
    pub fn add_graph(&mut self, g: &FlagGraph, c: &MultiPoly) -> Result<()> {
        let can = canonicalize(g)?;
        if can.parity_zero {
            return Ok(());
        }
        let mut coef = c * &circle_power(g.circles);
        if can.sign < 0 {
            coef = -coef;
        }
        self.add_term(can.diagram, coef);
        Ok(())
    }

    pub fn add_term(&mut self, d: Diagram, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Diagram, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, d: &Diagram) -> MultiPoly {
        self.terms.get(d).cloned().unwrap_or_else(MultiPoly::zero)
    }

    pub fn add(&self, other: &GraphVector) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GraphVector) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.mul_poly(&MultiPoly::constant(c.clone()))
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        let mut out = Self::zero();
        for (d, c) in &self.terms {
            out.add_term(d.clone(), c * p);
        }
        out
    }

    /// Bilinear disjoint union.
    pub fn product(&self, other: &GraphVector) -> Self {
        let mut out = Self::zero();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                out.add_term(d1.union(d2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.product(self);
        }
        out
    }

    /// Applies `f` to every diagram's graph and sums the results with the
    /// diagram's coefficient.
    fn map_graphs(&self, mut f: impl FnMut(&FlagGraph, &MultiPoly, &mut GraphVector) -> Result<()>) -> Result<Self> {
        let mut out = Self::zero();
        for (d, c) in &self.terms {
            f(&d.to_graph(), c, &mut out)?;
        }
        Ok(out)
    }

    /// `Γ/π` for leg-position pairs `pairs` of every term.
    pub fn quotient(&self, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j) in pairs {
            for x in [i, j] {
                if !seen.insert(x) {
                    return Err(DiagramError::OverlappingPairs(x));
                }
            }
        }
        self.map_graphs(|g, c, out| {
            if let Some(&bad) = seen.iter().find(|&&x| x >= g.leg_count()) {
                return Err(DiagramError::NotALeg(bad));
            }
            let mut h = g.clone();
            h.glue_pairs(pairs);
            out.add_graph(&h, c)
        })
    }

    /// `∂`: sum over unordered pairs of legs of the glued diagram.
    pub fn partial(&self) -> Result<Self> {
        self.map_graphs(|g, c, out| {
            let n = g.leg_count();
            for i in 0..n {
                for j in i + 1..n {
                    let mut h = g.clone();
                    h.glue_legs(i, j);
                    out.add_graph(&h, c)?;
                }
            }
            Ok(())
        })
    }

    /// `γ̂(γ′)`: glue the legs of each left diagram injectively into the legs of
    /// each right diagram.
    pub fn hat_apply(&self, other: &GraphVector) -> Result<Self> {
        self.glue_into(other, false)
    }

    /// `⟨γ, γ′⟩`: sum over bijections between the leg sets.
    pub fn pairing(&self, other: &GraphVector) -> Result<Self> {
        self.glue_into(other, true)
    }

    fn glue_into(&self, other: &GraphVector, bijective: bool) -> Result<Self> {
        let mut out = Self::zero();
        for (d1, c1) in &self.terms {
            let g1 = d1.to_graph();
            for (d2, c2) in &other.terms {
                let (k, n) = (d1.leg_count(), d2.leg_count());
                if k > n || (bijective && k != n) {
                    continue;
                }
                let g = g1.disjoint_union(&d2.to_graph());
                let c = c1 * c2;
                for inj in injections(k, n) {
                    let mut h = g.clone();
                    let pairs: Vec<(usize, usize)> = inj.iter().enumerate().map(|(i, &j)| (i, k + j)).collect();
                    h.glue_pairs(&pairs);
                    out.add_graph(&h, &c)?;
                }
            }
        }
        Ok(out)
    }

    /// `⟨γ⟩`: sum of `Γ/π` over all pair partitions `π` of the legs.
    pub fn closure(&self) -> Result<Self> {
        self.map_graphs(|g, c, out| {
            let legs: Vec<usize> = (0..g.leg_count()).collect();
            for pp in enumerate_pair_partitions(&legs) {
                let mut h = g.clone();
                h.glue_pairs(&pp);
                out.add_graph(&h, c)?;
            }
            Ok(())
        })
    }

    /// Terms whose diagram has exactly one connected component.
    pub fn connected_part(&self) -> Self {
        let mut out = Self::zero();
        for (d, c) in &self.terms {
            if d.component_count() == 1 {
                out.add_term(d.clone(), c.clone());
            }
        }
        out
    }

    /// `⟨⟨γ⟩⟩`.
    pub fn connected_closure(&self) -> Result<Self> {
        Ok(self.closure()?.connected_part())
    }

    /// `H`: multiplies each diagram with `l` legs by `◯/2 + l`.
    pub fn h_apply(&self) -> Self {
        let half_circle = MultiPoly::var(Var::Circle).scale(&ratio(1, 2));
        let mut out = Self::zero();
        for (d, c) in &self.terms {
            let f = &half_circle + &MultiPoly::from_int(d.leg_count() as i64);
            out.add_term(d.clone(), c * &f);
        }
        out
    }

    /// Multiplication by `ℓ/2`.
    pub fn half_ell_mul(&self) -> Self {
        let ell = Diagram::from_codes(Vec::new(), 1);
        let mut out = Self::zero();
        for (d, c) in &self.terms {
            out.add_term(d.union(&ell), c.scale(&ratio(1, 2)));
        }
        out
    }

    /// `exp(∂) = Σ ∂ᵏ/k!`; terminates because `∂` lowers the leg count by two.
    pub fn exp_partial(&self) -> Result<Self> {
        let mut out = self.clone();
        let mut term = self.clone();
        let mut k = 1i64;
        loop {
            term = term.partial()?.scale(&ratio(1, k));
            if term.is_zero() {
                return Ok(out);
            }
            out = out.add(&term);
            k += 1;
        }
    }

    /// Whether every coefficient is a rational (no `◯`, no `a`-generators).
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.as_constant().is_some())
    }

    /// `c·D` when the vector is a single term.
    pub fn single_term(&self) -> Option<(&Diagram, &MultiPoly)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().unwrap())
    }

    /// Replaces each coefficient `c` by `f(c)`.
    pub fn map_coefficients(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Self {
        let mut out = Self::zero();
        for (d, c) in &self.terms {
            out.add_term(d.clone(), f(c));
        }
        out
    }

    /// Sorted `coefficient  key` lines, or `0`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0\n".to_string();
        }
        let mut s = String::new();
        for (d, c) in &self.terms {
            let coef = if c.len() > 1 { format!("({c})") } else { c.to_string() };
            s += &format!("{coef}  {}\n", d.key());
        }
        s
    }
}

impl fmt::Display for GraphVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl From<Diagram> for GraphVector {
    fn from(d: Diagram) -> Self {
        GraphVector::from_diagram(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn injection_counts() {
        assert_eq!(injections(2, 2).len(), 2);
        assert_eq!(injections(2, 4).len(), 12);
        assert_eq!(injections(0, 3).len(), 1);
        assert!(injections(3, 2).is_empty());
    }

    #[test]
    fn scalar_one() {
        assert_eq!(GraphVector::one().coefficient(&Diagram::empty()), MultiPoly::one());
        assert!(GraphVector::one().scale(&Rational::one()).single_term().is_some());
    }
}
