//! Jacobi diagrams modulo AS and the operators acting on them.
//!
//! A [`Diagram`] is a canonical representative: components are stored as
//! canonical codes (see [`canon`]) and `ℓ` components are counted separately.
//! Linear combinations live in [`GraphVector`], with `◯` kept in the
//! coefficient ring.

mod canon;
mod graph;
pub mod library;
pub mod sl2;
mod vector;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use graph::FlagGraph;
pub use vector::GraphVector;

/// Largest number of trivalent vertices in one connected component that the
/// canonical search accepts.
pub const MAX_COMPONENT_VERTICES: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("flag `{0}` appears in more than one vertex")]
    FlagReusedInVertex(String),
    #[error("flag `{0}` appears in more than one edge")]
    FlagReusedInEdge(String),
    #[error("flag `{0}` is not attached to any vertex")]
    DanglingFlag(String),
    #[error("flag `{0}` is not on any edge")]
    UnmatchedFlag(String),
    #[error("vertex id `{0}` is used twice")]
    DuplicateVertex(String),
    #[error("leg index {0} out of range")]
    NotALeg(usize),
    #[error("leg pairs overlap at leg {0}")]
    OverlappingPairs(usize),
    #[error("component with {0} trivalent vertices exceeds the canonicalization cap of {MAX_COMPONENT_VERTICES}")]
    TooLarge(usize),
}

/// Canonical vertex-oriented diagram, without its sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    comps: Vec<Vec<u32>>,
    lines: u32,
    key: String,
}

impl PartialOrd for Diagram {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Diagram {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key.cmp(&other.key)
    }
}

fn render_component(code: &[u32]) -> String {
    code.chunks(3)
        .map(|v| {
            v.iter()
                .map(|&d| {
                    if d == 0 {
                        "L".to_string()
                    } else {
                        let (lab, slot) = ((d - 1) / 3, (d - 1) % 3);
                        format!("{lab}{}", (b'a' + slot as u8) as char)
                    }
                })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join(",")
}

impl Diagram {
    pub(crate) fn from_codes(mut comps: Vec<Vec<u32>>, lines: u32) -> Diagram {
        comps.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut parts: Vec<String> = comps.iter().map(|c| render_component(c)).collect();
        parts.extend((0..lines).map(|_| "l".to_string()));
        let key = if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("|")
        };
        Diagram { comps, lines, key }
    }

    /// The empty diagram `1`.
    pub fn empty() -> Diagram {
        Diagram::from_codes(Vec::new(), 0)
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn tri_count(&self) -> usize {
        self.comps.iter().map(|c| c.len() / 3).sum()
    }

    pub fn leg_count(&self) -> usize {
        self.comps.iter().flatten().filter(|&&d| d == 0).count() + 2 * self.lines as usize
    }

    /// Number of connected components, counting each `ℓ`.
    pub fn component_count(&self) -> usize {
        self.comps.len() + self.lines as usize
    }

    pub fn line_count(&self) -> u32 {
        self.lines
    }

    /// Diagram with its `ℓ` components removed.
    pub fn without_lines(&self) -> Diagram {
        Diagram::from_codes(self.comps.clone(), 0)
    }

    /// Disjoint union.
    pub fn union(&self, other: &Diagram) -> Diagram {
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        Diagram::from_codes(comps, self.lines + other.lines)
    }

    /// The connected components, each as its own diagram (an `ℓ` included).
    pub fn components(&self) -> Vec<Diagram> {
        let mut out: Vec<Diagram> = self
            .comps
            .iter()
            .map(|c| Diagram::from_codes(vec![c.clone()], 0))
            .collect();
        out.extend((0..self.lines).map(|_| Diagram::from_codes(Vec::new(), 1)));
        out
    }

    /// Flag graph of the positive representative (sign `+1`).
    pub fn to_graph(&self) -> FlagGraph {
        let mut g = FlagGraph::default();
        let mut reversed = Vec::new();
        for code in &self.comps {
            let base = g.mate.len();
            let nv = code.len() / 3;
            if canon::orientation_convention(nv) < 0 {
                reversed.push(base);
            }
            for _ in 0..nv {
                g.add_tri();
            }
            for (pos, &d) in code.iter().enumerate() {
                let f = base + pos;
                if d == 0 {
                    let leg = g.add_leg();
                    g.join(f, leg);
                } else {
                    g.mate[f] = base + d as usize - 1;
                }
            }
        }
        for base in reversed {
            // Swap the last two flags of the component's first vertex.
            let (f1, f2) = (base + 1, base + 2);
            let (m1, m2) = (g.mate[f1], g.mate[f2]);
            if m1 != f2 {
                g.join(f1, m2);
                g.join(f2, m1);
            }
        }
        for _ in 0..self.lines {
            let a = g.add_leg();
            let b = g.add_leg();
            g.join(a, b);
        }
        g
    }

    /// Renders the diagram in the sketch file format.
    pub fn to_sketch_text(&self) -> String {
        graph_to_sketch_text(&self.to_graph())
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key)
    }
}

pub(crate) fn graph_to_sketch_text(g: &FlagGraph) -> String {
    let mut out = String::new();
    for (v, t) in g.tri.iter().enumerate() {
        out += &format!("V t{v} T f{} f{} f{}\n", t[0], t[1], t[2]);
    }
    for (i, &f) in g.legs.iter().enumerate() {
        out += &format!("V u{i} U f{f}\n");
    }
    let mut live: Vec<usize> = g.tri.iter().flatten().copied().chain(g.legs.iter().copied()).collect();
    live.sort_unstable();
    for f in live {
        let m = g.mate[f];
        if f < m {
            out += &format!("E f{f} f{m}\n");
        }
    }
    out
}

/// Diagram as read from a file: named vertices, named flags and edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramSketch {
    pub trivalent: Vec<(String, [String; 3])>,
    pub univalent: Vec<(String, String)>,
    pub edges: Vec<(String, String)>,
}

impl DiagramSketch {
    /// Parses the `V … T`, `V … U`, `E` line format; `#` starts a comment.
    pub fn parse(text: &str) -> Result<DiagramSketch, DiagramError> {
        let mut sk = DiagramSketch::default();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| DiagramError::Syntax {
                line: ln + 1,
                msg: msg.to_string(),
            };
            match toks.as_slice() {
                ["V", id, "T", a, b, c] => sk
                    .trivalent
                    .push((id.to_string(), [a.to_string(), b.to_string(), c.to_string()])),
                ["V", id, "U", a] => sk.univalent.push((id.to_string(), a.to_string())),
                ["V", ..] => return Err(bad("expected `V <id> T <f1> <f2> <f3>` or `V <id> U <f>`")),
                ["E", a, b] => sk.edges.push((a.to_string(), b.to_string())),
                ["E", ..] => return Err(bad("expected `E <fa> <fb>`")),
                _ => return Err(bad(&format!("unknown record `{}`", toks[0]))),
            }
        }
        Ok(sk)
    }

    /// Checks the flag discipline and builds the flag graph.
    pub fn to_graph(&self) -> Result<FlagGraph, DiagramError> {
        let mut ids = BTreeSet::new();
        for id in self
            .trivalent
            .iter()
            .map(|t| &t.0)
            .chain(self.univalent.iter().map(|u| &u.0))
        {
            if !ids.insert(id.clone()) {
                return Err(DiagramError::DuplicateVertex(id.clone()));
            }
        }
        let mut g = FlagGraph::default();
        let mut flag_of: BTreeMap<&str, usize> = BTreeMap::new();
        let names = self
            .trivalent
            .iter()
            .flat_map(|(_, fl)| fl.iter())
            .chain(self.univalent.iter().map(|(_, f)| f));
        for name in names {
            if flag_of.insert(name.as_str(), usize::MAX).is_some() {
                return Err(DiagramError::FlagReusedInVertex(name.clone()));
            }
        }
        for (_, fl) in &self.trivalent {
            let t = g.add_tri();
            for (k, name) in fl.iter().enumerate() {
                flag_of.insert(name.as_str(), t[k]);
            }
        }
        for (_, name) in &self.univalent {
            let f = g.add_leg();
            flag_of.insert(name.as_str(), f);
        }
        for (a, b) in &self.edges {
            let fa = *flag_of
                .get(a.as_str())
                .ok_or_else(|| DiagramError::DanglingFlag(a.clone()))?;
            let fb = *flag_of
                .get(b.as_str())
                .ok_or_else(|| DiagramError::DanglingFlag(b.clone()))?;
            if g.mate[fa] != usize::MAX || fa == fb {
                return Err(DiagramError::FlagReusedInEdge(a.clone()));
            }
            if g.mate[fb] != usize::MAX {
                return Err(DiagramError::FlagReusedInEdge(b.clone()));
            }
            g.join(fa, fb);
        }
        for (name, &f) in &flag_of {
            if g.mate[f] == usize::MAX {
                return Err(DiagramError::UnmatchedFlag(name.to_string()));
            }
        }
        Ok(g)
    }
}

/// Result of canonicalizing one graph: `sign·diagram`, or zero by AS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub diagram: Diagram,
    pub sign: i8,
    pub parity_zero: bool,
}

/// Canonical form of a flag graph, ignoring its `◯` count.
pub fn canonicalize(g: &FlagGraph) -> Result<Canonical, DiagramError> {
    let (diagram, sign, parity_zero) = canon::canonicalize_graph(g)?;
    Ok(Canonical {
        diagram,
        sign,
        parity_zero,
    })
}

/// Parses and canonicalizes a sketch file.
pub fn canonicalize_text(text: &str) -> Result<Canonical, DiagramError> {
    canonicalize(&DiagramSketch::parse(text)?.to_graph()?)
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;
    use crate::coeffring::{MultiPoly, Var};

    fn v(d: Diagram) -> GraphVector {
        GraphVector::from_diagram(d)
    }

    #[test]
    fn closure_examples() {
        let w2 = wheel(2);
        assert_eq!(w2.closure().unwrap(), theta());
        assert_eq!(w2.connected_closure().unwrap(), theta());
        let w2sq = w2.product(&w2);
        let expect = theta2()
            .scale(&crate::coeffring::rat(2))
            .add(&theta().product(&theta()));
        assert_eq!(w2sq.closure().unwrap(), expect);
        assert_eq!(
            w2sq.connected_closure().unwrap(),
            theta2().scale(&crate::coeffring::rat(2))
        );
        assert_eq!(theta().closure().unwrap(), theta());
    }

    #[test]
    fn partial_examples() {
        assert_eq!(wheel(2).partial().unwrap(), theta());
        let circle = GraphVector::term(Diagram::empty(), MultiPoly::var(Var::Circle));
        assert_eq!(v(ell()).partial().unwrap(), circle);
        assert!(theta().partial().unwrap().is_zero());
        let half_hat = v(ell())
            .hat_apply(&wheel(4))
            .unwrap()
            .scale(&crate::coeffring::ratio(1, 2));
        assert_eq!(half_hat, wheel(4).partial().unwrap());
        assert_eq!(
            v(ell()).hat_apply(&v(ell())).unwrap(),
            circle.scale(&crate::coeffring::rat(2))
        );
        assert_eq!(GraphVector::one().hat_apply(&wheel(4)).unwrap(), wheel(4));
    }

    #[test]
    fn pairing_examples() {
        let two_theta2 = theta2().scale(&crate::coeffring::rat(2));
        assert_eq!(wheel(2).pairing(&wheel(2)).unwrap(), two_theta2);
        assert_eq!(GraphVector::one().pairing(&theta()).unwrap(), theta());
        assert!(GraphVector::one().pairing(&wheel(2)).unwrap().is_zero());
    }

    #[test]
    fn loops_and_relabeling() {
        let looped = "V a T x y z\nV b T p q r\nE x y\nE z p\nV u U s\nV w U t\nE q s\nE r t\n";
        assert!(canonicalize_text(looped).unwrap().parity_zero);
        // Θ with the bottom vertex written in the opposite orientation is −Θ.
        let flipped = "V top T e1 e2 e3\nV bottom T g1 g2 g3\nE e1 g1\nE e2 g2\nE e3 g3\n";
        let c = canonicalize_text(flipped).unwrap();
        let flipped = GraphVector::term(c.diagram, MultiPoly::from_int(c.sign as i64));
        assert_eq!(flipped, theta().scale(&crate::coeffring::rat(-1)));
    }

    #[test]
    fn glue_two_wheels_at_one_leg() {
        let mut g = wheel_graph(2).disjoint_union(&wheel_graph(2));
        g.glue_legs(0, 2);
        let c = canonicalize(&g).unwrap();
        assert_eq!(c.diagram.tri_count(), 4);
        assert_eq!(c.diagram.leg_count(), 2);
        assert_eq!(c.diagram.component_count(), 1);
    }

    #[test]
    fn sketch_errors() {
        assert_eq!(
            canonicalize_text("V a T x y z\nE x y\n").unwrap_err(),
            DiagramError::UnmatchedFlag("z".into())
        );
        assert_eq!(
            canonicalize_text("V a U x\nV b U x\nE x x\n").unwrap_err(),
            DiagramError::FlagReusedInVertex("x".into())
        );
        assert_eq!(
            canonicalize_text("V a U x\nV b U y\nE x q\n").unwrap_err(),
            DiagramError::DanglingFlag("q".into())
        );
        assert!(matches!(
            canonicalize_text("Q\n"),
            Err(DiagramError::Syntax { line: 1, .. })
        ));
        let big = wheel_graph(16);
        assert_eq!(canonicalize(&big).unwrap_err(), DiagramError::TooLarge(16));
    }

    #[test]
    fn sketch_round_trip() {
        let d = theta2().single_term().unwrap().0.clone();
        let c = canonicalize_text(&d.to_sketch_text()).unwrap();
        assert_eq!((c.diagram, c.sign, c.parity_zero), (d, 1, false));
    }

    #[test]
    fn sl2_small() {
        let rep = sl2::sl2_check(6).unwrap();
        assert!(rep.passed(), "{:?}", rep.violation);
    }
}
