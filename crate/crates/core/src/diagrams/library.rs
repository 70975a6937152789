//! Named diagrams and exhaustive diagram enumerators.

use std::collections::BTreeSet;

use super::graph::FlagGraph;
use super::{canonicalize, Diagram, DiagramSketch, GraphVector};
use crate::coeffring::rat;
use crate::partitions::{enumerate_pair_partitions, Partition};

/// `ℓ`: two legs joined by an edge.
pub fn ell() -> Diagram {
    Diagram::from_codes(Vec::new(), 1)
}

/// Graph of the wheel `w_k`: vertex `i` has cyclic order
/// (leg, edge to `i+1`, edge to `i−1`).
pub fn wheel_graph(k: usize) -> FlagGraph {
    let mut g = FlagGraph::default();
    let verts: Vec<[usize; 3]> = (0..k).map(|_| g.add_tri()).collect();
    for v in &verts {
        let leg = g.add_leg();
        g.join(v[0], leg);
    }
    for i in 0..k {
        let next = verts[(i + 1) % k];
        g.join(verts[i][1], next[2]);
    }
    g
}

/// `w_k` as a vector; zero for odd `k`.
pub fn wheel(k: usize) -> GraphVector {
    GraphVector::from_graph(&wheel_graph(k)).expect("wheels are far below the vertex cap")
}

/// `w̃_{2λ} = ∏ (−w_{2i})^{λᵢ}`.
pub fn wheel_tilde_product(lambda: &Partition) -> GraphVector {
    let mut out = GraphVector::one();
    for &i in lambda.parts() {
        out = out.product(&wheel(2 * i as usize).scale(&rat(-1)));
    }
    out
}

/// `∏ w_{2i}^{λᵢ}` without the tilde sign.
pub fn wheel_product(lambda: &Partition) -> GraphVector {
    let mut out = GraphVector::one();
    for &i in lambda.parts() {
        out = out.product(&wheel(2 * i as usize));
    }
    out
}

pub const THETA_SKETCH: &str = "\
# theta: two trivalent vertices joined by three edges
V top T e1 e2 e3
V bottom T g3 g2 g1
E e1 g1
E e2 g2
E e3 g3
";

/// Vector of a sketch known to be well formed.
pub fn sketch_vector(text: &str) -> GraphVector {
    GraphVector::from_graph(&DiagramSketch::parse(text).unwrap().to_graph().unwrap()).unwrap()
}

/// `Θ`.
pub fn theta() -> GraphVector {
    sketch_vector(THETA_SKETCH)
}

/// Hand-drawn `Θ₂`: a square with both diagonals, oriented so that it equals
/// the cross gluing of two copies of `w₂`.
pub const THETA2_SKETCH: &str = "\
V A T a3 a1 a2
V B T b4 b2 b1
V C T c3 c5 c6
V D T d6 d5 d4
E a1 b1
E a2 b2
E a3 c3
E b4 d4
E c5 d5
E c6 d6
";

/// `Θ₂`, defined as the gluing of `w₂ ∪ w₂` along a cross matching.
pub fn theta2() -> GraphVector {
    let mut h = wheel_graph(2).disjoint_union(&wheel_graph(2));
    h.glue_pairs(&[(0, 2), (1, 3)]);
    GraphVector::from_graph(&h).unwrap()
}

/// Every nonzero canonical diagram with at most `max_flags` flags
/// (three per trivalent vertex, one per leg), including `ℓ` components and
/// the empty diagram.
pub fn enumerate_by_flags(max_flags: usize) -> Vec<Diagram> {
    let mut seen = BTreeSet::new();
    for t in 0..=max_flags / 3 {
        for u in 0..=max_flags - 3 * t {
            if (3 * t + u) % 2 == 1 {
                continue;
            }
            let mut base = FlagGraph::default();
            for _ in 0..t {
                base.add_tri();
            }
            for _ in 0..u {
                base.add_leg();
            }
            let all: Vec<usize> = (0..3 * t + u).collect();
            for pp in enumerate_pair_partitions(&all) {
                let mut g = base.clone();
                for &(a, b) in &pp {
                    g.join(a, b);
                }
                let c = canonicalize(&g).unwrap();
                if !c.parity_zero {
                    seen.insert(c.diagram);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Every nonzero `ℓ`-free canonical diagram with at most `max_tri` trivalent
/// vertices and at most `max_legs` legs.
///
/// Built one trivalent vertex at a time: each of the new vertex's flags either
/// takes a fresh leg or replaces an existing leg. Deleting a vertex from a
/// diagram adds at most three legs, so level `t` keeps diagrams with up to
/// `max_legs + 3(max_tri − t)` legs. Zero classes stay in the levels because
/// their extensions need not vanish.
pub fn enumerate_by_augmentation(max_tri: usize, max_legs: usize) -> Vec<Diagram> {
    let bound = |t: usize| max_legs + 3 * (max_tri - t);
    let mut level: BTreeSet<(Diagram, bool)> = BTreeSet::new();
    level.insert((Diagram::empty(), false));
    let mut found: BTreeSet<Diagram> = BTreeSet::new();
    found.insert(Diagram::empty());
    for t in 1..=max_tri {
        let mut next: BTreeSet<(Diagram, bool)> = BTreeSet::new();
        for (d, _) in &level {
            let g = d.to_graph();
            let l = g.leg_count();
            let choices: Vec<Option<usize>> = std::iter::once(None).chain((0..l).map(Some)).collect();
            for &x0 in &choices {
                for &x1 in &choices {
                    for &x2 in &choices {
                        let xs = [x0, x1, x2];
                        let used: Vec<usize> = xs.iter().flatten().copied().collect();
                        let distinct: BTreeSet<usize> = used.iter().copied().collect();
                        if distinct.len() != used.len() {
                            continue;
                        }
                        let new_legs = l - used.len() + (3 - used.len());
                        if new_legs > bound(t) {
                            continue;
                        }
                        let mut h = g.clone();
                        let v = h.add_tri();
                        let removed: Vec<usize> = used.iter().map(|&p| g.legs[p]).collect();
                        for (slot, x) in xs.iter().enumerate() {
                            match x {
                                None => {
                                    let leg = h.add_leg();
                                    h.join(v[slot], leg);
                                }
                                Some(p) => {
                                    let nb = h.mate[g.legs[*p]];
                                    h.join(v[slot], nb);
                                }
                            }
                        }
                        h.legs.retain(|f| !removed.contains(f));
                        let c = canonicalize(&h).unwrap();
                        next.insert((c.diagram, c.parity_zero));
                    }
                }
            }
        }
        for (d, zero) in &next {
            if !zero && d.leg_count() <= max_legs {
                found.insert(d.clone());
            }
        }
        level = next;
    }
    found.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_wheels_vanish() {
        assert!(wheel(1).is_zero());
        assert!(wheel(3).is_zero());
        assert!(wheel(5).is_zero());
        assert!(!wheel(2).is_zero());
        assert!(!wheel(4).is_zero());
    }

    #[test]
    fn theta2_hand_drawing_matches_gluing() {
        assert_eq!(sketch_vector(THETA2_SKETCH), theta2());
        assert_eq!(theta2().len(), 1);
    }

    #[test]
    fn small_enumerations_agree() {
        let all = enumerate_by_flags(10);
        for (t, l) in [(2, 2), (3, 1), (2, 4), (1, 6)] {
            let by_flags: BTreeSet<Diagram> = all
                .iter()
                .filter(|d| d.line_count() == 0 && d.tri_count() <= t && d.leg_count() <= l)
                .cloned()
                .collect();
            let by_aug: BTreeSet<Diagram> = enumerate_by_augmentation(t, l).into_iter().collect();
            assert_eq!(by_flags, by_aug, "t = {t}, l = {l}");
        }
    }
}
