//! Canonical form modulo AS.
//!
//! Each connected component is encoded by a breadth-first labelling of its
//! trivalent vertices. The labelling is fixed by a root vertex, an ordering of
//! the root's flags, and for every later vertex the order of its two flags
//! after the one it was reached through. A vertex contributes three
//! descriptors: `0` for a leg, otherwise `1 + 3·label + slot` of the mate flag.
//! The minimal descriptor sequence over all labellings is the component code.
//! The sign compares each chosen flag order to the input cyclic order.

use super::graph::{FlagGraph, Owner};
use super::{Diagram, DiagramError, MAX_COMPONENT_VERTICES};

const NONE: usize = usize::MAX;

/// Canonical code, AS sign relative to the input, and whether some
/// self-isomorphism reverses the sign.
pub(crate) struct Canon {
    pub code: Vec<u32>,
    pub sign: i8,
    pub zero: bool,
}

struct Search<'a> {
    g: &'a FlagGraph,
    owner: &'a [Owner],
    n: usize,
    label: Vec<usize>,
    verts: Vec<usize>,
    order: Vec<[usize; 3]>,
    code: Vec<u32>,
    sign: i8,
    best: Option<Vec<u32>>,
    best_sign: i8,
    zero: bool,
}

impl Search<'_> {
    fn slot_of(&self, lab: usize, flag: usize) -> usize {
        self.order[lab].iter().position(|&f| f == flag).unwrap()
    }

    /// Emits `d`; returns `None` when the branch is pruned, otherwise whether the
    /// prefix still equals the best code.
    fn compare(&self, d: u32, equal: bool) -> Option<bool> {
        if !equal {
            return Some(false);
        }
        let best = self.best.as_ref().unwrap();
        let b = best[self.code.len()];
        if d > b {
            None
        } else {
            Some(d == b)
        }
    }

    fn step(&mut self, lab: usize, slot: usize, equal: bool) {
        if slot == 3 {
            return self.step(lab + 1, 0, equal);
        }
        if lab == self.n {
            if !equal {
                self.best = Some(self.code.clone());
                self.best_sign = self.sign;
                self.zero = false;
            } else if self.sign != self.best_sign {
                self.zero = true;
            }
            return;
        }
        let f = self.order[lab][slot];
        let m = self.g.mate[f];
        match self.owner[m] {
            Owner::Leg(_) | Owner::Dead => {
                let Some(eq) = self.compare(0, equal) else { return };
                self.code.push(0);
                self.step(lab, slot + 1, eq);
                self.code.pop();
            }
            Owner::Tri(w, s) => {
                if self.label[w] != NONE {
                    let lw = self.label[w];
                    let d = 1 + 3 * lw as u32 + self.slot_of(lw, m) as u32;
                    let Some(eq) = self.compare(d, equal) else { return };
                    self.code.push(d);
                    self.step(lab, slot + 1, eq);
                    self.code.pop();
                } else {
                    let nl = self.verts.len();
                    let d = 1 + 3 * nl as u32;
                    let Some(mut eq) = self.compare(d, equal) else { return };
                    let t = self.g.tri[w];
                    let (b, c) = (t[(s + 1) % 3], t[(s + 2) % 3]);
                    self.label[w] = nl;
                    self.verts.push(w);
                    self.code.push(d);
                    for (k, (ord, sg)) in [([m, b, c], 1i8), ([m, c, b], -1i8)].into_iter().enumerate() {
                        if k == 1 {
                            eq = self.best.is_some();
                        }
                        self.order.push(ord);
                        self.sign *= sg;
                        self.step(lab, slot + 1, eq);
                        self.sign *= sg;
                        self.order.pop();
                    }
                    self.code.pop();
                    self.verts.pop();
                    self.label[w] = NONE;
                }
            }
        }
    }
}

fn canon_component(g: &FlagGraph, owner: &[Owner], tris: &[usize]) -> Canon {
    let mut s = Search {
        g,
        owner,
        n: tris.len(),
        label: vec![NONE; g.tri.len()],
        verts: Vec::new(),
        order: Vec::new(),
        code: Vec::new(),
        sign: 1,
        best: None,
        best_sign: 1,
        zero: false,
    };
    for &r in tris {
        let t = g.tri[r];
        let orderings = [
            ([t[0], t[1], t[2]], 1i8),
            ([t[1], t[2], t[0]], 1),
            ([t[2], t[0], t[1]], 1),
            ([t[0], t[2], t[1]], -1),
            ([t[2], t[1], t[0]], -1),
            ([t[1], t[0], t[2]], -1),
        ];
        for (ord, sg) in orderings {
            s.label[r] = 0;
            s.verts.push(r);
            s.order.push(ord);
            s.sign = sg;
            let eq = s.best.is_some();
            s.step(0, 0, eq);
            s.order.pop();
            s.verts.pop();
            s.label[r] = NONE;
        }
    }
    Canon {
        code: s.best.unwrap(),
        sign: s.best_sign,
        zero: s.zero,
    }
}

/// Connected components as lists of trivalent vertices, plus the number of
/// leg–leg edges (`ℓ` components).
pub(crate) fn components(g: &FlagGraph, owner: &[Owner]) -> (Vec<Vec<usize>>, u32) {
    let mut seen = vec![false; g.tri.len()];
    let mut comps = Vec::new();
    for start in 0..g.tri.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut k = 0;
        while k < comp.len() {
            let v = comp[k];
            k += 1;
            for &f in &g.tri[v] {
                if let Owner::Tri(w, _) = owner[g.mate[f]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
        }
        comps.push(comp);
    }
    let lines = g
        .legs
        .iter()
        .filter(|&&f| matches!(owner[g.mate[f]], Owner::Leg(_)))
        .count()
        / 2;
    (comps, lines as u32)
}

/// Canonical diagram, sign and zero flag for a whole graph. `◯` factors in
/// `g.circles` are not part of the diagram.
/// Which of the two orientations of a class is its positive representative:
/// the minimal-code labelling for `t(t−1)/2` even, its reverse otherwise, on a
/// component with `t` trivalent vertices. This makes `Θ` and `w₂` positive as
/// usually drawn; any fixed choice per class would be equally valid.
pub(crate) fn orientation_convention(t: usize) -> i8 {
    if (t * t.saturating_sub(1) / 2) % 2 == 1 {
        -1
    } else {
        1
    }
}

pub(crate) fn canonicalize_graph(g: &FlagGraph) -> Result<(Diagram, i8, bool), DiagramError> {
    let owner = g.owners();
    let (comps, lines) = components(g, &owner);
    let mut codes = Vec::with_capacity(comps.len());
    let mut sign = 1i8;
    let mut zero = false;
    for comp in &comps {
        if comp.len() > MAX_COMPONENT_VERTICES {
            return Err(DiagramError::TooLarge(comp.len()));
        }
        let c = canon_component(g, &owner, comp);
        sign *= c.sign * orientation_convention(comp.len());
        zero |= c.zero;
        codes.push(c.code);
    }
    Ok((Diagram::from_codes(codes, lines), sign, zero))
}
