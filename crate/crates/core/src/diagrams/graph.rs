//! Mutable flag-level representation used while gluing.

/// Who owns a flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Owner {
    /// Trivalent vertex index and slot in its cyclic triple.
    Tri(usize, usize),
    /// Index into `legs`.
    Leg(usize),
    Dead,
}

/// Vertex-oriented unitrivalent graph. Each flag sits in exactly one vertex and
/// `mate` pairs the two flags of every edge.
#[derive(Clone, Debug, Default)]
pub struct FlagGraph {
    pub(crate) tri: Vec<[usize; 3]>,
    pub(crate) legs: Vec<usize>,
    pub(crate) mate: Vec<usize>,
    /// Number of `◯` factors split off by gluing the two ends of an `ℓ`.
    pub(crate) circles: u32,
}

impl FlagGraph {
    pub(crate) fn new_flag(&mut self) -> usize {
        self.mate.push(usize::MAX);
        self.mate.len() - 1
    }

    pub(crate) fn join(&mut self, a: usize, b: usize) {
        self.mate[a] = b;
        self.mate[b] = a;
    }

    pub(crate) fn add_tri(&mut self) -> [usize; 3] {
        let t = [self.new_flag(), self.new_flag(), self.new_flag()];
        self.tri.push(t);
        t
    }

    pub(crate) fn add_leg(&mut self) -> usize {
        let f = self.new_flag();
        self.legs.push(f);
        f
    }

    pub fn leg_count(&self) -> usize {
        self.legs.len()
    }

    pub fn tri_count(&self) -> usize {
        self.tri.len()
    }

    pub(crate) fn owners(&self) -> Vec<Owner> {
        let mut own = vec![Owner::Dead; self.mate.len()];
        for (v, t) in self.tri.iter().enumerate() {
            for (s, &f) in t.iter().enumerate() {
                own[f] = Owner::Tri(v, s);
            }
        }
        for (i, &f) in self.legs.iter().enumerate() {
            own[f] = Owner::Leg(i);
        }
        own
    }

    /// Disjoint union; flags of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &FlagGraph) -> FlagGraph {
        let off = self.mate.len();
        let mut g = self.clone();
        g.tri
            .extend(other.tri.iter().map(|t| [t[0] + off, t[1] + off, t[2] + off]));
        g.legs.extend(other.legs.iter().map(|f| f + off));
        g.mate.extend(other.mate.iter().map(|m| m + off));
        g.circles += other.circles;
        g
    }

    /// Glues two leg flags: both univalent vertices disappear and their
    /// neighbours are joined. Gluing the two ends of one `ℓ` yields a `◯`.
    pub(crate) fn glue_flags(&mut self, f: usize, g: usize) {
        debug_assert!(f != g);
        let (a, b) = (self.mate[f], self.mate[g]);
        if a == g {
            self.circles += 1;
        } else {
            self.join(a, b);
        }
        self.legs.retain(|&x| x != f && x != g);
        self.mate[f] = usize::MAX;
        self.mate[g] = usize::MAX;
    }

    /// Glues the legs at positions `i` and `j` of the leg list.
    pub fn glue_legs(&mut self, i: usize, j: usize) {
        let (f, g) = (self.legs[i], self.legs[j]);
        self.glue_flags(f, g);
    }

    /// Glues a batch of leg-position pairs, resolved before any gluing happens.
    pub fn glue_pairs(&mut self, pairs: &[(usize, usize)]) {
        let flags: Vec<(usize, usize)> = pairs.iter().map(|&(i, j)| (self.legs[i], self.legs[j])).collect();
        for (f, g) in flags {
            self.glue_flags(f, g);
        }
    }
}
