//! Integer partitions, pair partitions and set partitions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::coeffring::factorial;

/// An integer partition, stored as its parts in ascending order.
///
/// A part `i` stands for the index `2i` of the external encoding: the partition
/// with parts `{1, 2}` is written `4,2` and denotes `s₄s₂` or `w̃₄w̃₂`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("bad partition entry `{0}`: expected a positive even integer")]
    BadEntry(String),
}

impl Partition {
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// From internal parts in any order; zero parts are dropped.
    pub fn from_parts(parts: &[u32]) -> Self {
        let mut parts: Vec<u32> = parts.iter().copied().filter(|&p| p > 0).collect();
        parts.sort_unstable();
        Partition { parts }
    }

    /// Ascending internal parts.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `‖λ‖ = Σ i·λᵢ`.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `|λ| = Σ λᵢ`, the number of parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// `(i, λᵢ)` for each part size with nonzero multiplicity, ascending in `i`.
    pub fn multiplicities(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out.into_iter()
    }

    /// `λ! = ∏ λᵢ!`.
    pub fn factorial(&self) -> BigInt {
        self.multiplicities()
            .fold(BigInt::one(), |acc, (_, m)| acc * factorial(m))
    }

    /// Sub-partition formed by the parts at the given positions.
    pub fn select(&self, positions: &[usize]) -> Partition {
        Partition::from_parts(&positions.iter().map(|&k| self.parts[k]).collect::<Vec<_>>())
    }

    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Partition::from_parts(&parts)
    }

    /// Parses the external encoding: even indices separated by `,` or `+`.
    pub fn parse(s: &str) -> Result<Partition, PartitionError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for tok in s.split([',', '+']) {
            let tok = tok.trim();
            match tok.parse::<u32>() {
                Ok(v) if v > 0 && v % 2 == 0 => parts.push(v / 2),
                _ => return Err(PartitionError::BadEntry(tok.to_string())),
            }
        }
        Ok(Partition::from_parts(&parts))
    }

    /// External encoding with the given separator, non-increasing.
    pub fn encode(&self, sep: &str) -> String {
        self.parts
            .iter()
            .rev()
            .map(|p| (2 * p).to_string())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode(","))
    }
}

/// All partitions of `n`, lexicographic on ascending part lists.
pub fn enumerate_partitions(n: u32) -> Vec<Partition> {
    fn rec(rem: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in min..=rem {
            if rem - p != 0 && rem - p < p {
                continue;
            }
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 1, &mut Vec::new(), &mut out);
    out
}

/// A perfect matching of a label set, as sorted pairs `(a, b)` with `a < b`.
pub type PairPartition = Vec<(usize, usize)>;

/// All pair partitions of `ground`; empty when `ground` has odd size.
pub fn enumerate_pair_partitions(ground: &[usize]) -> Vec<PairPartition> {
    fn rec(rest: &[usize], cur: &mut PairPartition, out: &mut Vec<PairPartition>) {
        let Some((&first, tail)) = rest.split_first() else {
            let mut pp = cur.clone();
            pp.sort_unstable();
            out.push(pp);
            return;
        };
        for k in 0..tail.len() {
            let other = tail[k];
            let remaining: Vec<usize> = tail
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &x)| x)
                .collect();
            cur.push((first.min(other), first.max(other)));
            rec(&remaining, cur, out);
            cur.pop();
        }
    }
    if ground.len() % 2 == 1 {
        return Vec::new();
    }
    let mut sorted = ground.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    rec(&sorted, &mut Vec::new(), &mut out);
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Whether the pairs of `pp` link all `blocks` into a single cluster.
pub fn connects(blocks: &[Vec<usize>], pp: &[(usize, usize)]) -> bool {
    if blocks.len() <= 1 {
        return true;
    }
    let owner = |x: usize| blocks.iter().position(|b| b.contains(&x));
    let mut uf = UnionFind::new(blocks.len());
    for &(a, b) in pp {
        if let (Some(i), Some(j)) = (owner(a), owner(b)) {
            uf.union(i, j);
        }
    }
    let root = uf.find(0);
    (1..blocks.len()).all(|i| uf.find(i) == root)
}

/// Pair partitions of the union of `blocks` under which the blocks are connected.
pub fn enumerate_connecting_pair_partitions(blocks: &[Vec<usize>]) -> Vec<PairPartition> {
    let ground: Vec<usize> = blocks.iter().flatten().copied().collect();
    enumerate_pair_partitions(&ground)
        .into_iter()
        .filter(|pp| connects(blocks, pp))
        .collect()
}

/// All set partitions of `{0, …, n−1}` via restricted growth strings.
///
/// Blocks are listed in order of their smallest element, each block ascending.
pub fn enumerate_set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(k: usize, n: usize, rgs: &mut Vec<usize>, blocks: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if k == n {
            let mut bs = vec![Vec::new(); blocks];
            for (i, &b) in rgs.iter().enumerate() {
                bs[b].push(i);
            }
            out.push(bs);
            return;
        }
        for b in 0..=blocks {
            rgs.push(b);
            rec(k + 1, n, rgs, blocks.max(b + 1), out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), 0, &mut out);
    out
}

/// `(2m−1)!!`, the number of pair partitions of `2m` elements.
pub fn double_factorial_odd(m: u32) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * BigInt::from(2 * i - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accessors() {
        let l = Partition::from_parts(&[1, 1, 2]);
        assert_eq!(l.weight(), 4);
        assert_eq!(l.length(), 3);
        assert_eq!(l.factorial(), BigInt::from(2));
        assert_eq!(l.to_string(), "4,2,2");
        assert_eq!(l.encode("+"), "4+2+2");
    }

    #[test]
    fn parse_encoding() {
        assert_eq!(Partition::parse("4,2").unwrap(), Partition::from_parts(&[2, 1]));
        assert_eq!(Partition::parse("2+2").unwrap(), Partition::from_parts(&[1, 1]));
        assert_eq!(Partition::parse("").unwrap(), Partition::empty());
        assert!(Partition::parse("3").is_err());
        assert!(Partition::parse("2,,4").is_err());
        assert!(Partition::parse("0").is_err());
    }

    #[test]
    fn small_partition_lists() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(4).len(), 5);
        let three: Vec<Vec<u32>> = enumerate_partitions(3).iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(three, vec![vec![1, 1, 1], vec![1, 2], vec![3]]);
    }

    #[test]
    fn pair_partition_counts() {
        assert_eq!(enumerate_pair_partitions(&[0, 1]).len(), 1);
        assert_eq!(enumerate_pair_partitions(&[0, 1, 2, 3]).len(), 3);
        assert_eq!(enumerate_pair_partitions(&[0, 1, 2, 3, 4, 5]).len(), 15);
        assert!(enumerate_pair_partitions(&[0, 1, 2]).is_empty());
    }

    #[test]
    fn connecting_pair_partitions() {
        let two = vec![vec![0, 1], vec![2, 3]];
        let c = enumerate_connecting_pair_partitions(&two);
        assert_eq!(c, vec![vec![(0, 2), (1, 3)], vec![(0, 3), (1, 2)]]);
        assert!(!c.contains(&vec![(0, 1), (2, 3)]));
        let one = vec![vec![0, 1, 2, 3]];
        assert_eq!(enumerate_connecting_pair_partitions(&one).len(), 3);
    }

    #[test]
    fn bell_numbers() {
        assert_eq!(enumerate_set_partitions(0).len(), 1);
        assert_eq!(enumerate_set_partitions(1).len(), 1);
        assert_eq!(enumerate_set_partitions(3).len(), 5);
        assert_eq!(enumerate_set_partitions(4).len(), 15);
    }
}
