#![allow(dead_code)]

use polywheel::diagrams::{DiagramSketch, GraphVector};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random isomorphic copy of a sketch: fresh vertex and flag names, shuffled
/// lines, swapped edge ends, and a random permutation of every trivalent
/// triple. Returns the new text and the AS sign of the triple permutations.
pub fn relabel(sk: &DiagramSketch, rng: &mut impl Rng) -> (String, i8) {
    let mut flags: Vec<&String> = sk
        .trivalent
        .iter()
        .flat_map(|(_, f)| f.iter())
        .chain(sk.univalent.iter().map(|(_, f)| f))
        .collect();
    flags.shuffle(rng);
    let name = |f: &String| format!("h{}", flags.iter().position(|g| *g == f).unwrap());
    let perms: [([usize; 3], i8); 6] = [
        ([0, 1, 2], 1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
        ([1, 0, 2], -1),
    ];
    let mut sign = 1i8;
    let mut lines = Vec::new();
    let n = sk.trivalent.len() + sk.univalent.len();
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    for (k, (_, f)) in sk.trivalent.iter().enumerate() {
        let (p, s) = perms[rng.gen_range(0..6)];
        sign *= s;
        lines.push(format!(
            "V n{} T {} {} {}",
            ids[k],
            name(&f[p[0]]),
            name(&f[p[1]]),
            name(&f[p[2]])
        ));
    }
    for (k, (_, f)) in sk.univalent.iter().enumerate() {
        lines.push(format!("V n{} U {}", ids[sk.trivalent.len() + k], name(f)));
    }
    for (a, b) in &sk.edges {
        if rng.gen_bool(0.5) {
            lines.push(format!("E {} {}", name(a), name(b)));
        } else {
            lines.push(format!("E {} {}", name(b), name(a)));
        }
    }
    lines.shuffle(rng);
    (lines.join("\n") + "\n", sign)
}

pub fn vector(text: &str) -> GraphVector {
    GraphVector::from_graph(&DiagramSketch::parse(text).unwrap().to_graph().unwrap()).unwrap()
}

/// `p(n)` from the pentagonal-number recurrence, independent of enumeration.
pub fn partition_count(n: usize) -> u64 {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut total = 0i64;
        for k in 1i64.. {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let s = if k % 2 == 1 { 1 } else { -1 };
            total += s * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                total += s * p[m - g2];
            }
        }
        p[m] = total;
    }
    p[n] as u64
}
