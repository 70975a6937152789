mod common;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polywheel::coeffring::{rat, ratio, Monomial, MultiPoly, Rational, Var};
use polywheel::diagrams::library::{ell, enumerate_by_augmentation, wheel};
use polywheel::diagrams::{canonicalize_text, Diagram, DiagramSketch, GraphVector};
use polywheel::partitions::{
    double_factorial_odd, enumerate_connecting_pair_partitions, enumerate_pair_partitions, enumerate_partitions,
    enumerate_set_partitions, Partition,
};
use polywheel::series::TruncSeries;

const VARS: [Var; 4] = [Var::A(2), Var::A(4), Var::Circle, Var::X];

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((small_rational(), prop::collection::vec(0u32..3, 4)), 0..5).prop_map(|terms| {
        let mut p = MultiPoly::zero();
        for (c, exps) in terms {
            let m = Monomial::from_factors(VARS.iter().copied().zip(exps));
            p.add_term(m, c);
        }
        p
    })
}

fn a_poly() -> impl Strategy<Value = MultiPoly> {
    poly().prop_map(|p| p.substitute(&Var::Circle, &MultiPoly::from_int(3)))
}

fn series(order: usize, constant: Option<Rational>) -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec(small_rational(), order + 1).prop_map(move |mut c| {
        if let Some(k) = &constant {
            c[0] = k.clone();
        }
        TruncSeries::from_rationals(&c, order)
    })
}

fn reversible(order: usize) -> impl Strategy<Value = TruncSeries> {
    (
        series(order, Some(rat(0))),
        small_rational().prop_filter("nonzero", |r| *r != rat(0)),
    )
        .prop_map(move |(s, lead)| {
            let mut c = s.coeffs().to_vec();
            c[1] = MultiPoly::constant(lead);
            TruncSeries::new(c, order)
        })
}

fn diagrams() -> &'static [Diagram] {
    static CELL: OnceLock<Vec<Diagram>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut v = enumerate_by_augmentation(4, 4);
        for w in [wheel(4), wheel(6), wheel(2).pow(2).product(&wheel(4))] {
            v.extend(w.terms().map(|(d, _)| d.clone()));
        }
        v.push(ell().union(&v[3]));
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &MultiPoly::one(), p.clone());
        prop_assert_eq!(p.pow(2), &p * &p);
    }

    #[test]
    fn extract_partial_is_linear(p in a_poly(), q in a_poly(), c in small_rational(), k in 1u32..4) {
        for lambda in enumerate_partitions(k) {
            let lhs = (&p.scale(&c) + &q).extract_partial(&lambda).unwrap();
            let rhs = &p.extract_partial(&lambda).unwrap().scale(&c) + &q.extract_partial(&lambda).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn extract_partial_reads_monomials(k in 1u32..5, c in small_rational()) {
        for lambda in enumerate_partitions(k) {
            let p = MultiPoly::a_monomial(&lambda).scale(&c);
            let want = &c * Rational::from_integer(lambda.factorial());
            prop_assert_eq!(p.extract_partial_rational(&lambda).unwrap(), want);
            for mu in enumerate_partitions(k) {
                if mu != lambda {
                    prop_assert_eq!(p.extract_partial_rational(&mu).unwrap(), rat(0));
                }
            }
        }
    }

    #[test]
    fn exp_log_round_trip(s in series(7, Some(rat(0)))) {
        let e = s.exp().unwrap();
        prop_assert!(e.agrees_to(&s.exp_by_partitions().unwrap(), 7));
        prop_assert!(e.log().unwrap().agrees_to(&s, 7));
        let u = e.mul(&TruncSeries::from_rationals(&[rat(1), rat(2)], 7));
        prop_assert!(u.log().unwrap().exp().unwrap().agrees_to(&u, 7));
    }

    #[test]
    fn exp_turns_sums_into_products(s in series(6, Some(rat(0))), r in series(6, Some(rat(0)))) {
        let lhs = s.add(&r).exp().unwrap();
        let rhs = s.exp().unwrap().mul(&r.exp().unwrap());
        prop_assert!(lhs.agrees_to(&rhs, 6));
    }

    #[test]
    fn reversion_is_two_sided(f in reversible(7)) {
        let g = f.reversion().unwrap();
        let t = TruncSeries::t(7);
        prop_assert!(f.compose(&g).unwrap().agrees_to(&t, 7));
        prop_assert!(g.compose(&f).unwrap().agrees_to(&t, 7));
    }

    #[test]
    fn chain_rule(f in series(6, None), g in series(6, Some(rat(0)))) {
        let lhs = f.compose(&g).unwrap().derivative();
        let rhs = f.derivative().compose(&g.truncate(5)).unwrap().mul(&g.derivative());
        prop_assert!(lhs.agrees_to(&rhs, 5));
    }

    #[test]
    fn division_inverts_multiplication(s in series(6, None), u in series(6, Some(rat(3)))) {
        prop_assert!(s.mul(&u).div(&u).unwrap().agrees_to(&s, 6));
    }

    #[test]
    fn canonical_form_is_label_invariant(idx in 0usize..10_000, seed in any::<u64>()) {
        let ds = diagrams();
        let d = &ds[idx % ds.len()];
        let sk = DiagramSketch::parse(&d.to_sketch_text()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (text, flips) = common::relabel(&sk, &mut rng);
        let c = canonicalize_text(&text).unwrap();
        prop_assert_eq!(&c.diagram, d);
        prop_assert_eq!(c.sign, flips);
    }

    #[test]
    fn product_commutes_and_partial_is_half_ell_hat(i in 0usize..10_000, j in 0usize..10_000) {
        let ds = diagrams();
        let g = GraphVector::from_diagram(ds[i % ds.len()].clone());
        let h = GraphVector::from_diagram(ds[j % ds.len()].clone());
        prop_assert_eq!(g.product(&h), h.product(&g));
        let l = GraphVector::from_diagram(ell());
        prop_assert_eq!(l.hat_apply(&g).unwrap().scale(&ratio(1, 2)), g.partial().unwrap());
    }
}

/// `exp(ℓ/2)` truncated after `(ℓ/2)^m/m!`.
fn exp_half_ell(m: u32) -> GraphVector {
    let half = GraphVector::from_diagram(ell()).scale(&ratio(1, 2));
    let mut out = GraphVector::one();
    let mut term = GraphVector::one();
    for k in 1..=m {
        term = term.product(&half).scale(&ratio(1, k as i64));
        out = out.add(&term);
    }
    out
}

#[test]
fn closure_is_pairing_with_exp_half_ell() {
    for d in diagrams() {
        let g = GraphVector::from_diagram(d.clone());
        let m = d.leg_count() as u32 / 2 + 1;
        assert_eq!(
            g.closure().unwrap(),
            g.pairing(&exp_half_ell(m)).unwrap(),
            "{}",
            d.key()
        );
    }
}

#[test]
fn partial_is_a_second_order_operator() {
    let binom = |n: u32, k: u32| rat((0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1)));
    for g in [wheel(2), wheel(4)] {
        let dg = g.partial().unwrap();
        let gg = g.product(&g);
        let d2 = gg.partial().unwrap().sub(&dg.product(&g)).sub(&g.product(&dg));
        for n in 1..=4u32 {
            let lhs = g.pow(n).partial().unwrap();
            let mut rhs = dg.product(&g.pow(n - 1)).scale(&binom(n, 1));
            if n >= 2 {
                rhs = rhs.add(&d2.product(&g.pow(n - 2)).scale(&binom(n, 2)));
            }
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }
}

#[test]
fn pair_partition_counts() {
    for m in 0..=6u32 {
        let ground: Vec<usize> = (0..2 * m as usize).collect();
        assert_eq!(
            enumerate_pair_partitions(&ground).len() as u64,
            (1..=m as u64).map(|i| 2 * i - 1).product::<u64>()
        );
        assert_eq!(
            double_factorial_odd(m),
            (1..=m as i64).map(|i| 2 * i - 1).product::<i64>().into()
        );
    }
}

#[test]
fn partition_counts() {
    for n in 0..=20 {
        let ps = enumerate_partitions(n as u32);
        assert_eq!(ps.len() as u64, common::partition_count(n));
        assert!(ps.iter().all(|p| p.weight() == n as u32));
        let distinct: std::collections::BTreeSet<&Partition> = ps.iter().collect();
        assert_eq!(distinct.len(), ps.len());
    }
}

/// Every pair partition of `⊔Lᵢ` splits uniquely into connecting pair
/// partitions over the set partition of blocks it links.
#[test]
fn pair_partitions_decompose_over_linked_blocks() {
    for sizes in [&[2usize, 2][..], &[2, 4], &[2, 2, 2]] {
        let mut owner = Vec::new();
        let mut blocks = Vec::new();
        for (b, &s) in sizes.iter().enumerate() {
            blocks.push((owner.len()..owner.len() + s).collect::<Vec<usize>>());
            owner.extend(std::iter::repeat_n(b, s));
        }
        let all: Vec<usize> = (0..owner.len()).collect();
        let mut by_split: BTreeMap<Vec<Vec<usize>>, usize> = BTreeMap::new();
        for pp in enumerate_pair_partitions(&all) {
            let mut comp: Vec<usize> = (0..blocks.len()).collect();
            for &(x, y) in &pp {
                let (cx, cy) = (comp[owner[x]], comp[owner[y]]);
                for c in comp.iter_mut() {
                    if *c == cy {
                        *c = cx;
                    }
                }
            }
            let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (b, &c) in comp.iter().enumerate() {
                parts.entry(c).or_default().push(b);
            }
            let mut split: Vec<Vec<usize>> = parts.into_values().collect();
            split.sort();
            *by_split.entry(split).or_default() += 1;
        }
        let mut total = 0;
        for sp in enumerate_set_partitions(blocks.len()) {
            let mut key = sp.clone();
            key.iter_mut().for_each(|p| p.sort());
            key.sort();
            let predicted: usize = sp
                .iter()
                .map(|part| {
                    let bl: Vec<Vec<usize>> = part.iter().map(|&i| blocks[i].clone()).collect();
                    enumerate_connecting_pair_partitions(&bl).len()
                })
                .product();
            assert_eq!(by_split.get(&key).copied().unwrap_or(0), predicted, "{sizes:?} {key:?}");
            total += predicted;
        }
        assert_eq!(total, enumerate_pair_partitions(&all).len());
    }
}
