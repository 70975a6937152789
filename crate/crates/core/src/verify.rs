//! Invariant suites behind `polywheel verify`, and the diff against the
//! published tables.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coeffring::{rat, ratio, MultiPoly, Rational};
use crate::diagrams::sl2::sl2_check;
use crate::diagrams::DiagramError;
use crate::partitions::{enumerate_partitions, Partition};
use crate::polywheels::{
    connected, cross_validate, degrees, mixed_form, moment_expand, parse_expression, to_connected, Cumulants,
    PWPolynomial, PolywheelError,
};
use crate::reference::{
    DOCUMENTED_DISCREPANCIES, PUBLISHED_CHERN, PUBLISHED_CLOSED_EXPANSIONS, PUBLISHED_MIXED_EXPANSIONS, PUBLISHED_TABLE,
};
use crate::rw::{compute_beta_table, ChernTable, RwError, Series};
use crate::series::{sheffer_shift_check, SeriesError, TruncSeries};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Polywheel(#[from] PolywheelError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Rw(#[from] RwError),
}

/// Log lines of a suite run and its first violation.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub lines: Vec<String>,
    pub violation: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }

    fn fail(&mut self, msg: String) {
        if self.violation.is_none() {
            self.violation = Some(msg);
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        match &self.violation {
            None => s.push_str("pass\n"),
            Some(v) => {
                s.push_str("FAIL: ");
                s.push_str(v);
                s.push('\n');
            }
        }
        s
    }
}

/// sl₂ commutators on all canonical diagrams with at most `max_flags` flags.
pub fn verify_sl2(max_flags: usize) -> Result<SuiteReport, VerifyError> {
    let rep = sl2_check(max_flags)?;
    let mut out = SuiteReport::default();
    out.lines
        .push(format!("sl2: {} diagrams with <= {max_flags} flags", rep.checked));
    if let Some(v) = rep.violation {
        out.fail(v);
    }
    Ok(out)
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

fn random_series(rng: &mut ChaCha8Rng, order: usize, constant: Rational) -> TruncSeries {
    let mut c = vec![constant];
    c.extend((1..=order).map(|_| random_rational(rng)));
    TruncSeries::from_rationals(&c, order)
}

/// Shifted Sheffer identities for `trials` random pairs `(A, B)` with
/// `A(0) ≠ 0`, `B(0) = 0`, and the two-sided reversion identity for random
/// `f = t + …`.
pub fn verify_sheffer(order: usize, trials: usize, seed: u64) -> Result<SuiteReport, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteReport::default();
    let t = TruncSeries::t(order);
    for trial in 0..trials {
        let mut a0 = Rational::zero();
        while a0.is_zero() {
            a0 = random_rational(&mut rng);
        }
        let a = random_series(&mut rng, order, a0);
        let b = random_series(&mut rng, order, Rational::zero());
        let rep = sheffer_shift_check(&a, &b, order)?;
        if !rep.holds() {
            out.fail(format!(
                "trial {trial}: A = {a}, B = {b}: {}",
                rep.first_mismatch.unwrap_or_else(|| "mismatch".into())
            ));
            return Ok(out);
        }
        let mut f = random_series(&mut rng, order, Rational::zero());
        let mut c = f.coeffs().to_vec();
        if c[1].is_zero() {
            c[1] = MultiPoly::one();
            f = TruncSeries::new(c, order);
        }
        let g = f.reversion()?;
        if !f.compose(&g)?.agrees_to(&t, order) || !g.compose(&f)?.agrees_to(&t, order) {
            out.fail(format!("trial {trial}: reversion of {f} is not a two-sided inverse"));
            return Ok(out);
        }
    }
    out.lines
        .push(format!("sheffer: {trials} pairs to order {order}, seed {seed}"));
    out.lines.push(format!("reversion: {trials} series to order {order}"));
    Ok(out)
}

/// The transforms at every `‖λ‖ ≤ max_degree`: homogeneity, mutual inversion,
/// agreement with direct diagram closures, and agreement with the published
/// lists outside the documented misprints.
pub fn verify_polywheels(max_degree: u32) -> Result<SuiteReport, VerifyError> {
    let mut out = SuiteReport::default();
    let mut memo = Cumulants::new();
    let mut count = 0;
    for k in 1..=max_degree {
        for lambda in enumerate_partitions(k) {
            count += 1;
            let cc = memo.connected_to_closed(&lambda);
            let me = moment_expand(&lambda);
            for (name, p) in [("connected_to_closed", &cc), ("moment_expand", &me)] {
                if degrees(p).iter().any(|&d| d != 2 * k) {
                    out.fail(format!("{name}({lambda}) is not homogeneous of degree {}", 2 * k));
                }
            }
            if to_connected(&cc) != connected(&lambda) {
                out.fail(format!("to_connected(connected_to_closed({lambda})) != k[{lambda}]"));
            }
            if to_connected(&mixed_form(&lambda)) != connected(&lambda) {
                out.fail(format!("mixed_form({lambda}) does not reduce to k[{lambda}]"));
            }
            let cv = cross_validate(&lambda, 2 * max_degree)?;
            if !cv.passed() {
                out.fail(format!("diagram closures disagree with the transforms at {lambda}"));
            }
        }
    }
    out.lines.push(format!(
        "polywheels: {count} partitions with weight <= {max_degree} cross-validated"
    ));
    let mut listed = 0;
    for (lam, text, computed) in published_lists(max_degree, &mut memo)? {
        listed += 1;
        let documented = DOCUMENTED_DISCREPANCIES.contains(&text.as_str());
        let published = &computed.1;
        if &computed.0 != published && !documented {
            out.fail(format!(
                "{text} ({lam}): computed {} but published {published}",
                computed.0
            ));
        }
        if &computed.0 == published && documented {
            out.fail(format!("{text}: expected a published misprint but the entries agree"));
        }
    }
    out.lines
        .push(format!("expansion lists: {listed} published entries compared"));
    Ok(out)
}

/// `(λ, tag, (computed, published))` for the published list entries with weight `≤ max`.
type ListEntry = (Partition, String, (PWPolynomial, PWPolynomial));

fn published_lists(max: u32, memo: &mut Cumulants) -> Result<Vec<ListEntry>, VerifyError> {
    let mut out = Vec::new();
    for (lam, text) in PUBLISHED_CLOSED_EXPANSIONS {
        let l = Partition::parse(lam).expect("reference partitions are well formed");
        if l.weight() <= max {
            out.push((
                l.clone(),
                format!("closed-list {lam}"),
                (memo.connected_to_closed(&l), parse_expression(text)?),
            ));
        }
    }
    for (lam, text) in PUBLISHED_MIXED_EXPANSIONS {
        let l = Partition::parse(lam).expect("reference partitions are well formed");
        if l.weight() <= max {
            out.push((
                l.clone(),
                format!("mixed-list {lam}"),
                (mixed_form(&l), parse_expression(text)?),
            ));
        }
    }
    Ok(out)
}

/// Result of diffing computed values against the literal published text.
#[derive(Clone, Debug, Default)]
pub struct PublishedDiff {
    pub compared: usize,
    /// Tags of the differing cells, e.g. `table 2 a`.
    pub flagged: Vec<String>,
    pub lines: Vec<String>,
}

impl PublishedDiff {
    /// True iff exactly the documented cells differ.
    pub fn as_documented(&self) -> bool {
        let got: BTreeSet<&str> = self.flagged.iter().map(String::as_str).collect();
        let want: BTreeSet<&str> = DOCUMENTED_DISCREPANCIES.iter().copied().collect();
        got == want && self.flagged.len() == want.len()
    }
}

pub fn diff_against_published(chern: &ChernTable) -> Result<PublishedDiff, VerifyError> {
    let mut d = PublishedDiff::default();
    let cell = |d: &mut PublishedDiff, tag: String, computed: String, printed: String| {
        d.compared += 1;
        if computed != printed {
            d.lines.push(format!("! {tag}: printed {printed}, computed {computed}"));
            d.flagged.push(tag);
        }
    };
    for (lam, hilb, kummer) in PUBLISHED_CHERN {
        let l = Partition::parse(lam).expect("reference partitions are well formed");
        for (series, v) in [(Series::Hilb, hilb), (Series::Kummer, kummer)] {
            let got = chern
                .get(series, &l)
                .map(|r| r.to_string())
                .unwrap_or_else(|_| "missing".into());
            cell(&mut d, format!("chern {series} {lam}"), got, v.to_string());
        }
    }
    let recs = compute_beta_table(3, chern)?;
    for row in PUBLISHED_TABLE {
        let l = Partition::parse(row.partition).expect("reference partitions are well formed");
        let Some(r) = recs.iter().find(|r| r.lambda == l) else {
            cell(
                &mut d,
                format!("table {}", row.partition),
                "missing".into(),
                "row".into(),
            );
            continue;
        };
        for (col, got, printed) in [
            ("beta_kummer", &r.beta_kummer, row.beta_kummer),
            ("beta_hilb", &r.beta_hilb, row.beta_hilb),
            ("a", &r.a, row.a),
            ("c", &r.c, row.c),
        ] {
            cell(
                &mut d,
                format!("table {} {col}", row.partition),
                got.to_string(),
                rat(printed).to_string(),
            );
        }
    }
    let mut memo = Cumulants::new();
    for (_, tag, (computed, published)) in published_lists(4, &mut memo)? {
        d.compared += 1;
        if computed != published {
            d.lines
                .push(format!("! {tag}: printed {published}, computed {computed}"));
            d.flagged.push(tag);
        }
    }
    Ok(d)
}

/// The published-data diff as a suite: passes iff exactly the documented
/// cells differ.
pub fn verify_published(chern: &ChernTable) -> Result<SuiteReport, VerifyError> {
    let d = diff_against_published(chern)?;
    let mut out = SuiteReport::default();
    out.lines.extend(d.lines.iter().cloned());
    out.lines.push(format!(
        "{} entries compared, {} identical, {} flagged",
        d.compared,
        d.compared - d.flagged.len(),
        d.flagged.len()
    ));
    if !d.as_documented() {
        let want: BTreeSet<&str> = DOCUMENTED_DISCREPANCIES.iter().copied().collect();
        let unexpected: Vec<&String> = d.flagged.iter().filter(|f| !want.contains(f.as_str())).collect();
        let absent: Vec<&&str> = want.iter().filter(|w| !d.flagged.iter().any(|f| f == **w)).collect();
        out.fail(format!(
            "unexpected differences {unexpected:?}, documented differences not found {absent:?}"
        ));
    }
    Ok(out)
}
