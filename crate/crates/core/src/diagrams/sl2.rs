//! Exhaustive identity checks on small diagrams: the sl₂ commutators and the
//! adjointness of `ℓ/2` and `∂` under the pairing.

use super::library::{ell, enumerate_by_augmentation, enumerate_by_flags};
use super::{Diagram, DiagramError, GraphVector};
use crate::coeffring::rat;

/// Number of cases checked and the first failing case, if any.
#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub checked: usize,
    pub violation: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// The three commutators of `(ℓ/2, −∂, H)` on one vector; `None` when all hold.
pub fn sl2_violation(g: &GraphVector) -> Result<Option<String>, DiagramError> {
    let dg = g.partial()?;
    let lhs = dg.half_ell_mul().sub(&g.half_ell_mul().partial()?);
    if lhs != g.h_apply().scale(&rat(-1)) {
        return Ok(Some("[l/2, d] != -H".into()));
    }
    let lhs = g.half_ell_mul().h_apply().sub(&g.h_apply().half_ell_mul());
    if lhs != g.half_ell_mul().scale(&rat(2)) {
        return Ok(Some("[H, l/2] != l".into()));
    }
    let lhs = dg.h_apply().sub(&g.h_apply().partial()?);
    if lhs != dg.scale(&rat(-2)) {
        return Ok(Some("[H, d] != -2d".into()));
    }
    Ok(None)
}

/// Checks the sl₂ relations on every canonical diagram with at most `max_flags` flags.
pub fn sl2_check(max_flags: usize) -> Result<CheckReport, DiagramError> {
    let mut rep = CheckReport::default();
    for d in enumerate_by_flags(max_flags) {
        rep.checked += 1;
        if let Some(msg) = sl2_violation(&GraphVector::from_diagram(d.clone()))? {
            rep.violation = Some(format!("{msg} on {}", d.key()));
            return Ok(rep);
        }
    }
    Ok(rep)
}

/// `ℓ`-free diagrams from the augmentation enumerator together with their
/// products with powers of `ℓ`, up to `max_legs` legs in total.
pub fn diagram_family(max_tri: usize, max_legs: usize, with_lines: bool) -> Vec<Diagram> {
    let base = enumerate_by_augmentation(max_tri, max_legs);
    let mut out = Vec::new();
    for d in base {
        let mut cur = d;
        loop {
            let legs = cur.leg_count();
            out.push(cur.clone());
            if !with_lines || legs + 2 > max_legs {
                break;
            }
            cur = cur.union(&ell());
        }
    }
    out
}

/// `⟨γ, (ℓ/2)γ′⟩ = ⟨∂γ, γ′⟩` over pairs from [`diagram_family`] with
/// combined trivalent count at most `max_tri`.
pub fn ell_and_partial_check(max_tri: usize, max_legs: usize) -> Result<CheckReport, DiagramError> {
    let fam = diagram_family(max_tri, max_legs, true);
    let mut rep = CheckReport::default();
    for g in &fam {
        for h in &fam {
            if g.tri_count() + h.tri_count() > max_tri || g.leg_count() != h.leg_count() + 2 {
                continue;
            }
            rep.checked += 1;
            let (gv, hv) = (
                GraphVector::from_diagram(g.clone()),
                GraphVector::from_diagram(h.clone()),
            );
            let lhs = gv.pairing(&hv.half_ell_mul())?;
            let rhs = gv.partial()?.pairing(&hv)?;
            if lhs != rhs {
                rep.violation = Some(format!("<g, l/2 h> != <dg, h> for g = {}, h = {}", g.key(), h.key()));
                return Ok(rep);
            }
        }
    }
    Ok(rep)
}

/// `⟨exp(∂)(γγ′), 1⟩ = ⟨exp(∂)γ, exp(∂)γ′⟩` over `ℓ`-free pairs with combined
/// trivalent count at most `max_tri`.
pub fn scp_and_partial_check(max_tri: usize, max_legs: usize) -> Result<CheckReport, DiagramError> {
    let fam = diagram_family(max_tri, max_legs, false);
    let one = GraphVector::one();
    let mut rep = CheckReport::default();
    for g in &fam {
        for h in &fam {
            if g.tri_count() + h.tri_count() > max_tri || (g.leg_count() + h.leg_count()) % 2 == 1 {
                continue;
            }
            rep.checked += 1;
            let (gv, hv) = (
                GraphVector::from_diagram(g.clone()),
                GraphVector::from_diagram(h.clone()),
            );
            let lhs = gv.product(&hv).exp_partial()?.pairing(&one)?;
            let rhs = gv.exp_partial()?.pairing(&hv.exp_partial()?)?;
            if lhs != rhs {
                rep.violation = Some(format!(
                    "<exp(d)(g h), 1> != <exp(d) g, exp(d) h> for g = {}, h = {}",
                    g.key(),
                    h.key()
                ));
                return Ok(rep);
            }
        }
    }
    Ok(rep)
}
