//! Cross-check of published reference values against computed ones.
//!
//! Each entry pairs a quoted value with the value this library computes and a
//! verdict. Disagreements are reported, never raised.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::acin::{from_acin, AcinParams};
use crate::error::Result;
use crate::family::{validity_interval, TangleTarget};
use crate::invariants::{concurrence, concurrence_of_assistance, i5_closed_c12_zero, kempe_i5, local_tangle, tangle_vector, three_tangle};
use crate::slocc::diagonal_bound;
use crate::state::{preset_state, Preset};

/// Absolute tolerance for a verdict of agreement.
pub const AGREE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformanceEntry {
    pub claim: String,
    pub paper_value: f64,
    pub computed_value: f64,
    pub agree: bool,
}

impl ConformanceEntry {
    fn new(claim: impl Into<String>, quoted: f64, computed: f64) -> Self {
        Self {
            claim: claim.into(),
            paper_value: quoted,
            computed_value: computed,
            agree: (quoted - computed).abs() <= AGREE_TOL,
        }
    }
}

const ALPHAS: [(&str, f64); 4] = [("0", 0.0), ("pi/4", PI / 4.0), ("pi/2", PI / 2.0), ("pi", PI)];

/// Cosine of the family phase in the closed form as quoted, with
/// `4 det rho_1 = C12^2 + C13^2 + tau3`.
pub fn quoted_cos_phi(t: &TangleTarget, l4: f64) -> f64 {
    let (tau3, c12, c13, c23) = (t.tau3, t.c12, t.c13, t.c23);
    let x = l4 * l4;
    let num = 4.0 * x * tau3 - 4.0 * tau3 * tau3 * (tau3 + c23 * c23)
        + x * x * (c12 * c12 * (4.0 * c13 * c13 - 2.0 * tau3) - tau3 * (6.0 * c13 * c13 + 5.0 * tau3));
    let den = 4.0 * x * tau3 * c12 * c13 * (4.0 * x - t.tau11() * x * x / tau3 - tau3).sqrt();
    num / den
}

/// Builds the full report.
pub fn conformance_report() -> Result<Vec<ConformanceEntry>> {
    let mut out = Vec::new();

    for (name, alpha) in ALPHAS {
        let s = preset_state(Preset::PsiAlpha(alpha))?;
        out.push(ConformanceEntry::new(format!("tau3(psi_alpha), alpha = {name}"), 8.0 / 25.0, three_tangle(&s)));
        out.push(ConformanceEntry::new(format!("C12(psi_alpha), alpha = {name}"), 0.4, concurrence(&s, 1, 2)?));
        out.push(ConformanceEntry::new(format!("C13(psi_alpha), alpha = {name}"), 0.4, concurrence(&s, 1, 3)?));
        out.push(ConformanceEntry::new(
            format!("C23(psi_alpha) = sqrt(8)(1 - cos alpha)/5, alpha = {name}"),
            8f64.sqrt() * (1.0 - alpha.cos()) / 5.0,
            concurrence(&s, 2, 3)?,
        ));
    }

    for (name, preset, quoted) in [
        ("I5(GHZ)", Preset::Ghz, 0.25),
        ("I5(W)", Preset::W, 2.0 / 9.0),
        ("I5(|000>)", Preset::Product000, 1.0),
    ] {
        out.push(ConformanceEntry::new(name, quoted, kempe_i5(&preset_state(preset)?, 1, 2)?));
    }

    // assistance: the quoted square-root form against the fidelity value
    let s = preset_state(Preset::PsiAlpha(PI / 2.0))?;
    let tv = tangle_vector(&s);
    let ca = concurrence_of_assistance(&s, 2, 3)?;
    out.push(ConformanceEntry::new(
        "C_a(2,3) = sqrt(C23 + tau3), psi_alpha(pi/2)",
        (tv.c23 + tv.tau3).sqrt(),
        ca,
    ));
    out.push(ConformanceEntry::new(
        "C_a(2,3) = sqrt(C23^2 + tau3), psi_alpha(pi/2)",
        (tv.c23 * tv.c23 + tv.tau3).sqrt(),
        ca,
    ));

    // I5 with C12 = 0: which local tangle enters
    let n = (0.45f64 * 0.45 + 0.5 * 0.5 + 0.4 * 0.4 + 0.55 * 0.55).sqrt();
    let p = AcinParams::new(0.45 / n, 0.5 / n, 0.0, 0.4 / n, 0.55 / n, 1.1)?;
    let c12_zero = from_acin(&p);
    let i5 = kempe_i5(&c12_zero, 1, 2)?;
    out.push(ConformanceEntry::new(
        "I5 = 1 - 3/4 tau_{1;2} on a C12 = 0 state",
        i5_closed_c12_zero(local_tangle(&c12_zero, 2)?, 1.0),
        i5,
    ));
    out.push(ConformanceEntry::new(
        "I5 = 1 - 3/4 tau_{1;3} on a C12 = 0 state",
        i5_closed_c12_zero(local_tangle(&c12_zero, 3)?, 1.0),
        i5,
    ));

    // the family phase at the reference point, where phi = alpha
    let r5 = 1.0 / 5f64.sqrt();
    for (name, alpha) in ALPHAS {
        let t = TangleTarget::from_state(&preset_state(Preset::PsiAlpha(alpha))?)?;
        out.push(ConformanceEntry::new(
            format!("quoted cos phi at lambda4 = 1/sqrt5, alpha = {name}"),
            quoted_cos_phi(&t, r5),
            alpha.cos(),
        ));
    }

    // direction of the diagonal-orbit bound: t = 1 must be admissible
    let psi = AcinParams::new(r5, r5, r5, r5, r5, PI)?;
    let bound = diagonal_bound(&psi)?;
    out.push(ConformanceEntry::new(
        "diagonal orbit admissible at t = 1 under |t| <= bound, psi_alpha(pi) (1 = yes)",
        f64::from(u8::from(1.0 <= bound)),
        1.0,
    ));

    // closed-form lambda4 intervals against the feasibility scan
    let t = TangleTarget::from_state(&preset_state(Preset::PsiAlpha(PI))?)?;
    let iv = validity_interval(&t)?;
    for entry in &iv.constraints_log {
        let (Some(printed), Some(first), Some(last)) = (entry.printed, entry.computed.first(), entry.computed.last()) else {
            continue;
        };
        let (lo, hi) = (printed[0].min(printed[1]), printed[0].max(printed[1]));
        out.push(ConformanceEntry::new(format!("{} lower end, psi_alpha(pi) target", entry.name), lo, first[0]));
        out.push(ConformanceEntry::new(format!("{} upper end, psi_alpha(pi) target", entry.name), hi, last[1]));
    }
    let t0 = TangleTarget::from_state(&preset_state(Preset::PsiAlpha(0.0))?)?;
    out.push(ConformanceEntry::new(
        "admissible lambda4 for the alpha = 0 target: two distinct points",
        2.0,
        validity_interval(&t0)?.components.len() as f64,
    ));

    Ok(out)
}
