//! One-parameter families of canonical states sharing all tangles.
//!
//! Fixing `tau3`, `C12`, `C13` and `C23` leaves one free coordinate in the
//! canonical form, taken to be `l4`. With `x = l4^2`:
//!
//! ```text
//! l1 = sqrt(tau3) / (2 l4)       l2 = l4 C12 / sqrt(tau3)       l3 = l4 C13 / sqrt(tau3)
//! l0^2 = 1 - tau3 / (4x) - x (C12^2 + C13^2 + tau3) / tau3
//! C23 = 2 |l0 l4 e^{i phi} - l2 l3|
//! ```
//!
//! The last line fixes `cos phi`. The admissible `l4` are those for which all
//! of this is real, every `l <= 1` and `|cos phi| <= 1`; [`validity_interval`]
//! finds them by direct feasibility evaluation and reports how the textbook
//! closed-form intervals compare.

use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acin::{from_acin, AcinParams};
use crate::error::{Error, Result};
use crate::invariants::{grassl, tangle_vector, GrasslValue, TangleVector};
use crate::state::PureState3;

/// `l0^2` below this is an inconsistent target rather than round-off.
pub const RADICAND_TOL: f64 = 1e-10;
/// `|cos phi|` up to `1 + COS_TOL` is clamped onto the unit interval.
pub const COS_TOL: f64 = 1e-9;
/// Resolution of the interval endpoints.
pub const BISECTION_TOL: f64 = 1e-12;

const GRID_POINTS: usize = 10_000;
/// Feasibility slack on `l0^2`; tight enough that single-point targets stay points.
const FEASIBLE_RADICAND: f64 = -1e-13;
const LAMBDA_SLACK: f64 = 1e-12;
/// Slack on `C23` where `cos phi` is undefined (one of `l0 l4`, `l2 l3` vanishes).
const C23_SLACK: f64 = 1e-9;
const ZERO_CONCURRENCE: f64 = 1e-12;
/// Tolerance for a closed-form endpoint to count as matching the computed one.
const AGREE_TOL: f64 = 1e-6;

/// Tangles every member of the family shares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangleTarget {
    pub tau3: f64,
    pub c12: f64,
    pub c13: f64,
    pub c23: f64,
}

impl TangleTarget {
    pub fn new(tau3: f64, c12: f64, c13: f64, c23: f64) -> Result<Self> {
        if !(tau3.is_finite() && tau3 > 0.0) {
            return Err(Error::BadParam(format!("tau3 = {tau3}: a positive threetangle is required")));
        }
        for (name, c) in [("c12", c12), ("c13", c13), ("c23", c23)] {
            if !(c.is_finite() && (0.0..=1.0).contains(&c)) {
                return Err(Error::BadParam(format!("{name} = {c} outside [0, 1]")));
            }
        }
        let tau11 = c12 * c12 + c13 * c13 + tau3;
        if tau11 > 1.0 + 1e-12 {
            return Err(Error::BadParam(format!("c12^2 + c13^2 + tau3 = {tau11} exceeds 1")));
        }
        Ok(Self { tau3, c12, c13, c23 })
    }

    /// Tangles of `state` after normalization.
    pub fn from_state(state: &PureState3) -> Result<Self> {
        let t = tangle_vector(&state.normalized()?);
        Self::new(t.tau3, t.c12.min(1.0), t.c13.min(1.0), t.c23.min(1.0))
    }

    /// Local tangle of qubit 1 implied by monogamy.
    pub fn tau11(&self) -> f64 {
        self.c12 * self.c12 + self.c13 * self.c13 + self.tau3
    }

    fn k(&self) -> f64 {
        (self.c12 * self.c13 / self.tau3).powi(2)
    }

    /// `(l0 l4)^2` as a function of `x = l4^2`.
    fn l0l4_sqr(&self, x: f64) -> f64 {
        x - self.tau3 / 4.0 - x * x * self.tau11() / self.tau3
    }

    fn lambda0_sqr(&self, l4: f64) -> f64 {
        let x = l4 * l4;
        1.0 - self.tau3 / (4.0 * x) - x * (self.c12 * self.c12 + self.c13 * self.c13) / self.tau3 - x
    }

    fn lambdas(&self, l4: f64) -> [f64; 3] {
        let r = self.tau3.sqrt();
        [r / (2.0 * l4), l4 * self.c12 / r, l4 * self.c13 / r]
    }

    /// `cos phi` where defined; `None` when `l0 l2 l3 l4 = 0`.
    fn cos_phi_raw(&self, l4: f64) -> Option<f64> {
        let x = l4 * l4;
        let l = self.l0l4_sqr(x).max(0.0);
        let p = self.k() * x * x;
        let den = 8.0 * (l * p).sqrt();
        (den > 0.0).then(|| (4.0 * l + 4.0 * p - self.c23 * self.c23) / den)
    }

    /// Distance of `C23` from the range `2 |l0 l4 - l2 l3| .. 2 (l0 l4 + l2 l3)`
    /// swept by `phi`, zero inside.
    fn c23_excess(&self, l4: f64) -> f64 {
        let x = l4 * l4;
        let a = self.l0l4_sqr(x).max(0.0).sqrt();
        let b = self.k().sqrt() * x;
        let lo = 2.0 * (a - b).abs();
        let hi = 2.0 * (a + b);
        (lo - self.c23).max(self.c23 - hi).max(0.0)
    }
}

/// The five sources of restrictions on `l4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// Radicand in the denominator of the `cos phi` relation, `4 l4^2 l0^2 >= 0`.
    CosPhiRadicand,
    /// `l0^2 >= 0` written through the concurrences.
    Lambda0Zeros,
    /// `l1, l2, l3 <= 1`.
    LambdaAtMostOne,
    /// `|cos phi| <= 1`.
    CosPhiBound,
    /// A real `l0` completing the unit norm.
    Normalization,
}

impl Constraint {
    pub const ALL: [Constraint; 5] = [
        Constraint::CosPhiRadicand,
        Constraint::Lambda0Zeros,
        Constraint::LambdaAtMostOne,
        Constraint::CosPhiBound,
        Constraint::Normalization,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Constraint::CosPhiRadicand => "cos_phi_radicand",
            Constraint::Lambda0Zeros => "lambda0_zeros",
            Constraint::LambdaAtMostOne => "lambda_at_most_one",
            Constraint::CosPhiBound => "abs_cos_phi_at_most_one",
            Constraint::Normalization => "normalization",
        }
    }

    fn holds(&self, t: &TangleTarget, l4: f64) -> bool {
        if !(l4 > 0.0) {
            return false;
        }
        match self {
            Constraint::CosPhiRadicand => 4.0 * t.l0l4_sqr(l4 * l4) >= 4.0 * l4 * l4 * FEASIBLE_RADICAND,
            Constraint::Lambda0Zeros => t.lambda0_sqr(l4) >= FEASIBLE_RADICAND,
            Constraint::LambdaAtMostOne => t.lambdas(l4).iter().all(|l| *l <= 1.0 + LAMBDA_SLACK),
            Constraint::CosPhiBound => match t.cos_phi_raw(l4) {
                Some(c) => c.abs() <= 1.0 + COS_TOL,
                None => t.c23_excess(l4) <= C23_SLACK,
            },
            Constraint::Normalization => {
                let [l1, l2, l3] = t.lambdas(l4);
                let l0 = t.lambda0_sqr(l4).max(0.0);
                (l0 + l1 * l1 + l2 * l2 + l3 * l3 + l4 * l4 - 1.0).abs() <= -FEASIBLE_RADICAND
            }
        }
    }

    /// The textbook closed-form `l4` interval, endpoints in printed order and
    /// clipped to `(0, 1]`. `None` where the closed form is undefined.
    fn closed_form(&self, t: &TangleTarget) -> Option<[f64; 2]> {
        let to_l4 = |x: f64| x.sqrt().min(1.0);
        let branch = |scale: f64, s: f64| -> Option<[f64; 2]> {
            if !(scale > 0.0) || s > 1.0 {
                return None;
            }
            let r = (1.0 - s).sqrt();
            let (a, b) = (t.tau3 / (2.0 * scale) * (1.0 - r), t.tau3 / (2.0 * scale) * (1.0 + r));
            // the second branch is printed with its endpoints swapped
            Some(if s <= 0.5 { [to_l4(a), to_l4(b)] } else { [to_l4(b), to_l4(a)] })
        };
        match self {
            Constraint::CosPhiRadicand => branch(t.tau11(), t.tau11()),
            Constraint::Lambda0Zeros => {
                let c2 = t.c12 * t.c12 + t.c13 * t.c13;
                let r = (1.0 - c2).sqrt();
                if !(c2 > 0.0) {
                    return None;
                }
                let (a, b) = (t.tau3 / (2.0 * c2) * (1.0 - r), t.tau3 / (2.0 * c2) * (1.0 + r));
                Some(if c2 <= 0.75 { [to_l4(a), to_l4(b)] } else { [to_l4(b), to_l4(a)] })
            }
            Constraint::LambdaAtMostOne => {
                let r = t.tau3.sqrt();
                let hi = [t.c12, t.c13]
                    .iter()
                    .filter(|c| **c > 0.0)
                    .map(|c| r / c)
                    .fold(1.0, f64::min);
                Some([r / 2.0, hi])
            }
            Constraint::CosPhiBound | Constraint::Normalization => None,
        }
    }
}

/// One entry of the constraint log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintEntry {
    pub name: String,
    /// Feasible `l4` components of this constraint alone, within `(0, 1]`.
    pub computed: Vec<[f64; 2]>,
    /// Closed-form interval as printed, if one exists.
    pub printed: Option<[f64; 2]>,
    /// Whether the printed interval, read as `[min, max]`, matches the hull of `computed`.
    pub agree: Option<bool>,
}

/// Admissible `l4` values for a target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityInterval {
    pub lo: f64,
    pub hi: f64,
    /// Every connected component of the feasible set; `[lo, hi]` is the widest.
    pub components: Vec<[f64; 2]>,
    pub constraints_log: Vec<ConstraintEntry>,
}

impl ValidityInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, l4: f64) -> bool {
        (self.lo..=self.hi).contains(&l4)
    }
}

/// Real roots of `sum c[i] x^i`, via companion-matrix eigenvalues.
fn real_poly_roots(coeffs: &[f64]) -> Vec<f64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].abs() <= 1e-14 * scale {
        deg -= 1;
    }
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let eval = |x: f64| coeffs[..=deg].iter().rev().fold(0.0, |acc, c| acc * x + c);
    let deriv = |x: f64| {
        coeffs[1..=deg]
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (i, c)| acc * x + (i + 1) as f64 * c)
    };
    comp.complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= 1e-6 * (1.0 + z.re.abs()))
        .map(|z| {
            let mut x = z.re;
            for _ in 0..3 {
                let d = deriv(x);
                if d.abs() > 0.0 {
                    let step = eval(x) / d;
                    if step.is_finite() && step.abs() < 1e-3 * (1.0 + x.abs()) {
                        x -= step;
                    }
                }
            }
            x
        })
        .collect()
}

/// Candidate points in `l4` where a constraint can switch.
fn seeds(t: &TangleTarget) -> Vec<f64> {
    let mut xs = Vec::new();
    let tau3 = t.tau3;
    let k = t.k();
    // (l0 l4)^2 = l_0 + l_1 x + l_2 x^2
    let l = [-tau3 / 4.0, 1.0, -t.tau11() / tau3];
    // Q = 4 (l0 l4)^2 + 4 (l2 l3)^2 - C23^2
    let q = [4.0 * l[0] - t.c23 * t.c23, 4.0 * l[1], 4.0 * (l[2] + k)];
    // |cos phi| = 1  <=>  Q^2 = 64 (l0 l4)^2 (l2 l3)^2
    let mut quartic = [0.0; 5];
    for i in 0..3 {
        for j in 0..3 {
            quartic[i + j] += q[i] * q[j];
        }
        quartic[i + 2] -= 64.0 * k * l[i];
    }
    xs.extend(real_poly_roots(&quartic));
    // zeros of l0, and the two double-root situations of the quartic
    xs.extend(real_poly_roots(&l));
    xs.extend(real_poly_roots(&[l[0] - t.c23 * t.c23 / 4.0, l[1], l[2]]));
    xs.extend(real_poly_roots(&[l[0], l[1], l[2] - k]));
    xs.push(tau3 / (2.0 * t.tau11().sqrt()));
    let mut l4s: Vec<f64> = xs.into_iter().filter(|x| *x > 0.0).map(f64::sqrt).collect();
    for c in Constraint::ALL {
        if let Some([a, b]) = c.closed_form(t) {
            l4s.extend([a, b]);
        }
    }
    l4s.retain(|v| v.is_finite() && *v > 0.0 && *v <= 1.0);
    l4s
}

/// Components of `{l4 in (0, 1] : pred(l4)}` found from a grid plus seeds,
/// with every boundary bisected to [`BISECTION_TOL`].
fn feasible_components(extra: &[f64], pred: impl Fn(f64) -> bool) -> Vec<[f64; 2]> {
    let mut pts: Vec<f64> = (0..=GRID_POINTS).map(|i| i as f64 / GRID_POINTS as f64).collect();
    pts[0] = f64::MIN_POSITIVE;
    pts.extend_from_slice(extra);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let ok: Vec<bool> = pts.iter().map(|p| pred(*p)).collect();

    let edge = |inside: f64, outside: f64| {
        let (mut a, mut b) = (inside, outside);
        while (a - b).abs() > BISECTION_TOL {
            let m = 0.5 * (a + b);
            if pred(m) {
                a = m;
            } else {
                b = m;
            }
        }
        a
    };

    let mut comps = Vec::new();
    let mut i = 0;
    while i < pts.len() {
        if !ok[i] {
            i += 1;
            continue;
        }
        let start = if i == 0 { pts[0] } else { edge(pts[i], pts[i - 1]) };
        let mut j = i;
        while j + 1 < pts.len() && ok[j + 1] {
            j += 1;
        }
        let end = if j + 1 == pts.len() { pts[j] } else { edge(pts[j], pts[j + 1]) };
        comps.push([start, end]);
        i = j + 1;
    }
    comps
}

fn interval_agrees(computed: &[[f64; 2]], printed: Option<[f64; 2]>) -> Option<bool> {
    let [a, b] = printed?;
    let (lo, hi) = (a.min(b), a.max(b));
    Some(match (computed.first(), computed.last()) {
        (Some(first), Some(last)) => (first[0] - lo).abs() <= AGREE_TOL && (last[1] - hi).abs() <= AGREE_TOL,
        _ => false,
    })
}

/// Feasible `l4` for `target`, the widest component plus a log comparing each
/// constraint's feasible set to its closed form.
pub fn validity_interval(target: &TangleTarget) -> Result<ValidityInterval> {
    let extra = seeds(target);
    let constraints_log = Constraint::ALL
        .iter()
        .map(|c| {
            let computed = feasible_components(&extra, |l4| c.holds(target, l4));
            let printed = c.closed_form(target);
            ConstraintEntry {
                name: c.name().to_string(),
                agree: interval_agrees(&computed, printed),
                computed,
                printed,
            }
        })
        .collect();
    let components = feasible_components(&extra, |l4| Constraint::ALL.iter().all(|c| c.holds(target, l4)));
    let widest = components
        .iter()
        .copied()
        .reduce(|best, c| if c[1] - c[0] > best[1] - best[0] { c } else { best })
        .ok_or(Error::EmptyInterval)?;
    Ok(ValidityInterval {
        lo: widest[0],
        hi: widest[1],
        components,
        constraints_log,
    })
}

/// A family member and the cosine it was built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyPoint {
    pub params: AcinParams,
    pub cos_phi: f64,
}

/// The family member at `lambda4`.
pub fn params_at(target: &TangleTarget, lambda4: f64) -> Result<FamilyPoint> {
    if !(lambda4.is_finite() && lambda4 > 0.0) {
        return Err(Error::OutOfInterval {
            lambda4,
            constraint: "lambda4 > 0",
        });
    }
    let [l1, l2, l3] = target.lambdas(lambda4);
    let l0_sqr = target.lambda0_sqr(lambda4);
    if l0_sqr < -RADICAND_TOL {
        return Err(Error::NegativeRadicand(l0_sqr));
    }
    if [l1, l2, l3].iter().any(|l| *l > 1.0 + LAMBDA_SLACK) {
        return Err(Error::OutOfInterval {
            lambda4,
            constraint: "lambda_i <= 1",
        });
    }
    let l0 = l0_sqr.max(0.0).sqrt();
    let cos_phi = if target.c12 < ZERO_CONCURRENCE || target.c13 < ZERO_CONCURRENCE {
        None
    } else {
        target.cos_phi_raw(lambda4)
    };
    let cos_phi = match cos_phi {
        Some(c) if c.abs() > 1.0 + COS_TOL => {
            return Err(Error::OutOfInterval {
                lambda4,
                constraint: "|cos phi| <= 1",
            })
        }
        Some(c) => c.clamp(-1.0, 1.0),
        None => {
            // phi cannot change C23 here, so the target value must already hold
            if (2.0 * (l0 * lambda4 - l2 * l3).abs() - target.c23).abs() > 1e-7 {
                return Err(Error::OutOfInterval {
                    lambda4,
                    constraint: "C23 fixed by the other tangles",
                });
            }
            1.0
        }
    };
    let params = AcinParams::new(l0, l1, l2, l3, lambda4, cos_phi.acos())?;
    Ok(FamilyPoint { params, cos_phi })
}

/// Like [`params_at`] but never rejects: `l0^2` and `cos phi` are clamped.
/// Away from the admissible interval the state is unnormalized and some
/// concurrences drift while `tau3 = 4 l1^2 l4^2` keeps its target value.
pub fn params_at_clamped(target: &TangleTarget, lambda4: f64) -> Result<FamilyPoint> {
    if !(lambda4.is_finite() && lambda4 > 0.0) {
        return Err(Error::BadParam(format!("lambda4 = {lambda4}")));
    }
    let [l1, l2, l3] = target.lambdas(lambda4);
    let l0 = target.lambda0_sqr(lambda4).max(0.0).sqrt();
    let cos_phi = target.cos_phi_raw(lambda4).unwrap_or(1.0).clamp(-1.0, 1.0);
    let params = AcinParams::new(l0, l1, l2, l3, lambda4, cos_phi.acos())?;
    Ok(FamilyPoint { params, cos_phi })
}

/// One sampled family member with its invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub lambda4: f64,
    pub params: AcinParams,
    pub cos_phi: f64,
    pub tangles: TangleVector,
    pub grassl: GrasslValue,
}

impl FamilyRow {
    fn from_point(point: FamilyPoint) -> Self {
        let state = from_acin(&point.params);
        Self {
            lambda4: point.params.l4,
            params: point.params,
            cos_phi: point.cos_phi,
            tangles: tangle_vector(&state),
            grassl: grassl(&point.params),
        }
    }

    pub fn norm(&self) -> f64 {
        self.params.norm_sqr().sqrt()
    }

    fn csv_values(&self) -> Vec<f64> {
        let p = &self.params;
        let mut v = vec![self.lambda4, p.l0, p.l1, p.l2, p.l3, p.phi, self.cos_phi];
        v.extend(self.tangles.csv_row());
        v.extend([self.grassl.re, self.grassl.im]);
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyTable {
    pub target: TangleTarget,
    pub interval: ValidityInterval,
    pub rows: Vec<FamilyRow>,
}

impl FamilyTable {
    pub const CSV_HEADER: [&'static str; 18] = [
        "lambda4", "l0", "l1", "l2", "l3", "phi", "cosphi", "c12", "c13", "c23", "tau3", "tau11", "tau12",
        "tau13", "i5", "i6", "re_ig", "im_ig",
    ];

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        write_rows(&self.rows, out)
    }

    /// `max - min` of a column extracted by `f`.
    pub fn spread(&self, f: impl Fn(&FamilyRow) -> f64) -> f64 {
        spread(&self.rows, f)
    }
}

pub fn spread(rows: &[FamilyRow], f: impl Fn(&FamilyRow) -> f64) -> f64 {
    let (lo, hi) = rows
        .iter()
        .map(f)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi - lo
}

/// Writes family rows as CSV under [`FamilyTable::CSV_HEADER`].
pub fn write_rows<W: Write>(rows: &[FamilyRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FamilyTable::CSV_HEADER)?;
    for row in rows {
        w.write_record(row.csv_values().iter().map(|v| v.to_string()))?;
    }
    w.flush()
}

fn open_grid(lo: f64, hi: f64, npoints: usize) -> Vec<f64> {
    let margin = 1e-6 * (hi - lo);
    let (a, b) = (lo + margin, hi - margin);
    (0..npoints)
        .map(|i| a + (b - a) * i as f64 / (npoints - 1) as f64)
        .collect()
}

/// Samples `npoints` family members uniformly over the open admissible interval.
pub fn scan(target: &TangleTarget, npoints: usize) -> Result<FamilyTable> {
    if npoints < 2 {
        return Err(Error::BadParam(format!("npoints = {npoints}: at least 2 required")));
    }
    let interval = validity_interval(target)?;
    let rows = open_grid(interval.lo, interval.hi, npoints)
        .par_iter()
        .map(|&l4| params_at(target, l4).map(FamilyRow::from_point))
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyTable {
        target: *target,
        interval,
        rows,
    })
}

/// Clamped construction on an arbitrary `l4` range, for looking past the
/// edges of the admissible interval.
pub fn diagnostic_scan(target: &TangleTarget, lo: f64, hi: f64, npoints: usize) -> Result<Vec<FamilyRow>> {
    if npoints < 2 || !(0.0 < lo && lo < hi) {
        return Err(Error::BadParam(format!("range ({lo}, {hi}) with {npoints} points")));
    }
    (0..npoints)
        .into_par_iter()
        .map(|i| {
            let l4 = lo + (hi - lo) * i as f64 / (npoints - 1) as f64;
            params_at_clamped(target, l4).map(FamilyRow::from_point)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{preset_state, Preset};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn psi_target(alpha: f64) -> TangleTarget {
        TangleTarget::from_state(&preset_state(Preset::PsiAlpha(alpha)).unwrap()).unwrap()
    }

    #[test]
    fn target_validation() {
        assert!(TangleTarget::new(0.0, 0.1, 0.1, 0.1).is_err());
        assert!(TangleTarget::new(0.5, 1.2, 0.0, 0.0).is_err());
        assert!(TangleTarget::new(0.9, 0.6, 0.0, 0.0).is_err());
        assert!(TangleTarget::new(1.0, 0.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn ghz_target_is_a_single_point() {
        let t = TangleTarget::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let iv = validity_interval(&t).unwrap();
        assert!(iv.width() < 1e-6, "{iv:?}");
        assert!((iv.lo - FRAC_1_SQRT_2).abs() < 1e-6);
        let p = params_at(&t, FRAC_1_SQRT_2).unwrap().params;
        assert!((p.l1 - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(p.l0 < 1e-6 && p.l2 == 0.0 && p.l3 == 0.0);
    }

    #[test]
    fn reference_state_is_a_fixed_point() {
        let r5 = 1.0 / 5f64.sqrt();
        let t = psi_target(PI);
        let iv = validity_interval(&t).unwrap();
        assert!(iv.contains(r5), "{iv:?}");
        let p = params_at(&t, r5).unwrap().params;
        let want = AcinParams::new(r5, r5, r5, r5, r5, PI).unwrap();
        assert!(p.max_diff(&want) < 1e-6, "{p:?}");
    }

    #[test]
    fn lambda1_at_one_is_rejected() {
        let t = psi_target(PI);
        let l4 = t.tau3.sqrt() / 2.0;
        assert!(params_at(&t, l4).is_err());
        assert!(matches!(params_at(&t, 0.9 * l4), Err(Error::NegativeRadicand(_)) | Err(Error::OutOfInterval { .. })));
    }

    #[test]
    fn concurrence_only_target_matches_lambda0_zeros() {
        // tau3 = 0.3, C12 = 0.6, C13 = C23 = 0: the admissible set is where l0 l4 = 0
        let t = TangleTarget::new(0.3, 0.6, 0.0, 0.0).unwrap();
        let iv = validity_interval(&t).unwrap();
        let tau11 = t.tau11();
        let x_lo = t.tau3 / (2.0 * tau11) * (1.0 - (1.0 - tau11).sqrt());
        let x_hi = t.tau3 / (2.0 * tau11) * (1.0 + (1.0 - tau11).sqrt());
        let ends: Vec<f64> = iv.components.iter().map(|c| 0.5 * (c[0] + c[1])).collect();
        assert_eq!(ends.len(), 2, "{iv:?}");
        assert!((ends[0] - x_lo.sqrt()).abs() < 1e-6 && (ends[1] - x_hi.sqrt()).abs() < 1e-6);
        let entry = iv.constraints_log.iter().find(|e| e.name == "cos_phi_radicand").unwrap();
        assert_eq!(entry.agree, Some(true));
    }

    #[test]
    fn scan_keeps_tangles_and_varies_i5() {
        let t = psi_target(PI);
        let table = scan(&t, 50).unwrap();
        assert!(table.spread(|r| r.tangles.tau3) < 1e-7);
        assert!(table.spread(|r| r.tangles.c23) < 1e-7);
        assert!(table.spread(|r| r.norm()) < 1e-9);
        assert!(table.spread(|r| r.tangles.i5) > 1e-3);
        for r in &table.rows {
            assert!((r.tangles.c12 - t.c12).abs() < 1e-7);
        }
        let two = scan(&t, 2).unwrap();
        assert!(two.rows[0].lambda4 < two.rows[1].lambda4);
    }

    #[test]
    fn clamped_scan_keeps_tau3_past_the_edge() {
        let t = psi_target(PI);
        let iv = validity_interval(&t).unwrap();
        let rows = diagnostic_scan(&t, iv.hi, iv.hi + 0.05, 20).unwrap();
        let last = rows.last().unwrap();
        assert!((last.tangles.tau3 - t.tau3).abs() < 1e-7);
        let dev = (last.tangles.c23 - t.c23).abs().max((last.tangles.c12 - t.c12).abs());
        assert!(dev > 1e-3);
    }

    #[test]
    fn csv_header_and_rows() {
        let table = scan(&psi_target(PI / 2.0), 3).unwrap();
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), FamilyTable::CSV_HEADER.join(","));
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn poly_roots() {
        // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
        let mut r = real_poly_roots(&[6.0, -7.0, 0.0, 1.0]);
        r.sort_by(f64::total_cmp);
        assert!((r[0] + 3.0).abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-12 && (r[2] - 2.0).abs() < 1e-12);
        assert!(real_poly_roots(&[1.0, 0.0, 1.0]).is_empty());
    }
}
