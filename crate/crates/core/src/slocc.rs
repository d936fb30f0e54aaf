//! Local invertible operations.
//!
//! * the norm-preserving diagonal orbit `diag(t, 1/t) ⊗ diag(s, 1/s) ⊗ 1` of a
//!   canonical state, which keeps `tau3` and `C12` fixed;
//! * renormalized SLOCC action;
//! * random two-outcome Kraus channels and the `I5` monotonicity fuzzer;
//! * SLOCC class labels.

use std::fmt;
use std::io::Write;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acin::{from_acin, AcinParams};
use crate::error::{Error, Result};
use crate::invariants::tangle_vector;
use crate::random::{haar_unitary, random_contraction, seeded};
use crate::sampling::{draw, Ensemble};
use crate::state::{LocalOp, PureState3};

/// Class threshold on tangles and concurrences.
pub const DEFAULT_EPS: f64 = 1e-9;
/// Completeness tolerance for Kraus channels.
pub const COMPLETENESS_TOL: f64 = 1e-10;
const SINGULAR_DET: f64 = 1e-14;
const DISCRIMINANT_TOL: f64 = 1e-12;

/// Root of the quadratic for `|s|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

fn orbit_coefficients(p: &AcinParams) -> (f64, f64, f64) {
    let a = p.l2 * p.l2 + p.l4 * p.l4;
    let b = p.l0 * p.l0 + p.l3 * p.l3;
    (a, b, 1.0 - 4.0 * p.l1 * p.l1 * a)
}

/// Smallest `|t|` for which the diagonal orbit stays normalizable,
/// `(4AB / (1 - 4 l1^2 A))^(1/4)` with `A = l2^2 + l4^2`, `B = l0^2 + l3^2`.
pub fn diagonal_bound(p: &AcinParams) -> Result<f64> {
    let (a, b, d) = orbit_coefficients(p);
    if d <= 0.0 {
        return Err(Error::NegativeDiscriminant(d));
    }
    Ok((4.0 * a * b / d).powf(0.25))
}

/// `|s|^2` such that `diag(t, 1/t) ⊗ diag(s, 1/s) ⊗ 1` maps the canonical state
/// of `p` to a normalized state.
pub fn diagonal_s_of_t(p: &AcinParams, t: f64, branch: Branch) -> Result<f64> {
    let bound = diagonal_bound(p)?;
    if !t.is_finite() || t.abs() < bound * (1.0 - 1e-12) {
        return Err(Error::OutOfBound { t, bound });
    }
    let (a, b, d) = orbit_coefficients(p);
    let t2 = t * t;
    let disc = t2 * t2 * d - 4.0 * a * b;
    if disc < -DISCRIMINANT_TOL {
        return Err(Error::NegativeDiscriminant(disc));
    }
    let s2 = 0.5 * (t2 + branch.sign() * disc.max(0.0).sqrt()) / (p.l1 * p.l1 * t2 * t2 + b);
    if !(s2 > 0.0) {
        return Err(Error::SingularOp(s2));
    }
    Ok(s2)
}

/// The diagonal operators for `(t, branch)` applied to the canonical state.
pub fn apply_diagonal(p: &AcinParams, t: f64, branch: Branch) -> Result<PureState3> {
    let s = diagonal_s_of_t(p, t, branch)?.sqrt();
    let op1 = LocalOp::diag_sl(Complex64::new(t, 0.0))?;
    let op2 = LocalOp::diag_sl(Complex64::new(s, 0.0))?;
    Ok(from_acin(p).apply_local_ops(&op1, &op2, &LocalOp::identity(), false)?.state)
}

/// One point of a diagonal orbit scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub t: f64,
    pub branch: Branch,
    pub s2: f64,
    pub norm: f64,
    pub tau3: f64,
    pub c12: f64,
    pub c13: f64,
    pub c23: f64,
    pub i5: f64,
}

impl OrbitRow {
    pub const CSV_HEADER: [&'static str; 9] = ["t", "branch", "s2", "norm", "tau3", "c12", "c13", "c23", "i5"];
}

/// Both branches at `npoints` values of `t` spaced evenly on `[t_lo, t_hi]`.
pub fn orbit_scan(p: &AcinParams, t_lo: f64, t_hi: f64, npoints: usize) -> Result<Vec<OrbitRow>> {
    if npoints < 2 || !(t_lo <= t_hi) {
        return Err(Error::BadParam(format!("t range [{t_lo}, {t_hi}] with {npoints} points")));
    }
    let ts: Vec<f64> = (0..npoints)
        .map(|i| t_lo + (t_hi - t_lo) * i as f64 / (npoints - 1) as f64)
        .collect();
    ts.par_iter()
        .flat_map(|&t| [(t, Branch::Plus), (t, Branch::Minus)])
        .map(|(t, branch)| {
            let s2 = diagonal_s_of_t(p, t, branch)?;
            let state = apply_diagonal(p, t, branch)?;
            let tv = tangle_vector(&state);
            Ok(OrbitRow {
                t,
                branch,
                s2,
                norm: state.norm(),
                tau3: tv.tau3,
                c12: tv.c12,
                c13: tv.c13,
                c23: tv.c23,
                i5: tv.i5,
            })
        })
        .collect()
}

pub fn write_orbit_csv<W: Write>(rows: &[OrbitRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(OrbitRow::CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.t.to_string(),
            r.branch.to_string(),
            r.s2.to_string(),
            r.norm.to_string(),
            r.tau3.to_string(),
            r.c12.to_string(),
            r.c13.to_string(),
            r.c23.to_string(),
            r.i5.to_string(),
        ])?;
    }
    w.flush()
}

/// Applies `op1 ⊗ op2 ⊗ op3` and renormalizes. Returns the new state and
/// the norm before renormalization.
pub fn apply_slocc(state: &PureState3, ops: [&LocalOp; 3]) -> Result<(PureState3, f64)> {
    for op in ops {
        let d = op.det().norm();
        if !(d > SINGULAR_DET) {
            return Err(Error::SingularOp(d));
        }
    }
    let action = state.apply_local_ops(ops[0], ops[1], ops[2], true)?;
    Ok((action.state, action.norm))
}

/// Kraus channel on one or two qubits. Operator `k` acts as
/// `kraus[k][0] ⊗ kraus[k][1]` on `qubits`, identity elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    qubits: Vec<usize>,
    kraus: Vec<Vec<Matrix2<Complex64>>>,
}

impl KrausChannel {
    pub fn new(qubits: Vec<usize>, kraus: Vec<Vec<Matrix2<Complex64>>>) -> Result<Self> {
        let mut sorted = qubits.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if qubits.is_empty() || qubits.len() > 2 || sorted.len() != qubits.len() || !sorted.iter().all(|q| (1..=3).contains(q)) {
            return Err(Error::BadQubitSet(qubits));
        }
        if kraus.is_empty() || kraus.iter().any(|k| k.len() != qubits.len()) {
            return Err(Error::BadParam("each Kraus operator needs one factor per acted qubit".into()));
        }
        let ch = Self { qubits, kraus };
        let dev = ch.completeness_error();
        if dev > COMPLETENESS_TOL {
            return Err(Error::IncompleteChannel(dev));
        }
        Ok(ch)
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn kraus(&self) -> &[Vec<Matrix2<Complex64>>] {
        &self.kraus
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    /// Largest entry of `sum_k A_k^dag A_k - 1` on the acted subsystem.
    pub fn completeness_error(&self) -> f64 {
        let max_entry = |m: &[Complex64]| m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if self.qubits.len() == 1 {
            let s: Matrix2<Complex64> = self.kraus.iter().map(|k| k[0].adjoint() * k[0]).sum();
            max_entry((s - Matrix2::identity()).as_slice())
        } else {
            let s: Matrix4<Complex64> = self
                .kraus
                .iter()
                .map(|k| {
                    let a = k[0].kronecker(&k[1]);
                    a.adjoint() * a
                })
                .sum();
            max_entry((s - Matrix4::identity()).as_slice())
        }
    }

    /// Unnormalized branch `A_k |psi>`.
    pub fn branch(&self, state: &PureState3, k: usize) -> Result<PureState3> {
        let mut out = *state;
        for (q, m) in self.qubits.iter().zip(&self.kraus[k]) {
            out = out.apply_on(*q, m)?;
        }
        Ok(out)
    }
}

fn psd_sqrt(m: Matrix2<Complex64>) -> Matrix2<Complex64> {
    let eig = m.symmetric_eigen();
    let d = Matrix2::from_diagonal(&eig.eigenvalues.map(|v| Complex64::new(v.max(0.0).sqrt(), 0.0)));
    eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// The pair `A1 = a1`, `A2 = v sqrt(1 - a1^dag a1)` on one qubit. `A2` is
/// dropped when it vanishes.
pub fn two_kraus_from_contraction(qubit: usize, a1: Matrix2<Complex64>, v: Matrix2<Complex64>) -> Result<KrausChannel> {
    let rest = Matrix2::identity() - a1.adjoint() * a1;
    let mut kraus = vec![vec![a1]];
    if rest.norm() > 1e-12 {
        kraus.push(vec![v * psd_sqrt(rest)]);
    }
    KrausChannel::new(vec![qubit], kraus)
}

/// Random channel with at most two Kraus operators on `nqubits` random qubits.
///
/// On one qubit this is a random contraction and its completion. On two
/// qubits the first gets that pair and the second a Haar unitary per branch,
/// since two product operators can only be complete if one factor of each is
/// unitary up to scale.
pub fn random_two_kraus_channel(seed: u64, nqubits: usize) -> Result<KrausChannel> {
    if !(1..=2).contains(&nqubits) {
        return Err(Error::BadParam(format!("nqubits = {nqubits}: expected 1 or 2")));
    }
    let mut rng = seeded(seed);
    let mut order = [1, 2, 3];
    order.shuffle(&mut rng);
    let a1 = random_contraction(&mut rng);
    let v = *haar_unitary(&mut rng).matrix();
    let base = two_kraus_from_contraction(order[0], a1, v)?;
    if nqubits == 1 {
        return Ok(base);
    }
    let kraus = base
        .kraus
        .into_iter()
        .map(|mut k| {
            k.push(*haar_unitary(&mut rng).matrix());
            k
        })
        .collect();
    KrausChannel::new(vec![order[0], order[1]], kraus)
}

/// Averages of one channel application.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub i5_before: f64,
    /// `sum_k p_k I5(psi_k)` over renormalized branches.
    pub i5_after_avg: f64,
    /// Decrease of `1 - I5` on average; nonnegative for monotone behaviour.
    pub margin: f64,
}

/// Runs `channel` on `state` and compares `E = 1 - I5` before and after.
///
/// `I5` is largest on product states, so the entanglement-like quantity is
/// `1 - I5`; the margin is `E(psi) - sum_k p_k E(psi_k)` with
/// `p_k = |A_k psi|^2`.
pub fn monotonicity_trial(state: &PureState3, channel: &KrausChannel) -> Result<TrialOutcome> {
    if !state.is_normalized(1e-10) {
        return Err(Error::BadParam(format!("state norm {} is not 1", state.norm())));
    }
    let i5_before = tangle_vector(state).i5;
    let mut avg = 0.0;
    let mut e_after = 0.0;
    for k in 0..channel.len() {
        let b = channel.branch(state, k)?;
        let p = b.norm_sqr();
        if p < 1e-15 {
            continue;
        }
        let i5 = tangle_vector(&b.normalized()?).i5;
        avg += p * i5;
        e_after += p * (1.0 - i5);
    }
    Ok(TrialOutcome {
        i5_before,
        i5_after_avg: avg,
        margin: (1.0 - i5_before) - e_after,
    })
}

/// One fuzzer trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzRow {
    pub trial: u64,
    pub seed: u64,
    pub class: Ensemble,
    pub i5_before: f64,
    pub i5_after_avg: f64,
    pub margin: f64,
}

impl FuzzRow {
    pub const CSV_HEADER: [&'static str; 6] = ["trial", "seed", "class", "i5_before", "i5_after_avg", "margin"];
}

/// Pool of trial `i`: Haar, Haar, GHZ class, W class, repeating.
pub fn fuzz_ensemble(trial: u64) -> Ensemble {
    match trial % 4 {
        0 | 1 => Ensemble::Haar,
        2 => Ensemble::GhzClass,
        _ => Ensemble::WClass,
    }
}

/// Trial `i` draws its state and channel from seed `base_seed + i`.
pub fn fuzz(trials: usize, base_seed: u64) -> Result<Vec<FuzzRow>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed.wrapping_add(i);
            let mut rng = seeded(seed);
            let class = fuzz_ensemble(i);
            let state = draw(class, i, &mut rng);
            let nq = rng.random_range(1..=2);
            let channel = random_two_kraus_channel(rng.random(), nq)?;
            let out = monotonicity_trial(&state, &channel)?;
            Ok(FuzzRow {
                trial: i,
                seed,
                class,
                i5_before: out.i5_before,
                i5_after_avg: out.i5_after_avg,
                margin: out.margin,
            })
        })
        .collect()
}

pub fn write_fuzz_csv<W: Write>(rows: &[FuzzRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FuzzRow::CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            r.class.to_string(),
            r.i5_before.to_string(),
            r.i5_after_avg.to_string(),
            r.margin.to_string(),
        ])?;
    }
    w.flush()
}

/// SLOCC class of a pure state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SloccLabel {
    Product,
    /// Entangled pair, the remaining qubit in a product with it.
    Biseparable(usize, usize),
    W,
    Ghz,
}

impl fmt::Display for SloccLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SloccLabel::Product => f.write_str("PRODUCT"),
            SloccLabel::Biseparable(i, j) => write!(f, "BISEPARABLE({i},{j})"),
            SloccLabel::W => f.write_str("W"),
            SloccLabel::Ghz => f.write_str("GHZ"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SloccClass {
    pub label: SloccLabel,
    /// Flags for `C12 > eps`, `C13 > eps`, `C23 > eps`.
    pub char_vector: [u8; 3],
}

/// Class label from the threetangle and the local tangles of the normalized state.
pub fn classify(state: &PureState3, eps: f64) -> SloccClass {
    let state = state.normalized().unwrap_or(*state);
    let t = tangle_vector(&state);
    let flag = |c: f64| u8::from(c > eps);
    let char_vector = [flag(t.c12), flag(t.c13), flag(t.c23)];
    let entangled: Vec<usize> = [(1, t.tau11), (2, t.tau12), (3, t.tau13)]
        .iter()
        .filter(|(_, tau)| *tau > eps)
        .map(|(q, _)| *q)
        .collect();
    let label = if t.tau3 > eps {
        SloccLabel::Ghz
    } else {
        match entangled[..] {
            [] => SloccLabel::Product,
            [i, j] => SloccLabel::Biseparable(i, j),
            _ => SloccLabel::W,
        }
    };
    SloccClass { label, char_vector }
}
