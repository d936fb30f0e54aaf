//! Random ensembles and the `I5` versus `tau3` scatter.
//!
//! Sample `i` of a run with base seed `s` is drawn from its own generator
//! seeded with `s + i`, so results do not depend on thread count or order.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acin::{from_acin, AcinParams};
use crate::error::{Error, Result};
use crate::invariants::{tangle_vector, three_tangle};
use crate::random::{haar_state_from, seeded};
use crate::slocc::{classify, DEFAULT_EPS};
use crate::state::{preset_state, PureState3, Preset};

/// Threetangle above which a Haar draw counts as GHZ class.
pub const GHZ_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    Haar,
    /// Haar draws rejected until `tau3 > GHZ_THRESHOLD`.
    GhzClass,
    /// Canonical form with the `l` uniform on the positive octant of the unit
    /// 4-sphere and `phi` uniform on `[0, pi]`.
    AcinRandom,
    /// As `AcinRandom` with `l4 = 0`.
    WClass,
    /// Canonical states with one concurrence forced to zero, cycling over
    /// `C12`, `C13` and `C23`.
    VanishingConcurrence,
}

impl Ensemble {
    pub const ALL: [Ensemble; 5] = [
        Ensemble::Haar,
        Ensemble::GhzClass,
        Ensemble::AcinRandom,
        Ensemble::WClass,
        Ensemble::VanishingConcurrence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Ensemble::Haar => "haar",
            Ensemble::GhzClass => "ghz_class",
            Ensemble::AcinRandom => "acin_random",
            Ensemble::WClass => "w_class",
            Ensemble::VanishingConcurrence => "vanishing_concurrence",
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        Ensemble::ALL
            .into_iter()
            .find(|e| e.name() == key)
            .ok_or_else(|| Error::BadParam(format!("unknown ensemble `{s}`")))
    }
}

fn abs_gaussians<R: Rng + ?Sized, const N: usize>(rng: &mut R) -> [f64; N] {
    loop {
        let v: [f64; N] = std::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal).abs());
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.map(|x| x / n);
        }
    }
}

fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>() * std::f64::consts::PI
}

fn normalized_params(l: [f64; 5], phi: f64) -> AcinParams {
    let n = l.iter().map(|x| x * x).sum::<f64>().sqrt();
    AcinParams::from_array([l[0] / n, l[1] / n, l[2] / n, l[3] / n, l[4] / n, phi])
}

/// One state from `ensemble`. `index` only matters for the cycling ensemble.
pub fn draw<R: Rng + ?Sized>(ensemble: Ensemble, index: u64, rng: &mut R) -> PureState3 {
    match ensemble {
        Ensemble::Haar => haar_state_from(rng),
        Ensemble::GhzClass => loop {
            let s = haar_state_from(rng);
            if three_tangle(&s) > GHZ_THRESHOLD {
                return s;
            }
        },
        Ensemble::AcinRandom => {
            let l: [f64; 5] = abs_gaussians(rng);
            from_acin(&normalized_params(l, random_phase(rng)))
        }
        Ensemble::WClass => {
            let [l0, l1, l2, l3] = abs_gaussians(rng);
            from_acin(&normalized_params([l0, l1, l2, l3, 0.0], random_phase(rng)))
        }
        Ensemble::VanishingConcurrence => {
            let [l0, l1, l2, l3, l4] = abs_gaussians(rng);
            let phi = random_phase(rng);
            let l = match index % 3 {
                // C12 = 2 l1 l2
                0 => [l0, l1, 0.0, l3, l4],
                // C13 = 2 l1 l3
                1 => [l0, l1, l2, 0.0, l4],
                // C23 = 2 |l0 l4 e^{i phi} - l2 l3|
                _ => {
                    let l0 = l0.max(1e-3);
                    let p = normalized_params([l0, l1, l2, l3, l2 * l3 / l0], 0.0);
                    return from_acin(&p);
                }
            };
            from_acin(&normalized_params(l, phi))
        }
    }
}

/// One point of the scatter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub index: u64,
    pub tau3: f64,
    pub i5: f64,
    pub c12: f64,
    pub c13: f64,
    pub c23: f64,
    pub class: String,
}

impl ScatterRow {
    pub const CSV_HEADER: [&'static str; 7] = ["index", "tau3", "i5", "c12", "c13", "c23", "class"];

    pub fn from_state(index: u64, state: &PureState3) -> Self {
        let t = tangle_vector(state);
        Self {
            index,
            tau3: t.tau3,
            i5: t.i5,
            c12: t.c12,
            c13: t.c13,
            c23: t.c23,
            class: classify(state, DEFAULT_EPS).label.to_string(),
        }
    }

    pub fn min_concurrence(&self) -> f64 {
        self.c12.min(self.c13).min(self.c23)
    }
}

/// `n` samples of `ensemble`; sample `i` uses seed `seed + i`.
pub fn sample_scatter(ensemble: Ensemble, n: usize, seed: u64) -> Result<Vec<ScatterRow>> {
    if n == 0 {
        return Err(Error::BadParam("n must be at least 1".into()));
    }
    Ok((0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded(seed.wrapping_add(i));
            ScatterRow::from_state(i, &draw(ensemble, i, &mut rng))
        })
        .collect())
}

pub fn write_scatter_csv<W: Write>(rows: &[ScatterRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ScatterRow::CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.index.to_string(),
            r.tau3.to_string(),
            r.i5.to_string(),
            r.c12.to_string(),
            r.c13.to_string(),
            r.c23.to_string(),
            r.class.clone(),
        ])?;
    }
    w.flush()
}

/// `a |111> + sqrt(1 - a^2) |W>`.
pub fn min_curve_state(a: f64) -> Result<PureState3> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::BadParam(format!("a = {a} outside [0, 1]")));
    }
    let w = preset_state(Preset::W)?;
    let b = (1.0 - a * a).sqrt();
    let mut amp = w.amplitudes().map(|z| z * b);
    amp[7] += a;
    PureState3::new(amp)
}

/// The curve `a -> (tau3, I5)` of [`min_curve_state`], sampled on a uniform grid.
#[derive(Debug, Clone)]
pub struct MinCurve {
    points: Vec<(f64, f64)>,
}

impl MinCurve {
    pub fn new(samples: usize) -> Self {
        let points = (0..samples)
            .map(|i| {
                let a = i as f64 / (samples - 1) as f64;
                let t = tangle_vector(&min_curve_state(a).expect("a in [0, 1]"));
                (t.tau3, t.i5)
            })
            .collect();
        Self { points }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Smallest `I5` the curve takes at threetangle `tau3`, by linear
    /// interpolation; `None` if the curve never reaches `tau3`.
    pub fn i5_at(&self, tau3: f64) -> Option<f64> {
        self.points
            .windows(2)
            .filter_map(|w| {
                let ((t0, i0), (t1, i1)) = (w[0], w[1]);
                let (lo, hi) = (t0.min(t1), t0.max(t1));
                if tau3 < lo || tau3 > hi {
                    return None;
                }
                Some(if hi - lo < 1e-15 { i0.min(i1) } else { i0 + (i1 - i0) * (tau3 - t0) / (t1 - t0) })
            })
            .reduce(f64::min)
    }
}

/// Per-bin comparison of samples against the min curve.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeBin {
    pub tau3_lo: f64,
    pub tau3_hi: f64,
    pub count: usize,
    /// `min (I5 - curve(tau3))` over the samples in the bin.
    pub margin: f64,
}

/// Bins `rows` by `tau3` on `[0, 1]` and reports, per nonempty bin, how far
/// the samples sit above the min curve at their own `tau3`.
pub fn envelope_check(rows: &[ScatterRow], curve: &MinCurve, bins: usize) -> Vec<EnvelopeBin> {
    let mut out: Vec<EnvelopeBin> = (0..bins)
        .map(|b| EnvelopeBin {
            tau3_lo: b as f64 / bins as f64,
            tau3_hi: (b + 1) as f64 / bins as f64,
            count: 0,
            margin: f64::INFINITY,
        })
        .collect();
    for r in rows {
        let b = ((r.tau3 * bins as f64) as usize).min(bins - 1);
        if let Some(c) = curve.i5_at(r.tau3) {
            out[b].count += 1;
            out[b].margin = out[b].margin.min(r.i5 - c);
        }
    }
    out.retain(|b| b.count > 0);
    out
}
