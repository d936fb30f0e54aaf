//! Seeded random draws: Haar states, Haar unitaries, contractions.
//!
//! Every entry point takes an explicit seed or generator. `ChaCha8Rng` is used
//! because its stream is fixed across platforms, which keeps CSV output
//! byte-identical between runs.

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::state::{LocalOp, PureState3};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (independent N(0,1) real and imaginary parts).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre2<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<Complex64> {
    Matrix2::from_fn(|_, _| complex_gaussian(rng))
}

/// Haar-random pure state from an existing generator.
pub fn haar_state_from<R: Rng + ?Sized>(rng: &mut R) -> PureState3 {
    loop {
        let amp: [Complex64; 8] = std::array::from_fn(|_| complex_gaussian(rng));
        if let Ok(s) = PureState3::new(amp) {
            return s;
        }
    }
}

/// Haar-random pure state, deterministic in `seed`.
pub fn haar_random_state(seed: u64) -> PureState3 {
    haar_state_from(&mut seeded(seed))
}

/// Haar-random 2x2 unitary (QR of a Ginibre matrix with the phase fix on R).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> LocalOp {
    let g = ginibre2(rng);
    // Gram-Schmidt on the columns
    let c0 = g.column(0).into_owned();
    let n0 = c0.norm();
    let q0 = c0 / Complex64::new(n0, 0.0);
    let c1 = g.column(1).into_owned();
    let proj = q0.dotc(&c1);
    let r1 = c1 - q0 * proj;
    let n1 = r1.norm();
    let q1 = r1 / Complex64::new(n1, 0.0);
    let m = Matrix2::from_columns(&[q0, q1]);
    LocalOp::unitary(m).unwrap_or_else(|_| LocalOp::general(m))
}

/// Random determinant-one operator: a Ginibre matrix divided by a square root
/// of its determinant.
pub fn random_sl2<R: Rng + ?Sized>(rng: &mut R) -> LocalOp {
    loop {
        let g = ginibre2(rng);
        let d = g.determinant();
        if d.norm() < 1e-3 {
            continue;
        }
        let m = g / d.sqrt();
        if let Ok(op) = LocalOp::sl2(m) {
            return op;
        }
    }
}

/// Random `SL(2,C)` element close to the identity: `1 + eps*G` rescaled to
/// unit determinant. Keeps renormalization factors moderate.
pub fn random_sl2_near_identity<R: Rng + ?Sized>(rng: &mut R, eps: f64) -> LocalOp {
    loop {
        let g = Matrix2::identity() + ginibre2(rng) * Complex64::new(eps, 0.0);
        let d = g.determinant();
        if d.norm() < 1e-3 {
            continue;
        }
        if let Ok(op) = LocalOp::sl2(g / d.sqrt()) {
            return op;
        }
    }
}

/// Random contraction: a Ginibre matrix scaled so its largest singular value
/// is a uniform draw from `(0, 1]`.
pub fn random_contraction<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<Complex64> {
    let g = ginibre2(rng);
    let smax = g.singular_values().max();
    let scale: f64 = 1.0 - rng.random::<f64>();
    g * Complex64::new(scale / smax, 0.0)
}
