//! Canonical form of a three-qubit pure state under local unitaries.
//!
//! Every state is locally unitarily equivalent to
//!
//! ```text
//! l1 |000> + l0 e^{i phi} |100> + l2 |110> + l3 |101> + l4 |111>
//! ```
//!
//! with nonnegative `l0..l4` and `phi` in `[0, pi]`. [`to_acin`] computes the
//! parameters together with the three unitaries that realize the reduction.
//!
//! The reduction rotates qubit 1 so that the slice `<0|_1 psi` becomes a rank
//! one 2x2 matrix. The rotation is read off from a root of the quadratic
//! `det(T0 + z T1) = 0`, where `T0`, `T1` are the slices of the amplitude
//! tensor along qubit 1. Singular vectors of the rank-one slice fix qubits 2
//! and 3, and diagonal phases make four amplitudes real. Of the two roots,
//! the one leaving the remaining phase in `[0, pi]` is kept.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{apply_product, basis_index, LocalOp, PureState3};

/// Upper bound on the reconstruction error accepted from [`to_acin`].
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Amplitudes below this (relative to the state norm) have no phase to fix.
const PHASE_FLOOR: f64 = 1e-12;
/// Discriminant, in units of `|psi|^8`, below which the pencil is treated as
/// having a double root (threetangle under about `4e-14`).
const DOUBLE_ROOT_TOL: f64 = 1e-14;

const PI: f64 = std::f64::consts::PI;

/// Coordinates of the canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcinParams {
    pub l0: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub phi: f64,
}

impl AcinParams {
    /// Validated constructor: every `l` finite and nonnegative, `phi` in `[0, pi]`.
    pub fn new(l0: f64, l1: f64, l2: f64, l3: f64, l4: f64, phi: f64) -> Result<Self> {
        let p = Self { l0, l1, l2, l3, l4, phi };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ls = [self.l0, self.l1, self.l2, self.l3, self.l4];
        if ls.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(Error::BadParam(format!("amplitudes must be finite and >= 0: {ls:?}")));
        }
        if !(self.phi.is_finite() && (0.0..=PI).contains(&self.phi)) {
            return Err(Error::BadParam(format!("phi = {} outside [0, pi]", self.phi)));
        }
        Ok(())
    }

    /// `(l0, l1, l2, l3, l4, phi)`.
    pub fn as_array(&self) -> [f64; 6] {
        [self.l0, self.l1, self.l2, self.l3, self.l4, self.phi]
    }

    /// Unchecked inverse of [`as_array`](Self::as_array).
    pub fn from_array(x: [f64; 6]) -> Self {
        Self {
            l0: x[0],
            l1: x[1],
            l2: x[2],
            l3: x[3],
            l4: x[4],
            phi: x[5],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        [self.l0, self.l1, self.l2, self.l3, self.l4].iter().map(|l| l * l).sum()
    }

    /// Largest absolute difference over the six coordinates.
    pub fn max_diff(&self, other: &AcinParams) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Builds the canonical-form state. The amplitudes are taken as given, so the
/// state is normalized exactly when `sum l^2 = 1`.
pub fn from_acin(p: &AcinParams) -> PureState3 {
    let mut amp = [Complex64::new(0.0, 0.0); 8];
    amp[basis_index(0, 0, 0)] = Complex64::new(p.l1, 0.0);
    amp[basis_index(1, 0, 0)] = Complex64::from_polar(p.l0, p.phi);
    amp[basis_index(1, 1, 0)] = Complex64::new(p.l2, 0.0);
    amp[basis_index(1, 0, 1)] = Complex64::new(p.l3, 0.0);
    amp[basis_index(1, 1, 1)] = Complex64::new(p.l4, 0.0);
    PureState3::unnormalized(amp)
}

/// Threetangle on the canonical form, `4 l1^2 l4^2`.
pub fn tau3_closed(p: &AcinParams) -> f64 {
    4.0 * p.l1 * p.l1 * p.l4 * p.l4
}

/// Canonical parameters plus the local unitaries that produce them:
/// `(u1 ⊗ u2 ⊗ u3) |input> = from_acin(params)` up to `residual`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcinReduction {
    pub params: AcinParams,
    pub u1: LocalOp,
    pub u2: LocalOp,
    pub u3: LocalOp,
    /// Largest amplitude deviation between the transformed input and the
    /// canonical state built from `params`.
    pub residual: f64,
}

fn slices(state: &PureState3) -> (Matrix2<Complex64>, Matrix2<Complex64>) {
    let t = |q1| Matrix2::from_fn(|j, k| state.amp(q1, j, k));
    (t(0), t(1))
}

/// Projective roots `(a : b)` of `det(a T0 + b T1) = 0`.
fn projective_roots(t0: &Matrix2<Complex64>, t1: &Matrix2<Complex64>, scale: f64) -> Vec<(Complex64, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let c0 = t0.determinant();
    let c2 = t1.determinant();
    let c1 = (t0 + t1).determinant() - c0 - c2;
    let size = c0.norm().max(c1.norm()).max(c2.norm());
    if size <= 1e-14 * scale {
        // every combination is singular
        return vec![(one, zero), (zero, one)];
    }
    // c2 b^2 + c1 a b + c0 a^2 = 0, solved without cancellation
    let disc = c1 * c1 - 4.0 * c0 * c2;
    if disc.norm() <= DOUBLE_ROOT_TOL * scale * scale {
        // zero threetangle: the split roots would only be accurate to sqrt(eps)
        let (x, y) = ((2.0 * c2, -c1), (-c1, 2.0 * c0));
        return if x.0.norm_sqr() + x.1.norm_sqr() >= y.0.norm_sqr() + y.1.norm_sqr() {
            vec![x]
        } else {
            vec![y]
        };
    }
    let mut s = disc.sqrt();
    if (c1 * s.conj()).re < 0.0 {
        s = -s;
    }
    let q = -(c1 + s) * 0.5;
    if q.norm() <= 1e-300 {
        // c1 = 0 and c0 c2 = 0: a double root at 0 or infinity
        return if c2.norm() > c0.norm() {
            vec![(one, zero)]
        } else {
            vec![(zero, one)]
        };
    }
    vec![(c2, q), (q, c0)]
}

struct Candidate {
    params: AcinParams,
    u: [Matrix2<Complex64>; 3],
    residual: f64,
    phi_in_range: bool,
}

fn phase_of(z: Complex64, floor: f64) -> f64 {
    if z.norm() > floor {
        z.arg()
    } else {
        0.0
    }
}

fn diag_phase(a: f64, b: f64) -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::from_polar(1.0, a),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, b),
    )
}

/// Unitary whose first row is `v^H` for a unit vector `v`.
fn frame_from(v0: Complex64, v1: Complex64) -> Matrix2<Complex64> {
    Matrix2::new(v0.conj(), v1.conj(), -v1, v0)
}

/// Unitaries `(U2, U3)` with `U2 m U3^T` having a single nonzero entry at (0, 0)
/// (up to the discarded second singular value).
///
/// Built from the dominant column rather than a general SVD, which loses
/// accuracy on complex matrices this close to rank one.
fn rank_one_frame(m: &Matrix2<Complex64>) -> (Matrix2<Complex64>, Matrix2<Complex64>) {
    let col = if m.column(0).norm() >= m.column(1).norm() { 0 } else { 1 };
    let x = m.column(col).normalize();
    // m ~ sigma x r with the unit row r = x^H m / sigma
    let r = x.adjoint() * m;
    let r = r / Complex64::new(r.norm(), 0.0);
    (frame_from(x[0], x[1]), frame_from(r[0], r[1]))
}

fn reduce_with(state: &PureState3, root: (Complex64, Complex64), floor: f64) -> Candidate {
    let (t0, t1) = slices(state);
    let n = (root.0.norm_sqr() + root.1.norm_sqr()).sqrt();
    let (a, b) = (root.0 / n, root.1 / n);
    let u1 = Matrix2::new(a, b, -b.conj(), a.conj());
    let t0p = t0 * a + t1 * b;
    let t1p = t1 * a.conj() - t0 * b.conj();

    let (u2, u3) = if t0p.norm() > floor {
        rank_one_frame(&t0p)
    } else {
        // qubit 1 factors out: diagonalize the other slice instead
        rank_one_frame(&t1p)
    };
    let rotated = apply_product(state.amplitudes(), [&u1, &u2, &u3]);
    let amp = |q1, q2, q3| rotated[basis_index(q1, q2, q3)];

    let g111 = phase_of(amp(1, 1, 1), floor);
    let g110 = phase_of(amp(1, 1, 0), floor);
    let g101 = phase_of(amp(1, 0, 1), floor);
    let g000 = phase_of(amp(0, 0, 0), floor);
    let a0 = -g000;
    let mut a1 = g111 - g110 - g101;
    let mut b1 = g101 - g111;
    let mut c1 = g110 - g111;

    // the phase left on |100>; removable whenever one of l0, l2, l3, l4 vanishes
    let a100 = amp(1, 0, 0);
    let rest = phase_of(a100, floor) + a1;
    let removable = [amp(1, 0, 0), amp(1, 1, 0), amp(1, 0, 1), amp(1, 1, 1)]
        .iter()
        .any(|z| z.norm() <= floor);
    if a100.norm() > floor {
        if amp(1, 1, 0).norm() <= floor {
            a1 -= rest;
            c1 += rest;
        } else if amp(1, 0, 1).norm() <= floor {
            a1 -= rest;
            b1 += rest;
        } else if amp(1, 1, 1).norm() <= floor {
            a1 -= rest;
            b1 += rest;
            c1 += rest;
        }
    }

    let p1 = diag_phase(a0, a1);
    let p2 = diag_phase(0.0, b1);
    let p3 = diag_phase(0.0, c1);
    let u = [p1 * u1, p2 * u2, p3 * u3];
    let out = apply_product(state.amplitudes(), [&u[0], &u[1], &u[2]]);
    let at = |q1, q2, q3| out[basis_index(q1, q2, q3)];

    let mut phi = if removable { 0.0 } else { at(1, 0, 0).arg() };
    if phi <= -PI + 1e-12 {
        phi = PI;
    }
    let phi_in_range = phi >= -1e-12;
    let params = AcinParams {
        l0: at(1, 0, 0).norm(),
        l1: at(0, 0, 0).norm(),
        l2: at(1, 1, 0).norm(),
        l3: at(1, 0, 1).norm(),
        l4: at(1, 1, 1).norm(),
        phi: phi.clamp(0.0, PI),
    };
    let target = from_acin(&AcinParams { phi, ..params });
    let residual = out
        .iter()
        .zip(target.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    Candidate {
        params,
        u,
        residual,
        phi_in_range,
    }
}

/// Reduces `state` to canonical form.
///
/// Among the admissible reductions the one with `phi` in `[0, pi]` is
/// returned; remaining ties go to the larger `l1`, then the larger `l4`.
/// A phase that can be absorbed by local phases is reported as `phi = 0`.
pub fn to_acin(state: &PureState3) -> Result<AcinReduction> {
    let norm = state.norm();
    if !(norm > 1e-15) || !norm.is_finite() {
        return Err(Error::DegenerateState(format!("state norm {norm:e}")));
    }
    let floor = PHASE_FLOOR * norm;
    let (t0, t1) = slices(state);
    let candidates: Vec<Candidate> = projective_roots(&t0, &t1, norm.powi(4))
        .into_iter()
        .map(|root| reduce_with(state, root, floor))
        .collect();

    let exact = |c: &Candidate| c.residual <= RESIDUAL_TOL * norm;
    let better = |x: &Candidate, y: &Candidate| -> bool {
        if exact(x) != exact(y) {
            return exact(x);
        }
        if x.phi_in_range != y.phi_in_range {
            return x.phi_in_range;
        }
        let tie = 1e-12 * norm;
        if (x.params.l1 - y.params.l1).abs() > tie {
            return x.params.l1 > y.params.l1;
        }
        if (x.params.l4 - y.params.l4).abs() > tie {
            return x.params.l4 > y.params.l4;
        }
        x.residual < y.residual
    };
    let mut best = &candidates[0];
    for c in &candidates[1..] {
        if better(c, best) {
            best = c;
        }
    }
    if !exact(best) {
        return Err(Error::DegenerateState(format!("reduction residual {:e}", best.residual)));
    }
    if !best.phi_in_range {
        return Err(Error::DegenerateState(format!(
            "no reduction leaves phi in [0, pi] (best {:?})",
            best.params
        )));
    }
    let op = |m: Matrix2<Complex64>| {
        LocalOp::unitary(m).map_err(|e| Error::DegenerateState(format!("reduction unitary: {e}")))
    };
    Ok(AcinReduction {
        params: best.params,
        u1: op(best.u[0])?,
        u2: op(best.u[1])?,
        u3: op(best.u[2])?,
        residual: best.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{tangle_vector, three_tangle};
    use crate::random::{haar_random_state, haar_unitary, seeded};
    use rand::Rng;
    use crate::state::{preset_state, Preset};

    const SQ: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn from_acin_examples() {
        let ghz = from_acin(&AcinParams::new(0.0, SQ, 0.0, 0.0, SQ, 0.0).unwrap());
        for (x, y) in ghz.amplitudes().iter().zip(preset_state(Preset::Ghz).unwrap().amplitudes()) {
            assert!((x - y).norm() < 1e-15);
        }

        let r5 = 1.0 / 5f64.sqrt();
        for alpha in [0.0, 0.7, PI] {
            let s = from_acin(&AcinParams::new(r5, r5, r5, r5, r5, alpha).unwrap());
            let psi = preset_state(Preset::PsiAlpha(alpha)).unwrap();
            for (x, y) in s.amplitudes().iter().zip(psi.amplitudes()) {
                assert!((x - y).norm() < 1e-15);
            }
        }
        let p = from_acin(&AcinParams::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap());
        assert_eq!(p.amplitudes(), PureState3::basis(0, 0, 0).amplitudes());
    }

    #[test]
    fn params_are_validated() {
        assert!(AcinParams::new(-0.1, 0.5, 0.5, 0.5, 0.5, 0.0).is_err());
        assert!(AcinParams::new(0.1, 0.5, 0.5, 0.5, 0.5, -0.1).is_err());
        assert!(AcinParams::new(0.1, 0.5, 0.5, 0.5, 0.5, 3.2).is_err());
        assert!(AcinParams::new(0.1, f64::NAN, 0.5, 0.5, 0.5, 1.0).is_err());
    }

    #[test]
    fn tau3_closed_examples() {
        assert!((tau3_closed(&AcinParams::new(0.0, SQ, 0.0, 0.0, SQ, 0.0).unwrap()) - 1.0).abs() < 1e-15);
        assert_eq!(tau3_closed(&AcinParams::new(0.5, 0.5, 0.5, 0.5, 0.0, 1.0).unwrap()), 0.0);
        let r5 = 1.0 / 5f64.sqrt();
        let p = AcinParams::new(r5, r5, r5, r5, r5, 2.0).unwrap();
        assert!((tau3_closed(&p) - 4.0 / 25.0).abs() < 1e-15);
        assert!((three_tangle(&from_acin(&p)) - 4.0 / 25.0).abs() < 1e-15);
    }

    #[test]
    fn ghz_reduces_to_two_terms() {
        let red = to_acin(&preset_state(Preset::Ghz).unwrap()).unwrap();
        let p = red.params;
        assert!((p.l1 - SQ).abs() < 1e-9 && (p.l4 - SQ).abs() < 1e-9, "{p:?}");
        assert!(p.l0 < 1e-9 && p.l2 < 1e-9 && p.l3 < 1e-9);
        assert!(red.residual < RESIDUAL_TOL);
    }

    #[test]
    fn canonical_input_is_a_fixed_point() {
        let p = AcinParams::new(0.35, 0.5, 0.42, 0.37, 0.0, 0.0).unwrap();
        let n = p.norm_sqr().sqrt();
        let mut q = AcinParams::from_array(p.as_array().map(|x| x / n));
        q.l4 = 0.0;
        for (l4, phi) in [(0.3, 0.8), (0.55, 2.9), (0.2, 0.05)] {
            let mut x = AcinParams { l4, phi, ..q };
            let n = x.norm_sqr().sqrt();
            x = AcinParams { l0: x.l0 / n, l1: x.l1 / n, l2: x.l2 / n, l3: x.l3 / n, l4: x.l4 / n, phi };
            let red = to_acin(&from_acin(&x)).unwrap();
            assert!(red.params.max_diff(&x) < 1e-9, "{x:?} -> {:?}", red.params);
        }
    }

    #[test]
    fn product_and_biseparable_states_reduce() {
        let red = to_acin(&PureState3::basis(0, 0, 0)).unwrap();
        assert!((red.params.l1 - 1.0).abs() < 1e-12);
        let red = to_acin(&PureState3::basis(1, 1, 0)).unwrap();
        assert!((red.params.l1 - 1.0).abs() < 1e-12, "{:?}", red.params);

        // |0> (|00> + |11>)/sqrt2
        let s = PureState3::from_real([1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let red = to_acin(&s).unwrap();
        assert!(red.residual < RESIDUAL_TOL);
        let a = tangle_vector(&s);
        let b = tangle_vector(&from_acin(&red.params));
        assert!((a.c23 - b.c23).abs() < 1e-9 && (a.i5 - b.i5).abs() < 1e-9);

        let w = preset_state(Preset::W).unwrap();
        let red = to_acin(&w).unwrap();
        assert!(red.residual < RESIDUAL_TOL);
        assert!(tau3_closed(&red.params) < 1e-12);
    }

    #[test]
    fn witnesses_reproduce_the_canonical_state() {
        for seed in 0..1000 {
            let s = haar_random_state(seed);
            let red = to_acin(&s).unwrap();
            assert!(red.residual < RESIDUAL_TOL, "seed {seed}: {}", red.residual);
            assert!((0.0..=PI).contains(&red.params.phi));
            let out = s.apply_local_ops(&red.u1, &red.u2, &red.u3, false).unwrap().state;
            let canon = from_acin(&red.params);
            for (x, y) in out.amplitudes().iter().zip(canon.amplitudes()) {
                assert!((x - y).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn rotated_w_class_states_reduce() {
        let mut rng = seeded(11);
        for _ in 0..300 {
            let l: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.05..1.0));
            let n = l.iter().map(|x| x * x).sum::<f64>().sqrt();
            let p = AcinParams::new(l[0] / n, l[1] / n, l[2] / n, l[3] / n, 0.0, rng.random_range(0.0..PI)).unwrap();
            let (u1, u2, u3) = (haar_unitary(&mut rng), haar_unitary(&mut rng), haar_unitary(&mut rng));
            let moved = from_acin(&p).apply_local_ops(&u1, &u2, &u3, false).unwrap().state;
            let red = to_acin(&moved).unwrap();
            assert!(red.residual < RESIDUAL_TOL);
            assert!(red.params.l4 < 1e-9, "{:?}", red.params);
        }
    }

    #[test]
    fn removable_phase_is_reported_as_zero() {
        let mut rng = seeded(3);
        let p = AcinParams::new(0.5, 0.5, 0.0, 0.5, 0.5, 1.3).unwrap();
        let s = from_acin(&p);
        let (u1, u2, u3) = (haar_unitary(&mut rng), haar_unitary(&mut rng), haar_unitary(&mut rng));
        let moved = s.apply_local_ops(&u1, &u2, &u3, false).unwrap().state;
        let red = to_acin(&moved).unwrap();
        assert_eq!(red.params.phi, 0.0);
        let want = AcinParams { phi: 0.0, ..p };
        assert!(red.params.max_diff(&want) < 1e-9, "{:?}", red.params);
    }
}
