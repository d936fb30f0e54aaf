//! Scalar invariants of three-qubit pure states.
//!
//! Concurrences, the threetangle, local tangles, the Kempe invariant `I5`,
//! the modulus `I6` and the Grassl invariant, together with the closed forms
//! that hold when one of the tangles vanishes.
//!
//! Values are computed from the stored amplitudes without renormalizing, so
//! each invariant carries its homogeneous degree in `|psi|`: concurrences and
//! local tangles scale as `|psi|^2` and `|psi|^4`, `I5` as `|psi|^6`.

use nalgebra::{Matrix2, SMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::acin::{from_acin, AcinParams};
use crate::error::{Error, Result};
use crate::state::{bit, check_pair, check_qubit, complement, PureState3};

/// Finite-difference step for [`invariant_jacobian`].
pub const JACOBIAN_STEP: f64 = 1e-6;
/// Relative singular-value threshold for the Jacobian rank.
pub const RANK_THRESHOLD: f64 = 1e-6;

const CLAMP_TOL: f64 = 1e-12;

/// Concurrences, tangles and the two merely unitary invariants of a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangleVector {
    pub c12: f64,
    pub c13: f64,
    pub c23: f64,
    pub tau3: f64,
    pub tau11: f64,
    pub tau12: f64,
    pub tau13: f64,
    pub i5: f64,
    pub i6: f64,
}

impl TangleVector {
    pub const CSV_HEADER: [&'static str; 9] = ["c12", "c13", "c23", "tau3", "tau11", "tau12", "tau13", "i5", "i6"];

    pub fn concurrence(&self, i: usize, j: usize) -> Result<f64> {
        check_pair(i, j)?;
        Ok(match (i.min(j), i.max(j)) {
            (1, 2) => self.c12,
            (1, 3) => self.c13,
            _ => self.c23,
        })
    }

    pub fn local_tangle(&self, q: usize) -> Result<f64> {
        match q {
            1 => Ok(self.tau11),
            2 => Ok(self.tau12),
            3 => Ok(self.tau13),
            _ => Err(Error::BadQubitSet(vec![q])),
        }
    }

    /// The six-component vector `(tau11, tau12, tau13, tau3, I5, I6)`.
    pub fn six(&self) -> [f64; 6] {
        [self.tau11, self.tau12, self.tau13, self.tau3, self.i5, self.i6]
    }

    /// Largest violation of `tau_{1;i} = C_ij^2 + C_ik^2 + tau3` over the three qubits.
    pub fn monogamy_defect(&self) -> f64 {
        let d1 = self.tau11 - (self.c12 * self.c12 + self.c13 * self.c13 + self.tau3);
        let d2 = self.tau12 - (self.c12 * self.c12 + self.c23 * self.c23 + self.tau3);
        let d3 = self.tau13 - (self.c13 * self.c13 + self.c23 * self.c23 + self.tau3);
        d1.abs().max(d2.abs()).max(d3.abs())
    }

    pub fn csv_row(&self) -> [f64; 9] {
        [
            self.c12, self.c13, self.c23, self.tau3, self.tau11, self.tau12, self.tau13, self.i5, self.i6,
        ]
    }
}

/// Real and imaginary part of the Grassl invariant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrasslValue {
    pub re: f64,
    pub im: f64,
}

/// Flat record: the tangle vector followed by the Grassl invariant when a
/// canonical form was available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantRecord {
    #[serde(flatten)]
    pub tangles: TangleVector,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub re_ig: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub im_ig: Option<f64>,
}

impl InvariantRecord {
    pub fn new(tangles: TangleVector, grassl: Option<GrasslValue>) -> Self {
        Self {
            tangles,
            re_ig: grassl.map(|g| g.re),
            im_ig: grassl.map(|g| g.im),
        }
    }

    pub fn csv_header(&self) -> Vec<&'static str> {
        let mut h = TangleVector::CSV_HEADER.to_vec();
        if self.re_ig.is_some() {
            h.extend(["re_ig", "im_ig"]);
        }
        h
    }

    pub fn csv_values(&self) -> Vec<f64> {
        let mut v = self.tangles.csv_row().to_vec();
        if let (Some(re), Some(im)) = (self.re_ig, self.im_ig) {
            v.extend([re, im]);
        }
        v
    }
}

/// Amplitudes arranged as a 4x2 block: rows `(q_i, q_j)`, columns the third qubit.
fn pair_block(state: &PureState3, i: usize, j: usize) -> [[Complex64; 2]; 4] {
    let k = complement(i, j);
    let mut phi = [[Complex64::new(0.0, 0.0); 2]; 4];
    for (b, a) in state.amplitudes().iter().enumerate() {
        phi[2 * bit(b, i) + bit(b, j)][bit(b, k)] = *a;
    }
    phi
}

/// `M = Phi^T (sigma_y ⊗ sigma_y) Phi`, a complex symmetric 2x2 matrix whose
/// singular values are the nonzero square roots of the spectrum of
/// `rho_ij * rho_ij~`.
fn spin_flip_kernel(state: &PureState3, i: usize, j: usize) -> Matrix2<Complex64> {
    let phi = pair_block(state, i, j);
    Matrix2::from_fn(|c, d| {
        -phi[0][c] * phi[3][d] + phi[1][c] * phi[2][d] + phi[2][c] * phi[1][d] - phi[3][c] * phi[0][d]
    })
}

/// `(|M|_F^2, |det M|)` for the spin-flip kernel of the pair.
fn spin_flip_moments(state: &PureState3, i: usize, j: usize) -> Result<(f64, f64)> {
    check_pair(i, j)?;
    let m = spin_flip_kernel(state, i, j);
    let frob: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    Ok((frob, m.determinant().norm()))
}

/// Decreasing square roots `mu_1 >= ... >= mu_4` of the eigenvalues of
/// `rho_ij (sigma_y ⊗ sigma_y) rho_ij^* (sigma_y ⊗ sigma_y)`.
///
/// For a pure three-qubit state `rho_ij` has rank at most two, so `mu_3 = mu_4 = 0`.
pub fn spin_flip_roots(state: &PureState3, i: usize, j: usize) -> Result<[f64; 4]> {
    let (frob, det) = spin_flip_moments(state, i, j)?;
    let sum = (frob + 2.0 * det).max(0.0).sqrt();
    let diff = (frob - 2.0 * det).max(0.0).sqrt();
    Ok([0.5 * (sum + diff), 0.5 * (sum - diff), 0.0, 0.0])
}

/// Squared concurrence of the reduced state of qubits `i`, `j`.
pub fn concurrence_sqr(state: &PureState3, i: usize, j: usize) -> Result<f64> {
    let (frob, det) = spin_flip_moments(state, i, j)?;
    Ok((frob - 2.0 * det).max(0.0))
}

/// Concurrence `max(0, mu_1 - mu_2 - mu_3 - mu_4)` of the pair `(i, j)`.
pub fn concurrence(state: &PureState3, i: usize, j: usize) -> Result<f64> {
    Ok(concurrence_sqr(state, i, j)?.sqrt())
}

/// Concurrence of assistance `mu_1 + mu_2 + mu_3 + mu_4` (the Uhlmann fidelity
/// between `rho_ij` and its spin-flipped partner).
pub fn concurrence_of_assistance(state: &PureState3, i: usize, j: usize) -> Result<f64> {
    let (frob, det) = spin_flip_moments(state, i, j)?;
    Ok((frob + 2.0 * det).max(0.0).sqrt())
}

/// Cayley hyperdeterminant combination `d1 - 2 d2 + 4 d3` of the amplitudes.
pub fn hyperdeterminant(state: &PureState3) -> Complex64 {
    let a = |q1, q2, q3| state.amp(q1, q2, q3);
    let (a000, a001, a010, a011) = (a(0, 0, 0), a(0, 0, 1), a(0, 1, 0), a(0, 1, 1));
    let (a100, a101, a110, a111) = (a(1, 0, 0), a(1, 0, 1), a(1, 1, 0), a(1, 1, 1));
    let d1 = a000 * a000 * a111 * a111
        + a001 * a001 * a110 * a110
        + a010 * a010 * a101 * a101
        + a100 * a100 * a011 * a011;
    let d2 = a000 * a111 * a011 * a100
        + a000 * a111 * a101 * a010
        + a000 * a111 * a110 * a001
        + a011 * a100 * a101 * a010
        + a011 * a100 * a110 * a001
        + a101 * a010 * a110 * a001;
    let d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100;
    d1 - 2.0 * d2 + 4.0 * d3
}

/// Threetangle `4 |d1 - 2 d2 + 4 d3|`.
pub fn three_tangle(state: &PureState3) -> f64 {
    4.0 * hyperdeterminant(state).norm()
}

fn single_density(state: &PureState3, q: usize) -> Matrix2<Complex64> {
    let mut r = Matrix2::<Complex64>::zeros();
    for (b1, a1) in state.amplitudes().iter().enumerate() {
        let partner = b1 ^ (1 << (3 - q));
        if bit(b1, q) == 0 {
            let a2 = state.amplitudes()[partner];
            r[(0, 0)] += a1 * a1.conj();
            r[(1, 1)] += a2 * a2.conj();
            r[(0, 1)] += a1 * a2.conj();
        }
    }
    r[(1, 0)] = r[(0, 1)].conj();
    r
}

fn local_tangle_raw(state: &PureState3, q: usize) -> f64 {
    let r = single_density(state, q);
    4.0 * (r[(0, 0)].re * r[(1, 1)].re - r[(0, 1)].norm_sqr())
}

fn clamp_unit(x: f64) -> f64 {
    if (-CLAMP_TOL..0.0).contains(&x) {
        0.0
    } else if x > 1.0 && x <= 1.0 + CLAMP_TOL {
        1.0
    } else {
        x
    }
}

/// Local tangle `tau_{1;q} = 4 det rho_q`.
pub fn local_tangle(state: &PureState3, q: usize) -> Result<f64> {
    if !check_qubit(q) {
        return Err(Error::BadQubitSet(vec![q]));
    }
    Ok(clamp_unit(local_tangle_raw(state, q)))
}

fn trace_cube(r: &Matrix2<Complex64>) -> f64 {
    (r * r * r).trace().re
}

/// Kempe invariant `3 tr[(rho_i ⊗ rho_j) rho_ij] - tr rho_i^3 - tr rho_j^3`.
pub fn kempe_i5(state: &PureState3, i: usize, j: usize) -> Result<f64> {
    check_pair(i, j)?;
    let (i, j) = (i.min(j), i.max(j));
    let ri = single_density(state, i);
    let rj = single_density(state, j);
    let rij = state.reduced_density(&[i, j])?;
    let rij = rij.matrix();
    let mut cross = Complex64::new(0.0, 0.0);
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    cross += ri[(a, a2)] * rj[(b, b2)] * rij[(2 * a2 + b2, 2 * a + b)];
                }
            }
        }
    }
    Ok(3.0 * cross.re - trace_cube(&ri) - trace_cube(&rj))
}

/// Squared modulus `I6 = sum |a_b|^2`.
pub fn modulus_i6(state: &PureState3) -> f64 {
    state.norm_sqr()
}

/// Grassl invariant on the canonical form, evaluated as a polynomial in the
/// parameters (no range check on `phi`).
pub fn grassl(p: &AcinParams) -> GrasslValue {
    let tau3 = 4.0 * p.l1 * p.l1 * p.l4 * p.l4;
    let prod = p.l0 * p.l2 * p.l3;
    let shift = 1.0 - 2.0 * (p.l0 * p.l0 + p.l1 * p.l1);
    let (sin, cos) = p.phi.sin_cos();
    let re = tau3
        * p.l1
        * p.l1
        * ((2.0 * p.phi).cos() * prod * prod
            + (cos * prod * p.l4 + 0.25 * p.l4 * p.l4 * shift) * shift);
    let im = -tau3 * sin * prod * (2.0 * cos * prod + p.l4 * shift);
    GrasslValue { re, im }
}

/// `I5` for states whose concurrence `C_ij` vanishes:
/// `|psi|^2 (|psi|^4 - 3/4 tau)`, where `tau` is the local tangle of the
/// remaining qubit `k` (qubit 3 when `C_12 = 0`).
pub fn i5_closed_c12_zero(complement_tangle: f64, norm2: f64) -> f64 {
    norm2 * (norm2 * norm2 - 0.75 * complement_tangle)
}

/// `I5` on the zero-threetangle class as a function of the concurrences.
pub fn i5_closed_w_class(c12: f64, c13: f64, c23: f64, norm2: f64) -> f64 {
    norm2.powi(3) - 0.75 * norm2 * (c12 * c12 + c13 * c13 + c23 * c23) + 0.75 * c12 * c13 * c23
}

/// All invariants of `state`.
pub fn tangle_vector(state: &PureState3) -> TangleVector {
    let c = |i, j| concurrence(state, i, j).expect("valid pair");
    let t = |q| local_tangle(state, q).expect("valid qubit");
    let tv = TangleVector {
        c12: c(1, 2),
        c13: c(1, 3),
        c23: c(2, 3),
        tau3: three_tangle(state),
        tau11: t(1),
        tau12: t(2),
        tau13: t(3),
        i5: kempe_i5(state, 1, 2).expect("valid pair"),
        i6: modulus_i6(state),
    };
    debug_assert!(!state.is_normalized(1e-10) || tv.monogamy_defect() < 1e-8);
    tv
}

/// Finite-difference Jacobian of `(tau11, tau12, tau13, tau3, I5, I6)` with
/// respect to `(l0, l1, l2, l3, l4, phi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianReport {
    /// `matrix[r][c]`: derivative of invariant `r` along parameter `c`.
    pub matrix: [[f64; 6]; 6],
    /// Descending.
    pub singular_values: [f64; 6],
    pub rank: usize,
}

fn raw_six(p: &AcinParams) -> [f64; 6] {
    let s = from_acin(p);
    [
        local_tangle_raw(&s, 1),
        local_tangle_raw(&s, 2),
        local_tangle_raw(&s, 3),
        three_tangle(&s),
        kempe_i5(&s, 1, 2).expect("valid pair"),
        modulus_i6(&s),
    ]
}

/// Jacobian and numerical rank of the six-invariant map at `params`.
///
/// The rank is only meaningful away from the boundary of parameter space, but
/// boundary points (a vanishing `lambda`) are accepted since that is where
/// rank deficiency is expected.
pub fn invariant_jacobian(params: &AcinParams) -> Result<JacobianReport> {
    let x = params.as_array();
    if x.iter().any(|v| !v.is_finite()) || x[..5].iter().any(|&l| l < 0.0) {
        return Err(Error::BoundaryParams(format!("{params:?}")));
    }
    if !(0.0..=std::f64::consts::PI).contains(&params.phi) {
        return Err(Error::BoundaryParams(format!("phi = {} outside [0, pi]", params.phi)));
    }
    let mut matrix = [[0.0; 6]; 6];
    for col in 0..6 {
        let mut plus = x;
        let mut minus = x;
        plus[col] += JACOBIAN_STEP;
        minus[col] -= JACOBIAN_STEP;
        let fp = raw_six(&AcinParams::from_array(plus));
        let fm = raw_six(&AcinParams::from_array(minus));
        for row in 0..6 {
            matrix[row][col] = (fp[row] - fm[row]) / (2.0 * JACOBIAN_STEP);
        }
    }
    let m = SMatrix::<f64, 6, 6>::from_fn(|r, c| matrix[r][c]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let largest = sv[0];
    let rank = sv.iter().filter(|&&s| s > RANK_THRESHOLD * largest).count();
    Ok(JacobianReport {
        matrix,
        singular_values: [sv[0], sv[1], sv[2], sv[3], sv[4], sv[5]],
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{preset_state, Preset};

    const SQ: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn ghz() -> PureState3 {
        preset_state(Preset::Ghz).unwrap()
    }
    fn w() -> PureState3 {
        preset_state(Preset::W).unwrap()
    }
    fn prod() -> PureState3 {
        preset_state(Preset::Product000).unwrap()
    }

    #[test]
    fn concurrence_examples() {
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            assert!((concurrence(&w(), i, j).unwrap() - 2.0 / 3.0).abs() < 1e-14);
            assert!(concurrence(&ghz(), i, j).unwrap() < 1e-14);
            assert!(concurrence(&prod(), i, j).unwrap() < 1e-14);
        }
        assert_eq!(concurrence(&w(), 1, 1), Err(Error::BadPair(1, 1)));
        assert_eq!(concurrence(&w(), 0, 2), Err(Error::BadPair(0, 2)));
        assert_eq!(concurrence(&w(), 2, 4), Err(Error::BadPair(2, 4)));
    }

    #[test]
    fn three_tangle_examples() {
        assert!((three_tangle(&ghz()) - 1.0).abs() < 1e-14);
        assert!(three_tangle(&w()) < 1e-14);
        let t0 = three_tangle(&preset_state(Preset::PsiAlpha(0.0)).unwrap());
        for alpha in [0.3, 1.0, 2.0, std::f64::consts::PI] {
            let t = three_tangle(&preset_state(Preset::PsiAlpha(alpha)).unwrap());
            assert!((t - t0).abs() < 1e-14);
        }
    }

    #[test]
    fn local_tangle_examples() {
        for q in 1..=3 {
            assert!((local_tangle(&ghz(), q).unwrap() - 1.0).abs() < 1e-14);
            assert_eq!(local_tangle(&prod(), q).unwrap(), 0.0);
            assert!((local_tangle(&w(), q).unwrap() - 8.0 / 9.0).abs() < 1e-14);
        }
        assert!(local_tangle(&ghz(), 4).is_err());
    }

    #[test]
    fn kempe_examples() {
        for (i, j) in [(1, 2), (1, 3), (2, 3), (3, 1)] {
            assert!((kempe_i5(&ghz(), i, j).unwrap() - 0.25).abs() < 1e-14);
            assert!((kempe_i5(&w(), i, j).unwrap() - 2.0 / 9.0).abs() < 1e-14);
            assert!((kempe_i5(&prod(), i, j).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!(kempe_i5(&ghz(), 2, 2).is_err());
    }

    #[test]
    fn kempe_scales_with_sixth_power() {
        let amp = ghz().amplitudes().map(|a| a * 2.0);
        let big = PureState3::unnormalized(amp);
        assert!((kempe_i5(&big, 1, 2).unwrap() - 0.25 * 64.0).abs() < 1e-12);
    }

    #[test]
    fn modulus_examples() {
        assert!((modulus_i6(&w()) - 1.0).abs() < 1e-15);
        let doubled = PureState3::unnormalized(w().amplitudes().map(|a| a * 2.0));
        assert!((modulus_i6(&doubled) - 4.0).abs() < 1e-14);
        let mut amp = [Complex64::new(0.0, 0.0); 8];
        amp[0] = Complex64::new(1.0, 0.0);
        amp[7] = Complex64::new(1.0, 0.0);
        assert!((modulus_i6(&PureState3::unnormalized(amp)) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn grassl_examples() {
        let zero_l4 = AcinParams::new(0.3, 0.5, 0.4, 0.6, 0.0, 1.1).unwrap();
        assert_eq!(grassl(&zero_l4), GrasslValue { re: 0.0, im: 0.0 });
        let zero_l1 = AcinParams::new(0.3, 0.0, 0.4, 0.6, 0.5, 1.1).unwrap();
        assert_eq!(grassl(&zero_l1), GrasslValue { re: 0.0, im: 0.0 });
        let g = grassl(&AcinParams::new(0.0, SQ, 0.0, 0.0, SQ, 0.0).unwrap());
        assert!(g.re.abs() < 1e-16 && g.im.abs() < 1e-16);

        let p = AcinParams::new(0.35, 0.5, 0.42, 0.37, 0.55, 0.8).unwrap();
        let mut q = p;
        q.phi = -p.phi;
        let (a, b) = (grassl(&p), grassl(&q));
        assert!((a.re - b.re).abs() < 1e-15);
        assert!((a.im + b.im).abs() < 1e-15);
        assert!(a.im.abs() > 1e-4);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(i5_closed_c12_zero(0.0, 1.0), 1.0);
        assert_eq!(i5_closed_c12_zero(1.0, 1.0), 0.25);
        assert_eq!(i5_closed_c12_zero(0.5, 1.0), 0.625);

        assert!((i5_closed_w_class(2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0) - 2.0 / 9.0).abs() < 1e-15);
        assert_eq!(i5_closed_w_class(0.0, 0.0, 0.0, 1.0), 1.0);
        assert!((i5_closed_w_class(SQ, SQ, 0.0, 1.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_kempe_on_constructed_states() {
        // lambda2 = 0 forces C12 = 0
        let p = AcinParams::new(0.4, 0.6, 0.0, 0.3, (1.0f64 - 0.16 - 0.36 - 0.09).sqrt(), 0.7).unwrap();
        let s = from_acin(&p);
        assert!(concurrence(&s, 1, 2).unwrap() < 1e-12);
        let closed = i5_closed_c12_zero(local_tangle(&s, 3).unwrap(), s.norm_sqr());
        assert!((closed - kempe_i5(&s, 1, 2).unwrap()).abs() < 1e-14);

        // W-class state with unequal weights
        let s = PureState3::from_real([0.0, 0.5, 0.5, 0.0, SQ, 0.0, 0.0, 0.0]).unwrap();
        let tv = tangle_vector(&s);
        assert!(tv.tau3 < 1e-14);
        let closed = i5_closed_w_class(tv.c12, tv.c13, tv.c23, 1.0);
        assert!((closed - tv.i5).abs() < 1e-14);
    }

    #[test]
    fn assistance_examples() {
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            assert!((concurrence_of_assistance(&ghz(), i, j).unwrap() - 1.0).abs() < 1e-14);
            assert!(concurrence_of_assistance(&prod(), i, j).unwrap() < 1e-14);
            assert!((concurrence_of_assistance(&w(), i, j).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn tangle_vector_examples() {
        let g = tangle_vector(&ghz());
        for (got, want) in g.csv_row().iter().zip([0., 0., 0., 1., 1., 1., 1., 0.25, 1.]) {
            assert!((got - want).abs() < 1e-14);
        }
        let w = tangle_vector(&w());
        for (got, want) in w.csv_row().iter().zip([
            2. / 3.,
            2. / 3.,
            2. / 3.,
            0.,
            8. / 9.,
            8. / 9.,
            8. / 9.,
            2. / 9.,
            1.,
        ]) {
            assert!((got - want).abs() < 1e-14);
        }
        let p = tangle_vector(&prod());
        for (got, want) in p.csv_row().iter().zip([0., 0., 0., 0., 0., 0., 0., 1., 1.]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn local_tangles_equal_tau3_without_pairwise_terms() {
        let p = AcinParams::new(0.0, 0.6, 0.0, 0.0, 0.8, 0.4).unwrap();
        let tv = tangle_vector(&from_acin(&p));
        for t in [tv.tau11, tv.tau12, tv.tau13] {
            assert!((t - tv.tau3).abs() < 1e-14);
        }
    }

    #[test]
    fn record_serializes_in_fixed_order() {
        let rec = InvariantRecord::new(tangle_vector(&ghz()), Some(GrasslValue { re: 0.0, im: 0.0 }));
        let json = serde_json::to_string(&rec).unwrap();
        let keys: Vec<usize> = ["c12", "c13", "c23", "tau3", "tau11", "tau12", "tau13", "i5", "i6", "re_ig", "im_ig"]
            .iter()
            .map(|k| json.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        let plain = InvariantRecord::new(tangle_vector(&ghz()), None);
        assert!(!serde_json::to_string(&plain).unwrap().contains("re_ig"));
        assert_eq!(plain.csv_header().len(), 9);
        assert_eq!(rec.csv_values().len(), 11);
    }

    #[test]
    fn jacobian_rejects_invalid_params() {
        let mut p = AcinParams::new(0.3, 0.4, 0.5, 0.4, 0.5, 1.0).unwrap();
        p.l2 = -0.1;
        assert!(matches!(invariant_jacobian(&p), Err(Error::BoundaryParams(_))));
        p.l2 = 0.5;
        p.phi = 4.0;
        assert!(matches!(invariant_jacobian(&p), Err(Error::BoundaryParams(_))));
    }
}
