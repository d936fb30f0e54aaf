//! Reference implementations that share no code with the library: explicit
//! outer products, Kronecker products and Hermitian eigenproblems.

#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use kempe::PureState3;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// `|psi><psi|` as an 8x8 matrix.
pub fn projector(state: &PureState3) -> DMatrix<C> {
    let v = DMatrix::from_column_slice(8, 1, state.amplitudes());
    &v * v.adjoint()
}

/// Partial trace of an 8x8 operator onto the qubits in `keep` (1-based, ascending).
pub fn partial_trace(rho: &DMatrix<C>, keep: &[usize]) -> DMatrix<C> {
    let d = 1 << keep.len();
    let mut out = DMatrix::from_element(d, d, c(0.0, 0.0));
    let bits = |b: usize, q: usize| (b >> (3 - q)) & 1;
    let sub = |b: usize| keep.iter().fold(0, |acc, &q| 2 * acc + bits(b, q));
    for r in 0..8 {
        for s in 0..8 {
            let traced_equal = (1..=3).filter(|q| !keep.contains(q)).all(|q| bits(r, q) == bits(s, q));
            if traced_equal {
                out[(sub(r), sub(s))] += rho[(r, s)];
            }
        }
    }
    out
}

fn sigma_y() -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

/// Hermitian square root via the eigen decomposition.
pub fn sqrtm(m: &DMatrix<C>) -> DMatrix<C> {
    let e = m.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|x| c(x.max(0.0).sqrt(), 0.0)));
    &e.eigenvectors * d * e.eigenvectors.adjoint()
}

/// Decreasing square roots of the eigenvalues of `sqrt(rho) rho~ sqrt(rho)`.
pub fn wootters_roots(state: &PureState3, i: usize, j: usize) -> Vec<f64> {
    let rho = partial_trace(&projector(state), &[i.min(j), i.max(j)]);
    let yy = sigma_y().kronecker(&sigma_y());
    let tilde = &yy * rho.map(|z| z.conj()) * &yy;
    let s = sqrtm(&rho);
    let r = &s * tilde * &s;
    let r = (&r + r.adjoint()) * c(0.5, 0.0);
    let mut ev: Vec<f64> = r.symmetric_eigen().eigenvalues.iter().map(|x| x.max(0.0).sqrt()).collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

pub fn wootters_concurrence(state: &PureState3, i: usize, j: usize) -> f64 {
    let m = wootters_roots(state, i, j);
    (m[0] - m[1] - m[2] - m[3]).max(0.0)
}

pub fn assistance(state: &PureState3, i: usize, j: usize) -> f64 {
    wootters_roots(state, i, j).iter().sum()
}

/// `4 |disc det(T0 + x T1)|`: Cayley's hyperdeterminant as the discriminant
/// of the slice pencil along qubit 1.
pub fn tau3_discriminant(state: &PureState3) -> f64 {
    let a = state.amplitudes();
    let t0 = Matrix2::new(a[0], a[1], a[2], a[3]);
    let t1 = Matrix2::new(a[4], a[5], a[6], a[7]);
    let c0 = t0.determinant();
    let c2 = t1.determinant();
    let c1 = (t0 + t1).determinant() - c0 - c2;
    4.0 * (c1 * c1 - 4.0 * c0 * c2).norm()
}

pub fn local_tangle(state: &PureState3, q: usize) -> f64 {
    let r = partial_trace(&projector(state), &[q]);
    4.0 * (r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)]).re
}

fn trace(m: &DMatrix<C>) -> f64 {
    m.trace().re
}

/// `3 tr[(rho_i ⊗ rho_j) rho_ij] - tr rho_i^3 - tr rho_j^3` from explicit matrices.
pub fn kempe(state: &PureState3, i: usize, j: usize) -> f64 {
    let p = projector(state);
    let (i, j) = (i.min(j), i.max(j));
    let ri = partial_trace(&p, &[i]);
    let rj = partial_trace(&p, &[j]);
    let rij = partial_trace(&p, &[i, j]);
    3.0 * trace(&(ri.kronecker(&rj) * rij)) - trace(&(&ri * &ri * &ri)) - trace(&(&rj * &rj * &rj))
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tol {tol:e})");
}
