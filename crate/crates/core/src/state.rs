//! Three-qubit pure states, reduced density matrices and local operators.
//!
//! Amplitudes are stored in the order `b = 4*q1 + 2*q2 + q3` for the basis ket
//! `|q1 q2 q3>`, so qubit 1 is the leftmost (most significant) bit. Qubits are
//! labelled 1, 2, 3 everywhere in the public API.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Amplitudes below this are treated as exactly zero by [`PureState3::new`].
pub const ZERO_AMPLITUDE: f64 = 1e-15;
/// Tolerance used when checking constructor invariants.
pub const NORM_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Index of the basis ket `|q1 q2 q3>`.
#[inline]
pub fn basis_index(q1: usize, q2: usize, q3: usize) -> usize {
    debug_assert!(q1 < 2 && q2 < 2 && q3 < 2);
    4 * q1 + 2 * q2 + q3
}

/// Bit of qubit `qubit` (1-based) in basis index `b`.
#[inline]
pub(crate) fn bit(b: usize, qubit: usize) -> usize {
    (b >> (3 - qubit)) & 1
}

pub(crate) fn check_qubit(q: usize) -> bool {
    (1..=3).contains(&q)
}

/// The qubit not contained in the pair `(i, j)`.
pub(crate) fn complement(i: usize, j: usize) -> usize {
    6 - i - j
}

pub(crate) fn check_pair(i: usize, j: usize) -> Result<()> {
    if check_qubit(i) && check_qubit(j) && i != j {
        Ok(())
    } else {
        Err(Error::BadPair(i, j))
    }
}

/// A pure state of three qubits.
///
/// The amplitudes are whatever the constructor produced: [`PureState3::new`]
/// normalizes, [`PureState3::unnormalized`] keeps them as given. In both cases
/// the norm of the input is recorded and available as
/// [`original_norm`](Self::original_norm).
#[derive(Clone, Copy, PartialEq)]
pub struct PureState3 {
    amp: [Complex64; 8],
    original_norm: f64,
}

impl PureState3 {
    /// Normalizes `amplitudes` and records their original norm.
    pub fn new(amplitudes: [Complex64; 8]) -> Result<Self> {
        let norm = norm_of(&amplitudes);
        if amplitudes.iter().all(|a| a.norm() < ZERO_AMPLITUDE) || !norm.is_finite() {
            return Err(Error::AllZero);
        }
        let mut amp = amplitudes;
        for a in amp.iter_mut() {
            *a /= norm;
        }
        Ok(Self {
            amp,
            original_norm: norm,
        })
    }

    /// Convenience constructor from real amplitudes.
    pub fn from_real(amplitudes: [f64; 8]) -> Result<Self> {
        Self::new(amplitudes.map(|x| Complex64::new(x, 0.0)))
    }

    /// Keeps the amplitudes exactly as given. Invariants evaluated on such a
    /// state carry their homogeneous scaling in the norm.
    pub fn unnormalized(amplitudes: [Complex64; 8]) -> Self {
        Self {
            amp: amplitudes,
            original_norm: norm_of(&amplitudes),
        }
    }

    /// The product state `|q1 q2 q3>`.
    pub fn basis(q1: usize, q2: usize, q3: usize) -> Self {
        let mut amp = [ZERO; 8];
        amp[basis_index(q1, q2, q3)] = ONE;
        Self {
            amp,
            original_norm: 1.0,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amp
    }

    #[inline]
    pub fn amp(&self, q1: usize, q2: usize, q3: usize) -> Complex64 {
        self.amp[basis_index(q1, q2, q3)]
    }

    /// Norm of the input this state was built from.
    pub fn original_norm(&self) -> f64 {
        self.original_norm
    }

    /// Current 2-norm of the stored amplitudes.
    pub fn norm(&self) -> f64 {
        norm_of(&self.amp)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Returns the normalized copy of this state.
    pub fn normalized(&self) -> Result<Self> {
        Self::new(self.amp)
    }

    /// Relabels qubits: qubit `k` of the result is qubit `perm[k-1]` of `self`.
    ///
    /// `perm` must be a permutation of `[1, 2, 3]`.
    pub fn permute_qubits(&self, perm: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &p in &perm {
            if !check_qubit(p) || seen[p - 1] {
                return Err(Error::BadQubitSet(perm.to_vec()));
            }
            seen[p - 1] = true;
        }
        let mut amp = [ZERO; 8];
        for (b, a) in self.amp.iter().enumerate() {
            let bits = [bit(b, perm[0]), bit(b, perm[1]), bit(b, perm[2])];
            amp[basis_index(bits[0], bits[1], bits[2])] = *a;
        }
        Ok(Self {
            amp,
            original_norm: self.original_norm,
        })
    }

    /// Applies `op1 ⊗ op2 ⊗ op3`.
    ///
    /// With `renormalize = false` the output keeps whatever norm the operators
    /// produce; the pre-normalization norm is reported either way.
    pub fn apply_local_ops(
        &self,
        op1: &LocalOp,
        op2: &LocalOp,
        op3: &LocalOp,
        renormalize: bool,
    ) -> Result<LocalAction> {
        let amp = apply_product(&self.amp, [op1.matrix(), op2.matrix(), op3.matrix()]);
        let norm = norm_of(&amp);
        if renormalize {
            if !(norm >= ZERO_AMPLITUDE) {
                return Err(Error::SingularOp(norm));
            }
            let state = Self::new(amp)?;
            Ok(LocalAction {
                state,
                norm,
                normalized: true,
            })
        } else {
            Ok(LocalAction {
                state: Self::unnormalized(amp),
                norm,
                normalized: false,
            })
        }
    }

    /// Applies a single operator to one qubit and leaves the result unnormalized.
    pub fn apply_on(&self, qubit: usize, op: &Matrix2<Complex64>) -> Result<Self> {
        if !check_qubit(qubit) {
            return Err(Error::BadQubitSet(vec![qubit]));
        }
        let id = Matrix2::identity();
        let mut ops = [&id, &id, &id];
        ops[qubit - 1] = op;
        Ok(Self::unnormalized(apply_product(&self.amp, ops)))
    }

    /// Partial trace keeping the qubits in `keep` (one or two of 1, 2, 3).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        reduced_density(self, keep)
    }
}

impl fmt::Debug for PureState3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for a in &self.amp {
            list.entry(&(a.re, a.im));
        }
        list.finish()
    }
}

fn norm_of(amp: &[Complex64; 8]) -> f64 {
    amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn apply_product(amp: &[Complex64; 8], ops: [&Matrix2<Complex64>; 3]) -> [Complex64; 8] {
    let mut out = [ZERO; 8];
    for (bo, o) in out.iter_mut().enumerate() {
        let (i2, j2, k2) = (bit(bo, 1), bit(bo, 2), bit(bo, 3));
        let mut acc = ZERO;
        for (bi, a) in amp.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            let (i, j, k) = (bit(bi, 1), bit(bi, 2), bit(bi, 3));
            acc += ops[0][(i2, i)] * ops[1][(j2, j)] * ops[2][(k2, k)] * a;
        }
        *o = acc;
    }
    out
}

/// Result of a local operator action.
#[derive(Debug, Clone, Copy)]
pub struct LocalAction {
    pub state: PureState3,
    /// Norm of the transformed amplitudes before any renormalization.
    pub norm: f64,
    /// Whether `state` was renormalized.
    pub normalized: bool,
}

fn reduced_density(state: &PureState3, keep: &[usize]) -> Result<DensityMatrix> {
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() || kept.len() > 2 || kept.len() != keep.len() || !kept.iter().all(|&q| check_qubit(q)) {
        return Err(Error::BadQubitSet(keep.to_vec()));
    }
    let dim = 1 << kept.len();
    let traced: Vec<usize> = (1..=3).filter(|q| !kept.contains(q)).collect();
    let sub = |b: usize, qs: &[usize]| qs.iter().fold(0, |acc, &q| 2 * acc + bit(b, q));
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for (b1, a1) in state.amp.iter().enumerate() {
        for (b2, a2) in state.amp.iter().enumerate() {
            if sub(b1, &traced) == sub(b2, &traced) {
                m[(sub(b1, &kept), sub(b2, &kept))] += a1 * a2.conj();
            }
        }
    }
    Ok(DensityMatrix { m })
}

/// A one- or two-qubit density matrix obtained by partial trace.
///
/// Rows are indexed by the kept qubits in ascending order, most significant
/// first. States that were not normalized give matrices with trace `|psi|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if !(m.is_square() && (m.nrows() == 2 || m.nrows() == 4)) {
            return Err(Error::BadParam(format!(
                "density matrix must be 2x2 or 4x4, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self { m })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn det(&self) -> Complex64 {
        self.m.determinant()
    }

    /// `tr(rho^3)`.
    pub fn trace_cube(&self) -> f64 {
        (&self.m * &self.m * &self.m).trace().re
    }

    /// Eigenvalues in ascending order (the matrix is Hermitian by construction).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.m.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.m - self.m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Checks Hermiticity, unit trace and positivity at `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
            && (self.trace() - 1.0).abs() <= tol
            && self.eigenvalues().iter().all(|&e| e >= -tol)
    }

    /// Traces one qubit out of a two-qubit matrix. `keep_first` selects which
    /// of the two (in row order) survives.
    pub fn trace_out(&self, keep_first: bool) -> Result<DensityMatrix> {
        if self.dim() != 4 {
            return Err(Error::BadQubitSet(vec![]));
        }
        let mut m = DMatrix::from_element(2, 2, ZERO);
        for a in 0..2 {
            for b in 0..2 {
                for k in 0..2 {
                    m[(a, b)] += if keep_first {
                        self.m[(2 * a + k, 2 * b + k)]
                    } else {
                        self.m[(2 * k + a, 2 * k + b)]
                    };
                }
            }
        }
        Ok(DensityMatrix { m })
    }
}

/// What a [`LocalOp`] is guaranteed to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Unitary,
    Sl2,
    General,
}

impl OpKind {
    fn name(self) -> &'static str {
        match self {
            OpKind::Unitary => "unitary",
            OpKind::Sl2 => "sl2",
            OpKind::General => "general",
        }
    }
}

/// A 2x2 operator acting on a single qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalOp {
    m: Matrix2<Complex64>,
    kind: OpKind,
}

impl LocalOp {
    pub fn new(m: Matrix2<Complex64>, kind: OpKind) -> Result<Self> {
        let deviation = match kind {
            OpKind::Unitary => (m.adjoint() * m - Matrix2::identity())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max),
            OpKind::Sl2 => (m.determinant() - ONE).norm(),
            OpKind::General => 0.0,
        };
        if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) || deviation > NORM_TOL {
            return Err(Error::BadOperator {
                kind: kind.name(),
                deviation,
            });
        }
        Ok(Self { m, kind })
    }

    pub fn unitary(m: Matrix2<Complex64>) -> Result<Self> {
        Self::new(m, OpKind::Unitary)
    }

    pub fn sl2(m: Matrix2<Complex64>) -> Result<Self> {
        Self::new(m, OpKind::Sl2)
    }

    pub fn general(m: Matrix2<Complex64>) -> Self {
        Self {
            m,
            kind: OpKind::General,
        }
    }

    pub fn identity() -> Self {
        Self {
            m: Matrix2::identity(),
            kind: OpKind::Unitary,
        }
    }

    pub fn pauli_x() -> Self {
        Self {
            m: Matrix2::new(ZERO, ONE, ONE, ZERO),
            kind: OpKind::Unitary,
        }
    }

    /// `diag(t, 1/t)`.
    pub fn diag_sl(t: Complex64) -> Result<Self> {
        if t.norm() < ZERO_AMPLITUDE {
            return Err(Error::SingularOp(t.norm()));
        }
        Self::sl2(Matrix2::new(t, ZERO, ZERO, t.inv()))
    }

    /// Upper-triangular `[[s, r], [0, 1/s]]` with real `s != 0`.
    pub fn upper_sl(s: f64, r: f64) -> Result<Self> {
        if s.abs() < ZERO_AMPLITUDE {
            return Err(Error::SingularOp(s.abs()));
        }
        Self::sl2(Matrix2::new(
            Complex64::new(s, 0.0),
            Complex64::new(r, 0.0),
            ZERO,
            Complex64::new(1.0 / s, 0.0),
        ))
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.m
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn det(&self) -> Complex64 {
        self.m.determinant()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
            kind: self.kind,
        }
    }

    pub fn compose(&self, then: &LocalOp) -> LocalOp {
        let kind = if self.kind == then.kind { self.kind } else { OpKind::General };
        LocalOp {
            m: then.m * self.m,
            kind,
        }
    }
}

/// Named reference states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// `(|000> + |111>)/sqrt 2`
    Ghz,
    /// `(|100> + |010> + |001>)/sqrt 3`
    W,
    /// `|000>`
    Product000,
    /// `(|000> + e^{i alpha}|100> + |101> + |110> + |111>)/sqrt 5`
    PsiAlpha(f64),
}

impl Preset {
    /// Parses a preset name; `alpha` is required for `psi_alpha` and ignored otherwise.
    pub fn parse(name: &str, alpha: Option<f64>) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "psi_alpha" | "psi-alpha" | "psialpha" => {
                Ok(Preset::PsiAlpha(alpha.ok_or_else(|| Error::BadParam("psi_alpha needs alpha".into()))?))
            }
            other => other.parse(),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(Preset::Ghz),
            "w" => Ok(Preset::W),
            "product000" | "product" | "000" => Ok(Preset::Product000),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

/// Builds one of the reference states.
pub fn preset_state(preset: Preset) -> Result<PureState3> {
    let mut amp = [ZERO; 8];
    match preset {
        Preset::Ghz => {
            amp[0] = ONE;
            amp[7] = ONE;
        }
        Preset::W => {
            amp[basis_index(1, 0, 0)] = ONE;
            amp[basis_index(0, 1, 0)] = ONE;
            amp[basis_index(0, 0, 1)] = ONE;
        }
        Preset::Product000 => amp[0] = ONE,
        Preset::PsiAlpha(alpha) => {
            if !alpha.is_finite() {
                return Err(Error::BadParam(format!("alpha must be finite, got {alpha}")));
            }
            amp[basis_index(0, 0, 0)] = ONE;
            amp[basis_index(1, 0, 0)] = Complex64::from_polar(1.0, alpha);
            amp[basis_index(1, 0, 1)] = ONE;
            amp[basis_index(1, 1, 0)] = ONE;
            amp[basis_index(1, 1, 1)] = ONE;
        }
    }
    PureState3::new(amp)
}
