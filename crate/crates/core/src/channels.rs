//! Quantum channels in Kraus form, pure and mixed states, and the channel
//! operations used by certification: application, extension by an identity
//! on a reference system, tensor powers and supports.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{check_entries, inner, norm, span_of, span_of_vectors, ComplexMatrix, Subspace, Tolerance};

/// Tolerance on `Σ E_i† E_i = I`.
pub const TRACE_PRESERVING_TOL: f64 = 1e-9;
const PURE_NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-10;
const PSD_FLOOR: f64 = -1e-9;
const TRACE_TOL: f64 = 1e-9;

/// A trace-preserving completely positive map given by its Kraus operators.
///
/// The Kraus list is kept exactly as supplied; rank reduction only happens
/// when a support is computed.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidArgument("a channel needs at least one Kraus operator".into()))?;
        let (out_dim, in_dim) = first.shape();
        if kraus.iter().any(|k| k.shape() != (out_dim, in_dim)) {
            return Err(Error::shape("Kraus operators must share one shape"));
        }
        let mut sum = ComplexMatrix::zeros(in_dim, in_dim);
        for k in &kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(in_dim));
        if dev > TRACE_PRESERVING_TOL {
            return Err(Error::pre(format!(
                "Kraus operators are not trace preserving (deviation {dev:.3e})"
            )));
        }
        Ok(Self {
            in_dim,
            out_dim,
            kraus,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            in_dim: d,
            out_dim: d,
            kraus: vec![ComplexMatrix::identity(d)],
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn kraus_count(&self) -> usize {
        self.kraus.len()
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.in_dim == other.in_dim && self.out_dim == other.out_dim
    }
}

/// Unit vector in `C^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("empty state vector".into()));
        }
        let n = norm(&amplitudes);
        if !n.is_finite() || (n - 1.0).abs() > PURE_NORM_TOL {
            return Err(Error::InvalidArgument(format!("state norm is {n}, expected 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes `v`; rejects the zero vector.
    pub fn normalized(v: Vec<Complex64>) -> Result<Self> {
        let n = norm(&v);
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
        }
        Self::new(v.into_iter().map(|z| z / n).collect())
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range for dim {dim}")));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_weighted_vectors(std::slice::from_ref(&self.amplitudes))
    }

    /// Schmidt coefficients across the cut `left_dim ⊗ (dim / left_dim)`,
    /// descending.
    pub fn schmidt_coefficients(&self, left_dim: usize) -> Result<Vec<f64>> {
        if left_dim == 0 || !self.dim().is_multiple_of(left_dim) {
            return Err(Error::shape(format!(
                "state of dim {} does not split with left factor {left_dim}",
                self.dim()
            )));
        }
        let right = self.dim() / left_dim;
        let m = ComplexMatrix::new(left_dim, right, self.amplitudes.clone())?;
        Ok(m.singular_values())
    }

    /// Number of Schmidt coefficients above the tolerance cut.
    pub fn schmidt_rank(&self, left_dim: usize, tol: &Tolerance) -> Result<usize> {
        let s = self.schmidt_coefficients(left_dim)?;
        let cut = tol.cutoff(s[0]);
        Ok(s.iter().filter(|&&x| x > cut).count())
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::InvalidArgument("density matrix is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidArgument(format!("density matrix trace is {tr}")));
        }
        let (vals, _) = matrix.eigh()?;
        let min = vals.last().copied().unwrap_or(0.0);
        if min < PSD_FLOOR {
            return Err(Error::InvalidArgument(format!(
                "density matrix has eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// `Σ |v⟩⟨v|`; positive semidefinite by construction, so only the
    /// caller's normalization is trusted.
    pub(crate) fn from_weighted_vectors(vectors: &[Vec<Complex64>]) -> Self {
        let n = vectors.first().map_or(0, Vec::len);
        let mut m = ComplexMatrix::zeros(n, n);
        for v in vectors {
            for i in 0..n {
                if v[i] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in i..n {
                    let cur = m.get(i, j);
                    m.set(i, j, cur + v[i] * v[j].conj());
                }
            }
        }
        for i in 0..n {
            let d = m.get(i, i);
            m.set(i, i, Complex64::new(d.re, 0.0));
            for j in i + 1..n {
                let z = m.get(i, j);
                m.set(j, i, z.conj());
            }
        }
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(effect · ρ)` as a real number.
    pub fn expectation(&self, effect: &ComplexMatrix) -> Result<f64> {
        Ok(effect.trace_product(&self.matrix)?.re)
    }

    /// Support: span of eigenvectors whose eigenvalue survives the cut.
    pub fn support(&self, tol: &Tolerance) -> Result<Subspace> {
        let (vals, vecs) = self.matrix.eigh()?;
        let cut = tol.cutoff(vals[0].max(0.0));
        let kept: Vec<Vec<Complex64>> = vals
            .iter()
            .zip(vecs)
            .filter(|(v, _)| **v > cut)
            .map(|(v, e)| e.into_iter().map(|z| z * v.sqrt()).collect())
            .collect();
        if kept.is_empty() {
            return Ok(Subspace::zero(self.dim(), tol));
        }
        span_of_vectors(&kept, tol)
    }
}

pub fn unitary_channel(u: &ComplexMatrix) -> Result<QuantumChannel> {
    if !u.is_unitary(TRACE_PRESERVING_TOL) {
        return Err(Error::pre("unitary_channel requires a unitary matrix"));
    }
    QuantumChannel::from_kraus(vec![u.clone()])
}

/// `ρ ↦ Σ p_i U_i ρ U_i†` with Kraus operators `√p_i U_i`.
pub fn mixed_unitary_channel(probs: &[f64], unitaries: &[ComplexMatrix]) -> Result<QuantumChannel> {
    if probs.len() != unitaries.len() || probs.is_empty() {
        return Err(Error::shape(format!(
            "{} probabilities for {} unitaries",
            probs.len(),
            unitaries.len()
        )));
    }
    if probs.iter().any(|&p| !(p > 0.0)) {
        return Err(Error::InvalidArgument("mixing probabilities must be strictly positive".into()));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("probabilities sum to {total}")));
    }
    let d = unitaries[0].rows();
    if unitaries
        .iter()
        .any(|u| u.shape() != (d, d) || !u.is_unitary(TRACE_PRESERVING_TOL))
    {
        return Err(Error::pre("mixed_unitary_channel requires unitaries of one dimension"));
    }
    let kraus = probs
        .iter()
        .zip(unitaries)
        .map(|(p, u)| u.scale_real(p.sqrt()))
        .collect();
    QuantumChannel::from_kraus(kraus)
}

/// Qubit depolarizing channel with Kraus operators proportional to I, X, Y, Z.
pub fn qubit_depolarizing(p: f64) -> Result<QuantumChannel> {
    use crate::linalg::pauli;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("depolarizing strength {p} outside [0, 1]")));
    }
    let w = (p / 4.0).sqrt();
    QuantumChannel::from_kraus(vec![
        pauli::i2().scale_real((1.0 - 3.0 * p / 4.0).sqrt()),
        pauli::x().scale_real(w),
        pauli::y().scale_real(w),
        pauli::z().scale_real(w),
    ])
}

pub fn apply(c: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != c.in_dim {
        return Err(Error::shape(format!(
            "state of dim {} into channel with input dim {}",
            rho.dim(),
            c.in_dim
        )));
    }
    let mut out = ComplexMatrix::zeros(c.out_dim, c.out_dim);
    for e in &c.kraus {
        out = &out + &(&(e * rho.matrix()) * &e.adjoint());
    }
    DensityMatrix::new(out)
}

/// Kraus operators `E_i ⊗ I_ref`.
pub fn extend_by_identity(c: &QuantumChannel, ref_dim: usize) -> Result<QuantumChannel> {
    if ref_dim == 0 {
        return Err(Error::InvalidArgument("reference dimension must be positive".into()));
    }
    let id = ComplexMatrix::identity(ref_dim);
    let kraus = c.kraus.iter().map(|e| e.kron(&id)).collect::<Result<Vec<_>>>()?;
    Ok(QuantumChannel {
        in_dim: c.in_dim * ref_dim,
        out_dim: c.out_dim * ref_dim,
        kraus,
    })
}

/// `c^{⊗n}` with Kraus set `{E_{i₁} ⊗ … ⊗ E_{iₙ}}` in lexicographic order.
pub fn tensor_power(c: &QuantumChannel, n: usize) -> Result<QuantumChannel> {
    if n == 0 {
        return Err(Error::InvalidArgument("tensor power must be positive".into()));
    }
    let limit = crate::linalg::MAX_ENTRIES;
    let pow = |b: usize| (b as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let entries = pow(c.out_dim).saturating_mul(pow(c.in_dim));
    if entries > limit as u128 {
        return Err(Error::DimensionLimit { requested: entries, limit });
    }
    // total storage across the Kraus list
    let total = pow(c.kraus.len()).saturating_mul(entries);
    if total > 16 * limit as u128 {
        return Err(Error::DimensionLimit { requested: total, limit: 16 * limit });
    }
    let mut kraus = c.kraus.clone();
    for _ in 1..n {
        let mut next = Vec::with_capacity(kraus.len() * c.kraus.len());
        for a in &kraus {
            for b in &c.kraus {
                next.push(a.kron(b)?);
            }
        }
        kraus = next;
    }
    Ok(QuantumChannel {
        in_dim: c.in_dim.pow(n as u32),
        out_dim: c.out_dim.pow(n as u32),
        kraus,
    })
}

/// `supp(Φ) = span{E_i}`.
pub fn support(c: &QuantumChannel, tol: &Tolerance) -> Result<Subspace> {
    span_of(&c.kraus, tol)
}

/// Span of the union of all Kraus lists.
pub fn joint_support(channels: &[QuantumChannel], tol: &Tolerance) -> Result<Subspace> {
    let first = channels
        .first()
        .ok_or_else(|| Error::InvalidArgument("joint support of no channels".into()))?;
    if channels.iter().any(|c| !c.same_shape(first)) {
        return Err(Error::shape("channels in a joint support must share one shape"));
    }
    let all: Vec<ComplexMatrix> = channels.iter().flat_map(|c| c.kraus.iter().cloned()).collect();
    span_of(&all, tol)
}

fn check_reference(c: &QuantumChannel, psi: &PureState, ref_dim: usize) -> Result<()> {
    if ref_dim == 0 || psi.dim() != c.in_dim * ref_dim {
        return Err(Error::shape(format!(
            "state of dim {} does not match channel input {} times reference {ref_dim}",
            psi.dim(),
            c.in_dim
        )));
    }
    check_entries(c.out_dim * ref_dim, c.out_dim * ref_dim)
}

/// Vectors `(E_i ⊗ I)|ψ⟩`; their span is the support of the output state.
pub fn output_vectors(c: &QuantumChannel, psi: &PureState, ref_dim: usize) -> Result<Vec<Vec<Complex64>>> {
    check_reference(c, psi, ref_dim)?;
    // ψ reshaped as an in_dim × ref_dim matrix; (E ⊗ I)ψ is E·Ψ flattened.
    let psi_mat = ComplexMatrix::new(c.in_dim, ref_dim, psi.amplitudes().to_vec())?;
    c.kraus
        .iter()
        .map(|e| Ok(e.matmul(&psi_mat)?.into_data()))
        .collect()
}

/// `(Φ ⊗ 1)(|ψ⟩⟨ψ|)`; `ref_dim = 1` means no reference system.
pub fn output_state(c: &QuantumChannel, psi: &PureState, ref_dim: usize) -> Result<DensityMatrix> {
    let vectors = output_vectors(c, psi, ref_dim)?;
    Ok(DensityMatrix::from_weighted_vectors(&vectors))
}

/// Support of `(Φ₁ ⊗ 1)(|ψ⟩⟨ψ|), …, (Φ_m ⊗ 1)(|ψ⟩⟨ψ|)` taken jointly.
pub fn output_support(channels: &[QuantumChannel], psi: &PureState, ref_dim: usize, tol: &Tolerance) -> Result<Subspace> {
    let mut vectors = Vec::new();
    for c in channels {
        vectors.extend(output_vectors(c, psi, ref_dim)?);
    }
    if vectors.is_empty() {
        return Err(Error::InvalidArgument("output support of no channels".into()));
    }
    span_of_vectors(&vectors, tol)
}

/// `Σ_t |t⟩|t⟩ / √d` on `C^d ⊗ C^d`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    check_entries(d * d, 1)?;
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for t in 0..d {
        v[t * d + t] = amp;
    }
    Ok(PureState { amplitudes: v })
}

/// Partial trace over the right factor of a pure state on `left ⊗ right`.
pub fn reduced_left(psi: &PureState, left_dim: usize) -> Result<ComplexMatrix> {
    if left_dim == 0 || !psi.dim().is_multiple_of(left_dim) {
        return Err(Error::shape("left dimension does not divide state dimension"));
    }
    let right = psi.dim() / left_dim;
    let a = psi.amplitudes();
    Ok(ComplexMatrix::from_fn(left_dim, left_dim, |i, j| {
        (0..right).map(|b| a[i * right + b] * a[j * right + b].conj()).sum()
    }))
}

/// `|⟨ψ|φ⟩|²`
pub fn overlap(psi: &PureState, phi: &PureState) -> f64 {
    inner(psi.amplitudes(), phi.amplitudes()).norm_sqr()
}
