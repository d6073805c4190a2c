//! Measurement certification.
//!
//! A POVM `{M_i}` is embedded as the quantum-classical channel
//! `ρ ↦ Σ tr(M_i ρ)|i⟩⟨i|`. Two POVMs with effects matched by index can be
//! certified against each other iff some pair satisfies
//! `supp(M_i) ⊄ supp(N_i)`; for rank-one effects that is linear independence
//! of the underlying vectors.
//!
//! SIC POVMs for `d = 2, 3` are provided together with the block-diagonal
//! certificate for a SIC against a permuted copy of itself and its closed-form
//! false-positive probability `((d + k) / (d² + d))^N`, where `k` counts the
//! fixed points of the permutation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::certify::CertificationCertificate;
use crate::channels::{max_entangled, output_vectors, tensor_power, DensityMatrix, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{inner, kron_vec, span_of_vectors, ComplexMatrix, Subspace, Tolerance};

const POVM_TOL: f64 = 1e-9;
const SIC_TOL: f64 = 1e-9;

/// Positive semidefinite effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    effects: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>) -> Result<Self> {
        let first = effects
            .first()
            .ok_or_else(|| Error::InvalidArgument("a POVM needs at least one effect".into()))?;
        let dim = first.rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (i, e) in effects.iter().enumerate() {
            if e.shape() != (dim, dim) {
                return Err(Error::shape(format!("effect {i} is not {dim}x{dim}")));
            }
            if !e.is_hermitian(POVM_TOL) {
                return Err(Error::InvalidArgument(format!("effect {i} is not Hermitian")));
            }
            let (vals, _) = e.eigh()?;
            if vals[dim - 1] < -POVM_TOL {
                return Err(Error::InvalidArgument(format!(
                    "effect {i} has negative eigenvalue {:.3e}",
                    vals[dim - 1]
                )));
            }
            sum = &sum + e;
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if dev > POVM_TOL {
            return Err(Error::InvalidArgument(format!(
                "effects do not sum to the identity (deviation {dev:.3e})"
            )));
        }
        Ok(Self { dim, effects })
    }

    /// Measurement in the computational basis.
    pub fn computational_basis(d: usize) -> Self {
        let effects = (0..d)
            .map(|i| ComplexMatrix::from_fn(d, d, |r, c| {
                if r == i && c == i {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }))
            .collect();
        Self { dim: d, effects }
    }

    /// Projective measurement onto the columns of a unitary.
    pub fn von_neumann(u: &ComplexMatrix) -> Result<Self> {
        if !u.is_unitary(POVM_TOL) {
            return Err(Error::pre("von Neumann measurement needs a unitary basis"));
        }
        let effects = (0..u.cols())
            .map(|j| {
                let v = u.column_vec(j);
                ComplexMatrix::outer(&v, &v)
            })
            .collect();
        Self::new(effects)
    }

    /// Effects `α_i |x_i⟩⟨x_i|`.
    pub fn from_rank_one(weights: &[f64], vectors: &[Vec<Complex64>]) -> Result<Self> {
        if weights.len() != vectors.len() {
            return Err(Error::shape("one weight per vector is required"));
        }
        let effects = weights
            .iter()
            .zip(vectors)
            .map(|(w, v)| ComplexMatrix::outer(v, v).scale_real(*w))
            .collect();
        Self::new(effects)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// POVM whose i-th effect is this POVM's `pi(i)`-th effect.
    pub fn permuted(&self, pi: &Permutation) -> Result<Self> {
        if pi.size() != self.len() {
            return Err(Error::shape(format!(
                "permutation of {} elements applied to {} effects",
                pi.size(),
                self.len()
            )));
        }
        Ok(Self {
            dim: self.dim,
            effects: (0..self.len()).map(|i| self.effects[pi.apply(i)].clone()).collect(),
        })
    }

    /// Born probabilities `tr(M_i ρ)`.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        self.effects.iter().map(|e| rho.expectation(e)).collect()
    }
}

/// Symmetric informationally complete POVM with effects `(1/d)|φ_i⟩⟨φ_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SicPovm {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
}

impl SicPovm {
    /// Validates `d²` unit vectors with pairwise `|⟨φ_i|φ_j⟩|² = 1/(d+1)`.
    pub fn from_vectors(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = vectors.first().map_or(0, Vec::len);
        if dim == 0 || vectors.len() != dim * dim {
            return Err(Error::shape(format!(
                "a SIC in dimension {dim} needs {} vectors, got {}",
                dim * dim,
                vectors.len()
            )));
        }
        let target = 1.0 / (dim as f64 + 1.0);
        for (i, a) in vectors.iter().enumerate() {
            if a.len() != dim || (crate::linalg::norm(a) - 1.0).abs() > SIC_TOL {
                return Err(Error::InvalidArgument(format!("fiducial vector {i} is not a unit vector")));
            }
            for b in &vectors[i + 1..] {
                let ov = inner(a, b).norm_sqr();
                if (ov - target).abs() > SIC_TOL {
                    return Err(Error::InvalidArgument(format!(
                        "overlap {ov} differs from 1/(d+1) = {target}"
                    )));
                }
            }
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn effects(&self) -> Vec<ComplexMatrix> {
        let w = 1.0 / self.dim as f64;
        self.vectors
            .iter()
            .map(|v| ComplexMatrix::outer(v, v).scale_real(w))
            .collect()
    }

    pub fn to_povm(&self) -> Result<Povm> {
        Povm::new(self.effects())
    }
}

/// Bijection on `{0, …, size-1}`; parsed from and shown in 1-based cycle
/// notation such as `(1 2)(3 4)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(size: usize) -> Self {
        Self {
            map: (0..size).collect(),
        }
    }

    /// From a zero-based image list `i ↦ map[i]`.
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(Error::InvalidArgument("permutation of zero elements".into()));
        }
        let mut seen = vec![false; n];
        for &m in &map {
            if m >= n || seen[m] {
                return Err(Error::InvalidArgument(format!("{map:?} is not a bijection")));
            }
            seen[m] = true;
        }
        Ok(Self { map })
    }

    /// Parses 1-based cycle notation; `""`, `"()"` and `"id"` are the identity.
    pub fn parse_cycles(s: &str, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("permutation of zero elements".into()));
        }
        let mut map: Vec<usize> = (0..size).collect();
        let mut used = vec![false; size];
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "id" {
            return Ok(Self { map });
        }
        let mut rest = trimmed;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::InvalidArgument(format!("expected '(' in permutation {s:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::InvalidArgument(format!("unclosed cycle in permutation {s:?}")))?;
            let body = &open[..close];
            rest = open[close + 1..].trim_start();
            let cycle: Vec<usize> = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    let v: usize = t
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("{t:?} is not an element index")))?;
                    if v == 0 || v > size {
                        return Err(Error::InvalidArgument(format!("element {v} outside 1..={size}")));
                    }
                    Ok(v - 1)
                })
                .collect::<Result<_>>()?;
            for &e in &cycle {
                if used[e] {
                    return Err(Error::InvalidArgument(format!("element {} repeated", e + 1)));
                }
                used[e] = true;
            }
            for (j, &e) in cycle.iter().enumerate() {
                map[e] = cycle[(j + 1) % cycle.len()];
            }
        }
        Ok(Self { map })
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn fixed_point_count(&self) -> usize {
        self.map.iter().enumerate().filter(|(i, m)| i == *m).count()
    }

    pub fn is_identity(&self) -> bool {
        self.fixed_point_count() == self.size()
    }

    /// Cycle lengths, longest first, including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.size()];
        let mut lengths = Vec::new();
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.map[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.size()];
        let mut wrote = false;
        for start in 0..self.size() {
            if seen[start] || self.map[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push((i + 1).to_string());
                i = self.map[i];
            }
            write!(f, "({})", cycle.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Infers the size from the largest element mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let largest = s
            .split(|c: char| !c.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .unwrap_or(1);
        Self::parse_cycles(s, largest)
    }
}

pub fn fixed_points(pi: &Permutation) -> usize {
    pi.fixed_point_count()
}

/// Quantum-classical channel of a POVM, with Kraus operators
/// `√α |i⟩⟨x|` for every eigenpair `(α, x)` of every effect above the
/// absolute floor.
pub fn povm_to_channel(p: &Povm, tol: &Tolerance) -> Result<QuantumChannel> {
    let m = p.len();
    let d = p.dim();
    let mut kraus = Vec::new();
    for (i, e) in p.effects().iter().enumerate() {
        let (vals, vecs) = e.eigh()?;
        for (alpha, x) in vals.iter().zip(&vecs) {
            if *alpha <= tol.abs_floor {
                continue;
            }
            let s = alpha.sqrt();
            let mut k = ComplexMatrix::zeros(m, d);
            for (c, xc) in x.iter().enumerate() {
                k.set(i, c, xc.conj() * s);
            }
            kraus.push(k);
        }
    }
    QuantumChannel::from_kraus(kraus)
}

/// Support of a positive semidefinite operator as its column space.
fn effect_support(e: &ComplexMatrix, tol: &Tolerance) -> Result<Subspace> {
    let cols: Vec<Vec<Complex64>> = (0..e.cols()).map(|j| e.column_vec(j)).collect();
    span_of_vectors(&cols, tol)
}

/// True iff some index `i` has `supp(M_i) ⊄ supp(N_i)`.
pub fn can_certify_povm(p0: &Povm, p1: &Povm, tol: &Tolerance) -> Result<bool> {
    if p0.dim() != p1.dim() || p0.len() != p1.len() {
        return Err(Error::shape(format!(
            "POVMs differ in shape: {} effects on C^{} vs {} effects on C^{}",
            p0.len(),
            p0.dim(),
            p1.len(),
            p1.dim()
        )));
    }
    for (m, n) in p0.effects().iter().zip(p1.effects()) {
        let sm = effect_support(m, tol)?;
        let sn = effect_support(n, tol)?;
        if !sn.contains(&sm)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Rank-one criterion: true iff some pair `x_i, y_i` is linearly independent,
/// judged by the residual of `y_i` after projecting out `x_i`.
pub fn rank_one_certify(x_vectors: &[Vec<Complex64>], y_vectors: &[Vec<Complex64>], tol: &Tolerance) -> Result<bool> {
    if x_vectors.len() != y_vectors.len() {
        return Err(Error::shape("vector lists differ in length"));
    }
    let threshold = 10.0 * tol.residual_scale();
    for (x, y) in x_vectors.iter().zip(y_vectors) {
        if x.len() != y.len() {
            return Err(Error::shape("paired vectors differ in dimension"));
        }
        let (nx, ny) = (crate::linalg::norm(x), crate::linalg::norm(y));
        if nx == 0.0 || ny == 0.0 {
            return Err(Error::InvalidArgument("zero vector in a rank-one POVM".into()));
        }
        let c = inner(x, y) / (nx * nx);
        let residual: f64 = x
            .iter()
            .zip(y)
            .map(|(a, b)| (b - c * a).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / ny;
        if residual > threshold {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Built-in SIC POVMs: the Bloch tetrahedron for `d = 2` and the
/// Weyl–Heisenberg orbit of `(0, 1, −1)/√2` for `d = 3`.
pub fn sic_povm(d: usize) -> Result<SicPovm> {
    match d {
        2 => {
            let s = 2.0f64.sqrt();
            let bloch = [
                [0.0, 0.0, 1.0],
                [2.0 * s / 3.0, 0.0, -1.0 / 3.0],
                [-s / 3.0, (2.0f64 / 3.0).sqrt(), -1.0 / 3.0],
                [-s / 3.0, -(2.0f64 / 3.0).sqrt(), -1.0 / 3.0],
            ];
            let vectors = bloch
                .iter()
                .map(|[x, y, z]| {
                    let a = ((1.0 + z) / 2.0).sqrt();
                    let b = Complex64::new(*x, *y) / (2.0 * (1.0 + z)).sqrt();
                    vec![Complex64::new(a, 0.0), b]
                })
                .collect();
            SicPovm::from_vectors(vectors)
        }
        3 => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let fiducial = [0.0, h, -h];
            let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
            let mut vectors = Vec::with_capacity(9);
            for a in 0..3 {
                for b in 0..3 {
                    // X^a Z^b |φ⟩ with X|j⟩ = |j+1⟩, Z|j⟩ = ω^j |j⟩
                    let mut v = vec![Complex64::new(0.0, 0.0); 3];
                    for (j, &f) in fiducial.iter().enumerate() {
                        v[(j + a) % 3] = omega.powu((b * j) as u32) * f;
                    }
                    vectors.push(v);
                }
            }
            SicPovm::from_vectors(vectors)
        }
        _ => Err(Error::InvalidArgument(format!(
            "no built-in SIC POVM for d = {d}; supported: 2, 3"
        ))),
    }
}

fn check_bound_args(d: usize, k: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if k > d * d {
        return Err(Error::InvalidArgument(format!("{k} fixed points exceed d² = {}", d * d)));
    }
    Ok(())
}

/// Single-shot false-positive probability `(d + k) / (d² + d)` of the SIC
/// certificate against a copy permuted with `k` fixed points.
pub fn sic_p1_bound(d: usize, k: usize) -> Result<f64> {
    check_bound_args(d, k)?;
    let d = d as f64;
    Ok((d + k as f64) / (d * d + d))
}

/// `((d + k) / (d² + d))^n`
pub fn sic_p1_parallel_bound(d: usize, k: usize, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("number of copies must be positive".into()));
    }
    Ok(sic_p1_bound(d, k)?.powi(n as i32))
}

/// `Σ_s C(N, N−s) k^{N−s} (d²−k)^s (d+1)^{−s}` in exact arithmetic.
pub fn sic_overlap_sum_exact(d: u64, k: u64, n: u64) -> BigRational {
    let d2 = BigInt::from(d * d);
    let k_big = BigInt::from(k);
    let mut total = BigRational::zero();
    let mut binom = BigInt::one();
    for s in 0..=n {
        if s > 0 {
            // C(n, s) = C(n, n − s)
            binom = binom * BigInt::from(n - s + 1) / BigInt::from(s);
        }
        let num = &binom * num_traits::pow(k_big.clone(), (n - s) as usize) * num_traits::pow(&d2 - &k_big, s as usize);
        let den = num_traits::pow(BigInt::from(d + 1), s as usize);
        total += BigRational::new(num, den);
    }
    total
}

/// `d^{2N} ((d + k) / (d² + d))^N` in exact arithmetic.
pub fn sic_overlap_sum_closed_form_exact(d: u64, k: u64, n: u64) -> BigRational {
    let ratio = BigRational::new(BigInt::from(d + k), BigInt::from(d * d + d));
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(d * d), n as usize));
    scale * num_traits::pow(ratio, n as usize)
}

/// Explicit SIC certificate for `n` parallel uses.
///
/// The input is the maximally entangled state on `C^{dⁿ} ⊗ C^{dⁿ}` and the
/// accepting effect is block diagonal over classical outcomes `i⃗`, with block
/// `(I − |φ_{π(i⃗)}⟩⟨φ_{π(i⃗)}|)ᵀ` on the reference side. Both error
/// probabilities are traced against explicitly built output states.
pub fn sic_certificate(d: usize, pi: &Permutation, n: usize) -> Result<CertificationCertificate> {
    let sic = sic_povm(d)?;
    let m = d * d;
    if pi.size() != m {
        return Err(Error::shape(format!("permutation must act on {m} elements, got {}", pi.size())));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("number of copies must be positive".into()));
    }
    let tol = Tolerance::default();
    let p0 = sic.to_povm()?;
    let p1 = p0.permuted(pi)?;
    let ch0 = tensor_power(&povm_to_channel(&p0, &tol)?, n)?;
    let ch1 = tensor_power(&povm_to_channel(&p1, &tol)?, n)?;
    let ref_dim = d.pow(n as u32);
    let psi = max_entangled(ref_dim)?;

    let classical = m.pow(n as u32);
    let total = classical * ref_dim;
    crate::linalg::check_entries(total, total)?;
    let mut effect = ComplexMatrix::zeros(total, total);
    for c in 0..classical {
        // multi-index digits, slowest first, mapped through π
        let mut digits = vec![0usize; n];
        let mut rest = c;
        for slot in digits.iter_mut().rev() {
            *slot = rest % m;
            rest /= m;
        }
        let mut phi = vec![Complex64::new(1.0, 0.0)];
        for &i in &digits {
            phi = kron_vec(&phi, &sic.vectors()[pi.apply(i)]);
        }
        // (|φ⟩⟨φ|)ᵀ = |φ̄⟩⟨φ̄|
        let off = c * ref_dim;
        for r in 0..ref_dim {
            for s in 0..ref_dim {
                let id = if r == s { 1.0 } else { 0.0 };
                let block = Complex64::new(id, 0.0) - phi[r].conj() * phi[s];
                effect.set(off + r, off + s, block);
            }
        }
    }

    let sigma0 = DensityMatrix::from_weighted_vectors(&output_vectors(&ch0, &psi, ref_dim)?);
    let sigma1 = DensityMatrix::from_weighted_vectors(&output_vectors(&ch1, &psi, ref_dim)?);
    let p1_value = (1.0 - sigma0.expectation(&effect)?).clamp(0.0, 1.0);
    let p2_value = sigma1.expectation(&effect)?.max(0.0);
    CertificationCertificate::from_parts(psi, effect, p1_value, p2_value, n, ref_dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::can_certify;
    use crate::linalg::pauli::x;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn povm_validation() {
        assert!(Povm::new(vec![ComplexMatrix::identity(2)]).is_ok());
        assert!(Povm::new(vec![ComplexMatrix::identity(2).scale_real(0.5)]).is_err());
        let neg = ComplexMatrix::from_real_diag(&[1.5, 1.0]);
        let comp = ComplexMatrix::from_real_diag(&[-0.5, 0.0]);
        assert!(Povm::new(vec![neg, comp]).is_err());
    }

    #[test]
    fn computational_basis_channel() {
        let ch = povm_to_channel(&Povm::computational_basis(2), &tol()).unwrap();
        assert_eq!(ch.kraus_count(), 2);
        assert_eq!(ch.kraus()[0], ComplexMatrix::from_real_diag(&[1.0, 0.0]));
        assert_eq!(ch.kraus()[1], ComplexMatrix::from_real_diag(&[0.0, 1.0]));
    }

    #[test]
    fn qc_channel_output_is_born_distribution() {
        let sic = sic_povm(2).unwrap().to_povm().unwrap();
        let ch = povm_to_channel(&sic, &tol()).unwrap();
        let psi = crate::random::random_pure_state(2, &mut crate::random::seeded(11));
        let rho = psi.density();
        let out = crate::channels::apply(&ch, &rho).unwrap();
        let probs = sic.probabilities(&rho).unwrap();
        let expected = ComplexMatrix::from_real_diag(&probs);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn qubit_sic_kraus_structure() {
        let ch = povm_to_channel(&sic_povm(2).unwrap().to_povm().unwrap(), &tol()).unwrap();
        assert_eq!(ch.kraus_count(), 4);
        for k in ch.kraus() {
            assert_eq!(k.singular_values().iter().filter(|&&s| s > 1e-12).count(), 1);
            assert!((k.frobenius_norm().powi(2) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn sic_constructions() {
        let s2 = sic_povm(2).unwrap();
        assert_eq!(s2.vectors().len(), 4);
        let s3 = sic_povm(3).unwrap();
        assert_eq!(s3.vectors().len(), 9);
        for i in 0..9 {
            for j in 0..9 {
                if i != j {
                    let ov = inner(&s3.vectors()[i], &s3.vectors()[j]).norm_sqr();
                    assert!((ov - 0.25).abs() < 1e-12);
                }
            }
        }
        assert!(s2.to_povm().is_ok() && s3.to_povm().is_ok());
        assert!(sic_povm(4).is_err());
    }

    #[test]
    fn povm_certification_examples() {
        let comp = Povm::computational_basis(2);
        assert!(!can_certify_povm(&comp, &comp, &tol()).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).unwrap();
        let plus_minus = Povm::von_neumann(&hadamard).unwrap();
        assert!(can_certify_povm(&comp, &plus_minus, &tol()).unwrap());
        let sic = sic_povm(2).unwrap().to_povm().unwrap();
        let swapped = sic.permuted(&"(1 2)(3 4)".parse().unwrap()).unwrap();
        assert!(can_certify_povm(&sic, &swapped, &tol()).unwrap());
        let three = Povm::computational_basis(3);
        assert!(can_certify_povm(&comp, &three, &tol()).is_err());
    }

    #[test]
    fn povm_and_channel_level_agree_on_von_neumann() {
        let comp = Povm::computational_basis(2);
        let flipped = Povm::von_neumann(&x()).unwrap();
        let a = can_certify_povm(&comp, &flipped, &tol()).unwrap();
        let b = can_certify(
            &povm_to_channel(&comp, &tol()).unwrap(),
            &[povm_to_channel(&flipped, &tol()).unwrap()],
            &tol(),
        )
        .unwrap();
        assert!(a && b);
    }

    #[test]
    fn rank_one_examples() {
        let e1 = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let e2 = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let phased: Vec<Complex64> = e1.iter().map(|z| z * Complex64::from_polar(1.0, 0.7)).collect();
        assert!(!rank_one_certify(std::slice::from_ref(&e1), std::slice::from_ref(&e1), &tol()).unwrap());
        assert!(rank_one_certify(std::slice::from_ref(&e1), &[e2], &tol()).unwrap());
        assert!(!rank_one_certify(std::slice::from_ref(&e1), &[phased], &tol()).unwrap());
        assert!(rank_one_certify(&[e1], &[], &tol()).is_err());
    }

    #[test]
    fn permutation_parsing_and_fixed_points() {
        assert_eq!(fixed_points(&Permutation::identity(4)), 4);
        assert_eq!(fixed_points(&Permutation::parse_cycles("(1 2 3 4)", 4).unwrap()), 0);
        assert_eq!(fixed_points(&Permutation::parse_cycles("(1 3)", 4).unwrap()), 2);
        let p = Permutation::parse_cycles("(1 2)(3 4)", 4).unwrap();
        assert_eq!(p.map(), &[1, 0, 3, 2]);
        assert_eq!(p.to_string(), "(1 2)(3 4)");
        assert_eq!(Permutation::parse_cycles("(1,2,3)", 4).unwrap().cycle_type(), vec![3, 1]);
        assert!(Permutation::parse_cycles("()", 4).unwrap().is_identity());
        assert!(Permutation::parse_cycles("(1 1)", 4).is_err());
        assert!(Permutation::parse_cycles("(1 5)", 4).is_err());
        assert!(Permutation::parse_cycles("(1 2", 4).is_err());
        assert!(Permutation::parse_cycles("1 2", 4).is_err());
        assert!(Permutation::from_map(vec![0, 0]).is_err());
    }

    #[test]
    fn closed_form_bounds() {
        assert!((sic_p1_bound(2, 0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((sic_p1_bound(2, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((sic_p1_bound(3, 0).unwrap() - 0.25).abs() < 1e-15);
        assert!((sic_p1_parallel_bound(2, 0, 3).unwrap() - 1.0 / 27.0).abs() < 1e-15);
        assert_eq!(sic_p1_parallel_bound(2, 1, 1).unwrap(), sic_p1_bound(2, 1).unwrap());
        for n in 1..5 {
            assert_eq!(sic_p1_parallel_bound(2, 4, n).unwrap(), 1.0);
        }
        assert!(sic_p1_bound(2, 5).is_err());
        assert!(sic_p1_parallel_bound(2, 0, 0).is_err());
    }

    #[test]
    fn exact_overlap_sum_small_case() {
        // d = 2, k = 0, N = 1: 4 · (1/3) = 4/3 = 4 · (2/6)
        let lhs = sic_overlap_sum_exact(2, 0, 1);
        assert_eq!(lhs, BigRational::new(BigInt::from(4), BigInt::from(3)));
        assert_eq!(lhs, sic_overlap_sum_closed_form_exact(2, 0, 1));
    }

    #[test]
    fn sic_certificate_single_shot() {
        let swap = Permutation::parse_cycles("(1 2)(3 4)", 4).unwrap();
        let cert = sic_certificate(2, &swap, 1).unwrap();
        assert!((cert.p1() - 1.0 / 3.0).abs() < 1e-12);
        assert!(cert.p2() < 1e-12);
        let three_cycle = Permutation::parse_cycles("(1 2 3)", 4).unwrap();
        assert!((sic_certificate(2, &three_cycle, 1).unwrap().p1() - 0.5).abs() < 1e-12);
        assert!(sic_certificate(2, &Permutation::identity(9), 1).is_err());
    }
}
