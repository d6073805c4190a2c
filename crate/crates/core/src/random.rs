//! Seeded random instances: Haar unitaries, random channels, states and POVMs.
//!
//! Every generator takes an explicit RNG so that callers control
//! reproducibility; [`seeded`] gives the portable generator used throughout.

use faer::Mat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::channels::{PureState, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub type SeededRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Generator for trial `index` of a run seeded with `seed`; independent of
/// the order in which trials are evaluated.
pub fn stream(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / std::f64::consts::SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random unitary from the phase-corrected QR of a Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    haar_isometry(d, d, rng)
}

/// Haar-random isometry `rows × cols` (`rows ≥ cols`).
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let mut g = Mat::<Complex64>::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            g[(i, j)] = complex_gaussian(rng);
        }
    }
    let qr = g.qr();
    let q = qr.compute_thin_Q();
    let r = qr.thin_R();
    let mut out = ComplexMatrix::zeros(rows, cols);
    for j in 0..cols {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..rows {
            out.set(i, j, q[(i, j)] * phase);
        }
    }
    out
}

/// Random channel on `C^d` with `kraus_rank` Kraus operators sliced from a
/// Haar isometry `C^d → C^{d·kraus_rank}`.
pub fn random_channel<R: Rng + ?Sized>(d: usize, kraus_rank: usize, rng: &mut R) -> Result<QuantumChannel> {
    if d == 0 || kraus_rank == 0 {
        return Err(Error::InvalidArgument("dimension and Kraus rank must be positive".into()));
    }
    let v = haar_isometry(d * kraus_rank, d, rng);
    let kraus = (0..kraus_rank)
        .map(|k| ComplexMatrix::from_fn(d, d, |i, j| v.get(k * d + i, j)))
        .collect();
    QuantumChannel::from_kraus(kraus)
}

/// Channel whose Kraus operators are the isometric recombination
/// `E_i = Σ_j V_ij F_j` of another channel's Kraus list; the support is
/// unchanged when `out_rank ≥ rank`.
pub fn recombine_kraus<R: Rng + ?Sized>(c: &QuantumChannel, out_rank: usize, rng: &mut R) -> Result<QuantumChannel> {
    let r = c.kraus_count();
    if out_rank < r {
        return Err(Error::InvalidArgument("recombination needs out_rank >= Kraus count".into()));
    }
    let v = haar_isometry(out_rank, r, rng);
    let (rows, cols) = c.kraus()[0].shape();
    let kraus = (0..out_rank)
        .map(|i| {
            let mut e = ComplexMatrix::zeros(rows, cols);
            for (j, f) in c.kraus().iter().enumerate() {
                e = &e + &f.scale(v.get(i, j));
            }
            e
        })
        .collect();
    QuantumChannel::from_kraus(kraus)
}

pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    PureState::normalized(v).expect("Gaussian vector is nonzero almost surely")
}

/// Uniform point of the open probability simplex (Dirichlet(1, …, 1)).
pub fn random_probabilities<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-12).collect();
    let total: f64 = w.iter().sum();
    let mut p: Vec<f64> = w.iter().map(|x| x / total).collect();
    // keep the sum within rounding of 1
    let last: f64 = 1.0 - p[..n - 1].iter().sum::<f64>();
    p[n - 1] = last;
    p
}

/// Hermitian inverse square root; `m` must be positive definite.
pub(crate) fn inv_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (vals, vecs) = m.eigh()?;
    if vals.iter().any(|&v| v <= 0.0) {
        return Err(Error::NumericalIntegrity("matrix is not positive definite".into()));
    }
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (v, e) in vals.iter().zip(&vecs) {
        out = &out + &ComplexMatrix::outer(e, e).scale_real(1.0 / v.sqrt());
    }
    Ok(out)
}

/// Random POVM on `C^d` whose i-th effect has rank `ranks[i]`, built by
/// normalizing random positive operators `G_i` as `S^{-1/2} G_i S^{-1/2}`.
pub fn random_povm_effects<R: Rng + ?Sized>(d: usize, ranks: &[usize], rng: &mut R) -> Result<Vec<ComplexMatrix>> {
    if ranks.is_empty() || ranks.iter().any(|&r| r == 0 || r > d) {
        return Err(Error::InvalidArgument("effect ranks must lie in 1..=d".into()));
    }
    if ranks.iter().sum::<usize>() < d {
        return Err(Error::InvalidArgument("effect ranks must sum to at least d".into()));
    }
    let gs: Vec<ComplexMatrix> = ranks
        .iter()
        .map(|&r| {
            let a = gaussian_matrix(d, r, rng);
            &a * &a.adjoint()
        })
        .collect();
    let mut s = ComplexMatrix::zeros(d, d);
    for g in &gs {
        s = &s + g;
    }
    let w = inv_sqrt(&s)?;
    Ok(gs.iter().map(|g| hermitize(&(&(&w * g) * &w))).collect())
}

/// Rank-one POVM: returns weights `α_i ∈ (0, 1]` and unit vectors `x_i` with
/// `Σ α_i |x_i⟩⟨x_i| = I`.
pub fn random_rank_one_povm<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    if m < d {
        return Err(Error::InvalidArgument("a rank-one POVM needs at least d effects".into()));
    }
    let a = gaussian_matrix(d, m, rng);
    let w = inv_sqrt(&(&a * &a.adjoint()))?;
    let x = &w * &a;
    let mut weights = Vec::with_capacity(m);
    let mut vectors = Vec::with_capacity(m);
    for j in 0..m {
        let col = x.column_vec(j);
        let n = crate::linalg::norm(&col);
        weights.push(n * n);
        vectors.push(col.into_iter().map(|z| z / n).collect());
    }
    Ok((weights, vectors))
}

pub(crate) fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &m.adjoint()).scale_real(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = seeded(1);
        for d in 1..5 {
            assert!(haar_unitary(d, &mut rng).is_unitary(1e-12));
        }
    }

    #[test]
    fn random_channel_has_requested_rank() {
        let mut rng = seeded(2);
        let c = random_channel(3, 4, &mut rng).unwrap();
        assert_eq!(c.kraus_count(), 4);
        let s = crate::channels::support(&c, &Default::default()).unwrap();
        assert_eq!(s.dim(), 4);
    }

    #[test]
    fn same_seed_same_instance() {
        let a = random_channel(2, 2, &mut seeded(7)).unwrap();
        let b = random_channel(2, 2, &mut seeded(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn streams_differ_by_index() {
        let a: f64 = stream(5, 0).random();
        let b: f64 = stream(5, 1).random();
        assert_ne!(a, b);
        let a2: f64 = stream(5, 0).random();
        assert_eq!(a, a2);
    }

    #[test]
    fn povm_effects_sum_to_identity() {
        let mut rng = seeded(3);
        let effects = random_povm_effects(3, &[1, 2, 3, 1], &mut rng).unwrap();
        let mut s = ComplexMatrix::zeros(3, 3);
        for e in &effects {
            s = &s + e;
        }
        assert!(s.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        let (weights, vectors) = random_rank_one_povm(2, 4, &mut rng).unwrap();
        let mut s = ComplexMatrix::zeros(2, 2);
        for (w, v) in weights.iter().zip(&vectors) {
            s = &s + &ComplexMatrix::outer(v, v).scale_real(*w);
        }
        assert!(s.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn probabilities_on_simplex() {
        let p = random_probabilities(5, &mut seeded(4));
        assert!(p.iter().all(|&x| x > 0.0));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
