//! Spans of vectorized operators with an explicit numerical rank decision.

use faer::Mat;
use num_complex::Complex64;

use super::matrix::{inner, norm, ComplexMatrix};
use crate::error::{Error, Result};

/// Numerical rank thresholds.
///
/// A singular value `s` counts towards the rank iff
/// `s > max(rel_rank_cut * s_max, abs_floor)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel_rank_cut: f64,
    pub abs_floor: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel_rank_cut: 1e-10,
            abs_floor: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(rel_rank_cut: f64, abs_floor: f64) -> Result<Self> {
        let ok = |x: f64| x > 0.0 && x < 1.0;
        if !ok(rel_rank_cut) || !ok(abs_floor) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must lie in (0, 1), got rel_rank_cut={rel_rank_cut}, abs_floor={abs_floor}"
            )));
        }
        Ok(Self {
            rel_rank_cut,
            abs_floor,
        })
    }

    /// Relative cut with the default absolute floor.
    pub fn relative(rel_rank_cut: f64) -> Result<Self> {
        Self::new(rel_rank_cut, Self::default().abs_floor)
    }

    /// Dimensionless threshold attached to subspaces built with this tolerance.
    pub fn residual_scale(&self) -> f64 {
        self.rel_rank_cut.max(self.abs_floor)
    }

    pub(crate) fn cutoff(&self, largest: f64) -> f64 {
        (self.rel_rank_cut * largest).max(self.abs_floor)
    }
}

/// Orthonormal basis of a subspace of `C^ambient_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Complex64>>,
    tol: f64,
}

impl Subspace {
    pub fn zero(ambient_dim: usize, tol: &Tolerance) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
            tol: tol.residual_scale(),
        }
    }

    pub fn full(ambient_dim: usize, tol: &Tolerance) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut e = vec![Complex64::new(0.0, 0.0); ambient_dim];
                e[i] = Complex64::new(1.0, 0.0);
                e
            })
            .collect();
        Self {
            ambient_dim,
            basis,
            tol: tol.residual_scale(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Complex64>] {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Orthogonal projection of `v` onto this subspace.
    pub fn project(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(v.len())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.ambient_dim];
        for b in &self.basis {
            let c = inner(b, v);
            for (o, bi) in out.iter_mut().zip(b) {
                *o += c * bi;
            }
        }
        Ok(out)
    }

    /// `‖P v‖²`, computed from basis overlaps.
    pub fn projected_weight(&self, v: &[Complex64]) -> Result<f64> {
        self.check_len(v.len())?;
        Ok(self.basis.iter().map(|b| inner(b, v).norm_sqr()).sum())
    }

    /// `‖v − P v‖`
    pub fn residual(&self, v: &[Complex64]) -> Result<f64> {
        let p = self.project(v)?;
        Ok(v.iter().zip(&p).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
    }

    pub fn contains_vector(&self, v: &[Complex64]) -> Result<bool> {
        let scale = norm(v).max(1.0);
        Ok(self.residual(v)? <= 10.0 * self.tol * scale)
    }

    /// True iff every basis vector of `small` lies in `self` up to `10·tol`.
    pub fn contains(&self, small: &Subspace) -> Result<bool> {
        if self.ambient_dim != small.ambient_dim {
            return Err(Error::shape(format!(
                "ambient dimensions differ: {} vs {}",
                self.ambient_dim, small.ambient_dim
            )));
        }
        let threshold = 10.0 * self.tol.max(small.tol);
        for v in &small.basis {
            if self.residual(v)? > threshold {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn projector(&self) -> ComplexMatrix {
        let n = self.ambient_dim;
        let mut p = ComplexMatrix::zeros(n, n);
        for b in &self.basis {
            for i in 0..n {
                if b[i] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let cur = p.get(i, j);
                    p.set(i, j, cur + b[i] * b[j].conj());
                }
            }
        }
        p
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.ambient_dim {
            return Err(Error::shape(format!(
                "vector of length {len} in ambient dimension {}",
                self.ambient_dim
            )));
        }
        Ok(())
    }
}

/// Span of vectorized operators (row-major flattening).
pub fn span_of(operators: &[ComplexMatrix], tol: &Tolerance) -> Result<Subspace> {
    let first = operators
        .first()
        .ok_or_else(|| Error::InvalidArgument("span of an empty operator list".into()))?;
    if operators.iter().any(|op| op.shape() != first.shape()) {
        return Err(Error::shape("operators in a span must share one shape"));
    }
    let vectors: Vec<&[Complex64]> = operators.iter().map(ComplexMatrix::data).collect();
    span_of_vectors(&vectors, tol)
}

/// Span of a nonempty family of equal-length vectors.
///
/// Basis vectors are left singular vectors ordered by descending singular
/// value; each is rotated so its largest-magnitude entry is real positive.
pub fn span_of_vectors<V: AsRef<[Complex64]>>(vectors: &[V], tol: &Tolerance) -> Result<Subspace> {
    let n = vectors
        .first()
        .map(|v| v.as_ref().len())
        .ok_or_else(|| Error::InvalidArgument("span of an empty vector list".into()))?;
    if n == 0 {
        return Err(Error::shape("vectors must be nonempty"));
    }
    if vectors.iter().any(|v| v.as_ref().len() != n) {
        return Err(Error::shape("vectors in a span must share one length"));
    }
    let k = vectors.len();
    let stacked = Mat::from_fn(n, k, |i, j| vectors[j].as_ref()[i]);
    let svd = stacked
        .thin_svd()
        .map_err(|e| Error::NumericalIntegrity(format!("SVD did not converge: {e:?}")))?;
    let u = svd.U();
    let sv: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    let largest = order.first().map_or(0.0, |&i| sv[i]);
    let cut = tol.cutoff(largest);

    let basis = order
        .into_iter()
        .filter(|&i| sv[i] > cut)
        .map(|i| {
            let mut v: Vec<Complex64> = (0..n).map(|r| u[(r, i)]).collect();
            fix_phase(&mut v);
            v
        })
        .collect();
    Ok(Subspace {
        ambient_dim: n,
        basis,
        tol: tol.residual_scale(),
    })
}

pub fn subspace_contains(big: &Subspace, small: &Subspace) -> Result<bool> {
    big.contains(small)
}

pub fn projector_onto(s: &Subspace) -> ComplexMatrix {
    s.projector()
}

fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag + 1e-12 {
            best = i;
            best_mag = m;
        }
    }
    if best_mag > 0.0 {
        let phase = v[best].conj() / best_mag;
        for z in v.iter_mut() {
            *z *= phase;
        }
        v[best] = Complex64::new(v[best].norm(), 0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::{i2, x, y, z};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    /// Rank by Gaussian elimination with partial pivoting; independent of the SVD path.
    fn rank_by_elimination(rows: &[Vec<Complex64>]) -> usize {
        let mut m: Vec<Vec<Complex64>> = rows.to_vec();
        let ncols = m[0].len();
        let mut rank = 0;
        for col in 0..ncols {
            let pivot = (rank..m.len()).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()));
            let Some(p) = pivot else { break };
            if m[p][col].norm() < 1e-9 {
                continue;
            }
            m.swap(rank, p);
            for r in rank + 1..m.len() {
                let f = m[r][col] / m[rank][col];
                let (head, tail) = m.split_at_mut(r);
                for (x, y) in tail[0][col..].iter_mut().zip(&head[rank][col..]) {
                    *x -= f * y;
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn duplicates_collapse() {
        assert_eq!(span_of(&[i2(), i2()], &tol()).unwrap().dim(), 1);
    }

    #[test]
    fn independent_pair() {
        assert_eq!(span_of(&[i2(), x()], &tol()).unwrap().dim(), 2);
    }

    #[test]
    fn dependent_triple_matches_elimination() {
        let ops = [i2(), x(), &i2() + &x()];
        let rows: Vec<Vec<Complex64>> = ops.iter().map(|m| m.data().to_vec()).collect();
        let expected = rank_by_elimination(&rows);
        assert_eq!(expected, 2);
        assert_eq!(span_of(&ops, &tol()).unwrap().dim(), expected);
    }

    #[test]
    fn containment_examples() {
        let sx = span_of(&[x()], &tol()).unwrap();
        let six = span_of(&[i2(), x()], &tol()).unwrap();
        let sipx = span_of(&[&i2() + &x()], &tol()).unwrap();
        assert!(six.contains(&sx).unwrap());
        assert!(!sx.contains(&six).unwrap());
        assert!(six.contains(&sipx).unwrap());
        assert!(six.residual(sipx.basis()[0].as_slice()).unwrap() < 1e-14);
    }

    #[test]
    fn containment_rejects_ambient_mismatch() {
        let a = Subspace::full(2, &tol());
        let b = Subspace::full(3, &tol());
        assert!(matches!(a.contains(&b), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn projector_examples() {
        let e1 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let p = span_of_vectors(&[e1], &tol()).unwrap().projector();
        assert!(p.max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 0.0])) < 1e-15);

        let full = Subspace::full(3, &tol()).projector();
        assert_eq!(full, ComplexMatrix::identity(3));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
        let p = span_of_vectors(&[plus], &tol()).unwrap().projector();
        let expected = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(p.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn basis_is_phase_fixed_and_deterministic() {
        let ops = [y(), z().scale(Complex64::new(0.0, 3.0)), &x() + &y()];
        let a = span_of(&ops, &tol()).unwrap();
        let b = span_of(&ops, &tol()).unwrap();
        assert_eq!(a, b);
        for v in a.basis() {
            let top = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let imax = v.iter().position(|z| z.norm() > top - 1e-12).unwrap();
            assert!(v[imax].im.abs() < 1e-15 && v[imax].re > 0.0);
        }
    }

    #[test]
    fn exact_dependencies_keep_an_accurate_basis() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let a: Vec<Complex64> = (0..9).map(|i| c(i as f64 * 0.3 - 1.0, 0.5 / (i as f64 + 1.0))).collect();
        let b: Vec<Complex64> = (0..9).map(|i| c((i * i) as f64 * 0.1, -(i as f64) * 0.2)).collect();
        let e: Vec<Complex64> = (0..9).map(|i| c(((i * 7) % 5) as f64, 1.0)).collect();
        let sum: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let mix: Vec<Complex64> = e.iter().zip(&a).map(|(x, y)| x * c(0.0, 2.0) - y).collect();
        let vs = [a, sum, e, b, mix];
        let s = span_of_vectors(&vs, &tol()).unwrap();
        assert_eq!(s.dim(), 3);
        for v in &vs {
            assert!(s.residual(v).unwrap() < 1e-12 * norm(v));
        }
    }

    #[test]
    fn zero_vectors_give_empty_span() {
        let zero = ComplexMatrix::zeros(2, 2);
        let s = span_of(&[zero], &tol()).unwrap();
        assert_eq!(s.dim(), 0);
        assert!(Subspace::full(4, &tol()).contains(&s).unwrap());
    }

    #[test]
    fn rejects_mixed_shapes_and_empty_lists() {
        assert!(span_of(&[i2(), ComplexMatrix::identity(3)], &tol()).is_err());
        assert!(span_of(&[], &tol()).is_err());
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0, 1e-12).is_err());
        assert!(Tolerance::new(1e-10, 1.0).is_err());
        assert!(Tolerance::new(1e-8, 1e-14).is_ok());
    }
}
