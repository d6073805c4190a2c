//! Certification with zero false-negative probability.
//!
//! `Φ₀` can be certified against `Φ₁, …, Φ_m` iff
//! `supp(Φ₀) ⊄ span{Kraus operators of all Φ_j}`. When it can, feeding a
//! full-Schmidt-rank state through `Φ ⊗ 1` and accepting on the orthogonal
//! complement of the alternatives' joint output support never accepts an
//! alternative, and rejects `Φ₀` with probability `p1 < 1`.

use num_complex::Complex64;
use rand::Rng;

use crate::channels::{
    max_entangled, output_vectors, support, joint_support, tensor_power, PureState, QuantumChannel,
};
use crate::error::{Error, Result};
use crate::linalg::{inner, span_of_vectors, ComplexMatrix, Tolerance};
use crate::random::{complex_gaussian, random_pure_state, seeded};

/// Bound on the false-negative probability of a valid certificate.
pub const P2_TOL: f64 = 1e-9;
const EFFECT_TOL: f64 = 1e-9;

/// Input state, accepting effect `Ω₀` and the resulting error probabilities.
///
/// `p1 = tr((I − Ω₀) ρ₀)` is the false-positive probability and
/// `p2 = Σ_j tr(Ω₀ ρ_j)` the false-negative probability.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificationCertificate {
    input_state: PureState,
    accepting_effect: ComplexMatrix,
    p1: f64,
    p2: f64,
    n_parallel: usize,
    ref_dim: usize,
}

impl CertificationCertificate {
    /// Validates `0 ≤ Ω₀ ≤ I`, `p2 ≤ 1e-9` and `p1 ∈ [0, 1]`.
    pub fn new(
        input_state: PureState,
        accepting_effect: ComplexMatrix,
        p1: f64,
        p2: f64,
        n_parallel: usize,
        ref_dim: usize,
    ) -> Result<Self> {
        if !accepting_effect.is_hermitian(EFFECT_TOL) {
            return Err(Error::InvalidArgument("accepting effect is not Hermitian".into()));
        }
        let (vals, _) = accepting_effect.eigh()?;
        if vals[0] > 1.0 + EFFECT_TOL || vals[vals.len() - 1] < -EFFECT_TOL {
            return Err(Error::InvalidArgument("accepting effect is not between 0 and I".into()));
        }
        let cert = Self::unchecked(input_state, accepting_effect, p1, p2, n_parallel, ref_dim);
        cert.check_probabilities()?;
        if !cert.accepting_effect.rows().is_multiple_of(ref_dim) || !cert.input_state.dim().is_multiple_of(ref_dim) {
            return Err(Error::shape("input state and effect must both carry the reference factor"));
        }
        Ok(cert)
    }

    /// For effects that are `0 ≤ Ω₀ ≤ I` by construction; probabilities are
    /// still checked.
    pub(crate) fn from_parts(
        input_state: PureState,
        accepting_effect: ComplexMatrix,
        p1: f64,
        p2: f64,
        n_parallel: usize,
        ref_dim: usize,
    ) -> Result<Self> {
        let cert = Self::unchecked(input_state, accepting_effect, p1, p2, n_parallel, ref_dim);
        cert.check_probabilities()?;
        Ok(cert)
    }

    fn unchecked(
        input_state: PureState,
        accepting_effect: ComplexMatrix,
        p1: f64,
        p2: f64,
        n_parallel: usize,
        ref_dim: usize,
    ) -> Self {
        Self {
            input_state,
            accepting_effect,
            p1,
            p2,
            n_parallel,
            ref_dim,
        }
    }

    fn check_probabilities(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p1) {
            return Err(Error::NumericalIntegrity(format!("p1 = {} outside [0, 1]", self.p1)));
        }
        if !(self.p2 <= P2_TOL) {
            return Err(Error::NumericalIntegrity(format!(
                "false-negative probability {:.3e} exceeds {P2_TOL:e}",
                self.p2
            )));
        }
        if self.n_parallel == 0 || self.ref_dim == 0 {
            return Err(Error::InvalidArgument("copies and reference dimension must be positive".into()));
        }
        Ok(())
    }

    pub fn input_state(&self) -> &PureState {
        &self.input_state
    }

    pub fn accepting_effect(&self) -> &ComplexMatrix {
        &self.accepting_effect
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn n_parallel(&self) -> usize {
        self.n_parallel
    }

    /// Dimension of the reference system the input state is entangled with.
    pub fn ref_dim(&self) -> usize {
        self.ref_dim
    }
}

/// Sufficient number of parallel queries `N_ε = ⌈ln ε / ln p1⌉`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryBound {
    pub epsilon: f64,
    pub p1_single: f64,
    pub n_epsilon: u64,
}

fn check_same_shape(null: &QuantumChannel, alts: &[QuantumChannel]) -> Result<()> {
    if alts.is_empty() {
        return Err(Error::InvalidArgument("at least one alternative channel is required".into()));
    }
    if let Some(bad) = alts.iter().find(|c| !c.same_shape(null)) {
        return Err(Error::shape(format!(
            "null channel maps {} -> {} but an alternative maps {} -> {}",
            null.in_dim(),
            null.out_dim(),
            bad.in_dim(),
            bad.out_dim()
        )));
    }
    Ok(())
}

/// True iff `supp(null) ⊄ supp(alt_1, …, alt_m)`.
pub fn can_certify(null_channel: &QuantumChannel, alt_channels: &[QuantumChannel], tol: &Tolerance) -> Result<bool> {
    check_same_shape(null_channel, alt_channels)?;
    let alt = joint_support(alt_channels, tol)?;
    let null = support(null_channel, tol)?;
    Ok(!alt.contains(&null)?)
}

/// Adaptive certification is feasible exactly when parallel certification is,
/// so this is the same support test against a single alternative.
pub fn can_certify_adaptive(null_channel: &QuantumChannel, alt_channel: &QuantumChannel, tol: &Tolerance) -> Result<bool> {
    can_certify(null_channel, std::slice::from_ref(alt_channel), tol)
}

fn reference_dim(c: &QuantumChannel, psi: &PureState) -> Result<usize> {
    if !psi.dim().is_multiple_of(c.in_dim()) {
        return Err(Error::shape(format!(
            "input state of dim {} does not factor through channel input {}",
            psi.dim(),
            c.in_dim()
        )));
    }
    Ok(psi.dim() / c.in_dim())
}

fn check_full_schmidt_rank(c: &QuantumChannel, psi: &PureState, tol: &Tolerance) -> Result<usize> {
    let ref_dim = reference_dim(c, psi)?;
    let rank = psi.schmidt_rank(c.in_dim(), tol)?;
    if rank < c.in_dim() {
        return Err(Error::pre(format!(
            "input state has Schmidt rank {rank}, full rank {} is required",
            c.in_dim()
        )));
    }
    Ok(ref_dim)
}

/// Builds the certificate with accepting effect `Ω₀ = I − P_alt`, where
/// `P_alt` projects onto the joint output support of the alternatives.
///
/// For a fixed input this is the best effect subject to zero false negatives,
/// and `p1 = tr(P_alt ρ₀)`.
pub fn build_certificate(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    psi: &PureState,
    tol: &Tolerance,
) -> Result<CertificationCertificate> {
    if !can_certify(null_channel, alt_channels, tol)? {
        return Err(Error::NoCertificate(
            "null channel support lies inside the alternatives' joint support".into(),
        ));
    }
    let ref_dim = check_full_schmidt_rank(null_channel, psi, tol)?;
    certificate_for_input(null_channel, alt_channels, psi, ref_dim, 1, tol)
}

/// Error probabilities of the optimal projector effect for a given input,
/// without building the effect matrix.
fn projector_errors(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    psi: &PureState,
    ref_dim: usize,
    tol: &Tolerance,
) -> Result<(f64, f64, crate::linalg::Subspace)> {
    let null_vecs = output_vectors(null_channel, psi, ref_dim)?;
    let mut alt_vecs = Vec::new();
    for c in alt_channels {
        alt_vecs.extend(output_vectors(c, psi, ref_dim)?);
    }
    let alt_support = span_of_vectors(&alt_vecs, tol)?;
    let mut p1 = 0.0;
    for v in &null_vecs {
        p1 += alt_support.projected_weight(v)?;
    }
    let mut p2 = 0.0;
    for w in &alt_vecs {
        let total: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        p2 += (total - alt_support.projected_weight(w)?).max(0.0);
    }
    Ok((p1.clamp(0.0, 1.0), p2, alt_support))
}

fn certificate_for_input(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    psi: &PureState,
    ref_dim: usize,
    n_parallel: usize,
    tol: &Tolerance,
) -> Result<CertificationCertificate> {
    let (p1, p2, alt_support) = projector_errors(null_channel, alt_channels, psi, ref_dim, tol)?;
    let n = alt_support.ambient_dim();
    let effect = &ComplexMatrix::identity(n) - &alt_support.projector();
    let cert = CertificationCertificate::unchecked(psi.clone(), effect, p1, p2, n_parallel, ref_dim);
    cert.check_probabilities()?;
    Ok(cert)
}

/// False-positive probability of the optimal projector effect for the input
/// `psi`, when certifying `Φ₀` against the alternatives. Unlike
/// [`build_certificate`] no effect matrix is formed.
pub fn projector_p1(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    psi: &PureState,
    tol: &Tolerance,
) -> Result<f64> {
    check_same_shape(null_channel, alt_channels)?;
    let ref_dim = check_full_schmidt_rank(null_channel, psi, tol)?;
    Ok(projector_errors(null_channel, alt_channels, psi, ref_dim, tol)?.0)
}

fn tensor_powers(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    n: usize,
    tol: &Tolerance,
) -> Result<(QuantumChannel, Vec<QuantumChannel>)> {
    check_same_shape(null_channel, alt_channels)?;
    let null_n = tensor_power(null_channel, n)?;
    let alts_n = alt_channels
        .iter()
        .map(|c| tensor_power(c, n))
        .collect::<Result<Vec<_>>>()?;
    // Each alternative is used n times, so the n-copy alternative support is
    // spanned by same-channel Kraus products only. With one alternative this
    // test is equivalent to the single-copy one.
    if !can_certify(&null_n, &alts_n, tol)? {
        return Err(Error::NoCertificate(format!(
            "null channel support lies inside the alternatives' joint support at {n} copies"
        )));
    }
    Ok((null_n, alts_n))
}

/// Certificate for `n` parallel uses: the channels are replaced by their
/// n-fold tensor powers and `psi_n` lives on `(C^d)^{⊗n} ⊗ C^{ref}`.
pub fn parallel_certificate(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    n: usize,
    psi_n: &PureState,
    tol: &Tolerance,
) -> Result<CertificationCertificate> {
    let (null_n, alts_n) = tensor_powers(null_channel, alt_channels, n, tol)?;
    let ref_dim = check_full_schmidt_rank(&null_n, psi_n, tol)?;
    certificate_for_input(&null_n, &alts_n, psi_n, ref_dim, n, tol)
}

/// `p1^{P,N}` of the projector certificate for `n` parallel uses.
pub fn p1_parallel(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    n: usize,
    psi_n: &PureState,
    tol: &Tolerance,
) -> Result<f64> {
    let (null_n, alts_n) = tensor_powers(null_channel, alt_channels, n, tol)?;
    let ref_dim = check_full_schmidt_rank(&null_n, psi_n, tol)?;
    let (p1, p2, _) = projector_errors(&null_n, &alts_n, psi_n, ref_dim, tol)?;
    if p2 > P2_TOL {
        return Err(Error::NumericalIntegrity(format!("parallel false-negative probability {p2:.3e}")));
    }
    Ok(p1)
}

/// `N_ε = ⌈ln ε / ln p1⌉`, with `p1^{N_ε} ≤ ε`.
///
/// An exact integer ratio resolves to that integer. `p1 = 0` needs a single
/// query; `p1 = 1` never reaches `ε`.
pub fn query_bound(p1_single: f64, epsilon: f64) -> Result<QueryBound> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon = {epsilon} must lie in (0, 1)")));
    }
    if !(0.0..=1.0).contains(&p1_single) {
        return Err(Error::InvalidArgument(format!("p1 = {p1_single} must lie in [0, 1]")));
    }
    if p1_single == 1.0 {
        return Err(Error::Unbounded);
    }
    let n_epsilon = if p1_single == 0.0 {
        1
    } else {
        let ratio = epsilon.ln() / p1_single.ln();
        let floor = ratio.floor();
        let n = if ratio - floor <= 1e-12 * ratio.max(1.0) { floor } else { ratio.ceil() };
        (n as u64).max(1)
    };
    Ok(QueryBound {
        epsilon,
        p1_single,
        n_epsilon,
    })
}

/// Fidelity-form false-positive probability `⟨ψ|(Φ⊗1)(|ψ⟩⟨ψ|)|ψ⟩` when
/// certifying `c` against the identity channel with `Ω₀ = I − |ψ⟩⟨ψ|`.
pub fn certify_against_identity(c: &QuantumChannel, psi: &PureState) -> Result<f64> {
    let tol = Tolerance::default();
    if c.in_dim() != c.out_dim() {
        return Err(Error::shape("identity certification needs equal input and output dimensions"));
    }
    let identity = QuantumChannel::identity(c.in_dim());
    if !can_certify(c, std::slice::from_ref(&identity), &tol)? {
        return Err(Error::NoCertificate("channel is the identity channel".into()));
    }
    let ref_dim = reference_dim(c, psi)?;
    let p1: f64 = output_vectors(c, psi, ref_dim)?
        .iter()
        .map(|v| inner(psi.amplitudes(), v).norm_sqr())
        .sum();
    Ok(p1.clamp(0.0, 1.0))
}

/// Certificate with effect `Ω₀ = I − |ψ⟩⟨ψ|` against the identity channel.
pub fn identity_certificate(c: &QuantumChannel, psi: &PureState) -> Result<CertificationCertificate> {
    let p1 = certify_against_identity(c, psi)?;
    let ref_dim = reference_dim(c, psi)?;
    let n = psi.dim();
    let a = psi.amplitudes();
    let effect = &ComplexMatrix::identity(n) - &ComplexMatrix::outer(a, a);
    let cert = CertificationCertificate::unchecked(psi.clone(), effect, p1, 0.0, 1, ref_dim);
    cert.check_probabilities()?;
    Ok(cert)
}

/// Error probability of unambiguous discrimination between a unitary channel
/// and the identity, given the certification false-positive probability.
pub fn unambiguous_error_from_p1(p1: f64) -> f64 {
    p1 * p1
}

/// Budget for the randomized input-state search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputSearch {
    pub samples: usize,
    pub refinement_steps: usize,
    pub seed: u64,
}

impl Default for InputSearch {
    fn default() -> Self {
        Self {
            samples: 200,
            refinement_steps: 200,
            seed: 0,
        }
    }
}

/// Certificate with the smallest `p1` found by a seeded search over inputs on
/// `C^d ⊗ C^d`: the maximally entangled state, Haar samples, then local
/// perturbations of the incumbent with a shrinking step.
pub fn optimize_input_state(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    search: &InputSearch,
    tol: &Tolerance,
) -> Result<CertificationCertificate> {
    if !can_certify(null_channel, alt_channels, tol)? {
        return Err(Error::NoCertificate(
            "null channel support lies inside the alternatives' joint support".into(),
        ));
    }
    let d = null_channel.in_dim();
    let mut rng = seeded(search.seed);
    let mut best_psi = max_entangled(d)?;
    let mut best = projector_p1(null_channel, alt_channels, &best_psi, tol)?;

    let try_candidate = |psi: PureState, best: &mut f64, best_psi: &mut PureState| {
        if let Ok(p) = projector_p1(null_channel, alt_channels, &psi, tol) {
            if p < *best {
                *best = p;
                *best_psi = psi;
                return true;
            }
        }
        false
    };

    for _ in 0..search.samples {
        let psi = random_pure_state(d * d, &mut rng);
        try_candidate(psi, &mut best, &mut best_psi);
    }
    let mut step = 0.1;
    for _ in 0..search.refinement_steps {
        let perturbed: Vec<Complex64> = best_psi
            .amplitudes()
            .iter()
            .map(|a| a + complex_gaussian(&mut rng) * step)
            .collect();
        let Ok(psi) = PureState::normalized(perturbed) else { continue };
        if !try_candidate(psi, &mut best, &mut best_psi) {
            step *= 0.97;
        }
        if rng.random::<f64>() < 0.02 {
            step = step.max(1e-3) * 2.0;
        }
    }
    build_certificate(null_channel, alt_channels, &best_psi, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{mixed_unitary_channel, qubit_depolarizing, unitary_channel};
    use crate::linalg::pauli::{i2, x, z};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn mix_ix() -> QuantumChannel {
        mixed_unitary_channel(&[0.5, 0.5], &[i2(), x()]).unwrap()
    }

    fn flip() -> QuantumChannel {
        unitary_channel(&x()).unwrap()
    }

    #[test]
    fn mixed_unitary_example_certifiable_one_way() {
        assert!(can_certify(&mix_ix(), &[flip()], &tol()).unwrap());
        assert!(!can_certify(&flip(), &[mix_ix()], &tol()).unwrap());
        assert!(!can_certify(&mix_ix(), &[mix_ix()], &tol()).unwrap());
    }

    #[test]
    fn adaptive_matches_parallel() {
        let dep = qubit_depolarizing(0.4).unwrap();
        let id = QuantumChannel::identity(2);
        assert!(can_certify_adaptive(&dep, &id, &tol()).unwrap());
        assert!(!can_certify_adaptive(&dep, &dep, &tol()).unwrap());
        assert!(can_certify_adaptive(&mix_ix(), &flip(), &tol()).unwrap());
    }

    #[test]
    fn two_alternatives_can_become_separable_with_two_copies() {
        // span{I, X} lies in span{I} + span{X}, but I⊗X is not in span{I⊗I, X⊗X}
        let alts = [QuantumChannel::identity(2), flip()];
        assert!(!can_certify(&mix_ix(), &alts, &tol()).unwrap());
        let psi2 = max_entangled(4).unwrap();
        let p = p1_parallel(&mix_ix(), &alts, 2, &psi2, &tol()).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        let cert = parallel_certificate(&mix_ix(), &alts, 2, &psi2, &tol()).unwrap();
        assert!(cert.p2() <= P2_TOL);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let err = can_certify(&mix_ix(), &[QuantumChannel::identity(3)], &tol()).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch(_)));
        assert!(can_certify(&mix_ix(), &[], &tol()).is_err());
    }

    #[test]
    fn certificate_for_mixed_unitary_example() {
        let psi = max_entangled(2).unwrap();
        let cert = build_certificate(&mix_ix(), &[flip()], &psi, &tol()).unwrap();
        assert!(cert.p2() <= 1e-15);
        assert!((cert.p1() - 0.5).abs() < 1e-12);
        let effect = cert.accepting_effect();
        assert!((&(effect * effect) - effect).max_abs() < 1e-12);
    }

    #[test]
    fn certificate_refused_for_identical_channels() {
        let psi = max_entangled(2).unwrap();
        let err = build_certificate(&mix_ix(), &[mix_ix()], &psi, &tol()).unwrap_err();
        assert!(matches!(err, Error::NoCertificate(_)));
    }

    #[test]
    fn certificate_refused_for_schmidt_deficient_input() {
        let product = PureState::basis(4, 0).unwrap();
        let err = build_certificate(&mix_ix(), &[flip()], &product, &tol()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn perfect_single_shot_for_traceless_unitary() {
        let psi = max_entangled(2).unwrap();
        let cert = build_certificate(&unitary_channel(&z()).unwrap(), &[QuantumChannel::identity(2)], &psi, &tol()).unwrap();
        assert!(cert.p1() < 1e-15);
    }

    #[test]
    fn parallel_p1_halves_per_copy() {
        let psi1 = max_entangled(2).unwrap();
        let single = p1_parallel(&mix_ix(), &[flip()], 1, &psi1, &tol()).unwrap();
        let cert = build_certificate(&mix_ix(), &[flip()], &psi1, &tol()).unwrap();
        assert!((single - cert.p1()).abs() < 1e-15);
        let psi2 = max_entangled(4).unwrap();
        let two = p1_parallel(&mix_ix(), &[flip()], 2, &psi2, &tol()).unwrap();
        assert!((two - 0.25).abs() < 1e-12);
        let pc = parallel_certificate(&mix_ix(), &[flip()], 2, &psi2, &tol()).unwrap();
        assert_eq!(pc.n_parallel(), 2);
        assert!((pc.p1() - two).abs() < 1e-15);
        let perfect = p1_parallel(&unitary_channel(&z()).unwrap(), &[QuantumChannel::identity(2)], 1, &psi1, &tol()).unwrap();
        assert!(perfect < 1e-15);
    }

    #[test]
    fn query_bound_examples() {
        assert_eq!(query_bound(1.0 / 3.0, 0.01).unwrap().n_epsilon, 5);
        assert_eq!(query_bound(0.5, 0.5).unwrap().n_epsilon, 1);
        assert_eq!(query_bound(1.0 / 3.0, 1.0 / 3.0).unwrap().n_epsilon, 1);
        assert_eq!(query_bound(0.5, 0.01).unwrap().n_epsilon, 7);
        assert_eq!(query_bound(0.0, 0.01).unwrap().n_epsilon, 1);
        assert_eq!(query_bound(1.0, 0.01).unwrap_err(), Error::Unbounded);
        assert!(query_bound(0.5, 0.0).is_err());
        assert!(query_bound(0.5, 1.0).is_err());
        // 0.1^3 rounds just above 0.001, the tie still resolves to 3
        assert_eq!(query_bound(0.1, 0.001).unwrap().n_epsilon, 3);
    }

    #[test]
    fn identity_certification_examples() {
        let psi = max_entangled(2).unwrap();
        let p = certify_against_identity(&unitary_channel(&z()).unwrap(), &psi).unwrap();
        assert!(p < 1e-15);
        let err = certify_against_identity(&QuantumChannel::identity(2), &psi).unwrap_err();
        assert!(matches!(err, Error::NoCertificate(_)));

        let s = ComplexMatrix::from_diag(&[Complex64::new(1.0, 0.0), Complex64::i()]);
        let p = certify_against_identity(&unitary_channel(&s).unwrap(), &psi).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        let cert = identity_certificate(&unitary_channel(&s).unwrap(), &psi).unwrap();
        assert!((cert.p1() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unambiguous_error_relation() {
        assert_eq!(unambiguous_error_from_p1(0.0), 0.0);
        assert_eq!(unambiguous_error_from_p1(1.0), 1.0);
        assert_eq!(unambiguous_error_from_p1(0.5), 0.25);
    }

    #[test]
    fn search_never_worse_than_max_entangled() {
        let dep = qubit_depolarizing(0.6).unwrap();
        let id = QuantumChannel::identity(2);
        let psi = max_entangled(2).unwrap();
        let base = build_certificate(&dep, std::slice::from_ref(&id), &psi, &tol()).unwrap().p1();
        let found = optimize_input_state(&dep, &[id], &InputSearch::default(), &tol()).unwrap();
        assert!(found.p1() <= base + 1e-15);
    }

    #[test]
    fn validated_constructor_rejects_bad_effects() {
        let psi = max_entangled(2).unwrap();
        let too_big = ComplexMatrix::identity(4).scale_real(1.5);
        assert!(CertificationCertificate::new(psi.clone(), too_big, 0.5, 0.0, 1, 2).is_err());
        let ok = ComplexMatrix::identity(4).scale_real(0.5);
        assert!(CertificationCertificate::new(psi.clone(), ok.clone(), 0.5, 0.0, 1, 2).is_ok());
        assert!(CertificationCertificate::new(psi, ok, 0.5, 1e-3, 1, 2).is_err());
    }
}
