//! Independent checks: randomized search over inputs, explicit tensor-power
//! constructions, Kraus-span versus output-state support, and Monte Carlo
//! runs of the certification protocol.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{can_certify, p1_parallel, projector_p1, CertificationCertificate};
use crate::channels::{max_entangled, PureState, output_state, output_support, support, tensor_power, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{inner, Tolerance};
use crate::povm::{sic_povm, Permutation};
use crate::random::{random_pure_state, seeded, stream};

/// Probabilities in `[-NEGATIVE_SLACK, 0)` are clamped to zero.
const NEGATIVE_SLACK: f64 = 1e-9;
/// Magnitudes at or below this are rounding noise and count as zero.
const ZERO_SNAP: f64 = 1e-12;

/// Which hypothesis is true during a simulated run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    Null,
    Alternative,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Hypothesis::Null => "null",
            Hypothesis::Alternative => "alternative",
        })
    }
}

/// Tallies of a simulated certification run.
///
/// Under the null hypothesis every rejection is a false positive; under an
/// alternative every acceptance is a false negative. The rate that does not
/// apply to the simulated hypothesis is reported as zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub trials: u64,
    pub seed: u64,
    pub truth: Hypothesis,
    pub accepted: u64,
    pub rejected: u64,
    pub empirical_fp_rate: f64,
    pub empirical_fn_rate: f64,
    pub analytic_p1: f64,
    /// Born probability of accepting under the simulated channel.
    pub analytic_accept_probability: f64,
    pub fp_std_error: f64,
}

impl SimulationReport {
    /// `|fp − p1|` in units of the standard error (infinite when the error is zero and they differ).
    pub fn fp_deviation_sigmas(&self) -> f64 {
        let diff = (self.empirical_fp_rate - self.analytic_p1).abs();
        if diff == 0.0 {
            0.0
        } else if self.fp_std_error == 0.0 {
            f64::INFINITY
        } else {
            diff / self.fp_std_error
        }
    }
}

fn clean_probability(p: f64, label: &str) -> Result<f64> {
    if p < -NEGATIVE_SLACK {
        return Err(Error::NumericalIntegrity(format!("{label} probability {p:.3e} is negative")));
    }
    Ok(if p.abs() <= ZERO_SNAP { 0.0 } else { p.max(0.0) })
}

/// Runs the measurement `{Ω₀, I − Ω₀}` on the output of `true_channel` for
/// `trials` independent rounds. Trial `i` draws from the generator stream
/// `(seed, i)`, so results do not depend on evaluation order.
pub fn simulate_protocol(
    true_channel: &QuantumChannel,
    cert: &CertificationCertificate,
    truth: Hypothesis,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let channel_n = if cert.n_parallel() == 1 {
        true_channel.clone()
    } else {
        tensor_power(true_channel, cert.n_parallel())?
    };
    let rho = output_state(&channel_n, cert.input_state(), cert.ref_dim())?;
    if rho.dim() != cert.accepting_effect().rows() {
        return Err(Error::shape(format!(
            "certificate effect acts on dim {}, channel output has dim {}",
            cert.accepting_effect().rows(),
            rho.dim()
        )));
    }
    let raw_accept = rho.expectation(cert.accepting_effect())?;
    let p_accept = clean_probability(raw_accept, "accept")?;
    let p_reject = clean_probability(rho.trace() - raw_accept, "reject")?;
    let total = p_accept + p_reject;
    if total <= 0.0 {
        return Err(Error::NumericalIntegrity("outcome probabilities vanish".into()));
    }
    let p_accept = p_accept / total;

    let accepted = (0..trials)
        .filter(|&i| stream(seed, i).random::<f64>() < p_accept)
        .count() as u64;
    let rejected = trials - accepted;
    let n = trials as f64;
    let (fp, fnr) = match truth {
        Hypothesis::Null => (rejected as f64 / n, 0.0),
        Hypothesis::Alternative => (0.0, accepted as f64 / n),
    };
    Ok(SimulationReport {
        trials,
        seed,
        truth,
        accepted,
        rejected,
        empirical_fp_rate: fp,
        empirical_fn_rate: fnr,
        analytic_p1: cert.p1(),
        analytic_accept_probability: p_accept,
        fp_std_error: (fp * (1.0 - fp) / n).sqrt(),
    })
}

/// Smallest projector-certificate `p1` over the maximally entangled input and
/// `samples` Haar-random inputs on `C^d ⊗ C^d`; an upper bound on the optimum.
///
/// Samples are drawn sequentially from one seeded generator, so a larger
/// budget extends the same sequence and never raises the result.
pub fn brute_force_p1(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<f64> {
    brute_force_best(null_channel, alt_channels, samples, seed, tol).map(|(p, _)| p)
}

/// [`brute_force_p1`] together with the input that attains it.
pub fn brute_force_best(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<(f64, PureState)> {
    search(null_channel, alt_channels, samples, seed, tol, |_| {})
}

/// Running minimum after the entangled input and after each sample.
pub fn brute_force_trace(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<Vec<f64>> {
    let mut trace = Vec::with_capacity(samples + 1);
    search(null_channel, alt_channels, samples, seed, tol, |p| trace.push(p))?;
    Ok(trace)
}

fn search(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    samples: usize,
    seed: u64,
    tol: &Tolerance,
    mut record: impl FnMut(f64),
) -> Result<(f64, PureState)> {
    if !can_certify(null_channel, alt_channels, tol)? {
        return Err(Error::NoCertificate(
            "null channel support lies inside the alternatives' joint support".into(),
        ));
    }
    let d = null_channel.in_dim();
    let mut best_psi = max_entangled(d)?;
    let mut best = projector_p1(null_channel, alt_channels, &best_psi, tol)?;
    record(best);
    let mut rng = seeded(seed);
    for _ in 0..samples {
        let psi = random_pure_state(d * d, &mut rng);
        if let Ok(p) = projector_p1(null_channel, alt_channels, &psi, tol) {
            if p < best {
                best = p;
                best_psi = psi;
            }
        }
        record(best);
    }
    Ok((best, best_psi))
}

/// `ψ^{⊗n}` for `ψ ∈ C^a ⊗ C^r`, reordered to `(C^a)^{⊗n} ⊗ (C^r)^{⊗n}`.
pub fn product_input(psi: &PureState, left_dim: usize, n: usize) -> Result<PureState> {
    if left_dim == 0 || !psi.dim().is_multiple_of(left_dim) {
        return Err(Error::shape(format!("state of dim {} has no factor {left_dim}", psi.dim())));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("copy count must be positive".into()));
    }
    let r = psi.dim() / left_dim;
    let (a_n, r_n) = (left_dim.pow(n as u32), r.pow(n as u32));
    crate::linalg::check_entries(a_n, r_n)?;
    let amps = psi.amplitudes();
    let mut out = Vec::with_capacity(a_n * r_n);
    for a in 0..a_n {
        for b in 0..r_n {
            let (mut ra, mut rb) = (a, b);
            let mut prod = Complex64::new(1.0, 0.0);
            let mut digits = Vec::with_capacity(n);
            for _ in 0..n {
                digits.push((ra % left_dim, rb % r));
                ra /= left_dim;
                rb /= r;
            }
            for (x, y) in digits {
                prod *= amps[x * r + y];
            }
            out.push(prod);
        }
    }
    PureState::normalized(out)
}

/// Outcome of [`tensor_power_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct TensorPowerCheck {
    pub n: usize,
    /// Single-copy projector `p1` at the maximally entangled input.
    pub p1_single: Option<f64>,
    /// `p1` from the explicit n-fold construction.
    pub p1_parallel: Option<f64>,
    /// Alternatives' n-copy output support contains the null output support.
    pub output_inclusion: bool,
    /// Channel-level inclusion of the n-fold Kraus spans.
    pub kraus_inclusion: bool,
    pub passed: bool,
}

/// Builds `Φ^{⊗n} ⊗ 1` explicitly and checks that
/// (a) the n-copy output supports are nested exactly when the n-fold Kraus
/// spans are, and (b) the projector certificate at the maximally entangled
/// input has `p1(n) = p1(1)^n` within `1e-8`, since both the input and the
/// alternative support factor over copies.
pub fn tensor_power_check(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    n: usize,
    tol: &Tolerance,
) -> Result<TensorPowerCheck> {
    if n == 0 || n > 3 {
        return Err(Error::InvalidArgument(format!("tensor-power check supports 1 ≤ n ≤ 3, got {n}")));
    }
    let d = null_channel.in_dim();
    let null_n = tensor_power(null_channel, n)?;
    let alts_n = alt_channels
        .iter()
        .map(|c| tensor_power(c, n))
        .collect::<Result<Vec<_>>>()?;
    let ref_n = d.pow(n as u32);
    let psi_n = max_entangled(ref_n)?;

    let null_out = output_support(std::slice::from_ref(&null_n), &psi_n, ref_n, tol)?;
    let alt_out = output_support(&alts_n, &psi_n, ref_n, tol)?;
    let output_inclusion = alt_out.contains(&null_out)?;
    let kraus_inclusion = !can_certify(&null_n, &alts_n, tol)?;
    let mut passed = output_inclusion == kraus_inclusion;

    let (mut p1_single, mut p1_par) = (None, None);
    if !kraus_inclusion && alt_channels.len() == 1 {
        let single = projector_p1(null_channel, alt_channels, &max_entangled(d)?, tol)?;
        let parallel = p1_parallel(null_channel, alt_channels, n, &psi_n, tol)?;
        passed &= (parallel - single.powi(n as i32)).abs() <= 1e-8;
        p1_single = Some(single);
        p1_par = Some(parallel);
    }
    Ok(TensorPowerCheck {
        n,
        p1_single,
        p1_parallel: p1_par,
        output_inclusion,
        kraus_inclusion,
        passed,
    })
}

pub fn verify_tensor_power(
    null_channel: &QuantumChannel,
    alt_channels: &[QuantumChannel],
    n: usize,
    tol: &Tolerance,
) -> Result<bool> {
    Ok(tensor_power_check(null_channel, alt_channels, n, tol)?.passed)
}

/// Compares `dim span{E_i}` with the rank of `(Φ ⊗ 1)(|ψ⟩⟨ψ|)` at the
/// maximally entangled input, the latter from an eigendecomposition of the
/// explicit output state.
pub fn choi_support_crosscheck(c: &QuantumChannel, tol: &Tolerance) -> Result<bool> {
    let d = c.in_dim();
    let rho = output_state(c, &max_entangled(d)?, d)?;
    let from_state = rho.support(tol)?.dim();
    let from_kraus = support(c, tol)?.dim();
    Ok(from_state == from_kraus)
}

/// `Σ_{i⃗} Π_l |⟨φ_{i_l}|φ_{π(i_l)}⟩|²` by enumerating all `d^{2n}` index tuples
/// over the built-in SIC.
pub fn sic_overlap_sum_brute(d: usize, pi: &Permutation, n: usize) -> Result<f64> {
    let sic = sic_povm(d)?;
    let m = d * d;
    if pi.size() != m {
        return Err(Error::shape(format!("permutation must act on {m} elements")));
    }
    let single: Vec<f64> = (0..m)
        .map(|i| inner(&sic.vectors()[i], &sic.vectors()[pi.apply(i)]).norm_sqr())
        .collect();
    let count = m.pow(n as u32);
    let mut total = 0.0;
    for idx in 0..count {
        let mut rest = idx;
        let mut prod = 1.0;
        for _ in 0..n {
            prod *= single[rest % m];
            rest /= m;
        }
        total += prod;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::build_certificate;
    use crate::channels::{mixed_unitary_channel, overlap, qubit_depolarizing, unitary_channel};
    use crate::linalg::pauli::{i2, x, z};
    use crate::random::random_channel;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn mix_ix() -> QuantumChannel {
        mixed_unitary_channel(&[0.5, 0.5], &[i2(), x()]).unwrap()
    }

    #[test]
    fn perfect_certificate_never_false_positive() {
        let zc = unitary_channel(&z()).unwrap();
        let id = QuantumChannel::identity(2);
        let cert = build_certificate(&zc, &[id], &max_entangled(2).unwrap(), &tol()).unwrap();
        let rep = simulate_protocol(&zc, &cert, Hypothesis::Null, 1000, 3).unwrap();
        assert_eq!(rep.rejected, 0);
        assert_eq!(rep.empirical_fp_rate, 0.0);
    }

    #[test]
    fn alternative_never_accepted() {
        let flip = unitary_channel(&x()).unwrap();
        let cert = build_certificate(&mix_ix(), std::slice::from_ref(&flip), &max_entangled(2).unwrap(), &tol()).unwrap();
        let rep = simulate_protocol(&flip, &cert, Hypothesis::Alternative, 5000, 9).unwrap();
        assert_eq!(rep.accepted, 0);
        assert_eq!(rep.empirical_fn_rate, 0.0);
    }

    #[test]
    fn simulation_is_reproducible() {
        let flip = unitary_channel(&x()).unwrap();
        let cert = build_certificate(&mix_ix(), &[flip], &max_entangled(2).unwrap(), &tol()).unwrap();
        let a = simulate_protocol(&mix_ix(), &cert, Hypothesis::Null, 2000, 42).unwrap();
        let b = simulate_protocol(&mix_ix(), &cert, Hypothesis::Null, 2000, 42).unwrap();
        assert_eq!(a, b);
        let c = simulate_protocol(&mix_ix(), &cert, Hypothesis::Null, 2000, 43).unwrap();
        assert_ne!(a.rejected, c.rejected);
    }

    #[test]
    fn simulation_rejects_mismatched_channel() {
        let flip = unitary_channel(&x()).unwrap();
        let cert = build_certificate(&mix_ix(), &[flip], &max_entangled(2).unwrap(), &tol()).unwrap();
        let wrong = QuantumChannel::identity(3);
        assert!(simulate_protocol(&wrong, &cert, Hypothesis::Null, 10, 0).is_err());
        assert!(simulate_protocol(&mix_ix(), &cert, Hypothesis::Null, 0, 0).is_err());
    }

    #[test]
    fn clamp_rules() {
        assert_eq!(clean_probability(-5e-10, "x").unwrap(), 0.0);
        assert_eq!(clean_probability(3e-13, "x").unwrap(), 0.0);
        assert!(matches!(clean_probability(-1e-6, "x"), Err(Error::NumericalIntegrity(_))));
        assert_eq!(clean_probability(0.25, "x").unwrap(), 0.25);
    }

    #[test]
    fn brute_force_examples() {
        let zc = unitary_channel(&z()).unwrap();
        let id = QuantumChannel::identity(2);
        assert!(brute_force_p1(&zc, std::slice::from_ref(&id), 50, 1, &tol()).unwrap() < 1e-9);
        let at_ent = projector_p1(&mix_ix(), &[unitary_channel(&x()).unwrap()], &max_entangled(2).unwrap(), &tol()).unwrap();
        let found = brute_force_p1(&mix_ix(), &[unitary_channel(&x()).unwrap()], 100, 2, &tol()).unwrap();
        assert!(found <= at_ent);
        assert!(matches!(brute_force_p1(&id, std::slice::from_ref(&id), 10, 0, &tol()), Err(Error::NoCertificate(_))));
    }

    #[test]
    fn brute_force_is_monotone_in_budget() {
        let dep = qubit_depolarizing(0.3).unwrap();
        let id = [QuantumChannel::identity(2)];
        let trace = brute_force_trace(&dep, &id, 200, 5, &tol()).unwrap();
        assert!(trace.windows(2).all(|w| w[1] <= w[0]));
        let short = brute_force_p1(&dep, &id, 50, 5, &tol()).unwrap();
        let long = brute_force_p1(&dep, &id, 200, 5, &tol()).unwrap();
        assert!(long <= short);
        assert_eq!(short, trace[50]);
    }

    #[test]
    fn product_input_of_entangled_state_is_entangled() {
        let psi = max_entangled(2).unwrap();
        let two = product_input(&psi, 2, 2).unwrap();
        let direct = max_entangled(4).unwrap();
        assert!((overlap(&two, &direct) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_power_examples() {
        let flip = unitary_channel(&x()).unwrap();
        assert!(verify_tensor_power(&mix_ix(), std::slice::from_ref(&flip), 1, &tol()).unwrap());
        let check = tensor_power_check(&mix_ix(), std::slice::from_ref(&flip), 2, &tol()).unwrap();
        assert!(check.passed);
        assert!((check.p1_parallel.unwrap() - 0.25).abs() < 1e-12);
        let back = tensor_power_check(&flip, &[mix_ix()], 2, &tol()).unwrap();
        assert!(back.passed && back.output_inclusion && back.kraus_inclusion);
        assert!(tensor_power_check(&flip, &[mix_ix()], 4, &tol()).is_err());
    }

    #[test]
    fn choi_crosscheck_examples() {
        assert!(choi_support_crosscheck(&unitary_channel(&x()).unwrap(), &tol()).unwrap());
        assert!(choi_support_crosscheck(&qubit_depolarizing(0.5).unwrap(), &tol()).unwrap());
        let c = random_channel(3, 3, &mut seeded(17)).unwrap();
        assert_eq!(support(&c, &tol()).unwrap().dim(), 3);
        assert!(choi_support_crosscheck(&c, &tol()).unwrap());
    }

    #[test]
    fn sic_overlap_sum_matches_single_shot_formula() {
        // d = 2, k = 0: four overlaps of 1/3
        let pi = Permutation::parse_cycles("(1 2)(3 4)", 4).unwrap();
        assert!((sic_overlap_sum_brute(2, &pi, 1).unwrap() - 4.0 / 3.0).abs() < 1e-12);
    }
}
