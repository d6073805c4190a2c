use std::path::PathBuf;

use crate::certify::{build_certificate, can_certify, p1_parallel, query_bound};
use crate::channels::{max_entangled, QuantumChannel};
use crate::error::Error;
use crate::linalg::Tolerance;
use crate::oracle::{brute_force_best, product_input, simulate_protocol, Hypothesis};
use crate::povm::{can_certify_povm, sic_certificate, sic_p1_bound, sic_p1_parallel_bound, sic_povm, Permutation, Povm};

use super::report::{ParallelRow, Report, SicRow, SicSection};
use super::spec::{load_spec, ChannelSpec};
use super::CliError;

/// A finished command: the report and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub code: i32,
}

impl Outcome {
    fn verdict(report: Report) -> Self {
        let code = if report.certifiable { 0 } else { 1 };
        Self { report, code }
    }
}

pub struct Loaded {
    pub null: QuantumChannel,
    pub alts: Vec<QuantumChannel>,
    specs: Vec<ChannelSpec>,
}

pub fn load_channels(null: &PathBuf, alts: &[PathBuf], tol: &Tolerance) -> Result<Loaded, CliError> {
    if alts.is_empty() {
        return Err(CliError::Usage("at least one alternative spec file is required".into()));
    }
    let mut specs = Vec::with_capacity(alts.len() + 1);
    for p in std::iter::once(null).chain(alts) {
        specs.push(load_spec(p)?);
    }
    let mut channels = specs
        .iter()
        .map(|s| s.to_channel(tol))
        .collect::<crate::Result<Vec<_>>>()?;
    let null = channels.remove(0);
    for (path, c) in alts.iter().zip(&channels) {
        if !c.same_shape(&null) {
            return Err(CliError::Library(Error::ShapeMismatch(format!(
                "{} maps C^{} -> C^{} but the null channel maps C^{} -> C^{}",
                path.display(),
                c.in_dim(),
                c.out_dim(),
                null.in_dim(),
                null.out_dim()
            ))));
        }
    }
    Ok(Loaded {
        null,
        alts: channels,
        specs,
    })
}

fn as_povm(spec: &ChannelSpec) -> crate::Result<Option<Povm>> {
    match spec {
        ChannelSpec::Povm(p) => Ok(Some(p.clone())),
        ChannelSpec::Sic { d, permutation } => Ok(Some(sic_povm(*d)?.to_povm()?.permuted(permutation)?)),
        _ => Ok(None),
    }
}

pub fn cmd_check(loaded: &Loaded, tol: &Tolerance) -> Result<Outcome, CliError> {
    let yes = can_certify(&loaded.null, &loaded.alts, tol)?;
    let mut report = Report::new("check", yes, tol.rel_rank_cut);
    if let [null_spec, alt_spec] = loaded.specs.as_slice() {
        if let (Some(p0), Some(p1)) = (as_povm(null_spec)?, as_povm(alt_spec)?) {
            if can_certify_povm(&p0, &p1, tol)? != yes {
                return Err(CliError::Library(Error::NumericalIntegrity(
                    "effect-support criterion disagrees with the channel-level test".into(),
                )));
            }
            report.notes.push("effect-support criterion agrees".into());
        }
    }
    Ok(Outcome::verdict(report))
}

pub struct BoundArgs {
    pub epsilon: f64,
    pub max_n: usize,
    pub seed: u64,
    pub samples: Option<usize>,
}

/// Search budget used when none is given.
pub fn default_samples(in_dim: usize) -> usize {
    if in_dim <= 2 {
        10_000
    } else {
        1_000
    }
}

pub fn cmd_bound(loaded: &Loaded, args: &BoundArgs, tol: &Tolerance) -> Result<Outcome, CliError> {
    check_epsilon(args.epsilon)?;
    if args.max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    let yes = can_certify(&loaded.null, &loaded.alts, tol)?;
    let mut report = Report::new("bound", yes, tol.rel_rank_cut);
    report.epsilon = Some(args.epsilon);
    report.seed = Some(args.seed);
    let samples = args.samples.unwrap_or_else(|| default_samples(loaded.null.in_dim()));
    report.samples = Some(samples);
    if !yes {
        return Ok(Outcome::verdict(report));
    }
    let (p1, psi) = brute_force_best(&loaded.null, &loaded.alts, samples, args.seed, tol)?;
    report.p1_single = Some(p1);
    report.n_epsilon = Some(query_bound(p1, args.epsilon)?.n_epsilon);
    let d = loaded.null.in_dim();
    for n in 1..=args.max_n {
        let value = product_input(&psi, d, n).and_then(|psi_n| p1_parallel(&loaded.null, &loaded.alts, n, &psi_n, tol));
        match value {
            Ok(p) => report.p1_parallel_table.push(ParallelRow {
                n,
                p1: p,
                bound: p1.powi(n as i32),
            }),
            Err(e @ Error::DimensionLimit { .. }) => {
                report.notes.push(format!("parallel table stops at N = {}: {e}", n - 1));
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Outcome::verdict(report))
}

pub struct SicArgs {
    pub d: usize,
    pub perm: String,
    pub n: usize,
    pub epsilon: f64,
}

pub fn cmd_sic(args: &SicArgs) -> Result<Outcome, CliError> {
    check_epsilon(args.epsilon)?;
    if !(2..=3).contains(&args.d) {
        return Err(CliError::Usage(format!("--d must be 2 or 3, got {}", args.d)));
    }
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let m = args.d * args.d;
    let pi = Permutation::parse_cycles(&args.perm, m)
        .map_err(|e| CliError::Usage(format!("invalid permutation `{}`: {e}", args.perm)))?;
    let k = pi.fixed_point_count();
    let yes = !pi.is_identity();
    let mut report = Report::new("sic", yes, Tolerance::default().rel_rank_cut);
    report.epsilon = Some(args.epsilon);
    let mut section = SicSection {
        d: args.d,
        permutation: pi.to_string(),
        k,
        bound_table: Vec::new(),
    };
    if !yes {
        report.notes.push("the permuted SIC equals the original one".into());
        report.sic = Some(section);
        return Ok(Outcome::verdict(report));
    }
    let p1 = sic_p1_bound(args.d, k)?;
    report.p1_single = Some(p1);
    report.n_epsilon = Some(query_bound(p1, args.epsilon)?.n_epsilon);
    for n in 1..=args.n {
        let closed = sic_p1_parallel_bound(args.d, k, n)?;
        match sic_certificate(args.d, &pi, n) {
            Ok(cert) => section.bound_table.push(SicRow {
                n,
                closed_form: closed,
                direct: cert.p1(),
                delta: (closed - cert.p1()).abs(),
            }),
            Err(e @ Error::DimensionLimit { .. }) => {
                report.notes.push(format!("certificate table stops at N = {}: {e}", n - 1));
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    report.sic = Some(section);
    Ok(Outcome::verdict(report))
}

pub struct SimulateArgs {
    pub truth: Hypothesis,
    pub trials: u64,
    pub seed: u64,
    /// 1-based index of the alternative simulated when `truth` is the alternative.
    pub alt: usize,
}

pub fn cmd_simulate(loaded: &Loaded, args: &SimulateArgs, tol: &Tolerance) -> Result<Outcome, CliError> {
    if args.alt == 0 || args.alt > loaded.alts.len() {
        return Err(CliError::Usage(format!(
            "--alt {} is out of range for {} alternative(s)",
            args.alt,
            loaded.alts.len()
        )));
    }
    let psi = max_entangled(loaded.null.in_dim())?;
    let cert = build_certificate(&loaded.null, &loaded.alts, &psi, tol)?;
    let channel = match args.truth {
        Hypothesis::Null => &loaded.null,
        Hypothesis::Alternative => &loaded.alts[args.alt - 1],
    };
    let sim = simulate_protocol(channel, &cert, args.truth, args.trials, args.seed)?;
    let mut report = Report::new("simulate", true, tol.rel_rank_cut);
    report.seed = Some(args.seed);
    report.p1_single = Some(cert.p1());
    let false_negatives = args.truth == Hypothesis::Alternative && sim.accepted > 0;
    report.simulation = Some(sim);
    if false_negatives {
        report.notes.push("false negatives observed for a zero-error certificate".into());
        return Ok(Outcome { report, code: 3 });
    }
    Ok(Outcome::verdict(report))
}

fn check_epsilon(epsilon: f64) -> Result<(), CliError> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--epsilon must lie in (0, 1), got {epsilon}")))
    }
}
