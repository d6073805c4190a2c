//! Analysis reports: JSON form, CSV tables and plain-text rendering.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::certify::query_bound;
use crate::oracle::{Hypothesis, SimulationReport};
use crate::povm::{sic_p1_parallel_bound, Permutation};

pub const VERDICT_YES: &str = "certifiable";
pub const VERDICT_NO: &str = "not certifiable";

/// `p1` of the projector certificate for `n` parallel uses, next to the
/// product bound `p1_single^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelRow {
    pub n: usize,
    pub p1: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SicRow {
    pub n: usize,
    pub closed_form: f64,
    pub direct: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SicSection {
    pub d: usize,
    pub permutation: String,
    pub k: usize,
    pub bound_table: Vec<SicRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub verdict: String,
    pub certifiable: bool,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1_single: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_epsilon: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p1_parallel_table: Vec<ParallelRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sic: Option<SicSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, certifiable: bool, tol: f64) -> Self {
        Self {
            command: command.to_string(),
            verdict: if certifiable { VERDICT_YES } else { VERDICT_NO }.to_string(),
            certifiable,
            tol,
            epsilon: None,
            seed: None,
            samples: None,
            p1_single: None,
            n_epsilon: None,
            p1_parallel_table: Vec::new(),
            sic: None,
            simulation: None,
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite numbers") + "\n"
    }

    /// Parses a report and re-checks its internal consistency.
    pub fn from_json(text: &str) -> Result<Self, String> {
        let r: Report = serde_json::from_str(text).map_err(|e| e.to_string())?;
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), String> {
        let expected = if self.certifiable { VERDICT_YES } else { VERDICT_NO };
        if self.verdict != expected {
            return Err(format!("verdict `{}` contradicts certifiable = {}", self.verdict, self.certifiable));
        }
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(format!("{name} = {p} is not a probability"))
            }
        };
        if let Some(p) = self.p1_single {
            prob("p1_single", p)?;
        }
        if let (Some(p), Some(eps), Some(n)) = (self.p1_single, self.epsilon, self.n_epsilon) {
            let qb = query_bound(p, eps).map_err(|e| e.to_string())?;
            if qb.n_epsilon != n {
                return Err(format!("n_epsilon = {n} but p1 = {p}, epsilon = {eps} give {}", qb.n_epsilon));
            }
        }
        for (i, row) in self.p1_parallel_table.iter().enumerate() {
            if row.n != i + 1 {
                return Err(format!("parallel table row {i} has n = {}", row.n));
            }
            prob("p1", row.p1)?;
            if let Some(p) = self.p1_single {
                let want = p.powi(row.n as i32);
                if (row.bound - want).abs() > 1e-12 * want.max(1e-300) + 1e-15 {
                    return Err(format!("bound at n = {} is {} instead of {want}", row.n, row.bound));
                }
            }
        }
        if let Some(sic) = &self.sic {
            let pi = Permutation::parse_cycles(&sic.permutation, sic.d * sic.d).map_err(|e| e.to_string())?;
            if pi.fixed_point_count() != sic.k {
                return Err(format!("permutation {} has {} fixed points, not {}", sic.permutation, pi.fixed_point_count(), sic.k));
            }
            for (i, row) in sic.bound_table.iter().enumerate() {
                if row.n != i + 1 {
                    return Err(format!("SIC table row {i} has n = {}", row.n));
                }
                let closed = sic_p1_parallel_bound(sic.d, sic.k, row.n).map_err(|e| e.to_string())?;
                if (closed - row.closed_form).abs() > 1e-12 {
                    return Err(format!("closed form at n = {} is {} instead of {closed}", row.n, row.closed_form));
                }
                prob("direct p1", row.direct)?;
                if ((row.closed_form - row.direct).abs() - row.delta).abs() > 1e-15 {
                    return Err(format!("delta at n = {} is inconsistent", row.n));
                }
            }
        }
        if let Some(s) = &self.simulation {
            if s.accepted + s.rejected != s.trials {
                return Err("simulation counts do not add up to the trial count".into());
            }
            let n = s.trials as f64;
            let (fp, fnr) = match s.truth {
                Hypothesis::Null => (s.rejected as f64 / n, 0.0),
                Hypothesis::Alternative => (0.0, s.accepted as f64 / n),
            };
            if fp != s.empirical_fp_rate || fnr != s.empirical_fn_rate {
                return Err("simulation rates do not match the counts".into());
            }
            if self.seed.is_some_and(|seed| seed != s.seed) {
                return Err("simulation seed differs from the report seed".into());
            }
        }
        Ok(())
    }

    /// `(N, p1, bound)` triples: the SIC table when present, else the
    /// parallel table.
    pub fn csv_rows(&self) -> Vec<(usize, f64, f64)> {
        match &self.sic {
            Some(sic) => sic.bound_table.iter().map(|r| (r.n, r.direct, r.closed_form)).collect(),
            None => self.p1_parallel_table.iter().map(|r| (r.n, r.p1, r.bound)).collect(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["N", "p1", "bound"])?;
        for (n, p1, bound) in self.csv_rows() {
            w.write_record([n.to_string(), p1.to_string(), bound.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "verdict: {}", self.verdict);
        if let Some(sic) = &self.sic {
            let _ = writeln!(s, "SIC d = {}, permutation {}, fixed points k = {}", sic.d, sic.permutation, sic.k);
        }
        if let Some(p) = self.p1_single {
            let _ = writeln!(s, "p1 (single shot): {p:.12}");
        }
        if let (Some(eps), Some(n)) = (self.epsilon, self.n_epsilon) {
            let _ = writeln!(s, "queries for epsilon = {eps}: N = {n}");
        }
        if !self.p1_parallel_table.is_empty() {
            let _ = writeln!(s, "{:>3}  {:>16}  {:>16}", "N", "p1 (parallel)", "p1_single^N");
            for r in &self.p1_parallel_table {
                let _ = writeln!(s, "{:>3}  {:>16.12}  {:>16.12}", r.n, r.p1, r.bound);
            }
        }
        if let Some(sic) = &self.sic {
            if !sic.bound_table.is_empty() {
                let _ = writeln!(s, "{:>3}  {:>16}  {:>16}  {:>10}", "N", "closed form", "certificate p1", "delta");
                for r in &sic.bound_table {
                    let _ = writeln!(s, "{:>3}  {:>16.12}  {:>16.12}  {:>10.2e}", r.n, r.closed_form, r.direct, r.delta);
                }
            }
        }
        if let Some(sim) = &self.simulation {
            let _ = writeln!(s, "simulated {} trials, seed {}, true hypothesis {}", sim.trials, sim.seed, sim.truth);
            let _ = writeln!(s, "accepted {}, rejected {}", sim.accepted, sim.rejected);
            match sim.truth {
                Hypothesis::Null => {
                    let _ = writeln!(
                        s,
                        "false positive rate {:.6} (std error {:.6}), analytic p1 {:.6}, deviation {:.2} sigma",
                        sim.empirical_fp_rate,
                        sim.fp_std_error,
                        sim.analytic_p1,
                        sim.fp_deviation_sigmas()
                    );
                }
                Hypothesis::Alternative => {
                    let _ = writeln!(
                        s,
                        "false negatives: {} of {} (rate {}, must be exactly 0)",
                        sim.accepted, sim.trials, sim.empirical_fn_rate
                    );
                }
            }
        }
        for note in &self.notes {
            let _ = writeln!(s, "note: {note}");
        }
        s
    }
}
