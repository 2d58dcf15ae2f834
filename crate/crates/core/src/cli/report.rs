//! Tables emitted by the subcommands, with their fixed CSV column orders.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analytics::{bound_at_snr, AnalyticsError};
use crate::link::AlphabetKind;
use crate::montecarlo::{fit_error_exponent, BerCurve, ExperimentConfig};
use crate::receivers::ReceiverKind;

/// Shortest form that still carries 17 significant digits, so every value
/// parses back to the same double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub const BOUND_COLUMNS: [&str; 8] = [
    "het_pam", "het_bpsk", "het_qpsk", "pa_pam", "pa_bpsk", "sfg_pam", "sfg_bpsk", "sfg_qpsk",
];

/// Receiver and alphabet behind a bound column name.
pub fn bound_column(name: &str) -> Option<(ReceiverKind, AlphabetKind)> {
    let (rx, alph) = name.split_once('_')?;
    let receiver = match rx {
        "het" => ReceiverKind::Heterodyne,
        "pa" => ReceiverKind::Pa,
        "sfg" => ReceiverKind::Sfg,
        _ => return None,
    };
    let alphabet = match alph {
        "pam" => AlphabetKind::Pam,
        "bpsk" => AlphabetKind::Bpsk,
        "qpsk" => AlphabetKind::Qpsk,
        _ => return None,
    };
    Some((receiver, alphabet))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsTable {
    /// `s` followed by the bound columns.
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn bounds_table(sweep: &[f64], columns: &[&str]) -> Result<BoundsTable, AnalyticsError> {
    let pairs: Vec<(ReceiverKind, AlphabetKind)> = columns
        .iter()
        .map(|c| bound_column(c).expect("column names are validated by the caller"))
        .collect();
    let mut rows = Vec::with_capacity(sweep.len());
    for &s in sweep {
        let mut row = vec![s];
        for &(rx, a) in &pairs {
            row.push(bound_at_snr(rx, a, s)?.value);
        }
        rows.push(row);
    }
    let mut names = vec!["s".to_owned()];
    names.extend(columns.iter().map(|c| c.to_string()));
    Ok(BoundsTable {
        columns: names,
        rows,
    })
}

impl BoundsTable {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Bound exponent of `receiver` per unit `s`.
pub fn exponent_per_s(receiver: ReceiverKind, alphabet: AlphabetKind) -> Option<f64> {
    let per_eta = alphabet.distance_per_eta()?;
    bound_at_snr(receiver, alphabet, 1.0)
        .ok()
        .map(|b| b.exponent * per_eta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub name: String,
    pub config: ExperimentConfig,
    pub curve: BerCurve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub experiment: String,
    pub receiver: ReceiverKind,
    pub alphabet: AlphabetKind,
    /// Sweep points with at least one error, the ones the fit uses.
    pub points_fitted: usize,
    pub fitted_exponent: Option<f64>,
    pub bound_exponent: Option<f64>,
    pub classical_exponent: Option<f64>,
    /// Fitted exponent over the classical (heterodyne) bound exponent.
    pub ratio_vs_classical: Option<f64>,
    pub gain_db: Option<f64>,
}

pub fn summarize(results: &[ExperimentResult]) -> Vec<SummaryRow> {
    results
        .iter()
        .map(|r| {
            let fitted = fit_error_exponent(&r.curve, 0.0).ok();
            let classical = exponent_per_s(ReceiverKind::Heterodyne, r.curve.alphabet);
            let ratio = match (fitted, classical) {
                (Some(f), Some(c)) => Some(f / c),
                _ => None,
            };
            SummaryRow {
                experiment: r.name.clone(),
                receiver: r.curve.receiver,
                alphabet: r.curve.alphabet,
                points_fitted: r.curve.points.iter().filter(|p| p.errors > 0).count(),
                fitted_exponent: fitted,
                bound_exponent: exponent_per_s(r.curve.receiver, r.curve.alphabet),
                classical_exponent: classical,
                ratio_vs_classical: ratio,
                gain_db: ratio.filter(|&q| q > 0.0).map(|q| 10.0 * q.log10()),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub experiments: Vec<ExperimentResult>,
    pub summary: Vec<SummaryRow>,
}

impl SimulationReport {
    pub fn new(experiments: Vec<ExperimentResult>) -> Self {
        let summary = summarize(&experiments);
        SimulationReport {
            experiments,
            summary,
        }
    }

    pub fn curves_csv(&self) -> String {
        let mut out = String::from(
            "experiment,receiver,alphabet,s,eta,empirical_ber,errors,trials,wilson_ci_low,wilson_ci_high,analytic_bound\n",
        );
        for r in &self.experiments {
            for p in &r.curve.points {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    r.name,
                    r.curve.receiver.name(),
                    r.curve.alphabet.name(),
                    fmt_f64(p.s),
                    fmt_f64(p.eta),
                    fmt_f64(p.empirical_ber),
                    p.errors,
                    p.trials,
                    fmt_f64(p.wilson_ci_low),
                    fmt_f64(p.wilson_ci_high),
                    fmt_f64(p.analytic_bound),
                );
            }
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from(
            "experiment,receiver,alphabet,points_fitted,fitted_exponent,bound_exponent,classical_exponent,ratio_vs_classical,gain_db\n",
        );
        for row in &self.summary {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                row.experiment,
                row.receiver.name(),
                row.alphabet.name(),
                row.points_fitted,
                fmt_opt(row.fitted_exponent),
                fmt_opt(row.bound_exponent),
                fmt_opt(row.classical_exponent),
                fmt_opt(row.ratio_vs_classical),
                fmt_opt(row.gain_db),
            );
        }
        out
    }

    /// Short aligned table for terminals.
    pub fn summary_text(&self) -> String {
        let short = |x: Option<f64>| x.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into());
        let mut out = format!(
            "{:<16} {:<10} {:<5} {:>6} {:>9} {:>9} {:>8} {:>8}\n",
            "experiment", "receiver", "alph", "points", "fitted", "bound", "ratio", "gain_dB"
        );
        for r in &self.summary {
            let _ = writeln!(
                out,
                "{:<16} {:<10} {:<5} {:>6} {:>9} {:>9} {:>8} {:>8}",
                r.experiment,
                r.receiver.name(),
                r.alphabet.name(),
                r.points_fitted,
                short(r.fitted_exponent),
                short(r.bound_exponent),
                short(r.ratio_vs_classical),
                short(r.gain_db),
            );
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudgetReport {
    pub eta: f64,
    pub eta_exceeds_unity: bool,
    pub n_z: f64,
    pub m: u64,
    pub phase_wavenumber: f64,
    pub phase_printed: f64,
    pub phase_conventions_differ: bool,
}

impl LinkBudgetReport {
    pub fn to_csv(&self) -> String {
        format!(
            "quantity,value\neta,{}\neta_exceeds_unity,{}\nn_z,{}\nm,{}\nphase_wavenumber,{}\nphase_printed,{}\nphase_conventions_differ,{}\n",
            fmt_f64(self.eta),
            self.eta_exceeds_unity,
            fmt_f64(self.n_z),
            self.m,
            fmt_f64(self.phase_wavenumber),
            fmt_f64(self.phase_printed),
            self.phase_conventions_differ,
        )
    }
}

pub const DIVIDER_FRACTIONS: [f64; 4] = [1.0, 0.75, 0.5, 0.25];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DividerRow {
    pub fraction: f64,
    pub penalty: f64,
    /// SFG exponent with the divider, over the undivided classical exponent.
    pub sfg_over_classical: f64,
    pub pa_over_classical: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EveReport {
    pub trials: u64,
    pub ber: f64,
    pub wilson_ci_low: f64,
    pub wilson_ci_high: f64,
    /// Same link with the phase known to Eve.
    pub ber_known_phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecurityReport {
    pub exponent_ratio: f64,
    pub divider: Vec<DividerRow>,
    pub eve: Option<EveReport>,
}

impl SecurityReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!("# exponent_ratio = {}\n", fmt_f64(self.exponent_ratio));
        if let Some(e) = &self.eve {
            let _ = writeln!(
                out,
                "# eve_ber = {} ({} trials, 95% CI [{}, {}]); known-phase control {}",
                fmt_f64(e.ber),
                e.trials,
                fmt_f64(e.wilson_ci_low),
                fmt_f64(e.wilson_ci_high),
                fmt_f64(e.ber_known_phase),
            );
        }
        out.push_str("fraction,penalty,sfg_over_classical,pa_over_classical,note\n");
        for r in &self.divider {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt_f64(r.fraction),
                fmt_f64(r.penalty),
                fmt_f64(r.sfg_over_classical),
                fmt_f64(r.pa_over_classical),
                r.note
            );
        }
        out
    }
}

/// Which receiver gains a divider keeping `fraction` of the return cancels.
pub fn divider_note(sfg_ratio: f64, pa_ratio: f64) -> String {
    let negated: Vec<&str> = [("PA", pa_ratio), ("SFG", sfg_ratio)]
        .iter()
        .filter(|(_, r)| *r <= 1.0)
        .map(|(n, _)| *n)
        .collect();
    match negated.as_slice() {
        [] => String::new(),
        [one] => format!("negates {one}-receiver QI gain"),
        _ => "negates PA-receiver and SFG-receiver QI gains".into(),
    }
}
