use std::collections::BTreeMap;
use std::fmt::Write as _;

use bell_core::{AngleSet, CorrelatorReport, Inequality, Setting};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    pub fn from_extension(path: &std::path::Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "txt" => Some(Format::Text),
            _ => None,
        }
    }
}

/// One evaluated scenario, rounded to the requested precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub params: BTreeMap<String, f64>,
    pub settings: AngleSet,
    pub value: f64,
    pub classical_bound: f64,
    pub quantum_bound: f64,
    pub violated: bool,
    /// Sampling statistics; only present for simulations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<BTreeMap<String, f64>>,
}

fn round(x: f64, precision: usize) -> f64 {
    let scale = 10f64.powi(precision as i32);
    // Adding zero turns a rounded -0.0 into 0.0.
    (x * scale).round() / scale + 0.0
}

fn round_setting(s: &Setting, p: usize) -> Setting {
    match s {
        Setting::Phase { alpha } => Setting::Phase {
            alpha: round(*alpha, p),
        },
        Setting::Polar { theta, alpha } => Setting::Polar {
            theta: round(*theta, p),
            alpha: round(*alpha, p),
        },
        Setting::PairPhases { alphas } => Setting::PairPhases {
            alphas: alphas.iter().map(|a| round(*a, p)).collect(),
        },
    }
}

impl Report {
    pub fn new(
        scenario: &str,
        params: &[(&str, f64)],
        report: CorrelatorReport,
        precision: usize,
    ) -> Self {
        let p = precision;
        Self {
            scenario: scenario.to_string(),
            params: params
                .iter()
                .map(|&(k, v)| (k.to_string(), round(v, p)))
                .collect(),
            settings: AngleSet {
                parties: report
                    .settings
                    .parties
                    .iter()
                    .map(|[x, y]| [round_setting(x, p), round_setting(y, p)])
                    .collect(),
            },
            value: round(report.value, p),
            classical_bound: round(report.classical_bound, p),
            quantum_bound: round(report.quantum_bound, p),
            violated: report.violated,
            diagnostics: None,
        }
    }

    pub fn with_diagnostics(mut self, d: &[(&str, f64)], precision: usize) -> Self {
        self.diagnostics = Some(
            d.iter()
                .map(|&(k, v)| (k.to_string(), round(v, precision)))
                .collect(),
        );
        self
    }
}

/// Builds a report from an unrounded value.
pub fn report(
    scenario: &str,
    kind: Inequality,
    params: &[(&str, f64)],
    value: f64,
    settings: AngleSet,
    precision: usize,
) -> Report {
    Report::new(
        scenario,
        params,
        CorrelatorReport::new(kind, value, settings),
        precision,
    )
}

const PARTY: [&str; 4] = ["A", "B", "C", "D"];

fn setting_text(s: &Setting, p: usize) -> String {
    match s {
        Setting::Phase { alpha } => format!("α={alpha:.p$}"),
        Setting::Polar { theta, alpha } => format!("θ={theta:.p$} α={alpha:.p$}"),
        Setting::PairPhases { alphas } => {
            let v: Vec<_> = alphas.iter().map(|a| format!("{a:.p$}")).collect();
            format!("α=[{}]", v.join(" "))
        }
    }
}

fn setting_flat(s: &Setting, p: usize) -> String {
    let v: Vec<f64> = match s {
        Setting::Phase { alpha } => vec![*alpha],
        Setting::Polar { theta, alpha } => vec![*theta, *alpha],
        Setting::PairPhases { alphas } => alphas.clone(),
    };
    v.iter()
        .map(|x| format!("{x:.p$}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Integer-valued parameters (counts, seeds, N) print without decimals.
fn number(v: f64, p: usize) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        format!("{v:.p$}")
    }
}

fn params_text(m: &BTreeMap<String, f64>, p: usize) -> String {
    m.iter()
        .map(|(k, v)| format!("{k}={}", number(*v, p)))
        .collect::<Vec<_>>()
        .join(";")
}

fn render_text(reports: &[Report], p: usize) -> String {
    let mut out = String::new();
    for (k, r) in reports.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        let params = if r.params.is_empty() {
            "-".to_string()
        } else {
            params_text(&r.params, p).replace(';', " ")
        };
        let _ = writeln!(out, "scenario         {}", r.scenario);
        let _ = writeln!(out, "params           {params}");
        for (i, [x, y]) in r.settings.parties.iter().enumerate() {
            let name = PARTY.get(i).copied().unwrap_or("?");
            let _ = writeln!(
                out,
                "settings {name}       {name}: {}  {name}': {}",
                setting_text(x, p),
                setting_text(y, p)
            );
        }
        let _ = writeln!(out, "value            {:.p$}", r.value);
        let _ = writeln!(out, "classical_bound  {:.p$}", r.classical_bound);
        let _ = writeln!(out, "quantum_bound    {:.p$}", r.quantum_bound);
        let _ = writeln!(out, "violated         {}", r.violated);
        if let Some(d) = &r.diagnostics {
            for (key, v) in d {
                let _ = writeln!(out, "{key:<16} {}", number(*v, p));
            }
        }
    }
    out
}

fn render_csv(reports: &[Report], p: usize) -> String {
    let mut out =
        String::from("scenario,params,settings,value,classical_bound,quantum_bound,violated\n");
    for r in reports {
        let settings: Vec<_> = r
            .settings
            .parties
            .iter()
            .flat_map(|pair| pair.iter().map(|s| setting_flat(s, p)))
            .collect();
        let _ = writeln!(
            out,
            "{},{},{},{:.p$},{:.p$},{:.p$},{}",
            r.scenario,
            params_text(&r.params, p),
            settings.join(";"),
            r.value,
            r.classical_bound,
            r.quantum_bound,
            r.violated
        );
    }
    out
}

/// A single report renders as an object in JSON, several as an array.
pub fn render(
    reports: &[Report],
    format: Format,
    precision: usize,
) -> Result<String, serde_json::Error> {
    Ok(match format {
        Format::Text => render_text(reports, precision),
        Format::Csv => render_csv(reports, precision),
        Format::Json => {
            let mut s = match reports {
                [one] => serde_json::to_string_pretty(one)?,
                many => serde_json::to_string_pretty(many)?,
            };
            s.push('\n');
            s
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_clears_negative_zero() {
        assert_eq!(round(-1e-9, 5).to_bits(), 0f64.to_bits());
        assert_eq!(round(2.828427, 5), 2.82843);
    }

    #[test]
    fn extension_inference() {
        assert_eq!(
            Format::from_extension("a/b.JSON".as_ref()),
            Some(Format::Json)
        );
        assert_eq!(Format::from_extension("x.csv".as_ref()), Some(Format::Csv));
        assert_eq!(Format::from_extension("x".as_ref()), None);
    }
}
