//! Analysis report schema and its JSON / CSV serializations.
//!
//! JSON output follows struct field order and sorted maps, so identical
//! reports always serialize to identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::kuramoto::SignConvention;
use crate::measures::{ConfigurationHistogram, MinLocation, Product, TiePolicy, WindowedSeries};
use crate::symbolizer::{Configuration, SymbolString};
use crate::transitions::{block_views, TransitionMatrix};

pub const TOOL_NAME: &str = "geosym";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `sha256:<hex>` of the given bytes.
pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Everything needed to rerun an analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub sample_rate: Option<f64>,
    pub tau: f64,
    pub window_s: Option<f64>,
    pub hop_s: Option<f64>,
    pub window_samples: Option<usize>,
    pub hop_samples: Option<usize>,
    pub eps_power: f64,
    pub product: Product,
    pub tie_policy: TiePolicy,
    pub sign_convention: SignConvention,
    pub seed: Option<u64>,
    pub dt: Option<f64>,
    pub steps: Option<usize>,
}

impl Default for Parameters {
    fn default() -> Self {
        Self {
            sample_rate: None,
            tau: 0.0,
            window_s: None,
            hop_s: None,
            window_samples: None,
            hop_samples: None,
            eps_power: crate::measures::DEFAULT_EPS_POWER,
            product: Product::Left,
            tie_policy: TiePolicy::Stable,
            sign_convention: SignConvention::Standard,
            seed: None,
            dt: None,
            steps: None,
        }
    }
}

/// Configuration counts keyed by id, all thirteen present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramReport {
    pub total: u64,
    pub counts: BTreeMap<u8, u64>,
    pub semantic_entropy: f64,
}

impl From<&ConfigurationHistogram> for HistogramReport {
    fn from(h: &ConfigurationHistogram) -> Self {
        Self {
            total: h.total(),
            counts: Configuration::ALL
                .iter()
                .map(|&c| (c.id(), h.count(c)))
                .collect(),
            semantic_entropy: h.entropy(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSums {
    pub abundant_to_abundant: f64,
    pub abundant_to_sparse: f64,
    pub sparse_to_abundant: f64,
    pub sparse_to_sparse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionReport {
    /// Window start in seconds; absent for a whole-channel matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_s: Option<f64>,
    pub matrix: TransitionMatrix,
    pub block_sums: BlockSums,
}

impl TransitionReport {
    pub fn new(matrix: TransitionMatrix, start_s: Option<f64>) -> Self {
        let [aa, asp, sa, ss] = block_views(&matrix).sums();
        Self {
            start_s,
            matrix,
            block_sums: BlockSums {
                abundant_to_abundant: aa,
                abundant_to_sparse: asp,
                sparse_to_abundant: sa,
                sparse_to_sparse: ss,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ChannelReport {
    pub name: String,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<SymbolString>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peaks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub troughs: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<HistogramReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitions: Option<TransitionReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub window_transitions: Vec<TransitionReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<WindowedSeries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimum: Option<MinLocation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginal_coupling: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<Vec<f64>>,
    /// Set when the channel is shorter than one window.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub too_short: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkReport {
    pub oscillators: usize,
    pub times: Vec<f64>,
    pub order_parameter: Vec<f64>,
    /// Mean order parameter over the last fifth of the run.
    pub tail_mean_order_parameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input_digest: Option<String>,
    pub parameters: Parameters,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped_lines: Vec<usize>,
    pub channels: Vec<ChannelReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkReport>,
}

impl AnalysisReport {
    pub fn new(
        command: impl Into<String>,
        input_digest: Option<String>,
        parameters: Parameters,
    ) -> Self {
        Self {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            command: command.into(),
            input_digest,
            parameters,
            skipped_lines: Vec::new(),
            channels: Vec::new(),
            network: None,
        }
    }

    /// Orders channels by name so concurrent assembly is order-independent.
    pub fn sort_channels(&mut self) {
        self.channels.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        Ok(serde_json::from_slice(bytes)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Usage(format!(
                "unsupported format '{other}' (json|csv)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportOutput {
    Json(Vec<u8>),
    /// `(file name, contents)` pairs.
    Csv(Vec<(String, Vec<u8>)>),
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn series_csv(series: &WindowedSeries) -> Vec<u8> {
    let mut out = String::from("window_start_s,value,defined\n");
    for (start, value) in series.window_starts().iter().zip(series.values()) {
        match value {
            Some(v) => writeln!(out, "{start},{v},true"),
            None => writeln!(out, "{start},,false"),
        }
        .expect("writing to a String");
    }
    out.into_bytes()
}

fn histogram_csv(h: &HistogramReport) -> Vec<u8> {
    let mut out = String::from("configuration,count,probability\n");
    for (id, count) in &h.counts {
        let p = if h.total == 0 {
            0.0
        } else {
            *count as f64 / h.total as f64
        };
        writeln!(out, "{id},{count},{p}").expect("writing to a String");
    }
    out.into_bytes()
}

fn matrix_csv(m: &TransitionMatrix) -> Vec<u8> {
    let mut out = String::from("from");
    for to in 1..=13 {
        write!(out, ",{to}").expect("writing to a String");
    }
    out.push('\n');
    for (i, row) in m.frequencies().iter().enumerate() {
        write!(out, "{}", i + 1).expect("writing to a String");
        for v in row {
            write!(out, ",{v}").expect("writing to a String");
        }
        out.push('\n');
    }
    out.into_bytes()
}

/// Serializes a report. CSV yields one file per windowed series plus
/// histogram, transition and order-parameter tables where present.
pub fn write_report(report: &AnalysisReport, format: Format) -> Result<ReportOutput> {
    match format {
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(report)?;
            bytes.push(b'\n');
            Ok(ReportOutput::Json(bytes))
        }
        Format::Csv => {
            let mut files = Vec::new();
            for ch in &report.channels {
                let stem = file_stem(&ch.name);
                if let Some(h) = &ch.histogram {
                    files.push((format!("{stem}_histogram.csv"), histogram_csv(h)));
                }
                if let Some(t) = &ch.transitions {
                    files.push((format!("{stem}_transitions.csv"), matrix_csv(&t.matrix)));
                }
                for s in &ch.series {
                    files.push((format!("{stem}_{}.csv", s.measure()), series_csv(s)));
                }
            }
            if let Some(net) = &report.network {
                let mut out = String::from("time_s,order_parameter\n");
                for (t, r) in net.times.iter().zip(&net.order_parameter) {
                    writeln!(out, "{t},{r}").expect("writing to a String");
                }
                files.push(("order_parameter.csv".to_string(), out.into_bytes()));
            }
            Ok(ReportOutput::Csv(files))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::MeasureKind;
    use crate::symbolizer::symbolize;
    use crate::transitions::count_transitions;

    fn sample_report() -> AnalysisReport {
        let symbols = symbolize(&[0.0, 1.0, 0.0, 1.0, 0.0, 0.0], 0.0).unwrap();
        let hist = ConfigurationHistogram::from_symbols(&symbols);
        let mut r = AnalysisReport::new("ratio", Some(digest(b"abc")), Parameters::default());
        r.channels.push(ChannelReport {
            name: "c3/ref".into(),
            samples: 6,
            histogram: Some((&hist).into()),
            transitions: Some(TransitionReport::new(
                count_transitions(&symbols).unwrap(),
                None,
            )),
            series: vec![WindowedSeries::new(
                MeasureKind::EpRatio,
                vec![0.0, 2.0],
                vec![Some(0.1 + 0.2), None],
            )],
            symbols: Some(symbols),
            ..Default::default()
        });
        r
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest(b"abc"),
            "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn json_is_stable_and_round_trips() {
        let r = sample_report();
        let ReportOutput::Json(a) = write_report(&r, Format::Json).unwrap() else {
            panic!()
        };
        let ReportOutput::Json(b) = write_report(&r.clone(), Format::Json).unwrap() else {
            panic!()
        };
        assert_eq!(a, b);
        assert_eq!(AnalysisReport::from_json(&a).unwrap(), r);
        let text = String::from_utf8(a).unwrap();
        assert!(text.find("\"tool\"").unwrap() < text.find("\"parameters\"").unwrap());
        assert!(text.contains("\"undefined_windows\": [\n"));
    }

    #[test]
    fn csv_series_schema() {
        let ReportOutput::Csv(files) = write_report(&sample_report(), Format::Csv).unwrap() else {
            panic!()
        };
        let names: Vec<&str> = files.iter().map(|f| f.0.as_str()).collect();
        assert_eq!(
            names,
            vec![
                "c3_ref_histogram.csv",
                "c3_ref_transitions.csv",
                "c3_ref_ep_ratio.csv"
            ]
        );
        let series = String::from_utf8(files[2].1.clone()).unwrap();
        assert_eq!(
            series,
            "window_start_s,value,defined\n0,0.30000000000000004,true\n2,,false\n"
        );
    }

    #[test]
    fn format_parsing() {
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!(matches!("xml".parse::<Format>(), Err(Error::Usage(_))));
    }
}
