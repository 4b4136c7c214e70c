//! Report builders behind each subcommand. Channels are processed in
//! parallel and the report is sorted by channel name afterwards.

use rayon::prelude::*;
use serde::Deserialize;

use geosym::kuramoto::DEFAULT_DT;
use geosym::report::{ChannelReport, HistogramReport, NetworkReport, Parameters, TransitionReport};
use geosym::{
    count_transitions, integrate, locate_min, peaks_troughs, ratio_series, symbolize,
    synchronizability, windowed_measure, AnalysisReport, ChannelTable, ConfigurationHistogram,
    Coupling, Error, MeasureKind, MeasureOptions64, OscillatorNetwork64, Result, SignConvention,
    Signal64, TransitionMatrix, WindowSpec, WindowedSeries,
};

/// Windowing and measure settings shared by the analysis commands.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub options: MeasureOptions64,
    pub window_s: f64,
    pub hop_s: f64,
}

impl Settings {
    pub fn window(&self, sample_rate: f64) -> Result<WindowSpec> {
        WindowSpec::from_seconds(self.window_s, self.hop_s, sample_rate)
            .map_err(|e| Error::Usage(e.to_string()))
    }

    fn parameters(&self, sample_rate: f64, windowed: bool) -> Result<Parameters> {
        let mut p = Parameters {
            sample_rate: Some(sample_rate),
            tau: self.options.tau,
            eps_power: self.options.eps_power,
            product: self.options.product,
            tie_policy: self.options.ties,
            ..Parameters::default()
        };
        if windowed {
            let w = self.window(sample_rate)?;
            p.window_s = Some(self.window_s);
            p.hop_s = Some(self.hop_s);
            p.window_samples = Some(w.width());
            p.hop_samples = Some(w.hop());
        }
        Ok(p)
    }
}

fn per_channel<F>(table: &ChannelTable, f: F) -> Result<Vec<ChannelReport>>
where
    F: Fn(&Signal64) -> Result<ChannelReport> + Sync,
{
    let mut channels = table
        .channels()
        .par_iter()
        .map(|c| {
            f(c).map_err(|e| match e {
                Error::EmptyInput(m) => {
                    Error::InvalidInput(format!("channel '{}': {m}", c.label()))
                }
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    channels.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(channels)
}

fn base_report(
    command: &str,
    table: &ChannelTable,
    digest: Option<String>,
    params: Parameters,
) -> AnalysisReport {
    let mut report = AnalysisReport::new(command, digest, params);
    report.skipped_lines = table.skipped_lines().to_vec();
    report
}

fn channel(signal: &Signal64) -> ChannelReport {
    ChannelReport {
        name: signal.label().to_string(),
        samples: signal.len(),
        ..Default::default()
    }
}

pub fn symbolize_report(
    table: &ChannelTable,
    digest: Option<String>,
    settings: &Settings,
) -> Result<AnalysisReport> {
    let mut report = base_report(
        "symbolize",
        table,
        digest,
        settings.parameters(table.sample_rate(), false)?,
    );
    report.channels = per_channel(table, |signal| {
        let symbols = symbolize(signal.samples(), settings.options.tau)?;
        let pt = peaks_troughs(&symbols);
        Ok(ChannelReport {
            histogram: Some(HistogramReport::from(
                &ConfigurationHistogram::from_symbols(&symbols),
            )),
            peaks: Some(pt.peaks),
            troughs: Some(pt.troughs),
            symbols: Some(symbols),
            ..channel(signal)
        })
    })?;
    Ok(report)
}

pub fn transitions_report(
    table: &ChannelTable,
    digest: Option<String>,
    settings: &Settings,
    windowed: bool,
) -> Result<AnalysisReport> {
    let params = settings.parameters(table.sample_rate(), windowed)?;
    let mut report = base_report("transitions", table, digest, params);
    report.channels = per_channel(table, |signal| {
        let symbols = symbolize(signal.samples(), settings.options.tau)?;
        let whole = count_transitions(&symbols)?;
        let mut window_transitions = Vec::new();
        if windowed {
            for range in settings.window(signal.sample_rate())?.ranges(signal.len()) {
                // a window of w samples holds w - 2 symbols, hence w - 3 transitions
                let m = if range.len() >= 4 {
                    count_transitions(&symbols[range.start..range.end - 2])?
                } else {
                    TransitionMatrix::default()
                };
                window_transitions
                    .push(TransitionReport::new(m, Some(signal.time_of(range.start))));
            }
        }
        Ok(ChannelReport {
            transitions: Some(TransitionReport::new(whole, None)),
            window_transitions,
            ..channel(signal)
        })
    })?;
    Ok(report)
}

pub fn measure_report(
    table: &ChannelTable,
    digest: Option<String>,
    settings: &Settings,
    measures: &[MeasureKind],
) -> Result<AnalysisReport> {
    if measures.contains(&MeasureKind::Synchronizability) {
        return Err(Error::Usage(
            "synchronizability needs a coupling; use the simulate command".into(),
        ));
    }
    let mut report = base_report(
        "measure",
        table,
        digest,
        settings.parameters(table.sample_rate(), true)?,
    );
    report.channels = per_channel(table, |signal| {
        let window = settings.window(signal.sample_rate())?;
        let series = measures
            .iter()
            .map(|&kind| windowed_measure(signal, window, kind, &settings.options))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChannelReport {
            too_short: window.count(signal.len()) == 0,
            series,
            ..channel(signal)
        })
    })?;
    Ok(report)
}

/// Windowed E, P and E/P with the location of the smallest defined ratio.
pub fn ratio_report(
    table: &ChannelTable,
    digest: Option<String>,
    settings: &Settings,
) -> Result<AnalysisReport> {
    let mut report = base_report(
        "ratio",
        table,
        digest,
        settings.parameters(table.sample_rate(), true)?,
    );
    report.channels = per_channel(table, |signal| {
        let window = settings.window(signal.sample_rate())?;
        let analysis = ratio_series(signal, window, &settings.options)?;
        let minimum = match locate_min(&analysis.ratio) {
            Ok(m) => Some(m),
            Err(Error::NoDefinedValue) => None,
            Err(e) => return Err(e),
        };
        Ok(ChannelReport {
            too_short: analysis.ratio.is_empty(),
            minimum,
            series: vec![analysis.entropy, analysis.power, analysis.ratio],
            ..channel(signal)
        })
    })?;
    Ok(report)
}

/// Network description accepted by `simulate`: either explicit oscillator
/// fields or a seeded draw of frequencies and phases.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NetworkSpec {
    Explicit(OscillatorNetwork64),
    Seeded(SeededNetwork),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeededNetwork {
    pub oscillators: usize,
    pub coupling: Coupling<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "unit")]
    pub frequency_sigma: f64,
    #[serde(default)]
    pub sign_convention: SignConvention,
}

fn unit() -> f64 {
    1.0
}

impl NetworkSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(format!("network spec: {e}")))
    }

    /// Builds the network; `seed` and `convention` override the document.
    pub fn build(
        &self,
        seed: Option<u64>,
        convention: Option<SignConvention>,
    ) -> Result<(OscillatorNetwork64, Option<u64>)> {
        let (net, seed) = match self {
            // deserialization alone skips the network's invariants
            NetworkSpec::Explicit(net) => (
                OscillatorNetwork64::new(
                    net.natural_frequencies().to_vec(),
                    net.coupling().clone(),
                    net.initial_phases().to_vec(),
                    net.sign_convention(),
                )?,
                None,
            ),
            NetworkSpec::Seeded(s) => {
                let seed = seed.unwrap_or(s.seed);
                let net = OscillatorNetwork64::seeded(
                    s.oscillators,
                    s.coupling.clone(),
                    seed,
                    s.frequency_sigma,
                    s.sign_convention,
                )?;
                (net, Some(seed))
            }
        };
        let net = match convention {
            Some(c) => net.with_sign_convention(c),
            None => net,
        };
        Ok((net, seed))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimulationSettings {
    pub dt: f64,
    pub steps: usize,
    pub seed: Option<u64>,
    pub convention: Option<SignConvention>,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            steps: 5000,
            seed: None,
            convention: None,
        }
    }
}

pub fn simulate_report(
    spec: &NetworkSpec,
    digest: Option<String>,
    settings: &Settings,
    sim: &SimulationSettings,
) -> Result<AnalysisReport> {
    if !(sim.dt.is_finite() && sim.dt > 0.0) {
        return Err(Error::Usage(format!(
            "--dt must be positive, got {}",
            sim.dt
        )));
    }
    let (net, seed) = spec.build(sim.seed, sim.convention)?;
    let trajectory = integrate(&net, sim.dt, sim.steps)?;
    let fs = 1.0 / sim.dt;
    let mut params = settings.parameters(fs, true)?;
    params.sign_convention = net.sign_convention();
    params.seed = seed;
    params.dt = Some(sim.dt);
    params.steps = Some(sim.steps);
    let window = settings.window(fs)?;

    let n = net.len();
    let width = n.saturating_sub(1).to_string().len();
    let mut channels = (0..n)
        .into_par_iter()
        .map(|i| {
            let observable = trajectory.observable(i)?;
            let marginal = net.marginal_coupling(i)?;
            let series = if marginal > 0.0 {
                synchronizability(&observable, marginal, window, &settings.options)?
            } else {
                // no coupling: S_i is undefined everywhere
                let starts = ratio_series(&observable, window, &settings.options)?.ratio;
                WindowedSeries::new(
                    MeasureKind::Synchronizability,
                    starts.window_starts().to_vec(),
                    vec![None; starts.len()],
                )
            };
            Ok(ChannelReport {
                name: format!("osc{i:0width$}"),
                samples: observable.len(),
                marginal_coupling: Some(marginal),
                phases: Some(trajectory.phase_series(i)),
                too_short: series.is_empty(),
                series: vec![series],
                observable: Some(observable.into_samples()),
                ..Default::default()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    channels.sort_by(|a, b| a.name.cmp(&b.name));

    let order_parameter = trajectory.order_parameter_series();
    let tail = &order_parameter[order_parameter.len() - (order_parameter.len() / 5).max(1)..];
    let network = NetworkReport {
        oscillators: n,
        times: (0..trajectory.len()).map(|k| trajectory.time(k)).collect(),
        tail_mean_order_parameter: tail.iter().sum::<f64>() / tail.len() as f64,
        order_parameter,
    };

    let mut report = AnalysisReport::new("simulate", digest, params);
    report.channels = channels;
    report.network = Some(network);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> Settings {
        Settings {
            options: MeasureOptions64::default(),
            window_s: 1.0,
            hop_s: 1.0,
        }
    }

    fn table() -> ChannelTable {
        let a = Signal64::new(vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0], 4.0)
            .unwrap()
            .with_label("b");
        let b = Signal64::new(vec![5.0; 8], 4.0).unwrap().with_label("a");
        ChannelTable::new(vec![a, b], "mem").unwrap()
    }

    #[test]
    fn ratio_report_records_parameters() {
        let r = ratio_report(&table(), None, &settings()).unwrap();
        assert_eq!(r.parameters.window_samples, Some(4));
        assert_eq!(r.parameters.hop_samples, Some(4));
        assert_eq!(r.channels[0].name, "a");
        // the constant channel has no defined ratio, hence no minimum
        assert!(r.channels[0].minimum.is_none());
        let min = r.channels[1].minimum.unwrap();
        assert_eq!((min.index, min.value), (0, 0.5));
    }

    #[test]
    fn seeded_spec_parses_with_defaults() {
        let spec =
            NetworkSpec::from_json(r#"{"oscillators": 3, "coupling": {"global": 1.5}}"#).unwrap();
        let (net, seed) = spec.build(None, None).unwrap();
        assert_eq!(seed, Some(0));
        assert_eq!(net.len(), 3);
        assert_eq!(net.sign_convention(), SignConvention::Standard);
        assert!(NetworkSpec::from_json(r#"{"oscillators": 3}"#).is_err());
        let bad = NetworkSpec::from_json(
            r#"{"natural_frequencies": [1.0], "coupling": {"global": 1.0}, "initial_phases": [0.0, 1.0]}"#,
        )
        .unwrap();
        assert!(bad.build(None, None).is_err());
    }

    #[test]
    fn bad_window_is_a_usage_error() {
        let s = Settings {
            window_s: 0.25,
            ..settings()
        };
        assert!(ratio_report(&table(), None, &s).unwrap_err().is_usage());
    }
}
