//! CSV ingestion of multichannel recordings.
//!
//! Layout: optional `# fs=<rate>` directive and other `#` comments, a header
//! row naming the channels, then one row of numbers per sample.

use std::path::Path;

use crate::error::{Error, Result};
use crate::signal::Signal;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CsvOptions {
    /// Sample rate in Hz; must agree with a `# fs=` directive when both are given.
    pub sample_rate: Option<f64>,
    /// Fail on the first malformed row instead of skipping it.
    pub strict: bool,
}

/// Equal-length channels sharing one sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTable {
    channels: Vec<Signal<f64>>,
    sample_rate: f64,
    source: String,
    rows: usize,
    skipped_lines: Vec<usize>,
    blank_lines: usize,
}

impl ChannelTable {
    pub fn new(channels: Vec<Signal<f64>>, source: impl Into<String>) -> Result<Self> {
        let first = channels
            .first()
            .ok_or_else(|| Error::InvalidInput("a table needs at least one channel".into()))?;
        let (len, fs) = (first.len(), first.sample_rate());
        if channels
            .iter()
            .any(|c| c.len() != len || c.sample_rate() != fs)
        {
            return Err(Error::InvalidInput(
                "channels must share length and sample rate".into(),
            ));
        }
        Ok(Self {
            channels,
            sample_rate: fs,
            source: source.into(),
            rows: len,
            skipped_lines: Vec::new(),
            blank_lines: 0,
        })
    }

    pub fn channels(&self) -> &[Signal<f64>] {
        &self.channels
    }

    pub fn into_channels(self) -> Vec<Signal<f64>> {
        self.channels
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Number of data rows kept.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// 1-based line numbers of malformed rows that were skipped.
    pub fn skipped_lines(&self) -> &[usize] {
        &self.skipped_lines
    }

    pub fn blank_lines(&self) -> usize {
        self.blank_lines
    }
}

fn parse_directive(line: &str) -> Option<&str> {
    let body = line.trim_start().strip_prefix('#')?.trim();
    let (key, value) = body.split_once('=')?;
    key.trim().eq_ignore_ascii_case("fs").then(|| value.trim())
}

/// 1-based line of a record starting at `byte`; a record's reported start
/// may include blank lines preceding it.
fn line_of_byte(text: &str, byte: usize) -> usize {
    let bytes = text.as_bytes();
    let mut start = byte.min(bytes.len());
    while start < bytes.len() && matches!(bytes[start], b'\n' | b'\r') {
        start += 1;
    }
    1 + bytes[..start].iter().filter(|&&b| b == b'\n').count()
}

pub fn read_csv(path: &Path, opts: &CsvOptions) -> Result<ChannelTable> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text, &path.display().to_string(), opts)
}

pub fn parse_csv(text: &str, source: &str, opts: &CsvOptions) -> Result<ChannelTable> {
    let ingest = |line: usize, message: String| Error::Ingest {
        source_name: source.to_string(),
        line,
        message,
    };

    let mut directive: Option<(usize, f64)> = None;
    let mut blank_lines = 0;
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            blank_lines += 1;
        } else if let Some(value) = parse_directive(line) {
            let fs: f64 = value
                .parse()
                .map_err(|_| ingest(k + 1, format!("bad sample-rate directive '{value}'")))?;
            directive = Some((k + 1, fs));
        }
    }
    let sample_rate = match (opts.sample_rate, directive) {
        (Some(flag), Some((line, fs))) if flag != fs => {
            return Err(ingest(
                line,
                format!("directive fs={fs} disagrees with requested sample rate {flag}"),
            ))
        }
        (Some(flag), _) => flag,
        (None, Some((_, fs))) => fs,
        (None, None) => {
            return Err(Error::Usage(format!(
                "{source}: sample rate unknown; pass --fs or add a '# fs=<rate>' line"
            )))
        }
    };
    if !(sample_rate.is_finite() && sample_rate > 0.0) {
        return Err(ingest(
            directive.map_or(0, |d| d.0),
            format!("bad sample rate {sample_rate}"),
        ));
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let names: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if names.is_empty() || names.iter().all(String::is_empty) {
        return Err(ingest(1, "missing header row".into()));
    }
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    let mut skipped_lines = Vec::new();
    for record in reader.records() {
        let record = record?;
        // the reader's own line counter ignores blank lines
        let line = record
            .position()
            .map_or(0, |p| line_of_byte(text, p.byte() as usize));
        let parsed: std::result::Result<Vec<f64>, String> = if record.len() != names.len() {
            Err(format!(
                "expected {} fields, found {}",
                names.len(),
                record.len()
            ))
        } else {
            record
                .iter()
                .map(|field| match field.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(format!("'{field}' is not a finite number")),
                })
                .collect()
        };
        match parsed {
            Ok(values) => {
                for (col, v) in columns.iter_mut().zip(values) {
                    col.push(v);
                }
            }
            Err(message) if opts.strict => return Err(ingest(line, message)),
            Err(_) => skipped_lines.push(line),
        }
    }
    if columns[0].is_empty() {
        return Err(ingest(0, "no parsable numeric rows".into()));
    }
    let rows = columns[0].len();
    let channels = names
        .into_iter()
        .zip(columns)
        .map(|(name, col)| Ok(Signal::new(col, sample_rate)?.with_label(name)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChannelTable {
        channels,
        sample_rate,
        source: source.to_string(),
        rows,
        skipped_lines,
        blank_lines,
    })
}

/// Serializes equal-length channels in the layout [`parse_csv`] reads.
pub fn write_signals_csv(channels: &[Signal<f64>]) -> Result<Vec<u8>> {
    let table = ChannelTable::new(channels.to_vec(), "")?;
    let mut out = format!("# fs={}\n", table.sample_rate()).into_bytes();
    let mut writer = csv::Writer::from_writer(&mut out);
    let names: Vec<String> = channels
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if c.label().is_empty() {
                format!("ch{k}")
            } else {
                c.label().to_string()
            }
        })
        .collect();
    writer.write_record(&names)?;
    for row in 0..table.rows() {
        writer.write_record(channels.iter().map(|c| c.samples()[row].to_string()))?;
    }
    writer.flush()?;
    drop(writer);
    Ok(out)
}
