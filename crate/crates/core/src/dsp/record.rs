use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{OmaError, Result};

/// Equally sampled multichannel time history (accelerations or forces).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiChannelRecord {
    sample_rate: f64,
    labels: Vec<String>,
    data: Vec<Vec<f64>>,
}

impl MultiChannelRecord {
    pub fn new(sample_rate: f64, labels: Vec<String>, data: Vec<Vec<f64>>) -> Result<Self> {
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return Err(OmaError::InvalidInput(format!("sample rate must be positive, got {sample_rate}")));
        }
        if data.is_empty() {
            return Err(OmaError::InvalidInput("record has no channels".into()));
        }
        if labels.len() != data.len() {
            return Err(OmaError::InvalidInput(format!(
                "{} labels for {} channels",
                labels.len(),
                data.len()
            )));
        }
        let n = data[0].len();
        if n < 2 {
            return Err(OmaError::InvalidInput("channels need at least two samples".into()));
        }
        if data.iter().any(|c| c.len() != n) {
            return Err(OmaError::InvalidInput("channels have unequal lengths".into()));
        }
        Ok(MultiChannelRecord {
            sample_rate,
            labels,
            data,
        })
    }

    /// Channels labelled `ch0, ch1, ...`.
    pub fn unlabeled(sample_rate: f64, data: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..data.len()).map(|i| format!("ch{i}")).collect();
        Self::new(sample_rate, labels, data)
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.sample_rate
    }

    pub fn n_channels(&self) -> usize {
        self.data.len()
    }

    pub fn n_samples(&self) -> usize {
        self.data[0].len()
    }

    pub fn duration(&self) -> f64 {
        (self.n_samples() - 1) as f64 / self.sample_rate
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.data
    }

    pub fn channel(&self, index: usize) -> &[f64] {
        &self.data[index]
    }

    pub fn into_channels(self) -> Vec<Vec<f64>> {
        self.data
    }

    /// Copy with every sample multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> MultiChannelRecord {
        MultiChannelRecord {
            sample_rate: self.sample_rate,
            labels: self.labels.clone(),
            data: self
                .data
                .iter()
                .map(|c| c.iter().map(|x| x * factor).collect())
                .collect(),
        }
    }

    /// Keep the channels at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Result<MultiChannelRecord> {
        if let Some(bad) = indices.iter().find(|&&i| i >= self.n_channels()) {
            return Err(OmaError::InvalidInput(format!("channel {bad} out of range")));
        }
        MultiChannelRecord::new(
            self.sample_rate,
            indices.iter().map(|&i| self.labels[i].clone()).collect(),
            indices.iter().map(|&i| self.data[i].clone()).collect(),
        )
    }

    /// CSV with header `time,<label>...` and one row per sample.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = BufWriter::new(writer);
        write!(w, "time")?;
        for label in &self.labels {
            write!(w, ",{label}")?;
        }
        writeln!(w)?;
        for i in 0..self.n_samples() {
            write!(w, "{}", i as f64 / self.sample_rate)?;
            for channel in &self.data {
                write!(w, ",{}", channel[i])?;
            }
            writeln!(w)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(File::create(path)?)
    }

    /// Parse the CSV layout written by [`write_csv`](Self::write_csv). The
    /// sample rate is recovered from the first and last time stamps.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() < 2 || headers.get(0).map(str::trim) != Some("time") {
            return Err(OmaError::Format("expected header 'time,<label>...'".into()));
        }
        let labels: Vec<String> = headers.iter().skip(1).map(|s| s.trim().to_string()).collect();
        let mut time = Vec::new();
        let mut data = vec![Vec::new(); labels.len()];
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != labels.len() + 1 {
                return Err(OmaError::Format(format!("row {} has {} fields", row + 2, record.len())));
            }
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| OmaError::Format(format!("row {}: '{s}': {e}", row + 2)))
            };
            time.push(parse(&record[0])?);
            for (c, field) in record.iter().skip(1).enumerate() {
                data[c].push(parse(field)?);
            }
        }
        if time.len() < 2 {
            return Err(OmaError::Format("record needs at least two samples".into()));
        }
        let span = time[time.len() - 1] - time[0];
        if !(span > 0.0) {
            return Err(OmaError::Format("time stamps are not increasing".into()));
        }
        let mut rate = (time.len() - 1) as f64 / span;
        if (rate - rate.round()).abs() < 1e-6 * rate {
            rate = rate.round();
        }
        MultiChannelRecord::new(rate, labels, data)
    }

    pub fn read_csv_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(BufReader::new(File::open(path)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn invariants_enforced() {
        assert!(MultiChannelRecord::unlabeled(0.0, vec![vec![0.0; 4]]).is_err());
        assert!(MultiChannelRecord::unlabeled(10.0, vec![]).is_err());
        assert!(MultiChannelRecord::unlabeled(10.0, vec![vec![0.0]]).is_err());
        assert!(MultiChannelRecord::unlabeled(10.0, vec![vec![0.0; 3], vec![0.0; 4]]).is_err());
        assert!(MultiChannelRecord::new(10.0, vec!["a".into()], vec![vec![0.0; 3]; 2]).is_err());
    }

    #[test]
    fn csv_header_layout() {
        let rec = MultiChannelRecord::new(4.0, vec!["n2".into(), "n3".into()], vec![vec![1.0, 2.0], vec![0.5, -0.25]])
            .unwrap();
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "time,n2,n3\n0,1,0.5\n0.25,2,-0.25\n");
    }

    #[test]
    fn malformed_csv_rejected() {
        assert!(MultiChannelRecord::read_csv("t,a\n0,1\n1,2\n".as_bytes()).is_err());
        assert!(MultiChannelRecord::read_csv("time,a\n0,1\n1,x\n".as_bytes()).is_err());
        assert!(MultiChannelRecord::read_csv("time,a\n0,1\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_lossless(
            values in prop::collection::vec(prop::num::f64::NORMAL, 6..60),
            rate in prop::sample::select(vec![1.0, 100.0, 1000.0, 10_000.0, 256.0]),
        ) {
            let n = values.len() / 2;
            let data = vec![values[..n].to_vec(), values[n..2 * n].to_vec()];
            let rec = MultiChannelRecord::unlabeled(rate, data).unwrap();
            let mut buf = Vec::new();
            rec.write_csv(&mut buf).unwrap();
            let back = MultiChannelRecord::read_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(back, rec);
        }
    }
}
