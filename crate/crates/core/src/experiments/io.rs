//! Dataset CSV (`y,x1,...,xp`), sidecar spec JSON and report JSON.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::datagen::ProblemSpec;
use crate::error::{Error, Result};
use crate::types::Dataset;

/// 17 significant digits, enough to round-trip any double.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_dataset_to<W: Write>(d: &Dataset, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["y".to_string()];
    header.extend((1..=d.p()).map(|j| format!("x{j}")));
    w.write_record(&header)?;
    let mut record = Vec::with_capacity(d.p() + 1);
    for i in 0..d.m() {
        record.clear();
        record.push(if d.label(i) > 0.0 { "1".to_string() } else { "-1".to_string() });
        record.extend(d.row(i).iter().map(|&v| format_f64(v)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_dataset_from<R: Read>(input: R) -> Result<Dataset> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.get(0) != Some("y") {
        return Err(Error::Format("first column must be `y`".into()));
    }
    for (j, name) in header.iter().enumerate().skip(1) {
        if name != format!("x{j}") {
            return Err(Error::Format(format!("column {j} must be `x{j}`, found `{name}`")));
        }
    }
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("row {line}: `{s}`: {e}")))
        };
        labels.push(parse(&rec[0])?);
        rows.push(rec.iter().skip(1).map(parse).collect::<Result<Vec<_>>>()?);
    }
    Dataset::new(labels, rows)
}

pub fn write_dataset(d: &Dataset, path: &Path) -> Result<()> {
    write_dataset_to(d, BufWriter::new(File::create(path)?))
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    read_dataset_from(File::open(path)?)
}

/// Everything needed to regenerate a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub spec: ProblemSpec,
    pub m: usize,
    pub seed: u64,
}

impl SpecFile {
    pub fn generate(&self) -> Result<Dataset> {
        self.spec.generate(self.m, self.seed)
    }
}

/// `data.csv` -> `data.spec.json`.
pub fn spec_path(dataset: &Path) -> PathBuf {
    dataset.with_extension("spec.json")
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(File::open(path)?)?)
}

/// Serializes rows with a header; an empty slice still gets the header.
pub fn write_csv_to<T: Serialize, W: Write>(rows: &[T], header: &[&str], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv<T: Serialize>(rows: &[T], header: &[&str], path: &Path) -> Result<()> {
    write_csv_to(rows, header, BufWriter::new(File::create(path)?))
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(File::open(path)?);
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dataset_round_trip_is_exact() {
        let d = Dataset::new(
            vec![1.0, -1.0],
            vec![vec![0.1 + 0.2, -1e-300], vec![std::f64::consts::PI, 12345.678]],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_dataset_to(&d, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("y,x1,x2\n1,"));
        assert_eq!(read_dataset_from(&buf[..]).unwrap(), d);
    }

    #[test]
    fn bad_header_and_labels_rejected() {
        assert!(read_dataset_from("label,x1\n1,2\n".as_bytes()).is_err());
        assert!(read_dataset_from("y,x2\n1,2\n".as_bytes()).is_err());
        assert!(read_dataset_from("y,x1\n0,2\n".as_bytes()).is_err());
        assert!(read_dataset_from("y,x1\n1,abc\n".as_bytes()).is_err());
    }

    #[test]
    fn spec_path_swaps_extension() {
        assert_eq!(spec_path(Path::new("out/d.csv")), PathBuf::from("out/d.spec.json"));
    }
}
