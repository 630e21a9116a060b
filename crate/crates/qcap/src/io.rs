//! Channel files and report output.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use qcap_core::channel::QuantumChannel;
use qcap_core::ComplexMatrix;
use serde::{Deserialize, Serialize};

/// Version stamped into every JSON document this crate writes.
pub const SCHEMA_VERSION: u32 = 1;

/// Completeness and Choi-positivity slack accepted on ingest.
pub const LOAD_TOL: f64 = 1e-8;

/// On-disk channel: Kraus operators `d_out × d_in`, entries as `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub name: String,
    pub d_in: usize,
    pub d_out: usize,
    pub kraus: Vec<ComplexMatrix>,
}

impl ChannelFile {
    pub fn from_channel(n: &QuantumChannel) -> Self {
        Self {
            name: n.name().to_string(),
            d_in: n.d_in(),
            d_out: n.d_out(),
            kraus: n.kraus().to_vec(),
        }
    }

    /// Checks shapes and CPTP-ness and builds the channel. Covariance is not
    /// recorded in files, so loaded channels always take the general solver
    /// path.
    pub fn into_channel(self) -> anyhow::Result<QuantumChannel> {
        if self.kraus.is_empty() {
            bail!("channel '{}' has no Kraus operators", self.name);
        }
        if self.d_in == 0 || self.d_out == 0 {
            bail!("channel '{}' has a zero dimension", self.name);
        }
        for (i, k) in self.kraus.iter().enumerate() {
            if k.rows() != self.d_out || k.cols() != self.d_in {
                bail!(
                    "Kraus operator {i} is {}x{}, expected {}x{} (d_out x d_in)",
                    k.rows(),
                    k.cols(),
                    self.d_out,
                    self.d_in
                );
            }
            if !k.is_finite() {
                bail!("Kraus operator {i} has non-finite entries");
            }
        }
        let validation = qcap_core::channel::validate_kraus(&self.kraus)?;
        if validation.completeness_residual > LOAD_TOL {
            bail!(
                "channel '{}' is not trace preserving: ‖Σ K†K − I‖ = {:e}",
                self.name,
                validation.completeness_residual
            );
        }
        if validation.choi_min_eig < -LOAD_TOL {
            bail!(
                "channel '{}' is not completely positive: Choi minimum eigenvalue {:e}",
                self.name,
                validation.choi_min_eig
            );
        }
        Ok(QuantumChannel::new(self.kraus)?.with_name(self.name))
    }
}

pub fn load_channel(path: &Path) -> anyhow::Result<QuantumChannel> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: ChannelFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.into_channel()
        .with_context(|| format!("invalid channel in {}", path.display()))
}

/// Wraps a payload with the schema version and run metadata.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: u32,
    pub command: &'a str,
    pub seed: u64,
    #[serde(flatten)]
    pub body: T,
}

pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes to `path`, or stdout when `None`.
pub fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn to_csv<R: Serialize>(rows: &[R]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcap_core::zoo;

    #[test]
    fn round_trip() {
        let n = zoo::erasure(2, 0.3).unwrap();
        let json = serde_json::to_string(&ChannelFile::from_channel(&n)).unwrap();
        let back: ChannelFile = serde_json::from_str(&json).unwrap();
        let m = back.into_channel().unwrap();
        assert_eq!(m.d_in(), 2);
        assert_eq!(m.d_out(), 3);
        assert_eq!(m.kraus(), n.kraus());
        assert_eq!(m.name(), n.name());
    }

    #[test]
    fn rejects_bad_channels() {
        let one = |re: f64| vec![vec![[re, 0.0], [0.0, 0.0]], vec![[0.0, 0.0], [re, 0.0]]];
        let parse = |kraus: serde_json::Value| -> anyhow::Result<QuantumChannel> {
            let v = serde_json::json!({"name": "x", "d_in": 2, "d_out": 2, "kraus": kraus});
            serde_json::from_value::<ChannelFile>(v)?.into_channel()
        };
        assert!(parse(serde_json::json!([one(1.0)])).is_ok());
        let err = parse(serde_json::json!([one(0.9)])).unwrap_err();
        assert!(format!("{err:#}").contains("trace preserving"), "{err:#}");
        assert!(parse(serde_json::json!([])).is_err());
        assert!(parse(serde_json::json!([[[[1.0, 0.0], [0.0, 0.0]]]])).is_err());
    }

    #[test]
    fn csv_rows() {
        #[derive(Serialize)]
        struct Row {
            p: f64,
            v: f64,
        }
        let s = to_csv(&[Row { p: 0.5, v: 1.0 }]).unwrap();
        assert_eq!(s, "p,v\n0.5,1.0\n");
    }
}
