use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use euler_stab::stability::ClassSpectrum;
use euler_stab::ModeIndex;
use serde::ser::Error as _;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Spectrum of one class as written to disk. Only finite numbers are
/// accepted, both when serializing and when parsing.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "RawRecord")]
pub struct SpectrumFileRecord {
    pub representative: ModeIndex,
    pub alpha: f64,
    /// `(re, im)` pairs.
    pub eigenvalues: Vec<[f64; 2]>,
    /// Imaginary-axis segment `[lower, upper]`.
    pub essential: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct RawRecord {
    representative: ModeIndex,
    alpha: f64,
    eigenvalues: Vec<[f64; 2]>,
    essential: [f64; 2],
}

impl SpectrumFileRecord {
    pub fn from_class(c: &ClassSpectrum<f64>) -> Result<Self, CliError> {
        let r = SpectrumFileRecord {
            representative: c.representative,
            alpha: c.alpha,
            eigenvalues: c.eigenvalues.iter().map(|z| [z.re, z.im]).collect(),
            essential: [c.essential.lower, c.essential.upper],
        };
        r.check().map_err(CliError::Numerical)?;
        Ok(r)
    }

    fn check(&self) -> Result<(), String> {
        let finite = self.alpha.is_finite()
            && self.essential.iter().all(|x| x.is_finite())
            && self.eigenvalues.iter().flatten().all(|x| x.is_finite());
        if finite {
            Ok(())
        } else {
            Err(format!("class {} has non-finite spectrum data", self.representative))
        }
    }
}

impl TryFrom<RawRecord> for SpectrumFileRecord {
    type Error = String;

    fn try_from(r: RawRecord) -> Result<Self, String> {
        let rec = SpectrumFileRecord {
            representative: r.representative,
            alpha: r.alpha,
            eigenvalues: r.eigenvalues,
            essential: r.essential,
        };
        rec.check()?;
        Ok(rec)
    }
}

impl Serialize for SpectrumFileRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.check().map_err(S::Error::custom)?;
        RawRecord {
            representative: self.representative,
            alpha: self.alpha,
            eigenvalues: self.eigenvalues.clone(),
            essential: self.essential,
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct CsvRow {
    a1: i64,
    a2: i64,
    re: f64,
    im: f64,
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::Invalid(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(doc: &T, path: Option<&Path>) -> Result<(), CliError> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, doc).map_err(|e| {
        if e.is_io() {
            CliError::Invalid(format!("cannot write output: {e}"))
        } else {
            CliError::Numerical(e.to_string())
        }
    })?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Flat eigenvalue export: one `a1,a2,re,im` row per eigenvalue.
pub fn write_csv(records: &[SpectrumFileRecord], path: Option<&Path>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(sink(path)?);
    for r in records {
        r.check().map_err(CliError::Numerical)?;
        for &[re, im] in &r.eigenvalues {
            w.serialize(CsvRow {
                a1: r.representative.k1,
                a2: r.representative.k2,
                re,
                im,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use euler_stab::stability::{class_spectrum, Window};
    use euler_stab::{ClassSystem, DomainSpec};

    fn record() -> SpectrumFileRecord {
        let spec = DomainSpec::new(2.0, ModeIndex::new(3, 1), 1.0).unwrap();
        let class = ClassSystem::new(ModeIndex::new(0, 1), &spec);
        SpectrumFileRecord::from_class(&class_spectrum(&class, Window::symmetric(30)).unwrap()).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let r = record();
        let text = serde_json::to_string(&r).unwrap();
        let back: SpectrumFileRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back.representative, r.representative);
        assert!((back.alpha - r.alpha).abs() <= 1e-12);
        for (x, y) in back.eigenvalues.iter().zip(&r.eigenvalues) {
            assert!((x[0] - y[0]).abs() <= 1e-12 && (x[1] - y[1]).abs() <= 1e-12);
        }
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let mut r = record();
        r.eigenvalues[0][1] = f64::NAN;
        assert!(serde_json::to_string(&r).is_err());
        let mut r = record();
        r.alpha = f64::INFINITY;
        assert!(serde_json::to_string(&r).is_err());
        let text = r#"{"representative":[0,1],"alpha":1e999,"eigenvalues":[],"essential":[0,1]}"#;
        assert!(serde_json::from_str::<SpectrumFileRecord>(text).is_err());
    }
}
