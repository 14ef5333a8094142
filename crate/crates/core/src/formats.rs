//! On-disk formats: CSV signals and JSON coefficient, symbol and matrix files.
//!
//! Signals are CSV with header `x,re,im`, one row per sample, LF endings.
//! Coefficients are `{"basis":"hermite"|"fock","n":N,"coeffs":[[re,im],…]}`.
//! Floats are written in shortest round-trip form, so reading and writing a
//! file reproduces the same numbers bit for bit.

use std::io::{BufRead, Write};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::representation::{FockCoeffs, HermiteCoeffs, SampledSignal};

/// Relative tolerance on the grid spacing when reading a CSV signal.
const GRID_TOLERANCE: f64 = 1e-9;

pub fn write_signal_csv<W: Write>(s: &SampledSignal, mut out: W) -> Result<()> {
    writeln!(out, "x,re,im")?;
    for (i, v) in s.values().iter().enumerate() {
        writeln!(out, "{:?},{:?},{:?}", s.x(i), v.re, v.im)?;
    }
    Ok(())
}

pub fn signal_to_csv(s: &SampledSignal) -> String {
    let mut buf = Vec::new();
    write_signal_csv(s, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is ascii")
}

/// Reads a signal and checks that the grid is uniform and increasing.
pub fn read_signal_csv<R: BufRead>(input: R) -> Result<SampledSignal> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::Format("empty signal file".into()))??;
    if header.trim() != "x,re,im" {
        return Err(Error::Format(format!("expected header `x,re,im`, got `{}`", header.trim())));
    }
    let mut xs = Vec::new();
    let mut vals = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Format(format!("line {}: expected 3 fields, got {}", lineno + 2, fields.len())));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("line {}: bad number `{s}`: {e}", lineno + 2)))
        };
        xs.push(parse(fields[0])?);
        vals.push(C64::new(parse(fields[1])?, parse(fields[2])?));
    }
    if xs.len() < 2 {
        return Err(Error::Format(format!("signal needs at least 2 samples, got {}", xs.len())));
    }
    let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    if !(dx > 0.0) {
        return Err(Error::Format("grid must be strictly increasing".into()));
    }
    for (i, x) in xs.iter().enumerate() {
        let expect = xs[0] + i as f64 * dx;
        if (x - expect).abs() > GRID_TOLERANCE * dx.max(xs[0].abs()).max(1.0) {
            return Err(Error::Format(format!("grid is not uniform at row {}", i + 1)));
        }
    }
    SampledSignal::new(xs[0], dx, vals).map_err(|e| Error::Format(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Hermite,
    Fock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffFile {
    pub basis: Basis,
    pub n: usize,
    pub coeffs: Vec<[f64; 2]>,
}

impl CoeffFile {
    fn from_slice(basis: Basis, c: &[C64]) -> Self {
        Self { basis, n: c.len(), coeffs: c.iter().map(|v| [v.re, v.im]).collect() }
    }

    pub fn from_hermite(h: &HermiteCoeffs) -> Self {
        Self::from_slice(Basis::Hermite, h.coeffs())
    }

    pub fn from_fock(f: &FockCoeffs) -> Self {
        Self::from_slice(Basis::Fock, f.coeffs())
    }

    pub fn values(&self) -> Result<Vec<C64>> {
        if self.n != self.coeffs.len() {
            return Err(Error::Format(format!("n = {} but {} coefficients given", self.n, self.coeffs.len())));
        }
        Ok(self.coeffs.iter().map(|[re, im]| C64::new(*re, *im)).collect())
    }

    /// Coefficients as a Hermite expansion; Fock files are mapped through
    /// the inverse Bargmann transform, which is the identity on vectors.
    pub fn to_hermite(&self) -> Result<HermiteCoeffs> {
        HermiteCoeffs::new(self.values()?).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_fock(&self) -> Result<FockCoeffs> {
        FockCoeffs::new(self.values()?).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coefficient file serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Serialized symbol: `{"kind":…, "params":…, "taylor":[[re,im],…]}`, with
/// `taylor` the monomial coefficients `a_k` of `φ(z) = Σ a_k z^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolFile {
    pub kind: String,
    pub params: serde_json::Value,
    pub taylor: Vec<[f64; 2]>,
}

/// Matrix `M[n][m] = ⟨S e_m, e_n⟩` as nested `[re,im]` rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::GridGeometry;

    #[test]
    fn csv_round_trip_is_exact() {
        let geom = GridGeometry::centered(16, 0.3).unwrap();
        let s = SampledSignal::from_fn(geom, |x| C64::new((-x * x).exp(), x.sin() / 3.0));
        let text = signal_to_csv(&s);
        assert!(text.starts_with("x,re,im\n"));
        let back = read_signal_csv(text.as_bytes()).unwrap();
        assert_eq!(back.values(), s.values());
        assert_eq!(signal_to_csv(&back), text);
    }

    #[test]
    fn csv_rejects_bad_input() {
        assert!(read_signal_csv("x,y\n0,1\n".as_bytes()).is_err());
        assert!(read_signal_csv("x,re,im\n0,1,0\n".as_bytes()).is_err());
        assert!(read_signal_csv("x,re,im\n0,1,0\n1,1,0\n3,1,0\n".as_bytes()).is_err());
        assert!(read_signal_csv("x,re,im\n0,1,0\n1,abc,0\n".as_bytes()).is_err());
        assert!(read_signal_csv("x,re,im\n1,1,0\n0,1,0\n".as_bytes()).is_err());
    }

    #[test]
    fn coeff_json_round_trip() {
        let h = HermiteCoeffs::new(vec![C64::new(0.1, -0.2), C64::new(1.0 / 3.0, 0.0)]).unwrap();
        let text = CoeffFile::from_hermite(&h).to_json();
        assert_eq!(text, r#"{"basis":"hermite","n":2,"coeffs":[[0.1,-0.2],[0.3333333333333333,0.0]]}"#);
        let back = CoeffFile::from_json(&text).unwrap();
        assert_eq!(back.to_hermite().unwrap(), h);
        assert!(CoeffFile::from_json(r#"{"basis":"fock","n":3,"coeffs":[[1,0]]}"#).unwrap().to_fock().is_err());
        assert!(CoeffFile::from_json(r#"{"basis":"other","n":1,"coeffs":[[1,0]]}"#).is_err());
    }
}
