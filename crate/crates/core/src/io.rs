//! File formats for grid functions and coefficient matrices.
//!
//! * Binary: magic `MOYAL1\0\0`, `u32` kind (1 = grid2, 2 = grid1,
//!   3 = coeff), two `u32` dimensions, then for grids one `f64` step per
//!   axis, then little-endian `f64` pairs `(re, im)` in row-major order.
//! * JSON: a `kind`, the axes or order, a `convention` block with the
//!   inner-product constants, and `re`/`im` arrays.
//! * CSV: one row per sample, `q,p,re,im` / `x,re,im` / `m,n,re,im`.
//!
//! Floats are written in shortest round-trip form, so every format reads
//! back bit-exact.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{INNER1_SCALE, INNER2_SCALE};
use crate::coeff::CoefficientMatrix;
use crate::error::{Error, Result};
use crate::grid::{GridFunction1, GridFunction2, GridSpec1, GridSpec2};
use crate::weyl::DUALITY_SCALE;

pub const MAGIC: &[u8; 8] = b"MOYAL1\0\0";

const KIND_GRID2: u32 = 1;
const KIND_GRID1: u32 = 2;
const KIND_COEFF: u32 = 3;

/// Any object the file formats carry.
#[derive(Debug, Clone, PartialEq)]
pub enum Data {
    Grid2(GridFunction2),
    Grid1(GridFunction1),
    Coeff(CoefficientMatrix),
}

impl Data {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Grid2(_) => "grid2",
            Self::Grid1(_) => "grid1",
            Self::Coeff(_) => "coeff",
        }
    }

    fn values(&self) -> Vec<Complex64> {
        match self {
            Self::Grid2(g) => g.values().to_vec(),
            Self::Grid1(g) => g.values().to_vec(),
            Self::Coeff(c) => c.to_row_major(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Bin,
}

impl Format {
    /// Format implied by a path's extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        path.extension()?.to_str()?.parse().ok()
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "bin" => Ok(Self::Bin),
            other => Err(Error::Parse(format!("unknown format `{other}`; expected json, csv or bin"))),
        }
    }
}

// ---- binary ----

pub fn write_binary(data: &Data, mut out: impl Write) -> Result<()> {
    let (kind, dims, steps) = match data {
        Data::Grid2(g) => {
            let s = g.spec();
            (KIND_GRID2, (s.q.n(), s.p.n()), vec![s.q.step(), s.p.step()])
        }
        Data::Grid1(g) => (KIND_GRID1, (g.spec().n(), 1), vec![g.spec().step()]),
        Data::Coeff(c) => (KIND_COEFF, (c.order(), c.order()), vec![]),
    };
    let dim = |d: usize| u32::try_from(d).map_err(|_| Error::Format(format!("dimension {d} exceeds u32")));
    let mut buf = Vec::with_capacity(32 + 16 * dims.0 * dims.1);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&kind.to_le_bytes());
    buf.extend_from_slice(&dim(dims.0)?.to_le_bytes());
    buf.extend_from_slice(&dim(dims.1)?.to_le_bytes());
    for s in steps {
        buf.extend_from_slice(&s.to_le_bytes());
    }
    for v in data.values() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl Cursor<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.at + N;
        let slice =
            self.bytes.get(self.at..end).ok_or_else(|| Error::Format("binary file truncated".into()))?;
        self.at = end;
        Ok(slice.try_into().expect("length checked"))
    }

    fn u32(&mut self) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take()?) as usize)
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take()?))
    }
}

pub fn read_binary(mut input: impl Read) -> Result<Data> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut cur = Cursor { bytes: &bytes, at: 0 };
    if &cur.take::<8>()? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let kind = u32::from_le_bytes(cur.take()?);
    let (a, b) = (cur.u32()?, cur.u32()?);
    let steps = match kind {
        KIND_GRID2 => vec![cur.f64()?, cur.f64()?],
        KIND_GRID1 => vec![cur.f64()?],
        KIND_COEFF => vec![],
        other => return Err(Error::Format(format!("unknown kind {other}"))),
    };
    let count = a.checked_mul(b).ok_or_else(|| Error::Format("dimensions overflow".into()))?;
    if bytes.len() - cur.at != 16 * count {
        return Err(Error::Format(format!(
            "expected {} data bytes, found {}",
            16 * count,
            bytes.len() - cur.at
        )));
    }
    let values: Vec<Complex64> =
        (0..count).map(|_| Ok(Complex64::new(cur.f64()?, cur.f64()?))).collect::<Result<_>>()?;
    assemble(kind, (a, b), &steps, values)
}

fn assemble(kind: u32, dims: (usize, usize), steps: &[f64], values: Vec<Complex64>) -> Result<Data> {
    match kind {
        KIND_GRID2 => {
            let spec = GridSpec2::new(GridSpec1::new(dims.0, steps[0])?, GridSpec1::new(dims.1, steps[1])?);
            Ok(Data::Grid2(GridFunction2::new(spec, values)?))
        }
        KIND_GRID1 => {
            if dims.1 != 1 {
                return Err(Error::Format(format!("grid1 second dimension must be 1, got {}", dims.1)));
            }
            Ok(Data::Grid1(GridFunction1::new(GridSpec1::new(dims.0, steps[0])?, values)?))
        }
        _ => {
            if dims.0 != dims.1 {
                return Err(Error::Format(format!("coefficient matrix must be square, got {dims:?}")));
            }
            CoefficientMatrix::from_row_major(dims.0, &values)
                .map(Data::Coeff)
                .ok_or_else(|| Error::Format("coefficient data length".into()))
        }
    }
}

// ---- JSON ----

/// Normalization constants of the inner products and the duality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Convention {
    pub inner1: f64,
    pub inner2: f64,
    pub duality: f64,
}

impl Convention {
    pub const CURRENT: Convention =
        Convention { inner1: INNER1_SCALE, inner2: INNER2_SCALE, duality: DUALITY_SCALE };
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct AxisJson {
    n: usize,
    step: f64,
}

impl From<GridSpec1> for AxisJson {
    fn from(s: GridSpec1) -> Self {
        Self { n: s.n(), step: s.step() }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct DataJson {
    kind: String,
    convention: Convention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<AxisJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<AxisJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<AxisJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<usize>,
    re: Vec<f64>,
    im: Vec<f64>,
}

pub fn write_json(data: &Data, out: impl Write) -> Result<()> {
    let values = data.values();
    let mut doc = DataJson {
        kind: data.kind().into(),
        convention: Convention::CURRENT,
        q: None,
        p: None,
        x: None,
        order: None,
        re: values.iter().map(|v| v.re).collect(),
        im: values.iter().map(|v| v.im).collect(),
    };
    match data {
        Data::Grid2(g) => {
            doc.q = Some(g.spec().q.into());
            doc.p = Some(g.spec().p.into());
        }
        Data::Grid1(g) => doc.x = Some(g.spec().into()),
        Data::Coeff(c) => doc.order = Some(c.order()),
    }
    serde_json::to_writer(out, &doc).map_err(|e| Error::Format(e.to_string()))
}

pub fn read_json(input: impl Read) -> Result<Data> {
    let doc: DataJson = serde_json::from_reader(input).map_err(|e| Error::Format(e.to_string()))?;
    if doc.convention != Convention::CURRENT {
        return Err(Error::Format(format!(
            "convention mismatch: file has {:?}, expected {:?}",
            doc.convention,
            Convention::CURRENT
        )));
    }
    if doc.re.len() != doc.im.len() {
        return Err(Error::Format("re and im arrays differ in length".into()));
    }
    let values = doc.re.iter().zip(&doc.im).map(|(&re, &im)| Complex64::new(re, im)).collect();
    let missing = |what: &str| Error::Format(format!("{} file lacks `{what}`", doc.kind));
    match doc.kind.as_str() {
        "grid2" => {
            let (q, p) = (doc.q.ok_or_else(|| missing("q"))?, doc.p.ok_or_else(|| missing("p"))?);
            assemble(KIND_GRID2, (q.n, p.n), &[q.step, p.step], values)
        }
        "grid1" => {
            let x = doc.x.ok_or_else(|| missing("x"))?;
            assemble(KIND_GRID1, (x.n, 1), &[x.step], values)
        }
        "coeff" => {
            let n = doc.order.ok_or_else(|| missing("order"))?;
            assemble(KIND_COEFF, (n, n), &[], values)
        }
        other => Err(Error::Format(format!("unknown kind `{other}`"))),
    }
}

// ---- CSV ----

fn csv_error(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn write_csv(data: &Data, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let num = |v: f64| v.to_string();
    match data {
        Data::Grid2(g) => {
            w.write_record(["q", "p", "re", "im"]).map_err(csv_error)?;
            let s = g.spec();
            for i in 0..s.q.n() {
                for j in 0..s.p.n() {
                    let v = g.at(i, j);
                    w.write_record([num(s.q.point(i)), num(s.p.point(j)), num(v.re), num(v.im)])
                        .map_err(csv_error)?;
                }
            }
        }
        Data::Grid1(g) => {
            w.write_record(["x", "re", "im"]).map_err(csv_error)?;
            for (j, v) in g.values().iter().enumerate() {
                w.write_record([num(g.spec().point(j)), num(v.re), num(v.im)]).map_err(csv_error)?;
            }
        }
        Data::Coeff(c) => {
            w.write_record(["m", "n", "re", "im"]).map_err(csv_error)?;
            for m in 0..c.order() {
                for n in 0..c.order() {
                    let v = c.get(m, n);
                    w.write_record([m.to_string(), n.to_string(), num(v.re), num(v.im)])
                        .map_err(csv_error)?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// The step of an axis whose point `n/2 + 1` is exactly `step`.
fn axis_from_points(points: &[f64]) -> Result<GridSpec1> {
    let n = points.len();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Format(format!("axis with {n} points")));
    }
    GridSpec1::new(n, points[n / 2 + 1])
}

pub fn read_csv(input: impl Read) -> Result<Data> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers().map_err(csv_error)?.iter().map(str::to_owned).collect();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_error)?;
        let row = record
            .iter()
            .map(|cell| {
                cell.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad CSV cell `{cell}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != header.len() {
            return Err(Error::Format("ragged CSV row".into()));
        }
        rows.push(row);
    }
    let values = |re: usize| rows.iter().map(|row| Complex64::new(row[re], row[re + 1])).collect::<Vec<_>>();
    match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["q", "p", "re", "im"] => {
            let first = rows.first().ok_or_else(|| Error::Format("empty CSV".into()))?[0];
            let n_p = rows.iter().take_while(|row| row[0] == first).count();
            if !rows.len().is_multiple_of(n_p) {
                return Err(Error::Format("grid rows do not tile".into()));
            }
            let qs: Vec<f64> = rows.iter().step_by(n_p).map(|row| row[0]).collect();
            let ps: Vec<f64> = rows[..n_p].iter().map(|row| row[1]).collect();
            let spec = GridSpec2::new(axis_from_points(&qs)?, axis_from_points(&ps)?);
            Ok(Data::Grid2(GridFunction2::new(spec, values(2))?))
        }
        ["x", "re", "im"] => {
            let xs: Vec<f64> = rows.iter().map(|row| row[0]).collect();
            Ok(Data::Grid1(GridFunction1::new(axis_from_points(&xs)?, values(1))?))
        }
        ["m", "n", "re", "im"] => {
            let order = (rows.len() as f64).sqrt().round() as usize;
            if order * order != rows.len() {
                return Err(Error::Format(format!("{} coefficient rows is not a square", rows.len())));
            }
            let mut c = CoefficientMatrix::zeros(order);
            for row in &rows {
                let (m, n) = (row[0] as usize, row[1] as usize);
                if m >= order || n >= order {
                    return Err(Error::Format(format!("index ({m}, {n}) out of range")));
                }
                c.set(m, n, Complex64::new(row[2], row[3]));
            }
            Ok(Data::Coeff(c))
        }
        other => Err(Error::Format(format!("unrecognized CSV header {other:?}"))),
    }
}

// ---- files ----

pub fn write_file(path: &Path, data: &Data, format: Format) -> Result<()> {
    let mut buf = Vec::new();
    match format {
        Format::Json => write_json(data, &mut buf)?,
        Format::Csv => write_csv(data, &mut buf)?,
        Format::Bin => write_binary(data, &mut buf)?,
    }
    fs::write(path, buf)?;
    Ok(())
}

/// Reads any format, recognizing binary by its magic and JSON by a leading
/// `{`.
pub fn read_file(path: &Path) -> Result<Data> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(MAGIC) {
        read_binary(bytes.as_slice())
    } else if bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{') {
        read_json(bytes.as_slice())
    } else {
        read_csv(bytes.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{f_grid, h_grid};

    fn samples() -> Vec<Data> {
        let spec = GridSpec2::new(GridSpec1::new(8, 0.3).unwrap(), GridSpec1::new(6, 1.0 / 3.0).unwrap());
        let c = CoefficientMatrix::from_fn(3, |m, n| Complex64::new(m as f64 / 7.0, -(n as f64).sqrt()));
        vec![
            Data::Grid2(f_grid(2, 1, spec)),
            Data::Grid1(h_grid(3, GridSpec1::new(10, 0.7).unwrap())),
            Data::Coeff(c),
        ]
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        for d in samples() {
            let mut buf = Vec::new();
            write_binary(&d, &mut buf).unwrap();
            assert_eq!(&buf[..8], MAGIC);
            assert_eq!(read_binary(buf.as_slice()).unwrap(), d);
        }
    }

    #[test]
    fn json_and_csv_round_trips() {
        for d in samples() {
            let mut buf = Vec::new();
            write_json(&d, &mut buf).unwrap();
            assert!(String::from_utf8_lossy(&buf).contains("\"convention\""));
            assert_eq!(read_json(buf.as_slice()).unwrap(), d);
            let mut buf = Vec::new();
            write_csv(&d, &mut buf).unwrap();
            assert_eq!(read_csv(buf.as_slice()).unwrap(), d);
        }
    }

    #[test]
    fn binary_layout() {
        let d = Data::Coeff(CoefficientMatrix::unit(2, 0, 1));
        let mut buf = Vec::new();
        write_binary(&d, &mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 12 + 4 * 16);
        assert_eq!(&buf[8..12], &3u32.to_le_bytes());
        assert_eq!(&buf[12..20], &[2, 0, 0, 0, 2, 0, 0, 0]);
        assert_eq!(&buf[36..44], &1f64.to_le_bytes());
    }

    #[test]
    fn rejects_corrupt_input() {
        let mut buf = Vec::new();
        write_binary(&samples()[2], &mut buf).unwrap();
        buf.pop();
        assert!(matches!(read_binary(buf.as_slice()), Err(Error::Format(_))));
        buf[0] = b'X';
        assert!(matches!(read_binary(buf.as_slice()), Err(Error::Format(_))));
        let json = r#"{"kind":"coeff","convention":{"inner1":1.0,"inner2":1.0,"duality":1.0},"order":1,"re":[1],"im":[0]}"#;
        assert!(matches!(read_json(json.as_bytes()), Err(Error::Format(_))));
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn formats_from_paths() {
        assert_eq!(Format::from_path(Path::new("a/b.json")), Some(Format::Json));
        assert_eq!(Format::from_path(Path::new("x.BIN")), Some(Format::Bin));
        assert_eq!(Format::from_path(Path::new("x")), None);
    }
}
