//! Dataset CSV: header `x1,…,xd` plus an optional `label` column holding
//! 0 (regular) or 1 (outlier). UTF-8, LF line ends, '.' decimals.

use std::io::{Read, Write};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn csv_err(e: csv::Error) -> Error {
    let row = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse { row, msg: format!("{other:?}") },
    }
}

pub fn read_dataset<R: Read>(reader: R) -> Result<Dataset<f64>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let label_col = headers.iter().position(|h| h.eq_ignore_ascii_case("label"));
    let dim = headers.len() - usize::from(label_col.is_some());
    if dim == 0 {
        return Err(Error::Parse { row: 1, msg: "no coordinate columns".into() });
    }
    let mut coords = Vec::new();
    let mut labels = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let row = k + 2;
        let rec = rec.map_err(csv_err)?;
        if rec.len() != headers.len() {
            return Err(Error::Parse { row, msg: format!("expected {} fields, found {}", headers.len(), rec.len()) });
        }
        for (c, field) in rec.iter().enumerate() {
            if Some(c) == label_col {
                labels.push(match field {
                    "0" => false,
                    "1" => true,
                    _ => return Err(Error::Parse { row, msg: format!("label must be 0 or 1, found `{field}`") }),
                });
            } else {
                let v: f64 = field
                    .parse()
                    .map_err(|_| Error::Parse { row, msg: format!("column `{}`: `{field}` is not a number", &headers[c]) })?;
                if !v.is_finite() {
                    return Err(Error::Parse { row, msg: format!("column `{}` is not finite", &headers[c]) });
                }
                coords.push(v);
            }
        }
    }
    if coords.is_empty() {
        return Err(Error::Parse { row: 2, msg: "no data rows".into() });
    }
    let data = Dataset::from_flat(dim, coords)?;
    if label_col.is_some() {
        data.with_labels(labels)
    } else {
        Ok(data)
    }
}

pub fn write_dataset<T: Scalar, W: Write>(data: &Dataset<T>, mut w: W) -> Result<()> {
    let mut header: Vec<String> = (1..=data.dim()).map(|k| format!("x{k}")).collect();
    if data.labels().is_some() {
        header.push("label".into());
    }
    writeln!(w, "{}", header.join(","))?;
    for (i, p) in data.points().enumerate() {
        let mut line = p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if let Some(l) = data.labels() {
            line.push_str(if l[i] { ",1" } else { ",0" });
        }
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}
