//! Report emitters that read a [`Store`](crate::store::Store) and write CSV
//! and SVG files back into it.

pub mod delta;
pub mod erd;
pub mod svg;

use cmop_core::Result;

/// Shortest decimal that round-trips to the same `f64`.
pub fn fmt_num(x: f64) -> String {
    format!("{x}")
}

pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| cmop_core::Error::Io(e.into_error()))
}
