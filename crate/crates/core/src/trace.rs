//! CSV persistence of full evaluation traces.
//!
//! Rows hold raw objectives; normalized objectives and the overall violation
//! are recomputed from the problem metadata on load, so a round trip is
//! exact.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::types::{Evaluation, ProblemMeta, RunTrace};

pub fn trace_header(meta: &ProblemMeta) -> Vec<String> {
    let mut h = vec!["eval_index".to_string()];
    h.extend((1..=meta.dim).map(|i| format!("x_{i}")));
    h.extend((1..=meta.n_obj).map(|i| format!("f_{i}")));
    h.extend((1..=meta.n_con).map(|i| format!("g_{i}")));
    h.push("v".into());
    h
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Streams evaluations to CSV one row at a time.
pub struct TraceWriter<W: Write> {
    inner: csv::Writer<W>,
    last_index: u64,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(meta: &ProblemMeta, out: W) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(out);
        inner.write_record(trace_header(meta))?;
        Ok(Self { inner, last_index: 0 })
    }

    pub fn push(&mut self, e: &Evaluation) -> Result<()> {
        if e.eval_index != self.last_index + 1 {
            return Err(Error::Sequencing(format!(
                "trace row {} follows {}",
                e.eval_index, self.last_index
            )));
        }
        self.last_index = e.eval_index;
        let mut row = Vec::with_capacity(2 + e.x.len() + e.f_raw.len() + e.g.len());
        row.push(e.eval_index.to_string());
        row.extend(e.x.iter().chain(&e.f_raw).chain(&e.g).map(|v| num(*v)));
        row.push(num(e.v));
        self.inner.write_record(row)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.inner.flush()?;
        self.inner.into_inner().map_err(|e| Error::Io(e.into_error()))
    }
}

pub fn write_trace_csv<W: Write>(trace: &RunTrace, out: W) -> Result<()> {
    let mut w = TraceWriter::new(&trace.problem, out)?;
    for e in &trace.evaluations {
        w.push(e)?;
    }
    w.finish()?;
    Ok(())
}

/// Reads the evaluations of a trace file written for `meta`.
pub fn read_trace_csv<R: Read>(input: R, meta: &ProblemMeta, origin: &str) -> Result<Vec<Evaluation>> {
    let mut r = csv::Reader::from_reader(input);
    let expected = trace_header(meta);
    if r.headers()?.iter().ne(expected.iter().map(String::as_str)) {
        return Err(Error::format(origin, "header does not match the problem"));
    }
    let (d, m, c) = (meta.dim, meta.n_obj, meta.n_con);
    let mut out = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let eval_index: u64 = rec[0]
            .parse()
            .map_err(|_| Error::format(origin, format!("row {}: bad index", row + 1)))?;
        let values = rec
            .iter()
            .skip(1)
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::format(origin, format!("row {}: bad number", row + 1)))?;
        let x = values[..d].to_vec();
        let f_raw = values[d..d + m].to_vec();
        let g = values[d + m..d + m + c].to_vec();
        let e = Evaluation::from_parts(meta, x, f_raw, g, eval_index)?;
        if e.v.to_bits() != values[d + m + c].to_bits() {
            return Err(Error::format(
                origin,
                format!("row {}: stored violation disagrees with constraints", row + 1),
            ));
        }
        out.push(e);
    }
    Ok(out)
}
