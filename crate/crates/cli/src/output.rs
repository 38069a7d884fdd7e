//! JSON envelopes and CSV series. Field order is fixed by the structs, so
//! artifacts are byte-identical for identical jobs.

use std::path::Path;

use serde::Serialize;

use crate::{FamilyArg, JobArgs};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Header {
    pub schema_version: u32,
    pub engine_version: &'static str,
    pub command: &'static str,
    pub p: u32,
    pub family: &'static str,
    /// Matrix size; only meaningful for GL_n.
    pub n: Option<usize>,
    pub r: u32,
    pub window: usize,
}

impl Header {
    pub fn new(command: &'static str, a: &JobArgs) -> Self {
        Header {
            schema_version: SCHEMA_VERSION,
            engine_version: env!("CARGO_PKG_VERSION"),
            command,
            p: a.p,
            family: match a.family {
                FamilyArg::Ga => "ga",
                FamilyArg::Gl => "gl",
            },
            n: (a.family == FamilyArg::Gl || command == "witt" || command == "bar-check").then_some(a.n),
            r: a.r,
            window: a.window,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    #[serde(flatten)]
    header: &'a Header,
    result: &'a T,
}

pub fn write_json<T: Serialize>(path: &Path, header: &Header, result: &T) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(&Envelope { header, result }).map_err(std::io::Error::other)?;
    text.push('\n');
    std::fs::write(path, text)
}

/// `degree,dim` rows.
pub fn write_series(path: &Path, dims: &[usize]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["degree", "dim"])?;
    for (n, d) in dims.iter().enumerate() {
        w.write_record([n.to_string(), d.to_string()])?;
    }
    w.flush()
}

/// `1 + 2t + 3t^2 + …`, for the summary line.
pub fn poincare(dims: &[usize]) -> String {
    let terms: Vec<String> = dims
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(n, &d)| match n {
            0 => d.to_string(),
            1 if d == 1 => "t".to_string(),
            1 => format!("{d}t"),
            _ if d == 1 => format!("t^{n}"),
            _ => format!("{d}t^{n}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}
