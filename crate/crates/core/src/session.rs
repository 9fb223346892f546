//! Line-delimited gesture files.
//!
//! The first line is the header `{"schema":"becaptcha/1"}`; every following
//! non-empty line is one [`GestureSample`] object.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::GestureSample;

pub const SCHEMA: &str = "becaptcha/1";

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    schema: String,
}

pub fn write_sessions<W: Write>(samples: &[GestureSample], mut out: W) -> Result<()> {
    serde_json::to_writer(&mut out, &Header { schema: SCHEMA.into() })?;
    out.write_all(b"\n")?;
    for s in samples {
        serde_json::to_writer(&mut out, s)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_sessions<R: BufRead>(input: R) -> Result<Vec<GestureSample>> {
    let mut lines = input.lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "missing schema header".into(),
            })
        }
    };
    check_header(&header)?;
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let sample: GestureSample = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 2,
            message: e.to_string(),
        })?;
        out.push(sample);
    }
    Ok(out)
}

fn check_header(line: &str) -> Result<()> {
    let header: Header = serde_json::from_str(line).map_err(|e| Error::Parse {
        line: 1,
        message: format!("bad schema header: {e}"),
    })?;
    if header.schema != SCHEMA {
        return Err(Error::SchemaVersionMismatch {
            expected: SCHEMA.into(),
            found: header.schema,
        });
    }
    Ok(())
}

pub fn save_sessions(samples: &[GestureSample], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_sessions(samples, BufWriter::new(file))
}

pub fn load_sessions(path: impl AsRef<Path>) -> Result<Vec<GestureSample>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_sessions(BufReader::new(file))
}
