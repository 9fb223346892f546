//! Versioned JSON container shared by every persisted model and report.
//!
//! ```json
//! {"format":"becaptcha-model","version":1,"kind":"svm","body":{...}}
//! ```
//!
//! Numbers are written with shortest round-trip formatting and parsed with
//! exact round-trip parsing, so `f64` values survive bit-for-bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FORMAT: &str = "becaptcha-model";
pub const VERSION: u32 = 1;

#[derive(Serialize)]
struct EnvelopeRef<'a, T> {
    format: &'a str,
    version: u32,
    kind: &'a str,
    body: &'a T,
}

#[derive(Deserialize)]
struct EnvelopeOwned {
    format: String,
    version: u32,
    kind: String,
    body: serde_json::Value,
}

pub fn to_string<T: Serialize>(kind: &str, body: &T) -> Result<String> {
    Ok(serde_json::to_string(&EnvelopeRef {
        format: FORMAT,
        version: VERSION,
        kind,
        body,
    })?)
}

pub fn write<T: Serialize, W: Write>(kind: &str, body: &T, out: W) -> Result<()> {
    let mut out = out;
    serde_json::to_writer(
        &mut out,
        &EnvelopeRef {
            format: FORMAT,
            version: VERSION,
            kind,
            body,
        },
    )?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn read<T: DeserializeOwned, R: Read>(kind: &str, input: R) -> Result<T> {
    let env: EnvelopeOwned = serde_json::from_reader(input).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let found = format!("{}/{}:{}", env.format, env.version, env.kind);
    if env.format != FORMAT || env.version != VERSION || env.kind != kind {
        return Err(Error::SchemaVersionMismatch {
            expected: format!("{FORMAT}/{VERSION}:{kind}"),
            found,
        });
    }
    serde_json::from_value(env.body).map_err(|e| Error::Parse {
        line: 1,
        message: format!("{kind} body: {e}"),
    })
}

pub fn from_str<T: DeserializeOwned>(kind: &str, text: &str) -> Result<T> {
    read(kind, text.as_bytes())
}

pub fn save<T: Serialize>(kind: &str, body: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write(kind, body, BufWriter::new(file))
}

pub fn load<T: DeserializeOwned>(kind: &str, path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read(kind, BufReader::new(file))
}
