//! On-disk caches: the divisor table as a flat binary file and zeta samples
//! as append-only CSV.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::arithmetic::DivisorTable;
use crate::error::{Error, Result};
use crate::zeta::{ZetaMethod, ZetaSample};

pub const DIVISOR_MAGIC: &[u8; 8] = b"DIVTBL01";

pub fn write_divisor_table<W: Write>(table: &DivisorTable, mut w: W) -> Result<()> {
    w.write_all(DIVISOR_MAGIC)?;
    w.write_all(&(table.limit() as u64).to_le_bytes())?;
    let mut buf = Vec::with_capacity(4 * table.limit());
    for &v in table.d_values() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

pub fn read_divisor_table<R: Read>(mut r: R) -> Result<DivisorTable> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)
        .map_err(|_| Error::format("divisor cache shorter than its header", None))?;
    if &magic != DIVISOR_MAGIC {
        return Err(Error::format(
            format!(
                "bad divisor cache magic {:?}, expected {:?}",
                String::from_utf8_lossy(&magic),
                std::str::from_utf8(DIVISOR_MAGIC).unwrap()
            ),
            None,
        ));
    }
    let mut len = [0u8; 8];
    r.read_exact(&mut len)
        .map_err(|_| Error::format("divisor cache shorter than its header", None))?;
    let limit = u64::from_le_bytes(len);
    if limit == 0 || limit >= u32::MAX as u64 {
        return Err(Error::format(format!("implausible divisor cache limit {limit}"), None));
    }
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() as u64 != 4 * limit {
        return Err(Error::format(
            format!("divisor cache body has {} bytes, header promises {}", body.len(), 4 * limit),
            None,
        ));
    }
    let d: Vec<u32> = body
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    DivisorTable::from_d_values(d)
}

pub fn save_divisor_table(table: &DivisorTable, path: &Path) -> Result<()> {
    write_divisor_table(table, BufWriter::new(File::create(path)?))
}

pub fn load_divisor_table(path: &Path) -> Result<DivisorTable> {
    read_divisor_table(BufReader::new(File::open(path)?))
}

const ZETA_HEADER: &str = "t,re,im,err";

/// Appends Euler–Maclaurin samples, writing the header if the file is new.
pub fn append_zeta_samples(path: &Path, samples: &[ZetaSample]) -> Result<()> {
    if samples.iter().any(|s| s.method != ZetaMethod::EulerMaclaurin) {
        return Err(Error::invalid("the zeta cache stores Euler–Maclaurin samples only"));
    }
    let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
    let mut w = BufWriter::new(OpenOptions::new().create(true).append(true).open(path)?);
    if fresh {
        writeln!(w, "{ZETA_HEADER}")?;
    }
    for s in samples {
        writeln!(w, "{},{},{},{}", s.t, s.value.re, s.value.im, s.err_bound)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_zeta_samples<R: BufRead>(r: R) -> Result<Vec<ZetaSample>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if i == 0 {
            if line.trim() != ZETA_HEADER {
                return Err(Error::format(format!("expected header {ZETA_HEADER:?}"), Some(lineno)));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(Error::format(format!("expected 4 columns, found {}", cols.len()), Some(lineno)));
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::format(format!("bad number {s:?}: {e}"), Some(lineno)))
        };
        out.push(ZetaSample {
            t: num(cols[0])?,
            value: Complex64::new(num(cols[1])?, num(cols[2])?),
            method: ZetaMethod::EulerMaclaurin,
            err_bound: num(cols[3])?,
        });
    }
    Ok(out)
}

pub fn load_zeta_samples(path: &Path) -> Result<Vec<ZetaSample>> {
    read_zeta_samples(BufReader::new(File::open(path)?))
}
