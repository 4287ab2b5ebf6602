//! 16-bit binary PGM (P5) read/write for unit-interval grids.
//!
//! Values in `[0, 1]` are quantized to `round(v * 65535)` and stored
//! most-significant-byte first, per the netpbm convention.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};

pub fn write_pgm16(path: &Path, grid: &Array2<f64>) -> Result<()> {
    let (h, w) = grid.dim();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    out.write_all(format!("P5\n{w} {h}\n65535\n").as_bytes())
        .map_err(|e| Error::io(path, e))?;
    let mut buf = Vec::with_capacity(h * w * 2);
    for &v in grid.iter() {
        let q = (v.clamp(0.0, 1.0) * 65535.0).round() as u16;
        buf.extend_from_slice(&q.to_be_bytes());
    }
    out.write_all(&buf).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_pgm16(path: &Path) -> Result<Array2<f64>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = BufReader::new(file);
    let mut bytes = Vec::new();
    rdr.read_to_end(&mut bytes).map_err(|e| Error::io(path, e))?;

    let mut pos = 0usize;
    let mut token = |bytes: &[u8]| -> Result<String> {
        // skip whitespace and `#` comments
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::parse(path, "truncated PGM header"));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };

    let magic = token(&bytes)?;
    if magic != "P5" {
        return Err(Error::parse(path, format!("expected P5 magic, got {magic:?}")));
    }
    let w: usize = token(&bytes)?
        .parse()
        .map_err(|e| Error::parse(path, format!("bad width: {e}")))?;
    let h: usize = token(&bytes)?
        .parse()
        .map_err(|e| Error::parse(path, format!("bad height: {e}")))?;
    let maxval: usize = token(&bytes)?
        .parse()
        .map_err(|e| Error::parse(path, format!("bad maxval: {e}")))?;
    if maxval != 65535 {
        return Err(Error::parse(path, format!("expected 16-bit maxval 65535, got {maxval}")));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let need = h * w * 2;
    if bytes.len() < pos + need {
        return Err(Error::parse(
            path,
            format!("truncated raster: need {need} bytes, have {}", bytes.len().saturating_sub(pos)),
        ));
    }
    let raster = &bytes[pos..pos + need];
    let mut grid = Array2::zeros((h, w));
    for (i, chunk) in raster.chunks_exact(2).enumerate() {
        let q = u16::from_be_bytes([chunk[0], chunk[1]]);
        grid[(i / w, i % w)] = q as f64 / 65535.0;
    }
    Ok(grid)
}
