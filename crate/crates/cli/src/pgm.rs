//! 8-bit PGM (P2 ASCII, P5 binary) reading and writing.
//!
//! Pixels map linearly to intensities: `v / 255` on read and
//! `round(255 * clamp(v, 0, 1))` on write, so a write/read round trip moves
//! each pixel by at most `1/255`.

use std::fs;
use std::path::Path;

use ogstv_core::ImageGrid;

use crate::error::{CliError, Result};

/// Reads a grayscale PGM file into the unit intensity range.
pub fn read_image(path: &Path) -> Result<ImageGrid> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    decode(&bytes).map_err(|reason| CliError::format(path, reason))
}

/// Writes the grid as binary P5 with maxval 255.
pub fn write_image(grid: &ImageGrid, path: &Path) -> Result<()> {
    fs::write(path, encode(grid)).map_err(|e| CliError::io(path, e))
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn next_number(&mut self) -> std::result::Result<u32, String> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err("expected a number in header".into());
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| "malformed header".to_string())?
            .parse::<u32>()
            .map_err(|_| "number out of range in header".to_string())
    }
}

pub fn decode(bytes: &[u8]) -> std::result::Result<ImageGrid, String> {
    if bytes.len() < 2 {
        return Err("truncated file".into());
    }
    let magic = &bytes[..2];
    match magic {
        b"P2" | b"P5" => {}
        b"P3" | b"P6" => return Err("grayscale only: color PPM input is not supported".into()),
        b"P1" | b"P4" => return Err("bitmap PBM input is not supported".into()),
        _ => return Err("not a PGM file (bad magic)".into()),
    }
    let binary = magic == b"P5";
    let mut reader = HeaderReader { bytes, pos: 2 };
    let width = reader.next_number()? as usize;
    let height = reader.next_number()? as usize;
    let maxval = reader.next_number()?;
    if width == 0 || height == 0 {
        return Err("zero image dimension".into());
    }
    if maxval == 0 || maxval > 255 {
        return Err(format!("unsupported maxval {maxval}: 8-bit only"));
    }

    let mut data = Vec::with_capacity(width * height);
    if binary {
        // exactly one whitespace byte separates maxval from raster data
        if reader.pos >= bytes.len() || !bytes[reader.pos].is_ascii_whitespace() {
            return Err("missing separator before raster data".into());
        }
        reader.pos += 1;
        let raster = &bytes[reader.pos..];
        if raster.len() < width * height {
            return Err(format!(
                "raster too short: {} bytes for {}x{}",
                raster.len(),
                width,
                height
            ));
        }
        for &b in &raster[..width * height] {
            if b as u32 > maxval {
                return Err(format!("sample {b} exceeds maxval {maxval}"));
            }
            data.push(b as f64 / 255.0);
        }
    } else {
        for _ in 0..width * height {
            let v = reader.next_number()?;
            if v > maxval {
                return Err(format!("sample {v} exceeds maxval {maxval}"));
            }
            data.push(v as f64 / 255.0);
        }
    }
    ImageGrid::from_vec(height, width, data).map_err(|e| e.to_string())
}

pub fn encode(grid: &ImageGrid) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", grid.width(), grid.height()).into_bytes();
    out.extend(
        grid.data()
            .iter()
            .map(|&v| (255.0 * v.clamp(0.0, 1.0)).round() as u8),
    );
    out
}
