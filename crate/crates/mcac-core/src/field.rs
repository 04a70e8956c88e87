//! Discrete scalar fields on a pixel grid with sampling, differentiation
//! and file I/O.
//!
//! Fields are stored row-major, index `y * width + x`. Out-of-bounds access
//! clamps to the nearest border pixel so sampling is total over the plane.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::Point2;

/// Magic bytes of the raw 64-bit float field format.
const RAW_MAGIC: &[u8; 4] = b"MCF1";

/// A real-valued function sampled on a `width x height` lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2D {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl ScalarField2D {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::dim(format!(
                "field must be at least 2x2, got {width}x{height}"
            )));
        }
        if values.len() != width * height {
            return Err(Error::dim(format!(
                "expected {} values for {width}x{height}, got {}",
                width * height,
                values.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteGradient);
        }
        Ok(ScalarField2D {
            width,
            height,
            values,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds a field by evaluating `f` at every lattice point.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x as f64, y as f64));
            }
        }
        Self::new(width, height, values)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.values[y * self.width + x] = v;
    }

    fn clamped(&self, x: isize, y: isize) -> f64 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.get(x, y)
    }

    /// Bilinear interpolation at `z`; exact at lattice points, clamped at
    /// the border.
    pub fn sample(&self, z: Point2) -> f64 {
        let (x0, y0, fx, fy) = self.cell_of(z);
        let v00 = self.clamped(x0, y0);
        let v10 = self.clamped(x0 + 1, y0);
        let v01 = self.clamped(x0, y0 + 1);
        let v11 = self.clamped(x0 + 1, y0 + 1);
        let top = v00 + fx * (v10 - v00);
        let bottom = v01 + fx * (v11 - v01);
        top + fy * (bottom - top)
    }

    fn cell_of(&self, z: Point2) -> (isize, isize, f64, f64) {
        let cx = z.x.clamp(0.0, (self.width - 1) as f64);
        let cy = z.y.clamp(0.0, (self.height - 1) as f64);
        let x0 = cx.floor().min((self.width - 2) as f64);
        let y0 = cy.floor().min((self.height - 2) as f64);
        (x0 as isize, y0 as isize, cx - x0, cy - y0)
    }

    fn lattice_gradient(&self, x: isize, y: isize) -> (f64, f64) {
        let w = self.width as isize;
        let h = self.height as isize;
        let gx = if x == 0 {
            self.clamped(1, y) - self.clamped(0, y)
        } else if x == w - 1 {
            self.clamped(w - 1, y) - self.clamped(w - 2, y)
        } else {
            0.5 * (self.clamped(x + 1, y) - self.clamped(x - 1, y))
        };
        let gy = if y == 0 {
            self.clamped(x, 1) - self.clamped(x, 0)
        } else if y == h - 1 {
            self.clamped(x, h - 1) - self.clamped(x, h - 2)
        } else {
            0.5 * (self.clamped(x, y + 1) - self.clamped(x, y - 1))
        };
        (gx, gy)
    }

    /// Central-difference gradient, one-sided at the border, bilinearly
    /// interpolated at `z`.
    pub fn gradient(&self, z: Point2) -> (f64, f64) {
        let (x0, y0, fx, fy) = self.cell_of(z);
        let mut gx = 0.0;
        let mut gy = 0.0;
        for (dx, dy, w) in [
            (0, 0, (1.0 - fx) * (1.0 - fy)),
            (1, 0, fx * (1.0 - fy)),
            (0, 1, (1.0 - fx) * fy),
            (1, 1, fx * fy),
        ] {
            if w == 0.0 {
                continue;
            }
            let (lgx, lgy) = self.lattice_gradient(
                (x0 + dx).clamp(0, self.width as isize - 1),
                (y0 + dy).clamp(0, self.height as isize - 1),
            );
            gx += w * lgx;
            gy += w * lgy;
        }
        (gx, gy)
    }

    /// Curvature of the level sets, `div(grad f / |grad f|)`, from central
    /// second differences, bilinearly interpolated at `z`.
    pub fn level_set_curvature(&self, z: Point2) -> f64 {
        let (x0, y0, fx, fy) = self.cell_of(z);
        let mut k = 0.0;
        for (dx, dy, w) in [
            (0, 0, (1.0 - fx) * (1.0 - fy)),
            (1, 0, fx * (1.0 - fy)),
            (0, 1, (1.0 - fx) * fy),
            (1, 1, fx * fy),
        ] {
            if w == 0.0 {
                continue;
            }
            k += w * self.lattice_curvature(x0 + dx, y0 + dy);
        }
        k
    }

    fn lattice_curvature(&self, x: isize, y: isize) -> f64 {
        let (px, py) = self.lattice_gradient(x, y);
        let pxx = self.clamped(x + 1, y) - 2.0 * self.clamped(x, y) + self.clamped(x - 1, y);
        let pyy = self.clamped(x, y + 1) - 2.0 * self.clamped(x, y) + self.clamped(x, y - 1);
        let pxy = 0.25
            * (self.clamped(x + 1, y + 1) - self.clamped(x + 1, y - 1)
                - self.clamped(x - 1, y + 1)
                + self.clamped(x - 1, y - 1));
        let g2 = px * px + py * py;
        if g2 < 1e-24 {
            return 0.0;
        }
        (pxx * py * py - 2.0 * px * py * pxy + pyy * px * px) / g2.powf(1.5)
    }

    /// Writes an 8-bit (maxval <= 255) or 16-bit binary PGM.
    pub fn write_pgm(&self, path: &Path, maxval: u16) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        write!(w, "P5\n{} {}\n{}\n", self.width, self.height, maxval)?;
        if maxval <= 255 {
            let bytes: Vec<u8> = self
                .values
                .iter()
                .map(|&v| v.round().clamp(0.0, maxval as f64) as u8)
                .collect();
            w.write_all(&bytes)?;
        } else {
            for &v in &self.values {
                let q = v.round().clamp(0.0, maxval as f64) as u16;
                w.write_all(&q.to_be_bytes())?;
            }
        }
        Ok(())
    }

    /// Reads a binary PGM (P5), 8- or 16-bit.
    pub fn read_pgm(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
        let mut pos = 0usize;
        let mut token = |bytes: &[u8]| -> Result<String> {
            // skip whitespace and '#' comments
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
                return Err(Error::format(path, "truncated PGM header"));
            }
            Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
        };
        if token(&bytes)? != "P5" {
            return Err(Error::format(path, "not a binary PGM (expected P5)"));
        }
        let width: usize = token(&bytes)?
            .parse()
            .map_err(|_| Error::format(path, "bad width"))?;
        let height: usize = token(&bytes)?
            .parse()
            .map_err(|_| Error::format(path, "bad height"))?;
        let maxval: u32 = token(&bytes)?
            .parse()
            .map_err(|_| Error::format(path, "bad maxval"))?;
        pos += 1; // single whitespace after maxval
        let n = width * height;
        let values = if maxval <= 255 {
            if bytes.len() < pos + n {
                return Err(Error::format(path, "truncated pixel data"));
            }
            bytes[pos..pos + n].iter().map(|&b| b as f64).collect()
        } else {
            if bytes.len() < pos + 2 * n {
                return Err(Error::format(path, "truncated pixel data"));
            }
            bytes[pos..pos + 2 * n]
                .chunks_exact(2)
                .map(|c| u16::from_be_bytes([c[0], c[1]]) as f64)
                .collect()
        };
        Self::new(width, height, values)
    }

    /// Writes the raw little-endian f64 dump: 16-byte header (magic,
    /// u32 width, u32 height, u32 reserved) followed by row-major data.
    pub fn write_raw(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(RAW_MAGIC)?;
        w.write_all(&(self.width as u32).to_le_bytes())?;
        w.write_all(&(self.height as u32).to_le_bytes())?;
        w.write_all(&0u32.to_le_bytes())?;
        for &v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_raw(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
        if bytes.len() < 16 || &bytes[0..4] != RAW_MAGIC {
            return Err(Error::format(path, "missing MCF1 header"));
        }
        let width = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
        let height = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let n = width * height;
        if bytes.len() != 16 + 8 * n {
            return Err(Error::format(
                path,
                format!("expected {} data bytes, found {}", 8 * n, bytes.len() - 16),
            ));
        }
        let values = bytes[16..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Self::new(width, height, values)
    }
}
