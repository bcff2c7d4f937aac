//! Uniformly sampled function tables on `[-R, R]` with cubic interpolation,
//! a certified tail envelope and binary/CSV persistence.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 8] = b"HSFTAB01";

/// Tail envelope `|f(x)| <= c (3 + |x|)^{-L}` measured on the outer tenth of the table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub exponent: f64,
    pub constant: f64,
    /// `c (3 + R)^{-L}` relative to the sup norm of the table.
    pub relative_edge: f64,
    /// Largest sample on the outer tenth relative to the sup norm.
    pub relative_outer: f64,
    pub certified: bool,
}

/// Parameters shared by all tables of one build.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableParams {
    pub half_width: f64,
    pub dx: f64,
    pub tail_exponent: f64,
    /// Threshold on `relative_edge` and `relative_outer` for certification.
    pub tail_tolerance: f64,
}

impl Default for TableParams {
    fn default() -> Self {
        Self {
            half_width: 32.0,
            dx: 1.0 / 256.0,
            tail_exponent: 8.0,
            tail_tolerance: 1e-5,
        }
    }
}

impl TableParams {
    pub fn validate(&self) -> Result<usize> {
        if !(self.dx > 0.0 && self.half_width > 0.0) {
            return Err(Error::Resolution("half width and spacing must be positive".into()));
        }
        let n = self.half_width / self.dx;
        if (n - n.round()).abs() > 1e-9 {
            return Err(Error::Resolution(format!(
                "half width {} is not a multiple of dx {}",
                self.half_width, self.dx
            )));
        }
        Ok(n.round() as usize)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionTable {
    pub label: String,
    pub half_width: f64,
    pub dx: f64,
    /// Samples at `x_i = -R + i dx`, `i = 0..=2R/dx`.
    pub samples: Vec<f64>,
    pub tail: TailBound,
    pub interpolation_order: u32,
    /// A priori bound on the interpolation error between nodes.
    pub interpolation_error: f64,
}

impl FunctionTable {
    pub fn from_samples(label: &str, params: &TableParams, samples: Vec<f64>, fourth_derivative_bound: f64) -> Result<Self> {
        let n = params.validate()?;
        if samples.len() != 2 * n + 1 {
            return Err(Error::Precondition(format!(
                "expected {} samples, got {}",
                2 * n + 1,
                samples.len()
            )));
        }
        let mut t = Self {
            label: label.to_string(),
            half_width: params.half_width,
            dx: params.dx,
            samples,
            tail: TailBound {
                exponent: params.tail_exponent,
                constant: 0.0,
                relative_edge: 0.0,
                relative_outer: 0.0,
                certified: false,
            },
            interpolation_order: 3,
            interpolation_error: 3.0 / 128.0 * params.dx.powi(4) * fourth_derivative_bound,
        };
        t.tail = t.certify(params.tail_exponent, params.tail_tolerance);
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.dx
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Measure the tail envelope with exponent `l` on `0.9 R <= |x| <= R`.
    pub fn certify(&self, l: f64, tolerance: f64) -> TailBound {
        let sup = self.sup_norm();
        let mut c = 0.0f64;
        let mut outer = 0.0f64;
        let mut finite = true;
        for (i, v) in self.samples.iter().enumerate() {
            finite &= v.is_finite();
            let x = self.node(i).abs();
            if x >= 0.9 * self.half_width {
                c = c.max(v.abs() * (3.0 + x).powf(l));
                outer = outer.max(v.abs());
            }
        }
        let scale = if sup > 0.0 { sup } else { 1.0 };
        let relative_edge = c * (3.0 + self.half_width).powf(-l) / scale;
        let relative_outer = outer / scale;
        TailBound {
            exponent: l,
            constant: c,
            relative_edge,
            relative_outer,
            certified: finite && c.is_finite() && relative_edge <= tolerance && relative_outer <= tolerance,
        }
    }

    /// Cubic Lagrange interpolation; zero outside `[-R, R]`.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let u = (x + self.half_width) / self.dx;
        if !(u >= 0.0) {
            return 0.0;
        }
        let n = self.samples.len();
        let i = u.floor();
        let iu = i as usize;
        if iu >= n {
            return 0.0;
        }
        if iu == n - 1 {
            return if u == i { self.samples[iu] } else { 0.0 };
        }
        let s = u - i;
        let at = |k: isize| -> f64 {
            let j = iu as isize + k;
            if j < 0 || j as usize >= n {
                0.0
            } else {
                self.samples[j as usize]
            }
        };
        let (fm, f0, f1, f2) = (at(-1), at(0), at(1), at(2));
        let sm1 = s - 1.0;
        let sm2 = s - 2.0;
        let sp1 = s + 1.0;
        -fm * s * sm1 * sm2 / 6.0 + f0 * sp1 * sm1 * sm2 / 2.0 - f1 * sp1 * s * sm2 / 2.0
            + f2 * sp1 * s * sm1 / 6.0
    }

    /// Riemann sum of `f g` over the common grid; exact up to aliasing for
    /// band-limited samples.
    pub fn inner_product(&self, other: &FunctionTable) -> Result<f64> {
        if self.dx != other.dx || self.half_width != other.half_width {
            return Err(Error::Precondition("tables on different grids".into()));
        }
        Ok(self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).sum::<f64>() * self.dx)
    }

    /// `<f(. - s), g(. - t)>` for integer offsets on the same grid.
    pub fn shifted_inner_product(&self, other: &FunctionTable, shift: i64) -> Result<f64> {
        if self.dx != other.dx || self.half_width != other.half_width {
            return Err(Error::Precondition("tables on different grids".into()));
        }
        let step = (1.0 / self.dx).round() as i64;
        let off = shift * step;
        let n = self.samples.len() as i64;
        let mut s = 0.0;
        for i in 0..n {
            let j = i - off;
            if j >= 0 && j < n {
                s += self.samples[i as usize] * other.samples[j as usize];
            }
        }
        Ok(s * self.dx)
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        for v in [self.half_width, self.dx, self.tail.exponent, self.tail.constant] {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&self.interpolation_order.to_le_bytes())?;
        for v in [self.tail.relative_edge, self.tail.relative_outer, self.interpolation_error] {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&[self.tail.certified as u8])?;
        let label = self.label.as_bytes();
        w.write_all(&(label.len() as u32).to_le_bytes())?;
        w.write_all(label)?;
        w.write_all(&(self.samples.len() as u64).to_le_bytes())?;
        for v in &self.samples {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad table magic".into()));
        }
        let mut f = || -> Result<f64> {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            Ok(f64::from_le_bytes(b))
        };
        let half_width = f()?;
        let dx = f()?;
        let exponent = f()?;
        let constant = f()?;
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        let interpolation_order = u32::from_le_bytes(b4);
        let mut f = || -> Result<f64> {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            Ok(f64::from_le_bytes(b))
        };
        let relative_edge = f()?;
        let relative_outer = f()?;
        let interpolation_error = f()?;
        let mut b1 = [0u8; 1];
        r.read_exact(&mut b1)?;
        r.read_exact(&mut b4)?;
        let mut label = vec![0u8; u32::from_le_bytes(b4) as usize];
        r.read_exact(&mut label)?;
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let n = u64::from_le_bytes(b8) as usize;
        let expected = 2.0 * half_width / dx + 1.0;
        if !(expected.is_finite()) || (expected - n as f64).abs() > 0.5 {
            return Err(Error::Format("sample count does not match header".into()));
        }
        let mut raw = vec![0u8; n * 8];
        r.read_exact(&mut raw)?;
        let samples = raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Self {
            label: String::from_utf8(label).map_err(|e| Error::Format(e.to_string()))?,
            half_width,
            dx,
            samples,
            tail: TailBound {
                exponent,
                constant,
                relative_edge,
                relative_outer,
                certified: b1[0] != 0,
            },
            interpolation_order,
            interpolation_error,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(f);
        self.write_binary(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_binary(BufReader::new(f))
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "# label={} R={:.16e} dx={:.16e} L={:.16e} c={:.16e} interpolation_order={}",
            self.label, self.half_width, self.dx, self.tail.exponent, self.tail.constant, self.interpolation_order
        )?;
        writeln!(w, "x,value")?;
        for (i, v) in self.samples.iter().enumerate() {
            writeln!(w, "{:.16e},{:.16e}", self.node(i), v)?;
        }
        Ok(())
    }

    /// Parse a CSV written by [`write_csv`](Self::write_csv). Tail statistics are recomputed.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut lines = BufReader::new(r).lines();
        let header = lines.next().ok_or_else(|| Error::Format("empty table csv".into()))??;
        let field = |key: &str| -> Result<String> {
            header
                .split_whitespace()
                .find_map(|t| t.strip_prefix(&format!("{key}=")).map(str::to_string))
                .ok_or_else(|| Error::Format(format!("missing {key} in csv header")))
        };
        let num = |key: &str| -> Result<f64> {
            field(key)?.parse::<f64>().map_err(|e| Error::Format(e.to_string()))
        };
        let label = field("label")?;
        let half_width = num("R")?;
        let dx = num("dx")?;
        let l = num("L")?;
        let _ = lines.next();
        let mut samples = Vec::new();
        for line in lines {
            let line = line?;
            let v = line
                .split(',')
                .nth(1)
                .ok_or_else(|| Error::Format("bad csv row".into()))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Format(e.to_string()))?;
            samples.push(v);
        }
        let params = TableParams {
            half_width,
            dx,
            tail_exponent: l,
            ..TableParams::default()
        };
        FunctionTable::from_samples(&label, &params, samples, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_table() -> FunctionTable {
        let p = TableParams {
            half_width: 8.0,
            dx: 0.125,
            ..TableParams::default()
        };
        let n = p.validate().unwrap();
        let s = (0..=2 * n).map(|i| (-(-8.0 + i as f64 * 0.125f64).powi(2)).exp()).collect();
        FunctionTable::from_samples("gauss", &p, s, 12.0).unwrap()
    }

    #[test]
    fn interpolation_reproduces_nodes_and_cubics() {
        let t = gaussian_table();
        for i in [3usize, 40, 64, 100] {
            assert_eq!(t.eval(t.node(i)), t.samples[i]);
        }
        let p = TableParams { half_width: 4.0, dx: 0.5, ..TableParams::default() };
        let n = p.validate().unwrap();
        let cubic = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x - 0.25 * x * x * x;
        let s = (0..=2 * n).map(|i| cubic(-4.0 + i as f64 * 0.5)).collect();
        let t = FunctionTable::from_samples("cubic", &p, s, 0.0).unwrap();
        for x in [-2.9, -0.3, 0.77, 2.2] {
            assert!((t.eval(x) - cubic(x)).abs() < 1e-12);
        }
        assert_eq!(t.eval(4.01), 0.0);
        assert_eq!(t.eval(-4.01), 0.0);
    }

    #[test]
    fn interpolation_bound_holds() {
        let t = gaussian_table();
        let mut worst = 0.0f64;
        for k in 0..1000 {
            let x = -7.0 + 14.0 * k as f64 / 1000.0 + 1e-3;
            worst = worst.max((t.eval(x) - (-x * x).exp()).abs());
        }
        assert!(worst <= t.interpolation_error, "{worst} > {}", t.interpolation_error);
    }

    #[test]
    fn binary_roundtrip_is_bit_exact() {
        let t = gaussian_table();
        let mut buf = Vec::new();
        t.write_binary(&mut buf).unwrap();
        let back = FunctionTable::read_binary(&buf[..]).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn csv_roundtrip_preserves_samples() {
        let t = gaussian_table();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = FunctionTable::read_csv(&buf[..]).unwrap();
        assert_eq!(back.samples, t.samples);
        assert_eq!(back.tail.constant, t.tail.constant);
    }

    #[test]
    fn corrupt_header_rejected() {
        assert!(FunctionTable::read_binary(&b"NOTATABLE......."[..]).is_err());
    }

    #[test]
    fn gaussian_tail_certified() {
        assert!(gaussian_table().tail.certified);
    }
}
