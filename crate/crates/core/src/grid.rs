//! Axis-aligned boxes and uniform grids in the complex plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Option<Rect> {
        let ok = [x0, x1, y0, y1].iter().all(|v| v.is_finite()) && x1 > x0 && y1 > y0;
        ok.then_some(Rect { x0, x1, y0, y1 })
    }

    /// Square `[-h, h]^2`.
    pub fn square(h: f64) -> Rect {
        Rect { x0: -h, x1: h, y0: -h, y1: h }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }

    /// Grows each side by `frac` of the corresponding extent.
    pub fn padded(&self, frac: f64) -> Rect {
        let dx = self.width() * frac;
        let dy = self.height() * frac;
        Rect { x0: self.x0 - dx, x1: self.x1 + dx, y0: self.y0 - dy, y1: self.y1 + dy }
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x0, self.x1, self.y0, self.y1)
    }
}

impl FromStr for Rect {
    type Err = String;

    /// Parses `x0,x1,y0,y1`.
    fn from_str(s: &str) -> Result<Rect, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(format!("expected x0,x1,y0,y1 but got {s:?}"));
        }
        let mut v = [0.0; 4];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part.parse::<f64>().map_err(|_| format!("{part:?} is not a number"))?;
        }
        Rect::new(v[0], v[1], v[2], v[3]).ok_or_else(|| format!("box {s:?} is empty or not finite"))
    }
}

/// Node coordinates for `res` cells per side, endpoints included (`res + 1` nodes).
pub fn node_coords(lo: f64, hi: f64, res: usize) -> Vec<f64> {
    (0..=res).map(|i| lo + (hi - lo) * i as f64 / res as f64).collect()
}

/// Cell-centre coordinates for `res` cells per side.
pub fn centre_coords(lo: f64, hi: f64, res: usize) -> Vec<f64> {
    (0..res).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / res as f64).collect()
}
