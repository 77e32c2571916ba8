//! Piecewise-constant potential landscapes.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub x_left: f64,
    pub x_right: f64,
    pub v: f64,
}

/// Constant region extending from `x` to +∞ (a step).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tail {
    pub x: f64,
    pub v: f64,
}

/// Ordered, contiguous segments. The potential is zero to the left of the first
/// segment and either zero or `tail.v` to the right of the last one.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PiecewisePotential {
    segments: Vec<Segment>,
    tail: Option<Tail>,
}

impl PiecewisePotential {
    pub fn new(segments: Vec<Segment>, tail: Option<Tail>) -> Result<Self> {
        let p = Self { segments, tail };
        p.validate()?;
        Ok(p)
    }

    pub fn free() -> Self {
        Self::default()
    }

    pub fn from_triples(triples: &[(f64, f64, f64)]) -> Result<Self> {
        let segments = triples
            .iter()
            .map(|&(x_left, x_right, v)| Segment { x_left, x_right, v })
            .collect();
        Self::new(segments, None)
    }

    pub fn square(v0: f64, d: f64) -> Result<Self> {
        if d == 0.0 {
            return Ok(Self::free());
        }
        Self::from_triples(&[(0.0, d, v0)])
    }

    pub fn double_barrier(v0: f64, d: f64, gap: f64) -> Result<Self> {
        if gap == 0.0 {
            return Self::square(v0, 2.0 * d);
        }
        Self::from_triples(&[(0.0, d, v0), (d, d + gap, 0.0), (d + gap, 2.0 * d + gap, v0)])
    }

    /// Step of height `v0` starting at x = 0.
    pub fn step(v0: f64) -> Self {
        Self { segments: Vec::new(), tail: Some(Tail { x: 0.0, v: v0 }) }
    }

    fn validate(&self) -> Result<()> {
        for (i, s) in self.segments.iter().enumerate() {
            if !(s.x_left.is_finite() && s.x_right.is_finite() && s.v.is_finite()) {
                return Err(Error::InvalidPotential(format!("segment {i} not finite")));
            }
            if s.x_left >= s.x_right {
                return Err(Error::InvalidPotential(format!(
                    "segment {i}: x_left {} >= x_right {}",
                    s.x_left, s.x_right
                )));
            }
            if i > 0 && (s.x_left - self.segments[i - 1].x_right).abs() > 1e-12 * (1.0 + s.x_left.abs()) {
                return Err(Error::InvalidPotential(format!("segment {i} not contiguous with segment {}", i - 1)));
            }
        }
        if let Some(t) = self.tail {
            if !(t.x.is_finite() && t.v.is_finite()) {
                return Err(Error::InvalidPotential("tail not finite".into()));
            }
            if let Some(last) = self.segments.last() {
                if (last.x_right - t.x).abs() > 1e-12 * (1.0 + t.x.abs()) {
                    return Err(Error::InvalidPotential("tail does not start at the last segment edge".into()));
                }
            }
        }
        Ok(())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn tail(&self) -> Option<Tail> {
        self.tail
    }

    pub fn is_free(&self) -> bool {
        self.segments.iter().all(|s| s.v == 0.0) && self.tail.map_or(true, |t| t.v == 0.0)
    }

    /// Left edge of the scattering region.
    pub fn x_left(&self) -> f64 {
        self.segments
            .first()
            .map(|s| s.x_left)
            .or(self.tail.map(|t| t.x))
            .unwrap_or(0.0)
    }

    /// Right edge of the finite part.
    pub fn x_right(&self) -> f64 {
        self.segments
            .last()
            .map(|s| s.x_right)
            .or(self.tail.map(|t| t.x))
            .unwrap_or(0.0)
    }

    pub fn tail_v(&self) -> f64 {
        self.tail.map_or(0.0, |t| t.v)
    }

    pub fn value_at(&self, x: f64) -> f64 {
        for s in &self.segments {
            if x >= s.x_left && x < s.x_right {
                return s.v;
            }
        }
        match self.tail {
            Some(t) if x >= t.x => t.v,
            _ => 0.0,
        }
    }

    /// Mirror image about the centre of the finite region, for right incidence.
    pub fn reversed(&self) -> Result<Self> {
        if self.tail.is_some() {
            return Err(Error::InvalidPotential("a step has no mirror image with free leads".into()));
        }
        let (a, b) = (self.x_left(), self.x_right());
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| Segment { x_left: a + b - s.x_right, x_right: a + b - s.x_left, v: s.v })
            .collect();
        Self::new(segments, None)
    }

    /// Every nonzero region raised by `dv`.
    pub fn shifted(&self, dv: f64) -> Self {
        let segments = self
            .segments
            .iter()
            .map(|s| Segment { v: if s.v != 0.0 { s.v + dv } else { s.v }, ..*s })
            .collect();
        let tail = self.tail.map(|t| Tail { v: if t.v != 0.0 { t.v + dv } else { t.v }, ..t });
        Self { segments, tail }
    }

    pub fn translated(&self, dx: f64) -> Self {
        let segments = self
            .segments
            .iter()
            .map(|s| Segment { x_left: s.x_left + dx, x_right: s.x_right + dx, v: s.v })
            .collect();
        let tail = self.tail.map(|t| Tail { x: t.x + dx, ..t });
        Self { segments, tail }
    }
}
