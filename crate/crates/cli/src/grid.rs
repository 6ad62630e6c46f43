//! Parameter grids for sweeps, parsed from `min:max:count:spacing`.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Self, String> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(format!("grid needs finite min < max, got {min}:{max}"));
        }
        if count < 2 {
            return Err(format!("grid needs at least 2 points, got {count}"));
        }
        if spacing == Spacing::Log && min <= 0.0 {
            return Err(format!("log spacing needs min > 0, got {min}"));
        }
        Ok(Self { min, max, count, spacing })
    }

    pub fn points(&self) -> Vec<f64> {
        let steps = (self.count - 1) as f64;
        match self.spacing {
            Spacing::Linear => (0..self.count)
                .map(|i| self.min + (self.max - self.min) * i as f64 / steps)
                .collect(),
            Spacing::Log => {
                let (a, b) = (self.min.ln(), self.max.ln());
                (0..self.count).map(|i| (a + (b - a) * i as f64 / steps).exp()).collect()
            }
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(format!("expected min:max:count:spacing, got {s:?}"));
        }
        let min: f64 = parts[0].parse().map_err(|e| format!("bad grid min {:?}: {e}", parts[0]))?;
        let max: f64 = parts[1].parse().map_err(|e| format!("bad grid max {:?}: {e}", parts[1]))?;
        let count: usize =
            parts[2].parse().map_err(|e| format!("bad grid count {:?}: {e}", parts[2]))?;
        let spacing = match parts[3] {
            "linear" => Spacing::Linear,
            "log" => Spacing::Log,
            other => return Err(format!("spacing must be linear or log, got {other:?}")),
        };
        Grid::new(min, max, count, spacing)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spacing = match self.spacing {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        };
        write!(f, "{}:{}:{}:{spacing}", self.min, self.max, self.count)
    }
}
