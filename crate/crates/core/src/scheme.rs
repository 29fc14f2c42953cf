//! The four matched scheme variants O1 to O4.

use std::fmt;
use std::str::FromStr;

/// Spatial and temporal order of a scheme. Each variant fixes the
/// entropy conservative flux, the reconstruction, the central difference
/// for the gravity term and the Runge-Kutta integrator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeOrder {
    O1,
    O2,
    O3,
    O4,
}

impl SchemeOrder {
    pub const ALL: [SchemeOrder; 4] = [SchemeOrder::O1, SchemeOrder::O2, SchemeOrder::O3, SchemeOrder::O4];

    pub fn as_u8(self) -> u8 {
        match self {
            SchemeOrder::O1 => 1,
            SchemeOrder::O2 => 2,
            SchemeOrder::O3 => 3,
            SchemeOrder::O4 => 4,
        }
    }

    pub fn from_u8(k: u8) -> Option<Self> {
        match k {
            1 => Some(SchemeOrder::O1),
            2 => Some(SchemeOrder::O2),
            3 => Some(SchemeOrder::O3),
            4 => Some(SchemeOrder::O4),
            _ => None,
        }
    }

    /// Cells on each side of a face entering its numerical flux.
    pub fn half_width(self) -> usize {
        self.as_u8() as usize
    }

    pub fn ghost_layers(self) -> usize {
        match self {
            SchemeOrder::O1 | SchemeOrder::O2 => 2,
            SchemeOrder::O3 => 3,
            SchemeOrder::O4 => 4,
        }
    }

    /// Order of the central difference applied to `∂h`.
    pub fn central_diff_order(self) -> usize {
        match self {
            SchemeOrder::O1 | SchemeOrder::O2 => 2,
            SchemeOrder::O3 | SchemeOrder::O4 => 4,
        }
    }

    /// Whether the entropy conservative part uses the four-point flux.
    pub fn four_point_flux(self) -> bool {
        matches!(self, SchemeOrder::O3 | SchemeOrder::O4)
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeOrder::O1 => "o1",
            SchemeOrder::O2 => "o2",
            SchemeOrder::O3 => "o3",
            SchemeOrder::O4 => "o4",
        }
    }
}

impl fmt::Display for SchemeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown scheme '{0}', expected one of o1, o2, o3, o4")]
pub struct ParseSchemeError(pub String);

impl FromStr for SchemeOrder {
    type Err = ParseSchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        let t = t.strip_suffix("_es").unwrap_or(&t);
        match t {
            "o1" | "1" => Ok(SchemeOrder::O1),
            "o2" | "2" => Ok(SchemeOrder::O2),
            "o3" | "3" => Ok(SchemeOrder::O3),
            "o4" | "4" => Ok(SchemeOrder::O4),
            _ => Err(ParseSchemeError(s.to_string())),
        }
    }
}
