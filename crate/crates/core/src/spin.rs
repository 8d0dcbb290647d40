use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Spin quantum number `j`, stored as `2j` so half-integers stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub const HALF: Spin = Spin { twice: 1 };
    pub const ONE: Spin = Spin { twice: 2 };
    pub const THREE_HALVES: Spin = Spin { twice: 3 };

    /// `j = twice_j / 2`, with `twice_j ≥ 1`.
    pub fn from_twice(twice_j: u32) -> Result<Self> {
        if twice_j == 0 {
            return Err(invalid("j", "spin must be at least 1/2"));
        }
        Ok(Self { twice: twice_j })
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    /// `2j + 1`
    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }

    pub fn is_integer(self) -> bool {
        self.twice.is_multiple_of(2)
    }

    /// Number of `(m, −m)` pairs with `m > 0`.
    pub fn pair_count(self) -> usize {
        self.dim() / 2
    }

    /// Twice the magnetic quantum number of basis index `k`: `2m = 2j − 2k`.
    pub fn twice_m(self, index: usize) -> i64 {
        i64::from(self.twice) - 2 * index as i64
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for Spin {
    type Err = Error;

    /// Accepts `"1"`, `"3/2"` or `"1.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || {
            invalid(
                "j",
                format!("`{s}` is not a positive integer or half-integer"),
            )
        };
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "2" => Spin::from_twice(num),
                "1" => Spin::from_twice(num * 2),
                _ => Err(bad()),
            };
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        let twice = 2.0 * x;
        if !twice.is_finite() || twice < 1.0 || (twice - twice.round()).abs() > 1e-9 || twice > 1e6
        {
            return Err(bad());
        }
        Spin::from_twice(twice.round() as u32)
    }
}
