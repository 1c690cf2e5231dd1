//! Step sets, kernel data, exact enumeration, the group of the walk and
//! kernel-equation checks.

mod enumerate;
mod group;
mod kernel;
mod model;
mod steps;

pub use enumerate::{
    brute_force_counts, brute_force_counts_literal, dp_series, enumerate, specialize, specialize_counts, WalkTable,
};
pub use group::{generators, orbit_normalization, orbit_sum, walk_group, GroupElement};
pub use kernel::kernel_check;
pub use model::{validate_model, ModelData, ModelReport, Table2};
pub use steps::{decompose_kernel, KernelData, StepSet};

use crate::arith::Rat;
use core::fmt;
use core::str::FromStr;

/// One of the four evaluation points (α, β) ∈ {0,1}².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpecPoint {
    pub alpha: u8,
    pub beta: u8,
}

impl SpecPoint {
    pub const ALL: [SpecPoint; 4] = [
        SpecPoint { alpha: 0, beta: 0 },
        SpecPoint { alpha: 1, beta: 0 },
        SpecPoint { alpha: 0, beta: 1 },
        SpecPoint { alpha: 1, beta: 1 },
    ];

    pub fn rats(&self) -> (Rat, Rat) {
        (Rat::from(self.alpha as i64), Rat::from(self.beta as i64))
    }
}

impl fmt::Display for SpecPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.alpha, self.beta)
    }
}

impl FromStr for SpecPoint {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<SpecPoint> {
        let t: alloc::string::String = s.chars().filter(|c| *c == '0' || *c == '1').collect();
        match t.as_str() {
            "00" => Ok(SpecPoint { alpha: 0, beta: 0 }),
            "10" => Ok(SpecPoint { alpha: 1, beta: 0 }),
            "01" => Ok(SpecPoint { alpha: 0, beta: 1 }),
            "11" => Ok(SpecPoint { alpha: 1, beta: 1 }),
            _ => Err(crate::Error::Parse(alloc::format!("bad spec point {:?}", s))),
        }
    }
}
