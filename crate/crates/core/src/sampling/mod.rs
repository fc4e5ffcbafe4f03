//! Unit-cube designs (Monte Carlo, Latin hypercube, Sobol') and the
//! L2-star discrepancy.

mod direction_numbers;
mod sobol_seq;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng::{self, Purpose};

pub use sobol_seq::SobolSequence;

/// How a unit design was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum Generator {
    /// Independent uniform deviates.
    Mc,
    /// Latin hypercube: one point per stratum per column.
    Lhs,
    /// Unscrambled Sobol' sequence (seed unused).
    Sobol,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Mc => "mc",
            Generator::Lhs => "lhs",
            Generator::Sobol => "sobol",
        }
    }
}

impl core::str::FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mc" => Ok(Generator::Mc),
            "lhs" => Ok(Generator::Lhs),
            "sobol" | "qmc" => Ok(Generator::Sobol),
            other => Err(Error::invalid(alloc::format!("unknown sampler `{other}`"))),
        }
    }
}

/// An `N × d` point set in `[0, 1)^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitDesign {
    pub points: Matrix,
    pub generator: Generator,
    pub seed: u64,
}

impl UnitDesign {
    pub fn n(&self) -> usize {
        self.points.rows()
    }

    pub fn dim(&self) -> usize {
        self.points.cols()
    }

    /// Draws a design with the given generator.
    pub fn generate(generator: Generator, n: usize, d: usize, seed: u64) -> Result<Self> {
        match generator {
            Generator::Mc => Ok(mc_sample(n, d, seed)),
            Generator::Lhs => Ok(lhs_sample(n, d, seed)),
            Generator::Sobol => sobol_sequence(n, d),
        }
    }

    /// Splits the columns into `[0, at)` and `[at, d)`.
    pub fn split_columns(&self, at: usize) -> (UnitDesign, UnitDesign) {
        let left: Vec<usize> = (0..at).collect();
        let right: Vec<usize> = (at..self.dim()).collect();
        let rows: Vec<usize> = (0..self.n()).collect();
        (
            UnitDesign { points: self.points.select(&rows, &left), ..*self },
            UnitDesign { points: self.points.select(&rows, &right), ..*self },
        )
    }
}

/// Largest double below one.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// `n × d` i.i.d. uniform deviates.
///
/// Entry `(i, j)` is the `(i·d + j)`-th deviate of the ChaCha8 stream keyed
/// by `seed`, so any row range can be regenerated independently with
/// [`mc_rows`].
pub fn mc_sample(n: usize, d: usize, seed: u64) -> UnitDesign {
    UnitDesign { points: mc_rows(0, n, d, seed), generator: Generator::Mc, seed }
}

/// Rows `start..start + count` of [`mc_sample`]`(_, d, seed)`.
pub fn mc_rows(start: usize, count: usize, d: usize, seed: u64) -> Matrix {
    let mut rng = rng::stream(seed, Purpose::MonteCarlo, 0);
    // each deviate consumes one u64, i.e. two 32-bit ChaCha words
    rng.set_word_pos(2 * (start as u128) * (d as u128));
    let data: Vec<f64> = (0..count * d).map(|_| rng::uniform_open(&mut rng)).collect();
    Matrix::from_vec(count, d, data).expect("shape is consistent by construction")
}

/// Latin hypercube design: in every column each stratum `[k/n, (k+1)/n)`
/// holds exactly one point, placed uniformly inside it. Column permutations
/// come from independent streams.
pub fn lhs_sample(n: usize, d: usize, seed: u64) -> UnitDesign {
    let mut points = Matrix::zeros(n, d);
    for j in 0..d {
        let mut rng = rng::stream(seed, Purpose::LatinHypercube, j as u64);
        let mut strata: Vec<usize> = (0..n).collect();
        rng::shuffle(&mut strata, &mut rng);
        for (i, &k) in strata.iter().enumerate() {
            let u = rng::uniform_open(&mut rng);
            let x = (k as f64 + u) / n as f64;
            points[(i, j)] = x.min(BELOW_ONE);
        }
    }
    UnitDesign { points, generator: Generator::Lhs, seed }
}

/// First `n` points of the `d`-dimensional Sobol' sequence, origin skipped.
pub fn sobol_sequence(n: usize, d: usize) -> Result<UnitDesign> {
    let mut seq = SobolSequence::new(d)?;
    if n as u64 >= u32::MAX as u64 {
        return Err(Error::TooLarge { what: "sobol' point count", limit: u32::MAX as usize - 1, found: n });
    }
    let mut points = Matrix::zeros(n, d);
    for i in 0..n {
        seq.next_into(points.row_mut(i)).expect("count checked above");
    }
    Ok(UnitDesign { points, generator: Generator::Sobol, seed: 0 })
}

/// L2-star discrepancy of a point set by Warnock's closed form
///
/// `D² = 3^{-d} − 2^{1−d}/N Σ_i Π_k (1 − x_ik²) + 1/N² Σ_i Σ_j Π_k (1 − max(x_ik, x_jk))`.
///
/// Returns `NaN` for an empty set.
pub fn l2_star_discrepancy(points: &Matrix) -> f64 {
    let n = points.rows();
    if n == 0 {
        return f64::NAN;
    }
    let d = points.cols() as i32;
    let nf = n as f64;
    let single: f64 = points.iter_rows().map(|r| r.iter().map(|x| 1.0 - x * x).product::<f64>()).sum();
    let mut pair = 0.0;
    for i in 0..n {
        let ri = points.row(i);
        // diagonal term once, off-diagonal twice
        pair += ri.iter().map(|x| 1.0 - x).product::<f64>();
        for j in 0..i {
            let rj = points.row(j);
            pair += 2.0 * ri.iter().zip(rj).map(|(a, b)| 1.0 - a.max(*b)).product::<f64>();
        }
    }
    let d2 = libm::pow(3.0, -(d as f64)) - libm::pow(2.0, (1 - d) as f64) / nf * single + pair / (nf * nf);
    libm::sqrt(d2.max(0.0))
}

/// Discrepancy of a [`UnitDesign`].
pub fn design_discrepancy(design: &UnitDesign) -> f64 {
    l2_star_discrepancy(&design.points)
}
