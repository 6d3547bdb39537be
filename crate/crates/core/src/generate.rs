//! Built-in symbol families: square-wave truncations, seeded random symbols
//! and seeded analytic symbols.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::symbol::MatrixSymbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Squarewave,
    Random,
    Analytic,
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squarewave" => Ok(Self::Squarewave),
            "random" => Ok(Self::Random),
            "analytic" => Ok(Self::Analytic),
            other => Err(Error::InvalidArgument(format!("unknown symbol kind {other:?}"))),
        }
    }
}

/// Fourier truncation at degree `degree` of `sign(sin(θ − θ₀))`, times the
/// identity: `c_{±k} = ±2/(iπk) · e^{∓ikθ₀}` for odd `k`. Jumps at `θ₀` and
/// `θ₀ + π`.
pub fn squarewave(n: usize, degree: usize, phase: f64) -> MatrixSymbol {
    let eye = CMat::identity(n, n);
    let coeffs = (1..=degree).step_by(2).flat_map(|k| {
        let kf = k as f64;
        let c = C64::new(0.0, -2.0 / (PI * kf)) * C64::from_polar(1.0, -kf * phase);
        [(k as i64, &eye * c), (-(k as i64), &eye * c.conj())]
    });
    MatrixSymbol::from_coeffs(n, coeffs).expect("n × n blocks")
}

fn random_block(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    CMat::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Entries uniform in `[−1, 1] + i[−1, 1]` at every frequency in `−degree..=degree`.
pub fn random(n: usize, degree: usize, seed: u64) -> MatrixSymbol {
    random_in(n, -(degree as i64), degree as i64, seed)
}

/// As [`random`] on frequencies `0..=degree`.
pub fn analytic(n: usize, degree: usize, seed: u64) -> MatrixSymbol {
    random_in(n, 0, degree as i64, seed)
}

/// Random symbol supported on frequencies `lo..=hi`.
pub fn random_in(n: usize, lo: i64, hi: i64, seed: u64) -> MatrixSymbol {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(i64, CMat)> = (lo..=hi).map(|k| (k, random_block(&mut rng, n))).collect();
    MatrixSymbol::from_coeffs(n, coeffs).expect("n × n blocks")
}

pub fn generate(kind: Kind, n: usize, degree: usize, seed: u64) -> Result<MatrixSymbol> {
    if n == 0 {
        return Err(Error::InvalidArgument("block size must be positive".into()));
    }
    Ok(match kind {
        Kind::Squarewave => squarewave(n, degree, 0.0),
        Kind::Random => random(n, degree, seed),
        Kind::Analytic => analytic(n, degree, seed),
    })
}
