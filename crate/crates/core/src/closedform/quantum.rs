use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratpoly::{rat, BigRational};

/// A validated bound-state label `(n, l)`.
///
/// Library units set the Coulomb scale to one, so the decay rate of level
/// `n` is `κ = 1/n`, radii are measured in reduced-mass Bohr radii divided
/// by `Z`, and energies in units where `E_n = -1/(2n²)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuantumNumbers {
    n: u32,
    l: u32,
}

impl QuantumNumbers {
    pub fn new(n: i64, l: i64) -> Result<Self> {
        if n < 1 || l < 0 || l >= n || n > u32::MAX as i64 {
            return Err(Error::InvalidQuantumNumbers { n, l });
        }
        Ok(QuantumNumbers {
            n: n as u32,
            l: l as u32,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// Radial quantum number (number of radial nodes), `n - l - 1`.
    pub fn n_r(&self) -> u32 {
        self.n - self.l - 1
    }

    /// Laguerre order `2l + 1`.
    pub fn m(&self) -> u32 {
        2 * self.l + 1
    }

    pub fn kappa(&self) -> BigRational {
        rat(1, self.n as i64)
    }

    pub fn kappa_f64(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// All `(n, l)` with `n <= n_max`, ordered by `n` then `l`.
    pub fn enumerate(n_max: u32) -> impl Iterator<Item = QuantumNumbers> {
        (1..=n_max).flat_map(|n| (0..n).map(move |l| QuantumNumbers { n, l }))
    }
}

impl std::fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(n={}, l={})", self.n, self.l)
    }
}

/// Bound-state energy `E_n = -1/(2n²)`.
pub fn energy(qn: &QuantumNumbers) -> BigRational {
    let n = qn.n() as i64;
    rat(-1, 2 * n * n)
}
