// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Outcome of an ON/OFF threshold photodetector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Threshold {
    On,
    Off,
}

impl Threshold {
    pub fn is_on(self) -> bool {
        self == Threshold::On
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Threshold::On => "ON",
            Threshold::Off => "OFF",
        })
    }
}

/// Outcome of an atomic measurement in the diagonal basis `|±⟩ = (|g⟩ ± |f⟩)/√2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AtomOutcome {
    Plus,
    Minus,
}

impl AtomOutcome {
    pub const BOTH: [AtomOutcome; 2] = [AtomOutcome::Plus, AtomOutcome::Minus];

    pub(crate) fn sign(self) -> f64 {
        match self {
            AtomOutcome::Plus => 1.0,
            AtomOutcome::Minus => -1.0,
        }
    }
}

impl fmt::Display for AtomOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AtomOutcome::Plus => "+",
            AtomOutcome::Minus => "-",
        })
    }
}

/// Single-atom corrections, acting in the `{g, f}` basis with `Z|g⟩ = |g⟩`
/// and `X|g⟩ = |f⟩`. `IY` is `iσ_Y`, which undoes `−iσ_Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    Z,
    X,
    IY,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::Z, Pauli::X, Pauli::IY];

    /// Column-major 2×2 matrix: `matrix()[col][row]` is `⟨row|P|col⟩`.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        match self {
            Pauli::I => [[o, z], [z, o]],
            Pauli::Z => [[o, z], [z, -o]],
            Pauli::X => [[z, o], [o, z]],
            // iσ_Y = [[0, 1], [−1, 0]]
            Pauli::IY => [[z, -o], [o, z]],
        }
    }

    /// Applies the operator to a single-atom amplitude pair `(g, f)`.
    pub fn apply(self, g: Complex64, f: Complex64) -> (Complex64, Complex64) {
        let m = self.matrix();
        (m[0][0] * g + m[1][0] * f, m[0][1] * g + m[1][1] * f)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pauli::I => "I",
            Pauli::Z => "Z",
            Pauli::X => "X",
            Pauli::IY => "iY",
        })
    }
}

/// One branch of a projective measurement.
///
/// `probability` is conditional on the input state. When it falls below the
/// backend's impossibility threshold the state is left unnormalized (possibly
/// the zero state) and [`Branch::is_possible`] is false.
#[derive(Clone, Debug)]
pub struct Branch<S> {
    pub state: S,
    pub probability: f64,
    pub(crate) possible: bool,
}

impl<S> Branch<S> {
    pub fn is_possible(&self) -> bool {
        self.possible
    }
}

/// Dense density matrix over a few atoms, stored row-major.
///
/// Basis index: the first atom of the reduction is the most significant bit,
/// `g = 0`, `f = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub(crate) fn zeros(dim: usize) -> Self {
        DensityMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn from_pure(psi: &[Complex64]) -> Self {
        let mut rho = Self::zeros(psi.len());
        for (r, &pr) in psi.iter().enumerate() {
            for (c, &pc) in psi.iter().enumerate() {
                rho.data[r * rho.dim + c] = pr * pc.conj();
            }
        }
        rho
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub(crate) fn add_to(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] += v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    /// `⟨ψ|ρ|ψ⟩ / (tr ρ · ⟨ψ|ψ⟩)`.
    pub fn fidelity_with(&self, psi: &[Complex64]) -> f64 {
        assert_eq!(psi.len(), self.dim, "dimension mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc += psi[r].conj() * self.get(r, c) * psi[c];
            }
        }
        let psi_norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        (acc.re / (self.trace() * psi_norm)).clamp(0.0, 1.0)
    }

    pub fn purity(&self) -> f64 {
        let tr = self.trace();
        let mut acc = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc += (self.get(r, c) * self.get(c, r)).re;
            }
        }
        acc / (tr * tr)
    }
}

/// Tensor product of single-atom amplitude pairs, first factor most significant.
pub fn kron_atoms(factors: &[[Complex64; 2]]) -> Vec<Complex64> {
    factors
        .iter()
        .fold(vec![Complex64::new(1.0, 0.0)], |acc, f| {
            acc.iter().flat_map(|&a| [a * f[0], a * f[1]]).collect()
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn iy_undoes_minus_iy() {
        let (g, f) = (c(0.6, 0.1), c(0.2, -0.7));
        // −iσ_Y = −(iσ_Y)
        let (mg, mf) = Pauli::IY.apply(g, f);
        let (rg, rf) = Pauli::IY.apply(-mg, -mf);
        assert!((rg - g).norm() < 1e-15 && (rf - f).norm() < 1e-15);
    }

    #[test]
    fn pauli_actions() {
        let (a, b) = (c(0.8, 0.0), c(0.0, 0.6));
        assert_eq!(Pauli::Z.apply(a, b), (a, -b));
        assert_eq!(Pauli::X.apply(a, b), (b, a));
        assert_eq!(Pauli::IY.apply(a, b), (b, -a));
    }

    #[test]
    fn pure_fidelity_and_purity() {
        let psi = [c(0.6, 0.0), c(0.0, 0.8)];
        let rho = DensityMatrix::from_pure(&psi);
        assert!((rho.fidelity_with(&psi) - 1.0).abs() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        let orth = [c(0.8, 0.0), c(0.0, -0.6)];
        assert!(rho.fidelity_with(&orth) < 1e-15);
    }

    #[test]
    fn kron_order_first_is_most_significant() {
        let g = [c(1.0, 0.0), c(0.0, 0.0)];
        let f = [c(0.0, 0.0), c(1.0, 0.0)];
        let v = kron_atoms(&[f, g]);
        assert_eq!(v, vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    }
}
