// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

//! Small dense real matrices and the matrix exponential used to build the
//! beam-splitter unitary.

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct RealMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(n: usize) -> Self {
        RealMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n + c] = v;
    }

    pub fn matmul(&self, other: &RealMatrix) -> RealMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        out
    }

    fn scaled(&self, s: f64) -> RealMatrix {
        RealMatrix {
            n: self.n,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Max absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|c| (0..self.n).map(|r| self.get(r, c).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// `exp(a)` by scaling and squaring with a truncated Taylor series.
///
/// The argument is scaled until its 1-norm is at most 1/2, where 24 Taylor
/// terms are far below double-precision rounding.
pub(crate) fn expm(a: &RealMatrix) -> RealMatrix {
    let norm = a.norm1();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let b = a.scaled(0.5f64.powi(squarings));

    let mut result = RealMatrix::identity(a.n);
    let mut term = RealMatrix::identity(a.n);
    for k in 1..=24 {
        term = term.matmul(&b).scaled(1.0 / k as f64);
        for (r, t) in result.data.iter_mut().zip(&term.data) {
            *r += t;
        }
        if term.norm1() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}
