// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

//! Numeric backend: dense amplitudes over truncated photon-number spaces.
//!
//! Basis order is modes first, row-major by mode index (mode 0 is the most
//! significant digit, base `cutoff + 1`), then atoms with atom 0 as the most
//! significant bit and `g = 0`, `f = 1`.

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::cat_algebra::{AtomLabel, HybridState};
use crate::linalg::{expm, RealMatrix};
use crate::{AtomOutcome, Branch, DensityMatrix, Error, Pauli, Register, Result, Threshold};

/// Largest register the backend agrees to allocate.
pub const MAX_AMPLITUDES: usize = 1 << 25;
/// Projections with a smaller probability are reported as impossible.
pub const IMPOSSIBLE_PROB: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Smallest cutoff accepted for a coherent component with `|β|² = mean_photons`.
pub fn required_cutoff(mean_photons: f64) -> usize {
    (mean_photons + 6.0 * mean_photons.max(1.0).sqrt()).ceil() as usize
}

/// Poisson weight the default cutoff is allowed to discard.
pub const LEAKAGE_BOUND: f64 = 1e-8;

/// Cutoff used by the protocol for a given `|α|²`; the largest label it ever
/// stores is `√2α`.
///
/// Starts from [`required_cutoff`] and grows until the Poisson tail is below
/// [`LEAKAGE_BOUND`]. The six-sigma rule alone leaks up to ~1e-5 for small
/// means.
pub fn default_cutoff(alpha_sq: f64) -> usize {
    let mean = 2.0 * alpha_sq;
    let mut cutoff = required_cutoff(mean);
    while truncation_leakage(mean, cutoff) >= LEAKAGE_BOUND {
        cutoff += 1;
    }
    cutoff
}

/// Poisson weight above `cutoff` for mean photon number `mean`.
pub fn truncation_leakage(mean: f64, cutoff: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    // sum the tail directly; 1 − (head sum) loses everything below 1e-16
    let mut log_p = -mean + (cutoff as f64 + 1.0) * mean.ln() - ln_factorial(cutoff + 1);
    let mut tail = 0.0;
    let mut n = cutoff + 1;
    loop {
        let p = log_p.exp();
        tail += p;
        if p < tail * 1e-17 || p == 0.0 {
            break;
        }
        n += 1;
        log_p += mean.ln() - (n as f64).ln();
        if n > cutoff + 10_000 {
            break;
        }
    }
    tail
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Amplitudes `e^{−|β|²/2} βⁿ/√n!` for `n = 0..=cutoff`, renormalized after
/// truncation.
pub fn coherent_vector(beta: Complex64, cutoff: usize) -> Result<Vec<Complex64>> {
    let mean = beta.norm_sqr();
    let required = required_cutoff(mean);
    if cutoff < required {
        return Err(Error::CutoffTooSmall {
            cutoff,
            required,
            mean_photons: mean,
            leakage: truncation_leakage(mean, cutoff),
        });
    }
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut a = Complex64::new((-0.5 * mean).exp(), 0.0);
    amps.push(a);
    for n in 1..=cutoff {
        a = a * beta / (n as f64).sqrt();
        amps.push(a);
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|z| *z /= norm);
    Ok(amps)
}

/// `exp(π/4 (a†b − ab†))` on the truncated two-mode space, one dense block per
/// total photon number (the truncated generator never mixes blocks).
#[derive(Debug)]
struct ExchangeUnitary {
    blocks: Vec<ExchangeBlock>,
}

#[derive(Debug)]
struct ExchangeBlock {
    /// `(n_i, n_j)` pairs, ordered by `n_i`.
    pairs: Vec<(usize, usize)>,
    u: RealMatrix,
}

impl ExchangeUnitary {
    fn build(cutoff: usize) -> Self {
        let blocks = (0..=2 * cutoff)
            .map(|total| {
                let lo = total.saturating_sub(cutoff);
                let hi = total.min(cutoff);
                let pairs: Vec<(usize, usize)> = (lo..=hi).map(|n1| (n1, total - n1)).collect();
                let mut gen = RealMatrix::zeros(pairs.len());
                for (col, &(n1, n2)) in pairs.iter().enumerate() {
                    // a†b: (n1, n2) → (n1 + 1, n2 − 1)
                    if n2 > 0 && n1 < hi {
                        let v = ((n1 + 1) as f64 * n2 as f64).sqrt();
                        gen.set(col + 1, col, gen.get(col + 1, col) + FRAC_PI_4 * v);
                    }
                    // −ab†: (n1, n2) → (n1 − 1, n2 + 1)
                    if n1 > lo {
                        let v = (n1 as f64 * (n2 + 1) as f64).sqrt();
                        gen.set(col - 1, col, gen.get(col - 1, col) - FRAC_PI_4 * v);
                    }
                }
                ExchangeBlock {
                    pairs,
                    u: expm(&gen),
                }
            })
            .collect();
        ExchangeUnitary { blocks }
    }

    fn cached(cutoff: usize) -> Arc<ExchangeUnitary> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ExchangeUnitary>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("beam splitter cache poisoned");
        guard
            .entry(cutoff)
            .or_insert_with(|| Arc::new(ExchangeUnitary::build(cutoff)))
            .clone()
    }
}

/// Dense state vector over `n_modes` truncated oscillators and `n_atoms`
/// two-level atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
    cutoff: usize,
    n_modes: usize,
    n_atoms: usize,
}

impl FockVector {
    fn checked_len(cutoff: usize, n_modes: usize, n_atoms: usize) -> Result<usize> {
        let too_large = Error::RegisterTooLarge {
            amplitudes: usize::MAX,
            limit: MAX_AMPLITUDES,
        };
        let modes = (cutoff + 1)
            .checked_pow(n_modes as u32)
            .ok_or(too_large.clone())?;
        let len = modes
            .checked_mul(
                1usize
                    .checked_shl(n_atoms as u32)
                    .ok_or(too_large.clone())?,
            )
            .ok_or(too_large)?;
        if len > MAX_AMPLITUDES {
            return Err(Error::RegisterTooLarge {
                amplitudes: len,
                limit: MAX_AMPLITUDES,
            });
        }
        Ok(len)
    }

    /// Product state from one amplitude vector per mode (each of length
    /// `cutoff + 1`) and one `(g, f)` pair per atom.
    pub fn product(
        modes: &[Vec<Complex64>],
        atoms: &[[Complex64; 2]],
        cutoff: usize,
    ) -> Result<Self> {
        if modes.iter().any(|m| m.len() != cutoff + 1) {
            return Err(Error::ShapeMismatch);
        }
        Self::checked_len(cutoff, modes.len(), atoms.len())?;
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for m in modes {
            amps = amps
                .iter()
                .flat_map(|&a| m.iter().map(move |&b| a * b))
                .collect();
        }
        for at in atoms {
            amps = amps.iter().flat_map(|&a| [a * at[0], a * at[1]]).collect();
        }
        Ok(FockVector {
            amps,
            cutoff,
            n_modes: modes.len(),
            n_atoms: atoms.len(),
        })
    }

    /// All modes in vacuum and all atoms in `|g⟩`.
    pub fn vacuum(n_modes: usize, n_atoms: usize, cutoff: usize) -> Result<Self> {
        let mut vac = vec![ZERO; cutoff + 1];
        vac[0] = Complex64::new(1.0, 0.0);
        let g = [Complex64::new(1.0, 0.0), ZERO];
        Self::product(&vec![vac; n_modes], &vec![g; n_atoms], cutoff)
    }

    /// Expands an exact-backend state in the truncated number basis.
    pub fn from_hybrid(state: &HybridState, cutoff: usize) -> Result<Self> {
        let len = Self::checked_len(cutoff, state.n_modes(), state.n_atoms())?;
        let mut amps = vec![ZERO; len];
        for term in state.terms() {
            let modes = term
                .modes
                .iter()
                .map(|l| coherent_vector(l.0, cutoff))
                .collect::<Result<Vec<_>>>()?;
            let atoms: Vec<[Complex64; 2]> = term
                .atoms
                .iter()
                .map(|a| match a {
                    AtomLabel::G => [Complex64::new(1.0, 0.0), ZERO],
                    AtomLabel::F => [ZERO, Complex64::new(1.0, 0.0)],
                })
                .collect();
            let p = FockVector::product(&modes, &atoms, cutoff)?;
            for (acc, v) in amps.iter_mut().zip(&p.amps) {
                *acc += term.coeff * v;
            }
        }
        Ok(FockVector {
            amps,
            cutoff,
            n_modes: state.n_modes(),
            n_atoms: state.n_atoms(),
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn mode_dim(&self) -> usize {
        self.cutoff + 1
    }

    fn atom_dim(&self) -> usize {
        1 << self.n_atoms
    }

    fn mode_stride(&self, mode: usize) -> usize {
        self.mode_dim().pow((self.n_modes - 1 - mode) as u32) * self.atom_dim()
    }

    fn atom_mask(&self, atom: usize) -> usize {
        1 << (self.n_atoms - 1 - atom)
    }

    /// Flat index of a basis state.
    pub fn index_of(&self, photons: &[usize], atoms: &[AtomLabel]) -> usize {
        assert_eq!(photons.len(), self.n_modes);
        assert_eq!(atoms.len(), self.n_atoms);
        let d = self.mode_dim();
        let m = photons.iter().fold(0, |acc, &n| {
            assert!(n < d, "photon number above cutoff");
            acc * d + n
        });
        let a = atoms.iter().fold(0, |acc, l| (acc << 1) | l.bit());
        m * self.atom_dim() + a
    }

    /// Inverse of [`FockVector::index_of`].
    pub fn decompose(&self, index: usize) -> (Vec<usize>, Vec<AtomLabel>) {
        let d = self.mode_dim();
        let photons = (0..self.n_modes)
            .map(|k| (index / self.mode_stride(k)) % d)
            .collect();
        let a = index % self.atom_dim();
        let atoms = (0..self.n_atoms)
            .map(|k| {
                if a & self.atom_mask(k) == 0 {
                    AtomLabel::G
                } else {
                    AtomLabel::F
                }
            })
            .collect();
        (photons, atoms)
    }

    fn check_mode(&self, index: usize) -> Result<()> {
        if index >= self.n_modes {
            return Err(Error::ModeOutOfRange {
                index,
                n_modes: self.n_modes,
            });
        }
        Ok(())
    }

    fn check_atom(&self, index: usize) -> Result<()> {
        if index >= self.n_atoms {
            return Err(Error::AtomOutOfRange {
                index,
                n_atoms: self.n_atoms,
            });
        }
        Ok(())
    }

    fn check_shape(&self, other: &FockVector) -> Result<()> {
        if self.cutoff != other.cutoff
            || self.n_modes != other.n_modes
            || self.n_atoms != other.n_atoms
        {
            return Err(Error::ShapeMismatch);
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        self.check_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn l2_norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&self) -> Result<FockVector> {
        let n = self.l2_norm();
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        let mut out = self.clone();
        out.amps.iter_mut().for_each(|z| *z /= n);
        Ok(out)
    }

    /// 50:50 beam splitter on modes `(i, j)`: the photon-exchange rotation
    /// `exp(π/4 (a_i† a_j − a_i a_j†))` followed by the parity `(−1)^{n_j}`,
    /// which together map coherent `(u, v)` to `((u+v)/√2, (u−v)/√2)`.
    pub fn bs_apply(&self, i: usize, j: usize) -> Result<FockVector> {
        self.check_mode(i)?;
        self.check_mode(j)?;
        if i == j {
            return Err(Error::SameMode(i));
        }
        let unitary = ExchangeUnitary::cached(self.cutoff);
        let d = self.mode_dim();
        let (si, sj) = (self.mode_stride(i), self.mode_stride(j));
        let mut out = self.clone();
        let mut scratch_in = Vec::with_capacity(d);
        let mut scratch_out = Vec::with_capacity(d);
        for base in 0..self.amps.len() {
            if (base / si) % d != 0 || (base / sj) % d != 0 {
                continue;
            }
            for block in &unitary.blocks {
                scratch_in.clear();
                scratch_in.extend(
                    block
                        .pairs
                        .iter()
                        .map(|&(n1, n2)| self.amps[base + n1 * si + n2 * sj]),
                );
                scratch_out.clear();
                for r in 0..block.pairs.len() {
                    let mut acc = ZERO;
                    for (c, x) in scratch_in.iter().enumerate() {
                        acc += x * block.u.get(r, c);
                    }
                    scratch_out.push(acc);
                }
                for (&(n1, n2), &y) in block.pairs.iter().zip(&scratch_out) {
                    out.amps[base + n1 * si + n2 * sj] = if n2 % 2 == 1 { -y } else { y };
                }
            }
        }
        Ok(out)
    }

    /// `(−1)^n` on `mode`, applied only where `atom` is in `|g⟩`.
    pub fn conditional_parity(&self, mode: usize, atom: usize) -> Result<FockVector> {
        self.check_mode(mode)?;
        self.check_atom(atom)?;
        let d = self.mode_dim();
        let stride = self.mode_stride(mode);
        let mask = self.atom_mask(atom);
        let mut out = self.clone();
        for (idx, z) in out.amps.iter_mut().enumerate() {
            if idx & mask == 0 && ((idx / stride) % d) % 2 == 1 {
                *z = -*z;
            }
        }
        Ok(out)
    }

    fn finish_projection(&self, projected: FockVector) -> Result<Branch<FockVector>> {
        let n_in = self.l2_norm();
        if n_in == 0.0 {
            return Err(Error::ZeroState);
        }
        let n_out = projected.l2_norm();
        let probability = (n_out / n_in).powi(2);
        if probability < IMPOSSIBLE_PROB {
            return Ok(Branch {
                state: projected,
                probability,
                possible: false,
            });
        }
        let mut state = projected;
        state.amps.iter_mut().for_each(|z| *z /= n_out);
        Ok(Branch {
            state,
            probability,
            possible: true,
        })
    }

    pub fn measure_threshold(&self, mode: usize, outcome: Threshold) -> Result<Branch<FockVector>> {
        self.check_mode(mode)?;
        let d = self.mode_dim();
        let stride = self.mode_stride(mode);
        let mut projected = self.clone();
        for (idx, z) in projected.amps.iter_mut().enumerate() {
            let vacuum = (idx / stride).is_multiple_of(d);
            if vacuum != (outcome == Threshold::Off) {
                *z = ZERO;
            }
        }
        self.finish_projection(projected)
    }

    /// Probability of no photon in `mode`.
    pub fn vacuum_probability(&self, mode: usize) -> Result<f64> {
        Ok(self.measure_threshold(mode, Threshold::Off)?.probability)
    }

    fn map_atom_pairs(
        &self,
        atom: usize,
        f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64),
    ) -> FockVector {
        let mask = self.atom_mask(atom);
        let mut out = self.clone();
        for idx in 0..self.amps.len() {
            if idx & mask != 0 {
                continue;
            }
            let (g, fv) = f(self.amps[idx], self.amps[idx | mask]);
            out.amps[idx] = g;
            out.amps[idx | mask] = fv;
        }
        out
    }

    pub fn project_atom(&self, atom: usize, outcome: AtomOutcome) -> Result<Branch<FockVector>> {
        self.check_atom(atom)?;
        let s = outcome.sign();
        let projected = self.map_atom_pairs(atom, |g, f| {
            let amp = (g + f * s) * FRAC_1_SQRT_2;
            (amp * FRAC_1_SQRT_2, amp * (s * FRAC_1_SQRT_2))
        });
        self.finish_projection(projected)
    }

    pub fn apply_pauli(&self, atom: usize, op: Pauli) -> Result<FockVector> {
        self.check_atom(atom)?;
        Ok(self.map_atom_pairs(atom, |g, f| op.apply(g, f)))
    }

    pub fn append_mode(&self, mode: &[Complex64]) -> Result<FockVector> {
        if mode.len() != self.mode_dim() {
            return Err(Error::ShapeMismatch);
        }
        Self::checked_len(self.cutoff, self.n_modes + 1, self.n_atoms)?;
        let a_dim = self.atom_dim();
        let mut amps = Vec::with_capacity(self.amps.len() * mode.len());
        for chunk in self.amps.chunks(a_dim) {
            for &m in mode {
                amps.extend(chunk.iter().map(|&z| z * m));
            }
        }
        Ok(FockVector {
            amps,
            cutoff: self.cutoff,
            n_modes: self.n_modes + 1,
            n_atoms: self.n_atoms,
        })
    }

    pub fn reduced_atoms(&self, atoms: &[usize]) -> Result<DensityMatrix> {
        for &a in atoms {
            self.check_atom(a)?;
        }
        let a_dim = self.atom_dim();
        let kept_mask: usize = atoms.iter().map(|&a| self.atom_mask(a)).sum();
        let sub = |idx: usize| {
            atoms.iter().fold(0, |acc, &a| {
                (acc << 1) | usize::from(idx & self.atom_mask(a) != 0)
            })
        };
        let mut rho = DensityMatrix::zeros(1 << atoms.len());
        for chunk in self.amps.chunks(a_dim) {
            for p in 0..a_dim {
                if chunk[p] == ZERO {
                    continue;
                }
                for q in 0..a_dim {
                    if (p & !kept_mask) == (q & !kept_mask) {
                        rho.add_to(sub(p), sub(q), chunk[p] * chunk[q].conj());
                    }
                }
            }
        }
        if rho.trace() <= 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(rho)
    }
}

impl Register for FockVector {
    type Params = usize;

    fn even_cat(beta: Complex64, cutoff: &usize) -> Result<Self> {
        let plus = coherent_vector(beta, *cutoff)?;
        let minus = coherent_vector(-beta, *cutoff)?;
        let sum: Vec<Complex64> = plus.iter().zip(&minus).map(|(a, b)| a + b).collect();
        FockVector::product(&[sum], &[], *cutoff)?.normalize()
    }

    fn n_modes(&self) -> usize {
        self.n_modes
    }

    fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    fn size(&self) -> usize {
        self.amps.iter().filter(|z| **z != ZERO).count()
    }

    fn norm(&self) -> Result<f64> {
        Ok(self.l2_norm())
    }

    fn append_coherent(&self, beta: Complex64) -> Result<Self> {
        self.append_mode(&coherent_vector(beta, self.cutoff)?)
    }

    fn append_atom(&self, g: Complex64, f: Complex64) -> Result<Self> {
        Self::checked_len(self.cutoff, self.n_modes, self.n_atoms + 1)?;
        let amps = self.amps.iter().flat_map(|&z| [z * g, z * f]).collect();
        Ok(FockVector {
            amps,
            cutoff: self.cutoff,
            n_modes: self.n_modes,
            n_atoms: self.n_atoms + 1,
        })
    }

    fn beam_splitter(&self, i: usize, j: usize) -> Result<Self> {
        self.bs_apply(i, j)
    }

    fn cavity_reflect(&self, mode: usize, atom: usize) -> Result<Self> {
        self.conditional_parity(mode, atom)
    }

    fn project_threshold(&self, mode: usize, outcome: Threshold) -> Result<Branch<Self>> {
        self.measure_threshold(mode, outcome)
    }

    fn project_atom(&self, atom: usize, outcome: AtomOutcome) -> Result<Branch<Self>> {
        FockVector::project_atom(self, atom, outcome)
    }

    fn apply_pauli(&self, atom: usize, op: Pauli) -> Result<Self> {
        FockVector::apply_pauli(self, atom, op)
    }

    fn reduced_atoms(&self, atoms: &[usize]) -> Result<DensityMatrix> {
        FockVector::reduced_atoms(self, atoms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat_algebra::{coherent_overlap, CoherentLabel};
    use approx::assert_abs_diff_eq;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn single(beta: f64, cutoff: usize) -> Vec<Complex64> {
        coherent_vector(re(beta), cutoff).unwrap()
    }

    fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    #[test]
    fn cutoff_rules() {
        assert_eq!(required_cutoff(0.0), 6);
        assert_eq!(required_cutoff(2.0), 11); // ceil(2 + 6√2)
        assert_eq!(required_cutoff(4.0), 16);
        assert_eq!(default_cutoff(0.0), 6);
        assert_eq!(default_cutoff(1.0), 14);
        assert_eq!(default_cutoff(2.0), 20);
        for alpha_sq in [0.25, 0.5, 1.0, 2.0, 3.0, 4.0] {
            let c = default_cutoff(alpha_sq);
            assert!(
                truncation_leakage(2.0 * alpha_sq, c) < LEAKAGE_BOUND,
                "alpha_sq {alpha_sq}"
            );
            assert!(
                truncation_leakage(2.0 * alpha_sq, c - 1) >= LEAKAGE_BOUND
                    || c == required_cutoff(2.0 * alpha_sq)
            );
        }
    }

    #[test]
    fn coherent_vector_examples() {
        let vac = single(0.0, 6);
        assert_eq!(vac[0], re(1.0));
        assert!(vac[1..].iter().all(|z| *z == ZERO));

        let v = single(2f64.sqrt(), 20);
        assert_abs_diff_eq!(v[0].re, 0.367_879_441_171_442_3, epsilon = 1e-12);

        let plus = single(1.0, 20);
        let minus = single(-1.0, 20);
        assert_abs_diff_eq!(dot(&plus, &minus).re, (-2f64).exp(), epsilon = 1e-8);
    }

    #[test]
    fn coherent_vector_rejects_small_cutoff() {
        let err = coherent_vector(re(2.0), 5).unwrap_err();
        match err {
            Error::CutoffTooSmall {
                cutoff,
                required,
                leakage,
                ..
            } => {
                assert_eq!(cutoff, 5);
                assert_eq!(required, 16);
                assert!(leakage > 1e-3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coherent_vector_matches_analytic_overlap() {
        let labels = [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.2, -0.4),
            Complex64::new(-2.1, 0.7),
            Complex64::new(0.3, 2.9),
        ];
        let cutoff = required_cutoff(9.0);
        for &b in &labels {
            for &g in &labels {
                let num = dot(
                    &coherent_vector(b, cutoff).unwrap(),
                    &coherent_vector(g, cutoff).unwrap(),
                );
                let exact = coherent_overlap(CoherentLabel(b), CoherentLabel(g));
                assert!((num - exact).norm() < 1e-8, "{b} {g}: {num} vs {exact}");
            }
        }
    }

    #[test]
    fn index_round_trip() {
        let v = FockVector::vacuum(3, 2, 4).unwrap();
        for idx in 0..v.amplitudes().len() {
            let (p, a) = v.decompose(idx);
            assert_eq!(v.index_of(&p, &a), idx);
        }
        assert_eq!(v.index_of(&[0, 0, 1], &[AtomLabel::G, AtomLabel::G]), 4);
        assert_eq!(
            v.index_of(&[1, 0, 0], &[AtomLabel::F, AtomLabel::G]),
            25 * 4 + 2
        );
    }

    #[test]
    fn beam_splitter_examples() {
        let alpha = 1.0;
        let cutoff = default_cutoff(alpha * alpha);
        let input = FockVector::product(
            &[single(2f64.sqrt() * alpha, cutoff), single(0.0, cutoff)],
            &[],
            cutoff,
        )
        .unwrap();
        let out = input.bs_apply(0, 1).unwrap();
        let want =
            FockVector::product(&[single(alpha, cutoff), single(alpha, cutoff)], &[], cutoff)
                .unwrap();
        assert!(out.inner(&want).unwrap().norm() >= 1.0 - 1e-8);

        let vac = FockVector::vacuum(2, 0, cutoff).unwrap();
        assert!(vac.bs_apply(0, 1).unwrap().inner(&vac).unwrap().norm() >= 1.0 - 1e-12);

        let twice = out.bs_apply(0, 1).unwrap();
        assert!(twice.inner(&input).unwrap().norm() >= 1.0 - 1e-8);
    }

    #[test]
    fn beam_splitter_sign_convention() {
        let cutoff = required_cutoff(4.0);
        let a = 1.0;
        let r2 = 2f64.sqrt();
        for ((u, v), (p, q)) in [
            ((a, a), (r2 * a, 0.0)),
            ((-a, a), (0.0, -r2 * a)),
            ((a, -a), (0.0, r2 * a)),
        ] {
            let out = FockVector::product(&[single(u, cutoff), single(v, cutoff)], &[], cutoff)
                .unwrap()
                .bs_apply(0, 1)
                .unwrap();
            let want =
                FockVector::product(&[single(p, cutoff), single(q, cutoff)], &[], cutoff).unwrap();
            assert!(out.inner(&want).unwrap().norm() >= 1.0 - 1e-8, "({u}, {v})");
        }
    }

    #[test]
    fn beam_splitter_on_non_adjacent_modes() {
        let cutoff = 16;
        let input = FockVector::product(
            &[
                single(1.0, cutoff),
                single(0.3, cutoff),
                single(0.5, cutoff),
            ],
            &[],
            cutoff,
        )
        .unwrap();
        let h = FRAC_1_SQRT_2;
        let out = input.bs_apply(2, 0).unwrap();
        let want = FockVector::product(
            &[
                single((0.5 - 1.0) * h, cutoff),
                single(0.3, cutoff),
                single((0.5 + 1.0) * h, cutoff),
            ],
            &[],
            cutoff,
        )
        .unwrap();
        assert!(out.inner(&want).unwrap().norm() >= 1.0 - 1e-8);
        assert_eq!(input.bs_apply(1, 1), Err(Error::SameMode(1)));
        assert!(input.bs_apply(0, 3).is_err());
    }

    #[test]
    fn conditional_parity_examples() {
        let cutoff = 12;
        let a = 1.1;
        let g = [re(1.0), ZERO];
        let f = [ZERO, re(1.0)];
        let gv = FockVector::product(&[single(a, cutoff)], &[g], cutoff).unwrap();
        let flipped = gv.conditional_parity(0, 0).unwrap();
        let want = FockVector::product(&[single(-a, cutoff)], &[g], cutoff).unwrap();
        assert!(flipped.inner(&want).unwrap().norm() >= 1.0 - 1e-8);

        let fv = FockVector::product(&[single(a, cutoff)], &[f], cutoff).unwrap();
        assert_eq!(fv.conditional_parity(0, 0).unwrap(), fv);

        let gvac = FockVector::vacuum(1, 1, cutoff).unwrap();
        assert_eq!(gvac.conditional_parity(0, 0).unwrap(), gvac);
        assert!(gvac.conditional_parity(0, 1).is_err());
    }

    #[test]
    fn threshold_examples() {
        let cutoff = default_cutoff(1.0);
        let vac = FockVector::vacuum(1, 0, cutoff).unwrap();
        assert_abs_diff_eq!(vac.vacuum_probability(0).unwrap(), 1.0);
        assert!(!vac
            .measure_threshold(0, Threshold::On)
            .unwrap()
            .is_possible());

        let s = FockVector::product(&[single(2f64.sqrt(), cutoff)], &[], cutoff).unwrap();
        let off = s.measure_threshold(0, Threshold::Off).unwrap();
        let on = s.measure_threshold(0, Threshold::On).unwrap();
        assert_abs_diff_eq!(off.probability, (-2f64).exp(), epsilon = 1e-8);
        assert_abs_diff_eq!(off.probability + on.probability, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn from_hybrid_matches_direct_product() {
        let cutoff = 10;
        let h = HybridState::product(
            &[CoherentLabel::real(0.7), CoherentLabel::real(-0.2)],
            &[AtomLabel::F],
        );
        let v = FockVector::from_hybrid(&h, cutoff).unwrap();
        let direct = FockVector::product(
            &[single(0.7, cutoff), single(-0.2, cutoff)],
            &[[ZERO, re(1.0)]],
            cutoff,
        )
        .unwrap();
        assert!((v.inner(&direct).unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn register_size_guard() {
        assert!(matches!(
            FockVector::vacuum(6, 2, 40),
            Err(Error::RegisterTooLarge { .. })
        ));
    }

    #[test]
    fn atom_ops() {
        let m = [re(0.6), Complex64::new(0.0, 0.8)];
        let v = FockVector::product(&[single(0.5, 8)], &[m], 8).unwrap();
        let rho = v.reduced_atoms(&[0]).unwrap();
        assert_abs_diff_eq!(rho.fidelity_with(&m), 1.0, epsilon = 1e-14);
        let p = v.project_atom(0, AtomOutcome::Plus).unwrap().probability;
        let q = v.project_atom(0, AtomOutcome::Minus).unwrap().probability;
        assert_abs_diff_eq!(p + q, 1.0, epsilon = 1e-12);
        // ⟨+|M⟩ = (0.6 + 0.8i)/√2
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);
        let x = v
            .apply_pauli(0, Pauli::X)
            .unwrap()
            .reduced_atoms(&[0])
            .unwrap();
        assert_abs_diff_eq!(x.fidelity_with(&[m[1], m[0]]), 1.0, epsilon = 1e-14);
    }
}
