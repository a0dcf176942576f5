// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact backend: finite superpositions of multimode coherent states tensored
//! with atomic basis states.
//!
//! Coherent states are not orthogonal, so every norm and probability goes
//! through the Gram matrix of the stored terms, using
//! `⟨β|γ⟩ = exp(−|β|²/2 − |γ|²/2 + β*γ)` per mode and Kronecker deltas for
//! atoms. Labels in the protocol come from the closed set `{0, ±α, ±√2α}`, so
//! the term count stays small (tens) and the Gram sum is evaluated directly.

use std::fmt;

use num_complex::Complex64;

use crate::{AtomOutcome, Branch, DensityMatrix, Error, Pauli, Register, Result, Threshold};

/// Two labels closer than this are the same coherent state.
pub const LABEL_MERGE_TOL: f64 = 1e-12;
/// Terms with a smaller coefficient modulus are dropped by [`HybridState::simplify`].
pub const COEFF_DROP_TOL: f64 = 1e-14;
/// Projections with a smaller probability are reported as impossible.
pub const IMPOSSIBLE_PROB: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Amplitude of a coherent state. The zero label is the vacuum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentLabel(pub Complex64);

impl CoherentLabel {
    pub const VACUUM: CoherentLabel = CoherentLabel(ZERO);

    pub fn real(x: f64) -> Self {
        CoherentLabel(Complex64::new(x, 0.0))
    }

    pub fn is_vacuum(self) -> bool {
        self.0.norm() <= LABEL_MERGE_TOL
    }

    fn same(self, other: CoherentLabel) -> bool {
        (self.0 - other.0).norm() <= LABEL_MERGE_TOL
    }
}

impl From<Complex64> for CoherentLabel {
    fn from(z: Complex64) -> Self {
        CoherentLabel(z)
    }
}

/// Ground hyperfine levels of a trapped atom. The excited level is never stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomLabel {
    G,
    F,
}

impl AtomLabel {
    pub(crate) fn bit(self) -> usize {
        match self {
            AtomLabel::G => 0,
            AtomLabel::F => 1,
        }
    }

    fn flipped(self) -> AtomLabel {
        match self {
            AtomLabel::G => AtomLabel::F,
            AtomLabel::F => AtomLabel::G,
        }
    }
}

/// Exact inner product `⟨b1|b2⟩` of two coherent states.
pub fn coherent_overlap(b1: CoherentLabel, b2: CoherentLabel) -> Complex64 {
    overlap_exponent(b1, b2).exp()
}

#[inline]
fn overlap_exponent(b1: CoherentLabel, b2: CoherentLabel) -> Complex64 {
    let (u, v) = (b1.0, b2.0);
    Complex64::new(-0.5 * (u.norm_sqr() + v.norm_sqr()), 0.0) + u.conj() * v
}

#[derive(Clone, Debug, PartialEq)]
pub struct HybridTerm {
    pub coeff: Complex64,
    pub modes: Vec<CoherentLabel>,
    pub atoms: Vec<AtomLabel>,
}

impl HybridTerm {
    fn same_labels(&self, other: &HybridTerm) -> bool {
        self.atoms == other.atoms && self.modes.iter().zip(&other.modes).all(|(a, b)| a.same(*b))
    }

    /// `⟨self|other⟩` for the label parts only (coefficients excluded).
    fn label_overlap(&self, other: &HybridTerm) -> Complex64 {
        if self.atoms != other.atoms {
            return ZERO;
        }
        let exponent: Complex64 = self
            .modes
            .iter()
            .zip(&other.modes)
            .map(|(a, b)| overlap_exponent(*a, *b))
            .sum();
        exponent.exp()
    }
}

/// A weighted sum of product terms, `Σ cᵢ |β_i1 … β_im⟩ ⊗ |l_i1 … l_ik⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridState {
    terms: Vec<HybridTerm>,
    n_modes: usize,
    n_atoms: usize,
}

impl HybridState {
    /// The empty (zero) state on a register of the given shape.
    pub fn zero(n_modes: usize, n_atoms: usize) -> Self {
        HybridState {
            terms: Vec::new(),
            n_modes,
            n_atoms,
        }
    }

    /// Single product term with unit coefficient.
    pub fn product(modes: &[CoherentLabel], atoms: &[AtomLabel]) -> Self {
        HybridState {
            terms: vec![HybridTerm {
                coeff: ONE,
                modes: modes.to_vec(),
                atoms: atoms.to_vec(),
            }],
            n_modes: modes.len(),
            n_atoms: atoms.len(),
        }
    }

    pub fn coherent(beta: impl Into<CoherentLabel>) -> Self {
        Self::product(&[beta.into()], &[])
    }

    /// Single atom `g|g⟩ + f|f⟩`, no modes.
    pub fn atom(g: Complex64, f: Complex64) -> Self {
        Self::from_terms(
            0,
            1,
            vec![
                HybridTerm {
                    coeff: g,
                    modes: vec![],
                    atoms: vec![AtomLabel::G],
                },
                HybridTerm {
                    coeff: f,
                    modes: vec![],
                    atoms: vec![AtomLabel::F],
                },
            ],
        )
        .expect("shape is consistent")
    }

    pub fn from_terms(n_modes: usize, n_atoms: usize, terms: Vec<HybridTerm>) -> Result<Self> {
        if terms
            .iter()
            .any(|t| t.modes.len() != n_modes || t.atoms.len() != n_atoms)
        {
            return Err(Error::ShapeMismatch);
        }
        Ok(HybridState {
            terms,
            n_modes,
            n_atoms,
        }
        .simplify())
    }

    pub fn terms(&self) -> &[HybridTerm] {
        &self.terms
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Tensor product; modes of `self` come first, then those of `other`
    /// (likewise for atoms).
    pub fn tensor(&self, other: &HybridState) -> HybridState {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(HybridTerm {
                    coeff: a.coeff * b.coeff,
                    modes: a.modes.iter().chain(&b.modes).copied().collect(),
                    atoms: a.atoms.iter().chain(&b.atoms).copied().collect(),
                });
            }
        }
        HybridState {
            terms,
            n_modes: self.n_modes + other.n_modes,
            n_atoms: self.n_atoms + other.n_atoms,
        }
        .simplify()
    }

    pub fn scale(&self, factor: Complex64) -> HybridState {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= factor;
        }
        out.simplify()
    }

    /// `self + other`, both on the same register shape.
    pub fn add(&self, other: &HybridState) -> Result<HybridState> {
        self.check_shape(other)?;
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out.simplify())
    }

    fn check_shape(&self, other: &HybridState) -> Result<()> {
        if self.n_modes != other.n_modes || self.n_atoms != other.n_atoms {
            return Err(Error::ShapeMismatch);
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &HybridState) -> Result<Complex64> {
        self.check_shape(other)?;
        let mut acc = ZERO;
        for a in &self.terms {
            for b in &other.terms {
                acc += a.coeff.conj() * b.coeff * a.label_overlap(b);
            }
        }
        Ok(acc)
    }

    /// Norm from the full Gram double sum.
    pub fn gram_norm(&self) -> Result<f64> {
        let mut radicand = 0.0;
        for (i, a) in self.terms.iter().enumerate() {
            radicand += a.coeff.norm_sqr();
            for b in &self.terms[i + 1..] {
                radicand += 2.0 * (a.coeff.conj() * b.coeff * a.label_overlap(b)).re;
            }
        }
        if radicand < -1e-10 {
            return Err(Error::InconsistentGram { radicand });
        }
        Ok(radicand.max(0.0).sqrt())
    }

    pub fn normalize(&self) -> Result<HybridState> {
        let n = self.gram_norm()?;
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    /// Merges terms whose labels agree within [`LABEL_MERGE_TOL`] and drops
    /// coefficients below [`COEFF_DROP_TOL`].
    pub fn simplify(&self) -> HybridState {
        let mut merged: Vec<HybridTerm> = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            match merged.iter_mut().find(|m| m.same_labels(t)) {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(t.clone()),
            }
        }
        merged.retain(|t| t.coeff.norm() >= COEFF_DROP_TOL);
        HybridState {
            terms: merged,
            n_modes: self.n_modes,
            n_atoms: self.n_atoms,
        }
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

    fn map_terms(&self, f: impl Fn(&HybridTerm) -> Vec<HybridTerm>) -> HybridState {
        HybridState {
            terms: self.terms.iter().flat_map(f).collect(),
            n_modes: self.n_modes,
            n_atoms: self.n_atoms,
        }
        .simplify()
    }

    pub fn beam_splitter(&self, i: usize, j: usize) -> Result<HybridState> {
        self.check_mode(i)?;
        self.check_mode(j)?;
        if i == j {
            return Err(Error::SameMode(i));
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Ok(self.map_terms(|t| {
            let mut t = t.clone();
            let (u, v) = (t.modes[i].0, t.modes[j].0);
            t.modes[i] = CoherentLabel((u + v) * h);
            t.modes[j] = CoherentLabel((u - v) * h);
            vec![t]
        }))
    }

    pub fn cavity_reflect(&self, mode: usize, atom: usize) -> Result<HybridState> {
        self.check_mode(mode)?;
        self.check_atom(atom)?;
        Ok(self.map_terms(|t| {
            let mut t = t.clone();
            if t.atoms[atom] == AtomLabel::G {
                t.modes[mode] = CoherentLabel(-t.modes[mode].0);
            }
            vec![t]
        }))
    }

    /// Vacuum projection `|0⟩⟨0|` at `mode`, unnormalized.
    fn vacuum_part(&self, mode: usize) -> HybridState {
        self.map_terms(|t| {
            let mut t = t.clone();
            t.coeff *= coherent_overlap(CoherentLabel::VACUUM, t.modes[mode]);
            t.modes[mode] = CoherentLabel::VACUUM;
            vec![t]
        })
    }

    fn finish_projection(&self, projected: HybridState) -> Result<Branch<HybridState>> {
        let n_in = self.gram_norm()?;
        if n_in == 0.0 {
            return Err(Error::ZeroState);
        }
        let n_out = projected.gram_norm()?;
        let probability = (n_out / n_in).powi(2);
        if probability < IMPOSSIBLE_PROB {
            return Ok(Branch {
                state: projected,
                probability,
                possible: false,
            });
        }
        let state = projected.scale(Complex64::new(1.0 / n_out, 0.0));
        Ok(Branch {
            state,
            probability,
            possible: true,
        })
    }

    pub fn project_threshold(
        &self,
        mode: usize,
        outcome: Threshold,
    ) -> Result<Branch<HybridState>> {
        self.check_mode(mode)?;
        let off = self.vacuum_part(mode);
        let projected = match outcome {
            Threshold::Off => off,
            Threshold::On => self.add(&off.scale(-ONE))?,
        };
        self.finish_projection(projected)
    }

    pub fn project_atom(&self, atom: usize, outcome: AtomOutcome) -> Result<Branch<HybridState>> {
        self.check_atom(atom)?;
        let s = outcome.sign();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // |±⟩⟨±| l⟩ = ⟨±|l⟩ (|g⟩ ± |f⟩)/√2
        let projected = self.map_terms(|t| {
            let amp = match t.atoms[atom] {
                AtomLabel::G => h,
                AtomLabel::F => s * h,
            };
            let mut tg = t.clone();
            tg.coeff *= amp * h;
            tg.atoms[atom] = AtomLabel::G;
            let mut tf = t.clone();
            tf.coeff *= amp * s * h;
            tf.atoms[atom] = AtomLabel::F;
            vec![tg, tf]
        });
        self.finish_projection(projected)
    }

    pub fn apply_pauli(&self, atom: usize, op: Pauli) -> Result<HybridState> {
        self.check_atom(atom)?;
        Ok(self.map_terms(|t| {
            let mut t = t.clone();
            match op {
                Pauli::I => {}
                Pauli::Z => {
                    if t.atoms[atom] == AtomLabel::F {
                        t.coeff = -t.coeff;
                    }
                }
                Pauli::X => t.atoms[atom] = t.atoms[atom].flipped(),
                Pauli::IY => {
                    // iσ_Y: |g⟩ → −|f⟩, |f⟩ → |g⟩
                    if t.atoms[atom] == AtomLabel::G {
                        t.coeff = -t.coeff;
                    }
                    t.atoms[atom] = t.atoms[atom].flipped();
                }
            }
            vec![t]
        }))
    }

    pub fn reduced_atoms(&self, atoms: &[usize]) -> Result<DensityMatrix> {
        for &a in atoms {
            self.check_atom(a)?;
        }
        let kept = |t: &HybridTerm| {
            atoms
                .iter()
                .fold(0usize, |acc, &a| (acc << 1) | t.atoms[a].bit())
        };
        let rest_equal = |a: &HybridTerm, b: &HybridTerm| {
            (0..self.n_atoms).all(|k| atoms.contains(&k) || a.atoms[k] == b.atoms[k])
        };
        let mut rho = DensityMatrix::zeros(1 << atoms.len());
        for ti in &self.terms {
            for tj in &self.terms {
                if !rest_equal(ti, tj) {
                    continue;
                }
                let optical: Complex64 = tj
                    .modes
                    .iter()
                    .zip(&ti.modes)
                    .map(|(b, a)| overlap_exponent(*b, *a))
                    .sum::<Complex64>()
                    .exp();
                rho.add_to(kept(ti), kept(tj), ti.coeff * tj.coeff.conj() * optical);
            }
        }
        if rho.trace() <= 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(rho)
    }
}

impl Register for HybridState {
    type Params = ();

    fn even_cat(beta: Complex64, _: &()) -> Result<Self> {
        HybridState::coherent(beta)
            .add(&HybridState::coherent(-beta))?
            .normalize()
    }

    fn n_modes(&self) -> usize {
        self.n_modes
    }

    fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    fn size(&self) -> usize {
        self.terms.len()
    }

    fn norm(&self) -> Result<f64> {
        self.gram_norm()
    }

    fn append_coherent(&self, beta: Complex64) -> Result<Self> {
        Ok(self.tensor(&HybridState::coherent(beta)))
    }

    fn append_atom(&self, g: Complex64, f: Complex64) -> Result<Self> {
        Ok(self.tensor(&HybridState::atom(g, f)))
    }

    fn beam_splitter(&self, i: usize, j: usize) -> Result<Self> {
        HybridState::beam_splitter(self, i, j)
    }

    fn cavity_reflect(&self, mode: usize, atom: usize) -> Result<Self> {
        HybridState::cavity_reflect(self, mode, atom)
    }

    fn project_threshold(&self, mode: usize, outcome: Threshold) -> Result<Branch<Self>> {
        HybridState::project_threshold(self, mode, outcome)
    }

    fn project_atom(&self, atom: usize, outcome: AtomOutcome) -> Result<Branch<Self>> {
        HybridState::project_atom(self, atom, outcome)
    }

    fn apply_pauli(&self, atom: usize, op: Pauli) -> Result<Self> {
        HybridState::apply_pauli(self, atom, op)
    }

    fn reduced_atoms(&self, atoms: &[usize]) -> Result<DensityMatrix> {
        HybridState::reduced_atoms(self, atoms)
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.6}", z.re)
    } else {
        format!("({:.6}{:+.6}i)", z.re, z.im)
    }
}

impl fmt::Display for HybridState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for t in &self.terms {
            let modes: Vec<String> = t.modes.iter().map(|m| fmt_complex(m.0)).collect();
            let atoms: String = t
                .atoms
                .iter()
                .map(|a| match a {
                    AtomLabel::G => 'g',
                    AtomLabel::F => 'f',
                })
                .collect();
            writeln!(
                f,
                "{} × |{}; {}⟩",
                fmt_complex(t.coeff),
                modes.join(", "),
                atoms
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn lab(x: f64) -> CoherentLabel {
        CoherentLabel::real(x)
    }

    #[test]
    fn overlap_examples() {
        let b = CoherentLabel(Complex64::new(0.4, -1.1));
        assert_abs_diff_eq!(coherent_overlap(b, b).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(coherent_overlap(b, b).im, 0.0, epsilon = 1e-15);

        let alpha: f64 = 1.0;
        let x = (-alpha * alpha).exp();
        assert_abs_diff_eq!(
            coherent_overlap(lab(alpha), lab(-alpha)).re,
            x * x,
            epsilon = 1e-15
        );

        assert_abs_diff_eq!(
            coherent_overlap(lab(2f64.sqrt()), CoherentLabel::VACUUM).re,
            0.367_879_441_171_442_3,
            epsilon = 1e-12
        );
    }

    #[test]
    fn overlap_modulus_at_most_one() {
        let z = coherent_overlap(
            CoherentLabel(Complex64::new(0.3, 0.2)),
            CoherentLabel(Complex64::new(-0.5, 0.9)),
        );
        assert!(z.norm() < 1.0);
    }

    #[test]
    fn gram_norm_examples() {
        let s = HybridState::product(&[lab(0.3), lab(-2.0)], &[AtomLabel::F]);
        assert_abs_diff_eq!(s.gram_norm().unwrap(), 1.0, epsilon = 1e-15);

        // unnormalized (|α⟩+|−α⟩)/√2 at |α|² = 1 → √(1 + x²)
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let cat = HybridState::coherent(lab(1.0))
            .add(&HybridState::coherent(lab(-1.0)))
            .unwrap()
            .scale(re(h));
        assert_abs_diff_eq!(
            cat.gram_norm().unwrap(),
            1.065_521_132_233_712_6,
            epsilon = 1e-12
        );
    }

    #[test]
    fn beam_splitter_makes_ecs_from_cat_component() {
        let a = 0.8;
        let s = HybridState::product(&[lab(2f64.sqrt() * a), lab(0.0)], &[]);
        let out = s.beam_splitter(0, 1).unwrap();
        let want = HybridState::product(&[lab(a), lab(a)], &[]);
        assert_abs_diff_eq!(out.inner(&want).unwrap().norm(), 1.0, epsilon = 1e-12);

        let vac = HybridState::product(&[lab(0.0), lab(0.0)], &[]);
        assert_eq!(vac.beam_splitter(0, 1).unwrap(), vac);
    }

    #[test]
    fn beam_splitter_ancilla_patterns() {
        let a = 1.3;
        let r2 = 2f64.sqrt();
        let cases = [((a, a), (r2 * a, 0.0)), ((-a, a), (0.0, -r2 * a))];
        for ((u, v), (p, q)) in cases {
            let out = HybridState::product(&[lab(u), lab(v)], &[])
                .beam_splitter(0, 1)
                .unwrap();
            let t = &out.terms()[0];
            assert_abs_diff_eq!(t.modes[0].0.re, p, epsilon = 1e-12);
            assert_abs_diff_eq!(t.modes[1].0.re, q, epsilon = 1e-12);
        }
    }

    #[test]
    fn beam_splitter_errors() {
        let s = HybridState::product(&[lab(0.0), lab(0.0)], &[]);
        assert_eq!(s.beam_splitter(0, 0), Err(Error::SameMode(0)));
        assert!(matches!(
            s.beam_splitter(0, 2),
            Err(Error::ModeOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn cavity_reflect_examples() {
        let a = 0.9;
        let plus = HybridState::atom(re(1.0), re(1.0)).normalize().unwrap();
        let s = plus.tensor(&HybridState::coherent(lab(a)));
        let out = s.cavity_reflect(0, 0).unwrap();
        let want = HybridState::product(&[lab(-a)], &[AtomLabel::G])
            .add(&HybridState::product(&[lab(a)], &[AtomLabel::F]))
            .unwrap()
            .normalize()
            .unwrap();
        assert_abs_diff_eq!(out.inner(&want).unwrap().norm(), 1.0, epsilon = 1e-12);

        let f = HybridState::product(&[lab(-a)], &[AtomLabel::F]);
        assert_eq!(f.cavity_reflect(0, 0).unwrap(), f);

        let g0 = HybridState::product(&[lab(0.0)], &[AtomLabel::G]);
        let out = g0.cavity_reflect(0, 0).unwrap();
        assert_abs_diff_eq!(out.inner(&g0).unwrap().re, 1.0, epsilon = 1e-15);
        assert!(g0.cavity_reflect(0, 1).is_err());
    }

    #[test]
    fn threshold_examples() {
        let vac = HybridState::coherent(CoherentLabel::VACUUM);
        let b = vac.project_threshold(0, Threshold::Off).unwrap();
        assert_abs_diff_eq!(b.probability, 1.0, epsilon = 1e-15);
        let b = vac.project_threshold(0, Threshold::On).unwrap();
        assert!(!b.is_possible());
        assert!(b.state.is_zero());

        let s = HybridState::coherent(lab(2f64.sqrt()));
        let off = s.project_threshold(0, Threshold::Off).unwrap();
        assert_abs_diff_eq!(off.probability, (-2f64).exp(), epsilon = 1e-12);
        let on = s.project_threshold(0, Threshold::On).unwrap();
        assert_abs_diff_eq!(off.probability + on.probability, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn simplify_examples() {
        let t = |c: f64| HybridTerm {
            coeff: re(c),
            modes: vec![lab(0.7)],
            atoms: vec![],
        };
        let s = HybridState::from_terms(1, 0, vec![t(1.0), t(1.0)]).unwrap();
        assert_eq!(s.terms().len(), 1);
        assert_eq!(s.terms()[0].coeff, re(2.0));

        let s = HybridState::from_terms(1, 0, vec![t(1.0), t(-1.0)]).unwrap();
        assert!(s.is_zero());

        // OFF part of |√2α⟩ at |α|² = 1 is the single term (x, 0)
        let s = HybridState::coherent(lab(2f64.sqrt())).vacuum_part(0);
        assert_eq!(s.terms().len(), 1);
        assert!(s.terms()[0].modes[0].is_vacuum());
        assert_abs_diff_eq!(s.terms()[0].coeff.re, (-1f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn simplify_merges_within_tolerance() {
        let a = HybridTerm {
            coeff: re(1.0),
            modes: vec![lab(1.0)],
            atoms: vec![],
        };
        let mut b = a.clone();
        b.modes[0] = lab(1.0 + 1e-13);
        let s = HybridState::from_terms(1, 0, vec![a, b]).unwrap();
        assert_eq!(s.terms().len(), 1);
    }

    #[test]
    fn atom_projection_examples() {
        let g = HybridState::product(&[], &[AtomLabel::G]);
        let b = g.project_atom(0, AtomOutcome::Plus).unwrap();
        assert_abs_diff_eq!(b.probability, 0.5, epsilon = 1e-15);

        let plus = HybridState::atom(re(1.0), re(1.0)).normalize().unwrap();
        let b = plus.project_atom(0, AtomOutcome::Plus).unwrap();
        assert_abs_diff_eq!(b.probability, 1.0, epsilon = 1e-15);
        let b = plus.project_atom(0, AtomOutcome::Minus).unwrap();
        assert!(!b.is_possible());
    }

    #[test]
    fn pauli_examples() {
        let (a, b) = (re(0.6), Complex64::new(0.0, 0.8));
        let m = HybridState::atom(a, b);
        let z = m.apply_pauli(0, Pauli::Z).unwrap();
        assert_abs_diff_eq!(
            z.inner(&HybridState::atom(a, -b)).unwrap().re,
            1.0,
            epsilon = 1e-15
        );
        let x = m.apply_pauli(0, Pauli::X).unwrap();
        assert_abs_diff_eq!(
            x.inner(&HybridState::atom(b, a)).unwrap().re,
            1.0,
            epsilon = 1e-15
        );
        // (−iY)|M⟩ followed by iY returns |M⟩
        let minus_iy = m.apply_pauli(0, Pauli::IY).unwrap().scale(-ONE);
        let back = minus_iy.apply_pauli(0, Pauli::IY).unwrap();
        assert_abs_diff_eq!(back.inner(&m).unwrap().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn ecs_overlap_bookkeeping() {
        let alpha = 1.0f64;
        let x2 = (-2.0 * alpha * alpha).exp();
        let n_plus = 1.0 / (2.0 * (1.0 + x2 * x2)).sqrt();
        let two = |u: f64, v: f64| HybridState::product(&[lab(u), lab(v)], &[]);
        let psi = two(alpha, alpha)
            .add(&two(-alpha, -alpha))
            .unwrap()
            .normalize()
            .unwrap();
        let phi = two(alpha, -alpha)
            .add(&two(-alpha, alpha))
            .unwrap()
            .normalize()
            .unwrap();
        assert_abs_diff_eq!(
            psi.inner(&phi).unwrap().re,
            4.0 * x2 * n_plus * n_plus,
            epsilon = 1e-14
        );
    }

    #[test]
    fn reduced_atoms_of_product() {
        let m = HybridState::atom(re(0.6), Complex64::new(0.0, 0.8));
        let s = HybridState::coherent(lab(1.0))
            .tensor(&m)
            .tensor(&HybridState::atom(re(1.0), re(0.0)));
        let rho = s.reduced_atoms(&[0]).unwrap();
        assert_abs_diff_eq!(
            rho.fidelity_with(&[re(0.6), Complex64::new(0.0, 0.8)]),
            1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn display_lists_terms() {
        let s = HybridState::product(&[lab(1.0)], &[AtomLabel::G]);
        assert_eq!(s.to_string(), "1.000000 × |1.000000; g⟩\n");
    }
}
