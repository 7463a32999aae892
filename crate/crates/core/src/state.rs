//! Pure register states and their bipartite structure.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;

use crate::error::{Error, Result};
use crate::gate::{apply_matrix, qubit_mask, GateInstance};
use crate::math::clean_spectrum;
use crate::C64;

/// Tolerance on the unit-norm invariant.
pub const NORM_TOL: f64 = 1e-10;

/// Largest register a `StateVector` can address at all (independent of the configurable cap).
pub const MAX_QUBITS: usize = 30;

/// Unit-norm amplitude vector over `n` qubits. Index bits are read with qubit 0 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidInput(alloc::format!(
            "qubit count must be in 1..={MAX_QUBITS}, got {n}"
        )));
    }
    Ok(())
}

impl StateVector {
    /// `|0⟩ⁿ`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis_index(n, 0)
    }

    pub fn basis_index(n: usize, index: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::InvalidInput(alloc::format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Computational basis state from a bit string such as `"010"`.
    pub fn basis(n: usize, bits: &str) -> Result<Self> {
        if bits.chars().count() != n {
            return Err(Error::InvalidInput(alloc::format!(
                "bit string has length {}, expected {n}",
                bits.chars().count()
            )));
        }
        let mut index = 0usize;
        for c in bits.chars() {
            index <<= 1;
            match c {
                '0' => {}
                '1' => index |= 1,
                other => {
                    return Err(Error::InvalidInput(alloc::format!(
                        "invalid bit character {other:?}"
                    )))
                }
            }
        }
        Self::basis_index(n, index)
    }

    /// Wraps amplitudes that are already normalized within [`NORM_TOL`].
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(Error::InvalidInput(alloc::format!(
                "amplitudes have squared norm {norm}, expected 1"
            )));
        }
        Ok(Self { n, amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidInput("cannot normalize a zero or non-finite vector".into()));
        }
        for a in amps.iter_mut() {
            *a /= norm;
        }
        Ok(Self { n, amps })
    }

    /// Complete product state `|α₀⟩ ⊗ … ⊗ |α_{n-1}⟩`; each site is normalized first.
    pub fn product(sites: &[[C64; 2]]) -> Result<Self> {
        check_qubits(sites.len())?;
        let mut amps = vec![C64::new(1.0, 0.0)];
        for site in sites {
            let norm = (site[0].norm_sqr() + site[1].norm_sqr()).sqrt();
            if !(norm > 0.0) {
                return Err(Error::InvalidInput("product site has zero norm".into()));
            }
            let mut next = Vec::with_capacity(amps.len() * 2);
            for a in &amps {
                next.push(a * site[0] / norm);
                next.push(a * site[1] / norm);
            }
            amps = next;
        }
        Ok(Self {
            n: sites.len(),
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|ψ*⟩`: every amplitude conjugated in the computational basis.
    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            amps: self.amps.iter().map(|a| a.conj()).collect(),
        }
    }

    /// `|self⟩ ⊗ |other⟩`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        check_qubits(self.n + other.n)?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self {
            n: self.n + other.n,
            amps,
        })
    }

    fn same_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Result<C64> {
        self.same_size(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Trace distance between pure states, `√(1 − |⟨ψ|φ⟩|²)`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        let f = self.overlap(other)?.norm_sqr();
        Ok((1.0 - f).max(0.0).sqrt())
    }

    /// Trace distance to `|0⟩ⁿ`.
    pub fn distance_to_zero(&self) -> f64 {
        (1.0 - self.amps[0].norm_sqr()).max(0.0).sqrt()
    }

    /// Probability that measuring `qubit` in the computational basis yields 1.
    pub fn probability_one(&self, qubit: usize) -> Result<f64> {
        self.check_index(qubit)?;
        let mask = qubit_mask(self.n, qubit);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    pub(crate) fn check_index(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::IndexOutOfRange { index: q, n: self.n });
        }
        Ok(())
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &GateInstance) -> Result<()> {
        for q in gate.touched() {
            self.check_index(q)?;
        }
        let matrix = gate.kind().matrix();
        apply_matrix(&mut self.amps, self.n, gate.targets(), gate.controls(), &matrix);
        Ok(())
    }

    /// Reshapes the amplitudes into a `2^|A| x 2^|B|` matrix, rows indexed by the qubits of
    /// `subset` (ascending, first one most significant) and columns by the rest.
    pub fn amplitude_matrix(&self, subset: &[usize]) -> Result<DMatrix<C64>> {
        let (a, b) = split_indices(self.n, subset)?;
        let (ra, rb) = (1usize << a.len(), 1usize << b.len());
        let mut m = DMatrix::from_element(ra, rb, C64::new(0.0, 0.0));
        for (i, amp) in self.amps.iter().enumerate() {
            let row = gather_bits(self.n, i, &a);
            let col = gather_bits(self.n, i, &b);
            m[(row, col)] = *amp;
        }
        Ok(m)
    }

    /// Eigenvalues of the reduced state on `subset`, descending. Empty and full subsets give `[1]`.
    ///
    /// Computed as squared singular values of the reshaped amplitude matrix.
    pub fn subsystem_spectrum(&self, subset: &[usize]) -> Result<Vec<f64>> {
        let coeffs = self.schmidt_coefficients(subset)?;
        Ok(clean_spectrum(coeffs.iter().map(|s| s * s).collect()))
    }

    /// Unclamped singular values of the reshaped amplitude matrix, descending.
    pub fn schmidt_coefficients(&self, subset: &[usize]) -> Result<Vec<f64>> {
        let (a, b) = split_indices(self.n, subset)?;
        if a.is_empty() || b.is_empty() {
            return Ok(vec![self.norm_sqr().sqrt()]);
        }
        let m = self.amplitude_matrix(&a)?;
        let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
        sv.sort_by(|x, y| y.partial_cmp(x).unwrap_or(core::cmp::Ordering::Equal));
        Ok(sv)
    }

    /// Schmidt spectrum across `(A, B)`.
    pub fn schmidt_spectrum(&self, split: &Bipartition) -> Result<Vec<f64>> {
        split.check_register(self.n)?;
        self.subsystem_spectrum(split.part_a())
    }

    /// `Tr (ρ_S)²` for the reduced state on `subset`, via the Gram matrix of the smaller side.
    pub fn subsystem_purity(&self, subset: &[usize]) -> Result<f64> {
        let (a, b) = split_indices(self.n, subset)?;
        if a.is_empty() || b.is_empty() {
            return Ok(1.0);
        }
        let small = if a.len() <= b.len() { &a } else { &b };
        let m = self.amplitude_matrix(small)?;
        let gram = &m * m.adjoint();
        Ok(gram.iter().map(|z| z.norm_sqr()).sum())
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidInput(alloc::format!(
            "amplitude vector length {len} is not a power of two >= 2"
        )));
    }
    let n = len.trailing_zeros() as usize;
    check_qubits(n)?;
    Ok(n)
}

/// Sorted subset and its complement; rejects out-of-range or repeated indices.
pub(crate) fn split_indices(n: usize, subset: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut a = subset.to_vec();
    a.sort_unstable();
    if a.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("repeated qubit in subset".into()));
    }
    if let Some(&q) = a.iter().find(|&&q| q >= n) {
        return Err(Error::IndexOutOfRange { index: q, n });
    }
    let b = (0..n).filter(|q| a.binary_search(q).is_err()).collect();
    Ok((a, b))
}

#[inline]
fn gather_bits(n: usize, index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | usize::from(index & qubit_mask(n, q) != 0))
}

/// Free-function forms of the common state operations.
pub fn make_basis_state(n: usize, bits: &str) -> Result<StateVector> {
    StateVector::basis(n, bits)
}

pub fn apply_gate(state: &StateVector, gate: &GateInstance) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

pub fn overlap(psi: &StateVector, phi: &StateVector) -> Result<C64> {
    psi.overlap(phi)
}

pub fn trace_distance_pure(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    psi.trace_distance(phi)
}

pub fn schmidt_spectrum(psi: &StateVector, split: &Bipartition) -> Result<Vec<f64>> {
    psi.schmidt_spectrum(split)
}

/// A nonempty proper subset `A` of the register; `B` is its complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Bipartition {
    n: usize,
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Bipartition {
    pub fn new(n: usize, a: impl IntoIterator<Item = usize>) -> Result<Self> {
        let a: Vec<usize> = a.into_iter().collect();
        let (a, b) = split_indices(n, &a)?;
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidInput(
                "bipartition side A must be a nonempty proper subset".into(),
            ));
        }
        Ok(Self { n, a, b })
    }

    /// The `n − 1` cuts `{0..k} | {k..n}`.
    pub fn all_contiguous(n: usize) -> Vec<Self> {
        (1..n)
            .map(|k| Self {
                n,
                a: (0..k).collect(),
                b: (k..n).collect(),
            })
            .collect()
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn part_a(&self) -> &[usize] {
        &self.a
    }

    pub fn part_b(&self) -> &[usize] {
        &self.b
    }

    pub fn size_a(&self) -> usize {
        self.a.len()
    }

    pub fn swapped(&self) -> Self {
        Self {
            n: self.n,
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    /// Compact label such as `"0,1|2,3"`.
    pub fn label(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        for (i, q) in self.a.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{q}");
        }
        s.push('|');
        for (i, q) in self.b.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{q}");
        }
        s
    }

    pub(crate) fn check_register(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: n,
            });
        }
        Ok(())
    }
}

/// Disjoint nonempty subsets covering every qubit.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Partition {
    n: usize,
    parts: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut parts = parts;
        for part in parts.iter_mut() {
            if part.is_empty() {
                return Err(Error::InvalidInput("partition contains an empty part".into()));
            }
            part.sort_unstable();
            for &q in part.iter() {
                if q >= n {
                    return Err(Error::IndexOutOfRange { index: q, n });
                }
                if seen[q] {
                    return Err(Error::InvalidInput(alloc::format!(
                        "qubit {q} appears in more than one part"
                    )));
                }
                seen[q] = true;
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInput(alloc::format!("qubit {q} is not covered")));
        }
        Ok(Self { n, parts })
    }

    /// Every qubit in its own part.
    pub fn singletons(n: usize) -> Self {
        Self {
            n,
            parts: (0..n).map(|q| vec![q]).collect(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }
}
