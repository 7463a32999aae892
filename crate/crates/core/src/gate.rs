//! Gate kinds, gate instances and the dense application kernel.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;

use crate::error::{Error, Result};
use crate::C64;

/// Tolerance for the unitarity check on explicit matrices.
pub const UNITARY_TOL: f64 = 1e-10;

/// Most qubits a single instruction may touch, controls included.
pub const MAX_TOUCHED: usize = 3;

/// A square matrix on one or two qubits, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    qubits: usize,
    entries: Vec<C64>,
}

impl Unitary {
    /// Validates shape (2x2 or 4x4) and unitarity within [`UNITARY_TOL`].
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        let qubits = match entries.len() {
            4 => 1,
            16 => 2,
            len => {
                return Err(Error::InvalidInput(alloc::format!(
                    "explicit gate matrix must have 4 or 16 entries, got {len}"
                )))
            }
        };
        let dim = 1 << qubits;
        let mut dev = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                // (U U†)_ij
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += entries[i * dim + k] * entries[j * dim + k].conj();
                }
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((acc - C64::new(target, 0.0)).norm());
            }
        }
        if !(dev <= UNITARY_TOL) {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { qubits, entries })
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    T,
    /// `RY(θ)|0⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩`.
    Ry(f64),
    /// Targets are `[control, target]`.
    Cnot,
    Unitary(Unitary),
}

impl GateKind {
    /// Number of target qubits the kind acts on.
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot => 2,
            GateKind::Unitary(u) => u.num_qubits(),
            _ => 1,
        }
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::T => "t",
            GateKind::Ry(_) => "ry",
            GateKind::Cnot => "cnot",
            GateKind::Unitary(_) => "unitary",
        }
    }

    /// Row-major matrix over the targets, first target most significant.
    pub fn matrix(&self) -> Vec<C64> {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            GateKind::X => vec![z, o, o, z],
            GateKind::Y => vec![z, -i, i, z],
            GateKind::Z => vec![o, z, z, -o],
            GateKind::H => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                vec![h, h, h, -h]
            }
            GateKind::S => vec![o, z, z, i],
            GateKind::T => vec![o, z, z, C64::from_polar(1.0, core::f64::consts::FRAC_PI_4)],
            GateKind::Ry(theta) => {
                let c = C64::new((theta / 2.0).cos(), 0.0);
                let s = C64::new((theta / 2.0).sin(), 0.0);
                vec![c, -s, s, c]
            }
            GateKind::Cnot => vec![
                o, z, z, z, //
                z, o, z, z, //
                z, z, z, o, //
                z, z, o, z,
            ],
            GateKind::Unitary(u) => u.entries().to_vec(),
        }
    }
}

/// One gate with its target and control qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct GateInstance {
    kind: GateKind,
    targets: Vec<usize>,
    controls: Vec<usize>,
}

impl GateInstance {
    pub fn new(kind: GateKind, targets: Vec<usize>, controls: Vec<usize>) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::InvalidInput(alloc::format!(
                "{} expects {} target(s), got {}",
                kind.mnemonic(),
                kind.arity(),
                targets.len()
            )));
        }
        let mut touched: Vec<usize> = targets.iter().chain(controls.iter()).copied().collect();
        touched.sort_unstable();
        if touched.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(alloc::format!(
                "repeated qubit in {} instruction",
                kind.mnemonic()
            )));
        }
        if touched.len() > MAX_TOUCHED {
            return Err(Error::Arity(touched.len()));
        }
        if let GateKind::Ry(theta) = kind {
            if !theta.is_finite() {
                return Err(Error::InvalidInput("rotation angle must be finite".into()));
            }
        }
        Ok(Self {
            kind,
            targets,
            controls,
        })
    }

    pub fn single(kind: GateKind, target: usize) -> Result<Self> {
        Self::new(kind, vec![target], Vec::new())
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::Cnot, vec![control, target], Vec::new())
    }

    /// Same gate with one more control qubit.
    pub fn with_control(&self, control: usize) -> Result<Self> {
        let mut controls = self.controls.clone();
        controls.push(control);
        Self::new(self.kind.clone(), self.targets.clone(), controls)
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    /// Qubits touched, targets first.
    pub fn touched(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().chain(self.controls.iter()).copied()
    }

    pub fn max_index(&self) -> usize {
        self.touched().max().unwrap_or(0)
    }
}

/// Bit mask of qubit `q` in an `n`-qubit index (qubit 0 is the most significant bit).
#[inline]
pub(crate) fn qubit_mask(n: usize, q: usize) -> usize {
    1usize << (n - 1 - q)
}

/// Applies a row-major `2^k x 2^k` matrix on `targets`, gated on all `controls` being 1.
///
/// Indices must already be validated against `n`.
pub(crate) fn apply_matrix(
    amps: &mut [C64],
    n: usize,
    targets: &[usize],
    controls: &[usize],
    matrix: &[C64],
) {
    let k = targets.len();
    let dim = 1usize << k;
    debug_assert_eq!(matrix.len(), dim * dim);
    let target_bits: Vec<usize> = targets.iter().map(|&q| qubit_mask(n, q)).collect();
    let tmask: usize = target_bits.iter().fold(0, |m, b| m | b);
    let cmask: usize = controls.iter().fold(0, |m, &q| m | qubit_mask(n, q));

    // Offsets of each local basis index relative to the base index.
    let offsets: Vec<usize> = (0..dim)
        .map(|local| {
            (0..k)
                .filter(|l| local & (1 << (k - 1 - l)) != 0)
                .fold(0, |acc, l| acc | target_bits[l])
        })
        .collect();

    let mut gathered = vec![C64::new(0.0, 0.0); dim];
    for base in 0..amps.len() {
        if base & tmask != 0 || base & cmask != cmask {
            continue;
        }
        for (slot, off) in gathered.iter_mut().zip(&offsets) {
            *slot = amps[base | off];
        }
        for (row, off) in offsets.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (col, g) in gathered.iter().enumerate() {
                acc += matrix[row * dim + col] * g;
            }
            amps[base | off] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_matrices_are_unitary() {
        for kind in [
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::H,
            GateKind::S,
            GateKind::T,
            GateKind::Ry(0.7),
            GateKind::Cnot,
        ] {
            assert!(Unitary::new(kind.matrix()).is_ok(), "{kind:?}");
        }
    }

    #[test]
    fn rejects_non_unitary_matrix() {
        let m = vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        assert!(matches!(Unitary::new(m), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn instance_validation() {
        assert!(GateInstance::new(GateKind::H, vec![0], vec![0]).is_err());
        assert!(GateInstance::new(GateKind::Cnot, vec![0], vec![]).is_err());
        let toffoli = GateInstance::cnot(0, 1).unwrap().with_control(2).unwrap();
        assert_eq!(toffoli.touched().count(), 3);
        assert!(matches!(toffoli.with_control(3), Err(Error::Arity(4))));
        assert!(GateInstance::single(GateKind::Ry(f64::NAN), 0).is_err());
    }
}
