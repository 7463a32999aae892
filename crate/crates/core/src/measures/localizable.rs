//! Localizable entanglement between two qubits.
//!
//! The lower bound comes from an explicit protocol: every other qubit is measured in its own
//! fixed single-qubit basis (the same basis in every branch), and the outcome-weighted
//! entanglement of the surviving pair is averaged. Bases are searched on a Bloch-angle grid
//! and then refined coordinate-wise. Adaptive protocols could do better, so the result is a
//! lower bound only. The upper bound is the smaller of the two single-qubit entropies.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;
use serde::Serialize;

use super::{MeasureValue, ValueKind};
use crate::error::{Error, Result};
use crate::math::shannon_entropy;
use crate::state::StateVector;
use crate::C64;

/// Largest register for the protocol search.
pub const LOCALIZABLE_CAP: usize = 6;

/// Projective basis `{|b₀⟩, |b₁⟩}` with `|b₀⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub const Z: Self = Self { theta: 0.0, phi: 0.0 };
    pub const X: Self = Self {
        theta: PI / 2.0,
        phi: 0.0,
    };

    /// The two basis vectors as `[⟨0|b⟩, ⟨1|b⟩]`.
    pub fn vectors(&self) -> [[C64; 2]; 2] {
        let (c, s) = ((self.theta / 2.0).cos(), (self.theta / 2.0).sin());
        let ph = C64::from_polar(1.0, self.phi);
        [
            [C64::new(c, 0.0), ph * s],
            [C64::new(s, 0.0), -ph * c],
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizableOptions {
    /// Grid points per Bloch angle.
    pub grid: usize,
    /// Refinement iterations; the step halves whenever an iteration finds no improvement.
    pub refine_iters: usize,
    /// Maximum coordinate-wise grid sweeps over the measured qubits.
    pub max_sweeps: usize,
}

impl Default for LocalizableOptions {
    fn default() -> Self {
        Self {
            grid: 24,
            refine_iters: 40,
            max_sweeps: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizableBounds {
    pub i: usize,
    pub j: usize,
    pub lower: f64,
    pub upper: f64,
    /// Bases of the best protocol found, for the measured qubits in ascending order.
    pub bases: Vec<MeasurementBasis>,
}

impl LocalizableBounds {
    pub fn to_measures(&self) -> [MeasureValue; 2] {
        let name = alloc::format!("localizable:{},{}", self.i, self.j);
        [
            MeasureValue::new(name.clone(), self.lower, ValueKind::LowerBound),
            MeasureValue::new(name, self.upper, ValueKind::UpperBound),
        ]
    }
}

fn check_pair(psi: &StateVector, i: usize, j: usize) -> Result<()> {
    let n = psi.num_qubits();
    if n < 2 {
        return Err(Error::InvalidInput("localizable entanglement needs two qubits".into()));
    }
    for q in [i, j] {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, n });
        }
    }
    if i == j {
        return Err(Error::InvalidInput(alloc::format!("qubit pair ({i}, {j}) must be distinct")));
    }
    Ok(())
}

/// Entropy of entanglement of a (possibly unnormalized) two-qubit vector `[a, b, c, d]`.
fn pair_entropy(v: &[C64; 4], weight: f64) -> f64 {
    let det = (v[0] * v[3] - v[1] * v[2]).norm() / weight;
    let disc = (1.0 - 4.0 * det * det).max(0.0).sqrt();
    shannon_entropy(&[(1.0 + disc) / 2.0, (1.0 - disc) / 2.0])
}

/// `Σ_μ p_μ E(ψ^μ_{ij})` for the non-adaptive protocol measuring each other qubit in `bases`.
pub fn protocol_average(psi: &StateVector, i: usize, j: usize, bases: &[MeasurementBasis]) -> Result<f64> {
    check_pair(psi, i, j)?;
    let n = psi.num_qubits();
    let others: Vec<usize> = (0..n).filter(|&q| q != i && q != j).collect();
    if bases.len() != others.len() {
        return Err(Error::DimensionMismatch {
            left: bases.len(),
            right: others.len(),
        });
    }
    let vecs: Vec<[[C64; 2]; 2]> = bases.iter().map(MeasurementBasis::vectors).collect();
    let bit = |idx: usize, q: usize| (idx >> (n - 1 - q)) & 1;
    let outcomes = 1usize << others.len();
    let mut branches = vec![[C64::new(0.0, 0.0); 4]; outcomes];
    for (idx, amp) in psi.amplitudes().iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let pair = 2 * bit(idx, i) + bit(idx, j);
        for (mu, branch) in branches.iter_mut().enumerate() {
            let mut w = *amp;
            for (k, &q) in others.iter().enumerate() {
                let outcome = (mu >> (others.len() - 1 - k)) & 1;
                w *= vecs[k][outcome][bit(idx, q)].conj();
            }
            branch[pair] += w;
        }
    }
    Ok(branches
        .iter()
        .map(|b| {
            let p: f64 = b.iter().map(|z| z.norm_sqr()).sum();
            if p > 1e-15 {
                p * pair_entropy(b, p)
            } else {
                0.0
            }
        })
        .sum())
}

/// `min(S(ρ_i), S(ρ_j))`; valid at any register size.
pub fn localizable_upper_bound(psi: &StateVector, i: usize, j: usize) -> Result<f64> {
    check_pair(psi, i, j)?;
    let si = shannon_entropy(&psi.subsystem_spectrum(&[i])?);
    let sj = shannon_entropy(&psi.subsystem_spectrum(&[j])?);
    Ok(si.min(sj))
}

/// Protocol-search lower bound and entropy upper bound on `LE_ij`.
pub fn localizable_entanglement(
    psi: &StateVector,
    i: usize,
    j: usize,
    opts: &LocalizableOptions,
) -> Result<LocalizableBounds> {
    check_pair(psi, i, j)?;
    let n = psi.num_qubits();
    if n > LOCALIZABLE_CAP {
        return Err(Error::CapExceeded {
            what: "localizable entanglement search",
            requested: n,
            cap: LOCALIZABLE_CAP,
        });
    }
    if opts.grid == 0 {
        return Err(Error::InvalidInput("localizable grid must be nonempty".into()));
    }
    let upper = localizable_upper_bound(psi, i, j)?;
    let m = n - 2;
    let eval = |b: &[MeasurementBasis]| protocol_average(psi, i, j, b);

    let mut best_bases = vec![MeasurementBasis::Z; m];
    let mut best = eval(&best_bases)?;
    let g = opts.grid;
    let (dt, dp) = (PI / g as f64, 2.0 * PI / g as f64);

    for _ in 0..opts.max_sweeps.max(1) {
        let before = best;
        for k in 0..m {
            for a in 0..g {
                for b in 0..g {
                    let mut trial = best_bases.clone();
                    trial[k] = MeasurementBasis {
                        theta: dt * a as f64,
                        phi: dp * b as f64,
                    };
                    let v = eval(&trial)?;
                    if v > best {
                        best = v;
                        best_bases = trial;
                    }
                }
            }
        }
        if best <= before || m == 0 {
            break;
        }
    }

    let (mut st, mut sp) = (dt, dp);
    for _ in 0..opts.refine_iters {
        let mut improved = false;
        for k in 0..m {
            for (d_theta, d_phi) in [(st, 0.0), (-st, 0.0), (0.0, sp), (0.0, -sp)] {
                let mut trial = best_bases.clone();
                trial[k].theta += d_theta;
                trial[k].phi += d_phi;
                let v = eval(&trial)?;
                if v > best {
                    best = v;
                    best_bases = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            st /= 2.0;
            sp /= 2.0;
        }
    }

    Ok(LocalizableBounds {
        i,
        j,
        lower: best.max(0.0),
        upper,
        bases: best_bases,
    })
}
