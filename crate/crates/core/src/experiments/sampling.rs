//! Random states: Haar states, states within a trace-distance ball of `|0⟩ⁿ`, random density
//! operators, and pseudo-pure mixtures.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;
use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::circuit::Circuit;
use crate::density::{DensityOperator, DENSITY_CAP};
use crate::error::{Error, Result};
use crate::gate::{GateInstance, GateKind};
use crate::rng::{substream, Rng};
use crate::state::StateVector;
use crate::{Caps, C64};

fn gaussian(rng: &mut Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn haar_state(n: usize, rng: &mut Rng) -> Result<StateVector> {
    if n == 0 || n > crate::state::MAX_QUBITS {
        return Err(Error::InvalidInput(alloc::format!("invalid qubit count {n}")));
    }
    StateVector::normalized((0..1usize << n).map(|_| gaussian(rng)).collect())
}

/// Product of independent Haar-random qubits.
pub fn random_product_state(n: usize, rng: &mut Rng) -> Result<StateVector> {
    let sites: Vec<[C64; 2]> = (0..n)
        .map(|_| {
            let (a, b) = (gaussian(rng), gaussian(rng));
            let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
            [a / norm, b / norm]
        })
        .collect();
    StateVector::product(&sites)
}

/// `√(1−T²)|0⟩ⁿ + T·e^{iφ}|χ⟩` with `|χ⟩` Haar-random on the complement of `|0⟩ⁿ` and
/// `T` uniform on `[0, eps]`; the trace distance to `|0⟩ⁿ` is exactly `T`.
///
/// Sample `index` of the series under `seed` uses its own substream.
pub fn sample_s_epsilon_indexed(n: usize, eps: f64, seed: u64, index: u64, caps: &Caps) -> Result<StateVector> {
    caps.check_statevector("S_eps sample", n)?;
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidInput(alloc::format!("eps must lie in [0, 1], got {eps}")));
    }
    let mut rng = substream(seed, index);
    let dim = 1usize << n;
    let mut chi: Vec<C64> = (0..dim).map(|i| if i == 0 { C64::new(0.0, 0.0) } else { gaussian(&mut rng) }).collect();
    let norm = chi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let t = eps * rng.random::<f64>();
    let phase = C64::from_polar(t / norm, 2.0 * PI * rng.random::<f64>());
    for z in chi.iter_mut() {
        *z *= phase;
    }
    chi[0] = C64::new((1.0 - t * t).sqrt(), 0.0);
    StateVector::normalized(chi)
}

/// First sample of the series under `seed`.
pub fn sample_s_epsilon(n: usize, eps: f64, seed: u64, caps: &Caps) -> Result<StateVector> {
    sample_s_epsilon_indexed(n, eps, seed, 0, caps)
}

/// `GG†/Tr(GG†)` for a complex Gaussian `G`.
pub fn random_density(n: usize, rng: &mut Rng) -> Result<DensityOperator> {
    if n == 0 || n > DENSITY_CAP {
        return Err(Error::CapExceeded {
            what: "random density operator",
            requested: n,
            cap: DENSITY_CAP,
        });
    }
    let dim = 1usize << n;
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let mut m = &g * g.adjoint();
    let tr = m.trace().re;
    m /= C64::new(tr, 0.0);
    // Restore exact Hermiticity after the floating-point product.
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityOperator::new(m)
}

/// `(ρ, σ)` with `σ = (1−t)ρ + tτ`, `t` uniform on `[0, max_t]`, so `T(ρ, σ) ≤ max_t`.
pub fn random_density_pair(n: usize, max_t: f64, rng: &mut Rng) -> Result<(DensityOperator, DensityOperator)> {
    let rho = random_density(n, rng)?;
    let tau = random_density(n, rng)?;
    let t = max_t * rng.random::<f64>();
    let sigma = tau.mix(t, &rho)?;
    Ok((rho, sigma))
}

/// Random circuit over H, T and CNOT with a uniformly drawn depth in `1..=max_depth`.
pub fn random_universal_circuit(n: usize, max_depth: usize, rng: &mut Rng) -> Result<Circuit> {
    if max_depth == 0 {
        return Err(Error::InvalidInput("circuit depth must be positive".into()));
    }
    let depth = rng.random_range(1..=max_depth);
    let mut c = Circuit::new(n)?;
    for _ in 0..depth {
        let pick = if n >= 2 { rng.random_range(0..3) } else { rng.random_range(0..2) };
        let g = match pick {
            0 => GateInstance::single(GateKind::H, rng.random_range(0..n))?,
            1 => GateInstance::single(GateKind::T, rng.random_range(0..n))?,
            _ => {
                let a = rng.random_range(0..n);
                let b = (a + rng.random_range(1..n)) % n;
                GateInstance::cnot(a, b)?
            }
        };
        c.push(g)?;
    }
    Ok(c)
}

/// `ε|ψ⟩⟨ψ| + (1−ε)I/2ⁿ`.
pub fn pseudo_pure(psi: &StateVector, eps: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidInput(alloc::format!("eps must lie in [0, 1], got {eps}")));
    }
    let pure = DensityOperator::from_pure(psi)?;
    pure.mix(eps, &DensityOperator::maximally_mixed(psi.num_qubits())?)
}

/// Convex-roof measures vanish on `I/2ⁿ`, so on a pseudo-pure state they are at most `ε·E(ψ)`.
pub fn pseudo_pure_convex_bound(eps: f64, e_psi: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) || !(e_psi >= 0.0) {
        return Err(Error::InvalidInput(alloc::format!(
            "need eps in [0, 1] and a nonnegative measure value, got {eps} and {e_psi}"
        )));
    }
    Ok(eps * e_psi)
}
