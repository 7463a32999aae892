//! A state close to `|0⟩²ᵐ` whose Rényi-½ entanglement grows like `m/2`.
//!
//! `√(1−ε)|0,0⟩ + Σ_{x≠0} √(ε/(2^m−1)) |x,x⟩` with `ε = 2^{−βm}`, `β = (1−α)/(2α)`.

use alloc::vec;

#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{log2, neg_xlogx};
use crate::measures::renyi_entropy;
use crate::state::{Bipartition, StateVector};
use crate::{Caps, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterexampleSpec {
    pub m: usize,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
}

impl CounterexampleSpec {
    pub fn new(m: usize, alpha: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("half-system size must be positive".into()));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidInput(alloc::format!("alpha must lie in (0, 1), got {alpha}")));
        }
        let beta = (1.0 - alpha) / (2.0 * alpha);
        let epsilon = (-beta * m as f64).exp2();
        Ok(Self { m, alpha, beta, epsilon })
    }

    /// `2^m − 1`, the number of nonzero strings.
    fn tail(&self) -> f64 {
        (self.m as f64).exp2() - 1.0
    }

    /// `S_α` of the `m|m` spectrum, `log₂(Σλᵅ)/(1−α)`, in closed form.
    pub fn renyi_closed_form(&self) -> f64 {
        let e = self.epsilon;
        let a = self.alpha;
        let tail = self.tail();
        log2((1.0 - e).powf(a) + tail * (e / tail).powf(a)) / (1.0 - a)
    }

    /// At `α = ½`: `2·log₂(√(1−ε) + √(ε(2^m−1)))`.
    pub fn renyi_half_closed_form(&self) -> f64 {
        2.0 * log2((1.0 - self.epsilon).sqrt() + (self.epsilon * self.tail()).sqrt())
    }

    /// Von Neumann entropy of the `m|m` spectrum in closed form.
    pub fn von_neumann_closed_form(&self) -> f64 {
        let e = self.epsilon;
        neg_xlogx(1.0 - e) - e * log2(e / self.tail())
    }
}

/// The state on `2m` qubits; the first `m` qubits carry the first copy of `x`.
pub fn counterexample_state(spec: &CounterexampleSpec, caps: &Caps) -> Result<StateVector> {
    let n = 2 * spec.m;
    caps.check_statevector("counterexample state", n)?;
    let side = 1usize << spec.m;
    let mut amps = vec![C64::new(0.0, 0.0); 1usize << n];
    amps[0] = C64::new((1.0 - spec.epsilon).sqrt(), 0.0);
    let tail = C64::new((spec.epsilon / spec.tail()).sqrt(), 0.0);
    for x in 1..side {
        amps[x * side + x] = tail;
    }
    StateVector::from_amplitudes(amps)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub spec: CounterexampleSpec,
    /// `S_α` across the `m|m` split, from the computed Schmidt spectrum.
    pub renyi_alpha: f64,
    pub renyi_alpha_closed_form: f64,
    pub renyi_half: f64,
    pub renyi_half_closed_form: f64,
    pub von_neumann: f64,
    pub von_neumann_closed_form: f64,
    /// `T(ψ, |0⟩²ᵐ)`, which equals `√ε`.
    pub distance: f64,
    pub distance_closed_form: f64,
}

pub fn counterexample_report(spec: &CounterexampleSpec, caps: &Caps) -> Result<CounterexampleReport> {
    let psi = counterexample_state(spec, caps)?;
    let split = Bipartition::new(2 * spec.m, 0..spec.m)?;
    let spectrum = psi.schmidt_spectrum(&split)?;
    Ok(CounterexampleReport {
        spec: *spec,
        renyi_alpha: renyi_entropy(&spectrum, spec.alpha)?,
        renyi_alpha_closed_form: spec.renyi_closed_form(),
        renyi_half: renyi_entropy(&spectrum, 0.5)?,
        renyi_half_closed_form: spec.renyi_half_closed_form(),
        von_neumann: renyi_entropy(&spectrum, 1.0)?,
        von_neumann_closed_form: spec.von_neumann_closed_form(),
        distance: psi.distance_to_zero(),
        distance_closed_form: spec.epsilon.sqrt(),
    })
}
