//! Geometric measure by alternating single-site overlap maximization.
//!
//! With every site but `i` held fixed, `⟨α|ψ⟩ = Σ_b conj(α_i[b]) v_i[b]` where `v_i` is the
//! partial inner product of `ψ` with the other sites. The optimal site is `v_i / |v_i|` and the
//! overlap magnitude becomes `|v_i|`, so each update is closed-form and the overlap never
//! decreases. The best overlap found is a lower bound on the supremum, hence `-log₂` of it is an
//! upper bound on `E_g`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;
use rand::Rng as _;

use super::{Certificate, MeasureValue, ValueKind};
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::state::StateVector;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricOptions {
    /// Random starts, sites drawn uniformly on the Bloch sphere.
    pub restarts: usize,
    /// Maximum sweeps over all sites per start.
    pub max_iters: usize,
    /// Stop when one sweep raises the overlap by less than this.
    pub conv_tol: f64,
    pub seed: u64,
    /// Also start from the computational basis state with the largest amplitude.
    pub warm_start: bool,
}

impl Default for GeometricOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 1000,
            conv_tol: 1e-12,
            seed: 0,
            warm_start: true,
        }
    }
}

/// Best product state found and its overlap magnitude with the target.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductOverlap {
    pub sites: Vec<[C64; 2]>,
    pub overlap: f64,
    pub converged: bool,
}

impl ProductOverlap {
    pub fn state(&self) -> Result<StateVector> {
        StateVector::product(&self.sites)
    }
}

/// Partial inner product of `amps` with every site except `keep`, as a 2-vector over `keep`.
fn partial_contraction(amps: &[C64], sites: &[[C64; 2]], keep: usize) -> [C64; 2] {
    let n = sites.len();
    let mut buf: Vec<C64> = amps.to_vec();
    // Trailing qubits are the least significant bits of the buffer.
    for j in (keep + 1..n).rev() {
        let (a0, a1) = (sites[j][0].conj(), sites[j][1].conj());
        let half = buf.len() / 2;
        for r in 0..half {
            buf[r] = a0 * buf[2 * r] + a1 * buf[2 * r + 1];
        }
        buf.truncate(half);
    }
    // Leading qubits are now the most significant bits.
    for site in sites.iter().take(keep) {
        let (a0, a1) = (site[0].conj(), site[1].conj());
        let half = buf.len() / 2;
        for r in 0..half {
            buf[r] = a0 * buf[r] + a1 * buf[r + half];
        }
        buf.truncate(half);
    }
    [buf[0], buf[1]]
}

fn overlap_with(amps: &[C64], sites: &[[C64; 2]]) -> f64 {
    let v = partial_contraction(amps, sites, 0);
    (sites[0][0].conj() * v[0] + sites[0][1].conj() * v[1]).norm()
}

fn random_site(rng: &mut crate::rng::Rng) -> [C64; 2] {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    let theta = (1.0 - 2.0 * u).clamp(-1.0, 1.0).acos();
    let phi = 2.0 * PI * v;
    [
        C64::new((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ]
}

fn ascend(amps: &[C64], mut sites: Vec<[C64; 2]>, opts: &GeometricOptions) -> ProductOverlap {
    let mut current = overlap_with(amps, &sites);
    let mut converged = false;
    for _ in 0..opts.max_iters {
        for i in 0..sites.len() {
            let v = partial_contraction(amps, &sites, i);
            let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if norm > 0.0 {
                sites[i] = [v[0] / norm, v[1] / norm];
            }
        }
        let next = overlap_with(amps, &sites);
        let gain = next - current;
        current = current.max(next);
        if gain < opts.conv_tol {
            converged = true;
            break;
        }
    }
    ProductOverlap {
        sites,
        overlap: current,
        converged,
    }
}

/// Best complete-product overlap over all starts. Starts use index-derived substreams.
pub fn maximize_product_overlap(psi: &StateVector, opts: &GeometricOptions) -> Result<ProductOverlap> {
    if opts.restarts == 0 && !opts.warm_start {
        return Err(Error::InvalidInput("geometric measure needs at least one start".into()));
    }
    let n = psi.num_qubits();
    let amps = psi.amplitudes();
    let mut best: Option<ProductOverlap> = None;
    let mut consider = |cand: ProductOverlap| {
        if best.as_ref().is_none_or(|b| cand.overlap > b.overlap) {
            best = Some(cand);
        }
    };

    if opts.warm_start {
        let (idx, _) = amps
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, bv), (i, a)| if a.norm_sqr() > bv { (i, a.norm_sqr()) } else { (bi, bv) });
        let sites: Vec<[C64; 2]> = (0..n)
            .map(|q| {
                if idx & (1 << (n - 1 - q)) != 0 {
                    [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
                } else {
                    [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
                }
            })
            .collect();
        consider(ascend(amps, sites, opts));
    }
    for r in 0..opts.restarts {
        let mut rng = substream(opts.seed, r as u64);
        let sites = (0..n).map(|_| random_site(&mut rng)).collect();
        consider(ascend(amps, sites, opts));
    }
    let mut best = best.expect("at least one start");
    // Report the overlap of the certificate itself.
    best.overlap = best.state()?.overlap(psi)?.norm().min(1.0);
    Ok(best)
}

/// `E_g` upper bound `−log₂ max |⟨α|ψ⟩|` with the product-state certificate.
pub fn geometric_measure(psi: &StateVector, opts: &GeometricOptions) -> Result<MeasureValue> {
    let best = maximize_product_overlap(psi, opts)?;
    let value = (-best.overlap.log2()).max(0.0);
    let mut m = MeasureValue::new("geometric", value, ValueKind::UpperBound);
    if !best.converged {
        m = m.with_note(alloc::format!(
            "best start did not converge within {} sweeps",
            opts.max_iters
        ));
    }
    Ok(m.with_certificate(Certificate::ProductState {
        sites: best.sites,
        overlap: best.overlap,
        converged: best.converged,
    }))
}
