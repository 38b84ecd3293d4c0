//! Quantum discord of two-qubit states with projective measurements on qubit B.
//!
//! `D = I(ρ) − J(ρ)` where `I` is the quantum mutual information and
//! `J = S(ρ_A) − min_n Σᵢ pᵢ S(ρ_{A|i})` is the classical correlation obtained
//! by measuring qubit B along the Bloch axis `n`.

use std::f64::consts::{PI, TAU};

use crate::qmat::{
    binary_entropy, c, clamp_spectrum, entropy_bits, hermitian_eigenvalues, partial_trace,
    partial_trace_raw, pauli, von_neumann_entropy, ComplexMatrix, DensityMatrix, Subsystem,
};
use crate::quantize::WernerParam;
use crate::{Error, Result};

/// Outcomes less likely than this contribute no entropy.
pub const MIN_OUTCOME_PROB: f64 = 1e-14;

/// Grid resolution of the axis search (per angle).
pub const AXIS_GRID: usize = 48;
/// Angular resolution at which axis refinement stops.
pub const AXIS_RESOLUTION: f64 = 1e-6;

/// Measurement axis on the Bloch sphere, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochDirection {
    theta: f64,
    phi: f64,
}

impl BlochDirection {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::OutOfRange {
                name: "theta_m",
                value: theta,
                min: 0.0,
                max: PI,
            });
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::OutOfRange {
                name: "phi_m",
                value: phi,
                min: 0.0,
                max: TAU,
            });
        }
        Ok(Self { theta, phi })
    }

    pub const fn z() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub const fn x() -> Self {
        Self {
            theta: PI / 2.0,
            phi: 0.0,
        }
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn phi(self) -> f64 {
        self.phi
    }

    pub fn unit_vector(self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Clamps θ and wraps φ back into range.
    fn normalized(theta: f64, phi: f64) -> Self {
        Self {
            theta: theta.clamp(0.0, PI),
            phi: phi.rem_euclid(TAU),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscordReport {
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub discord: f64,
    pub optimal_axis: BlochDirection,
}

/// `I(ρ) = S(ρ_A) + S(ρ_B) − S(ρ)`.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let a = von_neumann_entropy(&partial_trace(rho, Subsystem::A)?)?;
    let b = von_neumann_entropy(&partial_trace(rho, Subsystem::B)?)?;
    Ok(a + b - von_neumann_entropy(rho)?)
}

/// `Π± = (I ± n·σ)/2`.
pub fn measurement_projectors(axis: BlochDirection) -> (ComplexMatrix, ComplexMatrix) {
    let [nx, ny, nz] = axis.unit_vector();
    let n_sigma = pauli::x()
        .scale(c(nx, 0.0))
        .add(&pauli::y().scale(c(ny, 0.0)))
        .and_then(|m| m.add(&pauli::z().scale(c(nz, 0.0))))
        .expect("2x2");
    let id = ComplexMatrix::identity(2).expect("2x2");
    let half = c(0.5, 0.0);
    let plus = id.add(&n_sigma).expect("2x2").scale(half);
    let minus = id.sub(&n_sigma).expect("2x2").scale(half);
    (plus, minus)
}

/// `Σᵢ pᵢ S(ρ_{A|i})` after measuring qubit B along `axis`.
pub fn conditional_entropy(rho: &DensityMatrix, axis: BlochDirection) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::UnsupportedDimension(rho.dim(), "4"));
    }
    let id = ComplexMatrix::identity(2)?;
    let (plus, minus) = measurement_projectors(axis);
    let mut total = 0.0;
    for proj in [plus, minus] {
        let lifted = id.kron(&proj)?;
        let post = lifted.matmul(rho.matrix())?.matmul(&lifted)?;
        let reduced = partial_trace_raw(&post, Subsystem::A)?;
        let prob = reduced.trace().re;
        if prob < MIN_OUTCOME_PROB {
            continue;
        }
        let spectrum: Vec<f64> = hermitian_eigenvalues(&reduced)?
            .into_iter()
            .map(|x| x / prob)
            .collect();
        total += prob * entropy_bits(&clamp_spectrum(&spectrum));
    }
    Ok(total)
}

fn grid_axes() -> impl Iterator<Item = BlochDirection> {
    (0..AXIS_GRID).flat_map(|i| {
        let theta = PI * i as f64 / (AXIS_GRID - 1) as f64;
        (0..AXIS_GRID).map(move |j| BlochDirection {
            theta,
            phi: TAU * j as f64 / AXIS_GRID as f64,
        })
    })
}

/// Minimises the conditional entropy over measurement axes: a full-sphere grid
/// followed by compass search with step halving.
fn minimize_conditional_entropy(rho: &DensityMatrix) -> Result<(f64, BlochDirection)> {
    let mut best: Option<(f64, BlochDirection)> = None;
    for axis in grid_axes() {
        let value = conditional_entropy(rho, axis)?;
        // Grid is visited by increasing θ then φ, so strict `<` keeps the
        // smallest-angle axis on ties.
        if best.is_none_or(|(b, _)| value < b) {
            best = Some((value, axis));
        }
    }
    let (mut value, mut axis) = best.expect("non-empty grid");

    let mut step_theta = PI / (AXIS_GRID - 1) as f64;
    let mut step_phi = TAU / AXIS_GRID as f64;
    while step_theta >= AXIS_RESOLUTION || step_phi >= AXIS_RESOLUTION {
        let candidates = [
            (axis.theta - step_theta, axis.phi),
            (axis.theta + step_theta, axis.phi),
            (axis.theta, axis.phi - step_phi),
            (axis.theta, axis.phi + step_phi),
        ];
        let mut moved = false;
        for (t, p) in candidates {
            let cand = BlochDirection::normalized(t, p);
            let v = conditional_entropy(rho, cand)?;
            if v < value {
                value = v;
                axis = cand;
                moved = true;
            }
        }
        if !moved {
            step_theta /= 2.0;
            step_phi /= 2.0;
        }
    }
    Ok((value, axis))
}

pub fn quantum_discord(rho: &DensityMatrix) -> Result<DiscordReport> {
    let s_a = von_neumann_entropy(&partial_trace(rho, Subsystem::A)?)?;
    let mutual_info = mutual_information(rho)?;
    let (min_cond, optimal_axis) = minimize_conditional_entropy(rho)?;
    let classical_corr = s_a - min_cond;
    Ok(DiscordReport {
        mutual_info,
        classical_corr,
        discord: mutual_info - classical_corr,
        optimal_axis,
    })
}

/// Entropy of the Werner spectrum `{(1+3p)/4, (1−p)/4 ×3}`.
pub fn werner_entropy(w: WernerParam) -> f64 {
    let p = w.p();
    let lo = (1.0 - p) / 4.0;
    entropy_bits(&[(1.0 + 3.0 * p) / 4.0, lo, lo, lo])
}

/// Closed-form Werner discord `1 − S_W(p) + H₂((1+p)/2)`.
///
/// Both marginals of a Werner state are maximally mixed and its conditional
/// entropy is the same for every measurement axis, equal to `H₂((1+p)/2)`.
pub fn werner_discord_analytic(w: WernerParam) -> f64 {
    (1.0 - werner_entropy(w) + binary_entropy((1.0 + w.p()) / 2.0)).max(0.0)
}
