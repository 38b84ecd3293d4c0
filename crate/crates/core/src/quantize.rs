//! Generalized quantization of 2×2 games on a Werner-like resource state.
//!
//! Each player applies a two-parameter unitary `U(θ, φ)` to their qubit of the
//! shared state, and the outcome is read out in a basis whose entanglement is
//! set by `δ` (`δ = 0` product basis, `δ = π/2` maximally entangled basis).
//! Payoffs are available three ways: the explicit trace `Tr(P ρ_f)`, the
//! trigonometric closed form for arbitrary `δ`, and the specialised closed
//! forms at the two basis limits.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

use crate::games::{Bimatrix, Player};
use crate::qmat::{c, ComplexMatrix, DensityMatrix, ProbabilityVector, C64};
use crate::{Error, Result};

/// Inputs within this distance of an angle bound are clamped onto it, so that
/// decimal renderings such as `3.1415927` are accepted for `π`.
pub const ANGLE_SLACK: f64 = 1e-6;

/// Tolerance used when a function requires an exact basis limit.
pub const BASIS_LIMIT_TOL: f64 = 1e-12;

fn check_range(name: &'static str, value: f64, min: f64, max: f64, slack: f64) -> Result<f64> {
    if !value.is_finite() || value < min - slack || value > max + slack {
        return Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        });
    }
    Ok(value.clamp(min, max))
}

/// Mixing weight `p` of the Werner-like state.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct WernerParam(f64);

impl WernerParam {
    pub fn new(p: f64) -> Result<Self> {
        check_range("p", p, 0.0, 1.0, 0.0).map(Self)
    }

    pub fn p(self) -> f64 {
        self.0
    }
}

/// A player's `(θ, φ)` with `θ ∈ [0, π]`, `φ ∈ [0, π/2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrategyParams {
    theta: f64,
    phi: f64,
}

impl StrategyParams {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        Ok(Self {
            theta: check_range("theta", theta, 0.0, PI, ANGLE_SLACK)?,
            phi: check_range("phi", phi, 0.0, FRAC_PI_2, ANGLE_SLACK)?,
        })
    }

    /// Classical C, the identity.
    pub const fn cooperate() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    /// Classical D, `U(π, 0)`.
    pub const fn defect() -> Self {
        Self {
            theta: PI,
            phi: 0.0,
        }
    }

    /// The quantum move `Q = U(0, π/2) = diag(i, -i)`.
    pub const fn quantum() -> Self {
        Self {
            theta: 0.0,
            phi: FRAC_PI_2,
        }
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn phi(self) -> f64 {
        self.phi
    }
}

impl fmt::Display for StrategyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(theta={}, phi={})", self.theta, self.phi)
    }
}

/// Entanglement `δ ∈ [0, π/2]` of the measurement basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementBasis {
    delta: f64,
}

impl MeasurementBasis {
    pub fn new(delta: f64) -> Result<Self> {
        Ok(Self {
            delta: check_range("delta", delta, 0.0, FRAC_PI_2, ANGLE_SLACK)?,
        })
    }

    pub const fn product() -> Self {
        Self { delta: 0.0 }
    }

    pub const fn entangled() -> Self {
        Self { delta: FRAC_PI_2 }
    }

    pub fn delta(self) -> f64 {
        self.delta
    }
}

/// Maximally entangled pure component of the Werner-like mixture.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BellResource {
    /// `(|00⟩ + |11⟩)/√2`.
    PhiPlus,
    /// `(|00⟩ + i|11⟩)/√2`, the state produced by the maximally entangling gate
    /// of the Eisert protocol. All trigonometric payoff formulas assume it.
    #[default]
    Eisert,
}

impl BellResource {
    pub fn ket(self) -> [C64; 4] {
        let s = FRAC_1_SQRT_2;
        let z = C64::default();
        match self {
            BellResource::PhiPlus => [c(s, 0.0), z, z, c(s, 0.0)],
            BellResource::Eisert => [c(s, 0.0), z, z, c(0.0, s)],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumGameConfig {
    pub bimatrix: Bimatrix,
    pub werner: WernerParam,
    pub basis: MeasurementBasis,
    pub resource: BellResource,
}

impl QuantumGameConfig {
    pub fn new(bimatrix: Bimatrix, werner: WernerParam, basis: MeasurementBasis) -> Self {
        Self {
            bimatrix,
            werner,
            basis,
            resource: BellResource::default(),
        }
    }

    pub fn with_resource(mut self, resource: BellResource) -> Self {
        self.resource = resource;
        self
    }

    pub fn p(&self) -> f64 {
        self.werner.p()
    }

    pub fn delta(&self) -> f64 {
        self.basis.delta()
    }

    pub fn initial_state(&self) -> Result<DensityMatrix> {
        resource_state(self.werner, self.resource)
    }
}

/// Outcome probabilities ordered `00, 01, 10, 11`.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    probs: ProbabilityVector,
}

impl OutcomeDistribution {
    pub fn as_array(&self) -> [f64; 4] {
        let s = self.probs.as_slice();
        [s[0], s[1], s[2], s[3]]
    }

    pub fn probabilities(&self) -> &ProbabilityVector {
        &self.probs
    }

    /// Expected payoff of `player` under this distribution.
    pub fn expected_payoff(&self, bimatrix: &Bimatrix, player: Player) -> f64 {
        self.as_array()
            .iter()
            .zip(bimatrix.entries(player))
            .map(|(p, x)| p * x)
            .sum()
    }
}

/// `p|φ⁺⟩⟨φ⁺| + (1-p)/4 · I⊗I`.
pub fn werner_state(w: WernerParam) -> Result<DensityMatrix> {
    resource_state(w, BellResource::PhiPlus)
}

/// `p|ψ⟩⟨ψ| + (1-p)/4 · I⊗I` for the chosen maximally entangled `|ψ⟩`.
pub fn resource_state(w: WernerParam, resource: BellResource) -> Result<DensityMatrix> {
    let p = w.p();
    let pure = ComplexMatrix::outer(&resource.ket())?.scale(c(p, 0.0));
    let noise = ComplexMatrix::identity(4)?.scale(c((1.0 - p) / 4.0, 0.0));
    DensityMatrix::new(pure.add(&noise)?)
}

/// `U(θ, φ) = cos(θ/2) R + sin(θ/2) C` with `R = diag(e^{iφ}, e^{-iφ})`,
/// `C|0⟩ = -|1⟩`, `C|1⟩ = |0⟩`.
pub fn strategy_unitary(s: StrategyParams) -> ComplexMatrix {
    let (sin_h, cos_h) = (s.theta / 2.0).sin_cos();
    let phase = C64::from_polar(1.0, s.phi);
    ComplexMatrix::new(
        2,
        vec![
            phase * cos_h,
            c(sin_h, 0.0),
            c(-sin_h, 0.0),
            phase.conj() * cos_h,
        ],
    )
    .expect("finite 2x2 unitary")
}

/// `(U₁ ⊗ U₂) ρ (U₁ ⊗ U₂)†`.
pub fn final_state(
    rho_in: &DensityMatrix,
    s1: StrategyParams,
    s2: StrategyParams,
) -> Result<DensityMatrix> {
    let joint = strategy_unitary(s1).kron(&strategy_unitary(s2))?;
    rho_in.evolve(&joint)
}

/// Measurement kets `ψ₀₀, ψ₀₁, ψ₁₀, ψ₁₁`.
pub fn basis_kets(b: MeasurementBasis) -> [[C64; 4]; 4] {
    let (s, co) = (b.delta() / 2.0).sin_cos();
    let z = C64::default();
    let re = |x: f64| c(x, 0.0);
    let im = |x: f64| c(0.0, x);
    [
        // cos|00> + i sin|11>
        [re(co), z, z, im(s)],
        // cos|01> - i sin|10>
        [z, re(co), im(-s), z],
        // cos|10> - i sin|01>
        [z, im(-s), re(co), z],
        // cos|11> + i sin|00>
        [im(s), z, z, re(co)],
    ]
}

/// Rank-one projectors `P₀₀, P₀₁, P₁₀, P₁₁`.
pub fn basis_projectors(b: MeasurementBasis) -> [ComplexMatrix; 4] {
    basis_kets(b).map(|k| ComplexMatrix::outer(&k).expect("4-dim ket"))
}

/// `Tr(P_k ρ_f)` for the four outcomes.
pub fn outcome_probabilities(
    cfg: &QuantumGameConfig,
    s1: StrategyParams,
    s2: StrategyParams,
) -> Result<OutcomeDistribution> {
    let rho_f = final_state(&cfg.initial_state()?, s1, s2)?;
    let mut probs = Vec::with_capacity(4);
    for proj in basis_projectors(cfg.basis) {
        probs.push(proj.matmul(rho_f.matrix())?.trace().re);
    }
    Ok(OutcomeDistribution {
        probs: ProbabilityVector::new(probs)?,
    })
}

/// `P^j = Σ $ʲ_kl P_kl`.
pub fn payoff_operator(
    bimatrix: &Bimatrix,
    player: Player,
    b: MeasurementBasis,
) -> Result<ComplexMatrix> {
    let mut op = ComplexMatrix::zeros(4)?;
    for (proj, weight) in basis_projectors(b).iter().zip(bimatrix.entries(player)) {
        op = op.add(&proj.scale(c(weight, 0.0)))?;
    }
    Ok(op)
}

/// `($_A, $_B) = (Tr(P^A ρ_f), Tr(P^B ρ_f))`.
pub fn payoffs_matrix_path(
    cfg: &QuantumGameConfig,
    s1: StrategyParams,
    s2: StrategyParams,
) -> Result<(f64, f64)> {
    let rho_f = final_state(&cfg.initial_state()?, s1, s2)?;
    let payoff = |player| -> Result<f64> {
        let op = payoff_operator(&cfg.bimatrix, player, cfg.basis)?;
        Ok(op.matmul(rho_f.matrix())?.trace().re)
    };
    Ok((payoff(Player::A)?, payoff(Player::B)?))
}

/// Half-angle factors shared by all closed forms.
struct Angles {
    /// cos²(θ₁/2), cos²(θ₂/2)
    cc1: f64,
    cc2: f64,
    /// sin²(θ₁/2), sin²(θ₂/2)
    ss1: f64,
    ss2: f64,
    c1: f64,
    c2: f64,
    s1: f64,
    s2: f64,
    /// sin θ₁ sin θ₂
    st: f64,
    phi1: f64,
    phi2: f64,
}

impl Angles {
    fn new(a: StrategyParams, b: StrategyParams) -> Self {
        let (s1, c1) = (a.theta / 2.0).sin_cos();
        let (s2, c2) = (b.theta / 2.0).sin_cos();
        Self {
            cc1: c1 * c1,
            cc2: c2 * c2,
            ss1: s1 * s1,
            ss2: s2 * s2,
            c1,
            c2,
            s1,
            s2,
            st: a.theta.sin() * b.theta.sin(),
            phi1: a.phi,
            phi2: b.phi,
        }
    }
}

/// Trigonometric closed form of `Tr(P_kl ρ_f)` for any `δ`, outcome order
/// `00, 01, 10, 11`. Valid for the [`BellResource::Eisert`] resource.
pub fn closed_form_probabilities(
    p: f64,
    delta: f64,
    s1: StrategyParams,
    s2: StrategyParams,
) -> [f64; 4] {
    let a = Angles::new(s1, s2);
    let sd = delta.sin();
    let sum = a.phi1 + a.phi2;
    let (sin_sum, cos_sum) = sum.sin_cos();
    let (sin1, cos1) = a.phi1.sin_cos();
    let (sin2, cos2) = a.phi2.sin_cos();
    let noise = (1.0 - p) / 4.0;

    // The -sinδ/2 term inside the bracket is what makes (1+p)/4 the right
    // constant here while the other three outcomes carry (1-p)/4.
    let p00 = p
        * ((1.0 - sin_sum * sin_sum * sd) * a.cc1 * a.cc2
            + (sd - 1.0) / 2.0 * (a.cc1 + a.cc2 - 0.5 * a.st * sin_sum)
            - sd / 2.0)
        + (1.0 + p) / 4.0;
    let p01 = p
        * ((1.0 + (2.0 * a.phi1).cos() * sd) / 2.0 * a.cc1 * a.ss2
            + (1.0 - (2.0 * a.phi2).cos() * sd) / 2.0 * a.ss1 * a.cc2
            + ((sd - 1.0) * sin1 * cos2 - (1.0 + sd) * cos1 * sin2) / 4.0 * a.st)
        + noise;
    let p10 = p
        * ((1.0 - (2.0 * a.phi1).cos() * sd) / 2.0 * a.cc1 * a.ss2
            + (1.0 + (2.0 * a.phi2).cos() * sd) / 2.0 * a.ss1 * a.cc2
            - ((1.0 + sd) * sin1 * cos2 + (1.0 - sd) * cos1 * sin2) / 4.0 * a.st)
        + noise;
    let p11 = p
        * (((1.0 + sd) / 2.0 - cos_sum * cos_sum * sd) * a.cc1 * a.cc2
            + (sd + 1.0) / 2.0 * (a.ss1 * a.ss2 + 0.5 * a.st * sin_sum))
        + noise;
    [p00, p01, p10, p11]
}

fn weighted(probs: [f64; 4], entries: [f64; 4]) -> f64 {
    probs.iter().zip(entries).map(|(p, x)| p * x).sum()
}

fn require_eisert(cfg: &QuantumGameConfig) -> Result<()> {
    match cfg.resource {
        BellResource::Eisert => Ok(()),
        BellResource::PhiPlus => Err(Error::UnsupportedResource),
    }
}

/// Payoffs from the closed-form outcome probabilities, without matrix algebra.
pub fn payoffs_closed_form(
    cfg: &QuantumGameConfig,
    s1: StrategyParams,
    s2: StrategyParams,
) -> Result<(f64, f64)> {
    require_eisert(cfg)?;
    let probs = closed_form_probabilities(cfg.p(), cfg.delta(), s1, s2);
    Ok((
        weighted(probs, cfg.bimatrix.entries(Player::A)),
        weighted(probs, cfg.bimatrix.entries(Player::B)),
    ))
}

/// Payoffs for measurement in the maximally entangled basis (`δ = π/2`).
pub fn payoffs_entangled_basis(
    cfg: &QuantumGameConfig,
    s1: StrategyParams,
    s2: StrategyParams,
) -> Result<(f64, f64)> {
    require_eisert(cfg)?;
    if (cfg.delta() - FRAC_PI_2).abs() > BASIS_LIMIT_TOL {
        return Err(Error::BasisMismatch {
            operation: "payoffs_entangled_basis",
            required: FRAC_PI_2,
            actual: cfg.delta(),
        });
    }
    let a = Angles::new(s1, s2);
    let p = cfg.p();
    let sum = a.phi1 + a.phi2;
    let w00 = (sum.cos() * a.c1 * a.c2).powi(2);
    let w01 = (a.phi1.cos() * a.c1 * a.s2 - a.phi2.sin() * a.s1 * a.c2).powi(2);
    let w10 = (a.phi1.sin() * a.c1 * a.s2 - a.phi2.cos() * a.s1 * a.c2).powi(2);
    let w11 = (a.c1 * a.c2 * sum.sin() + a.s1 * a.s2).powi(2);
    let payoff = |player| {
        let e = cfg.bimatrix.entries(player);
        p * (e[0] * w00 + e[1] * w01 + e[2] * w10 + e[3] * w11)
            + (1.0 - p) / 4.0 * e.iter().sum::<f64>()
    };
    Ok((payoff(Player::A), payoff(Player::B)))
}

/// Payoffs for measurement in the product basis (`δ = 0`).
pub fn payoffs_product_basis(
    cfg: &QuantumGameConfig,
    s1: StrategyParams,
    s2: StrategyParams,
) -> Result<(f64, f64)> {
    require_eisert(cfg)?;
    if cfg.delta().abs() > BASIS_LIMIT_TOL {
        return Err(Error::BasisMismatch {
            operation: "payoffs_product_basis",
            required: 0.0,
            actual: cfg.delta(),
        });
    }
    let a = Angles::new(s1, s2);
    let p = cfg.p();
    let cross = 0.5 * a.st * (a.phi1 + a.phi2).sin();
    let same = a.cc1 * a.cc2 + a.ss1 * a.ss2 + cross;
    let mixed = a.cc1 * a.ss2 + a.ss1 * a.cc2 - cross;
    let payoff = |player| {
        let e = cfg.bimatrix.entries(player);
        p / 2.0 * ((e[0] + e[3]) * same + (e[1] + e[2]) * mixed)
            + (1.0 - p) / 4.0 * e.iter().sum::<f64>()
    };
    Ok((payoff(Player::A), payoff(Player::B)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WernerRegion {
    /// `p ≤ 1/3`
    Separable,
    /// `1/3 < p ≤ 1/√2`: entangled but admits a local hidden-variable model.
    EntangledLocal,
    /// `p > 1/√2`
    Nonlocal,
}

impl WernerRegion {
    pub fn as_str(self) -> &'static str {
        match self {
            WernerRegion::Separable => "separable",
            WernerRegion::EntangledLocal => "entangled_local",
            WernerRegion::Nonlocal => "nonlocal",
        }
    }
}

impl fmt::Display for WernerRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WernerClassification {
    pub region: WernerRegion,
    /// `p` sits on the separability threshold 1/3.
    pub at_separability_boundary: bool,
    /// `p` sits on the nonlocality threshold 1/√2.
    pub at_nonlocality_boundary: bool,
}

pub const SEPARABILITY_THRESHOLD: f64 = 1.0 / 3.0;
pub const NONLOCALITY_THRESHOLD: f64 = FRAC_1_SQRT_2;
const BOUNDARY_TOL: f64 = 1e-12;

/// Boundary points belong to the lower region.
pub fn classify_werner(w: WernerParam) -> WernerClassification {
    let p = w.p();
    let region = if p <= SEPARABILITY_THRESHOLD {
        WernerRegion::Separable
    } else if p <= NONLOCALITY_THRESHOLD {
        WernerRegion::EntangledLocal
    } else {
        WernerRegion::Nonlocal
    };
    WernerClassification {
        region,
        at_separability_boundary: (p - SEPARABILITY_THRESHOLD).abs() <= BOUNDARY_TOL,
        at_nonlocality_boundary: (p - NONLOCALITY_THRESHOLD).abs() <= BOUNDARY_TOL,
    }
}
