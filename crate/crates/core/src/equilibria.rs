//! Nash-equilibrium checks for quantized games over the two-parameter strategy set.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::discord::werner_discord_analytic;
use crate::games::{builtin_cg, builtin_pd, Bimatrix, Move, Player, PureProfile};
use crate::quantize::{
    classify_werner, payoffs_matrix_path, MeasurementBasis, QuantumGameConfig, StrategyParams,
    WernerClassification, WernerParam,
};
use crate::{Error, Result};

/// Gaps at or above this count as "no profitable deviation".
pub const GAP_TOL: f64 = -1e-9;

/// Payoff spread below which every deviation is considered payoff-equivalent.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeviationGap {
    pub gap: f64,
    pub at: StrategyParams,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_theta: 41,
            n_phi: 41,
        }
    }
}

impl GridSpec {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 2 {
            return Err(Error::InvalidGrid(n_theta, n_phi));
        }
        Ok(Self { n_theta, n_phi })
    }

    /// Row-major grid over `θ ∈ [0, π]` × `φ ∈ [0, π/2]`, endpoints included.
    pub fn points(self) -> impl Iterator<Item = StrategyParams> {
        let (nt, np) = (self.n_theta, self.n_phi);
        (0..nt).flat_map(move |i| {
            let theta = PI * i as f64 / (nt - 1) as f64;
            (0..np).map(move |j| {
                let phi = FRAC_PI_2 * j as f64 / (np - 1) as f64;
                StrategyParams::new(theta, phi).expect("grid point in range")
            })
        })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n_theta, self.n_phi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquilibriumVerdict {
    pub is_equilibrium: bool,
    pub min_gap: f64,
    /// Largest gap seen; zero together with `min_gap` means every deviation is
    /// payoff-equivalent.
    pub max_gap: f64,
    pub worst_deviation: StrategyParams,
    pub worst_player: Player,
    pub grid: GridSpec,
}

impl EquilibriumVerdict {
    pub fn is_degenerate(&self) -> bool {
        self.min_gap.abs() <= DEGENERACY_TOL && self.max_gap.abs() <= DEGENERACY_TOL
    }
}

/// Payoff lost by the deviating player when it switches from `reference` to
/// `deviant` while `fixed` keeps its reference strategy.
///
/// For `fixed = B` this is `$_A(ref) − $_A(deviant, ref_B)`.
pub fn deviation_gap(
    cfg: &QuantumGameConfig,
    fixed: Player,
    reference: (StrategyParams, StrategyParams),
    deviant: StrategyParams,
) -> Result<DeviationGap> {
    let (ra, rb) = payoffs_matrix_path(cfg, reference.0, reference.1)?;
    let gap = match fixed {
        Player::B => ra - payoffs_matrix_path(cfg, deviant, reference.1)?.0,
        Player::A => rb - payoffs_matrix_path(cfg, reference.0, deviant)?.1,
    };
    Ok(DeviationGap { gap, at: deviant })
}

/// Alice's loss from deviating off `(Q,Q)` in the Prisoner's Dilemma at `δ = π/2`.
pub fn pd_gap_closed_form(p: f64, theta1: f64, phi1: f64) -> f64 {
    let (s, c) = (theta1 / 2.0).sin_cos();
    p * (3.0 * s * s + 2.0 * c * c * phi1.cos().powi(2))
}

/// Alice's loss from deviating off `(Q,Q)` in Chicken at `δ = π/2`.
pub fn cg_gap_closed_form(p: f64, theta1: f64, phi1: f64) -> f64 {
    let c = (theta1 / 2.0).cos();
    p * (2.0 + c * c * (3.0 * phi1.cos().powi(2) - 2.0))
}

/// Checks every unilateral deviation on the grid, Alice's surface first.
///
/// The reported worst deviation is the first grid point reaching the minimum
/// gap, so the result does not depend on evaluation order.
pub fn verify_profile_nash(
    cfg: &QuantumGameConfig,
    profile: (StrategyParams, StrategyParams),
    grid: GridSpec,
) -> Result<EquilibriumVerdict> {
    let (ra, rb) = payoffs_matrix_path(cfg, profile.0, profile.1)?;
    let mut min_gap = f64::INFINITY;
    let mut max_gap = f64::NEG_INFINITY;
    let mut worst = (profile.0, Player::A);
    for player in [Player::A, Player::B] {
        for deviant in grid.points() {
            let gap = match player {
                Player::A => ra - payoffs_matrix_path(cfg, deviant, profile.1)?.0,
                Player::B => rb - payoffs_matrix_path(cfg, profile.0, deviant)?.1,
            };
            if gap < min_gap {
                min_gap = gap;
                worst = (deviant, player);
            }
            max_gap = max_gap.max(gap);
        }
    }
    Ok(EquilibriumVerdict {
        is_equilibrium: min_gap >= GAP_TOL,
        min_gap,
        max_gap,
        worst_deviation: worst.0,
        worst_player: worst.1,
        grid,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameKind {
    PrisonersDilemma,
    Chicken,
}

impl GameKind {
    pub fn bimatrix(self) -> Bimatrix {
        match self {
            GameKind::PrisonersDilemma => builtin_pd(),
            GameKind::Chicken => builtin_cg(),
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            GameKind::PrisonersDilemma => "pd",
            GameKind::Chicken => "cg",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DilemmaReport {
    pub game: GameKind,
    pub p: f64,
    /// `(Q,Q)` payoffs measured in the entangled basis.
    pub qq_payoffs: (f64, f64),
    /// Quantum payoffs of the classical `(C,C)` profile at the same `p`.
    pub cc_payoffs: (f64, f64),
    pub classical_equilibria: Vec<(PureProfile, (f64, f64))>,
    pub verdict: EquilibriumVerdict,
    pub region: WernerClassification,
    pub discord: f64,
    pub dilemma_resolved: bool,
}

const PAYOFF_TOL: f64 = 1e-10;

/// Summarises whether `(Q,Q)` resolves the game's dilemma on a Werner state
/// with mixing weight `p`, using the entangled basis and the default grid.
///
/// Resolution requires `(Q,Q)` to be a non-degenerate equilibrium (some
/// deviation actually costs payoff). In addition, for the Prisoner's Dilemma
/// both players must beat their classical `(D,D)` payoff; for Chicken `(Q,Q)`
/// must pay exactly what the Pareto-optimal `(C,C)` profile pays.
pub fn dilemma_report(game: GameKind, p: f64) -> Result<DilemmaReport> {
    let werner = WernerParam::new(p)?;
    let bimatrix = game.bimatrix();
    let cfg = QuantumGameConfig::new(bimatrix.clone(), werner, MeasurementBasis::entangled());
    let q = StrategyParams::quantum();
    let cc = StrategyParams::cooperate();
    let qq_payoffs = payoffs_matrix_path(&cfg, q, q)?;
    let cc_payoffs = payoffs_matrix_path(&cfg, cc, cc)?;
    let verdict = verify_profile_nash(&cfg, (q, q), GridSpec::default())?;
    let classical_equilibria: Vec<_> = bimatrix
        .pure_nash_equilibria()
        .into_iter()
        .map(|pr| (pr, bimatrix.payoffs(pr)))
        .collect();

    let stable = verdict.is_equilibrium && !verdict.is_degenerate();
    let dilemma_resolved = stable
        && match game {
            GameKind::PrisonersDilemma => {
                let floor = bimatrix.payoffs(PureProfile::new(Move::D, Move::D));
                qq_payoffs.0 > floor.0 + PAYOFF_TOL && qq_payoffs.1 > floor.1 + PAYOFF_TOL
            }
            GameKind::Chicken => {
                (qq_payoffs.0 - cc_payoffs.0).abs() <= PAYOFF_TOL
                    && (qq_payoffs.1 - cc_payoffs.1).abs() <= PAYOFF_TOL
            }
        };

    Ok(DilemmaReport {
        game,
        p,
        qq_payoffs,
        cc_payoffs,
        classical_equilibria,
        verdict,
        region: classify_werner(werner),
        discord: werner_discord_analytic(werner),
        dilemma_resolved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(game: GameKind, p: f64) -> QuantumGameConfig {
        QuantumGameConfig::new(
            game.bimatrix(),
            WernerParam::new(p).unwrap(),
            MeasurementBasis::entangled(),
        )
    }

    fn qq() -> (StrategyParams, StrategyParams) {
        (StrategyParams::quantum(), StrategyParams::quantum())
    }

    #[test]
    fn gap_is_zero_for_reference_strategy() {
        let c = cfg(GameKind::PrisonersDilemma, 0.7);
        for fixed in [Player::A, Player::B] {
            let g = deviation_gap(&c, fixed, qq(), StrategyParams::quantum()).unwrap();
            assert!(g.gap.abs() < 1e-15);
        }
    }

    #[test]
    fn gaps_match_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let p = rng.gen_range(0.0..=1.0);
            let (theta, phi) = (rng.gen_range(0.0..=PI), rng.gen_range(0.0..=FRAC_PI_2));
            let dev = StrategyParams::new(theta, phi).unwrap();
            let pd =
                deviation_gap(&cfg(GameKind::PrisonersDilemma, p), Player::B, qq(), dev).unwrap();
            assert!((pd.gap - pd_gap_closed_form(p, theta, phi)).abs() < 1e-10);
            let cg = deviation_gap(&cfg(GameKind::Chicken, p), Player::B, qq(), dev).unwrap();
            assert!((cg.gap - cg_gap_closed_form(p, theta, phi)).abs() < 1e-10);
            // Bob's surface mirrors Alice's.
            let pd_b =
                deviation_gap(&cfg(GameKind::PrisonersDilemma, p), Player::A, qq(), dev).unwrap();
            assert!((pd_b.gap - pd.gap).abs() < 1e-10);
        }
    }

    #[test]
    fn closed_form_spot_values() {
        assert_eq!(pd_gap_closed_form(0.0, 1.0, 0.3), 0.0);
        assert!((pd_gap_closed_form(1.0, PI, 0.0) - 3.0).abs() < 1e-15);
        assert!((pd_gap_closed_form(0.5, 0.0, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(cg_gap_closed_form(0.0, 2.0, 1.0), 0.0);
        assert!((cg_gap_closed_form(1.0, 0.0, 0.0) - 3.0).abs() < 1e-15);
        assert!(cg_gap_closed_form(1.0, 0.0, FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1, 5).is_err());
        let pts: Vec<_> = GridSpec::new(3, 2).unwrap().points().collect();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], StrategyParams::cooperate());
        assert_eq!(pts[5].theta(), PI);
        assert_eq!(pts[5].phi(), FRAC_PI_2);
    }

    #[test]
    fn qq_verdicts() {
        let v = verify_profile_nash(
            &cfg(GameKind::PrisonersDilemma, 1.0),
            qq(),
            GridSpec::default(),
        )
        .unwrap();
        assert!(v.is_equilibrium);
        assert!(v.min_gap.abs() < 1e-12);
        assert_eq!(v.worst_deviation, StrategyParams::quantum());
        assert_eq!(v.worst_player, Player::A);

        let v = verify_profile_nash(
            &cfg(GameKind::PrisonersDilemma, 0.2),
            qq(),
            GridSpec::default(),
        )
        .unwrap();
        assert!(v.is_equilibrium && !v.is_degenerate());

        let v =
            verify_profile_nash(&cfg(GameKind::Chicken, 0.0), qq(), GridSpec::default()).unwrap();
        assert!(v.is_equilibrium && v.is_degenerate());
    }

    #[test]
    fn classical_defection_is_not_a_quantum_equilibrium() {
        let d = StrategyParams::defect();
        let v = verify_profile_nash(
            &cfg(GameKind::PrisonersDilemma, 1.0),
            (d, d),
            GridSpec::default(),
        )
        .unwrap();
        assert!(!v.is_equilibrium);
        assert!(v.min_gap < -1.0);
    }

    #[test]
    fn refinement_does_not_flip_clear_verdicts() {
        let d = StrategyParams::defect();
        for (game, p, profile) in [
            (GameKind::PrisonersDilemma, 0.4, qq()),
            (GameKind::Chicken, 0.9, qq()),
            (GameKind::PrisonersDilemma, 0.8, (d, d)),
        ] {
            let coarse =
                verify_profile_nash(&cfg(game, p), profile, GridSpec::new(11, 11).unwrap())
                    .unwrap();
            let fine = verify_profile_nash(&cfg(game, p), profile, GridSpec::new(21, 21).unwrap())
                .unwrap();
            if coarse.min_gap.abs() > 1e-6 {
                assert_eq!(coarse.is_equilibrium, fine.is_equilibrium);
            }
        }
    }

    #[test]
    fn qq_payoff_is_linear_in_p() {
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let (a, b) =
                payoffs_matrix_path(&cfg(GameKind::PrisonersDilemma, p), qq().0, qq().1).unwrap();
            assert!((a - (2.25 + 0.75 * p)).abs() < 1e-10 && (b - a).abs() < 1e-10);
            let (a, b) = payoffs_matrix_path(&cfg(GameKind::Chicken, p), qq().0, qq().1).unwrap();
            assert!((a - (2.0 + p)).abs() < 1e-10 && (b - a).abs() < 1e-10);
        }
    }

    #[test]
    fn dilemma_reports() {
        let r = dilemma_report(GameKind::PrisonersDilemma, 1.0).unwrap();
        assert!((r.qq_payoffs.0 - 3.0).abs() < 1e-10 && (r.qq_payoffs.1 - 3.0).abs() < 1e-10);
        assert!(r.dilemma_resolved);

        let r = dilemma_report(GameKind::PrisonersDilemma, 0.2).unwrap();
        assert!(r.dilemma_resolved);
        assert_eq!(r.region.region, crate::quantize::WernerRegion::Separable);
        assert!(r.discord > 0.0);

        let r = dilemma_report(GameKind::PrisonersDilemma, 0.0).unwrap();
        assert!(!r.dilemma_resolved);
        assert!((r.qq_payoffs.0 - 2.25).abs() < 1e-10 && (r.qq_payoffs.1 - 2.25).abs() < 1e-10);

        let r = dilemma_report(GameKind::Chicken, 1.0).unwrap();
        assert!(r.dilemma_resolved);
        assert!((r.qq_payoffs.0 - 3.0).abs() < 1e-10);
        assert_eq!(r.classical_equilibria.len(), 2);

        assert!(dilemma_report(GameKind::Chicken, 1.5).is_err());
    }
}
