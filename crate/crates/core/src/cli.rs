//! The `qgame` command-line front end.
//!
//! Every command validates its flags before computing anything and renders its
//! whole output into memory first, so a failing run never emits partial output.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::discord::{quantum_discord, werner_discord_analytic};
use crate::equilibria::{dilemma_report, verify_profile_nash, GameKind, GridSpec};
use crate::games::{builtin_cg, builtin_pd, Bimatrix, Move, Player};
use crate::quantize::{
    classify_werner, payoffs_closed_form, payoffs_matrix_path, werner_state, MeasurementBasis,
    QuantumGameConfig, StrategyParams, WernerParam,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;
/// `nash-check` found a profitable deviation.
pub const EXIT_NOT_EQUILIBRIUM: i32 = 3;

/// Agreement required between the matrix and closed-form payoff paths.
pub const DUAL_PATH_TOL: f64 = 1e-10;

const DEFAULT_STEPS: usize = 51;

#[derive(Parser, Debug)]
#[command(
    name = "qgame",
    version,
    about = "Quantized 2x2 games on Werner-like states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Payoffs of one strategy profile, by matrix algebra and by closed form.
    Payoff(Flags),
    /// Discord of Werner states as a function of p (CSV).
    DiscordCurve(Flags),
    /// Grid check that a profile (default (Q,Q)) is a Nash equilibrium.
    NashCheck(Flags),
    /// Payoffs, equilibrium gap and discord swept over p (CSV).
    SweepP(Flags),
    /// Classical analysis: pure equilibria, dominance, Pareto optimality.
    Classical(Flags),
    /// Full dilemma-resolution report for pd or cg.
    Report(Flags),
}

#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// `pd`, `cg`, or a path to a four-line game file
    #[arg(long)]
    pub game: Option<String>,
    /// Werner mixing weight in [0, 1]
    #[arg(long)]
    pub p: Option<f64>,
    /// Measurement-basis entanglement in [0, pi/2]
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi2: Option<f64>,
    /// Deviation grid as `<n_theta>x<n_phi>`
    #[arg(long)]
    pub grid: Option<String>,
    /// Number of p values from 0 to 1 inclusive
    #[arg(long)]
    pub steps: Option<usize>,
    /// Write output here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Interpret angles and delta as degrees
    #[arg(long)]
    pub degrees: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Payoff,
    DiscordCurve,
    NashCheck,
    SweepP,
    Classical,
    Report,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GameSource {
    Builtin(GameKind),
    File(PathBuf),
}

/// Fully validated invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub game: Option<(GameSource, Bimatrix)>,
    pub p: Option<WernerParam>,
    pub basis: Option<MeasurementBasis>,
    pub strategies: Option<(StrategyParams, StrategyParams)>,
    pub grid: GridSpec,
    pub steps: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn flag_err(flag: &str, err: impl std::fmt::Display) -> CliError {
    usage(format!("--{flag}: {err}"))
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_string()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.into()
    }
}

fn parse_grid(text: &str) -> Result<GridSpec, CliError> {
    let (a, b) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| flag_err("grid", format!("expected <n>x<m>, got '{text}'")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| flag_err("grid", format!("'{s}' is not a positive integer")))
    };
    GridSpec::new(parse(a)?, parse(b)?).map_err(|e| flag_err("grid", e))
}

fn load_game(spec: &str) -> Result<(GameSource, Bimatrix), CliError> {
    match spec {
        "pd" => Ok((
            GameSource::Builtin(GameKind::PrisonersDilemma),
            builtin_pd(),
        )),
        "cg" => Ok((GameSource::Builtin(GameKind::Chicken), builtin_cg())),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| flag_err("game", format!("cannot read '{path}': {e}")))?;
            let g: Bimatrix = text
                .parse()
                .map_err(|e| flag_err("game", format!("{path}: {e}")))?;
            Ok((GameSource::File(path.into()), g))
        }
    }
}

impl RunConfig {
    pub fn from_command(command: Command) -> Result<Self, CliError> {
        let (kind, flags) = match command {
            Command::Payoff(f) => (CommandKind::Payoff, f),
            Command::DiscordCurve(f) => (CommandKind::DiscordCurve, f),
            Command::NashCheck(f) => (CommandKind::NashCheck, f),
            Command::SweepP(f) => (CommandKind::SweepP, f),
            Command::Classical(f) => (CommandKind::Classical, f),
            Command::Report(f) => (CommandKind::Report, f),
        };
        Self::validate(kind, flags)
    }

    fn validate(command: CommandKind, f: Flags) -> Result<Self, CliError> {
        use CommandKind::*;
        let angle = |x: f64| if f.degrees { x.to_radians() } else { x };

        let needs_game = !matches!(command, DiscordCurve);
        let game = match (&f.game, needs_game) {
            (Some(g), true) => Some(load_game(g)?),
            (None, true) => return Err(usage("missing required flag --game")),
            (_, false) => None,
        };
        if command == Report && !matches!(game, Some((GameSource::Builtin(_), _))) {
            return Err(flag_err("game", "report supports only pd or cg"));
        }

        let needs_p = matches!(command, Payoff | NashCheck | Report);
        let p = match f.p {
            Some(p) => Some(WernerParam::new(p).map_err(|e| flag_err("p", e))?),
            None if needs_p => return Err(usage("missing required flag --p")),
            None => None,
        };

        let default_delta = matches!(command, NashCheck | Report).then_some(FRAC_PI_2);
        let basis = match f.delta.map(angle).or(default_delta) {
            Some(d) => Some(MeasurementBasis::new(d).map_err(|e| flag_err("delta", e))?),
            None if matches!(command, Payoff | SweepP) => {
                return Err(usage("missing required flag --delta"))
            }
            None => None,
        };

        let angles = [f.theta1, f.phi1, f.theta2, f.phi2];
        let names = ["theta1", "phi1", "theta2", "phi2"];
        let strategies = if angles.iter().all(Option::is_some) {
            let v: Vec<f64> = angles.iter().map(|a| angle(a.unwrap())).collect();
            for (i, &x) in v.iter().enumerate() {
                let check = if i % 2 == 0 {
                    StrategyParams::new(x, 0.0)
                } else {
                    StrategyParams::new(0.0, x)
                };
                check.map_err(|e| flag_err(names[i], e))?;
            }
            let s1 = StrategyParams::new(v[0], v[1]).map_err(|e| flag_err("theta1", e))?;
            let s2 = StrategyParams::new(v[2], v[3]).map_err(|e| flag_err("theta2", e))?;
            Some((s1, s2))
        } else if let Some(i) = angles.iter().position(Option::is_some) {
            let missing = angles.iter().position(Option::is_none).unwrap();
            return Err(usage(format!(
                "--{} given without --{}; pass all four angles",
                names[i], names[missing]
            )));
        } else {
            match command {
                Payoff => {
                    return Err(usage(
                        "missing required flags --theta1 --phi1 --theta2 --phi2",
                    ))
                }
                NashCheck | SweepP => Some((StrategyParams::quantum(), StrategyParams::quantum())),
                _ => None,
            }
        };

        let grid = match &f.grid {
            Some(g) => parse_grid(g)?,
            None => GridSpec::default(),
        };
        let steps = f.steps.unwrap_or(DEFAULT_STEPS);
        if steps < 2 {
            return Err(flag_err("steps", format!("need at least 2, got {steps}")));
        }
        let format = f.format.unwrap_or(match command {
            DiscordCurve | SweepP => Format::Csv,
            _ => Format::Table,
        });

        Ok(Self {
            command,
            game,
            p,
            basis,
            strategies,
            grid,
            steps,
            output: f.output,
            format,
        })
    }

    fn bimatrix(&self) -> &Bimatrix {
        &self.game.as_ref().expect("validated").1
    }

    fn game_cfg(&self, p: WernerParam) -> QuantumGameConfig {
        QuantumGameConfig::new(self.bimatrix().clone(), p, self.basis.expect("validated"))
    }

    fn p_values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n).map(|k| k as f64 / n as f64).collect()
    }
}

/// Result of a command: rendered text and exit code.
pub struct Rendered {
    pub text: String,
    pub code: i32,
}

fn internal(e: crate::Error) -> CliError {
    CliError {
        code: EXIT_INCONSISTENT,
        message: format!("internal error: {e}"),
    }
}

/// A flat table rendered either as CSV or as aligned columns.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                out.push_str(&self.header.join(","));
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
            }
            Format::Table => {
                let widths: Vec<usize> = (0..self.header.len())
                    .map(|i| {
                        self.rows
                            .iter()
                            .map(|r| r[i].len())
                            .chain([self.header[i].len()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |cells: Vec<&str>| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                out.push_str(&line(self.header.clone()));
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&line(row.iter().map(String::as_str).collect()));
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn key_values(pairs: &[(&str, String)], format: Format) -> String {
    let table = Table {
        header: vec!["key", "value"],
        rows: pairs
            .iter()
            .map(|(k, v)| vec![k.to_string(), v.clone()])
            .collect(),
    };
    match format {
        Format::Csv => table.render(Format::Csv),
        Format::Table => {
            let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            pairs
                .iter()
                .map(|(k, v)| format!("{k:<width$}  {v}\n"))
                .collect()
        }
    }
}

pub fn cmd_payoff(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let game = cfg.game_cfg(cfg.p.expect("validated"));
    let (s1, s2) = cfg.strategies.expect("validated");
    let matrix = payoffs_matrix_path(&game, s1, s2).map_err(internal)?;
    let closed = payoffs_closed_form(&game, s1, s2).map_err(internal)?;
    let diff = (matrix.0 - closed.0).abs().max((matrix.1 - closed.1).abs());
    let agree = diff <= DUAL_PATH_TOL;
    let text = key_values(
        &[
            ("payoff_a", fmt_num(matrix.0)),
            ("payoff_b", fmt_num(matrix.1)),
            ("payoff_a_closed_form", fmt_num(closed.0)),
            ("payoff_b_closed_form", fmt_num(closed.1)),
            ("max_abs_difference", fmt_num(diff)),
            ("paths_agree", agree.to_string()),
        ],
        cfg.format,
    );
    Ok(Rendered {
        text,
        code: if agree { EXIT_OK } else { EXIT_INCONSISTENT },
    })
}

pub fn cmd_discord_curve(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let mut rows = Vec::with_capacity(cfg.steps);
    for p in cfg.p_values() {
        let w = WernerParam::new(p).map_err(internal)?;
        let report = quantum_discord(&werner_state(w).map_err(internal)?).map_err(internal)?;
        rows.push(vec![
            fmt_num(p),
            fmt_num(report.discord),
            fmt_num(werner_discord_analytic(w)),
            fmt_num(report.mutual_info),
            fmt_num(report.classical_corr),
            classify_werner(w).region.to_string(),
        ]);
    }
    let table = Table {
        header: vec![
            "p",
            "discord_numeric",
            "discord_analytic",
            "mutual_info",
            "classical_corr",
            "region",
        ],
        rows,
    };
    Ok(Rendered {
        text: table.render(cfg.format),
        code: EXIT_OK,
    })
}

pub fn cmd_nash_check(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let game = cfg.game_cfg(cfg.p.expect("validated"));
    let profile = cfg.strategies.expect("validated");
    let v = verify_profile_nash(&game, profile, cfg.grid).map_err(internal)?;
    let text = key_values(
        &[
            ("is_equilibrium", v.is_equilibrium.to_string()),
            ("min_gap", fmt_num(v.min_gap)),
            ("max_gap", fmt_num(v.max_gap)),
            ("worst_player", v.worst_player.to_string()),
            ("worst_theta", fmt_num(v.worst_deviation.theta())),
            ("worst_phi", fmt_num(v.worst_deviation.phi())),
            ("grid", v.grid.to_string()),
        ],
        cfg.format,
    );
    Ok(Rendered {
        text,
        code: if v.is_equilibrium {
            EXIT_OK
        } else {
            EXIT_NOT_EQUILIBRIUM
        },
    })
}

pub fn cmd_sweep_p(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let profile = cfg.strategies.expect("validated");
    let mut rows = Vec::with_capacity(cfg.steps);
    for p in cfg.p_values() {
        let w = WernerParam::new(p).map_err(internal)?;
        let game = cfg.game_cfg(w);
        let (a, b) = payoffs_matrix_path(&game, profile.0, profile.1).map_err(internal)?;
        let v = verify_profile_nash(&game, profile, cfg.grid).map_err(internal)?;
        rows.push(vec![
            fmt_num(p),
            fmt_num(a),
            fmt_num(b),
            fmt_num(v.min_gap),
            fmt_num(werner_discord_analytic(w)),
        ]);
    }
    let table = Table {
        header: vec!["p", "payoff_a", "payoff_b", "qq_gap_min", "discord"],
        rows,
    };
    Ok(Rendered {
        text: table.render(cfg.format),
        code: EXIT_OK,
    })
}

fn join_profiles<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    if v.is_empty() {
        "none".into()
    } else {
        v.join(" ")
    }
}

fn show_dominant(m: Option<Move>) -> String {
    m.map_or_else(|| "none".into(), |m| m.to_string())
}

pub fn cmd_classical(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let g = cfg.bimatrix();
    let text = key_values(
        &[
            (
                "pure_nash_equilibria",
                join_profiles(g.pure_nash_equilibria()),
            ),
            ("dominant_a", show_dominant(g.dominant_strategy(Player::A))),
            ("dominant_b", show_dominant(g.dominant_strategy(Player::B))),
            ("pareto_optimal", join_profiles(g.pareto_optimal_profiles())),
        ],
        cfg.format,
    );
    Ok(Rendered {
        text,
        code: EXIT_OK,
    })
}

pub fn cmd_report(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let kind = match cfg.game.as_ref().map(|g| &g.0) {
        Some(GameSource::Builtin(k)) => *k,
        _ => unreachable!("validated"),
    };
    let r = dilemma_report(kind, cfg.p.expect("validated").p()).map_err(internal)?;
    let mut classical = String::new();
    for (i, (pr, (a, b))) in r.classical_equilibria.iter().enumerate() {
        if i > 0 {
            classical.push(' ');
        }
        let _ = write!(classical, "{pr}=({},{})", fmt_num(*a), fmt_num(*b));
    }
    let text = key_values(
        &[
            ("game", kind.short_name().to_string()),
            ("p", fmt_num(r.p)),
            ("qq_payoff_a", fmt_num(r.qq_payoffs.0)),
            ("qq_payoff_b", fmt_num(r.qq_payoffs.1)),
            ("cc_payoff_a", fmt_num(r.cc_payoffs.0)),
            ("cc_payoff_b", fmt_num(r.cc_payoffs.1)),
            ("classical_equilibria", classical),
            ("qq_is_equilibrium", r.verdict.is_equilibrium.to_string()),
            ("qq_min_gap", fmt_num(r.verdict.min_gap)),
            ("qq_degenerate", r.verdict.is_degenerate().to_string()),
            ("region", r.region.region.to_string()),
            ("discord", fmt_num(r.discord)),
            ("dilemma_resolved", r.dilemma_resolved.to_string()),
        ],
        cfg.format,
    );
    Ok(Rendered {
        text,
        code: EXIT_OK,
    })
}

pub fn dispatch(cfg: &RunConfig) -> Result<Rendered, CliError> {
    match cfg.command {
        CommandKind::Payoff => cmd_payoff(cfg),
        CommandKind::DiscordCurve => cmd_discord_curve(cfg),
        CommandKind::NashCheck => cmd_nash_check(cfg),
        CommandKind::SweepP => cmd_sweep_p(cfg),
        CommandKind::Classical => cmd_classical(cfg),
        CommandKind::Report => cmd_report(cfg),
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its output to `out` or to `--output`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = RunConfig::from_command(cli.command).and_then(|cfg| {
        let rendered = dispatch(&cfg)?;
        match &cfg.output {
            Some(path) => std::fs::write(path, &rendered.text).map_err(|e| CliError {
                code: EXIT_USAGE,
                message: format!("--output: cannot write '{}': {e}", path.display()),
            })?,
            None => out
                .write_all(rendered.text.as_bytes())
                .map_err(|e| CliError {
                    code: EXIT_USAGE,
                    message: format!("cannot write output: {e}"),
                })?,
        }
        Ok(rendered.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(3.0), "3");
        assert_eq!(fmt_num(2.25), "2.25");
        assert_eq!(fmt_num(0.1), "0.1");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(-2.0 / 3.0), "-0.666666666667");
        assert_eq!(fmt_num(1e-20), "1e-20");
        assert_eq!(fmt_num(-4.440892098500626e-16), "-4.4408920985e-16");
        assert_eq!(fmt_num(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_num(0.0001), "0.0001");
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("41x41").unwrap(), GridSpec::default());
        assert_eq!(parse_grid("3X5").unwrap(), GridSpec::new(3, 5).unwrap());
        assert!(parse_grid("41").is_err());
        assert!(parse_grid("1x4").is_err());
        assert!(parse_grid("ax4").is_err());
    }
}
