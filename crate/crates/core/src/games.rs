//! Classical 2×2 bimatrix games.
//!
//! Row index is Alice's move, column index Bob's; move 0 is C (cooperate),
//! move 1 is D (defect).

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    C,
    D,
}

impl Move {
    pub const ALL: [Move; 2] = [Move::C, Move::D];

    pub fn index(self) -> usize {
        match self {
            Move::C => 0,
            Move::D => 1,
        }
    }

    pub fn other(self) -> Move {
        match self {
            Move::C => Move::D,
            Move::D => Move::C,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::C => "C",
            Move::D => "D",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    A,
    B,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::A => "A",
            Player::B => "B",
        })
    }
}

/// A pure strategy profile `(row, col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PureProfile {
    pub row: Move,
    pub col: Move,
}

impl PureProfile {
    pub const ALL: [PureProfile; 4] = [
        PureProfile::new(Move::C, Move::C),
        PureProfile::new(Move::C, Move::D),
        PureProfile::new(Move::D, Move::C),
        PureProfile::new(Move::D, Move::D),
    ];

    pub const fn new(row: Move, col: Move) -> Self {
        Self { row, col }
    }

    fn with_move(self, player: Player, m: Move) -> Self {
        match player {
            Player::A => Self { row: m, ..self },
            Player::B => Self { col: m, ..self },
        }
    }

    fn own_move(self, player: Player) -> Move {
        match player {
            Player::A => self.row,
            Player::B => self.col,
        }
    }
}

impl fmt::Display for PureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Two-player 2×2 payoff table.
#[derive(Clone, Debug, PartialEq)]
pub struct Bimatrix {
    payoff_a: [[f64; 2]; 2],
    payoff_b: [[f64; 2]; 2],
}

impl Bimatrix {
    pub fn new(payoff_a: [[f64; 2]; 2], payoff_b: [[f64; 2]; 2]) -> Result<Self> {
        if payoff_a
            .iter()
            .chain(&payoff_b)
            .flatten()
            .any(|x| !x.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self { payoff_a, payoff_b })
    }

    pub fn payoff_a(&self) -> &[[f64; 2]; 2] {
        &self.payoff_a
    }

    pub fn payoff_b(&self) -> &[[f64; 2]; 2] {
        &self.payoff_b
    }

    pub fn payoff(&self, player: Player, profile: PureProfile) -> f64 {
        let table = self.table(player);
        table[profile.row.index()][profile.col.index()]
    }

    pub fn payoffs(&self, profile: PureProfile) -> (f64, f64) {
        (
            self.payoff(Player::A, profile),
            self.payoff(Player::B, profile),
        )
    }

    fn table(&self, player: Player) -> &[[f64; 2]; 2] {
        match player {
            Player::A => &self.payoff_a,
            Player::B => &self.payoff_b,
        }
    }

    /// A player's entries in outcome order `00, 01, 10, 11`.
    pub fn entries(&self, player: Player) -> [f64; 4] {
        let t = self.table(player);
        [t[0][0], t[0][1], t[1][0], t[1][1]]
    }

    pub fn mean_payoff(&self, player: Player) -> f64 {
        self.entries(player).iter().sum::<f64>() / 4.0
    }

    pub fn min_payoff(&self, player: Player) -> f64 {
        self.entries(player)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_payoff(&self, player: Player) -> f64 {
        self.entries(player)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Payoff change for `player` switching away from its move in `profile`.
    pub fn deviation_gain(&self, player: Player, profile: PureProfile) -> f64 {
        let deviated = profile.with_move(player, profile.own_move(player).other());
        self.payoff(player, deviated) - self.payoff(player, profile)
    }

    pub fn pure_nash_equilibria(&self) -> Vec<PureProfile> {
        PureProfile::ALL
            .into_iter()
            .filter(|&pr| {
                self.deviation_gain(Player::A, pr) <= 0.0
                    && self.deviation_gain(Player::B, pr) <= 0.0
            })
            .collect()
    }

    /// Weakly dominant move with at least one strict improvement, if any.
    pub fn dominant_strategy(&self, player: Player) -> Option<Move> {
        Move::ALL.into_iter().find(|&m| {
            let mut strict = false;
            for opp in Move::ALL {
                let here = profile_for(player, m, opp);
                let there = profile_for(player, m.other(), opp);
                let diff = self.payoff(player, here) - self.payoff(player, there);
                if diff < 0.0 {
                    return false;
                }
                strict |= diff > 0.0;
            }
            strict
        })
    }

    pub fn pareto_optimal_profiles(&self) -> Vec<PureProfile> {
        PureProfile::ALL
            .into_iter()
            .filter(|&pr| {
                let (a, b) = self.payoffs(pr);
                !PureProfile::ALL.into_iter().any(|other| {
                    let (oa, ob) = self.payoffs(other);
                    oa >= a && ob >= b && (oa > a || ob > b)
                })
            })
            .collect()
    }
}

fn profile_for(player: Player, own: Move, opponent: Move) -> PureProfile {
    match player {
        Player::A => PureProfile::new(own, opponent),
        Player::B => PureProfile::new(opponent, own),
    }
}

/// Prisoner's Dilemma: (C,C)=(3,3), (C,D)=(0,5), (D,C)=(5,0), (D,D)=(1,1).
pub fn builtin_pd() -> Bimatrix {
    Bimatrix {
        payoff_a: [[3.0, 0.0], [5.0, 1.0]],
        payoff_b: [[3.0, 5.0], [0.0, 1.0]],
    }
}

/// Chicken: (C,C)=(3,3), (C,D)=(1,4), (D,C)=(4,1), (D,D)=(0,0).
pub fn builtin_cg() -> Bimatrix {
    Bimatrix {
        payoff_a: [[3.0, 1.0], [4.0, 0.0]],
        payoff_b: [[3.0, 4.0], [1.0, 0.0]],
    }
}

/// Parses the four-line game format: `a00 b00`, `a01 b01`, `a10 b10`, `a11 b11`.
///
/// Text after `#` is ignored, as are blank lines.
impl FromStr for Bimatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut rows: Vec<(f64, f64)> = Vec::with_capacity(4);
        let mut last_line = 0;
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if rows.len() == 4 {
                return Err(parse_err(line, "more than four payoff lines"));
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(parse_err(
                    line,
                    &format!("expected two numbers, found {} fields", fields.len()),
                ));
            }
            let parse = |t: &str| -> Result<f64> {
                t.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| parse_err(line, &format!("'{t}' is not a finite number")))
            };
            rows.push((parse(fields[0])?, parse(fields[1])?));
        }
        if rows.len() != 4 {
            return Err(parse_err(
                last_line.max(1),
                &format!("expected four payoff lines, found {}", rows.len()),
            ));
        }
        Bimatrix::new(
            [[rows[0].0, rows[1].0], [rows[2].0, rows[3].0]],
            [[rows[0].1, rows[1].1], [rows[2].1, rows[3].1]],
        )
    }
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::GameParse {
        line,
        message: message.to_string(),
    }
}

impl fmt::Display for Bimatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pr in PureProfile::ALL {
            let (a, b) = self.payoffs(pr);
            writeln!(f, "{a} {b}")?;
        }
        Ok(())
    }
}
