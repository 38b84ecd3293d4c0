//! Quantized 2×2 games played on Werner-like two-qubit states.
//!
//! The crate is organised bottom-up:
//!
//! * [`qmat`]: dense 2×2 / 4×4 complex linear algebra, density matrices, entropies.
//! * [`games`]: classical bimatrix games: pure equilibria, dominance, Pareto optimality.
//! * [`quantize`]: the generalized quantization scheme: strategies, δ-entangled
//!   measurement basis, payoffs by matrix algebra and by closed form.
//! * [`discord`]: quantum mutual information, classical correlation and discord.
//! * [`equilibria`]: deviation gaps, grid Nash verification, dilemma reports.
//! * [`cli`]: the `qgame` command-line front end.

pub mod cli;
pub mod discord;
pub mod equilibria;
mod error;
pub mod games;
pub mod qmat;
pub mod quantize;

pub use error::{Error, Result};
