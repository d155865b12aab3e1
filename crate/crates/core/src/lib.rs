//! Periodic `A^{(1)}_n` soliton cellular automata (generalized periodic
//! box-ball systems) and the `q = 0` Bethe-ansatz formulas for their
//! dynamical periods and state counts.

pub mod automaton;
pub mod bethe;
pub mod cli;
pub mod content;
pub mod crystal;
pub mod engine;
pub mod error;
pub mod exact;
pub mod lab;
pub mod reference;
pub mod rmatrix;

pub use automaton::{factor_swap, rotate, EvolutionResult, Evolvability, OrbitOutcome, Space, SpaceSpec, State};
pub use bethe::{
    is_valid_content, lambda_weight, omega, orbit_size, period_formula, period_formula_sl2, vacancy_numbers, BetheMatrix,
    DominantWeight, PeriodPrediction,
};
pub use content::Content;
pub use crystal::{apply_e, apply_f, enumerate_crystal, highest_element, Crystal, CrystalLabel, Tableau, Weight};
pub use engine::{CacheManifest, Engine};
pub use error::{Error, Result};
pub use lab::{classify, completeness_diagnostic, enumerate_states, verify_periods, Classification, ClassificationRow, PeriodRow};
pub use rmatrix::{build_r_table, check_yang_baxter, AffineElement, REntry, RTable};
