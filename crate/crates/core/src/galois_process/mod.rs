//! The fixed-point process: exact fixed-point proportions of the full
//! binary-tree groups, the coin-flip transition, its simulation, and
//! sampling of codings from a product measure.

mod fpp;
mod process;
mod sample;

pub use fpp::{
    coin_transition, fpp_bounds, fpp_f64, fpp_full_binary, fpp_table, martingale_check, stay_probability_bound,
    FppTable, EXACT_FPP_MAX,
};
pub use process::{
    simulate_path, simulate_process, LevelStats, NonMaximalModel, ProcessReport, MAX_DEPTH,
};
pub use sample::{
    sample_and_certify, sample_coding, sample_word, CertifiedSample, GeneratorStats, SampleReport,
    Weights,
};
