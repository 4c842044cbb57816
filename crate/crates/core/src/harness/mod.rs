//! Synthetic fixtures and the blocked-vs-deblocked quality matrix.

mod experiment;
mod synth;

pub use experiment::{
    load_corpus, run_cell, run_matrix, write_csv, write_plot_data, CellFailure, CorpusImage,
    ExperimentRow, MatrixOutcome, CSV_HEADER,
};
pub use synth::{gen_synthetic, SyntheticKind, SyntheticSpec};
