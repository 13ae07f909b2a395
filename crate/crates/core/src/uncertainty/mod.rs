//! Uncertainty principles on the cube: Fourier projections, angles between
//! `V_S = {f : supp f ⊆ S}` and `V̂_Σ = {f : supp f̂ ⊆ Σ}`, Hamming-ball
//! conditions, and the entropic cardinality bound.

mod angle;
mod ball;
mod hirschmann;
mod project;
mod subset;
mod sweep;
mod witness;

pub use angle::{
    ball_condition, ball_proposition, cos_angle, cos_angle_linear, cos_angle_with_limit, dense_angle_oracle,
    AngleMethod, AngleReport, BallCondition, BallVerdict, Regime, ANGLE_SIZE_LIMIT, BALL_SVD_MAX_DIM,
};
pub use ball::{ball_eigen, BallEigen};
pub use hirschmann::{cardinality_bound, hirschmann_check, log_rate, HirschmannReport};
pub use project::{band_ratio, concentration_report, fourier_project, krawtchouk, Band, Concentration};
pub use subset::SubsetSpec;
pub use sweep::{least_squares_slope, sweep_report, sweep_trial, uncert_sweep, SweepParams, SweepReport, SweepRow};
pub use witness::{choose_alpha, witness_alpha, WitnessTails};

pub(crate) use project::binomial;
