//! Special functions: gamma, Mittag-Leffler and Fox H.

mod foxh;
mod gamma;
mod mittag_leffler;
mod transforms;

pub use foxh::{
    contour_geometry, foxh_contour, foxh_eval, foxh_series, foxh_validate, AnalyticDomain, ConvergenceProfile,
    FoxHParams, MellinBarnesConfig,
};
pub use gamma::{gamma, gamma_complex, ln_gamma, ln_gamma_complex, rgamma, rgamma_complex};
pub use mittag_leffler::{mittag_leffler, mittag_leffler_inversion, mittag_leffler_series, series_radius};
pub use transforms::{foxh_inverse_laplace, foxh_laplace, foxh_rl_derivative, HTerm};
