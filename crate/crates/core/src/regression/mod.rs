//! Least squares and the conjugate Bayesian treatment of polynomial Hugoniot fits.

pub mod distributions;
pub mod ellipse;
pub mod fit;
pub mod posterior;
pub mod summary;

pub use distributions::{InverseGamma, MultivariateT, SampleBatch, UnivariateT};
pub use ellipse::CredibleEllipse;
pub use fit::{design_row, eval_poly, fit_least_squares, xtx_inverse_closed_form, xtx_inverse_closed_form_from_up, FitResult};
pub use posterior::{
    band, beta_covariance, credible_interval, credible_region_ellipse, linspace, marginal_beta_density,
    mean_us_distribution, posterior_from_data, posterior_informative, posterior_informative_xy,
    posterior_noninformative, predictive_distribution, prior_marginal, sample_beta, sample_joint,
    sigma2_posterior_summary, BandKind, JointDraw, NIGPrior, PosteriorNIG, Sigma2Summary, UsBand,
};
pub use summary::{parameter_names, posterior_table, ParameterSummary};
