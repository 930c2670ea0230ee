//! Quantile functions, exact samplers and small linear algebra shared by the
//! rest of the crate.

pub mod linalg;
pub mod quantile;
pub mod rng;
pub mod sampling;
pub mod special;

pub use linalg::{cholesky, sym_eig_2x2, Eigen2, LowerTriangular, SymMatrix};
pub use quantile::{empirical_quantile, mean_sd};
pub use rng::{RngState, Stream};
pub use sampling::{sample_chi_square, sample_inverse_gamma, sample_std_normal};
pub use special::{f_quantile, normal_quantile, student_t_cdf, student_t_quantile};
