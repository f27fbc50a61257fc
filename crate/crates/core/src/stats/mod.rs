//! Scalar statistical primitives shared by the objective, the oracles and the
//! simulator.

mod bivariate;
mod correlation;
mod normal;
mod order_stats;
mod scenarios;

pub use bivariate::{bvn_cdf_approx, bvn_cdf_reference};
pub use correlation::{covariance_factor, nearest_psd, CorrelationMatrix};
pub use normal::{norm_cdf, norm_pdf};
pub use order_stats::{max_order_stats, MaxOrderStatsRow, MaxOrderStatsTable, MAX_TABLE_N};
pub use scenarios::scenario_count;
