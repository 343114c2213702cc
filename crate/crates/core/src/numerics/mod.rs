//! Log-domain arithmetic, scalar optimization, quadrature and the special
//! functions needed by the rest of the crate.

pub mod bessel;
pub mod lse;
pub mod normal;
pub mod optimize;
pub mod quadrature;

pub use bessel::{bessel_i_ratio, log_bessel_i_scaled};
pub use lse::{log1m_exp, log_add_exp, log_sub_exp, log_sum_exp};
pub use normal::{log_norm_cdf, norm_cdf, norm_quantile, norm_quantile_log};
pub use optimize::{brent_minimize, minimize_on_interval, Minimum};
pub use quadrature::{integrate, integrate_semi_infinite, QuadResult};
