//! Closed formulas: ballot machinery, partition functions, correlation tables,
//! row/column/hook sums and limiting directions.

mod limdir;
mod numbers;
mod sums;
mod tasep;

pub use limdir::{lam_direction, limdir_closed, limdir_exact_lam, DirectionVector};
pub use numbers::{
    ballot, ballot_binomial_holds, ballot_convolution_holds, binom, catalan, enumerate_bicolored_motzkin, m_poly,
    v_poly,
};
pub use sums::{b_first_site, conjecture_b_case, conjecture_b_value, last_two_table, multi_sums, MultiSums};
pub use tasep::{
    b_pair_table, ccheck_last_density, d_pair_table, semiperm_density, semiperm_last_density_unit, z_b, z_d,
    z_d_generating_series, z_semiperm, CorrelationTable,
};
