//! OLS variable-importance suite: fit, beta weights, structure
//! coefficients, commonality, dominance, LMG, and correlation matrix.

pub mod commonality;
pub mod corr;
pub mod design;
pub mod dominance;
pub mod lmg;
pub mod ols;
pub mod report;
pub mod subsets;

pub use commonality::{commonality, Commonality};
pub use corr::{correlation_matrix, write_correlation_csv, CorrelationMatrix};
pub use design::DesignSpec;
pub use dominance::{dominance, Dominance, PairDominance, Verdict};
pub use lmg::lmg;
pub use ols::{ols_fit, stars, OlsFit};
pub use report::{
    beta_weights, build_importance_report, structure_coefficients, write_dominance_csv,
    write_importance_json, write_importance_summary_csv, ImportanceReport,
};
pub use subsets::{all_subsets_r2, SubsetR2Table};
