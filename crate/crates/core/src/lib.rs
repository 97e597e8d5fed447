pub mod copula;
pub mod copula_mi;
pub mod entropy;
pub mod error;
pub mod mc;
pub mod mi;
pub mod models;
pub mod order_stats;
pub mod quadrature;
pub mod region;
pub mod special;
