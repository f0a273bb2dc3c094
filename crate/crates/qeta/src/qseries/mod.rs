//! Truncated formal power-series arithmetic, exact and modular.

pub mod exact;
pub mod modular;

pub use exact::TruncatedSeries;
pub use modular::ModSeries;
