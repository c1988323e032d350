//! Special functions and quadrature rules shared by every other module.

pub mod erfi;
pub mod normal;
pub mod owens_t;
pub mod quadrature;

pub use erfi::{erfi, erfi_inverse};
pub use normal::{cdf as normal_cdf, pdf as normal_pdf};
pub use owens_t::owens_t;
pub use quadrature::{gauss_hermite, gauss_legendre01, QuadratureRule, RuleKind};
