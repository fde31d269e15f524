//! Local and global intertwining eigenvalues for GL(2), with exact or
//! quadrature oracles for every closed form.

pub mod arch;
pub mod classical;
pub mod error;
pub mod exact;
pub mod global;
pub mod harmonics;
pub mod numerics;
pub mod padic;
pub mod report;
pub mod schwartz;
pub mod suites;

pub use error::{Error, Result};
pub use num_complex::Complex64;
