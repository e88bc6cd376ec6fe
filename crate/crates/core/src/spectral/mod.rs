//! Periodic Burgers hierarchy on `[0, 1)` via Fourier transforms, and an
//! explicit finite-difference baseline.

mod dns;
mod duhamel;
mod fft;
mod forcing;
mod solver;

pub use dns::{dns_burgers, DNS_BLOWUP};
pub use duhamel::{advance_mode_duhamel, mode_rate, ModeWeights};
pub use fft::{fft_forward, fft_inverse, wavenumber, Fourier, SpectralField};
pub use forcing::ForcingSpec;
pub use solver::{solve_periodic_hierarchy, PeriodicRun, PeriodicSolver, Snapshot};
