//! Closed-form references: Burgers solutions on the line and the circle,
//! the Cole–Hopf quadrature oracle, and p-Laplacian ball and Barenblatt solutions.

mod burgers;
mod line;
mod plap;

pub use burgers::{
    burgers_delta_exact, burgers_delta_taylor, burgers_delta_u1, cosine_squared_exact,
};
pub use line::{cole_hopf_line_oracle, LineIc, LineOracleSpec};
pub use plap::{
    barenblatt, barenblatt_constants, barenblatt_support_radius, barenblatt_u1, heat_kernel,
    plap_ball_dual_un, plap_ball_exact, plap_ball_u1, plap_radial_exact, BarenblattConstants,
};
