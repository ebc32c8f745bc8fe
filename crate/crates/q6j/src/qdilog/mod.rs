//! Quantum and classical dilogarithms, and the continuous summands built on them.

mod cont;
mod li2;
mod phi;

pub use cont::{
    alpha_tilde, bridging_factor, d3, delta_from_tilde, delta_tilde, delta_tilde_log, gbar,
    gbar_log, gbar_log_uncut, BumpSpec, ContinuousSummandParams, Continuum,
};
pub use li2::{clausen, li2_circle, lobachevsky};
pub use phi::{im_closed_form, phi_r, qpoch, PhiEngine, PhiValue};
