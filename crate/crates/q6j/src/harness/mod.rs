//! Experiment drivers: spin sequences, convergence tables, C₁ extraction,
//! Poisson spectra, and their CSV/JSON/SVG output.

mod c1;
mod converge;
mod poisson;
mod report;
mod spins;

pub use c1::{extract_c1, im_c1, phase_residual, re_c1_offset, re_c1_raw, C1Estimate};
pub use converge::{
    convergence_table, fit_constant, ladder, report_row, richardson3, scaled_gaps,
    spread_about_mean, AsymptoticReport, ConstantFit,
};
pub use poisson::{
    gbar_integral, integrate_gbar, lattice_gbar_mismatch, poisson_spectrum, GbarCheck,
    GbarIntegral, PoissonSpectrum,
};
pub use report::{convergence_csv, num, poisson_csv, C1Report, ConvergenceRow, Plot, CSV_HEADER};
pub use spins::{build_spin_sequence, lattice_angles, SpinSequenceRule, REPAIR_PRIORITY};
