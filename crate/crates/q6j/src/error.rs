use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("level r = {0} must be odd and at least 3")]
    BadLevel(i64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("triple ({0}/2, {1}/2, {2}/2) is not r-admissible")]
    Inadmissible(u32, u32, u32),
    #[error("t = {t} lies outside the convergence strip (-1/r, 1+1/r) for r = {r}")]
    OutsideStrip { r: u32, t: f64 },
    #[error("tetrahedron is not hyperbolic: {0}")]
    NotHyperbolic(String),
    #[error("near-Euclidean tetrahedron (det G = {0:e})")]
    NearEuclidean(f64),
    #[error("spin repair failed after {0} adjustments")]
    RepairFailed(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("extrapolation did not converge: spread {spread:e} exceeds {tol:e}")]
    NoConvergence { spread: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
