use alloc::vec::Vec;

use thiserror::Error;

use crate::body::Violation;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid convex body: {}", join(.0))]
    InvalidBody(Vec<Violation>),
    #[error("operation requires a polygon body")]
    NotAPolygon,
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("period undefined on the separatrix level")]
    PeriodUndefined,
    #[error(
        "separatrix endpoint reached at t = {t}, theta_polar = {theta_polar}: the continuation is \
         not unique and no dwell policy was supplied"
    )]
    PolicyRequired { t: f64, theta_polar: f64 },
    #[error("exit direction {0:?} is not available at the separatrix endpoint")]
    ExitUnavailable(crate::pendulum::Direction),
    #[error("integration failed at t = {t} (step size underflow)")]
    StepUnderflow { t: f64, theta_polar: f64, omega: f64 },
}

fn join(v: &[Violation]) -> alloc::string::String {
    use alloc::string::ToString;
    let parts: Vec<_> = v.iter().map(|x| x.to_string()).collect();
    parts.join("; ")
}
