//! Numerical tolerances shared by every module.

/// All knobs in one place. `Tolerances::default()` holds the documented defaults.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Membership, convexity and origin-interiority checks.
    pub geo: f64,
    /// A correspondence interval narrower than this is reported single-valued.
    pub corner: f64,
    /// Relative local error target of the adaptive integrator.
    pub ode_rel: f64,
    /// Absolute local error target of the adaptive integrator.
    pub ode_abs: f64,
    /// Event localisation accuracy in time.
    pub event_time: f64,
    /// `|q| < q_switch * H` selects the straight-line (q = 0) formulas.
    pub q_switch: f64,
    /// Default grid size when a smooth body has to be resampled radially.
    pub radial_samples: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            geo: 1e-9,
            corner: 1e-9,
            ode_rel: 1e-9,
            ode_abs: 1e-12,
            event_time: 1e-12,
            q_switch: 1e-8,
            radial_samples: 4096,
        }
    }
}
