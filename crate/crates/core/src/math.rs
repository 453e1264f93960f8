//! Small planar vector type and float helpers usable without `std`.

use core::ops::{Add, Div, Mul, Neg, Sub};

pub use core::f64::consts::{FRAC_PI_2, PI, TAU};

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn acos(x: f64) -> f64 {
    libm::acos(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// `x - period * floor(x / period)`, clamped into `[0, period)`.
pub fn wrap(x: f64, period: f64) -> f64 {
    let r = x - period * floor(x / period);
    if r >= period || r < 0.0 {
        0.0
    } else {
        r
    }
}

/// Classical polar angle of `v` in `[0, 2π)`.
pub fn angle_of(v: Vec2) -> f64 {
    let a = atan2(v.y, v.x);
    if a < 0.0 {
        let b = a + TAU;
        if b >= TAU {
            0.0
        } else {
            b
        }
    } else {
        a
    }
}

/// A point or (co)vector of the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at classical angle `phi`.
    #[inline]
    pub fn from_angle(phi: f64) -> Self {
        Self::new(cos(phi), sin(phi))
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// Oriented parallelogram area `[self × o]`.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        hypot(self.x, self.y)
    }

    /// Rotation by +π/2.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    /// Rotation by −π/2.
    #[inline]
    pub fn perp_cw(self) -> Self {
        Self::new(self.y, -self.x)
    }

    /// Rotation by `phi`. Multiples of π/2 are applied exactly.
    pub fn rotate(self, phi: f64) -> Self {
        match quarter_turns(phi) {
            Some(0) => self,
            Some(1) => self.perp(),
            Some(2) => -self,
            Some(3) => self.perp_cw(),
            _ => {
                let (s, c) = (sin(phi), cos(phi));
                Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
            }
        }
    }

    #[inline]
    pub fn lerp(self, o: Vec2, t: f64) -> Self {
        Self::new(self.x + t * (o.x - self.x), self.y + t * (o.y - self.y))
    }

    #[inline]
    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }
}

/// Number of quarter turns (mod 4) if `phi` is a multiple of π/2 up to rounding.
pub fn quarter_turns(phi: f64) -> Option<u8> {
    let k = round(phi / FRAC_PI_2);
    if (phi - k * FRAC_PI_2).abs() <= 1e-15 * (1.0 + phi.abs()) {
        Some((k as i64).rem_euclid(4) as u8)
    } else {
        None
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl From<(f64, f64)> for Vec2 {
    fn from((x, y): (f64, f64)) -> Self {
        Vec2::new(x, y)
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Vec2::new(x, y)
    }
}
