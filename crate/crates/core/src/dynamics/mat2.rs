use std::ops::Mul;

use crate::error::{Error, Result};

/// Row-major 2x2 matrix acting on transverse (displacement, slope) data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, v: (f64, f64)) -> (f64, f64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    pub fn scale(&self, k: f64) -> Mat2 {
        Mat2::new(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    pub fn sub(&self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }

    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// Free flight of length `tau` between collisions.
pub fn flight_matrix(tau: f64) -> Mat2 {
    Mat2::new(1.0, tau, 0.0, 1.0)
}

/// Reflection at a wall point with oriented curvature `kappa` hit at incidence
/// angle `phi` from the inward normal. Focusing walls (positive oriented
/// curvature) carry a positive off-diagonal term.
pub fn reflection_matrix(kappa: f64, cos_phi: f64) -> Result<Mat2> {
    if cos_phi.abs() < 1e-12 {
        return Err(Error::GrazingReflection { v_dot_n: cos_phi });
    }
    Ok(Mat2::new(-1.0, 0.0, 2.0 * kappa / cos_phi, -1.0))
}

/// Closed form for the ladder of `n` consecutive rim collisions with equal
/// chord flights `tau_c`: equals `arc_block_product(n, tau_c)`.
pub fn arc_block(n: u32, tau_c: f64) -> Mat2 {
    let nf = n as f64;
    Mat2::new(
        1.0 - 2.0 * nf,
        (nf - 1.0) * tau_c,
        4.0 * nf / tau_c,
        1.0 - 2.0 * nf,
    )
}

/// The same rim ladder as an explicit product R (T R)^(n-1); the per-collision
/// reflection depends on the chord only, because cos(phi) = tau_c / (2 r) on a
/// rim of radius r.
pub fn arc_block_product(n: u32, tau_c: f64) -> Mat2 {
    let r = Mat2::new(-1.0, 0.0, 4.0 / tau_c, -1.0);
    let t = flight_matrix(tau_c);
    let mut m = r;
    for _ in 1..n {
        m = m * t * r;
    }
    m
}
