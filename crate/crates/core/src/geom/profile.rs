use crate::error::{Error, Result};

/// Curvature as a function of arclength, interpolated through knots with a
/// monotonicity-preserving piecewise cubic (Fritsch-Carlson slopes).
///
/// The interpolant never overshoots the knot values, so a one-signed knot set
/// yields a one-signed curvature function. Evaluation outside the knot span
/// extends the end values as constants.
#[derive(Clone, Debug)]
pub struct CurvatureProfile {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ms: Vec<f64>,
    cum: Vec<f64>,
}

fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

impl CurvatureProfile {
    pub fn new(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Geometry("curvature profile needs at least one knot".into()));
        }
        for &(s, k) in knots {
            if !s.is_finite() || !k.is_finite() {
                return Err(Error::Geometry(format!(
                    "non-finite curvature knot ({s}, {k})"
                )));
            }
        }
        let xs: Vec<f64> = knots.iter().map(|k| k.0).collect();
        let ys: Vec<f64> = knots.iter().map(|k| k.1).collect();
        for w in xs.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Geometry(format!(
                    "curvature knots must have strictly increasing arclength ({} then {})",
                    w[0], w[1]
                )));
            }
        }

        let n = xs.len();
        let mut ms = vec![0.0; n];
        if n == 2 {
            let d = (ys[1] - ys[0]) / (xs[1] - xs[0]);
            ms[0] = d;
            ms[1] = d;
        } else if n > 2 {
            let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
            let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
            for i in 1..n - 1 {
                let (d0, d1) = (delta[i - 1], delta[i]);
                if d0 * d1 <= 0.0 {
                    ms[i] = 0.0;
                } else {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    ms[i] = (w1 + w2) / (w1 / d0 + w2 / d1);
                }
            }
            ms[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
            ms[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }

        let mut cum = vec![0.0; n];
        for i in 0..n - 1 {
            let h = xs[i + 1] - xs[i];
            cum[i + 1] = cum[i] + h * (0.5 * (ys[i] + ys[i + 1]) + h * (ms[i] - ms[i + 1]) / 12.0);
        }

        Ok(CurvatureProfile { xs, ys, ms, cum })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn knots(&self) -> Vec<(f64, f64)> {
        self.xs.iter().copied().zip(self.ys.iter().copied()).collect()
    }

    pub fn knot_positions(&self) -> &[f64] {
        &self.xs
    }

    fn locate(&self, s: f64) -> usize {
        let n = self.xs.len();
        let idx = self.xs.partition_point(|&x| x <= s);
        idx.clamp(1, n - 1) - 1
    }

    /// Curvature at arclength `s`.
    pub fn kappa(&self, s: f64) -> f64 {
        let n = self.xs.len();
        if n == 1 || s <= self.xs[0] {
            return self.ys[0];
        }
        if s >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = self.locate(s);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (s - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        self.ys[i] * (2.0 * t3 - 3.0 * t2 + 1.0)
            + self.ms[i] * h * (t3 - 2.0 * t2 + t)
            + self.ys[i + 1] * (3.0 * t2 - 2.0 * t3)
            + self.ms[i + 1] * h * (t3 - t2)
    }

    /// Exact integral of the interpolant from the first knot to `s`.
    pub fn integral(&self, s: f64) -> f64 {
        let n = self.xs.len();
        if n == 1 {
            return (s - self.xs[0]) * self.ys[0];
        }
        if s <= self.xs[0] {
            return (s - self.xs[0]) * self.ys[0];
        }
        if s >= self.xs[n - 1] {
            return self.cum[n - 1] + (s - self.xs[n - 1]) * self.ys[n - 1];
        }
        let i = self.locate(s);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (s - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        self.cum[i]
            + h * (self.ys[i] * (0.5 * t4 - t3 + t)
                + self.ms[i] * h * (0.25 * t4 - 2.0 * t3 / 3.0 + 0.5 * t2)
                + self.ys[i + 1] * (t3 - 0.5 * t4)
                + self.ms[i + 1] * h * (0.25 * t4 - t3 / 3.0))
    }
}
