use crate::error::{Error, Result};
use crate::geom::point::Vec2;
use crate::geom::profile::CurvatureProfile;

const GL3_NODE: f64 = 0.774_596_669_241_483_4; // sqrt(3/5)
const GL3_W_MID: f64 = 8.0 / 9.0;
const GL3_W_OUT: f64 = 5.0 / 9.0;
const DENSE_STEPS: usize = 2048;
const BUCKET: usize = 64;

#[derive(Clone, Copy, Debug)]
struct Sample {
    s: f64,
    pos: Vec2,
}

#[derive(Clone, Debug)]
struct Bucket {
    lo: usize,
    hi: usize,
    min: Vec2,
    max: Vec2,
}

/// Wall section defined by its start pose and a curvature profile; positions
/// come from integrating the tangent angle, which is known in closed form
/// from the profile's piecewise-cubic curvature.
///
/// Positions along the curve are cached on a dense grid aligned with the
/// profile knots, so point queries integrate over at most one grid cell and
/// ray queries prune with bounding boxes over grid runs.
#[derive(Clone, Debug)]
pub struct IntrinsicCurve {
    start: Vec2,
    heading: f64,
    length: f64,
    profile: CurvatureProfile,
    samples: Vec<Sample>,
    buckets: Vec<Bucket>,
}

impl IntrinsicCurve {
    pub fn new(start: Vec2, heading: f64, length: f64, profile: CurvatureProfile) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Geometry(format!("curve length must be positive, got {length}")));
        }
        if !heading.is_finite() {
            return Err(Error::Geometry("curve heading must be finite".into()));
        }
        let (d0, d1) = profile.domain();
        if d0.abs() > 1e-9 || (d1 - length).abs() > 1e-9 * length.max(1.0) {
            return Err(Error::Geometry(format!(
                "curvature knots must span the curve: knots cover [{d0}, {d1}], length {length}"
            )));
        }

        let mut grid: Vec<f64> = (0..=DENSE_STEPS)
            .map(|i| length * i as f64 / DENSE_STEPS as f64)
            .collect();
        grid.extend(
            profile
                .knot_positions()
                .iter()
                .copied()
                .filter(|&s| s > 0.0 && s < length),
        );
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * length);

        let mut curve = IntrinsicCurve {
            start,
            heading,
            length,
            profile,
            samples: Vec::with_capacity(grid.len()),
            buckets: Vec::new(),
        };

        let mut pos = start;
        curve.samples.push(Sample { s: grid[0], pos });
        for w in grid.windows(2) {
            pos = curve.integrate(pos, w[0], w[1]);
            curve.samples.push(Sample { s: w[1], pos });
        }
        curve.build_buckets();
        Ok(curve)
    }

    fn integrate(&self, from: Vec2, sa: f64, sb: f64) -> Vec2 {
        let mid = 0.5 * (sa + sb);
        let half = 0.5 * (sb - sa);
        let mut acc = Vec2::ZERO;
        for (node, w) in [(-GL3_NODE, GL3_W_OUT), (0.0, GL3_W_MID), (GL3_NODE, GL3_W_OUT)] {
            acc += Vec2::from_angle(self.theta_at(mid + half * node)) * w;
        }
        from + acc * half
    }

    fn build_buckets(&mut self) {
        let max_kappa = self
            .profile
            .knots()
            .iter()
            .fold(0.0_f64, |m, &(_, k)| m.max(k.abs()));
        let n = self.samples.len();
        let mut lo = 0;
        while lo + 1 < n {
            let hi = (lo + BUCKET).min(n - 1);
            let mut min = self.samples[lo].pos;
            let mut max = min;
            let mut step = 0.0_f64;
            for i in lo..=hi {
                let p = self.samples[i].pos;
                min = Vec2::new(min.x.min(p.x), min.y.min(p.y));
                max = Vec2::new(max.x.max(p.x), max.y.max(p.y));
                if i > lo {
                    step = step.max(self.samples[i].s - self.samples[i - 1].s);
                }
            }
            let pad = 0.25 * step * step * max_kappa + 1e-12;
            min -= Vec2::new(pad, pad);
            max += Vec2::new(pad, pad);
            self.buckets.push(Bucket { lo, hi, min, max });
            lo = hi;
        }
    }

    pub fn start(&self) -> Vec2 {
        self.start
    }

    pub fn end(&self) -> Vec2 {
        self.samples.last().unwrap().pos
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn profile(&self) -> &CurvatureProfile {
        &self.profile
    }

    pub fn heading_start(&self) -> f64 {
        self.heading
    }

    pub fn heading_end(&self) -> f64 {
        self.theta_at(self.length)
    }

    /// Tangent angle at arclength `s` (exact integral of the curvature).
    pub fn theta_at(&self, s: f64) -> f64 {
        self.heading + self.profile.integral(s)
    }

    pub fn tangent_at(&self, s: f64) -> Vec2 {
        Vec2::from_angle(self.theta_at(s))
    }

    pub fn kappa_at(&self, s: f64) -> f64 {
        self.profile.kappa(s)
    }

    fn sample_below(&self, s: f64) -> usize {
        let idx = self.samples.partition_point(|q| q.s <= s);
        idx.clamp(1, self.samples.len() - 1) - 1
    }

    pub fn point_at(&self, s: f64) -> Vec2 {
        let s = s.clamp(0.0, self.length);
        let i = self.sample_below(s);
        let base = self.samples[i];
        if s == base.s {
            return base.pos;
        }
        self.integrate(base.pos, base.s, s)
    }

    fn ray_meets_box(origin: Vec2, dir: Vec2, min_t: f64, lo: Vec2, hi: Vec2) -> bool {
        let mut t0 = min_t;
        let mut t1 = f64::INFINITY;
        for (o, d, a, b) in [(origin.x, dir.x, lo.x, hi.x), (origin.y, dir.y, lo.y, hi.y)] {
            if d.abs() < 1e-300 {
                if o < a || o > b {
                    return false;
                }
            } else {
                let inv = 1.0 / d;
                let (ta, tb) = ((a - o) * inv, (b - o) * inv);
                let (ta, tb) = if ta <= tb { (ta, tb) } else { (tb, ta) };
                t0 = t0.max(ta);
                t1 = t1.min(tb);
                if t0 > t1 {
                    return false;
                }
            }
        }
        true
    }

    fn refine_root(&self, origin: Vec2, dir: Vec2, mut a: f64, mut b: f64, ga: f64) -> f64 {
        let sign_a = ga.signum();
        let mut s = 0.5 * (a + b);
        for _ in 0..60 {
            let p = self.point_at(s);
            let g = dir.cross(p - origin);
            if g == 0.0 {
                return s;
            }
            if g.signum() == sign_a {
                a = s;
            } else {
                b = s;
            }
            let gp = dir.cross(self.tangent_at(s));
            let newton = if gp != 0.0 { s - g / gp } else { s };
            let next = if newton > a && newton < b {
                newton
            } else {
                0.5 * (a + b)
            };
            if (next - s).abs() < 1e-15 * self.length {
                return next;
            }
            s = next;
        }
        s
    }

    pub(crate) fn ray_hits(&self, origin: Vec2, dir: Vec2, min_t: f64, out: &mut Vec<(f64, f64)>) {
        let mut last_root = f64::NEG_INFINITY;
        for bucket in &self.buckets {
            if !Self::ray_meets_box(origin, dir, min_t, bucket.min, bucket.max) {
                continue;
            }
            let mut g_prev = dir.cross(self.samples[bucket.lo].pos - origin);
            for i in bucket.lo..bucket.hi {
                let g_next = dir.cross(self.samples[i + 1].pos - origin);
                let (sa, sb) = (self.samples[i].s, self.samples[i + 1].s);
                let root = if g_prev == 0.0 {
                    Some(sa)
                } else if g_prev * g_next < 0.0 {
                    Some(self.refine_root(origin, dir, sa, sb, g_prev))
                } else {
                    None
                };
                if let Some(s) = root {
                    if (s - last_root).abs() > 1e-12 * self.length {
                        let t = dir.dot(self.point_at(s) - origin);
                        if t > min_t {
                            out.push((s, t));
                        }
                        last_root = s;
                    }
                }
                g_prev = g_next;
            }
        }
        // the final sample is not the left end of any cell; catch an exact hit there
        let end = self.samples.last().unwrap();
        if dir.cross(end.pos - origin) == 0.0 && (end.s - last_root).abs() > 1e-12 * self.length {
            let t = dir.dot(end.pos - origin);
            if t > min_t {
                out.push((end.s, t));
            }
        }
    }
}
