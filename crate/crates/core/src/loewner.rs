//! Chordal Loewner evolution `d/dt g_t(z) = 2 / (g_t(z) - W_t)`, the zipper
//! reconstruction of the trace, and Brownian driving functions.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoewnerError {
    #[error("point swallowed at t ~ {time:.6}: |g - W| = {gap:e}")]
    Swallowed { time: f64, gap: f64 },
    #[error("start point {0} is not in the upper half-plane")]
    NotInUpperHalfPlane(Complex64),
    #[error("time {t} outside the driver's range [0, {end}]")]
    TimeRange { t: f64, end: f64 },
    #[error("invalid driver: {0}")]
    Driver(String),
}

/// Samples `W_0, ..., W_K` of a driving function on the grid `k dt`, with
/// linear interpolation in between.
#[derive(Clone, Debug, PartialEq)]
pub struct DrivingFunction {
    dt: f64,
    samples: Vec<f64>,
}

impl DrivingFunction {
    pub fn new(dt: f64, samples: Vec<f64>) -> Result<Self, LoewnerError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(LoewnerError::Driver(format!("step {dt}")));
        }
        if samples.first() != Some(&0.0) {
            return Err(LoewnerError::Driver("W_0 must be 0".into()));
        }
        if samples.iter().any(|w| !w.is_finite()) {
            return Err(LoewnerError::Driver("non-finite sample".into()));
        }
        Ok(DrivingFunction { dt, samples })
    }

    /// `W = f(t)` on `[0, T]`; `f(0)` must be 0.
    pub fn from_fn<F: Fn(f64) -> f64>(t_end: f64, dt: f64, f: F) -> Result<Self, LoewnerError> {
        let k = (t_end / dt).round() as usize;
        Self::new(dt, (0..=k).map(|i| f(i as f64 * dt)).collect())
    }

    pub fn constant_zero(t_end: f64, dt: f64) -> Self {
        Self::from_fn(t_end, dt, |_| 0.0).expect("valid zero driver")
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn steps(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn end_time(&self) -> f64 {
        self.steps() as f64 * self.dt
    }

    pub fn at(&self, t: f64) -> f64 {
        let x = (t / self.dt).max(0.0);
        let i = (x.floor() as usize).min(self.steps());
        if i == self.steps() {
            return self.samples[i];
        }
        let frac = x - i as f64;
        self.samples[i] * (1.0 - frac) + self.samples[i + 1] * frac
    }

    /// `t -> W(t + s) - W(s)` on `[0, T - s]`, `s` a grid time.
    pub fn shifted(&self, s_steps: usize) -> Self {
        let base = self.samples[s_steps];
        DrivingFunction {
            dt: self.dt,
            samples: self.samples[s_steps..].iter().map(|w| w - base).collect(),
        }
    }

    /// `t -> r W(t / r^2)`, sampled on the grid `r^2 dt`.
    pub fn rescaled(&self, r: f64) -> Self {
        DrivingFunction {
            dt: self.dt * r * r,
            samples: self.samples.iter().map(|w| r * w).collect(),
        }
    }

    /// CSV lines `t,W`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,W\n");
        for (i, w) in self.samples.iter().enumerate() {
            s.push_str(&format!("{},{}\n", i as f64 * self.dt, w));
        }
        s
    }
}

/// Swallowing threshold `|g - W| < 10 sqrt(dt)`.
pub fn swallow_threshold(dt: f64) -> f64 {
    10.0 * dt.sqrt()
}

fn rk4(w: &DrivingFunction, g: Complex64, t: f64, h: f64) -> Complex64 {
    let f = |t: f64, g: Complex64| 2.0 / (g - w.at(t));
    let k1 = f(t, g);
    let k2 = f(t + h / 2.0, g + k1 * (h / 2.0));
    let k3 = f(t + h / 2.0, g + k2 * (h / 2.0));
    let k4 = f(t + h, g + k3 * h);
    g + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0)
}

/// `g_T(z)`, by RK4 on the driver grid with step halving where a step and two
/// half steps disagree.
pub fn forward_map(
    w: &DrivingFunction,
    z: Complex64,
    t_end: f64,
) -> Result<Complex64, LoewnerError> {
    if !(z.im > 0.0) {
        return Err(LoewnerError::NotInUpperHalfPlane(z));
    }
    if !(0.0..=w.end_time() + 1e-12).contains(&t_end) {
        return Err(LoewnerError::TimeRange {
            t: t_end,
            end: w.end_time(),
        });
    }
    let threshold = swallow_threshold(w.dt);
    let mut g = z;
    let mut t = 0.0;
    let mut h = w.dt;
    let min_step = w.dt * 1e-6;
    while t < t_end {
        let gap = (g - w.at(t)).norm();
        if gap < threshold {
            return Err(LoewnerError::Swallowed { time: t, gap });
        }
        h = h.min(t_end - t);
        let full = rk4(w, g, t, h);
        let half = rk4(w, rk4(w, g, t, h / 2.0), t + h / 2.0, h / 2.0);
        let err = (full - half).norm();
        if err > 1e-12 * (1.0 + g.norm()) && h > min_step {
            h /= 2.0;
            continue;
        }
        g = half;
        t += h;
        if err < 1e-14 * (1.0 + g.norm()) {
            h = (h * 2.0).min(w.dt);
        }
    }
    Ok(g)
}

fn slit_inverse(u: Complex64, w: f64, dt: f64) -> Complex64 {
    let d = u - w;
    let mut s = (d * d - 4.0 * dt).sqrt();
    if s.im < 0.0 || (s.im == 0.0 && s.re * d.re < 0.0) {
        s = -s;
    }
    w + s
}

/// `gamma(t_k) = F_1 o ... o F_k (W_k)` with `F_j(u) = W_j + sqrt((u - W_j)^2 - 4 dt)`.
pub fn tip(w: &DrivingFunction, k: usize) -> Complex64 {
    let s = w.samples();
    let mut u = Complex64::new(s[k], 0.0);
    for j in (1..=k).rev() {
        u = slit_inverse(u, s[j], w.dt);
    }
    u
}

/// A reconstructed trace `gamma(t_0), ..., gamma(t_K)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub dt: f64,
    pub points: Vec<Complex64>,
}

impl Trace {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,re,im\n");
        for (i, p) in self.points.iter().enumerate() {
            s.push_str(&format!("{},{},{}\n", i as f64 * self.dt, p.re, p.im));
        }
        s
    }
}

/// Zipper trace. Quadratic in the number of steps.
pub fn trace(w: &DrivingFunction) -> Trace {
    let points = (0..=w.steps()).map(|k| tip(w, k)).collect();
    Trace { dt: w.dt, points }
}

/// `W_{t+dt} = W_t + sqrt(kappa dt) xi`, `xi` standard normal from ChaCha8
/// seeded with `seed`.
pub fn sample_sle_driving(
    kappa: f64,
    t_end: f64,
    dt: f64,
    seed: u64,
) -> Result<DrivingFunction, LoewnerError> {
    if !(kappa > 0.0 && kappa <= 4.0) {
        return Err(LoewnerError::Driver(format!(
            "kappa {kappa} outside (0, 4]"
        )));
    }
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(LoewnerError::Driver(format!("T = {t_end}, dt = {dt}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = (t_end / dt).round() as usize;
    let scale = (kappa * dt).sqrt();
    let mut samples = Vec::with_capacity(k + 1);
    let mut w = 0.0;
    samples.push(w);
    for _ in 0..k {
        let xi: f64 = StandardNormal.sample(&mut rng);
        w += scale * xi;
        samples.push(w);
    }
    DrivingFunction::new(dt, samples)
}
