//! Closed-form numerics: the reflection coefficient `R(lambda)`, the annulus
//! function `U(q)`, boundary Poisson kernels of the disc and of round annuli,
//! the Brownian bubble mass of a circle, and the spectral right-hand side
//! `R(lambda) B(k, k') B(kt, kt')`.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::partition::{partitions_of, Partition};
use crate::poly::{CoeffPoly, Generator};
use crate::rational::{to_f64, Rational};
use crate::verma::{central_charge, parameter_assignment, Verma};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("R(lambda) has a pole near lambda = {lambda}: |sin(pi x)| = {sine:e}")]
    Pole { lambda: Complex64, sine: f64 },
    #[error("q = {0} outside (0, 0.99]")]
    QDomain(f64),
    #[error("kernel evaluated at coinciding boundary points")]
    Coincident,
    #[error("no circle of centre {x0} and radius {r} inside the unit disc")]
    Geometry { x0: f64, r: f64 },
    #[error("bubble mass has imaginary part {0:e}")]
    NotReal(f64),
    #[error("kappa = {0} outside (0, 4]")]
    Kappa(f64),
}

const POLE_THRESHOLD: f64 = 1e-12;
const SERIES_RADIUS: f64 = 1e-4;
pub const Q_MAX: f64 = 0.99;

/// `pi x / sin(pi x)`, even in `x`, with the removable point at 0.
fn x_over_sin(x: Complex64) -> Result<Complex64, f64> {
    if x.norm() < SERIES_RADIUS {
        // 1 + (pi x)^2/6 + 7 (pi x)^4/360
        let y = (x * PI).powi(2);
        return Ok(Complex64::new(1.0, 0.0) + y / 6.0 + y * y * (7.0 / 360.0));
    }
    let s = (x * PI).sin();
    if s.norm() < POLE_THRESHOLD {
        return Err(s.norm());
    }
    Ok(x * PI / s)
}

/// `R(lambda) = sin(pi (1 - kappa/4)) / (pi (1 - kappa/4)) * pi x / sin(pi x)`
/// with `x = sqrt((1 - kappa/4)^2 + lambda kappa)`.
pub fn reflection_r(lambda: Complex64, kappa: f64) -> Result<Complex64, SpectralError> {
    if !(kappa > 0.0 && kappa <= 4.0) {
        return Err(SpectralError::Kappa(kappa));
    }
    let b = 1.0 - kappa / 4.0;
    // b lies in [0, 1), away from the zeros of sin(pi b)
    let prefactor = 1.0 / x_over_sin(Complex64::new(b, 0.0)).expect("b in [0, 1)");
    let x = (Complex64::new(b * b, 0.0) + lambda * kappa).sqrt();
    let tail = x_over_sin(x).map_err(|sine| SpectralError::Pole { lambda, sine })?;
    Ok(prefactor * tail)
}

/// `sin(pi x)/(pi x)` for real `lambda`, real-analytic through `x = 0`.
fn inverse_profile(lambda: f64, kappa: f64) -> f64 {
    let b = 1.0 - kappa / 4.0;
    let x2 = b * b + lambda * kappa;
    if x2.abs() < 1e-16 {
        return 1.0;
    }
    if x2 > 0.0 {
        let x = x2.sqrt();
        (PI * x).sin() / (PI * x)
    } else {
        let y = (-x2).sqrt();
        (PI * y).sinh() / (PI * y)
    }
}

/// Smallest real `lambda` where `R` blows up, found by bisection on `1/R`.
pub fn smallest_real_pole(kappa: f64) -> f64 {
    let b = 1.0 - kappa / 4.0;
    // 1/R is positive from x = 0 on until its first zero
    let mut lo = -b * b / kappa;
    let step = 0.05;
    let mut hi = lo + step;
    while inverse_profile(hi, kappa) > 0.0 {
        lo = hi;
        hi += step;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inverse_profile(mid, kappa) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `U(q) = 1/12 + pi^2/(12 L^2) - pi^2/(2 L^2) sum_{n>=1} sinh^-2(n pi^2 / L)`, `L = |log q|`.
pub fn u_of_q(q: f64) -> Result<f64, SpectralError> {
    if !(q > 0.0 && q <= Q_MAX) {
        return Err(SpectralError::QDomain(q));
    }
    let l = q.ln().abs();
    let mut sum = 0.0;
    let mut n = 1.0;
    loop {
        let term = (n * PI * PI / l).sinh().powi(-2);
        sum += term;
        if term == 0.0 || term < 1e-18 * sum {
            break;
        }
        n += 1.0;
    }
    Ok(1.0 / 12.0 + PI * PI / (12.0 * l * l) - PI * PI / (2.0 * l * l) * sum)
}

/// `H_D(z, w) = 1 / (pi |z - w|^2)`.
pub fn poisson_disc(z: Complex64, w: Complex64) -> Result<f64, SpectralError> {
    let d = (z - w).norm_sqr();
    if d == 0.0 {
        return Err(SpectralError::Coincident);
    }
    Ok(1.0 / (PI * d))
}

/// `H_{A_q}(e^{i theta}, e^{i theta'}) = pi/(4 L^2) sum_n sinh^-2(pi/2 (theta' - theta + 2 n pi) / L)`.
///
/// The sum runs symmetrically outward until the next pair of terms is below
/// `1e-17` of the total, which bounds the geometric tail well below `1e-15`.
pub fn poisson_annulus(q: f64, theta: f64, theta_p: f64) -> Result<f64, SpectralError> {
    if !(q > 0.0 && q <= Q_MAX) {
        return Err(SpectralError::QDomain(q));
    }
    let l = q.ln().abs();
    let tau = 2.0 * PI;
    // reduce the difference to (-pi, pi]
    let mut d = (theta_p - theta) % tau;
    if d > PI {
        d -= tau;
    } else if d <= -PI {
        d += tau;
    }
    if d == 0.0 {
        return Err(SpectralError::Coincident);
    }
    let term = |n: f64| (PI / 2.0 * (d + n * tau) / l).sinh().powi(-2);
    let mut sum = term(0.0);
    let mut n = 1.0;
    loop {
        let pair = term(n) + term(-n);
        sum += pair;
        if pair < 1e-17 * sum {
            break;
        }
        n += 1.0;
    }
    Ok(PI / (4.0 * l * l) * sum)
}

/// The Möbius map `psi(z) = (z - alpha) / (1 - alpha z)` sending the circle of
/// centre `x0` (real) and radius `r` to the circle `|w| = q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnulusMap {
    pub alpha: f64,
    pub q: f64,
    pub x0: f64,
    pub r: f64,
}

pub fn mobius_annulus(x0: f64, r: f64) -> Result<AnnulusMap, SpectralError> {
    if !(r > 0.0 && x0.abs() + r < 1.0) {
        return Err(SpectralError::Geometry { x0, r });
    }
    let (u, v) = (x0 - r, x0 + r);
    // psi(u) = -psi(v): alpha^2 (u+v) - 2 alpha (1+uv) + (u+v) = 0, root inside the disc
    let alpha = if x0 == 0.0 {
        0.0
    } else {
        let s = u + v;
        let p = 1.0 + u * v;
        let disc = (p * p - s * s).sqrt();
        // stable form of (p - disc)/s
        s / (p + disc)
    };
    let map = AnnulusMap {
        alpha,
        q: 0.0,
        x0,
        r,
    };
    let q = map.psi(Complex64::new(v, 0.0)).norm();
    Ok(AnnulusMap { q, ..map })
}

impl AnnulusMap {
    pub fn psi(&self, z: Complex64) -> Complex64 {
        (z - self.alpha) / (1.0 - z * self.alpha)
    }

    pub fn dpsi(&self, z: Complex64) -> Complex64 {
        let a = self.alpha;
        (1.0 - a * a) / (1.0 - z * a).powi(2)
    }

    fn d2psi(&self, z: Complex64) -> Complex64 {
        let a = self.alpha;
        2.0 * a * (1.0 - a * a) / (1.0 - z * a).powi(3)
    }

    fn d3psi(&self, z: Complex64) -> Complex64 {
        let a = self.alpha;
        6.0 * a * a * (1.0 - a * a) / (1.0 - z * a).powi(4)
    }

    /// Schwarzian `psi'''/psi' - 3/2 (psi''/psi')^2`; zero up to rounding.
    pub fn schwarzian(&self, z: Complex64) -> Complex64 {
        let d1 = self.dpsi(z);
        let r = self.d2psi(z) / d1;
        self.d3psi(z) / d1 - 1.5 * r * r
    }

    /// Point on the inner circle at angle `t` about its centre.
    pub fn inner_point(&self, t: f64) -> Complex64 {
        Complex64::new(self.x0, 0.0) + Complex64::from_polar(self.r, t)
    }
}

/// `1/6 e^{2i theta} S psi(e^{i theta}) + e^{2i theta} psi'^2/psi^2 U(q)`.
pub fn bubble_mass(map: &AnnulusMap, theta: f64) -> Result<f64, SpectralError> {
    let z = Complex64::from_polar(1.0, theta);
    let e2 = z * z;
    let ratio = map.dpsi(z) / map.psi(z);
    let value = e2 * map.schwarzian(z) / 6.0 + e2 * ratio * ratio * u_of_q(map.q)?;
    if value.im.abs() >= 1e-10 {
        return Err(SpectralError::NotReal(value.im));
    }
    Ok(value.re)
}

/// `pi (H_D - H_{A_eta})(e^{i theta}, e^{i theta'})` with the annulus kernel
/// transported by `psi`: `H_{A_eta}(z, w) = |psi'(z)| |psi'(w)| H_{A_q}(arg psi z, arg psi w)`.
pub fn bubble_difference(map: &AnnulusMap, theta: f64, theta_p: f64) -> Result<f64, SpectralError> {
    let z = Complex64::from_polar(1.0, theta);
    let w = Complex64::from_polar(1.0, theta_p);
    let hd = poisson_disc(z, w)?;
    let (pz, pw) = (map.psi(z), map.psi(w));
    let ha = map.dpsi(z).norm() * map.dpsi(w).norm() * poisson_annulus(map.q, pz.arg(), pw.arg())?;
    Ok(PI * (hd - ha))
}

/// Centred finite-difference oracle for the bubble mass at `e^{i theta}`:
/// [`bubble_difference`] at `theta -+ h/2`. Centring removes the first-order
/// error coming from the variation of `|psi'|` between the two points.
pub fn bubble_fd_oracle(map: &AnnulusMap, theta: f64, h: f64) -> Result<f64, SpectralError> {
    bubble_difference(map, theta - h / 2.0, theta + h / 2.0)
}

/// Evaluates a polynomial in `lambda` and `c` at a complex weight.
pub fn eval_lambda_c(p: &CoeffPoly, lambda: Complex64, c: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, coeff) in p.terms() {
        let mut t = Complex64::new(to_f64(coeff), 0.0);
        for &(g, e) in m.factors() {
            match g {
                Generator::Lambda => t *= lambda.powu(e),
                Generator::CC => t *= c.powi(e as i32),
                _ => panic!("polynomial depends on {g}"),
            }
        }
        acc += t;
    }
    acc
}

/// Arguments of the spectral right-hand side.
#[derive(Clone, Debug)]
pub struct SpectralQuery {
    pub lambda: Complex64,
    pub kappa: f64,
    pub k: Partition,
    pub kp: Partition,
    pub kt: Partition,
    pub ktp: Partition,
}

fn gram_entry(verma: &mut Verma, k: &Partition, kp: &Partition) -> CoeffPoly {
    if k.weight() != kp.weight() {
        return CoeffPoly::zero();
    }
    debug_assert!(partitions_of(k.weight()).contains(k));
    verma.gram_entry(k, kp)
}

/// `R(lambda) B(k, k') B(kt, kt')` with Gram entries from the symbolic module
/// `verma` evaluated at `(lambda, c(kappa))`.
pub fn spectral_rhs(verma: &mut Verma, query: &SpectralQuery) -> Result<Complex64, SpectralError> {
    let b1 = gram_entry(verma, &query.k, &query.kp);
    let b2 = gram_entry(verma, &query.kt, &query.ktp);
    if b1.is_zero() || b2.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let r = reflection_r(query.lambda, query.kappa)?;
    let k = query.kappa;
    let c = 13.0 - 24.0 / k - 1.5 * k;
    Ok(r * eval_lambda_c(&b1, query.lambda, c) * eval_lambda_c(&b2, query.lambda, c))
}

/// Same as [`spectral_rhs`] with rational `lambda, kappa`: the Gram entries
/// are specialized exactly before conversion.
pub fn spectral_rhs_exact(
    verma: &mut Verma,
    lambda: &Rational,
    kappa: &Rational,
    k: &Partition,
    kp: &Partition,
    kt: &Partition,
    ktp: &Partition,
) -> Result<Complex64, SpectralError> {
    let assignment = parameter_assignment(lambda, &central_charge(kappa));
    let b1 = gram_entry(verma, k, kp).substitute(&assignment);
    let b2 = gram_entry(verma, kt, ktp).substitute(&assignment);
    let (Some(v1), Some(v2)) = (b1.as_constant(), b2.as_constant()) else {
        unreachable!("gram entries depend only on lambda and c")
    };
    let r = reflection_r(Complex64::new(to_f64(lambda), 0.0), to_f64(kappa))?;
    Ok(r * to_f64(&v1) * to_f64(&v2))
}
