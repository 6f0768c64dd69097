//! Independent oracles for the test suites. Nothing here calls the library
//! routine it is used to check.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use tyler_rmt::matrix::{MatrixRole, SymmetricMatrix};
use tyler_rmt::rng::SeededRng;

/// Tanh-sinh (double exponential) quadrature on `[a, b]`.
///
/// Endpoint singularities of square-root type are handled without special
/// treatment because the abscissae cluster doubly exponentially at the ends
/// and never touch them.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let h = 1.0 / 64.0;
    let pi2 = std::f64::consts::FRAC_PI_2;
    let mut sum = pi2 * f(center);
    let mut k = 1i64;
    loop {
        let t = k as f64 * h;
        let u = pi2 * t.sinh();
        let w = pi2 * t.cosh() / u.cosh().powi(2);
        // Distance from each node to its endpoint, 1 - tanh(u), computed
        // without cancellation so nodes near a singular end stay accurate.
        let dist = half / (u.exp() * u.cosh());
        if w == 0.0 || dist == 0.0 {
            break;
        }
        // Each side keeps going for as long as its node is representable.
        if a + dist > a {
            sum += w * f(a + dist);
        }
        if b - dist < b {
            sum += w * f(b - dist);
        }
        k += 1;
    }
    sum * h * half
}

/// Semicircle density written out independently of the library.
pub fn semicircle_density(x: f64) -> f64 {
    if x.abs() >= 2.0 {
        0.0
    } else {
        (4.0 - x * x).sqrt() / (2.0 * std::f64::consts::PI)
    }
}

pub fn mp_density(y: f64, x: f64) -> f64 {
    let lo = (1.0 - y.sqrt()).powi(2);
    let hi = (1.0 + y.sqrt()).powi(2);
    if x <= lo || x >= hi {
        0.0
    } else {
        ((hi - x) * (x - lo)).sqrt() / (2.0 * std::f64::consts::PI * x * y)
    }
}

/// `(1/d) tr(A^m)` by repeated multiplication.
pub fn trace_power(a: &DMatrix<f64>, m: u32) -> f64 {
    let d = a.nrows();
    let mut p = DMatrix::<f64>::identity(d, d);
    for _ in 0..m {
        p = &p * a;
    }
    p.trace() / d as f64
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut SeededRng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Haar-distributed orthogonal matrix: Q from the QR factorization of a
/// Gaussian matrix, with column signs fixed by the sign of R's diagonal.
pub fn random_orthogonal(d: usize, rng: &mut SeededRng) -> DMatrix<f64> {
    let qr = gaussian_matrix(d, d, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

pub fn random_symmetric(d: usize, rng: &mut SeededRng) -> SymmetricMatrix {
    let g = gaussian_matrix(d, d, rng);
    SymmetricMatrix::from_lower(&g + g.transpose(), MatrixRole::General).unwrap()
}

/// Inverse cdf by bisection on a monotone `cdf`.
pub fn quantile<F: Fn(f64) -> f64>(cdf: F, p: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
