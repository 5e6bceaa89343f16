//! Small complex-matrix helpers shared by the simulator and the lowering pass.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

pub type Mat2 = Matrix2<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity2() -> Mat2 {
    Mat2::identity()
}

pub fn pauli_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn hadamard() -> Mat2 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Mat2::new(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0))
}

/// `exp(-i θ Y / 2)`: maps |0⟩ to cos(θ/2)|0⟩ + sin(θ/2)|1⟩.
pub fn ry(theta: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    Mat2::new(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0))
}

/// `exp(-i θ Z / 2)`.
pub fn rz(theta: f64) -> Mat2 {
    Mat2::new(
        Complex64::from_polar(1.0, -theta / 2.0),
        ZERO,
        ZERO,
        Complex64::from_polar(1.0, theta / 2.0),
    )
}

/// `diag(1, e^{iφ})`.
pub fn phase(phi: f64) -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, Complex64::from_polar(1.0, phi))
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff2(a: &Mat2, b: &Mat2) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `‖U†U − I‖_max`.
pub fn unitarity_deviation(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    max_abs_diff(&prod, &DMatrix::identity(n, n))
}

pub fn is_identity2(u: &Mat2, tol: f64) -> bool {
    max_abs_diff2(u, &identity2()) <= tol
}

/// Euler angles with `U = e^{iα} Rz(β) Ry(γ) Rz(δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZyzAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

pub fn zyz_decompose(u: &Mat2) -> ZyzAngles {
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let alpha = det.arg() / 2.0;
    let v = u * Complex64::from_polar(1.0, -alpha);

    let cos_half = v[(1, 1)].norm();
    let sin_half = v[(1, 0)].norm();
    let gamma = 2.0 * sin_half.atan2(cos_half);

    let sum = if cos_half > 1e-12 {
        2.0 * v[(1, 1)].arg()
    } else {
        0.0
    };
    let diff = if sin_half > 1e-12 {
        2.0 * v[(1, 0)].arg()
    } else {
        0.0
    };
    ZyzAngles {
        alpha,
        beta: (sum + diff) / 2.0,
        gamma,
        delta: (sum - diff) / 2.0,
    }
}

/// A unitary square root `V` with `V·V = U`.
pub fn sqrt_unitary(u: &Mat2) -> Mat2 {
    let (a, b, cc, d) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    if b.norm() < 1e-14 && cc.norm() < 1e-14 {
        return Mat2::new(a.sqrt(), ZERO, ZERO, d.sqrt());
    }
    // Eigen-decomposition of a normal 2×2 matrix; eigenvectors are orthogonal.
    let tr = a + d;
    let det = a * d - b * cc;
    let disc = (tr * tr - det * 4.0).sqrt();
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    let eigvec = |l: Complex64| {
        let (x, y) = if b.norm() >= cc.norm() {
            (b, l - a)
        } else {
            (l - d, cc)
        };
        let n = (x.norm_sqr() + y.norm_sqr()).sqrt();
        (x / n, y / n)
    };
    let mut out = Mat2::zeros();
    for l in [l1, l2] {
        let (x, y) = eigvec(l);
        let r = l.sqrt();
        out[(0, 0)] += r * x * x.conj();
        out[(0, 1)] += r * x * y.conj();
        out[(1, 0)] += r * y * x.conj();
        out[(1, 1)] += r * y * y.conj();
    }
    out
}

/// Embeds a 2×2 matrix into a dynamic matrix.
pub fn to_dmatrix(u: &Mat2) -> DMatrix<Complex64> {
    DMatrix::from_fn(2, 2, |r, col| u[(r, col)])
}
