//! Complex two-dimensional linear algebra in the charge basis `{|0⟩, |1⟩}`.

use core::ops::{Add, Mul, Neg, Sub};

use libm::sqrt;

use crate::Error;

pub type Complex = num_complex::Complex64;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);
pub(crate) const I: Complex = Complex::new(0.0, 1.0);

#[inline]
pub(crate) fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[inline]
pub(crate) fn norm_sqr(z: Complex) -> f64 {
    z.re * z.re + z.im * z.im
}

/// Unit-modulus phase factor `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> Complex {
    Complex::new(libm::cos(theta), libm::sin(theta))
}

/// State vector `c0|0⟩ + c1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub c0: Complex,
    pub c1: Complex,
}

impl Vec2 {
    pub const fn new(c0: Complex, c1: Complex) -> Self {
        Self { c0, c1 }
    }

    pub fn try_new(c0: Complex, c1: Complex) -> Result<Self, Error> {
        let v = Self { c0, c1 };
        v.check_finite()?;
        Ok(v)
    }

    pub const fn real(c0: f64, c1: f64) -> Self {
        Self::new(Complex::new(c0, 0.0), Complex::new(c1, 0.0))
    }

    pub fn check_finite(&self) -> Result<(), Error> {
        if is_finite(self.c0) && is_finite(self.c1) {
            Ok(())
        } else {
            Err(Error::NonFinite { what: "Vec2" })
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(self.c0) + norm_sqr(self.c1)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Vec2) -> Complex {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }

    pub fn scale(&self, s: Complex) -> Vec2 {
        Vec2::new(self.c0 * s, self.c1 * s)
    }

    /// Projector `|self⟩⟨self|`.
    pub fn outer(&self) -> Mat2 {
        Mat2::from_rows(
            [self.c0 * self.c0.conj(), self.c0 * self.c1.conj()],
            [self.c1 * self.c0.conj(), self.c1 * self.c1.conj()],
        )
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.c0 + rhs.c0, self.c1 + rhs.c1)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.c0 - rhs.c0, self.c1 - rhs.c1)
    }
}

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m: [[Complex; 2]; 2],
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 { m: [[ZERO, ZERO], [ZERO, ZERO]] };
    pub const IDENTITY: Mat2 = Mat2 { m: [[ONE, ZERO], [ZERO, ONE]] };

    pub const fn from_rows(r0: [Complex; 2], r1: [Complex; 2]) -> Self {
        Self { m: [r0, r1] }
    }

    /// Checked constructor; rejects NaN and infinite entries.
    pub fn try_from_rows(r0: [Complex; 2], r1: [Complex; 2]) -> Result<Self, Error> {
        let m = Self::from_rows(r0, r1);
        m.check_finite()?;
        Ok(m)
    }

    pub const fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::from_rows([Complex::new(a, 0.0), Complex::new(b, 0.0)], [Complex::new(c, 0.0), Complex::new(d, 0.0)])
    }

    pub const fn diag(a: Complex, d: Complex) -> Self {
        Self::from_rows([a, ZERO], [ZERO, d])
    }

    pub const fn sigma_x() -> Self {
        Self::real(0.0, 1.0, 1.0, 0.0)
    }

    pub const fn sigma_y() -> Self {
        Self::from_rows([ZERO, Complex::new(0.0, -1.0)], [I, ZERO])
    }

    pub const fn sigma_z() -> Self {
        Self::real(1.0, 0.0, 0.0, -1.0)
    }

    /// Number operator `n̂ = |1⟩⟨1|`.
    pub const fn number() -> Self {
        Self::real(0.0, 0.0, 0.0, 1.0)
    }

    pub fn check_finite(&self) -> Result<(), Error> {
        if self.m.iter().flatten().all(|z| is_finite(*z)) {
            Ok(())
        } else {
            Err(Error::NonFinite { what: "Mat2" })
        }
    }

    pub fn scale(&self, s: Complex) -> Mat2 {
        let [[a, b], [c, d]] = self.m;
        Mat2::from_rows([a * s, b * s], [c * s, d * s])
    }

    pub fn adjoint(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.m;
        Mat2::from_rows([a.conj(), c.conj()], [b.conj(), d.conj()])
    }

    pub fn trace(&self) -> Complex {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    /// `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, psi: &Vec2) -> Complex {
        psi.inner(&(*self * *psi))
    }

    /// `Tr{ρ M}`.
    pub fn expectation_rho(&self, rho: &DensityMatrix) -> Complex {
        (rho.as_mat() * *self).trace()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        sqrt(self.m.iter().flatten().map(|z| norm_sqr(*z)).sum())
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).norm()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() < 1e-12
    }

    /// `‖M†M − 𝟙‖`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self - Mat2::IDENTITY).norm()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() < tol
    }

    /// Elementwise complex conjugate.
    pub fn conj(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.m;
        Mat2::from_rows([a.conj(), b.conj()], [c.conj(), d.conj()])
    }

    pub(crate) fn to_real(self) -> [f64; 8] {
        let [[a, b], [c, d]] = self.m;
        [a.re, a.im, b.re, b.im, c.re, c.im, d.re, d.im]
    }

    pub(crate) fn from_real(y: &[f64; 8]) -> Mat2 {
        Mat2::from_rows(
            [Complex::new(y[0], y[1]), Complex::new(y[2], y[3])],
            [Complex::new(y[4], y[5]), Complex::new(y[6], y[7])],
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.m;
        let [[e, f], [g, h]] = rhs.m;
        Mat2::from_rows([a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h])
    }
}

impl Mul<Vec2> for Mat2 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        let [[a, b], [c, d]] = self.m;
        Vec2::new(a * v.c0 + b * v.c1, c * v.c0 + d * v.c1)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.m;
        let [[e, f], [g, h]] = rhs.m;
        Mat2::from_rows([a + e, b + f], [c + g, d + h])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-ONE)
    }
}

/// Hermitian, unit-trace, positive 2×2 operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Mat2);

impl DensityMatrix {
    pub const TRACE_TOL: f64 = 1e-9;
    /// Negative eigenvalues down to this are tolerated (integration drift).
    pub const EIGEN_TOL: f64 = 1e-7;

    pub fn new(m: Mat2) -> Result<Self, Error> {
        m.check_finite()?;
        if !m.is_hermitian() {
            return Err(Error::NotDensityMatrix { reason: "not hermitian" });
        }
        if (m.trace().re - 1.0).abs() > Self::TRACE_TOL {
            return Err(Error::NotDensityMatrix { reason: "trace differs from one" });
        }
        let rho = Self(m);
        if rho.eigenvalues()[0] < -Self::EIGEN_TOL {
            return Err(Error::NotDensityMatrix { reason: "negative eigenvalue" });
        }
        Ok(rho)
    }

    pub fn from_pure(psi: &Vec2) -> Result<Self, Error> {
        psi.check_finite()?;
        Self::new(psi.outer())
    }

    pub fn as_mat(&self) -> Mat2 {
        self.0
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let [[a, b], [_, d]] = self.0.m;
        let mean = 0.5 * (a.re + d.re);
        let half = 0.5 * (a.re - d.re);
        let r = sqrt(half * half + norm_sqr(b));
        [mean - r, mean + r]
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx_eq(a: &Mat2, b: &Mat2, tol: f64) -> bool {
        (*a - *b).norm() < tol
    }

    #[test]
    fn identity_is_neutral() {
        let m = Mat2::from_rows(
            [Complex::new(1.0, 2.0), Complex::new(-0.5, 0.1)],
            [Complex::new(0.3, -0.7), Complex::new(2.0, 0.0)],
        );
        assert_eq!(Mat2::IDENTITY * m, m);
        assert_eq!(m * Mat2::IDENTITY, m);
    }

    #[test]
    fn pauli_involution_and_algebra() {
        let (x, y, z) = (Mat2::sigma_x(), Mat2::sigma_y(), Mat2::sigma_z());
        assert_eq!(x * x, Mat2::IDENTITY);
        assert!(approx_eq(&(y * y), &Mat2::IDENTITY, 1e-15));
        // [σx, σy] = 2iσz
        assert!(approx_eq(&x.commutator(&y), &z.scale(Complex::new(0.0, 2.0)), 1e-15));
    }

    #[test]
    fn trace_of_diagonal_state() {
        let rho = DensityMatrix::new(Mat2::real(0.3, 0.0, 0.0, 0.7)).unwrap();
        assert!((rho.as_mat().trace().re - 1.0).abs() < 1e-15);
        let ev = rho.eigenvalues();
        assert!((ev[0] - 0.3).abs() < 1e-15 && (ev[1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn non_finite_rejected() {
        let bad = Complex::new(f64::NAN, 0.0);
        assert!(Mat2::try_from_rows([bad, ZERO], [ZERO, ONE]).is_err());
        assert!(Vec2::try_new(ONE, Complex::new(0.0, f64::INFINITY)).is_err());
        assert!(DensityMatrix::new(Mat2::real(f64::NAN, 0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(Mat2::real(0.5, 0.0, 0.0, 0.6)).is_err());
        assert!(DensityMatrix::new(Mat2::real(1.2, 0.0, 0.0, -0.2)).is_err());
        assert!(DensityMatrix::new(Mat2::real(0.5, 0.1, 0.2, 0.5)).is_err());
        let psi = Vec2::new(Complex::new(0.6, 0.0), Complex::new(0.0, 0.8));
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn expectation_forms_agree() {
        let psi = Vec2::new(Complex::new(0.6, 0.0), cis(0.4).scale(0.8));
        let h = Mat2::from_rows(
            [Complex::new(0.3, 0.0), Complex::new(0.1, -0.2)],
            [Complex::new(0.1, 0.2), Complex::new(-0.7, 0.0)],
        );
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let a = h.expectation(&psi);
        let b = h.expectation_rho(&rho);
        assert!(a.im.abs() < 1e-12);
        assert!((a - b).norm() < 1e-14);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn entry() -> impl Strategy<Value = Complex> {
            (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex::new(re, im))
        }

        fn mat() -> impl Strategy<Value = Mat2> {
            (entry(), entry(), entry(), entry()).prop_map(|(a, b, c, d)| Mat2::from_rows([a, b], [c, d]))
        }

        fn state() -> impl Strategy<Value = Vec2> {
            (entry(), entry()).prop_filter("nonzero", |(a, b)| norm_sqr(*a) + norm_sqr(*b) > 1e-3).prop_map(|(a, b)| {
                let n = sqrt(norm_sqr(a) + norm_sqr(b));
                Vec2::new(a / n, b / n)
            })
        }

        proptest! {
            // Tr{[A,B]·A} = 0: the unitary part never contributes to dE/dt.
            #[test]
            fn commutator_trace_identity(a in mat(), b in mat()) {
                let t = (a.commutator(&b) * a).trace();
                prop_assert!(t.norm() < 1e-12);
            }

            #[test]
            fn hermitian_expectation_is_real(a in mat(), psi in state()) {
                let h = (a + a.adjoint()).scale(Complex::new(0.5, 0.0));
                prop_assert!(h.is_hermitian());
                prop_assert!(h.expectation(&psi).im.abs() < 1e-12);
            }

            #[test]
            fn adjoint_reverses_products(a in mat(), b in mat()) {
                let lhs = (a * b).adjoint();
                let rhs = b.adjoint() * a.adjoint();
                prop_assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }
}
