//! Complex Poincaré normal form of a planar field at an equilibrium with a
//! complex eigenvalue pair, truncated at degree five.
//!
//! In the coordinate `x = x0 + q z + conj(q z)` the field reads
//! `z' = P(z, z̄)` with `P = λ z + Σ p_jk z^j z̄^k`. Near-identity changes
//! `z = w + h_m(w, w̄)` remove every non-resonant term of degree `m = 2..5`
//! (divisor `jλ + kλ̄ - λ`), leaving
//!
//! ```text
//!   w' = λ w + c1 w² w̄ + c2 w³ w̄² + O(|w|⁶).
//! ```
//!
//! The Lyapunov coefficients are `ℓ1 = Re c1 / ω` and, where `Re c1 = 0`,
//! `ℓ2 = Re c2 / ω`.

use num_complex::Complex64;

use crate::model::Jet;

/// Highest retained total degree.
pub const ORDER: usize = 5;
const N: usize = ORDER + 1;

/// Polynomial in `(z, z̄)` truncated at total degree [`ORDER`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncPoly {
    pub c: [[Complex64; N]; N],
}

impl Default for TruncPoly {
    fn default() -> Self {
        TruncPoly { c: [[Complex64::new(0.0, 0.0); N]; N] }
    }
}

impl TruncPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    fn terms() -> impl Iterator<Item = (usize, usize)> {
        (0..N).flat_map(|j| (0..N - j).map(move |k| (j, k)))
    }

    pub fn monomial(j: usize, k: usize, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.c[j][k] = c;
        p
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = *self;
        for (j, k) in Self::terms() {
            r.c[j][k] += o.c[j][k];
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = *self;
        for (j, k) in Self::terms() {
            r.c[j][k] -= o.c[j][k];
        }
        r
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut r = *self;
        for (j, k) in Self::terms() {
            r.c[j][k] *= s;
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (j1, k1) in Self::terms() {
            let a = self.c[j1][k1];
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j2, k2) in Self::terms() {
                if j1 + j2 + k1 + k2 <= ORDER {
                    r.c[j1 + j2][k1 + k2] += a * o.c[j2][k2];
                }
            }
        }
        r
    }

    /// The conjugate polynomial: `conj(P(z, z̄))` as a polynomial in `(z, z̄)`.
    pub fn conj(&self) -> Self {
        let mut r = Self::zero();
        for (j, k) in Self::terms() {
            r.c[j][k] = self.c[k][j].conj();
        }
        r
    }

    pub fn d_dz(&self) -> Self {
        let mut r = Self::zero();
        for (j, k) in Self::terms() {
            if j > 0 {
                r.c[j - 1][k] = self.c[j][k] * j as f64;
            }
        }
        r
    }

    pub fn d_dzbar(&self) -> Self {
        let mut r = Self::zero();
        for (j, k) in Self::terms() {
            if k > 0 {
                r.c[j][k - 1] = self.c[j][k] * k as f64;
            }
        }
        r
    }

    /// `P(Z, conj(Z))` for a polynomial substitution `Z(w, w̄)`.
    pub fn compose(&self, z: &Self) -> Self {
        let zb = z.conj();
        let mut zp = vec![Self::monomial(0, 0, Complex64::new(1.0, 0.0))];
        let mut zbp = zp.clone();
        for i in 1..N {
            zp.push(zp[i - 1].mul(z));
            zbp.push(zbp[i - 1].mul(&zb));
        }
        let mut r = Self::zero();
        for (j, k) in Self::terms() {
            if self.c[j][k] != Complex64::new(0.0, 0.0) {
                r = r.add(&zp[j].mul(&zbp[k]).scale(self.c[j][k]));
            }
        }
        r
    }
}

/// Complex eigen-data of the linear part: `A q = λ q`, `Aᵀ p = λ̄ p`,
/// `|q| = 1`, `<p, q> = p̄ᵀ q = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFrame {
    pub lambda: Complex64,
    pub q: [Complex64; 2],
    pub p: [Complex64; 2],
}

/// `<p, y> = p̄ᵀ y`.
pub fn pairing(p: &[Complex64; 2], y: &[Complex64; 2]) -> Complex64 {
    p[0].conj() * y[0] + p[1].conj() * y[1]
}

impl EigenFrame {
    /// Frame for a real 2×2 matrix with eigenvalues `μ ± iω`, `ω > 0`.
    /// `q = (b, λ - a)/|·|` is smooth in the matrix entries. Returns `None`
    /// for real spectra or `b = 0`.
    pub fn new(a: &[[f64; 2]; 2]) -> Option<Self> {
        let tr = a[0][0] + a[1][1];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let disc = tr * tr - 4.0 * det;
        if disc >= 0.0 || a[0][1] == 0.0 {
            return None;
        }
        let lambda = Complex64::new(tr / 2.0, (-disc).sqrt() / 2.0);
        let q = [Complex64::new(a[0][1], 0.0), lambda - a[0][0]];
        let nq = (q[0].norm_sqr() + q[1].norm_sqr()).sqrt();
        let q = [q[0] / nq, q[1] / nq];
        let p = [Complex64::new(a[1][0], 0.0), lambda.conj() - a[0][0]];
        let s = pairing(&p, &q);
        let p = [p[0] / s.conj(), p[1] / s.conj()];
        Some(EigenFrame { lambda, q, p })
    }

    pub fn omega(&self) -> f64 {
        self.lambda.im
    }
}

/// The field `P(z, z̄)` in eigen-coordinates at an equilibrium (up to degree 3,
/// exact because the field is cubic).
pub fn complex_field(jet: &Jet<f64>, frame: &EigenFrame) -> TruncPoly {
    let q = frame.q;
    let qb = [q[0].conj(), q[1].conj()];
    let pr = |y: [Complex64; 2]| pairing(&frame.p, &y);
    let mut p = TruncPoly::zero();
    p.c[1][0] = frame.lambda;
    p.c[2][0] = pr(jet.bilinear_c(&q, &q)) / 2.0;
    p.c[1][1] = pr(jet.bilinear_c(&q, &qb));
    p.c[0][2] = pr(jet.bilinear_c(&qb, &qb)) / 2.0;
    p.c[3][0] = pr(jet.trilinear_c(&q, &q, &q)) / 6.0;
    p.c[2][1] = pr(jet.trilinear_c(&q, &q, &qb)) / 2.0;
    p.c[1][2] = pr(jet.trilinear_c(&q, &qb, &qb)) / 2.0;
    p.c[0][3] = pr(jet.trilinear_c(&qb, &qb, &qb)) / 6.0;
    p
}

/// Reduce `P` to resonant form through degree [`ORDER`].
pub fn normalize(field: &TruncPoly) -> TruncPoly {
    let lambda = field.c[1][0];
    let mut current = *field;
    for m in 2..=ORDER {
        let mut h = TruncPoly::zero();
        for j in 0..=m {
            let k = m - j;
            if j == k + 1 {
                continue;
            }
            let div = lambda * j as f64 + lambda.conj() * k as f64 - lambda;
            h.c[j][k] = current.c[j][k] / div;
        }
        // z = w + h(w, w̄); solve (1 + h_w) w' + h_w̄ w̄' = P(w + h) for w'.
        let z = TruncPoly::monomial(1, 0, Complex64::new(1.0, 0.0)).add(&h);
        let rhs = current.compose(&z);
        let (hw, hwb) = (h.d_dz(), h.d_dzbar());
        let mut w = rhs;
        for _ in 0..=ORDER {
            w = rhs.sub(&hw.mul(&w)).sub(&hwb.mul(&w.conj()));
        }
        current = w;
    }
    current
}

/// Resonant coefficients `(c1, c2)` of the normal form at an equilibrium.
pub fn resonant_coefficients(jet: &Jet<f64>, frame: &EigenFrame) -> (Complex64, Complex64) {
    let nf = normalize(&complex_field(jet, frame));
    (nf.c[2][1], nf.c[3][2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn already_normal_form_is_fixed() {
        // z' = i z + (-1 + 2i) z² z̄ is already in normal form.
        let mut p = TruncPoly::zero();
        p.c[1][0] = c(0.0, 1.0);
        p.c[2][1] = c(-1.0, 2.0);
        let nf = normalize(&p);
        assert!((nf.c[2][1] - c(-1.0, 2.0)).norm() < 1e-14);
        assert!(nf.c[3][2].norm() < 1e-14);
    }

    #[test]
    fn quadratic_terms_feed_the_cubic_coefficient() {
        // Classical formula at λ = iω:
        // c1 = i/(2ω) (g20 g11 - 2|g11|² - |g02|²/3) + g21/2 with g_jk = j! k! p_jk.
        let omega = 1.3;
        let mut p = TruncPoly::zero();
        p.c[1][0] = c(0.0, omega);
        let (g20, g11, g02, g21) = (c(0.3, -0.2), c(-0.5, 0.1), c(0.25, 0.4), c(0.7, -0.3));
        p.c[2][0] = g20 / 2.0;
        p.c[1][1] = g11;
        p.c[0][2] = g02 / 2.0;
        p.c[2][1] = g21 / 2.0;
        let expect = c(0.0, 1.0) / (2.0 * omega) * (g20 * g11 - 2.0 * g11.norm_sqr() - g02.norm_sqr() / 3.0) + g21 / 2.0;
        let nf = normalize(&p);
        assert!((nf.c[2][1] - expect).norm() < 1e-13, "{} vs {}", nf.c[2][1], expect);
    }

    #[test]
    fn eigenframe_normalization() {
        let a = [[-0.1, -0.4], [0.3, 0.05]];
        let f = EigenFrame::new(&a).unwrap();
        let aq = [a[0][0] * f.q[0] + a[0][1] * f.q[1], a[1][0] * f.q[0] + a[1][1] * f.q[1]];
        assert!((aq[0] - f.lambda * f.q[0]).norm() < 1e-15 && (aq[1] - f.lambda * f.q[1]).norm() < 1e-15);
        assert!((pairing(&f.p, &f.q) - 1.0).norm() < 1e-15);
        let qb = [f.q[0].conj(), f.q[1].conj()];
        assert!(pairing(&f.p, &qb).norm() < 1e-15);
    }
}
