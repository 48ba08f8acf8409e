//! Dense univariate polynomials over exact rings, Sylvester resultants and
//! rational root isolation.
//!
//! `Poly<R>` is itself a [`Ring`], so bivariate polynomials are modelled as
//! `Poly<Poly<BigInt>>` (outer variable first) and the resultant with respect
//! to the outer variable is an exact `Poly<BigInt>`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Commutative ring with a partial exact division.
pub trait Ring:
    Clone + PartialEq + fmt::Debug + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// `self / d` when the division is exact, `None` otherwise.
    fn exact_div(&self, d: &Self) -> Option<Self>;
}

impl Ring for BigInt {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (quo, rem) = self.div_rem(d);
        rem.is_zero().then_some(quo)
    }
}

impl Ring for BigRational {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        (!d.is_zero()).then(|| self / d)
    }
}

/// Dense polynomial, coefficients in increasing degree, no trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![R::zero(), R::one()])
    }

    /// `c * x^n`.
    pub fn monomial(c: R, n: usize) -> Self {
        let mut v = vec![R::zero(); n + 1];
        v[n] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs.iter().rev().fold(R::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc * self.clone())
    }

    /// Exact polynomial division; `None` when the divisor does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree() else { return Some(Self::zero()) };
        if n < dd {
            return None;
        }
        let mut quo = vec![R::zero(); n - dd + 1];
        for i in (0..=n - dd).rev() {
            let c = rem[i + dd].exact_div(&lead)?;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
            }
            quo[i] = c;
        }
        rem.iter().all(|c| c.is_zero()).then(|| Self::new(quo))
    }
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        self.div_exact(d)
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly<BigInt> {
    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&a| BigInt::from(a)).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// Gcd of the coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        let c = if self.leading().is_negative() { -c } else { c };
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn to_rational(&self) -> Poly<BigRational> {
        Poly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.to_rational().eval(x)
    }
}

impl Poly<BigRational> {
    /// Euclidean remainder over the field of rationals.
    pub fn rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut r = self.clone();
        while let Some(n) = r.degree() {
            if n < dd {
                break;
            }
            let c = r.leading() / lead.clone();
            r = r - Self::monomial(c, n - dd) * d.clone();
        }
        r
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        let lead = a.leading();
        if lead.is_zero() {
            a
        } else {
            a.scale(&(BigRational::one() / lead))
        }
    }

    /// Scale to a primitive integer polynomial with positive leading coefficient.
    pub fn to_primitive_integer(&self) -> Poly<BigInt> {
        let l = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        Poly::new(self.coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect()).primitive()
    }
}

/// Sylvester matrix of `p` and `q`, with the rows built from `p` first.
pub fn sylvester_matrix<R: Ring>(p: &Poly<R>, q: &Poly<R>) -> Result<Vec<Vec<R>>> {
    let m = p.degree().ok_or(Error::ZeroPolynomial)?;
    let n = q.degree().ok_or(Error::ZeroPolynomial)?;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (poly, deg, count) in [(p, m, n), (q, n, m)] {
        for shift in 0..count {
            let mut row = vec![R::zero(); size];
            for i in 0..=deg {
                row[shift + i] = poly.coeff(deg - i);
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
/// Every intermediate division is exact in the ring.
pub fn bareiss_det<R: Ring>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    if n == 0 {
        return R::one();
    }
    let mut sign_flip = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].clone() * m[i][j].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num.exact_div(&prev).expect("Bareiss division must be exact");
            }
            m[i][k] = R::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        -d
    } else {
        d
    }
}

/// Resultant `Res(p, q)` as the Sylvester determinant (rows of `p` first).
/// With this orientation `Res(x - a, x - b) = a - b`.
pub fn resultant<R: Ring>(p: &Poly<R>, q: &Poly<R>) -> Result<R> {
    Ok(bareiss_det(sylvester_matrix(p, q)?))
}

/// Exact determinant of a rational matrix: rows are scaled to integers,
/// eliminated fraction-free, and the scaling is divided back out.
pub fn rational_det(m: &[Vec<BigRational>]) -> BigRational {
    let mut scale = BigInt::one();
    let rows = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
            scale *= &l;
            row.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    BigRational::new(bareiss_det::<BigInt>(rows), scale)
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All distinct rational roots with multiplicities, in increasing order.
///
/// The rational root test runs on the square-free part, so the candidate
/// set is built from its (small) constant and leading coefficients.
pub fn rational_roots(p: &Poly<BigInt>) -> Result<Vec<(BigRational, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let pr = p.to_rational();
    let sqf = pr.div_exact(&pr.gcd(&p.derivative().to_rational())).expect("gcd divides");
    let mut sqf = sqf.to_primitive_integer();
    let mut roots = Vec::new();
    // Strip the root at zero.
    let mut lowest = 0;
    while sqf.coeff(lowest).is_zero() {
        lowest += 1;
    }
    if lowest > 0 {
        roots.push(BigRational::zero());
        sqf = Poly::new(sqf.coeffs()[lowest..].to_vec());
    }
    if sqf.degree().unwrap_or(0) > 0 {
        let nums = positive_divisors(&sqf.coeff(0));
        let dens = positive_divisors(&sqf.leading());
        for n in &nums {
            for d in &dens {
                for cand in [BigRational::new(n.clone(), d.clone()), BigRational::new(-n.clone(), d.clone())] {
                    if !roots.contains(&cand) && sqf.eval_rational(&cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    Ok(roots
        .into_iter()
        .map(|r| {
            let lin = Poly::new(vec![-r.clone(), BigRational::one()]);
            let mut rest = pr.clone();
            let mut mult = 0;
            while let Some(next) = rest.div_exact(&lin) {
                rest = next;
                mult += 1;
            }
            (r, mult)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::q;

    fn zx(c: &[i64]) -> Poly<BigInt> {
        Poly::from_i64(c)
    }

    #[test]
    fn resultant_orientation() {
        // Res(x - a, x - b) = a - b.
        let r = resultant(&zx(&[-3, 1]), &zx(&[-7, 1])).unwrap();
        assert_eq!(r, BigInt::from(3 - 7));
    }

    #[test]
    fn resultant_vanishes_on_common_root() {
        assert!(resultant(&zx(&[-1, 0, 1]), &zx(&[-1, 1])).unwrap().is_zero());
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert_eq!(resultant(&zx(&[]), &zx(&[1, 1])), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn exact_division() {
        let a = zx(&[-1, 1]) * zx(&[2, 3]);
        assert_eq!(a.div_exact(&zx(&[-1, 1])), Some(zx(&[2, 3])));
        assert_eq!(zx(&[1, 0, 1]).div_exact(&zx(&[-1, 1])), None);
    }

    #[test]
    fn roots_with_multiplicity() {
        // 6 (x - 1)^3 (2x + 1) x
        let p = zx(&[-1, 1]).pow(3) * zx(&[1, 2]) * zx(&[0, 6]);
        let roots = rational_roots(&p).unwrap();
        assert_eq!(roots, vec![(q(-1, 2), 1), (q(0, 1), 1), (q(1, 1), 3)]);
    }

    #[test]
    fn irreducible_quadratic_has_no_rational_roots() {
        assert!(rational_roots(&zx(&[-2, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn rational_determinant() {
        let m = vec![vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(1, 5)]];
        assert_eq!(rational_det(&m), q(1, 10) - q(1, 12));
    }
}
