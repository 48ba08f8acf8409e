//! Small exact-arithmetic helpers: rational parsing and rational square roots.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Parse `"p/q"` or an integer literal into an exact rational.
/// Decimal literals are rejected (they are routed to floating point).
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Exact integer square root when `n` is a perfect square.
pub fn sqrt_int(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a nonnegative rational, when it is rational.
pub fn sqrt_exact(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    Some(BigRational::new(sqrt_int(r.numer())?, sqrt_int(r.denom())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::q;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("9/256"), Some(q(9, 256)));
        assert_eq!(parse_rational(" -3 "), Some(q(-3, 1)));
        assert_eq!(parse_rational("0.5"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(sqrt_exact(&q(9, 256)), Some(q(3, 16)));
        assert_eq!(sqrt_exact(&q(1, 4)), Some(q(1, 2)));
        assert_eq!(sqrt_exact(&q(2, 1)), None);
        assert_eq!(sqrt_exact(&q(-1, 4)), None);
    }
}
