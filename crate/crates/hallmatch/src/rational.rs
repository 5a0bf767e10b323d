//! Exact rational scalars.
//!
//! Every quantity in this crate (endpoints, measures, demands, flow values,
//! discretization steps) is a [`Rational`] in canonical form: reduced, with
//! a positive denominator. There is no floating-point mode anywhere.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number. `num_rational::BigRational` already
/// maintains the canonical form we rely on: gcd(|num|, den) = 1 and den >= 1.
pub type Rational = num_rational::BigRational;

/// `num / den` as a [`Rational`]. Panics if `den == 0`; intended for
/// literals in examples and tests.
pub fn rational(num: i64, den: i64) -> Rational {
    assert!(den != 0, "rational denominator must be nonzero");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer `n` as a [`Rational`].
pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^exp` as a [`BigInt`].
pub fn pow2(exp: usize) -> BigInt {
    BigInt::from(1u32) << exp
}

/// Exact floor of `a / b` for positive `b`.
pub fn floor_div(a: &Rational, b: &Rational) -> BigInt {
    debug_assert!(b.is_positive());
    (a / b).floor().to_integer()
}

/// Parses `"p/q"` or `"p"`; rejects zero denominators and garbage.
/// The returned value is canonical, so printing it back may differ
/// byte-wise from an unreduced input (e.g. `"2/4"` prints as `"1/2"`).
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty rational".to_string());
    }
    let (num_text, den_text) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let num: BigInt = num_text
        .parse()
        .map_err(|_| format!("malformed rational {text:?}"))?;
    let den: BigInt = match den_text {
        Some(d) => d
            .parse()
            .map_err(|_| format!("malformed rational {text:?}"))?,
        None => BigInt::from(1u32),
    };
    if den.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Rational::new(num, den))
}

/// Converts a nonnegative [`BigInt`] to `usize`, if it fits.
pub fn to_usize(value: &BigInt) -> Option<usize> {
    value.to_usize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        let r = Rational::new(BigInt::from(6), BigInt::from(-4));
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(integer(7).to_string(), "7");
        assert_eq!(rational(2, 4), rational(1, 2));
    }

    #[test]
    fn parse_accepts_both_forms() {
        assert_eq!(parse_rational("3/5").unwrap(), rational(3, 5));
        assert_eq!(parse_rational("-2/9").unwrap(), rational(-2, 9));
        assert_eq!(parse_rational("7").unwrap(), integer(7));
        assert_eq!(parse_rational(" 1/3 ").unwrap(), rational(1, 3));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn floor_div_matches_hand_values() {
        assert_eq!(floor_div(&rational(7, 2), &integer(1)), BigInt::from(3));
        assert_eq!(floor_div(&rational(1, 2), &rational(1, 20)), BigInt::from(10));
        assert_eq!(floor_div(&integer(1), &rational(2, 5)), BigInt::from(2));
        assert_eq!(floor_div(&integer(0), &rational(1, 3)), BigInt::from(0));
    }

    proptest! {
        // Round-trip parse/print of Rational is the identity.
        #[test]
        fn print_parse_roundtrip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = rational(n, d);
            let back = parse_rational(&r.to_string()).unwrap();
            prop_assert_eq!(r, back);
        }

        #[test]
        fn arithmetic_is_exact(a in -100i64..100, b in 1i64..100, c in -100i64..100, d in 1i64..100) {
            let x = rational(a, b);
            let y = rational(c, d);
            // (x + y) - y == x exactly, never approximately.
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x * &y) / &y, x);
            }
        }
    }
}
