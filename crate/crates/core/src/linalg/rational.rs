use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Denominator bound used when turning floating witnesses into rationals.
pub const DEFAULT_DENOMINATOR_CAP: u64 = 1_000_000_000_000;

/// Parses `p/q`, a plain integer, or a finite decimal such as `3.5` or `-1e-6`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(i) = s.parse::<BigInt>() {
        return Ok(Rational::from_integer(i));
    }
    parse_decimal(s).ok_or_else(|| Error::Parse(format!("not a rational: {s:?}")))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let scale = exponent - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(all);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -value } else { value })
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| if r.is_positive() { f64::INFINITY } else { f64::NEG_INFINITY })
}

/// Exact conversion of a finite float (every finite f64 is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

/// Best rational approximation of `x` with denominator at most `cap`, via the
/// continued fraction expansion of the exact value of `x`.
pub fn rationalize(x: f64, cap: u64) -> Rational {
    let exact = rational_from_f64(x);
    rationalize_exact(&exact, &BigInt::from(cap))
}

pub(crate) fn rationalize_exact(x: &Rational, cap: &BigInt) -> Rational {
    if x.denom() <= cap {
        return x.clone();
    }
    // Convergents h/k of the continued fraction; stop before k exceeds cap.
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    loop {
        let a = rest.floor().to_integer();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if &k_next > cap {
            break;
        }
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    Rational::new(h, k)
}

/// `log2 |x|` for a big integer magnitude, exact in the leading 64 bits.
pub(crate) fn log2_big(x: &num_bigint::BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap().log2()
    } else {
        let shift = bits - 64;
        let top: num_bigint::BigUint = x >> shift;
        top.to_f64().unwrap().log2() + shift as f64
    }
}

/// `log2 |r|` for non-zero `r`, without overflowing on huge terms.
pub(crate) fn log2_rational(r: &Rational) -> f64 {
    log2_big(r.numer().magnitude()) - log2_big(r.denom().magnitude())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("21/10").unwrap(), q(21, 10));
        assert_eq!(parse_rational("-4/6").unwrap(), q(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert_eq!(parse_rational("3.5").unwrap(), q(7, 2));
        assert_eq!(parse_rational("1e-6").unwrap(), q(1, 1_000_000));
        assert_eq!(parse_rational("-.25").unwrap(), q(-1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&q(6, 4)), "3/2");
        assert_eq!(format_rational(&q(-8, 4)), "-2");
    }

    #[test]
    fn rationalize_respects_cap() {
        let r = rationalize(std::f64::consts::PI, 1000);
        assert_eq!(r, q(355, 113));
        assert_eq!(rationalize(0.5, 10), q(1, 2));
        let r = rationalize(0.5615528128088303, DEFAULT_DENOMINATOR_CAP);
        assert!(r.denom() <= &BigInt::from(DEFAULT_DENOMINATOR_CAP));
        assert!((to_f64(&r) - 0.5615528128088303).abs() < 1e-12);
    }
}
