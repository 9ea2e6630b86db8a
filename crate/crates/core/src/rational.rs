//! Exact rational scalars.
//!
//! Every coordinate in this crate is a `Q`. Paste, collision and branch
//! predicates are equality-sensitive, so floating point never enters the
//! computational path; only the SVG renderer converts to `f64`.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Q = Ratio<i64>;

/// Integer shorthand.
pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

/// `n/d` shorthand. Panics on a zero denominator.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn half() -> Q {
    qf(1, 2)
}

/// Sign of a nonzero rational as `±1`.
pub fn sign(x: &Q) -> i64 {
    if x.is_negative() {
        -1
    } else {
        1
    }
}

/// Parse `[-+]digits[/digits]`.
pub fn parse_q(s: &str) -> Option<Q> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = num.strip_prefix(['-', '+']).unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: i64 = num.parse().ok()?;
    let d: i64 = match den {
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            d.parse().ok()?
        }
        None => 1,
    };
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

/// `p/q`, or a bare integer when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    if *x.denom() == 1 {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn min_q(a: Q, b: Q) -> Q {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_q(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}
