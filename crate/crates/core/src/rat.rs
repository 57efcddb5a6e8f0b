//! Exact rational scalars: a thin layer over `num::BigRational`.

use num::bigint::Sign as IntSign;
use num::{BigInt, BigRational, One, Signed, Zero};

pub type Rat = BigRational;
pub type Int = BigInt;

/// Sign of an exact quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(r: &Rat) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn of_int(i: &Int) -> Sign {
        match i.sign() {
            IntSign::Minus => Sign::Neg,
            IntSign::NoSign => Sign::Zero,
            IntSign::Plus => Sign::Pos,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    /// Product of signs.
    pub fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Pos,
            _ => Sign::Neg,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    /// All three signs in the deterministic branch order −1, 0, +1.
    pub const ALL: [Sign; 3] = [Sign::Neg, Sign::Zero, Sign::Pos];
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Neg => write!(f, "-1"),
            Sign::Zero => write!(f, "0"),
            Sign::Pos => write!(f, "+1"),
        }
    }
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Nonnegative integer power.
pub fn rat_pow(base: &Rat, exp: u32) -> Rat {
    let mut acc = Rat::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rat_sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt_exact(r.numer())?;
    let d = int_sqrt_exact(r.denom())?;
    Some(Rat::new(n, d))
}

fn int_sqrt_exact(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

/// Parses `p/q` or `p` into an exact rational.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let t = text.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().ok()?;
            let d: Int = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => {
            let n: Int = t.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_arithmetic() {
        assert_eq!(Sign::Neg.mul(Sign::Neg), Sign::Pos);
        assert_eq!(Sign::Neg.mul(Sign::Pos), Sign::Neg);
        assert_eq!(Sign::Zero.mul(Sign::Pos), Sign::Zero);
        assert_eq!(Sign::of(&rat(-3, 7)), Sign::Neg);
        assert_eq!(Sign::of(&rat_int(0)), Sign::Zero);
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(rat_sqrt_exact(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rat_sqrt_exact(&rat_int(2)), None);
        assert_eq!(rat_sqrt_exact(&rat_int(-4)), None);
        assert_eq!(rat_sqrt_exact(&rat_int(0)), Some(rat_int(0)));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rat("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rat("-5"), Some(rat_int(-5)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("6/-4"), Some(rat(-3, 2)));
    }
}
