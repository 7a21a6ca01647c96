//! Exact rationals and their `"p/q"` text form.

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = Ratio<i64>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

/// `"p/q"` in lowest terms, or `"p"` when integral.
pub fn format(r: &Q) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse().ok().map(Q::from_integer),
        Some((p, d)) => {
            let p: i64 = p.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            (d != 0).then(|| Q::new(p, d))
        }
    }
}

pub fn clamp(x: Q, lo: Q, hi: Q) -> Q {
    if x < lo {
        lo
    } else if x > hi {
        hi
    } else {
        x
    }
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Serde adapter storing a rational as its `"p/q"` string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatStr(pub Q);

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s)
            .map(RatStr)
            .ok_or_else(|| serde::de::Error::custom(format!("not a rational: {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form() {
        assert_eq!(format(&Q::new(6, 4)), "3/2");
        assert_eq!(format(&Q::new(-4, 2)), "-2");
        assert_eq!(parse("3/2"), Some(Q::new(3, 2)));
        assert_eq!(parse("7"), Some(q(7)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }
}
