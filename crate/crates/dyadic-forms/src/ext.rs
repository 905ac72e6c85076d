//! Extended values: half-integers together with +∞.
//!
//! Quadratic defects, the α_i, the d[..] quantities and the A_i minima all live
//! in ½ℤ ∪ {+∞}, where +∞ is absorbing for addition and greater than every
//! finite value. Internally a finite value is stored as twice itself so that
//! every quantity in scope is an exact integer.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A half-integer or +∞. `Fin(t)` represents the value t/2.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ext {
    Fin(i64),
    Inf,
}

pub use Ext::{Fin, Inf};

impl Ext {
    /// An integer value.
    pub fn int(n: i64) -> Ext {
        Fin(2 * n)
    }

    /// A half-integer value given as twice itself.
    pub fn half(twice: i64) -> Ext {
        Fin(twice)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Fin(_))
    }

    /// The value as an integer; panics if infinite or not integral.
    pub fn as_int(self) -> i64 {
        match self {
            Fin(t) => {
                assert!(t % 2 == 0, "Ext value {self} is not an integer");
                t / 2
            }
            Inf => panic!("Ext value is infinite"),
        }
    }

    /// Twice the value; panics if infinite.
    pub fn twice(self) -> i64 {
        match self {
            Fin(t) => t,
            Inf => panic!("Ext value is infinite"),
        }
    }

    /// True if the value is an integer (finite and even doubled form).
    pub fn is_integer(self) -> bool {
        matches!(self, Fin(t) if t % 2 == 0)
    }

    /// Minimum of a list of values; `Inf` for an empty list (empty minimum).
    pub fn min_of(values: impl IntoIterator<Item = Ext>) -> Ext {
        values.into_iter().fold(Inf, Ext::min)
    }

    pub fn min(self, other: Ext) -> Ext {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Ext) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Ext) -> Ordering {
        match (self, other) {
            (Fin(a), Fin(b)) => a.cmp(b),
            (Fin(_), Inf) => Ordering::Less,
            (Inf, Fin(_)) => Ordering::Greater,
            (Inf, Inf) => Ordering::Equal,
        }
    }
}

impl Add for Ext {
    type Output = Ext;
    fn add(self, rhs: Ext) -> Ext {
        match (self, rhs) {
            (Fin(a), Fin(b)) => Fin(a + b),
            _ => Inf,
        }
    }
}

/// Adding an integer shift to an extended value (∞ stays ∞).
impl Add<i64> for Ext {
    type Output = Ext;
    fn add(self, rhs: i64) -> Ext {
        match self {
            Fin(a) => Fin(a + 2 * rhs),
            Inf => Inf,
        }
    }
}

impl Sub<i64> for Ext {
    type Output = Ext;
    fn sub(self, rhs: i64) -> Ext {
        self + (-rhs)
    }
}

impl Neg for Ext {
    type Output = Ext;
    fn neg(self) -> Ext {
        match self {
            Fin(a) => Fin(-a),
            Inf => panic!("cannot negate +inf"),
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(t) if t % 2 == 0 => write!(f, "{}", t / 2),
            Fin(t) => write!(f, "{}/2", t),
            Inf => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_min() {
        assert!(Ext::int(3) < Inf);
        assert!(Ext::half(7) > Ext::int(3)); // 7/2 > 3
        assert_eq!(Ext::min_of([Inf, Ext::int(2), Ext::half(5)]), Ext::int(2));
        assert_eq!(Ext::min_of([]), Inf);
    }

    #[test]
    fn arithmetic() {
        assert_eq!(Ext::int(2) + Ext::half(1), Ext::half(5));
        assert_eq!(Inf + Ext::int(5), Inf);
        assert_eq!(Ext::int(4) + (-3), Ext::int(1));
        assert_eq!(Inf + 17, Inf);
        assert_eq!(format!("{}", Ext::half(5)), "5/2");
        assert_eq!(format!("{}", Inf), "inf");
    }
}
