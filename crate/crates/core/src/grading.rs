//! Z2xZ2 gradings and the commutation sign rule.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

/// An element of Z2 x Z2, written `[a1 a2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GradeVec {
    pub a1: bool,
    pub a2: bool,
}

impl GradeVec {
    pub const G00: GradeVec = GradeVec { a1: false, a2: false };
    pub const G10: GradeVec = GradeVec { a1: true, a2: false };
    pub const G01: GradeVec = GradeVec { a1: false, a2: true };
    pub const G11: GradeVec = GradeVec { a1: true, a2: true };

    pub const ALL: [GradeVec; 4] = [Self::G00, Self::G10, Self::G01, Self::G11];

    pub const fn new(a1: bool, a2: bool) -> Self {
        GradeVec { a1, a2 }
    }

    /// a1*b1 + a2*b2 mod 2.
    pub fn dot(self, other: GradeVec) -> bool {
        (self.a1 & other.a1) ^ (self.a2 & other.a2)
    }

    /// True when the pair commutes, i.e. the sign is +1.
    pub fn commutes_with(self, other: GradeVec) -> bool {
        !self.dot(other)
    }

    /// Sign as +1/-1.
    pub fn sign(self, other: GradeVec) -> i8 {
        if self.dot(other) {
            -1
        } else {
            1
        }
    }

    /// Objects of this grade square to zero when they are generators.
    pub fn is_odd_type(self) -> bool {
        self.dot(self)
    }

    pub fn label(self) -> &'static str {
        match (self.a1, self.a2) {
            (false, false) => "00",
            (true, false) => "10",
            (false, true) => "01",
            (true, true) => "11",
        }
    }

    pub fn parse(s: &str) -> Option<GradeVec> {
        match s.trim_matches(|c| c == '[' || c == ']') {
            "00" => Some(Self::G00),
            "10" => Some(Self::G10),
            "01" => Some(Self::G01),
            "11" => Some(Self::G11),
            _ => None,
        }
    }
}

impl Add for GradeVec {
    type Output = GradeVec;
    fn add(self, rhs: GradeVec) -> GradeVec {
        GradeVec::new(self.a1 ^ rhs.a1, self.a2 ^ rhs.a2)
    }
}

impl std::iter::Sum for GradeVec {
    fn sum<I: Iterator<Item = GradeVec>>(iter: I) -> GradeVec {
        iter.fold(GradeVec::G00, |a, b| a + b)
    }
}

impl fmt::Display for GradeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.label())
    }
}

pub fn grade_add(a: GradeVec, b: GradeVec) -> GradeVec {
    a + b
}

/// (-1)^{a.b} as an exact scalar.
pub fn grade_sign(a: GradeVec, b: GradeVec) -> crate::Scalar {
    crate::Scalar::from_int(a.sign(b) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_examples() {
        assert_eq!(GradeVec::G10 + GradeVec::G01, GradeVec::G11);
        assert_eq!(GradeVec::G11 + GradeVec::G11, GradeVec::G00);
        for g in GradeVec::ALL {
            assert_eq!(GradeVec::G00 + g, g);
            assert_eq!(g + g, GradeVec::G00);
        }
    }

    #[test]
    fn sign_examples() {
        assert_eq!(GradeVec::G10.sign(GradeVec::G01), 1);
        assert_eq!(GradeVec::G11.sign(GradeVec::G10), -1);
        assert_eq!(GradeVec::G11.sign(GradeVec::G11), 1);
    }

    #[test]
    fn sign_is_bilinear_and_symmetric() {
        for a in GradeVec::ALL {
            for b in GradeVec::ALL {
                assert_eq!(a.sign(b), b.sign(a));
                for c in GradeVec::ALL {
                    assert_eq!((a + b).sign(c), a.sign(c) * b.sign(c));
                    assert_eq!((a + b) + c, a + (b + c));
                }
            }
        }
    }

    #[test]
    fn odd_types() {
        assert!(GradeVec::G10.is_odd_type());
        assert!(GradeVec::G01.is_odd_type());
        assert!(!GradeVec::G11.is_odd_type());
        assert!(!GradeVec::G00.is_odd_type());
    }
}
