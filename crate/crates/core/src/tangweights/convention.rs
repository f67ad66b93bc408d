use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// How weights are signed when tangent directions are counted: each of the
/// three tensor factors `W`, `I`, `V` may have its weights negated, and the
/// count may be of positive or of negative weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct SignConvention {
    pub flip_w: bool,
    pub flip_i: bool,
    pub flip_v: bool,
    pub count_negative: bool,
}

impl SignConvention {
    /// All 16 conventions, identity first.
    pub fn all() -> Vec<SignConvention> {
        let mut out = Vec::with_capacity(16);
        for count_negative in [false, true] {
            for bits in 0u8..8 {
                out.push(SignConvention {
                    flip_w: bits & 4 != 0,
                    flip_i: bits & 2 != 0,
                    flip_v: bits & 1 != 0,
                    count_negative,
                });
            }
        }
        out
    }

    pub(crate) fn sign_w(self) -> i64 {
        sign(self.flip_w)
    }

    pub(crate) fn sign_i(self) -> i64 {
        sign(self.flip_i)
    }

    pub(crate) fn sign_v(self) -> i64 {
        sign(self.flip_v)
    }

    /// True if `w` is counted as an attracting direction.
    pub(crate) fn counts(self, w: i64) -> bool {
        if self.count_negative {
            w < 0
        } else {
            w > 0
        }
    }

    /// Every factor flipped, same orientation: all weights change sign.
    pub fn reversed(self) -> SignConvention {
        SignConvention {
            flip_w: !self.flip_w,
            flip_i: !self.flip_i,
            flip_v: !self.flip_v,
            count_negative: self.count_negative,
        }
    }
}

fn sign(flip: bool) -> i64 {
    if flip {
        -1
    } else {
        1
    }
}

impl fmt::Display for SignConvention {
    /// `+++pos` is the identity; the three symbols are the `W`, `I` and `V`
    /// factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |flip: bool| if flip { '-' } else { '+' };
        write!(
            f,
            "{}{}{}{}",
            c(self.flip_w),
            c(self.flip_i),
            c(self.flip_v),
            if self.count_negative { "neg" } else { "pos" }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid sign convention `{0}` (expected e.g. `+++pos` or `-+-neg`)")]
pub struct ConventionParseError(pub String);

impl FromStr for SignConvention {
    type Err = ConventionParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ConventionParseError(s.to_string());
        let bytes = s.as_bytes();
        if bytes.len() != 6 {
            return Err(err());
        }
        let flip = |b: u8| match b {
            b'+' => Ok(false),
            b'-' => Ok(true),
            _ => Err(err()),
        };
        let count_negative = match &s[3..] {
            "pos" => false,
            "neg" => true,
            _ => return Err(err()),
        };
        Ok(SignConvention {
            flip_w: flip(bytes[0])?,
            flip_i: flip(bytes[1])?,
            flip_v: flip(bytes[2])?,
            count_negative,
        })
    }
}

impl Serialize for SignConvention {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
