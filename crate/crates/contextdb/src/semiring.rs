//! Commutative semirings and their elements.
//!
//! Every table in this crate is a finitely supported map from tuples into a
//! commutative semiring `(R, +, 0, ·, 1)`. Three semirings are provided:
//!
//! * **Boolean** — `({0, 1}, ∨, 0, ∧, 1)`. Boolean-valued tables are
//!   ordinary relations: a tuple is either present or absent.
//! * **Probability** — the nonnegative rationals under ordinary `+` and `·`.
//!   Arithmetic is exact; there is no floating point anywhere in the core.
//! * **MinPlus** — the tropical semiring `(ℚ≥0 ∪ {∞}, min, ∞, +, 0)`,
//!   useful for cost and shortest-path style aggregation.
//!
//! Elements are carried by the dynamic [`Value`] enum because semirings are
//! chosen at runtime (by an interchange document or a command-line flag).
//! The arithmetic in [`SemiringKind::add`] and [`SemiringKind::mul`] panics
//! on mixed-kind arguments: public entry points validate kinds up front and
//! report [`Error::WrongSemiring`](crate::error::Error::WrongSemiring), so a
//! mixed-kind operand deep inside an operator is a bug, not an input error.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The three supported semirings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemiringKind {
    /// `({0,1}, ∨, ∧)`: relations / possibility tables.
    Boolean,
    /// Exact nonnegative rationals under `(+, ·)`: probability tables.
    Probability,
    /// `(ℚ≥0 ∪ {∞}, min, +)`: cost tables.
    MinPlus,
}

/// An element of the tropical (min-plus) semiring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tropical {
    /// A finite nonnegative cost.
    Finite(BigRational),
    /// `∞`, the additive identity of min-plus.
    Infinite,
}

/// A semiring element, tagged with the semiring it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Bool(bool),
    Rational(BigRational),
    Tropical(Tropical),
}

impl SemiringKind {
    /// The tag used in the interchange format and in reports.
    pub fn name(self) -> &'static str {
        match self {
            SemiringKind::Boolean => "boolean",
            SemiringKind::Probability => "probability",
            SemiringKind::MinPlus => "minplus",
        }
    }

    /// Parse an interchange tag.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "boolean" => Ok(SemiringKind::Boolean),
            "probability" => Ok(SemiringKind::Probability),
            "minplus" => Ok(SemiringKind::MinPlus),
            other => Err(Error::UnknownSemiring(other.to_string())),
        }
    }

    /// Additive identity: absent tuples implicitly carry this value.
    pub fn zero(self) -> Value {
        match self {
            SemiringKind::Boolean => Value::Bool(false),
            SemiringKind::Probability => Value::Rational(BigRational::zero()),
            SemiringKind::MinPlus => Value::Tropical(Tropical::Infinite),
        }
    }

    /// Multiplicative identity.
    pub fn one(self) -> Value {
        match self {
            SemiringKind::Boolean => Value::Bool(true),
            SemiringKind::Probability => Value::Rational(BigRational::one()),
            SemiringKind::MinPlus => Value::Tropical(Tropical::Finite(BigRational::zero())),
        }
    }

    /// Semiring addition (`∨`, `+`, or `min`).
    ///
    /// # Panics
    ///
    /// Panics if either argument belongs to a different semiring; callers
    /// validate kinds before doing arithmetic.
    pub fn add(self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (SemiringKind::Boolean, Value::Bool(x), Value::Bool(y)) => Value::Bool(*x || *y),
            (SemiringKind::Probability, Value::Rational(x), Value::Rational(y)) => {
                Value::Rational(x + y)
            }
            (SemiringKind::MinPlus, Value::Tropical(x), Value::Tropical(y)) => {
                Value::Tropical(match (x, y) {
                    (Tropical::Infinite, t) | (t, Tropical::Infinite) => t.clone(),
                    (Tropical::Finite(p), Tropical::Finite(q)) => {
                        Tropical::Finite(p.min(q).clone())
                    }
                })
            }
            _ => panic!("semiring value kind mismatch in add"),
        }
    }

    /// Semiring multiplication (`∧`, `·`, or `+`).
    ///
    /// # Panics
    ///
    /// Panics if either argument belongs to a different semiring.
    pub fn mul(self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (SemiringKind::Boolean, Value::Bool(x), Value::Bool(y)) => Value::Bool(*x && *y),
            (SemiringKind::Probability, Value::Rational(x), Value::Rational(y)) => {
                Value::Rational(x * y)
            }
            (SemiringKind::MinPlus, Value::Tropical(x), Value::Tropical(y)) => {
                Value::Tropical(match (x, y) {
                    (Tropical::Infinite, _) | (_, Tropical::Infinite) => Tropical::Infinite,
                    (Tropical::Finite(p), Tropical::Finite(q)) => Tropical::Finite(p + q),
                })
            }
            _ => panic!("semiring value kind mismatch in mul"),
        }
    }

    /// Parse a value token in this semiring's canonical text form.
    ///
    /// Boolean accepts `0`/`1`/`false`/`true`; probability accepts `p/q`,
    /// integers, and decimal literals; min-plus additionally accepts `inf`.
    /// Probability and min-plus values must be nonnegative.
    pub fn parse_value(self, token: &str) -> Result<Value> {
        match self {
            SemiringKind::Boolean => match token.trim() {
                "1" | "true" => Ok(Value::Bool(true)),
                "0" | "false" => Ok(Value::Bool(false)),
                other => Err(Error::Syntax(format!("invalid boolean value `{other}`"))),
            },
            SemiringKind::Probability => {
                let r = parse_rational(token)?;
                if r.is_negative() {
                    return Err(Error::NegativeValue(token.trim().to_string()));
                }
                Ok(Value::Rational(r))
            }
            SemiringKind::MinPlus => {
                let t = token.trim();
                if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
                    return Ok(Value::Tropical(Tropical::Infinite));
                }
                let r = parse_rational(t)?;
                if r.is_negative() {
                    return Err(Error::NegativeValue(t.to_string()));
                }
                Ok(Value::Tropical(Tropical::Finite(r)))
            }
        }
    }
}

impl Value {
    /// The semiring this element belongs to.
    pub fn kind(&self) -> SemiringKind {
        match self {
            Value::Bool(_) => SemiringKind::Boolean,
            Value::Rational(_) => SemiringKind::Probability,
            Value::Tropical(_) => SemiringKind::MinPlus,
        }
    }

    /// Is this the additive identity of its semiring?
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Bool(b) => !b,
            Value::Rational(r) => r.is_zero(),
            Value::Tropical(t) => matches!(t, Tropical::Infinite),
        }
    }

    /// Is this the multiplicative identity of its semiring?
    pub fn is_one(&self) -> bool {
        match self {
            Value::Bool(b) => *b,
            Value::Rational(r) => r.is_one(),
            Value::Tropical(Tropical::Finite(r)) => r.is_zero(),
            Value::Tropical(Tropical::Infinite) => false,
        }
    }

    /// The exact rational payload of a probability value.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Value::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Canonical text form: `0`/`1` for boolean, `p/q` or an integer for
    /// rationals, `inf` for the tropical infinity.
    pub fn render(&self) -> String {
        match self {
            Value::Bool(true) => "1".to_string(),
            Value::Bool(false) => "0".to_string(),
            Value::Rational(r) => render_rational(r),
            Value::Tropical(Tropical::Finite(r)) => render_rational(r),
            Value::Tropical(Tropical::Infinite) => "inf".to_string(),
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

/// Convenience constructor for exact rationals: `rat(3, 8)` is `3/8`.
///
/// # Panics
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse an exact rational from `p/q`, integer, or decimal text.
///
/// Accepted forms: `3/8`, `-3/8`, `2`, `-2`, `0.375`, `-0.375`. Decimal
/// literals are converted exactly (`0.375` becomes `3/8`); there is no
/// float round-trip involved.
pub fn parse_rational(token: &str) -> Result<BigRational> {
    let t = token.trim();
    if t.is_empty() {
        return Err(Error::Syntax("empty rational literal".to_string()));
    }
    let bad = || Error::Syntax(format!("invalid rational literal `{t}`"));

    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Syntax(format!("zero denominator in `{t}`")));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int_digits = if int_digits.is_empty() { "0" } else { int_digits };
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let whole: BigInt = int_digits.parse().map_err(|_| bad())?;
        let frac: BigInt = frac_part.parse().map_err(|_| bad())?;
        let numer = (whole * &scale + frac) * BigInt::from(sign);
        return Ok(BigRational::new(numer, scale));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Canonical text form of a rational: an integer when the (reduced)
/// denominator is one, `p/q` otherwise.
pub fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
