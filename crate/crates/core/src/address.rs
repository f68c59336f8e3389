//! Points of the N-parts numbers: double-sided base-N digit sequences with a
//! finite integer part and an eventually periodic fractional part.
//!
//! A sequence `...p2 p1 p0 . p-1 p-2 ...` is stored as an [`Address`]: the
//! integer digits `p_{len-1} .. p_0` (most significant first) plus a [`Tail`]
//! holding `p_{-1} p_{-2} ...` as a preperiod followed by a repeating period.
//! Both are kept in a normal form so that structural equality is equality of
//! digit sequences.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Exact;

/// A single base-N digit. Its range is fixed by the ambient space, not by the
/// value itself.
pub type Digit = u32;

/// A right-infinite, eventually periodic digit word `pre (period)^∞`.
///
/// Normal form: the period is primitive and non-empty, and the preperiod is
/// as short as possible. The all-zero word is `()(0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tail {
    pre: Vec<Digit>,
    period: Vec<Digit>,
}

impl Tail {
    /// Builds and normalizes a tail.
    ///
    /// # Panics
    ///
    /// Panics if `period` is empty.
    pub fn new(mut pre: Vec<Digit>, mut period: Vec<Digit>) -> Tail {
        assert!(!period.is_empty(), "tail period must be non-empty");
        let p = primitive_len(&period);
        period.truncate(p);
        while let (Some(&a), Some(&b)) = (pre.last(), period.last()) {
            if a != b {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        Tail { pre, period }
    }

    pub fn zero() -> Tail {
        Tail {
            pre: Vec::new(),
            period: vec![0],
        }
    }

    pub fn pre(&self) -> &[Digit] {
        &self.pre
    }

    pub fn period(&self) -> &[Digit] {
        &self.period
    }

    pub fn is_zero(&self) -> bool {
        self.pre.is_empty() && self.period == [0]
    }

    /// True when the word has no preperiod, i.e. it is invariant under some
    /// shift.
    pub fn is_purely_periodic(&self) -> bool {
        self.pre.is_empty()
    }

    /// The `k`-th digit (0-based).
    pub fn digit(&self, k: usize) -> Digit {
        if k < self.pre.len() {
            self.pre[k]
        } else {
            self.period[(k - self.pre.len()) % self.period.len()]
        }
    }

    /// The suffix starting at index `k`.
    pub fn skip(&self, k: usize) -> Tail {
        if k <= self.pre.len() {
            Tail::new(self.pre[k..].to_vec(), self.period.clone())
        } else {
            let mut period = self.period.clone();
            let r = (k - self.pre.len()) % period.len();
            period.rotate_left(r);
            Tail::new(Vec::new(), period)
        }
    }

    /// The word `digits` followed by `self`.
    pub fn prepend(&self, digits: &[Digit]) -> Tail {
        let mut pre = digits.to_vec();
        pre.extend_from_slice(&self.pre);
        Tail::new(pre, self.period.clone())
    }

    /// Number of leading zero digits, or `None` for the all-zero word.
    pub fn leading_zeros(&self) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        (0..self.pre.len() + self.period.len()).find(|&k| self.digit(k) != 0)
    }

    /// Index just past the preperiod plus one full period; every digit from
    /// here on repeats one already seen.
    pub fn window(&self) -> usize {
        self.pre.len() + self.period.len()
    }

    pub(crate) fn max_digit(&self) -> Digit {
        self.pre
            .iter()
            .chain(&self.period)
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Renders the word as `pre(period)` using the textual digit encoding for
    /// base `n_parts`.
    pub fn format(&self, n_parts: u32) -> String {
        format!(
            "{}({})",
            format_digits(&self.pre, n_parts),
            format_digits(&self.period, n_parts)
        )
    }

    /// Parses `pre(period)`.
    pub fn parse(text: &str, n_parts: u32) -> Result<Tail> {
        let malformed = |reason: &str| Error::MalformedLiteral {
            literal: text.to_string(),
            reason: reason.to_string(),
        };
        let open = text
            .find('(')
            .ok_or_else(|| malformed("missing \"(\" before the period"))?;
        let inner = text[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| malformed("period must be closed by a final \")\""))?;
        if inner.is_empty() {
            return Err(malformed("empty period"));
        }
        let pre_text = &text[..open];
        let pre = if pre_text.is_empty() {
            Vec::new()
        } else {
            parse_digits(pre_text, n_parts).map_err(|e| relabel(e, text))?
        };
        let period = parse_digits(inner, n_parts).map_err(|e| relabel(e, text))?;
        Ok(Tail::new(pre, period))
    }
}

/// Lexicographic order of the infinite digit sequences.
impl Ord for Tail {
    fn cmp(&self, other: &Self) -> Ordering {
        let span = self.pre.len().max(other.pre.len()) + lcm(self.period.len(), other.period.len());
        (0..span)
            .map(|k| self.digit(k).cmp(&other.digit(k)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for Tail {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(display_base(self.max_digit())))
    }
}

/// An element of the N-parts numbers.
///
/// Normal form: no leading zeros in the integer part (an empty integer part
/// means 0) and a normalized [`Tail`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Address {
    int: Vec<Digit>,
    frac: Tail,
}

impl Address {
    /// Builds and normalizes an address from integer digits (most
    /// significant first) and a fractional tail.
    pub fn new(int: Vec<Digit>, frac: Tail) -> Address {
        let lead = int.iter().take_while(|&&d| d == 0).count();
        let int = if lead == 0 { int } else { int[lead..].to_vec() };
        Address { int, frac }
    }

    pub fn zero() -> Address {
        Address::new(Vec::new(), Tail::zero())
    }

    /// Shorthand for `Address::new(int, Tail::new(pre, period))`.
    pub fn from_digits(int: &[Digit], pre: &[Digit], period: &[Digit]) -> Address {
        Address::new(int.to_vec(), Tail::new(pre.to_vec(), period.to_vec()))
    }

    pub fn int_digits(&self) -> &[Digit] {
        &self.int
    }

    pub fn frac(&self) -> &Tail {
        &self.frac
    }

    pub fn is_zero(&self) -> bool {
        self.int.is_empty() && self.frac.is_zero()
    }

    /// The digit `p_position`.
    pub fn digit_at(&self, position: i64) -> Digit {
        if position >= 0 {
            let pos = position as usize;
            if pos < self.int.len() {
                self.int[self.int.len() - 1 - pos]
            } else {
                0
            }
        } else {
            self.frac.digit((-position - 1) as usize)
        }
    }

    /// Highest position holding a non-zero digit, `None` for the zero address.
    pub fn top_position(&self) -> Option<i64> {
        if !self.int.is_empty() {
            Some(self.int.len() as i64 - 1)
        } else {
            self.frac.leading_zeros().map(|z| -(z as i64) - 1)
        }
    }

    /// Multiplication by `N^k`: every digit moves up `k` places.
    pub fn scale(&self, k: i64) -> Address {
        if k >= 0 {
            let k = k as usize;
            let mut int = self.int.clone();
            int.extend((0..k).map(|i| self.frac.digit(i)));
            Address::new(int, self.frac.skip(k))
        } else {
            let m = (-k) as usize;
            let mut padded = vec![0; m.saturating_sub(self.int.len())];
            padded.extend_from_slice(&self.int);
            let split = padded.len() - m;
            let frac = self.frac.prepend(&padded[split..]);
            padded.truncate(split);
            Address::new(padded, frac)
        }
    }

    /// The digits at positions `position, position-1, ...` as a word.
    pub fn tail_from(&self, position: i64) -> Tail {
        self.scale(-(position + 1)).frac
    }

    /// The digits strictly above `position`, with everything at or below it
    /// cleared.
    pub fn context_above(&self, position: i64) -> Address {
        let shifted = self.scale(-(position + 1));
        Address::new(shifted.int, Tail::zero()).scale(position + 1)
    }

    /// Replaces the digits at positions `position, position-1, ...` with
    /// `word`, keeping everything above.
    pub fn splice(&self, position: i64, word: &Tail) -> Address {
        let shifted = self.scale(-(position + 1));
        Address::new(shifted.int, word.clone()).scale(position + 1)
    }

    /// Value of the digit sequence read as a base-`n_parts` real number.
    pub fn eval<T: Scalar>(&self, n_parts: u32) -> T {
        let base = T::from_digit(n_parts);
        let mut int = T::zero();
        for &d in &self.int {
            int = int * base.clone() + T::from_digit(d);
        }
        let mut pre = T::zero();
        for &d in self.frac.pre() {
            pre = pre * base.clone() + T::from_digit(d);
        }
        let mut block = T::zero();
        for &d in self.frac.period() {
            block = block * base.clone() + T::from_digit(d);
        }
        let pre_scale = T::pow_u(&base, self.frac.pre().len());
        let period_scale = T::pow_u(&base, self.frac.period().len()) - T::one();
        int + (pre + block / period_scale) / pre_scale
    }

    /// Exact value as a big rational.
    pub fn eval_exact(&self, n_parts: u32) -> Exact {
        self.eval::<Exact>(n_parts)
    }

    /// Chart pair `(n, ω)` with `n` the position of the highest non-zero
    /// integer digit (0 if there is none) and `ω_k = p_{n-k}`.
    pub fn to_pair(&self) -> ChartPair {
        if self.int.is_empty() {
            ChartPair {
                n: 0,
                omega: self.frac.prepend(&[0]),
            }
        } else {
            ChartPair {
                n: self.int.len() as u64 - 1,
                omega: self.frac.prepend(&self.int),
            }
        }
    }

    /// Inverse chart map: `p_{n-k} = ω_k`, zero above `n`.
    pub fn from_pair(pair: &ChartPair) -> Address {
        let head = pair.n as usize + 1;
        let int = (0..head).map(|k| pair.omega.digit(k)).collect();
        Address::new(int, pair.omega.skip(head))
    }

    pub(crate) fn max_digit(&self) -> Digit {
        self.int
            .iter()
            .copied()
            .max()
            .unwrap_or(0)
            .max(self.frac.max_digit())
    }

    /// Checks every digit against `n_parts`.
    pub fn check_digits(&self, n_parts: u32) -> Result<()> {
        let digit = self.max_digit();
        if digit >= n_parts {
            Err(Error::DigitOutOfRange { digit, n_parts })
        } else {
            Ok(())
        }
    }

    /// Parses `int.pre(period)`.
    ///
    /// Digits are single characters `0-9a-z` when `n_parts <= 36`; above that
    /// they are decimal values separated by `:` (for example `12:0:7.(3:1)`).
    pub fn parse(text: &str, n_parts: u32) -> Result<Address> {
        let malformed = |reason: &str| Error::MalformedLiteral {
            literal: text.to_string(),
            reason: reason.to_string(),
        };
        if n_parts < 2 {
            return Err(Error::InvalidPartCount(n_parts));
        }
        let (int_text, frac_text) = text
            .split_once('.')
            .ok_or_else(|| malformed("missing \".\""))?;
        if int_text.is_empty() {
            return Err(malformed("empty integer part"));
        }
        if int_text.contains(['(', ')']) {
            return Err(malformed(
                "integer parts are finite and cannot hold a period",
            ));
        }
        if frac_text.contains('.') {
            return Err(malformed("more than one \".\""));
        }
        let int = parse_digits(int_text, n_parts).map_err(|e| relabel(e, text))?;
        let frac = Tail::parse(frac_text, n_parts).map_err(|e| relabel(e, text))?;
        Ok(Address::new(int, frac))
    }

    /// Renders the address in the textual encoding for base `n_parts`.
    pub fn format(&self, n_parts: u32) -> String {
        let int = if self.int.is_empty() {
            "0".to_string()
        } else {
            format_digits(&self.int, n_parts)
        };
        format!("{int}.{}", self.frac.format(n_parts))
    }
}

/// Ordering used for class representatives: integer part length, then the
/// integer digits, then the tail.
impl Ord for Address {
    fn cmp(&self, other: &Self) -> Ordering {
        self.int
            .len()
            .cmp(&other.int.len())
            .then_with(|| self.int.cmp(&other.int))
            .then_with(|| self.frac.cmp(&other.frac))
    }
}

impl PartialOrd for Address {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Uses single-character digits when every digit fits, otherwise the
/// colon-separated form. Use [`Address::format`] when the base is known.
impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(display_base(self.max_digit())))
    }
}

/// A chart coordinate `(n, ω)`: a level index and a right-infinite word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChartPair {
    pub n: u64,
    pub omega: Tail,
}

impl ChartPair {
    pub fn new(n: u64, omega: Tail) -> ChartPair {
        ChartPair { n, omega }
    }

    pub fn format(&self, n_parts: u32) -> String {
        format!("({}, {})", self.n, self.omega.format(n_parts))
    }
}

impl fmt::Display for ChartPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.omega)
    }
}

fn display_base(max_digit: Digit) -> u32 {
    if max_digit < 36 {
        36
    } else {
        max_digit + 1
    }
}

fn relabel(e: Error, literal: &str) -> Error {
    match e {
        Error::MalformedLiteral { reason, .. } => Error::MalformedLiteral {
            literal: literal.to_string(),
            reason,
        },
        other => other,
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn primitive_len(period: &[Digit]) -> usize {
    let len = period.len();
    (1..=len)
        .find(|&p| len.is_multiple_of(p) && period.chunks(p).all(|c| c == &period[..p]))
        .unwrap_or(len)
}

/// Renders a digit word in the textual encoding for base `n_parts`.
pub fn format_digits(digits: &[Digit], n_parts: u32) -> String {
    if n_parts <= 36 {
        digits
            .iter()
            .map(|&d| char::from_digit(d, 36).unwrap_or('?'))
            .collect()
    } else {
        digits
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(":")
    }
}

/// Parses a non-empty digit word in the textual encoding for base `n_parts`.
pub fn parse_digits(text: &str, n_parts: u32) -> Result<Vec<Digit>> {
    let malformed = |reason: String| Error::MalformedLiteral {
        literal: text.to_string(),
        reason,
    };
    if text.is_empty() {
        return Err(malformed("empty digit sequence".into()));
    }
    let digits: Vec<Digit> = if n_parts <= 36 {
        text.chars()
            .map(|c| match c {
                '0'..='9' | 'a'..='z' => Ok(c.to_digit(36).unwrap_or(0)),
                _ => Err(malformed(format!("invalid digit character {c:?}"))),
            })
            .collect::<Result<_>>()?
    } else {
        text.split(':')
            .map(|part| {
                if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(malformed(format!("invalid digit {part:?}")));
                }
                part.parse::<Digit>()
                    .map_err(|_| malformed(format!("digit {part:?} too large")))
            })
            .collect::<Result<_>>()?
    };
    if let Some(&digit) = digits.iter().find(|&&d| d >= n_parts) {
        return Err(Error::DigitOutOfRange { digit, n_parts });
    }
    Ok(digits)
}

/// Exact value helper for tests and the CLI: `num / den` as a rational.
pub fn ratio(num: i64, den: i64) -> Exact {
    Exact::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: u32) -> Address {
        Address::parse(text, n).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("1.(0)", 2), Address::from_digits(&[1], &[], &[0]));
        assert_eq!(p("0.(9)", 10), Address::from_digits(&[], &[], &[9]));
        let a = p("12.03(21)", 10);
        assert_eq!(a.int_digits(), &[1, 2]);
        assert_eq!(a.frac().pre(), &[0, 3]);
        assert_eq!(a.frac().period(), &[2, 1]);
        let b = p("0.2(2)", 3);
        assert_eq!(b, Address::from_digits(&[], &[], &[2]));
    }

    #[test]
    fn normalization_agrees_with_raw_digits() {
        // unnormalized 0.2(2): digits -1..-6 are all 2
        let b = p("0.2(2)", 3);
        for pos in -6..=-1 {
            assert_eq!(b.digit_at(pos), 2);
        }
        let c = p("00.12(1212)", 3);
        assert_eq!(c.format(3), "0.(12)");
        let d = p("0.1(01)", 2);
        assert_eq!(d.format(2), "0.(10)");
    }

    #[test]
    fn format_examples() {
        assert_eq!(Address::from_digits(&[1], &[], &[0]).format(2), "1.(0)");
        assert_eq!(Address::from_digits(&[], &[], &[9]).format(10), "0.(9)");
        assert_eq!(
            Address::from_digits(&[1, 2], &[0, 3], &[2, 1]).format(10),
            "12.03(21)"
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Address::parse("0.(3)", 3),
            Err(Error::DigitOutOfRange {
                digit: 3,
                n_parts: 3
            })
        ));
        for bad in [
            "0.()", "(1).(0)", "1.0", ".(0)", "1.(0", "1.(0)x", "1.2.(0)", "1 .(0)", "A.(0)", "",
        ] {
            assert!(
                matches!(Address::parse(bad, 10), Err(Error::MalformedLiteral { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn wide_base_literals() {
        let a = p("12:0:7.5(3:39)", 40);
        assert_eq!(a.int_digits(), &[12, 0, 7]);
        assert_eq!(a.frac().pre(), &[5]);
        assert_eq!(a.frac().period(), &[3, 39]);
        assert_eq!(a.format(40), "12:0:7.5(3:39)");
        assert!(matches!(
            Address::parse("40.(0)", 40),
            Err(Error::DigitOutOfRange { digit: 40, .. })
        ));
        assert!(Address::parse("1::2.(0)", 40).is_err());
    }

    #[test]
    fn digit_at_examples() {
        let a = p("12.03(21)", 10);
        assert_eq!(a.digit_at(1), 1);
        // tail 0,3,2,1,2,1,...
        assert_eq!(a.digit_at(-4), 1);
        assert_eq!(a.digit_at(-3), 2);
        assert_eq!(p("1.(0)", 2).digit_at(57), 0);
    }

    #[test]
    fn scale_examples() {
        assert_eq!(p("1.(0)", 2).scale(1).format(2), "10.(0)");
        assert_eq!(p("0.(9)", 10).scale(-1).format(10), "0.0(9)");
        let a = p("0.(21)", 3);
        let s = a.scale(2);
        assert_eq!(s.format(3), "21.(21)");
        for i in -6..=6 {
            assert_eq!(s.digit_at(i), a.digit_at(i - 2));
        }
        assert_eq!(p("1.(0)", 2).scale(-2).format(2), "0.01(0)");
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p("0.(9)", 10).eval_exact(10), ratio(1, 1));
        assert_eq!(p("1.(0)", 2).eval_exact(2), ratio(1, 1));
        assert_eq!(p("0.(01)", 2).eval_exact(2), ratio(1, 3));
        assert_eq!(p("12.03(21)", 10).eval_exact(10), ratio(119_118, 9_900));
        assert!((p("0.(01)", 2).eval::<f64>(2) - 1.0 / 3.0).abs() < 1e-12);
        assert!((p("0.(01)", 2).eval::<f32>(2) - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn chart_pair_examples() {
        let pair = p("0.012(0)", 3).to_pair();
        assert_eq!(pair.n, 0);
        assert_eq!(pair.omega, Tail::parse("0012(0)", 3).unwrap());

        let pair = p("120.(0)", 3).to_pair();
        assert_eq!(pair, ChartPair::new(2, Tail::parse("120(0)", 3).unwrap()));
        assert_eq!(pair.format(3), "(2, 12(0))");

        let pair = p("2.0(12)", 3).to_pair();
        assert_eq!(pair, ChartPair::new(0, Tail::parse("20(12)", 3).unwrap()));
        let a = p("2.0(12)", 3);
        for k in 0..=8u64 {
            assert_eq!(
                pair.omega.digit(k as usize),
                a.digit_at(pair.n as i64 - k as i64)
            );
        }

        let back = Address::from_pair(&ChartPair::new(2, Tail::parse("120(0)", 3).unwrap()));
        assert_eq!(back.format(3), "120.(0)");
        let back = Address::from_pair(&ChartPair::new(0, Tail::parse("0012(0)", 3).unwrap()));
        assert_eq!(back.format(3), "0.012(0)");
    }

    #[test]
    fn chart_map_is_not_invertible() {
        // p_3 = 0, p_2 = 0, p_1 = 1, p_0 = 0
        let pair = ChartPair::new(3, Tail::parse("0010(0)", 3).unwrap());
        let a = Address::from_pair(&pair);
        assert_eq!(a.format(3), "10.(0)");
        let again = a.to_pair();
        assert_eq!(again, ChartPair::new(1, Tail::parse("10(0)", 3).unwrap()));
        assert_ne!(again, pair);
    }

    #[test]
    fn splice_and_context() {
        let a = p("12.(9)", 10);
        assert_eq!(a.tail_from(0).format(10), "2(9)");
        assert_eq!(a.context_above(0).format(10), "10.(0)");
        let b = a.splice(0, &Tail::parse("3(0)", 10).unwrap());
        assert_eq!(b.format(10), "13.(0)");
    }

    #[test]
    fn ordering_puts_short_integer_parts_first() {
        let mut v = [
            p("1.(0)", 10),
            p("0.(9)", 10),
            p("10.(0)", 10),
            p("0.1(0)", 10),
        ];
        v.sort();
        let s: Vec<_> = v.iter().map(|a| a.format(10)).collect();
        assert_eq!(s, ["0.1(0)", "0.(9)", "1.(0)", "10.(0)"]);
    }
}
