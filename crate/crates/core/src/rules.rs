//! Connectivity rules and nested-space declarations.

use std::fmt;

use crate::address::{Address, Digit, Tail};
use crate::error::{Error, Result};

/// One side of a canonical rule: a single integer digit (the part it lives
/// in) followed by a fractional tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleSide {
    pub digit: Digit,
    pub tail: Tail,
}

impl RuleSide {
    pub fn new(digit: Digit, tail: Tail) -> RuleSide {
        RuleSide { digit, tail }
    }

    /// Fails unless every digit at positions >= 1 is zero.
    pub fn from_address(a: &Address) -> Option<RuleSide> {
        match a.int_digits() {
            [] => Some(RuleSide::new(0, a.frac().clone())),
            [d] => Some(RuleSide::new(*d, a.frac().clone())),
            _ => None,
        }
    }

    pub fn to_address(&self) -> Address {
        Address::new(vec![self.digit], self.tail.clone())
    }

    /// The digit sequence read from position 0 downward.
    pub fn word(&self) -> Tail {
        self.tail.prepend(&[self.digit])
    }

    pub fn format(&self, n_parts: u32) -> String {
        self.to_address().format(n_parts)
    }
}

impl fmt::Display for RuleSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_address().fmt(f)
    }
}

/// A canonical connectivity rule `left ∼ right`, stored with `left <= right`.
///
/// When `left == right` the rule is reflexive: it identifies nothing and only
/// declares `left` as a boundary point (corner) of its part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnectivityRule {
    left: RuleSide,
    right: RuleSide,
}

impl ConnectivityRule {
    pub fn left(&self) -> &RuleSide {
        &self.left
    }

    pub fn right(&self) -> &RuleSide {
        &self.right
    }

    pub fn is_reflexive(&self) -> bool {
        self.left == self.right
    }

    pub fn sides(&self) -> [&RuleSide; 2] {
        [&self.left, &self.right]
    }

    pub fn format(&self, n_parts: u32) -> String {
        format!(
            "{} ∼ {}",
            self.left.format(n_parts),
            self.right.format(n_parts)
        )
    }
}

/// Brings a raw pair of addresses into canonical rule form.
///
/// A non-reflexive pair is shifted by the largest common `k` that leaves every
/// digit at positions >= 1 zero on both sides, so pairs differing only by a
/// common scale produce the same rule. A reflexive pair (a corner) is kept at
/// its literal scale, which must already have a single integer digit.
pub fn canonicalize_rule(
    raw_left: &Address,
    raw_right: &Address,
    n_parts: u32,
) -> Result<ConnectivityRule> {
    raw_left.check_digits(n_parts)?;
    raw_right.check_digits(n_parts)?;
    let not_canonical = |reason: &str| Error::NotCanonicalizable {
        left: raw_left.format(n_parts),
        right: raw_right.format(n_parts),
        reason: reason.to_string(),
    };

    if raw_left == raw_right {
        let side = RuleSide::from_address(raw_left)
            .ok_or_else(|| not_canonical("a corner must have a single integer digit"))?;
        return Ok(ConnectivityRule {
            left: side.clone(),
            right: side,
        });
    }

    let top = raw_left
        .top_position()
        .into_iter()
        .chain(raw_right.top_position())
        .max()
        .unwrap_or(0);
    let shift = -top;
    let left = RuleSide::from_address(&raw_left.scale(shift)).expect("shifted below position 1");
    let right = RuleSide::from_address(&raw_right.scale(shift)).expect("shifted below position 1");

    for side in [&left, &right] {
        if side.word().is_purely_periodic() {
            return Err(Error::ScaleInvariantSide {
                side: side.format(n_parts),
            });
        }
    }
    if left.digit == right.digit {
        return Err(not_canonical(
            "both sides share the leading digit, so the pair is a context-prefixed \
             instance of a finer rule rather than a rule",
        ));
    }
    let (left, right) = if left <= right {
        (left, right)
    } else {
        (right, left)
    };
    Ok(ConnectivityRule { left, right })
}

/// A nested space: part count, connectivity rules and optional digit
/// restrictions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceSpec {
    name: String,
    n_parts: u32,
    rules: Vec<ConnectivityRule>,
    left_limit: Option<u32>,
    right_limit: Option<u32>,
}

impl SpaceSpec {
    pub fn new(name: impl Into<String>, n_parts: u32) -> Result<SpaceSpec> {
        if n_parts < 2 {
            return Err(Error::InvalidPartCount(n_parts));
        }
        Ok(SpaceSpec {
            name: name.into(),
            n_parts,
            rules: Vec::new(),
            left_limit: None,
            right_limit: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_parts(&self) -> u32 {
        self.n_parts
    }

    /// All rules, reflexive ones included, in canonical order.
    pub fn rules(&self) -> &[ConnectivityRule] {
        &self.rules
    }

    pub fn identifying_rules(&self) -> impl Iterator<Item = &ConnectivityRule> {
        self.rules.iter().filter(|r| !r.is_reflexive())
    }

    pub fn corners(&self) -> impl Iterator<Item = &RuleSide> {
        self.rules
            .iter()
            .filter(|r| r.is_reflexive())
            .map(|r| r.left())
    }

    /// Number of non-reflexive rules.
    pub fn rule_count(&self) -> usize {
        self.identifying_rules().count()
    }

    /// Every distinct rule side, sorted.
    pub fn sides(&self) -> Vec<&RuleSide> {
        let mut sides: Vec<&RuleSide> = self.rules.iter().flat_map(|r| r.sides()).collect();
        sides.sort();
        sides.dedup();
        sides
    }

    /// Maximum number of digits left of the point.
    pub fn left_limit(&self) -> Option<u32> {
        self.left_limit
    }

    /// Finest fractional position `-R` at which cells may be resolved.
    pub fn right_limit(&self) -> Option<u32> {
        self.right_limit
    }

    /// Canonicalizes and inserts a rule. Returns `false` when an identical
    /// rule (modulo scaling and side order) was already present.
    pub fn add_rule(&mut self, left: &Address, right: &Address) -> Result<bool> {
        let rule = canonicalize_rule(left, right, self.n_parts)?;
        Ok(self.insert(rule))
    }

    /// Declares a boundary point of a part as a reflexive rule.
    pub fn add_corner(&mut self, corner: &Address) -> Result<bool> {
        self.add_rule(corner, corner)
    }

    pub fn insert(&mut self, rule: ConnectivityRule) -> bool {
        match self.rules.binary_search(&rule) {
            Ok(_) => false,
            Err(at) => {
                self.rules.insert(at, rule);
                true
            }
        }
    }

    pub fn set_left_limit(&mut self, limit: Option<u32>) {
        self.left_limit = limit;
    }

    pub fn set_right_limit(&mut self, limit: Option<u32>) {
        self.right_limit = limit;
    }

    pub fn with_left_limit(mut self, limit: u32) -> SpaceSpec {
        self.left_limit = Some(limit);
        self
    }

    pub fn with_right_limit(mut self, limit: u32) -> SpaceSpec {
        self.right_limit = Some(limit);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> SpaceSpec {
        self.name = name.into();
        self
    }

    /// Whether `a` lies in the restricted sub-shift described by the limits.
    ///
    /// Under a left limit `K` only positions below `K` may be non-zero. Under
    /// a right limit `R` the digits below `-R` must either vanish or, read
    /// together with the digit at `-R`, form a declared rule side, so that the
    /// address is a vertex of an elementary cell.
    pub fn admits(&self, a: &Address) -> bool {
        if let Some(k) = self.left_limit {
            if a.int_digits().len() > k as usize {
                return false;
            }
        }
        if let Some(r) = self.right_limit {
            let bottom = -(r as i64);
            let below = a.tail_from(bottom - 1);
            if !below.is_zero() {
                let side = RuleSide::new(a.digit_at(bottom), below);
                if !self.rules.iter().any(|rule| rule.sides().contains(&&side)) {
                    return false;
                }
            }
        }
        true
    }

    /// Digit-range and restriction check for user-supplied addresses.
    pub fn check_address(&self, a: &Address) -> Result<()> {
        a.check_digits(self.n_parts)?;
        if self.admits(a) {
            Ok(())
        } else {
            Err(Error::AddressOutsideSpace {
                address: a.format(self.n_parts),
                space: self.name.clone(),
            })
        }
    }

    pub fn parse_address(&self, text: &str) -> Result<Address> {
        Address::parse(text, self.n_parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: u32) -> Address {
        Address::parse(text, n).unwrap()
    }

    #[test]
    fn canonicalize_shifts_to_common_scale() {
        let r = canonicalize_rule(&p("0.0(9)", 10), &p("0.1(0)", 10), 10).unwrap();
        assert_eq!(r.left().format(10), "0.(9)");
        assert_eq!(r.right().format(10), "1.(0)");
        let same = canonicalize_rule(&p("1.(0)", 10), &p("0.(9)", 10), 10).unwrap();
        assert_eq!(r, same);
        let scaled = canonicalize_rule(&p("9.(9)", 10).scale(3), &p("10.(0)", 10).scale(3), 10);
        assert_eq!(r, scaled.unwrap());
    }

    #[test]
    fn canonical_rule_is_fixed_point() {
        let r = canonicalize_rule(&p("0.(1)", 3), &p("1.(0)", 3), 3).unwrap();
        assert_eq!(r.left().format(3), "0.(1)");
        assert_eq!(r.right().format(3), "1.(0)");
        assert!(!r.is_reflexive());
    }

    #[test]
    fn context_prefixed_instance_is_rejected() {
        let e = canonicalize_rule(&p("20.(1)", 3), &p("21.(0)", 3), 3).unwrap_err();
        assert!(matches!(e, Error::NotCanonicalizable { .. }));
    }

    #[test]
    fn scale_invariant_sides_are_rejected() {
        let e = canonicalize_rule(&p("0.(0)", 2), &p("1.(1)", 2), 2).unwrap_err();
        assert!(matches!(e, Error::ScaleInvariantSide { .. }));
        let e = canonicalize_rule(&p("1.(01)", 2), &p("1.(1)", 2), 2).unwrap_err();
        assert!(matches!(e, Error::ScaleInvariantSide { .. }));
    }

    #[test]
    fn corners_keep_their_scale() {
        let r = canonicalize_rule(&p("0.(1)", 2), &p("0.(1)", 2), 2).unwrap();
        assert!(r.is_reflexive());
        assert_eq!(r.left().format(2), "0.(1)");
        let e = canonicalize_rule(&p("10.(1)", 2), &p("10.(1)", 2), 2).unwrap_err();
        assert!(matches!(e, Error::NotCanonicalizable { .. }));
    }

    #[test]
    fn digits_are_checked() {
        let e = canonicalize_rule(&p("0.(3)", 4), &p("1.(0)", 4), 3).unwrap_err();
        assert!(matches!(e, Error::DigitOutOfRange { digit: 3, .. }));
    }

    #[test]
    fn duplicates_collapse() {
        let mut s = SpaceSpec::new("t", 2).unwrap();
        assert!(s.add_rule(&p("0.(1)", 2), &p("1.(0)", 2)).unwrap());
        assert!(!s.add_rule(&p("0.1(0)", 2), &p("0.0(1)", 2)).unwrap());
        assert!(s.add_corner(&p("1.(1)", 2)).unwrap());
        assert_eq!(s.rules().len(), 2);
        assert_eq!(s.rule_count(), 1);
    }

    #[test]
    fn restrictions() {
        let mut s = SpaceSpec::new("t", 10).unwrap().with_left_limit(1);
        assert!(s.admits(&p("9.(9)", 10)));
        assert!(!s.admits(&p("10.(0)", 10)));
        s.set_left_limit(None);
        s.set_right_limit(Some(0));
        s.add_rule(&p("0.(9)", 10), &p("1.(0)", 10)).unwrap();
        assert!(s.admits(&p("1234.(0)", 10)));
        assert!(s.admits(&p("120.(9)", 10)));
        assert!(!s.admits(&p("12.(9)", 10)));
        assert!(!s.admits(&p("0.5(0)", 10)));
        assert!(matches!(
            s.check_address(&p("0.5(0)", 10)),
            Err(Error::AddressOutsideSpace { .. })
        ));
    }
}
