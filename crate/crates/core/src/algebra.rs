//! Imposition: digit-fill of one address by another, lifted to equivalence
//! classes.
//!
//! Scaling is [`Address::scale`]; it is re-exported here as [`scale`] for
//! symmetry with [`impose`].

use std::collections::BTreeMap;

use crate::address::{lcm, Address, Tail};
use crate::engine::{EquivalenceClass, RuleEngine};
use crate::error::Result;

/// `N^k · a`.
pub fn scale(a: &Address, k: i64) -> Address {
    a.scale(k)
}

/// Result of `a ⊲ b`: every raw digit-fill over the two classes, and those
/// results grouped by equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImposedSet {
    /// Sorted, deduplicated.
    pub raw: Vec<Address>,
    /// Sorted by representative.
    pub classes: Vec<EquivalenceClass>,
}

impl ImposedSet {
    pub fn representatives(&self) -> Vec<&Address> {
        self.classes.iter().map(|c| c.representative()).collect()
    }
}

/// The address whose digit at each position is `a`'s when non-zero and `b`'s
/// otherwise.
///
/// Computed on normal forms: the result's period spans `lcm` of both periods
/// after the longer preperiod, so the infinite per-position fill terminates.
pub fn impose_member(a: &Address, b: &Address) -> Address {
    let fill = |x: u32, y: u32| if x != 0 { x } else { y };

    let width = a.int_digits().len().max(b.int_digits().len());
    let int = (0..width)
        .rev()
        .map(|pos| fill(a.digit_at(pos as i64), b.digit_at(pos as i64)))
        .collect();

    let (ta, tb) = (a.frac(), b.frac());
    let pre_len = ta.pre().len().max(tb.pre().len());
    let period_len = lcm(ta.period().len(), tb.period().len());
    let digits: Vec<u32> = (0..pre_len + period_len)
        .map(|k| fill(ta.digit(k), tb.digit(k)))
        .collect();
    let (pre, period) = digits.split_at(pre_len);
    Address::new(int, Tail::new(pre.to_vec(), period.to_vec()))
}

/// `a ⊲ b` over the classes of `a` and `b` as found by `engine`.
pub fn impose(a: &Address, b: &Address, engine: &RuleEngine<'_>) -> Result<ImposedSet> {
    let class_a = engine.class_members(a)?;
    let class_b = engine.class_members(b)?;
    let mut raw: Vec<Address> = class_a
        .members()
        .iter()
        .flat_map(|x| class_b.members().iter().map(move |y| impose_member(x, y)))
        .collect();
    raw.sort();
    raw.dedup();

    let mut classes: BTreeMap<Address, EquivalenceClass> = BTreeMap::new();
    for r in &raw {
        if classes.values().any(|c| c.contains(r)) {
            continue;
        }
        let class = engine.class_members(r)?;
        classes.insert(class.representative().clone(), class);
    }
    Ok(ImposedSet {
        raw,
        classes: classes.into_values().collect(),
    })
}
