//! Deciding the equivalence generated by a space's connectivity rules.
//!
//! A rule `α ∼ β` applies to an address at any scale `k` under any finite
//! context: if the digits of `a` at positions `k, k-1, ...` spell `α`, they may
//! be replaced by `β` while every digit above `k` stays put. Equivalence
//! classes are the closure of these one-step rewrites.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::address::{Address, Tail};
use crate::error::{Error, Result};
use crate::rules::SpaceSpec;

pub const DEFAULT_DEPTH: usize = 8;
pub const DEFAULT_CLASS_CAP: usize = 4096;

/// Outcome of an equivalence query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Equivalence {
    /// Identical normal forms.
    Equal,
    /// Distinct addresses joined by a chain of rule applications.
    Equivalent,
    /// No chain was found within the depth budget.
    NotFoundUpToDepth,
}

impl Equivalence {
    pub fn holds(self) -> bool {
        !matches!(self, Equivalence::NotFoundUpToDepth)
    }
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equivalence::Equal => "Equal",
            Equivalence::Equivalent => "Equivalent",
            Equivalence::NotFoundUpToDepth => "NotFoundUpToDepth",
        })
    }
}

/// The members of an equivalence class reached from a starting address.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquivalenceClass {
    members: Vec<Address>,
    saturated: bool,
}

impl EquivalenceClass {
    /// Sorted members; the first is the representative.
    pub fn members(&self) -> &[Address] {
        &self.members
    }

    /// Least member in [`Address`] order.
    pub fn representative(&self) -> &Address {
        &self.members[0]
    }

    /// True when the closure reached a fixpoint, so the class is complete.
    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn contains(&self, a: &Address) -> bool {
        self.members.binary_search(a).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Pattern of one directed rule application: replace `from` by `to`.
#[derive(Clone, Debug)]
struct Rewrite {
    from: Tail,
    to: Tail,
    leading_zeros: usize,
}

/// Equivalence queries against one space, with depth and size budgets.
#[derive(Clone, Debug)]
pub struct RuleEngine<'s> {
    spec: &'s SpaceSpec,
    rewrites: Vec<Rewrite>,
    max_leading_zeros: usize,
    depth: usize,
    class_cap: usize,
}

impl<'s> RuleEngine<'s> {
    pub fn new(spec: &'s SpaceSpec) -> RuleEngine<'s> {
        let rewrites: Vec<Rewrite> = spec
            .identifying_rules()
            .flat_map(|r| {
                let (l, r) = (r.left().word(), r.right().word());
                [(l.clone(), r.clone()), (r, l)]
            })
            .map(|(from, to)| Rewrite {
                leading_zeros: from.leading_zeros().expect("canonical sides are non-zero"),
                from,
                to,
            })
            .collect();
        let max_leading_zeros = rewrites.iter().map(|r| r.leading_zeros).max().unwrap_or(0);
        RuleEngine {
            spec,
            rewrites,
            max_leading_zeros,
            depth: DEFAULT_DEPTH,
            class_cap: DEFAULT_CLASS_CAP,
        }
    }

    pub fn with_depth(mut self, depth: usize) -> RuleEngine<'s> {
        self.depth = depth;
        self
    }

    pub fn with_class_cap(mut self, cap: usize) -> RuleEngine<'s> {
        self.class_cap = cap;
        self
    }

    pub fn spec(&self) -> &'s SpaceSpec {
        self.spec
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn class_cap(&self) -> usize {
        self.class_cap
    }

    /// All addresses one rule application away from `a`, sorted.
    ///
    /// Only finitely many scales can match: a canonical side is never purely
    /// periodic, so it cannot match inside the periodic part of `a`'s tail,
    /// and it has finitely many leading zeros, so it cannot match far above
    /// `a`'s integer part.
    pub fn one_step(&self, a: &Address) -> Vec<Address> {
        let mut out = BTreeSet::new();
        if self.rewrites.is_empty() {
            return Vec::new();
        }
        let lo = -(a.frac().pre().len() as i64) - 1;
        let hi = a.int_digits().len() as i64 + self.max_leading_zeros as i64;
        for k in lo..=hi {
            let here = a.tail_from(k);
            for rw in &self.rewrites {
                if here == rw.from {
                    out.insert(a.splice(k, &rw.to));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Breadth-first closure of [`one_step`](Self::one_step) from `a`, up to
    /// `depth` rewrite applications.
    pub fn class_members(&self, a: &Address) -> Result<EquivalenceClass> {
        self.explore(a, None).map(|(class, _)| class)
    }

    /// Representative of `a`'s class.
    pub fn representative(&self, a: &Address) -> Result<Address> {
        Ok(self.class_members(a)?.members.swap_remove(0))
    }

    pub fn equivalent(&self, a: &Address, b: &Address) -> Result<Equivalence> {
        if a == b {
            return Ok(Equivalence::Equal);
        }
        if self.depth == 0 {
            return Err(Error::ZeroDepth);
        }
        let class = self.class_members(a)?;
        Ok(if class.contains(b) {
            Equivalence::Equivalent
        } else {
            Equivalence::NotFoundUpToDepth
        })
    }

    /// A shortest rewrite chain from `a` to `b`, both endpoints included.
    pub fn witness(&self, a: &Address, b: &Address) -> Result<Option<Vec<Address>>> {
        if a == b {
            return Ok(Some(vec![a.clone()]));
        }
        let (_, parents) = self.explore(a, Some(b))?;
        if !parents.contains_key(b) {
            return Ok(None);
        }
        let mut chain = vec![b.clone()];
        let mut cur = b;
        while let Some(Some(prev)) = parents.get(cur) {
            chain.push(prev.clone());
            cur = prev;
        }
        chain.reverse();
        Ok(Some(chain))
    }

    fn explore(
        &self,
        start: &Address,
        target: Option<&Address>,
    ) -> Result<(EquivalenceClass, HashMap<Address, Option<Address>>)> {
        if self.depth == 0 {
            return Err(Error::ZeroDepth);
        }
        let mut parents: HashMap<Address, Option<Address>> = HashMap::new();
        parents.insert(start.clone(), None);
        let mut frontier = VecDeque::from([start.clone()]);
        let mut saturated = false;
        'levels: for _ in 0..self.depth {
            let mut next = VecDeque::new();
            for a in &frontier {
                for b in self.one_step(a) {
                    if parents.contains_key(&b) {
                        continue;
                    }
                    parents.insert(b.clone(), Some(a.clone()));
                    if parents.len() > self.class_cap {
                        return Err(Error::ClassBudgetExceeded {
                            cap: self.class_cap,
                        });
                    }
                    if target == Some(&b) {
                        next.clear();
                        frontier.clear();
                        break 'levels;
                    }
                    next.push_back(b);
                }
            }
            if next.is_empty() {
                saturated = true;
                break;
            }
            frontier = next;
        }
        if !saturated && !frontier.is_empty() {
            // one more expansion tells whether the last level was already closed
            saturated = frontier
                .iter()
                .all(|a| self.one_step(a).iter().all(|b| parents.contains_key(b)));
        }
        let mut members: Vec<Address> = parents.keys().cloned().collect();
        members.sort();
        Ok((EquivalenceClass { members, saturated }, parents))
    }
}
