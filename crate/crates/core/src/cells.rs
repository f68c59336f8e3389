//! Cells (digit-prefix intervals), their vertex sets and adjacency.

use std::collections::BTreeMap;
use std::fmt;

use crate::address::{format_digits, Address, Digit, Tail};
use crate::engine::{Equivalence, EquivalenceClass, RuleEngine};
use crate::error::{Error, Result};

/// The cell `N^k · [A.(0), A.(N-1))` read as a digit-prefix set: every
/// address whose digits at positions `k + len - 1 .. k` spell `word` and which
/// is zero above.
///
/// The last digit of `word` sits at position `scale`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    word: Vec<Digit>,
    scale: i64,
}

impl Cell {
    pub fn new(word: Vec<Digit>, scale: i64) -> Result<Cell> {
        if word.is_empty() {
            return Err(Error::EmptyCellWord);
        }
        Ok(Cell { word, scale })
    }

    pub fn word(&self) -> &[Digit] {
        &self.word
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn last_digit(&self) -> Digit {
        *self.word.last().expect("non-empty word")
    }

    /// Position of the first (most significant) word digit.
    pub fn top_position(&self) -> i64 {
        self.scale + self.word.len() as i64 - 1
    }

    /// Whether `a` itself (not its class) matches the digit-prefix pattern.
    pub fn matches(&self, a: &Address) -> bool {
        let len = self.word.len();
        let shifted = a.scale(-self.scale);
        shifted.int_digits().len() <= len
            && self
                .word
                .iter()
                .enumerate()
                .all(|(j, &d)| shifted.digit_at((len - 1 - j) as i64) == d)
    }

    /// Membership up to equivalence: some member of `a`'s class matches.
    pub fn contains(&self, a: &Address, engine: &RuleEngine<'_>) -> Result<bool> {
        if self.matches(a) {
            return Ok(true);
        }
        Ok(engine
            .class_members(a)?
            .members()
            .iter()
            .any(|m| self.matches(m)))
    }

    /// The `N` children `word ++ d` one scale down.
    pub fn subdivide(&self, n_parts: u32) -> Vec<Cell> {
        (0..n_parts)
            .map(|d| {
                let mut word = self.word.clone();
                word.push(d);
                Cell {
                    word,
                    scale: self.scale - 1,
                }
            })
            .collect()
    }

    /// All `N^level` descendants `level` subdivisions down, in word order.
    pub fn descendants(&self, n_parts: u32, level: u32) -> Vec<Cell> {
        let mut cells = vec![self.clone()];
        for _ in 0..level {
            cells = cells.iter().flat_map(|c| c.subdivide(n_parts)).collect();
        }
        cells
    }

    /// The word followed by `tail`, placed at this cell's scale.
    pub fn point(&self, tail: &Tail) -> Address {
        Address::new(self.word.clone(), tail.clone()).scale(self.scale)
    }

    /// Boundary points: every rule side whose digit equals the cell's last
    /// digit, appended to the cell word. One class per distinct point,
    /// sorted by representative.
    pub fn vertex_set(&self, engine: &RuleEngine<'_>) -> Result<Vec<EquivalenceClass>> {
        let last = self.last_digit();
        let mut classes: BTreeMap<Address, EquivalenceClass> = BTreeMap::new();
        for side in engine.spec().sides() {
            if side.digit != last {
                continue;
            }
            let p = self.point(&side.tail);
            if classes.values().any(|c| c.contains(&p)) {
                continue;
            }
            let class = engine.class_members(&p)?;
            classes.insert(class.representative().clone(), class);
        }
        Ok(classes.into_values().collect())
    }

    /// Whether two distinct cells of the same size share a vertex class.
    pub fn adjacent(&self, other: &Cell, engine: &RuleEngine<'_>) -> Result<bool> {
        if self.scale != other.scale || self.word.len() != other.word.len() {
            return Err(Error::ScaleMismatch);
        }
        if self == other {
            return Err(Error::IdenticalCells);
        }
        let mine = self.vertex_set(engine)?;
        let theirs = other.vertex_set(engine)?;
        Ok(mine.iter().any(|c| {
            theirs
                .iter()
                .any(|t| t.representative() == c.representative())
        }))
    }

    pub fn format(&self, n_parts: u32) -> String {
        format!("{}@{}", format_digits(&self.word, n_parts), self.scale)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max = self.word.iter().copied().max().unwrap_or(0);
        f.write_str(&self.format(if max < 36 { 36 } else { max + 1 }))
    }
}

/// How a top-level part connects to the rest of the space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartClass {
    /// Joined to part 0 by the edge rule `0.(i) ∼ i.(0)`.
    EdgePart,
    /// Touched by some identifying rule, but not an edge part.
    MiddlingPart,
    /// No identifying rule touches it.
    IsolatedPart,
}

impl fmt::Display for PartClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartClass::EdgePart => "EdgePart",
            PartClass::MiddlingPart => "MiddlingPart",
            PartClass::IsolatedPart => "IsolatedPart",
        })
    }
}

fn edge_rule_holds(i: Digit, engine: &RuleEngine<'_>) -> Result<bool> {
    let inner = Address::new(Vec::new(), Tail::new(Vec::new(), vec![i]));
    let outer = Address::new(vec![i], Tail::zero());
    Ok(engine.equivalent(&inner, &outer)? == Equivalence::Equivalent)
}

/// Classifies part `i`.
///
/// For `i > 0` the part is an edge part when `0.(i) ∼ i.(0)`. For part 0 that
/// rule degenerates to `0.(0) = 0.(0)`, so part 0 counts as an edge part when
/// it is the other end of some edge rule.
pub fn classify_part(i: Digit, engine: &RuleEngine<'_>) -> Result<PartClass> {
    let n = engine.spec().n_parts();
    if i >= n {
        return Err(Error::DigitOutOfRange {
            digit: i,
            n_parts: n,
        });
    }
    let edge = if i == 0 {
        let mut any = false;
        for j in 1..n {
            if edge_rule_holds(j, engine)? {
                any = true;
                break;
            }
        }
        any
    } else {
        edge_rule_holds(i, engine)?
    };
    if edge {
        return Ok(PartClass::EdgePart);
    }
    let touched = engine
        .spec()
        .identifying_rules()
        .any(|r| r.sides().iter().any(|s| s.digit == i));
    Ok(if touched {
        PartClass::MiddlingPart
    } else {
        PartClass::IsolatedPart
    })
}
