//! Nested fractal spaces: addresses over `N` parts, connectivity rules,
//! equivalence classes, imposition, cells and level graphs.
//!
//! ```
//! use nested_core::{builtin, Address, Equivalence, RuleEngine};
//!
//! let line = builtin("real_line").unwrap();
//! let engine = RuleEngine::new(&line);
//! let a = Address::parse("0.(9)", 10).unwrap();
//! let b = Address::parse("1.(0)", 10).unwrap();
//! assert_eq!(engine.equivalent(&a, &b).unwrap(), Equivalence::Equivalent);
//! ```

pub mod address;
pub mod algebra;
pub mod builtins;
pub mod cells;
pub mod dsl;
pub mod engine;
pub mod error;
pub mod export;
pub mod graph;
pub mod rules;
pub mod scalar;

pub use address::{Address, ChartPair, Digit, Tail};
pub use algebra::{impose, impose_member, scale, ImposedSet};
pub use builtins::{builtin, BUILTIN_NAMES};
pub use cells::{classify_part, Cell, PartClass};
pub use dsl::{
    format_spec, parse_document, parse_spec, parse_specs, Diagnostic, DslError, SpecDocument,
};
pub use engine::{Equivalence, EquivalenceClass, RuleEngine};
pub use error::{Error, Result};
pub use graph::{build_graph, graph_connected, GraphMode, LevelGraph};
pub use rules::{canonicalize_rule, ConnectivityRule, RuleSide, SpaceSpec};
pub use scalar::Scalar;

/// Exact evaluation scalar.
pub type Exact = num_rational::BigRational;
/// Floating-point evaluation scalar.
pub type Approx = f64;
