//! The library of named spaces.

use crate::address::{Address, Tail};
use crate::error::{Error, Result};
use crate::rules::SpaceSpec;

/// Names accepted by [`builtin`]. `(N)` is optional and defaults to 10.
pub const BUILTIN_NAMES: &[&str] = &[
    "real_line(N)",
    "unit_interval(N)",
    "naturals(N)",
    "cantor",
    "gasket",
    "gasket_compact",
    "gasket_lattice",
];

/// Looks up a builtin space by name, e.g. `real_line(10)` or `gasket`.
pub fn builtin(name: &str) -> Result<SpaceSpec> {
    let unknown = || Error::UnknownBuiltin(name.to_string());
    let (base, arg) = match name.split_once('(') {
        Some((base, rest)) => {
            let digits = rest.strip_suffix(')').ok_or_else(unknown)?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(unknown());
            }
            let n: u32 = digits.parse().map_err(|_| unknown())?;
            (base, Some(n))
        }
        None => (name, None),
    };
    let n = arg.unwrap_or(10);
    match (base, arg) {
        ("real_line", _) => real_line(n),
        ("unit_interval", _) => Ok(real_line(n)?
            .with_left_limit(1)
            .with_name(format!("unit_interval_{n}"))),
        ("naturals", _) => Ok(real_line(n)?
            .with_right_limit(0)
            .with_name(format!("naturals_{n}"))),
        ("cantor", None) => Ok(cantor()),
        ("gasket", None) => Ok(gasket()),
        ("gasket_compact", None) => Ok(gasket().with_left_limit(1).with_name("gasket_compact")),
        ("gasket_lattice", None) => Ok(gasket().with_right_limit(0).with_name("gasket_lattice")),
        _ => Err(unknown()),
    }
}

fn side(digit: u32, tail_digit: u32) -> Address {
    Address::new(vec![digit], Tail::new(Vec::new(), vec![tail_digit]))
}

/// `i.(N-1) ∼ (i+1).(0)` for every `i < N-1`, plus the corners `i.(0)` and
/// `i.(N-1)` of every part.
pub fn real_line(n: u32) -> Result<SpaceSpec> {
    let mut spec = SpaceSpec::new(format!("real_line_{n}"), n)?;
    let top = n - 1;
    for i in 0..top {
        spec.add_rule(&side(i, top), &side(i + 1, 0))?;
    }
    for i in 0..n {
        spec.add_corner(&side(i, 0))?;
        spec.add_corner(&side(i, top))?;
    }
    Ok(spec)
}

/// Two parts, no identifications; corners at both ends of each part.
pub fn cantor() -> SpaceSpec {
    let mut spec = SpaceSpec::new("cantor", 2).expect("two parts");
    for i in 0..2 {
        for j in 0..2 {
            spec.add_corner(&side(i, j)).expect("valid corner");
        }
    }
    spec
}

/// `i.(j) ∼ j.(i)` for all `i, j` in `{0, 1, 2}`; the `i = j` cases are the
/// corners.
pub fn gasket() -> SpaceSpec {
    let mut spec = SpaceSpec::new("gasket", 3).expect("three parts");
    for i in 0..3 {
        for j in 0..3 {
            spec.add_rule(&side(i, j), &side(j, i))
                .expect("valid gasket rule");
        }
    }
    spec
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_shapes() {
        let g = builtin("gasket").unwrap();
        assert_eq!((g.n_parts(), g.rule_count(), g.rules().len()), (3, 3, 6));
        let l = builtin("real_line(10)").unwrap();
        assert_eq!((l.n_parts(), l.rule_count()), (10, 9));
        let c = builtin("cantor").unwrap();
        assert_eq!((c.n_parts(), c.rule_count()), (2, 0));
        assert_eq!(builtin("unit_interval(3)").unwrap().left_limit(), Some(1));
        assert_eq!(builtin("naturals(2)").unwrap().right_limit(), Some(0));
        assert_eq!(builtin("gasket_compact").unwrap().left_limit(), Some(1));
        assert_eq!(builtin("gasket_lattice").unwrap().right_limit(), Some(0));
        assert_eq!(builtin("real_line").unwrap().n_parts(), 10);
    }

    #[test]
    fn unknown_names() {
        for bad in [
            "sponge",
            "real_line(1)",
            "real_line(x)",
            "gasket(3)",
            "real_line(2",
            "",
        ] {
            assert!(builtin(bad).is_err(), "{bad}");
        }
    }
}
