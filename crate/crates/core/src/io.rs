//! The JSON interchange format for matrices and systems.
//!
//! A scalar is one of three forms:
//!
//! - `"eps"` — the additive zero;
//! - a bare number `a` — the pure value `a` (ghost slot empty);
//! - a two-element array `[a, b]` — value slot `a`, ghost slot `b`, where
//!   each slot is a number or `"eps"` (so `[3, 3]` is the ghost of 3 and
//!   `["eps", 0]` is the pure ghost unit).
//!
//! A matrix is `{"n": N, "entries": [[...], ...]}` with `N` rows of `N`
//! scalars; a system is `{"n": N, "generators": [matrix, ...]}` with at
//! least one generator, all of dimension `N`.  Indices in error messages
//! are 1-based, matching every other piece of text this crate prints.
//!
//! Parsing is two-stage — text to `serde_json::Value`, then `Value` to the
//! domain types — so shape problems are reported with a path into the
//! document (`generators[2].entries[1][3]`) rather than a byte offset.
//! Encoding is canonical: `eps` cells print as `"eps"`, ghost-free cells as
//! bare numbers, and integral numbers without a decimal point, so
//! encode-parse round trips are identity and equal inputs encode to equal
//! bytes.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::lie::LieSystem;
use crate::matrix::SuperMatrix;
use crate::scalar::{ExtReal, SuperScalar};

/// Why an input document was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    /// Not valid JSON at all; positions are 1-based.
    #[error("JSON syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// A cell that should hold a scalar holds something else.
    #[error("bad scalar at {location}: {message}")]
    BadScalar { location: String, message: String },
    /// The document structure is wrong (missing keys, ragged rows, ...).
    #[error("shape error at {location}: expected {expected}, found {found}")]
    Shape {
        location: String,
        expected: String,
        found: String,
    },
    /// A structurally valid document that this command cannot use.
    #[error("{0}")]
    Invalid(String),
}

/// A parsed input file: either a single matrix or a system of generators.
#[derive(Debug, Clone, PartialEq)]
pub enum InputDocument {
    Matrix(SuperMatrix),
    System(LieSystem),
}

impl InputDocument {
    pub fn n(&self) -> usize {
        match self {
            InputDocument::Matrix(m) => m.n(),
            InputDocument::System(s) => s.n(),
        }
    }

    /// Every document is a system: a bare matrix is a one-generator system.
    pub fn into_system(self) -> LieSystem {
        match self {
            InputDocument::Matrix(m) => LieSystem::new(vec![m]).expect("one generator"),
            InputDocument::System(s) => s,
        }
    }

    /// For single-matrix commands.  A system qualifies only when it has
    /// exactly one generator.
    pub fn into_matrix(self) -> Result<SuperMatrix, ParseError> {
        match self {
            InputDocument::Matrix(m) => Ok(m),
            InputDocument::System(s) => {
                if s.generator_count() == 1 {
                    Ok(s.into_generators().pop().expect("one generator"))
                } else {
                    Err(ParseError::Invalid(format!(
                        "this command needs a single matrix, but the input is a \
                         system with {} generators",
                        s.generator_count()
                    )))
                }
            }
        }
    }
}

fn type_name(value: &Value) -> &'static str {
    match value {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn shape(location: impl Into<String>, expected: impl Into<String>, found: impl Into<String>) -> ParseError {
    ParseError::Shape {
        location: location.into(),
        expected: expected.into(),
        found: found.into(),
    }
}

fn bad_scalar(location: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::BadScalar {
        location: location.into(),
        message: message.into(),
    }
}

/// Parses a whole input file.  Top level must be an object; the `"generators"`
/// key selects the system form, otherwise `"entries"` selects the matrix form.
pub fn parse_input(text: &str) -> Result<InputDocument, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        // serde's message repeats the position; keep only the description
        let full = e.to_string();
        let message = full
            .split(" at line ")
            .next()
            .unwrap_or(&full)
            .to_string();
        ParseError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| shape("<root>", "an object", type_name(&value)))?;
    if obj.contains_key("generators") {
        parse_system_value(obj).map(InputDocument::System)
    } else if obj.contains_key("entries") {
        parse_matrix_value(&value, "").map(InputDocument::Matrix)
    } else {
        Err(shape(
            "<root>",
            "a key \"entries\" (matrix) or \"generators\" (system)",
            "an object with neither",
        ))
    }
}

fn parse_dimension(obj: &Map<String, Value>, location: &str) -> Result<usize, ParseError> {
    let value = obj
        .get("n")
        .ok_or_else(|| shape(location, "a key \"n\"", "an object without it"))?;
    let n = value
        .as_u64()
        .filter(|&n| n >= 1)
        .ok_or_else(|| shape(format!("{location}n"), "a positive integer", render(value)))?;
    usize::try_from(n)
        .ok()
        .ok_or_else(|| shape(format!("{location}n"), "a representable size", render(value)))
}

/// Parses a matrix object.  `prefix` is prepended to locations in errors
/// (empty at top level, `generators[k].` inside a system).
fn parse_matrix_value(value: &Value, prefix: &str) -> Result<SuperMatrix, ParseError> {
    let obj = value.as_object().ok_or_else(|| {
        shape(
            if prefix.is_empty() { "<root>" } else { prefix.trim_end_matches('.') }.to_string(),
            "a matrix object",
            type_name(value),
        )
    })?;
    let n = parse_dimension(obj, prefix)?;
    let entries = obj
        .get("entries")
        .ok_or_else(|| shape(prefix, "a key \"entries\"", "an object without it"))?;
    let rows = entries
        .as_array()
        .ok_or_else(|| shape(format!("{prefix}entries"), "an array of rows", type_name(entries)))?;
    if rows.len() != n {
        return Err(shape(
            format!("{prefix}entries"),
            format!("{n} rows"),
            format!("{}", rows.len()),
        ));
    }
    let mut matrix = SuperMatrix::zero(n);
    for (i, row_value) in rows.iter().enumerate() {
        let row_loc = format!("{prefix}entries[{}]", i + 1);
        let row = row_value
            .as_array()
            .ok_or_else(|| shape(&row_loc, "an array of scalars", type_name(row_value)))?;
        if row.len() != n {
            return Err(shape(&row_loc, format!("{n} entries"), format!("{}", row.len())));
        }
        for (j, cell) in row.iter().enumerate() {
            let cell_loc = format!("{row_loc}[{}]", j + 1);
            matrix.set(i, j, parse_scalar_value(cell, &cell_loc)?);
        }
    }
    Ok(matrix)
}

fn parse_system_value(obj: &Map<String, Value>) -> Result<LieSystem, ParseError> {
    let n = parse_dimension(obj, "")?;
    let generators_value = obj.get("generators").expect("caller checked the key");
    let list = generators_value.as_array().ok_or_else(|| {
        shape("generators", "an array of matrices", type_name(generators_value))
    })?;
    if list.is_empty() {
        return Err(shape("generators", "at least one matrix", "an empty array"));
    }
    let mut generators = Vec::with_capacity(list.len());
    for (k, gen_value) in list.iter().enumerate() {
        let prefix = format!("generators[{}].", k + 1);
        let m = parse_matrix_value(gen_value, &prefix)?;
        if m.n() != n {
            return Err(shape(
                format!("generators[{}]", k + 1),
                format!("dimension {n}"),
                format!("{}", m.n()),
            ));
        }
        generators.push(m);
    }
    Ok(LieSystem::new(generators).expect("nonempty, equal dimensions"))
}

fn render(value: &Value) -> String {
    match value {
        Value::String(s) => format!("\"{s}\""),
        other => other.to_string(),
    }
}

fn parse_slot(value: &Value, location: &str, slot: &str) -> Result<ExtReal, ParseError> {
    match value {
        Value::String(s) if s == "eps" => Ok(ExtReal::EPS),
        Value::Number(_) => {
            let v = value.as_f64().filter(|v| v.is_finite()).ok_or_else(|| {
                bad_scalar(location, format!("{slot} slot {} is out of range", render(value)))
            })?;
            Ok(ExtReal::finite(v))
        }
        other => Err(bad_scalar(
            location,
            format!("{slot} slot must be a number or \"eps\", got {}", type_name(other)),
        )),
    }
}

fn parse_scalar_value(value: &Value, location: &str) -> Result<SuperScalar, ParseError> {
    match value {
        Value::String(s) if s == "eps" => Ok(SuperScalar::EPS),
        Value::String(s) => Err(bad_scalar(
            location,
            format!("unknown symbol \"{s}\", expected \"eps\", a number, or a pair"),
        )),
        Value::Number(_) => {
            let v = value.as_f64().filter(|v| v.is_finite()).ok_or_else(|| {
                bad_scalar(location, format!("number {} is out of range", render(value)))
            })?;
            Ok(SuperScalar::real(v))
        }
        Value::Array(slots) => {
            if slots.len() != 2 {
                return Err(bad_scalar(
                    location,
                    format!("a pair needs exactly 2 slots, got {}", slots.len()),
                ));
            }
            let re = parse_slot(&slots[0], location, "value")?;
            let gh = parse_slot(&slots[1], location, "ghost")?;
            Ok(SuperScalar::new(re, gh))
        }
        other => Err(bad_scalar(
            location,
            format!("expected \"eps\", a number, or a pair, got {}", type_name(other)),
        )),
    }
}

fn number_value(v: f64) -> Value {
    // integral values print without a decimal point
    if v.fract() == 0.0 && v.abs() <= 2f64.powi(53) {
        json!(v as i64)
    } else {
        json!(v)
    }
}

/// Canonical encoding of a base element: `"eps"` or a number.
pub fn encode_ext_real(x: ExtReal) -> Value {
    match x.value() {
        None => json!("eps"),
        Some(v) => number_value(v),
    }
}

/// Canonical scalar encoding: `"eps"`, a bare number, or a pair.
pub fn encode_scalar(s: SuperScalar) -> Value {
    if s.is_eps() {
        json!("eps")
    } else if s.gh.is_eps() {
        encode_ext_real(s.re)
    } else {
        json!([encode_ext_real(s.re), encode_ext_real(s.gh)])
    }
}

pub fn encode_matrix(m: &SuperMatrix) -> Value {
    let rows: Vec<Value> = m
        .rows()
        .map(|row| Value::Array(row.iter().map(|&c| encode_scalar(c)).collect()))
        .collect();
    json!({ "n": m.n(), "entries": rows })
}

pub fn encode_system(sys: &LieSystem) -> Value {
    let gens: Vec<Value> = sys.generators().iter().map(encode_matrix).collect();
    json!({ "n": sys.n(), "generators": gens })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real(v: f64) -> SuperScalar {
        SuperScalar::real(v)
    }

    #[test]
    fn parses_a_matrix_document() {
        let text = r#"{"n": 3, "entries": [["eps", 2, "eps"], ["eps", "eps", -1], ["eps", "eps", "eps"]]}"#;
        let doc = parse_input(text).unwrap();
        let expected = SuperMatrix::from_entries(3, &[(0, 1, real(2.0)), (1, 2, real(-1.0))]);
        assert_eq!(doc, InputDocument::Matrix(expected));
    }

    #[test]
    fn parses_all_scalar_forms() {
        let text = r#"{"n": 2, "entries": [[3.5, [3, 3]], [["eps", 0], "eps"]]}"#;
        let m = parse_input(text).unwrap().into_matrix().unwrap();
        assert_eq!(m.get(0, 0), real(3.5));
        assert_eq!(m.get(0, 1), SuperScalar::ghost(3.0));
        assert_eq!(m.get(1, 0), SuperScalar::I);
        assert_eq!(m.get(1, 1), SuperScalar::EPS);
    }

    #[test]
    fn parses_a_system_document() {
        let text = r#"{
            "n": 2,
            "generators": [
                {"n": 2, "entries": [["eps", 0], ["eps", "eps"]]},
                {"n": 2, "entries": [["eps", "eps"], [0, "eps"]]}
            ]
        }"#;
        let doc = parse_input(text).unwrap();
        let sys = doc.into_system();
        assert_eq!(sys.generator_count(), 2);
        assert_eq!(
            sys.generators()[0],
            SuperMatrix::from_entries(2, &[(0, 1, real(0.0))])
        );
        assert_eq!(
            sys.generators()[1],
            SuperMatrix::from_entries(2, &[(1, 0, real(0.0))])
        );
    }

    #[test]
    fn bare_matrix_promotes_to_a_system() {
        let text = r#"{"n": 1, "entries": [[7]]}"#;
        let sys = parse_input(text).unwrap().into_system();
        assert_eq!(sys.generator_count(), 1);
    }

    #[test]
    fn single_generator_system_demotes_to_a_matrix() {
        let text = r#"{"n": 1, "generators": [{"n": 1, "entries": [[7]]}]}"#;
        let m = parse_input(text).unwrap().into_matrix().unwrap();
        assert_eq!(m, SuperMatrix::from_entries(1, &[(0, 0, real(7.0))]));

        let two = r#"{"n": 1, "generators": [
            {"n": 1, "entries": [[7]]},
            {"n": 1, "entries": [[8]]}
        ]}"#;
        let err = parse_input(two).unwrap().into_matrix().unwrap_err();
        assert!(matches!(err, ParseError::Invalid(_)));
    }

    #[test]
    fn syntax_errors_carry_the_line() {
        let text = "{\n  \"n\": 1,\n  \"entries\": oops\n}";
        match parse_input(text).unwrap_err() {
            ParseError::Syntax { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn ragged_rows_are_located() {
        let text = r#"{"n": 3, "entries": [["eps","eps","eps"], ["eps","eps"], ["eps","eps","eps"]]}"#;
        assert_eq!(
            parse_input(text).unwrap_err(),
            ParseError::Shape {
                location: "entries[2]".into(),
                expected: "3 entries".into(),
                found: "2".into(),
            }
        );
    }

    #[test]
    fn bad_scalars_are_located() {
        let text = r#"{"n": 2, "entries": [["eps", "nope"], ["eps", "eps"]]}"#;
        match parse_input(text).unwrap_err() {
            ParseError::BadScalar { location, message } => {
                assert_eq!(location, "entries[1][2]");
                assert!(message.contains("nope"));
            }
            other => panic!("expected a scalar error, got {other:?}"),
        }

        let pair = r#"{"n": 1, "entries": [[[1, 2, 3]]]}"#;
        match parse_input(pair).unwrap_err() {
            ParseError::BadScalar { location, message } => {
                assert_eq!(location, "entries[1][1]");
                assert!(message.contains("2 slots"));
            }
            other => panic!("expected a scalar error, got {other:?}"),
        }
    }

    #[test]
    fn structural_errors_are_reported() {
        let no_keys = r#"{"n": 2}"#;
        assert!(matches!(
            parse_input(no_keys).unwrap_err(),
            ParseError::Shape { .. }
        ));

        let not_object = "[1, 2]";
        assert!(matches!(
            parse_input(not_object).unwrap_err(),
            ParseError::Shape { .. }
        ));

        let zero_n = r#"{"n": 0, "entries": []}"#;
        assert!(matches!(
            parse_input(zero_n).unwrap_err(),
            ParseError::Shape { .. }
        ));

        let wrong_rows = r#"{"n": 2, "entries": [["eps", "eps"]]}"#;
        assert_eq!(
            parse_input(wrong_rows).unwrap_err(),
            ParseError::Shape {
                location: "entries".into(),
                expected: "2 rows".into(),
                found: "1".into(),
            }
        );

        let empty_system = r#"{"n": 2, "generators": []}"#;
        assert!(matches!(
            parse_input(empty_system).unwrap_err(),
            ParseError::Shape { .. }
        ));

        let mixed_dims = r#"{"n": 2, "generators": [
            {"n": 1, "entries": [["eps"]]}
        ]}"#;
        assert_eq!(
            parse_input(mixed_dims).unwrap_err(),
            ParseError::Shape {
                location: "generators[1]".into(),
                expected: "dimension 2".into(),
                found: "1".into(),
            }
        );
    }

    #[test]
    fn nested_errors_carry_the_generator_path() {
        let text = r#"{"n": 2, "generators": [
            {"n": 2, "entries": [["eps", "eps"], ["eps", "eps"]]},
            {"n": 2, "entries": [["eps", "eps"], ["eps", true]]}
        ]}"#;
        match parse_input(text).unwrap_err() {
            ParseError::BadScalar { location, .. } => {
                assert_eq!(location, "generators[2].entries[2][2]");
            }
            other => panic!("expected a scalar error, got {other:?}"),
        }
    }

    #[test]
    fn encoding_is_canonical() {
        let m = SuperMatrix::from_entries(
            2,
            &[
                (0, 0, real(0.0)),
                (0, 1, SuperScalar::ghost(3.0)),
                (1, 0, SuperScalar::I),
            ],
        );
        assert_eq!(
            encode_matrix(&m),
            json!({
                "n": 2,
                "entries": [[0, [3, 3]], [["eps", 0], "eps"]],
            })
        );
        // non-integral values keep their fraction
        let half = SuperMatrix::from_entries(1, &[(0, 0, real(-1.5))]);
        assert_eq!(
            encode_matrix(&half),
            json!({ "n": 1, "entries": [[-1.5]] })
        );
    }

    #[test]
    fn encoding_a_system_lists_generators_in_order() {
        let sys = LieSystem::new(vec![
            SuperMatrix::from_entries(1, &[(0, 0, real(1.0))]),
            SuperMatrix::zero(1),
        ])
        .unwrap();
        assert_eq!(
            encode_system(&sys),
            json!({
                "n": 1,
                "generators": [
                    { "n": 1, "entries": [[1]] },
                    { "n": 1, "entries": [["eps"]] },
                ],
            })
        );
    }

    fn arb_matrix(max_n: usize) -> impl Strategy<Value = SuperMatrix> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(crate::scalar::tests::arb_scalar(), n * n).prop_map(
                move |cells| {
                    SuperMatrix::from_rows(cells.chunks(n).map(|c| c.to_vec()).collect())
                },
            )
        })
    }

    proptest! {
        #[test]
        fn encode_parse_round_trip(m in arb_matrix(5)) {
            let text = encode_matrix(&m).to_string();
            let back = parse_input(&text).unwrap().into_matrix().unwrap();
            prop_assert_eq!(back, m);
        }

        #[test]
        fn system_round_trip(m in arb_matrix(4), copies in 1usize..4) {
            let sys = LieSystem::new(vec![m; copies]).unwrap();
            let text = encode_system(&sys).to_string();
            let back = parse_input(&text).unwrap().into_system();
            prop_assert_eq!(back, sys);
        }
    }
}
