//! JSON formats for lattices, vectors, periods and density certificates.
//!
//! Integers are written as strings so that values beyond 64 bits survive any
//! JSON reader; on input both numbers and strings are accepted.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::classifier::construct_alpha;
use crate::error::{Error, Result};
use crate::k3::associate_k3;
use crate::lattice::{standard_lattice, IntLattice, LatticeVec, StandardLattice};
use crate::matrix::IntMatrix;
use crate::period::{make_period, DensityCertificate, Period, QuadScalar};

pub fn int_to_json(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn ints_to_json(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_to_json).collect())
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints_to_json(m.row(i))).collect())
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::Parse(format!("{n} is not an integer; large values must be quoted")))
            }
        }
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("{s:?} is not an integer"))),
        other => Err(Error::Parse(format!("expected an integer, found {other}"))),
    }
}

pub fn ints_from_json(v: &Value) -> Result<Vec<BigInt>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("expected an array of integers, found {v}")))?
        .iter()
        .map(int_from_json)
        .collect()
}

pub fn matrix_from_json(v: &Value) -> Result<IntMatrix> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("expected an array of rows".into()))?;
    let rows: Vec<Vec<BigInt>> = rows.iter().map(ints_from_json).collect::<Result<_>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
    }
    Ok(IntMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j].clone()))
}

/// The `outputs` of a saved report, otherwise `v` itself.
fn unwrap_report(v: &Value) -> &Value {
    match (v.get("command"), v.get("outputs")) {
        (Some(_), Some(outputs)) => outputs,
        _ => v,
    }
}

/// A vector given as a bare array, as `{"coords": [...]}`, or as a saved
/// `construct` report (its `alpha`).
pub fn vector_from_json(v: &Value) -> Result<LatticeVec> {
    let coords = match unwrap_report(v) {
        Value::Object(map) => map
            .get("coords")
            .or_else(|| map.get("alpha"))
            .ok_or_else(|| Error::Parse("missing \"coords\"".into()))?,
        other => other,
    };
    Ok(LatticeVec::new(ints_from_json(coords)?))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Lattice file: `{"gram": [[...]], "label": "..."}`.
pub fn lattice_from_json(v: &Value) -> Result<IntLattice> {
    let gram = v.get("gram").ok_or_else(|| Error::Parse("missing \"gram\"".into()))?;
    let lattice = IntLattice::new(matrix_from_json(gram)?)?;
    Ok(match v.get("label").and_then(Value::as_str) {
        Some(label) => lattice.with_label(label),
        None => lattice,
    })
}

pub fn lattice_to_json(lattice: &IntLattice) -> Value {
    json!({ "label": lattice.label(), "gram": matrix_to_json(lattice.gram()) })
}

fn parse_args(inner: &str) -> Result<Vec<i64>> {
    inner
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad lattice parameter {s:?}"))))
        .collect()
}

/// Resolves `U`, `E8(-1)`, `Mukai`, `K3`, `K3n(n)` and `Qalpha(n,d,b)`.
///
/// `Qalpha(n,d,b)` is `α^⊥/Zα` for the class `construct_alpha(n,d,b)`, in the
/// basis fixed by [`associate_k3`].
pub fn lattice_from_label(label: &str) -> Result<IntLattice> {
    let label = label.trim();
    let (head, args) = match label.find('(') {
        Some(i) if label.ends_with(')') && !label.eq_ignore_ascii_case("e8(-1)") => {
            (&label[..i], Some(parse_args(&label[i + 1..label.len() - 1])?))
        }
        _ => (label, None),
    };
    let lattice = match (head.to_ascii_lowercase().as_str(), args.as_deref()) {
        ("k3n", Some(&[n])) if n >= 2 => standard_lattice(StandardLattice::K3n, Some(n as u64))?,
        ("qalpha", Some(&[n, d, b])) if n >= 2 && d >= 1 => {
            let alpha = construct_alpha(n as u64, d as u64, b)?;
            associate_k3(n as u64, &alpha)?.q_alpha.lattice().clone()
        }
        (_, None) => standard_lattice(head.parse()?, None)?,
        _ => return Err(Error::Parse(format!("cannot resolve lattice label {label:?}"))),
    };
    Ok(lattice.with_label(label))
}

fn rational_from_pair(num: &Value, den: &Value) -> Result<BigRational> {
    let den = int_from_json(den)?;
    if den.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(int_from_json(num)?, den))
}

fn scalar_from_json(v: &Value, d: &BigInt) -> Result<QuadScalar> {
    let parts = v.as_array().filter(|a| a.len() == 4).ok_or_else(|| {
        Error::Parse(format!("scalar must be [a_num, a_den, b_num, b_den], found {v}"))
    })?;
    let a = rational_from_pair(&parts[0], &parts[1])?;
    let b = rational_from_pair(&parts[2], &parts[3])?;
    Ok(QuadScalar::new(a, b, d.clone()))
}

fn scalar_to_json(s: &QuadScalar) -> Value {
    let (a, b) = (s.a(), s.b());
    Value::Array(vec![int_to_json(a.numer()), int_to_json(a.denom()), int_to_json(b.numer()), int_to_json(b.denom())])
}

/// Period file: `{"lattice": label, "D": int, "x": [[an,ad,bn,bd], ...], "y": [...]}`.
///
/// `lattice_override` replaces the label lookup (the `--lattice` file option).
/// A saved `sample-period` report is accepted as well; `"lattice"` may also be
/// an inline lattice object.
pub fn period_from_json(v: &Value, lattice_override: Option<&IntLattice>) -> Result<Period> {
    let v = unwrap_report(v);
    let lattice = match (lattice_override, v.get("lattice")) {
        (Some(l), _) => l.clone(),
        (None, Some(Value::String(label))) => lattice_from_label(label)?,
        (None, Some(obj @ Value::Object(_))) => lattice_from_json(obj)?,
        _ => return Err(Error::Parse("missing \"lattice\"".into())),
    };
    let d = int_from_json(v.get("D").ok_or_else(|| Error::Parse("missing \"D\"".into()))?)?;
    let read = |key: &str| -> Result<Vec<QuadScalar>> {
        v.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse(format!("missing {key:?}")))?
            .iter()
            .map(|s| scalar_from_json(s, &d))
            .collect()
    };
    make_period(&lattice, &d, read("x")?, read("y")?)
}

pub fn period_to_json(p: &Period) -> Value {
    json!({
        "lattice": p.lattice().label(),
        "D": int_to_json(p.discriminant()),
        "x": p.x().iter().map(scalar_to_json).collect::<Vec<_>>(),
        "y": p.y().iter().map(scalar_to_json).collect::<Vec<_>>(),
    })
}

pub fn certificate_to_json(c: &DensityCertificate) -> Value {
    json!({
        "coeffs": ints_to_json(&c.coeffs),
        "error": c.achieved_error,
        "epsilon": c.epsilon,
        "iterations": c.iterations,
    })
}

/// `"a+bi"`, `"a-bi"`, `"a"`, `"bi"`, or `"a,b"`.
pub fn parse_complex(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Parse(format!("cannot read complex number {s:?}"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some((re, im)) = t.split_once(',') {
        return Ok((re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?));
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse().map(|re| (re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok((re, im))
}
