//! JSON encoding of scalars, algebra elements, Gram matrices and classes.
//!
//! Scalars are strings `"p/q"` (integers may also be JSON integers; floats are
//! rejected). Elements of an algebra with a single linear factor are scalars;
//! other elements are either polynomial strings in `x` or arrays holding one
//! ascending coefficient array per factor.

use gwdeg_core::etale::{Algebra, AlgebraElement, EtaleAlgebra};
use gwdeg_core::{
    make_gwu, make_gwu_with_scalar, Compatibility, FieldSpec, GrothendieckWittClass, Matrix, Polynomial, Scalar,
    UnstableGWClass,
};
use serde_json::{json, Map, Value};

use crate::parse::{parse_algebra, parse_field, parse_polynomial, parse_scalar, ParseError};

/// Errors while decoding a document: malformed input, or a well-formed value
/// that the core library rejects.
#[derive(Debug)]
pub enum DecodeError {
    Input(ParseError),
    Domain(gwdeg_core::Error),
}

impl std::fmt::Display for DecodeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecodeError::Input(e) => write!(f, "{e}"),
            DecodeError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<ParseError> for DecodeError {
    fn from(e: ParseError) -> Self {
        DecodeError::Input(e)
    }
}

impl From<gwdeg_core::Error> for DecodeError {
    fn from(e: gwdeg_core::Error) -> Self {
        DecodeError::Domain(e)
    }
}

pub type DecodeResult<T> = Result<T, DecodeError>;

fn bad(path: &str, message: impl std::fmt::Display) -> DecodeError {
    DecodeError::Input(ParseError { message: format!("{path}: {message}"), position: None })
}

fn located(path: &str, e: ParseError) -> DecodeError {
    DecodeError::Input(ParseError { message: format!("{path}: {}", e.message), position: e.position })
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn scalar_from_json(v: &Value, field: FieldSpec, path: &str) -> DecodeResult<Scalar> {
    match v {
        Value::String(s) => parse_scalar(s, field).map_err(|e| located(path, e)),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_scalar(&n.to_string(), field).map_err(|e| located(path, e)),
        Value::Number(_) => Err(bad(path, "floating-point numbers are not exact; use a string \"p/q\"")),
        _ => Err(bad(path, "expected a scalar string \"p/q\"")),
    }
}

pub fn element_to_json(e: &AlgebraElement) -> Value {
    if e.algebra().is_field() {
        if let Some(s) = e.as_scalar() {
            return scalar_to_json(&s);
        }
    }
    let alg = e.algebra();
    let parts = e
        .components()
        .iter()
        .zip(alg.factors())
        .map(|(c, f)| {
            let d = f.degree().expect("nonconstant factor");
            Value::Array((0..d).map(|i| scalar_to_json(&c.coeff(i))).collect())
        })
        .collect();
    Value::Array(parts)
}

pub fn element_from_json(v: &Value, alg: &Algebra, path: &str) -> DecodeResult<AlgebraElement> {
    let field = alg.base();
    match v {
        Value::String(s) => {
            let p = parse_polynomial(s, field).map_err(|e| located(path, e))?;
            Ok(AlgebraElement::from_polynomial(alg, &p)?)
        }
        Value::Number(_) => Ok(AlgebraElement::from_scalar(alg, &scalar_from_json(v, field, path)?)),
        Value::Array(parts) => {
            if parts.len() != alg.factors().len() {
                return Err(bad(path, format!("expected {} factor components, got {}", alg.factors().len(), parts.len())));
            }
            let mut comps = Vec::with_capacity(parts.len());
            for (i, part) in parts.iter().enumerate() {
                let Value::Array(coeffs) = part else {
                    return Err(bad(&format!("{path}[{i}]"), "expected an array of coefficients"));
                };
                if coeffs.len() > gwdeg_core::poly::MAX_DEGREE + 1 {
                    return Err(bad(&format!("{path}[{i}]"), "too many coefficients"));
                }
                let cs = coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| scalar_from_json(c, field, &format!("{path}[{i}][{j}]")))
                    .collect::<DecodeResult<Vec<_>>>()?;
                comps.push(Polynomial::new(field, cs));
            }
            Ok(AlgebraElement::from_components(alg, comps)?)
        }
        _ => Err(bad(path, "expected an algebra element")),
    }
}

pub fn scalar_matrix_to_json(m: &Matrix<Scalar>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect())).collect())
}

pub fn gram_to_json(m: &Matrix<AlgebraElement>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(element_to_json).collect())).collect())
}

pub fn gram_from_json(v: &Value, alg: &Algebra, path: &str) -> DecodeResult<Matrix<AlgebraElement>> {
    let Value::Array(rows) = v else {
        return Err(bad(path, "expected an array of rows"));
    };
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let Value::Array(cells) = row else {
            return Err(bad(&format!("{path}[{i}]"), "expected an array"));
        };
        let row = cells
            .iter()
            .enumerate()
            .map(|(j, c)| element_from_json(c, alg, &format!("{path}[{i}][{j}]")))
            .collect::<DecodeResult<Vec<_>>>()?;
        out.push(row);
    }
    if out.is_empty() {
        return Ok(Matrix::empty());
    }
    Ok(Matrix::from_rows(out)?)
}

/// `QQ[x]/(f1)x(f2)` or `{"field": "QQ", "factors": ["f1", "f2"]}`.
pub fn algebra_from_json(v: &Value, path: &str) -> DecodeResult<Algebra> {
    match v {
        Value::String(s) => parse_algebra(s).map_err(|e| located(path, e)),
        Value::Object(obj) => {
            let field = match obj.get("field") {
                Some(Value::String(s)) => parse_field(s).map_err(|e| located(&format!("{path}.field"), e))?,
                _ => return Err(bad(path, "missing \"field\"")),
            };
            let Some(Value::Array(factors)) = obj.get("factors") else {
                return Err(bad(path, "missing \"factors\" array"));
            };
            let factors = factors
                .iter()
                .enumerate()
                .map(|(i, f)| match f {
                    Value::String(s) => parse_polynomial(s, field).map_err(|e| located(&format!("{path}.factors[{i}]"), e)),
                    _ => Err(bad(&format!("{path}.factors[{i}]"), "expected a polynomial string")),
                })
                .collect::<DecodeResult<Vec<_>>>()?;
            Ok(EtaleAlgebra::new(field, factors)?)
        }
        _ => Err(bad(path, "expected an algebra descriptor")),
    }
}

/// Where a document's entries live when the command line does not say.
#[derive(Clone, Debug, Default)]
pub struct Context {
    pub field: Option<FieldSpec>,
    pub algebra: Option<Algebra>,
}

impl Context {
    fn resolve(&self, doc: Option<&Map<String, Value>>) -> DecodeResult<Algebra> {
        let doc_alg = match doc.and_then(|d| d.get("algebra")) {
            Some(v) => Some(algebra_from_json(v, "algebra")?),
            None => None,
        };
        let doc_field = match doc.and_then(|d| d.get("field")) {
            Some(Value::String(s)) => Some(parse_field(s).map_err(|e| located("field", e))?),
            Some(_) => return Err(bad("field", "expected a field descriptor string")),
            None => None,
        };
        let doc_alg = match (doc_alg, doc_field) {
            (Some(a), Some(f)) if a.base() != f => {
                return Err(bad("field", format!("{f} does not match the algebra over {}", a.base())));
            }
            (Some(a), _) => Some(a),
            (None, Some(f)) => Some(EtaleAlgebra::trivial(f)),
            (None, None) => None,
        };
        let flag_alg = match (&self.algebra, self.field) {
            (Some(a), _) => Some(a.clone()),
            (None, Some(f)) => Some(EtaleAlgebra::trivial(f)),
            (None, None) => None,
        };
        match (doc_alg, flag_alg) {
            (Some(d), Some(f)) if d != f => {
                Err(bad("algebra", format!("document is over {d} but the command line says {f}")))
            }
            (Some(a), _) | (None, Some(a)) => Ok(a),
            (None, None) => Err(bad("document", "no field or algebra given (use --field or --algebra)")),
        }
    }
}

fn header(alg: &Algebra) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("field".into(), Value::String(alg.base().to_string()));
    if !alg.is_trivial() {
        m.insert("algebra".into(), Value::String(alg.to_string()));
    }
    m
}

pub fn gw_to_json(beta: &GrothendieckWittClass) -> Value {
    let mut m = header(beta.algebra());
    m.insert("gram".into(), gram_to_json(beta.matrix()));
    Value::Object(m)
}

/// A bare Gram matrix, or an object with `"gram"` and optional
/// `"field"`/`"algebra"` keys.
pub fn gw_from_json(v: &Value, ctx: &Context) -> DecodeResult<GrothendieckWittClass> {
    let (doc, gram) = match v {
        Value::Array(_) => (None, v),
        Value::Object(obj) => (Some(obj), obj.get("gram").ok_or_else(|| bad("document", "missing \"gram\""))?),
        _ => return Err(bad("document", "expected a Gram matrix or an object")),
    };
    let alg = ctx.resolve(doc)?;
    let m = gram_from_json(gram, &alg, "gram")?;
    Ok(GrothendieckWittClass::new(&alg, m)?)
}

pub fn gwu_to_json(a: &UnstableGWClass) -> Value {
    let mut m = header(a.algebra());
    m.insert("gram".into(), gram_to_json(a.gw().matrix()));
    m.insert("scalar".into(), element_to_json(a.scalar()));
    let c = match a.compatibility() {
        Compatibility::Verified => "verified",
        Compatibility::Unchecked => "unchecked",
    };
    m.insert("compatibility".into(), json!(c));
    Value::Object(m)
}

/// Like [`gw_from_json`] plus an optional `"scalar"`; without it the scalar
/// is the Gram determinant. `"compatibility"` is recomputed, never trusted.
pub fn gwu_from_json(v: &Value, ctx: &Context) -> DecodeResult<UnstableGWClass> {
    let beta = gw_from_json(v, ctx)?;
    let scalar = match v {
        Value::Object(obj) => obj.get("scalar"),
        _ => None,
    };
    match scalar {
        None | Some(Value::Null) => Ok(make_gwu(beta)),
        Some(s) => {
            let d = element_from_json(s, beta.algebra(), "scalar")?;
            Ok(make_gwu_with_scalar(beta, d)?)
        }
    }
}
