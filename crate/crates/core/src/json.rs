//! JSON documents for function specs and reports.
//!
//! Spec document:
//!
//! ```json
//! {"n": 2, "family": "CobbDouglas",
//!  "params": {"A": "1.0000000000000000e0", "k": ["5.0000000000000000e-1", "5.0000000000000000e-1"]},
//!  "body": ["mul", ["const", "1.0000000000000000e0"], ["mul", ...]],
//!  "outer": [...], "inners": [[...], [...]]}
//! ```
//!
//! Expressions are nested prefix arrays `[op, child...]` with ops `const`,
//! `var`, `neg`, `add`, `mul`, `div`, `pow`, `exp`, `ln`. Real literals are
//! written as decimal strings with 17 significant digits so that every `f64`
//! survives a round trip bit-for-bit; plain JSON numbers are accepted on input.

use serde::Serialize;
use serde_json::{json, Map, Number, Value};

use crate::catalog::{build_custom, build_family, build_product, build_quasi_product, Family, FunctionSpec};
use crate::error::{Error, Result};
use crate::expr::Expr;

/// Report schema version written into every report document.
pub const SCHEMA_VERSION: &str = "1";

/// `x` with 17 significant digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn lit(x: f64) -> Value {
    Value::String(format_f64(x))
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

fn parse_real(v: &Value, what: &str) -> Result<f64> {
    let x = match v {
        Value::String(s) => s.trim().parse::<f64>().map_err(|_| invalid(format!("{what}: bad number {s:?}")))?,
        Value::Number(n) => n
            .to_string()
            .parse::<f64>()
            .map_err(|_| invalid(format!("{what}: bad number {n}")))?,
        other => return Err(invalid(format!("{what}: expected a number, got {other}"))),
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(format!("{what}: non-finite number")))
    }
}

fn parse_reals(v: &Value, what: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| invalid(format!("{what}: expected an array")))?
        .iter()
        .map(|x| parse_real(x, what))
        .collect()
}

impl Expr {
    pub fn to_json(&self) -> Value {
        let node = |op: &str, kids: &[&Expr]| {
            let mut a = vec![Value::from(op)];
            a.extend(kids.iter().map(|k| k.to_json()));
            Value::Array(a)
        };
        match self {
            Expr::Const(c) => json!(["const", lit(*c)]),
            Expr::Var(i) => json!(["var", i]),
            Expr::Neg(e) => node("neg", &[e]),
            Expr::Sum(es) => node("add", &es.iter().collect::<Vec<_>>()),
            Expr::Product(es) => node("mul", &es.iter().collect::<Vec<_>>()),
            Expr::Quotient(a, b) => node("div", &[a, b]),
            Expr::Pow(b, c) => json!(["pow", b.to_json(), lit(*c)]),
            Expr::Exp(e) => node("exp", &[e]),
            Expr::Ln(e) => node("ln", &[e]),
        }
    }

    pub fn from_json(v: &Value) -> Result<Expr> {
        let arr = v.as_array().ok_or_else(|| invalid(format!("expression must be an array, got {v}")))?;
        let op = arr
            .first()
            .and_then(Value::as_str)
            .ok_or_else(|| invalid(format!("expression must start with an operator name: {v}")))?;
        let args = &arr[1..];
        let arity = |k: usize| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                Err(invalid(format!("{op} takes {k} argument(s), got {}", args.len())))
            }
        };
        let kid = |i: usize| -> Result<Box<Expr>> { Ok(Box::new(Expr::from_json(&args[i])?)) };
        Ok(match op {
            "const" => {
                arity(1)?;
                Expr::Const(parse_real(&args[0], "const")?)
            }
            "var" => {
                arity(1)?;
                let i = args[0].as_u64().ok_or_else(|| invalid("var index must be a non-negative integer"))?;
                Expr::Var(i as usize)
            }
            "neg" => {
                arity(1)?;
                Expr::Neg(kid(0)?)
            }
            "add" => Expr::Sum(args.iter().map(Expr::from_json).collect::<Result<_>>()?),
            "mul" => Expr::Product(args.iter().map(Expr::from_json).collect::<Result<_>>()?),
            "div" => {
                arity(2)?;
                Expr::Quotient(kid(0)?, kid(1)?)
            }
            "pow" => {
                arity(2)?;
                Expr::Pow(kid(0)?, parse_real(&args[1], "pow exponent")?)
            }
            "exp" => {
                arity(1)?;
                Expr::Exp(kid(0)?)
            }
            "ln" => {
                arity(1)?;
                Expr::Ln(kid(0)?)
            }
            other => return Err(invalid(format!("unknown operator {other:?}"))),
        })
    }
}

fn params_json(f: &Family) -> Value {
    let list = |xs: &[f64]| Value::Array(xs.iter().map(|x| lit(*x)).collect());
    match f {
        Family::CobbDouglas { scale, exponents } => json!({"A": lit(*scale), "k": list(exponents)}),
        Family::Acms { scale, weights, rho, gamma } => {
            json!({"A": lit(*scale), "k": list(weights), "rho": lit(*rho), "gamma": lit(*gamma)})
        }
        Family::SpillmanMitscherlich { scale, rates } => json!({"A": lit(*scale), "a": list(rates)}),
        Family::Transcendental { scale, powers, rates } => {
            json!({"A": lit(*scale), "a": list(powers), "b": list(rates)})
        }
        Family::Product | Family::QuasiProduct | Family::Custom => json!({}),
    }
}

/// Parses a family tag and parameter object into a [`Family`].
pub fn family_from_json(tag: &str, params: &Value) -> Result<Family> {
    let get = |key: &str| -> Result<&Value> {
        params.get(key).ok_or_else(|| invalid(format!("family {tag} needs parameter {key:?}")))
    };
    let scale = || parse_real(get("A")?, "A");
    Ok(match normalize_tag(tag).as_str() {
        "cobbdouglas" | "cd" => Family::CobbDouglas { scale: scale()?, exponents: parse_reals(get("k")?, "k")? },
        "acms" | "armington" | "ces" => Family::Acms {
            scale: scale()?,
            weights: parse_reals(get("k")?, "k")?,
            rho: parse_real(get("rho")?, "rho")?,
            gamma: parse_real(get("gamma")?, "gamma")?,
        },
        "spillmanmitscherlich" | "spillman" => {
            Family::SpillmanMitscherlich { scale: scale()?, rates: parse_reals(get("a")?, "a")? }
        }
        "transcendental" => Family::Transcendental {
            scale: scale()?,
            powers: parse_reals(get("a")?, "a")?,
            rates: parse_reals(get("b")?, "b")?,
        },
        "product" => Family::Product,
        "quasiproduct" => Family::QuasiProduct,
        "custom" => Family::Custom,
        _ => return Err(invalid(format!("unknown family {tag:?}"))),
    })
}

fn normalize_tag(tag: &str) -> String {
    tag.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase()
}

impl FunctionSpec {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("n".into(), Value::from(self.n()));
        m.insert("family".into(), Value::from(self.family().tag()));
        m.insert("params".into(), params_json(self.family()));
        m.insert("body".into(), self.body().to_json());
        if let Some(s) = self.structure() {
            m.insert("outer".into(), s.outer.to_json());
            m.insert("inners".into(), Value::Array(s.inners.iter().map(Expr::to_json).collect()));
        }
        Value::Object(m)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("spec documents always serialize")
    }

    /// Rebuilds a spec from its document. Catalog families are rebuilt from
    /// their parameters; a `body`, when present, must match the rebuilt one.
    pub fn from_json(v: &Value) -> Result<FunctionSpec> {
        let obj = v.as_object().ok_or_else(|| invalid("spec document must be an object"))?;
        let tag = obj.get("family").and_then(Value::as_str).unwrap_or("Custom");
        let empty = json!({});
        let family = family_from_json(tag, obj.get("params").unwrap_or(&empty))?;
        let body = obj.get("body").map(Expr::from_json).transpose()?;
        let inners = || -> Result<Vec<Expr>> {
            obj.get("inners")
                .and_then(Value::as_array)
                .ok_or_else(|| invalid(format!("family {tag} needs an \"inners\" array")))?
                .iter()
                .map(Expr::from_json)
                .collect()
        };

        let spec = match family {
            Family::Product => build_product(inners()?)?,
            Family::QuasiProduct => {
                let outer = obj.get("outer").ok_or_else(|| invalid("QuasiProduct needs \"outer\""))?;
                build_quasi_product(Expr::from_json(outer)?, inners()?)?
            }
            Family::Custom => {
                let body = body.clone().ok_or_else(|| invalid("Custom spec needs a \"body\""))?;
                let n = match obj.get("n") {
                    Some(n) => n.as_u64().ok_or_else(|| invalid("n must be a positive integer"))? as usize,
                    None => body.max_var().map_or(0, |k| k + 1),
                };
                build_custom(n, body)?
            }
            fam => build_family(fam)?,
        };

        if let Some(n) = obj.get("n") {
            if n.as_u64() != Some(spec.n() as u64) {
                return Err(invalid(format!("declared n = {n} but the function has {} inputs", spec.n())));
            }
        }
        if let Some(b) = body {
            if &b != spec.body() {
                return Err(invalid(format!("body does not match the {tag} family it declares")));
            }
        }
        Ok(spec)
    }

    pub fn from_json_str(s: &str) -> Result<FunctionSpec> {
        let v: Value = serde_json::from_str(s).map_err(|e| invalid(e.to_string()))?;
        FunctionSpec::from_json(&v)
    }
}

/// Rewrites every JSON number as a 17-significant-digit literal; non-finite
/// values were already mapped to `null` by serde.
fn canonical_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().expect("f64 number");
                Value::Number(Number::from_string_unchecked(format_f64(x)))
            } else {
                Value::Number(n)
            }
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonical_numbers).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, canonical_numbers(v))).collect()),
        other => other,
    }
}

/// Serializes a report with fields in declaration order and every real
/// rendered with 17 significant digits.
pub fn to_report_json<T: Serialize>(report: &T) -> String {
    let v = serde_json::to_value(report).expect("reports serialize to JSON");
    serde_json::to_string_pretty(&canonical_numbers(v)).expect("JSON values always print")
}
