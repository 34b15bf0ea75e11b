use serde_json::{json, Value};

use super::{LieError, StructureConstants};
use crate::coeff::{parse_scalar, Field, ParameterContext};

fn bad<T>(msg: impl Into<String>) -> Result<T, LieError> {
    Err(LieError::Json(msg.into()))
}

fn index(v: &Value, what: &str, n: usize, prefix: bool) -> Result<usize, LieError> {
    let i = match v {
        Value::Number(x) => x.as_u64().map(|x| x as usize),
        Value::String(s) => {
            let t = if prefix {
                s.strip_prefix('e').unwrap_or(s)
            } else {
                s.as_str()
            };
            t.parse::<usize>().ok()
        }
        _ => None,
    };
    match i {
        Some(i) if i < n => Ok(i),
        Some(i) => Err(LieError::IndexOutOfRange { index: i, n }),
        None => bad(format!("{what} must be an index, got {v}")),
    }
}

fn field_of(s: &StructureConstants) -> &'static str {
    if s.has_params() || !s.ctx().is_empty() {
        "params"
    } else if s.is_rational() {
        "QQ"
    } else {
        "QQ_i"
    }
}

pub(super) fn to_json(s: &StructureConstants) -> Value {
    let mut d = Vec::new();
    for m in 0..s.dim() {
        let img = s.image(m);
        if img.is_zero() {
            continue;
        }
        let mut terms: Vec<_> = img.terms().map(|(b, c)| (b.indices(), c)).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let terms: Vec<Value> = terms
            .into_iter()
            .map(|(ix, c)| json!([c.render(s.ctx()), ix[0].to_string(), ix[1].to_string()]))
            .collect();
        d.push(json!([format!("e{m}"), terms]));
    }
    let mut v = json!({ "dim": s.dim(), "field": field_of(s), "d": d });
    if !s.ctx().is_empty() {
        v["params"] = json!(s.ctx().names());
    }
    v
}

pub(super) fn from_json(v: &Value) -> Result<StructureConstants, LieError> {
    let obj = v
        .as_object()
        .ok_or_else(|| LieError::Json("document must be an object".into()))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "dim" | "field" | "params" | "d" | "name") {
            return bad(format!("unknown key '{key}'"));
        }
    }
    let n = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| LieError::Json("'dim' must be a non-negative integer".into()))?
        as usize;
    if n > crate::exterior::MAX_GENERATORS {
        return Err(crate::exterior::ExteriorError::TooManyGenerators(n).into());
    }
    let field = match obj.get("field") {
        None => None,
        Some(Value::String(f)) if matches!(f.as_str(), "QQ" | "QQ_i" | "params") => {
            Some(f.as_str())
        }
        Some(f) => {
            return bad(format!(
                "'field' must be \"QQ\", \"QQ_i\" or \"params\", got {f}"
            ))
        }
    };
    let mut ctx = ParameterContext::new();
    if let Some(p) = obj.get("params") {
        let names = p
            .as_array()
            .ok_or_else(|| LieError::Json("'params' must be a list".into()))?;
        for name in names {
            let name = name
                .as_str()
                .ok_or_else(|| LieError::Json("parameter names must be strings".into()))?;
            ctx.declare(name)?;
        }
    }
    if field != Some("params") && field.is_some() && !ctx.is_empty() {
        return bad("'params' given but 'field' is not \"params\"");
    }
    let mut s = StructureConstants::abelian(n, ctx.clone());
    let d = match obj.get("d") {
        None => return Ok(s),
        Some(Value::Array(d)) => d,
        Some(_) => return bad("'d' must be a list"),
    };
    for entry in d {
        let pair = entry.as_array().filter(|a| a.len() == 2);
        let Some(pair) = pair else {
            return bad(format!("entry {entry} must be [generator, terms]"));
        };
        let m = index(&pair[0], "generator", n, true)?;
        let terms = pair[1]
            .as_array()
            .ok_or_else(|| LieError::Json(format!("terms of e{m} must be a list")))?;
        for t in terms {
            let t = t.as_array().filter(|a| a.len() == 3);
            let Some(t) = t else {
                return bad(format!("term of e{m} must be [coeff, j, k]"));
            };
            let c = match &t[0] {
                Value::String(x) => parse_scalar(x, &ctx)?,
                Value::Number(x) => parse_scalar(&x.to_string(), &ctx)?,
                other => return bad(format!("coefficient must be a string, got {other}")),
            };
            match field {
                Some("QQ") if !c.is_rational() => {
                    return bad(format!("coefficient {} is not rational", c.render(&ctx)))
                }
                Some("QQ_i") if !c.is_constant() => {
                    return bad(format!(
                        "coefficient {} involves parameters",
                        c.render(&ctx)
                    ))
                }
                _ => {}
            }
            let j = index(&t[1], "j", n, false)?;
            let k = index(&t[2], "k", n, false)?;
            s.add(m, j, k, c)?;
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Scalar;
    use crate::lie::parse_salamon;

    #[test]
    fn minimal_document_matches_salamon() {
        let v: Value = serde_json::from_str(r#"{"dim":6, "d":[["e5",[["1","0","1"]]]]}"#).unwrap();
        assert_eq!(
            from_json(&v).unwrap(),
            parse_salamon("(0,0,0,0,0,12)", 6).unwrap()
        );
    }

    #[test]
    fn exact_rationals_and_params() {
        let v = json!({"dim":6,"field":"QQ","d":[["e4",[["1/2","0","2"]]],[5,[["2",0,3],["-1","1","2"]]]]});
        let s = from_json(&v).unwrap();
        assert_eq!(s.coefficient(4, 0, 2), Scalar::rat(1, 2));
        assert_eq!(s.coefficient(5, 3, 0), Scalar::int(-2));
        assert_eq!(from_json(&to_json(&s)).unwrap(), s);
        let p = json!({"dim":3,"field":"params","params":["B"],"d":[["e2",[["B - 1","0","1"]]]]});
        let s = from_json(&p).unwrap();
        assert!(s.has_params());
        assert_eq!(to_json(&s)["field"], "params");
        assert_eq!(from_json(&to_json(&s)).unwrap(), s);
    }

    #[test]
    fn schema_violations() {
        for doc in [
            json!([]),
            json!({"dim":-1}),
            json!({"dim":3,"field":"RR"}),
            json!({"dim":3,"field":"QQ","d":[["e2",[["i","0","1"]]]]}),
            json!({"dim":3,"d":[["e3",[["1","0","1"]]]]}),
            json!({"dim":3,"d":[["e2",[["1","1","1"]]]]}),
            json!({"dim":3,"d":[["e2",[["1","0"]]]]}),
            json!({"dim":3,"d":[["e2",[["x","0","1"]]]]}),
            json!({"dim":3,"extra":1}),
        ] {
            assert!(from_json(&doc).is_err(), "{doc}");
        }
    }
}
