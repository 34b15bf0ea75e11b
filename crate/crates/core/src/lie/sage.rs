use std::collections::BTreeMap;

use super::{LieError, StructureConstants};
use crate::coeff::ParameterContext;
use crate::exterior::{parse_element_with, ExteriorElement};

/// Parse a dictionary `{(J,K): Σ c·e_M, …}` where each entry contributes
/// `c·e_J∧e_K` to `d e_M`. A repeated key replaces the earlier value.
/// Values may use `E.gens()[k]` or the generator names `gens`.
pub fn parse_sage_dict(
    text: &str,
    gens: &[String],
    ctx: &ParameterContext,
) -> Result<StructureConstants, LieError> {
    let n = gens.len();
    let mut s = StructureConstants::abelian(n, ctx.clone());
    for ((j, k), v) in parse_entries(text, gens, ctx)? {
        for (b, c) in v.terms() {
            let m = b.indices()[0];
            s.add(m, j, k, c.clone())?;
        }
    }
    Ok(s)
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, LieError> {
    Err(LieError::Dict {
        pos,
        msg: msg.into(),
    })
}

fn normalize(text: &str) -> String {
    let mut out = text.replace("\\\n", " ").replace("\\\r\n", " ");
    while let Some(at) = out.find("E.gens()[") {
        let rest = &out[at + 9..];
        let Some(close) = rest.find(']') else { break };
        let idx = rest[..close].trim().to_string();
        out = format!("{}e{}{}", &out[..at], idx, &rest[close + 1..]);
    }
    out
}

fn split_top(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

fn parse_entries(
    text: &str,
    gens: &[String],
    ctx: &ParameterContext,
) -> Result<BTreeMap<(usize, usize), ExteriorElement>, LieError> {
    let n = gens.len();
    let norm = normalize(text);
    let body = norm.trim();
    let inner = match body.strip_prefix('{').and_then(|b| b.strip_suffix('}')) {
        Some(b) => b,
        None => return err(0, "expected a braced dictionary"),
    };
    let mut map = BTreeMap::new();
    for (off, piece) in split_top(inner) {
        let pos = off + 1;
        let p = piece.trim();
        if p.is_empty() {
            continue;
        }
        let Some(colon) = p.find(':') else {
            return err(pos, "expected 'key: value'");
        };
        let key = p[..colon].trim();
        let key = key
            .strip_prefix('(')
            .and_then(|k| k.strip_suffix(')'))
            .ok_or(LieError::Dict {
                pos,
                msg: format!("malformed key '{key}'"),
            })?;
        let ix: Vec<usize> = key
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| LieError::Dict {
                pos,
                msg: format!("malformed key '({key})'"),
            })?;
        let [j, k] = ix[..] else {
            return err(pos, format!("key '({key})' must be a pair"));
        };
        for i in [j, k] {
            if i >= n {
                return Err(LieError::IndexOutOfRange { index: i, n });
            }
        }
        if j == k {
            return Err(LieError::RepeatedPair(j));
        }
        let v = parse_element_with(&p[colon + 1..], gens, ctx).map_err(|e| match e {
            crate::exterior::ExteriorError::Parse { pos: q, msg } => LieError::Dict {
                pos: pos + colon + 1 + q,
                msg,
            },
            other => other.into(),
        })?;
        if !v.is_zero() && v.pure_degree() != Some(1) {
            return err(pos, format!("value of ({j},{k}) must be a 1-form"));
        }
        map.insert((j, k), v);
    }
    Ok(map)
}

/// Generator names `e0 … e{n-1}`.
pub fn default_generators(n: usize) -> Vec<String> {
    (0..n)
        .map(crate::exterior::default_generator_name)
        .collect()
}
