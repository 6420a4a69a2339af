//! Textual grid descriptions.
//!
//! A grid is a comma-separated list of coordinate sets:
//!
//! - `full`: every element of `F_q`
//! - `units`: the nonzero elements
//! - `subgroup:k`: the multiplicative subgroup of order `k`
//! - `{c1,c2,...}`: explicit element codes
//!
//! Any item may carry a repetition suffix, as in `full×4` or `{0,1}*3`.

use cartesian_codes::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExpr {
    Full,
    Units,
    Subgroup(u64),
    Explicit(Vec<u64>),
}

/// Splits on commas that are not inside braces.
fn split_top_level(text: &str) -> Result<Vec<&str>, String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth < 0 {
                    return Err(format!("unbalanced '}}' in {text:?}"));
                }
            }
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(format!("unbalanced '{{' in {text:?}"));
    }
    parts.push(&text[start..]);
    Ok(parts)
}

fn parse_count(text: &str, what: &str) -> Result<u64, String> {
    text.trim()
        .parse::<u64>()
        .map_err(|_| format!("invalid {what} {:?}", text.trim()))
}

/// Strips a trailing `×k` or `*k` that sits outside any braces.
fn split_repeat(item: &str) -> Result<(&str, usize), String> {
    let close = item.rfind('}').map_or(0, |i| i + 1);
    let tail = &item[close..];
    let Some((pos, sep)) = tail.char_indices().find(|&(_, c)| c == '×' || c == '*') else {
        return Ok((item, 1));
    };
    let count = parse_count(&tail[pos + sep.len_utf8()..], "repetition count")?;
    if count == 0 {
        return Err(format!("repetition count must be positive in {item:?}"));
    }
    Ok((&item[..close + pos], count as usize))
}

impl SetExpr {
    fn parse_one(item: &str) -> Result<SetExpr, String> {
        let item = item.trim();
        if let Some(inner) = item.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
            if inner.trim().is_empty() {
                return Err("empty set {}".to_string());
            }
            let codes = inner
                .split(',')
                .map(|c| parse_count(c, "element code"))
                .collect::<Result<_, _>>()?;
            return Ok(SetExpr::Explicit(codes));
        }
        if let Some(k) = item.strip_prefix("subgroup:") {
            return Ok(SetExpr::Subgroup(parse_count(k, "subgroup order")?));
        }
        match item {
            "full" => Ok(SetExpr::Full),
            "units" => Ok(SetExpr::Units),
            "" => Err("empty set expression".to_string()),
            other => Err(format!("unknown set expression {other:?}")),
        }
    }

    /// Parses a whole `--sets` argument, expanding repetitions.
    pub fn parse_list(text: &str) -> Result<Vec<SetExpr>, String> {
        let mut out = Vec::new();
        for part in split_top_level(text)? {
            let (item, count) = split_repeat(part.trim())?;
            let expr = SetExpr::parse_one(item)?;
            out.extend(std::iter::repeat_n(expr, count));
        }
        Ok(out)
    }

    /// The elements of the set, in the order written. Duplicates and
    /// out-of-range codes are left for grid validation to reject.
    pub fn resolve(&self, field: &Field) -> Result<Vec<FieldElement>, String> {
        match self {
            SetExpr::Full => Ok(field.elements().collect()),
            SetExpr::Units => Ok(field.elements().skip(1).collect()),
            SetExpr::Subgroup(k) => field
                .subgroup_of_order(*k)
                .map(|g| g.into_elements())
                .map_err(|e| e.to_string()),
            SetExpr::Explicit(codes) => codes
                .iter()
                .map(|&c| field.element(c).map_err(|e| e.to_string()))
                .collect(),
        }
    }
}
