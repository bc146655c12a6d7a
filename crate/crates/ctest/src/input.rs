//! Text forms accepted on the command line.
//!
//! * word: `x1 x2^-1 x3^2`, or `1` for the empty word
//! * tuple: words separated by `;`
//! * expression: a word, or `name[arg; ...]` with an optional `^k` suffix, where
//!   `name` is `w2`, `u`, `v` or `vN` and every argument is again an expression,
//!   e.g. `v3[1; x2; x3]` or `w2[x2; x3]^960`

use ctest_core::construct::{build_u, build_v, build_w2};
use ctest_core::{Expr, Rank, Word};

use crate::{Error, Result};

pub fn parse_tuple(text: &str, rank: Rank) -> Result<Vec<Word>> {
    split_top(text)
        .map_err(|reason| Error::Spec { text: text.into(), reason })?
        .into_iter()
        .map(|part| Ok(Word::parse(part.trim(), rank)?))
        .collect()
}

pub fn parse_expr(text: &str, rank: Rank) -> Result<Expr> {
    let t = text.trim();
    let spec = |reason: &str| Error::Spec { text: t.into(), reason: reason.into() };
    let Some(open) = t.find('[') else {
        return Ok(Expr::lit(&Word::parse(t, rank)?));
    };
    let name = t[..open].trim();
    let close = matching_bracket(t, open).ok_or_else(|| spec("unbalanced brackets"))?;
    let inner = &t[open + 1..close];
    let rest = t[close + 1..].trim();
    let args: Vec<Expr> = split_top(inner)
        .map_err(|r| spec(&r))?
        .into_iter()
        .map(|a| parse_expr(a, rank))
        .collect::<Result<_>>()?;
    let value = match name {
        "w2" | "u" => {
            if args.len() != 2 {
                return Err(spec("takes exactly two arguments"));
            }
            if name == "w2" {
                build_w2(&args[0], &args[1])
            } else {
                build_u(&args[0], &args[1])
            }
        }
        "v" => build_v(args.len(), &args)?,
        _ if name.starts_with('v') => {
            let n: usize = name[1..].parse().map_err(|_| spec("unknown constructor"))?;
            build_v(n, &args)?
        }
        _ => return Err(spec("unknown constructor")),
    };
    if rest.is_empty() {
        return Ok(value);
    }
    let k: i64 = rest
        .strip_prefix('^')
        .and_then(|k| k.trim().parse().ok())
        .ok_or_else(|| spec("expected `^k` after the closing bracket"))?;
    Ok(value.pow(k))
}

fn matching_bracket(t: &str, open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in t.char_indices().skip_while(|(i, _)| *i < open) {
        match c {
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Splits on `;` outside brackets.
fn split_top(text: &str) -> std::result::Result<Vec<&str>, String> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in text.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ';' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err("unbalanced brackets".into());
        }
    }
    if depth != 0 {
        return Err("unbalanced brackets".into());
    }
    parts.push(&text[start..]);
    Ok(parts)
}
