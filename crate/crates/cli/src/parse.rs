//! Polynomial and JSON input.

use std::collections::BTreeMap;

use milnor_core::newton_polyhedron::Support;
use serde_json::Value;

use crate::CliError;

struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, msg: impl Into<String>) -> CliError {
        // positions are reported 1-based
        CliError::user("syntax", format!("at position {}: {}", self.pos + 1, msg.into()))
    }

    fn number(&mut self) -> Result<i64, CliError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| CliError::user("syntax", format!("at position {}: number too large", start + 1)))
    }

    /// `x<k>` or `x<k>^<e>`; returns the zero-based variable and exponent.
    fn factor(&mut self) -> Result<(usize, i64), CliError> {
        if !self.eat(b'x') {
            return Err(self.error("expected a variable x1, x2, ..."));
        }
        // no whitespace between x and its index
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let idx: usize = std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| CliError::user("syntax", format!("at position {}: expected a variable index", start + 1)))?;
        if idx == 0 {
            return Err(CliError::user("syntax", format!("at position {}: variables are numbered from x1", start + 1)));
        }
        let exp = if self.eat(b'^') { self.number()? } else { 1 };
        Ok((idx - 1, exp))
    }

    /// One term: optional coefficient, then `*`-separated factors.
    fn term(&mut self) -> Result<(bool, BTreeMap<usize, i64>), CliError> {
        let mut nonzero = true;
        let mut exps = BTreeMap::new();
        let mut need_factor = true;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = self.number()?;
            if self.eat(b'/') && self.number()? == 0 {
                return Err(self.error("zero denominator"));
            }
            nonzero = c != 0;
            need_factor = self.eat(b'*') || self.peek() == Some(b'x');
        }
        if need_factor {
            loop {
                let (i, e) = self.factor()?;
                *exps.entry(i).or_insert(0) += e;
                if !self.eat(b'*') {
                    break;
                }
            }
        }
        Ok((nonzero, exps))
    }
}

/// The exponent set of a sum of monomials in `x1, ..., xn`. Coefficients
/// are accepted and ignored, except that a zero coefficient drops the
/// term. `n` is the largest variable index that occurs, in any term.
pub fn parse_polynomial(text: &str) -> Result<Support, CliError> {
    let mut lx = Lexer { text: text.as_bytes(), pos: 0 };
    let mut terms = Vec::new();
    let mut first = true;
    let mut n = 0;
    loop {
        let signed = lx.eat(b'+') || lx.eat(b'-');
        if !first && !signed {
            break;
        }
        if lx.peek().is_none() {
            return Err(lx.error("expected a term"));
        }
        let start = lx.pos;
        let (nonzero, exps) = lx.term()?;
        n = n.max(exps.keys().next_back().map_or(0, |&i| i + 1));
        if nonzero && exps.values().all(|&e| e == 0) {
            return Err(CliError::user(
                "constant-term",
                format!("constant term at position {}, but f(0) = 0 is required", start + 1),
            ));
        }
        if nonzero {
            terms.push(exps);
        }
        first = false;
    }
    if lx.peek().is_some() {
        return Err(lx.error(format!("unexpected character {:?}", lx.text[lx.pos] as char)));
    }
    if terms.is_empty() {
        return Err(CliError::user("constant-term", "f is constant, but f(0) = 0 with f nonzero is required"));
    }
    let monomials = terms
        .iter()
        .map(|t| {
            let mut v = vec![0; n];
            for (&i, &e) in t {
                v[i] = e;
            }
            v
        })
        .collect();
    Support::new(n, monomials).map_err(CliError::from)
}

/// `{"n": n, "monomials": [[...], ...]}`.
pub fn parse_json(text: &str) -> Result<Support, CliError> {
    let bad = |msg: &str| CliError::user("bad-json", msg.to_string());
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::user("bad-json", e.to_string()))?;
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing integer field \"n\""))?;
    let rows = v.get("monomials").and_then(Value::as_array).ok_or_else(|| bad("missing array field \"monomials\""))?;
    let monomials = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| bad("each monomial must be an array"))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| bad("exponents must be integers")))
                .collect::<Result<Vec<i64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Support::new(n as usize, monomials).map_err(CliError::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mons(s: &str) -> Vec<Vec<i64>> {
        parse_polynomial(s).unwrap().monomials().to_vec()
    }

    #[test]
    fn examples() {
        assert_eq!(mons("x1^7 + x1^3*x2 + x1^2*x2^4"), vec![vec![2, 4], vec![3, 1], vec![7, 0]]);
        assert_eq!(mons("x1^2 + x2^3"), vec![vec![0, 3], vec![2, 0]]);
        assert_eq!(mons("3*x1*x1 - 2 x2^3 + x1^2"), vec![vec![0, 3], vec![2, 0]]);
        assert_eq!(mons("x1 + 0*x2 + x3"), vec![vec![0, 0, 1], vec![1, 0, 0]]);
        assert_eq!(mons("x1 + x2 + 0*x3"), vec![vec![0, 1, 0], vec![1, 0, 0]]);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_polynomial("1 + x1").unwrap_err().code, "constant-term");
        assert_eq!(parse_polynomial("x1 + x1^0*x2^0").unwrap_err().code, "constant-term");
        let e = parse_polynomial("x1 + y2").unwrap_err();
        assert_eq!(e.code, "syntax");
        assert!(e.detail.contains("position 6"), "{}", e.detail);
        assert_eq!(parse_polynomial("x1 +").unwrap_err().code, "syntax");
        assert_eq!(parse_polynomial("x0 + x1").unwrap_err().code, "syntax");
        assert_eq!(parse_polynomial("").unwrap_err().code, "syntax");
    }
}
