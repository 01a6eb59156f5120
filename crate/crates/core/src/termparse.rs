//! Tokenizer and term reader for the human polynomial syntax
//! `c*m^i*l^j - 3*m^-1 + ...` shared by the univariate and bivariate parsers.

use num_bigint::BigInt;
use num_traits::One;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Term {
    pub coeff: BigInt,
    /// `(variable, exponent)` in order of appearance; repeats allowed.
    pub factors: Vec<(String, i64)>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str, vars: &[&str]) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Int(
                    text.parse().map_err(|_| format!("bad integer {text}"))?,
                ));
            }
            a if a.is_alphabetic() => {
                let name = a.to_string();
                if !vars.contains(&name.as_str()) {
                    return Err(format!("unknown variable '{name}'"));
                }
                out.push(Tok::Var(name));
                i += 1;
            }
            other => return Err(format!("unexpected character '{other}'")),
        }
    }
    Ok(out)
}

struct Reader {
    toks: Vec<Tok>,
    pos: usize,
}

impl Reader {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn exponent(&mut self) -> Result<i64, String> {
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.pos += 1;
        }
        let mut sign = 1i64;
        while let Some(t) = self.peek() {
            match t {
                Tok::Minus => sign = -sign,
                Tok::Plus => {}
                _ => break,
            }
            self.pos += 1;
        }
        let v = match self.next() {
            Some(Tok::Int(n)) => i64::try_from(n).map_err(|_| "exponent too large".to_string())?,
            other => return Err(format!("expected exponent, found {other:?}")),
        };
        if paren && self.next() != Some(Tok::RParen) {
            return Err("unclosed parenthesis in exponent".into());
        }
        Ok(sign * v)
    }

    fn item(&mut self, term: &mut Term) -> Result<(), String> {
        match self.next() {
            Some(Tok::Int(n)) => {
                term.coeff *= n;
                if self.peek() == Some(&Tok::Caret) {
                    return Err("powers of constants are not supported".into());
                }
                Ok(())
            }
            Some(Tok::Var(v)) => {
                let e = if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    self.exponent()?
                } else {
                    1
                };
                term.factors.push((v, e));
                Ok(())
            }
            other => Err(format!(
                "expected a coefficient or variable, found {other:?}"
            )),
        }
    }
}

/// Split an expression into signed terms. Like terms are not combined.
pub(crate) fn parse_terms(s: &str, vars: &[&str]) -> Result<Vec<Term>, String> {
    let toks = tokenize(s, vars)?;
    if toks.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut r = Reader { toks, pos: 0 };
    let mut terms = Vec::new();
    loop {
        let mut sign = BigInt::one();
        let mut saw_sign = false;
        while let Some(t) = r.peek() {
            match t {
                Tok::Plus => {}
                Tok::Minus => sign = -sign,
                _ => break,
            }
            saw_sign = true;
            r.pos += 1;
        }
        if r.peek().is_none() {
            return Err(if saw_sign {
                "dangling sign".into()
            } else {
                "empty term".into()
            });
        }
        let mut term = Term {
            coeff: sign,
            factors: Vec::new(),
        };
        r.item(&mut term)?;
        loop {
            match r.peek() {
                Some(Tok::Star) => {
                    r.pos += 1;
                    r.item(&mut term)?;
                }
                // implicit product such as `2m` or `m l`
                Some(Tok::Var(_)) | Some(Tok::Int(_)) => r.item(&mut term)?,
                _ => break,
            }
        }
        terms.push(term);
        match r.peek() {
            None => break,
            Some(Tok::Plus) | Some(Tok::Minus) => {}
            Some(other) => return Err(format!("unexpected token {other:?}")),
        }
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_signed_terms() {
        let t = parse_terms("l*m^2 - 1", &["m", "l"]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].factors, vec![("l".into(), 1), ("m".into(), 2)]);
        assert_eq!(t[1].coeff, BigInt::from(-1));
        let t = parse_terms("-3*m^(-1)*l^2", &["m", "l"]).unwrap();
        assert_eq!(t[0].coeff, BigInt::from(-3));
        assert_eq!(t[0].factors, vec![("m".into(), -1), ("l".into(), 2)]);
        let t = parse_terms("2m^-2", &["m", "l"]).unwrap();
        assert_eq!(t[0].factors, vec![("m".into(), -2)]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_terms("", &["m"]).is_err());
        assert!(parse_terms("m +", &["m"]).is_err());
        assert!(parse_terms("q^2", &["m"]).is_err());
        assert!(parse_terms("m^", &["m"]).is_err());
        assert!(parse_terms("2^3", &["m"]).is_err());
    }
}
