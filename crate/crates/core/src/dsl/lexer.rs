use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::DslError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Rat(BigRational),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Eq,
    Question,
    Bar,
    Colon,
    Comma,
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Rat(r) => write!(f, "number `{r}`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Question => f.write_str("`?`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Arrow => f.write_str("`->`"),
        }
    }
}

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        let start = i;
        let single = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => None,
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                col += i - start;
                continue;
            }
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ';' => Some(Tok::Semi),
            '=' => Some(Tok::Eq),
            '?' => Some(Tok::Question),
            '|' => Some(Tok::Bar),
            ':' => Some(Tok::Colon),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, pos });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Token { tok: Tok::Arrow, pos });
            i += 2;
            col += 2;
            continue;
        }
        if c == '-' || c.is_ascii_digit() {
            i += 1;
            let digits = |i: &mut usize| {
                let s = *i;
                while *i < chars.len() && chars[*i].is_ascii_digit() {
                    *i += 1;
                }
                chars[s..*i].iter().collect::<String>()
            };
            let num = if c == '-' { digits(&mut i) } else { c.to_string() + &digits(&mut i) };
            if num.is_empty() {
                return Err(DslError::at(pos, "expected digits after `-`"));
            }
            let mut value = BigRational::from_integer(num.parse::<BigInt>().expect("digits"));
            if chars.get(i) == Some(&'/') {
                i += 1;
                let den = digits(&mut i);
                if den.is_empty() {
                    return Err(DslError::at(pos, "expected digits after `/`"));
                }
                let den: BigInt = den.parse().expect("digits");
                if den.is_zero() {
                    return Err(DslError::at(pos, "zero denominator"));
                }
                value /= BigRational::from_integer(den);
            }
            if c == '-' {
                value = -value;
            }
            out.push(Token { tok: Tok::Rat(value), pos });
            col += i - start;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
            col += i - start;
            continue;
        }
        return Err(DslError::at(pos, format!("unexpected character {c:?}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers_and_arrows() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            toks("A->r -2/4 7"),
            vec![
                Tok::Ident("A".into()),
                Tok::Arrow,
                Tok::Ident("r".into()),
                Tok::Rat(-half),
                Tok::Rat(BigRational::from_integer(7.into())),
            ]
        );
    }

    #[test]
    fn positions_skip_comments() {
        let t = tokenize("# note\n  x = # more\n y").unwrap();
        assert_eq!(t[0].pos, Pos { line: 2, column: 3 });
        assert_eq!(t[2].pos, Pos { line: 3, column: 2 });
    }

    #[test]
    fn bad_input() {
        assert!(tokenize("1/0").is_err());
        assert!(tokenize("- 1").is_err());
        assert!(tokenize("x $").unwrap_err().to_string().contains("line 1, column 3"));
    }
}
