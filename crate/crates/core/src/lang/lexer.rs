use std::fmt;

use num_bigint::BigInt;

use super::ParseError;

/// 1-based line/column of a token.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    /// Free-text `{ ... }` hint, only produced in proof mode.
    Hint(String),
    // keywords
    Var,
    Skip,
    Abort,
    If,
    Fi,
    Do,
    Od,
    Div,
    Mod,
    And,
    Or,
    Not,
    True,
    False,
    Gcd,
    Abs,
    Let,
    // punctuation
    Assign,
    Semi,
    Comma,
    Colon,
    Arrow,
    Box,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Plus,
    Minus,
    Star,
    Slash,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Implies,
    Iff,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier `{name}`"),
            Tok::Int(v) => return write!(f, "integer {v}"),
            Tok::Hint(h) => return write!(f, "hint {{{h}}}"),
            Tok::Var => "var",
            Tok::Skip => "skip",
            Tok::Abort => "abort",
            Tok::If => "if",
            Tok::Fi => "fi",
            Tok::Do => "do",
            Tok::Od => "od",
            Tok::Div => "div",
            Tok::Mod => "mod",
            Tok::And => "and",
            Tok::Or => "or",
            Tok::Not => "not",
            Tok::True => "true",
            Tok::False => "false",
            Tok::Gcd => "gcd",
            Tok::Abs => "abs",
            Tok::Let => "let",
            Tok::Assign => ":=",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Arrow => "->",
            Tok::Box => "[]",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Implies => "==>",
            Tok::Iff => "<=>",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

fn keyword(word: &str, proof_mode: bool) -> Option<Tok> {
    Some(match word {
        "var" => Tok::Var,
        "skip" => Tok::Skip,
        "abort" => Tok::Abort,
        "if" => Tok::If,
        "fi" => Tok::Fi,
        "do" => Tok::Do,
        "od" => Tok::Od,
        "div" => Tok::Div,
        "mod" => Tok::Mod,
        "and" => Tok::And,
        "or" => Tok::Or,
        "not" => Tok::Not,
        "true" => Tok::True,
        "false" => Tok::False,
        "gcd" => Tok::Gcd,
        "abs" => Tok::Abs,
        "let" if proof_mode => Tok::Let,
        _ => return None,
    })
}

/// Tokenize source text. In proof mode `{ ... }` is read as a single hint
/// token and `let` is a keyword.
pub fn tokenize(src: &str, proof_mode: bool) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! advance {
        ($n:expr) => {{
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance!(1);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance!(1);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance!(1);
            }
            let word: String = chars[start..i].iter().collect();
            let tok = keyword(&word, proof_mode).unwrap_or(Tok::Ident(word));
            out.push(Token { tok, pos });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance!(1);
            }
            let digits: String = chars[start..i].iter().collect();
            let value = digits.parse::<BigInt>().expect("digit run parses");
            out.push(Token { tok: Tok::Int(value), pos });
            continue;
        }
        if proof_mode && c == '{' {
            let start = i + 1;
            advance!(1);
            while i < chars.len() && chars[i] != '}' {
                advance!(1);
            }
            if i >= chars.len() {
                return Err(ParseError::syntax(pos, "unterminated hint"));
            }
            let text: String = chars[start..i].iter().collect();
            advance!(1);
            out.push(Token { tok: Tok::Hint(text.trim().to_string()), pos });
            continue;
        }

        let rest = |n: usize| -> String { chars[i..(i + n).min(chars.len())].iter().collect() };
        let three = rest(3);
        let two = rest(2);
        let (tok, len) = if three == "==>" {
            (Tok::Implies, 3)
        } else if three == "<=>" {
            (Tok::Iff, 3)
        } else {
            match two.as_str() {
                ":=" => (Tok::Assign, 2),
                "->" => (Tok::Arrow, 2),
                "[]" => (Tok::Box, 2),
                "<=" => (Tok::Le, 2),
                ">=" => (Tok::Ge, 2),
                "!=" | "<>" => (Tok::Ne, 2),
                "=>" => (Tok::Implies, 2),
                "&&" => (Tok::And, 2),
                "||" => (Tok::Or, 2),
                _ => {
                    let tok = match c {
                        ';' => Tok::Semi,
                        ',' => Tok::Comma,
                        ':' => Tok::Colon,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '{' => Tok::LBrace,
                        '}' => Tok::RBrace,
                        '+' => Tok::Plus,
                        '-' | '−' => Tok::Minus,
                        '*' | '×' | '·' => Tok::Star,
                        '/' => Tok::Slash,
                        '=' => Tok::Eq,
                        '≠' => Tok::Ne,
                        '<' => Tok::Lt,
                        '≤' => Tok::Le,
                        '>' => Tok::Gt,
                        '≥' => Tok::Ge,
                        '→' => Tok::Arrow,
                        '□' | '▯' => Tok::Box,
                        '⇒' => Tok::Implies,
                        '⇔' | '≡' => Tok::Iff,
                        '∧' => Tok::And,
                        '∨' => Tok::Or,
                        '¬' | '!' => Tok::Not,
                        _ => return Err(ParseError::syntax(pos, format!("unexpected character `{c}`"))),
                    };
                    (tok, 1)
                }
            }
        };
        advance!(len);
        out.push(Token { tok, pos });
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src, false).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn ascii_and_unicode_spellings_agree() {
        assert_eq!(toks("x > y -> x := x - y [] y >= x"), toks("x > y → x := x − y □ y ≥ x"));
        assert_eq!(toks("a ⇒ b ⇔ ¬c"), toks("a ==> b <=> not c"));
    }

    #[test]
    fn positions_are_one_based() {
        let t = tokenize("var x;\n  skip", false).unwrap();
        assert_eq!(t[3].pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn comments_are_skipped() {
        assert_eq!(toks("skip # trailing := junk\n"), vec![Tok::Skip, Tok::Eof]);
    }

    #[test]
    fn hints_only_in_proof_mode() {
        let t = tokenize("x = { algebra } x", true).unwrap();
        assert_eq!(t[2].tok, Tok::Hint("algebra".into()));
        assert!(tokenize("{ open", true).is_err());
    }

    #[test]
    fn stray_character_is_positioned() {
        let err = tokenize("var x;\nx := $", false).unwrap_err();
        assert!(err.to_string().starts_with("2:6"), "{err}");
    }
}
