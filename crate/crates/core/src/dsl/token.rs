use std::fmt;

use super::DslError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Number,
    Identifier,
    Operator,
    LParen,
    RParen,
    Comma,
}

/// A lexeme together with the character offset at which it starts.
#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// 0-based offset in characters (not bytes) into the source text.
    pub position: usize,
}

impl Token {
    /// Number of characters spanned by the lexeme.
    pub fn width(&self) -> usize {
        self.lexeme.chars().count()
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} `{}` @{}", self.kind, self.lexeme, self.position)
    }
}

/// Splits source text into tokens. Whitespace separates tokens and is dropped.
pub fn tokenize(source: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = match c {
            '+' | '-' | '*' | '/' | '^' => {
                i += 1;
                TokenKind::Operator
            }
            '(' => {
                i += 1;
                TokenKind::LParen
            }
            ')' => {
                i += 1;
                TokenKind::RParen
            }
            ',' => {
                i += 1;
                TokenKind::Comma
            }
            c if c.is_ascii_digit() || (c == '.' && next_is_digit(&chars, i + 1)) => {
                i = scan_number(&chars, i);
                TokenKind::Number
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                TokenKind::Identifier
            }
            other => {
                return Err(DslError::Lex {
                    position: start,
                    character: other,
                })
            }
        };
        tokens.push(Token {
            kind,
            lexeme: chars[start..i].iter().collect(),
            position: start,
        });
    }
    Ok(tokens)
}

fn next_is_digit(chars: &[char], i: usize) -> bool {
    chars.get(i).is_some_and(|c| c.is_ascii_digit())
}

fn scan_number(chars: &[char], mut i: usize) -> usize {
    while i < chars.len() && chars[i].is_ascii_digit() {
        i += 1;
    }
    if i < chars.len() && chars[i] == '.' {
        i += 1;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
    }
    // An exponent is only taken when digits follow; `2e` lexes as `2` then the identifier `e`.
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        if next_is_digit(chars, j) {
            i = j;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds_and_lexemes(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.lexeme))
            .collect()
    }

    #[test]
    fn fig4_expression() {
        use TokenKind::*;
        let got = kinds_and_lexemes("abs(x*y)^(1/t)");
        let want: Vec<(TokenKind, String)> = [
            (Identifier, "abs"),
            (LParen, "("),
            (Identifier, "x"),
            (Operator, "*"),
            (Identifier, "y"),
            (RParen, ")"),
            (Operator, "^"),
            (LParen, "("),
            (Number, "1"),
            (Operator, "/"),
            (Identifier, "t"),
            (RParen, ")"),
        ]
        .into_iter()
        .map(|(k, l)| (k, l.to_string()))
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn empty_source() {
        assert!(tokenize("").unwrap().is_empty());
        assert!(tokenize("  \t\n").unwrap().is_empty());
    }

    #[test]
    fn unknown_character() {
        assert_eq!(
            tokenize("x $ y"),
            Err(DslError::Lex {
                position: 2,
                character: '$'
            })
        );
    }

    #[test]
    fn positions_count_characters_not_bytes() {
        match tokenize("x + φ") {
            Err(DslError::Lex { position, character }) => {
                assert_eq!(position, 4);
                assert_eq!(character, 'φ');
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn number_forms() {
        let lex: Vec<String> = tokenize("1 2.5 .5 3. 1e-3 2E+4 7e")
            .unwrap()
            .into_iter()
            .map(|t| t.lexeme)
            .collect();
        assert_eq!(lex, ["1", "2.5", ".5", "3.", "1e-3", "2E+4", "7", "e"]);
    }

    #[test]
    fn positions_strictly_increase() {
        let toks = tokenize("H - b*(x^2 + y^2)").unwrap();
        for w in toks.windows(2) {
            assert!(w[0].position < w[1].position);
        }
    }
}
