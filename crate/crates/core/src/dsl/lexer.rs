use crate::model::is_identifier_continue;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Ident(String),
    Str(String),
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Equals,
    /// A character that starts no token, or a malformed string literal.
    Bad(String),
    Eof,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Str(_) => "string".to_string(),
            TokenKind::LBracket => "`[`".to_string(),
            TokenKind::RBracket => "`]`".to_string(),
            TokenKind::LBrace => "`{`".to_string(),
            TokenKind::RBrace => "`}`".to_string(),
            TokenKind::Comma => "`,`".to_string(),
            TokenKind::Colon => "`:`".to_string(),
            TokenKind::Equals => "`=`".to_string(),
            TokenKind::Bad(msg) => msg.clone(),
            TokenKind::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
    /// Length in characters.
    pub len: usize,
    /// First token on its line.
    pub line_start: bool,
}

impl Token {
    pub(crate) fn end_column(&self) -> usize {
        self.column + self.len
    }
}

pub(crate) fn tokenize(source: &str) -> Vec<Token> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut column = 1;
    let mut line_start = true;

    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            line_start = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }

        let start = i;
        let start_column = column;
        let kind = match c {
            '[' => single(&mut i, TokenKind::LBracket),
            ']' => single(&mut i, TokenKind::RBracket),
            '{' => single(&mut i, TokenKind::LBrace),
            '}' => single(&mut i, TokenKind::RBrace),
            ',' => single(&mut i, TokenKind::Comma),
            ':' => single(&mut i, TokenKind::Colon),
            '=' => single(&mut i, TokenKind::Equals),
            '"' => lex_string(&chars, &mut i),
            c if c.is_alphabetic() => {
                while i < chars.len() && is_identifier_continue(chars[i]) {
                    i += 1;
                }
                TokenKind::Ident(chars[start..i].iter().collect())
            }
            other => {
                i += 1;
                TokenKind::Bad(format!("unexpected character `{other}`"))
            }
        };
        let len = i - start;
        column += len;
        tokens.push(Token {
            kind,
            line,
            column: start_column,
            len,
            line_start,
        });
        line_start = false;
    }

    tokens.push(Token {
        kind: TokenKind::Eof,
        line,
        column,
        len: 1,
        line_start: true,
    });
    tokens
}

fn single(i: &mut usize, kind: TokenKind) -> TokenKind {
    *i += 1;
    kind
}

/// Lexes a double-quoted string starting at `chars[*i]`. Strings end on the
/// same line; `\"`, `\\` and `\n` are the only escapes.
fn lex_string(chars: &[char], i: &mut usize) -> TokenKind {
    *i += 1;
    let mut value = String::new();
    let mut error: Option<String> = None;
    loop {
        match chars.get(*i) {
            None | Some('\n') => {
                return TokenKind::Bad("unterminated string".to_string());
            }
            Some('"') => {
                *i += 1;
                break;
            }
            Some('\\') => {
                match chars.get(*i + 1) {
                    Some('"') => value.push('"'),
                    Some('\\') => value.push('\\'),
                    Some('n') => value.push('\n'),
                    Some('\n') | None => {
                        *i += 1;
                        return TokenKind::Bad("unterminated string".to_string());
                    }
                    Some(other) => {
                        error
                            .get_or_insert_with(|| format!("invalid escape `\\{other}` in string"));
                    }
                }
                *i += 2;
            }
            Some(c) => {
                value.push(*c);
                *i += 1;
            }
        }
    }
    match error {
        Some(msg) => TokenKind::Bad(msg),
        None => TokenKind::Str(value),
    }
}
