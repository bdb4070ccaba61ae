use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Zero,
    One,
    // keywords
    Def,
    Univ,
    Interval,
    Partial,
    Ext,
    Sub,
    InS,
    OutS,
    Coe,
    HComp,
    Top,
    Bot,
    LamKw,
    // symbols
    Backslash,
    PathLam,
    Join,
    Meet,
    Tilde,
    At,
    SysOpen,
    SysClose,
    Bar,
    Arrow,
    FatArrow,
    Eq,
    EqEq,
    LParen,
    RParen,
    Colon,
    Dot,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        let s = match self {
            Tok::Ident(x) => return format!("identifier `{x}`"),
            Tok::Zero => "0",
            Tok::One => "1",
            Tok::Def => "def",
            Tok::Univ => "U",
            Tok::Interval => "I",
            Tok::Partial => "Partial",
            Tok::Ext => "Ext",
            Tok::Sub => "Sub",
            Tok::InS => "inS",
            Tok::OutS => "outS",
            Tok::Coe => "coe",
            Tok::HComp => "hcomp",
            Tok::Top => "TOP",
            Tok::Bot => "BOT",
            Tok::LamKw => "lam",
            Tok::Backslash => "\\",
            Tok::PathLam => "\\^",
            Tok::Join => "\\/",
            Tok::Meet => "/\\",
            Tok::Tilde => "~",
            Tok::At => "@",
            Tok::SysOpen => "[|",
            Tok::SysClose => "|]",
            Tok::Bar => "|",
            Tok::Arrow => "->",
            Tok::FatArrow => "=>",
            Tok::Eq => "=",
            Tok::EqEq => "==",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Eof => return "end of input".to_string(),
        };
        format!("`{s}`")
    }
}

pub const KEYWORDS: &[(&str, Tok)] = &[
    ("def", Tok::Def),
    ("U", Tok::Univ),
    ("I", Tok::Interval),
    ("Partial", Tok::Partial),
    ("Ext", Tok::Ext),
    ("Sub", Tok::Sub),
    ("inS", Tok::InS),
    ("outS", Tok::OutS),
    ("coe", Tok::Coe),
    ("hcomp", Tok::HComp),
    ("TOP", Tok::Top),
    ("BOT", Tok::Bot),
    ("lam", Tok::LamKw),
];

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub start: usize,
    pub end: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = src[i..].chars().next().expect("in bounds");
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if src[i..].starts_with("--") {
            i = src[i..].find('\n').map_or(src.len(), |n| i + n);
            continue;
        }
        if is_ident_start(c) {
            let end = src[i..]
                .char_indices()
                .find(|(_, c)| !is_ident_char(*c))
                .map_or(src.len(), |(n, _)| i + n);
            let word = &src[i..end];
            let tok = KEYWORDS
                .iter()
                .find(|(k, _)| *k == word)
                .map(|(_, t)| t.clone())
                .unwrap_or_else(|| Tok::Ident(word.to_string()));
            out.push(Token { tok, start: i, end });
            i = end;
            continue;
        }
        if c.is_ascii_digit() {
            let end = src[i..]
                .char_indices()
                .find(|(_, c)| !c.is_ascii_digit())
                .map_or(src.len(), |(n, _)| i + n);
            let tok = match &src[i..end] {
                "0" => Tok::Zero,
                "1" => Tok::One,
                other => {
                    return Err(ParseError::at(
                        src,
                        i,
                        vec!["`0`".into(), "`1`".into()],
                        format!("number `{other}`"),
                    ))
                }
            };
            out.push(Token { tok, start: i, end });
            i = end;
            continue;
        }
        const SYMBOLS: &[(&str, Tok)] = &[
            ("\\^", Tok::PathLam),
            ("\\/", Tok::Join),
            ("\\", Tok::Backslash),
            ("/\\", Tok::Meet),
            ("[|", Tok::SysOpen),
            ("|]", Tok::SysClose),
            ("->", Tok::Arrow),
            ("=>", Tok::FatArrow),
            ("==", Tok::EqEq),
            ("=", Tok::Eq),
            ("|", Tok::Bar),
            ("~", Tok::Tilde),
            ("@", Tok::At),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            (":", Tok::Colon),
            (".", Tok::Dot),
        ];
        match SYMBOLS.iter().find(|(s, _)| src[i..].starts_with(s)) {
            Some((s, tok)) => {
                out.push(Token {
                    tok: tok.clone(),
                    start: i,
                    end: i + s.len(),
                });
                i += s.len();
            }
            None => {
                return Err(ParseError::at(src, i, vec!["a token".into()], format!("character `{c}`")));
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        start: src.len(),
        end: src.len(),
    });
    Ok(out)
}
