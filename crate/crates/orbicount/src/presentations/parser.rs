//! The textual presentation language.
//!
//! Grammar:
//! ```text
//! presentation := '<' generators '|' relators '>'
//! generators   := [ name (',' name)* ]
//! relators     := [ word (',' word)* ]
//! word         := term+
//! term         := atom [ '^' integer ]          (integer nonzero)
//! atom         := name | '[' word ',' word ']'  ([x,y] = x y x^-1 y^-1)
//! ```
//! Names are identifiers (`[A-Za-z_][A-Za-z0-9_']*`). Whitespace separates
//! adjacent terms.

use super::{default_names, Presentation, Word};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lt,
    Gt,
    Bar,
    Comma,
    Caret,
    LBracket,
    RBracket,
    Name(String),
    Int(i64),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>> {
        let mut lx = Lexer { src: src.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        while let Some(t) = lx.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn next_token(&mut self) -> Result<Option<(usize, Tok)>> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'<' => Tok::Lt,
            b'>' => Tok::Gt,
            b'|' => Tok::Bar,
            b',' => Tok::Comma,
            b'^' => Tok::Caret,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'-' | b'0'..=b'9' => {
                let mut end = self.pos + 1;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                let v: i64 = text
                    .parse()
                    .map_err(|_| Error::parse(start, format!("bad integer `{text}`")))?;
                self.pos = end;
                return Ok(Some((start, Tok::Int(v))));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = self.pos + 1;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric()
                        || self.src[end] == b'_'
                        || self.src[end] == b'\'')
                {
                    end += 1;
                }
                let name = std::str::from_utf8(&self.src[self.pos..end]).unwrap().to_owned();
                self.pos = end;
                return Ok(Some((start, Tok::Name(name))));
            }
            other => {
                return Err(Error::parse(start, format!("unexpected character `{}`", other as char)))
            }
        };
        self.pos += 1;
        Ok(Some((start, tok)))
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end_pos: usize,
    names: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.end_pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        self.idx += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(Error::parse(pos, format!("expected {what}, found {t:?}"))),
            None => Err(Error::parse(pos, format!("expected {what}, found end of input"))),
        }
    }

    fn generator_index(&self, name: &str, pos: usize) -> Result<i32> {
        match self.names.iter().position(|n| n == name) {
            Some(i) => Ok((i + 1) as i32),
            None => Err(Error::parse(pos, format!("unknown generator name `{name}`"))),
        }
    }

    /// word := term+ ; stops before ',', '>', ']'
    fn parse_word(&mut self) -> Result<Vec<i32>> {
        let mut letters = Vec::new();
        let mut any = false;
        loop {
            match self.peek() {
                Some(Tok::Name(_)) | Some(Tok::LBracket) => {
                    letters.extend(self.parse_term()?);
                    any = true;
                }
                _ if any => return Ok(letters),
                _ => {
                    return Err(Error::parse(self.pos(), "expected a word"));
                }
            }
        }
    }

    /// term := atom ('^' int)?
    fn parse_term(&mut self) -> Result<Vec<i32>> {
        let base = self.parse_atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Int(0)) => Err(Error::parse(pos, "zero exponent")),
                Some(Tok::Int(k)) => Ok(power(&base, k)),
                other => Err(Error::parse(pos, format!("expected exponent, found {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    /// atom := name | '[' word ',' word ']'
    fn parse_atom(&mut self) -> Result<Vec<i32>> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Name(n)) => Ok(vec![self.generator_index(&n, pos)?]),
            Some(Tok::LBracket) => {
                let x = self.parse_word()?;
                self.expect(Tok::Comma, "`,` in commutator")?;
                let y = self.parse_word()?;
                self.expect(Tok::RBracket, "`]`")?;
                let mut out = x.clone();
                out.extend_from_slice(&y);
                out.extend(x.iter().rev().map(|&l| -l));
                out.extend(y.iter().rev().map(|&l| -l));
                Ok(out)
            }
            other => Err(Error::parse(pos, format!("expected generator or `[`, found {other:?}"))),
        }
    }
}

fn power(base: &[i32], k: i64) -> Vec<i32> {
    let unit: Vec<i32> = if k >= 0 {
        base.to_vec()
    } else {
        base.iter().rev().map(|&l| -l).collect()
    };
    let mut out = Vec::with_capacity(unit.len() * k.unsigned_abs() as usize);
    for _ in 0..k.unsigned_abs() {
        out.extend_from_slice(&unit);
    }
    out
}

/// Parse `< g1, g2, ... | w1, w2, ... >` into a [`Presentation`].
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, idx: 0, end_pos: text.len(), names: Vec::new() };

    p.expect(Tok::Lt, "`<`")?;
    // generator list (possibly empty)
    while let Some(Tok::Name(_)) = p.peek() {
        let pos = p.pos();
        if let Some(Tok::Name(n)) = p.bump() {
            if p.names.contains(&n) {
                return Err(Error::parse(pos, format!("duplicate generator name `{n}`")));
            }
            p.names.push(n);
        }
        if p.peek() == Some(&Tok::Comma) {
            p.bump();
        } else {
            break;
        }
    }
    p.expect(Tok::Bar, "`|`")?;

    let mut relators = Vec::new();
    if p.peek() != Some(&Tok::Gt) {
        loop {
            relators.push(Word::new(p.parse_word()?));
            if p.peek() == Some(&Tok::Comma) {
                p.bump();
            } else {
                break;
            }
        }
    }
    p.expect(Tok::Gt, "`>`")?;
    if p.idx != p.toks.len() {
        return Err(Error::parse(p.pos(), "trailing input after `>`"));
    }
    Presentation::new(p.names.len(), relators)
}

/// Canonical renderer; `parse_presentation(render_presentation(p))` returns a
/// presentation structurally equal to `p`.
pub fn render_presentation(p: &Presentation) -> String {
    let names = default_names(p);
    let mut out = String::from("< ");
    out.push_str(&names.join(", "));
    out.push_str(" |");
    for (i, w) in p.relators().iter().enumerate() {
        out.push_str(if i == 0 { " " } else { ", " });
        out.push_str(&render_word(w, &names));
    }
    out.push_str(" >");
    out
}

fn render_word(w: &Word, names: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let l = letters[i];
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == l {
            run += 1;
        }
        let name = &names[(l.unsigned_abs() - 1) as usize];
        let exp = if l > 0 { run as i64 } else { -(run as i64) };
        if exp == 1 {
            parts.push(name.clone());
        } else {
            parts.push(format!("{name}^{exp}"));
        }
        i += run;
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{presentation_catalog, Family};
    use proptest::prelude::*;

    #[test]
    fn parses_commutator_shorthand() {
        let p = parse_presentation("< a, b | [a,b] >").unwrap();
        assert_eq!(p.generator_count(), 2);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0].letters(), &[1, 2, -1, -2]);
    }

    #[test]
    fn parses_klein_bottle() {
        let p = parse_presentation("< c1, c2 | c1^2 c2^2 >").unwrap();
        let q = presentation_catalog(Family::Nonorientable, 2).unwrap();
        assert!(p.same_presentation(&q));
    }

    #[test]
    fn free_reduction_drops_trivial_relator() {
        let p = parse_presentation("< a | a a^-1 >").unwrap();
        assert_eq!(p.generator_count(), 1);
        assert_eq!(p.relators().len(), 0);
    }

    #[test]
    fn empty_generator_list_is_trivial_group() {
        let p = parse_presentation("< | >").unwrap();
        assert_eq!(p.generator_count(), 0);
        assert!(p.relators().is_empty());
    }

    #[test]
    fn reports_error_positions() {
        let err = parse_presentation("< a, b | c >").unwrap_err();
        match err {
            crate::Error::Parse { position, message } => {
                assert_eq!(position, 9);
                assert!(message.contains("unknown generator"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_presentation("< a | a^0 >").is_err());
        assert!(parse_presentation("< a | a").is_err());
    }

    #[test]
    fn nested_commutators_and_negative_powers() {
        let p = parse_presentation("< x, y | [x^2, y]^-1 >").unwrap();
        // [x^2,y]^-1 = y x^2 y^-1 x^-2
        assert_eq!(p.relators()[0].letters(), &[2, 1, 1, -2, -1, -1]);
    }

    #[test]
    fn round_trips_catalog() {
        for (fam, size) in [
            (Family::Free, 3),
            (Family::Surface, 2),
            (Family::Nonorientable, 3),
            (Family::FreeAbelian, 3),
        ] {
            let p = presentation_catalog(fam, size).unwrap();
            let q = parse_presentation(&render_presentation(&p)).unwrap();
            assert!(p.same_presentation(&q), "{fam:?} failed to round-trip");
        }
    }

    fn letter(gens: i32) -> impl Strategy<Value = i32> {
        (1..=gens).prop_flat_map(|k| prop_oneof![Just(k), Just(-k)])
    }

    proptest! {
        #[test]
        fn round_trips_random_presentations(
            gens in 1..5usize,
            raw in proptest::collection::vec(proptest::collection::vec(letter(4), 0..12), 0..4)
        ) {
            let relators: Vec<Word> = raw
                .into_iter()
                .map(|mut v| {
                    v.retain(|&l| l.unsigned_abs() as usize <= gens);
                    Word::new(v)
                })
                .collect();
            let p = crate::presentations::Presentation::new(gens, relators).unwrap();
            let q = parse_presentation(&render_presentation(&p)).unwrap();
            prop_assert!(p.same_presentation(&q));
        }
    }
}
