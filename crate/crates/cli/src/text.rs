//! Line-level reading shared by problem and certificate files.

use std::fmt;

use neron_core::{Error as CoreError, Poly, RingRef};

/// A parse failure with a 1-based position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

pub type ParseResult<T> = Result<T, ParseError>;

/// A directive `key value` or `key: value`.
#[derive(Clone, Debug)]
pub struct Line {
    pub no: usize,
    pub key: String,
    pub key_col: usize,
    pub value: String,
    /// Column of the first character of `value`.
    pub value_col: usize,
}

impl Line {
    pub fn err<T>(&self, msg: impl Into<String>) -> ParseResult<T> {
        Err(ParseError { line: self.no, col: self.key_col, msg: msg.into() })
    }

    pub fn err_at<T>(&self, offset: usize, msg: impl Into<String>) -> ParseResult<T> {
        Err(ParseError { line: self.no, col: self.value_col + offset, msg: msg.into() })
    }

    /// The value split at `sep`, each piece with its offset into `value` (in chars).
    pub fn pieces(&self, sep: char) -> Vec<(usize, &str)> {
        split_with_offsets(&self.value, sep)
    }

    /// Whitespace-separated words with offsets.
    pub fn words(&self) -> Vec<(usize, &str)> {
        let mut out = Vec::new();
        let mut start: Option<(usize, usize)> = None;
        for (ci, (bi, c)) in self.value.char_indices().enumerate() {
            if c.is_whitespace() {
                if let Some((sc, sb)) = start.take() {
                    out.push((sc, &self.value[sb..bi]));
                }
            } else if start.is_none() {
                start = Some((ci, bi));
            }
        }
        if let Some((sc, sb)) = start {
            out.push((sc, &self.value[sb..]));
        }
        out
    }

    pub fn usize_list(&self) -> ParseResult<Vec<usize>> {
        self.words().into_iter().map(|(o, w)| parse_num(self, o, w)).collect()
    }

    pub fn single<T: std::str::FromStr>(&self) -> ParseResult<T> {
        let w = self.words();
        match w.as_slice() {
            [(o, s)] => parse_num(self, *o, s),
            [] => self.err_at(0, format!("expected a value after `{}`", self.key)),
            [_, (o, _), ..] => self.err_at(*o, "expected a single value"),
        }
    }

    pub fn poly(&self, ring: &RingRef) -> ParseResult<Poly> {
        parse_poly(self, 0, &self.value, ring)
    }

    /// `;`-separated polynomials; an empty value is the empty list.
    pub fn polys(&self, ring: &RingRef) -> ParseResult<Vec<Poly>> {
        if self.value.trim().is_empty() {
            return Ok(Vec::new());
        }
        self.pieces(';').into_iter().map(|(o, s)| parse_poly(self, o, s, ring)).collect()
    }
}

pub fn parse_num<T: std::str::FromStr>(line: &Line, offset: usize, s: &str) -> ParseResult<T> {
    s.parse().or_else(|_| line.err_at(offset, format!("expected a number, found `{s}`")))
}

pub fn split_with_offsets(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start_b = 0;
    let mut start_c = 0;
    for (ci, (bi, c)) in s.char_indices().enumerate() {
        if c == sep {
            out.push((start_c, &s[start_b..bi]));
            start_b = bi + c.len_utf8();
            start_c = ci + 1;
        }
    }
    out.push((start_c, &s[start_b..]));
    out
}

fn find_word(s: &str, word: &str) -> Option<usize> {
    let chars: Vec<char> = s.chars().collect();
    let w: Vec<char> = word.chars().collect();
    let ident = |c: char| c.is_ascii_alphanumeric() || c == '_';
    (0..chars.len()).find(|&i| {
        chars[i..].starts_with(&w)
            && (i == 0 || !ident(chars[i - 1]))
            && chars.get(i + w.len()).map(|&c| !ident(c)).unwrap_or(true)
    })
}

/// Parses `s`, found at `offset` in the value of `line`.
pub fn parse_poly(line: &Line, offset: usize, s: &str, ring: &RingRef) -> ParseResult<Poly> {
    match Poly::parse(ring, s) {
        Ok(p) => Ok(p),
        Err(CoreError::Syntax { col, msg }) => line.err_at(offset + col - 1, msg),
        Err(CoreError::UnknownVariable(v)) => {
            let at = find_word(s, &v).unwrap_or(0);
            line.err_at(offset + at, format!("unknown variable `{v}`"))
        }
        Err(e) => line.err_at(offset, e.to_string()),
    }
}

/// A `[name args]` block and its directives. Lines before the first header form
/// a section with an empty name.
#[derive(Clone, Debug)]
pub struct Section {
    pub no: usize,
    pub name: String,
    pub args: Vec<String>,
    pub lines: Vec<Line>,
}

impl Section {
    pub fn err<T>(&self, msg: impl Into<String>) -> ParseResult<T> {
        Err(ParseError { line: self.no, col: 1, msg: msg.into() })
    }

    pub fn all<'a>(&'a self, key: &str) -> impl Iterator<Item = &'a Line> + 'a {
        let key = key.to_string();
        self.lines.iter().filter(move |l| l.key == key)
    }

    /// The unique line for `key`, if any.
    pub fn get(&self, key: &str) -> ParseResult<Option<&Line>> {
        let mut it = self.all(key);
        let first = it.next();
        if let Some(dup) = it.next() {
            return dup.err(format!("duplicate `{key}`"));
        }
        Ok(first)
    }

    pub fn need(&self, key: &str) -> ParseResult<&Line> {
        match self.get(key)? {
            Some(l) => Ok(l),
            None => self.err(format!("missing `{key}`{}", self.describe())),
        }
    }

    fn describe(&self) -> String {
        if self.name.is_empty() {
            String::new()
        } else {
            format!(" in [{}]", self.name)
        }
    }

    /// Rejects directives other than `allowed`.
    pub fn only(&self, allowed: &[&str]) -> ParseResult<()> {
        for l in &self.lines {
            if !allowed.contains(&l.key.as_str()) {
                return l.err(format!("unexpected `{}`{}; expected one of {}", l.key, self.describe(), allowed.join(", ")));
            }
        }
        Ok(())
    }
}

/// Splits text into sections, dropping `#` comments and blank lines.
pub fn sections(text: &str) -> ParseResult<Vec<Section>> {
    let mut out = vec![Section { no: 1, name: String::new(), args: Vec::new(), lines: Vec::new() }];
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = content.chars().collect();
        let Some(first) = chars.iter().position(|c| !c.is_whitespace()) else {
            continue;
        };
        if chars[first] == '[' {
            let Some(close) = chars.iter().position(|&c| c == ']') else {
                return Err(ParseError { line: no, col: chars.len() + 1, msg: "expected `]`".into() });
            };
            if let Some(extra) = chars[close + 1..].iter().position(|c| !c.is_whitespace()) {
                return Err(ParseError { line: no, col: close + 2 + extra + 1, msg: "unexpected text after section header".into() });
            }
            let inner: String = chars[first + 1..close].iter().collect();
            let mut words = inner.split_whitespace().map(str::to_string);
            let Some(name) = words.next() else {
                return Err(ParseError { line: no, col: first + 2, msg: "expected a section name".into() });
            };
            out.push(Section { no, name, args: words.collect(), lines: Vec::new() });
            continue;
        }
        let mut k = first;
        while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
            k += 1;
        }
        if k == first {
            return Err(ParseError { line: no, col: first + 1, msg: format!("expected a keyword, found `{}`", chars[first]) });
        }
        let key: String = chars[first..k].iter().collect();
        let mut v = k;
        if v < chars.len() && chars[v] == ':' {
            v += 1;
        } else if v < chars.len() && !chars[v].is_whitespace() {
            return Err(ParseError { line: no, col: v + 1, msg: format!("expected `:` or a space after `{key}`") });
        }
        while v < chars.len() && chars[v].is_whitespace() {
            v += 1;
        }
        let value: String = chars[v..].iter().collect::<String>().trim_end().to_string();
        out.last_mut().unwrap().lines.push(Line { no, key, key_col: first + 1, value, value_col: v + 1 });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_positions() {
        let s = sections("char 0  # comment\n\n  ideal: a;  b\n[stage 1]\nd: x\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].lines[1].key, "ideal");
        assert_eq!(s[0].lines[1].value_col, 10);
        assert_eq!(s[0].lines[1].pieces(';'), vec![(0, "a"), (2, "  b")]);
        assert_eq!(s[1].name, "stage");
        assert_eq!(s[1].args, vec!["1".to_string()]);
        let e = sections("char=0").unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
    }
}
