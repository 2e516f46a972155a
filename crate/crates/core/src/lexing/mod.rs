//! Profile-driven lexing of source files into raw identifier tokens.
//!
//! Instead of full per-language grammars, each language is described by a
//! small [`LanguageProfile`]: comment markers, string delimiters and the
//! reserved-word set. The scanner strips comment and string regions and
//! emits every identifier-shaped token that is not a keyword.

mod profiles;

pub use profiles::ProfileSet;

use std::collections::HashSet;
use std::path::Path;

/// A string literal delimiter: open marker, close marker and an optional
/// escape character valid inside the literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringDelim {
    pub open: String,
    pub close: String,
    pub escape: Option<u8>,
}

/// Lexing rules for one language.
#[derive(Debug, Clone)]
pub struct LanguageProfile {
    pub name: String,
    /// Lowercase filename extensions without the leading dot.
    pub extensions: Vec<String>,
    pub line_comments: Vec<String>,
    /// (open, close) marker pairs; nesting is not tracked.
    pub block_comments: Vec<(String, String)>,
    pub string_delims: Vec<StringDelim>,
    pub keywords: HashSet<String>,
}

/// One file on disk, read as raw bytes.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: String,
    pub content: Vec<u8>,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, content: impl Into<Vec<u8>>) -> Self {
        SourceFile {
            path: path.into(),
            content: content.into(),
        }
    }
}

/// Lowercased extension of a path, without the dot.
fn path_extension(path: &str) -> Option<String> {
    Path::new(path)
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
}

impl ProfileSet {
    /// Look up the profile claiming the path's extension.
    ///
    /// Absence is a value: files of unknown languages are skipped, not
    /// failed.
    pub fn detect_language(&self, path: &str) -> Option<&LanguageProfile> {
        path_extension(path).and_then(|ext| self.by_extension(&ext))
    }
}

#[inline]
fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

#[inline]
fn is_ident_continue(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

#[inline]
fn starts_with_at(content: &[u8], pos: usize, marker: &str) -> bool {
    content[pos..].starts_with(marker.as_bytes())
}

/// Scan `file` and emit every identifier token outside comments and
/// strings that is not a keyword of `profile`.
///
/// Tokens keep their original case and multiplicity. Unterminated
/// comments and strings extend to the end of the file. The result is a
/// pure function of (content bytes, profile).
pub fn extract_name_tokens(file: &SourceFile, profile: &LanguageProfile) -> Vec<String> {
    let content = &file.content;
    let mut tokens = Vec::new();
    let mut pos = 0;
    'outer: while pos < content.len() {
        let b = content[pos];
        if is_ident_start(b) {
            let start = pos;
            while pos < content.len() && is_ident_continue(content[pos]) {
                pos += 1;
            }
            // Identifier bytes are ASCII, so this cannot fail.
            let tok = std::str::from_utf8(&content[start..pos]).unwrap();
            if !profile.keywords.contains(tok) {
                tokens.push(tok.to_string());
            }
            continue;
        }
        if b.is_ascii_digit() {
            // A run starting with a digit is never an identifier; consume
            // it whole so "0x1f" does not leak an "x1f" token.
            while pos < content.len() && is_ident_continue(content[pos]) {
                pos += 1;
            }
            continue;
        }
        for (open, close) in &profile.block_comments {
            if starts_with_at(content, pos, open) {
                pos += open.len();
                // First close terminates; nesting is not tracked.
                match find_from(content, pos, close.as_bytes()) {
                    Some(end) => pos = end + close.len(),
                    None => pos = content.len(),
                }
                continue 'outer;
            }
        }
        for marker in &profile.line_comments {
            if starts_with_at(content, pos, marker) {
                pos += marker.len();
                while pos < content.len() && content[pos] != b'\n' {
                    pos += 1;
                }
                continue 'outer;
            }
        }
        for delim in &profile.string_delims {
            if starts_with_at(content, pos, &delim.open) {
                pos += delim.open.len();
                loop {
                    if pos >= content.len() {
                        break;
                    }
                    if let Some(esc) = delim.escape {
                        if content[pos] == esc {
                            pos = (pos + 2).min(content.len());
                            continue;
                        }
                    }
                    if starts_with_at(content, pos, &delim.close) {
                        pos += delim.close.len();
                        break;
                    }
                    pos += 1;
                }
                continue 'outer;
            }
        }
        pos += 1;
    }
    tokens
}

fn find_from(haystack: &[u8], from: usize, needle: &[u8]) -> Option<usize> {
    if needle.is_empty() || from >= haystack.len() {
        return None;
    }
    haystack[from..]
        .windows(needle.len())
        .position(|w| w == needle)
        .map(|i| i + from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c_profile() -> LanguageProfile {
        ProfileSet::builtin().by_name("c").unwrap().clone()
    }

    fn py_profile() -> LanguageProfile {
        ProfileSet::builtin().by_name("python").unwrap().clone()
    }

    fn lex(profile: &LanguageProfile, src: &str) -> Vec<String> {
        extract_name_tokens(&SourceFile::new("t", src.as_bytes().to_vec()), profile)
    }

    #[test]
    fn detects_by_extension() {
        let set = ProfileSet::builtin();
        assert_eq!(set.detect_language("src/main.c").unwrap().name, "c");
        assert!(set.detect_language("README.md").is_none());
        assert_eq!(set.detect_language("Lib/foo.PY").unwrap().name, "python");
        assert!(set.detect_language("Makefile").is_none());
    }

    #[test]
    fn keywords_and_comments_excluded() {
        assert_eq!(lex(&c_profile(), "int fooBar = 0; // baz"), vec!["fooBar"]);
    }

    #[test]
    fn python_names_with_multiplicity() {
        assert_eq!(
            lex(&py_profile(), "def f(xs): return xs"),
            vec!["f", "xs", "xs"]
        );
    }

    #[test]
    fn string_contents_excluded() {
        assert_eq!(lex(&c_profile(), "char *s = \"fooBar\";"), vec!["s"]);
        assert_eq!(lex(&c_profile(), "char *s = \"a \\\" fooBar\";"), vec!["s"]);
    }

    #[test]
    fn block_comment_and_unterminated_regions() {
        assert_eq!(lex(&c_profile(), "a /* b\nc */ d"), vec!["a", "d"]);
        assert_eq!(lex(&c_profile(), "a /* b c d"), vec!["a"]);
        assert_eq!(lex(&c_profile(), "a \"unterminated b c"), vec!["a"]);
    }

    #[test]
    fn python_triple_quotes() {
        assert_eq!(
            lex(&py_profile(), "x = \"\"\"doc stringVal\"\"\"\ny = 1"),
            vec!["x", "y"]
        );
    }

    #[test]
    fn digit_led_runs_are_skipped() {
        assert_eq!(lex(&c_profile(), "a = 0x1fUL + b9"), vec!["a", "b9"]);
    }

    #[test]
    fn deleting_comment_regions_is_equivalent() {
        let p = c_profile();
        let with = "alpha /* beta */ gamma // delta\nepsilon \"zeta\" eta";
        let without = "alpha  gamma \nepsilon  eta";
        assert_eq!(lex(&p, with), lex(&p, without));
    }

    #[test]
    fn invalid_utf8_bytes_are_skipped() {
        let mut bytes = b"foo ".to_vec();
        bytes.push(0xFF);
        bytes.extend_from_slice(b" bar");
        let toks = extract_name_tokens(&SourceFile::new("t", bytes), &c_profile());
        assert_eq!(toks, vec!["foo", "bar"]);
    }
}
